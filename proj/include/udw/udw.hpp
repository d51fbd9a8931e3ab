#pragma once

#include "udw/config.hpp"
#include "udw/density_matrix.hpp"
#include "udw/entanglement.hpp"
#include "udw/errors.hpp"
#include "udw/field_correlators.hpp"
#include "udw/pipeline.hpp"
#include "udw/quadrature.hpp"
#include "udw/scenario.hpp"
#include "udw/serialize.hpp"
#include "udw/special.hpp"
#include "udw/sweep.hpp"
#include "udw/validation.hpp"
