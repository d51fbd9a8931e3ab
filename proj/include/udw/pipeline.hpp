#pragma once

#include <array>

#include "udw/density_matrix.hpp"
#include "udw/entanglement.hpp"
#include "udw/field_correlators.hpp"
#include "udw/scenario.hpp"

namespace udw {

struct Analysis {
  CorrelatorSet correlators;
  DensityMatrix8 rho;
  EntanglementReport report;  // canonical slots
};

struct PipelineOptions {
  CorrelatorOptions correlators;
  AssemblyOptions assembly;
};

inline Analysis analyze(const ScenarioConfig& cfg, const PipelineOptions& opt = {}) {
  Analysis a;
  a.correlators = correlators_for(cfg, opt.correlators);
  a.rho = assemble_rho_sum(cfg, a.correlators, opt.assembly);
  a.report = pi_tangle(a.rho);
  return a;
}

// Slot of the detector the user labelled `l`.
inline int slot_of(const ScenarioConfig& cfg, Label l) {
  for (int i = 0; i < 3; ++i)
    if (cfg.user_label(i) == l) return i;
  throw ValidationError(std::string("no detector labelled ") + to_char(l));
}

// Re-index a canonical-slot report by the user's labels A, B, C.
inline EntanglementReport to_user_order(const EntanglementReport& r, const ScenarioConfig& cfg) {
  EntanglementReport out;
  std::array<int, 3> slot{};
  for (int u = 0; u < 3; ++u) slot[static_cast<std::size_t>(u)] = slot_of(cfg, static_cast<Label>(u));
  for (std::size_t u = 0; u < 3; ++u) {
    out.one_vs_rest[u] = r.one_vs_rest[static_cast<std::size_t>(slot[u])];
    out.pi_components[u] = r.pi_components[static_cast<std::size_t>(slot[u])];
  }
  for (std::size_t p = 0; p < 3; ++p) {
    out.pairwise[p] = r.pairwise_of(slot[static_cast<std::size_t>(kPairs[p][0])], slot[static_cast<std::size_t>(kPairs[p][1])]);
  }
  out.pi_tangle = r.pi_tangle;
  out.pi_raw = r.pi_raw;
  return out;
}

// Re-index correlators by user labels. Theta is antisymmetric, so a pair
// whose switching order disagrees with its alphabetical order changes sign.
inline CorrelatorSet to_user_order(const CorrelatorSet& c, const ScenarioConfig& cfg) {
  CorrelatorSet out = c;
  std::array<int, 3> slot{};
  for (int u = 0; u < 3; ++u) slot[static_cast<std::size_t>(u)] = slot_of(cfg, static_cast<Label>(u));
  for (std::size_t u = 0; u < 3; ++u) out.log_f[u] = c.log_f[static_cast<std::size_t>(slot[u])];
  for (std::size_t p = 0; p < 3; ++p) {
    const int i = slot[static_cast<std::size_t>(kPairs[p][0])], j = slot[static_cast<std::size_t>(kPairs[p][1])];
    out.theta[p] = c.theta_of(i, j);
    out.omega[p] = c.omega_of(i, j);
  }
  return out;
}

}  // namespace udw
