#pragma once

// Domain types for a three-detector harvesting scenario.
//
// Units: the switching strength eta is the unit of time and length, so every
// position, switching time and smearing width is given in units of eta and
// every gap in units of 1/eta. Couplings are dimensionless.

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <string>
#include <string_view>

#include "udw/errors.hpp"

namespace udw {

enum class Label { A = 0, B = 1, C = 2 };

inline char to_char(Label l) { return static_cast<char>('A' + static_cast<int>(l)); }

inline Label label_from_char(char c) {
  switch (c) {
    case 'A': return Label::A;
    case 'B': return Label::B;
    case 'C': return Label::C;
    default: throw ValidationError(std::string("unknown detector label '") + c + "'");
  }
}

// How the Gaussian profile exp(-x^2 / 2 sigma^2) is scaled.
//   peak: F(x_D) = 1, Fourier amplitude sigma^3 at k = 0.
//   unit: integral of F over space is 1, Fourier amplitude (2 pi)^{-3/2}.
enum class SmearingNorm { peak, unit };

inline std::string_view to_string(SmearingNorm n) { return n == SmearingNorm::peak ? "peak" : "unit"; }

inline SmearingNorm smearing_norm_from_string(std::string_view s) {
  if (s == "peak") return SmearingNorm::peak;
  if (s == "unit") return SmearingNorm::unit;
  throw ValidationError("smearing_norm must be 'peak' or 'unit', got '" + std::string(s) + "'");
}

using Vec3 = std::array<double, 3>;

inline double distance(const Vec3& a, const Vec3& b) {
  return std::hypot(a[0] - b[0], a[1] - b[1], a[2] - b[2]);
}

struct DetectorSpec {
  Label label = Label::A;
  Vec3 position{0.0, 0.0, 0.0};
  double switch_time = 0.0;
  double gap = 1.0;
  double coupling = 0.0;
  double switching_strength = 1.0;  // eta; always 1
  double smearing_width = 1.0;
  SmearingNorm smearing_norm = SmearingNorm::unit;
};

struct Tolerances {
  double quadrature = 1e-10;  // relative error target of the radial integrals
  double eigen = 1e-12;       // Hermiticity tolerance on assembled states
};

// Three detectors in canonical switching order (slot 0 switches first).
//
// `detectors[i].label` keeps the label the user gave the detector, and
// `source_index[i]` is its position in the raw input to validate_and_order.
struct ScenarioConfig {
  std::array<DetectorSpec, 3> detectors;
  std::array<int, 3> source_index{0, 1, 2};
  Tolerances tolerances;

  const DetectorSpec& operator[](int slot) const { return detectors[static_cast<std::size_t>(slot)]; }
  Label user_label(int slot) const { return detectors[static_cast<std::size_t>(slot)].label; }
};

namespace detail {

inline void require_finite(double v, Label l, const char* field) {
  if (!std::isfinite(v)) {
    throw ValidationError(std::string("detector ") + to_char(l) + ": " + field + " must be finite");
  }
}

}  // namespace detail

inline void validate_detector(const DetectorSpec& d) {
  for (int i = 0; i < 3; ++i) detail::require_finite(d.position[static_cast<std::size_t>(i)], d.label, "position");
  detail::require_finite(d.switch_time, d.label, "switch_time");
  detail::require_finite(d.gap, d.label, "gap");
  detail::require_finite(d.coupling, d.label, "coupling");
  detail::require_finite(d.smearing_width, d.label, "smearing_width");
  detail::require_finite(d.switching_strength, d.label, "switching_strength");
  const std::string who = std::string("detector ") + to_char(d.label) + ": ";
  if (d.smearing_width <= 0.0) throw ValidationError(who + "smearing_width must be positive");
  if (d.coupling < 0.0) throw ValidationError(who + "coupling must be non-negative");
  if (d.switching_strength != 1.0) {
    throw ValidationError(who + "switching_strength is the unit of time and must equal 1");
  }
}

// Sorts by switching time (stable, so ties keep the input order) after
// validating every field.
inline ScenarioConfig validate_and_order(const std::array<DetectorSpec, 3>& raw, Tolerances tol = {}) {
  for (const auto& d : raw) validate_detector(d);
  for (int i = 0; i < 3; ++i) {
    for (int j = i + 1; j < 3; ++j) {
      if (raw[static_cast<std::size_t>(i)].label == raw[static_cast<std::size_t>(j)].label) {
        throw ValidationError(std::string("duplicate detector label '") + to_char(raw[static_cast<std::size_t>(i)].label) + "'");
      }
    }
  }
  if (!(tol.quadrature > 0.0) || !(tol.eigen > 0.0)) {
    throw ValidationError("tolerances must be positive");
  }

  std::array<int, 3> order{0, 1, 2};
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return raw[static_cast<std::size_t>(a)].switch_time < raw[static_cast<std::size_t>(b)].switch_time;
  });

  ScenarioConfig cfg;
  for (std::size_t i = 0; i < 3; ++i) cfg.detectors[i] = raw[static_cast<std::size_t>(order[i])];
  cfg.source_index = order;
  cfg.tolerances = tol;
  return cfg;
}

inline ScenarioConfig validate_and_order(const ScenarioConfig& cfg) {
  ScenarioConfig out = validate_and_order(cfg.detectors, cfg.tolerances);
  for (auto& idx : out.source_index) idx = cfg.source_index[static_cast<std::size_t>(idx)];
  return out;
}

// Convenience: three detectors labelled A, B, C in argument order.
inline std::array<DetectorSpec, 3> make_detectors(const DetectorSpec& a, const DetectorSpec& b,
                                                  const DetectorSpec& c) {
  std::array<DetectorSpec, 3> out{a, b, c};
  out[0].label = Label::A;
  out[1].label = Label::B;
  out[2].label = Label::C;
  return out;
}

}  // namespace udw
