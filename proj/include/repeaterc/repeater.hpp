// repeater.hpp
// Resource accounting for a channel split into m equal sections with a
// repeater at every junction. Everything is expressed per initial source
// pair, so the absolute number of sources never appears.
//
// Two regimes:
//  - Exact: the distillable entanglement of the delivered state is known
//    (watched amplitude damping, flip channels). eta(m) = K(m) / K(1).
//  - ConjectureBased: the sectioned channel is credited with the coherent
//    information lower bound, the undivided channel with the entanglement of
//    formation upper bound. eta(m) = lower(rho(G/m)) / (m * E_F(rho(G))).

#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "repeaterc/channels.hpp"
#include "repeaterc/entmeasures.hpp"
#include "repeaterc/errors.hpp"

namespace repeaterc {

enum class BoundMode { Exact, ConjectureBased };

inline constexpr BoundMode bound_mode_for(ChannelKind kind) {
  return (kind == ChannelKind::WatchedAmplitudeDamping || is_flip_channel(kind))
             ? BoundMode::Exact
             : BoundMode::ConjectureBased;
}

inline constexpr std::size_t default_m_max(BoundMode mode) {
  return mode == BoundMode::Exact ? 20 : 60;
}

// Lower bounds at or below this are treated as "no entanglement".
inline constexpr double kEntangledThreshold = 1e-12;

struct Scenario {
  ChannelKind kind;
  BellInput input;
  double gamma;  // full-channel per-qubit length parameter
  BoundMode mode;

  static Scenario make(ChannelKind kind, BellInput input, double gamma) {
    Scenario s{kind, input, gamma, bound_mode_for(kind)};
    s.validate();
    return s;
  }

  void validate() const {
    require_gamma(gamma);
    if (mode != bound_mode_for(kind)) {
      throw std::invalid_argument("Scenario: channel '" + std::string(to_token(kind)) +
                                  "' does not support the requested bound mode");
    }
  }
};

struct EtaPoint {
  std::size_t m = 1;
  double eta = 0.0;
  // Per-pair distillable value of a section: the exact value in Exact mode,
  // the coherent-information lower bound otherwise.
  double lower_bound_value = 0.0;
  bool entangled = false;
};

struct EtaScan {
  Scenario scenario;
  std::vector<EtaPoint> points;  // m = 1..m_max
};

inline void require_sections(std::size_t m, const char* what) {
  if (m < 1) throw std::invalid_argument(std::string(what) + ": section count must be >= 1");
}

// Per-pair distillable entanglement delivered by one section of length
// gamma/m, including the survival probability for the watched channel.
inline double section_value(const Scenario& s, std::size_t m) {
  s.validate();
  require_sections(m, "section_value");
  const double g = s.gamma / static_cast<double>(m);
  if (s.kind == ChannelKind::WatchedAmplitudeDamping) {
    const WatchedOutcome w = watched_conditional(s.input, g);
    return w.survival_probability * distill_pure(w.conditional_state);
  }
  if (is_flip_channel(s.kind)) {
    return distill_two_bell_mixture(bell_mixture_lambda(s.kind, g));
  }
  return bounds_report(propagate_bell(s.kind, s.input, g)).lower_bound;
}

// End-to-end ebits per initial source pair with m sections.
inline double yield_per_source(const Scenario& s, std::size_t m) {
  const double v = section_value(s, m);
  return std::max(0.0, v) / static_cast<double>(m);
}

inline EtaPoint eta(const Scenario& s, std::size_t m) {
  EtaPoint pt;
  pt.m = m;
  pt.lower_bound_value = section_value(s, m);
  pt.entangled = pt.lower_bound_value > kEntangledThreshold;

  if (s.mode == BoundMode::Exact) {
    const double reference = yield_per_source(s, 1);
    if (reference <= 0.0) {
      throw SeparableReferenceError("eta: the undivided channel delivers no entanglement");
    }
    pt.eta = yield_per_source(s, m) / reference;
    return pt;
  }

  const double ef = entanglement_of_formation(propagate_bell(s.kind, s.input, s.gamma));
  if (ef <= 0.0) {
    throw SeparableReferenceError(
        "eta: entanglement of formation of the undivided channel is zero");
  }
  pt.eta = pt.entangled ? pt.lower_bound_value / (static_cast<double>(m) * ef) : 0.0;
  return pt;
}

inline EtaScan scan(const Scenario& s, std::size_t m_max) {
  require_sections(m_max, "scan");
  EtaScan out{s, {}};
  out.points.reserve(m_max);
  for (std::size_t m = 1; m <= m_max; ++m) out.points.push_back(eta(s, m));
  return out;
}

struct OptimalSections {
  std::size_t m = 1;
  double eta = 0.0;
};

// argmax of eta over [1, m_max]; ties go to the smaller m.
inline OptimalSections optimal_sections(const Scenario& s, std::size_t m_max) {
  const EtaScan sc = scan(s, m_max);
  OptimalSections best{sc.points.front().m, sc.points.front().eta};
  for (const auto& pt : sc.points)
    if (pt.eta > best.eta) best = {pt.m, pt.eta};
  return best;
}

struct Thresholds {
  std::optional<std::size_t> m_entangled;  // first m with a positive bound
  std::optional<std::size_t> m_eta_gt_1;   // first m with eta > 1
};

inline Thresholds threshold_sections(const Scenario& s, std::size_t m_max) {
  if (s.mode != BoundMode::ConjectureBased) {
    throw std::invalid_argument("threshold_sections: requires a conjecture-based channel");
  }
  Thresholds t;
  for (const auto& pt : scan(s, m_max).points) {
    if (!t.m_entangled && pt.entangled) t.m_entangled = pt.m;
    if (!t.m_eta_gt_1 && pt.eta > 1.0) t.m_eta_gt_1 = pt.m;
  }
  return t;
}

struct Bracket {
  double lo = 0.0;
  double hi = 10.0;
};

inline constexpr int kBisectionMaxIter = 200;
inline constexpr double kBisectionTol = 1e-9;

// Length at which m_a and m_b sections deliver the same yield.
inline double crossover_gamma(ChannelKind kind, BellInput input, std::size_t m_a,
                              std::size_t m_b, Bracket bracket) {
  if (bound_mode_for(kind) != BoundMode::Exact) {
    throw std::invalid_argument("crossover_gamma: requires an exact channel");
  }
  require_sections(m_a, "crossover_gamma");
  require_sections(m_b, "crossover_gamma");
  require_gamma(bracket.lo);
  if (!(bracket.hi > bracket.lo) || !std::isfinite(bracket.hi)) {
    throw std::invalid_argument("crossover_gamma: bracket must satisfy lo < hi");
  }
  auto diff = [&](double g) {
    const Scenario s = Scenario::make(kind, input, g);
    return yield_per_source(s, m_a) - yield_per_source(s, m_b);
  };
  double lo = bracket.lo;
  double hi = bracket.hi;
  double f_lo = diff(lo);
  const double f_hi = diff(hi);
  if (f_lo == 0.0) return lo;
  if (f_hi == 0.0) return hi;
  if ((f_lo > 0.0) == (f_hi > 0.0)) {
    throw std::invalid_argument("crossover_gamma: yield difference does not change sign on [" +
                                std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  for (int it = 0; it < kBisectionMaxIter && hi - lo > kBisectionTol; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = diff(mid);
    if (f_mid == 0.0) return mid;
    if ((f_mid > 0.0) == (f_lo > 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Evenly spaced grid of `steps` points on [lo, hi].
inline std::vector<double> linear_grid(double lo, double hi, std::size_t steps) {
  if (steps == 0) throw std::invalid_argument("linear_grid: steps must be >= 1");
  if (!std::isfinite(lo) || !std::isfinite(hi) || hi < lo) {
    throw std::invalid_argument("linear_grid: require finite lo <= hi");
  }
  if (steps == 1) return {lo};
  std::vector<double> g(steps);
  const double h = (hi - lo) / static_cast<double>(steps - 1);
  for (std::size_t i = 0; i < steps; ++i) g[i] = lo + h * static_cast<double>(i);
  g.back() = hi;
  return g;
}

struct YieldTable {
  std::vector<std::size_t> sections;
  std::vector<double> gammas;
  std::vector<std::vector<double>> values;  // values[gamma index][section index]
};

inline void require_ascending(const std::vector<double>& grid) {
  if (grid.empty()) throw std::invalid_argument("gamma grid is empty");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1])) throw std::invalid_argument("gamma grid is not ascending");
}

// K/N for each (gamma, m) cell.
inline YieldTable scan_yield(ChannelKind kind, BellInput input, std::vector<std::size_t> sections,
                             std::vector<double> gamma_grid) {
  if (sections.empty()) throw std::invalid_argument("scan_yield: no section counts given");
  for (auto m : sections) require_sections(m, "scan_yield");
  require_ascending(gamma_grid);
  YieldTable t{std::move(sections), std::move(gamma_grid), {}};
  t.values.reserve(t.gammas.size());
  for (double g : t.gammas) {
    const Scenario s = Scenario::make(kind, input, g);
    std::vector<double> row;
    row.reserve(t.sections.size());
    for (auto m : t.sections) row.push_back(yield_per_source(s, m));
    t.values.push_back(std::move(row));
  }
  return t;
}

// eta over a (gamma, m) grid; one EtaScan per gamma.
inline std::vector<EtaScan> scan_eta_grid(ChannelKind kind, BellInput input,
                                          const std::vector<double>& gamma_grid,
                                          std::size_t m_max) {
  require_ascending(gamma_grid);
  std::vector<EtaScan> out;
  out.reserve(gamma_grid.size());
  for (double g : gamma_grid) out.push_back(scan(Scenario::make(kind, input, g), m_max));
  return out;
}

}  // namespace repeaterc
