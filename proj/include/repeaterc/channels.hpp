// channels.hpp
// Single-qubit noise channels, their length parameterization, and the
// two-qubit states produced when each half of a Bell pair passes through an
// independent copy of the channel.

#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "repeaterc/errors.hpp"
#include "repeaterc/smallmat.hpp"

namespace repeaterc {

enum class ChannelKind {
  AmplitudeDamping,
  WatchedAmplitudeDamping,
  BitFlip,
  PhaseFlip,
  BitPhaseFlip,
  PhaseDamping,
  Depolarizing,
};

inline constexpr std::array<ChannelKind, 7> kAllChannelKinds = {
    ChannelKind::AmplitudeDamping, ChannelKind::WatchedAmplitudeDamping,
    ChannelKind::BitFlip,          ChannelKind::PhaseFlip,
    ChannelKind::BitPhaseFlip,     ChannelKind::PhaseDamping,
    ChannelKind::Depolarizing,
};

enum class BellInput { PsiPlus, PhiPlus };

inline constexpr std::string_view to_token(ChannelKind kind) {
  switch (kind) {
    case ChannelKind::AmplitudeDamping: return "amplitude-damping";
    case ChannelKind::WatchedAmplitudeDamping: return "watched-amplitude-damping";
    case ChannelKind::BitFlip: return "bit-flip";
    case ChannelKind::PhaseFlip: return "phase-flip";
    case ChannelKind::BitPhaseFlip: return "bit-phase-flip";
    case ChannelKind::PhaseDamping: return "phase-damping";
    case ChannelKind::Depolarizing: return "depolarizing";
  }
  return "";
}

inline constexpr std::string_view to_token(BellInput bell) {
  return bell == BellInput::PsiPlus ? "psi-plus" : "phi-plus";
}

inline ChannelKind parse_channel_kind(std::string_view token) {
  for (auto kind : kAllChannelKinds)
    if (to_token(kind) == token) return kind;
  throw std::invalid_argument("unknown channel '" + std::string(token) + "'");
}

inline BellInput parse_bell_input(std::string_view token) {
  if (token == "psi-plus") return BellInput::PsiPlus;
  if (token == "phi-plus") return BellInput::PhiPlus;
  throw std::invalid_argument("unknown Bell input '" + std::string(token) + "'");
}

inline constexpr bool is_flip_channel(ChannelKind kind) {
  return kind == ChannelKind::BitFlip || kind == ChannelKind::PhaseFlip ||
         kind == ChannelKind::BitPhaseFlip;
}

inline constexpr bool is_trace_preserving(ChannelKind kind) {
  return kind != ChannelKind::WatchedAmplitudeDamping;
}

using TwoQubitState = std::array<cplx, 4>;

// Basis order |00>, |01>, |10>, |11>.
inline TwoQubitState bell_vector(BellInput bell) {
  const double a = 1.0 / std::sqrt(2.0);
  if (bell == BellInput::PsiPlus) return {0.0, a, a, 0.0};
  return {a, 0.0, 0.0, a};
}

namespace pauli {
inline ComplexMatrix x() { return {{0.0, 1.0}, {1.0, 0.0}}; }
inline ComplexMatrix y() { return {{0.0, cplx{0.0, -1.0}}, {cplx{0.0, 1.0}, 0.0}}; }
inline ComplexMatrix z() { return {{1.0, 0.0}, {0.0, -1.0}}; }
}  // namespace pauli

// A validated one- or two-qubit density matrix: Hermitian, unit trace, and
// no eigenvalue below -kPsdClampTol.
class DensityMatrix {
 public:
  explicit DensityMatrix(ComplexMatrix m) : mat_(std::move(m)) {
    if (!mat_.is_square() || (mat_.rows() != 2 && mat_.rows() != 4)) {
      throw std::invalid_argument("DensityMatrix: expected 2x2 or 4x4, got " + mat_.shape());
    }
    if (mat_.hermitian_deviation() > kHermitianTol) {
      throw std::invalid_argument("DensityMatrix: not Hermitian");
    }
    const cplx tr = mat_.trace();
    if (std::abs(tr - 1.0) > kHermitianTol) {
      throw std::invalid_argument("DensityMatrix: trace " + std::to_string(tr.real()) + " != 1");
    }
    spectrum_ = hermitian_eigenvalues(mat_);
    if (spectrum_.front() < -kPsdClampTol) {
      throw std::invalid_argument("DensityMatrix: negative eigenvalue " +
                                  std::to_string(spectrum_.front()));
    }
  }

  static DensityMatrix pure(std::span<const cplx> amplitudes) {
    return DensityMatrix(ComplexMatrix::outer(amplitudes));
  }

  const ComplexMatrix& matrix() const noexcept { return mat_; }
  std::size_t dim() const noexcept { return mat_.rows(); }
  // Ascending eigenvalues, computed once at validation.
  const std::vector<double>& spectrum() const noexcept { return spectrum_; }

  DensityMatrix reduced(Subsystem keep) const {
    if (dim() != 4) throw std::invalid_argument("DensityMatrix::reduced: not a two-qubit state");
    return DensityMatrix(partial_trace(mat_, keep));
  }

 private:
  ComplexMatrix mat_;
  std::vector<double> spectrum_;
};

// Conditional (no-jump) outcome of the watched amplitude damping channel.
struct WatchedOutcome {
  TwoQubitState conditional_state;
  double survival_probability;
};

inline void require_gamma(double gamma) {
  if (!std::isfinite(gamma) || gamma < 0.0) {
    throw std::invalid_argument("gamma must be finite and >= 0, got " + std::to_string(gamma));
  }
}

// Channel strength for a per-qubit length parameter gamma. Flip channels
// return the per-qubit flip probability q, chosen so that the pair mixture
// weight is (1 + e^{-gamma}) / 2.
inline double param_from_gamma(ChannelKind kind, double gamma) {
  require_gamma(gamma);
  switch (kind) {
    case ChannelKind::AmplitudeDamping:
    case ChannelKind::WatchedAmplitudeDamping: return -std::expm1(-2.0 * gamma);
    case ChannelKind::PhaseDamping: return -std::expm1(-gamma);
    case ChannelKind::Depolarizing: return 0.75 * -std::expm1(-gamma);
    case ChannelKind::BitFlip:
    case ChannelKind::PhaseFlip:
    case ChannelKind::BitPhaseFlip: return 0.5 * -std::expm1(-0.5 * gamma);
  }
  throw std::invalid_argument("param_from_gamma: unknown channel");
}

// Kraus operators for strength p; p == 0 gives {I} for every kind. The
// watched channel yields the single no-jump operator diag(1, sqrt(1-p)).
inline std::vector<ComplexMatrix> kraus_ops(ChannelKind kind, double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument("kraus_ops: p must lie in [0, 1], got " + std::to_string(p));
  }
  const ComplexMatrix id = ComplexMatrix::identity(2);
  if (p == 0.0) return {id};
  const double keep = std::sqrt(1.0 - p);
  const double flip = std::sqrt(p);
  switch (kind) {
    case ChannelKind::AmplitudeDamping:
      return {ComplexMatrix{{1.0, 0.0}, {0.0, keep}}, ComplexMatrix{{0.0, flip}, {0.0, 0.0}}};
    case ChannelKind::WatchedAmplitudeDamping: return {ComplexMatrix{{1.0, 0.0}, {0.0, keep}}};
    case ChannelKind::PhaseDamping:
      return {keep * id, ComplexMatrix::diagonal({flip, 0.0}), ComplexMatrix::diagonal({0.0, flip})};
    case ChannelKind::Depolarizing: {
      const double w = std::sqrt(p / 3.0);
      return {keep * id, w * pauli::x(), w * pauli::y(), w * pauli::z()};
    }
    case ChannelKind::BitFlip: return {keep * id, flip * pauli::x()};
    case ChannelKind::PhaseFlip: return {keep * id, flip * pauli::z()};
    case ChannelKind::BitPhaseFlip: return {keep * id, flip * pauli::y()};
  }
  throw std::invalid_argument("kraus_ops: unknown channel");
}

// rho -> sum_i K_i rho K_i^dagger with the same operator set on each qubit.
inline ComplexMatrix apply_local_channel(const ComplexMatrix& rho,
                                         const std::vector<ComplexMatrix>& ops) {
  ComplexMatrix out(rho.rows(), rho.cols());
  for (const auto& a : ops)
    for (const auto& b : ops) {
      const ComplexMatrix k = tensor(a, b);
      out += k * rho * k.adjoint();
    }
  return out;
}

inline DensityMatrix propagate_bell(ChannelKind kind, BellInput input, double gamma_per_qubit) {
  if (!is_trace_preserving(kind)) {
    throw std::invalid_argument(
        "propagate_bell: the watched channel is conditional; use watched_conditional");
  }
  const double p = param_from_gamma(kind, gamma_per_qubit);
  const auto bell = bell_vector(input);
  const ComplexMatrix rho = apply_local_channel(ComplexMatrix::outer(bell), kraus_ops(kind, p));
  try {
    return DensityMatrix(rho);
  } catch (const std::invalid_argument& e) {
    throw NumericalError(std::string("propagate_bell: ") + e.what());
  }
}

inline WatchedOutcome watched_conditional(BellInput input, double gamma_per_qubit) {
  const double p = param_from_gamma(ChannelKind::WatchedAmplitudeDamping, gamma_per_qubit);
  const ComplexMatrix m = kraus_ops(ChannelKind::WatchedAmplitudeDamping, p).front();
  const auto bell = bell_vector(input);
  const auto evolved = tensor(m, m).apply(bell);

  double norm2 = 0.0;
  for (const auto& z : evolved) norm2 += std::norm(z);
  WatchedOutcome out{};
  out.survival_probability = norm2;
  const double scale = 1.0 / std::sqrt(norm2);
  for (std::size_t i = 0; i < 4; ++i) out.conditional_state[i] = evolved[i] * scale;
  return out;
}

// Weight of the input Bell state in the two-Bell mixture produced by a flip
// channel at per-qubit length gamma.
inline double bell_mixture_lambda(ChannelKind kind, double gamma) {
  if (!is_flip_channel(kind)) {
    throw std::invalid_argument("bell_mixture_lambda: '" + std::string(to_token(kind)) +
                                "' is not a flip channel");
  }
  require_gamma(gamma);
  return 0.5 * (1.0 + std::exp(-gamma));
}

// The Bell state reached from `input` by one flip on the first qubit.
inline TwoQubitState flip_partner(ChannelKind kind, BellInput input) {
  const double a = 1.0 / std::sqrt(2.0);
  const cplx i{0.0, 1.0};
  const bool psi = input == BellInput::PsiPlus;
  switch (kind) {
    case ChannelKind::BitFlip:  // psi+ <-> phi+
      return psi ? TwoQubitState{a, 0.0, 0.0, a} : TwoQubitState{0.0, a, a, 0.0};
    case ChannelKind::PhaseFlip:  // psi+ -> psi-, phi+ -> phi-
      return psi ? TwoQubitState{0.0, a, -a, 0.0} : TwoQubitState{a, 0.0, 0.0, -a};
    case ChannelKind::BitPhaseFlip:  // Y (x) I, global phase dropped
      return psi ? TwoQubitState{-i * a, 0.0, 0.0, i * a} : TwoQubitState{0.0, -i * a, i * a, 0.0};
    default: break;
  }
  throw std::invalid_argument("flip_partner: not a flip channel");
}

// lambda |bell><bell| + (1 - lambda) |partner><partner|
inline DensityMatrix two_bell_mixture(ChannelKind kind, BellInput input, double lambda) {
  const auto bell = bell_vector(input);
  const auto partner = flip_partner(kind, input);
  return DensityMatrix(lambda * ComplexMatrix::outer(bell) +
                       (1.0 - lambda) * ComplexMatrix::outer(partner));
}

}  // namespace repeaterc
