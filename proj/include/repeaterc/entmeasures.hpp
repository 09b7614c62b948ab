// entmeasures.hpp
// Entropies and two-qubit entanglement measures. All logarithms are base 2,
// so a Bell pair carries exactly one ebit.

#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "repeaterc/channels.hpp"
#include "repeaterc/errors.hpp"
#include "repeaterc/smallmat.hpp"

namespace repeaterc {

// Eigenvalues below this contribute nothing to an entropy (0 log 0 = 0).
inline constexpr double kEntropyFloor = 1e-15;

struct BoundsReport {
  double e_formation = 0.0;
  double coherent_info_1 = 0.0;  // S(rho_1) - S(rho_12)
  double coherent_info_2 = 0.0;  // S(rho_2) - S(rho_12)
  double lower_bound = 0.0;      // min of the two
  std::optional<double> exact_distillable;
};

struct CoherentInfo {
  double first = 0.0;
  double second = 0.0;
};

// Shannon entropy of a spectrum in bits. Values in [-kPsdClampTol, 0) are
// clamped; anything more negative is an invalid state.
inline double spectrum_entropy(std::span<const double> spectrum) {
  double s = 0.0;
  for (double x : spectrum) {
    if (x < -kPsdClampTol) {
      throw std::domain_error("spectrum_entropy: negative eigenvalue " + std::to_string(x));
    }
    if (x > kEntropyFloor) s -= x * std::log2(x);
  }
  return std::max(0.0, s);
}

inline double von_neumann_entropy(const DensityMatrix& rho) {
  return spectrum_entropy(rho.spectrum());
}

inline double binary_entropy(double x) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw std::invalid_argument("binary_entropy: argument must lie in [0, 1], got " +
                                std::to_string(x));
  }
  if (x == 0.0 || x == 1.0) return 0.0;
  return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

// Wootters concurrence. The lambda_i are the singular values of
// M = sqrt(rho) Y conj(sqrt(rho)) with Y = sigma_y (x) sigma_y, since
// M M^dagger = sqrt(rho) rho~ sqrt(rho). They are read off as the positive
// eigenvalues of the Hermitian embedding [[0, M], [M^dagger, 0]], which keeps
// small lambda_i accurate to roundoff instead of sqrt(roundoff).
inline double concurrence(const DensityMatrix& rho) {
  if (rho.dim() != 4) throw std::invalid_argument("concurrence: expected a two-qubit state");
  const auto eig = hermitian_eigen(rho.matrix());
  if (eig.eigenvalues.front() < -kPsdClampTol) {
    throw NumericalError("concurrence: negative eigenvalue " +
                         std::to_string(eig.eigenvalues.front()));
  }
  // Eigenvalues at the entropy floor are roundoff on a rank-deficient state.
  const ComplexMatrix root =
      apply_spectral(eig, [](double x) { return x > kEntropyFloor ? std::sqrt(x) : 0.0; });
  const ComplexMatrix yy = tensor(pauli::y(), pauli::y());
  const ComplexMatrix m = root * yy * root.conjugate();

  ComplexMatrix embed(8, 8);
  for (std::size_t r = 0; r < 4; ++r)
    for (std::size_t c = 0; c < 4; ++c) {
      embed(r, c + 4) = m(r, c);
      embed(c + 4, r) = std::conj(m(r, c));
    }
  const std::vector<double> spectrum = hermitian_eigenvalues(embed);
  // Ascending; the top four are the singular values of M.
  const double c = spectrum[7] - spectrum[6] - spectrum[5] - spectrum[4];
  return std::clamp(c, 0.0, 1.0);
}

inline double entanglement_of_formation_from_concurrence(double c) {
  const double x = 0.5 * (1.0 + std::sqrt(std::max(0.0, 1.0 - c * c)));
  return binary_entropy(std::clamp(x, 0.0, 1.0));
}

inline double entanglement_of_formation(const DensityMatrix& rho) {
  return entanglement_of_formation_from_concurrence(concurrence(rho));
}

inline CoherentInfo coherent_info_pair(const DensityMatrix& rho) {
  if (rho.dim() != 4) throw std::invalid_argument("coherent_info_pair: expected a two-qubit state");
  const double joint = von_neumann_entropy(rho);
  return {von_neumann_entropy(rho.reduced(Subsystem::First)) - joint,
          von_neumann_entropy(rho.reduced(Subsystem::Second)) - joint};
}

// Asymptotic distillation yield of a pure two-qubit state: the entropy of
// either reduced state.
inline double distill_pure(std::span<const cplx, 4> state) {
  double norm2 = 0.0;
  for (const auto& z : state) norm2 += std::norm(z);
  if (std::abs(norm2 - 1.0) > 1e-12) {
    throw std::invalid_argument("distill_pure: state norm^2 is " + std::to_string(norm2));
  }
  const ComplexMatrix rho = ComplexMatrix::outer(std::span<const cplx>(state.data(), 4));
  return von_neumann_entropy(DensityMatrix(partial_trace(rho, Subsystem::First)));
}

// Distillable entanglement of lambda|B1><B1| + (1-lambda)|B2><B2| for two
// orthogonal Bell states.
inline double distill_two_bell_mixture(double lambda) {
  if (!(lambda >= 0.5 && lambda <= 1.0)) {
    throw std::invalid_argument("distill_two_bell_mixture: lambda must lie in [1/2, 1], got " +
                                std::to_string(lambda));
  }
  return std::max(0.0, 1.0 - binary_entropy(lambda));
}

inline BoundsReport bounds_report(const DensityMatrix& rho,
                                  std::optional<double> exact_distillable = std::nullopt) {
  const CoherentInfo ci = coherent_info_pair(rho);
  BoundsReport r;
  r.e_formation = entanglement_of_formation(rho);
  r.coherent_info_1 = ci.first;
  r.coherent_info_2 = ci.second;
  r.lower_bound = std::min(ci.first, ci.second);
  r.exact_distillable = exact_distillable;
  return r;
}

}  // namespace repeaterc
