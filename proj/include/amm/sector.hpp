// SPDX-License-Identifier: Apache-2.0
//
// Accretivity and sector certification, and seeded sectorial ensembles.
#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <sstream>
#include <string>

#include "amm/linalg.hpp"
#include "amm/random.hpp"

namespace amm {

struct SectorCertificate {
  double alpha = 0.0;  // half-angle, radians
  double m = 0.0;      // lambda_min(Re A)
  double M = 0.0;      // lambda_max(Re A)
};

struct EnsembleSpec {
  std::size_t dim = 1;
  double alpha_max = 0.0;
  double m = 1.0;
  double M = 1.0;
  std::size_t count = 1;
  std::uint64_t seed = 0;

  void validate() const {
    std::ostringstream os;
    if (dim < 1) os << "dim must be >= 1; ";
    if (!(alpha_max >= 0.0 && alpha_max < std::numbers::pi / 2)) os << "alpha_max must lie in [0, pi/2); ";
    if (!(m > 0.0) || !std::isfinite(m)) os << "m must be positive; ";
    if (!(M >= m) || !std::isfinite(M)) os << "M must be >= m; ";
    if (count < 1) os << "count must be >= 1; ";
    const std::string msg = os.str();
    if (!msg.empty()) throw InvalidParameter("ensemble: " + msg.substr(0, msg.size() - 2));
  }
};

struct AccretiveVerdict {
  bool accretive;
  double margin;
};

inline AccretiveVerdict is_accretive(const Matrix& a) {
  const double margin = accretivity_margin(a);
  return {margin > loewner_tolerance, margin};
}

/// Least alpha with W(A) inside the closed sector S_alpha.
inline double sectorial_angle(const Matrix& a) {
  require_accretive(a, "sectorial_angle");
  const HermitianEigen re = hermitian_eigen(hermitian_part(a));
  const Matrix w = hermitian_apply(re, [](double v) { return 1.0 / std::sqrt(v); });
  const Matrix k = hermitian_part(w * imaginary_part(a) * w);
  const std::vector<double> ev = hermitian_eigenvalues(k);
  const double rho = std::max(std::abs(ev.front()), std::abs(ev.back()));
  return std::atan(rho);
}

struct ReBounds {
  double m;
  double M;
};

inline ReBounds re_bounds(const Matrix& a) {
  require_accretive(a, "re_bounds");
  const std::vector<double> ev = hermitian_eigenvalues(hermitian_part(a));
  return {ev.front(), ev.back()};
}

inline SectorCertificate certify(const Matrix& a) {
  const ReBounds b = re_bounds(a);
  return {sectorial_angle(a), b.m, b.M};
}

/// A = P^{1/2} (I + iT) P^{1/2}, Re A = P with spectrum in [m, M], ||T||_op = u tan(alpha_max).
/// `stream_id` separates the operands of one sample.
inline Matrix random_sectorial(const EnsembleSpec& spec, std::size_t index, std::uint64_t stream_id = stream::a) {
  spec.validate();
  if (index >= spec.count) {
    throw InvalidParameter("random_sectorial: index " + std::to_string(index) + " >= count " + std::to_string(spec.count));
  }
  const std::size_t n = spec.dim;
  Rng rng = make_rng(spec.seed, index, stream_id);

  const Matrix u = random_unitary(rng, n);
  std::vector<double> d(n);
  for (double& v : d) v = uniform(rng, spec.m, spec.M);
  Matrix t = random_hermitian(rng, n);
  const double scale = uniform(rng, 0.0, 1.0) * std::tan(spec.alpha_max);

  Matrix p(n), root(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      cplx sp = 0.0, sr = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        const cplx w = u(i, k) * std::conj(u(j, k));
        sp += w * d[k];
        sr += w * std::sqrt(d[k]);
      }
      p(i, j) = sp;
      root(i, j) = sr;
    }
  p = hermitian_part(p);
  root = hermitian_part(root);

  if (scale == 0.0) return p;
  const double tn = hermitian_opnorm(t);
  if (tn > 0.0) t *= scale / tn;
  const Matrix k = hermitian_part(root * t * root);
  Matrix a = p;
  a.add_scaled(cplx(0.0, 1.0), k);
  return a;
}

inline Matrix random_pd(EnsembleSpec spec, std::size_t index, std::uint64_t stream_id = stream::a) {
  spec.alpha_max = 0.0;
  return random_sectorial(spec, index, stream_id);
}

}  // namespace amm
