// SPDX-License-Identifier: Apache-2.0
//
// Gauss-Jacobi rules on [0, 1] for the weight t^exp0 (1-t)^exp1.
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <tuple>
#include <vector>

#include "amm/linalg.hpp"

namespace amm {

struct QuadratureRule {
  std::vector<double> nodes;    // ascending, interior to (0, 1)
  std::vector<double> weights;  // positive
  int order = 0;
  double exp0 = 0.0;
  double exp1 = 0.0;
};

inline void require_integrable(double exp0, double exp1, const char* who) {
  if (!(exp0 > -1.0) || !(exp1 > -1.0) || !std::isfinite(exp0) || !std::isfinite(exp1)) {
    std::ostringstream os;
    os << who << ": exponents (" << exp0 << ", " << exp1 << ") must both exceed -1";
    throw InvalidParameter(os.str());
  }
}

/// Integral of t^exp0 (1-t)^exp1 over [0, 1].
inline double beta_moment(double exp0, double exp1) {
  require_integrable(exp0, exp1, "beta_moment");
  return std::exp(std::lgamma(exp0 + 1.0) + std::lgamma(exp1 + 1.0) - std::lgamma(exp0 + exp1 + 2.0));
}

namespace detail {

inline QuadratureRule build_gauss_jacobi(double exp0, double exp1, int order) {
  // x = 2t - 1 turns t^exp0 (1-t)^exp1 into the Jacobi weight (1-x)^a (1+x)^b.
  const double a = exp1;
  const double b = exp0;
  const double ab = a + b;
  const auto n = static_cast<std::size_t>(order);
  std::vector<double> diag(n), off(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    const double kk = static_cast<double>(k);
    double dk;
    if (k == 0) {
      dk = (b - a) / (ab + 2.0);
    } else {
      dk = (b * b - a * a) / ((2.0 * kk + ab) * (2.0 * kk + ab + 2.0));
    }
    diag[k] = 0.5 * (1.0 + dk);
    if (k + 1 < n) {
      const double j = kk + 1.0;
      const double s = 2.0 * j + ab;
      double off2;
      if (j == 1.0) {
        off2 = 4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab));
      } else {
        off2 = 4.0 * j * (j + a) * (j + b) * (j + ab) / (s * s * (s + 1.0) * (s - 1.0));
      }
      off[k] = 0.5 * std::sqrt(off2);
    }
  }
  std::vector<double> first;
  tridiagonal_ql(diag, off, first);
  std::vector<std::size_t> perm(n);
  for (std::size_t k = 0; k < n; ++k) perm[k] = k;
  std::sort(perm.begin(), perm.end(), [&](std::size_t x, std::size_t y) { return diag[x] < diag[y]; });

  const double mu0 = beta_moment(exp0, exp1);
  QuadratureRule rule;
  rule.order = order;
  rule.exp0 = exp0;
  rule.exp1 = exp1;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  double total = 0.0;
  for (double v : first) total += v * v;
  for (std::size_t k = 0; k < n; ++k) {
    rule.nodes[k] = diag[perm[k]];
    rule.weights[k] = mu0 * first[perm[k]] * first[perm[k]] / total;
  }
  for (double t : rule.nodes) {
    if (!(t > 0.0 && t < 1.0)) throw NumericFailure(t, "gauss_jacobi_rule: node left (0, 1)");
  }
  return rule;
}

}  // namespace detail

/// Cached Golub-Welsch rule; exact for polynomials of degree < 2 * order.
inline std::shared_ptr<const QuadratureRule> gauss_jacobi_rule(double exp0, double exp1, int order) {
  require_integrable(exp0, exp1, "gauss_jacobi_rule");
  if (order < 2 || order > 512) throw InvalidParameter("gauss_jacobi_rule: order " + std::to_string(order) + " outside [2, 512]");

  static std::mutex mutex;
  static std::map<std::tuple<double, double, int>, std::shared_ptr<const QuadratureRule>> cache;
  const auto key = std::make_tuple(exp0, exp1, order);
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  auto rule = std::make_shared<const QuadratureRule>(detail::build_gauss_jacobi(exp0, exp1, order));
  std::lock_guard lock(mutex);
  if (cache.size() >= 4096) cache.clear();
  return cache.try_emplace(key, std::move(rule)).first->second;
}

}  // namespace amm
