// SPDX-License-Identifier: Apache-2.0
//
// Binary means of accretive matrices.
#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "amm/funcalc.hpp"
#include "amm/linalg.hpp"

namespace amm {

namespace detail {

inline void require_pair(const Matrix& a, const Matrix& b, const char* who, bool accretive) {
  require_square(a, who);
  require_square(b, who);
  require_finite(a, who);
  require_finite(b, who);
  if (a.size() != b.size()) throw InvalidInput(std::string(who) + ": operands differ in dimension");
  if (accretive) {
    require_accretive(a, who);
    require_accretive(b, who);
  }
}

inline void require_weight(double t, const char* who) {
  if (!(t >= 0.0 && t <= 1.0)) {
    std::ostringstream os;
    os << who << ": weight " << t << " outside [0, 1]";
    throw InvalidParameter(os.str());
  }
}

inline Matrix solve_or_fail(const Matrix& m, const Matrix& rhs, const char* who) {
  try {
    return lu_solve(m, rhs);
  } catch (const SingularMatrixError& e) {
    throw NumericFailure(0.0, std::string(who) + ": " + e.what());
  }
}

// (1-t) x + t y
inline Matrix blend(const Matrix& x, const Matrix& y, double t) {
  Matrix r = x * (1.0 - t);
  r.add_scaled(t, y);
  return r;
}

// B ((1-t) B + t A)^{-1} A, no checks.
inline Matrix harmonic_raw(const Matrix& a, const Matrix& b, double t) {
  if (t == 0.0) return a;
  if (t == 1.0) return b;
  return b * solve_or_fail(blend(b, a, t), a, "harmonic_mean");
}

// Integral of A !_t B against the measure: endpoint atoms directly, interior
// nodes as B * sum_j w_j ((1-t_j) B + t_j A)^{-1} A.
inline Matrix sigma_at_order(const Matrix& a, const Matrix& b, const MeasureSpec& mu, int order) {
  const std::size_t n = a.size();
  Matrix ends(n), inner(n);
  bool any_inner = false;
  auto add = [&](double w, double t) {
    if (t == 0.0) {
      ends.add_scaled(w, a);
    } else if (t == 1.0) {
      ends.add_scaled(w, b);
    } else {
      inner.add_scaled(w, solve_or_fail(blend(b, a, t), a, "sigma_mean"));
      any_inner = true;
    }
  };
  for (const Atom& at : mu.atoms) add(at.w, at.t);
  if (mu.density) {
    const JacobiDensity& d = *mu.density;
    const auto rule = gauss_jacobi_rule(d.exp0, d.exp1, order);
    for (std::size_t j = 0; j < rule->nodes.size(); ++j) {
      const double t = rule->nodes[j];
      add(d.coeff * rule->weights[j] * d.smooth_at(t), t);
    }
  }
  if (any_inner) ends += b * inner;
  return ends;
}

inline Matrix half_line_at_order(const Matrix& ai, const Matrix& bi, double lambda, int order) {
  const std::size_t n = ai.size();
  const auto rule = gauss_jacobi_rule(lambda - 1.0, -lambda, order);
  Matrix acc(n);
  const Matrix id = Matrix::identity(n);
  for (std::size_t j = 0; j < rule->nodes.size(); ++j) {
    const double s = rule->nodes[j];
    const double t = s / (1.0 - s);
    Matrix m = ai;
    m.add_scaled(t, bi);
    acc.add_scaled(rule->weights[j] * (1.0 + t), solve_or_fail(m, id, "geometric_mean"));
  }
  return acc * (std::sin(lambda * std::numbers::pi) / std::numbers::pi);
}

inline Matrix drury_at_order(const Matrix& a, const Matrix& b, int order) {
  const std::size_t n = a.size();
  const auto rule = gauss_jacobi_rule(-0.5, -0.5, order);
  Matrix acc(n);
  const Matrix id = Matrix::identity(n);
  for (std::size_t j = 0; j < rule->nodes.size(); ++j) {
    const double u = rule->nodes[j];
    acc.add_scaled(rule->weights[j], solve_or_fail(blend(b, a, u), id, "drury_half"));
  }
  acc *= 1.0 / std::numbers::pi;
  return inverse(acc);
}

inline Matrix neg_at_order(const Matrix& a, const Matrix& b, double lambda, int order) {
  const std::size_t n = a.size();
  const auto rule = gauss_jacobi_rule(lambda - 1.0, -lambda, order);
  Matrix acc(n);
  for (std::size_t j = 0; j < rule->nodes.size(); ++j) {
    const double t = rule->nodes[j];
    acc.add_scaled(rule->weights[j], solve_or_fail(blend(a, b, t), a, "geometric_neg"));
  }
  return a * acc * (std::sin(lambda * std::numbers::pi) / std::numbers::pi);
}

template <class Eval>
Matrix with_doubling(const QuadOptions& opt, bool has_density, const char* who, Eval&& eval) {
  Matrix out = eval(opt.order);
  if (opt.convergence_check && has_density) {
    Matrix fine = eval(std::min(2 * opt.order, 512));
    const double change = relative_change(out, fine);
    if (change > 1e-8) {
      std::ostringstream os;
      os << who << ": quadrature did not converge (relative change " << change << ")";
      throw NumericFailure(change, os.str());
    }
    out = std::move(fine);
  }
  return out;
}

}  // namespace detail

/// ||X - Y||_op / max(||X||_op, ||Y||_op).
inline double relative_deviation(const Matrix& x, const Matrix& y) {
  const double scale = std::max(opnorm(x), opnorm(y));
  const double d = opnorm(x - y);
  return scale > 0.0 ? d / scale : d;
}

inline Matrix harmonic_mean(const Matrix& a, const Matrix& b, double t, const QuadOptions& opt = {}) {
  detail::require_pair(a, b, "harmonic_mean", opt.validate_inputs);
  detail::require_weight(t, "harmonic_mean");
  return detail::harmonic_raw(a, b, t);
}

inline Matrix arithmetic_mean(const Matrix& a, const Matrix& b, double t) {
  detail::require_pair(a, b, "arithmetic_mean", false);
  detail::require_weight(t, "arithmetic_mean");
  return detail::blend(a, b, t);
}

inline Matrix sigma_mean(const Matrix& a, const Matrix& b, const MonotoneFunction& f, const QuadOptions& opt = {}) {
  detail::require_pair(a, b, "sigma_mean", opt.validate_inputs);
  return detail::with_doubling(opt, f.measure.density.has_value(), "sigma_mean",
                               [&](int order) { return detail::sigma_at_order(a, b, f.measure, order); });
}

/// A^{1/2} f(A^{-1/2} B A^{-1/2}) A^{1/2}; the inner matrix is not required to be accretive.
inline Matrix congruence_sigma(const Matrix& a, const Matrix& b, const MonotoneFunction& f, const QuadOptions& opt = {}) {
  detail::require_pair(a, b, "congruence_sigma", opt.validate_inputs);
  const Matrix s = principal_sqrt(a);
  const Matrix si = inverse(s);
  const Matrix m = si * b * si;
  QuadOptions inner = opt;
  inner.validate_inputs = false;
  return s * apply_function(f, m, inner) * s;
}

struct GeometricPaths {
  Matrix measure;     // sigma_mean with power(lambda)
  Matrix congruence;  // A^{1/2} (A^{-1/2} B A^{-1/2})^lambda A^{1/2}
  Matrix half_line;   // improper integral mapped onto [0, 1]
  double max_deviation = 0.0;
};

inline GeometricPaths geometric_mean_paths(const Matrix& a, const Matrix& b, double lambda, const QuadOptions& opt = {}) {
  const MonotoneFunction f = power_function(lambda);
  detail::require_pair(a, b, "geometric_mean", opt.validate_inputs);
  QuadOptions inner = opt;
  inner.validate_inputs = false;
  GeometricPaths p;
  p.measure = sigma_mean(a, b, f, inner);
  p.congruence = congruence_sigma(a, b, f, inner);
  const Matrix ai = inverse(a);
  const Matrix bi = inverse(b);
  p.half_line = detail::with_doubling(opt, true, "geometric_mean",
                                      [&](int order) { return detail::half_line_at_order(ai, bi, lambda, order); });
  p.max_deviation = std::max({relative_deviation(p.measure, p.congruence), relative_deviation(p.measure, p.half_line),
                              relative_deviation(p.congruence, p.half_line)});
  return p;
}

inline Matrix geometric_mean(const Matrix& a, const Matrix& b, double lambda, const QuadOptions& opt = {}) {
  GeometricPaths p = geometric_mean_paths(a, b, lambda, opt);
  if (p.max_deviation > 1e-8) {
    std::ostringstream os;
    os << "geometric_mean: evaluation paths disagree (relative deviation " << p.max_deviation << ")";
    throw NumericFailure(p.max_deviation, os.str());
  }
  return std::move(p.measure);
}

/// The lambda = 1/2 mean as the inverse of a Chebyshev-weight integral of (uA + (1-u)B)^{-1}.
inline Matrix drury_half(const Matrix& a, const Matrix& b, const QuadOptions& opt = {}) {
  detail::require_pair(a, b, "drury_half", opt.validate_inputs);
  return detail::with_doubling(opt, true, "drury_half", [&](int order) { return detail::drury_at_order(a, b, order); });
}

/// A #_{-lambda} B by the integral formula, cross-checked against the congruence formula.
inline Matrix geometric_neg(const Matrix& a, const Matrix& b, double lambda, const QuadOptions& opt = {}) {
  detail::require_open_unit(lambda, "geometric_neg");
  detail::require_pair(a, b, "geometric_neg", opt.validate_inputs);
  Matrix out = detail::with_doubling(opt, true, "geometric_neg",
                                     [&](int order) { return detail::neg_at_order(a, b, lambda, order); });
  const Matrix s = principal_sqrt(a);
  const Matrix si = inverse(s);
  QuadOptions inner = opt;
  inner.validate_inputs = false;
  const Matrix p = apply_function(power_function(lambda), si * b * si, inner);
  const Matrix other = s * inverse(p) * s;
  const double dev = relative_deviation(out, other);
  if (dev > 1e-8) {
    std::ostringstream os;
    os << "geometric_neg: integral and congruence formulas disagree (relative deviation " << dev << ")";
    throw NumericFailure(dev, os.str());
  }
  return out;
}

}  // namespace amm
