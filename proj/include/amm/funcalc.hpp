// SPDX-License-Identifier: Apache-2.0
//
// Matrix monotone functions represented by probability measures on [0, 1]:
// f(A) is the nu_f-average of the harmonic means I !_t A. A circle-contour
// Cauchy integral serves as an independent evaluator.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "amm/linalg.hpp"
#include "amm/quadrature.hpp"
#include "amm/sector.hpp"

namespace amm {

struct Atom {
  double t;
  double w;
};

/// coeff * t^exp0 * (1-t)^exp1 * smooth(t) dt; an empty `smooth` means 1.
struct JacobiDensity {
  double coeff = 1.0;
  double exp0 = 0.0;
  double exp1 = 0.0;
  std::function<double(double)> smooth;

  double smooth_at(double t) const { return smooth ? smooth(t) : 1.0; }
};

struct MeasureSpec {
  std::vector<Atom> atoms;
  std::optional<JacobiDensity> density;

  void validate() const {
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      const Atom& a = atoms[i];
      if (!(a.t >= 0.0 && a.t <= 1.0)) throw InvalidParameter("measure: atom position outside [0, 1]");
      if (!(a.w > 0.0) || !std::isfinite(a.w)) throw InvalidParameter("measure: atom weight must be positive");
      for (std::size_t j = 0; j < i; ++j)
        if (atoms[j].t == a.t) throw InvalidParameter("measure: duplicate atom position");
    }
    if (density) {
      if (!(density->coeff > 0.0) || !std::isfinite(density->coeff)) throw InvalidParameter("measure: density coefficient must be positive");
      require_integrable(density->exp0, density->exp1, "measure");
    }
  }
};

struct MonotoneFunction {
  std::string name;  // catalog family
  double param = 0.0;
  MeasureSpec measure;
  std::function<cplx(cplx)> scalar_form;
  double derivative_at_one = 0.5;

  std::string label() const {
    if (name == "uniform") return name;
    std::ostringstream os;
    os << name << "(" << param << ")";
    return os.str();
  }
};

inline constexpr int default_quad_order = 80;

// ---------------------------------------------------------------------------
// Catalog

namespace detail {

inline void require_open_unit(double x, const std::string& what) {
  if (!(x > 0.0 && x < 1.0)) {
    std::ostringstream os;
    os << what << ": parameter " << x << " outside (0, 1)";
    throw InvalidParameter(os.str());
  }
}

inline cplx uniform_form(cplx z) {
  const cplx w = z - 1.0;
  if (std::abs(w) < 1e-4) return 1.0 + w / 2.0 - w * w / 6.0 + w * w * w / 12.0;
  return z * std::log(z) / w;
}

}  // namespace detail

inline MonotoneFunction power_function(double lambda) {
  detail::require_open_unit(lambda, "power");
  MonotoneFunction f;
  f.name = "power";
  f.param = lambda;
  f.measure.density = JacobiDensity{std::sin(lambda * std::numbers::pi) / std::numbers::pi, lambda - 1.0, -lambda, {}};
  f.scalar_form = [lambda](cplx z) { return std::pow(z, lambda); };
  f.derivative_at_one = lambda;
  return f;
}

inline MonotoneFunction arithmetic_function(double t) {
  detail::require_open_unit(t, "arithmetic");
  MonotoneFunction f;
  f.name = "arithmetic";
  f.param = t;
  f.measure.atoms = {{0.0, 1.0 - t}, {1.0, t}};
  f.scalar_form = [t](cplx z) { return (1.0 - t) + t * z; };
  f.derivative_at_one = t;
  return f;
}

inline MonotoneFunction harmonic_function(double t) {
  detail::require_open_unit(t, "harmonic");
  MonotoneFunction f;
  f.name = "harmonic";
  f.param = t;
  f.measure.atoms = {{t, 1.0}};
  f.scalar_form = [t](cplx z) { return 1.0 / ((1.0 - t) + t / z); };
  f.derivative_at_one = t;
  return f;
}

inline MonotoneFunction uniform_function() {
  MonotoneFunction f;
  f.name = "uniform";
  f.param = 0.0;
  f.measure.density = JacobiDensity{1.0, 0.0, 0.0, {}};
  f.scalar_form = detail::uniform_form;
  f.derivative_at_one = 0.5;
  return f;
}

/// Lookup by family name; `param` is ignored for "uniform".
inline MonotoneFunction catalog(const std::string& name, double param = 0.5) {
  if (name == "power") return power_function(param);
  if (name == "arithmetic") return arithmetic_function(param);
  if (name == "harmonic") return harmonic_function(param);
  if (name == "uniform") return uniform_function();
  throw InvalidParameter("unknown function '" + name + "' (expected power, arithmetic, harmonic or uniform)");
}

// ---------------------------------------------------------------------------
// Integration against a measure

namespace detail {

inline void axpy(cplx& acc, double w, const cplx& v) { acc += w * v; }
inline void axpy(double& acc, double w, double v) { acc += w * v; }
inline void axpy(Matrix& acc, double w, const Matrix& v) { acc.add_scaled(w, v); }

}  // namespace detail

/// Sum over atoms, then quadrature nodes in ascending order.
template <class T, class G>
T integrate(const MeasureSpec& mu, int order, T zero, G&& g) {
  T acc = std::move(zero);
  for (const Atom& a : mu.atoms) detail::axpy(acc, a.w, g(a.t));
  if (mu.density) {
    const JacobiDensity& d = *mu.density;
    const auto rule = gauss_jacobi_rule(d.exp0, d.exp1, order);
    for (std::size_t j = 0; j < rule->nodes.size(); ++j) {
      const double t = rule->nodes[j];
      detail::axpy(acc, d.coeff * rule->weights[j] * d.smooth_at(t), g(t));
    }
  }
  return acc;
}

inline double measure_mass(const MeasureSpec& mu, int order = default_quad_order) {
  mu.validate();
  return integrate(mu, order, 0.0, [](double) { return 1.0; });
}

/// First moment, which equals f'(1).
inline double measure_mean(const MeasureSpec& mu, int order = default_quad_order) {
  mu.validate();
  return integrate(mu, order, 0.0, [](double t) { return t; });
}

// ---------------------------------------------------------------------------
// Harmonic-mean representation

/// I !_t A = ((1-t) I + t A^{-1})^{-1}, computed as ((1-t) A + t I)^{-1} A.
inline Matrix harmonic_unit(double t, const Matrix& a) {
  require_square(a, "harmonic_unit");
  if (!(t >= 0.0 && t <= 1.0)) throw InvalidParameter("harmonic_unit: t outside [0, 1]");
  if (t == 0.0) return Matrix::identity(a.size());
  if (t == 1.0) return a;
  Matrix m = a * (1.0 - t);
  for (std::size_t i = 0; i < m.size(); ++i) m(i, i) += t;
  try {
    return lu_solve(m, a);
  } catch (const SingularMatrixError& e) {
    throw NumericFailure(0.0, std::string("harmonic_unit: ") + e.what());
  }
}

struct QuadOptions {
  int order = default_quad_order;
  bool convergence_check = true;  // compare against 2 * order
  bool validate_inputs = true;    // accretive input and output
};

namespace detail {

inline Matrix apply_at_order(const MonotoneFunction& f, const Matrix& a, int order) {
  return integrate(f.measure, order, Matrix(a.size()), [&](double t) { return harmonic_unit(t, a); });
}

inline double relative_change(const Matrix& coarse, const Matrix& fine) {
  return norm_inf(fine - coarse) / std::max(norm_inf(fine), 1e-300);
}

}  // namespace detail

inline Matrix apply_function(const MonotoneFunction& f, const Matrix& a, const QuadOptions& opt = {}) {
  require_square(a, "apply_function");
  require_finite(a, "apply_function");
  if (opt.validate_inputs) require_accretive(a, "apply_function");
  Matrix out = detail::apply_at_order(f, a, opt.order);
  if (opt.convergence_check && f.measure.density) {
    Matrix fine = detail::apply_at_order(f, a, std::min(2 * opt.order, 512));
    const double change = detail::relative_change(out, fine);
    if (change > 1e-8) {
      std::ostringstream os;
      os << "apply_function: quadrature did not converge (relative change " << change << " on doubling order "
         << opt.order << ")";
      throw NumericFailure(change, os.str());
    }
    out = std::move(fine);
  }
  if (opt.validate_inputs) {
    const double margin = accretivity_margin(out);
    if (!(margin > 0.0)) throw NumericFailure(margin, "apply_function: result lost its accretive real part");
  }
  return out;
}

// ---------------------------------------------------------------------------
// Scalar continuation

inline bool on_branch_cut(cplx z) { return z.imag() == 0.0 && z.real() <= 0.0; }

inline cplx scalar_eval(const MonotoneFunction& f, cplx z) {
  if (on_branch_cut(z) || !std::isfinite(z.real()) || !std::isfinite(z.imag())) {
    std::ostringstream os;
    os << "scalar_eval: " << z << " lies on (-inf, 0]";
    throw DomainError(os.str());
  }
  return f.scalar_form(z);
}

/// The measure integral of 1 !_t z.
inline cplx scalar_quadrature(const MonotoneFunction& f, cplx z, int order = 2 * default_quad_order) {
  if (on_branch_cut(z)) throw DomainError("scalar_quadrature: argument on (-inf, 0]");
  return integrate(f.measure, order, cplx(0.0), [z](double t) -> cplx {
    if (t == 0.0) return 1.0;
    if (t == 1.0) return z;
    return z / ((1.0 - t) * z + t);
  });
}

// ---------------------------------------------------------------------------
// Cauchy integral over a circle

struct DunfordContour {
  double center = 1.0;
  double radius = 0.5;
  int nodes = 256;
};

/// Circle around a polygon that encloses W(A); see README for the construction.
inline DunfordContour choose_contour(const Matrix& a) {
  require_accretive(a, "choose_contour");
  const std::vector<double> re = hermitian_eigenvalues(hermitian_part(a));
  const double m = re.front();
  const double big = re.back();
  const double h = hermitian_opnorm(imaginary_part(a));
  const double ta = std::tan(sectorial_angle(a));

  std::vector<cplx> vertices;
  auto height = [&](double x) { return std::min(h, ta * x); };
  vertices.emplace_back(m, height(m));
  if (ta > 0.0) {
    const double knee = h / ta;
    if (knee > m && knee < big) vertices.emplace_back(knee, h);
  }
  vertices.emplace_back(big, height(big));

  auto spread = [&](double u) {
    double worst = 0.0;
    for (const cplx& v : vertices) worst = std::max(worst, std::abs(u * v - 1.0));
    return worst;
  };
  // spread is convex in u = 1/c.
  double lo = 0.0, hi = 2.0 / m;
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
  double f1 = spread(x1), f2 = spread(x2);
  for (int it = 0; it < 200 && hi - lo > 1e-15 * (2.0 / m); ++it) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - g * (hi - lo);
      f1 = spread(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + g * (hi - lo);
      f2 = spread(x2);
    }
  }
  const double u = 0.5 * (lo + hi);
  DunfordContour gamma;
  gamma.center = 1.0 / u;
  const double inner = std::max(spread(u), 0.05) * gamma.center;
  gamma.radius = std::sqrt(inner * gamma.center);
  gamma.nodes = 256;
  if (!(gamma.center - gamma.radius > 0.0) || !(spread(u) < 1.0)) {
    throw NumericFailure(spread(u), "choose_contour: no admissible circle");
  }
  return gamma;
}

/// Trapezoid rule on the circle for several functions at once; node count doubles until
/// successive estimates agree to 1e-12 relative.
inline std::vector<Matrix> dunford_apply_many(const std::vector<MonotoneFunction>& fs, const Matrix& a,
                                              const DunfordContour& gamma) {
  require_accretive(a, "dunford_apply");
  if (!(gamma.center - gamma.radius > 0.0) || gamma.radius <= 0.0 || gamma.nodes < 16)
    throw InvalidParameter("dunford_apply: contour must satisfy 0 < radius < center and nodes >= 16");
  const std::size_t n = a.size();
  const std::size_t k = fs.size();
  constexpr int max_nodes = 65536;

  std::vector<Matrix> sums(k, Matrix(n));
  auto add_nodes = [&](int total, int start, int step) {
    for (int j = start; j < total; j += step) {
      const double theta = 2.0 * std::numbers::pi * j / total;
      const cplx e = std::polar(1.0, theta);
      const cplx z = gamma.center + gamma.radius * e;
      Matrix shifted = -a;
      for (std::size_t i = 0; i < n; ++i) shifted(i, i) += z;
      Matrix res;
      try {
        res = inverse(shifted);
      } catch (const SingularMatrixError& err) {
        throw NumericFailure(0.0, std::string("dunford_apply: resolvent failed: ") + err.what());
      }
      for (std::size_t q = 0; q < k; ++q) sums[q].add_scaled(gamma.radius * e * fs[q].scalar_form(z), res);
    }
  };

  int total = gamma.nodes;
  add_nodes(total, 0, 1);
  std::vector<Matrix> est(k);
  for (std::size_t q = 0; q < k; ++q) est[q] = sums[q] / static_cast<double>(total);
  while (true) {
    if (2 * total > max_nodes) {
      throw NumericFailure(0.0, "dunford_apply: no convergence within " + std::to_string(max_nodes) + " nodes");
    }
    add_nodes(2 * total, 1, 2);
    total *= 2;
    bool done = true;
    double worst = 0.0;
    for (std::size_t q = 0; q < k; ++q) {
      Matrix next = sums[q] / static_cast<double>(total);
      const double change = detail::relative_change(est[q], next);
      worst = std::max(worst, change);
      if (change > 1e-12) done = false;
      est[q] = std::move(next);
    }
    if (done) break;
  }
  return est;
}

inline Matrix dunford_apply(const MonotoneFunction& f, const Matrix& a, const DunfordContour& gamma) {
  return dunford_apply_many({f}, a, gamma).front();
}

inline Matrix dunford_apply(const MonotoneFunction& f, const Matrix& a) {
  return dunford_apply(f, a, choose_contour(a));
}

}  // namespace amm
