// SPDX-License-Identifier: Apache-2.0
//
// Seeded numerical checks of the accretive matrix inequalities and their
// positive-definite counterparts.
#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "amm/maps.hpp"
#include "amm/means.hpp"
#include "amm/sector.hpp"

namespace amm {

inline constexpr double identity_tolerance = 1e-8;

/// Quadrature order for checks; the worst sample of every check is re-evaluated at twice this.
inline constexpr int verify_quad_order = 40;

enum class Relation { order, identity };
enum class Operands { sectorial, positive };
enum class MapUse { none, any, unital };

struct CheckInfo {
  std::string_view id;
  Relation relation = Relation::order;
  Operands operands = Operands::sectorial;
  bool needs_f = false;
  bool needs_g = false;
  MapUse map = MapUse::none;
  bool uses_norm = false;
  std::string_view statement;
};

/// A fixed map shared by every sample; without one the admissible variants are cycled per sample.
struct MapSpec {
  MapKind kind = MapKind::compression;
  std::optional<std::size_t> dim_out;
  std::uint64_t seed = 0;
};

struct CheckParams {
  std::optional<MonotoneFunction> f;
  std::optional<MonotoneFunction> g;
  std::optional<MapSpec> map;
  std::optional<NormKind> norm;
  std::optional<double> t;  // free weights; drawn per sample when unset
  std::optional<double> s;
  bool ensemble_alpha = false;  // use alpha_max instead of the certified per-sample angle
  int quad_order = verify_quad_order;
  unsigned jobs = 1;
};

struct CheckConfig {
  std::string id;
  EnsembleSpec ensemble;
  CheckParams params;
};

struct CheckReport {
  std::string check;
  EnsembleSpec ensemble;
  CheckParams params;
  std::size_t samples = 0;
  double min_margin = 0.0;
  std::size_t worst_index = 0;
  bool pass = false;
  double elapsed_ms = 0.0;
  std::size_t flagged = 0;  // mean_monotone: samples whose C or D leave the sector of A, B
  std::optional<std::string> error;
  std::vector<double> margins;
};

/// (M + m)^2 / (4 M m).
inline double kantorovich_constant(double m, double M) {
  if (!(m > 0.0) || !(M >= m) || !std::isfinite(M)) {
    std::ostringstream os;
    os << "kantorovich_constant: need 0 < m <= M, got m=" << m << " M=" << M;
    throw InvalidParameter(os.str());
  }
  return (M + m) * (M + m) / (4.0 * M * m);
}

namespace detail {

/// Lazily drawn operands and parameters of one sample.
class Sample {
 public:
  Sample(const EnsembleSpec& spec, const CheckParams& params, const CheckInfo& info, std::size_t index)
      : spec_(spec), params_(params), info_(info), index_(index) {
    opt.order = params.quad_order;
    opt.convergence_check = false;
    opt.validate_inputs = false;
    Rng rng = make_rng(spec.seed, index, stream::weights);
    t_ = uniform(rng, 0.05, 0.95);
    s_ = uniform(rng, 0.05, 0.95);
  }

  QuadOptions opt;
  bool flagged = false;

  std::size_t index() const { return index_; }
  const EnsembleSpec& spec() const { return spec_; }
  const MonotoneFunction& f() const { return *params_.f; }
  const MonotoneFunction& g() const { return *params_.g; }
  double t() const { return params_.t.value_or(t_); }
  double s() const { return params_.s.value_or(s_); }

  const Matrix& a() {
    if (!a_) a_ = draw(stream::a);
    return *a_;
  }
  const Matrix& b() {
    if (!b_) b_ = draw(stream::b);
    return *b_;
  }

  double angle_a() {
    if (params_.ensemble_alpha) return spec_.alpha_max;
    if (!angle_a_) angle_a_ = sectorial_angle(a());
    return *angle_a_;
  }
  double angle_ab() {
    if (params_.ensemble_alpha) return spec_.alpha_max;
    if (!angle_b_) angle_b_ = sectorial_angle(b());
    return std::max(angle_a(), *angle_b_);
  }

  Matrix x() {
    Rng rng = make_rng(spec_.seed, index_, stream::vector);
    return random_unit_vector(rng, spec_.dim);
  }

  const PositiveLinearMap& map() {
    if (!map_) {
      if (params_.map) {
        const std::size_t out = params_.map->dim_out.value_or(default_output_dim(params_.map->kind, spec_.dim));
        map_ = random_map(spec_.dim, out, params_.map->kind, params_.map->seed);
      } else {
        const MapKind kind = info_.map == MapUse::unital ? unital_map_kinds[index_ % std::size(unital_map_kinds)]
                                                         : all_map_kinds[index_ % std::size(all_map_kinds)];
        map_ = random_map(spec_.dim, default_output_dim(kind, spec_.dim), kind, mix_seed(spec_.seed, index_, stream::map));
      }
    }
    return *map_;
  }
  Matrix phi(const Matrix& m) { return apply_map(map(), m); }

  NormKind norm(std::size_t dim) const {
    if (params_.norm) return *params_.norm;
    switch (index_ % 4) {
      case 0: return NormKind::operator_norm();
      case 1: return NormKind::frobenius();
      case 2: return NormKind::trace();
      default: return NormKind::kyfan(static_cast<int>(1 + (index_ / 4) % dim));
    }
  }

  // Random matrices for the checks that need more than A and B.
  Rng aux_rng(std::uint64_t stream_id) const { return make_rng(spec_.seed, index_, stream_id); }

 private:
  Matrix draw(std::uint64_t stream_id) const {
    return info_.operands == Operands::positive ? random_pd(spec_, index_, stream_id)
                                                : random_sectorial(spec_, index_, stream_id);
  }

  const EnsembleSpec& spec_;
  const CheckParams& params_;
  const CheckInfo& info_;
  std::size_t index_;
  double t_ = 0.5;
  double s_ = 0.5;
  std::optional<Matrix> a_, b_;
  std::optional<double> angle_a_, angle_b_;
  std::optional<PositiveLinearMap> map_;
};

// X <= Y
inline double order_margin(const Matrix& x, const Matrix& y) { return loewner_leq(x, y).margin; }

// l <= r
inline double scalar_margin(double l, double r) { return (r - l) / (1.0 + std::abs(r) + std::abs(l)); }

inline double identity_margin(const Matrix& x, const Matrix& y) { return -relative_deviation(x, y); }

inline Matrix re(const Matrix& x) { return hermitian_part(x); }

inline double sec(double alpha) { return 1.0 / std::cos(alpha); }

inline double inner(const Matrix& m, const Matrix& x) { return (x.adjoint() * m * x)(0, 0).real(); }
inline cplx inner_c(const Matrix& m, const Matrix& x) { return (x.adjoint() * m * x)(0, 0); }

// a sigma_f b for scalars in the open right half-plane, by the measure integral.
inline cplx scalar_sigma(cplx a, cplx b, const MonotoneFunction& f, int order) {
  return integrate(f.measure, order, cplx(0.0), [&](double t) -> cplx {
    if (t == 0.0) return a;
    if (t == 1.0) return b;
    return a * b / ((1.0 - t) * b + t * a);
  });
}

inline double real_f(const MonotoneFunction& f, double x) { return scalar_eval(f, x).real(); }

// Kubo-Ando bounds for positive scalars: m nabla_l M / m sharp_l M.
inline double gumus_k(double m, double M, double lambda) {
  return ((1.0 - lambda) * m + lambda * M) / (std::pow(m, 1.0 - lambda) * std::pow(M, lambda));
}

struct Bounds {
  double m, M;
};

inline Bounds joint_bounds(const Matrix& a, const Matrix& b) {
  const auto ea = hermitian_eigenvalues(re(a));
  const auto eb = hermitian_eigenvalues(re(b));
  return {std::min(ea.front(), eb.front()), std::max(ea.back(), eb.back())};
}

using CheckFn = std::function<double(Sample&)>;

struct CheckEntry {
  CheckInfo info;
  CheckFn eval;
};

// Shorthands used by the catalog below; every mean skips re-validation and doubling.
struct Ops {
  Sample& s;
  Matrix sig(const Matrix& x, const Matrix& y) const { return sigma_mean(x, y, s.f(), s.opt); }
  Matrix sig(const Matrix& x, const Matrix& y, const MonotoneFunction& f) const { return sigma_mean(x, y, f, s.opt); }
  Matrix fn(const Matrix& x) const { return apply_function(s.f(), x, s.opt); }
  Matrix geo(const Matrix& x, const Matrix& y, double l) const { return sigma_mean(x, y, power_function(l), s.opt); }
  Matrix har(const Matrix& x, const Matrix& y, double t) const { return harmonic_mean(x, y, t, s.opt); }
  Matrix ari(const Matrix& x, const Matrix& y, double t) const { return arithmetic_mean(x, y, t); }
  double nrm(const Matrix& x) const { return uinorm(x, s.norm(x.size())); }
};

inline const std::vector<CheckEntry>& catalog_entries() {
  static const std::vector<CheckEntry> entries = [] {
    using R = Relation;
    using O = Operands;
    using M = MapUse;
    std::vector<CheckEntry> v;
    auto add = [&v](CheckInfo info, CheckFn fn) { v.push_back({info, std::move(fn)}); };

    add({"real_superadditive", R::order, O::sectorial, true, false, M::none, false, "Re(A s_f B) >= Re A s_f Re B"},
        [](Sample& s) {
          Ops o{s};
          return order_margin(o.sig(re(s.a()), re(s.b())), re(o.sig(s.a(), s.b())));
        });
    add({"real_sector_reverse", R::order, O::sectorial, true, false, M::none, false,
         "Re(A s_f B) <= sec^2(a) (Re A s_f Re B)"},
        [](Sample& s) {
          Ops o{s};
          const double k = std::pow(sec(s.angle_ab()), 2);
          return order_margin(re(o.sig(s.a(), s.b())), k * o.sig(re(s.a()), re(s.b())));
        });
    add({"amgmhm", R::order, O::sectorial, true, false, M::none, false,
         "cos^2(a) Re(A !_t B) <= Re(A s_f B) <= sec^2(a) Re(A nabla_t B), t = f'(1)"},
        [](Sample& s) {
          Ops o{s};
          const double t = s.f().derivative_at_one;
          const double c2 = std::pow(std::cos(s.angle_ab()), 2);
          const Matrix mid = re(o.sig(s.a(), s.b()));
          return std::min(order_margin(c2 * re(o.har(s.a(), s.b(), t)), mid),
                          order_margin(mid, re(o.ari(s.a(), s.b(), t)) / c2));
        });
    add({"mean_monotone", R::order, O::sectorial, true, false, M::none, false,
         "Re A <= Re C, Re B <= Re D  =>  Re(A s_f B) <= sec^2(a) Re(C s_f D)"},
        [](Sample& s) {
          Ops o{s};
          const std::size_t n = s.spec().dim;
          auto bump = [&](std::uint64_t id) {
            Rng rng = s.aux_rng(id);
            const Matrix g = random_gaussian(rng, n, n);
            return hermitian_part(g * g.adjoint()) * (uniform(rng, 0.0, 1.0) * s.spec().M / static_cast<double>(n));
          };
          const Matrix c = s.a() + bump(stream::c);
          const Matrix d = s.b() + bump(stream::d);
          const double alpha = s.angle_ab();
          s.flagged = std::max(sectorial_angle(c), sectorial_angle(d)) > alpha + 1e-12;
          return order_margin(re(o.sig(s.a(), s.b())), std::pow(sec(alpha), 2) * re(o.sig(c, d)));
        });
    add({"transformer", R::identity, O::sectorial, true, false, M::none, false,
         "C*(A s_f B)C = (C*AC) s_f (C*BC)"},
        [](Sample& s) {
          Ops o{s};
          const std::size_t n = s.spec().dim;
          Rng rng = s.aux_rng(stream::c);
          const Matrix u = random_unitary(rng, n);
          const Matrix w = random_unitary(rng, n);
          std::vector<cplx> sv(n);
          for (cplx& x : sv) x = uniform(rng, 0.5, 2.0);
          const Matrix c = u * Matrix::diagonal(sv) * w;
          const Matrix ch = c.adjoint();
          return identity_margin(ch * o.sig(s.a(), s.b()) * c, o.sig(ch * s.a() * c, ch * s.b() * c));
        });
    add({"kantorovich", R::order, O::sectorial, true, true, M::unital, false,
         "||Phi(Re(A s_f B)) Phi(Re(A s_g B))^{-1}|| <= sec^6(a) K(m, M)"},
        [](Sample& s) {
          Ops o{s};
          const Bounds bd = joint_bounds(s.a(), s.b());
          const Matrix x = s.phi(re(o.sig(s.a(), s.b())));
          const Matrix y = s.phi(re(o.sig(s.a(), s.b(), s.g())));
          const double lhs = opnorm(x * inverse(y));
          return scalar_margin(lhs, std::pow(sec(s.angle_ab()), 6) * kantorovich_constant(bd.m, bd.M));
        });
    add({"har_ando", R::order, O::sectorial, false, false, M::unital, false,
         "Phi(Re A !_t Re B) <= Re(Phi(A) !_t Phi(B))"},
        [](Sample& s) {
          Ops o{s};
          return order_margin(s.phi(o.har(re(s.a()), re(s.b()), s.t())), re(o.har(s.phi(s.a()), s.phi(s.b()), s.t())));
        });
    add({"ando_sector", R::order, O::sectorial, true, false, M::any, false,
         "Re Phi(A s_f B) <= sec^2(a) Re(Phi(A) s_f Phi(B))"},
        [](Sample& s) {
          Ops o{s};
          const double k = std::pow(sec(s.angle_ab()), 2);
          return order_margin(re(s.phi(o.sig(s.a(), s.b()))), k * re(o.sig(s.phi(s.a()), s.phi(s.b()))));
        });
    add({"sigma_inner", R::order, O::sectorial, true, false, M::none, false,
         "Re<(A s_f B)x, x> <= sec^2(a) Re(<Ax, x> s_f <Bx, x>)"},
        [](Sample& s) {
          Ops o{s};
          const Matrix x = s.x();
          const double lhs = inner(o.sig(s.a(), s.b()), x);
          const cplx r = scalar_sigma(inner_c(s.a(), x), inner_c(s.b(), x), s.f(), s.opt.order);
          return scalar_margin(lhs, std::pow(sec(s.angle_ab()), 2) * r.real());
        });
    add({"sigma_nabla_phi", R::order, O::sectorial, true, false, M::any, false,
         "Re Phi(A s_f B) <= sec^2(a) Re Phi(A nabla_t B), t = f'(1)"},
        [](Sample& s) {
          Ops o{s};
          const double k = std::pow(sec(s.angle_ab()), 2);
          const double t = s.f().derivative_at_one;
          return order_margin(re(s.phi(o.sig(s.a(), s.b()))), k * re(s.phi(o.ari(s.a(), s.b(), t))));
        });
    add({"f_real_super", R::order, O::sectorial, true, false, M::none, false, "Re f(A) >= f(Re A)"},
        [](Sample& s) {
          Ops o{s};
          return order_margin(o.fn(re(s.a())), re(o.fn(s.a())));
        });
    add({"f_real_reverse", R::order, O::sectorial, true, false, M::none, false, "Re f(A) <= sec^2(a) f(Re A)"},
        [](Sample& s) {
          Ops o{s};
          return order_margin(re(o.fn(s.a())), std::pow(sec(s.angle_a()), 2) * o.fn(re(s.a())));
        });
    add({"choi_sector", R::order, O::sectorial, true, false, M::unital, false,
         "Re f(Phi(A)) >= cos^2(a) Re Phi(f(A))"},
        [](Sample& s) {
          Ops o{s};
          const double c2 = std::pow(std::cos(s.angle_a()), 2);
          return order_margin(c2 * re(s.phi(o.fn(s.a()))), re(o.fn(s.phi(s.a()))));
        });
    add({"f_inner", R::order, O::sectorial, true, false, M::none, false,
         "Re<f(A)x, x> <= sec^2(a) Re f(<Ax, x>)"},
        [](Sample& s) {
          Ops o{s};
          const Matrix x = s.x();
          const double lhs = inner(o.fn(s.a()), x);
          const double rhs = scalar_eval(s.f(), inner_c(s.a(), x)).real();
          return scalar_margin(lhs, std::pow(sec(s.angle_a()), 2) * rhs);
        });
    add({"f_nabla", R::order, O::sectorial, true, false, M::none, false,
         "Re(f(A) nabla_t f(B)) <= sec^2(a) Re f(A nabla_t B)"},
        [](Sample& s) {
          Ops o{s};
          const double k = std::pow(sec(s.angle_ab()), 2);
          return order_margin(re(o.ari(o.fn(s.a()), o.fn(s.b()), s.t())), k * re(o.fn(o.ari(s.a(), s.b(), s.t()))));
        });
    add({"f_sharp_nabla", R::order, O::sectorial, true, false, M::none, false,
         "Re(f(A) # f(B)) <= sec^4(a) Re f(A nabla B)"},
        [](Sample& s) {
          Ops o{s};
          const double k = std::pow(sec(s.angle_ab()), 4);
          return order_margin(re(o.geo(o.fn(s.a()), o.fn(s.b()), 0.5)), k * re(o.fn(o.ari(s.a(), s.b(), 0.5))));
        });
    add({"sharp_real_super", R::order, O::sectorial, false, false, M::none, false, "Re(A #_t B) >= Re A #_t Re B"},
        [](Sample& s) {
          Ops o{s};
          return order_margin(o.geo(re(s.a()), re(s.b()), s.t()), re(o.geo(s.a(), s.b(), s.t())));
        });
    add({"sharp_sector_reverse", R::order, O::sectorial, false, false, M::none, false,
         "Re(A #_t B) <= sec^2(a) (Re A #_t Re B)"},
        [](Sample& s) {
          Ops o{s};
          const double k = std::pow(sec(s.angle_ab()), 2);
          return order_margin(re(o.geo(s.a(), s.b(), s.t())), k * o.geo(re(s.a()), re(s.b()), s.t()));
        });
    add({"har_real_super", R::order, O::sectorial, false, false, M::none, false, "Re(A !_t B) >= Re A !_t Re B"},
        [](Sample& s) {
          Ops o{s};
          return order_margin(o.har(re(s.a()), re(s.b()), s.t()), re(o.har(s.a(), s.b(), s.t())));
        });
    add({"har_sector_reverse", R::order, O::sectorial, false, false, M::none, false,
         "Re(A !_t B) <= sec^2(a) (Re A !_t Re B)"},
        [](Sample& s) {
          Ops o{s};
          const double k = std::pow(sec(s.angle_ab()), 2);
          return order_margin(re(o.har(s.a(), s.b(), s.t())), k * o.har(re(s.a()), re(s.b()), s.t()));
        });
    add({"inv_real", R::order, O::sectorial, false, false, M::none, false, "Re(A^{-1}) <= (Re A)^{-1}"},
        [](Sample& s) { return order_margin(re(inverse(s.a())), inverse(re(s.a()))); });
    add({"inv_sector", R::order, O::sectorial, false, false, M::none, false, "(Re A)^{-1} <= sec^2(a) Re(A^{-1})"},
        [](Sample& s) {
          return order_margin(inverse(re(s.a())), std::pow(sec(s.angle_a()), 2) * re(inverse(s.a())));
        });
    add({"gumus_a", R::order, O::sectorial, false, false, M::none, false,
         "Re(A nabla_t B) <= k Re(A #_t B), k = (m nabla_l M)/(m #_l M), l = min(t, 1-t)"},
        [](Sample& s) {
          Ops o{s};
          const Bounds bd = joint_bounds(s.a(), s.b());
          const double k = gumus_k(bd.m, bd.M, std::min(s.t(), 1.0 - s.t()));
          return order_margin(re(o.ari(s.a(), s.b(), s.t())), k * re(o.geo(s.a(), s.b(), s.t())));
        });
    add({"gumus_b", R::order, O::sectorial, false, false, M::none, false, "Re(A #_t B) <= sec^2(a) k Re(A !_t B)"},
        [](Sample& s) {
          Ops o{s};
          const Bounds bd = joint_bounds(s.a(), s.b());
          const double k = gumus_k(bd.m, bd.M, std::min(s.t(), 1.0 - s.t()));
          const double sec2 = std::pow(sec(s.angle_ab()), 2);
          return order_margin(re(o.geo(s.a(), s.b(), s.t())), sec2 * k * re(o.har(s.a(), s.b(), s.t())));
        });
    add({"gumus_c", R::order, O::sectorial, false, false, M::none, false,
         "Re(A nabla_t B) - M(k-1) <= Re(A #_t B) <= sec^2(a) (M(k-1) + Re(A !_t B))"},
        [](Sample& s) {
          Ops o{s};
          const Bounds bd = joint_bounds(s.a(), s.b());
          const double k = gumus_k(bd.m, bd.M, std::min(s.t(), 1.0 - s.t()));
          const double sec2 = std::pow(sec(s.angle_ab()), 2);
          const Matrix shift = Matrix::identity(s.spec().dim) * (bd.M * (k - 1.0));
          const Matrix g = re(o.geo(s.a(), s.b(), s.t()));
          return std::min(order_margin(re(o.ari(s.a(), s.b(), s.t())) - shift, g),
                          order_margin(g, sec2 * (shift + re(o.har(s.a(), s.b(), s.t())))));
        });
    add({"mixed_gm", R::order, O::sectorial, false, false, M::none, false,
         "cos^3(a) Re[(A nabla B) # (A ! B)] <= Re(A # B) <= sec^2(a) Re[(A nabla B) # (A ! B)]"},
        [](Sample& s) {
          Ops o{s};
          const double c = std::cos(s.angle_ab());
          const Matrix mixed = re(o.geo(o.ari(s.a(), s.b(), 0.5), o.har(s.a(), s.b(), 0.5), 0.5));
          const Matrix g = re(o.geo(s.a(), s.b(), 0.5));
          return std::min(order_margin(c * c * c * mixed, g), order_margin(g, mixed / (c * c)));
        });
    add({"mixed_ns", R::order, O::sectorial, false, false, M::none, false,
         "Re(A #_s (A nabla_t B)) <= sec^2(a) Re(A nabla_t (A #_s B))"},
        [](Sample& s) {
          Ops o{s};
          const double k = std::pow(sec(s.angle_ab()), 2);
          const Matrix lhs = re(o.geo(s.a(), o.ari(s.a(), s.b(), s.t()), s.s()));
          return order_margin(lhs, k * re(o.ari(s.a(), o.geo(s.a(), s.b(), s.s()), s.t())));
        });
    add({"norm_real_sandwich", R::order, O::sectorial, false, false, M::none, true,
         "cos(a) ||A|| <= ||Re A|| <= ||A||"},
        [](Sample& s) {
          Ops o{s};
          const double na = o.nrm(s.a());
          const double nr = o.nrm(re(s.a()));
          return std::min(scalar_margin(std::cos(s.angle_a()) * na, nr), scalar_margin(nr, na));
        });
    add({"f_norm_lower", R::order, O::sectorial, true, false, M::none, true, "f(||Re A||) <= ||Re f(A)||"},
        [](Sample& s) {
          Ops o{s};
          return scalar_margin(real_f(s.f(), o.nrm(re(s.a()))), o.nrm(re(o.fn(s.a()))));
        });
    add({"f_opnorm_sandwich", R::order, O::sectorial, true, false, M::none, false,
         "f(||Re A||) <= ||Re f(A)|| <= sec^2(a) f(||Re A||), operator norm"},
        [](Sample& s) {
          Ops o{s};
          const double fx = real_f(s.f(), hermitian_opnorm(re(s.a())));
          const double mid = hermitian_opnorm(re(o.fn(s.a())));
          return std::min(scalar_margin(fx, mid), scalar_margin(mid, std::pow(sec(s.angle_a()), 2) * fx));
        });
    add({"phi_sigma_norm", R::order, O::sectorial, true, false, M::unital, true,
         "cos^3(a) ||Phi(A s_f B)|| <= ||Phi(A) s_f Phi(B)||"},
        [](Sample& s) {
          Ops o{s};
          const double c3 = std::pow(std::cos(s.angle_ab()), 3);
          return scalar_margin(c3 * o.nrm(s.phi(o.sig(s.a(), s.b()))), o.nrm(o.sig(s.phi(s.a()), s.phi(s.b()))));
        });
    add({"phi_nabla_norm", R::order, O::sectorial, true, false, M::any, true,
         "cos^3(a) ||Phi(A s_f B)|| <= ||Phi(A) nabla_t Phi(B)||, t = f'(1)"},
        [](Sample& s) {
          Ops o{s};
          const double c3 = std::pow(std::cos(s.angle_ab()), 3);
          const double t = s.f().derivative_at_one;
          return scalar_margin(c3 * o.nrm(s.phi(o.sig(s.a(), s.b()))), o.nrm(o.ari(s.phi(s.a()), s.phi(s.b()), t)));
        });
    add({"ando_zhan", R::order, O::sectorial, true, false, M::none, true, "||f(A + B)|| <= sec^3(a) ||f(A) + f(B)||"},
        [](Sample& s) {
          Ops o{s};
          const double k = std::pow(sec(s.angle_ab()), 3);
          return scalar_margin(o.nrm(o.fn(s.a() + s.b())), k * o.nrm(o.fn(s.a()) + o.fn(s.b())));
        });
    add({"f_nabla_norm", R::order, O::sectorial, true, false, M::none, true,
         "cos^3(a) ||f(A) nabla_t f(B)|| <= ||f(A nabla_t B)||"},
        [](Sample& s) {
          Ops o{s};
          const double c3 = std::pow(std::cos(s.angle_ab()), 3);
          return scalar_margin(c3 * o.nrm(o.ari(o.fn(s.a()), o.fn(s.b()), s.t())),
                               o.nrm(o.fn(o.ari(s.a(), s.b(), s.t()))));
        });
    add({"norm_of_sigma", R::order, O::sectorial, true, false, M::none, true,
         "||A s_f B|| <= sec^3(a) (||A|| s_f ||B||)"},
        [](Sample& s) {
          Ops o{s};
          const double na = o.nrm(s.a());
          const double nb = o.nrm(s.b());
          const double k = std::pow(sec(s.angle_ab()), 3);
          return scalar_margin(o.nrm(o.sig(s.a(), s.b())), k * na * real_f(s.f(), nb / na));
        });

    // Identities behind the geometric mean constructions.
    add({"geo_congruence", R::identity, O::sectorial, false, false, M::none, false,
         "measure, congruence and half-line forms of A #_t B agree"},
        [](Sample& s) { return -geometric_mean_paths(s.a(), s.b(), s.t(), s.opt).max_deviation; });
    add({"geo_flip", R::identity, O::sectorial, false, false, M::none, false, "A #_t B = B #_{1-t} A"},
        [](Sample& s) {
          Ops o{s};
          return identity_margin(o.geo(s.a(), s.b(), s.t()), o.geo(s.b(), s.a(), 1.0 - s.t()));
        });
    add({"geo_inverse", R::identity, O::sectorial, false, false, M::none, false,
         "(A #_t B)^{-1} = A^{-1} #_t B^{-1}"},
        [](Sample& s) {
          Ops o{s};
          return identity_margin(inverse(o.geo(s.a(), s.b(), s.t())), o.geo(inverse(s.a()), inverse(s.b()), s.t()));
        });
    add({"geo_neg", R::identity, O::sectorial, false, false, M::none, false,
         "integral and congruence forms of A #_{-t} B agree"},
        [](Sample& s) {
          const Matrix integral = neg_at_order(s.a(), s.b(), s.t(), s.opt.order);
          const Matrix r = principal_sqrt(s.a());
          const Matrix ri = inverse(r);
          const Matrix p = apply_function(power_function(s.t()), ri * s.b() * ri, s.opt);
          return identity_margin(integral, r * inverse(p) * r);
        });
    add({"sigma_congruence", R::identity, O::sectorial, true, false, M::none, false,
         "A s_f B = A^{1/2} f(A^{-1/2} B A^{-1/2}) A^{1/2}"},
        [](Sample& s) {
          Ops o{s};
          return identity_margin(o.sig(s.a(), s.b()), congruence_sigma(s.a(), s.b(), s.f(), s.opt));
        });

    // Positive definite operands.
    add({"pos_jensen", R::order, O::positive, true, false, M::none, false, "<f(A)x, x> <= f(<Ax, x>)"},
        [](Sample& s) {
          Ops o{s};
          const Matrix x = s.x();
          return scalar_margin(inner(o.fn(s.a()), x), real_f(s.f(), inner(s.a(), x)));
        });
    add({"pos_sigma_inner", R::order, O::positive, true, false, M::none, false,
         "<(A s_f B)x, x> <= <Ax, x> s_f <Bx, x>"},
        [](Sample& s) {
          Ops o{s};
          const Matrix x = s.x();
          const cplx r = scalar_sigma(inner(s.a(), x), inner(s.b(), x), s.f(), s.opt.order);
          return scalar_margin(inner(o.sig(s.a(), s.b()), x), r.real());
        });
    add({"pos_sigma_norm", R::order, O::positive, true, false, M::none, true, "||A s_f B|| <= ||A|| s_f ||B||"},
        [](Sample& s) {
          Ops o{s};
          const double na = o.nrm(s.a());
          const double nb = o.nrm(s.b());
          return scalar_margin(o.nrm(o.sig(s.a(), s.b())), na * real_f(s.f(), nb / na));
        });
    add({"pos_amgmhm", R::order, O::positive, true, false, M::none, false,
         "A !_t B <= A s_f B <= A nabla_t B, t = f'(1)"},
        [](Sample& s) {
          Ops o{s};
          const double t = s.f().derivative_at_one;
          const Matrix mid = o.sig(s.a(), s.b());
          return std::min(order_margin(o.har(s.a(), s.b(), t), mid), order_margin(mid, o.ari(s.a(), s.b(), t)));
        });
    add({"pos_ando", R::order, O::positive, true, false, M::any, false, "Phi(A s_f B) <= Phi(A) s_f Phi(B)"},
        [](Sample& s) {
          Ops o{s};
          return order_margin(s.phi(o.sig(s.a(), s.b())), o.sig(s.phi(s.a()), s.phi(s.b())));
        });
    add({"pos_choi", R::order, O::positive, true, false, M::unital, false, "Phi(f(A)) <= f(Phi(A))"},
        [](Sample& s) {
          Ops o{s};
          return order_margin(s.phi(o.fn(s.a())), o.fn(s.phi(s.a())));
        });
    add({"pos_choi_inverse", R::order, O::positive, false, false, M::unital, false, "Phi(A)^{-1} <= Phi(A^{-1})"},
        [](Sample& s) { return order_margin(inverse(s.phi(s.a())), s.phi(inverse(s.a()))); });
    add({"pos_ando_hiai", R::order, O::positive, true, false, M::none, false, "f(A) # f(B) <= f(A nabla B)"},
        [](Sample& s) {
          Ops o{s};
          return order_margin(o.geo(o.fn(s.a()), o.fn(s.b()), 0.5), o.fn(o.ari(s.a(), s.b(), 0.5)));
        });
    add({"pos_f_norm", R::order, O::positive, true, false, M::none, true, "f(||A||) <= ||f(A)||"},
        [](Sample& s) {
          Ops o{s};
          return scalar_margin(real_f(s.f(), o.nrm(s.a())), o.nrm(o.fn(s.a())));
        });
    add({"pos_ando_zhan", R::order, O::positive, true, false, M::none, true, "||f(A + B)|| <= ||f(A) + f(B)||"},
        [](Sample& s) {
          Ops o{s};
          return scalar_margin(o.nrm(o.fn(s.a() + s.b())), o.nrm(o.fn(s.a()) + o.fn(s.b())));
        });
    add({"pos_gumus", R::order, O::positive, false, false, M::none, false,
         "A nabla_t B <= k A #_t B, A #_t B <= k A !_t B, and the shifted two-sided bounds"},
        [](Sample& s) {
          Ops o{s};
          const Bounds bd = joint_bounds(s.a(), s.b());
          const double k = gumus_k(bd.m, bd.M, std::min(s.t(), 1.0 - s.t()));
          const Matrix shift = Matrix::identity(s.spec().dim) * (bd.M * (k - 1.0));
          const Matrix ar = o.ari(s.a(), s.b(), s.t());
          const Matrix g = o.geo(s.a(), s.b(), s.t());
          const Matrix h = o.har(s.a(), s.b(), s.t());
          return std::min({order_margin(ar, k * g), order_margin(g, k * h), order_margin(ar - shift, g),
                           order_margin(g, shift + h)});
        });
    add({"pos_sharpando", R::identity, O::positive, false, false, M::none, false, "(A nabla B) # (A ! B) = A # B"},
        [](Sample& s) {
          Ops o{s};
          return identity_margin(o.geo(o.ari(s.a(), s.b(), 0.5), o.har(s.a(), s.b(), 0.5), 0.5),
                                 o.geo(s.a(), s.b(), 0.5));
        });
    add({"pos_ts", R::order, O::positive, false, false, M::none, false,
         "A #_s (A nabla_t B) <= A nabla_t (A #_s B)"},
        [](Sample& s) {
          Ops o{s};
          return order_margin(o.geo(s.a(), o.ari(s.a(), s.b(), s.t()), s.s()),
                              o.ari(s.a(), o.geo(s.a(), s.b(), s.s()), s.t()));
        });
    add({"pos_ab_norm", R::order, O::positive, false, false, M::none, true, "||AB|| <= ||(A + B)^2|| / 4"},
        [](Sample& s) {
          Ops o{s};
          const Matrix sum = s.a() + s.b();
          return scalar_margin(o.nrm(s.a() * s.b()), 0.25 * o.nrm(sum * sum));
        });
    add({"pos_concave", R::order, O::positive, true, false, M::none, false, "f(A) nabla_t f(B) <= f(A nabla_t B)"},
        [](Sample& s) {
          Ops o{s};
          return order_margin(o.ari(o.fn(s.a()), o.fn(s.b()), s.t()), o.fn(o.ari(s.a(), s.b(), s.t())));
        });
    return v;
  }();
  return entries;
}

inline const CheckEntry& find_check(std::string_view id) {
  for (const CheckEntry& e : catalog_entries())
    if (e.info.id == id) return e;
  throw InvalidParameter("unknown check id '" + std::string(id) + "'");
}

[[noreturn]] inline void rethrow_at(std::exception_ptr ep, std::string_view id, std::size_t index) {
  const std::string where = std::string(id) + " sample " + std::to_string(index) + ": ";
  try {
    std::rethrow_exception(ep);
  } catch (const NumericFailure& e) {
    throw NumericFailure(e.residual(), where + e.what());
  } catch (const PreconditionError& e) {
    throw PreconditionError(e.margin(), where + e.what());
  } catch (const SingularMatrixError& e) {
    throw NumericFailure(0.0, where + e.what());
  } catch (const DomainError& e) {
    throw DomainError(where + e.what());
  } catch (const InvalidParameter& e) {
    throw InvalidParameter(where + e.what());
  } catch (const InvalidInput& e) {
    throw InvalidInput(where + e.what());
  } catch (const std::exception& e) {
    throw NumericFailure(0.0, where + e.what());
  }
}

template <class Fn>
void for_each_index(std::size_t count, unsigned jobs, Fn&& fn) {
  const std::size_t workers = std::min<std::size_t>(std::max(jobs, 1u), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) fn(i);
    });
  for (std::thread& t : pool) t.join();
}

inline void require_function(const std::optional<MonotoneFunction>& f, std::string_view id, const char* which) {
  if (!f) throw InvalidParameter(std::string(id) + ": requires function " + which);
  const double d = f->derivative_at_one;
  if (!(d > 0.0 && d < 1.0)) throw InvalidParameter(std::string(id) + ": " + which + " needs f'(1) in (0, 1)");
}

inline void validate_params(const CheckInfo& info, const CheckParams& p) {
  if (info.needs_f) require_function(p.f, info.id, "f");
  if (info.needs_g) {
    require_function(p.g, info.id, "g");
    if (std::abs(p.f->derivative_at_one - 0.5) > 1e-12 || std::abs(p.g->derivative_at_one - 0.5) > 1e-12)
      throw InvalidParameter(std::string(info.id) + ": f and g must satisfy f'(1) = g'(1) = 1/2");
  }
  for (const auto& w : {p.t, p.s})
    if (w && !(*w > 0.0 && *w < 1.0)) throw InvalidParameter(std::string(info.id) + ": weights must lie in (0, 1)");
  if (p.map && info.map == MapUse::unital && p.map->kind == MapKind::kraus_nonunital)
    throw InvalidParameter(std::string(info.id) + ": requires a unital map");
  if (p.quad_order < 2 || p.quad_order > 512) throw InvalidParameter(std::string(info.id) + ": quadrature order outside [2, 512]");
}

}  // namespace detail

/// Every check id, in catalog order.
inline std::vector<CheckInfo> check_catalog() {
  std::vector<CheckInfo> out;
  for (const auto& e : detail::catalog_entries()) out.push_back(e.info);
  return out;
}

inline const CheckInfo& check_info(std::string_view id) { return detail::find_check(id).info; }

inline bool passes(Relation relation, double min_margin) {
  return relation == Relation::order ? min_margin >= -loewner_tolerance : -min_margin <= identity_tolerance;
}

/// Evaluates one check over spec.count samples; errors carry the first failing sample index.
inline CheckReport run_check(std::string_view id, const EnsembleSpec& spec, const CheckParams& params = {}) {
  const auto start = std::chrono::steady_clock::now();
  const detail::CheckEntry& entry = detail::find_check(id);
  spec.validate();
  detail::validate_params(entry.info, params);

  CheckReport report;
  report.check = std::string(id);
  report.ensemble = spec;
  report.params = params;
  report.samples = spec.count;
  report.margins.assign(spec.count, 0.0);
  std::vector<std::exception_ptr> errors(spec.count);
  std::vector<char> flags(spec.count, 0);

  detail::for_each_index(spec.count, params.jobs, [&](std::size_t i) {
    try {
      detail::Sample sample(spec, params, entry.info, i);
      report.margins[i] = entry.eval(sample);
      flags[i] = sample.flagged;
    } catch (...) {
      errors[i] = std::current_exception();
    }
  });
  for (std::size_t i = 0; i < spec.count; ++i)
    if (errors[i]) detail::rethrow_at(errors[i], id, i);

  report.min_margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < spec.count; ++i) {
    const double m = report.margins[i];
    if (!std::isfinite(m)) throw NumericFailure(m, std::string(id) + " sample " + std::to_string(i) + ": non-finite margin");
    if (m < report.min_margin) {
      report.min_margin = m;
      report.worst_index = i;
    }
    report.flagged += static_cast<std::size_t>(flags[i]);
  }
  {
    CheckParams fine = params;
    fine.quad_order = std::min(2 * params.quad_order, 512);
    double refined = 0.0;
    try {
      detail::Sample sample(spec, fine, entry.info, report.worst_index);
      refined = entry.eval(sample);
    } catch (...) {
      detail::rethrow_at(std::current_exception(), id, report.worst_index);
    }
    const double drift = std::abs(refined - report.min_margin);
    if (drift > 1e-9) {
      std::ostringstream os;
      os << id << " sample " << report.worst_index << ": margin moved by " << drift << " on doubling the quadrature order";
      throw NumericFailure(drift, os.str());
    }
  }
  report.pass = passes(entry.info.relation, report.min_margin);
  report.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return report;
}

/// Runs configs in order; a failing or erroring check is recorded, not thrown.
inline std::vector<CheckReport> run_suite(const std::vector<CheckConfig>& configs, unsigned jobs = 1) {
  std::vector<CheckReport> out;
  out.reserve(configs.size());
  for (const CheckConfig& c : configs) {
    CheckParams p = c.params;
    p.jobs = jobs;
    try {
      out.push_back(run_check(c.id, c.ensemble, p));
    } catch (const std::exception& e) {
      CheckReport r;
      r.check = c.id;
      r.ensemble = c.ensemble;
      r.params = p;
      r.samples = c.ensemble.count;
      r.pass = false;
      r.error = e.what();
      out.push_back(std::move(r));
    }
  }
  return out;
}

inline bool all_pass(const std::vector<CheckReport>& reports) {
  return std::all_of(reports.begin(), reports.end(), [](const CheckReport& r) { return r.pass; });
}

/// Accretive checks (per-sample minimum over the list) and the positive check they reduce to at alpha = 0.
struct DegenerationPair {
  std::vector<std::string_view> accretive;
  std::string_view positive;
};

inline std::vector<DegenerationPair> degeneration_pairs() {
  return {{{"amgmhm"}, "pos_amgmhm"},
          {{"ando_sector"}, "pos_ando"},
          {{"choi_sector"}, "pos_choi"},
          {{"sigma_inner"}, "pos_sigma_inner"},
          {{"f_inner"}, "pos_jensen"},
          {{"f_sharp_nabla"}, "pos_ando_hiai"},
          {{"f_nabla"}, "pos_concave"},
          {{"f_norm_lower"}, "pos_f_norm"},
          {{"ando_zhan"}, "pos_ando_zhan"},
          {{"norm_of_sigma"}, "pos_sigma_norm"},
          {{"gumus_a", "gumus_b", "gumus_c"}, "pos_gumus"},
          {{"mixed_ns"}, "pos_ts"}};
}

inline std::vector<MonotoneFunction> suite_functions() {
  return {power_function(0.3), power_function(0.5), power_function(0.7), uniform_function(), harmonic_function(0.4),
          arithmetic_function(0.6)};
}

/// Every check over dims {1, 2, 3, 5, 8} and angles {0, pi/6, pi/4, pi/3}, 200 samples each.
inline std::vector<CheckConfig> default_suite(std::size_t count = 200, std::uint64_t seed = 2024) {
  const std::size_t dims[] = {1, 2, 3, 5, 8};
  const double angles[] = {0.0, std::numbers::pi / 6, std::numbers::pi / 4, std::numbers::pi / 3};
  const auto fs = suite_functions();
  const MonotoneFunction halves[] = {power_function(0.5), uniform_function()};
  const MonotoneFunction partners[] = {harmonic_function(0.5), arithmetic_function(0.5)};

  std::vector<CheckConfig> out;
  for (const CheckInfo& info : check_catalog()) {
    for (std::size_t n : dims) {
      for (double alpha : angles) {
        if (info.operands == Operands::positive && alpha != 0.0) continue;
        const EnsembleSpec spec{n, alpha, 1.0, 4.0, count, seed};
        if (info.needs_g) {
          for (const auto& f : halves)
            for (const auto& g : partners) {
              CheckParams p;
              p.f = f;
              p.g = g;
              out.push_back({std::string(info.id), spec, p});
            }
        } else if (info.needs_f) {
          for (const auto& f : fs) {
            CheckParams p;
            p.f = f;
            out.push_back({std::string(info.id), spec, p});
          }
        } else {
          out.push_back({std::string(info.id), spec, {}});
        }
      }
    }
  }
  return out;
}

}  // namespace amm
