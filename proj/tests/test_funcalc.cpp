// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <numbers>

#include "amm/funcalc.hpp"
#include "amm/random.hpp"
#include "amm/sector.hpp"
#include "support.hpp"

using namespace amm;
using amm::testing::near;

namespace {

const cplx I(0.0, 1.0);

std::vector<MonotoneFunction> catalog_sample() {
  return {power_function(0.3), power_function(0.5), power_function(0.7), uniform_function(), harmonic_function(0.4),
          arithmetic_function(0.6)};
}

double rel_op(const Matrix& x, const Matrix& y) { return opnorm(x - y) / (1 + opnorm(y)); }

}  // namespace

TEST(GaussJacobi, LegendreOrderTwo) {
  const auto rule = gauss_jacobi_rule(0, 0, 2);
  ASSERT_EQ(rule->nodes.size(), 2u);
  EXPECT_NEAR(rule->nodes[0], 0.5 - 0.5 / std::sqrt(3.0), 1e-15);
  EXPECT_NEAR(rule->nodes[1], 0.5 + 0.5 / std::sqrt(3.0), 1e-15);
  EXPECT_NEAR(rule->weights[0], 0.5, 1e-15);
  EXPECT_NEAR(rule->weights[1], 0.5, 1e-15);
}

TEST(GaussJacobi, MomentsMatchBeta) {
  // t^k moments of t^a (1-t)^b are B(a+k+1, b+1); exact through degree 2n-1.
  const double pairs[][2] = {{0, 0}, {-0.5, -0.5}, {-0.7, -0.3}, {-0.1, -0.9}, {1.5, 0.25}, {-0.5, 2}};
  for (const auto& p : pairs) {
    for (int order : {2, 5, 40, 80}) {
      const auto rule = gauss_jacobi_rule(p[0], p[1], order);
      double sum = 0;
      for (double w : rule->weights) {
        EXPECT_GT(w, 0.0);
        sum += w;
      }
      EXPECT_NEAR(sum, beta_moment(p[0], p[1]), 1e-13 * beta_moment(p[0], p[1]));
      for (int k = 1; k < std::min(2 * order, 12); ++k) {
        double m = 0;
        for (std::size_t j = 0; j < rule->nodes.size(); ++j) m += rule->weights[j] * std::pow(rule->nodes[j], k);
        const double exact = beta_moment(p[0] + k, p[1]);
        EXPECT_NEAR(m, exact, 1e-12 * (1 + exact)) << p[0] << "," << p[1] << " order " << order << " k " << k;
      }
    }
  }
}

TEST(GaussJacobi, PowerHalfMean) {
  const auto rule = gauss_jacobi_rule(-0.5, -0.5, 40);
  double m = 0;
  for (std::size_t j = 0; j < rule->nodes.size(); ++j) m += rule->weights[j] * rule->nodes[j];
  EXPECT_NEAR(m / std::numbers::pi, 0.5, 1e-12);
}

TEST(GaussJacobi, RejectsBadParameters) {
  EXPECT_THROW(gauss_jacobi_rule(-1, 0, 10), InvalidParameter);
  EXPECT_THROW(gauss_jacobi_rule(0, -1.5, 10), InvalidParameter);
  EXPECT_THROW(gauss_jacobi_rule(0, 0, 1), InvalidParameter);
  EXPECT_THROW(gauss_jacobi_rule(0, 0, 513), InvalidParameter);
}

TEST(Catalog, Examples) {
  const auto f = power_function(0.5);
  const auto& d = *f.measure.density;
  const double at_half = d.coeff * std::pow(0.5, d.exp0) * std::pow(0.5, d.exp1);
  EXPECT_NEAR(at_half, 2 / std::numbers::pi, 1e-15);
  EXPECT_NEAR(at_half, 0.636620, 1e-6);
  double atom_mass = 0;
  for (const Atom& a : arithmetic_function(0.3).measure.atoms) atom_mass += a.w;
  EXPECT_DOUBLE_EQ(atom_mass, 1.0);
  for (double l : {0.1, 0.3, 0.5, 0.9}) EXPECT_NEAR(measure_mean(power_function(l).measure), l, 1e-12);
}

TEST(Catalog, RejectsOutOfRange) {
  EXPECT_THROW(power_function(0), InvalidParameter);
  EXPECT_THROW(power_function(1), InvalidParameter);
  EXPECT_THROW(arithmetic_function(1.2), InvalidParameter);
  EXPECT_THROW(harmonic_function(-0.1), InvalidParameter);
  EXPECT_THROW(catalog("exp", 0.5), InvalidParameter);
  EXPECT_EQ(catalog("uniform").label(), "uniform");
  EXPECT_EQ(catalog("power", 0.25).label(), "power(0.25)");
}

TEST(Catalog, Invariants) {
  for (const auto& f : catalog_sample()) {
    EXPECT_NEAR(std::abs(f.scalar_form(1.0) - 1.0), 0, 1e-15) << f.label();
    EXPECT_NEAR(measure_mass(f.measure), 1, 1e-10) << f.label();
    EXPECT_NEAR(measure_mean(f.measure), f.derivative_at_one, 1e-10) << f.label();
  }
}

TEST(MeasureMass, Examples) {
  EXPECT_NEAR(measure_mass(power_function(0.5).measure), 1, 1e-10);
  MeasureSpec atom{{{0.5, 1.0}}, std::nullopt};
  EXPECT_DOUBLE_EQ(measure_mass(atom), 1);
  MeasureSpec flat{{}, JacobiDensity{1, 0, 0, {}}};
  EXPECT_NEAR(measure_mass(flat), 1, 1e-13);
  MeasureSpec bad{{}, JacobiDensity{1, -1, 0, {}}};
  EXPECT_THROW(measure_mass(bad), InvalidParameter);
  MeasureSpec dup{{{0.5, 0.5}, {0.5, 0.5}}, std::nullopt};
  EXPECT_THROW(measure_mass(dup), InvalidParameter);
}

TEST(MeasureMass, SmoothFactor) {
  // 2t on [0,1] has mass 1 and mean 2/3.
  MeasureSpec mu{{}, JacobiDensity{2, 0, 0, [](double t) { return t; }}};
  EXPECT_NEAR(measure_mass(mu), 1, 1e-13);
  EXPECT_NEAR(measure_mean(mu), 2.0 / 3.0, 1e-13);
}

TEST(HarmonicUnit, Examples) {
  const Matrix a = Matrix::from_rows({{2, I}, {0, 3}});
  EXPECT_EQ(harmonic_unit(0, a), Matrix::identity(2));
  EXPECT_EQ(harmonic_unit(1, a), a);
  EXPECT_TRUE(near(harmonic_unit(0.5, Matrix::scalar(2)), Matrix::scalar(4.0 / 3.0), 1e-15));
}

TEST(ApplyFunction, Examples) {
  EXPECT_TRUE(near(apply_function(power_function(0.5), Matrix::diagonal({4, 9})), Matrix::diagonal({2, 3}), 1e-12));
  const EnsembleSpec spec{3, 1.0, 1, 4, 3, 5};
  const Matrix a = random_sectorial(spec, 1);
  Matrix expected = Matrix::identity(3) * 0.7;
  expected.add_scaled(0.3, a);
  EXPECT_TRUE(near(apply_function(arithmetic_function(0.3), a), expected, 1e-14));
  const cplx oracle = std::polar(std::pow(2.0, 0.25), std::numbers::pi / 8);
  EXPECT_TRUE(near(apply_function(power_function(0.5), Matrix::scalar({1, 1})), Matrix::scalar(oracle), 1e-12));
}

TEST(ApplyFunction, Preconditions) {
  EXPECT_THROW(apply_function(power_function(0.5), Matrix::scalar(I)), PreconditionError);
  EXPECT_THROW(apply_function(power_function(0.5), Matrix(2, 3)), InvalidInput);
}

TEST(ApplyFunction, NormalizationAndScalarization) {
  for (const auto& f : catalog_sample()) {
    EXPECT_TRUE(near(apply_function(f, Matrix::identity(3)), Matrix::identity(3), 1e-10)) << f.label();
    const std::vector<cplx> d = {{1, 1}, {3, -0.5}, {0.5, 0.2}};
    Matrix expected(3);
    for (std::size_t i = 0; i < 3; ++i) expected(i, i) = scalar_eval(f, d[i]);
    EXPECT_TRUE(near(apply_function(f, Matrix::diagonal(d)), expected, 1e-9)) << f.label();
  }
}

TEST(ApplyFunction, UnitaryCovariance) {
  const EnsembleSpec spec{4, std::numbers::pi / 4, 1, 4, 5, 12};
  for (std::size_t i = 0; i < spec.count; ++i) {
    Rng rng = make_rng(i, 0, 77);
    const Matrix u = random_unitary(rng, 4);
    const Matrix a = random_sectorial(spec, i);
    for (const auto& f : catalog_sample()) {
      EXPECT_LE(norm_inf(apply_function(f, u * a * u.adjoint()) - u * apply_function(f, a) * u.adjoint()), 1e-9);
    }
  }
}

TEST(ApplyFunction, RealPartBounds) {
  for (double alpha : {std::numbers::pi / 6, std::numbers::pi / 3}) {
    const EnsembleSpec spec{3, alpha, 1, 4, 10, 3};
    for (std::size_t i = 0; i < spec.count; ++i) {
      const Matrix a = random_sectorial(spec, i);
      const double sec2 = 1.0 / std::pow(std::cos(sectorial_angle(a)), 2);
      for (const auto& f : catalog_sample()) {
        const Matrix lhs = apply_function(f, hermitian_part(a));
        const Matrix re = hermitian_part(apply_function(f, a));
        EXPECT_TRUE(loewner_leq(lhs, re).holds) << f.label();
        EXPECT_TRUE(loewner_leq(re, sec2 * lhs).holds) << f.label();
      }
    }
  }
}

TEST(ScalarEval, Examples) {
  EXPECT_NEAR(std::abs(scalar_eval(power_function(0.5), 4.0) - 2.0), 0, 1e-15);
  EXPECT_NEAR(scalar_eval(uniform_function(), 2.0).real(), 2 * std::log(2.0), 1e-15);
  EXPECT_NEAR(scalar_eval(uniform_function(), 2.0).real(), 1.386294, 1e-6);
  const cplx h = scalar_eval(harmonic_function(0.5), {1, 1});
  EXPECT_NEAR(h.real(), 1.2, 1e-15);
  EXPECT_NEAR(h.imag(), 0.4, 1e-15);
  EXPECT_THROW(scalar_eval(power_function(0.5), -1.0), DomainError);
  EXPECT_THROW(scalar_eval(power_function(0.5), 0.0), DomainError);
}

TEST(ScalarEval, UniformNearOne) {
  for (double eps : {1e-3, 1e-5, 1e-8, 0.0}) {
    const cplx z(1 + eps, eps);
    const cplx q = scalar_quadrature(uniform_function(), z);
    EXPECT_LE(std::abs(scalar_eval(uniform_function(), z) - q), 1e-13);
  }
}

TEST(ScalarEval, MatchesOneByOneApply) {
  for (const auto& f : catalog_sample()) {
    for (cplx z : {cplx(0.5, 0.3), cplx(2, -1.5), cplx(4, 4)}) {
      const cplx m = apply_function(f, Matrix::scalar(z))(0, 0);
      EXPECT_LE(std::abs(m - scalar_eval(f, z)), 1e-9) << f.label() << " " << z;
    }
  }
}

TEST(ChooseContour, Examples) {
  const auto g1 = choose_contour(Matrix::identity(2));
  EXPECT_GT(g1.center - g1.radius, 0);
  EXPECT_LT(std::abs(1.0 - g1.center), g1.radius);
  EXPECT_GE(g1.nodes, 16);
  const auto g2 = choose_contour(Matrix::diagonal({1, 4}));
  EXPECT_GT(g2.center - g2.radius, 0);
  for (double l : {1.0, 4.0}) EXPECT_LT(std::abs(l - g2.center), g2.radius);
  EXPECT_THROW(choose_contour(Matrix::scalar(I)), PreconditionError);
}

TEST(ChooseContour, EnclosesSpectrumOfWideSectors) {
  // Eigenvalues lie in W(A); probe with the Rayleigh quotients of random vectors as well.
  const EnsembleSpec spec{5, 1.4, 0.5, 8, 20, 4};
  for (std::size_t i = 0; i < spec.count; ++i) {
    const Matrix a = random_sectorial(spec, i);
    const auto g = choose_contour(a);
    EXPECT_GT(g.center - g.radius, 0);
    Rng rng = make_rng(i, 0, 3);
    for (int k = 0; k < 200; ++k) {
      const Matrix x = random_unit_vector(rng, 5);
      const cplx w = (x.adjoint() * a * x)(0, 0);
      EXPECT_LT(std::abs(w - g.center), g.radius);
    }
  }
}

TEST(DunfordApply, Examples) {
  const EnsembleSpec spec{3, 1.0, 1, 4, 3, 5};
  const Matrix a = random_sectorial(spec, 2);
  Matrix expected = Matrix::identity(3) * 0.4;
  expected.add_scaled(0.6, a);
  EXPECT_TRUE(near(dunford_apply(arithmetic_function(0.6), a), expected, 1e-10));
  EXPECT_TRUE(near(dunford_apply(power_function(0.5), Matrix::diagonal({4, 9})), Matrix::diagonal({2, 3}), 1e-10));
}

TEST(DunfordApply, AgreesWithHarmonicRepresentation) {
  const auto fs = catalog_sample();
  for (std::size_t n : {1, 2, 3, 5, 8}) {
    for (double alpha : {0.0, std::numbers::pi / 4, std::numbers::pi / 3}) {
      const EnsembleSpec spec{n, alpha, 1, 4, 6, 99};
      for (std::size_t i = 0; i < spec.count; ++i) {
        const Matrix a = random_sectorial(spec, i);
        const auto viaContour = dunford_apply_many(fs, a, choose_contour(a));
        for (std::size_t q = 0; q < fs.size(); ++q) {
          EXPECT_LE(rel_op(viaContour[q], apply_function(fs[q], a)), 1e-8) << fs[q].label() << " n=" << n;
        }
      }
    }
  }
}
