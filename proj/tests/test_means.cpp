// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <numbers>

#include "amm/means.hpp"
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

struct Pair {
  Matrix a, b;
};

Pair draw(std::size_t n, double alpha, std::size_t i, std::uint64_t seed = 17) {
  const EnsembleSpec spec{n, alpha, 1, 4, i + 1, seed};
  return {random_sectorial(spec, i, stream::a), random_sectorial(spec, i, stream::b)};
}

}  // namespace

TEST(HarmonicMean, Examples) {
  EXPECT_TRUE(near(harmonic_mean(Matrix::scalar(2), Matrix::scalar(8), 0.5), Matrix::scalar(3.2), 1e-15));
  const auto [a, b] = draw(3, 1.0, 0);
  EXPECT_EQ(harmonic_mean(a, b, 0), a);
  EXPECT_EQ(harmonic_mean(a, b, 1), b);
  for (double t : {0.2, 0.5, 0.9}) EXPECT_TRUE(near(harmonic_mean(a, a, t), a, 1e-13));
  EXPECT_THROW(harmonic_mean(Matrix::scalar(I), b.size() == 1 ? b : Matrix::scalar(1), 0.5), PreconditionError);
  EXPECT_THROW(harmonic_mean(a, b, 1.5), InvalidParameter);
}

TEST(HarmonicMean, MatchesDefinitionAndIsAccretive) {
  for (std::size_t i = 0; i < 10; ++i) {
    const auto [a, b] = draw(4, std::numbers::pi / 3, i);
    const Matrix direct = inverse(0.7 * inverse(a) + 0.3 * inverse(b));
    EXPECT_TRUE(near(harmonic_mean(a, b, 0.3), direct, 1e-12));
    EXPECT_TRUE(is_accretive(direct).accretive);
  }
}

TEST(ArithmeticMean, Examples) {
  EXPECT_TRUE(near(arithmetic_mean(Matrix::identity(2), 3.0 * Matrix::identity(2), 0.5), 2.0 * Matrix::identity(2), 0));
  const auto [a, b] = draw(3, 1.0, 1);
  EXPECT_EQ(arithmetic_mean(a, b, 1), b);
  EXPECT_TRUE(near(hermitian_part(arithmetic_mean(a, b, 0.3)),
                   arithmetic_mean(hermitian_part(a), hermitian_part(b), 0.3), 1e-15));
}

TEST(SigmaMean, Examples) {
  const auto [a, b] = draw(3, 1.0, 2);
  EXPECT_TRUE(near(sigma_mean(a, b, arithmetic_function(0.3)), arithmetic_mean(a, b, 0.3), 1e-14));
  for (const auto& f : catalog_sample()) EXPECT_TRUE(near(sigma_mean(a, a, f), a, 1e-9)) << f.label();
  EXPECT_TRUE(near(sigma_mean(Matrix::scalar(4), Matrix::scalar(9), power_function(0.5)), Matrix::scalar(6), 1e-12));
}

TEST(CongruenceSigma, Examples) {
  const auto [a, b] = draw(3, 1.0, 3);
  const auto f = power_function(0.3);
  EXPECT_TRUE(near(congruence_sigma(Matrix::identity(3), b, f), apply_function(f, b), 1e-12));
  EXPECT_TRUE(near(congruence_sigma(Matrix::diagonal({1, 4}), Matrix::diagonal({4, 1}), power_function(0.5)),
                   Matrix::diagonal({2, 2}), 1e-12));
  // a (b/a)^{1/2} with principal branches: (1+i) * (-i)^{1/2} = sqrt(2).
  const cplx oracle = cplx(1, 1) * std::pow(cplx(1, -1) / cplx(1, 1), 0.5);
  EXPECT_NEAR(std::abs(oracle - std::sqrt(2.0)), 0, 1e-15);
  EXPECT_TRUE(near(congruence_sigma(Matrix::scalar({1, 1}), Matrix::scalar({1, -1}), power_function(0.5)),
                   Matrix::scalar(oracle), 1e-12));
}

TEST(SigmaMean, AgreesWithCongruence) {
  for (std::size_t n : {1, 2, 3, 5, 8}) {
    for (std::size_t i = 0; i < 4; ++i) {
      const auto [a, b] = draw(n, std::numbers::pi / 3, i);
      for (const auto& f : catalog_sample()) {
        EXPECT_LE(relative_deviation(sigma_mean(a, b, f), congruence_sigma(a, b, f)), 1e-8) << f.label() << " n=" << n;
      }
    }
  }
}

TEST(GeometricMean, Examples) {
  EXPECT_TRUE(near(geometric_mean(Matrix::scalar(4), Matrix::scalar(9), 0.5), Matrix::scalar(6), 1e-12));
  EXPECT_TRUE(near(drury_half(Matrix::scalar(4), Matrix::scalar(9)), Matrix::scalar(6), 1e-12));
  const auto [a, b] = draw(3, 1.0, 4);
  EXPECT_TRUE(near(drury_half(a, a), a, 1e-12));
  EXPECT_LE(relative_deviation(drury_half(a, b), geometric_mean(a, b, 0.5)), 1e-7);
  EXPECT_THROW(geometric_mean(a, b, 1.0), InvalidParameter);
}

TEST(GeometricMean, ThreePathsAgree) {
  for (std::size_t n : {1, 2, 3, 5, 8}) {
    for (double alpha : {0.0, std::numbers::pi / 6, std::numbers::pi / 3}) {
      for (std::size_t i = 0; i < 3; ++i) {
        const auto [a, b] = draw(n, alpha, i, 5);
        for (double l : {0.1, 0.25, 0.5, 0.75, 0.9}) {
          EXPECT_LE(geometric_mean_paths(a, b, l).max_deviation, 1e-8) << n << " " << l;
        }
      }
    }
  }
}

TEST(GeometricMean, FlipAndInversion) {
  for (std::size_t i = 0; i < 10; ++i) {
    const auto [a, b] = draw(4, std::numbers::pi / 3, i, 8);
    for (double l : {0.1, 0.5, 0.75}) {
      const Matrix g = geometric_mean(a, b, l);
      EXPECT_LE(relative_deviation(g, geometric_mean(b, a, 1 - l)), 1e-8);
      EXPECT_LE(relative_deviation(inverse(g), geometric_mean(inverse(a), inverse(b), l)), 1e-8);
    }
    EXPECT_LE(relative_deviation(harmonic_mean(a, b, 0.3), harmonic_mean(b, a, 0.7)), 1e-12);
  }
}

TEST(SigmaMean, TransformerIdentity) {
  for (std::size_t i = 0; i < 10; ++i) {
    const auto [a, b] = draw(3, std::numbers::pi / 4, i, 21);
    Rng rng = make_rng(21, i, stream::c);
    const Matrix c = random_gaussian(rng, 3, 3) + Matrix::identity(3);
    for (const auto& f : catalog_sample()) {
      const Matrix lhs = c.adjoint() * sigma_mean(a, b, f) * c;
      const Matrix rhs = sigma_mean(c.adjoint() * a * c, c.adjoint() * b * c, f, {default_quad_order, true, false});
      EXPECT_LE(relative_deviation(lhs, rhs), 1e-7) << f.label();
    }
  }
}

TEST(SigmaMean, PositiveDegeneration) {
  for (std::size_t i = 0; i < 10; ++i) {
    const auto [a, b] = draw(4, 0.0, i, 33);
    for (const auto& f : catalog_sample()) {
      const double t = f.derivative_at_one;
      const Matrix s = sigma_mean(a, b, f);
      EXPECT_TRUE(loewner_leq(harmonic_mean(a, b, t), s).holds) << f.label();
      EXPECT_TRUE(loewner_leq(s, arithmetic_mean(a, b, t)).holds) << f.label();
    }
    const Matrix lhs = geometric_mean(arithmetic_mean(a, b, 0.5), harmonic_mean(a, b, 0.5), 0.5);
    EXPECT_LE(relative_deviation(lhs, geometric_mean(a, b, 0.5)), 1e-8);
  }
}

TEST(GeometricNeg, Examples) {
  const auto [a, b] = draw(3, 1.0, 5);
  for (double l : {0.25, 0.5}) EXPECT_TRUE(near(geometric_neg(a, a, l), a, 1e-10));
  EXPECT_TRUE(near(geometric_neg(Matrix::scalar(4), Matrix::scalar(9), 0.5), Matrix::scalar(8.0 / 3.0), 1e-12));
  const Matrix d = geometric_neg(Matrix::diagonal({2, 5}), Matrix::diagonal({3, 0.5}), 0.3);
  EXPECT_NEAR(d(0, 0).real(), std::pow(2.0, 1.3) * std::pow(3.0, -0.3), 1e-12 * std::abs(d(0, 0)));
  EXPECT_NEAR(d(1, 1).real(), std::pow(5.0, 1.3) * std::pow(0.5, -0.3), 1e-12 * std::abs(d(1, 1)));
  EXPECT_NEAR(std::abs(d(0, 1)), 0, 1e-14);
}

TEST(GeometricNeg, SectorialEnsemble) {
  for (std::size_t n : {2, 5, 8}) {
    for (std::size_t i = 0; i < 4; ++i) {
      const auto [a, b] = draw(n, std::numbers::pi / 3, i, 44);
      for (double l : {0.1, 0.5, 0.9}) EXPECT_NO_THROW(geometric_neg(a, b, l)) << n << " " << l;
    }
  }
}
