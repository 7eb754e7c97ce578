// SPDX-License-Identifier: Apache-2.0
//
// Counter-based seeding: every draw is a pure function of (seed, index, stream).
#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "amm/linalg.hpp"

namespace amm {

/// Independent streams drawn for one sample index.
namespace stream {
inline constexpr std::uint64_t a = 0;
inline constexpr std::uint64_t b = 1;
inline constexpr std::uint64_t c = 2;
inline constexpr std::uint64_t d = 3;
inline constexpr std::uint64_t aux = 4;
inline constexpr std::uint64_t vector = 5;
inline constexpr std::uint64_t map = 6;
inline constexpr std::uint64_t weights = 7;
}  // namespace stream

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index, std::uint64_t stream_id) {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ index);
  h = splitmix64(h ^ (stream_id * 0xd1b54a32d192ed03ULL));
  return h;
}

using Rng = std::mt19937_64;

inline Rng make_rng(std::uint64_t seed, std::uint64_t index, std::uint64_t stream_id) {
  return Rng(mix_seed(seed, index, stream_id));
}

inline double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline double gaussian(Rng& rng) { return std::normal_distribution<double>(0.0, 1.0)(rng); }

/// Matrix with i.i.d. standard complex Gaussian entries.
inline Matrix random_gaussian(Rng& rng, std::size_t rows, std::size_t cols) {
  Matrix g(rows, cols);
  for (cplx& z : g.data()) {
    const double re = gaussian(rng);
    const double im = gaussian(rng);
    z = cplx(re, im) / std::sqrt(2.0);
  }
  return g;
}

/// First k orthonormal columns from modified Gram-Schmidt on a Gaussian n x k matrix.
inline Matrix random_isometry(Rng& rng, std::size_t n, std::size_t k) {
  Matrix q = random_gaussian(rng, n, k);
  for (std::size_t j = 0; j < k; ++j) {
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t p = 0; p < j; ++p) {
        cplx dot = 0.0;
        for (std::size_t i = 0; i < n; ++i) dot += std::conj(q(i, p)) * q(i, j);
        for (std::size_t i = 0; i < n; ++i) q(i, j) -= dot * q(i, p);
      }
    }
    double nrm = 0.0;
    for (std::size_t i = 0; i < n; ++i) nrm += std::norm(q(i, j));
    nrm = std::sqrt(nrm);
    for (std::size_t i = 0; i < n; ++i) q(i, j) /= nrm;
  }
  return q;
}

/// Haar-distributed unitary.
inline Matrix random_unitary(Rng& rng, std::size_t n) { return random_isometry(rng, n, n); }

/// Hermitian matrix from the Gaussian unitary ensemble.
inline Matrix random_hermitian(Rng& rng, std::size_t n) {
  const Matrix g = random_gaussian(rng, n, n);
  return hermitian_part(g);
}

/// Unit vector drawn uniformly from the complex sphere.
inline Matrix random_unit_vector(Rng& rng, std::size_t n) {
  Matrix x = random_gaussian(rng, n, 1);
  x /= norm_fro(x);
  return x;
}

}  // namespace amm
