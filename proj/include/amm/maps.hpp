// SPDX-License-Identifier: Apache-2.0
//
// Positive linear maps from n x n to r x r matrices.
#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "amm/linalg.hpp"
#include "amm/random.hpp"

namespace amm {

/// Phi(A) = V* A V with V* V = I.
struct Compression {
  Matrix v;
};

/// Phi(A) = sum_i V_i* A V_i.
struct Kraus {
  std::vector<Matrix> ops;
};

/// Keeps the diagonal blocks of A; blocks partition {0, ..., n-1}.
struct Pinching {
  std::size_t n = 0;
  std::vector<std::vector<std::size_t>> blocks;
};

/// Phi(A) = [<Ax, x>] for a unit vector x.
struct VectorState {
  Matrix x;
};

/// Phi(A) = [tr(A) / n].
struct NormalizedTrace {
  std::size_t n = 0;
};

using PositiveLinearMap = std::variant<Compression, Kraus, Pinching, VectorState, NormalizedTrace>;

enum class MapKind { compression, kraus, kraus_nonunital, pinching, vector_state, normalized_trace };

inline constexpr MapKind all_map_kinds[] = {MapKind::compression,  MapKind::kraus,        MapKind::kraus_nonunital,
                                            MapKind::pinching,     MapKind::vector_state, MapKind::normalized_trace};
inline constexpr MapKind unital_map_kinds[] = {MapKind::compression, MapKind::kraus, MapKind::pinching,
                                               MapKind::vector_state, MapKind::normalized_trace};

inline std::string to_string(MapKind k) {
  switch (k) {
    case MapKind::compression: return "compression";
    case MapKind::kraus: return "kraus";
    case MapKind::kraus_nonunital: return "kraus_nonunital";
    case MapKind::pinching: return "pinching";
    case MapKind::vector_state: return "vector_state";
    case MapKind::normalized_trace: return "normalized_trace";
  }
  return "?";
}

inline MapKind map_kind_from_string(const std::string& s) {
  for (MapKind k : all_map_kinds)
    if (to_string(k) == s) return k;
  throw InvalidParameter("unknown map variant '" + s + "'");
}

inline std::size_t map_input_dim(const PositiveLinearMap& phi) {
  return std::visit(
      [](const auto& m) -> std::size_t {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, Compression>) return m.v.rows();
        if constexpr (std::is_same_v<T, Kraus>) return m.ops.empty() ? 0 : m.ops.front().rows();
        if constexpr (std::is_same_v<T, Pinching>) return m.n;
        if constexpr (std::is_same_v<T, VectorState>) return m.x.rows();
        if constexpr (std::is_same_v<T, NormalizedTrace>) return m.n;
      },
      phi);
}

inline std::size_t map_output_dim(const PositiveLinearMap& phi) {
  return std::visit(
      [](const auto& m) -> std::size_t {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, Compression>) return m.v.cols();
        if constexpr (std::is_same_v<T, Kraus>) return m.ops.empty() ? 0 : m.ops.front().cols();
        if constexpr (std::is_same_v<T, Pinching>) return m.n;
        if constexpr (std::is_same_v<T, VectorState> || std::is_same_v<T, NormalizedTrace>) return 1;
      },
      phi);
}

inline Matrix apply_map(const PositiveLinearMap& phi, const Matrix& a) {
  require_square(a, "apply_map");
  if (a.size() != map_input_dim(phi)) {
    throw InvalidParameter("apply_map: map expects " + std::to_string(map_input_dim(phi)) + "x" +
                           std::to_string(map_input_dim(phi)) + " input, got " + describe(a));
  }
  return std::visit(
      [&](const auto& m) -> Matrix {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, Compression>) {
          return m.v.adjoint() * a * m.v;
        } else if constexpr (std::is_same_v<T, Kraus>) {
          Matrix out(m.ops.front().cols());
          for (const Matrix& v : m.ops) out += v.adjoint() * a * v;
          return out;
        } else if constexpr (std::is_same_v<T, Pinching>) {
          Matrix out(m.n);
          for (const auto& block : m.blocks)
            for (std::size_t i : block)
              for (std::size_t j : block) out(i, j) = a(i, j);
          return out;
        } else if constexpr (std::is_same_v<T, VectorState>) {
          return m.x.adjoint() * a * m.x;
        } else {
          return Matrix::scalar(a.trace() / static_cast<double>(m.n));
        }
      },
      phi);
}

inline bool is_unital(const PositiveLinearMap& phi) {
  const Matrix out = apply_map(phi, Matrix::identity(map_input_dim(phi)));
  return norm_inf(out - Matrix::identity(out.size())) <= 1e-12;
}

/// Output dimension used when none is requested.
inline std::size_t default_output_dim(MapKind kind, std::size_t dim_in) {
  switch (kind) {
    case MapKind::compression:
    case MapKind::kraus:
    case MapKind::kraus_nonunital: return std::max<std::size_t>(1, (dim_in + 1) / 2);
    case MapKind::pinching: return dim_in;
    case MapKind::vector_state:
    case MapKind::normalized_trace: return 1;
  }
  return 1;
}

inline PositiveLinearMap random_map(std::size_t dim_in, std::size_t dim_out, MapKind kind, std::uint64_t seed) {
  if (dim_in < 1 || dim_out < 1) throw InvalidParameter("random_map: dimensions must be positive");
  Rng rng = make_rng(seed, 0, stream::map);
  constexpr std::size_t kraus_terms = 3;
  switch (kind) {
    case MapKind::compression:
      if (dim_out > dim_in) throw InvalidParameter("random_map: compression needs dim_out <= dim_in");
      return Compression{random_isometry(rng, dim_in, dim_out)};
    case MapKind::kraus: {
      std::vector<Matrix> ops;
      Matrix s(dim_out);
      for (std::size_t k = 0; k < kraus_terms; ++k) {
        ops.push_back(random_gaussian(rng, dim_in, dim_out));
        s += ops.back().adjoint() * ops.back();
      }
      // Right-multiplying by S^{-1/2} makes sum V_i* V_i = I.
      const Matrix root_inv = hermitian_apply(hermitian_eigen(hermitian_part(s)), [](double v) { return 1.0 / std::sqrt(v); });
      for (Matrix& v : ops) v = v * root_inv;
      return Kraus{std::move(ops)};
    }
    case MapKind::kraus_nonunital: {
      std::vector<Matrix> ops;
      const double scale = 1.0 / std::sqrt(static_cast<double>(kraus_terms * dim_in));
      for (std::size_t k = 0; k < kraus_terms; ++k) ops.push_back(random_gaussian(rng, dim_in, dim_out) * scale);
      return Kraus{std::move(ops)};
    }
    case MapKind::pinching: {
      if (dim_out != dim_in) throw InvalidParameter("random_map: pinching needs dim_out == dim_in");
      Pinching p{dim_in, {}};
      std::vector<std::size_t> current{0};
      for (std::size_t i = 1; i < dim_in; ++i) {
        if (uniform(rng, 0.0, 1.0) < 0.5) {
          p.blocks.push_back(std::move(current));
          current.clear();
        }
        current.push_back(i);
      }
      p.blocks.push_back(std::move(current));
      return p;
    }
    case MapKind::vector_state:
      if (dim_out != 1) throw InvalidParameter("random_map: vector_state has output dimension 1");
      return VectorState{random_unit_vector(rng, dim_in)};
    case MapKind::normalized_trace:
      if (dim_out != 1) throw InvalidParameter("random_map: normalized_trace has output dimension 1");
      return NormalizedTrace{dim_in};
  }
  throw InvalidParameter("random_map: unknown variant");
}

}  // namespace amm
