#pragma once

// Kasteleyn matrix of the honeycomb graph inside an M x N x K hexagon and the
// determinant route to the partition function.
//
// Coordinates. The hexagon is cut out of the triangular lattice spanned by
// e1 = (1, 0) and e2 = (1/2, sqrt 3/2); in lattice coordinates its corners are
// (0,0), (M,0), (M,N), (M-K,N+K), (-K,N+K), (-K,K). Up-triangles are white
// vertices, down-triangles are black. The up-triangle with lower-left corner
// (i, j) is placed at the integer point -3i + (2i + j) I of the complex plane and
// the down-triangle with lower-left corner (i, j) at (-3i - 1) + (2i + j + 1) I.
// This is an affine image of the honeycomb in which one edge class is parallel
// to the real axis; every white vertex w has neighbours w - 1 (horizontal),
// w - 1 + I (up) and w + 2 - I (down).

#include <cstdint>
#include <vector>

#include "hexdimer/model_core.hpp"

namespace hexdimer::kasteleyn {

struct GridPoint {
  std::int64_t re = 0;
  std::int64_t im = 0;
  friend bool operator==(const GridPoint&, const GridPoint&) = default;
};

enum class EdgeDirection { kHorizontal, kUp, kDown };

struct Edge {
  std::size_t white = 0;
  std::size_t black = 0;
  EdgeDirection direction = EdgeDirection::kHorizontal;
};

struct HexEmbedding {
  std::vector<GridPoint> white_vertices;
  std::vector<GridPoint> black_vertices;
  std::vector<Edge> edges;
  /// Number of bounded hexagonal faces; each was checked to have 6 edges.
  std::size_t interior_faces = 0;
  /// Sum of Re w + Im w over the horizontal dimers of the empty-pile matching.
  std::int64_t empty_pile_exponent = 0;

  [[nodiscard]] std::size_t vertex_count() const {
    return white_vertices.size() + black_vertices.size();
  }
};

/// Throws DomainError for an unbounded height.
HexEmbedding build_embedding(const BoxShape& shape);

/// Dense row-major matrix; rows are white vertices, columns black.
class KasteleynMatrix {
 public:
  explicit KasteleynMatrix(std::size_t dim) : dim_{dim}, entries_(dim * dim, 0.0) {}

  [[nodiscard]] std::size_t dim() const { return dim_; }
  double& operator()(std::size_t r, std::size_t c) { return entries_[r * dim_ + c]; }
  [[nodiscard]] double operator()(std::size_t r, std::size_t c) const { return entries_[r * dim_ + c]; }

 private:
  std::size_t dim_;
  std::vector<double> entries_;
};

/// K(w, b) = q^(Re w + Im w) on horizontal edges, 1 on slanted edges.
KasteleynMatrix build_matrix(const HexEmbedding& embedding, double q);

struct LogDeterminant {
  double log_abs = 0.0;
  int sign = 1;
};

/// LU with partial pivoting. Throws NumericalError when a pivot falls below
/// 1e-300 in magnitude.
LogDeterminant log_determinant(KasteleynMatrix matrix);

/// ln Z from ln|det K|, normalised by the empty-pile matching weight. Rows are
/// scaled in the log domain, so large boxes and small q do not underflow.
double kasteleyn_log_partition(const BoxShape& shape, double q);

/// Z = exp(kasteleyn_log_partition). Requires q in (0, 1] and matrix dimension
/// at most 2000.
double kasteleyn_partition(const BoxShape& shape, double q);

}  // namespace hexdimer::kasteleyn
