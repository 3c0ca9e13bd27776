#include "hexdimer/kasteleyn.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <utility>

#include "hexdimer/error.hpp"

namespace hexdimer::kasteleyn {

namespace {

using Cell = std::pair<std::int64_t, std::int64_t>;

struct Hexagon {
  std::int64_t m, n, k;

  // Corners (0,0), (m,0), (m,n), (m-k,n+k), (-k,n+k), (-k,k) in lattice
  // coordinates; the region is an intersection of three slabs.
  [[nodiscard]] bool contains(std::int64_t x, std::int64_t y) const {
    return y >= 0 && y <= n + k && x >= -k && x <= m && x + y >= 0 && x + y <= m + n;
  }
  [[nodiscard]] bool has_up(std::int64_t i, std::int64_t j) const {
    return contains(i, j) && contains(i + 1, j) && contains(i, j + 1);
  }
  [[nodiscard]] bool has_down(std::int64_t i, std::int64_t j) const {
    return contains(i + 1, j) && contains(i, j + 1) && contains(i + 1, j + 1);
  }
};

GridPoint white_position(std::int64_t i, std::int64_t j) { return {-3 * i, 2 * i + j}; }
GridPoint black_position(std::int64_t i, std::int64_t j) { return {-3 * i - 1, 2 * i + j + 1}; }

constexpr std::size_t kMaxDimension = 2000;

}  // namespace

HexEmbedding build_embedding(const BoxShape& shape) {
  if (shape.k.is_unbounded()) {
    throw DomainError("Kasteleyn embedding needs a finite box height");
  }
  const Hexagon hex{shape.m, shape.n, shape.k.value()};

  HexEmbedding emb;
  std::map<Cell, std::size_t> white_index;
  std::map<Cell, std::size_t> black_index;
  for (std::int64_t j = -1; j <= hex.n + hex.k; ++j) {
    for (std::int64_t i = -hex.k - 1; i <= hex.m; ++i) {
      if (hex.has_up(i, j)) {
        white_index.emplace(Cell{i, j}, emb.white_vertices.size());
        emb.white_vertices.push_back(white_position(i, j));
      }
      if (hex.has_down(i, j)) {
        black_index.emplace(Cell{i, j}, emb.black_vertices.size());
        emb.black_vertices.push_back(black_position(i, j));
      }
    }
  }
  if (emb.white_vertices.size() != emb.black_vertices.size()) {
    throw NumericalError("hexagon embedding is unbalanced; no perfect matching exists");
  }

  for (const auto& [cell, w] : white_index) {
    const auto [i, j] = cell;
    const std::pair<Cell, EdgeDirection> neighbours[] = {
        {{i, j - 1}, EdgeDirection::kHorizontal},
        {{i, j}, EdgeDirection::kUp},
        {{i - 1, j}, EdgeDirection::kDown},
    };
    for (const auto& [nb, dir] : neighbours) {
      if (auto it = black_index.find(nb); it != black_index.end()) {
        emb.edges.push_back(Edge{w, it->second, dir});
      }
    }
  }

  // Bounded faces sit at interior lattice points, each surrounded by three
  // up- and three down-triangles. Every face must be a 6-cycle: 6 = 2 mod 4
  // edges, so all-positive weights satisfy the Kasteleyn sign rule.
  std::set<std::pair<std::size_t, std::size_t>> edge_set;
  for (const auto& e : emb.edges) edge_set.emplace(e.white, e.black);
  for (std::int64_t y = 0; y <= hex.n + hex.k; ++y) {
    for (std::int64_t x = -hex.k; x <= hex.m; ++x) {
      const Cell ups[] = {{x, y}, {x - 1, y}, {x, y - 1}};
      const Cell downs[] = {{x - 1, y - 1}, {x - 1, y}, {x, y - 1}};
      std::vector<std::size_t> ws;
      std::vector<std::size_t> bs;
      for (const auto& c : ups) {
        if (auto it = white_index.find(c); it != white_index.end()) ws.push_back(it->second);
      }
      for (const auto& c : downs) {
        if (auto it = black_index.find(c); it != black_index.end()) bs.push_back(it->second);
      }
      if (ws.size() + bs.size() != 6) continue;
      int face_edges = 0;
      for (auto w : ws) {
        for (auto b : bs) face_edges += edge_set.count({w, b}) ? 1 : 0;
      }
      if (face_edges != 6) {
        throw NumericalError("hexagon embedding has a face with " + std::to_string(face_edges) +
                             " edges");
      }
      ++emb.interior_faces;
    }
  }

  // Empty pile: the parallelogram spanned by the N and K sides is tiled by
  // horizontal dimers only. Its up-triangles have lower-left corners
  // (M - v - 1, u + v + 1), u < N, v < K.
  for (std::int64_t u = 0; u < hex.n; ++u) {
    for (std::int64_t v = 0; v < hex.k; ++v) {
      const GridPoint w = white_position(hex.m - v - 1, u + v + 1);
      emb.empty_pile_exponent += w.re + w.im;
    }
  }
  return emb;
}

KasteleynMatrix build_matrix(const HexEmbedding& embedding, double q) {
  KasteleynMatrix km{embedding.white_vertices.size()};
  for (const auto& e : embedding.edges) {
    if (e.direction == EdgeDirection::kHorizontal) {
      const auto& w = embedding.white_vertices[e.white];
      km(e.white, e.black) = std::pow(q, static_cast<double>(w.re + w.im));
    } else {
      km(e.white, e.black) = 1.0;
    }
  }
  return km;
}

LogDeterminant log_determinant(KasteleynMatrix a) {
  const std::size_t n = a.dim();
  LogDeterminant det;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::fabs(a(r, col)) > std::fabs(a(pivot, col))) pivot = r;
    }
    const double p = a(pivot, col);
    if (std::fabs(p) < 1e-300) {
      std::ostringstream os;
      os << "singular Kasteleyn matrix: pivot " << p << " at column " << col;
      throw NumericalError(os.str());
    }
    if (pivot != col) {
      for (std::size_t c = 0; c < n; ++c) std::swap(a(pivot, c), a(col, c));
      det.sign = -det.sign;
    }
    if (p < 0) det.sign = -det.sign;
    det.log_abs += std::log(std::fabs(p));
    for (std::size_t r = col + 1; r < n; ++r) {
      const double factor = a(r, col) / p;
      if (factor == 0.0) continue;
      for (std::size_t c = col + 1; c < n; ++c) a(r, c) -= factor * a(col, c);
    }
  }
  return det;
}

double kasteleyn_log_partition(const BoxShape& shape, double q) {
  if (!(q > 0.0 && q <= 1.0)) {
    throw DomainError("Kasteleyn partition needs 0 < q <= 1");
  }
  const HexEmbedding emb = build_embedding(shape);
  if (emb.white_vertices.size() > kMaxDimension) {
    throw DomainError("Kasteleyn matrix dimension " + std::to_string(emb.white_vertices.size()) +
                      " exceeds " + std::to_string(kMaxDimension));
  }
  const double log_q = std::log(q);
  const std::size_t n = emb.white_vertices.size();

  // Scale each row by its largest entry, in the log domain.
  std::vector<double> row_log_max(n, 0.0);
  for (const auto& e : emb.edges) {
    if (e.direction == EdgeDirection::kHorizontal) {
      const auto& w = emb.white_vertices[e.white];
      row_log_max[e.white] = std::max(row_log_max[e.white], static_cast<double>(w.re + w.im) * log_q);
    }
  }
  KasteleynMatrix km{n};
  for (const auto& e : emb.edges) {
    double log_entry = 0.0;
    if (e.direction == EdgeDirection::kHorizontal) {
      const auto& w = emb.white_vertices[e.white];
      log_entry = static_cast<double>(w.re + w.im) * log_q;
    }
    km(e.white, e.black) = std::exp(log_entry - row_log_max[e.white]);
  }
  double log_scale = 0.0;
  for (double s : row_log_max) log_scale += s;

  const LogDeterminant det = log_determinant(std::move(km));
  return det.log_abs + log_scale - static_cast<double>(emb.empty_pile_exponent) * log_q;
}

double kasteleyn_partition(const BoxShape& shape, double q) {
  return std::exp(kasteleyn_log_partition(shape, q));
}

}  // namespace hexdimer::kasteleyn
