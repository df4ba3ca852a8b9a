#include "hexfem/assemble.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>
#include <utility>

#include "hexfem/errors.hpp"

namespace hexfem {

std::vector<IndexPair> map_local_to_global(std::span<const NodeId, 8> element_nodes,
                                           int dofs_per_node) {
  if (dofs_per_node < 1) throw ConfigError("dofs per node must be positive");
  const auto dof = static_cast<std::uint64_t>(dofs_per_node);
  const int n = 8 * dofs_per_node;
  const auto global = [&](int local) {
    return static_cast<GlobalIndex>(element_nodes[local / dofs_per_node] * dof +
                                    static_cast<std::uint64_t>(local % dofs_per_node));
  };
  std::vector<IndexPair> pairs;
  pairs.reserve(static_cast<std::size_t>(n) * (n + 1) / 2);
  for (int i = 0; i < n; ++i) {
    const GlobalIndex gi = global(i);
    for (int j = 0; j <= i; ++j) {
      const GlobalIndex gj = global(j);
      pairs.push_back({std::max(gi, gj), std::min(gi, gj)});
    }
  }
  return pairs;
}

std::array<IndexPair, kPackedSize> map_lower_pairs(
    std::span<const NodeId, 8> element_nodes) noexcept {
  std::array<IndexPair, kPackedSize> pairs{};
  int p = 0;
  for (int i = 0; i < 8; ++i) {
    for (int j = 0; j <= i; ++j, ++p) {
      const NodeId a = element_nodes[i];
      const NodeId b = element_nodes[j];
      pairs[p] = a >= b ? IndexPair{a, b} : IndexPair{b, a};
    }
  }
  return pairs;
}

void LowerCscMatrix::validate() const {
  if (col_ptr.size() != dim + 1 || col_ptr.front() != 0) {
    throw ValidationError("column pointer array has wrong shape");
  }
  if (static_cast<std::size_t>(col_ptr.back()) != vals.size() ||
      row_idx.size() != vals.size()) {
    throw ValidationError("column pointers do not match entry count");
  }
  for (std::size_t c = 0; c < dim; ++c) {
    if (col_ptr[c + 1] < col_ptr[c]) {
      throw ValidationError("column pointers decrease at column " +
                            std::to_string(c));
    }
    for (auto k = col_ptr[c]; k < col_ptr[c + 1]; ++k) {
      const auto r = row_idx[k];
      if (r < static_cast<std::int64_t>(c) || r >= static_cast<std::int64_t>(dim)) {
        throw ValidationError("row index " + std::to_string(r) +
                              " outside lower triangle in column " +
                              std::to_string(c));
      }
      if (k > col_ptr[c] && row_idx[k - 1] >= r) {
        throw ValidationError("row indices not strictly increasing in column " +
                              std::to_string(c));
      }
    }
  }
}

TripletMatrix make_triplet(const Mesh& mesh) {
  TripletMatrix t;
  const std::size_t n = mesh.n_elements() * kPackedSize;
  t.rows.resize(n);
  t.cols.resize(n);
  t.vals.resize(n);
  t.dim = mesh.n_nodes();
  return t;
}

void fill_triplet(const Mesh& mesh, ElementRange range,
                  std::span<const double> range_values, TripletMatrix& t) {
  for (std::size_t e = range.begin; e < range.end; ++e) {
    const auto pairs = map_lower_pairs(mesh.connectivity[e]);
    const std::size_t base = e * kPackedSize;
    const std::size_t local = (e - range.begin) * kPackedSize;
    for (int p = 0; p < kPackedSize; ++p) {
      t.rows[base + p] = pairs[p].row;
      t.cols[base + p] = pairs[p].col;
      t.vals[base + p] = range_values[local + p];
    }
  }
}

TripletMatrix build_triplet(const Mesh& mesh, const LocalValuesBatch& values) {
  if (values.n_elements != mesh.n_elements()) {
    throw ValidationError("value batch has " + std::to_string(values.n_elements) +
                          " rows, mesh has " + std::to_string(mesh.n_elements()) +
                          " elements");
  }
  auto t = make_triplet(mesh);
  fill_triplet(mesh, {0, mesh.n_elements()}, values.values, t);
  return t;
}

LowerCscMatrix triplet_to_csc(const TripletMatrix& t) {
  const std::size_t n = t.nnz();
  if (t.rows.size() != n || t.cols.size() != n) {
    throw ValidationError("triplet arrays differ in length");
  }
  for (std::size_t k = 0; k < n; ++k) {
    if (t.rows[k] >= t.dim || t.cols[k] >= t.dim) {
      throw ValidationError("triplet entry " + std::to_string(k) + " index (" +
                            std::to_string(t.rows[k]) + ", " +
                            std::to_string(t.cols[k]) + ") out of range for dim " +
                            std::to_string(t.dim));
    }
    if (t.rows[k] < t.cols[k]) {
      throw ValidationError("triplet entry " + std::to_string(k) +
                            " lies in the upper triangle");
    }
  }

  // stable counting sort by column, then stable sort by row inside columns
  std::vector<std::size_t> start(t.dim + 1, 0);
  for (std::size_t k = 0; k < n; ++k) ++start[t.cols[k] + 1];
  std::partial_sum(start.begin(), start.end(), start.begin());
  std::vector<std::size_t> order(n);
  {
    std::vector<std::size_t> next(start.begin(), start.end() - 1);
    for (std::size_t k = 0; k < n; ++k) order[next[t.cols[k]]++] = k;
  }

  LowerCscMatrix m;
  m.dim = t.dim;
  m.col_ptr.assign(t.dim + 1, 0);
  for (std::size_t c = 0; c < t.dim; ++c) {
    const auto first = order.begin() + static_cast<std::ptrdiff_t>(start[c]);
    const auto last = order.begin() + static_cast<std::ptrdiff_t>(start[c + 1]);
    std::stable_sort(first, last, [&](std::size_t a, std::size_t b) {
      return t.rows[a] < t.rows[b];
    });
    for (auto it = first; it != last;) {
      const GlobalIndex row = t.rows[*it];
      double sum = 0.0;
      for (; it != last && t.rows[*it] == row; ++it) sum += t.vals[*it];
      m.row_idx.push_back(row);
      m.vals.push_back(sum);
    }
    m.col_ptr[c + 1] = static_cast<std::int64_t>(m.vals.size());
  }
  return m;
}

DirectAssembler::DirectAssembler(const Mesh& mesh) : mesh_(&mesh) {
  const std::size_t n_nodes = mesh.n_nodes();
  const std::size_t n_el = mesh.n_elements();

  // node -> element adjacency, elements ascending per node
  std::vector<std::size_t> adj_ptr(n_nodes + 1, 0);
  for (const auto& nodes : mesh.connectivity) {
    for (NodeId v : nodes) {
      if (v >= n_nodes) {
        throw ValidationError("connectivity references node " + std::to_string(v) +
                              " outside the mesh");
      }
      ++adj_ptr[v + 1];
    }
  }
  std::partial_sum(adj_ptr.begin(), adj_ptr.end(), adj_ptr.begin());
  std::vector<std::uint32_t> adj(adj_ptr.back());
  {
    std::vector<std::size_t> next(adj_ptr.begin(), adj_ptr.end() - 1);
    for (std::size_t e = 0; e < n_el; ++e) {
      for (NodeId v : mesh.connectivity[e]) adj[next[v]++] = static_cast<std::uint32_t>(e);
    }
  }

  matrix_.dim = n_nodes;
  matrix_.col_ptr.assign(n_nodes + 1, 0);
  matrix_.row_idx.reserve(n_nodes * 14);
  std::vector<NodeId> rows;
  for (std::size_t c = 0; c < n_nodes; ++c) {
    rows.clear();
    for (auto k = adj_ptr[c]; k < adj_ptr[c + 1]; ++k) {
      for (NodeId v : mesh.connectivity[adj[k]]) {
        if (v >= c) rows.push_back(v);
      }
    }
    std::sort(rows.begin(), rows.end());
    rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
    matrix_.row_idx.insert(matrix_.row_idx.end(), rows.begin(), rows.end());
    matrix_.col_ptr[c + 1] = static_cast<std::int64_t>(matrix_.row_idx.size());
  }
  matrix_.vals.assign(matrix_.row_idx.size(), 0.0);
}

void DirectAssembler::accumulate(ElementRange range,
                                 std::span<const double> range_values) {
  const auto& col_ptr = matrix_.col_ptr;
  const auto& row_idx = matrix_.row_idx;
  for (std::size_t e = range.begin; e < range.end; ++e) {
    const auto pairs = map_lower_pairs(mesh_->connectivity[e]);
    const double* v = range_values.data() + (e - range.begin) * kPackedSize;
    for (int p = 0; p < kPackedSize; ++p) {
      const auto first = row_idx.begin() + col_ptr[pairs[p].col];
      const auto last = row_idx.begin() + col_ptr[pairs[p].col + 1];
      const auto it = std::lower_bound(first, last,
                                       static_cast<std::int64_t>(pairs[p].row));
      matrix_.vals[static_cast<std::size_t>(it - row_idx.begin())] += v[p];
    }
  }
}

LowerCscMatrix DirectAssembler::finish() {
  LowerCscMatrix out = std::move(matrix_);
  matrix_ = LowerCscMatrix{};
  return out;
}

LowerCscMatrix assemble_direct(const Mesh& mesh, const LocalValuesBatch& values) {
  if (values.n_elements != mesh.n_elements()) {
    throw ValidationError("value batch has " + std::to_string(values.n_elements) +
                          " rows, mesh has " + std::to_string(mesh.n_elements()) +
                          " elements");
  }
  DirectAssembler assembler(mesh);
  assembler.accumulate({0, mesh.n_elements()}, values.values);
  return assembler.finish();
}

double nnz_compression(std::size_t nnz_triplet, std::size_t nnz_csc) {
  if (nnz_triplet == 0) return 0.0;
  return 1.0 - static_cast<double>(nnz_csc) / static_cast<double>(nnz_triplet);
}

}  // namespace hexfem
