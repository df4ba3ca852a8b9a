#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "hexfem/element.hpp"
#include "hexfem/integrate.hpp"
#include "hexfem/mesh.hpp"

namespace hexfem {

using GlobalIndex = std::uint32_t;

struct IndexPair {
  GlobalIndex row;
  GlobalIndex col;
  friend bool operator==(const IndexPair&, const IndexPair&) = default;
};

/// Global positions of the packed local entries, swapped so row >= col.
/// With dofs_per_node > 1, local dof (node a, component k) maps to
/// element_nodes[a] * dofs_per_node + k and the packed size grows to
/// n(n+1)/2 with n = 8 * dofs_per_node.
std::vector<IndexPair> map_local_to_global(std::span<const NodeId, 8> element_nodes,
                                           int dofs_per_node);

/// dofs_per_node == 1 fast path.
std::array<IndexPair, kPackedSize> map_lower_pairs(
    std::span<const NodeId, 8> element_nodes) noexcept;

/// Duplicate-permitting (row, col, value) entries, all in the lower triangle.
struct TripletMatrix {
  std::vector<GlobalIndex> rows;
  std::vector<GlobalIndex> cols;
  std::vector<double> vals;
  std::size_t dim = 0;

  std::size_t nnz() const noexcept { return vals.size(); }
};

/// Lower triangle (with diagonal) of a symmetric matrix in CSC.
struct LowerCscMatrix {
  std::vector<std::int64_t> col_ptr{0};
  std::vector<std::int64_t> row_idx;
  std::vector<double> vals;
  std::size_t dim = 0;

  std::size_t nnz() const noexcept { return vals.size(); }
  bool same_structure(const LowerCscMatrix& other) const noexcept {
    return dim == other.dim && col_ptr == other.col_ptr &&
           row_idx == other.row_idx;
  }
  /// Checks the CSC invariants; throws ValidationError.
  void validate() const;
  friend bool operator==(const LowerCscMatrix&, const LowerCscMatrix&) = default;
};

/// Allocates a triplet matrix of 36*n_el entries with dim = n_nodes.
TripletMatrix make_triplet(const Mesh& mesh);

/// Writes indices and values of `range` into entries [36*begin, 36*end).
void fill_triplet(const Mesh& mesh, ElementRange range,
                  std::span<const double> range_values, TripletMatrix& t);

/// Entry 36*e + p holds element e's p-th packed entry.
TripletMatrix build_triplet(const Mesh& mesh, const LocalValuesBatch& values);

/// Stable (col, row) sort, duplicate runs summed in original entry order,
/// summed zeros kept.
LowerCscMatrix triplet_to_csc(const TripletMatrix& t);

/// Connectivity-driven assembly that never materializes the index arrays.
/// The structure is built up front from node-to-element adjacency; values
/// are then scattered group by group in element order.
class DirectAssembler {
 public:
  explicit DirectAssembler(const Mesh& mesh);

  /// Adds the packed values of elements in `range` (36 per element).
  void accumulate(ElementRange range, std::span<const double> range_values);

  /// Hands over the matrix; the assembler is left empty.
  LowerCscMatrix finish();

 private:
  const Mesh* mesh_;
  LowerCscMatrix matrix_;
};

LowerCscMatrix assemble_direct(const Mesh& mesh, const LocalValuesBatch& values);

/// 1 - nnz_csc / nnz_triplet (0 for an empty triplet matrix).
double nnz_compression(std::size_t nnz_triplet, std::size_t nnz_csc);
inline double nnz_compression(const TripletMatrix& t, const LowerCscMatrix& m) {
  return nnz_compression(t.nnz(), m.nnz());
}

}  // namespace hexfem
