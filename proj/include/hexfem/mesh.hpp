#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

namespace hexfem {

using NodeId = std::uint32_t;
using Point3 = std::array<double, 3>;
using HexNodes = std::array<NodeId, 8>;

/// Unstructured mesh of 8-node bricks.
///
/// Element node order is the usual counterclockwise bottom face followed by
/// the counterclockwise top face, i.e. local node a sits at natural
/// coordinates (-1,-1,-1), (1,-1,-1), (1,1,-1), (-1,1,-1), then the same on
/// t = +1.
struct Mesh {
  std::vector<Point3> coords;
  std::vector<HexNodes> connectivity;
  std::vector<double> coefficient;  // one per element, > 0

  std::size_t n_nodes() const noexcept { return coords.size(); }
  std::size_t n_elements() const noexcept { return connectivity.size(); }

  /// Checks index bounds, distinct nodes per element and positive
  /// coefficients. Throws ValidationError.
  void validate() const;

  friend bool operator==(const Mesh&, const Mesh&) = default;
};

struct StructuredGridSpec {
  std::int64_t nx = 1;
  std::int64_t ny = 1;
  std::int64_t nz = 1;
  double h = 1.0;
  double c0 = 1.0;
};

/// Axis-aligned box of nx*ny*nz cubes of edge h. Node (i,j,k) has id
/// i + j*(nx+1) + k*(nx+1)*(ny+1) and sits at (i*h, j*h, k*h).
Mesh generate_cube_mesh(const StructuredGridSpec& spec);

/// Text format:
///   hexmesh <n_nodes> <n_el>
///   x y z                       (n_nodes lines)
///   n0 n1 n2 n3 n4 n5 n6 n7 c   (n_el lines, 0-based node ids)
void write_mesh(std::ostream& out, const Mesh& mesh);
Mesh read_mesh(std::istream& in);

void save_mesh(const Mesh& mesh, const std::filesystem::path& path);
Mesh load_mesh(const std::filesystem::path& path);

}  // namespace hexfem
