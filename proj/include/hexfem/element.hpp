#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>

#include "hexfem/mesh.hpp"

namespace hexfem {

inline constexpr int kHexNodes = 8;
inline constexpr int kGaussPoints = 8;
/// Entries of the lower triangle (with diagonal) of the 8x8 element matrix.
inline constexpr int kPackedSize = kHexNodes * (kHexNodes + 1) / 2;

/// Natural coordinates of the eight local nodes.
inline constexpr std::array<std::array<double, 3>, 8> kNodeNatural{{
    {-1, -1, -1}, {1, -1, -1}, {1, 1, -1}, {-1, 1, -1},
    {-1, -1, 1}, {1, -1, 1}, {1, 1, 1}, {-1, 1, 1},
}};

/// Row-major lower-triangle position of (row, col), col <= row.
constexpr int packed_index(int row, int col) noexcept {
  return row * (row + 1) / 2 + col;
}

using ShapeValues = std::array<double, 8>;
/// grad[d][a] = dN_a / d(r,s,t)_d
using ShapeGradients = std::array<std::array<double, 8>, 3>;
using Mat3 = std::array<std::array<double, 3>, 3>;

struct GaussRule {
  std::array<std::array<double, 3>, kGaussPoints> points;
  std::array<double, kGaussPoints> weights;
};

struct ElementGeometry {
  std::array<Point3, 8> nodes;
};

/// Lower triangle of the symmetric element matrix, packed row-major:
/// (0,0), (1,0), (1,1), (2,0), ..., (7,7).
struct PackedLowerKe {
  std::array<double, kPackedSize> values{};

  double operator()(int row, int col) const noexcept {
    return row >= col ? values[packed_index(row, col)]
                      : values[packed_index(col, row)];
  }
  friend bool operator==(const PackedLowerKe&, const PackedLowerKe&) = default;
};

using DenseKe = std::array<std::array<double, 8>, 8>;

DenseKe unpack(const PackedLowerKe& packed) noexcept;
PackedLowerKe pack(const DenseKe& dense) noexcept;

ShapeValues shape_functions(double r, double s, double t) noexcept;
ShapeGradients shape_gradients(double r, double s, double t) noexcept;

/// 2x2x2 tensor Gauss-Legendre rule (points +-1/sqrt(3), unit weights).
const GaussRule& gauss_rule() noexcept;

struct JacobianInfo {
  Mat3 jacobian;
  double det;
  Mat3 inverse;  // only meaningful when det > 0
};

/// J = dN * X with closed-form determinant and adjugate inverse.
JacobianInfo jacobian(const ElementGeometry& geom,
                      const ShapeGradients& grad) noexcept;

/// Throws DegenerateElementError if det(J) <= 0.
JacobianInfo checked_jacobian(const ElementGeometry& geom,
                              const ShapeGradients& grad,
                              std::int64_t element_id = -1, int gauss_point = -1);

/// Result of the non-throwing kernel: failing Gauss point (or -1) and the
/// offending determinant.
struct KernelStatus {
  int bad_gauss_point = -1;
  double det = 0.0;
  bool ok() const noexcept { return bad_gauss_point < 0; }
};

/// Per-element integration kernel. Accumulates
/// c * sum_g B^T B det(J) w_g into the 36 packed entries of `out`.
/// Non-throwing so it can run inside parallel regions.
KernelStatus compute_packed_ke(const ElementGeometry& geom, double c,
                               std::span<double, kPackedSize> out) noexcept;

/// Throwing wrapper around compute_packed_ke.
PackedLowerKe local_stiffness(const ElementGeometry& geom, double c,
                              std::int64_t element_id = -1);

ElementGeometry gather_geometry(const Mesh& mesh, std::size_t element);

}  // namespace hexfem
