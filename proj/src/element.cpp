#include "hexfem/element.hpp"

#include <cmath>

#include "hexfem/errors.hpp"

namespace hexfem {

ShapeValues shape_functions(double r, double s, double t) noexcept {
  ShapeValues n{};
  for (int a = 0; a < 8; ++a) {
    const auto& xi = kNodeNatural[a];
    n[a] = 0.125 * (1.0 + xi[0] * r) * (1.0 + xi[1] * s) * (1.0 + xi[2] * t);
  }
  return n;
}

ShapeGradients shape_gradients(double r, double s, double t) noexcept {
  ShapeGradients g{};
  for (int a = 0; a < 8; ++a) {
    const auto& xi = kNodeNatural[a];
    const double fr = 1.0 + xi[0] * r;
    const double fs = 1.0 + xi[1] * s;
    const double ft = 1.0 + xi[2] * t;
    g[0][a] = 0.125 * xi[0] * fs * ft;
    g[1][a] = 0.125 * fr * xi[1] * ft;
    g[2][a] = 0.125 * fr * fs * xi[2];
  }
  return g;
}

namespace {

GaussRule make_gauss_rule() {
  const double p = 1.0 / std::sqrt(3.0);
  const double pts[2] = {-p, p};
  GaussRule rule{};
  for (int k = 0; k < 2; ++k) {
    for (int j = 0; j < 2; ++j) {
      for (int i = 0; i < 2; ++i) {
        const int g = i + 2 * j + 4 * k;
        rule.points[g] = {pts[i], pts[j], pts[k]};
        rule.weights[g] = 1.0 * 1.0 * 1.0;
      }
    }
  }
  return rule;
}

// Natural-coordinate gradients at the Gauss points, shared by every element.
struct QuadratureTables {
  GaussRule rule;
  std::array<ShapeGradients, kGaussPoints> grad;
};

const QuadratureTables& tables() noexcept {
  static const QuadratureTables t = [] {
    QuadratureTables q{make_gauss_rule(), {}};
    for (int g = 0; g < kGaussPoints; ++g) {
      const auto& p = q.rule.points[g];
      q.grad[g] = shape_gradients(p[0], p[1], p[2]);
    }
    return q;
  }();
  return t;
}

}  // namespace

const GaussRule& gauss_rule() noexcept { return tables().rule; }

JacobianInfo jacobian(const ElementGeometry& geom,
                      const ShapeGradients& grad) noexcept {
  JacobianInfo info{};
  Mat3& j = info.jacobian;
  for (int d = 0; d < 3; ++d) {
    for (int x = 0; x < 3; ++x) {
      double sum = 0.0;
      for (int a = 0; a < 8; ++a) sum += grad[d][a] * geom.nodes[a][x];
      j[d][x] = sum;
    }
  }

  // cofactors of the first row give the determinant
  const double c00 = j[1][1] * j[2][2] - j[1][2] * j[2][1];
  const double c01 = j[1][2] * j[2][0] - j[1][0] * j[2][2];
  const double c02 = j[1][0] * j[2][1] - j[1][1] * j[2][0];
  info.det = j[0][0] * c00 + j[0][1] * c01 + j[0][2] * c02;
  if (!(info.det > 0.0)) return info;

  const double inv_det = 1.0 / info.det;
  Mat3& inv = info.inverse;
  inv[0][0] = c00 * inv_det;
  inv[1][0] = c01 * inv_det;
  inv[2][0] = c02 * inv_det;
  inv[0][1] = (j[0][2] * j[2][1] - j[0][1] * j[2][2]) * inv_det;
  inv[1][1] = (j[0][0] * j[2][2] - j[0][2] * j[2][0]) * inv_det;
  inv[2][1] = (j[0][1] * j[2][0] - j[0][0] * j[2][1]) * inv_det;
  inv[0][2] = (j[0][1] * j[1][2] - j[0][2] * j[1][1]) * inv_det;
  inv[1][2] = (j[0][2] * j[1][0] - j[0][0] * j[1][2]) * inv_det;
  inv[2][2] = (j[0][0] * j[1][1] - j[0][1] * j[1][0]) * inv_det;
  return info;
}

JacobianInfo checked_jacobian(const ElementGeometry& geom,
                              const ShapeGradients& grad,
                              std::int64_t element_id, int gauss_point) {
  auto info = jacobian(geom, grad);
  if (!(info.det > 0.0)) {
    throw DegenerateElementError(element_id, gauss_point, info.det);
  }
  return info;
}

KernelStatus compute_packed_ke(const ElementGeometry& geom, double c,
                               std::span<double, kPackedSize> out) noexcept {
  const auto& q = tables();
  for (auto& v : out) v = 0.0;

  for (int g = 0; g < kGaussPoints; ++g) {
    const auto& dn = q.grad[g];
    const auto jac = jacobian(geom, dn);
    if (!(jac.det > 0.0)) return {g, jac.det};

    // B = J^-1 dN, physical gradients of the 8 shape functions
    double b[3][8];
    for (int x = 0; x < 3; ++x) {
      for (int a = 0; a < 8; ++a) {
        b[x][a] = jac.inverse[x][0] * dn[0][a] + jac.inverse[x][1] * dn[1][a] +
                  jac.inverse[x][2] * dn[2][a];
      }
    }

    const double scale = jac.det * q.rule.weights[g];
    int p = 0;
    for (int i = 0; i < 8; ++i) {
      for (int j = 0; j <= i; ++j, ++p) {
        out[p] += (b[0][i] * b[0][j] + b[1][i] * b[1][j] + b[2][i] * b[2][j]) *
                  scale;
      }
    }
  }

  for (auto& v : out) v *= c;
  return {};
}

PackedLowerKe local_stiffness(const ElementGeometry& geom, double c,
                              std::int64_t element_id) {
  PackedLowerKe ke;
  const auto status = compute_packed_ke(geom, c, ke.values);
  if (!status.ok()) {
    throw DegenerateElementError(element_id, status.bad_gauss_point, status.det);
  }
  return ke;
}

ElementGeometry gather_geometry(const Mesh& mesh, std::size_t element) {
  ElementGeometry geom;
  const auto& nodes = mesh.connectivity[element];
  for (int a = 0; a < 8; ++a) geom.nodes[a] = mesh.coords[nodes[a]];
  return geom;
}

DenseKe unpack(const PackedLowerKe& packed) noexcept {
  DenseKe k{};
  for (int i = 0; i < 8; ++i) {
    for (int j = 0; j <= i; ++j) {
      k[i][j] = k[j][i] = packed.values[packed_index(i, j)];
    }
  }
  return k;
}

PackedLowerKe pack(const DenseKe& dense) noexcept {
  PackedLowerKe p;
  for (int i = 0; i < 8; ++i) {
    for (int j = 0; j <= i; ++j) p.values[packed_index(i, j)] = dense[i][j];
  }
  return p;
}

}  // namespace hexfem
