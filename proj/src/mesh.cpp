#include "hexfem/mesh.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <string>

#include "hexfem/errors.hpp"
#include "text_tokens.hpp"

namespace hexfem {

void Mesh::validate() const {
  if (coefficient.size() != connectivity.size()) {
    throw ValidationError("coefficient count " +
                          std::to_string(coefficient.size()) +
                          " does not match element count " +
                          std::to_string(connectivity.size()));
  }
  const auto n = n_nodes();
  for (std::size_t e = 0; e < connectivity.size(); ++e) {
    const auto& nodes = connectivity[e];
    for (int a = 0; a < 8; ++a) {
      if (nodes[a] >= n) {
        throw ValidationError("element " + std::to_string(e) +
                              " references node " + std::to_string(nodes[a]) +
                              " but the mesh has " + std::to_string(n) +
                              " nodes");
      }
      for (int b = 0; b < a; ++b) {
        if (nodes[a] == nodes[b]) {
          throw ValidationError("element " + std::to_string(e) +
                                " repeats node " + std::to_string(nodes[a]));
        }
      }
    }
    if (!(coefficient[e] > 0.0)) {
      throw ValidationError("element " + std::to_string(e) +
                            " has non-positive coefficient");
    }
  }
}

Mesh generate_cube_mesh(const StructuredGridSpec& spec) {
  if (spec.nx < 1 || spec.ny < 1 || spec.nz < 1) {
    throw ConfigError("element counts must be positive");
  }
  if (!(spec.h > 0.0)) throw ConfigError("element size h must be positive");
  if (!(spec.c0 > 0.0)) throw ConfigError("coefficient must be positive");

  const std::uint64_t px = spec.nx + 1;
  const std::uint64_t py = spec.ny + 1;
  const std::uint64_t pz = spec.nz + 1;
  const std::uint64_t n_nodes = px * py * pz;
  if (n_nodes > std::numeric_limits<NodeId>::max()) {
    throw ConfigError("grid has too many nodes for 32-bit node ids");
  }

  Mesh mesh;
  mesh.coords.reserve(n_nodes);
  for (std::uint64_t k = 0; k < pz; ++k) {
    for (std::uint64_t j = 0; j < py; ++j) {
      for (std::uint64_t i = 0; i < px; ++i) {
        mesh.coords.push_back({static_cast<double>(i) * spec.h,
                               static_cast<double>(j) * spec.h,
                               static_cast<double>(k) * spec.h});
      }
    }
  }

  const auto id = [&](std::uint64_t i, std::uint64_t j, std::uint64_t k) {
    return static_cast<NodeId>(i + j * px + k * px * py);
  };
  const std::size_t n_el = static_cast<std::size_t>(spec.nx * spec.ny * spec.nz);
  mesh.connectivity.reserve(n_el);
  for (std::int64_t k = 0; k < spec.nz; ++k) {
    for (std::int64_t j = 0; j < spec.ny; ++j) {
      for (std::int64_t i = 0; i < spec.nx; ++i) {
        mesh.connectivity.push_back({id(i, j, k), id(i + 1, j, k),
                                     id(i + 1, j + 1, k), id(i, j + 1, k),
                                     id(i, j, k + 1), id(i + 1, j, k + 1),
                                     id(i + 1, j + 1, k + 1),
                                     id(i, j + 1, k + 1)});
      }
    }
  }
  mesh.coefficient.assign(n_el, spec.c0);
  return mesh;
}

namespace {

using detail::LineTokens;
using detail::next_line;

void put_double(std::ostream& out, double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  out.write(buf, res.ptr - buf);
}

}  // namespace

void write_mesh(std::ostream& out, const Mesh& mesh) {
  out << "hexmesh " << mesh.n_nodes() << ' ' << mesh.n_elements() << '\n';
  for (const auto& p : mesh.coords) {
    put_double(out, p[0]);
    out << ' ';
    put_double(out, p[1]);
    out << ' ';
    put_double(out, p[2]);
    out << '\n';
  }
  for (std::size_t e = 0; e < mesh.n_elements(); ++e) {
    for (NodeId id : mesh.connectivity[e]) out << id << ' ';
    put_double(out, mesh.coefficient[e]);
    out << '\n';
  }
}

Mesh read_mesh(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  if (!next_line(in, line, line_no)) throw ParseError(1, "empty mesh file");

  LineTokens header(line, line_no);
  if (header.next("header") != "hexmesh") {
    throw ParseError(line_no, "expected 'hexmesh' header");
  }
  const auto n_nodes = header.number<std::uint64_t>("node count");
  const auto n_el = header.number<std::uint64_t>("element count");
  header.expect_end();
  if (n_nodes > std::numeric_limits<NodeId>::max()) {
    throw ValidationError("node count exceeds 32-bit node ids");
  }

  Mesh mesh;
  mesh.coords.reserve(n_nodes);
  for (std::uint64_t i = 0; i < n_nodes; ++i) {
    if (!next_line(in, line, line_no)) {
      throw ParseError(line_no + 1, "expected node line, got end of file");
    }
    LineTokens tok(line, line_no);
    Point3 p{};
    p[0] = tok.number<double>("x coordinate");
    p[1] = tok.number<double>("y coordinate");
    p[2] = tok.number<double>("z coordinate");
    tok.expect_end();
    mesh.coords.push_back(p);
  }

  mesh.connectivity.reserve(n_el);
  mesh.coefficient.reserve(n_el);
  for (std::uint64_t e = 0; e < n_el; ++e) {
    if (!next_line(in, line, line_no)) {
      throw ParseError(line_no + 1, "expected element line, got end of file");
    }
    LineTokens tok(line, line_no);
    HexNodes nodes{};
    for (auto& n : nodes) n = tok.number<NodeId>("node id");
    const double c = tok.number<double>("coefficient");
    tok.expect_end();
    mesh.connectivity.push_back(nodes);
    mesh.coefficient.push_back(c);
  }

  while (next_line(in, line, line_no)) {
    if (!detail::is_blank(line)) {
      throw ParseError(line_no, "unexpected data after last element");
    }
  }

  mesh.validate();
  return mesh;
}

void save_mesh(const Mesh& mesh, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  write_mesh(out, mesh);
  out.flush();
  if (!out) throw IoError("write failed: " + path.string());
}

Mesh load_mesh(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return read_mesh(in);
}

}  // namespace hexfem
