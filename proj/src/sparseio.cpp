#include "hexfem/sparseio.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "hexfem/errors.hpp"
#include "text_tokens.hpp"

namespace hexfem {

double triplet_memory_mb(std::uint64_t nnz_triplet) noexcept {
  return static_cast<double>(nnz_triplet * MemoryModel::triplet_bytes_per_entry) /
         MemoryModel::megabyte;
}

double csc_memory_mb(std::uint64_t nnz_csc, std::uint64_t dim) noexcept {
  const std::uint64_t bytes = nnz_csc * MemoryModel::csc_bytes_per_entry +
                              (dim + 1) * MemoryModel::csc_bytes_per_colptr;
  return static_cast<double>(bytes) / MemoryModel::megabyte;
}

double memory_saving(double triplet_mb, double csc_mb) {
  if (!(triplet_mb > 0.0)) {
    throw ConfigError("memory saving undefined for empty triplet storage");
  }
  return 1.0 - csc_mb / triplet_mb;
}

std::string format_mb(double mb) {
  char buf[64];
  std::snprintf(buf, sizeof buf, mb < 10.0 ? "%.2f" : "%.1f", mb);
  return buf;
}

std::string format_percent(double fraction) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.1f%%", fraction * 100.0);
  return buf;
}

void write_matrix_market(std::ostream& out, const LowerCscMatrix& m) {
  out << "%%MatrixMarket matrix coordinate real symmetric\n";
  out << m.dim << ' ' << m.dim << ' ' << m.nnz() << '\n';
  char buf[40];
  for (std::size_t c = 0; c < m.dim; ++c) {
    for (auto k = m.col_ptr[c]; k < m.col_ptr[c + 1]; ++k) {
      std::snprintf(buf, sizeof buf, "%.17g", m.vals[k]);
      out << m.row_idx[k] + 1 << ' ' << c + 1 << ' ' << buf << '\n';
    }
  }
}

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& ch : out) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return out;
}

struct Entry {
  std::uint64_t row;
  std::uint64_t col;
  double value;
};

}  // namespace

LowerCscMatrix read_matrix_market(std::istream& in) {
  using detail::LineTokens;
  std::string line;
  std::size_t line_no = 0;
  if (!detail::next_line(in, line, line_no)) {
    throw ParseError(1, "empty Matrix Market file");
  }
  {
    LineTokens tok(line, line_no);
    if (tok.next("banner") != "%%MatrixMarket") {
      throw ParseError(line_no, "missing %%MatrixMarket banner");
    }
    const auto object = lower(tok.next("object"));
    const auto format = lower(tok.next("format"));
    const auto field = lower(tok.next("field"));
    const auto symmetry = lower(tok.next("symmetry"));
    if (object != "matrix" || format != "coordinate" || field != "real") {
      throw ValidationError("only 'matrix coordinate real' files are supported");
    }
    if (symmetry != "symmetric") {
      throw ValidationError("expected a symmetric matrix, got '" + symmetry + "'");
    }
  }

  // skip comments and blank lines up to the size line
  bool have_size = false;
  std::uint64_t rows = 0, cols = 0, nnz = 0;
  while (detail::next_line(in, line, line_no)) {
    if (line.starts_with('%') || detail::is_blank(line)) continue;
    LineTokens tok(line, line_no);
    rows = tok.number<std::uint64_t>("row count");
    cols = tok.number<std::uint64_t>("column count");
    nnz = tok.number<std::uint64_t>("entry count");
    tok.expect_end();
    have_size = true;
    break;
  }
  if (!have_size) throw ParseError(line_no + 1, "missing size line");
  if (rows != cols) throw ValidationError("symmetric matrix must be square");

  std::vector<Entry> entries;
  entries.reserve(nnz);
  while (entries.size() < nnz) {
    if (!detail::next_line(in, line, line_no)) {
      throw ParseError(line_no + 1, "expected " + std::to_string(nnz) +
                                        " entries, found " +
                                        std::to_string(entries.size()));
    }
    if (line.starts_with('%') || detail::is_blank(line)) continue;
    LineTokens tok(line, line_no);
    Entry e{};
    e.row = tok.number<std::uint64_t>("row index");
    e.col = tok.number<std::uint64_t>("column index");
    e.value = tok.number<double>("value");
    tok.expect_end();
    if (e.row < 1 || e.col < 1 || e.row > rows || e.col > cols) {
      throw ValidationError("line " + std::to_string(line_no) +
                            ": index out of range");
    }
    if (e.row < e.col) {
      throw ValidationError("line " + std::to_string(line_no) +
                            ": upper-triangle entry in symmetric file");
    }
    entries.push_back(e);
  }
  while (detail::next_line(in, line, line_no)) {
    if (!detail::is_blank(line)) {
      throw ParseError(line_no, "unexpected data after last entry");
    }
  }

  std::stable_sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    return a.col != b.col ? a.col < b.col : a.row < b.row;
  });

  LowerCscMatrix m;
  m.dim = rows;
  m.col_ptr.assign(rows + 1, 0);
  m.row_idx.reserve(entries.size());
  m.vals.reserve(entries.size());
  for (std::size_t k = 0; k < entries.size(); ++k) {
    const auto& e = entries[k];
    if (k > 0 && entries[k - 1].row == e.row && entries[k - 1].col == e.col) {
      throw ValidationError("duplicate entry (" + std::to_string(e.row) + ", " +
                            std::to_string(e.col) + ")");
    }
    m.row_idx.push_back(static_cast<std::int64_t>(e.row - 1));
    m.vals.push_back(e.value);
    ++m.col_ptr[e.col];
  }
  for (std::size_t c = 0; c < rows; ++c) m.col_ptr[c + 1] += m.col_ptr[c];
  return m;
}

void export_matrix_market(const LowerCscMatrix& m,
                          const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  write_matrix_market(out, m);
  out.flush();
  if (!out) throw IoError("write failed: " + path.string());
}

LowerCscMatrix import_matrix_market(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return read_matrix_market(in);
}

}  // namespace hexfem
