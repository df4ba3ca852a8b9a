#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>

#include "hexfem/assemble.hpp"

namespace hexfem {

/// Storage model for reported sizes: 8-byte values, 4-byte triplet indices,
/// 8-byte CSC row indices and column pointers, MB = 10^6 bytes.
struct MemoryModel {
  static constexpr std::uint64_t triplet_bytes_per_entry = 16;
  static constexpr std::uint64_t csc_bytes_per_entry = 16;
  static constexpr std::uint64_t csc_bytes_per_colptr = 8;
  static constexpr double megabyte = 1e6;
};

double triplet_memory_mb(std::uint64_t nnz_triplet) noexcept;
double csc_memory_mb(std::uint64_t nnz_csc, std::uint64_t dim) noexcept;
/// 1 - csc / triplet. Throws ConfigError if triplet_mb <= 0.
double memory_saving(double triplet_mb, double csc_mb);

/// Table-style rendering: two decimals below 10, one decimal otherwise.
std::string format_mb(double mb);
/// Fraction rendered as a percentage with one decimal, e.g. "56.8%".
std::string format_percent(double fraction);

void write_matrix_market(std::ostream& out, const LowerCscMatrix& m);
LowerCscMatrix read_matrix_market(std::istream& in);

void export_matrix_market(const LowerCscMatrix& m,
                          const std::filesystem::path& path);
LowerCscMatrix import_matrix_market(const std::filesystem::path& path);

}  // namespace hexfem
