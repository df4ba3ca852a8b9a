#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

#include "hexfem/assemble.hpp"
#include "hexfem/integrate.hpp"
#include "hexfem/mesh.hpp"

namespace hexfem {

enum class AssemblerKind { direct, triplet };

std::string_view to_string(AssemblerKind kind) noexcept;
AssemblerKind parse_assembler(std::string_view text);

struct BuildOptions {
  std::uint64_t budget_bytes = 2048ull * 1000 * 1000;
  int workers = 0;  // <= 0: OpenMP default
  ExecutionMode mode = ExecutionMode::sequential;
  AssemblerKind assembler = AssemblerKind::direct;
};

struct BuildReport {
  std::size_t n_el = 0;
  std::size_t n_nodes = 0;
  std::size_t nnz_triplet = 0;
  std::size_t nnz_csc = 0;
  double nnz_compression = 0.0;
  double triplet_mb = 0.0;
  double csc_mb = 0.0;
  double memory_saving = 0.0;
  double time_integration_s = 0.0;
  double time_assembly_s = 0.0;
  double time_index_s = 0.0;  // part of time_assembly_s, triplet path only
  double time_matgen_s = 0.0;  // integration + assembly
  double time_total_s = 0.0;   // wall clock of the whole construction
  double pct_integration = 0.0;
  double pct_assembly = 0.0;
  std::size_t group_count = 0;
  int workers = 0;
  ExecutionMode mode = ExecutionMode::sequential;
  AssemblerKind assembler = AssemblerKind::direct;
};

/// One structured-text (JSON) object with stable key names.
std::string to_json(const BuildReport& report);
BuildReport report_from_json(std::string_view text);

struct BuildResult {
  LowerCscMatrix matrix;
  BuildReport report;
};

/// plan_batches -> integrate_all -> (build_triplet -> triplet_to_csc |
/// direct assembly). Throws ConfigError for a zero budget.
BuildResult build_global_matrix(const Mesh& mesh, const BuildOptions& options);

}  // namespace hexfem
