#include "hexfem/pipeline.hpp"

#include <chrono>
#include <string>

#include "json.hpp"

#include "hexfem/errors.hpp"
#include "hexfem/sparseio.hpp"

namespace hexfem {

std::string_view to_string(AssemblerKind kind) noexcept {
  return kind == AssemblerKind::triplet ? "triplet" : "direct";
}

AssemblerKind parse_assembler(std::string_view text) {
  if (text == "direct") return AssemblerKind::direct;
  if (text == "triplet") return AssemblerKind::triplet;
  throw ConfigError("unknown assembler '" + std::string(text) + "'");
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

BuildResult build_global_matrix(const Mesh& mesh, const BuildOptions& options) {
  if (options.budget_bytes == 0) {
    throw ConfigError("memory budget must be positive");
  }
  const auto total_start = Clock::now();
  const std::size_t n_el = mesh.n_elements();

  OpenMPBackend backend(options.budget_bytes, options.workers);
  const auto plan = plan_batches(required_bytes(n_el), options.budget_bytes, n_el);

  BuildResult result;
  auto& rep = result.report;
  double t_int = 0.0, t_asm = 0.0, t_index = 0.0;

  if (options.mode == ExecutionMode::sequential) {
    auto start = Clock::now();
    const auto values = integrate_all(mesh, backend, plan, ExecutionMode::sequential);
    t_int = seconds_since(start);

    start = Clock::now();
    if (options.assembler == AssemblerKind::triplet) {
      const auto triplet = build_triplet(mesh, values);
      t_index = seconds_since(start);
      result.matrix = triplet_to_csc(triplet);
    } else {
      result.matrix = assemble_direct(mesh, values);
    }
    t_asm = seconds_since(start);
  } else if (options.assembler == AssemblerKind::triplet) {
    auto start = Clock::now();
    auto triplet = make_triplet(mesh);
    t_index = seconds_since(start);
    const GroupConsumer consume = [&](std::size_t, ElementRange range,
                                      std::span<const double> vals) {
      const auto s = Clock::now();
      fill_triplet(mesh, range, vals, triplet);
      t_index += seconds_since(s);
    };
    start = Clock::now();
    integrate_all(mesh, backend, plan, ExecutionMode::overlapped, consume);
    t_int = seconds_since(start);
    start = Clock::now();
    result.matrix = triplet_to_csc(triplet);
    t_asm = t_index + seconds_since(start);
  } else {
    auto start = Clock::now();
    DirectAssembler assembler(mesh);
    t_asm = seconds_since(start);
    const GroupConsumer consume = [&](std::size_t, ElementRange range,
                                      std::span<const double> vals) {
      const auto s = Clock::now();
      assembler.accumulate(range, vals);
      t_asm += seconds_since(s);
    };
    start = Clock::now();
    integrate_all(mesh, backend, plan, ExecutionMode::overlapped, consume);
    t_int = seconds_since(start);
    start = Clock::now();
    result.matrix = assembler.finish();
    t_asm += seconds_since(start);
  }
  rep.time_total_s = seconds_since(total_start);

  rep.n_el = n_el;
  rep.n_nodes = mesh.n_nodes();
  rep.nnz_triplet = n_el * kPackedSize;
  rep.nnz_csc = result.matrix.nnz();
  rep.nnz_compression = nnz_compression(rep.nnz_triplet, rep.nnz_csc);
  rep.triplet_mb = triplet_memory_mb(rep.nnz_triplet);
  rep.csc_mb = csc_memory_mb(rep.nnz_csc, result.matrix.dim);
  rep.memory_saving = rep.triplet_mb > 0.0 ? memory_saving(rep.triplet_mb, rep.csc_mb)
                                           : 0.0;
  rep.time_integration_s = t_int;
  rep.time_assembly_s = t_asm;
  rep.time_index_s = t_index;
  rep.time_matgen_s = t_int + t_asm;
  if (rep.time_matgen_s > 0.0) {
    rep.pct_integration = 100.0 * t_int / rep.time_matgen_s;
    rep.pct_assembly = 100.0 - rep.pct_integration;
  } else {
    rep.pct_integration = 100.0;
    rep.pct_assembly = 0.0;
  }
  rep.group_count = plan.group_count();
  rep.workers = backend.workers();
  rep.mode = options.mode;
  rep.assembler = options.assembler;
  return result;
}

std::string to_json(const BuildReport& r) {
  nlohmann::ordered_json j;
  j["n_el"] = r.n_el;
  j["n_nodes"] = r.n_nodes;
  j["nnz_triplet"] = r.nnz_triplet;
  j["nnz_csc"] = r.nnz_csc;
  j["nnz_compression"] = r.nnz_compression;
  j["triplet_mb"] = r.triplet_mb;
  j["csc_mb"] = r.csc_mb;
  j["memory_saving"] = r.memory_saving;
  j["time_integration_s"] = r.time_integration_s;
  j["time_assembly_s"] = r.time_assembly_s;
  j["time_index_s"] = r.time_index_s;
  j["time_matgen_s"] = r.time_matgen_s;
  j["time_total_s"] = r.time_total_s;
  j["pct_integration"] = r.pct_integration;
  j["pct_assembly"] = r.pct_assembly;
  j["group_count"] = r.group_count;
  j["workers"] = r.workers;
  j["mode"] = to_string(r.mode);
  j["assembler"] = to_string(r.assembler);
  return j.dump(2);
}

BuildReport report_from_json(std::string_view text) {
  BuildReport r;
  try {
    const auto j = nlohmann::json::parse(text);
    r.n_el = j.at("n_el").get<std::size_t>();
    r.n_nodes = j.at("n_nodes").get<std::size_t>();
    r.nnz_triplet = j.at("nnz_triplet").get<std::size_t>();
    r.nnz_csc = j.at("nnz_csc").get<std::size_t>();
    r.nnz_compression = j.at("nnz_compression").get<double>();
    r.triplet_mb = j.at("triplet_mb").get<double>();
    r.csc_mb = j.at("csc_mb").get<double>();
    r.memory_saving = j.at("memory_saving").get<double>();
    r.time_integration_s = j.at("time_integration_s").get<double>();
    r.time_assembly_s = j.at("time_assembly_s").get<double>();
    r.time_index_s = j.at("time_index_s").get<double>();
    r.time_matgen_s = j.at("time_matgen_s").get<double>();
    r.time_total_s = j.at("time_total_s").get<double>();
    r.pct_integration = j.at("pct_integration").get<double>();
    r.pct_assembly = j.at("pct_assembly").get<double>();
    r.group_count = j.at("group_count").get<std::size_t>();
    r.workers = j.at("workers").get<int>();
    r.mode = parse_mode(j.at("mode").get<std::string>());
    r.assembler = parse_assembler(j.at("assembler").get<std::string>());
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed build report: ") + e.what());
  }
  return r;
}

}  // namespace hexfem
