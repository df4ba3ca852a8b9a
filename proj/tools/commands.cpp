#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "hexfem/errors.hpp"
#include "hexfem/mesh.hpp"
#include "hexfem/pipeline.hpp"
#include "hexfem/sparseio.hpp"

namespace hexfem::cli {

namespace {

struct GridFlags {
  std::int64_t nx = 0, ny = 0, nz = 0;
  double h = 1.0;
  double c = 1.0;
};

void add_grid_flags(CLI::App* cmd, GridFlags& g, bool required) {
  auto* nx = cmd->add_option("--nx", g.nx, "elements along x")->check(CLI::PositiveNumber);
  auto* ny = cmd->add_option("--ny", g.ny, "elements along y")->check(CLI::PositiveNumber);
  auto* nz = cmd->add_option("--nz", g.nz, "elements along z")->check(CLI::PositiveNumber);
  cmd->add_option("--h", g.h, "element edge length")->check(CLI::PositiveNumber);
  cmd->add_option("--c", g.c, "material coefficient")->check(CLI::PositiveNumber);
  if (required) {
    nx->required();
    ny->required();
    nz->required();
  }
}

struct RunFlags {
  double budget_mb = 2048.0;
  int workers = 0;
  std::string mode = "sequential";
  std::string assembler = "direct";
};

void add_run_flags(CLI::App* cmd, RunFlags& f) {
  cmd->add_option("--budget-mb", f.budget_mb,
                  std::string("backend working memory in MB (10^6 bytes); ") +
                      kBudgetEnv + " overrides")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--workers", f.workers, "integration threads (0: all)")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--mode", f.mode, "sequential | overlapped")
      ->check(CLI::IsMember({"sequential", "overlapped"}));
  cmd->add_option("--assembler", f.assembler, "direct | triplet")
      ->check(CLI::IsMember({"direct", "triplet"}));
}

BuildOptions to_options(const RunFlags& f) {
  double mb = f.budget_mb;
  if (const char* env = std::getenv(kBudgetEnv); env && *env) {
    char* end = nullptr;
    mb = std::strtod(env, &end);
    if (end == env || *end != '\0' || !(mb >= 0.0)) {
      throw ConfigError(std::string(kBudgetEnv) + " is not a valid size: '" + env + "'");
    }
  }
  BuildOptions opt;
  opt.budget_bytes = static_cast<std::uint64_t>(std::llround(mb * 1e6));
  opt.workers = f.workers;
  opt.mode = parse_mode(f.mode);
  opt.assembler = parse_assembler(f.assembler);
  return opt;
}

Mesh grid_mesh(const GridFlags& g) {
  return generate_cube_mesh({g.nx, g.ny, g.nz, g.h, g.c});
}

std::vector<std::int64_t> parse_sizes(const std::string& text) {
  std::vector<std::int64_t> sizes;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const long long v = std::stoll(item, &used);
      if (used != item.size() || v < 1) throw std::invalid_argument(item);
      sizes.push_back(v);
    } catch (const std::exception&) {
      throw CLI::ValidationError("--sizes", "invalid size '" + item + "'");
    }
  }
  if (sizes.empty()) throw CLI::ValidationError("--sizes", "no sizes given");
  return sizes;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const auto n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

int cmd_mesh_gen(const GridFlags& g, const std::string& out_path, std::ostream& out) {
  const auto mesh = grid_mesh(g);
  save_mesh(mesh, out_path);
  out << "wrote " << out_path << ": " << mesh.n_nodes() << " nodes, "
      << mesh.n_elements() << " elements\n";
  return kOk;
}

int cmd_build(const GridFlags& g, const std::string& mesh_path, const RunFlags& f,
              const std::string& matrix_path, const std::string& report_path,
              std::ostream& out) {
  const auto options = to_options(f);
  const Mesh mesh = mesh_path.empty() ? grid_mesh(g) : load_mesh(mesh_path);
  const auto result = build_global_matrix(mesh, options);
  if (!matrix_path.empty()) export_matrix_market(result.matrix, matrix_path);

  const auto json = to_json(result.report);
  if (report_path.empty()) {
    out << json << '\n';
  } else {
    std::ofstream rep(report_path);
    if (!rep) throw IoError("cannot open " + report_path + " for writing");
    rep << json << '\n';
    if (!rep) throw IoError("write failed: " + report_path);
  }
  return kOk;
}

int cmd_bench(const std::string& sizes_text, int repeat, const RunFlags& f,
              std::ostream& out) {
  const auto sizes = parse_sizes(sizes_text);
  const auto options = to_options(f);

  char line[512];
  std::snprintf(line, sizeof line,
                "%10s %10s %12s %12s %7s %10s %10s %7s %6s %10s %10s %10s %7s %7s\n",
                "FEs", "size", "nnz_trip", "nnz_csc", "compr", "trip_MB", "csc_MB",
                "saving", "groups", "NI_s", "asm_s", "matgen_s", "NI%", "asm%");
  out << line;
  for (const auto n : sizes) {
    const auto mesh = generate_cube_mesh({n, n, n, 1.0, 1.0});
    std::vector<double> t_int, t_asm;
    BuildReport rep;
    for (int r = 0; r < repeat; ++r) {
      rep = build_global_matrix(mesh, options).report;
      t_int.push_back(rep.time_integration_s);
      t_asm.push_back(rep.time_assembly_s);
    }
    const double ni = median(t_int);
    const double as = median(t_asm);
    const double gen = ni + as;
    const double pct_ni = gen > 0.0 ? 100.0 * ni / gen : 100.0;
    std::snprintf(line, sizeof line,
                  "%10zu %10zu %12zu %12zu %7s %10s %10s %7s %6zu %10.4f %10.4f %10.4f "
                  "%6.1f%% %6.1f%%\n",
                  rep.n_el, rep.n_nodes, rep.nnz_triplet, rep.nnz_csc,
                  format_percent(rep.nnz_compression).c_str(),
                  format_mb(rep.triplet_mb).c_str(), format_mb(rep.csc_mb).c_str(),
                  format_percent(rep.memory_saving).c_str(), rep.group_count, ni, as,
                  gen, pct_ni, 100.0 - pct_ni);
    out << line;
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Global stiffness matrix construction for hex8 Poisson meshes", "hexfem"};
  app.set_help_flag("--help", "print this help and exit");  // -h is taken by --h
  app.require_subcommand(1);

  GridFlags gen_grid;
  std::string gen_out;
  auto* gen = app.add_subcommand("mesh-gen", "write a structured cube mesh");
  add_grid_flags(gen, gen_grid, true);
  gen->add_option("--out", gen_out, "mesh file")->required();

  GridFlags build_grid;
  std::string build_mesh, build_out, build_report;
  RunFlags build_flags;
  auto* build = app.add_subcommand("build", "assemble the global matrix");
  auto* mesh_opt = build->add_option("--mesh", build_mesh, "mesh file")
                       ->check(CLI::ExistingFile);
  add_grid_flags(build, build_grid, false);
  for (const char* name : {"--nx", "--ny", "--nz", "--h", "--c"}) {
    build->get_option(name)->excludes(mesh_opt);
  }
  add_run_flags(build, build_flags);
  build->add_option("--out", build_out, "Matrix Market output");
  build->add_option("--report", build_report, "report file (default: stdout)");

  std::string bench_sizes = "10,20,40";
  int bench_repeat = 1;
  RunFlags bench_flags;
  auto* bench = app.add_subcommand("bench", "tabulate sizes, memory and timings");
  bench->add_option("--sizes", bench_sizes, "comma-separated elements per axis");
  bench->add_option("--repeat", bench_repeat, "repeats per size (median)")
      ->check(CLI::PositiveNumber);
  add_run_flags(bench, bench_flags);

  std::vector<std::string> rev(args.rbegin(), args.rend() - 1);
  try {
    app.parse(rev);
    if (*build && build_mesh.empty() &&
        (build_grid.nx == 0 || build_grid.ny == 0 || build_grid.nz == 0)) {
      throw CLI::RequiredError("build needs --mesh or all of --nx --ny --nz");
    }
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }

  try {
    if (*gen) return cmd_mesh_gen(gen_grid, gen_out, out);
    if (*build) {
      return cmd_build(build_grid, build_mesh, build_flags, build_out, build_report, out);
    }
    return cmd_bench(bench_sizes, bench_repeat, bench_flags, out);
  } catch (const CLI::ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kIo;
  } catch (const ResourceError& e) {
    err << "error: " << e.what() << '\n';
    return kIo;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kValidation;
  }
}

}  // namespace hexfem::cli
