// Acceptance suite: one PASS/FAIL line per criterion.
//
//   acceptance            run every criterion
//   acceptance 1 3 8      run a subset

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <thread>
#include <string>
#include <vector>

#include "hexfem/pipeline.hpp"
#include "hexfem/sparseio.hpp"
#include "oracles.hpp"

using namespace hexfem;

namespace {

class Check {
 public:
  void expect(bool ok, const std::string& what) {
    ++count_;
    if (!ok) failures_.push_back(what);
  }
  template <class A, class B>
  void equal(const A& got, const B& want, const std::string& what) {
    std::ostringstream ss;
    ss << what << ": got " << got << ", want " << want;
    expect(got == want, ss.str());
  }
  void near(double got, double want, double tol, const std::string& what) {
    std::ostringstream ss;
    ss.precision(17);
    ss << what << ": got " << got << ", want " << want << " (tol " << tol << ")";
    expect(std::abs(got - want) <= tol, ss.str());
  }
  void note(const std::string& line) { notes_.push_back(line); }

  bool passed() const { return failures_.empty(); }
  int count() const { return count_; }
  const std::vector<std::string>& failures() const { return failures_; }
  const std::vector<std::string>& notes() const { return notes_; }

 private:
  int count_ = 0;
  std::vector<std::string> failures_;
  std::vector<std::string> notes_;
};

Mesh cube(std::int64_t n) { return generate_cube_mesh({n, n, n, 1.0, 1.0}); }

Mesh random_coefficients(Mesh m, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> c(0.5, 2.0);
  for (auto& v : m.coefficient) v = c(rng);
  return m;
}

bool bitwise(const LowerCscMatrix& a, const LowerCscMatrix& b) {
  return a.same_structure(b) && a.vals.size() == b.vals.size() &&
         std::memcmp(a.vals.data(), b.vals.data(), a.vals.size() * sizeof(double)) == 0;
}

const std::int64_t kDeskSizes[] = {10, 20, 40};

// Reference figures, by elements per axis.
struct TableRow {
  std::int64_t n;
  std::uint64_t nnz_triplet, nnz_csc;
  const char *compression, *triplet_mb, *csc_mb, *saving;
};
const TableRow kReference[] = {
    {10, 36000, 15561, "56.8%", "0.58", "0.26", "54.9%"},
    {20, 288000, 118121, "59.0%", "4.61", "1.96", "57.4%"},
    {40, 2304000, 920241, "60.1%", "36.9", "15.3", "58.6%"},
    {80, 18432000, 7264481, "60.6%", "294.9", "120.5", "59.1%"},
    {120, 62208000, 24408721, "60.8%", "995.3", "404.7", "59.3%"},
    {140, 98784000, 38710841, "60.8%", "1580.5", "641.8", "59.4%"},
    {160, 147456000, 57728961, "60.9%", "2359.3", "957.0", "59.4%"},
    {180, 209952000, 82135081, "60.9%", "3359.2", "1361.6", "59.5%"},
    {200, 288000000, 112601201, "60.9%", "4608.0", "1866.6", "59.5%"},
};

void reference_nnz(Check& c) {
  for (std::size_t i = 0; i < 3; ++i) {
    const auto& row = kReference[i];
    const auto mesh = cube(row.n);
    for (auto assembler : {AssemblerKind::direct, AssemblerKind::triplet}) {
      BuildOptions opt;
      opt.assembler = assembler;
      const auto rep = build_global_matrix(mesh, opt).report;
      const std::string tag = "n=" + std::to_string(row.n) + " " +
                              std::string(to_string(assembler));
      c.equal(rep.nnz_triplet, row.nnz_triplet, tag + " triplet nnz");
      c.equal(rep.nnz_csc, row.nnz_csc, tag + " csc nnz");
      c.equal(format_percent(rep.nnz_compression), std::string(row.compression),
              tag + " compression");
    }
    // the triplet arrays themselves
    OpenMPBackend backend(1u << 30, 0);
    const auto vals = integrate_all(mesh, backend, split_evenly(mesh.n_elements(), 1),
                                    ExecutionMode::sequential);
    const auto t = build_triplet(mesh, vals);
    c.equal(t.nnz(), row.nnz_triplet, "n=" + std::to_string(row.n) + " triplet arrays");
  }
}

void reference_memory(Check& c) {
  for (std::size_t i = 0; i < 3; ++i) {
    const auto& row = kReference[i];
    const auto rep = build_global_matrix(cube(row.n), {}).report;
    const std::string tag = "n=" + std::to_string(row.n);
    c.equal(format_mb(rep.triplet_mb), std::string(row.triplet_mb), tag + " triplet MB");
    c.equal(format_mb(rep.csc_mb), std::string(row.csc_mb), tag + " csc MB");
    c.equal(format_percent(rep.memory_saving), std::string(row.saving), tag + " saving");
  }
  // every column analytically, from the structural nnz oracle
  for (const auto& row : kReference) {
    const std::uint64_t n = static_cast<std::uint64_t>(row.n);
    const std::uint64_t dim = (n + 1) * (n + 1) * (n + 1);
    const std::uint64_t nnz_t = 36 * n * n * n;
    const std::uint64_t nnz_c = oracle::cube_lower_nnz(n, n, n);
    const std::string tag = "analytic n=" + std::to_string(n);
    c.equal(nnz_t, row.nnz_triplet, tag + " triplet nnz");
    c.equal(nnz_c, row.nnz_csc, tag + " csc nnz");
    c.equal(format_percent(nnz_compression(nnz_t, nnz_c)), std::string(row.compression),
            tag + " compression");
    const double tmb = triplet_memory_mb(nnz_t);
    const double cmb = csc_memory_mb(nnz_c, dim);
    c.equal(format_mb(tmb), std::string(row.triplet_mb), tag + " triplet MB");
    c.equal(format_mb(cmb), std::string(row.csc_mb), tag + " csc MB");
    c.equal(format_percent(memory_saving(tmb, cmb)), std::string(row.saving), tag + " saving");
  }
}

void report_structure(Check& c) {
  const std::size_t dims[] = {1331, 9261, 68921};
  for (int i = 0; i < 3; ++i) {
    const auto n = kDeskSizes[i];
    for (auto mode : {ExecutionMode::sequential, ExecutionMode::overlapped}) {
      BuildOptions opt;
      opt.mode = mode;
      const auto res = build_global_matrix(cube(n), opt);
      const auto back = report_from_json(to_json(res.report));
      const std::string tag = "n=" + std::to_string(n) + " " + std::string(to_string(mode));
      c.equal(back.n_nodes, dims[i], tag + " matrix size");
      c.equal(res.matrix.dim, dims[i], tag + " csc dim");
      c.near(back.pct_integration + back.pct_assembly, 100.0, 1e-9, tag + " NI% + assembly%");
      c.expect(back.pct_integration >= 0 && back.pct_assembly >= 0, tag + " percentages >= 0");
      char line[160];
      std::snprintf(line, sizeof line, "%s: size %zu, NI %.1f%%, assembly %.1f%%",
                    tag.c_str(), back.n_nodes, back.pct_integration, back.pct_assembly);
      c.note(line);
    }
  }
}

ElementGeometry geometry_from(const oracle::Nodes& x) {
  ElementGeometry g;
  for (int a = 0; a < 8; ++a) g.nodes[a] = {x(a, 0), x(a, 1), x(a, 2)};
  return g;
}

void element_oracle(Check& c) {
  const auto ke = local_stiffness(geometry_from(oracle::cube_nodes(1.0)), 1.0);
  const auto analytic = oracle::unit_cube_analytic();
  const auto quad5 = oracle::stiffness_by_quadrature(oracle::cube_nodes(1.0), 1.0, 5);
  double err = 0.0, err5 = 0.0;
  std::set<double> classes;
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j <= i; ++j) {
      err = std::max(err, std::abs(ke(i, j) - analytic(i, j)));
      err5 = std::max(err5, std::abs(quad5(i, j) - analytic(i, j)));
      classes.insert(analytic(i, j));
    }
  c.near(err, 0.0, 1e-14, "unit cube vs closed form");
  c.near(err5, 0.0, 1e-14, "5x5x5 quadrature oracle vs closed form");
  c.equal(classes.size(), 3u, "distinct entry classes {1/3, 0, -1/12}");

  for (double h : {0.5, 2.0}) {
    const auto kh = local_stiffness(geometry_from(oracle::cube_nodes(h)), 1.0);
    double rel = 0.0;
    for (int p = 0; p < kPackedSize; ++p) {
      const double want = h * ke.values[p];
      const double scale = std::max(std::abs(want), 1.0 / 12.0 * h);
      rel = std::max(rel, std::abs(kh.values[p] - want) / scale);
    }
    c.near(rel, 0.0, 1e-12, "h-scaling h=" + std::to_string(h));
  }
}

void operator_invariants(Check& c) {
  for (std::int64_t n : {5, 10}) {
    const auto mesh = random_coefficients(cube(n), 100 + n);
    const auto k = build_global_matrix(mesh, {}).matrix;
    const double kmax = oracle::max_abs(k);
    const auto y = oracle::sym_multiply(k, std::vector<double>(k.dim, 1.0));
    double worst = 0.0;
    for (double v : y) worst = std::max(worst, std::abs(v));
    c.near(worst, 0.0, 1e-10 * kmax * static_cast<double>(n),
           "n=" + std::to_string(n) + " |K 1|_inf");

    std::mt19937_64 rng(7 * n);
    std::normal_distribution<double> g;
    double min_ratio = 1e300;
    for (int trial = 0; trial < 100; ++trial) {
      std::vector<double> x(k.dim);
      double norm2 = 0.0;
      for (auto& v : x) {
        v = g(rng);
        norm2 += v * v;
      }
      const auto kx = oracle::sym_multiply(k, x);
      double xkx = 0.0;
      for (std::size_t i = 0; i < k.dim; ++i) xkx += x[i] * kx[i];
      min_ratio = std::min(min_ratio, xkx / (kmax * norm2));
    }
    c.expect(min_ratio >= -1e-10,
             "n=" + std::to_string(n) + " min x'Kx/(|K|max |x|^2) = " + std::to_string(min_ratio));
  }
}

void determinism(Check& c) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto mesh = random_coefficients(cube(40), 4242);
  BuildOptions base;
  base.workers = 1;
  const auto ref = build_global_matrix(mesh, base);
  c.equal(ref.report.group_count, 1u, "reference single group");

  BuildOptions w = base;
  w.workers = 4;
  c.expect(bitwise(build_global_matrix(mesh, w).matrix, ref.matrix), "(a) 1 vs 4 workers");

  BuildOptions groups = base;
  groups.budget_bytes = required_bytes(mesh.n_elements()) / 3;  // ceil -> 4 groups
  const auto g = build_global_matrix(mesh, groups);
  c.expect(g.report.group_count >= 3, "(b) budget yields >= 3 groups");
  c.expect(bitwise(g.matrix, ref.matrix), "(b) 1 vs " + std::to_string(g.report.group_count) + " groups");

  for (auto assembler : {AssemblerKind::direct, AssemblerKind::triplet}) {
    BuildOptions seq = groups, ovl = groups;
    seq.assembler = ovl.assembler = assembler;
    ovl.mode = ExecutionMode::overlapped;
    c.expect(bitwise(build_global_matrix(mesh, seq).matrix,
                     build_global_matrix(mesh, ovl).matrix),
             "(c) sequential vs overlapped, " + std::string(to_string(assembler)));
  }

  BuildOptions trip = base;
  trip.assembler = AssemblerKind::triplet;
  const auto t = build_global_matrix(mesh, trip).matrix;
  c.expect(t.same_structure(ref.matrix), "(d) triplet vs direct structure");
  double rel = 0.0;
  for (std::size_t k = 0; k < t.nnz(); ++k) {
    const double scale = std::max(std::abs(t.vals[k]), std::abs(ref.matrix.vals[k]));
    if (scale > 0) rel = std::max(rel, std::abs(t.vals[k] - ref.matrix.vals[k]) / scale);
  }
  c.near(rel, 0.0, 1e-12, "(d) triplet vs direct values");

  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  c.expect(secs < 60.0, "runtime " + std::to_string(secs) + " s < 60 s");
}

void structural_nnz(Check& c) {
  const std::int64_t boxes[][3] = {{10, 10, 10}, {20, 20, 20}, {40, 40, 40}, {3, 4, 5},
                                   {1, 1, 1},    {1, 1, 9},    {7, 2, 11},  {16, 5, 3}};
  for (const auto& b : boxes) {
    const auto mesh = generate_cube_mesh({b[0], b[1], b[2], 1.0, 1.0});
    for (auto assembler : {AssemblerKind::direct, AssemblerKind::triplet}) {
      BuildOptions opt;
      opt.assembler = assembler;
      const auto k = build_global_matrix(mesh, opt).matrix;
      c.equal(static_cast<std::uint64_t>(k.nnz()),
              oracle::cube_lower_nnz(b[0], b[1], b[2]),
              "(" + std::to_string(b[0]) + "," + std::to_string(b[1]) + "," +
                  std::to_string(b[2]) + ") " + std::string(to_string(assembler)));
    }
  }
}

double integration_seconds(const Mesh& mesh, int workers) {
  OpenMPBackend backend(std::uint64_t{1} << 40, workers);
  const auto plan = split_evenly(mesh.n_elements(), 1);
  std::vector<double> t;
  for (int r = 0; r < 3; ++r) {
    const auto start = std::chrono::steady_clock::now();
    const auto out = integrate_all(mesh, backend, plan, ExecutionMode::sequential);
    t.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
  }
  std::sort(t.begin(), t.end());
  return t[1];
}

void throughput(Check& c) {
  const auto mesh = cube(80);  // 512 000 elements
  const double one = integration_seconds(mesh, 1);
  const double four = integration_seconds(mesh, 4);
  char line[200];
  std::snprintf(line, sizeof line,
                "integration of %zu elements: 1 worker %.3f s, 4 workers %.3f s "
                "(speedup %.2fx, %u hardware threads)",
                mesh.n_elements(), one, four, one / four, std::thread::hardware_concurrency());
  c.note(line);
  c.expect(four < one, "4-worker integration strictly faster than 1 worker");

  // time split, observational only
  BuildOptions opt;
  opt.workers = 4;
  const auto rep = build_global_matrix(mesh, opt).report;
  std::snprintf(line, sizeof line, "time split: NI %.3f s (%.1f%%), assembly %.3f s (%.1f%%)",
                rep.time_integration_s, rep.pct_integration, rep.time_assembly_s,
                rep.pct_assembly);
  c.note(line);
  c.near(rep.pct_integration + rep.pct_assembly, 100.0, 1e-9, "report percentages");
}

struct Criterion {
  int id;
  const char* name;
  std::function<void(Check&)> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria{
      {1, "NNZ figures for n = 10, 20, 40", reference_nnz},
      {2, "Memory figures for all nine reference sizes", reference_memory},
      {3, "Report structure: matrix size and time split", report_structure},
      {4, "Element oracle: unit-cube entries and h-scaling", element_oracle},
      {5, "Operator invariants: K 1 = 0 and x'Kx >= 0", operator_invariants},
      {6, "Determinism across workers, groups, modes, assemblers (40^3)", determinism},
      {7, "Structural NNZ oracle incl. anisotropic boxes", structural_nnz},
      {8, "Throughput: 4 workers beat 1 worker on 512 000 elements", throughput},
  };

  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

  int failed = 0;
  for (const auto& cr : criteria) {
    if (!selected.empty() && !selected.count(cr.id)) continue;
    Check check;
    const auto start = std::chrono::steady_clock::now();
    try {
      cr.run(check);
    } catch (const std::exception& e) {
      check.expect(false, std::string("exception: ") + e.what());
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("[%s] criterion %d: %s (%d checks, %.2f s)\n", check.passed() ? "PASS" : "FAIL",
                cr.id, cr.name, check.count(), secs);
    for (const auto& n : check.notes()) std::printf("       %s\n", n.c_str());
    for (const auto& f : check.failures()) std::printf("       failed: %s\n", f.c_str());
    if (!check.passed()) ++failed;
  }
  std::fflush(stdout);
  return failed == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
