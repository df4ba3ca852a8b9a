#include "hexfem/integrate.hpp"

#include <algorithm>
#include <condition_variable>
#include <exception>
#include <mutex>
#include <new>
#include <optional>
#include <string>
#include <thread>

#include "hexfem/errors.hpp"

namespace hexfem {

bool BatchPlan::covers(std::size_t n_elements) const noexcept {
  std::size_t next = 0;
  for (const auto& r : ranges) {
    if (r.begin != next || r.end <= r.begin) return false;
    next = r.end;
  }
  return next == n_elements;
}

BatchPlan split_evenly(std::size_t n_elements, std::size_t groups) {
  BatchPlan plan;
  if (n_elements == 0) return plan;
  groups = std::clamp<std::size_t>(groups, 1, n_elements);
  const std::size_t base = n_elements / groups;
  const std::size_t extra = n_elements % groups;
  plan.ranges.reserve(groups);
  std::size_t begin = 0;
  for (std::size_t g = 0; g < groups; ++g) {
    const std::size_t size = base + (g < extra ? 1 : 0);
    plan.ranges.push_back({begin, begin + size});
    begin += size;
  }
  return plan;
}

BatchPlan plan_batches(std::uint64_t mem_required, std::uint64_t mem_available,
                       std::size_t n_elements) {
  if (mem_available == 0) {
    throw ConfigError("available memory budget must be positive");
  }
  std::uint64_t groups = (mem_required + mem_available - 1) / mem_available;
  groups = std::max<std::uint64_t>(groups, 1);
  return split_evenly(n_elements, static_cast<std::size_t>(
                                      std::min<std::uint64_t>(groups, n_elements)));
}

std::string_view to_string(ExecutionMode mode) noexcept {
  return mode == ExecutionMode::overlapped ? "overlapped" : "sequential";
}

ExecutionMode parse_mode(std::string_view text) {
  if (text == "sequential") return ExecutionMode::sequential;
  if (text == "overlapped") return ExecutionMode::overlapped;
  throw ConfigError("unknown mode '" + std::string(text) + "'");
}

ElementGeometry StagedGroup::geometry(std::size_t local) const noexcept {
  ElementGeometry geom;
  const double* p = node_coords.data() + local * 24;
  for (int a = 0; a < 8; ++a) geom.nodes[a] = {p[3 * a], p[3 * a + 1], p[3 * a + 2]};
  return geom;
}

StagedGroup stage_group(const Mesh& mesh, std::size_t index, ElementRange range) {
  StagedGroup g;
  g.index = index;
  g.range = range;
  const std::size_t n = range.size();
  try {
    g.connectivity.resize(n * 8);
    g.node_coords.resize(n * 24);
    g.coefficient.resize(n);
    g.values.resize(n * kPackedSize);
  } catch (const std::bad_alloc&) {
    throw ResourceError(index, "cannot allocate " + std::to_string(g.bytes()) +
                                   " bytes of staging memory");
  }
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t e = range.begin + i;
    const auto& nodes = mesh.connectivity[e];
    for (int a = 0; a < 8; ++a) {
      g.connectivity[i * 8 + a] = nodes[a];
      const auto& x = mesh.coords[nodes[a]];
      std::copy(x.begin(), x.end(), g.node_coords.begin() + i * 24 + a * 3);
    }
    g.coefficient[i] = mesh.coefficient[e];
  }
  return g;
}

namespace {

// One-slot hand-off from the integrating thread to the consumer thread.
class Handoff {
 public:
  // Blocks while the slot is occupied. Returns false once aborted.
  bool push(std::size_t group) {
    std::unique_lock lock(mu_);
    cv_.wait(lock, [&] { return !slot_ || aborted_; });
    if (aborted_) return false;
    slot_ = group;
    cv_.notify_all();
    return true;
  }

  // Empty result means closed (after draining) or aborted.
  std::optional<std::size_t> pop() {
    std::unique_lock lock(mu_);
    cv_.wait(lock, [&] { return slot_ || closed_ || aborted_; });
    if (aborted_ || !slot_) return std::nullopt;
    auto g = slot_;
    slot_.reset();
    cv_.notify_all();
    return g;
  }

  void close() {
    std::lock_guard lock(mu_);
    closed_ = true;
    cv_.notify_all();
  }

  void abort() {
    std::lock_guard lock(mu_);
    aborted_ = true;
    cv_.notify_all();
  }

 private:
  std::mutex mu_;
  std::condition_variable cv_;
  std::optional<std::size_t> slot_;
  bool closed_ = false;
  bool aborted_ = false;
};

void integrate_group(const Mesh& mesh, ComputeBackend& backend, std::size_t index,
                     ElementRange range, LocalValuesBatch& out) {
  auto staged = stage_group(mesh, index, range);
  backend.upload(staged);
  const auto failure = backend.run(staged);
  if (failure.local_element >= 0) {
    throw DegenerateElementError(
        static_cast<std::int64_t>(range.begin) + failure.local_element,
        failure.status.bad_gauss_point, failure.status.det);
  }
  std::copy(staged.values.begin(), staged.values.end(),
            out.values.begin() + range.begin * kPackedSize);
}

std::span<const double> group_values(const LocalValuesBatch& out,
                                     ElementRange range) {
  return std::span<const double>(out.values).subspan(range.begin * kPackedSize,
                                                     range.size() * kPackedSize);
}

}  // namespace

LocalValuesBatch integrate_all(const Mesh& mesh, ComputeBackend& backend,
                               const BatchPlan& plan, ExecutionMode mode,
                               const GroupConsumer& consumer) {
  if (!plan.covers(mesh.n_elements())) {
    throw ConfigError("batch plan does not cover the mesh elements");
  }
  LocalValuesBatch out;
  out.n_elements = mesh.n_elements();
  out.values.resize(out.n_elements * kPackedSize);

  if (mode == ExecutionMode::sequential || !consumer) {
    for (std::size_t g = 0; g < plan.group_count(); ++g) {
      const auto range = plan.ranges[g];
      integrate_group(mesh, backend, g, range, out);
      if (consumer) consumer(g, range, group_values(out, range));
    }
    return out;
  }

  Handoff handoff;
  std::exception_ptr consumer_error;
  std::thread worker([&] {
    while (auto g = handoff.pop()) {
      try {
        const auto range = plan.ranges[*g];
        consumer(*g, range, group_values(out, range));
      } catch (...) {
        consumer_error = std::current_exception();
        handoff.abort();
        return;
      }
    }
  });

  try {
    for (std::size_t g = 0; g < plan.group_count(); ++g) {
      integrate_group(mesh, backend, g, plan.ranges[g], out);
      if (!handoff.push(g)) break;
    }
  } catch (...) {
    handoff.abort();
    worker.join();
    throw;
  }
  handoff.close();
  worker.join();
  if (consumer_error) std::rethrow_exception(consumer_error);
  return out;
}

}  // namespace hexfem
