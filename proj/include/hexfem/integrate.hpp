#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "hexfem/element.hpp"
#include "hexfem/mesh.hpp"

namespace hexfem {

/// Half-open element index range [begin, end).
struct ElementRange {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::size_t size() const noexcept { return end - begin; }
  friend bool operator==(const ElementRange&, const ElementRange&) = default;
};

struct BatchPlan {
  std::vector<ElementRange> ranges;
  std::size_t group_count() const noexcept { return ranges.size(); }

  /// True if ranges are ascending, contiguous, non-empty and cover [0, n_el).
  bool covers(std::size_t n_elements) const noexcept;
};

/// Per-element working-set bytes on a backend: 36 output doubles, 8 4-byte
/// node ids, 8 gathered node positions and one coefficient.
inline constexpr std::uint64_t kBytesPerElement =
    kPackedSize * 8 + 8 * 4 + 8 * 3 * 8 + 8;
static_assert(kBytesPerElement == 520);

constexpr std::uint64_t required_bytes(std::uint64_t n_elements) noexcept {
  return n_elements * kBytesPerElement;
}

/// group_count = ceil(required / available), clamped to n_elements, split
/// into contiguous chunks whose sizes differ by at most one.
BatchPlan plan_batches(std::uint64_t mem_required, std::uint64_t mem_available,
                       std::size_t n_elements);

/// Splits [0, n_elements) into `groups` near-equal contiguous ranges.
BatchPlan split_evenly(std::size_t n_elements, std::size_t groups);

/// Element-major packed values, 36 per element.
struct LocalValuesBatch {
  std::size_t n_elements = 0;
  std::vector<double> values;

  std::span<const double, kPackedSize> row(std::size_t e) const {
    return std::span<const double, kPackedSize>(values.data() + e * kPackedSize,
                                                kPackedSize);
  }
  std::span<double, kPackedSize> row(std::size_t e) {
    return std::span<double, kPackedSize>(values.data() + e * kPackedSize,
                                          kPackedSize);
  }
};

/// Only the data one group needs, gathered from the mesh arrays.
struct StagedGroup {
  std::size_t index = 0;
  ElementRange range;
  std::vector<NodeId> connectivity;   // 8 per element
  std::vector<double> node_coords;    // 24 per element
  std::vector<double> coefficient;    // 1 per element
  std::vector<double> values;         // 36 per element, written by backend

  std::size_t n_elements() const noexcept { return range.size(); }
  std::uint64_t bytes() const noexcept { return required_bytes(range.size()); }
  ElementGeometry geometry(std::size_t local) const noexcept;
};

/// Gathers the connectivity slice, node coordinates and coefficients of
/// `range`. Allocation failure surfaces as ResourceError.
StagedGroup stage_group(const Mesh& mesh, std::size_t index, ElementRange range);

/// A per-element map with declared working memory. Implementations must make
/// each element's 36 values a pure function of that element's staged data.
class ComputeBackend {
 public:
  virtual ~ComputeBackend() = default;

  virtual std::string_view name() const noexcept = 0;
  virtual std::uint64_t capacity_bytes() const noexcept = 0;
  virtual int workers() const noexcept = 0;

  /// Hook for device uploads; throws ResourceError on failure.
  virtual void upload(const StagedGroup& group) { (void)group; }

  /// Fills group.values. Returns the first failing element (local index
  /// within the group, lowest index wins) or -1 with its kernel status.
  struct Failure {
    std::int64_t local_element = -1;
    KernelStatus status;
  };
  virtual Failure run(StagedGroup& group) = 0;
};

/// Reference backend: a plain loop on the calling thread.
class SerialBackend final : public ComputeBackend {
 public:
  explicit SerialBackend(std::uint64_t capacity_bytes)
      : capacity_(capacity_bytes) {}
  std::string_view name() const noexcept override { return "serial"; }
  std::uint64_t capacity_bytes() const noexcept override { return capacity_; }
  int workers() const noexcept override { return 1; }
  Failure run(StagedGroup& group) override;

 private:
  std::uint64_t capacity_;
};

/// OpenMP backend: one element per iteration, static schedule.
class OpenMPBackend final : public ComputeBackend {
 public:
  /// workers <= 0 selects the OpenMP default.
  OpenMPBackend(std::uint64_t capacity_bytes, int workers);
  std::string_view name() const noexcept override { return "openmp"; }
  std::uint64_t capacity_bytes() const noexcept override { return capacity_; }
  int workers() const noexcept override { return workers_; }
  Failure run(StagedGroup& group) override;

 private:
  std::uint64_t capacity_;
  int workers_;
};

enum class ExecutionMode { sequential, overlapped };

std::string_view to_string(ExecutionMode mode) noexcept;
ExecutionMode parse_mode(std::string_view text);

/// Receives each completed group in range order. The span aliases the
/// group's slice of the output batch and stays valid until integrate_all
/// returns.
using GroupConsumer =
    std::function<void(std::size_t group, ElementRange range,
                       std::span<const double> values)>;

/// Integrates every element group by group. In overlapped mode the consumer
/// runs on a separate thread behind a one-slot hand-off so that group g is
/// consumed while group g+1 is integrated; in sequential mode the consumer
/// (if any) is called inline after each group. Output is identical in both.
LocalValuesBatch integrate_all(const Mesh& mesh, ComputeBackend& backend,
                               const BatchPlan& plan, ExecutionMode mode,
                               const GroupConsumer& consumer = {});

/// Serial reference kept for testing: local_stiffness per element, in order.
LocalValuesBatch integrate_reference(const Mesh& mesh);

}  // namespace hexfem
