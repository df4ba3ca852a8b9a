#include <omp.h>

#include <cstdint>
#include <limits>

#include "hexfem/integrate.hpp"

namespace hexfem {

OpenMPBackend::OpenMPBackend(std::uint64_t capacity_bytes, int workers)
    : capacity_(capacity_bytes),
      workers_(workers > 0 ? workers : omp_get_max_threads()) {}

ComputeBackend::Failure OpenMPBackend::run(StagedGroup& group) {
  const auto n = static_cast<std::int64_t>(group.n_elements());
  std::int64_t first_bad = std::numeric_limits<std::int64_t>::max();

#pragma omp parallel for schedule(static) num_threads(workers_) \
    reduction(min : first_bad)
  for (std::int64_t i = 0; i < n; ++i) {
    std::span<double, kPackedSize> slot(group.values.data() + i * kPackedSize,
                                        kPackedSize);
    const auto status =
        compute_packed_ke(group.geometry(i), group.coefficient[i], slot);
    if (!status.ok() && i < first_bad) first_bad = i;
  }

  if (first_bad == std::numeric_limits<std::int64_t>::max()) return {};
  // rerun the offending element to recover its Gauss point and determinant
  PackedLowerKe scratch;
  const auto status = compute_packed_ke(group.geometry(first_bad),
                                        group.coefficient[first_bad],
                                        scratch.values);
  return {first_bad, status};
}

}  // namespace hexfem
