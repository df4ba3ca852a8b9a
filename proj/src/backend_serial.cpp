#include "hexfem/integrate.hpp"

namespace hexfem {

ComputeBackend::Failure SerialBackend::run(StagedGroup& group) {
  for (std::size_t i = 0; i < group.n_elements(); ++i) {
    std::span<double, kPackedSize> slot(group.values.data() + i * kPackedSize,
                                        kPackedSize);
    const auto status =
        compute_packed_ke(group.geometry(i), group.coefficient[i], slot);
    if (!status.ok()) return {static_cast<std::int64_t>(i), status};
  }
  return {};
}

LocalValuesBatch integrate_reference(const Mesh& mesh) {
  LocalValuesBatch out;
  out.n_elements = mesh.n_elements();
  out.values.resize(out.n_elements * kPackedSize);
  for (std::size_t e = 0; e < mesh.n_elements(); ++e) {
    const auto ke = local_stiffness(gather_geometry(mesh, e), mesh.coefficient[e],
                                    static_cast<std::int64_t>(e));
    std::copy(ke.values.begin(), ke.values.end(), out.row(e).begin());
  }
  return out;
}

}  // namespace hexfem
