#pragma once

#include <array>
#include <memory>

#include "nsc/common.hpp"

namespace nsc::fft {

enum class Effort { estimate, measure };

/// Planner rigor for plans created after the call. Plans already cached keep
/// their original rigor.
void set_planner_effort(Effort effort);

/// In-place, unnormalized 3D complex DFT on 64-byte-aligned row-major data
/// (axis 1 slowest). forward: sum x_n e^{-2 pi i k n / N}; backward: +i.
/// Execution is thread-safe; plans are shared between callers.
class Plan3d {
 public:
  explicit Plan3d(std::array<int, 3> modes, Effort effort);
  ~Plan3d();
  Plan3d(const Plan3d&) = delete;
  Plan3d& operator=(const Plan3d&) = delete;

  void forward(cplx* data) const;
  void backward(cplx* data) const;
  const std::array<int, 3>& modes() const { return modes_; }

 private:
  std::array<int, 3> modes_;
  void* forward_ = nullptr;
  void* backward_ = nullptr;
};

std::shared_ptr<const Plan3d> plan_for(std::array<int, 3> modes);

}  // namespace nsc::fft
