#include "nsc/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>

namespace nsc::fft {
namespace {

// FFTW's planner is not thread-safe; every plan creation and destruction
// goes through this lock.
std::mutex& planner_mutex() {
  static auto* m = new std::mutex;
  return *m;
}

Effort g_effort = Effort::estimate;

}  // namespace

void set_planner_effort(Effort effort) {
  std::lock_guard lock(planner_mutex());
  g_effort = effort;
}

Plan3d::Plan3d(std::array<int, 3> modes, Effort effort) : modes_(modes) {
  const std::size_t n = static_cast<std::size_t>(modes[0]) * modes[1] * modes[2];
  const unsigned flags = effort == Effort::measure ? FFTW_MEASURE : FFTW_ESTIMATE;
  std::lock_guard lock(planner_mutex());
  auto* scratch = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
  forward_ = fftw_plan_dft_3d(modes[0], modes[1], modes[2], scratch, scratch, FFTW_FORWARD, flags);
  backward_ =
      fftw_plan_dft_3d(modes[0], modes[1], modes[2], scratch, scratch, FFTW_BACKWARD, flags);
  fftw_free(scratch);
  if (forward_ == nullptr || backward_ == nullptr) throw std::runtime_error("FFTW planning failed");
}

Plan3d::~Plan3d() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(forward_));
  fftw_destroy_plan(static_cast<fftw_plan>(backward_));
}

void Plan3d::forward(cplx* data) const {
  auto* p = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(static_cast<fftw_plan>(forward_), p, p);
}

void Plan3d::backward(cplx* data) const {
  auto* p = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(static_cast<fftw_plan>(backward_), p, p);
}

std::shared_ptr<const Plan3d> plan_for(std::array<int, 3> modes) {
  // Intentionally leaked: plans must outlive any static field destructors.
  static auto* cache_mutex = new std::mutex;
  static auto* cache = new std::map<std::array<int, 3>, std::shared_ptr<const Plan3d>>;
  std::lock_guard lock(*cache_mutex);
  auto it = cache->find(modes);
  if (it != cache->end()) return it->second;
  Effort effort;
  {
    std::lock_guard planner(planner_mutex());
    effort = g_effort;
  }
  auto plan = std::make_shared<const Plan3d>(modes, effort);
  cache->emplace(modes, plan);
  return plan;
}

}  // namespace nsc::fft
