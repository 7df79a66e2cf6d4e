#pragma once

#include <fftw3.h>

#include <complex>
#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <utility>

#include "nlsthresh/errors.hpp"
#include "nlsthresh/grid.hpp"

namespace nls {

using Complex = std::complex<double>;

namespace detail {

// FFTW's planner is not re-entrant; execution of an existing plan is.
inline std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace detail

/// In-place forward/backward DFT pair for one grid shape. Plans are made with
/// FFTW_ESTIMATE|FFTW_UNALIGNED, so the same plan serves any std::vector
/// buffer and results do not depend on timing measurements.
class FftPlan {
 public:
  FftPlan(int dim, std::size_t points) : dim_(dim), points_(points) {
    total_ = dim == 1 ? points : points * points;
    auto* scratch = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * total_));
    require(scratch != nullptr, ErrorKind::InvalidInput, "fftw_malloc failed");
    const int n[2] = {static_cast<int>(points), static_cast<int>(points)};
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    {
      std::lock_guard<std::mutex> lock(detail::fftw_planner_mutex());
      forward_ = fftw_plan_dft(dim, n, scratch, scratch, FFTW_FORWARD, flags);
      backward_ = fftw_plan_dft(dim, n, scratch, scratch, FFTW_BACKWARD, flags);
    }
    fftw_free(scratch);
    require(forward_ != nullptr && backward_ != nullptr, ErrorKind::InvalidInput,
            "FFTW could not create a plan");
  }

  FftPlan(const FftPlan&) = delete;
  FftPlan& operator=(const FftPlan&) = delete;

  ~FftPlan() {
    std::lock_guard<std::mutex> lock(detail::fftw_planner_mutex());
    fftw_destroy_plan(forward_);
    fftw_destroy_plan(backward_);
  }

  std::size_t size() const { return total_; }

  /// Unnormalized forward transform.
  void forward(std::span<Complex> data) const { execute(forward_, data); }

  /// Backward transform scaled by 1/n, so backward(forward(u)) == u.
  void backward(std::span<Complex> data) const {
    execute(backward_, data);
    const double scale = 1.0 / static_cast<double>(total_);
    for (auto& v : data) v *= scale;
  }

  /// Shared plan for a grid shape; plans live for the whole process.
  static std::shared_ptr<const FftPlan> for_grid(const CartesianGrid& grid) {
    static std::mutex cache_mutex;
    static std::map<std::pair<int, std::size_t>, std::shared_ptr<const FftPlan>> cache;
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto key = std::make_pair(grid.dim, grid.points);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    auto plan = std::make_shared<const FftPlan>(grid.dim, grid.points);
    cache.emplace(key, plan);
    return plan;
  }

 private:
  void execute(fftw_plan plan, std::span<Complex> data) const {
    require(data.size() == total_, ErrorKind::InvalidInput, "FFT buffer has the wrong size");
    auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(plan, ptr, ptr);
  }

  int dim_;
  std::size_t points_;
  std::size_t total_ = 0;
  fftw_plan forward_ = nullptr;
  fftw_plan backward_ = nullptr;
};

}  // namespace nls
