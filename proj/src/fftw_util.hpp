#pragma once

#include <fftw3.h>

#include <complex>
#include <memory>
#include <mutex>
#include <tuple>
#include <new>
#include <type_traits>

namespace phaseswap::detail {

// FFTW's planner is not reentrant; plan execution is.
std::mutex& planner_mutex();

struct FftwFree {
  void operator()(fftw_complex* p) const noexcept { fftw_free(p); }
};
using FftwBuffer = std::unique_ptr<fftw_complex[], FftwFree>;

struct PlanDestroy {
  void operator()(fftw_plan p) const noexcept {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(p);
  }
};
using Plan = std::unique_ptr<std::remove_pointer_t<fftw_plan>, PlanDestroy>;

struct FftwFreeReal {
  void operator()(double* p) const noexcept { fftw_free(p); }
};
using RealBuffer = std::unique_ptr<double[], FftwFreeReal>;

inline RealBuffer alloc_real(std::size_t n) {
  auto* p = fftw_alloc_real(n);
  if (p == nullptr) throw std::bad_alloc();
  return RealBuffer(p);
}

inline FftwBuffer alloc_buffer(std::size_t n) {
  auto* p = fftw_alloc_complex(n);
  if (p == nullptr) throw std::bad_alloc();
  return FftwBuffer(p);
}

inline std::complex<double>* as_complex(fftw_complex* p) {
  return reinterpret_cast<std::complex<double>*>(p);
}

inline Plan plan_2d(int width, int height, fftw_complex* in, fftw_complex* out, int sign) {
  std::lock_guard lock(planner_mutex());
  return Plan(fftw_plan_dft_2d(height, width, in, out, sign, FFTW_ESTIMATE));
}

enum class PlanKind { r2c, c2r, c2c_forward, c2c_backward };

// Shared plan for a (kind, width, height) shape, created on first use and kept
// for the life of the process. Run it with the new-array execute functions on
// buffers from alloc_buffer / fftw_alloc_real.
fftw_plan cached_plan_2d(PlanKind kind, int width, int height);

inline Plan plan_1d(int n, fftw_complex* in, fftw_complex* out, int sign) {
  std::lock_guard lock(planner_mutex());
  return Plan(fftw_plan_dft_1d(n, in, out, sign, FFTW_ESTIMATE));
}

}  // namespace phaseswap::detail
