#include "bubbles/spectral.hpp"

#include <fftw3.h>

#include <memory>
#include <mutex>
#include <type_traits>

#include "bubbles/error.hpp"

namespace bubbles::spectral {

namespace {

// FFTW's planner is not thread-safe; execution with distinct arrays is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct PlanDeleter {
  void operator()(fftw_plan p) const {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(p);
  }
};
using Plan = std::unique_ptr<std::remove_pointer_t<fftw_plan>, PlanDeleter>;

void require_even(std::size_t n) {
  if (n == 0 || n % 2 != 0) {
    throw Error(ErrorCode::OddN, "spectral operations need an even, positive sample count");
  }
}

// Forward DFT (unnormalized) of a complex vector.
std::vector<cplx> dft(std::span<const cplx> v, int sign) {
  const int n = static_cast<int>(v.size());
  std::vector<cplx> in(v.begin(), v.end());
  std::vector<cplx> out(v.size());
  Plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan.reset(fftw_plan_dft_1d(n, reinterpret_cast<fftw_complex*>(in.data()),
                                reinterpret_cast<fftw_complex*>(out.data()), sign, FFTW_ESTIMATE));
  }
  fftw_execute(plan.get());
  return out;
}

}  // namespace

std::vector<double> conjugate(std::span<const double> v) {
  const std::size_t n = v.size();
  require_even(n);
  std::vector<double> in(v.begin(), v.end());
  std::vector<cplx> coef(n / 2 + 1);
  std::vector<double> out(n);
  Plan fwd, bwd;
  {
    std::lock_guard lock(planner_mutex());
    fwd.reset(fftw_plan_dft_r2c_1d(static_cast<int>(n), in.data(),
                                   reinterpret_cast<fftw_complex*>(coef.data()), FFTW_ESTIMATE));
    bwd.reset(fftw_plan_dft_c2r_1d(static_cast<int>(n), reinterpret_cast<fftw_complex*>(coef.data()),
                                   out.data(), FFTW_ESTIMATE));
  }
  fftw_execute(fwd.get());
  const double scale = 1.0 / static_cast<double>(n);
  coef[0] = 0.0;
  coef[n / 2] = 0.0;
  for (std::size_t k = 1; k < n / 2; ++k) coef[k] *= cplx{0.0, scale};
  fftw_execute(bwd.get());
  return out;
}

std::vector<cplx> derivative(std::span<const cplx> v) {
  const std::size_t n = v.size();
  require_even(n);
  std::vector<cplx> coef = dft(v, FFTW_FORWARD);
  const double scale = 1.0 / static_cast<double>(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double wave = k < n / 2 ? static_cast<double>(k)
                        : k == n / 2 ? 0.0
                                     : static_cast<double>(k) - static_cast<double>(n);
    coef[k] *= cplx{0.0, wave * scale};
  }
  return dft(coef, FFTW_BACKWARD);
}

cplx interpolate(std::span<const cplx> v, double t) {
  const std::size_t n = v.size();
  require_even(n);
  const std::vector<cplx> coef = dft(v, FFTW_FORWARD);
  cplx sum = coef[0];
  for (std::size_t k = 1; k < n / 2; ++k) {
    const double kk = static_cast<double>(k);
    sum += coef[k] * std::polar(1.0, kk * t) + coef[n - k] * std::polar(1.0, -kk * t);
  }
  const double half = static_cast<double>(n / 2);
  sum += coef[n / 2] * std::cos(half * t);
  return sum / static_cast<double>(n);
}

}  // namespace bubbles::spectral
