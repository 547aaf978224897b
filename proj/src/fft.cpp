#include "straintomo/fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <numbers>
#include <stdexcept>

namespace straintomo::fft {

namespace {

// FFTW planning is not thread-safe; execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

class Plan {
 public:
  explicit Plan(fftw_plan p) : plan_(p) {
    if (!plan_) throw std::runtime_error("FFTW failed to create a plan");
  }
  Plan(const Plan&) = delete;
  Plan& operator=(const Plan&) = delete;
  ~Plan() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan_);
  }
  void execute() const { fftw_execute(plan_); }

 private:
  fftw_plan plan_;
};

int sign_of(Direction dir) { return dir == Direction::forward ? FFTW_FORWARD : FFTW_BACKWARD; }

}  // namespace

void transform_2d(std::vector<cplx>& data, int nx, int ny, Direction dir) {
  auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
  fftw_plan raw;
  {
    std::lock_guard lock(planner_mutex());
    raw = fftw_plan_dft_2d(ny, nx, ptr, ptr, sign_of(dir), FFTW_ESTIMATE);
  }
  Plan(raw).execute();
}

void transform_rows(std::vector<cplx>& data, int n, int rows, Direction dir) {
  auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
  fftw_plan raw;
  {
    std::lock_guard lock(planner_mutex());
    raw = fftw_plan_many_dft(1, &n, rows, ptr, nullptr, 1, n, ptr, nullptr, 1, n, sign_of(dir),
                             FFTW_ESTIMATE);
  }
  Plan(raw).execute();
}

double wavenumber(int m, int n, double h) {
  const int k = m <= n / 2 ? m : m - n;
  return 2.0 * std::numbers::pi * k / (n * h);
}

}  // namespace straintomo::fft
