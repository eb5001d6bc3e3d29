#include "nlkpp/convolve.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <mutex>
#include <stdexcept>

#include "nlkpp/errors.hpp"

namespace nlkpp {
namespace {

// FFTW's planner mutates global state; executes on distinct plans are safe.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

void check_conv_input(const Field& u) {
  if (u.grid.n < 8)
    throw std::invalid_argument("conv: grid too small (n < 8)");
  if (static_cast<int>(u.values.size()) != u.grid.n)
    throw std::invalid_argument("conv: field size does not match grid");
}

int next_pow2(int n) {
  int p = 1;
  while (p < n) p *= 2;
  return p;
}

}  // namespace

struct ConvolutionEngine::Impl {
  enum class Mode { Zero, PureJump, Fft };

  Grid grid;
  Mode mode = Mode::Zero;
  double dx = 0.0;

  // PureJump
  double k_inf = 0.0;

  // Fft: padded length N, cached kernel spectrum, per-apply buffers
  int fft_n = 0;
  double* real_buf = nullptr;
  fftw_complex* spec_buf = nullptr;
  fftw_complex* kernel_spec = nullptr;
  fftw_plan fwd = nullptr;
  fftw_plan inv = nullptr;

  std::vector<double> cell_avg;  // scratch, n-1 entries

  ~Impl() {
    if (mode == Mode::Fft) {
      std::lock_guard<std::mutex> lock(planner_mutex());
      fftw_destroy_plan(fwd);
      fftw_destroy_plan(inv);
      fftw_free(real_buf);
      fftw_free(spec_buf);
      fftw_free(kernel_spec);
    }
  }
};

ConvolutionEngine::ConvolutionEngine(const Kernel& k, const Grid& g,
                                     double truncation_half_width)
    : impl_(new Impl) {
  if (g.n < 8)
    throw std::invalid_argument("ConvolutionEngine: grid too small (n < 8)");
  if (truncation_half_width < g.width())
    throw std::invalid_argument(
        "ConvolutionEngine: truncation narrower than the grid");
  impl_->grid = g;
  impl_->dx = g.dx;
  impl_->cell_avg.resize(g.n - 1);

  if (k.family() == KernelFamily::Zero) {
    impl_->mode = Impl::Mode::Zero;
    return;
  }
  if (k.pure_jump()) {
    impl_->mode = Impl::Mode::PureJump;
    impl_->k_inf = k.eval(1.0);  // constant half value
    return;
  }

  impl_->mode = Impl::Mode::Fft;
  const int n = g.n;
  // Staggered offsets Ks(m) = K((m - 1/2) dx) for m in [-(n-2), n-1]: the
  // sampled right half rh[j] = K((j+1/2) dx), j = 0..n-2, gives
  // Ks(m) = rh[m-1] (m >= 1) and -rh[-m] (m <= 0).
  std::vector<double> rh(n - 1);
  for (int j = 0; j < n - 1; ++j) rh[j] = k.eval((j + 0.5) * g.dx);

  const int kk_len = 2 * n - 2;          // m = -(n-2) .. n-1
  const int full = kk_len + (n - 1) - 1; // linear convolution length
  const int N = next_pow2(full);
  impl_->fft_n = N;

  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    impl_->real_buf = fftw_alloc_real(N);
    impl_->spec_buf = fftw_alloc_complex(N / 2 + 1);
    impl_->kernel_spec = fftw_alloc_complex(N / 2 + 1);
    impl_->fwd = fftw_plan_dft_r2c_1d(N, impl_->real_buf, impl_->spec_buf,
                                      FFTW_ESTIMATE);
    impl_->inv = fftw_plan_dft_c2r_1d(N, impl_->spec_buf, impl_->real_buf,
                                      FFTW_ESTIMATE);
  }

  std::memset(impl_->real_buf, 0, sizeof(double) * N);
  for (int q = 0; q < kk_len; ++q) {
    const int m = q - (n - 2);
    impl_->real_buf[q] = m >= 1 ? rh[m - 1] : -rh[-m];
  }
  fftw_execute(impl_->fwd);
  std::memcpy(impl_->kernel_spec, impl_->spec_buf,
              sizeof(fftw_complex) * (N / 2 + 1));
}

ConvolutionEngine::~ConvolutionEngine() = default;

const Grid& ConvolutionEngine::grid() const { return impl_->grid; }

void ConvolutionEngine::apply(const std::vector<double>& u,
                              std::vector<double>& out) {
  const int n = impl_->grid.n;
  if (static_cast<int>(u.size()) != n || static_cast<int>(out.size()) != n)
    throw std::invalid_argument("ConvolutionEngine::apply: size mismatch");
  const double dx = impl_->dx;

  if (impl_->mode == Impl::Mode::Zero) {
    std::fill(out.begin(), out.end(), 0.0);
    return;
  }

  std::vector<double>& w = impl_->cell_avg;
  for (int j = 0; j < n - 1; ++j) w[j] = 0.5 * (u[j] + u[j + 1]);

  if (impl_->mode == Impl::Mode::PureJump) {
    // Ks(m) = +k_inf for m >= 1, -k_inf for m <= 0, so
    // v_i = dx k_inf (sum_{j<i} w_j - sum_{j>=i} w_j) = dx k_inf (2 Pre_i - T)
    long double total = 0.0L;
    for (int j = 0; j < n - 1; ++j) total += w[j];
    long double pre = 0.0L;
    for (int i = 0; i < n; ++i) {
      out[i] = static_cast<double>(dx * impl_->k_inf * (2.0L * pre - total));
      if (i < n - 1) pre += w[i];
    }
    return;
  }

  const int N = impl_->fft_n;
  std::memset(impl_->real_buf, 0, sizeof(double) * N);
  std::memcpy(impl_->real_buf, w.data(), sizeof(double) * (n - 1));
  fftw_execute(impl_->fwd);
  for (int q = 0; q < N / 2 + 1; ++q) {
    const double ar = impl_->spec_buf[q][0], ai = impl_->spec_buf[q][1];
    const double br = impl_->kernel_spec[q][0], bi = impl_->kernel_spec[q][1];
    impl_->spec_buf[q][0] = ar * br - ai * bi;
    impl_->spec_buf[q][1] = ar * bi + ai * br;
  }
  fftw_execute(impl_->inv);
  const double scale = dx / N;
  for (int i = 0; i < n; ++i)
    out[i] = impl_->real_buf[i + n - 2] * scale;
}

Field conv(const Kernel& k, const Field& u) {
  check_conv_input(u);
  Field v;
  v.grid = u.grid;
  v.time = u.time;
  v.values.assign(u.grid.n, 0.0);
  ConvolutionEngine engine(k, u.grid, 2.0 * u.grid.width());
  engine.apply(u.values, v.values);
  return v;
}

Field conv_direct(const Kernel& k, const Field& u) {
  check_conv_input(u);
  const int n = u.grid.n;
  const double dx = u.grid.dx;
  std::vector<double> rh(n - 1);
  for (int j = 0; j < n - 1; ++j) rh[j] = k.eval((j + 0.5) * dx);
  std::vector<double> w(n - 1);
  for (int j = 0; j < n - 1; ++j) w[j] = 0.5 * (u.values[j] + u.values[j + 1]);

  Field v;
  v.grid = u.grid;
  v.time = u.time;
  v.values.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int j = 0; j < n - 1; ++j) {
      const int m = i - j;
      s += (m >= 1 ? rh[m - 1] : -rh[-m]) * w[j];
    }
    v.values[i] = dx * s;
  }
  return v;
}

Field differentiate(const Field& v) {
  const int n = v.grid.n;
  if (n < 3)
    throw std::invalid_argument("differentiate: need at least 3 nodes");
  Field d;
  d.grid = v.grid;
  d.time = v.time;
  d.values.assign(n, 0.0);
  const double inv2dx = 1.0 / (2.0 * v.grid.dx);
  const std::vector<double>& a = v.values;
  d.values[0] = (-3.0 * a[0] + 4.0 * a[1] - a[2]) * inv2dx;
  for (int i = 1; i < n - 1; ++i) d.values[i] = (a[i + 1] - a[i - 1]) * inv2dx;
  d.values[n - 1] = (3.0 * a[n - 1] - 4.0 * a[n - 2] + a[n - 3]) * inv2dx;
  return d;
}

Field conv_dx(const Kernel& k, const Field& u) { return differentiate(conv(k, u)); }

}  // namespace nlkpp
