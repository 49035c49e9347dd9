#include "riesz/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <atomic>
#include <complex>
#include <memory>
#include <mutex>
#include <string>

#include "riesz/error.hpp"

namespace riesz {

namespace {

std::atomic<std::size_t> g_memory_limit{std::size_t{4} << 30};

// FFTW's planner is not re-entrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};

template <class T>
using FftwBuffer = std::unique_ptr<T[], FftwFree>;

template <class T>
FftwBuffer<T> fftw_buffer(std::size_t count) {
  auto* p = static_cast<T*>(fftw_malloc(sizeof(T) * count));
  if (!p) throw Error(Errc::resource, "fftw_malloc failed for " + std::to_string(count) + " elements");
  return FftwBuffer<T>(p);
}

struct PlanDeleter {
  void operator()(fftw_plan p) const {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(p);
  }
};

using Plan = std::unique_ptr<std::remove_pointer_t<fftw_plan>, PlanDeleter>;

std::size_t product(const std::vector<int>& s) {
  std::size_t p = 1;
  for (int e : s) p *= static_cast<std::size_t>(e);
  return p;
}

void check_array(const RealArray& a, const char* what) {
  if (a.shape.empty()) throw Error(Errc::invalid_argument, std::string(what) + " has no axes");
  for (int e : a.shape) {
    if (e < 1) throw Error(Errc::invalid_argument, std::string(what) + " has an empty axis");
  }
  if (a.values.size() != product(a.shape)) throw Error(Errc::invalid_argument, std::string(what) + " size mismatch");
}

// Circular convolution on the padded box `pad`: `a` is placed at the origin,
// entry j of `b` represents offset j - shift_b and is stored at (j - shift_b) mod pad.
// Returns the padded circular result (axis 0 fastest).
std::vector<double> circular(const RealArray& a, const RealArray& b, const std::vector<int>& shift_b,
                             const std::vector<int>& pad) {
  const int n = static_cast<int>(pad.size());
  const std::size_t total = product(pad);
  const std::size_t half = static_cast<std::size_t>(pad[0] / 2 + 1);
  const std::size_t ctotal = total / pad[0] * half;
  const std::size_t bytes = (3 * total + 4 * ctotal) * sizeof(double);
  if (bytes > g_memory_limit.load()) {
    std::string dims;
    for (int k = 0; k < n; ++k) dims += (k ? "x" : "") + std::to_string(pad[k]);
    throw Error(Errc::resource, "FFT box " + dims + " needs " + std::to_string(bytes >> 20) +
                                    " MiB, limit is " + std::to_string(g_memory_limit.load() >> 20) + " MiB");
  }

  auto ra = fftw_buffer<double>(total);
  auto rb = fftw_buffer<double>(total);
  auto ca = fftw_buffer<fftw_complex>(ctotal);
  auto cb = fftw_buffer<fftw_complex>(ctotal);
  std::fill(ra.get(), ra.get() + total, 0.0);
  std::fill(rb.get(), rb.get() + total, 0.0);

  std::vector<std::size_t> stride(n);
  std::size_t s = 1;
  for (int k = 0; k < n; ++k) stride[k] = s, s *= pad[k];

  auto scatter = [&](const RealArray& src, double* dst, const std::vector<int>* shift) {
    std::vector<int> idx(n, 0);
    for (std::size_t i = 0; i < src.values.size(); ++i) {
      std::size_t f = 0;
      for (int k = 0; k < n; ++k) {
        int p = idx[k] - (shift ? (*shift)[k] : 0);
        if (p < 0) p += pad[k];
        f += static_cast<std::size_t>(p) * stride[k];
      }
      dst[f] = src.values[i];
      for (int k = 0; k < n; ++k) {
        if (++idx[k] < src.shape[k]) break;
        idx[k] = 0;
      }
    }
  };
  scatter(a, ra.get(), nullptr);
  scatter(b, rb.get(), &shift_b);

  // FFTW is row-major with the last index fastest: pass the axes reversed.
  std::vector<int> dims(pad.rbegin(), pad.rend());
  Plan fa, fb, inv;
  {
    std::lock_guard lock(planner_mutex());
    fa.reset(fftw_plan_dft_r2c(n, dims.data(), ra.get(), ca.get(), FFTW_ESTIMATE));
    fb.reset(fftw_plan_dft_r2c(n, dims.data(), rb.get(), cb.get(), FFTW_ESTIMATE));
    inv.reset(fftw_plan_dft_c2r(n, dims.data(), ca.get(), ra.get(), FFTW_ESTIMATE));
  }
  if (!fa || !fb || !inv) throw Error(Errc::resource, "FFTW planning failed");
  fftw_execute(fa.get());
  fftw_execute(fb.get());
  const double scale = 1.0 / static_cast<double>(total);
  for (std::size_t i = 0; i < ctotal; ++i) {
    const double re = ca[i][0] * cb[i][0] - ca[i][1] * cb[i][1];
    const double im = ca[i][0] * cb[i][1] + ca[i][1] * cb[i][0];
    ca[i][0] = re * scale;
    ca[i][1] = im * scale;
  }
  fftw_execute(inv.get());
  return std::vector<double>(ra.get(), ra.get() + total);
}

RealArray extract(const std::vector<double>& padded, const std::vector<int>& pad, const std::vector<int>& shape) {
  const int n = static_cast<int>(pad.size());
  RealArray out{shape, std::vector<double>(product(shape))};
  std::vector<std::size_t> stride(n);
  std::size_t s = 1;
  for (int k = 0; k < n; ++k) stride[k] = s, s *= pad[k];
  std::vector<int> idx(n, 0);
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    std::size_t f = 0;
    for (int k = 0; k < n; ++k) f += static_cast<std::size_t>(idx[k]) * stride[k];
    out.values[i] = padded[f];
    for (int k = 0; k < n; ++k) {
      if (++idx[k] < shape[k]) break;
      idx[k] = 0;
    }
  }
  return out;
}

}  // namespace

std::size_t fft_good_size(std::size_t n) {
  if (n <= 1) return 1;
  for (std::size_t m = n;; ++m) {
    std::size_t r = m;
    for (std::size_t p : {2, 3, 5, 7}) {
      while (r % p == 0) r /= p;
    }
    if (r == 1) return m;
  }
}

void set_fft_memory_limit(std::size_t bytes) { g_memory_limit.store(bytes); }
std::size_t fft_memory_limit() { return g_memory_limit.load(); }

RealArray convolve_full(const RealArray& a, const RealArray& b) {
  check_array(a, "first operand");
  check_array(b, "second operand");
  if (a.shape.size() != b.shape.size()) throw Error(Errc::invalid_argument, "operands differ in dimension");
  const std::size_t n = a.shape.size();
  std::vector<int> out_shape(n), pad(n);
  for (std::size_t k = 0; k < n; ++k) {
    out_shape[k] = a.shape[k] + b.shape[k] - 1;
    pad[k] = static_cast<int>(fft_good_size(out_shape[k]));
  }
  const auto padded = circular(a, b, std::vector<int>(n, 0), pad);
  return extract(padded, pad, out_shape);
}

RealArray convolve_centered(const RealArray& a, const RealArray& k) {
  check_array(a, "input");
  check_array(k, "kernel");
  if (a.shape.size() != k.shape.size()) throw Error(Errc::invalid_argument, "operands differ in dimension");
  const std::size_t n = a.shape.size();
  std::vector<int> shift(n), pad(n);
  for (std::size_t d = 0; d < n; ++d) {
    if (k.shape[d] % 2 != 1) throw Error(Errc::invalid_argument, "centered kernel needs odd extents");
    shift[d] = k.shape[d] / 2;
    // outputs i - j range over (-na, na); kernel offsets over [-c, c]
    pad[d] = static_cast<int>(fft_good_size(std::max(a.shape[d] + shift[d], k.shape[d])));
  }
  const auto padded = circular(a, k, shift, pad);
  return extract(padded, pad, a.shape);
}

}  // namespace riesz
