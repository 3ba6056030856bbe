#include "oxmc/kernels.hpp"

#include <algorithm>
#include <atomic>

namespace oxmc::kernels {

namespace scalar {

void fill(double* dst, size_t n, double value) { std::fill(dst, dst + n, value); }

double max(const double* x, size_t n) {
  double best = x[0];
  for (size_t i = 1; i < n; ++i) {
    if (x[i] > best) best = x[i];
  }
  return best;
}

double sum(const double* x, size_t n) {
  double acc = 0.0;
  for (size_t i = 0; i < n; ++i) acc += x[i];
  return acc;
}

size_t argmax(const double* x, size_t n) {
  size_t best = 0;
  for (size_t i = 1; i < n; ++i) {
    if (x[i] > x[best]) best = i;
  }
  return best;
}

size_t count_eq(const int32_t* x, size_t n, int32_t value) {
  size_t count = 0;
  for (size_t i = 0; i < n; ++i) {
    if (x[i] == value) ++count;
  }
  return count;
}

}  // namespace scalar

namespace {

struct Dispatch {
  void (*fill)(double*, size_t, double);
  double (*max)(const double*, size_t);
  double (*sum)(const double*, size_t);
  size_t (*argmax)(const double*, size_t);
  size_t (*count_eq)(const int32_t*, size_t, int32_t);
  const char* name;
};

constexpr Dispatch kScalar{scalar::fill, scalar::max, scalar::sum,
                           scalar::argmax, scalar::count_eq, "scalar"};

#ifdef OXMC_KERNELS_HAVE_AVX2
constexpr Dispatch kAvx2{avx2::fill, avx2::max, avx2::sum,
                         avx2::argmax, avx2::count_eq, "avx2"};
#endif

const Dispatch& detected() {
#ifdef OXMC_KERNELS_HAVE_AVX2
  static const bool has_avx2 = [] {
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") != 0;
  }();
  if (has_avx2) return kAvx2;
#endif
  return kScalar;
}

std::atomic<bool> g_force_scalar{false};

const Dispatch& active() { return g_force_scalar.load(std::memory_order_relaxed) ? kScalar : detected(); }

}  // namespace

bool avx2_supported() {
#ifdef OXMC_KERNELS_HAVE_AVX2
  return &detected() == &kAvx2;
#else
  return false;
#endif
}

void force_scalar(bool on) { g_force_scalar.store(on, std::memory_order_relaxed); }

const char* backend() { return active().name; }

void fill(double* dst, size_t n, double value) { active().fill(dst, n, value); }
double max(const double* x, size_t n) { return active().max(x, n); }
double sum(const double* x, size_t n) { return active().sum(x, n); }
size_t argmax(const double* x, size_t n) { return active().argmax(x, n); }
size_t count_eq(const int32_t* x, size_t n, int32_t value) { return active().count_eq(x, n, value); }

}  // namespace oxmc::kernels
