#pragma once

#include <cstddef>
#include <cstdint>

// Vector primitives for the decode/score inner loops. Score vectors are
// vocabulary-sized arrays of doubles touched once per generated token, so
// these are the only arithmetic hot spots in the project. Each primitive has
// a scalar reference implementation and an AVX2 variant; the active variant
// is picked once at runtime. fill/max/argmax/count_eq are bit-identical
// across variants; sum may differ in the last ulp (lane-wise accumulation),
// which the equivalence tests bound at 1e-12 relative.
namespace oxmc::kernels {

void fill(double* dst, size_t n, double value);
double max(const double* x, size_t n);    // n >= 1
double sum(const double* x, size_t n);    // 0 for n == 0
size_t argmax(const double* x, size_t n); // n >= 1; lowest index wins ties
size_t count_eq(const int32_t* x, size_t n, int32_t value);

// Name of the variant currently dispatched to: "avx2" or "scalar".
const char* backend();

// Test hook: pin dispatch to the scalar variant (true) or restore runtime
// detection (false).
void force_scalar(bool on);

namespace scalar {
void fill(double* dst, size_t n, double value);
double max(const double* x, size_t n);
double sum(const double* x, size_t n);
size_t argmax(const double* x, size_t n);
size_t count_eq(const int32_t* x, size_t n, int32_t value);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
#define OXMC_KERNELS_HAVE_AVX2 1
namespace avx2 {
void fill(double* dst, size_t n, double value);
double max(const double* x, size_t n);
double sum(const double* x, size_t n);
size_t argmax(const double* x, size_t n);
size_t count_eq(const int32_t* x, size_t n, int32_t value);
}  // namespace avx2
#endif

// True when the running CPU can execute the AVX2 variants.
bool avx2_supported();

}  // namespace oxmc::kernels
