#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace oxmc {

// Deterministic 64-bit generator (splitmix64). Every random choice in the
// project flows through this class so that runs are reproducible from a
// single root seed on any platform; std::random distributions are avoided
// because their output is implementation-defined.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  uint64_t next_u64() {
    uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1) with 53 bits of precision.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform in [0, n), unbiased (Lemire's multiply-with-rejection). n >= 1.
  uint64_t bounded(uint64_t n) {
    unsigned __int128 m = static_cast<unsigned __int128>(next_u64()) * n;
    auto low = static_cast<uint64_t>(m);
    if (low < n) {
      uint64_t threshold = (0 - n) % n;
      while (low < threshold) {
        m = static_cast<unsigned __int128>(next_u64()) * n;
        low = static_cast<uint64_t>(m);
      }
    }
    return static_cast<uint64_t>(m >> 64);
  }

  // Fisher-Yates, iterating from the back; the canonical shuffle for split
  // reproducibility. Tests reimplement this loop as an independent oracle.
  template <typename T>
  void shuffle(std::vector<T>& values) {
    for (size_t i = values.size(); i > 1; --i) {
      size_t j = static_cast<size_t>(bounded(i));
      std::swap(values[i - 1], values[j]);
    }
  }

 private:
  uint64_t state_;
};

inline uint64_t fnv1a64(std::string_view s) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Stage seeds are derived as splitmix64(root ^ fnv1a64(tag)).next(); the tag
// names the pipeline stage (e.g. "split", "decode:pusl:item42").
inline uint64_t derive_seed(uint64_t root, std::string_view tag) {
  Rng r(root ^ fnv1a64(tag));
  return r.next_u64();
}

}  // namespace oxmc
