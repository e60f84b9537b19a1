#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace rydvmc {

// All stochastic draws in this project are keyed by (seed, stream tag, indices)
// instead of a single mutable generator, so that every sample, batch, and
// evaluation is reproducible independently of execution order, thread count,
// and checkpoint/resume boundaries.

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

enum class Stream : std::uint64_t {
  GlorotInit = 1,
  OracleDraw = 2,
  RnnSample = 3,
  VmcBatch = 4,
  TraceEval = 5,
  Shuffle = 6,
};

inline std::uint64_t stream_seed(std::uint64_t seed, Stream tag, std::uint64_t a = 0,
                                 std::uint64_t b = 0) {
  std::uint64_t u = splitmix64(seed);
  u = splitmix64(u ^ static_cast<std::uint64_t>(tag));
  u = splitmix64(u ^ a);
  u = splitmix64(u ^ b);
  return u;
}

// Single counter-based uniform draw in [0, 1); no generator state.
inline double uniform01_at(std::uint64_t seed, Stream tag, std::uint64_t counter) {
  return static_cast<double>(stream_seed(seed, tag, counter) >> 11) * 0x1.0p-53;
}

// Sequential generator for streams that draw many values. Only raw mt19937_64
// output bits are consumed (never std::uniform_*_distribution, whose results
// are implementation-defined), so identical seeds give identical draws on any
// standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, n) via multiply-shift.
  std::uint64_t bounded(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(gen_()) * static_cast<unsigned __int128>(n)) >> 64);
  }

 private:
  std::mt19937_64 gen_;
};

// Fisher-Yates with explicit bounded draws; std::shuffle is not portable.
template <typename T>
void shuffle_in_place(std::vector<T>& values, Rng& rng) {
  for (std::size_t i = values.size(); i > 1; --i) {
    std::swap(values[i - 1], values[rng.bounded(i)]);
  }
}

}  // namespace rydvmc
