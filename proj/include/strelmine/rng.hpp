#pragma once

#include <cstdint>
#include <vector>

namespace strelmine {

// Deterministic splitmix64 generator. All randomness in the toolkit flows
// through this type so that a fixed seed reproduces artifacts bit for bit,
// independent of the standard library's distribution implementations.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, n), n > 0. Multiply-shift keeps the mapping unbiased
  // enough for simulation purposes and is fully deterministic.
  std::uint64_t next_below(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

  // Uniform in [0, 1).
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  // Inclusive range.
  int uniform_int(int lo, int hi) {
    return lo + static_cast<int>(next_below(static_cast<std::uint64_t>(hi - lo) + 1));
  }

  bool bernoulli(double p) { return next_double() < p; }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(next_below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

  // Derives an independent stream seed, used to fan one config seed out to
  // the pipeline stages.
  static std::uint64_t mix(std::uint64_t seed, std::uint64_t stream) {
    Rng r(seed ^ (0xd1342543de82ef95ULL * (stream + 1)));
    return r.next_u64();
  }

private:
  std::uint64_t state_;
};

}  // namespace strelmine
