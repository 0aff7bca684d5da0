#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace speller {

std::uint64_t splitmix64(std::uint64_t x);

// Derives an independent stream seed from a master seed and a stream id.
std::uint64_t deriveSeed(std::uint64_t master, std::uint64_t stream);

// Random stream with platform-independent output. Only the raw mt19937_64
// sequence is used; uniform, integer and normal draws are implemented here
// because the <random> distributions are implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t bits() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Unbiased integer on [0, n). n must be positive.
  std::size_t below(std::size_t n);

  double normal();

  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::size_t j = below(i);
      using std::swap;
      swap(items[i - 1], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace speller
