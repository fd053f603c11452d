#pragma once

#include <cstdint>
#include <random>

namespace perclab {

// Purpose tags keep streams for different objects of one trial disjoint.
enum class Stream : std::uint64_t {
  kGraph = 1,
  kBond = 2,
  kOriented = 3,
  kTree = 4,
  kTrial = 5,
  kProbe = 6,
  kRusso = 7,
  kSpectral = 8,
  kPart = 9,
};

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Counter-based derivation: the child seed depends only on (master, tag,
// index), never on how many other streams were drawn before it.
constexpr std::uint64_t derive_seed(std::uint64_t master, Stream tag,
                                    std::uint64_t index = 0) noexcept {
  std::uint64_t h = splitmix64(master);
  h = splitmix64(h ^ (static_cast<std::uint64_t>(tag) * 0xd6e8feb86659fd93ull));
  return splitmix64(h ^ splitmix64(index + 0x632be59bd9b4e019ull));
}

class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }
  result_type operator()() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // p = 1 always succeeds and p = 0 never does.
  bool bernoulli(double p) { return uniform() < p; }

  std::uint64_t below(std::uint64_t bound) {
    return std::uniform_int_distribution<std::uint64_t>(0, bound - 1)(engine_);
  }

  std::mt19937_64& engine() noexcept { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace perclab
