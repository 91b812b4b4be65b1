#pragma once

#include <cmath>
#include <cstdint>

namespace lnlasso {

// Portable counter-free 64-bit generator (splitmix64). Chosen over the
// <random> engines because the standard distributions are not bit-identical
// across library implementations; every transform here is spelled out so
// generated instances are reproducible across platforms and languages.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1) using the top 53 bits.
  double uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller; consumes exactly two uniforms per pair.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform01();
    double u2 = uniform01();
    // Guard the log argument; uniform01 can return exactly 0.
    double r = std::sqrt(-2.0 * std::log1p(-u1));
    double theta = 2.0 * M_PI * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

  bool bernoulli(double p) { return uniform01() < p; }

 private:
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// Derives independent sub-stream seeds from a base seed and a stream tag.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) {
  Rng mixer(seed ^ (0x6a09e667f3bcc909ULL * (tag + 1)));
  return mixer.next_u64();
}

}  // namespace lnlasso
