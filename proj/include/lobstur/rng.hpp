#pragma once

#include <cmath>
#include <cstdint>

// Counter-based randomness built on the splitmix64 mixer (Steele, Lea &
// Flood 2014). Every draw is a pure function of (stream key, counter), so
// substreams derived for a node, a pair, or a replica are order-independent
// and reproducible under parallel generation.
namespace lobstur::rng {

inline constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

// splitmix64 output finalizer.
inline std::uint64_t mix_bits(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t hash64(std::uint64_t z) { return mix_bits(z + kGamma); }

// Derives a substream key; derive(k, a) != derive(k, b) for a != b with
// overwhelming probability.
inline std::uint64_t derive(std::uint64_t key, std::uint64_t word) {
  return hash64(key ^ hash64(word));
}

inline std::uint64_t derive(std::uint64_t key, std::uint64_t a,
                            std::uint64_t b) {
  return derive(derive(key, a), b);
}

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t key) : state_(key) {}

  std::uint64_t next() { return mix_bits(state_ += kGamma); }

  // uniform in [0, 1) with 53 random bits
  double uniform() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  // uniform in (0, 1], safe as a log() argument
  double uniform_pos() {
    return (static_cast<double>(next() >> 11) + 1.0) * 0x1.0p-53;
  }

  // unbiased uniform integer in [0, n), n > 0
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
      const std::uint64_t r = next();
      if (r >= threshold) return r % n;
    }
  }

  // standard normal via Box-Muller; consumes exactly two draws
  double normal() {
    const double u1 = uniform_pos();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * 3.14159265358979323846 * u2);
  }

  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::uint64_t state_;
};

// Substream tags. Values are arbitrary but fixed: changing them changes
// every sampled artifact.
namespace tag {
inline constexpr std::uint64_t kLatents = 0xA1;
inline constexpr std::uint64_t kGraphonEdges = 0xA2;
inline constexpr std::uint64_t kFeatureNoise = 0xA3;
inline constexpr std::uint64_t kResampleFeatures = 0xB1;
inline constexpr std::uint64_t kRewire = 0xB2;
inline constexpr std::uint64_t kOrigins = 0xB3;
inline constexpr std::uint64_t kBlockShuffle = 0xC1;
inline constexpr std::uint64_t kNetworkIndices = 0xC2;
inline constexpr std::uint64_t kNetworkEdges = 0xC3;
inline constexpr std::uint64_t kNetworkFeatures = 0xC4;
inline constexpr std::uint64_t kDrop = 0xC5;
inline constexpr std::uint64_t kKmeans = 0xD1;
inline constexpr std::uint64_t kTuneCell = 0xE1;
}  // namespace tag

}  // namespace lobstur::rng
