#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <initializer_list>

namespace risia {

/// Deterministic counter-style random source. A stream is identified by a
/// list of 64-bit tag words (seed, purpose tag, indices); two streams with
/// different tags are statistically independent, and streams are stable
/// across platforms and standard-library versions. This is what makes
/// channel realizations nest when only a dimension (antenna count, RIS
/// size) changes: every matrix entry is addressed by its own tag tuple.
class Prng {
 public:
  Prng() = default;

  explicit Prng(std::initializer_list<std::uint64_t> tags) {
    for (std::uint64_t t : tags) absorb(t);
  }

  void absorb(std::uint64_t word) {
    state_ ^= word + 0x9E3779B97F4A7C15ull + (state_ << 6) + (state_ >> 2);
    state_ = mix(state_);
  }

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ull;
    return mix(state_);
  }

  /// Uniform in [0, 1).
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal via Box-Muller; pairs are cached.
  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    // u1 in (0, 1] so the log is finite.
    const double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 6.283185307179586476925286766559 * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
  }

  /// CN(0,1): real and imaginary parts each N(0, 1/2).
  std::complex<double> complex_gaussian() {
    const double inv_sqrt2 = 0.70710678118654752440;
    const double re = gaussian();
    const double im = gaussian();
    return {re * inv_sqrt2, im * inv_sqrt2};
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  std::uint64_t state_ = 0x243F6A8885A308D3ull;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

/// Collapse a tag tuple into a single 64-bit stream seed.
inline std::uint64_t hash_tags(std::initializer_list<std::uint64_t> tags) {
  Prng p(tags);
  return p.next_u64();
}

}  // namespace risia
