#pragma once

#include "lpwa/scenario.hpp"

#include <cmath>
#include <cstdint>

namespace lpwa {

// Deterministic stream RNG (xoshiro256++ seeded through splitmix64).
// Substreams are derived from (seed, stream) so parallel workers produce
// schedule-independent results; all samplers are hand-rolled to keep the
// byte stream identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) {
    std::uint64_t x = seed ^ (0x9e3779b97f4a7c15ULL * (stream + 1));
    for (auto& w : s_) w = splitmix64(x);
    if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform in (0,1); never returns 0 so logs are safe.
  double uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }
  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  double exponential(double mean = 1.0) { return -mean * std::log(uniform()); }

  double normal() {
    if (have_cached_) {
      have_cached_ = false;
      return cached_;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform()));
    const double th = 2.0 * M_PI * uniform();
    cached_ = r * std::sin(th);
    have_cached_ = true;
    return r * std::cos(th);
  }

  // Exact Poisson: inversion below the chunk size, sum of chunks above.
  std::uint64_t poisson(double mean) {
    std::uint64_t n = 0;
    while (mean > 12.0) {
      n += poisson_inversion(12.0);
      mean -= 12.0;
    }
    return n + poisson_inversion(mean);
  }

  // Zero-truncated Poisson via conditional inversion.
  std::uint64_t poisson_positive(double mean) {
    if (mean > 12.0) {
      std::uint64_t k = 0;
      while (k == 0) k = poisson(mean);
      return k;
    }
    const double norm = 1.0 - std::exp(-mean);
    const double u = uniform();
    double p = std::exp(-mean) * mean;  // P(K=1)
    double cdf = p / norm;
    std::uint64_t k = 1;
    while (u > cdf && k < 10000) {
      ++k;
      p *= mean / static_cast<double>(k);
      cdf += p / norm;
    }
    return k;
  }

  // Nakagami-m power fading: Gamma(shape m, mean omega), integer m.
  double fading(int m, double omega) {
    double sum = 0.0;
    for (int i = 0; i < m; ++i) sum += exponential();
    return sum * omega / m;
  }
  double fading(const ChannelModel& ch) {
    return fading(ch.nakagami_m, ch.nakagami_omega);
  }

 private:
  static std::uint64_t rotl(std::uint64_t v, int k) {
    return (v << k) | (v >> (64 - k));
  }
  static std::uint64_t splitmix64(std::uint64_t& x) {
    std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t poisson_inversion(double mean) {
    if (mean <= 0.0) return 0;
    const double u = uniform();
    double p = std::exp(-mean);
    double cdf = p;
    std::uint64_t k = 0;
    while (u > cdf && k < 10000) {
      ++k;
      p *= mean / static_cast<double>(k);
      cdf += p;
    }
    return k;
  }

  std::uint64_t s_[4];
  bool have_cached_ = false;
  double cached_ = 0.0;
};

}  // namespace lpwa
