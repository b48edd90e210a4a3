#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <tuple>
#include <utility>

namespace sphs {

// Philox4x32-10 counter-based generator. A 128-bit counter and 64-bit key
// go in, 128 random bits come out; there is no hidden state, so any draw
// can be addressed directly. We key the cipher with the user seed and put
// (draw block, path index) in the counter:
//
//   key     = (seed_lo, seed_hi)
//   counter = (block_lo, block_hi, path_lo, path_hi)
//
// Every path owns a disjoint substream and the value of draw k on path p
// depends only on (seed, p, k), never on evaluation order or thread count.
struct Philox4x32 {
  static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
  static constexpr std::uint32_t kMult0 = 0xD2511F53u;
  static constexpr std::uint32_t kMult1 = 0xCD9E8D57u;

  static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> ctr,
                                            std::array<std::uint32_t, 2> key) {
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        key[0] += kWeyl0;
        key[1] += kWeyl1;
      }
      const std::uint64_t p0 = std::uint64_t(kMult0) * ctr[0];
      const std::uint64_t p1 = std::uint64_t(kMult1) * ctr[2];
      const auto hi0 = std::uint32_t(p0 >> 32), lo0 = std::uint32_t(p0);
      const auto hi1 = std::uint32_t(p1 >> 32), lo1 = std::uint32_t(p1);
      ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    }
    return ctr;
  }
};

// One (seed, path) substream. Stateless; every accessor takes the draw
// block index explicitly.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t path)
      : key_{std::uint32_t(seed), std::uint32_t(seed >> 32)}, path_(path) {}

  std::array<std::uint32_t, 4> raw(std::uint64_t block) const {
    return Philox4x32::block({std::uint32_t(block), std::uint32_t(block >> 32),
                              std::uint32_t(path_), std::uint32_t(path_ >> 32)},
                             key_);
  }

  // Two uniforms in (0,1) per block, each built from 53 bits. The +0.5
  // offset keeps both endpoints strictly excluded.
  std::pair<double, double> uniform_pair(std::uint64_t block) const {
    const auto w = raw(block);
    const auto v0 = (std::uint64_t(w[0]) << 32) | w[1];
    const auto v1 = (std::uint64_t(w[2]) << 32) | w[3];
    constexpr double scale = 1.0 / 9007199254740992.0;  // 2^-53
    return {(double(v0 >> 11) + 0.5) * scale, (double(v1 >> 11) + 0.5) * scale};
  }

  // Box-Muller pair of independent standard normals.
  std::pair<double, double> normal_pair(std::uint64_t block) const {
    const auto [u1, u2] = uniform_pair(block);
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * M_PI * u2;
    return {r * std::cos(a), r * std::sin(a)};
  }

 private:
  std::array<std::uint32_t, 2> key_;
  std::uint64_t path_;
};

// Sequential view over a substream for consumers that just want draw,
// draw, draw. Draw i comes from block i/2, so the sequence is still a
// pure function of (seed, path).
class NormalStream {
 public:
  NormalStream(std::uint64_t seed, std::uint64_t path) : rng_(seed, path) {}

  double next() {
    if (index_ % 2 == 0) {
      std::tie(cached_, spare_) = rng_.normal_pair(index_ / 2);
      ++index_;
      return cached_;
    }
    ++index_;
    return spare_;
  }

 private:
  CounterRng rng_;
  std::uint64_t index_ = 0;
  double cached_ = 0.0, spare_ = 0.0;
};

// Acklam's rational approximation to the standard normal quantile,
// |relative error| < 1.15e-9 over (0,1). Used for quasi-random direction
// sampling where Box-Muller's pairing would break the low-discrepancy
// structure.
inline double inverse_normal_cdf(double p) {
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;

  if (p <= 0.0 || p >= 1.0) return p <= 0.0 ? -HUGE_VAL : HUGE_VAL;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q +
            c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p <= 1.0 - p_low) {
    const double q = p - 0.5, r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r +
            a[5]) *
           q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  }
  const double q = std::sqrt(-2.0 * std::log(1.0 - p));
  return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q +
           c[5]) /
         ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
}

}  // namespace sphs
