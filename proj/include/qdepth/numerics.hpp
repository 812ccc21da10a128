#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace qdepth {

/// Reproducible random stream.
///
/// The generator is xoshiro256** (Blackman & Vigna). Its 256-bit state is
/// filled by four consecutive SplitMix64 outputs started from
/// `master_seed ^ (stream_id * 0x9E3779B97F4A7C15)`. Uniform doubles take the
/// top 53 bits of each 64-bit output, so they lie in [0, 1).
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::uint64_t stream_id);

  std::uint64_t next_u64();
  double uniform();
  std::uint64_t stream_id() const { return stream_id_; }

 private:
  std::array<std::uint64_t, 4> state_{};
  std::uint64_t stream_id_ = 0;
};

RngStream derive_stream(std::uint64_t master_seed, std::uint64_t stream_id);

/// Draws `count` standard normals with the basic Box-Muller transform. Each
/// pair of uniforms (u1, u2) yields r cos(2 pi u2) and r sin(2 pi u2) with
/// r = sqrt(-2 log(1 - u1)); both outputs are used, and for odd counts the
/// unused sine of the final pair is discarded. A shorter draw is therefore
/// always a prefix of a longer draw from an identical stream.
std::vector<double> std_normal(RngStream& stream, std::size_t count);

/// Standard normal distribution function (std::erfc). NaN raises InputError.
double normal_cdf(double z);

/// Upper tail 1 - Phi(z), accurate in the far right tail.
double normal_sf(double z);

/// Regularized lower incomplete gamma P(a, x): power series for x < a + 1,
/// Lentz continued fraction for the upper function otherwise.
double regularized_gamma_p(double a, double x);
double regularized_gamma_q(double a, double x);

/// Chi-square distribution function with `dof` degrees of freedom; rejects x < 0.
double chisq_cdf(double x, int dof);
/// Upper tail 1 - F(x), computed without cancellation.
double chisq_sf(double x, int dof);

/// Ordinary least-squares slope of log(value) against log(size).
double fit_loglog_slope(std::span<const std::pair<double, double>> points);

/// Kolmogorov-Smirnov distance sup |F_n(x) - cdf(x)| of a sample against a
/// continuous distribution function. The sample is copied and sorted.
template <typename Cdf>
double ks_distance(std::vector<double> sample, Cdf&& cdf);

double sample_mean(std::span<const double> values);
/// Unbiased (n - 1) sample variance.
double sample_variance(std::span<const double> values);

}  // namespace qdepth

#include <algorithm>
#include <cmath>

namespace qdepth {

template <typename Cdf>
double ks_distance(std::vector<double> sample, Cdf&& cdf) {
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    const double below = static_cast<double>(i) / n;
    const double above = static_cast<double>(i + 1) / n;
    worst = std::max({worst, std::abs(f - below), std::abs(above - f)});
  }
  return worst;
}

}  // namespace qdepth
