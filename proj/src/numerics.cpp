#include "qdepth/numerics.hpp"

#include "qdepth/types.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <set>
#include <string>

namespace qdepth {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t splitmix64(std::uint64_t& s) {
  s += kGolden;
  std::uint64_t z = s;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

constexpr int kMaxIter = 100000;
constexpr double kEps = 1e-16;
constexpr double kTiny = 1e-300;

double gamma_series(double a, double x) {
  double ap = a;
  double term = 1.0 / a;
  double sum = term;
  for (int n = 0; n < kMaxIter; ++n) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::abs(term) < std::abs(sum) * kEps) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Upper function Q(a, x) by the modified Lentz continued fraction.
double gamma_continued_fraction(double a, double x) {
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxIter; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEps) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

void check_gamma_args(double a, double x) {
  if (!(a > 0.0)) throw InputError("incomplete gamma: shape must be positive");
  if (!(x >= 0.0)) throw InputError("incomplete gamma: argument must be nonnegative");
}

}  // namespace

RngStream::RngStream(std::uint64_t master_seed, std::uint64_t stream_id) : stream_id_(stream_id) {
  std::uint64_t s = master_seed ^ (stream_id * kGolden);
  for (auto& word : state_) word = splitmix64(s);
}

std::uint64_t RngStream::next_u64() {
  const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
  const std::uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = rotl(state_[3], 45);
  return result;
}

double RngStream::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

RngStream derive_stream(std::uint64_t master_seed, std::uint64_t stream_id) {
  return RngStream(master_seed, stream_id);
}

std::vector<double> std_normal(RngStream& stream, std::size_t count) {
  std::vector<double> out;
  out.reserve(count);
  while (out.size() < count) {
    const double u1 = 1.0 - stream.uniform();  // (0, 1], keeps log finite
    const double u2 = stream.uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    out.push_back(r * std::cos(angle));
    if (out.size() < count) out.push_back(r * std::sin(angle));
  }
  return out;
}

double normal_cdf(double z) {
  if (std::isnan(z)) throw InputError("normal_cdf: argument is NaN");
  return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

double normal_sf(double z) {
  if (std::isnan(z)) throw InputError("normal_sf: argument is NaN");
  return 0.5 * std::erfc(z / std::numbers::sqrt2);
}

double regularized_gamma_p(double a, double x) {
  check_gamma_args(a, x);
  if (x == 0.0) return 0.0;
  if (x < a + 1.0) return gamma_series(a, x);
  return 1.0 - gamma_continued_fraction(a, x);
}

double regularized_gamma_q(double a, double x) {
  check_gamma_args(a, x);
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - gamma_series(a, x);
  return gamma_continued_fraction(a, x);
}

double chisq_cdf(double x, int dof) {
  if (dof < 1) throw InputError("chisq_cdf: degrees of freedom must be positive");
  if (!(x >= 0.0)) throw InputError("chisq_cdf: x must be nonnegative");
  return regularized_gamma_p(0.5 * dof, 0.5 * x);
}

double chisq_sf(double x, int dof) {
  if (dof < 1) throw InputError("chisq_sf: degrees of freedom must be positive");
  if (!(x >= 0.0)) throw InputError("chisq_sf: x must be nonnegative");
  return regularized_gamma_q(0.5 * dof, 0.5 * x);
}

double fit_loglog_slope(std::span<const std::pair<double, double>> points) {
  if (points.size() < 2) throw InputError("fit_loglog_slope: need at least two points");
  std::set<double> sizes;
  for (const auto& [size, value] : points) {
    if (!(size > 0.0)) throw InputError("fit_loglog_slope: sizes must be positive");
    if (!(value > 0.0)) {
      throw InputError("fit_loglog_slope: values must be positive, got " + std::to_string(value));
    }
    sizes.insert(size);
  }
  if (sizes.size() < 2) throw InputError("fit_loglog_slope: need at least two distinct sizes");

  const double n = static_cast<double>(points.size());
  double mx = 0.0, my = 0.0;
  for (const auto& [size, value] : points) {
    mx += std::log(size);
    my += std::log(value);
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (const auto& [size, value] : points) {
    const double dx = std::log(size) - mx;
    sxy += dx * (std::log(value) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

double sample_mean(std::span<const double> values) {
  if (values.empty()) throw InputError("sample_mean: empty input");
  double s = 0.0;
  for (double v : values) s += v;
  return s / static_cast<double>(values.size());
}

double sample_variance(std::span<const double> values) {
  if (values.size() < 2) throw InputError("sample_variance: need at least two values");
  const double mean = sample_mean(values);
  double s = 0.0;
  for (double v : values) s += (v - mean) * (v - mean);
  return s / static_cast<double>(values.size() - 1);
}

}  // namespace qdepth
