#include "qdepth/numerics.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

using namespace qdepth;

namespace {

std::map<std::string, std::string> read_golden(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in);
  std::map<std::string, std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string key, value;
    ls >> key >> value;
    out[key] = value;
  }
  return out;
}

}  // namespace

TEST_CASE("rng streams are reproducible and separated") {
  RngStream a = derive_stream(0, 0), b = derive_stream(0, 0), c = derive_stream(0, 1);
  bool all_equal = true;
  for (int i = 0; i < 100; ++i) all_equal = all_equal && a.next_u64() == b.next_u64();
  CHECK(all_equal);
  CHECK(derive_stream(0, 0).next_u64() != c.next_u64());
}

TEST_CASE("rng golden values for seed 7, stream 3") {
  const auto golden = read_golden(testing::source_path("tests/golden/rng_stream_7_3.txt"));
  RngStream s = derive_stream(7, 3);
  CHECK(s.next_u64() == std::stoull(golden.at("raw0")));
  CHECK(s.next_u64() == std::stoull(golden.at("raw1")));
  CHECK(s.next_u64() == std::stoull(golden.at("raw2")));
  CHECK(derive_stream(7, 3).uniform() == std::stod(golden.at("uniform0")));
}

TEST_CASE("uniform draws lie in [0, 1)") {
  RngStream s = derive_stream(3, 9);
  for (int i = 0; i < 100000; ++i) {
    const double u = s.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
  }
}

TEST_CASE("std_normal") {
  RngStream s0 = derive_stream(1, 0);
  CHECK(std_normal(s0, 0).empty());

  RngStream s = derive_stream(1, 0);
  const auto z = std_normal(s, 1000000);
  const double mean = sample_mean(z);
  const double var = sample_variance(z);
  CHECK(mean >= -0.005);
  CHECK(mean <= 0.005);
  CHECK(var >= 0.99);
  CHECK(var <= 1.01);

  RngStream p = derive_stream(5, 2), q = derive_stream(5, 2);
  CHECK(std_normal(p, 17) == std_normal(q, 17));

  // odd counts are prefixes of the next even count
  RngStream e = derive_stream(5, 2), o = derive_stream(5, 2);
  const auto even = std_normal(e, 18);
  const auto odd = std_normal(o, 17);
  CHECK(std::equal(odd.begin(), odd.end(), even.begin()));
}

TEST_CASE("normal_cdf") {
  CHECK(normal_cdf(0.0) == 0.5);
  CHECK(std::abs(normal_cdf(1.959964) - 0.975) <= 1e-6);
  CHECK(std::abs(normal_cdf(-3.0) - 0.00134989803) < 1e-9);

  // high-precision reference values
  const std::pair<double, double> ref[] = {
      {-8, 6.2209605742717841235e-16}, {-5, 2.8665157187919391167e-7},
      {-3, 0.0013498980316300945267},  {-1.5, 0.066807201268858066004},
      {-0.3, 0.38208857781104736693},  {0.7, 0.75803634777692697138},
      {2.5, 0.99379033467422386483},   {6, 0.99999999901341235496}};
  for (const auto& [z, p] : ref) CHECK(std::abs(normal_cdf(z) - p) <= 1e-10);

  double prev = 0.0;
  for (double z = -8.0; z <= 8.0; z += 0.01) {
    const double p = normal_cdf(z);
    CHECK(p >= prev);
    CHECK(std::abs(p + normal_cdf(-z) - 1.0) <= 1e-12);
    prev = p;
  }
  CHECK_THROWS_AS(normal_cdf(std::nan("")), InputError);
}

TEST_CASE("chisq_cdf") {
  for (int d = 1; d <= 10; ++d) CHECK(chisq_cdf(0.0, d) == 0.0);
  CHECK(std::abs(chisq_cdf(3.8415, 1) - 0.95) <= 1e-4);
  CHECK(std::abs(chisq_cdf(2.0, 2) - (1.0 - std::exp(-1.0))) <= 1e-8);

  struct Row {
    double x;
    int dof;
    double p;
  };
  const Row ref[] = {{0.01, 1, 0.079655674554057963757}, {0.5, 1, 0.52049987781304653768},
                     {3.8415, 1, 0.9500012279287777276}, {10, 1, 0.99843459774199745032},
                     {1, 3, 0.19874804309879919757},     {7.5, 4, 0.88829070718395673588},
                     {30, 5, 0.99998525141896155695},    {0.2, 10, 7.6678016861893110159e-8},
                     {80, 20, 0.99999999607406777371}};
  for (const auto& r : ref) {
    CHECK(std::abs(chisq_cdf(r.x, r.dof) - r.p) <= 1e-10);
    CHECK(std::abs(chisq_cdf(r.x, r.dof) + chisq_sf(r.x, r.dof) - 1.0) <= 1e-14);
  }

  for (int d : {1, 2, 3, 7}) {
    double prev = 0.0;
    for (double x = 0.0; x <= 50.0; x += 0.05) {
      const double p = chisq_cdf(x, d);
      CHECK(p >= prev);
      prev = p;
    }
  }
  for (double x = 0.0; x <= 50.0; x += 0.1) {
    CHECK(std::abs(chisq_cdf(x, 2) - (1.0 - std::exp(-x / 2.0))) <= 1e-9);
  }
  CHECK_THROWS_AS(chisq_cdf(-1.0, 1), InputError);
  CHECK_THROWS_AS(chisq_cdf(1.0, 0), InputError);
}

TEST_CASE("fit_loglog_slope") {
  const std::vector<std::pair<double, double>> two{{10, 0.1}, {100, 0.01}};
  CHECK(fit_loglog_slope(two) == doctest::Approx(-1.0).epsilon(1e-15));

  std::vector<std::pair<double, double>> power;
  for (double m : {64.0, 128.0, 256.0, 512.0}) power.emplace_back(m, 3.7 * std::pow(m, -0.75));
  CHECK(std::abs(fit_loglog_slope(power) + 0.75) <= 1e-12);

  const std::vector<std::pair<double, double>> flat{{10, 1}, {100, 1}};
  CHECK(fit_loglog_slope(flat) == 0.0);

  const std::vector<std::pair<double, double>> one_size{{10, 1}, {10, 2}};
  CHECK_THROWS_AS(fit_loglog_slope(one_size), InputError);
  const std::vector<std::pair<double, double>> nonpositive{{10, 1}, {100, 0}};
  CHECK_THROWS_AS(fit_loglog_slope(nonpositive), InputError);
}

TEST_CASE("ks_distance") {
  CHECK(ks_distance({0.5}, [](double x) { return x; }) == doctest::Approx(0.5));
  std::vector<double> grid;
  for (int i = 0; i < 1000; ++i) grid.push_back((i + 0.5) / 1000.0);
  CHECK(ks_distance(grid, [](double x) { return x; }) == doctest::Approx(0.0005));
}
