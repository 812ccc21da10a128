#include "qdepth/depth.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>

using namespace qdepth;
using testing::gaussian;

namespace {

DataSet rows(std::initializer_list<std::initializer_list<double>> values) {
  DataSet out(static_cast<Index>(values.size()), static_cast<Index>(values.begin()->size()));
  Index i = 0;
  for (const auto& r : values) {
    Index j = 0;
    for (double v : r) out(i, j++) = v;
    ++i;
  }
  return out;
}

DataSet col(std::initializer_list<double> values) {
  DataSet out(static_cast<Index>(values.size()), 1);
  Index i = 0;
  for (double v : values) out(i++, 0) = v;
  return out;
}

Eigen::Matrix2d rotation(double angle) {
  Eigen::Matrix2d r;
  r << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
  return r;
}

}  // namespace

TEST_CASE("depth kind names round-trip") {
  for (DepthKind k : {DepthKind::euclidean, DepthKind::mahalanobis, DepthKind::halfspace,
                      DepthKind::projection, DepthKind::spatial}) {
    CHECK(parse_depth_kind(to_string(k)) == k);
  }
  CHECK_THROWS_AS(parse_depth_kind("tukey"), InputError);
}

TEST_CASE("euclidean depth") {
  const DataSet s = col({0, 2});
  CHECK(euclidean_depth(col({1}), s)(0) == 1.0);
  CHECK(euclidean_depth(col({0}), s)(0) == 0.5);
  CHECK(euclidean_depth(col({1e6}), s)(0) <= 1e-11);
  CHECK_THROWS_AS(euclidean_depth(rows({{0, 0}}), rows({{0, 0}, {1, 1}})), InputError);
}

TEST_CASE("mahalanobis depth") {
  const DataSet sq = rows({{0, 0}, {2, 0}, {0, 2}, {2, 2}});
  CHECK(mahalanobis_depth(rows({{0, 0}}), sq)(0) == doctest::Approx(0.4).epsilon(1e-14));
  CHECK(mahalanobis_depth(rows({{1, 1}}), sq)(0) == doctest::Approx(1.0).epsilon(1e-14));

  const DataSet x = gaussian(50, 3, 11);
  const DataSet q = gaussian(20, 3, 11, 1);
  const Eigen::RowVectorXd mean = x.colwise().mean();
  CHECK(mahalanobis_depth(mean, x)(0) == doctest::Approx(1.0).epsilon(1e-12));

  Eigen::Matrix3d a;
  a << 2, 0.3, -1, 0, 1.5, 0.2, 0.7, -0.4, 3;
  const Eigen::RowVector3d b(5, -2, 0.5);
  const DataSet xa = (x * a.transpose()).rowwise() + b;
  const DataSet qa = (q * a.transpose()).rowwise() + b;
  CHECK((mahalanobis_depth(q, x) - mahalanobis_depth(qa, xa)).cwiseAbs().maxCoeff() <= 1e-9);

  CHECK_THROWS_AS(mahalanobis_depth(rows({{0, 0}}), rows({{0, 0}, {1, 1}})), InputError);
}

TEST_CASE("mahalanobis and euclidean depth decrease along rays") {
  const DataSet x = gaussian(40, 2, 4);
  const Eigen::RowVector2d center = x.colwise().mean();
  const Eigen::RowVector2d v(0.6, -1.3);
  double prev = 2.0;
  for (double t = 0.0; t <= 10.0; t += 0.25) {
    const double d = mahalanobis_depth(center + t * v, x)(0);
    CHECK(d <= prev);
    prev = d;
  }
  const DataSet u = gaussian(40, 1, 4);
  const double mu = u.mean();
  prev = 2.0;
  for (double t = 0.0; t <= 10.0; t += 0.25) {
    const double d = euclidean_depth(col({mu - t}), u)(0);
    CHECK(d <= prev);
    prev = d;
  }
}

TEST_CASE("halfspace depth examples") {
  const DataSet s = col({1, 2, 3, 4, 5});
  const DepthSpec spec{DepthKind::halfspace, 500, 0};
  CHECK(halfspace_depth(col({3}), s, spec)(0) == doctest::Approx(0.6));
  CHECK(halfspace_depth(col({0}), s, spec)(0) == 0.0);

  const DataSet tri = rows({{0, 0}, {3, 0}, {0, 3}});
  CHECK(halfspace_depth(rows({{1, 1}}), tri, spec)(0) == doctest::Approx(1.0 / 3.0));
  CHECK(halfspace_depth_bruteforce_2d(Eigen::Vector2d(1, 1), tri) == doctest::Approx(1.0 / 3.0));
  CHECK(halfspace_depth_bruteforce_2d(Eigen::Vector2d(100, -50), tri) == 0.0);
  CHECK(halfspace_depth_bruteforce_2d(Eigen::Vector2d(2, 7), rows({{2, 7}})) == 1.0);
  CHECK(halfspace_depth(rows({{2, 7}}), rows({{2, 7}}), spec)(0) == 1.0);
}

TEST_CASE("exact 2-d halfspace depth equals the brute-force oracle") {
  RngStream s = derive_stream(2024, 0);
  for (int inst = 0; inst < 200; ++inst) {
    const Index m = 1 + static_cast<Index>(s.uniform() * 20.0);
    DataSet sample(m, 2);
    // a third of the instances sit on a small integer lattice to force ties and collinearity
    const bool lattice = inst % 3 == 0;
    for (Index i = 0; i < m; ++i) {
      for (Index j = 0; j < 2; ++j) {
        sample(i, j) = lattice ? std::floor(s.uniform() * 4.0) : s.uniform() * 2.0 - 1.0;
      }
    }
    DataSet queries(6, 2);
    for (Index i = 0; i < 6; ++i) {
      for (Index j = 0; j < 2; ++j) {
        queries(i, j) = lattice ? std::floor(s.uniform() * 5.0) - 0.5 * (i % 2)
                                : s.uniform() * 2.4 - 1.2;
      }
    }
    queries.row(5) = sample.row(0);
    for (Index i = 0; i < queries.rows(); ++i) {
      const Index fast = halfspace_count_2d(queries(i, 0), queries(i, 1), sample);
      const Index slow = halfspace_count_bruteforce_2d(queries(i, 0), queries(i, 1), sample);
      REQUIRE(fast == slow);
    }
  }
}

TEST_CASE("approximate halfspace depth") {
  const DataSet x = gaussian(60, 3, 8);
  const DataSet q = gaussian(15, 3, 8, 1);
  const DepthVector<> coarse = halfspace_depth(q, x, {DepthKind::halfspace, 100, 3});
  const DepthVector<> fine = halfspace_depth(q, x, {DepthKind::halfspace, 1000, 3});
  // the first 100 directions of the finer set are the coarse set
  CHECK((fine.array() <= coarse.array()).all());
  CHECK((fine.array() >= 0.0).all());
  CHECK((fine.array() <= 1.0).all());

  // d = 2 ignores the direction count
  const DataSet x2 = gaussian(40, 2, 9);
  const DataSet q2 = gaussian(10, 2, 9, 1);
  CHECK(compute_depth(q2, x2, {DepthKind::halfspace, 7, 1}) ==
        compute_depth(q2, x2, {DepthKind::halfspace, 5000, 99}));
}

TEST_CASE("sample directions are unit vectors and prefix-stable") {
  const Matrix<double> a = sample_directions(4, 50, 12);
  const Matrix<double> b = sample_directions(4, 80, 12);
  CHECK((a.rowwise().norm().array() - 1.0).abs().maxCoeff() <= 1e-14);
  CHECK(a == b.topRows(50));
}

TEST_CASE("projection depth") {
  const DataSet s = col({1, 2, 3, 4, 5});
  const DepthSpec spec{DepthKind::projection, 500, 0};
  CHECK(projection_depth(col({3}), s, spec)(0) == 1.0);
  CHECK(projection_depth(col({5}), s, spec)(0) == doctest::Approx(1.0 / 3.0));

  const DataSet u = gaussian(25, 1, 3);
  const DataSet q = gaussian(10, 1, 3, 1);
  const double a = 2.5, b = -7.0;
  const DataSet ua = (u.array() * a + b).matrix();
  const DataSet qa = (q.array() * a + b).matrix();
  CHECK((projection_depth(q, u, spec) - projection_depth(qa, ua, spec)).cwiseAbs().maxCoeff() <= 1e-12);

  CHECK_THROWS_AS(projection_depth(col({1}), col({2, 2, 2, 5}), spec), NumericError);
}

TEST_CASE("spatial depth") {
  CHECK(spatial_depth(col({0}), col({-1, 1}))(0) == 1.0);
  CHECK(spatial_depth(col({2}), col({-1, 1}))(0) == 0.0);
  CHECK(spatial_depth(col({1}), col({-1, 1}))(0) == 0.5);  // coincident point contributes zero

  const DataSet x = gaussian(30, 2, 6);
  const DataSet q = gaussian(12, 2, 6, 1);
  const Eigen::Matrix2d r = rotation(0.83) * 3.0;
  const Eigen::RowVector2d t(4, -1);
  const DataSet xs = (x * r.transpose()).rowwise() + t;
  const DataSet qs = (q * r.transpose()).rowwise() + t;
  CHECK((spatial_depth(q, x) - spatial_depth(qs, xs)).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("compute_depth dispatch and determinism") {
  const DataSet u = gaussian(20, 1, 1);
  const DataSet q = gaussian(5, 1, 1, 1);
  CHECK(compute_depth(q, u, {DepthKind::euclidean, 500, 0}) == euclidean_depth(q, u));
  const DataSet x = gaussian(30, 3, 2);
  const DataSet y = gaussian(10, 3, 2, 1);
  for (DepthKind k : {DepthKind::mahalanobis, DepthKind::halfspace, DepthKind::projection,
                      DepthKind::spatial}) {
    const DepthSpec spec{k, 200, 5};
    CHECK(compute_depth(y, x, spec) == compute_depth(y, x, spec));
  }
}

TEST_CASE("depth values lie in [0, 1] on fuzzed inputs") {
  RngStream s = derive_stream(77, 0);
  for (int inst = 0; inst < 100; ++inst) {
    const Index d = 1 + inst % 3;
    const Index m = d + 2 + static_cast<Index>(s.uniform() * 30.0);
    const double scale = std::pow(10.0, s.uniform() * 6.0 - 3.0);
    const DataSet x = gaussian(m, d, 77, 100 + inst) * scale;
    const DataSet q = gaussian(10, d, 77, 1000 + inst) * scale * 2.0;
    std::vector<DepthKind> kinds{DepthKind::mahalanobis, DepthKind::halfspace, DepthKind::projection,
                                 DepthKind::spatial};
    if (d == 1) kinds.push_back(DepthKind::euclidean);
    for (DepthKind k : kinds) {
      const DepthVector<> v = compute_depth(q, x, {k, 100, static_cast<std::uint64_t>(inst)});
      REQUIRE((v.array() >= 0.0).all());
      REQUIRE((v.array() <= 1.0).all());
    }
  }
}

TEST_CASE("ordering flips are bounded by the sup depth difference") {
  // |I(D(x;H1) <= D(y;H1)) - I(D(x;H2) <= D(y;H2))| <= I(|D(x;H1) - D(y;H1)| <= 2 sup_z |D(z;H1) - D(z;H2)|)
  const std::pair<DepthKind, Index> cases[] = {{DepthKind::euclidean, 1},  {DepthKind::mahalanobis, 2},
                                               {DepthKind::halfspace, 2},  {DepthKind::halfspace, 3},
                                               {DepthKind::projection, 2}, {DepthKind::spatial, 2}};
  for (const auto& [kind, d] : cases) {
    CAPTURE(to_string(kind));
    CAPTURE(d);
    int violations = 0;
    for (int inst = 0; inst < 1000; ++inst) {
      const std::uint64_t seed = 5000 + static_cast<std::uint64_t>(inst);
      const DataSet h1 = gaussian(15, d, seed, 0);
      const DataSet h2 = gaussian(15, d, seed, 1);
      const DataSet xy = gaussian(2, d, seed, 2);
      DataSet grid(h1.rows() + h2.rows() + 2, d);
      grid << h1, h2, xy;
      const DepthSpec spec{kind, 50, seed};
      const DepthVector<> d1 = compute_depth(grid, h1, spec);
      const DepthVector<> d2 = compute_depth(grid, h2, spec);
      const double sup = (d1 - d2).cwiseAbs().maxCoeff();
      const Index ix = grid.rows() - 2, iy = grid.rows() - 1;
      const int i1 = d1(ix) <= d1(iy) ? 1 : 0;
      const int i2 = d2(ix) <= d2(iy) ? 1 : 0;
      const int bound = std::abs(d1(ix) - d1(iy)) <= 2.0 * sup ? 1 : 0;
      if (std::abs(i1 - i2) > bound) ++violations;
    }
    CHECK(violations == 0);
  }
}
