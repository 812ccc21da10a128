#include "qdepth/ratestudy.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>

using namespace qdepth;

namespace {

StudyConfig config_for(StudyQuantity q) {
  StudyConfig c;
  c.quantity = q;
  c.threads = 0;
  return c;
}

int inversions(const StudyResult& r) {
  int count = 0;
  for (std::size_t i = 1; i < r.per_size_mean_abs.size(); ++i) {
    if (!(r.per_size_mean_abs[i].second < r.per_size_mean_abs[i - 1].second)) ++count;
  }
  return count;
}

}  // namespace

TEST_CASE("quantity names round-trip") {
  for (StudyQuantity q : {StudyQuantity::sum_dev, StudyQuantity::q_dev, StudyQuantity::hoeffding_remainder,
                          StudyQuantity::gkn_remainder, StudyQuantity::sup_depth_error,
                          StudyQuantity::null_calibration}) {
    CHECK(parse_study_quantity(to_string(q)) == q);
  }
  CHECK_THROWS_AS(parse_study_quantity("nope"), InputError);
}

TEST_CASE("configuration validation") {
  StudyConfig c;
  c.sizes = {64, 32};
  CHECK_THROWS_AS(validate(c), InputError);
  c.sizes = {64, 128};
  CHECK_THROWS_AS(validate(c), InputError);  // slope needs three sizes
  c.sizes = {64, 128, 256};
  c.reps = 0;
  CHECK_THROWS_AS(validate(c), InputError);
  c.reps = 10;
  c.quantity = StudyQuantity::hoeffding_remainder;
  c.depth.kind = DepthKind::spatial;
  CHECK_THROWS_AS(validate(c), InputError);
  c.depth.kind = DepthKind::mahalanobis;
  CHECK_NOTHROW(validate(c));
}

TEST_CASE("studies are deterministic across runs and thread counts") {
  StudyConfig c;
  c.sizes = {16, 32, 64};
  c.reps = 40;
  c.seed = 17;
  for (StudyQuantity q : {StudyQuantity::q_dev, StudyQuantity::hoeffding_remainder,
                          StudyQuantity::sup_depth_error}) {
    c.quantity = q;
    c.threads = 1;
    const StudyResult a = run_study(c);
    c.threads = 4;
    const StudyResult b = run_study(c);
    c.threads = 1;
    const StudyResult again = run_study(c);
    CHECK(a.per_size_mean_abs == b.per_size_mean_abs);
    CHECK(a.per_size_mean_abs == again.per_size_mean_abs);
    CHECK(*a.slope == *b.slope);
  }
  c.quantity = StudyQuantity::q_dev;
  c.depth = {DepthKind::halfspace, 50, 17};
  c.dim = 3;
  c.threads = 1;
  const StudyResult a = run_study(c);
  c.threads = 3;
  CHECK(run_study(c).per_size_mean_abs == a.per_size_mean_abs);
}

TEST_CASE("q_dev rate") {
  const StudyResult r = run_study(config_for(StudyQuantity::q_dev));
  REQUIRE(r.slope);
  CHECK(*r.slope >= -0.65);
  CHECK(*r.slope <= -0.40);
  CHECK(inversions(r) <= 1);
}

TEST_CASE("sum_dev rate") {
  const StudyResult r = run_study(config_for(StudyQuantity::sum_dev));
  REQUIRE(r.slope);
  CHECK(*r.slope >= -1.25);
  CHECK(*r.slope <= -0.85);
  CHECK(inversions(r) <= 1);
}

TEST_CASE("hoeffding remainder rate") {
  const StudyResult r = run_study(config_for(StudyQuantity::hoeffding_remainder));
  REQUIRE(r.slope);
  CHECK(*r.slope <= -0.85);
  CHECK(inversions(r) <= 1);
}

TEST_CASE("sup depth error rate") {
  const StudyResult r = run_study(config_for(StudyQuantity::sup_depth_error));
  REQUIRE(r.slope);
  CHECK(*r.slope >= -0.65);
  CHECK(*r.slope <= -0.35);
  CHECK(inversions(r) <= 1);
}

TEST_CASE("null calibration rejection rate") {
  StudyConfig c = config_for(StudyQuantity::null_calibration);
  c.sizes = {100};
  c.reps = 2000;
  const StudyResult r = run_study(c);
  REQUIRE(r.null_calibration);
  CHECK_FALSE(r.slope);
  CHECK(r.null_calibration->rejection_rate >= 0.035);
  CHECK(r.null_calibration->rejection_rate <= 0.065);
}

TEST_CASE("chi-square attraction bookkeeping") {
  StudyConfig c;
  c.sizes = {200};
  c.reps = 400;
  c.threads = 0;
  const AttractionCheck a = chi_square_attraction_check(c);
  CHECK(a.disagreement < 0.5);
  CHECK(a.ks_m >= 0.0);
  CHECK(a.ks_m <= 1.0);

  c.reps = 1;
  const AttractionCheck one = chi_square_attraction_check(c);
  CHECK(one.ks_m > 0.0);
  CHECK(one.ks_m <= 1.0);
  CHECK(one.ks_mstar_sq <= 1.0);

  c.reps = 50;
  c.depth.kind = DepthKind::spatial;
  CHECK_THROWS_AS(chi_square_attraction_check(c), InputError);
  c.depth.kind = DepthKind::euclidean;
  c.dim = 1;
  CHECK_NOTHROW(chi_square_attraction_check(c));
}
