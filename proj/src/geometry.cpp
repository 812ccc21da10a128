#include "qdepth/geometry.hpp"

#include "qdepth/numerics.hpp"
#include "qdepth/parallel.hpp"

#include <cmath>

namespace qdepth {

namespace {

constexpr Index kChunk = 4096;
constexpr double kMembershipTol = 1e-9;

struct Box {
  Eigen::VectorXd lo;
  Eigen::VectorXd hi;
  double volume() const { return (hi - lo).prod(); }
};

Box bounding_box(const DataSet& points) {
  return {points.colwise().minCoeff().transpose(), points.colwise().maxCoeff().transpose()};
}

// Hit counts of each point set over one shared stream of uniform box samples.
// Sample chunk c comes from stream c of `seed`.
std::vector<Index> count_hits(const std::vector<DataSet>& sets, const Box& box, Index mc_samples,
                              std::uint64_t seed, unsigned threads) {
  const Index d = box.lo.size();
  const Index chunks = (mc_samples + kChunk - 1) / kChunk;
  std::vector<std::vector<Index>> per_chunk(static_cast<std::size_t>(chunks),
                                            std::vector<Index>(sets.size(), 0));
  const Eigen::VectorXd extent = box.hi - box.lo;
  parallel_for(static_cast<std::size_t>(chunks), threads, [&](std::size_t c) {
    RngStream stream = derive_stream(seed, c);
    const Index begin = static_cast<Index>(c) * kChunk;
    const Index end = std::min(mc_samples, begin + kChunk);
    Eigen::VectorXd x(d);
    for (Index s = begin; s < end; ++s) {
      for (Index j = 0; j < d; ++j) x(j) = box.lo(j) + stream.uniform() * extent(j);
      for (std::size_t k = 0; k < sets.size(); ++k) {
        if (sets[k].rows() < d + 1) continue;
        if (distance_to_hull(x, sets[k], {kMembershipTol, 10000}) <= kMembershipTol) {
          ++per_chunk[c][k];
        }
      }
    }
  });
  std::vector<Index> hits(sets.size(), 0);
  for (const auto& chunk : per_chunk) {
    for (std::size_t k = 0; k < sets.size(); ++k) hits[k] += chunk[k];
  }
  return hits;
}

double exact_volume(const DataSet& points) {
  if (points.cols() == 1) return points.col(0).maxCoeff() - points.col(0).minCoeff();
  return polygon_area(convex_hull_2d(points));
}

}  // namespace

double hull_volume(const DataSet& points, Index mc_samples, std::uint64_t seed, unsigned threads) {
  check_dataset(points, "points");
  const Index d = points.cols();
  if (d <= 2) return exact_volume(points);
  if (mc_samples < 1) throw InputError("hull_volume: mc_samples must be >= 1");
  if (points.rows() < d + 1) return 0.0;
  const Box box = bounding_box(points);
  const double box_volume = box.volume();
  if (!(box_volume > 0.0)) return 0.0;
  const auto hits = count_hits({points}, box, mc_samples, seed, threads);
  return box_volume * static_cast<double>(hits[0]) / static_cast<double>(mc_samples);
}

ScaleCurve scale_curve(const DataSet& sample, const DepthSpec& spec,
                       const std::vector<double>& fractions, Index mc_samples, std::uint64_t seed,
                       unsigned threads) {
  check_dataset(sample, "sample");
  if (fractions.empty()) throw InputError("scale_curve: no fractions given");
  for (std::size_t i = 0; i < fractions.size(); ++i) {
    if (!(fractions[i] > 0.0 && fractions[i] <= 1.0)) {
      throw InputError("scale_curve: fractions must lie in (0, 1]");
    }
    if (i > 0 && !(fractions[i] > fractions[i - 1])) {
      throw InputError("scale_curve: fractions must be strictly increasing");
    }
  }

  const Index m = sample.rows();
  const Index d = sample.cols();
  const Eigen::VectorXd depth = compute_depth(sample, sample, spec);
  std::vector<Index> order(static_cast<std::size_t>(m));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return depth(a) > depth(b); });

  std::vector<DataSet> sets;
  for (double p : fractions) {
    const double raw = std::ceil(p * static_cast<double>(m) - 1e-9);
    const Index k = std::clamp(static_cast<Index>(raw), Index{1}, m);
    DataSet subset(k, d);
    for (Index i = 0; i < k; ++i) subset.row(i) = sample.row(order[static_cast<std::size_t>(i)]);
    sets.push_back(std::move(subset));
  }

  ScaleCurve curve;
  if (d <= 2) {
    for (std::size_t i = 0; i < sets.size(); ++i) curve.push_back({fractions[i], exact_volume(sets[i])});
    return curve;
  }

  if (mc_samples < 1) throw InputError("scale_curve: mc_samples must be >= 1");
  const Box box = bounding_box(sample);
  const double box_volume = box.volume();
  std::vector<Index> hits(sets.size(), 0);
  if (box_volume > 0.0) hits = count_hits(sets, box, mc_samples, seed, threads);
  for (std::size_t i = 0; i < sets.size(); ++i) {
    const double v = box_volume > 0.0
                         ? box_volume * static_cast<double>(hits[i]) / static_cast<double>(mc_samples)
                         : 0.0;
    curve.push_back({fractions[i], v});
  }
  return curve;
}

}  // namespace qdepth
