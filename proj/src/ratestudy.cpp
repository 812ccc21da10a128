#include "qdepth/ratestudy.hpp"

#include "qdepth/decomposition.hpp"
#include "qdepth/numerics.hpp"
#include "qdepth/parallel.hpp"
#include "qdepth/qstat.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <string>

namespace qdepth {

namespace {

constexpr std::array<std::pair<StudyQuantity, std::string_view>, 6> kNames{{
    {StudyQuantity::sum_dev, "sum_dev"},
    {StudyQuantity::q_dev, "q_dev"},
    {StudyQuantity::hoeffding_remainder, "hoeffding_remainder"},
    {StudyQuantity::gkn_remainder, "gkn_remainder"},
    {StudyQuantity::sup_depth_error, "sup_depth_error"},
    {StudyQuantity::null_calibration, "null_calibration"},
}};

// Stream reserved for the evaluation grid of sup_depth_error.
constexpr std::uint64_t kGridStream = std::uint64_t{1} << 63;
constexpr Index kGridPoints = 100;

using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

DataSet draw_gaussian(RngStream& stream, Index rows, Index dim) {
  const std::vector<double> z =
      std_normal(stream, static_cast<std::size_t>(rows) * static_cast<std::size_t>(dim));
  return Eigen::Map<const RowMajor>(z.data(), rows, dim);
}

struct RepSample {
  DataSet x;
  DataSet y;
};

RepSample draw_rep(const StudyConfig& config, std::size_t size_index, Index rep) {
  const Index size = config.sizes[size_index];
  RngStream stream =
      derive_stream(config.seed, static_cast<std::uint64_t>(size_index) *
                                         static_cast<std::uint64_t>(config.reps) +
                                     static_cast<std::uint64_t>(rep));
  RepSample s;
  s.x = draw_gaussian(stream, size, config.dim);
  s.y = draw_gaussian(stream, size, config.dim);
  return s;
}

double evaluate(const StudyConfig& config, const RepSample& s, const DataSet& grid) {
  switch (config.quantity) {
    case StudyQuantity::q_dev: {
      const Eigen::VectorXd dx = compute_depth(s.x, s.x, config.depth);
      const Eigen::VectorXd dy = compute_depth(s.y, s.x, config.depth);
      return q_statistic(dx, dy) - 0.5;
    }
    case StudyQuantity::sum_dev:
      return sum_product_variants(q_pair(s.x, s.y, config.depth)).sum_dev;
    case StudyQuantity::hoeffding_remainder:
      return decompose(s.x, s.y, PopulationModel::standard(config.dim)).hoeffding_remainder;
    case StudyQuantity::gkn_remainder:
      return decompose(s.x, s.y, PopulationModel::standard(config.dim)).gkn_remainder;
    case StudyQuantity::sup_depth_error: {
      const Eigen::VectorXd sample = mahalanobis_depth(grid, s.x);
      const Eigen::VectorXd truth =
          population_mahalanobis_depth(grid, PopulationModel::standard(config.dim));
      return (sample - truth).cwiseAbs().maxCoeff();
    }
    case StudyQuantity::null_calibration: {
      const Eigen::VectorXd dx = compute_depth(s.x, s.x, config.depth);
      const Eigen::VectorXd dy = compute_depth(s.y, s.x, config.depth);
      return normalize(q_statistic(dx, dy), s.x.rows(), s.y.rows());
    }
  }
  throw InputError("rate study: unknown quantity");
}

}  // namespace

std::string_view to_string(StudyQuantity q) {
  for (const auto& [k, name] : kNames) {
    if (k == q) return name;
  }
  return "unknown";
}

StudyQuantity parse_study_quantity(std::string_view name) {
  for (const auto& [k, n] : kNames) {
    if (n == name) return k;
  }
  throw InputError("unknown study quantity '" + std::string(name) + "'");
}

bool is_slope_quantity(StudyQuantity q) { return q != StudyQuantity::null_calibration; }

void validate(const StudyConfig& config) {
  if (config.dim < 1) throw InputError("rate study: dim must be >= 1");
  if (config.reps < 1) throw InputError("rate study: reps must be >= 1");
  if (config.sizes.empty()) throw InputError("rate study: no sizes given");
  for (std::size_t i = 0; i < config.sizes.size(); ++i) {
    if (config.sizes[i] < 1) throw InputError("rate study: sizes must be positive");
    if (i > 0 && config.sizes[i] <= config.sizes[i - 1]) {
      throw InputError("rate study: sizes must be strictly increasing");
    }
  }
  if (is_slope_quantity(config.quantity) && config.sizes.size() < 3) {
    throw InputError("rate study: slope quantities need at least three sizes");
  }
  const bool analytic = config.quantity == StudyQuantity::hoeffding_remainder ||
                        config.quantity == StudyQuantity::gkn_remainder ||
                        config.quantity == StudyQuantity::sup_depth_error;
  if (analytic && config.depth.kind != DepthKind::mahalanobis) {
    throw InputError("rate study: " + std::string(to_string(config.quantity)) +
                     " requires mahalanobis depth");
  }
  if (config.depth.kind == DepthKind::euclidean && config.dim != 1) {
    throw InputError("rate study: euclidean depth requires dim = 1");
  }
  if (config.depth.kind == DepthKind::mahalanobis && config.sizes.front() < config.dim + 1) {
    throw InputError("rate study: mahalanobis depth needs size >= dim + 1");
  }
}

std::vector<double> simulate_quantity(const StudyConfig& config, std::size_t size_index) {
  validate(config);
  if (size_index >= config.sizes.size()) throw InputError("rate study: size index out of range");
  DataSet grid;
  if (config.quantity == StudyQuantity::sup_depth_error) {
    RngStream grid_stream = derive_stream(config.seed, kGridStream);
    grid = draw_gaussian(grid_stream, kGridPoints, config.dim);
  }
  std::vector<double> values(static_cast<std::size_t>(config.reps));
  parallel_for(values.size(), config.threads, [&](std::size_t rep) {
    const RepSample s = draw_rep(config, size_index, static_cast<Index>(rep));
    values[rep] = evaluate(config, s, grid);
  });
  return values;
}

StudyResult run_study(const StudyConfig& config) {
  validate(config);
  StudyResult result;
  std::vector<double> last;
  for (std::size_t k = 0; k < config.sizes.size(); ++k) {
    std::vector<double> values = simulate_quantity(config, k);
    double sum = 0.0;
    for (double v : values) sum += std::abs(v);
    result.per_size_mean_abs.emplace_back(config.sizes[k], sum / static_cast<double>(values.size()));
    last = std::move(values);
  }

  if (is_slope_quantity(config.quantity)) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& [size, mean] : result.per_size_mean_abs) {
      pts.emplace_back(static_cast<double>(size), mean);
    }
    result.slope = fit_loglog_slope(pts);
  } else {
    NullCalibration cal;
    Index rejected = 0;
    for (double z : last) rejected += std::abs(z) > 1.96 ? 1 : 0;
    cal.rejection_rate = static_cast<double>(rejected) / static_cast<double>(last.size());
    cal.ks_distance = ks_distance(last, [](double z) { return normal_cdf(z); });
    result.null_calibration = cal;
  }
  return result;
}

AttractionCheck chi_square_attraction_check(const StudyConfig& config) {
  StudyConfig c = config;
  c.quantity = StudyQuantity::null_calibration;
  validate(c);
  const bool exact = c.depth.kind == DepthKind::mahalanobis ||
                     (c.depth.kind == DepthKind::euclidean && c.dim == 1);
  if (!exact) throw InputError("chi-square check requires an exact depth (mahalanobis or euclidean)");

  const std::size_t k = c.sizes.size() - 1;
  std::vector<double> m_values(static_cast<std::size_t>(c.reps));
  std::vector<double> mstar_sq(static_cast<std::size_t>(c.reps));
  parallel_for(m_values.size(), c.threads, [&](std::size_t rep) {
    const RepSample s = draw_rep(c, k, static_cast<Index>(rep));
    const VariantStats v = variant_stats(q_pair(s.x, s.y, c.depth));
    m_values[rep] = v.m_stat;
    mstar_sq[rep] = v.m_star * v.m_star;
  });

  AttractionCheck out;
  const auto chi1 = [](double x) { return chisq_cdf(std::max(0.0, x), 1); };
  out.ks_m = ks_distance(m_values, chi1);
  out.ks_mstar_sq = ks_distance(mstar_sq, chi1);
  Index differ = 0;
  for (std::size_t i = 0; i < m_values.size(); ++i) {
    const double scale = std::max(1.0, std::abs(m_values[i]));
    if (std::abs(m_values[i] - mstar_sq[i]) > 1e-12 * scale) ++differ;
  }
  out.disagreement = static_cast<double>(differ) / static_cast<double>(m_values.size());
  return out;
}

}  // namespace qdepth
