#include "qdepth/qstat.hpp"

#include "qdepth/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

namespace qdepth {

namespace {

double null_scale(Index m, Index n) {
  if (m < 1 || n < 1) throw InputError("sample sizes must be positive");
  return std::sqrt((1.0 / static_cast<double>(m) + 1.0 / static_cast<double>(n)) / 12.0);
}

}  // namespace

double q_statistic(const Eigen::Ref<const Eigen::VectorXd>& depths_x,
                   const Eigen::Ref<const Eigen::VectorXd>& depths_y) {
  if (depths_x.size() == 0 || depths_y.size() == 0) {
    throw InputError("q_statistic: empty depth vector");
  }
  std::vector<double> sorted(depths_x.begin(), depths_x.end());
  std::sort(sorted.begin(), sorted.end());
  std::uint64_t count = 0;
  for (double y : depths_y) {
    count += static_cast<std::uint64_t>(std::upper_bound(sorted.begin(), sorted.end(), y) -
                                        sorted.begin());
  }
  const double pairs = static_cast<double>(depths_x.size()) * static_cast<double>(depths_y.size());
  return static_cast<double>(count) / pairs;
}

QPair q_pair(const DataSet& x, const DataSet& y, const DepthSpec& spec) {
  check_dataset(x, "x");
  check_dataset(y, "y");
  check_same_dim(x, y);

  DepthSpec spec_y = spec;
  spec_y.seed = spec.seed + 1;

  const Eigen::VectorXd x_wrt_x = compute_depth(x, x, spec);
  const Eigen::VectorXd y_wrt_x = compute_depth(y, x, spec);
  const Eigen::VectorXd y_wrt_y = compute_depth(y, y, spec_y);
  const Eigen::VectorXd x_wrt_y = compute_depth(x, y, spec_y);

  QPair out;
  out.q_fg = q_statistic(x_wrt_x, y_wrt_x);
  out.q_gf = q_statistic(y_wrt_y, x_wrt_y);
  out.m = x.rows();
  out.n = y.rows();
  return out;
}

double normalize(double q, Index m, Index n) { return (q - 0.5) / null_scale(m, n); }

VariantStats variant_stats(const QPair& pair) {
  const double scale = null_scale(pair.m, pair.n);
  const double dev_fg = pair.q_fg - 0.5;
  const double dev_gf = pair.q_gf - 0.5;
  VariantStats out;
  out.m_stat = std::max(dev_fg * dev_fg, dev_gf * dev_gf) / (scale * scale);
  out.m_star = (0.5 - std::min(pair.q_fg, pair.q_gf)) / scale;
  return out;
}

PValues p_values(double z_fg, double z_gf, double m_stat, double m_star) {
  PValues p;
  p.p_q_fg = std::min(1.0, 2.0 * normal_sf(std::abs(z_fg)));
  p.p_q_gf = std::min(1.0, 2.0 * normal_sf(std::abs(z_gf)));
  p.p_m = chisq_sf(std::max(0.0, m_stat), 1);
  p.p_m_star = std::clamp(2.0 * normal_sf(m_star), 0.0, 1.0);
  return p;
}

TestReport run_test(const DataSet& x, const DataSet& y, const DepthSpec& spec) {
  TestReport r;
  r.depth_spec = spec;
  r.qpair = q_pair(x, y, spec);
  r.z_fg = normalize(r.qpair.q_fg, r.qpair.m, r.qpair.n);
  r.z_gf = normalize(r.qpair.q_gf, r.qpair.m, r.qpair.n);
  const VariantStats v = variant_stats(r.qpair);
  r.m_stat = v.m_stat;
  r.m_star = v.m_star;
  r.p = p_values(r.z_fg, r.z_gf, r.m_stat, r.m_star);
  return r;
}

}  // namespace qdepth
