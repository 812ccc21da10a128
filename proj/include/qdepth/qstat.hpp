#pragma once

#include "qdepth/depth.hpp"
#include "qdepth/types.hpp"

namespace qdepth {

/// Quality indices of the two samples, each relative to its own empirical
/// distribution: q_fg = Q(F_m, G_n) and q_gf = Q(G_n, F_m).
struct QPair {
  double q_fg = 0.5;
  double q_gf = 0.5;
  Index m = 1;
  Index n = 1;
};

struct VariantStats {
  double m_stat = 0.0;  // max of the squared normalized statistics
  double m_star = 0.0;  // normalized 1/2 - min(q_fg, q_gf); may be negative
};

struct PValues {
  double p_q_fg = 1.0;
  double p_q_gf = 1.0;
  double p_m = 1.0;
  double p_m_star = 1.0;
};

struct TestReport {
  QPair qpair;
  double z_fg = 0.0;
  double z_gf = 0.0;
  double m_stat = 0.0;
  double m_star = 0.0;
  PValues p;
  DepthSpec depth_spec;
};

/// Fraction of pairs (i, j) with depths_x[i] <= depths_y[j]. Both vectors must
/// hold depths relative to the same reference sample. Runs in O((m + n) log m)
/// and counts pairs exactly as the double loop would.
double q_statistic(const Eigen::Ref<const Eigen::VectorXd>& depths_x,
                   const Eigen::Ref<const Eigen::VectorXd>& depths_y);

/// Computes both quality indices. Approximate depths relative to `x` use
/// `spec.seed`, those relative to `y` use `spec.seed + 1`.
QPair q_pair(const DataSet& x, const DataSet& y, const DepthSpec& spec);

/// (q - 1/2) / sqrt((1/m + 1/n) / 12), asymptotically standard normal under
/// the null.
double normalize(double q, Index m, Index n);

VariantStats variant_stats(const QPair& pair);

/// Two-sided normal p-values for the two Q statistics and for M*, upper-tail
/// chi-square(1) for M. The M* value is clamped into [0, 1].
PValues p_values(double z_fg, double z_gf, double m_stat, double m_star);

TestReport run_test(const DataSet& x, const DataSet& y, const DepthSpec& spec);

}  // namespace qdepth
