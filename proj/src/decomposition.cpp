#include "qdepth/decomposition.hpp"

#include "qdepth/depth.hpp"
#include "qdepth/numerics.hpp"

#include <string>

namespace qdepth {

PopulationModel::PopulationModel(Eigen::VectorXd mean, Eigen::MatrixXd covariance)
    : mean_(std::move(mean)), covariance_(std::move(covariance)) {
  const Index d = mean_.size();
  if (d < 1) throw InputError("population model: empty mean");
  if (covariance_.rows() != d || covariance_.cols() != d) {
    throw InputError("population model: covariance must be " + std::to_string(d) + "x" +
                     std::to_string(d));
  }
  if (!mean_.allFinite() || !covariance_.allFinite()) {
    throw InputError("population model: non-finite parameters");
  }
  if (!covariance_.isApprox(covariance_.transpose(), 1e-12)) {
    throw InputError("population model: covariance is not symmetric");
  }
  llt_.compute(covariance_);
  if (llt_.info() != Eigen::Success) {
    throw InputError("population model: covariance is not positive definite");
  }
}

PopulationModel PopulationModel::standard(Index dim) {
  return PopulationModel(Eigen::VectorXd::Zero(dim), Eigen::MatrixXd::Identity(dim, dim));
}

Eigen::MatrixXd PopulationModel::whiten(const DataSet& points) const {
  if (points.cols() != dim()) throw InputError("population model: dimension mismatch");
  const Eigen::MatrixXd centered = (points.rowwise() - mean_.transpose()).transpose();
  return llt_.matrixL().solve(centered).transpose();
}

double population_mahalanobis_depth_at(const Eigen::Ref<const Eigen::VectorXd>& x,
                                       const PopulationModel& model) {
  const DataSet row = x.transpose();
  return population_mahalanobis_depth(row, model)(0);
}

Eigen::VectorXd population_mahalanobis_depth(const DataSet& points, const PopulationModel& model) {
  const Eigen::MatrixXd z = model.whiten(points);
  return (1.0 + z.rowwise().squaredNorm().array()).inverse().matrix();
}

double depth_cdf_gaussian(double depth, int dim) {
  if (!(depth > 0.0 && depth <= 1.0)) {
    throw InputError("depth_cdf_gaussian: depth must lie in (0, 1]");
  }
  if (dim < 1) throw InputError("depth_cdf_gaussian: dimension must be positive");
  return chisq_sf((1.0 - depth) / depth, dim);
}

DecompositionReport decompose(const DataSet& x, const DataSet& y, const PopulationModel& model) {
  check_dataset(x, "x");
  check_dataset(y, "y");
  check_same_dim(x, y);
  if (x.cols() != model.dim()) throw InputError("decompose: model dimension mismatch");

  const int dim = static_cast<int>(model.dim());
  const double m = static_cast<double>(x.rows());
  const double n = static_cast<double>(y.rows());

  const Eigen::VectorXd sample_dx = mahalanobis_depth(x, x);
  const Eigen::VectorXd sample_dy = mahalanobis_depth(y, x);
  const double q = q_statistic(sample_dx, sample_dy);

  const Eigen::VectorXd pop_dx = population_mahalanobis_depth(x, model);
  const Eigen::VectorXd pop_dy = population_mahalanobis_depth(y, model);

  double fg = 0.0;
  for (double d : pop_dy) fg += depth_cdf_gaussian(d, dim) - 0.5;
  double fx = 0.0;
  for (double d : pop_dx) fx += 0.5 - depth_cdf_gaussian(d, dim);

  DecompositionReport r;
  r.q_minus_half = q - 0.5;
  r.main_fg_term = fg / n;
  r.main_x_term = fx / m;
  r.hoeffding_remainder = r.q_minus_half - r.main_fg_term - r.main_x_term;
  r.gkn_main = q_statistic(pop_dx, pop_dy) - 0.5;
  r.gkn_remainder = r.q_minus_half - r.gkn_main;
  return r;
}

SumProductDeviation sum_product_variants(const QPair& pair) {
  return {pair.q_fg + pair.q_gf - 1.0, (pair.q_fg - 0.5) * (pair.q_gf - 0.5)};
}

}  // namespace qdepth
