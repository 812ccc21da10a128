#pragma once

#include "qdepth/qstat.hpp"
#include "qdepth/types.hpp"

#include <Eigen/Cholesky>

namespace qdepth {

/// Gaussian population N(mean, covariance) with a validated Cholesky factor.
class PopulationModel {
 public:
  PopulationModel(Eigen::VectorXd mean, Eigen::MatrixXd covariance);

  /// N(0, I_dim).
  static PopulationModel standard(Index dim);

  Index dim() const { return mean_.size(); }
  const Eigen::VectorXd& mean() const { return mean_; }
  const Eigen::MatrixXd& covariance() const { return covariance_; }

  /// Maps rows x to L^-1 (x - mean), where covariance = L L'.
  Eigen::MatrixXd whiten(const DataSet& points) const;

 private:
  Eigen::VectorXd mean_;
  Eigen::MatrixXd covariance_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
};

/// Terms of Q(F_m, G_n) - 1/2 split two ways. Remainders are defined by
/// subtraction, so both identities hold up to one rounding.
struct DecompositionReport {
  double q_minus_half = 0.0;
  double main_fg_term = 0.0;         // (1/n) sum_j [F_D(D(Y_j; F)) - 1/2]
  double main_x_term = 0.0;          // (1/m) sum_i [1/2 - F_D(D(X_i; F))]
  double hoeffding_remainder = 0.0;  // q_minus_half - main_fg_term - main_x_term
  double gkn_main = 0.0;             // double sum with population depths, minus 1/2
  double gkn_remainder = 0.0;        // q_minus_half - gkn_main
};

/// Mahalanobis depth with the true parameters of `model`.
double population_mahalanobis_depth_at(const Eigen::Ref<const Eigen::VectorXd>& x,
                                       const PopulationModel& model);
Eigen::VectorXd population_mahalanobis_depth(const DataSet& points, const PopulationModel& model);

/// P(D(X; F) <= depth) for X ~ N(mu, Sigma) in `dim` dimensions under
/// Mahalanobis depth: the squared distance is chi-square(dim), so this is the
/// chi-square upper tail at (1 - depth) / depth.
double depth_cdf_gaussian(double depth, int dim);

/// Main terms and remainders of Q(F_m, G_n) - 1/2 where Q uses sample
/// Mahalanobis depths relative to `x`, and the main terms use the population
/// depths of `model`.
DecompositionReport decompose(const DataSet& x, const DataSet& y, const PopulationModel& model);

struct SumProductDeviation {
  double sum_dev = 0.0;   // q_fg + q_gf - 1
  double prod_dev = 0.0;  // (q_fg - 1/2)(q_gf - 1/2)
};

SumProductDeviation sum_product_variants(const QPair& pair);

}  // namespace qdepth
