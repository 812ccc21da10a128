#include "qdepth/cluster.hpp"

#include "qdepth/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qdepth {

namespace {

Matrix<double> squared_distances(const DataSet& data, const Matrix<double>& centers) {
  Matrix<double> d2(data.rows(), centers.rows());
  for (Index k = 0; k < centers.rows(); ++k) {
    d2.col(k) = (data.rowwise() - centers.row(k)).rowwise().squaredNorm();
  }
  return d2;
}

double objective(const Matrix<double>& u, const Matrix<double>& d2, double fuzzifier) {
  return (u.array().pow(fuzzifier) * d2.array()).sum();
}

Matrix<double> update_centers(const DataSet& data, const Matrix<double>& u, double fuzzifier) {
  const Matrix<double> weights = u.array().pow(fuzzifier).matrix();  // m x c
  Matrix<double> centers = weights.transpose() * data;
  const Eigen::VectorXd totals = weights.colwise().sum().transpose();
  for (Index k = 0; k < centers.rows(); ++k) {
    if (totals(k) > 0.0) centers.row(k) /= totals(k);
  }
  return centers;
}

Matrix<double> update_memberships(const Matrix<double>& d2, double fuzzifier) {
  const Index m = d2.rows();
  const Index c = d2.cols();
  const double exponent = 1.0 / (fuzzifier - 1.0);  // applied to squared distances
  Matrix<double> u(m, c);
  for (Index i = 0; i < m; ++i) {
    Index zero = -1;
    for (Index k = 0; k < c; ++k) {
      if (d2(i, k) == 0.0) {
        zero = k;
        break;
      }
    }
    if (zero >= 0) {
      u.row(i).setZero();
      u(i, zero) = 1.0;
      continue;
    }
    for (Index k = 0; k < c; ++k) {
      double s = 0.0;
      for (Index j = 0; j < c; ++j) s += std::pow(d2(i, k) / d2(i, j), exponent);
      u(i, k) = 1.0 / s;
    }
  }
  return u;
}

}  // namespace

FcmResult fcm(const DataSet& data, const FcmOptions& opts) {
  check_dataset(data, "data");
  const Index m = data.rows();
  const Index c = opts.clusters;
  if (c < 1) throw InputError("fcm: number of clusters must be >= 1");
  if (c > m) throw InputError("fcm: more clusters than points");
  if (!(opts.fuzzifier > 1.0)) throw InputError("fcm: fuzzifier must exceed 1");
  if (opts.max_iter < 1) throw InputError("fcm: max_iter must be >= 1");

  RngStream stream = derive_stream(opts.seed, 0);
  Matrix<double> u(m, c);
  for (Index i = 0; i < m; ++i) {
    for (Index k = 0; k < c; ++k) u(i, k) = stream.uniform() + 1e-12;
    u.row(i) /= u.row(i).sum();
  }

  FcmResult r;
  for (int it = 0; it < opts.max_iter; ++it) {
    r.centers = update_centers(data, u, opts.fuzzifier);
    const Matrix<double> d2 = squared_distances(data, r.centers);
    u = update_memberships(d2, opts.fuzzifier);
    const double j = objective(u, d2, opts.fuzzifier);
    const bool done = !r.objective_trace.empty() &&
                      std::abs(r.objective_trace.back() - j) <=
                          opts.tol * std::max(std::abs(r.objective_trace.back()), 1e-300);
    r.objective_trace.push_back(j);
    if (done || j == 0.0) break;
  }
  r.memberships = u;
  r.hard_labels.resize(static_cast<std::size_t>(m));
  for (Index i = 0; i < m; ++i) {
    Index best = 0;
    u.row(i).maxCoeff(&best);  // first maximum on ties
    r.hard_labels[static_cast<std::size_t>(i)] = best;
  }
  return r;
}

DataSet cluster_rows(const DataSet& data, const std::vector<Index>& labels, Index label) {
  Index count = 0;
  for (Index l : labels) count += l == label ? 1 : 0;
  DataSet out(count, data.cols());
  Index row = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == label) out.row(row++) = data.row(static_cast<Index>(i));
  }
  return out;
}

TestReport cluster_then_test(const DataSet& data, Index clusters, double fuzzifier,
                             const DepthSpec& spec, std::pair<Index, Index> pair) {
  if (pair.first < 0 || pair.first >= clusters || pair.second < 0 || pair.second >= clusters) {
    throw InputError("cluster_then_test: cluster index out of range");
  }
  FcmOptions opts;
  opts.clusters = clusters;
  opts.fuzzifier = fuzzifier;
  opts.seed = spec.seed;
  const FcmResult res = fcm(data, opts);
  const DataSet a = cluster_rows(data, res.hard_labels, pair.first);
  const DataSet b = cluster_rows(data, res.hard_labels, pair.second);
  if (a.rows() == 0 || b.rows() == 0) {
    throw InputError("cluster_then_test: cluster " +
                     std::to_string(a.rows() == 0 ? pair.first : pair.second) + " is empty");
  }
  return run_test(a, b, spec);
}

}  // namespace qdepth
