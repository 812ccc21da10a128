#pragma once

#include "qdepth/numerics.hpp"
#include "qdepth/types.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace qdepth {

enum class DepthKind { euclidean, mahalanobis, halfspace, projection, spatial };

std::string_view to_string(DepthKind kind);
/// Parses "euclidean", "mahalanobis", "halfspace", "projection" or "spatial".
DepthKind parse_depth_kind(std::string_view name);

struct DepthSpec {
  DepthKind kind = DepthKind::mahalanobis;
  /// Direction count for the sampled halfspace (d >= 3) and projection (d >= 2) depths.
  int directions = 500;
  std::uint64_t seed = 0;
};

/// `count` unit directions in R^dim, one per row: normalized Gaussian vectors
/// drawn from stream 0 of `seed`. The first k rows do not depend on `count`.
Matrix<double> sample_directions(Index dim, Index count, std::uint64_t seed);

namespace detail {

template <typename Scalar>
Scalar median_inplace(std::vector<Scalar>& v) {
  const std::size_t n = v.size();
  const std::size_t mid = n / 2;
  std::nth_element(v.begin(), v.begin() + mid, v.end());
  const Scalar upper = v[mid];
  if (n % 2 == 1) return upper;
  const Scalar lower = *std::max_element(v.begin(), v.begin() + mid);
  return (lower + upper) / Scalar(2);
}

// a*b - c*d with Kahan's fma correction; the sign of the result is exact.
template <typename Scalar>
Scalar diff_of_products(Scalar a, Scalar b, Scalar c, Scalar d) {
  const Scalar w = d * c;
  const Scalar e = std::fma(-d, c, w);
  const Scalar f = std::fma(a, b, -w);
  return f + e;
}

template <typename Scalar>
struct Offset2 {
  Scalar x;
  Scalar y;
};

template <typename Scalar>
int orient(const Offset2<Scalar>& a, const Offset2<Scalar>& b) {
  const Scalar c = diff_of_products(a.x, b.y, a.y, b.x);
  return (c > 0) - (c < 0);
}

template <typename Scalar>
int dot_sign(const Offset2<Scalar>& a, const Offset2<Scalar>& b) {
  const Scalar c = diff_of_products(a.x, b.x, -a.y, b.y);
  return (c > 0) - (c < 0);
}

// Splits sample offsets from the query into coincident points and nonzero offsets.
template <typename Scalar, typename Derived>
Index collect_offsets(Scalar qx, Scalar qy, const Eigen::MatrixBase<Derived>& sample,
                      std::vector<Offset2<Scalar>>& offsets) {
  Index coincident = 0;
  offsets.clear();
  offsets.reserve(static_cast<std::size_t>(sample.rows()));
  for (Index i = 0; i < sample.rows(); ++i) {
    const Offset2<Scalar> v{sample(i, 0) - qx, sample(i, 1) - qy};
    if (v.x == 0 && v.y == 0) {
      ++coincident;
    } else {
      offsets.push_back(v);
    }
  }
  return coincident;
}

struct Cholesky {
  Eigen::VectorXd mean;
  Eigen::LLT<Eigen::MatrixXd> llt;
};

// Sample mean and Cholesky factor of the (m - 1)-normalized covariance. A
// failed factorization is retried once with lambda * I added, where
// lambda = 1e-10 * trace / d.
template <typename Derived>
Cholesky sample_cholesky(const Eigen::MatrixBase<Derived>& sample) {
  const Eigen::MatrixXd s = sample.template cast<double>();
  const Index m = s.rows();
  const Index d = s.cols();
  Cholesky out;
  out.mean = s.colwise().mean().transpose();
  const Eigen::MatrixXd centered = s.rowwise() - out.mean.transpose();
  const Eigen::MatrixXd cov = (centered.transpose() * centered) / static_cast<double>(m - 1);
  out.llt.compute(cov);
  if (out.llt.info() == Eigen::Success) return out;
  const double lambda = 1e-10 * cov.trace() / static_cast<double>(d);
  out.llt.compute(cov + lambda * Eigen::MatrixXd::Identity(d, d));
  if (out.llt.info() != Eigen::Success || !(lambda > 0.0)) {
    throw NumericError("mahalanobis depth: sample covariance is singular");
  }
  return out;
}

}  // namespace detail

/// 1 / (1 + (x - mean)^2) for univariate data.
template <typename DerivedQ, typename DerivedS>
DepthVector<typename DerivedQ::Scalar> euclidean_depth(const Eigen::MatrixBase<DerivedQ>& queries,
                                                       const Eigen::MatrixBase<DerivedS>& sample) {
  using Scalar = typename DerivedQ::Scalar;
  check_dataset(queries, "queries");
  check_dataset(sample, "sample");
  if (queries.cols() != 1 || sample.cols() != 1) {
    throw InputError("euclidean depth requires univariate data (d = 1), got d = " +
                     std::to_string(sample.cols()));
  }
  const Scalar mean = sample.col(0).mean();
  return (Scalar(1) + (queries.col(0).array() - mean).square()).inverse().matrix();
}

/// 1 / (1 + (x - mean)' S^-1 (x - mean)) with the sample mean and sample
/// covariance S of `sample`.
template <typename DerivedQ, typename DerivedS>
DepthVector<typename DerivedQ::Scalar> mahalanobis_depth(
    const Eigen::MatrixBase<DerivedQ>& queries, const Eigen::MatrixBase<DerivedS>& sample) {
  using Scalar = typename DerivedQ::Scalar;
  check_dataset(queries, "queries");
  check_dataset(sample, "sample");
  check_same_dim(queries, sample);
  if (sample.rows() < sample.cols() + 1) {
    throw InputError("mahalanobis depth needs at least d + 1 sample points");
  }
  const detail::Cholesky chol = detail::sample_cholesky(sample);
  const Eigen::MatrixXd diff =
      (queries.template cast<double>().rowwise() - chol.mean.transpose()).transpose();
  const Eigen::MatrixXd whitened = chol.llt.matrixL().solve(diff);
  const Eigen::ArrayXd qf = whitened.colwise().squaredNorm().transpose().array();
  return (1.0 / (1.0 + qf)).template cast<Scalar>().matrix();
}

/// Smallest count of sample points in a closed half-plane containing `query`,
/// computed exactly by an angular sweep in O(m log m).
///
/// Sample offsets from the query are sorted by angle. For every offset
/// direction t, the half-open half-circle (t, t + pi] is counted with a
/// two-pointer scan; its complement gives the opposite candidate. Points equal
/// to the query lie in every half-plane.
template <typename Scalar, typename Derived>
Index halfspace_count_2d(Scalar qx, Scalar qy, const Eigen::MatrixBase<Derived>& sample) {
  using detail::Offset2;
  std::vector<Offset2<Scalar>> v;
  const Index coincident = detail::collect_offsets(qx, qy, sample, v);
  const Index total = static_cast<Index>(v.size());
  if (total == 0) return coincident;

  const auto upper = [](const Offset2<Scalar>& a) { return a.y > 0 || (a.y == 0 && a.x > 0); };
  std::sort(v.begin(), v.end(), [&](const Offset2<Scalar>& a, const Offset2<Scalar>& b) {
    const bool ua = upper(a);
    const bool ub = upper(b);
    if (ua != ub) return ua;
    return detail::orient(a, b) > 0;
  });

  // Merge offsets pointing in the same direction.
  std::vector<Offset2<Scalar>> dir;
  std::vector<Index> mult;
  for (const auto& p : v) {
    if (!dir.empty() && detail::orient(dir.back(), p) == 0 && detail::dot_sign(dir.back(), p) > 0) {
      ++mult.back();
    } else {
      dir.push_back(p);
      mult.push_back(1);
    }
  }
  const Index groups = static_cast<Index>(dir.size());
  if (groups > 1 && detail::orient(dir.back(), dir.front()) == 0 &&
      detail::dot_sign(dir.back(), dir.front()) > 0) {
    // Cannot happen with the half-plane ordering, kept as an invariant check.
    throw NumericError("halfspace sweep: inconsistent angular order");
  }

  const auto in_half_circle = [&](Index from, Index to) {
    const int o = detail::orient(dir[from], dir[to]);
    return o > 0 || (o == 0 && detail::dot_sign(dir[from], dir[to]) < 0);
  };

  Index best = total;
  Index end = 0;
  Index window = 0;
  for (Index g = 0; g < groups; ++g) {
    if (end < g + 1) {
      end = g + 1;
      window = 0;
    }
    while (end < g + groups && in_half_circle(g, end % groups)) {
      window += mult[end % groups];
      ++end;
    }
    best = std::min({best, window, total - window});
    if (end > g + 1) window -= mult[(g + 1) % groups];
  }
  return coincident + best;
}

/// O(m^2) oracle for halfspace_count_2d: evaluates the closed half-plane count
/// for the directions just either side of every normal to a query-to-point
/// offset, plus the normals themselves.
template <typename Scalar, typename Derived>
Index halfspace_count_bruteforce_2d(Scalar qx, Scalar qy, const Eigen::MatrixBase<Derived>& sample) {
  using detail::Offset2;
  if (sample.rows() > 500) {
    throw InputError("halfspace brute force: sample larger than 500 points");
  }
  std::vector<Offset2<Scalar>> v;
  const Index coincident = detail::collect_offsets(qx, qy, sample, v);
  if (v.empty()) return coincident;

  Index best = static_cast<Index>(v.size());
  for (const auto& a : v) {
    for (int normal_sign : {1, -1}) {
      // normal u = normal_sign * rot90(a); u . p = normal_sign * cross(a, p),
      // rot90(u) . p = -normal_sign * dot(a, p).
      for (int tilt : {1, 0, -1}) {
        Index count = 0;
        for (const auto& p : v) {
          const int along = normal_sign * detail::orient(a, p);
          const int across = -normal_sign * detail::dot_sign(a, p);
          if (along > 0 || (along == 0 && (tilt == 0 || tilt * across > 0))) ++count;
        }
        best = std::min(best, count);
      }
    }
  }
  return coincident + best;
}

template <typename DerivedP, typename DerivedS>
double halfspace_depth_bruteforce_2d(const Eigen::MatrixBase<DerivedP>& query,
                                     const Eigen::MatrixBase<DerivedS>& sample) {
  check_dataset(sample, "sample");
  if (sample.cols() != 2 || query.size() != 2) {
    throw InputError("halfspace brute force requires d = 2");
  }
  const Index count = halfspace_count_bruteforce_2d(query(0), query(1), sample);
  return static_cast<double>(count) / static_cast<double>(sample.rows());
}

/// Tukey depth: exact for d = 1 and d = 2, minimum over `spec.directions`
/// sampled directions for d >= 3.
template <typename DerivedQ, typename DerivedS>
DepthVector<typename DerivedQ::Scalar> halfspace_depth(const Eigen::MatrixBase<DerivedQ>& queries,
                                                       const Eigen::MatrixBase<DerivedS>& sample,
                                                       const DepthSpec& spec) {
  using Scalar = typename DerivedQ::Scalar;
  check_dataset(queries, "queries");
  check_dataset(sample, "sample");
  check_same_dim(queries, sample);
  const Index m = sample.rows();
  const Index d = sample.cols();
  const auto fraction = [m](Index count) { return static_cast<Scalar>(count) / static_cast<Scalar>(m); };
  DepthVector<Scalar> out(queries.rows());

  if (d == 1) {
    std::vector<Scalar> sorted(sample.col(0).begin(), sample.col(0).end());
    std::sort(sorted.begin(), sorted.end());
    for (Index i = 0; i < queries.rows(); ++i) {
      const Scalar x = queries(i, 0);
      const auto le = std::upper_bound(sorted.begin(), sorted.end(), x) - sorted.begin();
      const auto ge = sorted.end() - std::lower_bound(sorted.begin(), sorted.end(), x);
      out(i) = fraction(std::min(le, ge));
    }
    return out;
  }

  if (d == 2) {
    for (Index i = 0; i < queries.rows(); ++i) {
      out(i) = fraction(halfspace_count_2d(queries(i, 0), queries(i, 1), sample));
    }
    return out;
  }

  if (spec.directions < 1) throw InputError("halfspace depth: directions must be >= 1");
  const Matrix<Scalar> dirs = sample_directions(d, spec.directions, spec.seed).cast<Scalar>();
  const Matrix<Scalar> proj_sample = sample * dirs.transpose();
  const Matrix<Scalar> proj_query = queries * dirs.transpose();
  std::vector<Index> best(static_cast<std::size_t>(queries.rows()), m);
  std::vector<Scalar> column(static_cast<std::size_t>(m));
  for (Index k = 0; k < dirs.rows(); ++k) {
    for (Index j = 0; j < m; ++j) column[static_cast<std::size_t>(j)] = proj_sample(j, k);
    std::sort(column.begin(), column.end());
    for (Index i = 0; i < queries.rows(); ++i) {
      const Scalar x = proj_query(i, k);
      const Index le = std::upper_bound(column.begin(), column.end(), x) - column.begin();
      const Index ge = column.end() - std::lower_bound(column.begin(), column.end(), x);
      auto& b = best[static_cast<std::size_t>(i)];
      b = std::min({b, le, ge});
    }
  }
  for (Index i = 0; i < queries.rows(); ++i) {
    out(i) = fraction(best[static_cast<std::size_t>(i)]);
  }
  return out;
}

/// 1 / (1 + O(x)) with O the largest |u'x - med(u'X)| / MAD(u'X) over the
/// single direction (d = 1) or `spec.directions` sampled directions.
template <typename DerivedQ, typename DerivedS>
DepthVector<typename DerivedQ::Scalar> projection_depth(const Eigen::MatrixBase<DerivedQ>& queries,
                                                        const Eigen::MatrixBase<DerivedS>& sample,
                                                        const DepthSpec& spec) {
  using Scalar = typename DerivedQ::Scalar;
  check_dataset(queries, "queries");
  check_dataset(sample, "sample");
  check_same_dim(queries, sample);
  const Index m = sample.rows();
  const Index d = sample.cols();

  Matrix<Scalar> dirs;
  if (d == 1) {
    dirs = Matrix<Scalar>::Ones(1, 1);
  } else {
    if (spec.directions < 1) throw InputError("projection depth: directions must be >= 1");
    dirs = sample_directions(d, spec.directions, spec.seed).cast<Scalar>();
  }
  const Matrix<Scalar> proj_sample = sample * dirs.transpose();
  const Matrix<Scalar> proj_query = queries * dirs.transpose();

  Vector<Scalar> outlyingness = Vector<Scalar>::Zero(queries.rows());
  std::vector<Scalar> column(static_cast<std::size_t>(m));
  for (Index k = 0; k < dirs.rows(); ++k) {
    for (Index j = 0; j < m; ++j) column[static_cast<std::size_t>(j)] = proj_sample(j, k);
    const Scalar med = detail::median_inplace(column);
    for (auto& c : column) c = std::abs(c - med);
    const Scalar mad = detail::median_inplace(column);
    if (!(mad > 0)) {
      throw NumericError("projection depth: zero MAD along direction " + std::to_string(k));
    }
    outlyingness = outlyingness.cwiseMax(((proj_query.col(k).array() - med).abs() / mad).matrix());
  }
  return (Scalar(1) + outlyingness.array()).inverse().matrix();
}

/// 1 - || mean of unit vectors (x - X_i) / |x - X_i| ||, where sample points
/// equal to x contribute the zero vector but still count in the mean.
template <typename DerivedQ, typename DerivedS>
DepthVector<typename DerivedQ::Scalar> spatial_depth(const Eigen::MatrixBase<DerivedQ>& queries,
                                                     const Eigen::MatrixBase<DerivedS>& sample) {
  using Scalar = typename DerivedQ::Scalar;
  check_dataset(queries, "queries");
  check_dataset(sample, "sample");
  check_same_dim(queries, sample);
  const Index m = sample.rows();
  DepthVector<Scalar> out(queries.rows());
  RowVector<Scalar> acc(sample.cols());
  for (Index i = 0; i < queries.rows(); ++i) {
    acc.setZero();
    for (Index j = 0; j < m; ++j) {
      const RowVector<Scalar> diff = queries.row(i) - sample.row(j);
      const Scalar norm = diff.norm();
      if (norm > 0) acc += diff / norm;
    }
    const Scalar depth = Scalar(1) - acc.norm() / static_cast<Scalar>(m);
    out(i) = std::clamp(depth, Scalar(0), Scalar(1));
  }
  return out;
}

/// Dispatches on `spec.kind`; deterministic for a fixed `spec.seed`.
template <typename DerivedQ, typename DerivedS>
DepthVector<typename DerivedQ::Scalar> compute_depth(const Eigen::MatrixBase<DerivedQ>& queries,
                                                     const Eigen::MatrixBase<DerivedS>& sample,
                                                     const DepthSpec& spec) {
  if (spec.directions < 1) throw InputError("depth: directions must be >= 1");
  switch (spec.kind) {
    case DepthKind::euclidean:
      return euclidean_depth(queries, sample);
    case DepthKind::mahalanobis:
      return mahalanobis_depth(queries, sample);
    case DepthKind::halfspace:
      return halfspace_depth(queries, sample, spec);
    case DepthKind::projection:
      return projection_depth(queries, sample, spec);
    case DepthKind::spatial:
      return spatial_depth(queries, sample);
  }
  throw InputError("depth: unknown depth kind");
}

}  // namespace qdepth
