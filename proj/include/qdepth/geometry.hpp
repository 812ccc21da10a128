#pragma once

#include "qdepth/depth.hpp"
#include "qdepth/types.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <utility>
#include <vector>

namespace qdepth {

/// Convex hull of planar points by Andrew's monotone chain. Vertices come out
/// counterclockwise starting from the lexicographically smallest point, with
/// collinear boundary points dropped. Degenerate input yields one vertex (all
/// points equal) or two (all collinear).
template <typename Derived>
Matrix<typename Derived::Scalar> convex_hull_2d(const Eigen::MatrixBase<Derived>& points) {
  using Scalar = typename Derived::Scalar;
  using P = std::pair<Scalar, Scalar>;
  check_dataset(points, "points");
  if (points.cols() != 2) throw InputError("convex_hull_2d requires d = 2");

  std::vector<P> pts;
  pts.reserve(static_cast<std::size_t>(points.rows()));
  for (Index i = 0; i < points.rows(); ++i) pts.emplace_back(points(i, 0), points(i, 1));
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  const auto cross = [](const P& o, const P& a, const P& b) {
    return detail::diff_of_products(a.first - o.first, b.second - o.second, a.second - o.second,
                                    b.first - o.first);
  };

  std::vector<P> hull;
  if (pts.size() <= 2) {
    hull = pts;
  } else {
    hull.resize(2 * pts.size());
    std::size_t k = 0;
    for (const auto& p : pts) {
      while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
      hull[k++] = p;
    }
    const std::size_t lower = k + 1;
    for (auto it = pts.rbegin() + 1; it != pts.rend(); ++it) {
      while (k >= lower && cross(hull[k - 2], hull[k - 1], *it) <= 0) --k;
      hull[k++] = *it;
    }
    hull.resize(k - 1);
  }

  Matrix<Scalar> out(static_cast<Index>(hull.size()), 2);
  for (std::size_t i = 0; i < hull.size(); ++i) {
    out(static_cast<Index>(i), 0) = hull[i].first;
    out(static_cast<Index>(i), 1) = hull[i].second;
  }
  return out;
}

/// Shoelace area of a polygon whose vertices are listed in order.
template <typename Derived>
typename Derived::Scalar polygon_area(const Eigen::MatrixBase<Derived>& vertices) {
  using Scalar = typename Derived::Scalar;
  const Index k = vertices.rows();
  if (k < 3) return Scalar(0);
  Scalar twice = 0;
  for (Index i = 0; i < k; ++i) {
    const Index j = (i + 1) % k;
    twice += vertices(i, 0) * vertices(j, 1) - vertices(j, 0) * vertices(i, 1);
  }
  return std::abs(twice) / Scalar(2);
}

struct HullDistanceOptions {
  double tol = 1e-9;
  int max_iter = 10000;
};

/// Euclidean distance from `query` to the convex hull of the rows of `points`.
///
/// Gilbert's iteration on the translated point set: keep a hull point w, pick
/// the support point s minimizing w . p, and stop once the duality gap
/// |w|^2 - w . s falls below tol * |w| (or |w| <= tol). Instead of a plain
/// segment line search toward s, each step solves the min-norm problem over the
/// current support set (Wolfe's corral step), which is exact on faces and
/// terminates finitely.
template <typename DerivedQ, typename DerivedP>
typename DerivedP::Scalar distance_to_hull(const Eigen::MatrixBase<DerivedQ>& query,
                                           const Eigen::MatrixBase<DerivedP>& points,
                                           const HullDistanceOptions& opts = {}) {
  using Scalar = typename DerivedP::Scalar;
  check_dataset(points, "points");
  if (query.size() != points.cols()) throw InputError("distance_to_hull: dimension mismatch");

  const Index d = points.cols();
  const Matrix<Scalar> p = points.rowwise() - query.derived().reshaped().transpose().template cast<Scalar>();
  const Scalar tol = static_cast<Scalar>(opts.tol);
  const Scalar weight_eps = Scalar(1e-12);

  Index first = 0;
  p.rowwise().squaredNorm().minCoeff(&first);
  std::vector<Index> active{first};
  std::vector<Scalar> weight{Scalar(1)};
  Vector<Scalar> w = p.row(first).transpose();

  const auto combine = [&]() {
    Vector<Scalar> out = Vector<Scalar>::Zero(d);
    for (std::size_t k = 0; k < active.size(); ++k) out += weight[k] * p.row(active[k]).transpose();
    return out;
  };

  int iterations = 0;
  while (true) {
    const Scalar norm = w.norm();
    if (norm <= tol) return norm;

    Index support = 0;
    const Vector<Scalar> proj = p * w;
    const Scalar support_value = proj.minCoeff(&support);
    const Scalar gap = w.squaredNorm() - support_value;
    if (gap <= tol * norm) return norm;
    if (std::find(active.begin(), active.end(), support) != active.end()) return norm;

    active.push_back(support);
    weight.push_back(Scalar(0));

    // Corral step: move to the affine min-norm point of the active set while
    // it stays inside their convex hull, otherwise drop vertices.
    bool first_minor = true;
    while (true) {
      if (++iterations > opts.max_iter) {
        throw NumericError("distance_to_hull: no convergence within " +
                           std::to_string(opts.max_iter) + " iterations");
      }
      const Index k = static_cast<Index>(active.size());
      Matrix<Scalar> s(k, d);
      for (Index i = 0; i < k; ++i) s.row(i) = p.row(active[static_cast<std::size_t>(i)]);
      Matrix<Scalar> system = Matrix<Scalar>::Zero(k + 1, k + 1);
      system.topLeftCorner(k, k) = s * s.transpose();
      system.topRightCorner(k, 1).setOnes();
      system.bottomLeftCorner(1, k).setOnes();
      Vector<Scalar> rhs = Vector<Scalar>::Zero(k + 1);
      rhs(k) = Scalar(1);
      const Vector<Scalar> sol = system.completeOrthogonalDecomposition().solve(rhs);
      const Vector<Scalar> alpha = sol.head(k);

      if ((alpha.array() > weight_eps).all()) {
        for (Index i = 0; i < k; ++i) weight[static_cast<std::size_t>(i)] = alpha(i);
        break;
      }
      if (first_minor && alpha(k - 1) <= weight_eps) {
        // The new support point does not enter the corral: numerically optimal.
        active.pop_back();
        weight.pop_back();
        return combine().norm();
      }
      first_minor = false;

      Scalar theta = Scalar(1);
      for (Index i = 0; i < k; ++i) {
        const Scalar lam = weight[static_cast<std::size_t>(i)];
        if (alpha(i) <= weight_eps && lam - alpha(i) > 0) {
          theta = std::min(theta, lam / (lam - alpha(i)));
        }
      }
      for (Index i = 0; i < k; ++i) {
        auto& lam = weight[static_cast<std::size_t>(i)];
        lam = (Scalar(1) - theta) * lam + theta * alpha(i);
      }
      // Drop vertices whose weight reached zero (always at least the minimizer).
      const auto min_it = std::min_element(weight.begin(), weight.end());
      const std::size_t forced = static_cast<std::size_t>(min_it - weight.begin());
      std::vector<Index> kept_idx;
      std::vector<Scalar> kept_w;
      for (std::size_t i = 0; i < active.size(); ++i) {
        if (i == forced || weight[i] <= weight_eps) continue;
        kept_idx.push_back(active[i]);
        kept_w.push_back(weight[i]);
      }
      active = std::move(kept_idx);
      weight = std::move(kept_w);
      const Scalar total = std::accumulate(weight.begin(), weight.end(), Scalar(0));
      for (auto& lam : weight) lam /= total;
      if (active.size() == 1) {
        weight[0] = Scalar(1);
        break;
      }
    }
    w = combine();
  }
}

/// Hull volume of the rows of `points`: range for d = 1, exact polygon area
/// for d = 2, hit-or-miss Monte Carlo in the bounding box for d >= 3 with
/// membership decided by distance_to_hull <= 1e-9.
double hull_volume(const DataSet& points, Index mc_samples, std::uint64_t seed, unsigned threads = 1);

struct ScalePoint {
  double fraction = 0.0;
  double volume = 0.0;
};

using ScaleCurve = std::vector<ScalePoint>;

/// Volume of the hull of the ceil(p * m) deepest sample points for each p
/// (depth descending, ties by row index). For d >= 3 all fractions share one
/// set of Monte Carlo points drawn in the bounding box of the full sample, so
/// the curve is nondecreasing by nesting.
ScaleCurve scale_curve(const DataSet& sample, const DepthSpec& spec,
                       const std::vector<double>& fractions, Index mc_samples, std::uint64_t seed,
                       unsigned threads = 1);

}  // namespace qdepth
