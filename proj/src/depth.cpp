#include "qdepth/depth.hpp"

#include <array>

namespace qdepth {

namespace {

constexpr std::array<std::pair<DepthKind, std::string_view>, 5> kNames{{
    {DepthKind::euclidean, "euclidean"},
    {DepthKind::mahalanobis, "mahalanobis"},
    {DepthKind::halfspace, "halfspace"},
    {DepthKind::projection, "projection"},
    {DepthKind::spatial, "spatial"},
}};

}  // namespace

std::string_view to_string(DepthKind kind) {
  for (const auto& [k, name] : kNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

DepthKind parse_depth_kind(std::string_view name) {
  for (const auto& [k, n] : kNames) {
    if (n == name) return k;
  }
  throw InputError("unknown depth kind '" + std::string(name) +
                   "' (expected euclidean, mahalanobis, halfspace, projection or spatial)");
}

Matrix<double> sample_directions(Index dim, Index count, std::uint64_t seed) {
  if (dim < 1 || count < 1) throw InputError("sample_directions: dim and count must be >= 1");
  RngStream stream = derive_stream(seed, 0);
  const std::vector<double> normals =
      std_normal(stream, static_cast<std::size_t>(dim) * static_cast<std::size_t>(count));
  Matrix<double> dirs(count, dim);
  for (Index k = 0; k < count; ++k) {
    for (Index j = 0; j < dim; ++j) dirs(k, j) = normals[static_cast<std::size_t>(k * dim + j)];
    const double norm = dirs.row(k).norm();
    if (!(norm > 0.0)) throw NumericError("sample_directions: zero direction vector");
    dirs.row(k) /= norm;
  }
  return dirs;
}

}  // namespace qdepth
