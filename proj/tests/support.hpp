#pragma once

#include "qdepth/numerics.hpp"
#include "qdepth/types.hpp"

#include <string>

namespace qdepth::testing {

inline DataSet gaussian(Index m, Index d, std::uint64_t seed, std::uint64_t stream = 0) {
  RngStream s = derive_stream(seed, stream);
  const auto z = std_normal(s, static_cast<std::size_t>(m * d));
  DataSet out(m, d);
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < d; ++j) out(i, j) = z[static_cast<std::size_t>(i * d + j)];
  return out;
}

inline DataSet uniform_box(Index m, Index d, std::uint64_t seed, std::uint64_t stream = 0) {
  RngStream s = derive_stream(seed, stream);
  DataSet out(m, d);
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < d; ++j) out(i, j) = s.uniform();
  return out;
}

inline std::string source_path(const std::string& rel) { return std::string(QDEPTH_SOURCE_DIR) + "/" + rel; }

}  // namespace qdepth::testing
