#pragma once

#include "qdepth/qstat.hpp"
#include "qdepth/types.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace qdepth {

struct FcmOptions {
  Index clusters = 3;
  double fuzzifier = 2.0;
  double tol = 1e-6;
  int max_iter = 300;
  std::uint64_t seed = 0;
};

struct FcmResult {
  Matrix<double> centers;      // c x d
  Matrix<double> memberships;  // m x c, rows sum to one
  std::vector<double> objective_trace;
  std::vector<Index> hard_labels;
};

/// Fuzzy c-means with Euclidean distance. Memberships start i.i.d. uniform
/// (row-normalized) from stream 0 of `opts.seed`; each iteration updates the
/// centers as membership^fuzzifier weighted means, then the memberships, and
/// records the objective sum u^f |x - v|^2. Stops once the relative objective
/// change is at most `opts.tol` or after `opts.max_iter` iterations.
FcmResult fcm(const DataSet& data, const FcmOptions& opts);

/// Rows of `data` whose hard label equals `label`.
DataSet cluster_rows(const DataSet& data, const std::vector<Index>& labels, Index label);

/// Clusters `data`, then tests cluster `pair.first` against `pair.second`.
/// The clustering seed is `spec.seed`.
TestReport cluster_then_test(const DataSet& data, Index clusters, double fuzzifier,
                             const DepthSpec& spec, std::pair<Index, Index> pair);

}  // namespace qdepth
