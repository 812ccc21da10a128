#pragma once

#include "qdepth/depth.hpp"
#include "qdepth/types.hpp"

#include <cstdint>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

namespace qdepth {

enum class StudyQuantity {
  sum_dev,              // |q_fg + q_gf - 1|
  q_dev,                // |q_fg - 1/2|
  hoeffding_remainder,  // |Q - 1/2 - main terms|
  gkn_remainder,        // |Q - 1/2 - double sum with population depths|
  sup_depth_error,      // max over a fixed grid of |D(z; F_m) - D(z; F)|
  null_calibration,     // |z_fg|, plus rejection rate and KS distance
};

std::string_view to_string(StudyQuantity q);
StudyQuantity parse_study_quantity(std::string_view name);
/// True for the quantities whose per-size means are summarized by a slope.
bool is_slope_quantity(StudyQuantity q);

struct StudyConfig {
  Index dim = 2;
  std::vector<Index> sizes{64, 128, 256, 512, 1024};
  Index reps = 500;
  std::uint64_t seed = 0;
  DepthSpec depth{};
  StudyQuantity quantity = StudyQuantity::q_dev;
  /// Worker threads; 0 picks the hardware concurrency. Never affects results.
  unsigned threads = 1;
};

struct NullCalibration {
  double rejection_rate = 0.0;  // fraction of |z_fg| > 1.96 at the largest size
  double ks_distance = 0.0;     // z_fg values against N(0, 1) at the largest size
};

struct StudyResult {
  std::vector<std::pair<Index, double>> per_size_mean_abs;
  std::optional<double> slope;
  std::optional<NullCalibration> null_calibration;
};

/// Throws InputError for invalid configurations.
void validate(const StudyConfig& config);

/// Simulates X, Y ~ N(0, I_dim) with m = n = size. Repetition r at size index
/// k draws X then Y from stream k * reps + r of `config.seed`.
StudyResult run_study(const StudyConfig& config);

/// Raw per-rep values of the configured quantity (signed) at one size.
std::vector<double> simulate_quantity(const StudyConfig& config, std::size_t size_index);

struct AttractionCheck {
  double ks_m = 0.0;             // M against chi-square(1)
  double ks_mstar_sq = 0.0;      // (M*)^2 against chi-square(1)
  double disagreement = 0.0;     // fraction of reps with M != (M*)^2
};

/// Distribution of M and (M*)^2 over reps at the largest configured size.
/// With reps = 1 the KS distances are those of a one-point sample.
AttractionCheck chi_square_attraction_check(const StudyConfig& config);

}  // namespace qdepth
