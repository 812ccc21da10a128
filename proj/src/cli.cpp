#include "qdepth/cli.hpp"

#include "qdepth/cluster.hpp"
#include "qdepth/csv.hpp"
#include "qdepth/decomposition.hpp"
#include "qdepth/depth.hpp"
#include "qdepth/geometry.hpp"
#include "qdepth/qstat.hpp"
#include "qdepth/ratestudy.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

namespace qdepth {

namespace {

using Json = nlohmann::ordered_json;

Json num(double v) {
  if (!std::isfinite(v)) return nullptr;
  return std::stod(format_sig9(v));
}

struct DepthOptions {
  std::string kind = "mahalanobis";
  int directions = 500;
  std::uint64_t seed = 0;

  DepthSpec spec() const { return {parse_depth_kind(kind), directions, seed}; }
};

void add_depth_options(CLI::App* cmd, DepthOptions& o) {
  cmd->add_option("--depth", o.kind, "euclidean | mahalanobis | halfspace | projection | spatial")
      ->capture_default_str();
  cmd->add_option("--directions", o.directions, "Sampled directions for approximate depths")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd->add_option("--seed", o.seed, "Random seed")->capture_default_str();
}

Json report_json(const TestReport& r) {
  Json j;
  j["q_fg"] = num(r.qpair.q_fg);
  j["q_gf"] = num(r.qpair.q_gf);
  j["z_fg"] = num(r.z_fg);
  j["z_gf"] = num(r.z_gf);
  j["m_stat"] = num(r.m_stat);
  j["m_star"] = num(r.m_star);
  j["p_q_fg"] = num(r.p.p_q_fg);
  j["p_q_gf"] = num(r.p.p_q_gf);
  j["p_m"] = num(r.p.p_m);
  j["p_m_star"] = num(r.p.p_m_star);
  j["depth"] = std::string(to_string(r.depth_spec.kind));
  j["m"] = r.qpair.m;
  j["n"] = r.qpair.n;
  return j;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError(path + ": cannot open for writing");
  f << content;
  if (!f) throw InputError(path + ": write failed");
}

std::vector<Index> to_sizes(const std::vector<double>& raw) {
  std::vector<Index> out;
  for (double v : raw) {
    if (!(v >= 1.0) || v != std::floor(v)) throw InputError("sizes must be positive integers");
    out.push_back(static_cast<Index>(v));
  }
  return out;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Depth-based two-sample homogeneity tests", "qdepth"};
  app.require_subcommand(1);
  bool verbose = false;
  app.add_flag("--verbose,-v", verbose, "Print a human-readable summary to the error stream");

  // test
  auto* test_cmd = app.add_subcommand("test", "Two-sample test with Q, M and M* statistics");
  std::string x_path, y_path;
  bool header = false;
  DepthOptions test_depth;
  test_cmd->add_option("--x", x_path, "First sample (CSV)")->required();
  test_cmd->add_option("--y", y_path, "Second sample (CSV)")->required();
  test_cmd->add_flag("--header", header, "Input CSVs have a header row");
  add_depth_options(test_cmd, test_depth);

  // depth
  auto* depth_cmd = app.add_subcommand("depth", "Depth of query points relative to a sample");
  std::string data_path, points_path;
  DepthOptions depth_depth;
  depth_cmd->add_option("--data", data_path, "Reference sample (CSV)")->required();
  depth_cmd->add_option("--points", points_path, "Query points (CSV)")->required();
  depth_cmd->add_flag("--header", header, "Input CSVs have a header row");
  add_depth_options(depth_cmd, depth_depth);

  // rate-study
  auto* rate_cmd = app.add_subcommand("rate-study", "Monte Carlo remainder-rate study under the null");
  std::string quantity = "q_dev";
  Index dim = 2;
  std::string sizes_text = "64,128,256,512,1024";
  Index reps = 500;
  unsigned threads = 1;
  std::string csv_path;
  bool chi_square = false;
  DepthOptions rate_depth;
  rate_cmd->add_option("--quantity", quantity,
                       "sum_dev | q_dev | hoeffding_remainder | gkn_remainder | sup_depth_error | "
                       "null_calibration")
      ->capture_default_str();
  rate_cmd->add_option("--dim", dim, "Dimension")->capture_default_str();
  rate_cmd->add_option("--sizes", sizes_text, "Comma-separated sample sizes (m = n)")->capture_default_str();
  rate_cmd->add_option("--reps", reps, "Repetitions per size")->capture_default_str();
  rate_cmd->add_option("--threads", threads, "Worker threads (0 = all cores)")->capture_default_str();
  rate_cmd->add_option("--csv", csv_path, "Write size,mean_abs table to this file");
  rate_cmd->add_flag("--chi-square", chi_square,
                     "Compare M and (M*)^2 with chi-square(1) at the largest size instead");
  add_depth_options(rate_cmd, rate_depth);

  // scale-curve
  auto* scale_cmd = app.add_subcommand("scale-curve", "Hull volume of the deepest p-fraction");
  std::string fractions_text = "0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,1";
  Index mc_samples = 200000;
  DepthOptions scale_depth;
  scale_cmd->add_option("--data", data_path, "Sample (CSV)")->required();
  scale_cmd->add_flag("--header", header, "Input CSV has a header row");
  scale_cmd->add_option("--fractions", fractions_text, "Comma-separated fractions in (0, 1]")
      ->capture_default_str();
  scale_cmd->add_option("--mc-samples", mc_samples, "Monte Carlo samples for d >= 3")->capture_default_str();
  scale_cmd->add_option("--threads", threads, "Worker threads (0 = all cores)")->capture_default_str();
  add_depth_options(scale_cmd, scale_depth);

  // fcm
  auto* fcm_cmd = app.add_subcommand("fcm", "Fuzzy c-means clustering, optionally followed by a test");
  FcmOptions fcm_opts;
  std::string memberships_path, labels_path, test_pair_text;
  DepthOptions fcm_depth;
  fcm_cmd->add_option("--data", data_path, "Data (CSV)")->required();
  fcm_cmd->add_flag("--header", header, "Input CSV has a header row");
  fcm_cmd->add_option("--clusters", fcm_opts.clusters, "Number of clusters")->capture_default_str();
  fcm_cmd->add_option("--fuzzifier", fcm_opts.fuzzifier, "Fuzzifier (> 1)")->capture_default_str();
  fcm_cmd->add_option("--tol", fcm_opts.tol, "Relative objective tolerance")->capture_default_str();
  fcm_cmd->add_option("--max-iter", fcm_opts.max_iter, "Iteration limit")->capture_default_str();
  fcm_cmd->add_option("--memberships", memberships_path, "Write memberships CSV to this file");
  fcm_cmd->add_option("--labels", labels_path, "Write hard labels CSV to this file");
  fcm_cmd->add_option("--test", test_pair_text, "Test cluster a against cluster b, e.g. 0,1");
  add_depth_options(fcm_cmd, fcm_depth);

  // decompose
  auto* dec_cmd = app.add_subcommand("decompose", "Main terms and remainders of Q - 1/2 (Gaussian model)");
  std::string mean_text, cov_path;
  dec_cmd->add_option("--x", x_path, "First sample (CSV)")->required();
  dec_cmd->add_option("--y", y_path, "Second sample (CSV)")->required();
  dec_cmd->add_flag("--header", header, "Input CSVs have a header row");
  dec_cmd->add_option("--mean", mean_text, "Population mean, comma-separated (default 0)");
  dec_cmd->add_option("--cov", cov_path, "Population covariance CSV without header (default I)");

  try {
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitInput;
  }

  std::ostringstream result;
  std::ostringstream summary;
  try {
    if (*test_cmd) {
      const DataSet x = parse_csv(x_path, header);
      const DataSet y = parse_csv(y_path, header);
      const DepthSpec spec = test_depth.spec();
      const TestReport r = run_test(x, y, spec);
      result << report_json(r).dump(2) << "\n";
      summary << "test: depth=" << to_string(spec.kind) << " seed=" << spec.seed
              << " directions=" << spec.directions << " m=" << r.qpair.m << " n=" << r.qpair.n
              << "\n  p-values: Q=" << format_sig9(r.p.p_q_fg) << " Q*=" << format_sig9(r.p.p_q_gf)
              << " M=" << format_sig9(r.p.p_m) << " M*=" << format_sig9(r.p.p_m_star) << "\n";
    } else if (*depth_cmd) {
      const DataSet data = parse_csv(data_path, header);
      const DataSet points = parse_csv(points_path, header);
      const DepthSpec spec = depth_depth.spec();
      const Eigen::VectorXd d = compute_depth(points, data, spec);
      for (double v : d) result << format_sig9(v) << "\n";
      summary << "depth: " << d.size() << " points, depth=" << to_string(spec.kind)
              << " seed=" << spec.seed << "\n";
    } else if (*rate_cmd) {
      StudyConfig config;
      config.dim = dim;
      config.sizes = to_sizes(parse_number_list(sizes_text));
      config.reps = reps;
      config.seed = rate_depth.seed;
      config.depth = rate_depth.spec();
      config.quantity = parse_study_quantity(quantity);
      config.threads = threads;
      Json j;
      j["quantity"] = chi_square ? "chi_square_attraction" : std::string(to_string(config.quantity));
      j["dim"] = config.dim;
      j["reps"] = config.reps;
      j["seed"] = config.seed;
      j["depth"] = std::string(to_string(config.depth.kind));
      j["directions"] = config.depth.directions;
      std::string csv;
      if (chi_square) {
        const AttractionCheck c = chi_square_attraction_check(config);
        j["size"] = config.sizes.back();
        j["ks_m"] = num(c.ks_m);
        j["ks_mstar_sq"] = num(c.ks_mstar_sq);
        j["disagreement"] = num(c.disagreement);
      } else {
        const StudyResult r = run_study(config);
        Json rows = Json::array();
        csv = "size,mean_abs\n";
        for (const auto& [size, mean] : r.per_size_mean_abs) {
          rows.push_back({{"size", size}, {"mean_abs", num(mean)}});
          csv += std::to_string(size) + "," + format_sig9(mean) + "\n";
        }
        j["per_size_mean_abs"] = rows;
        j["slope"] = r.slope ? num(*r.slope) : Json(nullptr);
        if (r.null_calibration) {
          j["null_calibration"] = {{"rejection_rate", num(r.null_calibration->rejection_rate)},
                                   {"ks_distance", num(r.null_calibration->ks_distance)}};
        }
      }
      if (!csv_path.empty() && !csv.empty()) write_file(csv_path, csv);
      result << j.dump(2) << "\n";
    } else if (*scale_cmd) {
      const DataSet data = parse_csv(data_path, header);
      std::vector<double> fractions = parse_number_list(fractions_text);
      const DepthSpec spec = scale_depth.spec();
      const ScaleCurve curve = scale_curve(data, spec, fractions, mc_samples, spec.seed, threads);
      result << "p,volume\n";
      for (const auto& pt : curve) result << format_sig9(pt.fraction) << "," << format_sig9(pt.volume) << "\n";
      summary << "scale-curve: depth=" << to_string(spec.kind) << " seed=" << spec.seed
              << " mc-samples=" << mc_samples << "\n";
    } else if (*fcm_cmd) {
      const DataSet data = parse_csv(data_path, header);
      fcm_opts.seed = fcm_depth.seed;
      const FcmResult r = fcm(data, fcm_opts);
      Json j;
      j["clusters"] = fcm_opts.clusters;
      j["fuzzifier"] = num(fcm_opts.fuzzifier);
      j["seed"] = fcm_opts.seed;
      j["iterations"] = r.objective_trace.size();
      j["objective"] = num(r.objective_trace.back());
      Json sizes = Json::array();
      for (Index k = 0; k < fcm_opts.clusters; ++k) {
        sizes.push_back(std::count(r.hard_labels.begin(), r.hard_labels.end(), k));
      }
      j["cluster_sizes"] = sizes;
      Json centers = Json::array();
      for (Index k = 0; k < r.centers.rows(); ++k) {
        Json row = Json::array();
        for (Index c = 0; c < r.centers.cols(); ++c) row.push_back(num(r.centers(k, c)));
        centers.push_back(row);
      }
      j["centers"] = centers;
      if (!test_pair_text.empty()) {
        const std::vector<double> pair = parse_number_list(test_pair_text);
        if (pair.size() != 2) throw InputError("--test expects two cluster indices, e.g. 0,1");
        const auto a = static_cast<Index>(pair[0]);
        const auto b = static_cast<Index>(pair[1]);
        if (a < 0 || b < 0 || a >= fcm_opts.clusters || b >= fcm_opts.clusters) {
          throw InputError("--test: cluster index out of range");
        }
        const DataSet xa = cluster_rows(data, r.hard_labels, a);
        const DataSet xb = cluster_rows(data, r.hard_labels, b);
        if (xa.rows() == 0 || xb.rows() == 0) throw InputError("--test: requested cluster is empty");
        j["test"] = report_json(run_test(xa, xb, fcm_depth.spec()));
      }
      std::string memberships, labels;
      if (!memberships_path.empty()) {
        for (Index k = 0; k < r.memberships.cols(); ++k) {
          memberships += (k ? "," : "") + ("cluster_" + std::to_string(k));
        }
        memberships += "\n";
        for (Index i = 0; i < r.memberships.rows(); ++i) {
          for (Index k = 0; k < r.memberships.cols(); ++k) {
            memberships += (k ? "," : "") + format_sig9(r.memberships(i, k));
          }
          memberships += "\n";
        }
      }
      if (!labels_path.empty()) {
        labels = "label\n";
        for (Index l : r.hard_labels) labels += std::to_string(l) + "\n";
      }
      if (!memberships_path.empty()) write_file(memberships_path, memberships);
      if (!labels_path.empty()) write_file(labels_path, labels);
      result << j.dump(2) << "\n";
    } else if (*dec_cmd) {
      const DataSet x = parse_csv(x_path, header);
      const DataSet y = parse_csv(y_path, header);
      const Index d = x.cols();
      Eigen::VectorXd mean = Eigen::VectorXd::Zero(d);
      if (!mean_text.empty()) {
        const std::vector<double> mv = parse_number_list(mean_text);
        if (static_cast<Index>(mv.size()) != d) throw InputError("--mean has the wrong length");
        mean = Eigen::Map<const Eigen::VectorXd>(mv.data(), d);
      }
      Eigen::MatrixXd cov = Eigen::MatrixXd::Identity(d, d);
      if (!cov_path.empty()) cov = parse_csv(cov_path, false);
      const PopulationModel model(mean, cov);
      const DecompositionReport r = decompose(x, y, model);
      Json j;
      j["q_minus_half"] = num(r.q_minus_half);
      j["main_fg_term"] = num(r.main_fg_term);
      j["main_x_term"] = num(r.main_x_term);
      j["hoeffding_remainder"] = num(r.hoeffding_remainder);
      j["gkn_main"] = num(r.gkn_main);
      j["gkn_remainder"] = num(r.gkn_remainder);
      j["m"] = x.rows();
      j["n"] = y.rows();
      result << j.dump(2) << "\n";
    }
  } catch (const InputError& e) {
    err << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const NumericError& e) {
    err << "numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumeric;
  }

  out << result.str();
  if (verbose) err << summary.str();
  return kExitOk;
}

}  // namespace qdepth
