#include "cli.hpp"

#include <filesystem>
#include <limits>
#include <optional>
#include <ostream>
#include <string>

#include <CLI11.hpp>

#include "rankreg/calibration.hpp"
#include "rankreg/estimator.hpp"
#include "rankreg/experiment.hpp"
#include "rankreg/experiment_config.hpp"
#include "rankreg/io.hpp"

namespace rankreg::cli {
namespace {

/// A flag combination CLI11 cannot express on its own.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GenerateArgs {
  int d = 0;
  std::int64_t n = 0;
  std::int64_t m = 0;
  double lambda_min = 1.0;
  double pe = 0.0;
  std::uint64_t seed = 0;
  std::string out_prefix;
};

struct EstimateArgs {
  std::string samples;
  std::string comparisons;
  std::string truth;
  std::string out;
};

struct CalibrateArgs {
  std::optional<double> alpha;
  std::optional<double> pe;
  std::optional<double> sigma_s;
  std::string beta_file;
  std::string sigma_file;
  int points = QuadratureSpec{}.points;
  double half_width = QuadratureSpec{}.half_width;
};

struct ExperimentArgs {
  std::string config;
  std::string out_prefix;
  unsigned threads = 0;
  bool timing = false;
};

std::string join(const Vector& v) {
  std::string s;
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    if (k > 0) s += ',';
    s += format_double(v(k));
  }
  return s;
}

int cmd_generate(const GenerateArgs& a, std::ostream& out) {
  TrialConfig config{a.d, a.n, a.m, a.lambda_min, a.pe, 1, a.seed};
  config.validate(false);
  const TrialInstance inst = build_trial_instance(config, 0);

  write_text_file(a.out_prefix + ".samples.csv", samples_to_csv(inst.samples));
  write_text_file(a.out_prefix + ".comparisons.csv", comparisons_to_csv(inst.comparisons));
  const TruthRecord truth{inst.model.beta, inst.model.mu, inst.model.sigma.matrix(), inst.model.link, inst.c1};
  write_text_file(a.out_prefix + ".truth.csv", truth_to_csv(truth));
  out << "wrote " << a.out_prefix << ".{samples,comparisons,truth}.csv\n";
  return kSuccess;
}

int cmd_estimate(const EstimateArgs& a, std::ostream& out) {
  const SampleSet samples = read_samples_csv(a.samples);
  const ComparisonDataset comparisons = read_comparisons_csv(a.comparisons, samples.n);
  const CovarianceEstimate cov = estimate_covariance(samples);
  const Estimate est = estimate_beta(comparisons, samples, cov);
  if (!a.out.empty()) write_text_file(a.out, estimate_to_csv(est));
  out << "beta_hat=" << join(est.beta_hat) << '\n';

  if (!a.truth.empty()) {
    const TruthRecord truth = read_truth_csv(a.truth);
    if (truth.beta.size() != est.beta_hat.size()) {
      throw DomainError("truth file is " + std::to_string(truth.beta.size()) + "-dimensional but samples are " +
                        std::to_string(est.beta_hat.size()) + "-dimensional");
    }
    const Metrics metrics = compute_metrics(est.beta_hat, truth.beta, truth.c1);
    if (metrics.norm_error) out << "norm_error=" << format_double(*metrics.norm_error) << '\n';
    out << "angle=" << format_double(metrics.angle) << '\n';
  }
  return kSuccess;
}

Vector read_vector_file(const std::string& path) {
  const CsvTable table = read_csv(std::filesystem::path(path));
  if (table.rows.size() != 1) throw ParseError(table.source, 0, "expected one data row");
  Vector v(static_cast<Eigen::Index>(table.header.size()));
  for (Eigen::Index k = 0; k < v.size(); ++k) v(k) = parse_double(table.rows[0][k], table.source, table.lines[0]);
  return v;
}

Matrix read_matrix_file(const std::string& path) {
  const CsvTable table = read_csv(std::filesystem::path(path));
  const auto d = static_cast<Eigen::Index>(table.header.size());
  if (static_cast<Eigen::Index>(table.rows.size()) != d) {
    throw ParseError(table.source, 0, "expected a square matrix with one row per column");
  }
  Matrix m(d, d);
  for (Eigen::Index r = 0; r < d; ++r) {
    for (Eigen::Index c = 0; c < d; ++c) m(r, c) = parse_double(table.rows[r][c], table.source, table.lines[r]);
  }
  return m;
}

int cmd_calibrate(const CalibrateArgs& a, std::ostream& out) {
  if (a.alpha.has_value() == a.pe.has_value()) throw UsageError("give exactly one of --alpha or --pe");
  const bool have_files = !a.beta_file.empty() || !a.sigma_file.empty();
  if (a.sigma_s.has_value() == have_files || (have_files && (a.beta_file.empty() || a.sigma_file.empty()))) {
    throw UsageError("give either --sigma-s or both --beta-file and --sigma-file");
  }
  const QuadratureSpec quad{a.points, a.half_width};
  const ScoreDifferenceLaw law = a.sigma_s ? ScoreDifferenceLaw{*a.sigma_s}
                                           : score_sigma(read_vector_file(a.beta_file),
                                                         SpdMatrix::from(read_matrix_file(a.sigma_file)));
  if (!(law.sigma_s > 0.0)) throw DomainError("--sigma-s must be positive");
  const double alpha = a.alpha ? *a.alpha : solve_alpha_for_pe(*a.pe, law, quad);
  const LinkFunction link = LinkFunction::logistic(alpha);
  out << "c1=" << format_double(estimate_c1(link, law, quad)) << " pe=" << format_double(estimate_pe(link, law, quad))
      << " alpha=" << format_double(alpha) << '\n';
  return kSuccess;
}

int report_failures(const SweepResult& result, std::ostream& err) {
  std::size_t failed = 0;
  for (const auto& row : result.rows) failed += row.ok() ? 0 : 1;
  if (failed == 0) return kSuccess;
  err << "error: " << failed << " of " << result.rows.size()
      << " trials failed (see the error column of the trials CSV)\n";
  return kRuntimeError;
}

int cmd_sweep(const ExperimentArgs& a, std::ostream& out, std::ostream& err) {
  const SweepSpec spec = parse_experiment_config(a.config).to_sweep_spec();
  const SweepResult result = run_sweep(spec, RunOptions{a.threads});
  write_results(result, a.out_prefix, WriteOptions{a.timing});
  out << "wrote " << a.out_prefix << ".trials.csv and " << a.out_prefix << ".agg.csv (" << result.rows.size()
      << " trials)\n";
  return report_failures(result, err);
}

int cmd_min_n(const ExperimentArgs& a, std::ostream& out, std::ostream& err) {
  const MinNQuery query = parse_experiment_config(a.config).to_min_n_query();
  const MinNResult result = find_min_n(query, RunOptions{a.threads});
  write_results(result.evaluated, a.out_prefix, WriteOptions{a.timing});
  if (result.n) {
    out << *result.n << '\n';
  } else {
    out << "not-found\n";
  }
  return report_failures(result.evaluated, err);
}

void add_experiment_flags(CLI::App* cmd, ExperimentArgs& a) {
  cmd->add_option("--config", a.config, "key=value experiment file")->required()->check(CLI::ExistingFile);
  cmd->add_option("--out-prefix", a.out_prefix, "Output prefix for <prefix>.trials.csv and <prefix>.agg.csv")
      ->required();
  cmd->add_option("--threads", a.threads, "Worker threads (0 = all cores)");
  cmd->add_flag("--timing", a.timing, "Record per-trial wall time (makes output run-dependent)");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Rank regression from pairwise comparisons: data generation, estimation, calibration, sweeps",
               "rankreg"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "Generate samples, comparisons and ground truth");
  generate->add_option("--d", gen.d, "Feature dimension")->required()->check(CLI::PositiveNumber);
  generate->add_option("--n", gen.n, "Half the sample count (2N rows are written)")->required()->check(
      CLI::PositiveNumber);
  generate->add_option("--m", gen.m, "Number of comparisons")->required()->check(CLI::PositiveNumber);
  generate->add_option("--lambda-min", gen.lambda_min, "Smallest covariance eigenvalue, in (0, 1]")
      ->capture_default_str();
  generate->add_option("--pe", gen.pe, "Target flip probability in [0, 1/2); 0 = noiseless")->capture_default_str();
  generate->add_option("--seed", gen.seed, "Master seed")->capture_default_str();
  generate->add_option("--out-prefix", gen.out_prefix, "Output prefix")->required();

  EstimateArgs est;
  auto* estimate = app.add_subcommand("estimate", "Estimate beta from samples and comparisons");
  estimate->add_option("--samples", est.samples, "Samples CSV (2N rows)")->required()->check(CLI::ExistingFile);
  estimate->add_option("--comparisons", est.comparisons, "Comparisons CSV")->required()->check(CLI::ExistingFile);
  estimate->add_option("--truth", est.truth, "Truth CSV; enables the error metrics")->check(CLI::ExistingFile);
  estimate->add_option("--out", est.out, "Write the estimate CSV here");

  CalibrateArgs cal;
  auto* calibrate = app.add_subcommand("calibrate", "Compute c1 and p_e for a logistic link");
  auto* alpha_opt = calibrate->add_option("--alpha", cal.alpha, "Logistic slope");
  auto* pe_opt = calibrate->add_option("--pe", cal.pe, "Target flip probability in (0, 1/2)");
  alpha_opt->excludes(pe_opt);
  auto* sigma_opt = calibrate->add_option("--sigma-s", cal.sigma_s, "Std. deviation of the score difference");
  auto* beta_opt = calibrate->add_option("--beta-file", cal.beta_file, "CSV: header and one row of beta")
                       ->check(CLI::ExistingFile);
  auto* cov_opt = calibrate->add_option("--sigma-file", cal.sigma_file, "CSV: header and d rows of Sigma")
                      ->check(CLI::ExistingFile);
  sigma_opt->excludes(beta_opt)->excludes(cov_opt);
  calibrate->add_option("--points", cal.points, "Trapezoid nodes")->capture_default_str();
  calibrate->add_option("--half-width", cal.half_width, "Window half width in units of sigma_s")
      ->capture_default_str();

  ExperimentArgs sweep_args;
  auto* sweep = app.add_subcommand("sweep", "Run a parameter sweep");
  add_experiment_flags(sweep, sweep_args);

  ExperimentArgs min_n_args;
  auto* min_n = app.add_subcommand("min-n", "Find the smallest N reaching an angle threshold");
  add_experiment_flags(min_n, min_n_args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsageError;
  }

  try {
    if (*generate) return cmd_generate(gen, out);
    if (*estimate) return cmd_estimate(est, out);
    if (*calibrate) return cmd_calibrate(cal, out);
    if (*sweep) return cmd_sweep(sweep_args, out, err);
    if (*min_n) return cmd_min_n(min_n_args, out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
  return kUsageError;
}

}  // namespace rankreg::cli
