#include "shrinkvb_cli/commands.hpp"

#include "shrinkvb/artifact.hpp"
#include "shrinkvb/dispatch.hpp"
#include "shrinkvb/errors.hpp"
#include "shrinkvb/model_name.hpp"
#include "shrinkvb/posterior.hpp"
#include "shrinkvb/simbench.hpp"
#include "shrinkvb_cli/build_info.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <thread>

namespace shrinkvb::cli {

namespace {

struct FitArgs {
  std::string data;
  std::string response = "y";
  std::string model;
  std::string out;
  std::string family = "correlated";
  long n_iter = 1000;
  std::optional<long> burn_in;
  double rel_tol = 1e-4;
  std::optional<Index> batch_size;
  std::optional<double> const_rhot;
  std::optional<double> omega;
  std::optional<double> kappa;
  std::optional<std::uint64_t> seed;
  std::optional<double> fixed_lambda;
  std::optional<double> fixed_tau;
};

struct PredictArgs {
  std::string artifact;
  std::string data;
  std::string out;
  double level = 0.95;
};

struct StudyArgs {
  std::string config;
  std::string out;
  std::string csv;
  std::optional<std::uint64_t> seed;
  std::optional<int> jobs;
};

/// Fresh seed for runs without --seed; recorded in the artifact.
std::uint64_t time_seed() {
  const auto ticks = static_cast<std::uint64_t>(
      std::chrono::high_resolution_clock::now().time_since_epoch().count());
  return derive_seed(ticks, std::random_device{}());
}

/// Write to `path`, or to `out` when the path is empty or "-".
void emit(const std::string& path, std::ostream& out, const std::string& text) {
  if (path.empty() || path == "-") {
    out << text;
  } else {
    write_text_file(path, text);
  }
}

int cmd_fit(const FitArgs& a, std::ostream& out) {
  const ModelSpec model = parse_model_name(a.model);
  FitOptions options;
  options.family = a.family == "independent" ? CoeffFamily::independent : CoeffFamily::correlated;
  options.n_iter = a.n_iter;
  options.burn_in = a.burn_in;
  options.rel_tol = a.rel_tol;
  options.batch_size = a.batch_size;
  if (a.const_rhot) options.schedule = StepSchedule::constant(*a.const_rhot);
  if (a.omega || a.kappa) {
    if (!a.omega || !a.kappa) throw UsageError("--omega and --kappa must be given together");
    options.schedule = StepSchedule::decaying(*a.omega, *a.kappa);
  }
  options.hyper.fixed_lambda = a.fixed_lambda;
  options.hyper.fixed_tau = a.fixed_tau;
  options.hyper.validate();
  if (model.algorithm == Algorithm::svi && !options.batch_size) {
    throw UsageError("--batch-size is required for SVI models");
  }
  if (model.algorithm != Algorithm::gibbs) options.burn_in.reset();
  options.seed = a.seed.value_or(time_seed());

  const CsvTable table = read_csv(std::filesystem::path(a.data));
  const DesignSplit split = split_response(table, a.response);

  FitArtifact artifact{model, fit_model(model, split.X, split.y, options), {}};
  artifact.meta.tool_version = std::string(library_version());
  artifact.meta.created_at = utc_timestamp();
  artifact.meta.seed = options.seed;
  artifact.meta.response = a.response;
  artifact.meta.coef_names = split.predictors;
  artifact.meta.options = options;
  emit(a.out, out, artifact_to_json(artifact));
  return kOk;
}

int cmd_predict(const PredictArgs& a, std::ostream& out) {
  const FitArtifact artifact = load_artifact(a.artifact);
  const CsvTable table = read_csv(std::filesystem::path(a.data));
  const MatrixXd x = predictor_matrix(table, artifact.meta.coef_names, artifact.meta.response);
  std::ostringstream text;
  if (artifact.model.link == Link::normal) {
    const auto predictions = std::visit([&](const auto& fit) { return predict_lm(fit, x, a.level); },
                                        artifact.fit);
    write_predictions_csv(text, predictions);
  } else {
    const auto probs = std::visit([&](const auto& fit) { return predict_probit(fit, x); }, artifact.fit);
    write_probabilities_csv(text, probs);
  }
  emit(a.out, out, text.str());
  return kOk;
}

int cmd_summarize(const PredictArgs& a, std::ostream& out) {
  const FitArtifact artifact = load_artifact(a.artifact);
  std::ostringstream text;
  write_summary_csv(text, summarize(artifact.fit, a.level, artifact.meta.coef_names));
  emit(a.out, out, text.str());
  return kOk;
}

int cmd_simulate(const StudyArgs& a, std::ostream& out) {
  StudyConfig config = study_from_json(read_text_file(a.config));
  if (a.seed) config.master_seed = *a.seed;
  if (a.jobs) config.jobs = *a.jobs;
  const auto reports = run_replication(config);
  emit(a.out, out, reports_to_json(reports, aggregate_reports(reports), config.master_seed));
  if (!a.csv.empty()) {
    std::ostringstream csv;
    write_reports_csv(csv, reports);
    write_text_file(a.csv, csv.str());
  }
  return kOk;
}

std::string cpu_string() {
  std::ifstream in("/proc/cpuinfo");
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("model name", 0) == 0) {
      const auto colon = line.find(':');
      if (colon != std::string::npos) return line.substr(line.find_first_not_of(' ', colon + 1));
    }
  }
  return "unknown";
}

int cmd_bench(const StudyArgs& a, std::ostream& out) {
  TimingConfig config = timing_from_json(read_text_file(a.config));
  if (a.seed) config.master_seed = *a.seed;
  const auto rows = run_timing(config);
  const std::map<std::string, std::string> env = {
      {"cpu", cpu_string()},
      {"hardware_threads", std::to_string(std::thread::hardware_concurrency())},
      {"compiler", build::kCompiler},
      {"build_type", build::kBuildType},
      {"build_flags", build::kFlags},
      {"version", std::string(library_version())},
      {"created_at", utc_timestamp()}};
  emit(a.out, out, timing_to_json(rows, env));
  if (!a.csv.empty()) {
    std::ostringstream csv;
    write_timing_csv(csv, rows);
    write_text_file(a.csv, csv.str());
  }
  return kOk;
}

void add_study_options(CLI::App* cmd, StudyArgs& a) {
  cmd->add_option("--config", a.config, "JSON configuration file")->required();
  cmd->add_option("--out", a.out, "results JSON (default stdout)");
  cmd->add_option("--csv", a.csv, "optional flat CSV table");
  cmd->add_option("--seed", a.seed, "master seed (overrides the config file)");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bayesian shrinkage regression with Gibbs, CAVI and SVI", "shrinkvb"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(library_version()));

  FitArgs fit;
  auto* fit_cmd = app.add_subcommand("fit", "fit a model to CSV data and write a JSON artifact");
  fit_cmd->add_option("--data", fit.data, "CSV file with a header row")->required();
  fit_cmd->add_option("--response", fit.response, "response column name")->capture_default_str();
  fit_cmd->add_option("--model", fit.model, "model name, e.g. lm_ridge_cavi")->required();
  fit_cmd->add_option("--out", fit.out, "artifact path (default stdout)");
  fit_cmd->add_option("--family", fit.family, "variational family")
      ->check(CLI::IsMember({"correlated", "independent"}))
      ->capture_default_str();
  fit_cmd->add_option("--n-iter", fit.n_iter, "iterations (CAVI maximum, SVI steps, Gibbs draws)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  fit_cmd->add_option("--burn-in", fit.burn_in, "Gibbs burn-in (default n_iter/2)")
      ->check(CLI::NonNegativeNumber);
  fit_cmd->add_option("--rel-tol", fit.rel_tol, "CAVI relative ELBO tolerance")->capture_default_str();
  fit_cmd->add_option("--batch-size", fit.batch_size, "SVI minibatch size")->check(CLI::PositiveNumber);
  auto* rhot = fit_cmd->add_option("--const-rhot", fit.const_rhot, "constant SVI step size (default 0.01)");
  auto* omega = fit_cmd->add_option("--omega", fit.omega, "decaying step: delay");
  auto* kappa = fit_cmd->add_option("--kappa", fit.kappa, "decaying step: forgetting rate");
  rhot->excludes(omega)->excludes(kappa);
  fit_cmd->add_option("--seed", fit.seed, "random seed (default: time-derived, recorded)");
  fit_cmd->add_option("--fixed-lambda", fit.fixed_lambda, "hold the global coefficient precision fixed");
  fit_cmd->add_option("--fixed-tau", fit.fixed_tau, "hold the error precision fixed (lm)");

  PredictArgs predict;
  auto* predict_cmd = app.add_subcommand("predict", "predict from a fit artifact");
  predict_cmd->add_option("--artifact", predict.artifact, "fit artifact")->required();
  predict_cmd->add_option("--data", predict.data, "CSV of new predictors")->required();
  predict_cmd->add_option("--level", predict.level, "interval level")->capture_default_str();
  predict_cmd->add_option("--out", predict.out, "output CSV (default stdout)");

  PredictArgs summary;
  auto* summary_cmd = app.add_subcommand("summarize", "posterior means and credible intervals");
  summary_cmd->add_option("--artifact", summary.artifact, "fit artifact")->required();
  summary_cmd->add_option("--level", summary.level, "interval level")->capture_default_str();
  summary_cmd->add_option("--out", summary.out, "output CSV (default stdout)");

  StudyArgs simulate;
  auto* simulate_cmd = app.add_subcommand("simulate", "run a replicated simulation study");
  add_study_options(simulate_cmd, simulate);
  simulate_cmd->add_option("--jobs", simulate.jobs, "worker threads")->check(CLI::PositiveNumber);

  StudyArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "time fits over an N or P grid");
  add_study_options(bench_cmd, bench);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << library_version() << '\n';
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kValidationError;
  }

  try {
    if (fit_cmd->parsed()) return cmd_fit(fit, out);
    if (predict_cmd->parsed()) return cmd_predict(predict, out);
    if (summary_cmd->parsed()) return cmd_summarize(summary, out);
    if (simulate_cmd->parsed()) return cmd_simulate(simulate, out);
    if (bench_cmd->parsed()) return cmd_bench(bench, out);
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  } catch (const NumericalError& e) {
    err << "error: " << e.what() << '\n';
    return kNumericalError;
  } catch (const std::invalid_argument& e) {  // DomainError, UsageError
    err << "error: " << e.what() << '\n';
    return kValidationError;
  }
  return kValidationError;
}

}  // namespace shrinkvb::cli
