#include "shrinkvb/artifact.hpp"

#include "shrinkvb/errors.hpp"
#include "shrinkvb/model_name.hpp"

#include <nlohmann/json.hpp>

#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace shrinkvb {

using nlohmann::json;

namespace {

// ---- small helpers -----------------------------------------------------------

json vec_json(const VectorXd& v) { return json(std::vector<double>(v.data(), v.data() + v.size())); }

VectorXd json_vec(const json& j) {
  const auto values = j.get<std::vector<double>>();
  return Eigen::Map<const VectorXd>(values.data(), static_cast<Index>(values.size()));
}

json mat_json(const MatrixXd& m) {
  json rows = json::array();
  for (Index i = 0; i < m.rows(); ++i) rows.push_back(vec_json(m.row(i).transpose()));
  return rows;
}

MatrixXd json_mat(const json& j, Index cols) {
  MatrixXd out(static_cast<Index>(j.size()), cols);
  for (Index i = 0; i < out.rows(); ++i) {
    const VectorXd row = json_vec(j.at(static_cast<std::size_t>(i)));
    if (row.size() != cols) throw IoError("artifact matrix rows have inconsistent lengths");
    out.row(i) = row.transpose();
  }
  return out;
}

json gamma_json(const GammaFactor& g) { return {{"dist", "gamma"}, {"shape", g.shape}, {"rate", g.rate}}; }
GammaFactor json_gamma(const json& j) { return {j.at("shape").get<double>(), j.at("rate").get<double>()}; }

json point_json(double v) { return {{"dist", "point"}, {"value", v}}; }

json inv_gamma_list(const std::vector<InverseGammaFactor>& list) {
  std::vector<double> shape, scale;
  for (const auto& f : list) {
    shape.push_back(f.shape);
    scale.push_back(f.scale);
  }
  return {{"dist", "inverse_gamma"}, {"shape", shape}, {"scale", scale}};
}

std::vector<InverseGammaFactor> json_inv_gamma_list(const json& j) {
  const auto shape = j.at("shape").get<std::vector<double>>();
  const auto scale = j.at("scale").get<std::vector<double>>();
  if (shape.size() != scale.size()) throw IoError("inverse-gamma lists differ in length");
  std::vector<InverseGammaFactor> out;
  for (std::size_t i = 0; i < shape.size(); ++i) out.push_back({shape[i], scale[i]});
  return out;
}

template <class Enum, std::size_t N>
Enum parse_enum(const std::string& text, const Enum (&values)[N], const char* what) {
  for (Enum v : values) {
    if (to_string(v) == text) return v;
  }
  throw UsageError(std::string("unknown ") + what + " '" + text + "'");
}

CoeffFamily parse_family(const std::string& text) {
  static constexpr CoeffFamily kAll[] = {CoeffFamily::correlated, CoeffFamily::independent};
  return parse_enum(text, kAll, "family");
}

// ---- fit options -------------------------------------------------------------

json hyper_json(const PriorHyper& h) {
  json j = {{"a_lambda", h.a_lambda}, {"b_lambda", h.b_lambda}, {"a_tau", h.a_tau},
            {"b_tau", h.b_tau},       {"var_b0", h.var_b0}};
  if (h.fixed_lambda) j["fixed_lambda"] = *h.fixed_lambda;
  if (h.fixed_tau) j["fixed_tau"] = *h.fixed_tau;
  return j;
}

PriorHyper json_hyper(const json& j) {
  PriorHyper h;
  h.a_lambda = j.value("a_lambda", h.a_lambda);
  h.b_lambda = j.value("b_lambda", h.b_lambda);
  h.a_tau = j.value("a_tau", h.a_tau);
  h.b_tau = j.value("b_tau", h.b_tau);
  h.var_b0 = j.value("var_b0", h.var_b0);
  if (j.contains("fixed_lambda")) h.fixed_lambda = j.at("fixed_lambda").get<double>();
  if (j.contains("fixed_tau")) h.fixed_tau = j.at("fixed_tau").get<double>();
  h.validate();
  return h;
}

json options_json(const FitOptions& o) {
  json j = {{"family", std::string(to_string(o.family))},
            {"n_iter", o.n_iter},
            {"rel_tol", o.rel_tol},
            {"hyper", hyper_json(o.hyper)}};
  if (o.burn_in) j["burn_in"] = *o.burn_in;
  if (o.batch_size) j["batch_size"] = *o.batch_size;
  if (o.schedule.kind() == StepSchedule::Kind::constant) {
    j["schedule"] = {{"kind", "constant"}, {"rho", o.schedule.rho()}};
  } else {
    j["schedule"] = {{"kind", "decaying"}, {"omega", o.schedule.omega()}, {"kappa", o.schedule.kappa()}};
  }
  return j;
}

/// Accepts both the artifact layout and the flatter study-config layout
/// (const_rhot / omega / kappa at top level).
FitOptions json_options(const json& j) {
  FitOptions o;
  if (j.contains("family")) o.family = parse_family(j.at("family").get<std::string>());
  o.n_iter = j.value("n_iter", o.n_iter);
  o.rel_tol = j.value("rel_tol", o.rel_tol);
  if (j.contains("burn_in")) o.burn_in = j.at("burn_in").get<long>();
  if (j.contains("batch_size")) o.batch_size = j.at("batch_size").get<Index>();
  if (j.contains("hyper")) o.hyper = json_hyper(j.at("hyper"));
  if (j.contains("schedule")) {
    const json& s = j.at("schedule");
    const auto kind = s.at("kind").get<std::string>();
    if (kind == "constant") {
      o.schedule = StepSchedule::constant(s.at("rho").get<double>());
    } else if (kind == "decaying") {
      o.schedule = StepSchedule::decaying(s.at("omega").get<double>(), s.at("kappa").get<double>());
    } else {
      throw UsageError("unknown schedule kind '" + kind + "'");
    }
  }
  const bool has_const = j.contains("const_rhot");
  const bool has_decay = j.contains("omega") || j.contains("kappa");
  if (has_const && has_decay) throw UsageError("const_rhot and omega/kappa are mutually exclusive");
  if (has_const) o.schedule = StepSchedule::constant(j.at("const_rhot").get<double>());
  if (has_decay) {
    if (!j.contains("omega") || !j.contains("kappa")) {
      throw UsageError("omega and kappa must be given together");
    }
    o.schedule = StepSchedule::decaying(j.at("omega").get<double>(), j.at("kappa").get<double>());
  }
  return o;
}

// ---- fits --------------------------------------------------------------------

void write_variational(json& j, const VariationalFit& fit) {
  j["b0"] = {{"dist", "normal"}, {"mu", fit.b0.mean}, {"var", fit.b0.var}};
  if (fit.b.family == CoeffFamily::correlated) {
    j["b"] = {{"dist", "mvnormal"}, {"mu", vec_json(fit.b.mu)}, {"sigma_mat", mat_json(fit.b.sigma)}};
  } else {
    j["b"] = {{"dist", "normal"}, {"mu", vec_json(fit.b.mu)}, {"var", vec_json(fit.b.var)}};
  }
  if (fit.link == Link::normal) {
    if (fit.tau_fixed) {
      j["tau"] = point_json(*fit.tau_fixed);
    } else if (fit.tau) {
      j["tau"] = gamma_json(*fit.tau);
    }
  }
  if (fit.lambda_fixed) {
    j["lambda"] = point_json(*fit.lambda_fixed);
  } else if (fit.lambda) {
    j["lambda"] = gamma_json(*fit.lambda);
  }
  if (fit.prior == Prior::lasso) {
    std::vector<double> mean, shape;
    for (const auto& f : fit.lasso_scales) {
      mean.push_back(f.mean);
      shape.push_back(f.shape);
    }
    j["local_scales"] = {{"dist", "inverse_gaussian"}, {"mean", mean}, {"shape", shape}};
  } else if (fit.prior == Prior::horseshoe) {
    j["local_scales"] = inv_gamma_list(fit.hs_local_scales);
    j["nu"] = inv_gamma_list(fit.hs_nu);
    if (fit.hs_xi) j["xi"] = inv_gamma_list({*fit.hs_xi});
  }
  j["elbo"] = fit.elbo;
}

VariationalFit read_variational(const json& j, const ModelSpec& model) {
  VariationalFit fit;
  fit.link = model.link;
  fit.prior = model.prior;
  fit.algorithm = model.algorithm;
  fit.b0 = {j.at("b0").at("mu").get<double>(), j.at("b0").at("var").get<double>()};
  const json& b = j.at("b");
  fit.b.mu = json_vec(b.at("mu"));
  const Index p = fit.b.mu.size();
  if (b.at("dist").get<std::string>() == "mvnormal") {
    fit.b.family = CoeffFamily::correlated;
    fit.b.sigma = json_mat(b.at("sigma_mat"), p);
    if (fit.b.sigma.rows() != p) throw IoError("sigma_mat has the wrong size");
  } else {
    fit.b.family = CoeffFamily::independent;
    fit.b.var = json_vec(b.at("var"));
    if (fit.b.var.size() != p) throw IoError("coefficient variances have the wrong size");
  }
  auto read_precision = [&](const char* key, std::optional<GammaFactor>& factor,
                            std::optional<double>& fixed) {
    if (!j.contains(key)) return;
    const json& f = j.at(key);
    if (f.at("dist").get<std::string>() == "point") {
      fixed = f.at("value").get<double>();
    } else {
      factor = json_gamma(f);
    }
  };
  if (model.link == Link::normal) read_precision("tau", fit.tau, fit.tau_fixed);
  read_precision("lambda", fit.lambda, fit.lambda_fixed);
  if (model.prior == Prior::lasso) {
    const auto mean = j.at("local_scales").at("mean").get<std::vector<double>>();
    const auto shape = j.at("local_scales").at("shape").get<std::vector<double>>();
    if (mean.size() != shape.size()) throw IoError("local scale lists differ in length");
    for (std::size_t i = 0; i < mean.size(); ++i) fit.lasso_scales.push_back({mean[i], shape[i]});
  } else if (model.prior == Prior::horseshoe) {
    fit.hs_local_scales = json_inv_gamma_list(j.at("local_scales"));
    fit.hs_nu = json_inv_gamma_list(j.at("nu"));
    if (j.contains("xi")) {
      const auto xi = json_inv_gamma_list(j.at("xi"));
      if (xi.size() != 1) throw IoError("xi must hold a single factor");
      fit.hs_xi = xi.front();
    }
  }
  fit.elbo = j.at("elbo").get<std::vector<double>>();
  return fit;
}

void write_draws(json& j, const GibbsDraws& draws) {
  auto draws_json = [](json values) { return json{{"dist", "draws"}, {"draws", std::move(values)}}; };
  j["b0"] = draws_json(vec_json(draws.b0));
  j["b"] = draws_json(mat_json(draws.b));
  if (draws.link == Link::normal) j["tau"] = draws_json(vec_json(draws.tau));
  j["lambda"] = draws_json(vec_json(draws.lambda));
  if (draws.prior != Prior::ridge) j["local_scales"] = draws_json(mat_json(draws.local_scales));
}

GibbsDraws read_draws(const json& j, const ModelSpec& model, Index p) {
  GibbsDraws draws;
  draws.link = model.link;
  draws.prior = model.prior;
  draws.b0 = json_vec(j.at("b0").at("draws"));
  draws.b = json_mat(j.at("b").at("draws"), p);
  if (model.link == Link::normal) draws.tau = json_vec(j.at("tau").at("draws"));
  draws.lambda = json_vec(j.at("lambda").at("draws"));
  if (model.prior != Prior::ridge) {
    draws.local_scales = json_mat(j.at("local_scales").at("draws"), p);
  } else {
    draws.local_scales.resize(draws.b0.size(), 0);
  }
  if (draws.b.rows() != draws.b0.size() || draws.lambda.size() != draws.b0.size()) {
    throw IoError("artifact draw arrays have inconsistent lengths");
  }
  return draws;
}

// ---- CSV ---------------------------------------------------------------------

std::vector<std::string> split_csv_line(const std::string& line, std::size_t line_no) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else {
      field += c;
    }
  }
  if (quoted) throw IoError("unterminated quote on line " + std::to_string(line_no));
  fields.push_back(std::move(field));
  return fields;
}

double parse_cell(const std::string& raw, std::size_t line_no, const std::string& column) {
  std::size_t lo = 0;
  std::size_t hi = raw.size();
  while (lo < hi && std::isspace(static_cast<unsigned char>(raw[lo]))) ++lo;
  while (hi > lo && std::isspace(static_cast<unsigned char>(raw[hi - 1]))) --hi;
  if (lo < hi && raw[lo] == '+') ++lo;
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(raw.data() + lo, raw.data() + hi, value);
  if (lo == hi || ec != std::errc() || ptr != raw.data() + hi || !std::isfinite(value)) {
    throw IoError("non-numeric value '" + raw + "' in column '" + column + "' on line " +
                  std::to_string(line_no));
  }
  return value;
}

// ---- reports -----------------------------------------------------------------

json report_json(const MetricsReport& r) {
  json j = {{"method", r.method},     {"replicate", r.replicate}, {"seed", r.seed},
            {"mse", r.mse},           {"mspe", r.mspe},           {"coverage", r.coverage},
            {"wall_clock_s", r.wall_clock_s}};
  j["rand_index"] = r.rand_index ? json(*r.rand_index) : json(nullptr);
  j["auc_pr"] = r.auc_pr ? json(*r.auc_pr) : json(nullptr);
  return j;
}

std::string optional_cell(const std::optional<double>& v) {
  if (!v) return "";
  std::ostringstream s;
  s << std::setprecision(17) << *v;
  return s.str();
}

std::vector<MethodSpec> json_methods(const json& j) {
  std::vector<MethodSpec> methods;
  for (const json& m : j) methods.push_back({parse_model_name(m.at("model").get<std::string>()), json_options(m)});
  return methods;
}

template <class F>
auto guarded(F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw IoError(std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace

// ---- artifacts -----------------------------------------------------------------

std::string artifact_to_json(const FitArtifact& artifact, int indent) {
  json j = json::object();
  if (const auto* fit = std::get_if<VariationalFit>(&artifact.fit)) {
    write_variational(j, *fit);
  } else {
    write_draws(j, std::get<GibbsDraws>(artifact.fit));
  }
  const ArtifactMeta& m = artifact.meta;
  json meta = {{"schema_version", m.schema_version},
               {"tool_version", m.tool_version},
               {"model", model_name(artifact.model)},
               {"created_at", m.created_at},
               {"seed", m.seed},
               {"response", m.response},
               {"coef_names", m.coef_names},
               {"options", options_json(m.options)}};
  if (const auto* fit = std::get_if<VariationalFit>(&artifact.fit)) {
    meta["family"] = std::string(to_string(fit->family()));
    meta["converged"] = fit->converged;
    meta["iterations"] = fit->iterations;
  } else {
    const auto& draws = std::get<GibbsDraws>(artifact.fit);
    meta["iterations"] = draws.n_iter;
    meta["burn_in"] = draws.burn_in;
  }
  j["meta"] = std::move(meta);
  return j.dump(indent) + "\n";
}

FitArtifact artifact_from_json(const std::string& text) {
  return guarded([&] {
    const json j = json::parse(text);
    const json& meta = j.at("meta");
    const int version = meta.at("schema_version").get<int>();
    if (version != kSchemaVersion) {
      throw IoError("unsupported artifact schema_version " + std::to_string(version));
    }
    FitArtifact a;
    a.model = parse_model_name(meta.at("model").get<std::string>());
    a.meta.schema_version = version;
    a.meta.tool_version = meta.value("tool_version", "");
    a.meta.created_at = meta.value("created_at", "");
    a.meta.seed = meta.at("seed").get<std::uint64_t>();
    a.meta.response = meta.value("response", "");
    a.meta.coef_names = meta.at("coef_names").get<std::vector<std::string>>();
    a.meta.options = json_options(meta.at("options"));
    const auto p = static_cast<Index>(a.meta.coef_names.size());
    if (a.model.algorithm == Algorithm::gibbs) {
      GibbsDraws draws = read_draws(j, a.model, p);
      draws.n_iter = meta.at("iterations").get<long>();
      draws.burn_in = meta.at("burn_in").get<long>();
      a.fit = std::move(draws);
    } else {
      VariationalFit fit = read_variational(j, a.model);
      if (fit.num_coefficients() != p) throw IoError("coefficient count does not match coef_names");
      fit.converged = meta.at("converged").get<bool>();
      fit.iterations = meta.at("iterations").get<long>();
      a.fit = std::move(fit);
    }
    return a;
  });
}

void save_artifact(const FitArtifact& artifact, const std::filesystem::path& path) {
  write_text_file(path, artifact_to_json(artifact));
}

FitArtifact load_artifact(const std::filesystem::path& path) {
  return artifact_from_json(read_text_file(path));
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream s;
  s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return s.str();
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream s;
  s << in.rdbuf();
  if (in.bad()) throw IoError("error while reading '" + path.string() + "'");
  return s.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << text;
  out.flush();
  if (!out) throw IoError("error while writing '" + path.string() + "'");
}

// ---- CSV -----------------------------------------------------------------------

CsvTable read_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!line.empty()) return true;
    }
    return false;
  };
  if (!next_line()) throw IoError("CSV input is empty (a header row is required)");
  CsvTable table;
  if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
  table.header = split_csv_line(line, line_no);
  std::vector<double> cells;
  Index rows = 0;
  while (next_line()) {
    const auto fields = split_csv_line(line, line_no);
    if (fields.size() != table.header.size()) {
      throw IoError("line " + std::to_string(line_no) + " has " + std::to_string(fields.size()) +
                    " fields, expected " + std::to_string(table.header.size()));
    }
    for (std::size_t c = 0; c < fields.size(); ++c) cells.push_back(parse_cell(fields[c], line_no, table.header[c]));
    ++rows;
  }
  if (in.bad()) throw IoError("error while reading CSV input");
  const auto cols = static_cast<Index>(table.header.size());
  table.values = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      cells.data(), rows, cols);
  return table;
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  try {
    return read_csv(in);
  } catch (const IoError& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

DesignSplit split_response(const CsvTable& table, const std::string& response) {
  Index col = -1;
  for (std::size_t c = 0; c < table.header.size(); ++c) {
    if (table.header[c] == response) {
      if (col >= 0) throw DomainError("response column '" + response + "' appears twice");
      col = static_cast<Index>(c);
    }
  }
  if (col < 0) throw UsageError("response column '" + response + "' not found in CSV header");
  DesignSplit out;
  out.y = table.values.col(col);
  out.X.resize(table.values.rows(), table.values.cols() - 1);
  Index k = 0;
  for (Index c = 0; c < table.values.cols(); ++c) {
    if (c == col) continue;
    out.X.col(k++) = table.values.col(c);
    out.predictors.push_back(table.header[static_cast<std::size_t>(c)]);
  }
  if (out.predictors.empty()) throw DomainError("CSV has no predictor columns");
  return out;
}

MatrixXd predictor_matrix(const CsvTable& table, const std::vector<std::string>& coef_names,
                          const std::string& response) {
  std::vector<Index> keep;
  std::vector<std::string> names;
  for (std::size_t c = 0; c < table.header.size(); ++c) {
    if (!response.empty() && table.header[c] == response) continue;
    keep.push_back(static_cast<Index>(c));
    names.push_back(table.header[c]);
  }
  const auto p = static_cast<Index>(coef_names.size());
  if (static_cast<Index>(keep.size()) != p) {
    throw DomainError("new data has " + std::to_string(keep.size()) +
                      " predictor columns, expected P = " + std::to_string(p));
  }
  for (std::size_t c = 0; c < names.size(); ++c) {
    if (names[c] != coef_names[c]) {
      throw DomainError("predictor column " + std::to_string(c + 1) + " is '" + names[c] +
                        "', expected '" + coef_names[c] + "'");
    }
  }
  MatrixXd x(table.values.rows(), p);
  for (Index k = 0; k < p; ++k) x.col(k) = table.values.col(keep[static_cast<std::size_t>(k)]);
  return x;
}

void write_predictions_csv(std::ostream& out, const PredictionSet& predictions) {
  out << "estimate,lower,upper\n" << std::setprecision(17);
  for (Index i = 0; i < predictions.estimate.size(); ++i) {
    out << predictions.estimate[i] << ',' << predictions.ci_lower[i] << ',' << predictions.ci_upper[i]
        << '\n';
  }
}

void write_probabilities_csv(std::ostream& out, const VectorXd& probabilities) {
  out << "prob\n" << std::setprecision(17);
  for (Index i = 0; i < probabilities.size(); ++i) out << probabilities[i] << '\n';
}

void write_summary_csv(std::ostream& out, const SummaryTable& table) {
  out << "name,estimate,lower,upper\n" << std::setprecision(17);
  for (const auto& row : table.rows) {
    out << row.name << ',' << row.estimate << ',' << row.lower << ',' << row.upper << '\n';
  }
}

// ---- studies -------------------------------------------------------------------

StudyConfig study_from_json(const std::string& text) {
  return guarded([&] {
    const json j = json::parse(text);
    StudyConfig c;
    const auto kind = j.value("kind", std::string("lm"));
    if (kind == "lm") {
      c.kind = StudyKind::lm;
    } else if (kind == "binary" || kind == "probit") {
      c.kind = StudyKind::binary;
    } else {
      throw UsageError("unknown study kind '" + kind + "'");
    }
    c.replicates = j.value("replicates", c.replicates);
    c.master_seed = j.value("seed", c.master_seed);
    c.n_test = j.value("n_test", c.n_test);
    c.level = j.value("level", c.level);
    c.jobs = j.value("jobs", c.jobs);
    const json design = j.value("design", json::object());
    if (c.kind == StudyKind::lm) {
      c.lm.n = design.value("n", c.lm.n);
      c.lm.p = design.value("p", c.lm.p);
      c.lm.zero_frac = design.value("zero_frac", c.lm.zero_frac);
      c.lm.snr = design.value("snr", c.lm.snr);
      c.lm.ar_rho = design.value("ar_rho", c.lm.ar_rho);
    } else {
      c.binary.n = design.value("n", c.binary.n);
      c.binary.p = design.value("p", c.binary.p);
      c.binary.n_zero = design.value("n_zero", c.binary.n_zero);
      c.binary.ar_rho = design.value("ar_rho", c.binary.ar_rho);
      const auto link = design.value("link", std::string("probit"));
      if (link == "probit") {
        c.binary.link = BinaryLink::probit;
      } else if (link == "logit") {
        c.binary.link = BinaryLink::logit;
      } else {
        throw UsageError("unknown binary link '" + link + "'");
      }
      if (design.contains("b0")) c.binary.b0 = design.at("b0").get<double>();
    }
    c.methods = json_methods(j.at("methods"));
    return c;
  });
}

TimingConfig timing_from_json(const std::string& text) {
  return guarded([&] {
    const json j = json::parse(text);
    TimingConfig c;
    const auto axis = j.value("axis", std::string("p"));
    if (axis == "p") {
      c.axis = TimingConfig::Axis::vary_p;
    } else if (axis == "n") {
      c.axis = TimingConfig::Axis::vary_n;
    } else {
      throw UsageError("timing axis must be 'p' or 'n'");
    }
    c.fixed = j.value("fixed", c.fixed);
    c.values = j.at("values").get<std::vector<Index>>();
    c.datasets = j.value("datasets", c.datasets);
    c.zero_frac = j.value("zero_frac", c.zero_frac);
    c.master_seed = j.value("seed", c.master_seed);
    c.methods = json_methods(j.at("methods"));
    return c;
  });
}

std::string reports_to_json(const std::vector<MetricsReport>& reports,
                            const std::vector<MetricsReport>& aggregate, std::uint64_t master_seed) {
  json j = {{"schema_version", kSchemaVersion}, {"seed", master_seed}};
  j["replicates"] = json::array();
  for (const auto& r : reports) j["replicates"].push_back(report_json(r));
  j["aggregate"] = json::array();
  for (const auto& r : aggregate) {
    json a = report_json(r);
    a.erase("seed");
    a.erase("replicate");
    a["count"] = r.replicate;
    j["aggregate"].push_back(std::move(a));
  }
  return j.dump(2) + "\n";
}

void write_reports_csv(std::ostream& out, const std::vector<MetricsReport>& reports) {
  out << "method,replicate,seed,mse,mspe,coverage,rand_index,auc_pr,wall_clock_s\n"
      << std::setprecision(17);
  for (const auto& r : reports) {
    out << r.method << ',' << r.replicate << ',' << r.seed << ',' << r.mse << ',' << r.mspe << ','
        << r.coverage << ',' << optional_cell(r.rand_index) << ',' << optional_cell(r.auc_pr) << ','
        << r.wall_clock_s << '\n';
  }
}

std::string timing_to_json(const std::vector<TimingRow>& rows,
                           const std::map<std::string, std::string>& environment) {
  json j = {{"schema_version", kSchemaVersion}, {"environment", environment}};
  j["points"] = json::array();
  for (const auto& r : rows) {
    j["points"].push_back({{"method", r.method},
                           {"n", r.n},
                           {"p", r.p},
                           {"seconds", r.seconds},
                           {"mean_seconds", r.mean_seconds}});
  }
  return j.dump(2) + "\n";
}

void write_timing_csv(std::ostream& out, const std::vector<TimingRow>& rows) {
  out << "method,n,p,mean_seconds\n" << std::setprecision(17);
  for (const auto& r : rows) out << r.method << ',' << r.n << ',' << r.p << ',' << r.mean_seconds << '\n';
}

}  // namespace shrinkvb
