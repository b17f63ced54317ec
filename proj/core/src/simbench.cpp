#include "shrinkvb/simbench.hpp"

#include "shrinkvb/engine.hpp"
#include "shrinkvb/errors.hpp"
#include "shrinkvb/model_name.hpp"
#include "shrinkvb/special.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <thread>

namespace shrinkvb {

namespace {

void check_ar(double ar_rho) {
  if (!(ar_rho > -1.0 && ar_rho < 1.0)) throw DomainError("ar_rho must lie in (-1, 1)");
}

double sample_variance(const VectorXd& v) {
  const double mean = v.mean();
  return (v.array() - mean).square().sum() / static_cast<double>(v.size() - 1);
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::vector<int> nonzero_pattern(const VectorXd& b) {
  std::vector<int> out(static_cast<std::size_t>(b.size()));
  for (Index j = 0; j < b.size(); ++j) out[static_cast<std::size_t>(j)] = b[j] != 0.0 ? 1 : 0;
  return out;
}

std::vector<int> binary_labels(const VectorXd& y) {
  std::vector<int> out(static_cast<std::size_t>(y.size()));
  for (Index i = 0; i < y.size(); ++i) out[static_cast<std::size_t>(i)] = y[i] > 0.5 ? 1 : 0;
  return out;
}

VectorXd probabilities(const FitOutcome& outcome, const MatrixXd& x) {
  if (const auto* fit = std::get_if<VariationalFit>(&outcome)) return predict_probit(*fit, x);
  return predict_probit(std::get<GibbsDraws>(outcome), x);
}

/// Fit every method on one simulated replicate.
std::vector<MetricsReport> run_one_replicate(const StudyConfig& config, long replicate) {
  const std::uint64_t data_seed = derive_seed(config.master_seed, static_cast<std::uint64_t>(replicate));
  MatrixXd x;
  VectorXd y;
  VectorXd b_true;
  MatrixXd x_test;
  VectorXd y_test;
  Rng test_rng(derive_seed(data_seed, 0xdeadbeefULL));
  if (config.kind == StudyKind::lm) {
    LmSimDesign design = config.lm;
    design.seed = data_seed;
    auto data = gen_lm_data(design);
    x_test = gen_design_matrix(config.n_test, design.p, design.ar_rho, test_rng);
    y_test = draw_lm_response(x_test, data.b_true, data.b0_true, data.sigma2, test_rng);
    x = std::move(data.X);
    y = std::move(data.y);
    b_true = std::move(data.b_true);
  } else {
    BinarySimDesign design = config.binary;
    design.seed = data_seed;
    auto data = gen_binary_data(design);
    x_test = gen_design_matrix(config.n_test, design.p, design.ar_rho, test_rng);
    y_test = draw_binary_response(x_test, data.b_true, data.b0_true, design.link, test_rng);
    x = std::move(data.X);
    y = std::move(data.y);
    b_true = std::move(data.b_true);
  }

  std::vector<MetricsReport> out;
  out.reserve(config.methods.size());
  for (std::size_t m = 0; m < config.methods.size(); ++m) {
    const MethodSpec& method = config.methods[m];
    FitOptions options = method.options;
    options.seed = derive_seed(data_seed, m + 1);

    const auto start = std::chrono::steady_clock::now();
    const FitOutcome outcome = fit_model(method.model, x, y, options);
    MetricsReport report;
    report.wall_clock_s = seconds_since(start);
    report.method = method.label();
    report.replicate = replicate;
    report.seed = data_seed;

    const VectorXd b_hat = coefficient_estimate(outcome);
    const SummaryTable table = summarize(outcome, config.level);
    VectorXd lower(b_hat.size());
    VectorXd upper(b_hat.size());
    for (Index j = 0; j < b_hat.size(); ++j) {
      lower[j] = table.rows[static_cast<std::size_t>(j + 1)].lower;
      upper[j] = table.rows[static_cast<std::size_t>(j + 1)].upper;
    }
    report.mse = (b_true - b_hat).squaredNorm() / static_cast<double>(b_true.size());
    report.mspe = mspe(x_test, b_true, b_hat);
    report.coverage = coverage(b_true, lower, upper);
    report.rand_index = rand_index(nonzero_pattern(b_true), variable_select(table));
    if (config.kind == StudyKind::binary) {
      const auto labels = binary_labels(y_test);
      if (std::find(labels.begin(), labels.end(), 1) != labels.end()) {
        const VectorXd p = probabilities(outcome, x_test);
        report.auc_pr = auc_pr(labels, std::vector<double>(p.data(), p.data() + p.size()));
      }
    }
    out.push_back(std::move(report));
  }
  return out;
}

}  // namespace

void LmSimDesign::validate() const {
  if (n < 2) throw DomainError("simulation needs n >= 2");
  if (p < 1) throw DomainError("simulation needs p >= 1");
  if (!(zero_frac >= 0.0 && zero_frac < 1.0)) throw DomainError("zero_frac must lie in [0, 1)");
  if (!(snr > 0.0) || !std::isfinite(snr)) throw DomainError("snr must be positive");
  check_ar(ar_rho);
}

void BinarySimDesign::validate() const {
  if (n < 1) throw DomainError("simulation needs n >= 1");
  if (p < 1) throw DomainError("simulation needs p >= 1");
  if (n_zero < 0 || n_zero > p) throw DomainError("n_zero must lie in [0, p]");
  check_ar(ar_rho);
  if (b0 && !std::isfinite(*b0)) throw DomainError("intercept override must be finite");
}

MatrixXd gen_design_matrix(Index n, Index p, double ar_rho, Rng& rng) {
  check_ar(ar_rho);
  const double innovation = std::sqrt(1.0 - ar_rho * ar_rho);
  MatrixXd x(n, p);
  for (Index i = 0; i < n; ++i) {
    double prev = sample_normal(rng);
    x(i, 0) = prev;
    for (Index j = 1; j < p; ++j) {
      prev = ar_rho * prev + innovation * sample_normal(rng);
      x(i, j) = prev;
    }
  }
  return x;
}

VectorXd gen_sparse_coefficients(Index p, Index n_zero, Rng& rng) {
  VectorXd b(p);
  for (Index j = 0; j < p; ++j) b[j] = sample_normal(rng);
  if (n_zero > 0) {
    for (Index j : minibatch_indices(p, n_zero, rng)) b[j] = 0.0;
  }
  return b;
}

VectorXd draw_lm_response(const MatrixXd& x, const VectorXd& b, double b0, double sigma2,
                          Rng& rng) {
  VectorXd y = (x * b).array() + b0;
  const double sd = std::sqrt(sigma2);
  for (Index i = 0; i < y.size(); ++i) y[i] += sd * sample_normal(rng);
  return y;
}

VectorXd draw_binary_response(const MatrixXd& x, const VectorXd& b, double b0, BinaryLink link,
                              Rng& rng) {
  const VectorXd z = (x * b).array() + b0;
  VectorXd y(z.size());
  for (Index i = 0; i < z.size(); ++i) {
    const double prob = link == BinaryLink::probit ? special::norm_cdf(z[i])
                                                   : 1.0 / (1.0 + std::exp(-z[i]));
    y[i] = sample_uniform(rng) < prob ? 1.0 : 0.0;
  }
  return y;
}

LmSimData gen_lm_data(const LmSimDesign& design) {
  design.validate();
  Rng rng(design.seed);
  LmSimData out;
  out.X = gen_design_matrix(design.n, design.p, design.ar_rho, rng);
  const auto n_zero = static_cast<Index>(std::floor(design.zero_frac * static_cast<double>(design.p)));
  out.b_true = gen_sparse_coefficients(design.p, n_zero, rng);
  out.b0_true = sample_normal(rng);
  const double signal = sample_variance(out.X * out.b_true);
  if (!(signal > 0.0)) throw DomainError("simulated signal has zero variance");
  out.sigma2 = signal / design.snr;
  out.y = draw_lm_response(out.X, out.b_true, out.b0_true, out.sigma2, rng);
  return out;
}

BinarySimData gen_binary_data(const BinarySimDesign& design) {
  design.validate();
  Rng rng(design.seed);
  BinarySimData out;
  out.X = gen_design_matrix(design.n, design.p, design.ar_rho, rng);
  out.b_true = gen_sparse_coefficients(design.p, design.n_zero, rng);
  const double drawn_b0 = sample_normal(rng);
  out.b0_true = design.b0.value_or(drawn_b0);
  out.y = draw_binary_response(out.X, out.b_true, out.b0_true, design.link, rng);
  return out;
}

double mse(const std::vector<VectorXd>& b_true, const std::vector<VectorXd>& b_hat) {
  if (b_true.empty() || b_true.size() != b_hat.size()) {
    throw DomainError("mse needs matching, non-empty replicate lists");
  }
  double total = 0.0;
  for (std::size_t d = 0; d < b_true.size(); ++d) {
    if (b_true[d].size() != b_hat[d].size() || b_true[d].size() == 0) {
      throw DomainError("mse: coefficient vectors differ in length");
    }
    total += (b_true[d] - b_hat[d]).squaredNorm() / static_cast<double>(b_true[d].size());
  }
  return total / static_cast<double>(b_true.size());
}

double mspe(const MatrixXd& x_test, const VectorXd& b_true, const VectorXd& b_hat) {
  if (x_test.cols() != b_true.size() || b_true.size() != b_hat.size()) {
    throw DomainError("mspe: dimension mismatch");
  }
  const VectorXd signal = x_test * b_true;
  const double denom = signal.norm();
  if (!(denom > 0.0)) throw DomainError("mspe: true signal is zero");
  return (signal - x_test * b_hat).norm() / denom;
}

double coverage(const VectorXd& b_true, const VectorXd& lower, const VectorXd& upper) {
  if (b_true.size() == 0 || lower.size() != b_true.size() || upper.size() != b_true.size()) {
    throw DomainError("coverage: dimension mismatch");
  }
  Index hit = 0;
  for (Index j = 0; j < b_true.size(); ++j) {
    if (lower[j] <= b_true[j] && b_true[j] <= upper[j]) ++hit;
  }
  return static_cast<double>(hit) / static_cast<double>(b_true.size());
}

double rand_index(const std::vector<int>& a, const std::vector<int>& b) {
  if (a.size() != b.size()) throw DomainError("rand_index: vectors differ in length");
  if (a.size() < 2) throw DomainError("rand_index needs at least two elements");
  // Contingency counts of the two binary partitions.
  double cell[2][2] = {{0, 0}, {0, 0}};
  for (std::size_t i = 0; i < a.size(); ++i) cell[a[i] != 0][b[i] != 0] += 1.0;
  auto pairs = [](double k) { return 0.5 * k * (k - 1.0); };
  const double n = static_cast<double>(a.size());
  const double total = pairs(n);
  const double both = pairs(cell[0][0]) + pairs(cell[0][1]) + pairs(cell[1][0]) + pairs(cell[1][1]);
  const double in_a = pairs(cell[0][0] + cell[0][1]) + pairs(cell[1][0] + cell[1][1]);
  const double in_b = pairs(cell[0][0] + cell[1][0]) + pairs(cell[0][1] + cell[1][1]);
  return (total + 2.0 * both - in_a - in_b) / total;
}

double auc_pr(const std::vector<int>& labels, const std::vector<double>& scores) {
  if (labels.size() != scores.size()) throw DomainError("auc_pr: length mismatch");
  const auto positives = static_cast<double>(std::count_if(labels.begin(), labels.end(),
                                                           [](int v) { return v != 0; }));
  if (positives == 0.0) throw DomainError("auc_pr needs at least one positive label");
  for (double s : scores) {
    if (std::isnan(s)) throw DomainError("auc_pr: NaN score");
  }

  std::vector<std::size_t> order(labels.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t l, std::size_t r) { return scores[l] > scores[r]; });

  double tp = 0.0;
  double predicted = 0.0;
  double prev_recall = 0.0;
  double area = 0.0;
  for (std::size_t k = 0; k < order.size();) {
    const double threshold = scores[order[k]];
    for (; k < order.size() && scores[order[k]] == threshold; ++k) {
      predicted += 1.0;
      if (labels[order[k]] != 0) tp += 1.0;
    }
    const double recall = tp / positives;
    area += (recall - prev_recall) * (tp / predicted);
    prev_recall = recall;
  }
  return area;
}

bool interval_excludes_zero(const SummaryRow& row) { return row.lower > 0.0 || row.upper < 0.0; }

std::vector<int> variable_select(const SummaryTable& table, const SelectionRule& rule) {
  std::vector<int> out;
  if (table.rows.empty()) return out;
  out.reserve(table.rows.size() - 1);
  for (std::size_t j = 1; j < table.rows.size(); ++j) out.push_back(rule(table.rows[j]) ? 1 : 0);
  return out;
}

std::vector<int> variable_select(const FitOutcome& outcome, double level, const SelectionRule& rule) {
  return variable_select(summarize(outcome, level), rule);
}

SummaryTable summarize(const FitOutcome& outcome, double level,
                       const std::vector<std::string>& names) {
  if (const auto* fit = std::get_if<VariationalFit>(&outcome)) return summarize_vi(*fit, level, names);
  return summarize_gibbs(std::get<GibbsDraws>(outcome), level, names);
}

std::string MethodSpec::label() const {
  std::string out = model_name(model);
  if (model.algorithm != Algorithm::gibbs) {
    out += '/';
    out += to_string(options.family);
  }
  return out;
}

std::vector<MetricsReport> run_replication(const StudyConfig& config) {
  if (config.replicates < 1) throw DomainError("replicates must be at least 1");
  if (config.methods.empty()) throw DomainError("study needs at least one method");
  if (config.n_test < 1) throw DomainError("n_test must be at least 1");
  if (config.jobs < 1) throw DomainError("jobs must be at least 1");
  const Link expected = config.kind == StudyKind::lm ? Link::normal : Link::probit;
  for (const auto& method : config.methods) {
    if (method.model.link != expected) {
      throw DomainError("method " + method.label() + " does not match the study's response type");
    }
  }
  if (config.kind == StudyKind::lm) {
    config.lm.validate();
  } else {
    config.binary.validate();
  }

  const auto n_rep = static_cast<std::size_t>(config.replicates);
  std::vector<std::vector<MetricsReport>> per_replicate(n_rep);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    for (;;) {
      const std::size_t r = next.fetch_add(1);
      if (r >= n_rep) return;
      try {
        per_replicate[r] = run_one_replicate(config, static_cast<long>(r));
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(n_rep);
        return;
      }
    }
  };

  const auto n_workers = std::min<std::size_t>(static_cast<std::size_t>(config.jobs), n_rep);
  if (n_workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    for (std::size_t w = 0; w < n_workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<MetricsReport> out;
  out.reserve(n_rep * config.methods.size());
  for (auto& batch : per_replicate) {
    for (auto& report : batch) out.push_back(std::move(report));
  }
  return out;
}

std::vector<MetricsReport> aggregate_reports(const std::vector<MetricsReport>& reports) {
  struct Acc {
    MetricsReport sum;
    double count = 0.0;
    double rand_count = 0.0;
    double auc_count = 0.0;
  };
  std::vector<std::string> order;
  std::map<std::string, Acc> acc;
  for (const auto& r : reports) {
    auto [it, inserted] = acc.try_emplace(r.method);
    if (inserted) {
      order.push_back(r.method);
      it->second.sum.method = r.method;
    }
    Acc& a = it->second;
    a.count += 1.0;
    a.sum.mse += r.mse;
    a.sum.mspe += r.mspe;
    a.sum.coverage += r.coverage;
    a.sum.wall_clock_s += r.wall_clock_s;
    if (r.rand_index) {
      a.sum.rand_index = a.sum.rand_index.value_or(0.0) + *r.rand_index;
      a.rand_count += 1.0;
    }
    if (r.auc_pr) {
      a.sum.auc_pr = a.sum.auc_pr.value_or(0.0) + *r.auc_pr;
      a.auc_count += 1.0;
    }
  }
  std::vector<MetricsReport> out;
  for (const auto& name : order) {
    const Acc& a = acc.at(name);
    MetricsReport m = a.sum;
    m.replicate = static_cast<long>(a.count);
    m.mse /= a.count;
    m.mspe /= a.count;
    m.coverage /= a.count;
    m.wall_clock_s /= a.count;
    if (m.rand_index) *m.rand_index /= a.rand_count;
    if (m.auc_pr) *m.auc_pr /= a.auc_count;
    out.push_back(std::move(m));
  }
  return out;
}

std::vector<TimingRow> run_timing(const TimingConfig& config) {
  if (config.values.empty()) throw DomainError("timing grid is empty");
  if (config.methods.empty()) throw DomainError("timing needs at least one method");
  if (config.datasets < 1) throw DomainError("datasets must be at least 1");

  std::vector<TimingRow> out;
  for (std::size_t g = 0; g < config.values.size(); ++g) {
    const Index n = config.axis == TimingConfig::Axis::vary_p ? config.fixed : config.values[g];
    const Index p = config.axis == TimingConfig::Axis::vary_p ? config.values[g] : config.fixed;
    std::vector<TimingRow> rows(config.methods.size());
    for (std::size_t m = 0; m < config.methods.size(); ++m) {
      rows[m].method = config.methods[m].label();
      rows[m].n = n;
      rows[m].p = p;
    }
    for (long d = 0; d < config.datasets; ++d) {
      const std::uint64_t seed =
          derive_seed(config.master_seed, g * 1000003ULL + static_cast<std::uint64_t>(d));
      std::optional<LmSimData> lm_data;
      std::optional<BinarySimData> bin_data;
      for (std::size_t m = 0; m < config.methods.size(); ++m) {
        const MethodSpec& method = config.methods[m];
        const MatrixXd* x;
        const VectorXd* y;
        if (method.model.link == Link::normal) {
          if (!lm_data) lm_data = gen_lm_data({n, p, config.zero_frac, 1.0, 0.5, seed});
          x = &lm_data->X;
          y = &lm_data->y;
        } else {
          if (!bin_data) {
            BinarySimDesign design;
            design.n = n;
            design.p = p;
            design.n_zero = static_cast<Index>(std::floor(config.zero_frac * static_cast<double>(p)));
            design.seed = seed;
            bin_data = gen_binary_data(design);
          }
          x = &bin_data->X;
          y = &bin_data->y;
        }
        FitOptions options = method.options;
        options.seed = derive_seed(seed, m + 1);
        const auto start = std::chrono::steady_clock::now();
        (void)fit_model(method.model, *x, *y, options);
        rows[m].seconds.push_back(seconds_since(start));
      }
    }
    for (auto& row : rows) {
      double total = 0.0;
      for (double s : row.seconds) total += s;
      row.mean_seconds = total / static_cast<double>(row.seconds.size());
      out.push_back(std::move(row));
    }
  }
  return out;
}

}  // namespace shrinkvb
