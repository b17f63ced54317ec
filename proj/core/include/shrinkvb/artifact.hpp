#pragma once
// Persistence: JSON fit artifacts, CSV data tables, and study/timing
// configuration and result files.

#include "shrinkvb/dispatch.hpp"
#include "shrinkvb/posterior.hpp"
#include "shrinkvb/simbench.hpp"
#include "shrinkvb/types.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace shrinkvb {

inline constexpr int kSchemaVersion = 1;

struct ArtifactMeta {
  int schema_version = kSchemaVersion;
  std::string tool_version;
  std::string created_at;  // excluded from the determinism contract
  std::uint64_t seed = 0;
  std::string response;
  std::vector<std::string> coef_names;
  FitOptions options;
};

struct FitArtifact {
  ModelSpec model;
  FitOutcome fit;
  ArtifactMeta meta;
};

/// Numbers are written in shortest round-trip form, so parsing the output
/// reproduces every double bit for bit.
std::string artifact_to_json(const FitArtifact& artifact, int indent = 2);
FitArtifact artifact_from_json(const std::string& text);

void save_artifact(const FitArtifact& artifact, const std::filesystem::path& path);
FitArtifact load_artifact(const std::filesystem::path& path);

/// Current UTC time as an ISO-8601 string.
std::string utc_timestamp();

// ---- CSV -------------------------------------------------------------------

struct CsvTable {
  std::vector<std::string> header;
  MatrixXd values;  // rows x header.size()
};

/// Header row required; every cell must parse as a finite number. Quoted
/// fields are accepted. Throws IoError on unreadable or malformed input.
CsvTable read_csv(std::istream& in);
CsvTable read_csv(const std::filesystem::path& path);

struct DesignSplit {
  MatrixXd X;
  VectorXd y;
  std::vector<std::string> predictors;
};

/// Response column by name; every other column is a predictor.
DesignSplit split_response(const CsvTable& table, const std::string& response);

/// Predictor matrix for new data. A column named `response` is dropped if
/// present; the rest must match `coef_names` exactly.
MatrixXd predictor_matrix(const CsvTable& table, const std::vector<std::string>& coef_names,
                          const std::string& response);

void write_predictions_csv(std::ostream& out, const PredictionSet& predictions);
void write_probabilities_csv(std::ostream& out, const VectorXd& probabilities);
void write_summary_csv(std::ostream& out, const SummaryTable& table);

// ---- studies ---------------------------------------------------------------

/// Study description, e.g.
///   {"kind": "lm", "replicates": 50, "seed": 1,
///    "design": {"n": 500, "p": 20, "zero_frac": 0.8},
///    "methods": [{"model": "lm_ridge_cavi", "family": "correlated"}]}
StudyConfig study_from_json(const std::string& text);

/// {"axis": "p", "fixed": 1000, "values": [100, 200], "methods": [...]}
TimingConfig timing_from_json(const std::string& text);

std::string reports_to_json(const std::vector<MetricsReport>& reports,
                            const std::vector<MetricsReport>& aggregate,
                            std::uint64_t master_seed);
void write_reports_csv(std::ostream& out, const std::vector<MetricsReport>& reports);

std::string timing_to_json(const std::vector<TimingRow>& rows,
                           const std::map<std::string, std::string>& environment);
void write_timing_csv(std::ostream& out, const std::vector<TimingRow>& rows);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace shrinkvb
