#ifndef DNBCURE_IO_HPP
#define DNBCURE_IO_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dnbcure/data.hpp"
#include "dnbcure/inference.hpp"
#include "dnbcure/optimizer.hpp"
#include "dnbcure/params.hpp"
#include "dnbcure/simulation.hpp"

namespace dnbcure {

// All files are UTF-8 with LF line endings; CSV uses '.' as the decimal
// separator and "%.17g" formatting so numeric round trips are exact.

/// Raw CSV table: header names plus string cells, rectangular.
struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  int column_index(const std::string& name) const;  // -1 when absent
};

CsvTable read_csv(const std::string& path);           // throws IoError/DataError
void write_csv(const std::string& path, const CsvTable& table);

/// One covariate slot in a design: a numeric column used as-is, or a
/// categorical column expanded to one indicator per distinct level
/// (levels sorted lexicographically; names "col=level").
struct DesignColumn {
  std::string column;
  bool categorical = false;
};

/// Parse "thick,ulc:cat" style lists from the CLI.
std::vector<DesignColumn> parse_design(const std::string& spec);

/// Assemble a Dataset from a parsed CSV. Requires `time` (> 0) and `status`
/// (0/1) columns; the p design receives an implicit leading intercept, the
/// eta design does not. Reported errors carry 1-based data row numbers.
struct BuiltDesign {
  Dataset data;
  std::vector<std::string> p_names;    // "intercept", then covariate names
  std::vector<std::string> eta_names;  // covariate / indicator names
};

BuiltDesign build_dataset(const CsvTable& table,
                          const std::vector<DesignColumn>& p_design,
                          const std::vector<DesignColumn>& eta_design);

/// Subject rows as produced by the simulator: time,status,ulcer,thickness.
void write_sim_csv(const std::string& path, const Dataset& data);

// ---- JSON documents -------------------------------------------------------

std::string param_vector_to_json(const ParamVector& theta);
ParamVector param_vector_from_json(const std::string& text);

SimSetting sim_setting_from_json_file(const std::string& path);
std::string sim_setting_to_json(const SimSetting& setting);

struct FitReport {
  ParamVector theta_hat;
  double loglik = 0.0;
  int iterations = 0;
  bool converged = false;
  std::string variant;
  int n = 0;
  std::vector<std::string> p_names;
  std::vector<std::string> eta_names;
  std::vector<double> cure_rates;  // per subject
  double mean_cure_rate = 0.0;
  std::optional<Eigen::VectorXd> truth_delta;  // theta_hat - truths, when given
};

std::string fit_report_to_json(const FitReport& report);
ParamVector theta_from_fit_report_file(const std::string& path);

std::string bootstrap_result_to_json(const BootstrapResult& result,
                                     const std::vector<std::string>& names);

/// Monte Carlo study table: parameter,variant,bias,rmse,converged_frac,mean_iters.
CsvTable mc_report_to_table(const MCReport& report);

// ---- Run manifest ---------------------------------------------------------

/// Written alongside every CLI output ("<output>.manifest.json"): command,
/// tool version, seed, resolved configuration, input/output paths and
/// fingerprints. Re-running the recorded command line reproduces the outputs
/// byte for byte; wall_time_s is the only field expected to differ.
struct RunManifest {
  std::string command;
  std::string version;
  std::uint64_t seed = 0;
  std::map<std::string, std::string> inputs;
  std::map<std::string, std::string> outputs;
  std::map<std::string, std::string> config;
  std::vector<std::uint64_t> dataset_fingerprints;
  double wall_time_s = 0.0;
};

std::string manifest_to_json(const RunManifest& manifest);
RunManifest manifest_from_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

/// "%.17g" rendering used across all writers.
std::string format_double(double v);

}  // namespace dnbcure

#endif
