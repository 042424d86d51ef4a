#include "dnbcure/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "dnbcure/errors.hpp"
#include "dnbcure/model.hpp"

namespace dnbcure {

using nlohmann::json;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open for reading: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << text;
  if (!out) throw IoError("write failed: " + path);
}

int CsvTable::column_index(const std::string& name) const {
  for (std::size_t j = 0; j < columns.size(); ++j)
    if (columns[j] == name) return static_cast<int>(j);
  return -1;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cell);
      cell.clear();
    } else if (c != '\r') {
      cell.push_back(c);
    }
  }
  out.push_back(cell);
  return out;
}

double parse_number(const std::string& cell, const char* what, int row) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(cell, &pos);
    if (pos != cell.size()) throw std::invalid_argument(cell);
    return v;
  } catch (const std::exception&) {
    throw DataError(std::string("non-numeric ") + what + " '" + cell +
                    "' at data row " + std::to_string(row));
  }
}

}  // namespace

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open for reading: " + path);
  CsvTable table;
  std::string line;
  if (!std::getline(in, line)) throw DataError("empty CSV: " + path);
  table.columns = split_csv_line(line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto cells = split_csv_line(line);
    if (cells.size() != table.columns.size())
      throw DataError("ragged CSV row " +
                      std::to_string(table.rows.size() + 1) + " in " + path);
    table.rows.push_back(std::move(cells));
  }
  return table;
}

void write_csv(const std::string& path, const CsvTable& table) {
  std::ostringstream out;
  for (std::size_t j = 0; j < table.columns.size(); ++j)
    out << (j ? "," : "") << table.columns[j];
  out << "\n";
  for (const auto& row : table.rows) {
    for (std::size_t j = 0; j < row.size(); ++j) out << (j ? "," : "") << row[j];
    out << "\n";
  }
  write_text_file(path, out.str());
}

std::vector<DesignColumn> parse_design(const std::string& spec) {
  std::vector<DesignColumn> out;
  std::string token;
  std::istringstream ss(spec);
  while (std::getline(ss, token, ',')) {
    if (token.empty()) continue;
    DesignColumn col;
    const auto colon = token.rfind(":cat");
    if (colon != std::string::npos && colon + 4 == token.size()) {
      col.column = token.substr(0, colon);
      col.categorical = true;
    } else {
      col.column = token;
    }
    if (col.column.empty()) throw UsageError("empty covariate name in design");
    out.push_back(std::move(col));
  }
  if (out.empty()) throw UsageError("empty design specification");
  return out;
}

namespace {

struct ExpandedDesign {
  // One entry per output column: source column index, the level it
  // indicates (empty means numeric pass-through), display name.
  struct Col {
    int source;
    std::string level;
    std::string name;
    bool categorical;
  };
  std::vector<Col> cols;
};

ExpandedDesign expand(const CsvTable& table,
                      const std::vector<DesignColumn>& design) {
  ExpandedDesign out;
  for (const DesignColumn& d : design) {
    const int idx = table.column_index(d.column);
    if (idx < 0) throw DataError("missing covariate column '" + d.column + "'");
    if (!d.categorical) {
      out.cols.push_back({idx, "", d.column, false});
      continue;
    }
    std::set<std::string> levels;
    for (const auto& row : table.rows) levels.insert(row[idx]);
    if (levels.size() < 2)
      throw DataError("categorical column '" + d.column +
                      "' has fewer than two levels");
    for (const std::string& lv : levels)
      out.cols.push_back({idx, lv, d.column + "=" + lv, true});
  }
  return out;
}

}  // namespace

BuiltDesign build_dataset(const CsvTable& table,
                          const std::vector<DesignColumn>& p_design,
                          const std::vector<DesignColumn>& eta_design) {
  const int time_idx = table.column_index("time");
  const int status_idx = table.column_index("status");
  if (time_idx < 0) throw DataError("missing required column 'time'");
  if (status_idx < 0) throw DataError("missing required column 'status'");
  if (table.rows.empty()) throw DataError("dataset has no rows");

  const ExpandedDesign p_cols = expand(table, p_design);
  const ExpandedDesign eta_cols = expand(table, eta_design);

  BuiltDesign built;
  built.p_names.push_back("intercept");
  for (const auto& c : p_cols.cols) built.p_names.push_back(c.name);
  for (const auto& c : eta_cols.cols) built.eta_names.push_back(c.name);

  built.data.reserve(table.rows.size());
  int row_no = 0;
  for (const auto& row : table.rows) {
    ++row_no;
    Subject s;
    s.y = parse_number(row[time_idx], "time", row_no);
    if (!(s.y > 0.0))
      throw DataError("nonpositive time at data row " + std::to_string(row_no));
    const double st = parse_number(row[status_idx], "status", row_no);
    if (st != 0.0 && st != 1.0)
      throw DataError("status must be 0 or 1 at data row " +
                      std::to_string(row_no));
    s.delta = static_cast<int>(st);

    s.x_p.resize(1 + p_cols.cols.size());
    s.x_p[0] = 1.0;
    for (std::size_t j = 0; j < p_cols.cols.size(); ++j) {
      const auto& c = p_cols.cols[j];
      s.x_p[1 + j] = c.categorical
                         ? (row[c.source] == c.level ? 1.0 : 0.0)
                         : parse_number(row[c.source], "covariate", row_no);
    }
    s.x_eta.resize(eta_cols.cols.size());
    for (std::size_t j = 0; j < eta_cols.cols.size(); ++j) {
      const auto& c = eta_cols.cols[j];
      s.x_eta[j] = c.categorical
                       ? (row[c.source] == c.level ? 1.0 : 0.0)
                       : parse_number(row[c.source], "covariate", row_no);
    }
    built.data.add(std::move(s));
  }
  return built;
}

void write_sim_csv(const std::string& path, const Dataset& data) {
  CsvTable t;
  t.columns = {"time", "status", "ulcer", "thickness"};
  t.rows.reserve(data.n());
  for (int i = 0; i < data.n(); ++i) {
    const Subject& s = data[i];
    t.rows.push_back({format_double(s.y), std::to_string(s.delta),
                      format_double(s.x_eta[0]), format_double(s.x_p[1])});
  }
  write_csv(path, t);
}

// ---- JSON -------------------------------------------------------------

namespace {

json param_vector_to_json_obj(const ParamVector& theta) {
  json j;
  j["phi"] = theta.phi();
  j["beta1"] = std::vector<double>(theta.beta1().begin(), theta.beta1().end());
  j["beta2"] = std::vector<double>(theta.beta2().begin(), theta.beta2().end());
  j["gamma1"] = theta.gamma1();
  j["gamma2"] = theta.gamma2();
  return j;
}

ParamVector param_vector_from_json_obj(const json& j) {
  const auto b1 = j.at("beta1").get<std::vector<double>>();
  const auto b2 = j.at("beta2").get<std::vector<double>>();
  Eigen::VectorXd beta1 = Eigen::Map<const Eigen::VectorXd>(b1.data(), b1.size());
  Eigen::VectorXd beta2 = Eigen::Map<const Eigen::VectorXd>(b2.data(), b2.size());
  return ParamVector(j.at("phi").get<double>(), beta1, beta2,
                     j.at("gamma1").get<double>(), j.at("gamma2").get<double>());
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace

std::string param_vector_to_json(const ParamVector& theta) {
  return dump(param_vector_to_json_obj(theta));
}

ParamVector param_vector_from_json(const std::string& text) {
  try {
    return param_vector_from_json_obj(json::parse(text));
  } catch (const json::exception& e) {
    throw DataError(std::string("bad parameter JSON: ") + e.what());
  }
}

SimSetting sim_setting_from_json_file(const std::string& path) {
  json j;
  try {
    j = json::parse(read_text_file(path));
  } catch (const json::exception& e) {
    throw ConfigError("bad setting file " + path + ": " + e.what());
  }
  SimSetting s;
  try {
    if (j.contains("n")) s.n = j["n"].get<int>();
    if (j.contains("phi")) s.phi_true = j["phi"].get<double>();
    if (j.contains("gamma1")) s.gamma1_true = j["gamma1"].get<double>();
    if (j.contains("gamma2")) s.gamma2_true = j["gamma2"].get<double>();
    if (j.contains("beta2")) s.beta2_true = j["beta2"].get<double>();
    if (j.contains("p_low")) s.p_low = j["p_low"].get<double>();
    if (j.contains("p_high")) s.p_high = j["p_high"].get<double>();
    if (j.contains("ulcer_prob")) s.ulcer_prob = j["ulcer_prob"].get<double>();
    if (j.contains("thick_ulcer_mean"))
      s.thick_ulcer_mean = j["thick_ulcer_mean"].get<double>();
    if (j.contains("thick_ulcer_var"))
      s.thick_ulcer_var = j["thick_ulcer_var"].get<double>();
    if (j.contains("thick_noulcer_mean"))
      s.thick_noulcer_mean = j["thick_noulcer_mean"].get<double>();
    if (j.contains("censor_rate")) s.censor_rate = j["censor_rate"].get<double>();
    if (j.contains("seed")) s.seed = j["seed"].get<std::uint64_t>();
  } catch (const json::exception& e) {
    throw ConfigError("bad setting file " + path + ": " + e.what());
  }
  s.validate();
  return s;
}

std::string sim_setting_to_json(const SimSetting& s) {
  json j;
  j["n"] = s.n;
  j["phi"] = s.phi_true;
  j["gamma1"] = s.gamma1_true;
  j["gamma2"] = s.gamma2_true;
  j["beta2"] = s.beta2_true;
  j["p_low"] = s.p_low;
  j["p_high"] = s.p_high;
  j["ulcer_prob"] = s.ulcer_prob;
  j["thick_ulcer_mean"] = s.thick_ulcer_mean;
  j["thick_ulcer_var"] = s.thick_ulcer_var;
  j["thick_noulcer_mean"] = s.thick_noulcer_mean;
  j["censor_rate"] = s.censor_rate;
  j["seed"] = s.seed;
  return dump(j);
}

std::string fit_report_to_json(const FitReport& r) {
  json j;
  j["theta_hat"] = param_vector_to_json_obj(r.theta_hat);
  j["loglik"] = r.loglik;
  j["iterations"] = r.iterations;
  j["converged"] = r.converged;
  j["variant"] = r.variant;
  j["n"] = r.n;
  j["p_covariates"] = r.p_names;
  j["eta_covariates"] = r.eta_names;
  j["cure_rate"] = {{"per_subject", r.cure_rates},
                    {"mean", r.mean_cure_rate}};
  if (r.truth_delta) {
    j["truth_delta"] = std::vector<double>(r.truth_delta->begin(),
                                           r.truth_delta->end());
  }
  return dump(j);
}

ParamVector theta_from_fit_report_file(const std::string& path) {
  try {
    const json j = json::parse(read_text_file(path));
    return param_vector_from_json_obj(j.at("theta_hat"));
  } catch (const json::exception& e) {
    throw DataError("bad fit report " + path + ": " + e.what());
  }
}

std::string bootstrap_result_to_json(const BootstrapResult& r,
                                     const std::vector<std::string>& names) {
  json j;
  json se = json::object();
  for (std::size_t k = 0; k < names.size(); ++k)
    se[names[k]] = r.se[static_cast<Eigen::Index>(k)];
  j["se"] = se;
  j["se_flat"] = std::vector<double>(r.se.begin(), r.se.end());
  j["parameters"] = names;
  j["B"] = r.B;
  j["failed_count"] = r.failed_count;
  j["high_failure_warning"] = r.high_failure_warning;
  json est = json::array();
  for (const auto& e : r.estimates)
    est.push_back(std::vector<double>(e.begin(), e.end()));
  j["estimates"] = est;
  return dump(j);
}

CsvTable mc_report_to_table(const MCReport& report) {
  CsvTable t;
  t.columns = {"parameter", "variant", "bias", "rmse", "converged_frac",
               "mean_iters"};
  for (std::size_t v = 0; v < report.variants.size(); ++v) {
    for (std::size_t p = 0; p < report.param_names.size(); ++p) {
      t.rows.push_back({report.param_names[p],
                        to_string(report.variants[v]),
                        format_double(report.bias[v][static_cast<Eigen::Index>(p)]),
                        format_double(report.rmse[v][static_cast<Eigen::Index>(p)]),
                        format_double(report.converged_fraction(static_cast<int>(v))),
                        format_double(report.mean_iterations(static_cast<int>(v)))});
    }
  }
  return t;
}

std::string manifest_to_json(const RunManifest& m) {
  json j;
  j["command"] = m.command;
  j["version"] = m.version;
  j["seed"] = m.seed;
  j["inputs"] = m.inputs;
  j["outputs"] = m.outputs;
  j["config"] = m.config;
  if (!m.dataset_fingerprints.empty()) {
    std::vector<std::string> hex;
    hex.reserve(m.dataset_fingerprints.size());
    for (std::uint64_t h : m.dataset_fingerprints) {
      char buf[20];
      std::snprintf(buf, sizeof(buf), "%016llx",
                    static_cast<unsigned long long>(h));
      hex.emplace_back(buf);
    }
    j["dataset_fingerprints"] = hex;
  }
  j["wall_time_s"] = m.wall_time_s;
  return dump(j);
}

RunManifest manifest_from_json_file(const std::string& path) {
  json j;
  try {
    j = json::parse(read_text_file(path));
  } catch (const json::exception& e) {
    throw DataError("bad manifest " + path + ": " + e.what());
  }
  RunManifest m;
  try {
    m.command = j.at("command").get<std::string>();
    m.version = j.at("version").get<std::string>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.inputs = j.value("inputs", std::map<std::string, std::string>{});
    m.outputs = j.value("outputs", std::map<std::string, std::string>{});
    m.config = j.value("config", std::map<std::string, std::string>{});
    m.wall_time_s = j.value("wall_time_s", 0.0);
    if (j.contains("dataset_fingerprints")) {
      for (const auto& h : j["dataset_fingerprints"])
        m.dataset_fingerprints.push_back(
            std::stoull(h.get<std::string>(), nullptr, 16));
    }
  } catch (const json::exception& e) {
    throw DataError("bad manifest " + path + ": " + e.what());
  }
  return m;
}

}  // namespace dnbcure
