#include "pcsimple/io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>
#include "pcsimple/errors.hpp"

namespace pcsimple::io {

namespace {

using nlohmann::json;

json vector_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

json set_json(const ActiveSet& s) { return json(s.members()); }

// NaN/inf have no JSON representation; they become null.
json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

template <typename T>
json optional_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

Eigen::VectorXd vector_from(const json& a, const char* what) {
  if (!a.is_array()) throw DataError(std::string("json: '") + what + "' must be an array");
  Eigen::VectorXd v(static_cast<Eigen::Index>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!a[i].is_number()) throw DataError(std::string("json: '") + what + "' must be numeric");
    v(static_cast<Eigen::Index>(i)) = a[i].get<double>();
  }
  return v;
}

json parse(std::string_view text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw DataError(std::string(what) + ": malformed JSON (" + e.what() + ")");
  }
}

template <typename Fn>
auto with_json_errors(const char* what, Fn&& fn) {
  try {
    return fn();
  } catch (const json::exception& e) {
    throw DataError(std::string(what) + ": " + e.what());
  }
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  fields.push_back(cur);
  return fields;
}

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return s.substr(first, last - first + 1);
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_dataset_csv(std::ostream& out, const Dataset& data) {
  const Eigen::Index p = data.X.cols();
  for (Eigen::Index j = 0; j < p; ++j) {
    const auto k = static_cast<std::size_t>(j);
    out << (k < data.names.size() ? data.names[k] : "x" + std::to_string(j + 1)) << ',';
  }
  out << data.response_name << '\n';
  for (Eigen::Index i = 0; i < data.X.rows(); ++i) {
    for (Eigen::Index j = 0; j < p; ++j) out << format_double(data.X(i, j)) << ',';
    out << format_double(data.y(i)) << '\n';
  }
}

Dataset read_dataset_csv(std::istream& in, std::string_view response) {
  std::string line;
  if (!std::getline(in, line)) throw DataError("csv: empty input (header row required)");
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
  std::vector<std::string> header = split_csv_line(line);
  for (auto& h : header) h = trim(h);

  std::ptrdiff_t response_col = -1;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c].empty()) {
      throw DataError("csv: header column " + std::to_string(c + 1) + " has an empty name");
    }
    if (header[c] == response) {
      if (response_col >= 0) throw DataError("csv: response column appears twice");
      response_col = static_cast<std::ptrdiff_t>(c);
    }
  }
  if (response_col < 0) {
    throw DataError("csv: response column '" + std::string(response) + "' not found in header");
  }
  if (header.size() < 2) throw DataError("csv: need at least one covariate column");

  std::vector<std::vector<double>> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const std::vector<std::string> fields = split_csv_line(line);
    if (fields.size() != header.size()) {
      std::ostringstream msg;
      msg << "csv: line " << line_no << " has " << fields.size() << " fields, expected "
          << header.size();
      throw DataError(msg.str());
    }
    std::vector<double> row(fields.size());
    for (std::size_t c = 0; c < fields.size(); ++c) {
      const std::string f = trim(fields[c]);
      char* end = nullptr;
      errno = 0;
      const double v = f.empty() ? NAN : std::strtod(f.c_str(), &end);
      if (f.empty() || end != f.c_str() + f.size() || !std::isfinite(v)) {
        std::ostringstream msg;
        msg << "csv: missing or non-numeric value '" << f << "' at line " << line_no
            << ", column '" << header[c] << "'";
        throw DataError(msg.str());
      }
      row[c] = v;
    }
    rows.push_back(std::move(row));
  }

  Dataset data;
  data.response_name = std::string(response);
  const auto n = static_cast<Eigen::Index>(rows.size());
  const auto p = static_cast<Eigen::Index>(header.size() - 1);
  data.X.resize(n, p);
  data.y.resize(n);
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (static_cast<std::ptrdiff_t>(c) != response_col) data.names.push_back(header[c]);
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::Index col = 0;
    for (std::size_t c = 0; c < header.size(); ++c) {
      const double v = rows[static_cast<std::size_t>(i)][c];
      if (static_cast<std::ptrdiff_t>(c) == response_col) {
        data.y(i) = v;
      } else {
        data.X(i, col++) = v;
      }
    }
  }
  return data;
}

std::string truth_to_json(const TruthRecord& truth) {
  json j;
  j["p"] = truth.p;
  j["peff"] = truth.peff;
  j["beta"] = vector_json(truth.beta);
  j["support"] = truth.support;
  j["sigma_kind"] = truth.sigma_kind;
  j["rho"] = truth.rho;
  j["sigma2"] = truth.sigma2;
  j["delta"] = truth.delta;
  j["seed"] = truth.seed;
  if (!truth.fixture.empty()) j["fixture"] = truth.fixture;
  return j.dump(2) + "\n";
}

TruthRecord truth_from_json(std::string_view text) {
  const json j = parse(text, "truth");
  return with_json_errors("truth", [&] {
    TruthRecord t;
    t.p = j.at("p").get<int>();
    t.peff = j.at("peff").get<int>();
    t.beta = vector_from(j.at("beta"), "beta");
    t.support = j.at("support").get<std::vector<int>>();
    t.sigma_kind = j.at("sigma_kind").get<std::string>();
    t.rho = j.at("rho").get<double>();
    t.sigma2 = j.at("sigma2").get<double>();
    t.delta = j.at("delta").get<double>();
    t.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("fixture")) t.fixture = j.at("fixture").get<std::string>();
    if (t.beta.size() != t.p) throw DataError("truth: beta length does not match p");
    return t;
  });
}

std::string model_to_json(const ModelSpec& model) {
  json j;
  j["p"] = model.p();
  j["mu_x"] = vector_json(model.mu_x);
  json sigma = json::array();
  for (Eigen::Index r = 0; r < model.sigma_x.rows(); ++r) {
    sigma.push_back(vector_json(model.sigma_x.row(r).transpose()));
  }
  j["sigma_x"] = sigma;
  j["beta"] = vector_json(model.beta);
  j["delta"] = model.delta;
  j["sigma2"] = model.sigma2;
  return j.dump(2) + "\n";
}

ModelSpec model_from_json(std::string_view text) {
  const json j = parse(text, "model");
  return with_json_errors("model", [&] {
    ModelSpec m;
    m.beta = vector_from(j.at("beta"), "beta");
    const Eigen::Index p = m.beta.size();
    m.mu_x = j.contains("mu_x") ? vector_from(j.at("mu_x"), "mu_x") : Eigen::VectorXd::Zero(p);
    const json& sigma = j.at("sigma_x");
    if (!sigma.is_array() || static_cast<Eigen::Index>(sigma.size()) != p) {
      throw DataError("model: sigma_x must be a p x p array");
    }
    m.sigma_x.resize(p, p);
    for (Eigen::Index r = 0; r < p; ++r) {
      const Eigen::VectorXd row = vector_from(sigma[static_cast<std::size_t>(r)], "sigma_x");
      if (row.size() != p) throw DataError("model: sigma_x must be a p x p array");
      m.sigma_x.row(r) = row.transpose();
    }
    m.delta = j.value("delta", 0.0);
    m.sigma2 = j.value("sigma2", 1.0);
    if (j.contains("p") && j.at("p").get<int>() != p) {
      throw DataError("model: p does not match beta length");
    }
    return m;
  });
}

std::string selection_to_json(const SelectionResult& result,
                              const std::vector<std::string>& names, std::string_view mode) {
  json j;
  j["mode"] = std::string(mode);
  j["alpha"] = result.alpha;
  j["n"] = result.n;
  j["p"] = result.p;
  j["max_order"] = optional_json(result.max_order);
  j["m_reach"] = result.m_reach;
  j["selected"] = set_json(result.selected);
  json selected_names = json::array();
  for (int k : result.selected) {
    const auto idx = static_cast<std::size_t>(k - 1);
    selected_names.push_back(idx < names.size() ? names[idx] : "x" + std::to_string(k));
  }
  j["selected_names"] = selected_names;
  json sizes = json::array();
  json stages = json::array();
  for (const auto& s : result.stages) {
    sizes.push_back(s.size());
    stages.push_back(set_json(s));
  }
  j["stage_sizes"] = sizes;
  j["stages"] = stages;
  return j.dump(2) + "\n";
}

ActiveSet selected_from_json(std::string_view text) {
  const json j = parse(text, "result");
  return with_json_errors("result",
                          [&] { return ActiveSet(j.at("selected").get<std::vector<int>>()); });
}

std::string trace_to_json(const SelectionResult& result) {
  json a = json::array();
  for (const auto& t : result.trace) {
    json e;
    e["stage"] = t.stage;
    e["j"] = t.j;
    e["S"] = t.conditioning;
    e["rho_hat"] = number_or_null(t.rho_hat);
    e["statistic"] = number_or_null(t.statistic);
    e["decision"] = std::string(to_string(t.decision));
    a.push_back(std::move(e));
  }
  return a.dump(2) + "\n";
}

std::string metrics_to_json(const Metrics& metrics) {
  json j;
  j["tpr"] = optional_json(metrics.rates.tpr);
  j["fpr"] = optional_json(metrics.rates.fpr);
  j["mse_coeff"] = metrics.mse ? json(metrics.mse->mse_coeff) : json(nullptr);
  j["mse_pred"] = metrics.mse ? json(metrics.mse->mse_pred) : json(nullptr);
  return j.dump(2) + "\n";
}

void write_roc_csv(std::ostream& out, const RocTable& table) {
  out << "alpha,mean_tpr,mean_fpr,sd_tpr,sd_fpr,replicates\n";
  for (const auto& r : table.rows) {
    out << format_double(r.alpha) << ',' << format_double(r.mean_tpr) << ','
        << format_double(r.mean_fpr) << ',' << format_double(r.sd_tpr) << ','
        << format_double(r.sd_fpr) << ',' << r.replicates << '\n';
  }
}

std::string suite_report_to_json(const SuiteReport& report) {
  json j;
  j["models"] = report.checks.size();
  j["failures"] = report.failures();
  json checks = json::array();
  for (const auto& c : report.checks) {
    json e;
    e["index"] = c.index;
    e["p"] = c.p;
    e["peff"] = c.peff;
    e["design"] = std::string(to_string(c.kind));
    e["rho"] = c.rho;
    e["support"] = set_json(c.support);
    e["population_selected"] = set_json(c.population_selected);
    e["screening_set"] = set_json(c.screening_set);
    e["corollary1"] = c.corollary1;
    e["partially_faithful"] = c.faithful;
    e["passed"] = c.passed();
    checks.push_back(std::move(e));
  }
  j["checks"] = checks;
  return j.dump(2) + "\n";
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot open '" + path + "' for writing");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw DataError("failed writing '" + path + "'");
}

}  // namespace pcsimple::io
