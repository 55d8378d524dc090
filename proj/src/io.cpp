#include "eigendetect/io.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace eigendetect::io {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& what) {
  throw std::runtime_error(what);
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open " + path.string());
  return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) fail("cannot write " + path.string());
  return out;
}

double parse_double(const std::string& token, const std::string& context) {
  try {
    std::size_t used = 0;
    const double value = std::stod(token, &used);
    while (used < token.size() && std::isspace(static_cast<unsigned char>(
                                      token[used]))) {
      ++used;
    }
    if (used != token.size()) fail("trailing characters in " + context);
    return value;
  } catch (const std::runtime_error&) {
    throw;
  } catch (const std::exception&) {
    fail("expected a number in " + context + ", got '" + token + "'");
  }
}

std::vector<std::string> split_csv_row(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream row(line);
  std::string cell;
  while (std::getline(row, cell, ',')) cells.push_back(cell);
  return cells;
}

bool blank(const std::string& line) {
  return line.find_first_not_of(" \t\r\n") == std::string::npos;
}

std::string fmt(const char* spec, double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, value);
  return buf;
}

std::string format_probability(std::int64_t count, int trials) {
  return fmt("%.12g", static_cast<double>(count) / trials);
}

Field field_from_name(const std::string& name) {
  if (name == "real") return Field::real;
  if (name == "complex") return Field::cplx;
  fail("field must be \"real\" or \"complex\", got \"" + name + "\"");
}

std::string field_name(Field f) {
  return f == Field::real ? "real" : "complex";
}

}  // namespace

std::string format_full(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  return fmt("%.17g", value);
}

std::vector<double> read_value_list(const std::filesystem::path& path) {
  if (path.extension() == ".json") {
    const json j = json::parse(open_input(path), nullptr, true, true);
    if (!j.is_array()) fail(path.string() + ": expected a JSON array");
    std::vector<double> values;
    values.reserve(j.size());
    for (const auto& v : j) {
      if (!v.is_number()) fail(path.string() + ": non-numeric array entry");
      values.push_back(v.get<double>());
    }
    return values;
  }
  auto in = open_input(path);
  std::vector<double> values;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (blank(line)) continue;
    values.push_back(parse_double(
        line, path.string() + ":" + std::to_string(line_no)));
  }
  if (values.empty()) fail(path.string() + ": no values found");
  return values;
}

void write_value_list(const std::filesystem::path& path,
                      std::span<const double> values) {
  auto out = open_output(path);
  for (double v : values) out << format_full(v) << '\n';
}

SnapshotMatrix read_snapshot_csv(const std::filesystem::path& path,
                                 bool complex_data) {
  auto in = open_input(path);
  std::vector<std::vector<double>> rows;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (blank(line)) continue;
    const auto cells = split_csv_row(line);
    std::vector<double> row;
    row.reserve(cells.size());
    for (std::size_t c = 0; c < cells.size(); ++c) {
      row.push_back(parse_double(cells[c], path.string() + ":" +
                                               std::to_string(line_no)));
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      fail(path.string() + ": ragged rows (line " + std::to_string(line_no) +
           ")");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) fail(path.string() + ": empty snapshot file");

  const auto n = static_cast<Eigen::Index>(rows.size());
  const auto cols = static_cast<Eigen::Index>(rows.front().size());
  if (!complex_data) {
    Eigen::MatrixXd x(n, cols);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < cols; ++j) x(i, j) = rows[i][j];
    }
    return {std::move(x)};
  }
  if (cols % 2 != 0) {
    fail(path.string() +
         ": complex snapshots need an even column count (re, im pairs)");
  }
  Eigen::MatrixXcd x(n, cols / 2);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < cols / 2; ++j) {
      x(i, j) = {rows[i][2 * j], rows[i][2 * j + 1]};
    }
  }
  return {std::move(x)};
}

void write_snapshot_csv(const std::filesystem::path& path,
                        const SnapshotMatrix& x) {
  auto out = open_output(path);
  std::visit(
      [&](const auto& mat) {
        using Scalar = typename std::decay_t<decltype(mat)>::Scalar;
        for (Eigen::Index i = 0; i < mat.rows(); ++i) {
          for (Eigen::Index j = 0; j < mat.cols(); ++j) {
            if (j > 0) out << ',';
            if constexpr (std::is_same_v<Scalar, double>) {
              out << format_full(mat(i, j));
            } else {
              out << format_full(mat(i, j).real()) << ','
                  << format_full(mat(i, j).imag());
            }
          }
          out << '\n';
        }
      },
      x.data);
}

nlohmann::json experiment_config_to_json(const ExperimentConfig& config) {
  json grid = json::array();
  for (const auto& cell : config.grid) {
    grid.push_back({{"n", cell.n}, {"m", cell.m}});
  }
  json methods = json::array();
  for (Method m : config.methods) methods.push_back(method_name(m));
  return {{"model",
           {{"signal_eigs", config.signal_eigs},
            {"noise_var", config.noise_var},
            {"field", field_name(config.field)}}},
          {"grid", grid},
          {"trials", config.trials},
          {"methods", methods},
          {"seed", config.seed},
          {"rotate_eigenvectors", config.rotate_eigenvectors}};
}

ExperimentConfig experiment_config_from_json(const json& j) {
  ExperimentConfig config;
  try {
    const auto& model = j.at("model");
    config.signal_eigs =
        model.value("signal_eigs", std::vector<double>{});
    config.noise_var = model.value("noise_var", 1.0);
    config.field = field_from_name(model.value("field", "complex"));
    for (const auto& cell : j.at("grid")) {
      config.grid.push_back({cell.at("n").get<int>(), cell.at("m").get<int>()});
    }
    config.trials = j.at("trials").get<int>();
    for (const auto& name : j.at("methods")) {
      config.methods.push_back(method_from_name(name.get<std::string>()));
    }
    if (j.contains("seed")) config.seed = j.at("seed").get<std::uint64_t>();
    config.rotate_eigenvectors = j.value("rotate_eigenvectors", true);
  } catch (const json::exception& e) {
    fail(std::string("experiment config: ") + e.what());
  }
  config.validate();
  return config;
}

ExperimentConfig read_experiment_config(const std::filesystem::path& path) {
  json j;
  try {
    j = json::parse(open_input(path), nullptr, true, true);
  } catch (const json::exception& e) {
    fail(path.string() + ": " + e.what());
  }
  return experiment_config_from_json(j);
}

std::string report_csv_string(const ExperimentReport& report) {
  std::ostringstream out;
  out << "n,m,method";
  for (int j = 0; j <= report.k_max; ++j) out << ",p_khat_" << j;
  out << ",p_overflow,p_error,k_eff,z_sep,trials,seed\n";
  for (const auto& row : report.rows) {
    out << row.n << ',' << row.m << ',' << method_name(row.method);
    for (const auto count : row.k_counts) {
      out << ',' << format_probability(count, row.trials);
    }
    out << ',' << format_probability(row.overflow, row.trials);
    out << ',' << format_probability(row.errors, row.trials);
    out << ',' << row.k_eff << ',';
    if (row.z_sep) out << fmt("%.12g", *row.z_sep);
    out << ',' << row.trials << ',' << row.seed << '\n';
  }
  return out.str();
}

void write_report_csv(const std::filesystem::path& path,
                      const ExperimentReport& report) {
  open_output(path) << report_csv_string(report);
}

nlohmann::json report_sidecar_json(const ExperimentReport& report) {
  json rows = json::array();
  for (const auto& row : report.rows) {
    json r = {{"n", row.n},
              {"m", row.m},
              {"method", method_name(row.method)},
              {"k_counts", row.k_counts},
              {"overflow", row.overflow},
              {"errors", row.errors},
              {"k_eff", row.k_eff},
              {"z_sep", nullptr},
              {"trials", row.trials},
              {"seed", row.seed}};
    if (row.z_sep) r["z_sep"] = *row.z_sep;
    rows.push_back(std::move(r));
  }
  return {{"schema_version", ExperimentReport::kSchemaVersion},
          {"k_max", report.k_max},
          {"config", experiment_config_to_json(report.config)},
          {"rows", rows}};
}

nlohmann::json detection_result_to_json(const DetectionResult& result) {
  json scores = json::array();
  for (const auto& entry : result.scores) {
    json s = {{"k", entry.k}, {"score", nullptr}};
    if (std::isfinite(entry.score)) s["score"] = entry.score;
    scores.push_back(std::move(s));
  }
  return {{"schema_version", ExperimentReport::kSchemaVersion},
          {"method", method_name(result.method)},
          {"k_hat", result.k_hat},
          {"scores", scores}};
}

}  // namespace eigendetect::io
