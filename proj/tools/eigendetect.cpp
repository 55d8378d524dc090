// Command-line front end: detect signal counts from data files, run
// simulation campaigns, and query the analytical laws.
//
// Exit codes: 0 success, 2 usage/input error, 3 domain/computation error.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "eigendetect/detectors.hpp"
#include "eigendetect/identifiability.hpp"
#include "eigendetect/io.hpp"
#include "eigendetect/mc_harness.hpp"

namespace ed = eigendetect;
using nlohmann::json;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitDomain = 3;

enum class Format { plain, csv, json_fmt };

Format parse_format(const std::string& name) {
  if (name == "plain") return Format::plain;
  if (name == "csv") return Format::csv;
  if (name == "json") return Format::json_fmt;
  throw std::invalid_argument("unknown output format: " + name);
}

std::string plain6(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", value);
  return buf;
}

std::string score_str(double value) {
  if (std::isinf(value)) return "inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", value);
  return buf;
}

void emit(std::ostream& out, Format format, const json& full,
          const std::string& plain) {
  if (format == Format::json_fmt) {
    out << full.dump(2) << '\n';
  } else {
    out << plain << '\n';
  }
}

struct DetectArgs {
  std::string eigs_file;
  std::string snapshots_file;
  std::vector<std::string> bin_files;
  int n = 0;
  int m = 0;
  int beta = 2;
  bool complex_data = false;
  std::string method = "new";
  std::string dump_eigs;
  std::string format = "plain";
  std::string out_path;
};

ed::Method method_from_flag(const std::string& flag) {
  if (flag == "new") return ed::Method::new_est;
  if (flag == "mdl") return ed::Method::mdl_wk;
  if (flag == "mdl-mod") return ed::Method::mdl_modified;
  if (flag == "aic") return ed::Method::aic_wk;
  throw std::invalid_argument("unknown method: " + flag);
}

void print_detection(std::ostream& out, Format format,
                     const ed::DetectionResult& result) {
  switch (format) {
    case Format::json_fmt:
      out << ed::io::detection_result_to_json(result).dump(2) << '\n';
      return;
    case Format::csv:
      out << "k,score\n";
      for (const auto& s : result.scores) {
        out << s.k << ',' << score_str(s.score) << '\n';
      }
      return;
    case Format::plain:
      out << "method: " << ed::method_name(result.method) << '\n'
          << "k_hat: " << result.k_hat << '\n';
      for (const auto& s : result.scores) {
        out << "score[" << s.k << "] = " << score_str(s.score) << '\n';
      }
      return;
  }
}

int run_detect(const DetectArgs& args, std::ostream& out) {
  const Format format = parse_format(args.format);
  const ed::Beta beta = ed::beta_from_int(args.beta);

  ed::DetectionResult result{};
  if (!args.bin_files.empty()) {
    if (args.method != "new") {
      throw std::invalid_argument(
          "--bins implies the wideband estimator; only --method new is valid");
    }
    std::vector<ed::SnapshotMatrix> bins;
    bins.reserve(args.bin_files.size());
    for (const auto& file : args.bin_files) {
      bins.push_back(ed::io::read_snapshot_csv(file, args.complex_data));
    }
    result = ed::detect_new_wideband(ed::bin_spectra(bins));
  } else if (!args.snapshots_file.empty()) {
    const auto x =
        ed::io::read_snapshot_csv(args.snapshots_file, args.complex_data);
    const auto spectrum = ed::scm_eigenvalues(x);
    if (args.beta != ed::beta_value(spectrum.beta) && args.beta != 2) {
      throw std::invalid_argument(
          "--beta conflicts with the snapshot field; it applies to --eigs "
          "input only");
    }
    if (!args.dump_eigs.empty()) {
      ed::io::write_value_list(args.dump_eigs, spectrum.values);
    }
    result = ed::detect(spectrum, method_from_flag(args.method));
  } else {
    if (args.eigs_file.empty()) {
      throw std::invalid_argument(
          "one of --eigs, --snapshots or --bins is required");
    }
    if (args.n <= 0 || args.m <= 0) {
      throw std::invalid_argument("--eigs requires --n and --m");
    }
    auto values = ed::io::read_value_list(args.eigs_file);
    const auto spectrum =
        ed::EigenSpectrum::from_values(std::move(values), args.n, args.m, beta);
    if (!args.dump_eigs.empty()) {
      ed::io::write_value_list(args.dump_eigs, spectrum.values);
    }
    result = ed::detect(spectrum, method_from_flag(args.method));
  }

  if (!args.out_path.empty()) {
    std::ofstream file(args.out_path);
    if (!file) throw std::runtime_error("cannot write " + args.out_path);
    print_detection(file, format, result);
  } else {
    print_detection(out, format, result);
  }
  return 0;
}

std::optional<std::uint64_t> env_seed() {
  const char* text = std::getenv("EIGENDETECT_SEED");
  if (text == nullptr || *text == '\0') return std::nullopt;
  try {
    return std::stoull(text);
  } catch (const std::exception&) {
    throw std::invalid_argument(
        "EIGENDETECT_SEED must be a nonnegative integer");
  }
}

struct SimulateArgs {
  std::string config_path;
  std::string out_path;
  int workers = 0;
  std::optional<std::uint64_t> seed;
};

int run_simulate(const SimulateArgs& args, std::ostream& out) {
  ed::ExperimentConfig config = ed::io::read_experiment_config(args.config_path);
  if (args.seed) {
    config.seed = *args.seed;
  } else if (const auto fallback = env_seed();
             fallback && config.seed == 0) {
    config.seed = *fallback;
  }

  const auto report = ed::run_experiment(config, args.workers);
  ed::io::write_report_csv(args.out_path, report);

  std::filesystem::path sidecar(args.out_path);
  sidecar.replace_extension(".json");
  if (sidecar == std::filesystem::path(args.out_path)) {
    sidecar += ".sidecar.json";
  }
  std::ofstream side(sidecar);
  if (!side) throw std::runtime_error("cannot write " + sidecar.string());
  side << ed::io::report_sidecar_json(report).dump(2) << '\n';

  out << "wrote " << args.out_path << " and " << sidecar.string() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Signal-count estimation from sample covariance eigenvalues"};
  app.require_subcommand(1);

  // ---- detect ----
  DetectArgs detect_args;
  auto* detect = app.add_subcommand(
      "detect", "Estimate the number of signals from data files");
  auto* eigs_opt =
      detect->add_option("--eigs", detect_args.eigs_file,
                         "Eigenvalue list (single-column CSV or JSON array)");
  auto* snap_opt = detect->add_option("--snapshots", detect_args.snapshots_file,
                                      "Snapshot CSV (rows = sensors)");
  auto* bins_opt = detect->add_option(
      "--bins", detect_args.bin_files,
      "Comma-separated snapshot CSVs, one per frequency bin (wideband)");
  bins_opt->delimiter(',');
  eigs_opt->excludes(snap_opt)->excludes(bins_opt);
  snap_opt->excludes(bins_opt);
  detect->add_option("--n", detect_args.n, "Dimension (with --eigs)");
  detect->add_option("--m", detect_args.m, "Sample count (with --eigs)");
  detect->add_option("--beta", detect_args.beta, "Dyson index: 1, 2 or 4")
      ->check(CLI::IsMember({1, 2, 4}));
  detect->add_flag("--complex", detect_args.complex_data,
                   "Snapshot CSV holds interleaved (re, im) column pairs");
  detect->add_option("--method", detect_args.method,
                     "Detector: new, mdl, mdl-mod or aic")
      ->check(CLI::IsMember({"new", "mdl", "mdl-mod", "aic"}));
  detect->add_option("--dump-eigs", detect_args.dump_eigs,
                     "Write the spectrum used for detection to this file");
  detect->add_option("--format", detect_args.format, "plain, csv or json")
      ->check(CLI::IsMember({"plain", "csv", "json"}));
  detect->add_option("--out", detect_args.out_path,
                     "Write the report here instead of stdout");

  // ---- simulate ----
  SimulateArgs sim_args;
  std::uint64_t sim_seed_flag = 0;
  auto* simulate = app.add_subcommand(
      "simulate", "Run a seeded Monte-Carlo detection experiment");
  simulate->add_option("--config", sim_args.config_path, "Experiment JSON")
      ->required();
  simulate->add_option("--out", sim_args.out_path, "Report CSV path")
      ->required();
  simulate->add_option("--workers", sim_args.workers,
                       "Worker threads (0 = all cores)");
  auto* seed_opt = simulate->add_option("--seed", sim_seed_flag,
                                        "Override the config seed");

  // ---- mp ----
  double mp_lambda = 1.0;
  double mp_c = 1.0;
  double mp_x = 0.0;
  int mp_k = 1;
  std::string mp_format = "plain";
  auto* mp = app.add_subcommand(
      "mp", "Evaluate the limiting spectral law of a noise-only SCM");
  mp->require_subcommand(1);
  const auto add_law_flags = [&](CLI::App* cmd) {
    cmd->add_option("--lambda", mp_lambda, "Noise variance")->required();
    cmd->add_option("--c", mp_c, "Limiting ratio n/m")->required();
    cmd->add_option("--format", mp_format, "plain or json")
        ->check(CLI::IsMember({"plain", "json"}));
  };
  auto* mp_support_cmd = mp->add_subcommand("support", "Support endpoints");
  add_law_flags(mp_support_cmd);
  auto* mp_pdf_cmd = mp->add_subcommand("pdf", "Density at a point");
  add_law_flags(mp_pdf_cmd);
  mp_pdf_cmd->add_option("--x", mp_x, "Evaluation point")->required();
  auto* mp_cdf_cmd = mp->add_subcommand("cdf", "Distribution at a point");
  add_law_flags(mp_cdf_cmd);
  mp_cdf_cmd->add_option("--x", mp_x, "Evaluation point")->required();
  auto* mp_atom_cmd = mp->add_subcommand("atom", "Point mass at zero");
  add_law_flags(mp_atom_cmd);
  auto* mp_moment_cmd = mp->add_subcommand("moment", "k-th moment");
  add_law_flags(mp_moment_cmd);
  mp_moment_cmd->add_option("--k", mp_k, "Moment order")->required();

  // ---- keff ----
  std::vector<double> keff_eigs;
  double keff_noise = 1.0;
  int keff_n = 0;
  int keff_m = 0;
  std::string keff_format = "plain";
  auto* keff_cmd = app.add_subcommand(
      "keff", "Effective number of identifiable signals");
  keff_cmd
      ->add_option("--signal-eigs", keff_eigs,
                   "Comma-separated population signal eigenvalues")
      ->required()
      ->delimiter(',');
  keff_cmd->add_option("--noise-var", keff_noise, "Noise variance")->required();
  keff_cmd->add_option("--n", keff_n, "Dimension")->required();
  keff_cmd->add_option("--m", keff_m, "Sample count")->required();
  keff_cmd->add_option("--format", keff_format, "plain or json")
      ->check(CLI::IsMember({"plain", "json"}));

  // ---- zsep ----
  double zsep_lambda_j = 0.0;
  double zsep_noise = 1.0;
  int zsep_n = 0;
  int zsep_m = 0;
  int zsep_beta = 2;
  std::string zsep_format = "plain";
  auto* zsep_cmd = app.add_subcommand(
      "zsep", "Predicted signal/noise eigenvalue separation");
  zsep_cmd->add_option("--lambda-j", zsep_lambda_j, "Signal eigenvalue")
      ->required();
  zsep_cmd->add_option("--noise-var", zsep_noise, "Noise variance")->required();
  zsep_cmd->add_option("--n", zsep_n, "Dimension")->required();
  zsep_cmd->add_option("--m", zsep_m, "Sample count")->required();
  zsep_cmd->add_option("--beta", zsep_beta, "Dyson index: 1, 2 or 4")
      ->check(CLI::IsMember({1, 2, 4}));
  zsep_cmd->add_option("--format", zsep_format, "plain or json")
      ->check(CLI::IsMember({"plain", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (*detect) return run_detect(detect_args, std::cout);
    if (*simulate) {
      if (*seed_opt) sim_args.seed = sim_seed_flag;
      return run_simulate(sim_args, std::cout);
    }
    if (*mp) {
      const ed::MpLaw law(mp_lambda, mp_c);
      const Format format = parse_format(mp_format);
      if (*mp_support_cmd) {
        const auto [lo, hi] = ed::mp_support(law);
        emit(std::cout, format, json{{"a_minus", lo}, {"a_plus", hi}},
             "a_minus: " + plain6(lo) + "\na_plus: " + plain6(hi));
      } else if (*mp_pdf_cmd) {
        const double v = ed::mp_pdf(law, mp_x);
        emit(std::cout, format, json{{"pdf", v}}, plain6(v));
      } else if (*mp_cdf_cmd) {
        const double v = ed::mp_cdf(law, mp_x);
        emit(std::cout, format, json{{"cdf", v}}, plain6(v));
      } else if (*mp_atom_cmd) {
        const double v = ed::mp_atom(law);
        emit(std::cout, format, json{{"atom", v}}, plain6(v));
      } else {
        const double v = ed::mp_moment(law, mp_k);
        emit(std::cout, format, json{{"moment", v}}, plain6(v));
      }
      return 0;
    }
    if (*keff_cmd) {
      const int value = ed::k_eff(keff_eigs, keff_noise, keff_n, keff_m);
      emit(std::cout, parse_format(keff_format), json{{"k_eff", value}},
           std::to_string(value));
      return 0;
    }
    if (*zsep_cmd) {
      const double value =
          ed::z_sep(zsep_lambda_j, zsep_noise, zsep_n, zsep_m,
                    ed::beta_from_int(zsep_beta));
      emit(std::cout, parse_format(zsep_format), json{{"z_sep", value}},
           plain6(value));
      return 0;
    }
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return 0;
}
