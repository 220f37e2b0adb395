// Copyright 2026 The dpnmf Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "dpnmf/accountant.h"
#include "dpnmf/data_io.h"
#include "dpnmf/error.h"
#include "dpnmf/federation.h"
#include "dpnmf/init.h"
#include "dpnmf/matrix_core.h"
#include "dpnmf/metrics.h"
#include "dpnmf/privacy.h"
#include "dpnmf/solver.h"

namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

// Command misuse detected after argument parsing (e.g. an invalid flag
// combination); maps to exit code 1 like a parse error.
struct UsageError : std::runtime_error {
  explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

std::string FormatReal(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.10g", value);
  return buffer;
}

std::string TrimLine(const std::string& text) {
  const auto begin = text.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = text.find_last_not_of(" \t\r");
  return text.substr(begin, end - begin + 1);
}

// Accepts both matrix formats: a comma on the first content line or a
// '%'-comment means what it looks like; a bare "rows cols nnz" integer
// triple selects the coordinate reader.
dpnmf::DataMatrix LoadInputMatrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw dpnmf::DataError("cannot open file: " + path);
  std::string line;
  std::string first;
  bool saw_comment = false;
  while (std::getline(in, line)) {
    const std::string trimmed = TrimLine(line);
    if (trimmed.empty()) continue;
    if (trimmed[0] == '%') {
      saw_comment = true;
      continue;
    }
    first = trimmed;
    break;
  }
  in.close();
  if (first.empty()) throw dpnmf::DataError("empty matrix file: " + path);
  if (saw_comment) return dpnmf::LoadCoordinate(path);
  if (first.find(',') != std::string::npos) return dpnmf::LoadDenseCsv(path);
  std::istringstream header(first);
  long long rows = 0;
  long long cols = 0;
  long long nnz = 0;
  std::string extra;
  if ((header >> rows >> cols >> nnz) && !(header >> extra)) {
    return dpnmf::LoadCoordinate(path);
  }
  return dpnmf::LoadDenseCsv(path);
}

void EnsureDirectory(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    throw dpnmf::DataError("cannot create output directory '" + dir +
                           "': " + ec.message());
  }
}

void WriteTextFile(const std::string& path, const std::string& contents) {
  std::ofstream out(path);
  if (!out) throw dpnmf::DataError("cannot open file for writing: " + path);
  out << contents;
  if (!out) throw dpnmf::DataError("write failed: " + path);
}

void WriteTrajectory(const std::string& path,
                     const dpnmf::Trajectory& trajectory) {
  std::ostringstream out;
  for (const dpnmf::TrajectoryPoint& point : trajectory) {
    ordered_json record;
    record["iter"] = point.iteration;
    record["loss"] = point.loss;
    if (point.objective.has_value()) {
      record["objective"] = *point.objective;
    } else {
      record["objective"] = nullptr;
    }
    if (point.epsilon_overall.has_value()) {
      record["eps_overall"] = *point.epsilon_overall;
    } else {
      record["eps_overall"] = nullptr;
    }
    out << record.dump() << '\n';
  }
  WriteTextFile(path, out.str());
}

void WriteManifest(const std::string& dir, const ordered_json& manifest) {
  WriteTextFile((fs::path(dir) / "manifest.json").string(),
                manifest.dump(2) + "\n");
}

struct FitOptions {
  std::string input;
  std::string clean;
  std::string out;
  std::string config;
  int latent_dim = 0;
  double lambda = 0.1;
  double outlier_bound = 1.0;
  double eta_h = 0.05;
  double eta_w = 0.0;
  bool eta_w_set = false;
  int iters = 200;
  int inner_iters = 1;
  double tol = 1e-6;
  std::string normalize = "none";
};

struct DpOptions {
  double eps_t = 0.0;
  double delta = 1e-5;
  bool no_outliers = false;
  std::uint64_t seed = 0;
  std::string transcript;
};

// Registers the flags shared by fit and fit-dp. Options that may instead
// come from a --config file are not marked required here; presence is
// enforced after the config merge.
void AddFitFlags(CLI::App* cmd, FitOptions& opts) {
  cmd->add_option("--input", opts.input,
                  "Input matrix (dense CSV or coordinate), required");
  cmd->add_option("--clean", opts.clean,
                  "Clean reference matrix; adds the reconstruction objective "
                  "to the trajectory");
  cmd->add_option("--k", opts.latent_dim, "Latent dimension, required");
  cmd->add_option("--lambda", opts.lambda, "L1 penalty on outliers")
      ->capture_default_str();
  cmd->add_option("--m", opts.outlier_bound, "Outlier magnitude bound")
      ->capture_default_str();
  cmd->add_option("--eta-h", opts.eta_h, "Coefficient step size")
      ->capture_default_str();
  cmd->add_option("--eta-w", opts.eta_w,
                  "Dictionary step size (default: eta-h for fit, "
                  "eta-h/10000 for fit-dp)");
  cmd->add_option("--iters", opts.iters, "Outer iterations")
      ->capture_default_str();
  cmd->add_option("--inner-iters", opts.inner_iters,
                  "Coefficient/outlier passes per outer iteration")
      ->capture_default_str();
  cmd->add_option("--tol", opts.tol,
                  "Relative loss-change stopping tolerance (fit only)")
      ->capture_default_str();
  cmd->add_option("--normalize", opts.normalize,
                  "Column normalization: none, unit-max, unit-l2-clip")
      ->capture_default_str()
      ->check(CLI::IsMember({"none", "unit-max", "unit-l2-clip"}));
  cmd->add_option("--out", opts.out, "Output directory, required");
  cmd->add_option("--config", opts.config,
                  "key=value config file; command-line flags override");
}

// Feeds key=value lines from `path` into options of `cmd` that were not
// given on the command line, so explicit flags always win. '#' starts a
// comment line.
void ApplyConfigFile(CLI::App* cmd, const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw dpnmf::DataError("cannot open config file '" + path + "'");
  }
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = TrimLine(raw);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw UsageError("config line " + std::to_string(line_no) +
                       " is not key=value");
    }
    const std::string key = TrimLine(line.substr(0, eq));
    const std::string value = TrimLine(line.substr(eq + 1));
    CLI::Option* option = cmd->get_option_no_throw("--" + key);
    if (option == nullptr || key == "config") {
      throw UsageError("unknown config key '" + key + "'");
    }
    if (option->count() > 0) continue;
    try {
      option->add_result(value);
      option->run_callback();
    } catch (const CLI::Error& error) {
      throw UsageError("config value for '" + key + "': " + error.what());
    }
  }
}

// Post-merge presence check for options a config file may supply.
void RequireOptions(CLI::App* cmd, std::initializer_list<const char*> names) {
  for (const char* name : names) {
    if (cmd->get_option(name)->count() == 0) {
      throw UsageError(std::string(name) + " is required");
    }
  }
}

dpnmf::Hyperparams MakeHyperparams(const FitOptions& opts, bool privacy_mode,
                                   bool model_outliers) {
  dpnmf::Hyperparams params;
  params.latent_dim = opts.latent_dim;
  params.outlier_penalty = opts.lambda;
  params.outlier_bound = opts.outlier_bound;
  params.coeff_step = opts.eta_h;
  if (opts.eta_w_set) params.dict_step = opts.eta_w;
  params.max_iters = opts.iters;
  params.inner_iters = opts.inner_iters;
  params.rel_tol = opts.tol;
  params.model_outliers = model_outliers;
  (void)privacy_mode;
  return params;
}

ordered_json FitManifest(const char* command, const FitOptions& opts,
                         const dpnmf::Hyperparams& params, bool privacy_mode) {
  ordered_json manifest;
  manifest["command"] = command;
  manifest["input"] = opts.input;
  if (opts.clean.empty()) {
    manifest["clean"] = nullptr;
  } else {
    manifest["clean"] = opts.clean;
  }
  manifest["k"] = params.latent_dim;
  manifest["lambda"] = params.outlier_penalty;
  manifest["m"] = params.outlier_bound;
  manifest["eta_h"] = params.coeff_step;
  manifest["eta_w"] = params.ResolvedDictStep(privacy_mode);
  manifest["iters"] = params.max_iters;
  manifest["inner_iters"] = params.inner_iters;
  manifest["tol"] = params.rel_tol;
  manifest["normalize"] = opts.normalize;
  manifest["out"] = opts.out;
  return manifest;
}

int RunFit(const FitOptions& opts) {
  const dpnmf::DataMatrix raw = LoadInputMatrix(opts.input);
  const dpnmf::DataMatrix data =
      dpnmf::NormalizeColumns(raw, dpnmf::ParseNormalization(opts.normalize));
  std::optional<dpnmf::DataMatrix> clean;
  if (!opts.clean.empty()) clean.emplace(LoadInputMatrix(opts.clean));

  const dpnmf::Hyperparams params =
      MakeHyperparams(opts, /*privacy_mode=*/false, /*model_outliers=*/true);
  const dpnmf::FitResult result =
      dpnmf::Fit(data, params, clean ? &*clean : nullptr);

  EnsureDirectory(opts.out);
  const fs::path out(opts.out);
  dpnmf::SaveDenseCsv((out / "w.csv").string(), result.dictionary.values());
  dpnmf::SaveDenseCsv((out / "h.csv").string(), result.coefficients.values());
  dpnmf::SaveDenseCsv((out / "r.csv").string(), result.outliers.values());
  WriteTrajectory((out / "trajectory.jsonl").string(), result.trajectory);
  WriteManifest(opts.out,
                FitManifest("fit", opts, params, /*privacy_mode=*/false));

  const double final_loss =
      result.trajectory.empty() ? 0.0 : result.trajectory.back().loss;
  std::cout << "iterations: " << result.trajectory.size() << '\n'
            << "final loss: " << FormatReal(final_loss) << '\n'
            << "outputs written to " << opts.out << '\n';
  return 0;
}

int RunFitDp(const FitOptions& opts, const DpOptions& dp) {
  const dpnmf::DataMatrix raw = LoadInputMatrix(opts.input);
  const dpnmf::DataMatrix data =
      dpnmf::NormalizeColumns(raw, dpnmf::ParseNormalization(opts.normalize));
  std::optional<dpnmf::DataMatrix> clean;
  if (!opts.clean.empty()) clean.emplace(LoadInputMatrix(opts.clean));

  const dpnmf::Hyperparams params = MakeHyperparams(
      opts, /*privacy_mode=*/true, /*model_outliers=*/!dp.no_outliers);
  dpnmf::PrivacyParams privacy;
  privacy.epsilon_per_iter = {dp.eps_t};
  privacy.delta = dp.delta;
  privacy.seed = dp.seed;

  dpnmf::Dictionary dictionary(dpnmf::Matrix::Zero(1, 1));
  dpnmf::Trajectory trajectory;
  dpnmf::PrivacySpend spend;
  if (dp.transcript.empty()) {
    dpnmf::DpFitResult result =
        dpnmf::FitDp(data, params, privacy, clean ? &*clean : nullptr);
    dictionary = std::move(result.dictionary);
    trajectory = std::move(result.trajectory);
    spend = result.spend;
  } else {
    // Route through the two-party protocol; the result is bit-identical and
    // additionally yields a transcript.
    dpnmf::ProtocolResult result = dpnmf::RunProtocol(
        data, params, privacy, clean ? &*clean : nullptr);
    dictionary = std::move(result.dictionary);
    trajectory = std::move(result.trajectory);
    spend = result.spend;
    std::ostringstream lines;
    for (const std::string& message : result.transcript) {
      lines << message << '\n';
    }
    const fs::path transcript_path(dp.transcript);
    if (transcript_path.has_parent_path()) {
      EnsureDirectory(transcript_path.parent_path().string());
    }
    WriteTextFile(dp.transcript, lines.str());
  }

  EnsureDirectory(opts.out);
  const fs::path out(opts.out);
  dpnmf::SaveDenseCsv((out / "w.csv").string(), dictionary.values());
  WriteTrajectory((out / "trajectory.jsonl").string(), trajectory);

  ordered_json manifest =
      FitManifest("fit-dp", opts, params, /*privacy_mode=*/true);
  manifest["eps_t"] = dp.eps_t;
  manifest["delta"] = dp.delta;
  manifest["outliers"] = !dp.no_outliers;
  manifest["seed"] = dp.seed;
  if (dp.transcript.empty()) {
    manifest["transcript"] = nullptr;
  } else {
    manifest["transcript"] = dp.transcript;
  }
  manifest["spend_epsilon"] = spend.epsilon;
  manifest["spend_alpha_opt"] = spend.alpha_opt;
  manifest["spend_iterations"] = spend.iterations;
  WriteManifest(opts.out, manifest);

  std::cout << "overall epsilon: " << FormatReal(spend.epsilon) << '\n'
            << "alpha_opt: " << FormatReal(spend.alpha_opt) << '\n'
            << "delta: " << FormatReal(spend.delta) << '\n'
            << "outputs written to " << opts.out << '\n';
  return 0;
}

struct AccountOptions {
  int iters = 0;
  long long samples = 0;
  double eps_t = 0.0;
  double delta = 1e-5;
  bool outliers = true;
};

int RunAccount(const AccountOptions& opts) {
  const double gram_sensitivity = dpnmf::CoeffGramSensitivity(opts.samples);
  const double cross_sensitivity =
      dpnmf::DataCrossSensitivity(opts.samples, opts.outliers);
  const double gram_stddev =
      dpnmf::GaussianNoiseStddev(gram_sensitivity, opts.eps_t, opts.delta);
  const double cross_stddev =
      dpnmf::GaussianNoiseStddev(cross_sensitivity, opts.eps_t, opts.delta);
  const dpnmf::PrivacySpend spend =
      dpnmf::OverallSpend(opts.iters, gram_sensitivity, gram_stddev,
                          cross_sensitivity, cross_stddev, opts.delta);
  // Two releases per iteration, each calibrated at eps_t.
  const double naive = static_cast<double>(opts.iters) * 2.0 * opts.eps_t;

  std::cout << "iterations: " << opts.iters << '\n'
            << "per-iteration epsilon: " << FormatReal(opts.eps_t) << '\n'
            << "sensitivity gram: " << FormatReal(gram_sensitivity) << '\n'
            << "sensitivity cross: " << FormatReal(cross_sensitivity) << '\n'
            << "noise stddev gram: " << FormatReal(gram_stddev) << '\n'
            << "noise stddev cross: " << FormatReal(cross_stddev) << '\n'
            << "overall epsilon: " << FormatReal(spend.epsilon) << '\n'
            << "alpha_opt: " << FormatReal(spend.alpha_opt) << '\n'
            << "delta: " << FormatReal(spend.delta) << '\n'
            << "naive linear epsilon: " << FormatReal(naive) << '\n';
  if (spend.degenerate) {
    std::cout << "note: nothing was released; spend is degenerate\n";
  }
  return 0;
}

struct ContaminateOptions {
  std::string input;
  std::string out;
  double col_frac = 0.1;
  double entry_frac = 0.7;
  std::uint64_t seed = 0;
};

int RunContaminate(const ContaminateOptions& opts) {
  const dpnmf::DataMatrix data = LoadInputMatrix(opts.input);
  const dpnmf::Contaminated result =
      dpnmf::Contaminate(data, opts.col_frac, opts.entry_frac, opts.seed);
  EnsureDirectory(opts.out);
  const fs::path out(opts.out);
  dpnmf::SaveDenseCsv((out / "contaminated.csv").string(),
                      result.data.values());
  dpnmf::SaveMaskCsv((out / "mask.csv").string(), result.mask);

  ordered_json manifest;
  manifest["command"] = "contaminate";
  manifest["input"] = opts.input;
  manifest["col_frac"] = opts.col_frac;
  manifest["entry_frac"] = opts.entry_frac;
  manifest["seed"] = opts.seed;
  manifest["out"] = opts.out;
  manifest["masked_entries"] = static_cast<long long>(result.mask.count());
  WriteManifest(opts.out, manifest);

  std::cout << "masked entries: " << result.mask.count() << '\n'
            << "outputs written to " << opts.out << '\n';
  return 0;
}

struct EvalOptions {
  std::string clean;
  std::string w;
  std::string h;
  std::string v;
  std::string vhat;
  std::string mask;
};

int RunEval(const EvalOptions& opts) {
  const bool objective_mode =
      !opts.clean.empty() || !opts.w.empty() || !opts.h.empty();
  const bool rmse_mode =
      !opts.v.empty() || !opts.vhat.empty() || !opts.mask.empty();
  if (objective_mode == rmse_mode) {
    throw UsageError(
        "eval needs either --clean/--w/--h or --v/--vhat/--mask");
  }
  if (objective_mode) {
    if (opts.clean.empty() || opts.w.empty() || opts.h.empty()) {
      throw UsageError("objective mode needs all of --clean, --w, --h");
    }
    const dpnmf::DataMatrix clean = LoadInputMatrix(opts.clean);
    const dpnmf::Dictionary dict(LoadInputMatrix(opts.w).values());
    const dpnmf::Coefficients coeffs(LoadInputMatrix(opts.h).values());
    std::cout << "objective: "
              << FormatReal(dpnmf::ObjectiveValue(clean, dict, coeffs))
              << '\n';
  } else {
    if (opts.v.empty() || opts.vhat.empty() || opts.mask.empty()) {
      throw UsageError("masked RMSE mode needs all of --v, --vhat, --mask");
    }
    const dpnmf::DataMatrix values = LoadInputMatrix(opts.v);
    const dpnmf::DataMatrix predicted = LoadInputMatrix(opts.vhat);
    const dpnmf::BoolMask mask = dpnmf::LoadMaskCsv(opts.mask);
    std::cout << "masked rmse: "
              << FormatReal(dpnmf::MaskedRmse(values.values(),
                                              predicted.values(), mask))
              << '\n';
  }
  return 0;
}

struct TopicsOptions {
  std::string w;
  std::string vocab;
  int count = 10;
};

int RunTopics(const TopicsOptions& opts) {
  const dpnmf::Dictionary dict(LoadInputMatrix(opts.w).values());
  const dpnmf::Vocabulary vocab = dpnmf::Vocabulary::Load(opts.vocab);
  const auto topics = dpnmf::TopTerms(dict, vocab, opts.count);
  for (std::size_t topic = 0; topic < topics.size(); ++topic) {
    std::cout << "topic " << topic + 1 << ':';
    for (const std::string& term : topics[topic]) {
      std::cout << ' ' << term;
    }
    std::cout << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Robust non-negative matrix factorization with outlier modeling, "
      "differentially-private training, and RDP privacy accounting"};
  app.require_subcommand(1);

  FitOptions fit_opts;
  CLI::App* fit = app.add_subcommand("fit", "Non-private robust NMF");
  AddFitFlags(fit, fit_opts);
  CLI::Option* fit_eta_w = fit->get_option("--eta-w");

  FitOptions dp_fit_opts;
  DpOptions dp_opts;
  CLI::App* fit_dp =
      app.add_subcommand("fit-dp", "Differentially-private robust NMF");
  AddFitFlags(fit_dp, dp_fit_opts);
  CLI::Option* dp_eta_w = fit_dp->get_option("--eta-w");
  fit_dp->add_option("--eps-t", dp_opts.eps_t,
                     "Per-iteration privacy budget, required");
  fit_dp->add_option("--delta", dp_opts.delta, "Privacy failure probability")
      ->capture_default_str();
  fit_dp->add_flag("--no-outliers", dp_opts.no_outliers,
                   "Disable outlier modeling (cross sensitivity 2/N)");
  fit_dp->add_option("--seed", dp_opts.seed, "Noise RNG seed")
      ->capture_default_str();
  fit_dp->add_option("--transcript", dp_opts.transcript,
                     "Run the two-party protocol and write its transcript "
                     "to this file");

  AccountOptions account_opts;
  std::string account_config;
  CLI::App* account =
      app.add_subcommand("account", "Report the overall privacy spend");
  account->add_option("--iters", account_opts.iters, "Iterations, required");
  account->add_option("--n", account_opts.samples, "Sample count, required");
  account->add_option("--eps-t", account_opts.eps_t,
                      "Per-iteration privacy budget, required");
  account->add_option("--delta", account_opts.delta,
                      "Privacy failure probability")
      ->capture_default_str();
  account->add_flag("--outliers,!--no-outliers", account_opts.outliers,
                    "Whether outliers are modeled (default: yes)");
  account->add_option("--config", account_config,
                      "key=value config file; command-line flags override");

  ContaminateOptions contaminate_opts;
  std::string contaminate_config;
  CLI::App* contaminate =
      app.add_subcommand("contaminate", "Add uniform noise to random columns");
  contaminate->add_option("--input", contaminate_opts.input,
                          "Input matrix, required");
  contaminate->add_option("--col-frac", contaminate_opts.col_frac,
                          "Fraction of columns to contaminate")
      ->capture_default_str();
  contaminate->add_option("--entry-frac", contaminate_opts.entry_frac,
                          "Fraction of entries per chosen column")
      ->capture_default_str();
  contaminate->add_option("--seed", contaminate_opts.seed, "RNG seed")
      ->capture_default_str();
  contaminate->add_option("--out", contaminate_opts.out,
                          "Output directory, required");
  contaminate->add_option("--config", contaminate_config,
                          "key=value config file; command-line flags override");

  EvalOptions eval_opts;
  CLI::App* eval = app.add_subcommand(
      "eval", "Objective value or masked RMSE for saved matrices");
  // --h below would collide with the default -h help short name.
  eval->set_help_flag("--help", "Print this help message and exit");
  eval->add_option("--clean", eval_opts.clean, "Clean reference matrix");
  eval->add_option("--w", eval_opts.w, "Dictionary matrix");
  eval->add_option("--h", eval_opts.h, "Coefficient matrix");
  eval->add_option("--v", eval_opts.v, "Observed matrix");
  eval->add_option("--vhat", eval_opts.vhat, "Predicted matrix");
  eval->add_option("--mask", eval_opts.mask, "Observation mask (0/1 CSV)");

  TopicsOptions topics_opts;
  CLI::App* topics =
      app.add_subcommand("topics", "Top terms per dictionary column");
  topics->add_option("--w", topics_opts.w, "Dictionary matrix")->required();
  topics->add_option("--vocab", topics_opts.vocab, "Vocabulary file")
      ->required();
  topics->add_option("--k", topics_opts.count, "Terms per topic")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& help) {
    return app.exit(help);
  } catch (const CLI::CallForAllHelp& help) {
    return app.exit(help);
  } catch (const CLI::ParseError& error) {
    app.exit(error);
    return 1;
  }
  try {
    if (fit->parsed()) {
      if (!fit_opts.config.empty()) ApplyConfigFile(fit, fit_opts.config);
      RequireOptions(fit, {"--input", "--k", "--out"});
      fit_opts.eta_w_set = fit_eta_w->count() > 0;
      return RunFit(fit_opts);
    }
    if (fit_dp->parsed()) {
      if (!dp_fit_opts.config.empty()) {
        ApplyConfigFile(fit_dp, dp_fit_opts.config);
      }
      RequireOptions(fit_dp, {"--input", "--k", "--out", "--eps-t"});
      dp_fit_opts.eta_w_set = dp_eta_w->count() > 0;
      return RunFitDp(dp_fit_opts, dp_opts);
    }
    if (account->parsed()) {
      if (!account_config.empty()) ApplyConfigFile(account, account_config);
      RequireOptions(account, {"--iters", "--n", "--eps-t"});
      return RunAccount(account_opts);
    }
    if (contaminate->parsed()) {
      if (!contaminate_config.empty()) {
        ApplyConfigFile(contaminate, contaminate_config);
      }
      RequireOptions(contaminate, {"--input", "--out"});
      return RunContaminate(contaminate_opts);
    }
    if (eval->parsed()) return RunEval(eval_opts);
    if (topics->parsed()) return RunTopics(topics_opts);
  } catch (const UsageError& error) {
    std::cerr << "usage error: " << error.what() << '\n';
    return 1;
  } catch (const dpnmf::DataError& error) {
    std::cerr << "data error: " << error.what() << '\n';
    return 2;
  } catch (const dpnmf::NumericError& error) {
    std::cerr << "numeric error: " << error.what() << '\n';
    return 3;
  } catch (const std::exception& error) {
    std::cerr << "error: " << error.what() << '\n';
    return 3;
  }
  return 0;
}
