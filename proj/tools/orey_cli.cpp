#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "manifest.hpp"
#include "orey/asymptotics.hpp"
#include "orey/conditions.hpp"
#include "orey/errors.hpp"
#include "orey/estimator.hpp"
#include "orey/montecarlo.hpp"
#include "orey/pathgen.hpp"
#include "orey/quadvar.hpp"
#include "orey/report_json.hpp"

#ifndef OREY_VERSION
#define OREY_VERSION "0.0.0"
#endif

namespace fs = std::filesystem;
using nlohmann::json;

namespace orey::cli {
namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitFailure = 2;

// Set by a handler when a verdict is FAIL; turns into exit code 2.
struct RunResult {
  std::vector<std::pair<std::string, std::string>> outputs;  // (flag, path)
  bool verdict_failed = false;
};

void write_text(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw FormatError("write to '" + path + "' failed");
}

void emit(const json& j, const std::string& path, RunResult& result, const std::string& flag = "--out") {
  write_text(j.dump(2) + "\n", path);
  if (!path.empty() && path != "-") result.outputs.emplace_back(flag, path);
}

int threads_default() {
  if (const char* env = std::getenv("OREY_THREADS")) {
    try {
      return std::max(1, std::stoi(env));
    } catch (...) {
      throw FormatError(std::string("OREY_THREADS='") + env + "' is not an integer");
    }
  }
  return 1;
}

struct Options {
  std::string model;
  double horizon = 1.0;
  int n = 0;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string in;
  std::optional<double> ci;
  std::string mode = "orey";
  bool full = false;
  double gamma = 0.0;
  double tol = kDefaultSeriesTol;
  std::string checks = "rowsum,scov,gap,bias,begyn";
  int nmin = 32;
  int nmax = 1024;
  int reps = 500;
  std::string stat = "bivariate_v";
  std::string samples;
  std::string generator = "auto";
  std::optional<int> threads;
  std::string manifest;
};

CovarianceModel model_of(const Options& o) { return CovarianceModel::parse(o.model, o.horizon); }

int threads_of(const Options& o) { return o.threads ? std::max(1, *o.threads) : threads_default(); }

std::uint64_t seed_of(const Options& o) {
  if (!o.seed) throw FormatError("--seed is required: all randomness derives from it");
  return *o.seed;
}

RunResult run_simulate(const Options& o) {
  const auto model = model_of(o);
  const auto seed = seed_of(o);
  GridPath path;
  if (o.generator == "auto") {
    path = simulate(model, o.n, seed);
  } else if (o.generator == "cholesky") {
    path = simulate_cholesky(model, o.n, seed);
  } else {
    throw FormatError("unknown generator '" + o.generator + "' (expected auto or cholesky)");
  }
  std::cerr << "generator: " << to_string(path.generator) << "\n";
  export_path(path, o.out);
  return {{{"--out", o.out}}, false};
}

RunResult run_estimate(const Options& o) {
  const auto path = import_path(o.in);
  const auto r = estimate(path, o.ci);
  if (!r.warning.empty()) std::cerr << "warning: " << r.warning << "\n";
  RunResult result;
  emit(to_json(r), o.out, result);
  return result;
}

RunResult run_coeffs(const Options& o) {
  const auto model = model_of(o);
  const auto mode = parse_normalization(o.mode);
  const int threads = threads_of(o);
  json j = {{"model", model.spec()}, {"aggregates", to_json(coefficient_aggregates(model, o.n, mode, threads))}};
  if (o.full) j["coefficients"] = to_json(coefficients(model, o.n, mode, threads));
  RunResult result;
  emit(j, o.out, result);
  return result;
}

RunResult run_sigma(const Options& o) {
  RunResult result;
  emit(to_json(sigma_matrix(o.gamma, o.tol)), o.out, result);
  return result;
}

RunResult run_verify(const Options& o) {
  const auto model = model_of(o);
  VerifyOptions v;
  v.row_sums = v.scaled_cov = v.fbm_gap = v.bias = v.begyn = false;
  std::stringstream list(o.checks);
  std::string item;
  while (std::getline(list, item, ',')) {
    if (item == "rowsum") v.row_sums = true;
    else if (item == "scov") v.scaled_cov = true;
    else if (item == "gap") v.fbm_gap = true;
    else if (item == "bias") v.bias = true;
    else if (item == "begyn") v.begyn = true;
    else throw FormatError("unknown check '" + item + "' (expected rowsum, scov, gap, bias, begyn)");
  }
  v.n_min = o.nmin;
  v.n_max = o.nmax;
  v.threads = threads_of(o);
  const auto report = verify(model, v);
  RunResult result;
  emit(to_json(report), o.out, result);
  std::cerr << "overall: " << to_string(report.overall()) << "\n";
  result.verdict_failed = report.overall() == Verdict::Fail;
  return result;
}

RunResult run_mc(const Options& o) {
  McConfig c{.model = model_of(o), .n = o.n, .reps = o.reps, .seed = seed_of(o)};
  c.statistic = parse_statistic(o.stat);
  c.threads = threads_of(o);
  if (o.ci) c.ci_level = *o.ci;
  const auto report = run(c);
  RunResult result;
  emit(to_json(report), o.out, result);
  if (!o.samples.empty()) {
    std::ostringstream csv;
    csv.precision(17);
    if (c.statistic == McStatistic::GammaHat) {
      csv << "rep,z,gamma_hat\n";
      for (std::size_t r = 0; r < report.samples.size(); ++r)
        csv << r << ',' << report.samples[r][0] << ',' << report.gamma_hats[r] << '\n';
    } else {
      csv << "rep,x_n,x_2n\n";
      for (std::size_t r = 0; r < report.samples.size(); ++r)
        csv << r << ',' << report.samples[r][0] << ',' << report.samples[r][1] << '\n';
    }
    write_text(csv.str(), o.samples);
    result.outputs.emplace_back("--samples", o.samples);
  }
  std::cerr << "overall: " << to_string(report.overall()) << "\n";
  result.verdict_failed = report.overall() == Verdict::Fail;
  return result;
}

int dispatch(std::vector<std::string> args, bool write_manifests);

int run_replay(const Options& o) {
  std::ifstream in(o.manifest);
  if (!in) throw FormatError("cannot open manifest '" + o.manifest + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw FormatError(std::string("manifest is not JSON: ") + e.what());
  }
  const auto m = RunManifest::from_json(j);

  std::string templ = (fs::temp_directory_path() / "orey-replay-XXXXXX").string();
  if (mkdtemp(templ.data()) == nullptr) throw FormatError("cannot create a temporary directory");
  const fs::path dir = templ;

  auto args = m.args;
  std::vector<fs::path> replayed;
  for (const auto& rec : m.outputs) {
    const fs::path target = dir / (std::to_string(replayed.size()) + "_" + fs::path(rec.path).filename().string());
    bool found = false;
    for (std::size_t i = 0; i + 1 < args.size(); ++i) {
      if (args[i] == rec.flag) {
        args[i + 1] = target.string();
        found = true;
      } else if (args[i].rfind(rec.flag + "=", 0) == 0) {
        args[i] = rec.flag + "=" + target.string();
        found = true;
      }
    }
    if (!found) throw FormatError("manifest output flag " + rec.flag + " not among recorded args");
    replayed.push_back(target);
  }
  const int code = dispatch(args, false);

  json report = {{"manifest", o.manifest}, {"exit_code", code}, {"outputs", json::array()}};
  bool all_match = true;
  for (std::size_t i = 0; i < m.outputs.size(); ++i) {
    const std::string actual = fs::exists(replayed[i]) ? sha256_file(replayed[i]) : "";
    const bool match = actual == m.outputs[i].sha256;
    all_match = all_match && match;
    report["outputs"].push_back(
        {{"path", m.outputs[i].path}, {"expected", m.outputs[i].sha256}, {"actual", actual}, {"match", match}});
  }
  report["reproduced"] = all_match;
  std::cout << report.dump(2) << "\n";
  fs::remove_all(dir);
  return all_match ? kExitOk : kExitFailure;
}

json flag_values(const CLI::App* sub) {
  json flags = json::object();
  for (const CLI::Option* opt : sub->get_options()) {
    if (opt->get_name() == "--help" || opt->count() == 0) continue;
    const auto& res = opt->results();
    flags[opt->get_name()] = res.size() == 1 ? json(res.front()) : json(res);
  }
  return flags;
}

int dispatch(std::vector<std::string> args, bool write_manifests) {
  CLI::App app{"Orey-index quadratic variation toolkit"};
  app.set_version_flag("--version", OREY_VERSION);
  app.require_subcommand(1);
  Options o;

  auto add_model = [&](CLI::App* s) {
    s->add_option("--model", o.model, "fbm:gamma=G | sfbm:H=H | bifbm:H=H,K=K")->required();
    s->add_option("--horizon", o.horizon, "time horizon T")->capture_default_str();
  };
  auto add_threads = [&](CLI::App* s) { s->add_option("--threads", o.threads, "worker threads (env OREY_THREADS)"); };

  auto* sim = app.add_subcommand("simulate", "simulate a path on {kT/n} and write CSV");
  add_model(sim);
  sim->add_option("--n", o.n, "grid count")->required();
  sim->add_option("--seed", o.seed, "64-bit seed (required)");
  sim->add_option("--out", o.out, "CSV output")->required();
  sim->add_option("--generator", o.generator, "auto | cholesky")->capture_default_str();

  auto* est = app.add_subcommand("estimate", "estimate the Orey index from a path CSV");
  est->add_option("--in", o.in, "path CSV with 2n + 1 points")->required();
  est->add_option("--ci", o.ci, "confidence level in (0, 1)");
  est->add_option("--out", o.out, "JSON output (stdout if omitted)");

  auto* co = app.add_subcommand("coeffs", "exact second-moment coefficients and Isserlis aggregates");
  add_model(co);
  co->add_option("--n", o.n, "coarse grid count n")->required();
  co->add_option("--mode", o.mode, "exact | orey")->capture_default_str();
  co->add_option("--out", o.out, "JSON output (stdout if omitted)");
  co->add_flag("--full", o.full, "include the dense d and c matrices (n <= 4096)");
  add_threads(co);

  auto* sig = app.add_subcommand("sigma", "asymptotic covariance Sigma_gamma");
  sig->add_option("--gamma", o.gamma, "Orey index in (0, 1)")->required();
  sig->add_option("--tol", o.tol, "certified series tolerance")->capture_default_str();
  sig->add_option("--out", o.out, "JSON output (stdout if omitted)");

  auto* ver = app.add_subcommand("verify", "check the CLT hypotheses numerically");
  add_model(ver);
  ver->add_option("--checks", o.checks, "comma list of rowsum,scov,gap,bias,begyn")->capture_default_str();
  ver->add_option("--nmin", o.nmin, "smallest n of the dyadic grid")->capture_default_str();
  ver->add_option("--nmax", o.nmax, "largest n of the dyadic grid")->capture_default_str();
  ver->add_option("--out", o.out, "JSON output (stdout if omitted)");
  add_threads(ver);

  auto* mc = app.add_subcommand("mc", "Monte Carlo validation of the CLTs");
  add_model(mc);
  mc->add_option("--n", o.n, "coarse grid count n")->required();
  mc->add_option("--reps", o.reps, "replications")->capture_default_str();
  mc->add_option("--seed", o.seed, "64-bit seed (required)");
  mc->add_option("--stat", o.stat, "bivariate_v | gamma_hat")->capture_default_str();
  mc->add_option("--ci", o.ci, "interval level for gamma_hat coverage");
  mc->add_option("--out", o.out, "JSON report")->required();
  mc->add_option("--samples", o.samples, "per-replication CSV");
  add_threads(mc);

  auto* rep = app.add_subcommand("replay", "rerun a manifest and compare output digests");
  rep->add_option("--manifest", o.manifest, "manifest JSON")->required()->check(CLI::ExistingFile);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  CLI::App* chosen = app.get_subcommands().front();
  const std::string name = chosen->get_name();
  if (name == "replay") return run_replay(o);

  RunResult result;
  if (name == "simulate") result = run_simulate(o);
  else if (name == "estimate") result = run_estimate(o);
  else if (name == "coeffs") result = run_coeffs(o);
  else if (name == "sigma") result = run_sigma(o);
  else if (name == "verify") result = run_verify(o);
  else result = run_mc(o);

  if (write_manifests) {
    RunManifest m;
    m.version = OREY_VERSION;
    m.subcommand = name;
    m.args = args;
    m.flags = flag_values(chosen);
    if (!o.model.empty()) m.model = CovarianceModel::parse(o.model, o.horizon).spec();
    m.seed = o.seed;
    m.timestamp = utc_timestamp();
    for (const auto& [flag, path] : result.outputs) m.outputs.push_back({flag, path, sha256_file(path)});
    for (const auto& [flag, path] : result.outputs) write_text(m.to_json().dump(2) + "\n", manifest_path(path).string());
  }
  return result.verdict_failed ? kExitFailure : kExitOk;
}

}  // namespace
}  // namespace orey::cli

int main(int argc, char** argv) {
  using namespace orey;
  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    return cli::dispatch(args, true);
  } catch (const DegenerateInputError& e) {
    std::cerr << "degenerate input: " << e.what() << "\n";
    return cli::kExitFailure;
  } catch (const TruncationError& e) {
    std::cerr << "unreachable tolerance: " << e.what() << "\n";
    return cli::kExitFailure;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return cli::kExitFailure;
  } catch (const SimulationError& e) {
    std::cerr << "simulation error: " << e.what() << "\n";
    return cli::kExitFailure;
  } catch (const FormatError& e) {
    std::cerr << "format error: " << e.what() << "\n";
    return cli::kExitUsage;
  } catch (const MissingMetadataError& e) {
    std::cerr << "missing metadata: " << e.what() << "\n";
    return cli::kExitUsage;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return cli::kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::kExitFailure;
  }
}
