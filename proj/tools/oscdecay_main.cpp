// oscdecay command-line front end. Talks to the shared library strictly
// through the public C API; all analysis lives behind that boundary.
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "oscdecay/oscdecay.h"

namespace {

struct CommonOptions {
  std::string config_path;
  std::string phase;
  int dim = 1;
  double support = 0.5;
  std::string domain = "ball";
  std::uint64_t seed = 42;
  double eps_min = 1e-6;
  double eps_max = 1e-1;
  int eps_steps = 6;
  std::uint64_t samples = 200000;
  int grid = 8;
  std::string family = "scaled-box";
  std::vector<double> widths;
  std::vector<double> scales;
  double lambda_min = 1e2;
  double lambda_max = 1e5;
  int lambda_steps = 8;
  std::uint64_t qmc_points = 1u << 20;
  int replicates = 8;
  std::string cutoff = "bump";
  std::string out_path;
  std::string format = "json";
};

void add_options(CLI::App* cmd, CommonOptions& opt, bool wants_phase,
                 bool wants_sublevel, bool wants_ladder) {
  cmd->add_option("--config", opt.config_path,
                  "JSON config file; explicit flags override its keys");
  if (wants_phase) {
    cmd->add_option("--phase", opt.phase,
                    "polynomial phase in x1..xd, y1..yd");
    cmd->add_option("--dim", opt.dim, "dimension d (1..6)");
  }
  cmd->add_option("--support", opt.support, "cutoff half-width r");
  cmd->add_option("--seed", opt.seed, "random seed");
  if (wants_sublevel) {
    cmd->add_option("--domain", opt.domain, "shift domain: ball or box");
    cmd->add_option("--eps-min", opt.eps_min, "smallest sublevel threshold");
    cmd->add_option("--eps-max", opt.eps_max, "largest sublevel threshold");
    cmd->add_option("--eps-steps", opt.eps_steps, "sublevel ladder rungs");
    cmd->add_option("--samples", opt.samples, "Monte Carlo shift samples");
    cmd->add_option("--grid", opt.grid, "worst-case base-point grid density");
  }
  if (wants_ladder) {
    cmd->add_option("--family", opt.family,
                    "test family: scaled-box, aniso-box, gaussian, "
                    "custom-box");
    cmd->add_option("--widths", opt.widths, "custom-box side widths")
        ->delimiter(',');
    cmd->add_option("--scales", opt.scales,
                    "custom-box per-side lambda exponents")
        ->delimiter(',');
    cmd->add_option("--lambda-min", opt.lambda_min, "smallest lambda");
    cmd->add_option("--lambda-max", opt.lambda_max, "largest lambda");
    cmd->add_option("--lambda-steps", opt.lambda_steps,
                    "lambda ladder rungs");
    cmd->add_option("--qmc-points", opt.qmc_points,
                    "total quadrature points per rung");
    cmd->add_option("--replicates", opt.replicates,
                    "randomized quadrature replicates");
    cmd->add_option("--cutoff", opt.cutoff, "cutoff factor: bump or one");
  }
  cmd->add_option("--out", opt.out_path,
                  "output file (atomic write); stdout when omitted");
  cmd->add_option("--format", opt.format, "output format: json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
}

int fail(const std::string& message, int code) {
  std::fprintf(stderr, "oscdecay: %s\n", message.c_str());
  return code;
}

int fail_status(osc_status status, char* error) {
  std::string message = error != nullptr ? error : "unknown error";
  osc_string_free(error);
  return fail(message, static_cast<int>(status));
}

bool load_config_file(const std::string& path, nlohmann::json& out,
                      std::string& error) {
  std::ifstream in(path);
  if (!in) {
    error = "cannot open config file '" + path + "'";
    return false;
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    out = nlohmann::json::parse(buf.str());
  } catch (const nlohmann::json::exception& e) {
    error = "config file '" + path + "' is not valid JSON: " + e.what();
    return false;
  }
  if (!out.is_object()) {
    error = "config file '" + path + "' must hold a JSON object";
    return false;
  }
  return true;
}

int write_atomic(const std::string& path, const std::string& text) {
  std::string tmp = path + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) return fail("cannot open '" + tmp + "' for writing", 5);
    out << text;
    out.flush();
    if (!out) {
      std::remove(tmp.c_str());
      return fail("failed writing '" + tmp + "'", 5);
    }
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    return fail("failed to move output into place at '" + path + "'", 5);
  }
  return 0;
}

int run(const char* command, const CLI::App* cmd, const CommonOptions& opt) {
  nlohmann::json cfg = nlohmann::json::object();
  if (!opt.config_path.empty()) {
    std::string error;
    if (!load_config_file(opt.config_path, cfg, error)) return fail(error, 1);
  }
  auto set_if = [&](const char* flag, const char* key, auto value) {
    const CLI::Option* o = cmd->get_option_no_throw(flag);
    if (o != nullptr && o->count() > 0) cfg[key] = value;
  };
  set_if("--phase", "phase", opt.phase);
  set_if("--dim", "dim", opt.dim);
  set_if("--support", "support", opt.support);
  set_if("--domain", "domain", opt.domain);
  set_if("--seed", "seed", opt.seed);
  set_if("--eps-min", "eps_min", opt.eps_min);
  set_if("--eps-max", "eps_max", opt.eps_max);
  set_if("--eps-steps", "eps_steps", opt.eps_steps);
  set_if("--samples", "samples", opt.samples);
  set_if("--grid", "grid", opt.grid);
  set_if("--family", "family", opt.family);
  set_if("--widths", "widths", opt.widths);
  set_if("--scales", "scales", opt.scales);
  set_if("--lambda-min", "lambda_min", opt.lambda_min);
  set_if("--lambda-max", "lambda_max", opt.lambda_max);
  set_if("--lambda-steps", "lambda_steps", opt.lambda_steps);
  set_if("--qmc-points", "qmc_points", opt.qmc_points);
  set_if("--replicates", "replicates", opt.replicates);
  set_if("--cutoff", "cutoff", opt.cutoff);

  const std::string cfg_text = cfg.dump();
  char* report = nullptr;
  char* error = nullptr;
  osc_status status = OSC_OK;
  if (std::string(command) == "analyze") {
    status = osc_analyze(cfg_text.c_str(), &report, &error);
  } else if (std::string(command) == "verify") {
    status = osc_verify(cfg_text.c_str(), &report, &error);
  } else {
    status = osc_table(cfg_text.c_str(), &report, &error);
  }
  if (status != OSC_OK) return fail_status(status, error);
  std::string text = report != nullptr ? report : "";
  osc_string_free(report);

  if (opt.format == "csv") {
    char* csv = nullptr;
    status = osc_report_csv(text.c_str(), &csv, &error);
    if (status != OSC_OK) return fail_status(status, error);
    text = csv != nullptr ? csv : "";
    osc_string_free(csv);
  }
  if (text.empty() || text.back() != '\n') text += '\n';

  if (opt.out_path.empty()) {
    std::fputs(text.c_str(), stdout);
    return 0;
  }
  return write_atomic(opt.out_path, text);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Decay-rate analysis for trilinear oscillatory integrals with "
      "polynomial phases"};
  app.set_version_flag("--version", std::string(osc_version()));
  app.require_subcommand(1);

  CommonOptions analyze_opt, verify_opt, table_opt;
  CLI::App* analyze = app.add_subcommand(
      "analyze",
      "predict the decay exponent of a phase from its shift-difference "
      "Hessian minors");
  add_options(analyze, analyze_opt, true, true, false);
  CLI::App* verify = app.add_subcommand(
      "verify",
      "measure the decay of the oscillatory integral on a lambda ladder");
  add_options(verify, verify_opt, true, false, true);
  CLI::App* table = app.add_subcommand(
      "table", "run the built-in benchmark phases and compare exponents");
  add_options(table, table_opt, false, true, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (analyze->parsed()) return run("analyze", analyze, analyze_opt);
  if (verify->parsed()) return run("verify", verify, verify_opt);
  return run("table", table, table_opt);
}
