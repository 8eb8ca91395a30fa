#include "core/report.hpp"

#include <charconv>
#include <cmath>
#include <ctime>
#include <limits>

#include "core/decay.hpp"
#include "core/error.hpp"
#include "core/parser.hpp"
#include "core/trilinear.hpp"

namespace oscdecay {

namespace {

using ordered_json = nlohmann::ordered_json;

// Table rows must land within this distance of the nominal exponent.
constexpr double kTableTolerance = 0.05;

std::string iso_timestamp() {
  std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

ShiftDomain domain_from_string(const std::string& s) {
  if (s == "ball") return ShiftDomain::ball;
  if (s == "box") return ShiftDomain::box;
  throw Error(ErrorCode::invalid_argument,
              "unknown shift domain '" + s + "' (expected ball or box)");
}

CutoffKind cutoff_from_string(const std::string& s) {
  if (s == "bump") return CutoffKind::bump;
  if (s == "one") return CutoffKind::one;
  throw Error(ErrorCode::invalid_argument,
              "unknown cutoff '" + s + "' (expected bump or one)");
}

FamilyKind family_from_string(const std::string& s) {
  if (s == "scaled-box") return FamilyKind::scaled_box;
  if (s == "aniso-box") return FamilyKind::aniso_box;
  if (s == "gaussian") return FamilyKind::gaussian;
  if (s == "custom-box") return FamilyKind::custom_box;
  throw Error(ErrorCode::invalid_argument,
              "unknown family '" + s +
                  "' (expected scaled-box, aniso-box, gaussian, custom-box)");
}

const char* regime_name(Regime regime) {
  switch (regime) {
    case Regime::power_decay: return "power-decay";
    case Regime::quarter_power_limit: return "quarter-power-limit";
    case Regime::no_decay: return "no-decay";
    case Regime::unusable: return "unusable";
  }
  return "unusable";
}

const char* alpha_status_name(AlphaStatus status) {
  switch (status) {
    case AlphaStatus::ok: return "ok";
    case AlphaStatus::no_decay: return "no-decay";
    case AlphaStatus::infinite: return "infinite";
    case AlphaStatus::unusable: return "unusable";
  }
  return "unusable";
}

ordered_json number_or_null(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

ordered_json alpha_to_json(const AlphaEstimate& alpha) {
  ordered_json j;
  j["status"] = alpha_status_name(alpha.status);
  j["alpha_hat"] = alpha.status == AlphaStatus::ok
                       ? ordered_json(alpha.alpha_hat)
                       : ordered_json(nullptr);
  ordered_json rungs = ordered_json::array();
  for (const MeasureSample& m : alpha.ladder) {
    ordered_json r;
    r["eps"] = m.eps;
    r["measure"] = m.m_hat;
    r["rel_std_error"] = number_or_null(m.rel_std_error);
    r["hits"] = m.hits;
    r["samples"] = m.n;
    r["usable"] = m.usable;
    rungs.push_back(std::move(r));
  }
  j["ladder"] = std::move(rungs);
  ordered_json slopes = ordered_json::array();
  for (const SlopeSample& s : alpha.slopes) {
    ordered_json r;
    r["value"] = s.value;
    r["sigma"] = s.sigma;
    r["usable"] = s.usable;
    r["from_rung"] = s.from_rung;
    r["to_rung"] = s.to_rung;
    slopes.push_back(std::move(r));
  }
  j["slopes"] = std::move(slopes);
  j["measure_monotone"] = alpha.monotone_ok;
  j["slopes_increasing"] = alpha.slopes_increasing;
  return j;
}

ordered_json selection_rows(const std::vector<int>& idx) {
  ordered_json arr = ordered_json::array();
  for (int v : idx) arr.push_back(v);
  return arr;
}

SupportGeometry geometry_from_config(const RunConfig& config) {
  SupportGeometry geom;
  geom.half_width = config.support;
  if (!(geom.half_width > 0.0)) {
    throw Error(ErrorCode::invalid_argument, "support half-width must be > 0");
  }
  return geom;
}

ordered_json analysis_to_json(const PhaseAnalysis& analysis) {
  ordered_json out;
  ordered_json minors = ordered_json::array();
  for (const MinorReport& m : analysis.minors) {
    ordered_json row;
    row["rows"] = selection_rows(m.selection.rows);
    row["cols"] = selection_rows(m.selection.cols);
    row["k"] = m.selection.k();
    row["polynomial"] = m.P.to_string();
    row["alpha"] = alpha_to_json(m.alpha);
    row["regime"] = regime_name(m.regime);
    row["exponent"] = (m.regime == Regime::power_decay ||
                       m.regime == Regime::quarter_power_limit)
                          ? ordered_json(m.exponent)
                          : ordered_json(nullptr);
    minors.push_back(std::move(row));
  }
  out["minors"] = std::move(minors);
  if (analysis.best_index >= 0) {
    const MinorReport& b = analysis.minors[analysis.best_index];
    ordered_json best;
    best["index"] = analysis.best_index;
    best["rows"] = selection_rows(b.selection.rows);
    best["cols"] = selection_rows(b.selection.cols);
    best["k"] = b.selection.k();
    best["regime"] = regime_name(b.regime);
    best["exponent"] = analysis.best_exponent;
    out["best"] = std::move(best);
  } else {
    out["best"] = nullptr;
  }
  out["regime"] = regime_name(analysis.best_regime);
  return out;
}

ordered_json report_shell(const RunConfig& config) {
  ordered_json report;
  report["schema"] = kReportSchema;
  report["tool"] = ordered_json{{"name", kToolName}, {"version", kToolVersion}};
  report["generated_at"] = iso_timestamp();
  report["config"] = config_to_json(config);
  return report;
}

std::string csv_quote(const std::string& s) {
  bool needs = s.find_first_of(",\"\n") != std::string::npos;
  if (!needs) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += '"';
  return out;
}

std::string join_ints(const ordered_json& arr) {
  std::string out;
  for (const auto& v : arr) {
    if (!out.empty()) out += ' ';
    out += std::to_string(v.get<int>());
  }
  return out;
}

std::string csv_number(const ordered_json& v) {
  if (v.is_null()) return "";
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number_unsigned()) return std::to_string(v.get<unsigned long long>());
  return format_double(v.get<double>());
}

}  // namespace

std::string format_double(double v) {
  if (!std::isfinite(v)) {
    if (std::isnan(v)) return "nan";
    return v > 0 ? "inf" : "-inf";
  }
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

nlohmann::ordered_json config_to_json(const RunConfig& config) {
  ordered_json j;
  j["command"] = config.command;
  j["phase"] = config.phase;
  j["dim"] = config.dim;
  j["support"] = config.support;
  j["domain"] = config.domain;
  j["seed"] = config.seed;
  j["eps_min"] = config.eps_min;
  j["eps_max"] = config.eps_max;
  j["eps_steps"] = config.eps_steps;
  j["samples"] = config.samples;
  j["grid"] = config.grid;
  j["family"] = config.family;
  j["widths"] = config.widths;
  j["scales"] = config.scales;
  j["lambda_min"] = config.lambda_min;
  j["lambda_max"] = config.lambda_max;
  j["lambda_steps"] = config.lambda_steps;
  j["qmc_points"] = config.qmc_points;
  j["replicates"] = config.replicates;
  j["cutoff"] = config.cutoff;
  return j;
}

void apply_config_json(RunConfig& config, const nlohmann::json& overlay) {
  if (!overlay.is_object()) {
    throw Error(ErrorCode::invalid_argument, "config must be a JSON object");
  }
  try {
    for (const auto& [key, value] : overlay.items()) {
      if (key == "command") value.get_to(config.command);
      else if (key == "phase") value.get_to(config.phase);
      else if (key == "dim") value.get_to(config.dim);
      else if (key == "support") value.get_to(config.support);
      else if (key == "domain") value.get_to(config.domain);
      else if (key == "seed") value.get_to(config.seed);
      else if (key == "eps_min") value.get_to(config.eps_min);
      else if (key == "eps_max") value.get_to(config.eps_max);
      else if (key == "eps_steps") value.get_to(config.eps_steps);
      else if (key == "samples") value.get_to(config.samples);
      else if (key == "grid") value.get_to(config.grid);
      else if (key == "family") value.get_to(config.family);
      else if (key == "widths") value.get_to(config.widths);
      else if (key == "scales") value.get_to(config.scales);
      else if (key == "lambda_min") value.get_to(config.lambda_min);
      else if (key == "lambda_max") value.get_to(config.lambda_max);
      else if (key == "lambda_steps") value.get_to(config.lambda_steps);
      else if (key == "qmc_points") value.get_to(config.qmc_points);
      else if (key == "replicates") value.get_to(config.replicates);
      else if (key == "cutoff") value.get_to(config.cutoff);
      else {
        throw Error(ErrorCode::invalid_argument,
                    "unknown config key '" + key + "'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::invalid_argument,
                std::string("bad config value: ") + e.what());
  }
}

nlohmann::ordered_json run_analyze(const RunConfig& config) {
  Polynomial S =
      parse_polynomial(config.phase, ParseOptions{config.dim, false});
  SupportGeometry geom = geometry_from_config(config);
  LadderConfig ladder{config.eps_min, config.eps_max, config.eps_steps};
  SampleConfig sample;
  sample.seed = config.seed;
  sample.samples = config.samples;
  sample.domain = domain_from_string(config.domain);
  sample.grid_n = config.grid;

  PhaseAnalysis analysis = analyze_phase(S, geom, ladder, sample);
  DerivativeConditionReport cor = derivative_condition_check(S, geom, config.grid);

  ordered_json report = report_shell(config);
  ordered_json phase;
  phase["text"] = S.to_string();
  phase["dim"] = S.dim();
  auto deg = S.degree();
  phase["degree"] = deg ? ordered_json(*deg) : ordered_json(nullptr);
  report["phase"] = std::move(phase);
  report["analysis"] = analysis_to_json(analysis);

  ordered_json dc;
  dc["found"] = cor.found;
  dc["exponent"] = cor.exponent;
  ordered_json wit = ordered_json::array();
  for (const DerivativeWitness& w : cor.witnesses) {
    wit.push_back(ordered_json{
        {"i", w.i}, {"j", w.j}, {"l", w.l}, {"min_abs", w.min_abs}});
  }
  dc["witnesses"] = std::move(wit);
  report["derivative_condition"] = std::move(dc);
  return report;
}

nlohmann::ordered_json run_verify(const RunConfig& config) {
  Polynomial S =
      parse_polynomial(config.phase, ParseOptions{config.dim, false});
  TestFamily family;
  family.kind = family_from_string(config.family);
  family.widths = config.widths;
  family.scales = config.scales;
  CutoffSpec cutoff;
  cutoff.kind = cutoff_from_string(config.cutoff);
  cutoff.half_width = config.support;
  LambdaLadder ladder{config.lambda_min, config.lambda_max,
                      config.lambda_steps};
  QuadConfig quad;
  quad.seed = config.seed;
  quad.points = config.qmc_points;
  quad.replicates = config.replicates;

  DecayFit fit = run_ladder(S, cutoff, family, ladder, quad);

  ordered_json report = report_shell(config);
  ordered_json phase;
  phase["text"] = S.to_string();
  phase["dim"] = S.dim();
  auto deg = S.degree();
  phase["degree"] = deg ? ordered_json(*deg) : ordered_json(nullptr);
  report["phase"] = std::move(phase);

  ordered_json ver;
  ordered_json rows = ordered_json::array();
  bool all_bounded = true;
  for (const IntegralValue& v : fit.ladder) {
    FamilyInstance inst = instantiate_family(family, S.dim(), v.lambda);
    double bound = trivial_ratio_bound(inst);
    double slack = 3.0 * v.err / v.norm_product;
    bool bounded = v.ratio <= bound * (1.0 + 1e-9) + slack;
    all_bounded = all_bounded && bounded;
    ordered_json r;
    r["lambda"] = v.lambda;
    r["re"] = v.value.real();
    r["im"] = v.value.imag();
    r["abs"] = std::abs(v.value);
    r["err"] = v.err;
    r["norm_product"] = v.norm_product;
    r["ratio"] = v.ratio;
    r["points"] = v.points;
    r["trivial_bound"] = bound;
    rows.push_back(std::move(r));
  }
  ver["ladder"] = std::move(rows);
  ver["fit"] = ordered_json{{"slope", fit.slope},
                            {"slope_stderr", fit.slope_stderr},
                            {"intercept", fit.intercept},
                            {"usable_rungs", fit.usable_rungs}};
  ver["within_trivial_bound"] = all_bounded;
  report["verify"] = std::move(ver);
  return report;
}

nlohmann::ordered_json run_table(const RunConfig& config) {
  struct TableRow {
    const char* label;
    const char* phase;
    int dim;
    int nominal_k;
    const char* nominal_alpha;
    const char* nominal_exponent;
    double nominal_value;
  };
  // Benchmark phases with analytically known shift-determinant structure.
  const TableRow rows[] = {
      {"full-rank-rotational", "1/2*(x1*y1*y2 + x2*y2^2 - x2*y1^2)", 2, 2,
       "1", "1/3", 1.0 / 3.0},
      {"full-rank-diagonal", "1/2*(x1*y1^2 + x2*y2^2)", 2, 2, "1", "1/3",
       1.0 / 3.0},
      {"rank-one-square", "1/2*(x1*y2^2 + x2^2*y1)", 2, 2, "1/2", "1/4",
       0.25},
      {"one-dimensional-fold", "1/2*x1^2*y1", 2, 1, "1", "1/6", 1.0 / 6.0},
      {"minor-beats-determinant",
       "x1*x2*y2 + x1*x3*y3 + 1/2*x1*y3^2 + 1/2*x1^2*y1 - 1/2*x2^2*y1 - "
       "1/2*x3*y1^2 - 1/2*x2^2*y3",
       3, 2, "1", "1/3", 1.0 / 3.0},
  };

  SupportGeometry geom = geometry_from_config(config);
  LadderConfig ladder{config.eps_min, config.eps_max, config.eps_steps};
  SampleConfig sample;
  sample.seed = config.seed;
  sample.samples = config.samples;
  sample.domain = domain_from_string(config.domain);
  sample.grid_n = config.grid;

  ordered_json report = report_shell(config);
  ordered_json out = ordered_json::array();
  for (const TableRow& row : rows) {
    Polynomial S = parse_polynomial(row.phase, ParseOptions{row.dim, false});
    PhaseAnalysis analysis = analyze_phase(S, geom, ladder, sample);
    ordered_json r;
    r["label"] = row.label;
    r["phase"] = S.to_string();
    r["dim"] = row.dim;
    r["nominal_k"] = row.nominal_k;
    r["nominal_alpha"] = row.nominal_alpha;
    r["nominal_exponent"] = row.nominal_exponent;
    if (analysis.best_index >= 0) {
      const MinorReport& b = analysis.minors[analysis.best_index];
      r["k"] = b.selection.k();
      r["rows"] = selection_rows(b.selection.rows);
      r["cols"] = selection_rows(b.selection.cols);
      r["alpha_hat"] = b.alpha.status == AlphaStatus::ok
                           ? ordered_json(b.alpha.alpha_hat)
                           : ordered_json(nullptr);
      r["exponent"] = analysis.best_exponent;
      r["regime"] = regime_name(b.regime);
      r["within_tolerance"] =
          std::fabs(analysis.best_exponent - row.nominal_value) <=
          kTableTolerance;
    } else {
      r["k"] = nullptr;
      r["alpha_hat"] = nullptr;
      r["exponent"] = nullptr;
      r["regime"] = regime_name(analysis.best_regime);
      r["within_tolerance"] = false;
    }
    out.push_back(std::move(r));
  }
  report["table"] = std::move(out);
  return report;
}

nlohmann::ordered_json run_command(const RunConfig& config) {
  if (config.command == "analyze") return run_analyze(config);
  if (config.command == "verify") return run_verify(config);
  if (config.command == "table") return run_table(config);
  throw Error(ErrorCode::invalid_argument,
              "unknown command '" + config.command +
                  "' (expected analyze, verify, table)");
}

std::string report_to_csv(const nlohmann::ordered_json& report) {
  const std::string command = report.at("config").at("command");
  std::string csv;
  if (command == "verify") {
    csv = "lambda,re,im,abs,err,norm_product,ratio\n";
    for (const auto& r : report.at("verify").at("ladder")) {
      csv += csv_number(r.at("lambda")) + ',' + csv_number(r.at("re")) + ',' +
             csv_number(r.at("im")) + ',' + csv_number(r.at("abs")) + ',' +
             csv_number(r.at("err")) + ',' + csv_number(r.at("norm_product")) +
             ',' + csv_number(r.at("ratio")) + '\n';
    }
    return csv;
  }
  if (command == "analyze") {
    csv = "rows,cols,k,polynomial,status,alpha_hat,regime,exponent\n";
    for (const auto& m : report.at("analysis").at("minors")) {
      csv += csv_quote(join_ints(m.at("rows"))) + ',' +
             csv_quote(join_ints(m.at("cols"))) + ',' +
             csv_number(m.at("k")) + ',' +
             csv_quote(m.at("polynomial").get<std::string>()) + ',' +
             m.at("alpha").at("status").get<std::string>() + ',' +
             csv_number(m.at("alpha").at("alpha_hat")) + ',' +
             m.at("regime").get<std::string>() + ',' +
             csv_number(m.at("exponent")) + '\n';
    }
    return csv;
  }
  if (command == "table") {
    csv = "label,dim,k,alpha_hat,exponent,nominal_exponent,within_tolerance\n";
    for (const auto& r : report.at("table")) {
      csv += csv_quote(r.at("label").get<std::string>()) + ',' +
             csv_number(r.at("dim")) + ',' + csv_number(r.at("k")) + ',' +
             csv_number(r.at("alpha_hat")) + ',' +
             csv_number(r.at("exponent")) + ',' +
             csv_quote(r.at("nominal_exponent").get<std::string>()) + ',' +
             (r.at("within_tolerance").get<bool>() ? "true" : "false") + '\n';
    }
    return csv;
  }
  throw Error(ErrorCode::invalid_argument,
              "no CSV layout for command '" + command + "'");
}

}  // namespace oscdecay
