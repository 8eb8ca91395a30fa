#include "oscdecay/oscdecay.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "core/error.hpp"
#include "core/parser.hpp"
#include "core/polynomial.hpp"
#include "core/report.hpp"

using oscdecay::Error;
using oscdecay::ErrorCode;

struct osc_poly {
  oscdecay::Polynomial poly;
};

namespace {

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) return nullptr;
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void set_error(char** out_error, const std::string& message) {
  if (out_error != nullptr) *out_error = dup_string(message);
}

osc_status status_from_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return OSC_ERR_INVALID;
    case ErrorCode::parse: return OSC_ERR_PARSE;
    case ErrorCode::guard: return OSC_ERR_GUARD;
    case ErrorCode::ceiling: return OSC_ERR_CEILING;
    case ErrorCode::internal: return OSC_ERR_INTERNAL;
  }
  return OSC_ERR_INTERNAL;
}

template <typename Fn>
osc_status guarded(char** out_error, Fn&& fn) {
  if (out_error != nullptr) *out_error = nullptr;
  try {
    return fn();
  } catch (const Error& e) {
    set_error(out_error, e.what());
    return status_from_code(e.code());
  } catch (const std::bad_alloc&) {
    set_error(out_error, "out of memory");
    return OSC_ERR_INTERNAL;
  } catch (const std::exception& e) {
    set_error(out_error, e.what());
    return OSC_ERR_INTERNAL;
  } catch (...) {
    set_error(out_error, "unknown error");
    return OSC_ERR_INTERNAL;
  }
}

osc_status run_command_json(const char* command, const char* config_json,
                            char** out_report, char** out_error) {
  return guarded(out_error, [&]() -> osc_status {
    if (out_report == nullptr) {
      throw Error(ErrorCode::invalid_argument, "out_report must not be null");
    }
    *out_report = nullptr;
    oscdecay::RunConfig config;
    config.command = command;
    if (config_json != nullptr && config_json[0] != '\0') {
      nlohmann::json overlay;
      try {
        overlay = nlohmann::json::parse(config_json);
      } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::invalid_argument,
                    std::string("config is not valid JSON: ") + e.what());
      }
      oscdecay::apply_config_json(config, overlay);
    }
    config.command = command;  // the entry point wins over the overlay
    nlohmann::ordered_json report = oscdecay::run_command(config);
    *out_report = dup_string(report.dump(2));
    return *out_report != nullptr ? OSC_OK : OSC_ERR_INTERNAL;
  });
}

}  // namespace

extern "C" {

const char* osc_version(void) { return oscdecay::kToolVersion; }

void osc_string_free(char* s) { std::free(s); }

osc_status osc_poly_parse(const char* text, int dim, int allow_tau,
                          osc_poly** out, char** out_error) {
  return guarded(out_error, [&]() -> osc_status {
    if (text == nullptr || out == nullptr) {
      throw Error(ErrorCode::invalid_argument,
                  "text and out must not be null");
    }
    *out = nullptr;
    oscdecay::ParseOptions opts;
    opts.dim = dim;
    opts.allow_tau = allow_tau != 0;
    auto handle = new osc_poly{oscdecay::parse_polynomial(text, opts)};
    *out = handle;
    return OSC_OK;
  });
}

void osc_poly_free(osc_poly* p) { delete p; }

osc_status osc_poly_to_string(const osc_poly* p, char** out) {
  return guarded(nullptr, [&]() -> osc_status {
    if (p == nullptr || out == nullptr) return OSC_ERR_INVALID;
    *out = dup_string(p->poly.to_string());
    return *out != nullptr ? OSC_OK : OSC_ERR_INTERNAL;
  });
}

osc_status osc_poly_degree(const osc_poly* p, int* out_degree) {
  return guarded(nullptr, [&]() -> osc_status {
    if (p == nullptr || out_degree == nullptr) return OSC_ERR_INVALID;
    auto deg = p->poly.degree();
    *out_degree = deg ? *deg : -1;
    return OSC_OK;
  });
}

osc_status osc_poly_evaluate(const osc_poly* p, const double* point,
                             size_t len, double* out, char** out_error) {
  return guarded(out_error, [&]() -> osc_status {
    if (p == nullptr || point == nullptr || out == nullptr) {
      throw Error(ErrorCode::invalid_argument,
                  "handle, point and out must not be null");
    }
    if (len != static_cast<size_t>(3 * p->poly.dim())) {
      throw Error(ErrorCode::invalid_argument,
                  "point must have length 3*dim (x, y, t blocks)");
    }
    *out = p->poly.evaluate(std::span<const double>(point, len));
    return OSC_OK;
  });
}

osc_status osc_analyze(const char* config_json, char** out_report,
                       char** out_error) {
  return run_command_json("analyze", config_json, out_report, out_error);
}

osc_status osc_verify(const char* config_json, char** out_report,
                      char** out_error) {
  return run_command_json("verify", config_json, out_report, out_error);
}

osc_status osc_table(const char* config_json, char** out_report,
                     char** out_error) {
  return run_command_json("table", config_json, out_report, out_error);
}

osc_status osc_report_csv(const char* report_json, char** out_csv,
                          char** out_error) {
  return guarded(out_error, [&]() -> osc_status {
    if (report_json == nullptr || out_csv == nullptr) {
      throw Error(ErrorCode::invalid_argument,
                  "report_json and out_csv must not be null");
    }
    *out_csv = nullptr;
    nlohmann::ordered_json report;
    try {
      report = nlohmann::ordered_json::parse(report_json);
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::invalid_argument,
                  std::string("report is not valid JSON: ") + e.what());
    }
    *out_csv = dup_string(oscdecay::report_to_csv(report));
    return *out_csv != nullptr ? OSC_OK : OSC_ERR_INTERNAL;
  });
}

}  // extern "C"
