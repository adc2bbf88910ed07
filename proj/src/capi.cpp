#include "pauli2d/pauli2d.h"

#include <cstring>
#include <exception>
#include <memory>
#include <string>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "pauli2d/config.hpp"
#include "pauli2d/eigensolver.hpp"
#include "pauli2d/error.hpp"
#include "pauli2d/fields.hpp"
#include "pauli2d/logpotential.hpp"
#include "pauli2d/parallel.hpp"
#include "pauli2d/pauli_operator.hpp"
#include "pauli2d/scenario.hpp"

struct p2d_field {
  pauli2d::FieldDescriptor field;
};

struct p2d_operator {
  std::unique_ptr<pauli2d::PauliOperator> op;
};

struct p2d_result {
  pauli2d::TaskResult result;
  std::string report;
};

namespace {

thread_local std::string g_last_error;

p2d_status fail(p2d_status s, const std::string& msg) {
  g_last_error = msg;
  return s;
}

// Maps library exceptions to status codes.
template <class Fn>
p2d_status guarded(Fn&& fn) {
  try {
    g_last_error.clear();
    return fn();
  } catch (const pauli2d::ConfigError& e) {
    return fail(P2D_ERR_CONFIG, e.what());
  } catch (const pauli2d::DomainError& e) {
    return fail(P2D_ERR_DOMAIN, e.what());
  } catch (const pauli2d::NumericalError& e) {
    return fail(P2D_ERR_NUMERICAL, e.what());
  } catch (const pauli2d::ContractViolation& e) {
    return fail(P2D_ERR_CONTRACT, e.what());
  } catch (const std::bad_alloc&) {
    return fail(P2D_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(P2D_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(P2D_ERR_INTERNAL, "unknown error");
  }
}

p2d_status null_argument(const char* what) {
  return fail(P2D_ERR_INVALID_ARGUMENT, std::string(what) + " must not be null");
}

void to_grid(const double* in, pauli2d::ComplexGrid& g) {
  for (std::size_t k = 0; k < g.values.size(); ++k) g.values[k] = {in[2 * k], in[2 * k + 1]};
}

}  // namespace

extern "C" {

const char* p2d_version(void) { return pauli2d::kVersion; }

const char* p2d_last_error_message(void) { return g_last_error.c_str(); }

const char* p2d_status_name(int status) {
  switch (status) {
    case P2D_OK: return "ok";
    case P2D_ERR_CONFIG: return "configuration error";
    case P2D_ERR_NUMERICAL: return "numerical failure";
    case P2D_ERR_DOMAIN: return "domain error";
    case P2D_ERR_CONTRACT: return "contract violation";
    case P2D_ERR_INVALID_ARGUMENT: return "invalid argument";
    case P2D_ERR_INTERNAL: return "internal error";
    default: return "unknown status";
  }
}

p2d_status p2d_set_max_threads(int threads) {
  if (threads < 0) return fail(P2D_ERR_INVALID_ARGUMENT, "threads must be >= 0");
  pauli2d::set_max_threads(threads);
  return P2D_OK;
}

p2d_status p2d_set_log_level(const char* level) {
  if (!level) return null_argument("level");
  const auto lvl = spdlog::level::from_str(level);
  if (lvl == spdlog::level::off && std::strcmp(level, "off") != 0)
    return fail(P2D_ERR_CONFIG, std::string("unknown log level '") + level + "'");
  // diagnostics go to stderr so reports on stdout stay clean
  static const bool installed = [] {
    spdlog::set_default_logger(spdlog::stderr_color_mt("pauli2d"));
    return true;
  }();
  (void)installed;
  spdlog::set_level(lvl);
  return P2D_OK;
}

p2d_status p2d_field_from_json(const char* json, p2d_field** out) {
  if (!json) return null_argument("json");
  if (!out) return null_argument("out");
  *out = nullptr;
  return guarded([&] {
    pauli2d::Json j;
    try {
      j = pauli2d::Json::parse(json);
    } catch (const nlohmann::json::parse_error& e) {
      throw pauli2d::ConfigError(std::string("field is not valid JSON: ") + e.what());
    }
    *out = new p2d_field{pauli2d::field_from_json(j)};
    return P2D_OK;
  });
}

void p2d_field_free(p2d_field* f) { delete f; }

p2d_status p2d_field_evaluate(const p2d_field* f, double x, double y, double* out) {
  if (!f) return null_argument("field");
  if (!out) return null_argument("out");
  return guarded([&] {
    *out = pauli2d::evaluate(f->field, {x, y});
    return P2D_OK;
  });
}

p2d_status p2d_field_flux(const p2d_field* f, double* out, int* has_analytic) {
  if (!f) return null_argument("field");
  if (!out) return null_argument("out");
  return guarded([&] {
    const auto a = pauli2d::flux(f->field);
    if (has_analytic) *has_analytic = a ? 1 : 0;
    *out = a ? *a : pauli2d::quadrature_flux(f->field).value;
    return P2D_OK;
  });
}

p2d_status p2d_field_quadrature_flux(const p2d_field* f, double* value, double* error) {
  if (!f) return null_argument("field");
  if (!value) return null_argument("value");
  return guarded([&] {
    const auto q = pauli2d::quadrature_flux(f->field);
    *value = q.value;
    if (error) *error = q.error;
    return P2D_OK;
  });
}

p2d_status p2d_potential_at(const p2d_field* f, double x, double y, double* out) {
  if (!f) return null_argument("field");
  if (!out) return null_argument("out");
  return guarded([&] {
    *out = pauli2d::potential_at(f->field, {x, y});
    return P2D_OK;
  });
}

p2d_status p2d_operator_create(const p2d_field* f, double L, int n, double g, int spin,
                               double lambda, p2d_operator** out) {
  if (!f) return null_argument("field");
  if (!out) return null_argument("out");
  *out = nullptr;
  if (spin != 1 && spin != -1) return fail(P2D_ERR_INVALID_ARGUMENT, "spin must be +1 or -1");
  return guarded([&] {
    const pauli2d::GridSpec grid{L, n};
    grid.validate();
    auto op = std::make_unique<pauli2d::PauliOperator>(
        f->field, grid, g, spin > 0 ? pauli2d::Spin::plus : pauli2d::Spin::minus, lambda);
    *out = new p2d_operator{std::move(op)};
    return P2D_OK;
  });
}

void p2d_operator_free(p2d_operator* op) { delete op; }

p2d_status p2d_operator_dimension(const p2d_operator* op, size_t* out) {
  if (!op) return null_argument("operator");
  if (!out) return null_argument("out");
  *out = op->op->dimension();
  return P2D_OK;
}

p2d_status p2d_operator_apply(const p2d_operator* op, const double* in, double* out) {
  if (!op) return null_argument("operator");
  if (!in || !out) return null_argument("vector");
  return guarded([&] {
    pauli2d::ComplexGrid u(op->op->grid());
    to_grid(in, u);
    const auto hu = op->op->apply_hamiltonian(u);
    for (std::size_t k = 0; k < hu.values.size(); ++k) {
      out[2 * k] = hu.values[k].real();
      out[2 * k + 1] = hu.values[k].imag();
    }
    return P2D_OK;
  });
}

p2d_status p2d_operator_energy(const p2d_operator* op, const double* psi, double* out) {
  if (!op) return null_argument("operator");
  if (!psi || !out) return null_argument("vector");
  return guarded([&] {
    pauli2d::ComplexGrid u(op->op->grid());
    to_grid(psi, u);
    *out = op->op->energy_form(u);
    return P2D_OK;
  });
}

p2d_status p2d_operator_lowest_eigenvalues(const p2d_operator* op, int k, double tolerance,
                                           uint64_t seed, double* values, int* converged) {
  if (!op) return null_argument("operator");
  if (!values) return null_argument("values");
  return guarded([&] {
    pauli2d::EigenOptions opt;
    opt.k = k;
    opt.tolerance = tolerance;
    opt.seed = seed;
    const auto s = pauli2d::lowest_eigenpairs(*op->op, opt);
    for (std::size_t i = 0; i < s.eigenvalues.size(); ++i) values[i] = s.eigenvalues[i];
    if (converged) *converged = s.converged ? 1 : 0;
    if (!s.converged)
      return fail(P2D_ERR_NUMERICAL, "eigensolver did not reach the requested tolerance");
    return P2D_OK;
  });
}

p2d_status p2d_run(const char* task, const char* config_json, const char* options_json,
                   p2d_result** out) {
  if (!task) return null_argument("task");
  if (!config_json) return null_argument("config");
  if (!out) return null_argument("out");
  *out = nullptr;
  return guarded([&] {
    pauli2d::Json cfg;
    try {
      cfg = pauli2d::Json::parse(config_json);
    } catch (const nlohmann::json::parse_error& e) {
      throw pauli2d::ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (options_json && *options_json) {
      pauli2d::Json opts;
      try {
        opts = pauli2d::Json::parse(options_json);
      } catch (const nlohmann::json::parse_error& e) {
        throw pauli2d::ConfigError(std::string("options are not valid JSON: ") + e.what());
      }
      if (!opts.is_object()) throw pauli2d::ConfigError("options must be a JSON object");
      for (auto it = opts.begin(); it != opts.end(); ++it) {
        if (it.key() != "seed") throw pauli2d::ConfigError("unknown option '" + it.key() + "'");
        if (cfg.is_object()) cfg["seed"] = it.value();
      }
    }
    const pauli2d::ScenarioConfig sc = pauli2d::parse_scenario(cfg);
    auto r = std::make_unique<p2d_result>();
    r->result = pauli2d::run_task(task, sc);
    r->report = pauli2d::report_text(r->result);
    const bool failed = r->result.numerical_failure;
    const std::string msg = r->result.report["status"]["message"].get<std::string>();
    *out = r.release();
    return failed ? fail(P2D_ERR_NUMERICAL, msg) : P2D_OK;
  });
}

void p2d_result_free(p2d_result* r) { delete r; }

const char* p2d_result_report_name(const p2d_result* r) {
  return r ? r->result.report_name.c_str() : nullptr;
}

const char* p2d_result_report(const p2d_result* r) { return r ? r->report.c_str() : nullptr; }

size_t p2d_result_artifact_count(const p2d_result* r) {
  return r ? r->result.artifacts.size() : 0;
}

const char* p2d_result_artifact_name(const p2d_result* r, size_t i) {
  if (!r || i >= r->result.artifacts.size()) return nullptr;
  return r->result.artifacts[i].name.c_str();
}

const char* p2d_result_artifact_content(const p2d_result* r, size_t i) {
  if (!r || i >= r->result.artifacts.size()) return nullptr;
  return r->result.artifacts[i].content.c_str();
}

}  // extern "C"
