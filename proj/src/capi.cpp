#include "haantjes.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <map>
#include <memory>
#include <new>
#include <string>
#include <utility>

#include "haantjes/expression.hpp"
#include "haantjes/model.hpp"
#include "haantjes/point.hpp"
#include "haantjes/report.hpp"
#include "haantjes/verify.hpp"

namespace {

thread_local std::string g_last_error;

hj_status fail(hj_status code, const std::string& message) {
  g_last_error = message;
  return code;
}

// Runs fn, translating library exceptions into status codes.
template <typename Fn>
hj_status guard(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return HJ_OK;
  } catch (const haantjes::ParseError& e) {
    return fail(HJ_ERROR_PARSE, e.what());
  } catch (const haantjes::InvalidModel& e) {
    return fail(HJ_ERROR_INVALID_ARGUMENT, e.what());
  } catch (const haantjes::DomainError& e) {
    return fail(HJ_ERROR_DOMAIN, e.what());
  } catch (const std::bad_alloc&) {
    return fail(HJ_ERROR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(HJ_ERROR_INTERNAL, e.what());
  }
}

hj_status collect_params(const char* const* names, const double* values, size_t count,
                         std::map<std::string, double>& out) {
  if (count > 0 && (names == nullptr || values == nullptr)) {
    return fail(HJ_ERROR_INVALID_ARGUMENT, "parameter arrays are null but param_count is nonzero");
  }
  for (size_t i = 0; i < count; ++i) {
    if (names[i] == nullptr) {
      return fail(HJ_ERROR_INVALID_ARGUMENT, "parameter name is null");
    }
    out[names[i]] = values[i];
  }
  return HJ_OK;
}

}  // namespace

struct hj_model {
  haantjes::Model model;
};

struct hj_report {
  haantjes::VerificationReport report;
};

struct hj_expression {
  haantjes::Expression expr;
  int n_dof = 0;
};

extern "C" {

const char* hj_last_error(void) { return g_last_error.c_str(); }

const char* hj_version(void) { return "1.0.0"; }

hj_status hj_model_open_file(const char* path, const char* const* param_names,
                             const double* param_values, size_t param_count, hj_model** out) {
  if (path == nullptr || out == nullptr) {
    return fail(HJ_ERROR_INVALID_ARGUMENT, "path and out must be non-null");
  }
  std::map<std::string, double> params;
  if (hj_status s = collect_params(param_names, param_values, param_count, params); s != HJ_OK) {
    return s;
  }
  {
    std::ifstream probe(path);
    if (!probe.good()) {
      return fail(HJ_ERROR_IO, std::string("cannot open model file: ") + path);
    }
  }
  return guard([&] {
    auto m = std::make_unique<hj_model>();
    m->model = haantjes::load_model(path, params);
    *out = m.release();
  });
}

hj_status hj_model_open_builtin(const char* id, const char* const* param_names,
                                const double* param_values, size_t param_count, hj_model** out) {
  if (id == nullptr || out == nullptr) {
    return fail(HJ_ERROR_INVALID_ARGUMENT, "id and out must be non-null");
  }
  std::map<std::string, double> params;
  if (hj_status s = collect_params(param_names, param_values, param_count, params); s != HJ_OK) {
    return s;
  }
  return guard([&] {
    auto m = std::make_unique<hj_model>();
    m->model = haantjes::load_builtin(id, params);
    *out = m.release();
  });
}

void hj_model_free(hj_model* m) { delete m; }

hj_status hj_verify(const hj_model* m, const hj_verify_options* opt, hj_report** out) {
  if (m == nullptr || out == nullptr) {
    return fail(HJ_ERROR_INVALID_ARGUMENT, "model and out must be non-null");
  }
  haantjes::VerifyOptions vo;
  if (opt != nullptr) {
    if (opt->suite != nullptr) vo.suite = opt->suite;
    if (opt->samples > 0) vo.samples = opt->samples;
    vo.seed = opt->seed;
    vo.tol = opt->tol;
  }
  return guard([&] {
    auto r = std::make_unique<hj_report>();
    r->report = haantjes::run_verification(m->model, vo);
    *out = r.release();
  });
}

size_t hj_report_count(const hj_report* r) {
  return r == nullptr ? 0 : r->report.records().size();
}

hj_status hj_report_check(const hj_report* r, size_t index, hj_check* out) {
  if (r == nullptr || out == nullptr) {
    return fail(HJ_ERROR_INVALID_ARGUMENT, "report and out must be non-null");
  }
  const auto& records = r->report.records();
  if (index >= records.size()) {
    return fail(HJ_ERROR_INVALID_ARGUMENT, "check index out of range");
  }
  const haantjes::CheckRecord& rec = records[index];
  out->id = rec.id.c_str();
  out->note = rec.note.c_str();
  out->samples = rec.samples;
  out->residual = rec.residual;
  out->tol = rec.tol;
  out->pass = rec.pass ? 1 : 0;
  out->asserted = rec.asserted ? 1 : 0;
  return HJ_OK;
}

int hj_report_passed(const hj_report* r) {
  return (r != nullptr && r->report.all_passed()) ? 1 : 0;
}

hj_status hj_report_render(const hj_report* r, const char* format, char** out) {
  if (r == nullptr || format == nullptr || out == nullptr) {
    return fail(HJ_ERROR_INVALID_ARGUMENT, "report, format, and out must be non-null");
  }
  std::string text;
  if (std::strcmp(format, "text") == 0) {
    text = r->report.render_text();
  } else if (std::strcmp(format, "machine") == 0) {
    text = r->report.render_machine();
  } else {
    return fail(HJ_ERROR_INVALID_ARGUMENT, std::string("unknown report format: ") + format);
  }
  char* buffer = static_cast<char*>(std::malloc(text.size() + 1));
  if (buffer == nullptr) {
    return fail(HJ_ERROR_INTERNAL, "out of memory");
  }
  std::memcpy(buffer, text.c_str(), text.size() + 1);
  *out = buffer;
  return HJ_OK;
}

void hj_report_free(hj_report* r) { delete r; }

void hj_string_free(char* s) { std::free(s); }

hj_status hj_expression_parse(const char* text, int n_dof, const char* const* param_names,
                              const double* param_values, size_t param_count,
                              hj_expression** out) {
  if (text == nullptr || out == nullptr) {
    return fail(HJ_ERROR_INVALID_ARGUMENT, "text and out must be non-null");
  }
  if (n_dof < 1 || n_dof > haantjes::kMaxDof) {
    return fail(HJ_ERROR_INVALID_ARGUMENT, "n_dof out of range");
  }
  std::map<std::string, double> params;
  if (hj_status s = collect_params(param_names, param_values, param_count, params); s != HJ_OK) {
    return s;
  }
  return guard([&] {
    auto e = std::make_unique<hj_expression>();
    e->expr = haantjes::parse_expression(text, n_dof, params);
    e->n_dof = n_dof;
    *out = e.release();
  });
}

namespace {

hj_status expression_point(const hj_expression* e, const double* coords, int n_dof,
                           haantjes::PhasePoint& x) {
  if (e == nullptr || coords == nullptr) {
    return fail(HJ_ERROR_INVALID_ARGUMENT, "expression and coords must be non-null");
  }
  if (n_dof != e->n_dof) {
    return fail(HJ_ERROR_INVALID_ARGUMENT, "n_dof does not match the value used at parse time");
  }
  x = haantjes::PhasePoint(n_dof);
  for (int i = 0; i < 2 * n_dof; ++i) {
    x.coord(i) = coords[i];
  }
  return HJ_OK;
}

}  // namespace

hj_status hj_expression_eval(const hj_expression* e, const double* coords, int n_dof,
                             double* out_value) {
  if (out_value == nullptr) {
    return fail(HJ_ERROR_INVALID_ARGUMENT, "out_value must be non-null");
  }
  haantjes::PhasePoint x(1);
  if (hj_status s = expression_point(e, coords, n_dof, x); s != HJ_OK) {
    return s;
  }
  return guard([&] { *out_value = e->expr.eval(x); });
}

hj_status hj_expression_gradient(const hj_expression* e, const double* coords, int n_dof,
                                 double* out_value, double* out_gradient) {
  if (out_value == nullptr || out_gradient == nullptr) {
    return fail(HJ_ERROR_INVALID_ARGUMENT, "out_value and out_gradient must be non-null");
  }
  haantjes::PhasePoint x(1);
  if (hj_status s = expression_point(e, coords, n_dof, x); s != HJ_OK) {
    return s;
  }
  return guard([&] {
    haantjes::DualValue d = e->expr.eval_dual(x);
    *out_value = d.value;
    for (int i = 0; i < 2 * n_dof; ++i) {
      out_gradient[i] = d.gradient[static_cast<std::size_t>(i)];
    }
  });
}

void hj_expression_free(hj_expression* e) { delete e; }

}  // extern "C"
