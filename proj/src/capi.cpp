#include "fomcell/fomcell.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "fomcell/error.hpp"
#include "fomcell/io.hpp"
#include "fomcell/metrics.hpp"
#include "fomcell/mlfunc.hpp"

using nlohmann::json;

struct fomcell_model {
  fomcell::ModelDocument doc;
};

struct fomcell_table {
  fomcell::Table table;
};

namespace {

thread_local std::string g_last_error;

fomcell_status status_of(fomcell::ErrorCode c) {
  switch (c) {
    case fomcell::ErrorCode::invalid_argument: return FOMCELL_INVALID_ARGUMENT;
    case fomcell::ErrorCode::domain: return FOMCELL_DOMAIN;
    case fomcell::ErrorCode::range: return FOMCELL_RANGE;
    case fomcell::ErrorCode::non_finite: return FOMCELL_NONFINITE;
    case fomcell::ErrorCode::io: return FOMCELL_IO;
    case fomcell::ErrorCode::parse: return FOMCELL_PARSE;
  }
  return FOMCELL_INTERNAL;
}

// Runs f, translating exceptions into status codes at the ABI boundary.
template <class F>
fomcell_status guarded(F&& f) {
  try {
    g_last_error.clear();
    f();
    return FOMCELL_OK;
  } catch (const fomcell::Error& e) {
    g_last_error = e.what();
    return status_of(e.code());
  } catch (const json::exception& e) {
    g_last_error = e.what();
    return FOMCELL_PARSE;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return FOMCELL_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return FOMCELL_INTERNAL;
  } catch (...) {
    g_last_error = "unknown exception";
    return FOMCELL_INTERNAL;
  }
}

void need(const void* p, const char* what) {
  if (!p) fomcell::fail(fomcell::ErrorCode::invalid_argument, std::string(what) + " must not be null");
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

// T from a uniformly sampled time column.
double period_of(const std::vector<double>& t) {
  if (t.size() < 2) fomcell::fail(fomcell::ErrorCode::invalid_argument, "trace needs at least two samples");
  return t[1] - t[0];
}

}  // namespace

extern "C" {

const char* fomcell_status_name(fomcell_status s) {
  switch (s) {
    case FOMCELL_OK: return "ok";
    case FOMCELL_INVALID_ARGUMENT: return "invalid_argument";
    case FOMCELL_DOMAIN: return "domain";
    case FOMCELL_RANGE: return "range";
    case FOMCELL_NONFINITE: return "non_finite";
    case FOMCELL_IO: return "io";
    case FOMCELL_PARSE: return "parse";
    case FOMCELL_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* fomcell_last_error(void) { return g_last_error.c_str(); }

const char* fomcell_version(void) { return "0.1.0"; }

void fomcell_free_string(char* s) { std::free(s); }

fomcell_status fomcell_ml_eval(double alpha, double beta, double z, double tol, int32_t max_terms,
                               fomcell_ml_result* out) {
  return guarded([&] {
    need(out, "out");
    const fomcell::MLResult r = fomcell::ml_two({alpha, beta, z, tol, max_terms});
    *out = {r.value, r.terms_used, r.converged ? 1 : 0, static_cast<int32_t>(r.method)};
  });
}

fomcell_status fomcell_gamma(double x, double* out) {
  return guarded([&] {
    need(out, "out");
    *out = fomcell::gamma_fn(x);
  });
}

fomcell_status fomcell_model_from_json(const char* text, fomcell_model** out) {
  return guarded([&] {
    need(text, "json");
    need(out, "out");
    *out = new fomcell_model{fomcell::model_from_json(fomcell::parse_json(text, "model"))};
  });
}

fomcell_status fomcell_model_load(const char* path, fomcell_model** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = new fomcell_model{fomcell::model_from_json(fomcell::parse_json(fomcell::read_text_file(path), path))};
  });
}

fomcell_status fomcell_model_to_json(const fomcell_model* m, char** out) {
  return guarded([&] {
    need(m, "model");
    need(out, "out");
    *out = dup_string(fomcell::model_to_json(m->doc).dump(2));
  });
}

fomcell_status fomcell_model_save(const fomcell_model* m, const char* path) {
  return guarded([&] {
    need(m, "model");
    need(path, "path");
    fomcell::write_text_file(path, fomcell::model_to_json(m->doc).dump(2) + "\n");
  });
}

void fomcell_model_free(fomcell_model* m) { delete m; }

fomcell_status fomcell_table_create(fomcell_table** out) {
  return guarded([&] {
    need(out, "out");
    *out = new fomcell_table{};
  });
}

fomcell_status fomcell_table_read_csv(const char* path, fomcell_table** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = new fomcell_table{fomcell::read_csv(path)};
  });
}

fomcell_status fomcell_table_write_csv(const fomcell_table* t, const char* path) {
  return guarded([&] {
    need(t, "table");
    need(path, "path");
    fomcell::write_csv(path, t->table);
  });
}

fomcell_status fomcell_table_add_column(fomcell_table* t, const char* name, const double* values, size_t n) {
  return guarded([&] {
    need(t, "table");
    need(name, "name");
    if (n) need(values, "values");
    t->table.add_column(name, std::vector<double>(values, values + n));
  });
}

size_t fomcell_table_rows(const fomcell_table* t) { return t ? t->table.rows() : 0; }

size_t fomcell_table_columns(const fomcell_table* t) { return t ? t->table.cols() : 0; }

fomcell_status fomcell_table_column(const fomcell_table* t, const char* name, const double** data, size_t* n) {
  return guarded([&] {
    need(t, "table");
    need(name, "name");
    need(data, "data");
    need(n, "n");
    const auto& c = t->table.column(name);
    *data = c.data();
    *n = c.size();
  });
}

const char* fomcell_table_column_name(const fomcell_table* t, size_t idx) {
  if (!t || idx >= t->table.cols()) return nullptr;
  return t->table.names()[idx].c_str();
}

void fomcell_table_free(fomcell_table* t) { delete t; }

fomcell_sim_options fomcell_sim_options_default(void) {
  return {FOMCELL_CAPUTO, fomcell::kDefaultGlMemory, fomcell::kDefaultTolerance, std::nan("")};
}

fomcell_status fomcell_simulate(const fomcell_model* m, const fomcell_table* trace, const fomcell_sim_options* opt,
                                fomcell_table** out) {
  return guarded([&] {
    need(m, "model");
    need(trace, "trace");
    need(out, "out");
    const fomcell_sim_options o = opt ? *opt : fomcell_sim_options_default();
    const auto& t = trace->table.column("t");
    const auto& i = trace->table.column("i");
    const double soc0 = std::isnan(o.soc0) ? m->doc.soc0.value_or(0.5) : o.soc0;
    const fomcell::CellModel& model = m->doc.model;
    const fomcell::CellState init = fomcell::rest_state(model, soc0);
    const double T = m->doc.T;
    fomcell::Trajectory tr;
    switch (o.method) {
      case FOMCELL_CAPUTO:
        tr = fomcell::simulate_trace(fomcell::discretize(model, T, o.tol), init, t, i);
        break;
      case FOMCELL_GL:
        if (o.memory < 1) fomcell::fail(fomcell::ErrorCode::invalid_argument, "memory must be at least 1");
        tr = fomcell::gl_simulate_trace(model, o.memory, init, t, i, T);
        break;
      case FOMCELL_ANALYTIC:
        tr = fomcell::simulate_piecewise_analytic(model, init, t, i, T, o.tol);
        break;
      default:
        fomcell::fail(fomcell::ErrorCode::invalid_argument, "unknown simulation method");
    }
    *out = new fomcell_table{fomcell::trajectory_table(tr)};
  });
}

fomcell_status fomcell_evaluate(const double* pred, const double* meas, size_t n, fomcell_report* out) {
  return guarded([&] {
    need(out, "out");
    if (n) {
      need(pred, "pred");
      need(meas, "meas");
    }
    const fomcell::RunReport r = fomcell::evaluate({pred, n}, {meas, n});
    *out = {r.rmse, r.mae, r.max_abs_err, r.runtime_per_step, r.peak_history_len, r.samples};
  });
}

fomcell_status fomcell_benchmark(const fomcell_model* m, const fomcell_table* trace, int32_t memory, double tol,
                                 double soc0, int32_t repeats, char** out) {
  return guarded([&] {
    need(m, "model");
    need(trace, "trace");
    need(out, "out");
    if (memory < 1) fomcell::fail(fomcell::ErrorCode::invalid_argument, "memory must be at least 1");
    const double s0 = std::isnan(soc0) ? m->doc.soc0.value_or(0.5) : soc0;
    const auto rep = fomcell::benchmark(m->doc.model, trace->table.column("t"), trace->table.column("i"), m->doc.T,
                                        memory, s0, tol, repeats);
    *out = dup_string(fomcell::benchmark_to_json(rep).dump());
  });
}

fomcell_status fomcell_generate(const fomcell_model* m, const char* protocol_json, fomcell_table** table,
                                char** truth_json) {
  return guarded([&] {
    need(m, "model");
    need(protocol_json, "protocol_json");
    need(table, "table");
    const fomcell::ProtocolSpec spec = fomcell::protocol_from_json(fomcell::parse_json(protocol_json, "protocol"));
    if (std::abs(spec.T - m->doc.T) > 1e-12 * m->doc.T)
      fomcell::fail(fomcell::ErrorCode::invalid_argument, "protocol T differs from the model's T");
    const fomcell::GeneratedData g = fomcell::generate(m->doc.model, spec);
    fomcell::Table out;
    out.add_column("t", g.truth.t);
    out.add_column("i", g.truth.i);
    out.add_column("v", g.v_noisy);
    out.add_column("v_true", g.truth.v);
    out.add_column("soc", g.truth.soc);
    if (truth_json) {
      fomcell::ModelDocument doc = m->doc;
      doc.soc0 = spec.soc0;
      json states = json::object();
      for (std::size_t j = 0; j < g.truth.u.size(); ++j) states["u" + std::to_string(j + 1)] = g.truth.u[j];
      const json sidecar = {{"model", fomcell::model_to_json(doc)},
                            {"protocol", fomcell::protocol_to_json(spec)},
                            {"states", states}};
      *truth_json = dup_string(sidecar.dump());
    }
    *table = new fomcell_table{std::move(out)};
  });
}

fomcell_status fomcell_identify(const fomcell_table* trace, const fomcell_table* ocv_charge,
                                const fomcell_table* ocv_discharge, const char* config_json, char** model_json,
                                char** report_jsonl) {
  return guarded([&] {
    need(trace, "trace");
    need(ocv_charge, "ocv");
    need(model_json, "model_json");
    const json cfg_doc = config_json && *config_json ? fomcell::parse_json(config_json, "config") : json::object();
    fomcell::IdentifyOptions opt = fomcell::identify_options_from_json(cfg_doc);
    if (!(opt.segmentation.qn > 0.0))
      fomcell::fail(fomcell::ErrorCode::invalid_argument, "identification needs the nominal capacity qn > 0");
    fomcell::OCVTable ocv =
        ocv_discharge
            ? fomcell::build_ocv({ocv_charge->table.column("soc"), ocv_charge->table.column("v")},
                                 {ocv_discharge->table.column("soc"), ocv_discharge->table.column("v")})
            : fomcell::ocv_from_table(ocv_charge->table);
    const auto& t = trace->table.column("t");
    const double T = opt.T > 0.0 ? opt.T : period_of(t);
    fomcell::check_uniform_sampling(t, T);
    const auto r = fomcell::identify(t, trace->table.column("i"), trace->table.column("v"), ocv, opt.segmentation,
                                     opt.fit, opt.threads);
    std::string lines;
    json segments = json::array();
    for (const auto& f : r.fits) {
      const json j = fomcell::fit_to_json(f);
      lines += j.dump() + "\n";
      segments.push_back(j);
    }
    for (const auto& issue : r.rejected) {
      const json j = {{"segment", issue.pulse_index}, {"sample", issue.sample}, {"rejected", issue.message}};
      lines += j.dump() + "\n";
    }
    fomcell::ModelDocument doc{
        fomcell::model_from_fits(r, ocv, opt.segmentation.qn, opt.segmentation.sign, opt.soc_ref), T,
        opt.soc_ref, segments};
    *model_json = dup_string(fomcell::model_to_json(doc).dump(2));
    if (report_jsonl) *report_jsonl = dup_string(lines);
  });
}

}  // extern "C"
