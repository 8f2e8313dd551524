// fomcell-cli: thin front end over the C API.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "fomcell/fomcell.h"

using nlohmann::json;

namespace {

// JSON config file: top-level keys are global options, nested objects are
// subcommand sections. Values from the command line take precedence.
class JsonConfig : public CLI::Config {
 public:
  std::string to_config(const CLI::App* app, bool default_also, bool, std::string) const override {
    return dump(app, default_also).dump(2) + "\n";
  }

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    json j;
    try {
      input >> j;
    } catch (const json::exception& e) {
      throw CLI::ConversionError(std::string("config file: ") + e.what());
    }
    if (!j.is_object()) throw CLI::ConversionError("config file must hold a JSON object");
    std::vector<CLI::ConfigItem> out;
    flatten(j, {}, out);
    return out;
  }

 private:
  static void flatten(const json& obj, const std::vector<std::string>& parents, std::vector<CLI::ConfigItem>& out) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
      if (it->is_object()) {
        auto p = parents;
        p.push_back(it.key());
        flatten(*it, p, out);
        continue;
      }
      CLI::ConfigItem item;
      item.parents = parents;
      item.name = it.key();
      if (it->is_array()) {
        for (const auto& v : *it) item.inputs.push_back(scalar(v, it.key()));
      } else {
        item.inputs.push_back(scalar(*it, it.key()));
      }
      out.push_back(std::move(item));
    }
  }

  static std::string scalar(const json& v, const std::string& key) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number()) return v.dump();
    throw CLI::ConversionError("config key '" + key + "' has an unsupported value");
  }

  static json dump(const CLI::App* app, bool default_also) {
    json j = json::object();
    for (const CLI::Option* opt : app->get_options()) {
      if (opt->get_lnames().empty() || opt->get_configurable() == false) continue;
      const std::string name = opt->get_lnames().front();
      if (opt->count() > 0) {
        const auto& res = opt->results();
        j[name] = res.size() == 1 ? json(res.front()) : json(res);
      } else if (default_also && !opt->get_default_str().empty()) {
        j[name] = opt->get_default_str();
      }
    }
    for (const CLI::App* sub : app->get_subcommands({})) {
      json s = dump(sub, default_also);
      if (!s.empty()) j[sub->get_name()] = s;
    }
    return j;
  }
};

struct CliFailure {
  fomcell_status status;
  std::string message;
};

void check(fomcell_status s) {
  if (s != FOMCELL_OK) throw CliFailure{s, fomcell_last_error()};
}

struct ModelDel {
  void operator()(fomcell_model* m) const { fomcell_model_free(m); }
};
struct TableDel {
  void operator()(fomcell_table* t) const { fomcell_table_free(t); }
};
struct StringDel {
  void operator()(char* s) const { fomcell_free_string(s); }
};
using ModelPtr = std::unique_ptr<fomcell_model, ModelDel>;
using TablePtr = std::unique_ptr<fomcell_table, TableDel>;
using StringPtr = std::unique_ptr<char, StringDel>;

ModelPtr load_model(const std::string& path) {
  fomcell_model* m = nullptr;
  check(fomcell_model_load(path.c_str(), &m));
  return ModelPtr(m);
}

TablePtr load_table(const std::string& path) {
  fomcell_table* t = nullptr;
  check(fomcell_table_read_csv(path.c_str(), &t));
  return TablePtr(t);
}

std::vector<double> column(const fomcell_table* t, const std::string& name) {
  const double* data = nullptr;
  size_t n = 0;
  check(fomcell_table_column(t, name.c_str(), &data, &n));
  return {data, data + n};
}

bool has_column(const fomcell_table* t, const std::string& name) {
  for (size_t k = 0; k < fomcell_table_columns(t); ++k)
    if (name == fomcell_table_column_name(t, k)) return true;
  return false;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CliFailure{FOMCELL_IO, "cannot open '" + path + "' for reading"};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out || !(out << text)) throw CliFailure{FOMCELL_IO, "cannot write '" + path + "'"};
}

json parse(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw CliFailure{FOMCELL_PARSE, what + ": " + e.what()};
  }
}

json report_json(const fomcell_report& r) {
  return {{"rmse", r.rmse}, {"mae", r.mae}, {"max_abs_err", r.max_abs_err}, {"samples", r.samples}};
}

int emit_error(fomcell_status s, const std::string& message) {
  std::cerr << json{{"error", fomcell_status_name(s)}, {"code", static_cast<int>(s)}, {"message", message}}.dump()
            << "\n";
  return static_cast<int>(s);
}

struct Globals {
  double tol = 1e-6;
  std::optional<std::uint64_t> seed;
  unsigned threads = 1;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fractional-order Li-ion cell model: simulation, identification and benchmarks", "fomcell-cli"};
  app.require_subcommand(1);
  app.fallthrough();
  app.config_formatter(std::make_shared<JsonConfig>());
  app.set_config("--config", "", "JSON config file; command-line flags win on conflict");
  app.set_version_flag("--version", std::string(fomcell_version()));

  Globals g;
  app.add_option("--tol", g.tol, "Mittag-Leffler tolerance")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--seed", g.seed, "random seed (overrides the protocol's)");
  app.add_option("--threads", g.threads, "worker threads for identification")->check(CLI::Range(1u, 1024u));

  // ml-eval
  auto* ml = app.add_subcommand("ml-eval", "evaluate E_{alpha,beta}(z); one JSON object per z");
  double ml_alpha = 0.0;
  double ml_beta = 1.0;
  std::vector<double> ml_z;
  int ml_terms = 200;
  ml->add_option("--alpha", ml_alpha)->required();
  ml->add_option("--beta", ml_beta)->capture_default_str();
  ml->add_option("--z", ml_z, "one or more arguments")->required();
  ml->add_option("--max-terms", ml_terms)->capture_default_str();

  // simulate
  auto* sim = app.add_subcommand("simulate", "simulate a model over a current trace");
  std::string sim_model, sim_trace, sim_out, sim_method = "caputo";
  int sim_memory = 64;
  std::optional<double> sim_soc0;
  sim->add_option("--model", sim_model)->required()->check(CLI::ExistingFile);
  sim->add_option("--trace", sim_trace, "CSV with columns t,i (v optional)")->required()->check(CLI::ExistingFile);
  sim->add_option("--out", sim_out, "output CSV (t,i,v,soc,u1..un)")->required();
  sim->add_option("--method", sim_method)->check(CLI::IsMember({"caputo", "gl", "analytic"}))->capture_default_str();
  sim->add_option("--memory", sim_memory, "G-L memory length N")->check(CLI::PositiveNumber)->capture_default_str();
  sim->add_option("--soc0", sim_soc0, "initial SOC (default: trace soc column, model soc0, else 0.5)");

  // gen
  auto* gen = app.add_subcommand("gen", "generate synthetic data from a model and protocol");
  std::string gen_model, gen_protocol, gen_out, gen_truth;
  gen->add_option("--model", gen_model)->required()->check(CLI::ExistingFile);
  gen->add_option("--protocol", gen_protocol)->required()->check(CLI::ExistingFile);
  gen->add_option("--out", gen_out)->required();
  gen->add_option("--truth", gen_truth, "sidecar JSON with model, protocol and states");

  // identify
  auto* idn = app.add_subcommand("identify", "identify a model from an HPPC trace");
  std::string id_trace, id_ocv, id_ocv_dis, id_out, id_report, id_settings;
  int id_branches = 1;
  std::optional<double> id_qn, id_soc0, id_alpha_fixed;
  std::optional<std::string> id_sign, id_amplitude;
  bool id_offset = false;
  idn->add_option("--trace", id_trace)->required()->check(CLI::ExistingFile);
  idn->add_option("--ocv", id_ocv, "OCV CSV (soc,v), or the slow-charge curve with --ocv-discharge")
      ->required()
      ->check(CLI::ExistingFile);
  idn->add_option("--ocv-discharge", id_ocv_dis, "slow-discharge curve; averaged with --ocv")
      ->check(CLI::ExistingFile);
  idn->add_option("--branches", id_branches)->check(CLI::Range(1, 8))->capture_default_str();
  idn->add_option("--out", id_out)->required();
  idn->add_option("--report", id_report, "write per-segment JSON lines here instead of stdout");
  idn->add_option("--settings", id_settings, "identification settings JSON (flags override)")
      ->check(CLI::ExistingFile);
  idn->add_option("--qn", id_qn, "nominal capacity in coulomb");
  idn->add_option("--soc0", id_soc0, "SOC at the start of the trace");
  idn->add_option("--sign", id_sign)->check(CLI::IsMember({"charge-positive", "discharge-positive"}));
  idn->add_option("--amplitude", id_amplitude)->check(CLI::IsMember({"pulse-aware", "saturated"}));
  idn->add_option("--alpha-fixed", id_alpha_fixed);
  idn->add_flag("--fit-offset", id_offset);

  // evaluate
  auto* ev = app.add_subcommand("evaluate", "error metrics between two voltage series");
  std::string ev_pred, ev_meas, ev_pred_col = "v", ev_meas_col = "v";
  ev->add_option("--pred", ev_pred)->required()->check(CLI::ExistingFile);
  ev->add_option("--meas", ev_meas)->required()->check(CLI::ExistingFile);
  ev->add_option("--pred-column", ev_pred_col)->capture_default_str();
  ev->add_option("--meas-column", ev_meas_col)->capture_default_str();

  // benchmark
  auto* bm = app.add_subcommand("benchmark", "Caputo recursion vs. G-L baseline on one trace");
  std::string bm_model, bm_trace;
  int bm_memory = 64;
  int bm_repeats = 5;
  std::optional<double> bm_soc0;
  bm->add_option("--model", bm_model)->required()->check(CLI::ExistingFile);
  bm->add_option("--trace", bm_trace)->required()->check(CLI::ExistingFile);
  bm->add_option("--memory", bm_memory)->check(CLI::PositiveNumber)->capture_default_str();
  bm->add_option("--repeats", bm_repeats)->check(CLI::PositiveNumber)->capture_default_str();
  bm->add_option("--soc0", bm_soc0);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << json{{"error", "usage"}, {"code", e.get_exit_code()}, {"message", e.what()}}.dump() << "\n";
    return e.get_exit_code() ? e.get_exit_code() : 1;
  }

  try {
    if (*ml) {
      for (double z : ml_z) {
        fomcell_ml_result r{};
        check(fomcell_ml_eval(ml_alpha, ml_beta, z, g.tol, ml_terms, &r));
        std::cout << json{{"alpha", ml_alpha}, {"beta", ml_beta}, {"z", z}, {"value", r.value},
                          {"terms_used", r.terms_used}, {"converged", r.converged != 0}}
                         .dump()
                  << "\n";
      }
    } else if (*sim) {
      const ModelPtr m = load_model(sim_model);
      const TablePtr trace = load_table(sim_trace);
      fomcell_sim_options opt = fomcell_sim_options_default();
      opt.method = sim_method == "gl" ? FOMCELL_GL : sim_method == "analytic" ? FOMCELL_ANALYTIC : FOMCELL_CAPUTO;
      opt.memory = sim_memory;
      opt.tol = g.tol;
      opt.soc0 = sim_soc0.value_or(std::nan(""));
      // A trace written by gen carries its own SOC column; start from it.
      if (!sim_soc0 && has_column(trace.get(), "soc") && fomcell_table_rows(trace.get()) > 0)
        opt.soc0 = column(trace.get(), "soc").front();
      fomcell_table* raw = nullptr;
      check(fomcell_simulate(m.get(), trace.get(), &opt, &raw));
      const TablePtr out(raw);
      check(fomcell_table_write_csv(out.get(), sim_out.c_str()));
      if (has_column(trace.get(), "v")) {
        const auto pred = column(out.get(), "v");
        const auto meas = column(trace.get(), "v");
        fomcell_report r{};
        check(fomcell_evaluate(pred.data(), meas.data(), pred.size(), &r));
        std::cout << report_json(r).dump() << "\n";
      }
    } else if (*gen) {
      const ModelPtr m = load_model(gen_model);
      json protocol = parse(read_file(gen_protocol), gen_protocol);
      if (g.seed) protocol["seed"] = *g.seed;
      if (app.get_option("--tol")->count() > 0) protocol["ml_tol"] = g.tol;
      fomcell_table* raw = nullptr;
      char* truth = nullptr;
      check(fomcell_generate(m.get(), protocol.dump().c_str(), &raw, gen_truth.empty() ? nullptr : &truth));
      const TablePtr out(raw);
      const StringPtr truth_owner(truth);
      check(fomcell_table_write_csv(out.get(), gen_out.c_str()));
      if (truth) write_file(gen_truth, std::string(truth) + "\n");
    } else if (*idn) {
      json cfg = id_settings.empty() ? json::object() : parse(read_file(id_settings), id_settings);
      cfg["branches"] = id_branches;
      if (id_qn) cfg["qn"] = *id_qn;
      if (id_soc0) cfg["soc0"] = *id_soc0;
      if (id_sign) cfg["sign"] = *id_sign;
      if (id_amplitude) cfg["amplitude"] = *id_amplitude;
      if (id_alpha_fixed) cfg["alpha_fixed"] = *id_alpha_fixed;
      if (id_offset) cfg["fit_offset"] = true;
      if (app.get_option("--threads")->count() > 0 || !cfg.contains("threads")) cfg["threads"] = g.threads;
      if (app.get_option("--tol")->count() > 0) cfg["ml_tol"] = g.tol;
      const TablePtr trace = load_table(id_trace);
      const TablePtr ocv = load_table(id_ocv);
      const TablePtr ocv_dis = id_ocv_dis.empty() ? nullptr : load_table(id_ocv_dis);
      char* model_json = nullptr;
      char* report = nullptr;
      const fomcell_status s =
          fomcell_identify(trace.get(), ocv.get(), ocv_dis.get(), cfg.dump().c_str(), &model_json, &report);
      const StringPtr model_owner(model_json);
      const StringPtr report_owner(report);
      check(s);
      write_file(id_out, std::string(model_json) + "\n");
      if (id_report.empty()) std::cout << report;
      else write_file(id_report, report);
    } else if (*ev) {
      const TablePtr p = load_table(ev_pred);
      const TablePtr q = load_table(ev_meas);
      const auto pred = column(p.get(), ev_pred_col);
      const auto meas = column(q.get(), ev_meas_col);
      if (pred.size() != meas.size())
        throw CliFailure{FOMCELL_INVALID_ARGUMENT, "series lengths differ: " + std::to_string(pred.size()) +
                                                       " predicted vs " + std::to_string(meas.size()) + " measured"};
      fomcell_report r{};
      check(fomcell_evaluate(pred.data(), meas.data(), pred.size(), &r));
      std::cout << report_json(r).dump() << "\n";
    } else if (*bm) {
      const ModelPtr m = load_model(bm_model);
      const TablePtr trace = load_table(bm_trace);
      double soc0 = bm_soc0.value_or(std::nan(""));
      if (!bm_soc0 && has_column(trace.get(), "soc") && fomcell_table_rows(trace.get()) > 0)
        soc0 = column(trace.get(), "soc").front();
      char* out = nullptr;
      check(fomcell_benchmark(m.get(), trace.get(), bm_memory, g.tol, soc0, bm_repeats,
                              &out));
      const StringPtr owner(out);
      std::cout << out << "\n";
    }
  } catch (const CliFailure& f) {
    return emit_error(f.status, f.message);
  } catch (const std::exception& e) {
    return emit_error(FOMCELL_INTERNAL, e.what());
  }
  return 0;
}
