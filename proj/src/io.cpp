#include "fomcell/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "fomcell/error.hpp"

namespace fomcell {

using nlohmann::json;

bool Table::has(std::string_view name) const noexcept {
  for (const auto& n : names_)
    if (n == name) return true;
  return false;
}

const std::vector<double>& Table::column(std::string_view name) const {
  for (std::size_t k = 0; k < names_.size(); ++k)
    if (names_[k] == name) return columns_[k];
  std::string have;
  for (const auto& n : names_) have += (have.empty() ? "" : ",") + n;
  fail(ErrorCode::invalid_argument, "missing column '" + std::string(name) + "' (have: " + have + ")");
}

void Table::add_column(std::string name, std::vector<double> values) {
  if (has(name)) fail(ErrorCode::invalid_argument, "duplicate column '" + name + "'");
  if (!columns_.empty() && values.size() != rows())
    fail(ErrorCode::invalid_argument, "column '" + name + "' length differs from the table's");
  names_.push_back(std::move(name));
  columns_.push_back(std::move(values));
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

void append_number(std::string& out, double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, res.ptr);
}

}  // namespace

Table parse_csv(std::string_view text, const std::string& source) {
  if (text.size() >= 3 && text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);
  std::vector<std::string> names;
  std::vector<std::vector<double>> cols;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  bool header = true;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    line = trim(line);
    if (line.empty()) continue;
    const auto fields = split(line);
    if (header) {
      std::set<std::string_view> seen;
      for (auto f : fields) {
        if (f.empty()) fail(ErrorCode::parse, source + ":" + std::to_string(line_no) + ": empty column name in header");
        if (!seen.insert(f).second)
          fail(ErrorCode::parse, source + ":" + std::to_string(line_no) + ": duplicate column '" + std::string(f) + "'");
        names.emplace_back(f);
      }
      cols.resize(names.size());
      header = false;
      continue;
    }
    if (fields.size() != names.size()) {
      std::ostringstream os;
      os << source << ":" << line_no << ": expected " << names.size() << " fields, found " << fields.size();
      fail(ErrorCode::parse, os.str());
    }
    for (std::size_t c = 0; c < fields.size(); ++c) {
      std::string_view f = fields[c];
      if (!f.empty() && f.front() == '+') f.remove_prefix(1);
      double v = 0.0;
      const auto res = std::from_chars(f.data(), f.data() + f.size(), v);
      if (f.empty() || res.ec != std::errc() || res.ptr != f.data() + f.size() || !std::isfinite(v)) {
        std::ostringstream os;
        os << source << ":" << line_no << ": column '" << names[c] << "': '" << fields[c] << "' is not a finite number";
        fail(ErrorCode::parse, os.str());
      }
      cols[c].push_back(v);
    }
  }
  if (header) fail(ErrorCode::parse, source + ": missing header row");
  Table t;
  for (std::size_t c = 0; c < names.size(); ++c) t.add_column(std::move(names[c]), std::move(cols[c]));
  return t;
}

std::string format_csv(const Table& table) {
  std::string out;
  for (std::size_t c = 0; c < table.cols(); ++c) {
    if (c) out += ',';
    out += table.names()[c];
  }
  out += '\n';
  for (std::size_t r = 0; r < table.rows(); ++r) {
    for (std::size_t c = 0; c < table.cols(); ++c) {
      if (c) out += ',';
      append_number(out, table.column(c)[r]);
    }
    out += '\n';
  }
  return out;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::io, "cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) fail(ErrorCode::io, "error while reading '" + path + "'");
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::io, "cannot open '" + path + "' for writing");
  out << text;
  out.flush();
  if (!out) fail(ErrorCode::io, "error while writing '" + path + "'");
}

Table read_csv(const std::string& path) { return parse_csv(read_text_file(path), path); }

void write_csv(const std::string& path, const Table& table) { write_text_file(path, format_csv(table)); }

json parse_json(std::string_view text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorCode::parse, source + ": " + e.what());
  }
}

namespace {

// Typed accessors that report the key and document position on mismatch.
double get_number(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) fail(ErrorCode::parse, where + ": missing key '" + key + "'");
  const json& v = j.at(key);
  if (!v.is_number()) fail(ErrorCode::parse, where + ": '" + key + "' must be a number");
  return v.get<double>();
}

double get_number_or(const json& j, const char* key, double dflt, const std::string& where) {
  return j.contains(key) ? get_number(j, key, where) : dflt;
}

std::vector<double> get_numbers(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) fail(ErrorCode::parse, where + ": missing key '" + key + "'");
  const json& v = j.at(key);
  if (!v.is_array()) fail(ErrorCode::parse, where + ": '" + key + "' must be an array of numbers");
  std::vector<double> out;
  for (const auto& x : v) {
    if (!x.is_number()) fail(ErrorCode::parse, where + ": '" + key + "' must contain only numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

std::string get_string_or(const json& j, const char* key, const std::string& dflt, const std::string& where) {
  if (!j.contains(key)) return dflt;
  if (!j.at(key).is_string()) fail(ErrorCode::parse, where + ": '" + key + "' must be a string");
  return j.at(key).get<std::string>();
}

void reject_unknown_keys(const json& j, std::initializer_list<const char*> known, const std::string& where) {
  if (!j.is_object()) fail(ErrorCode::parse, where + ": expected a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : known) ok = ok || it.key() == k;
    if (!ok) fail(ErrorCode::parse, where + ": unknown key '" + it.key() + "'");
  }
}

}  // namespace

ModelDocument model_from_json(const json& j) {
  const std::string where = "model";
  reject_unknown_keys(j, {"R0", "Qn", "T", "sign", "branches", "ocv", "soc0", "segments"}, where);
  const double r0 = get_number(j, "R0", where);
  const double qn = get_number(j, "Qn", where);
  const double T = get_number(j, "T", where);
  const CurrentSign sign = current_sign_from_string(get_string_or(j, "sign", "charge-positive", where));
  if (!j.contains("branches") || !j.at("branches").is_array())
    fail(ErrorCode::parse, where + ": 'branches' must be an array");
  std::vector<FractionalBranch> branches;
  std::size_t idx = 0;
  for (const auto& b : j.at("branches")) {
    const std::string bw = where + ".branches[" + std::to_string(idx++) + "]";
    reject_unknown_keys(b, {"R", "C", "tau", "alpha"}, bw);
    const double R = get_number(b, "R", bw);
    const double alpha = get_number_or(b, "alpha", 1.0, bw);
    if (b.contains("C")) branches.push_back({R, get_number(b, "C", bw), alpha});
    else if (b.contains("tau")) branches.push_back(FractionalBranch::from_tau(R, get_number(b, "tau", bw), alpha));
    else fail(ErrorCode::parse, bw + ": needs 'C' or 'tau'");
  }
  if (!j.contains("ocv") || !j.at("ocv").is_object()) fail(ErrorCode::parse, where + ": 'ocv' must be an object");
  const json& o = j.at("ocv");
  reject_unknown_keys(o, {"soc", "v"}, where + ".ocv");
  OCVTable ocv(get_numbers(o, "soc", where + ".ocv"), get_numbers(o, "v", where + ".ocv"));
  ModelDocument doc{CellModel(r0, std::move(branches), qn, std::move(ocv), sign), T, std::nullopt, json()};
  if (!(T > 0.0)) fail(ErrorCode::domain, where + ": T must be positive");
  if (j.contains("soc0")) doc.soc0 = get_number(j, "soc0", where);
  if (j.contains("segments")) doc.segments = j.at("segments");
  return doc;
}

json model_to_json(const ModelDocument& doc) {
  const CellModel& m = doc.model;
  json j;
  j["R0"] = m.r0();
  j["Qn"] = m.qn();
  j["T"] = doc.T;
  j["sign"] = to_string(m.sign());
  json br = json::array();
  for (const auto& b : m.branches()) br.push_back({{"R", b.R}, {"C", b.C}, {"alpha", b.alpha}});
  j["branches"] = br;
  j["ocv"] = {{"soc", m.ocv().soc_grid()}, {"v", m.ocv().v_grid()}};
  if (doc.soc0) j["soc0"] = *doc.soc0;
  if (!doc.segments.is_null()) j["segments"] = doc.segments;
  return j;
}

OCVTable ocv_from_table(const Table& table) { return OCVTable(table.column("soc"), table.column("v")); }

ProtocolSpec protocol_from_json(const json& j) {
  const std::string w = "protocol";
  reject_unknown_keys(j,
                      {"kind", "T", "soc0", "pulse_current", "pulse_duration", "relax_duration", "initial_rest",
                       "rest_before_pulse", "transfer_current", "soc_steps", "current", "duration", "cycle_current",
                       "samples", "cycle_rms", "noise_sigma", "seed", "method", "gl_memory", "ml_tol"},
                      w);
  ProtocolSpec s;
  s.kind = protocol_kind_from_string(get_string_or(j, "kind", "hppc", w));
  s.T = get_number_or(j, "T", s.T, w);
  s.soc0 = get_number_or(j, "soc0", s.soc0, w);
  s.pulse_current = get_number_or(j, "pulse_current", s.pulse_current, w);
  s.pulse_duration = get_number_or(j, "pulse_duration", s.pulse_duration, w);
  s.relax_duration = get_number_or(j, "relax_duration", s.relax_duration, w);
  s.initial_rest = get_number_or(j, "initial_rest", s.initial_rest, w);
  s.rest_before_pulse = get_number_or(j, "rest_before_pulse", s.rest_before_pulse, w);
  s.transfer_current = get_number_or(j, "transfer_current", s.transfer_current, w);
  if (j.contains("soc_steps")) s.soc_steps = get_numbers(j, "soc_steps", w);
  s.current = get_number_or(j, "current", s.current, w);
  s.duration = get_number_or(j, "duration", s.duration, w);
  if (j.contains("cycle_current")) s.cycle_current = get_numbers(j, "cycle_current", w);
  if (j.contains("samples")) {
    if (!j.at("samples").is_number_unsigned()) fail(ErrorCode::parse, w + ": 'samples' must be a non-negative integer");
    s.samples = j.at("samples").get<std::size_t>();
  }
  s.cycle_rms = get_number_or(j, "cycle_rms", s.cycle_rms, w);
  s.noise_sigma = get_number_or(j, "noise_sigma", s.noise_sigma, w);
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned()) fail(ErrorCode::parse, w + ": 'seed' must be a non-negative integer");
    s.seed = j.at("seed").get<std::uint64_t>();
  }
  s.method = sim_method_from_string(get_string_or(j, "method", "caputo", w));
  if (j.contains("gl_memory")) {
    if (!j.at("gl_memory").is_number_integer()) fail(ErrorCode::parse, w + ": 'gl_memory' must be an integer");
    s.gl_memory = j.at("gl_memory").get<int>();
  }
  s.ml_tol = get_number_or(j, "ml_tol", s.ml_tol, w);
  return s;
}

json protocol_to_json(const ProtocolSpec& s) {
  json j;
  j["kind"] = to_string(s.kind);
  j["T"] = s.T;
  j["soc0"] = s.soc0;
  switch (s.kind) {
    case ProtocolKind::hppc:
      j["pulse_current"] = s.pulse_current;
      j["pulse_duration"] = s.pulse_duration;
      j["relax_duration"] = s.relax_duration;
      j["initial_rest"] = s.initial_rest;
      j["rest_before_pulse"] = s.rest_before_pulse;
      j["transfer_current"] = s.transfer_current;
      j["soc_steps"] = s.soc_steps;
      break;
    case ProtocolKind::constant_current:
      j["current"] = s.current;
      j["duration"] = s.duration;
      break;
    case ProtocolKind::drive_cycle:
      if (!s.cycle_current.empty()) j["cycle_current"] = s.cycle_current;
      j["samples"] = s.samples;
      j["cycle_rms"] = s.cycle_rms;
      break;
  }
  j["noise_sigma"] = s.noise_sigma;
  j["seed"] = s.seed;
  j["method"] = to_string(s.method);
  j["gl_memory"] = s.gl_memory;
  j["ml_tol"] = s.ml_tol;
  return j;
}

IdentifyOptions identify_options_from_json(const json& j) {
  const std::string w = "identify config";
  reject_unknown_keys(j,
                      {"branches", "qn", "soc0", "sign", "threshold", "rest_level", "min_relax_samples", "alpha_fixed",
                       "fit_offset", "amplitude", "pre_window", "R_bounds", "tau_bounds", "alpha_bounds", "max_iter",
                       "cost_tol", "step_tol", "grad_tol", "ml_tol", "threads", "soc_ref", "T"},
                      w);
  IdentifyOptions o;
  if (j.contains("branches")) {
    if (!j.at("branches").is_number_integer()) fail(ErrorCode::parse, w + ": 'branches' must be an integer");
    o.fit.n_branches = j.at("branches").get<int>();
  }
  o.segmentation.qn = get_number_or(j, "qn", 0.0, w);
  o.segmentation.soc0 = get_number_or(j, "soc0", o.segmentation.soc0, w);
  o.segmentation.sign = current_sign_from_string(get_string_or(j, "sign", "charge-positive", w));
  o.segmentation.threshold = get_number_or(j, "threshold", 0.0, w);
  o.segmentation.rest_level = get_number_or(j, "rest_level", 0.0, w);
  if (j.contains("min_relax_samples"))
    o.segmentation.min_relax_samples = static_cast<std::size_t>(get_number(j, "min_relax_samples", w));
  if (j.contains("alpha_fixed") && !j.at("alpha_fixed").is_null()) o.fit.alpha_fixed = get_number(j, "alpha_fixed", w);
  if (j.contains("fit_offset")) {
    if (!j.at("fit_offset").is_boolean()) fail(ErrorCode::parse, w + ": 'fit_offset' must be a boolean");
    o.fit.fit_offset = j.at("fit_offset").get<bool>();
  }
  o.fit.amplitude = relax_amplitude_from_string(get_string_or(j, "amplitude", "pulse-aware", w));
  if (j.contains("pre_window")) o.fit.pre_window = static_cast<int>(get_number(j, "pre_window", w));
  auto bounds = [&](const char* key, ParamBounds& b) {
    if (!j.contains(key)) return;
    const auto v = get_numbers(j, key, w);
    if (v.size() != 2) fail(ErrorCode::parse, w + ": '" + key + "' must be [lower, upper]");
    b = {v[0], v[1]};
  };
  bounds("R_bounds", o.fit.R);
  bounds("tau_bounds", o.fit.tau);
  bounds("alpha_bounds", o.fit.alpha);
  if (j.contains("max_iter")) o.fit.max_iter = static_cast<int>(get_number(j, "max_iter", w));
  o.fit.cost_tol = get_number_or(j, "cost_tol", o.fit.cost_tol, w);
  o.fit.step_tol = get_number_or(j, "step_tol", o.fit.step_tol, w);
  o.fit.grad_tol = get_number_or(j, "grad_tol", o.fit.grad_tol, w);
  o.fit.ml_tol = get_number_or(j, "ml_tol", o.fit.ml_tol, w);
  if (j.contains("threads")) o.threads = static_cast<unsigned>(std::max(1.0, get_number(j, "threads", w)));
  o.soc_ref = get_number_or(j, "soc_ref", o.soc_ref, w);
  o.T = get_number_or(j, "T", 0.0, w);
  return o;
}

json fit_to_json(const SegmentFit& f) {
  json params = json::array();
  for (const auto& p : f.fit.params) params.push_back({{"R", p.R}, {"tau", p.tau}, {"C", p.tau / p.R}, {"alpha", p.alpha}});
  json j;
  j["segment"] = f.index;
  j["soc_j"] = f.segment.soc_j;
  j["i_pulse"] = f.segment.i_pulse;
  j["direction"] = f.segment.direction;
  j["r0"] = f.fit.r0;
  j["params"] = params;
  j["offset"] = f.fit.offset;
  j["cost"] = f.fit.cost;
  j["iterations"] = f.fit.iterations;
  j["evaluations"] = f.fit.evaluations;
  j["converged"] = f.fit.converged;
  j["degenerate"] = f.fit.degenerate;
  j["message"] = f.fit.message;
  return j;
}

json report_to_json(const RunReport& r) {
  return {{"rmse", r.rmse},
          {"mae", r.mae},
          {"max_abs_err", r.max_abs_err},
          {"runtime_per_step", r.runtime_per_step},
          {"peak_history_len", r.peak_history_len},
          {"samples", r.samples}};
}

json benchmark_to_json(const BenchmarkReport& b) {
  auto method = [](const MethodRun& m) {
    return json{{"runtime_per_step", m.runtime_per_step}, {"retained_states_per_branch", m.retained_states}};
  };
  return {{"steps", b.steps},
          {"memory", b.memory},
          {"caputo", method(b.caputo)},
          {"gl", method(b.gl)},
          {"rmse", b.difference.rmse},
          {"mae", b.difference.mae},
          {"max_abs_err", b.difference.max_abs_err}};
}

Table trajectory_table(const Trajectory& tr) {
  Table t;
  t.add_column("t", tr.t);
  t.add_column("i", tr.i);
  t.add_column("v", tr.v);
  t.add_column("soc", tr.soc);
  for (std::size_t j = 0; j < tr.u.size(); ++j) t.add_column("u" + std::to_string(j + 1), tr.u[j]);
  return t;
}

}  // namespace fomcell
