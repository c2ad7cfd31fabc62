// Copyright 2026 The fano-tunnel Authors
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

#include "fano_tunnel/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "fano_tunnel/adiabatic.hpp"
#include "fano_tunnel/errors.hpp"
#include "fano_tunnel/fitting.hpp"
#include "fano_tunnel/rates.hpp"
#include "fano_tunnel/spectral.hpp"

namespace fano_tunnel {

namespace {

using nlohmann::json;

const std::map<std::string, Preset> kPresets{
    {"fig1", Preset::Fig1}, {"fig2", Preset::Fig2}, {"fig3", Preset::Fig3}};
const std::map<std::string, RunMethod> kMethods{{"closed", RunMethod::Closed},
                                                {"quadrature", RunMethod::Quadrature},
                                                {"oracle", RunMethod::Oracle},
                                                {"cme", RunMethod::Cme}};
const std::map<std::string, OutputKind> kOutputs{{"trajectory_csv", OutputKind::TrajectoryCsv},
                                                 {"rates_csv", OutputKind::RatesCsv},
                                                 {"comparison_json", OutputKind::ComparisonJson},
                                                 {"adiabatic_csv", OutputKind::AdiabaticCsv}};

std::string num(double v) { return fmt::format("{:.17g}", v); }

void reject_unknown(const json& obj, std::initializer_list<const char*> keys, const std::string& where) {
  for (const auto& [k, v] : obj.items()) {
    if (std::none_of(keys.begin(), keys.end(), [&k](const char* x) { return k == x; })) {
      throw ConfigError(fmt::format("unknown key '{}' in {}", k, where));
    }
  }
}

double number(const json& obj, const char* key, const std::string& where) {
  const auto& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(fmt::format("{}.{} must be a number", where, key));
  return v.get<double>();
}

CouplingFn parse_coupling(const json& j, const std::string& where) {
  if (!j.is_object() || j.size() != 1) {
    throw ConfigError(fmt::format("{} must be an object with exactly one coupling kind", where));
  }
  const std::string kind = j.begin().key();
  const json& v = j.begin().value();
  if (kind == "constant") {
    if (!v.is_number()) throw ConfigError(where + ".constant must be a number");
    return CouplingFn::constant(v.get<double>());
  }
  if (kind == "width") {
    if (!v.is_number() || v.get<double>() < 0.0) throw ConfigError(where + ".width must be >= 0");
    return CouplingFn::from_width(v.get<double>());
  }
  if (kind == "power_law") {
    reject_unknown(v, {"prefactor", "exponent"}, where + ".power_law");
    return CouplingFn::power_law(number(v, "prefactor", where), number(v, "exponent", where));
  }
  if (kind == "tabulated") {
    std::vector<std::pair<double, double>> knots;
    if (!v.is_array()) throw ConfigError(where + ".tabulated must be a list of [eta, g] pairs");
    for (const auto& k : v) {
      if (!k.is_array() || k.size() != 2 || !k[0].is_number() || !k[1].is_number()) {
        throw ConfigError(where + ".tabulated entries must be [eta, g] pairs");
      }
      knots.emplace_back(k[0].get<double>(), k[1].get<double>());
    }
    return CouplingFn::tabulated(std::move(knots));
  }
  throw ConfigError(fmt::format("unknown coupling kind '{}' in {}", kind, where));
}

json coupling_json(const CouplingFn& g) {
  if (const auto* c = std::get_if<ConstantCoupling>(&g.variant())) return {{"constant", c->value}};
  if (const auto* p = std::get_if<PowerLawCoupling>(&g.variant())) {
    return {{"power_law", {{"prefactor", p->prefactor}, {"exponent", p->exponent}}}};
  }
  json knots = json::array();
  for (const auto& [eta, v] : std::get<TabulatedCoupling>(g.variant()).knots) knots.push_back({eta, v});
  return {{"tabulated", knots}};
}

json model_json(const ModelParams& m) {
  return {{"epsilon", m.epsilon},
          {"e0", m.e0},
          {"eta_min", m.eta_min},
          {"eta_max", m.eta_max},
          {"g", coupling_json(m.g)},
          {"g_prime", coupling_json(m.g_prime)},
          {"topology", m.topology == Topology::SingleContinuum ? "single" : "orthogonal"}};
}

json lindblad_json(const LindbladParams& l) {
  return {{"epsilon", l.epsilon}, {"gamma", l.gamma}, {"gamma_prime", l.gamma_prime}};
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError(fmt::format("cannot write {}", path.string()));
  out << text;
}

bool is_model_method(RunMethod m) { return m != RunMethod::Cme; }

double sup_diff(const Trajectory& a, const Trajectory& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
    worst = std::max(worst, std::abs(a[i].rho.rho_pp - b[i].rho.rho_pp));
    worst = std::max(worst, std::abs(a[i].rho.rho_pm - b[i].rho.rho_pm));
  }
  return worst;
}

Trajectory produce(const Scenario& s, RunMethod m) {
  EvolveOptions opts;
  opts.oracle_bins = s.oracle_bins;
  switch (m) {
    case RunMethod::Closed: return evolve(*s.model, s.grid, EvolutionMethod::ClosedForm, opts);
    case RunMethod::Quadrature: return evolve(*s.model, s.grid, EvolutionMethod::Quadrature, opts);
    case RunMethod::Oracle: return evolve(*s.model, s.grid, EvolutionMethod::Oracle, opts);
    case RunMethod::Cme: return integrate_cme(*s.lindblad, s.grid);
  }
  throw ConfigError("unknown method");
}

std::string header_note(const Scenario& s, RunMethod m) {
  std::string note = fmt::format("method={}", to_string(m));
  if (s.preset) note += fmt::format(" preset={}", to_string(*s.preset));
  if (m == RunMethod::Closed) {
    const auto cf = closed_form_params(*s.model);
    note += fmt::format(" omega=e_R-e'_R={} (resonance roots, shift included)", num(cf.omega));
  } else if (m == RunMethod::Cme) {
    note += fmt::format(" omega=epsilon={}", num(s.lindblad->epsilon));
  } else {
    note += " omega=exact (no Breit-Wigner frequency)";
  }
  return note + " phase=exp(-i*omega*t)";
}

std::string rates_csv(const std::vector<RateDecomposition>& rates, const std::string& note) {
  std::string out = fmt::format("# fano-tunnel rates v{} {}\n", kOutputFormatVersion, note);
  out += "t,P,P_dot,R_d,R_u,p1,orbital_overlap\n";
  for (const auto& r : rates) {
    out += fmt::format("{},{},{},{},{},{},{}\n", num(r.t), num(r.P), num(r.P_dot), num(r.R_d),
                       num(r.R_u), num(r.p1), num(r.orbital_overlap));
  }
  return out;
}

json trajectory_json(const Trajectory& tr, const std::string& note) {
  json rows = json::array();
  for (const auto& p : tr) {
    rows.push_back({p.t, p.rho.rho_pp, p.rho.rho_pm.real(), p.rho.rho_pm.imag(), p.P, p.delta});
  }
  return {{"version", kOutputFormatVersion},
          {"note", note},
          {"columns", {"t", "rho_pp", "re_rho_pm", "im_rho_pm", "P", "delta"}},
          {"rows", rows}};
}

json rates_json(const std::vector<RateDecomposition>& rates, const std::string& note) {
  json rows = json::array();
  for (const auto& r : rates) rows.push_back({r.t, r.P, r.P_dot, r.R_d, r.R_u, r.p1, r.orbital_overlap});
  return {{"version", kOutputFormatVersion},
          {"note", note},
          {"columns", {"t", "P", "P_dot", "R_d", "R_u", "p1", "orbital_overlap"}},
          {"rows", rows}};
}

void check_scenario(const Scenario& s) {
  if (s.name.empty()) throw ConfigError("name must not be empty");
  if (s.name.find_first_of("/\\") != std::string::npos) throw ConfigError("name must not contain path separators");
  try {
    s.grid.check();
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  if (s.model) {
    const auto report = validate(*s.model);
    if (!report.valid()) throw ConfigError("model: " + report.violations.front());
  }
  if (s.lindblad) {
    try {
      check(*s.lindblad);
    } catch (const DomainError& e) {
      throw ConfigError(std::string("lindblad: ") + e.what());
    }
  }
  if (s.methods.empty()) throw ConfigError("no methods requested");
  for (auto m : s.methods) {
    if (is_model_method(m) && !s.model) throw ConfigError(fmt::format("method {} needs a model section", to_string(m)));
    if (m == RunMethod::Cme && !s.lindblad) throw ConfigError("method cme needs a lindblad section");
  }
  for (auto o : s.outputs) {
    if (o == OutputKind::ComparisonJson && (!s.model || !s.lindblad)) {
      throw ConfigError("comparison_json needs both model and lindblad sections");
    }
    if (o == OutputKind::AdiabaticCsv && (!s.model || s.cutoffs.empty())) {
      throw ConfigError("adiabatic_csv needs a model and adiabatic.cutoffs");
    }
  }
  if (s.oracle_bins < 10) throw ConfigError("oracle_bins must be >= 10");
}

}  // namespace

std::optional<Preset> preset_from_string(const std::string& s) {
  const auto it = kPresets.find(s);
  if (it == kPresets.end()) return std::nullopt;
  return it->second;
}

std::optional<RunMethod> method_from_string(const std::string& s) {
  const auto it = kMethods.find(s);
  if (it == kMethods.end()) return std::nullopt;
  return it->second;
}

std::string to_string(Preset p) {
  for (const auto& [k, v] : kPresets)
    if (v == p) return k;
  return "?";
}

std::string to_string(RunMethod m) {
  for (const auto& [k, v] : kMethods)
    if (v == m) return k;
  return "?";
}

std::string to_string(OutputKind o) {
  for (const auto& [k, v] : kOutputs)
    if (v == o) return k;
  return "?";
}

Scenario preset_scenario(Preset preset) {
  double gamma = 0.3, gamma_prime = 0.0, t_end = 20.0;
  std::size_t n = 801;
  switch (preset) {
    case Preset::Fig1: break;
    case Preset::Fig2: gamma = 3.0; t_end = 4.0; n = 401; break;
    case Preset::Fig3: gamma = 2.0; gamma_prime = 0.5; break;
  }
  const double eps = 1.0;
  Scenario s;
  s.name = to_string(preset);
  s.preset = preset;
  ModelParams m;
  m.epsilon = eps;
  m.e0 = 20.0 * gamma;
  m.eta_min = 0.0;
  m.eta_max = 40.0 * gamma + eps;
  m.g = CouplingFn::from_width(gamma);
  m.g_prime = CouplingFn::from_width(gamma_prime);
  s.model = m;
  s.lindblad = LindbladParams{eps, gamma, gamma_prime};
  s.methods = {RunMethod::Closed};
  s.grid = TimeGrid{0.0, t_end, n};
  s.outputs = {OutputKind::TrajectoryCsv, OutputKind::RatesCsv};
  return s;
}

void apply_preset(Scenario& s, Preset preset) {
  const auto p = preset_scenario(preset);
  s.preset = preset;
  s.model = p.model;
  s.lindblad = p.lindblad;
  s.grid = p.grid;
  if (s.name.empty()) s.name = p.name;
}

Scenario parse_scenario(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(fmt::format("scenario parse error: {}", e.what()));
  }
  if (!j.is_object()) throw ConfigError("scenario must be a JSON object");
  try {
    reject_unknown(j, {"name", "preset", "model", "lindblad", "methods", "oracle_bins", "grid", "outputs", "adiabatic"},
                   "scenario");
    Scenario s;
    s.methods.clear();
    s.outputs.clear();
    if (j.contains("preset")) {
      const auto p = preset_from_string(j.at("preset").get<std::string>());
      if (!p) throw ConfigError(fmt::format("unknown preset '{}'", j.at("preset").get<std::string>()));
      s = preset_scenario(*p);
      s.methods.clear();
      s.outputs.clear();
    }
    if (j.contains("name")) s.name = j.at("name").get<std::string>();
    if (j.contains("model")) {
      const auto& m = j.at("model");
      reject_unknown(m, {"epsilon", "e0", "eta_min", "eta_max", "g", "g_prime", "topology"}, "model");
      ModelParams mp = s.model.value_or(ModelParams{});
      if (m.contains("epsilon")) mp.epsilon = number(m, "epsilon", "model");
      if (m.contains("e0")) mp.e0 = number(m, "e0", "model");
      if (m.contains("eta_min")) mp.eta_min = number(m, "eta_min", "model");
      if (m.contains("eta_max")) mp.eta_max = number(m, "eta_max", "model");
      if (m.contains("g")) mp.g = parse_coupling(m.at("g"), "model.g");
      if (m.contains("g_prime")) mp.g_prime = parse_coupling(m.at("g_prime"), "model.g_prime");
      if (m.contains("topology")) {
        const auto t = m.at("topology").get<std::string>();
        if (t == "single") mp.topology = Topology::SingleContinuum;
        else if (t == "orthogonal") mp.topology = Topology::OrthogonalContinua;
        else throw ConfigError(fmt::format("unknown topology '{}'", t));
      }
      s.model = mp;
    }
    if (j.contains("lindblad")) {
      const auto& l = j.at("lindblad");
      reject_unknown(l, {"epsilon", "gamma", "gamma_prime"}, "lindblad");
      LindbladParams lp = s.lindblad.value_or(LindbladParams{});
      if (l.contains("epsilon")) lp.epsilon = number(l, "epsilon", "lindblad");
      if (l.contains("gamma")) lp.gamma = number(l, "gamma", "lindblad");
      if (l.contains("gamma_prime")) lp.gamma_prime = number(l, "gamma_prime", "lindblad");
      s.lindblad = lp;
    }
    if (j.contains("grid")) {
      const auto& g = j.at("grid");
      reject_unknown(g, {"t_start", "t_end", "n_points"}, "grid");
      if (g.contains("t_start")) s.grid.t_start = number(g, "t_start", "grid");
      if (g.contains("t_end")) s.grid.t_end = number(g, "t_end", "grid");
      if (g.contains("n_points")) {
        const auto& n = g.at("n_points");
        if (!n.is_number_integer() || n.get<long long>() < 2) throw ConfigError("grid.n_points must be an integer >= 2");
        s.grid.n_points = n.get<std::size_t>();
      }
    }
    if (j.contains("methods")) {
      for (const auto& m : j.at("methods")) {
        const auto v = method_from_string(m.get<std::string>());
        if (!v) throw ConfigError(fmt::format("unknown method '{}'", m.get<std::string>()));
        s.methods.push_back(*v);
      }
    }
    if (s.methods.empty()) {
      if (s.model) s.methods.push_back(RunMethod::Closed);
      else if (s.lindblad) s.methods.push_back(RunMethod::Cme);
    }
    if (j.contains("oracle_bins")) {
      const auto& n = j.at("oracle_bins");
      if (!n.is_number_integer() || n.get<long long>() < 10) throw ConfigError("oracle_bins must be an integer >= 10");
      s.oracle_bins = n.get<std::size_t>();
    }
    if (j.contains("outputs")) {
      for (const auto& o : j.at("outputs")) {
        const auto it = kOutputs.find(o.get<std::string>());
        if (it == kOutputs.end()) throw ConfigError(fmt::format("unknown output '{}'", o.get<std::string>()));
        s.outputs.push_back(it->second);
      }
    }
    if (s.outputs.empty()) s.outputs.push_back(OutputKind::TrajectoryCsv);
    if (j.contains("adiabatic")) {
      const auto& a = j.at("adiabatic");
      reject_unknown(a, {"cutoffs"}, "adiabatic");
      s.cutoffs = a.at("cutoffs").get<std::vector<double>>();
    }
    check_scenario(s);
    return s;
  } catch (const json::exception& e) {
    throw ConfigError(fmt::format("scenario error: {}", e.what()));
  }
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(fmt::format("cannot read scenario file {}", path.string()));
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

std::string to_json(const Scenario& s) {
  json j;
  j["name"] = s.name;
  if (s.preset) j["preset"] = to_string(*s.preset);
  if (s.model) j["model"] = model_json(*s.model);
  if (s.lindblad) j["lindblad"] = lindblad_json(*s.lindblad);
  j["methods"] = json::array();
  for (auto m : s.methods) j["methods"].push_back(to_string(m));
  j["oracle_bins"] = s.oracle_bins;
  j["grid"] = {{"t_start", s.grid.t_start}, {"t_end", s.grid.t_end}, {"n_points", s.grid.n_points}};
  j["outputs"] = json::array();
  for (auto o : s.outputs) j["outputs"].push_back(to_string(o));
  if (!s.cutoffs.empty()) j["adiabatic"] = {{"cutoffs", s.cutoffs}};
  return j.dump(2) + "\n";
}

std::string trajectory_csv(const Trajectory& tr, const std::string& note) {
  std::string out = fmt::format("# fano-tunnel trajectory v{} {}\n", kOutputFormatVersion, note);
  out += "t,rho_pp,re_rho_pm,im_rho_pm,P,delta\n";
  for (const auto& p : tr) {
    out += fmt::format("{},{},{},{},{},{}\n", num(p.t), num(p.rho.rho_pp), num(p.rho.rho_pm.real()),
                       num(p.rho.rho_pm.imag()), num(p.P), num(p.delta));
  }
  return out;
}

std::string adiabatic_csv(const Scenario& s) {
  const auto rows = cutoff_sweep(*s.model, s.cutoffs);
  std::string out = fmt::format("# fano-tunnel adiabatic v{}\n", kOutputFormatVersion);
  out += "cutoff,E0,a0_sq,I,overlap,effective_splitting\n";
  for (const auto& r : rows) {
    out += fmt::format("{},{},{},{},{},{}\n", num(r.cutoff), num(r.E0), num(r.a0_sq), num(r.I),
                       num(r.overlap), num(r.effective_splitting));
  }
  return out;
}

RunResult run_scenario(const Scenario& s, const RunOptions& options) {
  check_scenario(s);
  std::filesystem::create_directories(options.out_dir);
  RunResult result;
  const bool want_traj = std::count(s.outputs.begin(), s.outputs.end(), OutputKind::TrajectoryCsv) > 0;
  const bool want_rates = std::count(s.outputs.begin(), s.outputs.end(), OutputKind::RatesCsv) > 0;
  const bool json_out = options.format == OutputFormat::Json;
  const std::string ext = json_out ? ".json" : ".csv";

  if (want_traj || want_rates) {
    for (auto m : s.methods) {
      const auto tr = produce(s, m);
      const auto note = header_note(s, m);
      const std::string stem = s.name + "_" + to_string(m);
      if (want_traj) {
        const auto path = options.out_dir / (stem + "_trajectory" + ext);
        write_file(path, json_out ? trajectory_json(tr, note).dump(2) + "\n" : trajectory_csv(tr, note));
        result.files.push_back(path);
      }
      if (want_rates) {
        const auto rates = rate_decomposition(tr);
        const auto path = options.out_dir / (stem + "_rates" + ext);
        write_file(path, json_out ? rates_json(rates, note).dump(2) + "\n" : rates_csv(rates, note));
        result.files.push_back(path);
      }
    }
  }
  if (std::count(s.outputs.begin(), s.outputs.end(), OutputKind::ComparisonJson) > 0) {
    const auto path = options.out_dir / (s.name + "_comparison.json");
    write_file(path, compare_scenario(s));
    result.files.push_back(path);
  }
  if (std::count(s.outputs.begin(), s.outputs.end(), OutputKind::AdiabaticCsv) > 0) {
    const auto path = options.out_dir / (s.name + "_adiabatic.csv");
    write_file(path, adiabatic_csv(s));
    result.files.push_back(path);
  }
  return result;
}

std::string compare_scenario(const Scenario& s) {
  if (!s.model || !s.lindblad) throw ConfigError("compare needs both model and lindblad sections");
  check_scenario(s);

  std::vector<RunMethod> methods = s.methods;
  auto ensure = [&methods](RunMethod m) {
    if (std::find(methods.begin(), methods.end(), m) == methods.end()) methods.push_back(m);
  };
  ensure(RunMethod::Cme);
  bool have_closed = true;
  ClosedFormParams cf;
  try {
    cf = closed_form_params(*s.model);
    ensure(RunMethod::Closed);
  } catch (const MethodUnavailable&) {
    have_closed = false;
  }
  std::sort(methods.begin(), methods.end());

  std::map<RunMethod, Trajectory> runs;
  for (auto m : methods) runs[m] = produce(s, m);

  json report;
  report["scenario"] = s.name;
  report["params"] = {{"model", model_json(*s.model)}, {"lindblad", lindblad_json(*s.lindblad)}};
  if (have_closed) {
    report["params"]["closed_form"] = {{"gamma", cf.gamma}, {"gamma_prime", cf.gamma_prime}, {"omega", cf.omega}};
  }
  json diffs = json::object();
  for (std::size_t i = 0; i < methods.size(); ++i) {
    for (std::size_t k = i + 1; k < methods.size(); ++k) {
      diffs[to_string(methods[i]) + "_vs_" + to_string(methods[k])] =
          sup_diff(runs[methods[i]], runs[methods[k]]);
    }
  }
  report["sup_norm_diffs"] = diffs;

  json checks = json::array();
  auto add_check = [&checks](const std::string& name, bool pass, double value, double tol) {
    checks.push_back({{"name", name}, {"pass", pass}, {"value", value}, {"tolerance", tol}});
  };

  // Diagonal fits: the exact model against the master equation.
  const RunMethod model_method = have_closed ? RunMethod::Closed : s.methods.front();
  std::vector<double> ts, model_pp, master_pp;
  for (std::size_t i = 0; i < s.grid.n_points; ++i) {
    ts.push_back(runs[model_method][i].t);
    model_pp.push_back(runs[model_method][i].rho.rho_pp);
    master_pp.push_back(runs[RunMethod::Cme][i].rho.rho_pp);
  }
  const auto m2 = fit_two_exponential(ts, model_pp);
  const auto m1 = fit_single_exponential(ts, model_pp);
  const auto l2 = fit_two_exponential(ts, master_pp);
  const auto l1 = fit_single_exponential(ts, master_pp);
  report["fit_residuals"] = {{"model_method", to_string(model_method)},
                             {"model_two_exponential", m2.rms},
                             {"model_single_exponential", m1.rms},
                             {"master_two_exponential", l2.rms},
                             {"master_single_exponential", l1.rms}};
  add_check("model_rho_pp_two_exponential_fit", m2.rms < 1e-10, m2.rms, 1e-10);
  add_check("master_rho_pp_single_exponential_fit", l1.rms < 1e-10, l1.rms, 1e-10);
  if (s.lindblad->gamma > 0.0 && s.lindblad->gamma_prime > 0.0) {
    add_check("model_rho_pp_single_exponential_misfit", m1.rms > 1e-3, m1.rms, 1e-3);
  }

  if (have_closed) {
    const auto& l = *s.lindblad;
    const double t = 1e-3 / std::max(1.0, l.gamma + l.gamma_prime + l.epsilon);
    const auto fo = first_order_compare(l, cf.gamma, cf.gamma_prime, t, s.model->topology);
    report["first_order"] = {{"t", fo.t},
                             {"model_linear", fo.model_linear},
                             {"master_linear", fo.master_linear},
                             {"residual", fo.residual},
                             {"residual_double", fo.residual_double},
                             {"richardson_ratio", fo.richardson_ratio}};
    add_check("first_order_rho_pp_agree", fo.linear_agree, std::abs(fo.model_linear - fo.master_linear),
              8.0 * std::numeric_limits<double>::epsilon());
    if (l.gamma > 0.0 && l.gamma_prime > 0.0) {
      add_check("second_order_richardson_ratio", fo.richardson_ratio >= 3.5 && fo.richardson_ratio <= 4.5,
                fo.richardson_ratio, 0.5);
    } else {
      // With one width zero the two solutions coincide at Omega = eps.
      add_check("single_width_identical", fo.residual_double <= 1e-12, fo.residual_double, 1e-12);
    }
  }
  report["checks"] = checks;
  return report.dump(2) + "\n";
}

}  // namespace fano_tunnel
