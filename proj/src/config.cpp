#include "shockfront/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "shockfront/error.hpp"
#include "shockfront/output.hpp"

namespace shockfront::config {

using nlohmann::json;

namespace {

void only_keys(const json& obj, const std::string& where, std::initializer_list<const char*> keys) {
  if (!obj.is_object()) throw ConfigError("'" + where + "' must be a JSON object");
  std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& item : obj.items()) {
    if (!allowed.count(item.key())) {
      throw ConfigError("unknown key '" + item.key() + "' in '" + where + "'");
    }
  }
}

double number(const json& obj, const char* key, double fallback, const std::string& where) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number()) throw ConfigError("'" + where + "." + key + "' must be a number");
  return v.get<double>();
}

std::string text(const json& obj, const char* key, const std::string& fallback,
                 const std::string& where) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_string()) throw ConfigError("'" + where + "." + key + "' must be a string");
  return v.get<std::string>();
}

Interval pair(const json& v, const std::string& where) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    throw ConfigError("'" + where + "' must be an array [lo, hi]");
  }
  return {v[0].get<double>(), v[1].get<double>()};
}

ThermoConfig parse_thermo(const json& j) {
  only_keys(j, "thermo", {"model", "name", "n", "R", "a", "b"});
  ThermoConfig t;
  t.model = text(j, "model", t.model, "thermo");
  t.name = text(j, "name", t.name, "thermo");
  t.n = number(j, "n", t.n, "thermo");
  t.R = number(j, "R", t.R, "thermo");
  t.a = number(j, "a", t.a, "thermo");
  t.b = number(j, "b", t.b, "thermo");
  if (t.model != "ideal" && t.model != "vdw" && t.model != "custom") {
    throw ConfigError("thermo.model must be one of ideal, vdw, custom (got '" + t.model + "')");
  }
  if (t.model == "custom" && t.name.empty()) {
    throw ConfigError("thermo.model 'custom' needs a registry 'name' (ideal, vdw)");
  }
  return t;
}

ProcessConfig parse_process(const json& j, const std::filesystem::path& base_dir) {
  only_keys(j, "process", {"process", "s0", "rho_min", "rho_max", "file", "c0", "c1"});
  ProcessConfig p;
  p.kind = text(j, "process", p.kind, "process");
  p.s0 = number(j, "s0", p.s0, "process");
  p.rho_domain.lo = number(j, "rho_min", p.rho_domain.lo, "process");
  p.rho_domain.hi = number(j, "rho_max", p.rho_domain.hi, "process");
  p.c0 = number(j, "c0", p.c0, "process");
  p.c1 = number(j, "c1", p.c1, "process");
  p.file = text(j, "file", p.file, "process");
  if (p.kind != "adiabatic" && p.kind != "table" && p.kind != "cubic") {
    throw ConfigError("process.process must be one of adiabatic, table, cubic (got '" + p.kind +
                      "')");
  }
  if (p.kind == "table") {
    if (p.file.empty()) throw ConfigError("process 'table' needs a 'file'");
    const std::filesystem::path f(p.file);
    if (f.is_relative()) p.file = (base_dir / f).lexically_normal().string();
  }
  if (!(p.rho_domain.lo > 0.0) || !(p.rho_domain.hi > p.rho_domain.lo)) {
    throw ConfigError("process needs 0 < rho_min < rho_max");
  }
  return p;
}

SolutionConfig parse_solution(const json& j) {
  only_keys(j, "solution", {"alpha", "rho_window"});
  SolutionConfig s;
  if (j.contains("alpha")) {
    const json& a = j.at("alpha");
    if (!a.is_array() || a.size() != 4) {
      throw ConfigError("'solution.alpha' must be an array of four numbers");
    }
    for (const auto& v : a) {
      if (!v.is_number()) throw ConfigError("'solution.alpha' entries must be numbers");
    }
    s.alpha = {a[0].get<double>(), a[1].get<double>(), a[2].get<double>(), a[3].get<double>()};
  }
  if (j.contains("rho_window")) s.rho_window = pair(j.at("rho_window"), "solution.rho_window");
  return s;
}

FvmConfig parse_fvm(const json& j) {
  only_keys(j, "fvm", {"x_min", "x_max", "cells", "cfl"});
  FvmConfig f;
  f.x_min = number(j, "x_min", f.x_min, "fvm");
  f.x_max = number(j, "x_max", f.x_max, "fvm");
  if (j.contains("cells")) {
    if (!j.at("cells").is_number_integer()) throw ConfigError("'fvm.cells' must be an integer");
    f.cells = j.at("cells").get<int>();
  }
  f.cfl = number(j, "cfl", f.cfl, "fvm");
  return f;
}

VerifyConfig parse_verify(const json& j) {
  only_keys(j, "verify", {"seed", "samples"});
  VerifyConfig v;
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned()) {
      throw ConfigError("'verify.seed' must be a non-negative integer");
    }
    v.seed = j.at("seed").get<std::uint64_t>();
  }
  if (j.contains("samples")) {
    if (!j.at("samples").is_number_integer()) {
      throw ConfigError("'verify.samples' must be an integer");
    }
    v.samples = j.at("samples").get<int>();
  }
  return v;
}

}  // namespace

std::string RunConfig::resolved_json() const {
  json j;
  j["thermo"] = {{"model", thermo.model}, {"name", thermo.name}, {"n", thermo.n},
                 {"R", thermo.R},         {"a", thermo.a},       {"b", thermo.b}};
  j["process"] = {{"process", process.kind},
                  {"s0", process.s0},
                  {"rho_min", process.rho_domain.lo},
                  {"rho_max", process.rho_domain.hi},
                  {"file", process.file},
                  {"c0", process.c0},
                  {"c1", process.c1}};
  j["solution"] = {{"alpha", {solution.alpha.a0, solution.alpha.a1, solution.alpha.a2,
                              solution.alpha.a3}},
                   {"rho_window", {solution.rho_window.lo, solution.rho_window.hi}}};
  j["fvm"] = {{"x_min", fvm.x_min}, {"x_max", fvm.x_max}, {"cells", fvm.cells}, {"cfl", fvm.cfl}};
  j["verify"] = {{"seed", verify.seed}, {"samples", verify.samples}};
  j["output_dir"] = output_dir;
  return j.dump(2);
}

std::string RunConfig::hash() const { return output::hex64(output::fnv1a64(resolved_json())); }

RunConfig parse_config(const std::string& json_text, const std::filesystem::path& base_dir) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  only_keys(j, "config", {"thermo", "process", "solution", "fvm", "verify", "output_dir"});
  RunConfig cfg;
  if (j.contains("thermo")) cfg.thermo = parse_thermo(j.at("thermo"));
  if (j.contains("process")) cfg.process = parse_process(j.at("process"), base_dir);
  if (j.contains("solution")) cfg.solution = parse_solution(j.at("solution"));
  if (j.contains("fvm")) cfg.fvm = parse_fvm(j.at("fvm"));
  if (j.contains("verify")) cfg.verify = parse_verify(j.at("verify"));
  cfg.output_dir = text(j, "output_dir", cfg.output_dir, "config");
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot read config file '" + path.string() + "'");
  std::ostringstream s;
  s << f.rdbuf();
  return parse_config(s.str(), path.parent_path().empty() ? "." : path.parent_path());
}

thermo::PotentialModel build_model(const RunConfig& cfg) {
  const ThermoConfig& t = cfg.thermo;
  if (t.model == "ideal") return thermo::ideal_gas_model(t.n, t.R);
  if (t.model == "vdw") return thermo::van_der_waals_model(t.a, t.b, t.n, t.R);
  // Registry of built-ins driven through the generic (numeric) path.
  if (t.name == "ideal") return thermo::ideal_gas_model(t.n, t.R).as_custom();
  if (t.name == "vdw") return thermo::van_der_waals_model(t.a, t.b, t.n, t.R).as_custom();
  throw ConfigError("unknown custom model '" + t.name + "' (registry: ideal, vdw)");
}

process::ProcessCurve build_curve(const RunConfig& cfg) {
  const ProcessConfig& p = cfg.process;
  if (p.kind == "table") {
    if (!std::filesystem::exists(p.file)) {
      throw ConfigError("process table '" + p.file + "' does not exist");
    }
    return process::table_process_from_csv(p.file);
  }
  if (p.kind == "cubic") return process::cubic_pressure_process(p.c0, p.c1, p.rho_domain);
  return process::adiabatic_process(build_model(cfg), p.s0, p.rho_domain);
}

exact::SolutionFamily build_family(const RunConfig& cfg) {
  return exact::SolutionFamily(cfg.solution.alpha, build_curve(cfg));
}

Interval working_window(const RunConfig& cfg, const process::ProcessCurve& curve) {
  return cfg.solution.rho_window.empty() ? curve.domain() : cfg.solution.rho_window;
}

}  // namespace shockfront::config
