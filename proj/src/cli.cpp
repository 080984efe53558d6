#include "shockfront/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "shockfront/config.hpp"
#include "shockfront/error.hpp"
#include "shockfront/exact_solution.hpp"
#include "shockfront/fvm.hpp"
#include "shockfront/geometry_verify.hpp"
#include "shockfront/output.hpp"
#include "shockfront/process.hpp"
#include "shockfront/singularity.hpp"
#include "shockfront/thermo.hpp"

namespace shockfront::cli {

namespace fs = std::filesystem;
using nlohmann::json;
using singularity::Sign;

namespace {

struct Options {
  std::string config_path;
  std::string out_dir;
  bool print_config = false;

  double v = 1.0, T = 1.0;
  double rho = 1.0;
  double t = 0.0, x = 0.0;
  int points = 400;
  std::string branch = "+";
  std::string out;
  double t_min = std::nan(""), t_max = std::nan("");
  int steps = 20;
  std::optional<std::uint64_t> seed;
  std::optional<int> samples;
  double t0 = 0.0;
  double t_end = std::nan("");
  std::optional<int> cells;
  std::optional<double> cfl;
  std::string figure;
  std::vector<double> times;
};

/// Everything a command produces; flushed only after it returns normally.
struct Pending {
  std::string stdout_text;
  std::vector<std::pair<fs::path, std::string>> files;
};

struct Context {
  config::RunConfig cfg;
  std::string hash;
  fs::path out_dir;
};

Sign parse_sign(const std::string& s) {
  if (s == "+" || s == "plus" || s == "p") return Sign::plus;
  if (s == "-" || s == "minus" || s == "m") return Sign::minus;
  throw CLI::ValidationError("--branch", "expected + or -");
}

fs::path resolve_out(const Context& ctx, const std::string& path) {
  const fs::path p(path);
  return p.is_absolute() ? p : ctx.out_dir / p;
}

void emit_csv(const Context& ctx, const output::CsvTable& table, const std::string& out_path,
              Pending& pending) {
  const std::string text = output::csv_string(table, ctx.hash);
  if (out_path.empty()) {
    pending.stdout_text += text;
  } else {
    pending.files.emplace_back(resolve_out(ctx, out_path), text);
  }
}

json branch_json(const exact::BranchSet& b) {
  json roots = json::array();
  for (std::size_t i = 0; i < b.roots.size(); ++i) {
    roots.push_back({{"rho", b.roots[i]}, {"near_caustic", static_cast<bool>(b.near_caustic[i])}});
  }
  return {{"t", b.t}, {"x", b.x}, {"count", b.roots.size()}, {"roots", roots},
          {"edge_warning", b.edge_warning}};
}

singularity::Cusp require_cusp(const exact::SolutionFamily& family, Sign branch, Interval window) {
  const auto c = singularity::cusp(family, branch, window);
  if (!c.found) throw DomainError("no cusp on the caustic in this window: " + c.note);
  return c;
}

int cmd_state(const Context& ctx, const Options& o, Pending& p) {
  const auto model = config::build_model(ctx.cfg);
  const auto s = thermo::eval_state(model, o.v, o.T);
  const auto k = thermo::kappa_at(model, o.v, o.T);
  const json j = {{"model", model.name()}, {"v", s.v}, {"T", s.T}, {"p", s.p}, {"e", s.e},
                  {"s", s.s},
                  {"kappa", {{"coeff_TT", k.coeff_TT}, {"coeff_vv", k.coeff_vv},
                             {"applicable", k.applicable}}}};
  p.stdout_text += j.dump(2) + "\n";
  return kOk;
}

int cmd_process(const Context& ctx, const Options& o, Pending& p) {
  const auto curve = config::build_curve(ctx.cfg);
  const auto rep = process::classify_at(curve, o.rho);
  json j = {{"process", curve.name()},
            {"rho", o.rho},
            {"p", curve.p(o.rho)},
            {"dp", curve.dp(o.rho)},
            {"P", {{rep.P_matrix[0][0], rep.P_matrix[0][1]}, {rep.P_matrix[1][0], rep.P_matrix[1][1]}}},
            {"det", rep.det},
            {"classification", process::to_string(rep.classification)}};
  if (rep.classification == process::Classification::hyperbolic) {
    j["A"] = curve.A(o.rho);
    j["A_prime"] = curve.A_prime(o.rho);
  }
  if (curve.has_thermo()) {
    j["T"] = curve.T(o.rho);
    j["e"] = curve.e(o.rho);
    j["s"] = curve.s(o.rho);
  }
  try {
    const auto fit = process::is_characteristically_integrable(curve);
    j["characteristically_integrable"] = {{"integrable", fit.integrable}, {"c0", fit.c0},
                                          {"c1", fit.c1},
                                          {"max_relative_residual", fit.max_relative_residual}};
  } catch (const DomainError& e) {
    j["characteristically_integrable"] = {{"integrable", nullptr}, {"note", e.what()}};
  }
  p.stdout_text += j.dump(2) + "\n";
  return kOk;
}

int cmd_solve(const Context& ctx, const Options& o, Pending& p) {
  const auto family = config::build_family(ctx.cfg);
  const auto set = exact::branches(family, o.t, o.x, config::working_window(ctx.cfg, family.curve()));
  p.stdout_text += branch_json(set).dump(2) + "\n";
  return kOk;
}

int cmd_section(const Context& ctx, const Options& o, Pending& p) {
  const auto family = config::build_family(ctx.cfg);
  const auto grid = exact::make_rho_grid(config::working_window(ctx.cfg, family.curve()), o.points);
  output::CsvTable table{{"x", "rho", "u"}, {}};
  for (const auto& pt : exact::profile_section(family, o.t, grid)) {
    table.rows.push_back({pt.x, pt.rho, pt.u});
  }
  emit_csv(ctx, table, o.out, p);
  return kOk;
}

int cmd_caustic(const Context& ctx, const Options& o, Pending& p) {
  const auto family = config::build_family(ctx.cfg);
  const auto grid = exact::make_rho_grid(config::working_window(ctx.cfg, family.curve()), o.points);
  const auto curve = singularity::caustic(family, parse_sign(o.branch), grid);
  output::CsvTable table{{"rho", "t", "x"}, {}};
  for (const auto& s : curve.samples) table.rows.push_back({s.rho, s.t, s.x});
  emit_csv(ctx, table, o.out, p);
  return kOk;
}

int cmd_cusp(const Context& ctx, const Options& o, Pending& p) {
  const auto family = config::build_family(ctx.cfg);
  const auto c = singularity::cusp(family, parse_sign(o.branch),
                                   config::working_window(ctx.cfg, family.curve()));
  json j = {{"found", c.found}, {"branch", o.branch}};
  if (c.found) {
    j["rho"] = c.rho;
    j["t"] = c.t;
    j["x"] = c.x;
  }
  if (!c.note.empty()) j["note"] = c.note;
  p.stdout_text += j.dump(2) + "\n";
  return kOk;
}

int cmd_front(const Context& ctx, const Options& o, Pending& p) {
  const auto family = config::build_family(ctx.cfg);
  const Interval window = config::working_window(ctx.cfg, family.curve());
  singularity::FrontOptions fo;
  fo.branch = parse_sign(o.branch);
  fo.rho_window = window;
  const auto c = require_cusp(family, fo.branch, window);
  const double t_min = std::isnan(o.t_min) ? c.t : o.t_min;
  const double t_max = std::isnan(o.t_max) ? 2.0 * c.t : o.t_max;
  const auto front = singularity::shock_front(family, {t_min, t_max}, o.steps, fo);
  output::CsvTable table{{"t", "x", "rho1", "rho2"}, {}};
  for (double t : front.collapsed_times) table.rows.push_back({t, c.x, c.rho, c.rho});
  for (const auto& s : front.samples) table.rows.push_back({s.t, s.x, s.rho_left, s.rho_right});
  emit_csv(ctx, table, o.out, p);
  return kOk;
}

int cmd_verify(const Context& ctx, const Options& o, Pending& p) {
  const auto family = config::build_family(ctx.cfg);
  geometry::VerifyOptions vo;
  vo.seed = o.seed.value_or(ctx.cfg.verify.seed);
  vo.samples = o.samples.value_or(ctx.cfg.verify.samples);
  if (vo.samples <= 0) throw CLI::ValidationError("--samples", "must be positive");
  const auto results = geometry::run_verification(family, vo);
  std::ostringstream s;
  char line[256];
  std::snprintf(line, sizeof line, "%-50s %13s %10s  %s\n", "check", "max_residual", "tolerance",
                "status");
  s << line;
  bool ok = true;
  for (const auto& r : results) {
    std::snprintf(line, sizeof line, "%-50s %13.3e %10.0e  %s  (%s)\n", r.name.c_str(),
                  r.max_residual, r.tolerance, r.passed ? "PASS" : "FAIL", r.detail.c_str());
    s << line;
    ok = ok && r.passed;
  }
  s << "convention: the + fields pair with eigenvalue +1 of W, the - fields with -1\n";
  s << "seed " << vo.seed << ", " << vo.samples << " samples: " << (ok ? "all passed" : "FAILED")
    << "\n";
  p.stdout_text += s.str();
  return ok ? kOk : kVerificationFailed;
}

int cmd_fvm(const Context& ctx, const Options& o, Pending& p) {
  const auto family = config::build_family(ctx.cfg);
  const auto& curve = family.curve();
  if (std::isnan(o.t_end)) throw CLI::ValidationError("--t-end", "is required");
  fvm::GridSpec spec;
  spec.x_min = ctx.cfg.fvm.x_min;
  spec.x_max = ctx.cfg.fvm.x_max;
  spec.n_cells = o.cells.value_or(ctx.cfg.fvm.cells);
  fvm::StepOptions so;
  so.cfl = o.cfl.value_or(ctx.cfg.fvm.cfl);

  auto state = fvm::init_from_analytic(family, o.t0, spec);
  const double m0 = state.total_mass();
  fvm::advance_to(state, curve, o.t_end, so);
  const auto shock = fvm::locate_shock(state);

  json summary = {{"cells", spec.n_cells},
                  {"dx", state.dx()},
                  {"t0", o.t0},
                  {"t_end", state.time},
                  {"steps", state.steps},
                  {"cfl", so.cfl},
                  {"mass_drift", fvm::mass_drift(state, m0)},
                  {"shock", {{"found", shock.found}, {"x", shock.x}, {"strength", shock.strength},
                             {"multiple", shock.multiple}}}};
  const Interval window = config::working_window(ctx.cfg, curve);
  const auto c = singularity::cusp(family, Sign::plus, window);
  if (c.found) summary["cusp_time"] = c.t;
  if (c.found && state.time > c.t) {
    singularity::FrontOptions fo;
    fo.rho_window = window;
    const auto front = singularity::shock_front(family, {state.time, state.time}, 1, fo);
    if (!front.samples.empty()) {
      const auto& s = front.samples.back();
      summary["analytic_front"] = {{"x", s.x}, {"rho1", s.rho_left}, {"rho2", s.rho_right}};
      if (shock.found) summary["shock_minus_front_cells"] = (shock.x - s.x) / state.dx();
    }
  }
  if (!o.out.empty()) {
    output::CsvTable table{{"x", "rho", "u"}, {}};
    for (int i = 0; i < spec.n_cells; ++i) {
      const auto k = static_cast<std::size_t>(i);
      table.rows.push_back({state.x_center(i), state.rho[k], state.mom[k] / state.rho[k]});
    }
    emit_csv(ctx, table, o.out, p);
  }
  p.stdout_text += summary.dump(2) + "\n";
  return kOk;
}

Interval figure_window(const Interval& window, const singularity::Cusp& c) {
  return {std::max(window.lo, c.rho / 20.0), std::min(window.hi, c.rho * 20.0)};
}

int cmd_figure_density(const Context& ctx, const Options& o, Pending& p) {
  const auto family = config::build_family(ctx.cfg);
  const Interval window = config::working_window(ctx.cfg, family.curve());
  const auto c = require_cusp(family, Sign::plus, window);
  std::vector<double> times = o.times;
  if (times.empty()) times = {0.5 * c.t, c.t, 1.5 * c.t};
  const auto grid = exact::make_rho_grid(figure_window(window, c), o.points);

  output::CsvTable table{{"t", "x", "rho", "u"}, {}};
  std::vector<output::SvgSeries> series;
  for (double t : times) {
    output::SvgSeries s;
    char label[64];
    std::snprintf(label, sizeof label, "t = %.4g", t);
    s.label = label;
    for (const auto& pt : exact::profile_section(family, t, grid)) {
      table.rows.push_back({t, pt.x, pt.rho, pt.u});
      s.x.push_back(pt.x);
      s.y.push_back(pt.rho);
    }
    series.push_back(std::move(s));
  }
  const fs::path csv = resolve_out(ctx, "figure_density.csv");
  const fs::path svg = resolve_out(ctx, "figure_density.svg");
  p.files.emplace_back(csv, output::csv_string(table, ctx.hash));
  p.files.emplace_back(svg, output::render_svg("Density sections", "x", "rho", series));
  p.stdout_text += csv.string() + "\n" + svg.string() + "\n";
  return kOk;
}

int cmd_figure_front(const Context& ctx, const Options& o, Pending& p) {
  const auto family = config::build_family(ctx.cfg);
  const Interval window = config::working_window(ctx.cfg, family.curve());
  const auto c = require_cusp(family, Sign::plus, window);
  const double t_max = std::isnan(o.t_max) ? 2.0 * c.t : o.t_max;

  const auto grid = exact::make_rho_grid(figure_window(window, c), o.points);
  const auto caustic = singularity::caustic(family, Sign::plus, grid);
  output::CsvTable caustic_table{{"rho", "t", "x"}, {}};
  output::SvgSeries caustic_series{"caustic", {}, {}, false};
  for (const auto& s : caustic.samples) {
    if (s.t > t_max) continue;
    caustic_table.rows.push_back({s.rho, s.t, s.x});
    caustic_series.x.push_back(s.x);
    caustic_series.y.push_back(s.t);
  }

  singularity::FrontOptions fo;
  fo.rho_window = window;
  const auto front = singularity::shock_front(family, {c.t, t_max}, o.steps, fo);
  output::CsvTable front_table{{"t", "x", "rho1", "rho2"}, {}};
  output::SvgSeries front_series{"shock front", {}, {}, true};
  for (double t : front.collapsed_times) {
    front_table.rows.push_back({t, c.x, c.rho, c.rho});
    front_series.x.push_back(c.x);
    front_series.y.push_back(t);
  }
  for (const auto& s : front.samples) {
    front_table.rows.push_back({s.t, s.x, s.rho_left, s.rho_right});
    front_series.x.push_back(s.x);
    front_series.y.push_back(s.t);
  }
  const fs::path caustic_csv = resolve_out(ctx, "figure_caustic.csv");
  const fs::path front_csv = resolve_out(ctx, "figure_front.csv");
  const fs::path svg = resolve_out(ctx, "figure_front.svg");
  p.files.emplace_back(caustic_csv, output::csv_string(caustic_table, ctx.hash));
  p.files.emplace_back(front_csv, output::csv_string(front_table, ctx.hash));
  p.files.emplace_back(svg, output::render_svg("Caustic and shock front", "x", "t",
                                               {caustic_series, front_series}));
  p.stdout_text += caustic_csv.string() + "\n" + front_csv.string() + "\n" + svg.string() + "\n";
  return kOk;
}

Context make_context(const Options& o) {
  Context ctx;
  ctx.cfg = o.config_path.empty() ? config::RunConfig{} : config::load_config(o.config_path);
  if (const char* env = std::getenv("SHOCKFRONT_OUT_DIR"); env && *env) ctx.cfg.output_dir = env;
  if (!o.out_dir.empty()) ctx.cfg.output_dir = o.out_dir;
  ctx.hash = ctx.cfg.hash();
  ctx.out_dir = ctx.cfg.output_dir;
  return ctx;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact multivalued solutions, caustics and shock fronts of 1D gas flows"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--config", o.config_path, "JSON run configuration");
  app.add_option("--out-dir", o.out_dir, "Output directory (overrides SHOCKFRONT_OUT_DIR)");
  app.add_flag("--print-config", o.print_config, "Print the resolved configuration first");

  auto* state = app.add_subcommand("state", "Evaluate p, e, s and kappa at (v, T)");
  state->add_option("--v", o.v, "Specific volume")->required();
  state->add_option("--T", o.T, "Temperature")->required();

  auto* proc = app.add_subcommand("process", "Process curve and hyperbolicity at rho");
  proc->add_option("--rho", o.rho, "Density")->required();

  auto* solve = app.add_subcommand("solve", "All density branches at (t, x), as JSON");
  solve->add_option("--t", o.t, "Time")->required();
  solve->add_option("--x", o.x, "Position")->required();

  auto* section = app.add_subcommand("section", "Profile (x, rho, u) along rho at time t, as CSV");
  section->add_option("--t", o.t, "Time")->required();
  section->add_option("--points", o.points, "Number of rho samples")->check(CLI::PositiveNumber);
  section->add_option("--out", o.out, "Write CSV to this file instead of stdout");

  auto* caustic = app.add_subcommand("caustic", "Caustic branch (rho, t, x), as CSV");
  caustic->add_option("--branch", o.branch, "+ or -");
  caustic->add_option("--points", o.points, "Number of rho samples")->check(CLI::PositiveNumber);
  caustic->add_option("--out", o.out, "Write CSV to this file instead of stdout");

  auto* cusp = app.add_subcommand("cusp", "Shock birth point, as JSON");
  cusp->add_option("--branch", o.branch, "+ or -");

  auto* front = app.add_subcommand("front", "Shock front (t, x, rho1, rho2), as CSV");
  front->add_option("--t-min", o.t_min, "First time (default: cusp time)");
  front->add_option("--t-max", o.t_max, "Last time (default: twice the cusp time)");
  front->add_option("--steps", o.steps, "Number of times")->check(CLI::PositiveNumber);
  front->add_option("--branch", o.branch, "+ or -");
  front->add_option("--out", o.out, "Write CSV to this file instead of stdout");

  auto* verify = app.add_subcommand("verify", "Geometric and solution identity checks");
  verify->add_option("--seed", o.seed, "Sampler seed");
  verify->add_option("--samples", o.samples, "Number of sample points");

  auto* fvm_cmd = app.add_subcommand("fvm", "Finite-volume cross-check run");
  fvm_cmd->add_option("--t0", o.t0, "Initial time (before the cusp)");
  fvm_cmd->add_option("--t-end", o.t_end, "Final time")->required();
  fvm_cmd->add_option("--cells", o.cells, "Number of cells");
  fvm_cmd->add_option("--cfl", o.cfl, "CFL number");
  fvm_cmd->add_option("--out", o.out, "Write the final profile CSV (x, rho, u) to this file");

  auto* figure = app.add_subcommand("figure", "Figure data: density sections or caustic and front");
  figure->add_option("kind", o.figure, "density or front")
      ->required()
      ->check(CLI::IsMember({"density", "front"}));
  figure->add_option("--times", o.times, "Section times (density)")->delimiter(',');
  figure->add_option("--t-max", o.t_max, "Last front time (front)");
  figure->add_option("--steps", o.steps, "Front samples (front)")->check(CLI::PositiveNumber);
  figure->add_option("--points", o.points, "Number of rho samples")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    err << "run with --help for usage\n";
    return kUsage;
  }

  try {
    const Context ctx = make_context(o);
    Pending pending;
    if (o.print_config) pending.stdout_text += ctx.cfg.resolved_json() + "\n";
    int code = kOk;
    if (state->parsed()) code = cmd_state(ctx, o, pending);
    else if (proc->parsed()) code = cmd_process(ctx, o, pending);
    else if (solve->parsed()) code = cmd_solve(ctx, o, pending);
    else if (section->parsed()) code = cmd_section(ctx, o, pending);
    else if (caustic->parsed()) code = cmd_caustic(ctx, o, pending);
    else if (cusp->parsed()) code = cmd_cusp(ctx, o, pending);
    else if (front->parsed()) code = cmd_front(ctx, o, pending);
    else if (verify->parsed()) code = cmd_verify(ctx, o, pending);
    else if (fvm_cmd->parsed()) code = cmd_fvm(ctx, o, pending);
    else if (figure->parsed()) {
      code = o.figure == "density" ? cmd_figure_density(ctx, o, pending)
                                   : cmd_figure_front(ctx, o, pending);
    }
    for (const auto& [path, content] : pending.files) output::atomic_write(path, content);
    out << pending.stdout_text;
    return code;
  } catch (const CLI::ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << "\n";
    return kDomain;
  } catch (const SingularityError& e) {
    err << "singular parameters: " << e.what() << "\n";
    return kDomain;
  } catch (const AmbiguityError& e) {
    err << "ambiguous input: " << e.what() << "\n";
    return kDomain;
  } catch (const NumericError& e) {
    err << "numeric failure: " << e.what() << "\n";
    return kNumeric;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kNumeric;
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv;
  argv.push_back("shockfront");
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace shockfront::cli
