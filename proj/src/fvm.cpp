#include "shockfront/fvm.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "shockfront/error.hpp"
#include "shockfront/singularity.hpp"

namespace shockfront::fvm {

double GridState::total_mass() const {
  double sum = 0.0;
  for (double r : rho) sum += r;
  return sum * dx();
}

double GridState::total_momentum() const {
  double sum = 0.0;
  for (double m : mom) sum += m;
  return sum * dx();
}

namespace {

void check_spec(const GridSpec& spec) {
  if (spec.n_cells <= 0) throw DomainError("grid needs at least one cell");
  if (!(spec.x_max > spec.x_min)) throw DomainError("grid needs x_max > x_min");
}

GridState empty_state(const GridSpec& spec) {
  check_spec(spec);
  GridState s;
  s.spec = spec;
  s.rho.assign(static_cast<std::size_t>(spec.n_cells), 0.0);
  s.mom.assign(static_cast<std::size_t>(spec.n_cells), 0.0);
  return s;
}

struct Flux {
  double mass;
  double mom;
};

double wave_speed(const process::ProcessCurve& curve, double rho, double mom) {
  const double dp = curve.dp(rho);
  return std::abs(mom / rho) + std::sqrt(std::max(dp, 0.0));
}

Flux rusanov(const process::ProcessCurve& curve, double rl, double ml, double rr, double mr) {
  const double ul = ml / rl;
  const double ur = mr / rr;
  const double s = std::max(wave_speed(curve, rl, ml), wave_speed(curve, rr, mr));
  Flux f;
  f.mass = 0.5 * (ml + mr) - 0.5 * s * (rr - rl);
  f.mom = 0.5 * (ml * ul + curve.p(rl) + mr * ur + curve.p(rr)) - 0.5 * s * (mr - ml);
  return f;
}

[[noreturn]] void vacuum(int i, double rho, double t) {
  std::ostringstream msg;
  msg << "vacuum or invalid density " << rho << " in cell " << i << " at t=" << t;
  throw NumericError(msg.str());
}

double step_impl(GridState& st, const process::ProcessCurve& curve, const StepOptions& opt,
                 bool parallel) {
  if (!(opt.cfl > 0.0 && opt.cfl < 1.0)) throw DomainError("cfl must lie in (0, 1)");
  const int n = st.spec.n_cells;
  const bool periodic = st.spec.boundary == Boundary::periodic;

  int bad = -1;
  double max_speed = 0.0;
#pragma omp parallel for if (parallel) reduction(max : max_speed) reduction(max : bad)
  for (int i = 0; i < n; ++i) {
    const double r = st.rho[static_cast<std::size_t>(i)];
    if (!(r > 0.0) || !std::isfinite(r)) {
      bad = std::max(bad, i);
      continue;
    }
    max_speed = std::max(max_speed, wave_speed(curve, r, st.mom[static_cast<std::size_t>(i)]));
  }
  if (bad >= 0) vacuum(bad, st.rho[static_cast<std::size_t>(bad)], st.time);
  if (!(max_speed > 0.0)) throw NumericError("zero wave speed; the time step is undefined");

  const double dx = st.dx();
  double dt = opt.cfl * dx / max_speed;
  if (opt.max_dt > 0.0) dt = std::min(dt, opt.max_dt);

  // Interface k sits between cells k-1 and k; ghosts copy the edge cells.
  std::vector<Flux> flux(static_cast<std::size_t>(n + 1));
#pragma omp parallel for if (parallel)
  for (int k = 0; k <= n; ++k) {
    int left = k - 1;
    int right = k;
    if (periodic) {
      left = (left + n) % n;
      right = right % n;
    } else {
      left = std::max(left, 0);
      right = std::min(right, n - 1);
    }
    const auto l = static_cast<std::size_t>(left);
    const auto r = static_cast<std::size_t>(right);
    flux[static_cast<std::size_t>(k)] = rusanov(curve, st.rho[l], st.mom[l], st.rho[r], st.mom[r]);
  }

  const double lambda = dt / dx;
#pragma omp parallel for if (parallel)
  for (int i = 0; i < n; ++i) {
    const auto c = static_cast<std::size_t>(i);
    st.rho[c] -= lambda * (flux[c + 1].mass - flux[c].mass);
    st.mom[c] -= lambda * (flux[c + 1].mom - flux[c].mom);
  }
  if (!periodic) {
    st.boundary_mass_in += dt * (flux.front().mass - flux.back().mass);
    st.boundary_mom_in += dt * (flux.front().mom - flux.back().mom);
  }
  st.time += dt;
  ++st.steps;
  return dt;
}

}  // namespace

GridState init_constant(const GridSpec& spec, double rho, double u) {
  if (!(rho > 0.0)) throw DomainError("constant state needs rho > 0");
  GridState s = empty_state(spec);
  std::fill(s.rho.begin(), s.rho.end(), rho);
  std::fill(s.mom.begin(), s.mom.end(), rho * u);
  return s;
}

GridState init_profile(const GridSpec& spec, const ProfileFn& profile) {
  GridState s = empty_state(spec);
  for (int i = 0; i < spec.n_cells; ++i) {
    const auto [rho, u] = profile(s.x_center(i));
    if (!(rho > 0.0)) vacuum(i, rho, 0.0);
    s.rho[static_cast<std::size_t>(i)] = rho;
    s.mom[static_cast<std::size_t>(i)] = rho * u;
  }
  return s;
}

GridState init_from_analytic(const exact::SolutionFamily& family, double t0, const GridSpec& spec) {
  GridState s = empty_state(spec);
  s.time = t0;
  std::vector<exact::BranchQuery> queries(static_cast<std::size_t>(spec.n_cells));
  for (int i = 0; i < spec.n_cells; ++i) queries[static_cast<std::size_t>(i)] = {t0, s.x_center(i)};
  const auto sets = exact::branches_batch(family, queries, family.curve().domain());
  for (int i = 0; i < spec.n_cells; ++i) {
    const auto& set = sets[static_cast<std::size_t>(i)];
    if (set.roots.size() != 1) {
      std::ostringstream msg;
      msg << "analytic data at t0=" << t0 << ", x=" << set.x << " has " << set.roots.size()
          << " density branches; need exactly one";
      const auto c = singularity::cusp(family, singularity::Sign::plus, family.curve().domain());
      if (c.found) msg << " (choose t0 < cusp time " << c.t << ")";
      throw DomainError(msg.str());
    }
    const double rho = set.roots.front();
    s.rho[static_cast<std::size_t>(i)] = rho;
    s.mom[static_cast<std::size_t>(i)] = rho * exact::velocity_U(family, rho, t0);
  }
  return s;
}

double step(GridState& state, const process::ProcessCurve& curve, const StepOptions& options) {
  return step_impl(state, curve, options, true);
}

double step_serial(GridState& state, const process::ProcessCurve& curve,
                   const StepOptions& options) {
  return step_impl(state, curve, options, false);
}

void advance_to(GridState& state, const process::ProcessCurve& curve, double t_end,
                const StepOptions& options, bool parallel) {
  StepOptions opt = options;
  while (state.time < t_end) {
    opt.max_dt = t_end - state.time;
    if (options.max_dt > 0.0) opt.max_dt = std::min(opt.max_dt, options.max_dt);
    step_impl(state, curve, opt, parallel);
    if (t_end - state.time < 1e-14 * std::max(1.0, std::abs(t_end))) state.time = t_end;
  }
}

double mass_drift(const GridState& state, double initial_mass) {
  const double expected = initial_mass + state.boundary_mass_in;
  return std::abs(state.total_mass() - expected) / std::abs(initial_mass);
}

ShockLocation locate_shock(const GridState& state, const ShockOptions& options) {
  const int n = state.spec.n_cells;
  ShockLocation loc;
  if (n < 3) return loc;
  // jump[k] belongs to the interface between cells k and k+1.
  std::vector<double> jump(static_cast<std::size_t>(n - 1));
  for (int k = 0; k + 1 < n; ++k) {
    const double a = state.rho[static_cast<std::size_t>(k)];
    const double b = state.rho[static_cast<std::size_t>(k + 1)];
    jump[static_cast<std::size_t>(k)] = std::abs(b - a) / (0.5 * (a + b));
  }
  const auto best = std::max_element(jump.begin(), jump.end());
  const int kb = static_cast<int>(best - jump.begin());
  loc.strength = *best;
  if (!(loc.strength >= options.threshold)) return loc;

  loc.found = true;
  loc.interface_index = kb;
  const double dx = state.dx();
  double wsum = 0.0, xsum = 0.0;
  for (int k = std::max(kb - 1, 0); k <= std::min(kb + 1, n - 2); ++k) {
    const double w = jump[static_cast<std::size_t>(k)];
    wsum += w;
    xsum += w * (state.spec.x_min + (k + 1) * dx);
  }
  loc.x = xsum / wsum;

  // Strongest local maximum above threshold away from the main jump.
  double second = 0.0;
  for (int k = 0; k + 1 < n; ++k) {
    if (std::abs(k - kb) <= options.separation_cells) continue;
    const double j = jump[static_cast<std::size_t>(k)];
    const double prev = k > 0 ? jump[static_cast<std::size_t>(k - 1)] : 0.0;
    const double next = k + 2 < n ? jump[static_cast<std::size_t>(k + 1)] : 0.0;
    if (j >= options.threshold && j >= prev && j >= next && j > second) {
      second = j;
      loc.second_x = state.spec.x_min + (k + 1) * dx;
    }
  }
  loc.multiple = second > 0.0;
  return loc;
}

double l1_density_error(const GridState& state, const exact::SolutionFamily& family,
                        Interval window) {
  std::vector<exact::BranchQuery> queries;
  std::vector<double> numeric;
  for (int i = 0; i < state.spec.n_cells; ++i) {
    const double x = state.x_center(i);
    if (!window.contains(x)) continue;
    queries.push_back({state.time, x});
    numeric.push_back(state.rho[static_cast<std::size_t>(i)]);
  }
  if (queries.empty()) throw DomainError("L1 window contains no cell centres");
  const auto sets = exact::branches_batch(family, queries, family.curve().domain());
  double sum = 0.0;
  for (std::size_t k = 0; k < sets.size(); ++k) {
    if (sets[k].roots.size() != 1) {
      std::ostringstream msg;
      msg << "exact density is not single-valued at x=" << sets[k].x << ", t=" << sets[k].t;
      throw DomainError(msg.str());
    }
    sum += std::abs(numeric[k] - sets[k].roots.front());
  }
  return sum * state.dx() / window.width();
}

}  // namespace shockfront::fvm
