#include "shockfront/singularity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "shockfront/error.hpp"

namespace shockfront::singularity {

using exact::SolutionFamily;

const char* to_string(Sign s) { return s == Sign::plus ? "+" : "-"; }

namespace {

void require_caustic_formula(const exact::Alphas& a) {
  if (a.a2 == 0.0) throw SingularityError("caustic needs alpha2 != 0");
  if (a.a3 == 0.0) throw SingularityError("closed-form caustic needs alpha3 != 0");
}

}  // namespace

double caustic_time(const SolutionFamily& family, Sign branch, double rho) {
  const auto& a = family.alphas();
  require_caustic_formula(a);
  const double r = rho + a.a3;
  return (to_double(branch) * family.curve().A(rho) * r * r - a.a1 * a.a3 + a.a0) / (a.a3 * a.a2);
}

double caustic_time_slope(const SolutionFamily& family, Sign branch, double rho) {
  const auto& a = family.alphas();
  require_caustic_formula(a);
  const double r = rho + a.a3;
  const auto& curve = family.curve();
  return to_double(branch) * (curve.A_prime(rho) * r * r + 2.0 * curve.A(rho) * r) / (a.a3 * a.a2);
}

double caustic_x(const SolutionFamily& family, Sign branch, double rho) {
  const auto& a = family.alphas();
  require_caustic_formula(a);
  const double r = rho + a.a3;
  const double A = family.curve().A(rho);
  const double num = rho * (rho + 2.0 * a.a3) * r * r * A * A - a.a3 * a.a3 * a.a1 * a.a1 +
                     a.a0 * a.a0 + to_double(branch) * 2.0 * a.a0 * r * r * A;
  return -family.I(rho) / a.a2 + num / (2.0 * a.a3 * a.a3 * a.a2);
}

namespace {

// alpha3 = 0: g_rho no longer depends on t, so the folds sit at fixed
// densities where A rho^2 = +-(-a0); the caustic is x = g(rho_c, t).
CausticCurve caustic_fallback(const SolutionFamily& family, Sign branch,
                              std::span<const double> rho_grid, Interval t_range) {
  CausticCurve out;
  out.branch = branch;
  out.numeric_fallback = true;
  if (rho_grid.size() < 2) return out;
  const auto& a = family.alphas();
  const double s = to_double(branch);
  // Fold condition on this branch: s A rho^2 - (-a0) = 0.
  auto fold = [&](double rho) { return s * family.curve().A(rho) * rho * rho + a.a0; };
  std::vector<double> folds;
  for (std::size_t i = 0; i + 1 < rho_grid.size(); ++i) {
    double lo = rho_grid[i];
    double hi = rho_grid[i + 1];
    double flo = fold(lo);
    const double fhi = fold(hi);
    if (flo == 0.0) {
      folds.push_back(lo);
      continue;
    }
    if ((flo < 0.0) == (fhi < 0.0)) continue;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      const double fm = fold(mid);
      if ((fm < 0.0) == (flo < 0.0)) {
        lo = mid;
        flo = fm;
      } else {
        hi = mid;
      }
    }
    folds.push_back(0.5 * (lo + hi));
  }
  const std::size_t nt = rho_grid.size();
  for (double rc : folds) {
    for (std::size_t k = 0; k < nt; ++k) {
      const double t = t_range.lo + (t_range.hi - t_range.lo) * double(k) / double(nt - 1);
      out.samples.push_back({rc, t, exact::g(family, rc, t)});
    }
  }
  return out;
}

}  // namespace

CausticCurve caustic(const SolutionFamily& family, Sign branch, std::span<const double> rho_grid,
                     Interval fallback_t_range) {
  const auto& a = family.alphas();
  if (a.a2 == 0.0) throw SingularityError("caustic needs alpha2 != 0");
  if (a.a3 == 0.0) return caustic_fallback(family, branch, rho_grid, fallback_t_range);
  CausticCurve out;
  out.branch = branch;
  out.samples.reserve(rho_grid.size());
  for (double rho : rho_grid) {
    out.samples.push_back({rho, caustic_time(family, branch, rho), caustic_x(family, branch, rho)});
  }
  return out;
}

std::vector<double> caustic_crossings(const SolutionFamily& family, Sign branch, double t,
                                      Interval rho_window, int scan_points) {
  const Interval dom = family.curve().domain();
  const Interval window{std::max(rho_window.lo, dom.lo), std::min(rho_window.hi, dom.hi)};
  std::vector<double> out;
  if (window.empty()) return out;
  const auto grid = exact::make_rho_grid(window, std::max(scan_points, 2));
  auto F = [&](double rho) { return caustic_time(family, branch, rho) - t; };
  double f_prev = F(grid[0]);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double f_next = F(grid[i]);
    if (f_prev == 0.0) out.push_back(grid[i - 1]);
    if ((f_prev < 0.0) != (f_next < 0.0) && f_prev != 0.0 && f_next != 0.0) {
      double lo = grid[i - 1];
      double hi = grid[i];
      double flo = f_prev;
      for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = F(mid);
        if ((fm < 0.0) == (flo < 0.0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      out.push_back(0.5 * (lo + hi));
    }
    f_prev = f_next;
  }
  return out;
}

Cusp cusp(const SolutionFamily& family, Sign branch, Interval rho_window, TimeDirection direction) {
  Cusp out;
  const auto& a = family.alphas();
  if (a.a2 == 0.0 || a.a3 == 0.0) {
    out.note = "caustic time t(rho) undefined for alpha2 = 0 or alpha3 = 0";
    return out;
  }
  const Interval dom = family.curve().domain();
  const Interval window{std::max(rho_window.lo, dom.lo), std::min(rho_window.hi, dom.hi)};
  if (window.empty()) {
    out.note = "empty rho window";
    return out;
  }
  const double dir = direction == TimeDirection::forward ? 1.0 : -1.0;
  auto objective = [&](double rho) { return dir * caustic_time(family, branch, rho); };

  const auto grid = exact::make_rho_grid(window, 512);
  std::size_t best = 0;
  double best_val = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double v = objective(grid[i]);
    if (v < best_val) {
      best_val = v;
      best = i;
    }
  }
  if (best == 0 || best + 1 == grid.size()) {
    out.note = "caustic time is monotone on the window (no interior extremum)";
    return out;
  }

  // Golden-section search on the bracketing cells.
  constexpr double kInvPhi = 0.6180339887498949;
  double lo = grid[best - 1];
  double hi = grid[best + 1];
  double c = hi - kInvPhi * (hi - lo);
  double d = lo + kInvPhi * (hi - lo);
  double fc = objective(c);
  double fd = objective(d);
  while (hi - lo > 1e-10 * std::max(1.0, std::abs(hi))) {
    if (fc < fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - kInvPhi * (hi - lo);
      fc = objective(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + kInvPhi * (hi - lo);
      fd = objective(d);
    }
  }
  double rho = 0.5 * (lo + hi);

  // Polish: bisection on the sign change of dt/drho around the estimate.
  const double pad = 1e-6 * std::max(rho, 1e-300);
  double a_lo = std::max(window.lo, rho - pad);
  double a_hi = std::min(window.hi, rho + pad);
  double s_lo = dir * caustic_time_slope(family, branch, a_lo);
  const double s_hi = dir * caustic_time_slope(family, branch, a_hi);
  if (s_lo < 0.0 && s_hi > 0.0) {
    for (int it = 0; it < 200 && a_hi - a_lo > 1e-15 * a_hi; ++it) {
      const double mid = 0.5 * (a_lo + a_hi);
      const double sm = dir * caustic_time_slope(family, branch, mid);
      if (sm < 0.0) {
        a_lo = mid;
        s_lo = sm;
      } else {
        a_hi = mid;
      }
    }
    rho = 0.5 * (a_lo + a_hi);
  }

  out.found = true;
  out.rho = rho;
  out.t = caustic_time(family, branch, rho);
  out.x = exact::g(family, rho, out.t);
  return out;
}

double potential_H(const SolutionFamily& family, double rho, double t) {
  const auto& a = family.alphas();
  if (a.a2 == 0.0) throw SingularityError("potential H needs alpha2 != 0");
  const double r = rho + a.a3;
  if (std::abs(r) <= 1e-14 * std::max({1.0, std::abs(rho), std::abs(a.a3)})) {
    throw SingularityError("potential H singular at rho = -alpha3");
  }
  const double first = (a.a2 * rho * t - a.a1 * a.a3 + a.a0) *
                       (a.a1 * a.a3 * a.a3 + a.a3 * ((t * a.a2 + 2.0 * a.a1) * rho - a.a0) -
                        2.0 * rho * a.a0);
  return first / (2.0 * a.a2 * r * r) - family.J(rho) / a.a2;
}

double cut_loop_integral(const SolutionFamily& family, double rho1, double rho2, double t) {
  auto integrand = [&](double rho) { return rho * exact::g_rho(family, rho, t); };
  double error = 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, rho1, rho2, 20,
                                                                       1e-14, &error);
}

// ---------------------------------------------------------------------------
// shock front

namespace {

struct FrontState {
  double t;
  double mid;  // (rho1 + rho2) / 2
  double q;    // ((rho2 - rho1) / 2)^2
};

struct Residual {
  double E1, E2;      // scaled residuals driven to zero by Newton
  double dH, dg;      // H(rho2) - H(rho1), g(rho2) - g(rho1)
  double J[2][2];     // d(E1, E2) / d(mid, q)
};

class FrontSolver {
 public:
  FrontSolver(const SolutionFamily& family, Interval window, double tol_H, double tol_g,
              int max_newton)
      : family_(family), window_(window), tol_H_(tol_H), tol_g_(tol_g), max_newton_(max_newton) {}

  bool admissible(double mid, double q) const {
    if (!(q > 0.0) || !std::isfinite(mid)) return false;
    const double h = std::sqrt(q);
    return mid - h > window_.lo && mid + h < window_.hi;
  }

  Residual evaluate(double t, double mid, double q) const {
    const double h = std::sqrt(q);
    const double r2 = mid + h;
    const double r1 = mid - h;
    const double g2 = exact::g(family_, r2, t);
    const double g1 = exact::g(family_, r1, t);
    const double H2 = potential_H(family_, r2, t);
    const double H1 = potential_H(family_, r1, t);
    const double s2 = exact::g_rho(family_, r2, t);
    const double s1 = exact::g_rho(family_, r1, t);

    Residual R{};
    R.dg = g2 - g1;
    R.dH = H2 - H1;
    // Phi = int_{-h}^{h} s g_rho(mid + s) ds = dH - mid dg.
    const double phi = R.dH - mid * R.dg;
    const double h2 = h * h;
    const double h3 = h2 * h;
    R.E1 = R.dg / (2.0 * h);
    R.E2 = phi / h3;
    const double dE1_dm = (s2 - s1) / (2.0 * h);
    const double dE1_dh = (s2 + s1) / (2.0 * h) - R.dg / (2.0 * h2);
    const double dE2_dm = (h * (s2 + s1) - R.dg) / h3;
    const double dE2_dh = (s2 - s1) / h2 - 3.0 * phi / (h3 * h);
    const double dh_dq = 0.5 / h;
    R.J[0][0] = dE1_dm;
    R.J[0][1] = dE1_dh * dh_dq;
    R.J[1][0] = dE2_dm;
    R.J[1][1] = dE2_dh * dh_dq;
    return R;
  }

  bool converged(const Residual& R) const {
    return std::abs(R.dH) <= tol_H_ && std::abs(R.dg) <= tol_g_;
  }

  std::optional<FrontState> solve(double t, double mid, double q) const {
    if (!admissible(mid, q)) return std::nullopt;
    Residual R = evaluate(t, mid, q);
    for (int it = 0; it < max_newton_; ++it) {
      if (converged(R)) return FrontState{t, mid, q};
      const double det = R.J[0][0] * R.J[1][1] - R.J[0][1] * R.J[1][0];
      if (!(std::abs(det) > 0.0) || !std::isfinite(det)) return std::nullopt;
      const double dm = -(R.J[1][1] * R.E1 - R.J[0][1] * R.E2) / det;
      const double dq = -(-R.J[1][0] * R.E1 + R.J[0][0] * R.E2) / det;
      const double norm0 = R.E1 * R.E1 + R.E2 * R.E2;
      double lambda = 1.0;
      bool accepted = false;
      for (int k = 0; k < 40; ++k, lambda *= 0.5) {
        const double m_new = mid + lambda * dm;
        const double q_new = q + lambda * dq;
        if (!admissible(m_new, q_new)) continue;
        const Residual trial = evaluate(t, m_new, q_new);
        const double norm1 = trial.E1 * trial.E1 + trial.E2 * trial.E2;
        if (norm1 <= (1.0 - 1e-4 * lambda) * norm0 || converged(trial)) {
          mid = m_new;
          q = q_new;
          R = trial;
          accepted = true;
          break;
        }
      }
      if (!accepted) return std::nullopt;
    }
    if (converged(R)) return FrontState{t, mid, q};
    return std::nullopt;
  }

  Residual residual_at(const FrontState& s) const { return evaluate(s.t, s.mid, s.q); }

 private:
  const SolutionFamily& family_;
  Interval window_;
  double tol_H_;
  double tol_g_;
  int max_newton_;
};

}  // namespace

FrontCurve shock_front(const SolutionFamily& family, Interval t_range, int steps,
                       const FrontOptions& options) {
  if (steps < 1) throw DomainError("shock front needs at least one time step");
  if (t_range.hi < t_range.lo) throw DomainError("shock front time range is reversed");
  const Interval dom = family.curve().domain();
  const Interval window = options.rho_window.empty()
                              ? dom
                              : Interval{std::max(options.rho_window.lo, dom.lo),
                                         std::min(options.rho_window.hi, dom.hi)};

  FrontCurve out;
  out.birth = cusp(family, options.branch, window);
  if (!out.birth.found) {
    throw NumericError("shock front needs a cusp on the caustic: " + out.birth.note);
  }
  const double t_star = out.birth.t;
  const double rho_star = out.birth.rho;
  const double t_eps = 1e-12 * std::max(1.0, std::abs(t_star));
  if (t_range.lo < t_star - t_eps) {
    std::ostringstream msg;
    msg << "shock front exists only after the cusp time t*=" << t_star << "; requested t_min="
        << t_range.lo;
    throw DomainError(msg.str());
  }

  const double H_star = potential_H(family, rho_star, t_star);
  out.tol_H = options.relative_tol * std::max(std::abs(H_star), 1.0);
  out.tol_g = options.relative_tol * std::max(std::abs(out.birth.x), 1.0);
  FrontSolver solver(family, window, out.tol_H, out.tol_g, options.max_newton);

  // Continuation history: the cusp itself acts as the zero-width start.
  FrontState prev{t_star, rho_star, 0.0};
  std::optional<FrontState> prev2;

  auto predict = [&](double t) {
    if (!prev2) return prev;
    const double f = (t - prev.t) / (prev.t - prev2->t);
    return FrontState{t, prev.mid + f * (prev.mid - prev2->mid), prev.q + f * (prev.q - prev2->q)};
  };

  auto accept = [&](const FrontState& s) {
    prev2 = prev;
    prev = s;
  };

  // First solve just after the cusp from the (rho* - delta, rho* + delta) seed.
  auto start = [&](double t_target) {
    const double delta = options.seed_fraction * rho_star;
    const double t_first = std::min(t_target, t_star + 1e-3 * std::max(1.0, std::abs(t_star)));
    auto s = solver.solve(t_first, rho_star, delta * delta);
    if (!s) throw NumericError("shock front Newton failed to start from the cusp seed");
    accept(*s);
  };

  // Advance the continuation to t_target, halving the step on failure.
  auto advance = [&](double t_target) {
    int depth = 0;
    while (prev.t < t_target) {
      double t_try = t_target;
      std::optional<FrontState> s;
      for (depth = 0; depth <= options.max_bisections; ++depth) {
        const FrontState guess = predict(t_try);
        s = solver.solve(t_try, guess.mid, guess.q);
        if (s) break;
        t_try = prev.t + 0.5 * (t_try - prev.t);
      }
      if (!s) {
        std::ostringstream msg;
        msg << "shock front Newton diverged near t=" << prev.t << " after " << options.max_bisections
            << " step bisections";
        throw NumericError(msg.str());
      }
      accept(*s);
    }
  };

  for (int k = 0; k < steps; ++k) {
    const double t = steps == 1 ? t_range.lo
                                : t_range.lo + (t_range.hi - t_range.lo) * double(k) / double(steps - 1);
    if (t <= t_star + t_eps) {
      out.collapsed_times.push_back(t);
      continue;
    }
    if (!prev2) start(t);
    advance(t);

    const double h = std::sqrt(prev.q);
    FrontSample sample{t, 0.0, prev.mid - h, prev.mid + h};
    sample.x = exact::g(family, sample.rho_left, t);
    const Residual R = solver.residual_at(prev);
    out.max_residual_H = std::max(out.max_residual_H, std::abs(R.dH));
    out.max_residual_g = std::max(out.max_residual_g, std::abs(R.dg));
    if (!out.samples.empty()) {
      const FrontSample& last = out.samples.back();
      if (!(sample.rho_left < last.rho_left) || !(sample.rho_right > last.rho_right)) {
        out.monotone_strengthening = false;
      }
    }
    out.samples.push_back(sample);
  }
  return out;
}

}  // namespace shockfront::singularity
