#include "shockfront/exact_solution.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <functional>
#include <limits>
#include <sstream>
#include <utility>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "shockfront/error.hpp"

namespace shockfront::exact {

namespace {

// int rho^k drho without integration constant.
double power_antiderivative(double k, double rho) {
  if (std::abs(k + 1.0) < 1e-12) return std::log(rho);
  return std::pow(rho, k + 1.0) / (k + 1.0);
}

double r_of(const Alphas& a, double rho) {
  const double r = rho + a.a3;
  if (std::abs(r) <= 1e-14 * std::max({1.0, std::abs(rho), std::abs(a.a3)})) {
    std::ostringstream msg;
    msg << "rho + alpha3 vanishes at rho=" << rho;
    throw SingularityError(msg.str());
  }
  return r;
}

void require_a2(const Alphas& a) {
  if (a.a2 == 0.0) {
    throw SingularityError("alpha2 = 0 degenerates the density relation; only U(rho, t) is defined");
  }
}

// w(t) = a2 a3 t + a1 a3 - a0; the caustic is w = +-A r^2.
double w_of(const Alphas& a, double t) { return a.a2 * a.a3 * t + a.a1 * a.a3 - a.a0; }

double integrate_log(const std::function<double(double)>& f, double from, double to) {
  if (from == to) return 0.0;
  auto integrand = [&](double s) {
    const double rho = std::exp(s);
    return f(rho) * rho;
  };
  double error = 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      integrand, std::log(from), std::log(to), 20, 1e-14, &error);
}

}  // namespace

SolutionFamily::SolutionFamily(Alphas alphas, process::ProcessCurve curve, AntiderivativeMode mode)
    : alphas_(alphas), curve_(std::move(curve)) {
  const bool has_law = curve_.power_law().has_value();
  switch (mode) {
    case AntiderivativeMode::automatic:
      closed_form_ = has_law;
      break;
    case AntiderivativeMode::closed_form:
      if (!has_law) throw DomainError("closed-form antiderivatives need a power-law A(rho)");
      closed_form_ = true;
      break;
    case AntiderivativeMode::quadrature:
      closed_form_ = false;
      break;
  }
  const Interval dom = curve_.domain();
  rho_ref_ = std::sqrt(dom.lo * dom.hi);
  if (has_law) {
    I_ref_ = I_closed(rho_ref_);
    J_ref_ = J_closed(rho_ref_);
  }
}

double SolutionFamily::I_closed(double rho) const {
  const auto& law = curve_.power_law();
  if (!law) throw DomainError("closed-form antiderivative needs a power-law A(rho)");
  const double m2 = 2.0 * law->m;
  return law->A0 * law->A0 *
         (power_antiderivative(m2 + 1.0, rho) + alphas_.a3 * power_antiderivative(m2, rho));
}

double SolutionFamily::J_closed(double rho) const {
  const auto& law = curve_.power_law();
  if (!law) throw DomainError("closed-form antiderivative needs a power-law A(rho)");
  const double m2 = 2.0 * law->m;
  return law->A0 * law->A0 *
         (power_antiderivative(m2 + 2.0, rho) + alphas_.a3 * power_antiderivative(m2 + 1.0, rho));
}

double SolutionFamily::I_quadrature(double rho) const {
  if (!(rho > 0.0)) throw DomainError("antiderivative needs rho > 0");
  const double a3 = alphas_.a3;
  return I_ref_ + integrate_log(
                      [&](double r) { return curve_.A_squared(r) * (r + a3); }, rho_ref_, rho);
}

double SolutionFamily::J_quadrature(double rho) const {
  if (!(rho > 0.0)) throw DomainError("antiderivative needs rho > 0");
  const double a3 = alphas_.a3;
  return J_ref_ + integrate_log(
                      [&](double r) { return r * (r + a3) * curve_.A_squared(r); }, rho_ref_, rho);
}

namespace {
void require_in_domain(const process::ProcessCurve& curve, double rho) {
  if (!curve.domain().contains(rho)) {
    std::ostringstream msg;
    msg << "rho=" << rho << " outside the process domain [" << curve.domain().lo << ", "
        << curve.domain().hi << "]";
    throw DomainError(msg.str());
  }
}
}  // namespace

double SolutionFamily::I(double rho) const {
  require_in_domain(curve_, rho);
  return closed_form_ ? I_closed(rho) : I_quadrature(rho);
}

double SolutionFamily::J(double rho) const {
  require_in_domain(curve_, rho);
  return closed_form_ ? J_closed(rho) : J_quadrature(rho);
}

// ---------------------------------------------------------------------------
// g, U and their partials. With r = rho + a3 and w as above,
//   g   = -I/a2 + t (a2 t + 2 a1)/2 - w^2 / (2 a2 r^2)
//   g_r = -A^2 r / a2 + w^2 / (a2 r^3)
//   g_t = a2 t + a1 - a3 w / r^2
//   U   = a2 t + a1 - w / r

double g(const SolutionFamily& family, double rho, double t) {
  const Alphas& a = family.alphas();
  require_a2(a);
  const double r = r_of(a, rho);
  const double w = w_of(a, t);
  return -family.I(rho) / a.a2 + 0.5 * t * (a.a2 * t + 2.0 * a.a1) - w * w / (2.0 * a.a2 * r * r);
}

double g_rho(const SolutionFamily& family, double rho, double t) {
  const Alphas& a = family.alphas();
  require_a2(a);
  const double r = r_of(a, rho);
  const double w = w_of(a, t);
  return (-family.curve().A_squared(rho) * r + w * w / (r * r * r)) / a.a2;
}

double g_t(const SolutionFamily& family, double rho, double t) {
  const Alphas& a = family.alphas();
  require_a2(a);
  const double r = r_of(a, rho);
  return a.a2 * t + a.a1 - a.a3 * w_of(a, t) / (r * r);
}

double velocity_U(const SolutionFamily& family, double rho, double t) {
  const Alphas& a = family.alphas();
  const double r = r_of(a, rho);
  return (a.a2 * rho * t + a.a1 * rho + a.a0) / r;
}

double velocity_U_rho(const SolutionFamily& family, double rho, double t) {
  const Alphas& a = family.alphas();
  const double r = r_of(a, rho);
  return w_of(a, t) / (r * r);
}

double velocity_U_t(const SolutionFamily& family, double rho, double /*t*/) {
  const Alphas& a = family.alphas();
  const double r = r_of(a, rho);
  return a.a2 * rho / r;
}

double ansatz_f(const Alphas& a, double u, double rho, double t) {
  return a.a0 + a.a1 * rho + a.a2 * rho * t - u * (rho + a.a3);
}

EulerResidual euler_residual(const SolutionFamily& family, double rho, double t) {
  const double gr = g_rho(family, rho, t);
  if (gr == 0.0) throw SingularityError("Euler residual undefined on the caustic (g_rho = 0)");
  const double rho_x = 1.0 / gr;
  const double rho_t = -g_t(family, rho, t) / gr;
  const double u = velocity_U(family, rho, t);
  const double Ur = velocity_U_rho(family, rho, t);
  const double u_x = Ur * rho_x;
  const double u_t = Ur * rho_t + velocity_U_t(family, rho, t);
  const double dp = family.curve().dp(rho);
  return {rho_t + u * rho_x + rho * u_x, u_t + u * u_x + dp / rho * rho_x};
}

// ---------------------------------------------------------------------------
// branches

std::vector<double> make_rho_grid(Interval window, int n) {
  std::vector<double> grid;
  if (n <= 0 || window.hi < window.lo) return grid;
  grid.resize(static_cast<std::size_t>(n));
  if (n == 1) {
    grid[0] = window.lo;
    return grid;
  }
  const bool log_spaced = window.lo > 0.0 && window.hi / window.lo > 10.0;
  for (int i = 0; i < n; ++i) {
    const double f = double(i) / double(n - 1);
    grid[static_cast<std::size_t>(i)] =
        log_spaced ? window.lo * std::pow(window.hi / window.lo, f)
                   : window.lo + f * (window.hi - window.lo);
  }
  grid.front() = window.lo;
  grid.back() = window.hi;
  return grid;
}

namespace {

constexpr int kRefineSubdivisions = 64;

// Root of F on [a, b] with F(a) F(b) < 0: bisection to roundoff, then one
// guarded Newton step.
double polish_root(const SolutionFamily& family, double t, double x, double a, double b, double fa) {
  auto F = [&](double r) { return g(family, r, t) - x; };
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (a + b);
    if (mid <= a || mid >= b) break;
    if (b - a <= 1e-15 * std::max(std::abs(a), std::abs(b))) break;
    const double fm = F(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (fa < 0.0)) {
      a = mid;
      fa = fm;
    } else {
      b = mid;
    }
  }
  double root = 0.5 * (a + b);
  const double slope = g_rho(family, root, t);
  if (slope != 0.0 && std::isfinite(slope)) {
    const double next = root - F(root) / slope;
    if (next >= a && next <= b) root = next;
  }
  return root;
}

void scan_segment(const SolutionFamily& family, double t, double x, std::span<const double> rho,
                  std::span<const double> f, std::vector<double>& roots) {
  for (std::size_t i = 0; i + 1 < rho.size(); ++i) {
    if (f[i] == 0.0) {
      roots.push_back(rho[i]);
      continue;
    }
    if ((f[i] < 0.0) != (f[i + 1] < 0.0) && f[i + 1] != 0.0) {
      roots.push_back(polish_root(family, t, x, rho[i], rho[i + 1], f[i]));
    }
  }
  if (!rho.empty() && f.back() == 0.0) roots.push_back(rho.back());
}

}  // namespace

BranchSet branches(const SolutionFamily& family, double t, double x, Interval rho_window,
                   const BranchOptions& options) {
  BranchSet out;
  out.t = t;
  out.x = x;
  const Interval dom = family.curve().domain();
  const Interval window{std::max(rho_window.lo, dom.lo), std::min(rho_window.hi, dom.hi)};
  if (window.empty()) return out;

  const std::vector<double> grid = make_rho_grid(window, std::max(options.grid_points, 2));
  std::vector<double> f(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) f[i] = g(family, grid[i], t) - x;

  std::vector<double> roots;
  scan_segment(family, t, x, grid, f, roots);

  // A fold whose two roots fall inside one scan cell shows up as a turn of the
  // discrete slope without a sign change; rescan those cells finely.
  for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
    const double left = f[i] - f[i - 1];
    const double right = f[i + 1] - f[i];
    if ((left < 0.0) == (right < 0.0) || left == 0.0 || right == 0.0) continue;
    for (std::size_t cell : {i - 1, i}) {
      if ((f[cell] < 0.0) != (f[cell + 1] < 0.0)) continue;  // already bracketed
      std::vector<double> sub = make_rho_grid({grid[cell], grid[cell + 1]}, kRefineSubdivisions + 1);
      std::vector<double> fs(sub.size());
      for (std::size_t k = 0; k < sub.size(); ++k) fs[k] = g(family, sub[k], t) - x;
      std::vector<double> extra;
      scan_segment(family, t, x, sub, fs, extra);
      roots.insert(roots.end(), extra.begin(), extra.end());
    }
  }

  std::sort(roots.begin(), roots.end());
  for (double r : roots) {
    if (!out.roots.empty() &&
        std::abs(r - out.roots.back()) <= options.merge_tol * std::max(1.0, std::abs(r))) {
      continue;
    }
    out.roots.push_back(r);
  }

  const double scale = std::max(1.0, std::abs(x));
  out.near_caustic.reserve(out.roots.size());
  for (double r : out.roots) {
    out.near_caustic.push_back(std::abs(g_rho(family, r, t) * r) < options.caustic_threshold * scale);
    const double edge_tol = options.merge_tol * std::max(1.0, r);
    if (std::abs(r - window.lo) <= edge_tol || std::abs(r - window.hi) <= edge_tol) {
      out.edge_warning = true;
    }
  }
  return out;
}

std::vector<BranchSet> branches_batch_serial(const SolutionFamily& family,
                                             std::span<const BranchQuery> queries,
                                             Interval rho_window, const BranchOptions& options) {
  std::vector<BranchSet> out;
  out.reserve(queries.size());
  for (const BranchQuery& q : queries) out.push_back(branches(family, q.t, q.x, rho_window, options));
  return out;
}

std::vector<BranchSet> branches_batch(const SolutionFamily& family,
                                      std::span<const BranchQuery> queries, Interval rho_window,
                                      const BranchOptions& options) {
  std::vector<BranchSet> out(queries.size());
  std::exception_ptr failure;
  const auto n = static_cast<std::ptrdiff_t>(queries.size());
#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      const BranchQuery& q = queries[static_cast<std::size_t>(i)];
      out[static_cast<std::size_t>(i)] = branches(family, q.t, q.x, rho_window, options);
    } catch (...) {
#pragma omp critical(shockfront_branch_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

std::vector<ProfilePoint> profile_section(const SolutionFamily& family, double t,
                                          std::span<const double> rho_grid) {
  std::vector<ProfilePoint> out;
  out.reserve(rho_grid.size());
  for (double rho : rho_grid) {
    out.push_back({g(family, rho, t), rho, velocity_U(family, rho, t)});
  }
  return out;
}

}  // namespace shockfront::exact
