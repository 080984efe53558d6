#include "shockfront/process.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>
#include <sstream>
#include <utility>

#include <boost/math/tools/roots.hpp>

#include "shockfront/error.hpp"

namespace shockfront::process {

ProcessCurve::ProcessCurve(std::string name, Interval rho_domain, Functions fns,
                           std::optional<PowerLaw> power_law)
    : name_(std::move(name)), domain_(rho_domain), fns_(std::move(fns)), power_law_(power_law) {
  if (!(rho_domain.lo > 0.0) || rho_domain.empty()) {
    throw DomainError("process rho domain must satisfy 0 < rho_min < rho_max");
  }
  if (!fns_.p || !fns_.dp || !fns_.d2p) {
    throw DomainError("process curve needs p, p' and p''");
  }
}

void ProcessCurve::check(double rho) const {
  if (!domain_.contains(rho) || !std::isfinite(rho)) {
    std::ostringstream msg;
    msg << "rho=" << rho << " outside the process domain [" << domain_.lo << ", " << domain_.hi
        << "] of '" << name_ << "'";
    throw DomainError(msg.str());
  }
}

double ProcessCurve::p(double rho) const {
  check(rho);
  return fns_.p(rho);
}

double ProcessCurve::dp(double rho) const {
  check(rho);
  return fns_.dp(rho);
}

double ProcessCurve::d2p(double rho) const {
  check(rho);
  return fns_.d2p(rho);
}

namespace {
double optional_fn(const ProcessCurve::ScalarFn& fn, double rho, const char* what) {
  if (!fn) throw DomainError(std::string("process curve carries no ") + what);
  return fn(rho);
}
}  // namespace

double ProcessCurve::T(double rho) const {
  check(rho);
  return optional_fn(fns_.T, rho, "temperature");
}

double ProcessCurve::e(double rho) const {
  check(rho);
  return optional_fn(fns_.e, rho, "energy");
}

double ProcessCurve::s(double rho) const {
  check(rho);
  return optional_fn(fns_.s, rho, "entropy");
}

double ProcessCurve::A_squared(double rho) const {
  if (power_law_) {
    check(rho);
    const double a = power_law_->A0 * std::pow(rho, power_law_->m);
    return a * a;
  }
  const double d = dp(rho);
  if (d < 0.0) throw DomainError("A(rho)^2 undefined where p'(rho) < 0");
  return d / (rho * rho);
}

double ProcessCurve::A(double rho) const {
  if (power_law_) {
    check(rho);
    return power_law_->A0 * std::pow(rho, power_law_->m);
  }
  const double d = dp(rho);
  if (!(d > 0.0)) throw DomainError("A(rho) needs p'(rho) > 0 (hyperbolic process)");
  return std::sqrt(d) / rho;
}

double ProcessCurve::A_prime(double rho) const {
  if (power_law_) {
    check(rho);
    return power_law_->A0 * power_law_->m * std::pow(rho, power_law_->m - 1.0);
  }
  const double d = dp(rho);
  if (!(d > 0.0)) throw DomainError("A'(rho) needs p'(rho) > 0 (hyperbolic process)");
  const double c = std::sqrt(d);
  return d2p(rho) / (2.0 * rho * c) - c / (rho * rho);
}

ProcessCurve ProcessCurve::with_domain(Interval rho_domain) const {
  return ProcessCurve(name_, rho_domain, fns_, power_law_);
}

// ---------------------------------------------------------------------------
// adiabatic

namespace {

double five_point_d1(const ProcessCurve::ScalarFn& f, double x, double h) {
  return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h);
}

double five_point_d2(const ProcessCurve::ScalarFn& f, double x, double h) {
  return (-f(x + 2 * h) + 16 * f(x + h) - 30 * f(x) + 16 * f(x - h) - f(x - 2 * h)) / (12 * h * h);
}

ProcessCurve ideal_adiabatic(const thermo::IdealGasParams& gas, double s0, Interval domain) {
  const double n = gas.n;
  const double R = gas.R;
  const double theta = std::exp(2.0 * s0 / (R * n));
  const double K = R * theta;
  const double gamma = 1.0 + 2.0 / n;

  ProcessCurve::Functions f;
  f.T = [theta, n](double rho) { return theta * std::pow(rho, 2.0 / n); };
  f.p = [K, gamma](double rho) { return K * std::pow(rho, gamma); };
  f.dp = [K, gamma](double rho) { return K * gamma * std::pow(rho, gamma - 1.0); };
  f.d2p = [K, gamma](double rho) {
    return K * gamma * (gamma - 1.0) * std::pow(rho, gamma - 2.0);
  };
  f.e = [theta, n, R](double rho) { return 0.5 * n * R * theta * std::pow(rho, 2.0 / n); };
  f.s = [theta, n, R](double rho) {
    const double T = theta * std::pow(rho, 2.0 / n);
    return R * std::log(std::pow(T, 0.5 * n) / rho);
  };
  const PowerLaw law{std::sqrt(R * gamma * theta), 1.0 / n - 1.0};
  return ProcessCurve("adiabatic(ideal)", domain, std::move(f), law);
}

// Solves s(v, T) = s0 for T. s_T = e_T / T, so the entropy is monotone in T
// exactly where e_T > 0; a non-positive s_T on the search path is reported
// as an ambiguity.
double solve_adiabat_temperature(const thermo::PotentialModel& model, double v, double s0) {
  const double R = model.R();
  auto residual = [&](double T) {
    const auto d = model.partials(v, T);
    return R * (d.phi + T * d.phi_T) - s0;
  };
  auto entropy_slope = [&](double T) {
    const auto d = model.partials(v, T);
    return R * (2.0 * d.phi_T + T * d.phi_TT);
  };
  auto require_monotone = [&](double T) {
    if (!(entropy_slope(T) > 0.0)) {
      std::ostringstream msg;
      msg << "entropy is not increasing in T at (v=" << v << ", T=" << T
          << "); adiabat temperature is ambiguous";
      throw AmbiguityError(msg.str());
    }
  };

  double lo = 1.0;
  double hi = 1.0;
  double f_lo = residual(lo);
  double f_hi = f_lo;
  require_monotone(1.0);
  if (f_lo == 0.0) return 1.0;
  constexpr int kMaxExpansions = 200;
  int k = 0;
  if (f_lo < 0.0) {
    while (f_hi < 0.0) {
      if (++k > kMaxExpansions) throw DomainError("no adiabat temperature found (T too large)");
      lo = hi;
      f_lo = f_hi;
      hi *= 2.0;
      require_monotone(hi);
      f_hi = residual(hi);
    }
  } else {
    while (f_lo > 0.0) {
      if (++k > kMaxExpansions) throw DomainError("no adiabat temperature found (T too small)");
      hi = lo;
      f_hi = f_lo;
      lo *= 0.5;
      require_monotone(lo);
      f_lo = residual(lo);
    }
  }
  if (f_lo == 0.0) return lo;
  if (f_hi == 0.0) return hi;

  boost::uintmax_t max_iter = 200;
  const auto bracket = boost::math::tools::toms748_solve(
      residual, lo, hi, f_lo, f_hi, boost::math::tools::eps_tolerance<double>(52), max_iter);
  const double T = 0.5 * (bracket.first + bracket.second);
  require_monotone(T);
  return T;
}

ProcessCurve numeric_adiabatic(const thermo::PotentialModel& model, double s0, Interval domain) {
  // Shared so that the closures stay cheap to copy.
  auto m = std::make_shared<const thermo::PotentialModel>(model);
  auto temperature = [m, s0](double rho) { return solve_adiabat_temperature(*m, 1.0 / rho, s0); };
  auto pressure = [m, temperature](double rho) {
    return thermo::eval_state(*m, 1.0 / rho, temperature(rho)).p;
  };

  ProcessCurve::Functions f;
  f.T = temperature;
  f.p = pressure;
  f.e = [m, temperature](double rho) {
    return thermo::eval_state(*m, 1.0 / rho, temperature(rho)).e;
  };
  f.s = [m, temperature](double rho) {
    return thermo::eval_state(*m, 1.0 / rho, temperature(rho)).s;
  };
  if (model.has_mixed_partial()) {
    f.dp = [m, temperature](double rho) {
      const double R = m->R();
      const double v = 1.0 / rho;
      const double T = temperature(rho);
      const auto d = m->partials(v, T);
      const double dv = -v * v;
      const double s_v = R * (d.phi_v + T * d.phi_vT);
      const double s_T = R * (2.0 * d.phi_T + T * d.phi_TT);
      const double dT = -s_v * dv / s_T;
      return R * (dT * d.phi_v + T * (d.phi_vv * dv + d.phi_vT * dT));
    };
    auto dp = f.dp;
    f.d2p = [dp](double rho) { return five_point_d1(dp, rho, 1e-3 * rho); };
  } else {
    f.dp = [pressure](double rho) { return five_point_d1(pressure, rho, 1e-5 * rho); };
    f.d2p = [pressure](double rho) { return five_point_d2(pressure, rho, 1e-3 * rho); };
  }
  return ProcessCurve("adiabatic(" + model.name() + ")", domain, std::move(f));
}

}  // namespace

ProcessCurve adiabatic_process(const thermo::PotentialModel& model, double s0, Interval rho_domain) {
  if (const auto& gas = model.ideal()) return ideal_adiabatic(*gas, s0, rho_domain);
  return numeric_adiabatic(model, s0, rho_domain);
}

ProcessCurve closure_process(std::string name, Interval rho_domain, ProcessCurve::ScalarFn p,
                             ProcessCurve::ScalarFn dp, ProcessCurve::ScalarFn d2p,
                             std::optional<PowerLaw> power_law) {
  ProcessCurve::Functions f;
  f.p = std::move(p);
  f.dp = std::move(dp);
  f.d2p = std::move(d2p);
  return ProcessCurve(std::move(name), rho_domain, std::move(f), power_law);
}

ProcessCurve cubic_pressure_process(double c0, double c1, Interval rho_domain) {
  std::optional<PowerLaw> law;
  if (c0 > 0.0) law = PowerLaw{std::sqrt(3.0 * c0), 0.0};
  return closure_process(
      "cubic", rho_domain, [c0, c1](double r) { return c0 * r * r * r + c1; },
      [c0](double r) { return 3.0 * c0 * r * r; }, [c0](double r) { return 6.0 * c0 * r; }, law);
}

// ---------------------------------------------------------------------------
// tabulated

namespace {

struct NaturalSpline {
  std::vector<double> x, y, m;  // m: second derivatives at the knots

  NaturalSpline(std::vector<double> xs, std::vector<double> ys) : x(std::move(xs)), y(std::move(ys)) {
    const std::size_t n = x.size();
    m.assign(n, 0.0);
    if (n < 3) return;
    // Tridiagonal system for the interior second derivatives (Thomas algorithm).
    std::vector<double> c(n, 0.0), d(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
      const double h0 = x[i] - x[i - 1];
      const double h1 = x[i + 1] - x[i];
      const double a = h0 / 6.0;
      const double b = (h0 + h1) / 3.0;
      const double cc = h1 / 6.0;
      const double rhs = (y[i + 1] - y[i]) / h1 - (y[i] - y[i - 1]) / h0;
      const double denom = b - a * c[i - 1];
      c[i] = cc / denom;
      d[i] = (rhs - a * d[i - 1]) / denom;
    }
    for (std::size_t i = n - 2; i >= 1; --i) {
      m[i] = d[i] - c[i] * m[i + 1];
    }
  }

  std::size_t segment(double t) const {
    auto it = std::upper_bound(x.begin(), x.end(), t);
    std::size_t i = static_cast<std::size_t>(std::max<std::ptrdiff_t>(it - x.begin(), 1)) - 1;
    return std::min(i, x.size() - 2);
  }

  // k-th derivative of the spline at t, k in {0, 1, 2}.
  double eval(double t, int k) const {
    const std::size_t i = segment(t);
    const double h = x[i + 1] - x[i];
    const double a = (x[i + 1] - t) / h;
    const double b = (t - x[i]) / h;
    switch (k) {
      case 0:
        return a * y[i] + b * y[i + 1] +
               ((a * a * a - a) * m[i] + (b * b * b - b) * m[i + 1]) * h * h / 6.0;
      case 1:
        return (y[i + 1] - y[i]) / h - (3 * a * a - 1) * h * m[i] / 6.0 +
               (3 * b * b - 1) * h * m[i + 1] / 6.0;
      default:
        return a * m[i] + b * m[i + 1];
    }
  }
};

}  // namespace

ProcessCurve table_process(std::vector<double> rho, std::vector<double> p) {
  if (rho.size() != p.size() || rho.size() < 4) {
    throw DomainError("tabulated process needs at least 4 (rho, p) rows");
  }
  for (std::size_t i = 1; i < rho.size(); ++i) {
    if (!(rho[i] > rho[i - 1])) throw DomainError("tabulated rho must be strictly increasing");
  }
  const Interval domain{rho.front(), rho.back()};
  auto spline = std::make_shared<const NaturalSpline>(std::move(rho), std::move(p));
  return closure_process(
      "table", domain, [spline](double r) { return spline->eval(r, 0); },
      [spline](double r) { return spline->eval(r, 1); },
      [spline](double r) { return spline->eval(r, 2); });
}

ProcessCurve table_process_from_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open process table '" + path + "'");
  std::string line;
  int rho_col = -1;
  int p_col = -1;
  std::vector<double> rho, p;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      cell.erase(0, cell.find_first_not_of(" \t\r"));
      cell.erase(cell.find_last_not_of(" \t\r") + 1);
      cells.push_back(cell);
    }
    if (rho_col < 0) {
      for (std::size_t i = 0; i < cells.size(); ++i) {
        if (cells[i] == "rho") rho_col = static_cast<int>(i);
        if (cells[i] == "p") p_col = static_cast<int>(i);
      }
      if (rho_col < 0 || p_col < 0) {
        throw DomainError("process table '" + path + "' needs a header with columns rho,p");
      }
      continue;
    }
    const auto need = static_cast<std::size_t>(std::max(rho_col, p_col));
    if (cells.size() <= need) throw DomainError("short row in process table '" + path + "'");
    try {
      rho.push_back(std::stod(cells[static_cast<std::size_t>(rho_col)]));
      p.push_back(std::stod(cells[static_cast<std::size_t>(p_col)]));
    } catch (const std::exception&) {
      throw DomainError("non-numeric entry in process table '" + path + "'");
    }
  }
  return table_process(std::move(rho), std::move(p));
}

// ---------------------------------------------------------------------------
// classification

const char* to_string(Classification c) {
  switch (c) {
    case Classification::hyperbolic:
      return "hyperbolic";
    case Classification::elliptic:
      return "elliptic";
    case Classification::parabolic:
      return "parabolic";
  }
  return "unknown";
}

HyperbolicityReport classify_at(const ProcessCurve& curve, double rho) {
  const double d = curve.dp(rho);
  HyperbolicityReport r;
  r.P_matrix = {{{2.0 * rho, 0.0}, {0.0, -2.0 * d / rho}}};
  r.det = -4.0 * d;
  if (r.det < 0.0) {
    r.classification = Classification::hyperbolic;
  } else if (r.det > 0.0) {
    r.classification = Classification::elliptic;
  } else {
    r.classification = Classification::parabolic;
  }
  return r;
}

IntegrabilityFit is_characteristically_integrable(const ProcessCurve& curve, double tol) {
  const Interval dom = curve.domain();
  constexpr int kGrid = 64;
  std::vector<double> grid(kGrid);
  const double ratio = dom.hi / dom.lo;
  for (int i = 0; i < kGrid; ++i) {
    grid[static_cast<std::size_t>(i)] = dom.lo * std::pow(ratio, double(i) / (kGrid - 1));
  }
  for (double r : grid) {
    if (!(curve.dp(r) > 0.0)) {
      throw DomainError("characteristic integrability needs a hyperbolic curve (p' > 0)");
    }
  }

  const double ra = dom.lo * std::pow(ratio, 0.25);
  const double rb = dom.lo * std::pow(ratio, 0.75);
  IntegrabilityFit fit;
  fit.c0 = (curve.p(rb) - curve.p(ra)) / (rb * rb * rb - ra * ra * ra);
  fit.c1 = curve.p(ra) - fit.c0 * ra * ra * ra;
  for (double r : grid) {
    const double pr = curve.p(r);
    const double res = std::abs(pr - fit.c0 * r * r * r - fit.c1);
    const double scale = std::max({std::abs(pr), std::abs(fit.c1), std::abs(fit.c0) * r * r * r});
    fit.max_relative_residual = std::max(fit.max_relative_residual, scale > 0 ? res / scale : res);
  }
  fit.integrable = fit.max_relative_residual < tol;
  return fit;
}

}  // namespace shockfront::process
