#include "shockfront/geometry_verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "shockfront/error.hpp"

namespace shockfront::geometry {

using singularity::Sign;
using singularity::to_double;

double pairing(const TwoForm& a, const TwoForm& b) {
  return a.coeff(0, 1) * b.coeff(2, 3) - a.coeff(0, 2) * b.coeff(1, 3) +
         a.coeff(0, 3) * b.coeff(1, 2) + a.coeff(1, 2) * b.coeff(0, 3) -
         a.coeff(1, 3) * b.coeff(0, 2) + a.coeff(2, 3) * b.coeff(0, 1);
}

FormPair build_system_forms(const process::ProcessCurve& curve, const JetPoint& p) {
  FormPair f;
  f.omega1.add(kT, kU, p.rho);
  f.omega1.add(kT, kRho, p.u);
  f.omega1.add(kX, kRho, -1.0);
  f.omega2.add(kT, kU, p.u);
  f.omega2.add(kT, kRho, curve.dp(p.rho) / p.rho);
  f.omega2.add(kX, kU, -1.0);
  return f;
}

FormPair build_normalized_forms(const process::ProcessCurve& curve, const JetPoint& p) {
  if (!(curve.dp(p.rho) > 0.0)) {
    std::ostringstream msg;
    msg << "normalized forms need a hyperbolic point; p'(" << p.rho << ") <= 0";
    throw DomainError(msg.str());
  }
  const double A = curve.A(p.rho);
  FormPair f;
  f.omega1.add(kT, kU, A * p.rho);
  f.omega1.add(kT, kRho, A * p.u);
  f.omega1.add(kX, kRho, -A);
  f.omega2.add(kT, kU, p.u);
  f.omega2.add(kT, kRho, p.rho * A * A);
  f.omega2.add(kX, kU, -1.0);
  return f;
}

std::array<std::array<double, 2>, 2> pairing_matrix(const FormPair& f) {
  const double off = pairing(f.omega1, f.omega2);
  return {{{pairing(f.omega1, f.omega1), off}, {off, pairing(f.omega2, f.omega2)}}};
}

Mat4 operator_W(const process::ProcessCurve& curve, const JetPoint& p) {
  const double A = curve.A(p.rho);
  const double rA = p.rho * A;
  if (rA == 0.0) throw SingularityError("operator W needs rho A(rho) != 0");
  Mat4 W = Mat4::Zero();
  W(kT, kT) = p.u;
  W(kT, kX) = -1.0;
  W(kX, kT) = p.u * p.u - rA * rA;
  W(kX, kX) = -p.u;
  W(kU, kRho) = p.rho * A * A;
  W(kRho, kU) = p.rho;
  return W / rA;
}

Mat4 operator_W_from_contraction(const FormPair& f) {
  // X _| omega has components M^T X; solve M1^T W = M2^T.
  const Mat4 M1t = f.omega1.matrix().transpose();
  const Mat4 M2t = f.omega2.matrix().transpose();
  return M1t.fullPivLu().solve(M2t);
}

CharFields char_fields(const process::ProcessCurve& curve, const JetPoint& p) {
  const double A = curve.A(p.rho);
  CharFields c;
  c.X_plus = Vec4(0.0, 0.0, A, 1.0);
  c.X_minus = Vec4(0.0, 0.0, -A, 1.0);
  c.Y_plus = Vec4(1.0 / (p.u - p.rho * A), 1.0, 0.0, 0.0);
  c.Y_minus = Vec4(1.0 / (p.u + p.rho * A), 1.0, 0.0, 0.0);
  return c;
}

double distance_from_span(const Vec4& a, const Vec4& b, const Vec4& v) {
  Eigen::Matrix<double, 4, 2> basis;
  basis.col(0) = a;
  basis.col(1) = b;
  const Eigen::Vector2d coef = basis.colPivHouseholderQr().solve(v);
  const double scale = std::max(a.norm(), b.norm());
  return (v - basis * coef).norm() / (scale > 0.0 ? scale : 1.0);
}

int numerical_rank(const Eigen::MatrixXd& columns, double tol) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(columns);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  int rank = 0;
  for (int i = 0; i < s.size(); ++i) {
    if (s(i) > tol * s(0)) ++rank;
  }
  return rank;
}

namespace {

// Lie bracket [X, Y]^i = X^j d_j Y^i - Y^j d_j X^i with Jacobians DX(i, j) = d_j X^i.
Vec4 bracket(const Vec4& X, const Mat4& DX, const Vec4& Y, const Mat4& DY) {
  return DY * X - DX * Y;
}

bool y_defined(double u, double rho, double A, double sign) {
  return std::abs(u - sign * rho * A) > 1e-6 * std::max(1.0, std::abs(u));
}

}  // namespace

IntegrabilityVerdict lie_bracket_integrability(const process::ProcessCurve& curve,
                                               std::span<const JetPoint> points, double tol) {
  IntegrabilityVerdict v;
  for (const JetPoint& p : points) {
    if (!(curve.dp(p.rho) > 0.0)) continue;
    const double A = curve.A(p.rho);
    const double Ap = curve.A_prime(p.rho);
    bool used = false;
    for (double s : {1.0, -1.0}) {
      if (!y_defined(p.u, p.rho, A, s)) continue;
      used = true;
      const double D = p.u - s * p.rho * A;
      const Vec4 X(0.0, 0.0, s * A, 1.0);
      const Vec4 Y(1.0 / D, 1.0, 0.0, 0.0);
      Mat4 DX = Mat4::Zero();
      DX(kU, kRho) = s * Ap;
      Mat4 DY = Mat4::Zero();
      DY(kT, kU) = -1.0 / (D * D);
      DY(kT, kRho) = s * (A + p.rho * Ap) / (D * D);
      const double dist = distance_from_span(X, Y, bracket(X, DX, Y, DY));
      if (s > 0) {
        v.max_plus_distance = std::max(v.max_plus_distance, dist);
      } else {
        v.max_minus_distance = std::max(v.max_minus_distance, dist);
      }
    }
    if (used) ++v.points_used;
  }
  v.plus_integrable = v.max_plus_distance < tol;
  v.minus_integrable = v.max_minus_distance < tol;
  return v;
}

AnsatzPartials ansatz_partials(const exact::Alphas& a, double t, double u, double rho) {
  AnsatzPartials d;
  d.f_u = -(rho + a.a3);
  d.f_t = a.a2 * rho;
  d.f_rho = a.a1 + a.a2 * t - u;
  d.f_rhot = a.a2;
  return d;
}

double ansatz_pde_residual(double A, double rho, const AnsatzPartials& d) {
  const double A2 = A * A;
  return -2.0 * rho * A2 * d.f_u * d.f_t * d.f_ut - rho * d.f_rho * d.f_rho * d.f_tt -
         rho * d.f_t * d.f_t * d.f_rhorho +
         rho * A2 * (d.f_u * d.f_u * d.f_tt + d.f_t * d.f_t * d.f_uu) +
         2.0 * rho * d.f_rho * d.f_t * d.f_rhot - 2.0 * d.f_rho * d.f_t * d.f_t;
}

double check_ansatz_pde(const exact::SolutionFamily& family, std::span<const AnsatzPoint> points,
                        const AnsatzPartialsFn& partials) {
  double worst = 0.0;
  for (const AnsatzPoint& p : points) {
    const double A = family.curve().A(p.rho);
    worst = std::max(worst, std::abs(ansatz_pde_residual(A, p.rho, partials(p.t, p.u, p.rho))));
  }
  return worst;
}

double check_ansatz_pde(const exact::SolutionFamily& family, std::span<const AnsatzPoint> points) {
  const exact::Alphas a = family.alphas();
  return check_ansatz_pde(family, points, [a](double t, double u, double rho) {
    return ansatz_partials(a, t, u, rho);
  });
}

SurfaceMap solution_surface(const exact::SolutionFamily& family) {
  return [&family](double rho, double t) {
    SurfaceJet j;
    j.g = exact::g(family, rho, t);
    j.g_rho = exact::g_rho(family, rho, t);
    j.g_t = exact::g_t(family, rho, t);
    j.U = exact::velocity_U(family, rho, t);
    j.U_rho = exact::velocity_U_rho(family, rho, t);
    j.U_t = exact::velocity_U_t(family, rho, t);
    return j;
  };
}

double pullback_residual(const FormPair& forms, const Vec4& a, const Vec4& b) {
  return std::max(std::abs(forms.omega1(a, b)), std::abs(forms.omega2(a, b)));
}

double check_surface_annihilates_forms(const process::ProcessCurve& curve, const SurfaceMap& surface,
                                       std::span<const SurfacePoint> points, double caustic_skip) {
  double worst = 0.0;
  for (const SurfacePoint& sp : points) {
    const SurfaceJet j = surface(sp.rho, sp.t);
    if (std::abs(j.g_rho) < caustic_skip) continue;
    const JetPoint p{sp.t, j.g, j.U, sp.rho};
    const FormPair forms = build_normalized_forms(curve, p);
    const Vec4 tangent_rho(0.0, j.g_rho, j.U_rho, 1.0);
    const Vec4 tangent_t(1.0, j.g_t, j.U_t, 0.0);
    worst = std::max(worst, pullback_residual(forms, tangent_rho, tangent_t));
  }
  return worst;
}

double check_solution_annihilates_forms(const exact::SolutionFamily& family,
                                        std::span<const SurfacePoint> points, double caustic_skip) {
  return check_surface_annihilates_forms(family.curve(), solution_surface(family), points,
                                         caustic_skip);
}

Vec4 V_field(Sign sign, double A, const JetPoint& p, const Vec4& grad) {
  const double s = to_double(sign);
  const double Ft = grad(kT), Fx = grad(kX), Fu = grad(kU), Fr = grad(kRho);
  const double u = p.u, rho = p.rho;
  const double transport = Ft + u * Fx;
  Vec4 V;
  V(kT) = Fu * A + s * Fr;
  V(kX) = (u * Fu - rho * Fr) * A + s * (u * Fr - rho * A * A * Fu);
  V(kU) = -A * (transport - s * rho * A * Fx);
  V(kRho) = rho * A * Fx - s * transport;
  return V;
}

Eigen::Vector3d Z_field(const exact::SolutionFamily& family, Sign sign, double rho, double t) {
  const auto& a = family.alphas();
  const double s = to_double(sign);
  const double A = family.curve().A(rho);
  const double r = rho + a.a3;
  const double lead = A * r * r - s * a.a3 * (a.a1 + t * a.a2) + s * a.a0;
  Eigen::Vector3d Z;
  Z(0) = lead / (r * r);
  Z(1) = lead * (-s * A * rho * r + rho * (t * a.a2 + a.a1) + a.a0) / (r * r * r);
  Z(2) = s * a.a2 * rho / r;
  return Z;
}

std::vector<JetPoint> sample_jet_points(std::uint64_t seed, int count, Interval rho_range) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> tx(-5.0, 5.0);
  std::uniform_real_distribution<double> uu(-3.0, 3.0);
  std::uniform_real_distribution<double> rr(rho_range.lo, rho_range.hi);
  std::vector<JetPoint> out;
  out.reserve(static_cast<std::size_t>(std::max(count, 0)));
  for (int i = 0; i < count; ++i) {
    JetPoint p;
    p.t = tx(rng);
    p.x = tx(rng);
    p.u = uu(rng);
    p.rho = rr(rng);
    out.push_back(p);
  }
  return out;
}

// ---------------------------------------------------------------------------
// verification table

namespace {

enum CheckId {
  kWedge12,
  kWedgeSquares,
  kDetP,
  kWMatch,
  kWSquare,
  kWEigen,
  kWEigenspaces,
  kWTrace,
  kAnsatz,
  kPullback,
  kVFields,
  kZFields,
  kEuler,
  kRoundTrip,
  kHGradient,
  kNumChecks
};

struct CheckSpec {
  const char* name;
  double tolerance;
};

constexpr CheckSpec kSpecs[kNumChecks] = {
    {"omega1^omega2 = 0", 1e-12},
    {"omega1^omega1 = -omega2^omega2", 1e-12},
    {"det(P) = -4 p'(rho)", 1e-12},
    {"W closed form = contraction", 1e-12},
    {"W^2 = id", 1e-12},
    {"W X+- = +-X+-, W Y+- = +-Y+-", 1e-12},
    {"eigenspaces of W = span{X+-, Y+-}", 1e-8},
    {"trace W = 0", 1e-12},
    {"ansatz PDE residual", 1e-9},
    {"omega1|N = omega2|N = 0", 1e-8},
    {"V+- tangent to N1 and in C+-", 1e-12},
    {"Z+- ~ V+- and tangent to x = g", 1e-10},
    {"Euler residual on branches", 1e-7},
    {"branches(g(rho)) contains rho", 1e-9},
    {"H_rho = rho g_rho, H_t = rho (g_t - U)", 1e-8},
};

double rel(double err, double scale) { return err / std::max(1.0, std::abs(scale)); }

double max_abs(const Mat4& m) { return m.cwiseAbs().maxCoeff(); }

// sin of the largest principal angle between two column spans.
double principal_angle_sine(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  const Eigen::MatrixXd qa = Eigen::HouseholderQR<Eigen::MatrixXd>(a).householderQ() *
                             Eigen::MatrixXd::Identity(a.rows(), a.cols());
  const Eigen::MatrixXd qb = Eigen::HouseholderQR<Eigen::MatrixXd>(b).householderQ() *
                             Eigen::MatrixXd::Identity(b.rows(), b.cols());
  const Eigen::MatrixXd resid = qb - qa * (qa.transpose() * qb);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(resid);
  return svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
}

double fd5(const std::function<double(double)>& f, double x, double h) {
  return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h);
}

struct PointReport {
  std::array<double, kNumChecks> residual{};
  std::array<bool, kNumChecks> used{};
  std::string failure;
};

PointReport check_point(const exact::SolutionFamily& family, const JetPoint& p) {
  PointReport rep;
  auto record = [&](CheckId id, double value) {
    rep.residual[id] = std::max(rep.residual[id], value);
    rep.used[id] = true;
  };
  const auto& curve = family.curve();
  const double dp = curve.dp(p.rho);
  if (!(dp > 0.0)) return rep;  // geometric identities need a hyperbolic point
  const double A = curve.A(p.rho);

  // Forms and pairing.
  const FormPair raw = build_system_forms(curve, p);
  const FormPair nf = build_normalized_forms(curve, p);
  const auto Pn = pairing_matrix(nf);
  record(kWedge12, std::abs(Pn[0][1]));
  record(kWedgeSquares, rel(std::abs(Pn[0][0] + Pn[1][1]), Pn[0][0]));
  const auto Pr = pairing_matrix(raw);
  const double detP = Pr[0][0] * Pr[1][1] - Pr[0][1] * Pr[1][0];
  record(kDetP, std::abs(detP + 4.0 * dp) / std::abs(4.0 * dp));

  // Operator W.
  const Mat4 W = operator_W(curve, p);
  const Mat4 Wc = operator_W_from_contraction(nf);
  const double wscale = std::max(1.0, max_abs(W));
  record(kWMatch, max_abs(W - Wc) / wscale);
  record(kWSquare, max_abs(W * W - Mat4::Identity()) / (wscale * wscale));
  record(kWTrace, std::abs(W.trace()) / wscale);

  const CharFields cf = char_fields(curve, p);
  const bool plus_ok = y_defined(p.u, p.rho, A, 1.0);
  const bool minus_ok = y_defined(p.u, p.rho, A, -1.0);
  auto eig_err = [&](const Vec4& v, double lambda) {
    return (W * v - lambda * v).norm() / (wscale * std::max(1.0, v.norm()));
  };
  record(kWEigen, std::max(eig_err(cf.X_plus, 1.0), eig_err(cf.X_minus, -1.0)));
  if (plus_ok) record(kWEigen, eig_err(cf.Y_plus, 1.0));
  if (minus_ok) record(kWEigen, eig_err(cf.Y_minus, -1.0));

  Eigen::EigenSolver<Mat4> es(W);
  Eigen::MatrixXd plus_space(4, 0), minus_space(4, 0);
  double eig_dev = 0.0;
  for (int k = 0; k < 4; ++k) {
    const std::complex<double> lam = es.eigenvalues()(k);
    const double target = lam.real() > 0 ? 1.0 : -1.0;
    eig_dev = std::max(eig_dev, std::abs(lam - target));
    Eigen::MatrixXd& space = target > 0 ? plus_space : minus_space;
    space.conservativeResize(4, space.cols() + 1);
    space.col(space.cols() - 1) = es.eigenvectors().col(k).real();
  }
  double angle = eig_dev;
  if (plus_space.cols() == 2 && minus_space.cols() == 2 && plus_ok && minus_ok) {
    Eigen::MatrixXd cp(4, 2), cm(4, 2);
    cp << cf.X_plus, cf.Y_plus;
    cm << cf.X_minus, cf.Y_minus;
    angle = std::max({angle, principal_angle_sine(plus_space, cp),
                      principal_angle_sine(minus_space, cm)});
  } else if (plus_space.cols() != 2) {
    angle = 1.0;
  }
  record(kWEigenspaces, angle);

  // Ansatz PDE at (t, u, rho).
  {
    const AnsatzPartials d = ansatz_partials(family.alphas(), p.t, p.u, p.rho);
    const double scale = std::max(1.0, std::abs(2.0 * p.rho * d.f_rho * d.f_t * d.f_rhot));
    record(kAnsatz, std::abs(ansatz_pde_residual(A, p.rho, d)) / scale);
  }

  // V fields against F = f(t, u, rho) at this point.
  {
    const AnsatzPartials d = ansatz_partials(family.alphas(), p.t, p.u, p.rho);
    const Vec4 grad(d.f_t, 0.0, d.f_u, d.f_rho);
    for (Sign s : {Sign::plus, Sign::minus}) {
      const Vec4 V = V_field(s, A, p, grad);
      const double vs = std::max(1.0, V.norm() * grad.norm());
      record(kVFields, std::abs(V.dot(grad)) / vs);
      const bool ok = s == Sign::plus ? plus_ok : minus_ok;
      if (ok) {
        const Vec4& X = s == Sign::plus ? cf.X_plus : cf.X_minus;
        const Vec4& Y = s == Sign::plus ? cf.Y_plus : cf.Y_minus;
        record(kVFields, distance_from_span(X, Y, V) / std::max(1.0, V.norm()));
      }
    }
  }

  // Surface checks at (rho, t); the sample x is not used there.
  if (family.alphas().a2 != 0.0) {
    const double gr = exact::g_rho(family, p.rho, p.t);
    const double gt = exact::g_t(family, p.rho, p.t);
    const double U = exact::velocity_U(family, p.rho, p.t);
    if (std::abs(gr) > 1e-6) {
      const SurfacePoint sp{p.rho, p.t};
      record(kPullback, check_solution_annihilates_forms(family, std::span(&sp, 1)));
    }

    const JetPoint on{p.t, exact::g(family, p.rho, p.t), U, p.rho};
    const AnsatzPartials d = ansatz_partials(family.alphas(), p.t, U, p.rho);
    const Vec4 grad(d.f_t, 0.0, d.f_u, d.f_rho);
    for (Sign s : {Sign::plus, Sign::minus}) {
      const Eigen::Vector3d Z = Z_field(family, s, p.rho, p.t);
      const Vec4 V = V_field(s, A, on, grad);
      const Eigen::Vector3d Vp(V(kT), V(kX), V(kRho));
      const double zs = std::max(1.0, Z.norm());
      // Z parallel to the (t, x, rho) part of V.
      record(kZFields, Z.cross(Vp).norm() / (zs * std::max(1.0, Vp.norm())));
      // x - g(rho, t) is a first integral of Z.
      record(kZFields, std::abs(Z(1) - gt * Z(0) - gr * Z(2)) /
                           (zs * std::max({1.0, std::abs(gt), std::abs(gr)})));
    }

    if (std::abs(gr) > 1e-3) {
      const auto e = exact::euler_residual(family, p.rho, p.t);
      record(kEuler, std::max(std::abs(e.mass), std::abs(e.momentum)));

      const double x = exact::g(family, p.rho, p.t);
      const auto set = exact::branches(family, p.t, x, curve.domain());
      double best = std::numeric_limits<double>::infinity();
      for (double r : set.roots) {
        best = std::min(best, std::abs(r - p.rho));
        const double gr_root = exact::g_rho(family, r, p.t);
        if (std::abs(gr_root) > 1e-3) {
          const auto er = exact::euler_residual(family, r, p.t);
          record(kEuler, std::max(std::abs(er.mass), std::abs(er.momentum)));
        }
      }
      record(kRoundTrip, best / std::max(1.0, p.rho));
    }

    const double h = 1e-3 * p.rho;
    const double Hr = fd5([&](double r) { return singularity::potential_H(family, r, p.t); }, p.rho, h);
    const double Ht = fd5([&](double t) { return singularity::potential_H(family, p.rho, t); }, p.t,
                          1e-3 * std::max(1.0, std::abs(p.t)));
    const double er = std::abs(Hr - p.rho * gr) / std::max(1.0, std::abs(p.rho * gr));
    const double et = std::abs(Ht - p.rho * (gt - U)) / std::max(1.0, std::abs(p.rho * (gt - U)));
    record(kHGradient, std::max(er, et));
  }
  return rep;
}

}  // namespace

std::vector<CheckResult> run_verification(const exact::SolutionFamily& family,
                                          const VerifyOptions& options) {
  const Interval dom = family.curve().domain();
  const Interval rho_range{std::max(0.2, dom.lo), std::min(5.0, dom.hi)};
  const std::vector<JetPoint> points = sample_jet_points(options.seed, options.samples, rho_range);

  std::vector<PointReport> reports(points.size());
  const auto n = static_cast<std::ptrdiff_t>(points.size());
#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    try {
      reports[k] = check_point(family, points[k]);
    } catch (const std::exception& e) {
      reports[k].failure = e.what();
    }
  }

  std::vector<CheckResult> out;
  std::array<int, kNumChecks> counts{};
  std::array<double, kNumChecks> worst{};
  std::string failure;
  for (const PointReport& r : reports) {
    if (!r.failure.empty() && failure.empty()) failure = r.failure;
    for (int c = 0; c < kNumChecks; ++c) {
      if (!r.used[c]) continue;
      ++counts[c];
      worst[c] = std::max(worst[c], r.residual[c]);
    }
  }
  for (int c = 0; c < kNumChecks; ++c) {
    CheckResult res;
    res.name = kSpecs[c].name;
    res.tolerance = kSpecs[c].tolerance;
    res.max_residual = worst[c];
    res.passed = counts[c] > 0 && failure.empty() && worst[c] < res.tolerance;
    std::ostringstream detail;
    detail << counts[c] << " points";
    if (!failure.empty()) detail << "; error: " << failure;
    res.detail = detail.str();
    out.push_back(res);
  }

  // Bracket test against the cubic pressure fit.
  CheckResult integ;
  integ.name = "Lie-bracket integrability = cubic-pressure test";
  integ.tolerance = 0.5;
  try {
    const auto verdict = lie_bracket_integrability(family.curve(), points);
    const auto fit = process::is_characteristically_integrable(family.curve());
    const bool bracket = verdict.plus_integrable && verdict.minus_integrable;
    integ.passed = bracket == fit.integrable && verdict.points_used > 0;
    integ.max_residual = integ.passed ? 0.0 : 1.0;
    std::ostringstream detail;
    detail << "bracket=" << (bracket ? "integrable" : "not integrable")
           << ", cubic fit=" << (fit.integrable ? "integrable" : "not integrable");
    integ.detail = detail.str();
  } catch (const std::exception& e) {
    integ.passed = false;
    integ.max_residual = 1.0;
    integ.detail = e.what();
  }
  out.push_back(integ);
  return out;
}

}  // namespace shockfront::geometry
