#include "curved2body/equilibria.hpp"

#include <Eigen/QR>
#include <boost/math/tools/roots.hpp>

#include <cmath>
#include <numbers>
#include <sstream>

namespace curved2body {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kMaxNewton = 50;
constexpr double kNewtonTol = 1e-12;
constexpr double kNewtonFloor = 1e-10;

bool near_right_angle(double kappa, double q) {
  return kappa > 0.0 && std::abs(q * std::sqrt(kappa) - 0.5 * kPi) < kRightAngleTol;
}

// a + sqrt(D) with a = 2 mu C^2 + 1 - mu, D = 4 mu C^2 + (mu - 1)^2.
double a_plus_root_d(double mu, double C) {
  const double a = 2.0 * mu * C * C + 1.0 - mu;
  const double D = 4.0 * mu * C * C + (mu - 1.0) * (mu - 1.0);
  return a + std::sqrt(D);
}

REBranch sphere_label(bool acute, bool attracting) {
  if (acute) return attracting ? REBranch::AcuteAttracting : REBranch::AcuteRepelling;
  return attracting ? REBranch::ObtuseAttracting : REBranch::ObtuseRepelling;
}

REBranch isosceles_relabel(REBranch b) {
  switch (b) {
    case REBranch::AcuteAttracting:
    case REBranch::AcuteRepelling: return REBranch::IsoscelesAcute;
    case REBranch::ObtuseAttracting:
    case REBranch::ObtuseRepelling: return REBranch::IsoscelesObtuse;
    default: return b;
  }
}

bool equal_masses(const ModelParams& params) { return std::abs(params.mu() - 1.0) < 1e-12; }

}  // namespace

std::string_view to_string(REBranch b) {
  switch (b) {
    case REBranch::Hyperbolic: return "Hyperbolic";
    case REBranch::Elliptic: return "Elliptic";
    case REBranch::AcuteAttracting: return "AcuteAttracting";
    case REBranch::ObtuseAttracting: return "ObtuseAttracting";
    case REBranch::AcuteRepelling: return "AcuteRepelling";
    case REBranch::ObtuseRepelling: return "ObtuseRepelling";
    case REBranch::RightAngledAttracting: return "RightAngledAttracting";
    case REBranch::RightAngledRepelling: return "RightAngledRepelling";
    case REBranch::Keplerian: return "Keplerian";
    case REBranch::PerpendicularFlat: return "PerpendicularFlat";
    case REBranch::ZeroForce: return "ZeroForce";
    case REBranch::IsoscelesAcute: return "IsoscelesAcute";
    case REBranch::IsoscelesObtuse: return "IsoscelesObtuse";
  }
  return "Unknown";
}

bool is_sphere_branch(REBranch b) {
  switch (b) {
    case REBranch::AcuteAttracting:
    case REBranch::ObtuseAttracting:
    case REBranch::AcuteRepelling:
    case REBranch::ObtuseRepelling:
    case REBranch::RightAngledAttracting:
    case REBranch::RightAngledRepelling:
    case REBranch::IsoscelesAcute:
    case REBranch::IsoscelesObtuse: return true;
    default: return false;
  }
}

REBranch dual_branch(REBranch b) {
  switch (b) {
    case REBranch::AcuteAttracting: return REBranch::ObtuseRepelling;
    case REBranch::ObtuseAttracting: return REBranch::AcuteRepelling;
    case REBranch::AcuteRepelling: return REBranch::ObtuseAttracting;
    case REBranch::ObtuseRepelling: return REBranch::AcuteAttracting;
    case REBranch::RightAngledAttracting: return REBranch::RightAngledRepelling;
    case REBranch::RightAngledRepelling: return REBranch::RightAngledAttracting;
    case REBranch::IsoscelesAcute: return REBranch::IsoscelesObtuse;
    case REBranch::IsoscelesObtuse: return REBranch::IsoscelesAcute;
    default: throw Error(ErrorKind::WrongBranch, std::string(to_string(b)) + " has no antipodal dual");
  }
}

double a_minus(double q, double kappa, const ModelParams& params) {
  require_in_interval(kappa, q);
  const double mu = params.mu();
  const double S = sin_kappa(kappa, q);
  const double C = cos_kappa(kappa, q);
  const double dV = params.mu2 * params.potential.derivative(kappa, q);
  // rationalized form of (a - sqrt(D)) S V' / (2 mu kappa C)
  return 2.0 * mu * C * S * S * S * dV / a_plus_root_d(mu, C);
}

double a_plus(double q, double kappa, const ModelParams& params) {
  require_in_interval(kappa, q);
  const double mu = params.mu();
  const double S = sin_kappa(kappa, q);
  const double C = cos_kappa(kappa, q);
  if (std::abs(C) < kSingularTol) throw Error(ErrorKind::SingularArgument, "cos_kappa(q) vanishes in A+");
  const double root = a_plus_root_d(mu, C);
  if (const auto dv_k = params.potential.derivative_over_kappa(kappa, q))
    return -root * S * params.mu2 * *dv_k / (2.0 * mu * C);
  if (kappa == 0.0) throw Error(ErrorKind::SingularArgument, "A+ diverges at kappa = 0 for this potential");
  const double dV = params.mu2 * params.potential.derivative(kappa, q);
  return -root * S * dV / (2.0 * mu * kappa * C);
}

std::pair<double, double> a_plus_minus(double q, double kappa, const ModelParams& params) {
  return {a_plus(q, kappa, params), a_minus(q, kappa, params)};
}

double m2_of_m3(double q, double kappa, const ModelParams& params, double m3) {
  const double S = sin_kappa(kappa, q);
  const double C = cos_kappa(kappa, q);
  if (std::abs(S) < kSingularTol || m3 == 0.0)
    throw Error(ErrorKind::SingularArgument, "m2 is undefined for m3 = 0 or sin_kappa(q) = 0");
  const double a = params.mu1;
  const double b = params.mu2;
  const double dV = params.potential.derivative(kappa, q);
  return ((a + b) * C * m3 * m3 - a * b * S * S * S * dV) / (b * S * m3);
}

ReducedState re_seed(const ModelParams& params, double q, double A) {
  const double m3 = std::sqrt(A);
  return {q, 0.0, 0.0, m2_of_m3(q, params.kappa, params, m3), m3};
}

double re_residual(const ModelParams& params, const ReducedState& s) { return eom_rhs(params, s).norm(); }

ReducedState refine_re(const ModelParams& params, const ReducedState& initial) {
  if (std::abs(initial.m3) < kSingularTol)
    throw Error(ErrorKind::SingularArgument, "refine_re needs m3 != 0");
  Vec5 x = initial.vec();
  auto F = [&](const Vec5& y) { return eom_rhs(params, ReducedState::from(y)); };
  Vec5 f = F(x);
  double r = f.norm();
  for (int it = 0; it < kMaxNewton; ++it) {
    if (r < kNewtonTol) return ReducedState::from(x);
    Eigen::Matrix<double, 5, 4> J;
    for (int j = 0; j < 4; ++j) {
      const double h = 1e-6 * std::max(1.0, std::abs(x[j + 1]));
      Vec5 xp = x;
      Vec5 xm = x;
      xp[j + 1] += h;
      xm[j + 1] -= h;
      J.col(j) = (F(xp) - F(xm)) / (2.0 * h);
    }
    const Eigen::Vector4d dx = J.completeOrthogonalDecomposition().solve(-f);
    bool accepted = false;
    for (double t = 1.0; t > 1e-4; t *= 0.5) {
      Vec5 trial = x;
      trial.tail<4>() += t * dx;
      const Vec5 ft = F(trial);
      if (ft.norm() < r) {
        x = trial;
        f = ft;
        r = ft.norm();
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
  }
  if (r < kNewtonFloor) return ReducedState::from(x);
  std::ostringstream os;
  os << "residual " << r << " after Newton refinement at q = " << initial.q;
  throw Error(ErrorKind::NoConvergence, os.str());
}

double rotation_rate(const ModelParams& params, const ReducedState& s) {
  const Vec4d v = body_velocity(params, s);
  return std::sqrt(params.kappa * (v[1] * v[1] + v[2] * v[2]) + v[3] * v[3]);
}

SphereData sphere_angles(const RelEquilibrium& re) {
  const ModelParams& params = re.params;
  const double kappa = params.kappa;
  if (!(kappa > 0.0) || !is_sphere_branch(re.branch))
    throw Error(ErrorKind::WrongBranch, std::string(to_string(re.branch)) + " is not a sphere RE");
  const double rk = std::sqrt(kappa);
  const Vec4d v = body_velocity(params, re.state);
  // rotation axis on the unit sphere after rescaling by sqrt(kappa)
  const Vec3 N = Vec3(rk * v[1], rk * v[2], v[3]).normalized();
  const double phi = rk * re.state.q;
  const Vec3 U1(0.0, 0.0, -1.0);
  const Vec3 U2(0.0, std::sin(phi), -std::cos(phi));

  SphereData d;
  d.theta1 = std::acos(std::min(1.0, std::abs(U1.dot(N))));
  d.theta2 = std::acos(std::min(1.0, std::abs(U2.dot(N))));
  const double dV = params.potential.derivative(kappa, re.state.q);
  d.alpha = dV > 0.0 ? d.theta1 : kPi - d.theta1;
  d.zeta = 0.5 * params.mu1 * std::sin(2.0 * d.theta1);
  d.omega = std::sqrt(rk * std::abs(dV) / d.zeta);
  return d;
}

RelEquilibrium make_re(const ModelParams& params, const ReducedState& s, REBranch branch) {
  RelEquilibrium re{s, branch, params, std::nullopt, re_residual(params, s)};
  if (params.kappa > 0.0 && is_sphere_branch(branch)) re.sphere_data = sphere_angles(re);
  return re;
}

Classification classify_re(const ModelParams& params, double q) {
  const double kappa = params.kappa;
  require_in_interval(kappa, q);
  Classification out;

  if (near_right_angle(kappa, q)) {
    if (!equal_masses(params)) {
      out.diagnostic = ErrorKind::RightAngleUnequalMasses;
      out.diagnostic_message = "right-angled RE require equal masses: (mu - 1) V'(q) = 0 has no solution";
      return out;
    }
    const double dV = params.potential.derivative(kappa, q);
    out.right_angled = RightAngledFamily{
        q, dV > 0.0 ? REBranch::RightAngledAttracting : REBranch::RightAngledRepelling};
    return out;
  }

  const double dV = params.potential.derivative(kappa, q);
  auto add = [&](double A, REBranch branch) {
    const ReducedState s = refine_re(params, re_seed(params, q, A));
    out.equilibria.push_back(make_re(params, s, branch));
  };

  if (kappa == 0.0) {
    if (dV == 0.0) {
      if (params.potential.derivative_over_kappa(kappa, q)) {
        add(a_plus(q, kappa, params), REBranch::PerpendicularFlat);
      } else {
        out.equilibria.push_back(zero_force_re(params, q, 0.0, 1.0));
      }
    } else if (dV > 0.0) {
      add(a_minus(q, kappa, params), REBranch::Keplerian);
    }
    return out;
  }

  const auto [Ap, Am] = a_plus_minus(q, kappa, params);
  const bool attracting = dV > 0.0;
  if (kappa < 0.0) {
    if (Ap > 0.0) add(Ap, REBranch::Hyperbolic);
    if (Am > 0.0) add(Am, REBranch::Elliptic);
    return out;
  }
  const bool acute = cos_kappa(kappa, q) > 0.0;
  const bool relabel = equal_masses(params);
  for (const double A : {Ap, Am}) {
    if (!(A > 0.0)) continue;
    REBranch b = sphere_label(acute, attracting);
    if (relabel) b = isosceles_relabel(b);
    add(A, b);
  }
  return out;
}

PotentialFamily dual_potential(const PotentialFamily& v, double kappa) {
  if (!(kappa > 0.0)) throw Error(ErrorKind::NegativeCurvature, "antipodal map needs kappa > 0");
  switch (v.kind) {
    case PotentialKind::AttractingCot: return PotentialFamily::repelling_cot(v.G);
    case PotentialKind::RepellingCot: return PotentialFamily::attracting_cot(v.G);
    case PotentialKind::CurvatureCot: return PotentialFamily::attracting_cot(kappa * v.G);
    case PotentialKind::Custom: break;
  }
  const double qmax = Curvature{kappa}.max_separation();
  return PotentialFamily::custom([v, qmax](double k, double q) { return v.value(k, qmax - q); },
                                 [v, qmax](double k, double q) { return -v.derivative(k, qmax - q); });
}

ModelParams dual_params(const ModelParams& params) {
  ModelParams d = params;
  d.potential = dual_potential(params.potential, params.kappa);
  return d;
}

RelEquilibrium antipodal_dual(const RelEquilibrium& re) {
  const ModelParams& params = re.params;
  if (!(params.kappa > 0.0)) throw Error(ErrorKind::NegativeCurvature, "antipodal map needs kappa > 0");
  const ModelParams dual = dual_params(params);
  const double q_dual = params.curvature().max_separation() - re.state.q;

  // the velocity of the second mass reverses under the antipodal map
  const Vec4d v = body_velocity(params, re.state);
  const Vec4d v_dual(-v[0], -v[1], -v[2], v[3]);
  Vec4d u = mass_matrix(dual, q_dual) * v_dual;
  if (u[3] < 0.0) u = -u;  // time reversal keeps m3 > 0
  const ReducedState seed{q_dual, u[0], u[1], u[2], u[3]};
  const ReducedState s = re_residual(dual, seed) < kNewtonTol ? seed : refine_re(dual, seed);
  return make_re(dual, s, dual_branch(re.branch));
}

CriticalAngles critical_angles(double mu, double kappa, CriticalFamily family) {
  if (!(mu > 0.0 && mu <= 1.0)) throw Error(ErrorKind::InvalidArgument, "mu must lie in (0, 1]");
  CriticalAngles out;
  const bool repelling = family == CriticalFamily::Repelling;
  if (repelling ? !(kappa > 0.0) : !(kappa < 0.0)) return out;

  // cos_k(2a) = 2|k| sin_k(a)^2 sqrt(1 - k mu^2 sin_k(2a)^2)
  auto F = [&](double a) {
    const double s = sin_kappa(kappa, a);
    const double s2 = sin_kappa(kappa, 2.0 * a);
    return cos_kappa(kappa, 2.0 * a) -
           2.0 * std::abs(kappa) * s * s * std::sqrt(std::max(0.0, 1.0 - kappa * mu * mu * s2 * s2));
  };

  const double scale = 1.0 / std::sqrt(std::abs(kappa));
  double lo = repelling ? 0.5 * kPi * scale : 0.0;
  double hi = repelling ? kPi * scale : scale;
  if (!repelling) {
    while (F(hi) > 0.0 && hi < 50.0 * scale) hi *= 2.0;
  }
  if (F(lo) * F(hi) > 0.0) throw Error(ErrorKind::NoRoot, "critical-angle equation has no sign change");

  auto stop = [](double a, double b) { return std::abs(b - a) < 1e-13; };
  const auto [a0, a1] = boost::math::tools::bisect(F, lo, hi, stop);
  const double alpha = 0.5 * (a0 + a1);
  const double half_turn = 0.5 * asin_kappa(kappa, mu * sin_kappa(kappa, 2.0 * alpha));
  if (repelling) {
    out.alpha_dagger = alpha;
    out.q_dagger = alpha - 0.5 * kPi * scale - half_turn;
  } else {
    out.alpha_star = alpha;
    out.q_star = alpha + half_turn;
  }
  return out;
}

RelEquilibrium zero_force_re(const ModelParams& params, double q0, double m1, double m3) {
  require_in_interval(params.kappa, q0);
  const double dV = params.potential.derivative(params.kappa, q0);
  if (std::abs(dV) > 1e-12) {
    std::ostringstream os;
    os << "V'(q0) = " << dV << " at q0 = " << q0;
    throw Error(ErrorKind::ForceNotZero, os.str());
  }
  const double mu = params.mu();
  const ReducedState s{q0, m1 / (1.0 + mu), m1, (mu + 1.0) * cot_kappa(params.kappa, q0) * m3, m3};
  const REBranch b = params.kappa == 0.0 && m1 == 0.0 ? REBranch::PerpendicularFlat : REBranch::ZeroForce;
  return make_re(params, s, b);
}

RelEquilibrium right_angled_re(const ModelParams& params, double theta) {
  const double kappa = params.kappa;
  if (!(kappa > 0.0)) throw Error(ErrorKind::NegativeCurvature, "right-angled RE need kappa > 0");
  if (!equal_masses(params))
    throw Error(ErrorKind::RightAngleUnequalMasses, "right-angled RE require equal masses");
  if (!(theta > 0.0 && theta < 0.5 * kPi)) throw Error(ErrorKind::InvalidArgument, "theta must lie in (0, pi/2)");
  const double q = 0.5 * kPi / std::sqrt(kappa);
  const double dV = params.potential.derivative(kappa, q);
  const double m3 = std::sqrt(params.mu2 * std::abs(dV) / (std::pow(kappa, 1.5) * std::tan(theta)));
  const double S = sin_kappa(kappa, q);
  const ReducedState s{q, 0.0, 0.0, -params.mu1 * S * S * dV / m3, m3};
  return make_re(params, s, dV > 0.0 ? REBranch::RightAngledAttracting : REBranch::RightAngledRepelling);
}

}  // namespace curved2body
