#include "curved2body/reduced_system.hpp"

#include "curved2body/error.hpp"

#include <Eigen/Geometry>

#include <cmath>
#include <sstream>

namespace curved2body {
namespace {

struct Trig {
  double S;
  double C;
};

Trig trig_at(double kappa, double q) {
  const Trig t{sin_kappa(kappa, q), cos_kappa(kappa, q)};
  if (std::abs(t.S) < kSingularTol) throw Error(ErrorKind::SingularArgument, "sin_kappa(q) vanishes");
  return t;
}

}  // namespace

void require_in_interval(double kappa, double q) {
  if (!Curvature{kappa}.admits(q)) {
    std::ostringstream os;
    os.precision(17);
    os << "q = " << q << " not in I_kappa for kappa = " << kappa;
    throw Error(ErrorKind::OutOfInterval, os.str());
  }
}

Mat4d mass_matrix(const ModelParams& params, double q) {
  require_in_interval(params.kappa, q);
  const double S = sin_kappa(params.kappa, q);
  const double C = cos_kappa(params.kappa, q);
  const double m1 = params.mu1;
  const double m2 = params.mu2;
  Mat4d M = Mat4d::Zero();
  M(0, 0) = m2;
  M(0, 1) = M(1, 0) = m2;
  M(1, 1) = m1 + m2;
  M(2, 2) = m1 + m2 * C * C;
  M(2, 3) = M(3, 2) = m2 * S * C;
  M(3, 3) = m2 * S * S;
  return M;
}

Mat4d inverse_mass_matrix(const ModelParams& params, double q) {
  require_in_interval(params.kappa, q);
  const auto [S, C] = trig_at(params.kappa, q);
  const double m1 = params.mu1;
  const double m2 = params.mu2;
  Mat4d W = Mat4d::Zero();
  W(0, 0) = m1 + m2;
  W(0, 1) = W(1, 0) = -m2;
  W(1, 1) = m2;
  W(2, 2) = m2;
  W(2, 3) = W(3, 2) = -m2 * C / S;
  W(3, 3) = (m1 + m2 * C * C) / (S * S);
  return W / (m1 * m2);
}

double hamiltonian(const ModelParams& params, const ReducedState& s) {
  const Vec4d u = s.u();
  return 0.5 * u.dot(inverse_mass_matrix(params, s.q) * u) + params.potential.value(params.kappa, s.q);
}

Vec5 hamiltonian_gradient(const ModelParams& params, const ReducedState& s) {
  require_in_interval(params.kappa, s.q);
  const auto [S, C] = trig_at(params.kappa, s.q);
  const double a = params.mu1;
  const double b = params.mu2;
  const double cot = C / S;
  Vec5 g;
  g[0] = s.m2 * s.m3 / (a * S * S) - (a + b) * C * s.m3 * s.m3 / (a * b * S * S * S) +
         params.potential.derivative(params.kappa, s.q);
  g[1] = ((a + b) * s.p - b * s.m1) / (a * b);
  g[2] = (s.m1 - s.p) / a;
  g[3] = (s.m2 - cot * s.m3) / a;
  g[4] = (-b * cot * s.m2 + (a + b * C * C) / (S * S) * s.m3) / (a * b);
  return g;
}

double casimir(double kappa, const Vec3& m) { return m[0] * m[0] + m[1] * m[1] + kappa * m[2] * m[2]; }

Vec5 casimir_gradient(double kappa, const ReducedState& s) {
  return (Vec5() << 0.0, 0.0, 2.0 * s.m1, 2.0 * s.m2, 2.0 * kappa * s.m3).finished();
}

Mat5 poisson_tensor(double kappa, const ReducedState& s) {
  Mat5 P = Mat5::Zero();
  P(0, 1) = 1.0;
  P(1, 0) = -1.0;
  // {m_i, m_j} = -(K m) . (e_i x e_j)
  const Vec3 Km(s.m1, s.m2, kappa * s.m3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) P(2 + i, 2 + j) = -Km.dot(Vec3::Unit(i).cross(Vec3::Unit(j)));
  return P;
}

Vec5 eom_rhs(const ModelParams& params, const ReducedState& s) {
  const Vec5 g = hamiltonian_gradient(params, s);
  const Vec3 Km(s.m1, s.m2, params.kappa * s.m3);
  const Vec3 mdot = Km.cross(Vec3(g[2], g[3], g[4]));
  return (Vec5() << g[1], -g[0], mdot).finished();
}

double poisson_bracket(const Mat5& P, const Vec5& grad_f, const Vec5& grad_g) { return grad_f.dot(P * grad_g); }

FlatObservables flat_observables(const ReducedState& s, const ModelParams& params) {
  if (params.kappa != 0.0) throw Error(ErrorKind::NonzeroCurvature, "flat observables need kappa = 0");
  return {s.m3 - params.mu2 * s.q * s.m2 / (params.mu1 + params.mu2), s.m1 * s.m1 + s.m2 * s.m2};
}

Vec4d body_velocity(const ModelParams& params, const ReducedState& s) {
  return inverse_mass_matrix(params, s.q) * s.u();
}

}  // namespace curved2body
