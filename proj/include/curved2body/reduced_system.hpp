#pragma once

// Reduced Hamiltonian system on (q, p, m1, m2, m3) for two point masses on
// S_kappa interacting through a potential of the separation q.

#include "curved2body/curvature.hpp"
#include "curved2body/symmetry.hpp"

#include <Eigen/Core>

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace curved2body {

using Vec5 = Eigen::Matrix<double, 5, 1>;
using Mat5 = Eigen::Matrix<double, 5, 5>;
using Vec4d = Eigen::Vector4d;
using Mat4d = Eigen::Matrix4d;

enum class PotentialKind { AttractingCot, CurvatureCot, RepellingCot, Custom };

/// V_kappa(q) and V'_kappa(q).
///   AttractingCot  V = -G cot_kappa(q)
///   CurvatureCot   V =  G kappa cot_kappa(q)
///   RepellingCot   V =  G cot_kappa(q)
struct PotentialFamily {
  using Fn = std::function<double(double kappa, double q)>;

  PotentialKind kind = PotentialKind::AttractingCot;
  double G = 1.0;
  Fn custom_value;
  Fn custom_derivative;

  static PotentialFamily attracting_cot(double G = 1.0) { return {PotentialKind::AttractingCot, G, {}, {}}; }
  static PotentialFamily curvature_cot(double G = 1.0) { return {PotentialKind::CurvatureCot, G, {}, {}}; }
  static PotentialFamily repelling_cot(double G = 1.0) { return {PotentialKind::RepellingCot, G, {}, {}}; }
  static PotentialFamily custom(Fn value, Fn derivative) {
    return {PotentialKind::Custom, 1.0, std::move(value), std::move(derivative)};
  }
  /// attracting-cot, curvature-cot or repelling-cot. Throws InvalidArgument.
  static PotentialFamily from_name(const std::string& name, double G = 1.0);

  std::string name() const;
  double value(double kappa, double q) const;
  double derivative(double kappa, double q) const;
  /// V'/kappa for potentials carrying an explicit kappa factor, finite at kappa = 0.
  std::optional<double> derivative_over_kappa(double kappa, double q) const;
};

struct ModelParams {
  double kappa = 0.0;
  double mu1 = 1.0;
  double mu2 = 1.0;
  PotentialFamily potential;

  double mu() const { return mu1 / mu2; }
  Curvature curvature() const { return {kappa}; }
};

struct ReducedState {
  double q = 0.0;
  double p = 0.0;
  double m1 = 0.0;
  double m2 = 0.0;
  double m3 = 0.0;

  Vec5 vec() const { return (Vec5() << q, p, m1, m2, m3).finished(); }
  Vec3 m() const { return {m1, m2, m3}; }
  /// u = (p, m1, m2, m3).
  Vec4d u() const { return {p, m1, m2, m3}; }
  static ReducedState from(const Vec5& v) { return {v[0], v[1], v[2], v[3], v[4]}; }
};

/// Throws OutOfInterval unless q lies in I_kappa.
void require_in_interval(double kappa, double q);

Mat4d mass_matrix(const ModelParams& params, double q);
Mat4d inverse_mass_matrix(const ModelParams& params, double q);

double hamiltonian(const ModelParams& params, const ReducedState& s);
/// Closed-form (H_q, H_p, H_m1, H_m2, H_m3).
Vec5 hamiltonian_gradient(const ModelParams& params, const ReducedState& s);

double casimir(double kappa, const Vec3& m);
Vec5 casimir_gradient(double kappa, const ReducedState& s);

Mat5 poisson_tensor(double kappa, const ReducedState& s);
/// (H_p, -H_q, (K m) x H_m).
Vec5 eom_rhs(const ModelParams& params, const ReducedState& s);

/// {F, G} = grad F^T P grad G.
double poisson_bracket(const Mat5& P, const Vec5& grad_f, const Vec5& grad_g);

struct FlatObservables {
  double L = 0.0;
  double p_total_sq = 0.0;
};

/// Angular momentum about the centre of mass and |total momentum|^2; kappa = 0 only.
FlatObservables flat_observables(const ReducedState& s, const ModelParams& params);

/// Body velocities (qdot, omega1, omega2, omega3) = M^-1 u.
Vec4d body_velocity(const ModelParams& params, const ReducedState& s);

struct Trajectory {
  std::vector<double> times;
  std::vector<ReducedState> states;
  std::vector<double> H;
  std::vector<double> C;
  double tol = 0.0;
  double h_drift = 0.0;
  double c_drift = 0.0;

  bool drift_within_contract() const { return h_drift < 100.0 * tol && c_drift < 100.0 * tol; }
};

struct IntegrateOptions {
  /// Output spacing; <= 0 records every accepted step.
  double sample_dt = 0.0;
  /// Minimum distance kept from the boundary of I_kappa.
  double domain_guard = 1e-8;
};

/// Adaptive Dormand-Prince 5(4) with dense output. Throws LeftDomain when q
/// comes within the guard of the boundary of I_kappa, StepFailure when the
/// step size collapses, InvalidArgument for tol outside [1e-13, 1e-5].
Trajectory integrate(const ModelParams& params, const ReducedState& s0, double t_end, double tol,
                     const IntegrateOptions& opts = {});

struct Reconstruction {
  std::vector<double> times;
  std::vector<EmbeddedPoint> X1;
  std::vector<EmbeddedPoint> X2;
  std::vector<GroupElement> g;
};

/// Lifts a reduced trajectory to S_kappa x S_kappa by integrating
/// gdot = g homogeneous(omega) together with the reduced state.
Reconstruction reconstruct(const ModelParams& params, const Trajectory& traj,
                           const GroupElement& g0 = GroupElement::identity(), double tol = 1e-12);

}  // namespace curved2body
