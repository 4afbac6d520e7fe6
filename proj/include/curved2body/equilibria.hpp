#pragma once

// Relative equilibria: closed-form seeds from the A+- branches, Newton
// certification against the Hamiltonian, sphere angle data, antipodal
// duality and the critical separations q* and q-dagger.

#include "curved2body/error.hpp"
#include "curved2body/reduced_system.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace curved2body {

enum class REBranch {
  Hyperbolic,
  Elliptic,
  AcuteAttracting,
  ObtuseAttracting,
  AcuteRepelling,
  ObtuseRepelling,
  RightAngledAttracting,
  RightAngledRepelling,
  Keplerian,
  PerpendicularFlat,
  ZeroForce,
  IsoscelesAcute,
  IsoscelesObtuse,
};

std::string_view to_string(REBranch b);
bool is_sphere_branch(REBranch b);
/// Acute <-> obtuse and attracting <-> repelling.
REBranch dual_branch(REBranch b);

struct SphereData {
  double theta1 = 0.0;
  double theta2 = 0.0;
  double omega = 0.0;
  double zeta = 0.0;
  double alpha = 0.0;
};

struct RelEquilibrium {
  ReducedState state;
  REBranch branch = REBranch::Keplerian;
  ModelParams params;
  std::optional<SphereData> sphere_data;
  double residual = 0.0;
};

/// One-parameter right-angled family (kappa > 0, q sqrt(kappa) = pi/2, mu = 1),
/// parametrized by the angle theta in (0, pi/2) of the first mass to the axis.
struct RightAngledFamily {
  double q = 0.0;
  REBranch branch = REBranch::RightAngledAttracting;
};

struct Classification {
  std::vector<RelEquilibrium> equilibria;
  std::optional<RightAngledFamily> right_angled;
  /// Set when the right-angle locus is hit with unequal masses.
  std::optional<ErrorKind> diagnostic;
  std::string diagnostic_message;
};

/// Tolerance on |q sqrt(kappa) - pi/2| selecting the right-angled family.
inline constexpr double kRightAngleTol = 1e-9;

/// m3^2 = A-(q, kappa, mu), finite through kappa = 0.
double a_minus(double q, double kappa, const ModelParams& params);
/// m3^2 = A+(q, kappa, mu). At kappa = 0 only defined for potentials carrying
/// an explicit kappa factor; otherwise SingularArgument.
double a_plus(double q, double kappa, const ModelParams& params);
/// (A+, A-). SingularArgument where cos_kappa(q) = 0.
std::pair<double, double> a_plus_minus(double q, double kappa, const ModelParams& params);

/// m2 from dH/dq = 0 with p = m1 = 0.
double m2_of_m3(double q, double kappa, const ModelParams& params, double m3);

/// Refined state with p = m1 = 0 and m2 = m2_of_m3(m3), m3 = sqrt(A).
ReducedState re_seed(const ModelParams& params, double q, double A);

/// Every relative equilibrium at separation q, refined and certified.
Classification classify_re(const ModelParams& params, double q);

/// Damped Gauss-Newton on eom_rhs = 0 in (p, m1, m2, m3) at fixed q.
/// NoConvergence after 50 iterations; SingularArgument for m3 = 0 seeds.
ReducedState refine_re(const ModelParams& params, const ReducedState& initial);

/// eom_rhs norm.
double re_residual(const ModelParams& params, const ReducedState& s);

/// Angles of the two masses to the rotation axis, rotation rate and zeta. WrongBranch off the sphere.
SphereData sphere_angles(const RelEquilibrium& re);
/// Rotation rate of the RE read off the body angular velocity.
double rotation_rate(const ModelParams& params, const ReducedState& s);

/// Potential q -> V(pi/sqrt(kappa) - q).
PotentialFamily dual_potential(const PotentialFamily& v, double kappa);
ModelParams dual_params(const ModelParams& params);
/// The RE of the antipodal problem at separation pi/sqrt(kappa) - q. NegativeCurvature for kappa <= 0.
RelEquilibrium antipodal_dual(const RelEquilibrium& re);

enum class CriticalFamily { Attracting, Repelling };

struct CriticalAngles {
  std::optional<double> q_star;
  std::optional<double> q_dagger;
  std::optional<double> alpha_star;
  std::optional<double> alpha_dagger;
};

/// q* (attracting, kappa < 0) or q-dagger (repelling, kappa > 0) by
/// bisection of the critical-angle equation. Empty for other sign combinations.
CriticalAngles critical_angles(double mu, double kappa, CriticalFamily family);

/// RE of a force-free separation: p = m1/(1+mu), m2 = (mu+1) cot_kappa(q0) m3. ForceNotZero otherwise.
RelEquilibrium zero_force_re(const ModelParams& params, double q0, double m1, double m3);

/// Member of the right-angled family with the first mass at angle theta to the axis.
RelEquilibrium right_angled_re(const ModelParams& params, double theta);

/// Finishes a state as a RelEquilibrium (residual, sphere data).
RelEquilibrium make_re(const ModelParams& params, const ReducedState& s, REBranch branch);

}  // namespace curved2body
