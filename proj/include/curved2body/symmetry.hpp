#pragma once

// The symmetry groups G_kappa = SO(K_kappa) (SO(3), SE(2), SO(2,1)) acting
// affinely on S_kappa, packaged as 4x4 homogeneous matrices so that the
// kappa = 0 and kappa != 0 cases share one code path.

#include "curved2body/curvature.hpp"

#include <Eigen/Core>

namespace curved2body {

using Mat4 = Eigen::Matrix4d;
using Vec4 = Eigen::Vector4d;

/// Body angular velocity (omega1, omega2, omega3) in the basis xi_1, xi_2, xi_3.
struct AlgebraElement {
  Vec3 omega = Vec3::Zero();
};

/// xi_i for i in {1, 2, 3}.
Mat3 basis_matrix(double kappa, int i);
/// sum_i omega_i xi_i.
Mat3 algebra_matrix(double kappa, const AlgebraElement& v);
Mat3 commutator(const Mat3& a, const Mat3& b);

/// Translation part of the infinitesimal action: (-omega2, omega1, 0).
Vec3 tau(const AlgebraElement& v);

/// [xi, tau(xi); 0, 0].
Mat4 homogeneous(double kappa, const AlgebraElement& v);

/// Homogeneous form [g, T; 0, 1] of an affine isometry of S_kappa.
struct GroupElement {
  Mat4 H = Mat4::Identity();

  Mat3 linear() const { return H.topLeftCorner<3, 3>(); }
  Vec3 translation() const { return H.topRightCorner<3, 1>(); }
  static GroupElement identity() { return {}; }
};

GroupElement operator*(const GroupElement& a, const GroupElement& b);

/// exp(t * homogeneous(v)).
GroupElement exp_group(double kappa, const AlgebraElement& v, double t);

/// T_kappa(g) computed from the linear part alone: (I - g) e3 / kappa, or
/// (A u, |u|^2 / 2) for kappa = 0 with g = [A 0; u^T 1].
Vec3 affine_translation(double kappa, const Mat3& g);

/// |g^T K g - K|_max, plus the SE(2) shape constraints at kappa = 0.
double group_residual(double kappa, const GroupElement& g);

/// Nearest group element to a slightly perturbed one (a few Newton polar steps).
GroupElement project_to_group(double kappa, const GroupElement& g);

/// g . x = g x + T. Throws NotOnSurface for off-surface input.
EmbeddedPoint act(double kappa, const GroupElement& g, const EmbeddedPoint& x);

/// xi . x = xi x + tau(xi).
Vec3 infinitesimal_action(double kappa, const AlgebraElement& v, const EmbeddedPoint& x);

}  // namespace curved2body
