#include "curved2body/symmetry.hpp"

#include "curved2body/error.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>

namespace curved2body {

Mat3 basis_matrix(double kappa, int i) {
  Mat3 xi = Mat3::Zero();
  switch (i) {
    case 1:
      xi(1, 2) = -kappa;
      xi(2, 1) = 1.0;
      break;
    case 2:
      xi(0, 2) = kappa;
      xi(2, 0) = -1.0;
      break;
    case 3:
      xi(0, 1) = -1.0;
      xi(1, 0) = 1.0;
      break;
    default:
      throw Error(ErrorKind::InvalidArgument, "basis index must be 1, 2 or 3");
  }
  return xi;
}

Mat3 algebra_matrix(double kappa, const AlgebraElement& v) {
  return v.omega[0] * basis_matrix(kappa, 1) + v.omega[1] * basis_matrix(kappa, 2) +
         v.omega[2] * basis_matrix(kappa, 3);
}

Mat3 commutator(const Mat3& a, const Mat3& b) { return a * b - b * a; }

Vec3 tau(const AlgebraElement& v) { return {-v.omega[1], v.omega[0], 0.0}; }

Mat4 homogeneous(double kappa, const AlgebraElement& v) {
  Mat4 m = Mat4::Zero();
  m.topLeftCorner<3, 3>() = algebra_matrix(kappa, v);
  m.topRightCorner<3, 1>() = tau(v);
  return m;
}

GroupElement operator*(const GroupElement& a, const GroupElement& b) { return {a.H * b.H}; }

GroupElement exp_group(double kappa, const AlgebraElement& v, double t) {
  const Mat4 generator = t * homogeneous(kappa, v);
  GroupElement g{generator.exp()};
  g.H.row(3) << 0.0, 0.0, 0.0, 1.0;
  return g;
}

Vec3 affine_translation(double kappa, const Mat3& g) {
  if (kappa != 0.0) return (Mat3::Identity() - g) * Vec3::UnitZ() / kappa;
  const Eigen::Matrix2d A = g.topLeftCorner<2, 2>();
  const Eigen::Vector2d u = g.block<1, 2>(2, 0).transpose();
  const Eigen::Vector2d Au = A * u;
  return {Au.x(), Au.y(), 0.5 * u.squaredNorm()};
}

double group_residual(double kappa, const GroupElement& g) {
  const Mat3 K = MetricTensor(kappa).matrix();
  const Mat3 lin = g.linear();
  double r = (lin.transpose() * K * lin - K).cwiseAbs().maxCoeff();
  if (kappa == 0.0) {
    // g = [A 0; a b 1] with A in SO(2)
    r = std::max(r, std::abs(lin(0, 2)));
    r = std::max(r, std::abs(lin(1, 2)));
    r = std::max(r, std::abs(lin(2, 2) - 1.0));
    const Eigen::Matrix2d A = lin.topLeftCorner<2, 2>();
    r = std::max(r, (A.transpose() * A - Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff());
    r = std::max(r, std::abs(A.determinant() - 1.0));
  }
  const Vec4 bottom = g.H.row(3).transpose();
  r = std::max(r, (bottom - Vec4(0.0, 0.0, 0.0, 1.0)).cwiseAbs().maxCoeff());
  return r;
}

GroupElement project_to_group(double kappa, const GroupElement& g) {
  Mat3 lin = g.linear();
  if (kappa == 0.0) {
    Eigen::Matrix2d A = lin.topLeftCorner<2, 2>();
    for (int k = 0; k < 3; ++k) A = 0.5 * A * (3.0 * Eigen::Matrix2d::Identity() - A.transpose() * A);
    lin.topLeftCorner<2, 2>() = A;
    lin(0, 2) = lin(1, 2) = 0.0;
    lin(2, 2) = 1.0;
  } else {
    const Mat3 K = MetricTensor(kappa).matrix();
    const Mat3 Kinv = K.inverse();
    for (int k = 0; k < 3; ++k) lin = 0.5 * lin * (3.0 * Mat3::Identity() - Kinv * lin.transpose() * K * lin);
  }
  Mat4 H = Mat4::Identity();
  H.topLeftCorner<3, 3>() = lin;
  H.topRightCorner<3, 1>() = affine_translation(kappa, lin);
  return GroupElement{H};
}

EmbeddedPoint act(double kappa, const GroupElement& g, const EmbeddedPoint& x) {
  if (!on_surface(kappa, x)) throw Error(ErrorKind::NotOnSurface, "act: input point is off the surface");
  return EmbeddedPoint::from(g.linear() * x.vec() + g.translation());
}

Vec3 infinitesimal_action(double kappa, const AlgebraElement& v, const EmbeddedPoint& x) {
  return algebra_matrix(kappa, v) * x.vec() + tau(v);
}

}  // namespace curved2body
