#pragma once

// kappa-trigonometry and the constant-curvature surface
//   S_kappa = { x^2 + y^2 + kappa z^2 - 2 z = 0 }
// with the ambient (possibly degenerate) metric K_kappa = diag(1, 1, kappa).
// kappa > 0 is a sphere of radius 1/sqrt(kappa) centred at (0, 0, 1/kappa),
// kappa = 0 a paraboloid isometric to the plane, kappa < 0 the upper sheet of
// a two-sheeted hyperboloid.

#include <Eigen/Core>

#include <utility>

namespace curved2body {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

inline constexpr double kSurfaceTol = 1e-10;
inline constexpr double kSingularTol = 1e-12;
/// |kappa| x^2 below this switches the kappa-trig functions to their Taylor series.
inline constexpr double kSeriesSwitch = 1e-4;

/// Gaussian curvature together with the interval I_kappa of admissible separations.
struct Curvature {
  double kappa = 0.0;

  bool bounded() const { return kappa > 0.0; }
  /// Upper end of I_kappa: pi/sqrt(kappa) for kappa > 0, +inf otherwise.
  double max_separation() const;
  /// q in the open interval I_kappa.
  bool admits(double q) const;
  /// Distance of q from the boundary of I_kappa (inf-safe).
  double boundary_distance(double q) const;
};

double sin_kappa(double kappa, double x);
double cos_kappa(double kappa, double x);
/// (1 - cos_kappa(x)) / kappa, continued to x^2/2 at kappa = 0.
double versin_kappa(double kappa, double x);
/// Inverse of sin_kappa on its monotone branch around 0.
double asin_kappa(double kappa, double y);
double tan_kappa(double kappa, double x);
double cot_kappa(double kappa, double x);

struct EmbeddedPoint {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  Vec3 vec() const { return {x, y, z}; }
  static EmbeddedPoint from(const Vec3& v) { return {v.x(), v.y(), v.z()}; }
};

/// f_kappa(x, y, z); zero on the surface.
double surface_residual(double kappa, const EmbeddedPoint& p);
bool on_surface(double kappa, const EmbeddedPoint& p, double tol = kSurfaceTol);
/// Gradient of f_kappa.
Vec3 surface_normal(double kappa, const EmbeddedPoint& p);

class MetricTensor {
 public:
  explicit MetricTensor(double kappa) : kappa_(kappa) {}

  double kappa() const { return kappa_; }
  Mat3 matrix() const { return Eigen::Vector3d(1.0, 1.0, kappa_).asDiagonal(); }
  bool degenerate() const { return kappa_ == 0.0; }
  double norm_sq(const Vec3& v) const { return v.x() * v.x() + v.y() * v.y() + kappa_ * v.z() * v.z(); }
  double inner(const Vec3& a, const Vec3& b) const {
    return a.x() * b.x() + a.y() * b.y() + kappa_ * a.z() * b.z();
  }

 private:
  double kappa_;
};

using PointPair = std::pair<EmbeddedPoint, EmbeddedPoint>;

/// x1 = origin and x2(q) on the meridian in the y-z plane, separated by q.
PointPair point_pair(double kappa, double q);

/// Unit-speed meridian geodesic through the origin.
EmbeddedPoint geodesic_gamma(double kappa, double t);
/// d/dt geodesic_gamma.
Vec3 geodesic_velocity(double kappa, double t);

/// Geodesic distance between two surface points. kappa != 0 is rescaled onto
/// S_{+-1}; kappa = 0 is the planar distance of the (x, y) projections.
double geodesic_distance(double kappa, const EmbeddedPoint& a, const EmbeddedPoint& b);

/// Centre of the sphere (kappa > 0) or hyperboloid (kappa < 0).
Vec3 surface_centre(double kappa);

/// Sends the second point to its antipode; kappa > 0 only.
PointPair antipodal_map(double kappa, const PointPair& cfg);

}  // namespace curved2body
