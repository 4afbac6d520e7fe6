#include "curved2body/curvature.hpp"

#include "curved2body/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace curved2body {
namespace {

constexpr int kSeriesTerms = 10;

bool use_series(double kappa, double x) { return std::abs(kappa) * x * x < kSeriesSwitch; }

// sum_{n>=0} (-kappa x^2)^n x^(2n+offset) / (2n+offset)!, offset in {0, 1, 2}.
// offset 2 is (1 - cos_kappa)/kappa.
double trig_series(double kappa, double x, int offset) {
  const double u = -kappa * x * x;
  double term = std::pow(x, offset);
  for (int k = 2; k <= offset; ++k) term /= k;
  double sum = term;
  for (int n = 1; n < kSeriesTerms; ++n) {
    const int a = 2 * n + offset - 1;
    const int b = 2 * n + offset;
    term *= u / (static_cast<double>(a) * b);
    sum += term;
  }
  return sum;
}

std::string describe(double kappa, double q) {
  std::ostringstream os;
  os.precision(17);
  os << "q = " << q << " not in I_kappa for kappa = " << kappa;
  return os.str();
}

void require_on_surface(double kappa, const EmbeddedPoint& p) {
  const double r = surface_residual(kappa, p);
  if (!(std::abs(r) < kSurfaceTol)) {
    std::ostringstream os;
    os.precision(17);
    os << "point (" << p.x << ", " << p.y << ", " << p.z << ") has surface residual " << r;
    throw Error(ErrorKind::NotOnSurface, os.str());
  }
}

}  // namespace

double Curvature::max_separation() const {
  return kappa > 0.0 ? std::numbers::pi / std::sqrt(kappa) : std::numeric_limits<double>::infinity();
}

bool Curvature::admits(double q) const { return q > 0.0 && q < max_separation(); }

double Curvature::boundary_distance(double q) const { return std::min(q, max_separation() - q); }

double sin_kappa(double kappa, double x) {
  if (use_series(kappa, x)) return trig_series(kappa, x, 1);
  if (kappa > 0.0) {
    const double s = std::sqrt(kappa);
    return std::sin(s * x) / s;
  }
  const double s = std::sqrt(-kappa);
  return std::sinh(s * x) / s;
}

double cos_kappa(double kappa, double x) {
  if (use_series(kappa, x)) return trig_series(kappa, x, 0);
  if (kappa > 0.0) return std::cos(std::sqrt(kappa) * x);
  return std::cosh(std::sqrt(-kappa) * x);
}

double versin_kappa(double kappa, double x) {
  if (use_series(kappa, x)) return trig_series(kappa, x, 2);
  if (kappa > 0.0) {
    const double h = std::sin(0.5 * std::sqrt(kappa) * x);
    return 2.0 * h * h / kappa;
  }
  const double h = std::sinh(0.5 * std::sqrt(-kappa) * x);
  return -2.0 * h * h / kappa;
}

double asin_kappa(double kappa, double y) {
  if (use_series(kappa, y)) {
    // asin_kappa(y) = sum (2n)! / (4^n (n!)^2 (2n+1)) kappa^n y^(2n+1)
    double coeff = 1.0;
    double power = y;
    double sum = y;
    for (int n = 1; n < kSeriesTerms; ++n) {
      coeff *= (2.0 * n - 1.0) / (2.0 * n);
      power *= kappa * y * y;
      sum += coeff * power / (2.0 * n + 1.0);
    }
    return sum;
  }
  if (kappa > 0.0) {
    const double s = std::sqrt(kappa);
    return std::asin(std::clamp(s * y, -1.0, 1.0)) / s;
  }
  const double s = std::sqrt(-kappa);
  return std::asinh(s * y) / s;
}

double tan_kappa(double kappa, double x) {
  const double c = cos_kappa(kappa, x);
  if (std::abs(c) < kSingularTol) throw Error(ErrorKind::SingularArgument, "cos_kappa vanishes in tan_kappa");
  return sin_kappa(kappa, x) / c;
}

double cot_kappa(double kappa, double x) {
  const double s = sin_kappa(kappa, x);
  if (std::abs(s) < kSingularTol) throw Error(ErrorKind::SingularArgument, "sin_kappa vanishes in cot_kappa");
  return cos_kappa(kappa, x) / s;
}

double surface_residual(double kappa, const EmbeddedPoint& p) {
  return p.x * p.x + p.y * p.y + kappa * p.z * p.z - 2.0 * p.z;
}

bool on_surface(double kappa, const EmbeddedPoint& p, double tol) {
  return std::abs(surface_residual(kappa, p)) < tol;
}

Vec3 surface_normal(double kappa, const EmbeddedPoint& p) {
  return {2.0 * p.x, 2.0 * p.y, 2.0 * kappa * p.z - 2.0};
}

PointPair point_pair(double kappa, double q) {
  if (!Curvature{kappa}.admits(q)) throw Error(ErrorKind::OutOfInterval, describe(kappa, q));
  return {EmbeddedPoint{}, geodesic_gamma(kappa, q)};
}

EmbeddedPoint geodesic_gamma(double kappa, double t) {
  const Curvature c{kappa};
  if (t < 0.0 || t > c.max_separation()) throw Error(ErrorKind::OutOfInterval, describe(kappa, t));
  return {0.0, sin_kappa(kappa, t), versin_kappa(kappa, t)};
}

Vec3 geodesic_velocity(double kappa, double t) { return {0.0, cos_kappa(kappa, t), sin_kappa(kappa, t)}; }

double geodesic_distance(double kappa, const EmbeddedPoint& a, const EmbeddedPoint& b) {
  require_on_surface(kappa, a);
  require_on_surface(kappa, b);
  if (kappa == 0.0) return std::hypot(a.x - b.x, a.y - b.y);

  // (x, y, z) -> (X, Y, Z) = (s x, s y, |kappa| z) lands on S_{+1} or S_{-1}.
  const double s = std::sqrt(std::abs(kappa));
  const double dX = s * (a.x - b.x);
  const double dY = s * (a.y - b.y);
  const double dZ = std::abs(kappa) * (a.z - b.z);
  if (kappa > 0.0) {
    const double chord = std::sqrt(dX * dX + dY * dY + dZ * dZ);
    return 2.0 * std::asin(std::min(1.0, 0.5 * chord)) / s;
  }
  const double chord = std::sqrt(std::max(0.0, dX * dX + dY * dY - dZ * dZ));
  return 2.0 * std::asinh(0.5 * chord) / s;
}

Vec3 surface_centre(double kappa) {
  if (kappa == 0.0) throw Error(ErrorKind::SingularArgument, "flat surface has no centre");
  return {0.0, 0.0, 1.0 / kappa};
}

PointPair antipodal_map(double kappa, const PointPair& cfg) {
  if (!(kappa > 0.0)) throw Error(ErrorKind::NegativeCurvature, "antipodal map needs kappa > 0");
  require_on_surface(kappa, cfg.first);
  require_on_surface(kappa, cfg.second);
  const Vec3 c = surface_centre(kappa);
  return {cfg.first, EmbeddedPoint::from(2.0 * c - cfg.second.vec())};
}

}  // namespace curved2body
