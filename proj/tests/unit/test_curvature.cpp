#include <doctest.h>

#include "curved2body/curvature.hpp"
#include "curved2body/error.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace curved2body;
using std::numbers::pi;

namespace {

// closed forms, used away from kappa = 0
double sin_ref(double k, double x) {
  if (k > 0) return std::sin(std::sqrt(k) * x) / std::sqrt(k);
  if (k < 0) return std::sinh(std::sqrt(-k) * x) / std::sqrt(-k);
  return x;
}

double cos_ref(double k, double x) {
  if (k > 0) return std::cos(std::sqrt(k) * x);
  if (k < 0) return std::cosh(std::sqrt(-k) * x);
  return 1.0;
}

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::InvalidArgument;
}

}  // namespace

TEST_CASE("kappa-trig special values") {
  CHECK(sin_kappa(0, 2.5) == doctest::Approx(2.5).epsilon(1e-15));
  CHECK(sin_kappa(1, pi / 2) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(sin_kappa(-1, 1) == doctest::Approx(1.1752011936).epsilon(1e-10));
  CHECK(cos_kappa(0, 7.3) == 1.0);
  CHECK(cos_kappa(1, pi) == doctest::Approx(-1.0).epsilon(1e-15));
  const double s = sin_kappa(0.37, 1.9);
  const double c = cos_kappa(0.37, 1.9);
  CHECK(std::abs(c * c + 0.37 * s * s - 1.0) < 1e-14);
  CHECK(cot_kappa(0, 2) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(std::abs(cot_kappa(1, pi / 2)) < 1e-15);
  CHECK(tan_kappa(1, 0.3) == doctest::Approx(std::tan(0.3)).epsilon(1e-14));
}

TEST_CASE("kappa-trig agrees with the closed forms") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> kd(-2.0, 2.0);
  std::uniform_real_distribution<double> xd(0.0, 1.5);
  for (int i = 0; i < 2000; ++i) {
    const double k = kd(rng);
    const double x = xd(rng);
    CHECK(std::abs(sin_kappa(k, x) - sin_ref(k, x)) < 1e-12);
    CHECK(std::abs(cos_kappa(k, x) - cos_ref(k, x)) < 1e-12);
    if (std::abs(k) * x * x > 1e-3)
      CHECK(std::abs(versin_kappa(k, x) - (1.0 - cos_ref(k, x)) / k) < 1e-12);
  }
}

TEST_CASE("series branch is continuous across the switch") {
  for (const double k : {1.0, -1.0, 0.3, -0.05}) {
    const double x = std::sqrt(1e-4 / std::abs(k));
    const double lo = std::nextafter(x, 0.0);
    const double hi = std::nextafter(x, 10.0);
    CHECK(std::abs(sin_kappa(k, lo) - sin_kappa(k, hi)) < 1e-14);
    CHECK(std::abs(cos_kappa(k, lo) - cos_kappa(k, hi)) < 1e-14);
    CHECK(std::abs(versin_kappa(k, lo) - versin_kappa(k, hi)) < 1e-14);
    CHECK(std::abs(sin_kappa(k, hi) - sin_ref(k, hi)) < 1e-15);
  }
  // versin at tiny kappa keeps relative accuracy where the closed form cancels
  CHECK(versin_kappa(1e-14, 0.5) == doctest::Approx(0.125).epsilon(1e-13));
}

TEST_CASE("asin_kappa inverts sin_kappa") {
  for (const double k : {-1.0, -0.2, 0.0, 0.2, 1.0})
    for (const double x : {0.01, 0.3, 1.0})
      CHECK(asin_kappa(k, sin_kappa(k, x)) == doctest::Approx(x).epsilon(1e-13));
}

TEST_CASE("d/dq of -cot_kappa is 1 / sin_kappa^2") {
  const double k = -0.2;
  const double q = 1.3;
  const double h = 1e-5;
  const double fd = -(cot_kappa(k, q + h) - cot_kappa(k, q - h)) / (2 * h);
  const double s = sin_kappa(k, q);
  CHECK(fd == doctest::Approx(1.0 / (s * s)).epsilon(1e-8));
}

TEST_CASE("point pairs and the meridian geodesic") {
  auto [a, b] = point_pair(0, 3);
  CHECK(a.vec().norm() == 0.0);
  CHECK((b.vec() - Vec3(0, 3, 4.5)).norm() < 1e-15);

  std::tie(a, b) = point_pair(1, pi / 2);
  CHECK((b.vec() - Vec3(0, 1, 1)).norm() < 1e-15);

  std::tie(a, b) = point_pair(-0.2, 2.5);
  CHECK(std::abs(surface_residual(-0.2, a)) < 1e-12);
  CHECK(std::abs(surface_residual(-0.2, b)) < 1e-12);

  const EmbeddedPoint g = geodesic_gamma(0, 1.7);
  CHECK((g.vec() - Vec3(0, 1.7, 0.5 * 1.7 * 1.7)).norm() < 1e-15);
  for (const double k : {-1.0, 0.0, 0.2, 3.0}) CHECK(geodesic_gamma(k, 0).vec().norm() == 0.0);

  CHECK(std::abs(MetricTensor(0.2).norm_sq(geodesic_velocity(0.2, 1.1)) - 1.0) < 1e-10);
  // the velocity is tangent to the surface
  for (const double k : {-0.7, 0.0, 0.4}) {
    const double t = 0.9;
    CHECK(std::abs(surface_normal(k, geodesic_gamma(k, t)).dot(geodesic_velocity(k, t))) < 1e-13);
  }
}

TEST_CASE("geodesic distance") {
  for (const double k : {-1.0, -0.2, 0.2, 1.0}) {
    const auto [a, b] = point_pair(k, 1.1);
    CHECK(geodesic_distance(k, a, b) == doctest::Approx(1.1).epsilon(1e-12));
  }
  CHECK(geodesic_distance(0, {0, 0, 0}, {0, 3, 4.5}) == doctest::Approx(3.0));
  // north and south pole of the unit sphere
  CHECK(geodesic_distance(1, {0, 0, 0}, {0, 0, 2}) == doctest::Approx(pi).epsilon(1e-12));
  CHECK(kind_of([] { geodesic_distance(1, {0, 0, 0}, {0, 0, 1}); }) == ErrorKind::NotOnSurface);
}

TEST_CASE("antipodal map") {
  const auto cfg = point_pair(1, pi / 3);
  const auto dual = antipodal_map(1, cfg);
  CHECK(geodesic_distance(1, dual.first, dual.second) == doctest::Approx(2 * pi / 3).epsilon(1e-12));
  const auto back = antipodal_map(1, dual);
  CHECK((back.second.vec() - cfg.second.vec()).norm() < 1e-14);

  const auto c2 = point_pair(0.2, 1.1);
  const auto d2 = antipodal_map(0.2, c2);
  CHECK(geodesic_distance(0.2, c2.first, c2.second) + geodesic_distance(0.2, d2.first, d2.second) ==
        doctest::Approx(pi / std::sqrt(0.2)).epsilon(1e-12));

  CHECK(kind_of([] { antipodal_map(-1, point_pair(-1, 1)); }) == ErrorKind::NegativeCurvature);
}

TEST_CASE("domain errors") {
  CHECK(kind_of([] { point_pair(1, 4.0); }) == ErrorKind::OutOfInterval);
  CHECK(kind_of([] { point_pair(0, -1.0); }) == ErrorKind::OutOfInterval);
  CHECK(kind_of([] { surface_centre(0); }) == ErrorKind::SingularArgument);
  CHECK(Curvature{0.25}.max_separation() == doctest::Approx(2 * pi));
  CHECK(std::isinf(Curvature{-1}.max_separation()));
}
