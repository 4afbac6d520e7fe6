#include <doctest.h>

#include "curved2body/error.hpp"
#include "curved2body/symmetry.hpp"

#include <cmath>
#include <random>

using namespace curved2body;

namespace {

// truncated exponential series, independent of the library's Pade exp
Mat4 exp_series(const Mat4& A) {
  Mat4 sum = Mat4::Identity();
  Mat4 term = Mat4::Identity();
  for (int k = 1; k < 60; ++k) {
    term = term * A / k;
    sum += term;
  }
  return sum;
}

EmbeddedPoint random_surface_point(double k, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  // lift (x, y) to the lower sheet / lower hemisphere
  const double x = 0.5 * u(rng);
  const double y = 0.5 * u(rng);
  const double r2 = x * x + y * y;
  const double z = k == 0 ? 0.5 * r2 : (1.0 - std::sqrt(1.0 - k * r2)) / k;
  return {x, y, z};
}

}  // namespace

TEST_CASE("Lie algebra basis") {
  const Mat3 xi3 = basis_matrix(0.7, 3);
  Mat3 want;
  want << 0, -1, 0, 1, 0, 0, 0, 0, 0;
  for (const double k : {-1.0, 0.0, 0.7}) CHECK((basis_matrix(k, 3) - want).norm() == 0.0);
  CHECK(xi3 == want);

  const double k = -0.7;
  CHECK((commutator(basis_matrix(k, 1), basis_matrix(k, 2)) - k * basis_matrix(k, 3)).norm() < 1e-15);
  CHECK((commutator(basis_matrix(0, 2), basis_matrix(0, 3)) - basis_matrix(0, 1)).norm() < 1e-15);

  for (const double kk : {-1.3, 0.0, 0.4}) {
    const Mat3 K = MetricTensor(kk).matrix();
    const Mat3 xi = algebra_matrix(kk, {Vec3(0.3, -1.1, 2.0)});
    CHECK((xi.transpose() * K + K * xi).norm() < 1e-13);
  }
}

TEST_CASE("tau and the infinitesimal action") {
  CHECK(tau({Vec3(1, 0, 0)}) == Vec3(0, 1, 0));
  CHECK(tau({Vec3(0, 0, 5)}) == Vec3::Zero());
  const AlgebraElement w{Vec3(0.4, -0.9, 1.2)};
  CHECK(MetricTensor(0.3).norm_sq(tau(w)) == doctest::Approx(0.4 * 0.4 + 0.9 * 0.9));

  const EmbeddedPoint x{0.1, -0.2, 0.025};
  const Vec4 hx = homogeneous(0.0, w) * Vec4(x.x, x.y, x.z, 1.0);
  const Vec3 direct = algebra_matrix(0.0, w) * x.vec() + tau(w);
  CHECK((hx.head<3>() - direct).norm() < 1e-15);
  CHECK(hx[3] == 0.0);

  CHECK(infinitesimal_action(1.0, {Vec3(0, 0, 1)}, EmbeddedPoint{}).norm() == 0.0);

  std::mt19937_64 rng(11);
  for (int i = 0; i < 20; ++i) {
    const EmbeddedPoint p = random_surface_point(0.5, rng);
    const Vec3 v = infinitesimal_action(0.5, {Vec3(0.3, -1, 2)}, p);
    CHECK(std::abs(surface_normal(0.5, p).dot(v)) < 1e-13);
  }
}

TEST_CASE("exponential against the series") {
  for (const double k : {-0.4, 0.0, 0.9}) {
    const AlgebraElement w{Vec3(0.2, 0.9, -1.3)};
    const GroupElement g = exp_group(k, w, 2.0);
    CHECK((g.H - exp_series(2.0 * homogeneous(k, w))).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(group_residual(k, g) < 1e-10);
    CHECK(g.H.row(3) == Vec4(0, 0, 0, 1).transpose());
  }

  const GroupElement r = exp_group(0.3, {Vec3(0, 0, 0.8)}, 1.5);
  Mat4 want = Mat4::Identity();
  want.topLeftCorner<2, 2>() << std::cos(1.2), -std::sin(1.2), std::sin(1.2), std::cos(1.2);
  CHECK((r.H - want).norm() < 1e-14);
}

TEST_CASE("flat translations trace straight lines") {
  const AlgebraElement w{Vec3(1, 0, 0)};
  std::vector<Eigen::Vector2d> pts;
  for (double t = 0; t <= 3.0; t += 0.5) {
    const EmbeddedPoint p = act(0.0, exp_group(0.0, w, t), EmbeddedPoint{});
    pts.emplace_back(p.x, p.y);
  }
  const Eigen::Vector2d d = (pts.back() - pts.front()) / 3.0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    CHECK((pts[i] - (pts.front() + 0.5 * static_cast<double>(i) * d)).norm() < 1e-13);
}

TEST_CASE("affine action") {
  const EmbeddedPoint on{0.3, 0.1, 0.05};
  CHECK((act(0.0, GroupElement::identity(), on).vec() - on.vec()).norm() == 0.0);

  for (const double k : {-0.5, 0.2}) {
    const GroupElement g = exp_group(k, {Vec3(0.5, -0.3, 0.7)}, 1.0);
    CHECK((g.translation() - (Mat3::Identity() - g.linear()) * Vec3::UnitZ() / k).norm() < 1e-12);
    CHECK((affine_translation(k, g.linear()) - g.translation()).norm() < 1e-12);
  }
  const GroupElement g0 = exp_group(0.0, {Vec3(0.5, -0.3, 0.7)}, 1.0);
  CHECK((affine_translation(0.0, g0.linear()) - g0.translation()).norm() < 1e-12);

  std::mt19937_64 rng(5);
  const GroupElement g = exp_group(0.2, {Vec3(0.5, -0.3, 0.7)}, 1.3);
  for (int i = 0; i < 10; ++i) {
    const EmbeddedPoint a = random_surface_point(0.2, rng);
    const EmbeddedPoint b = random_surface_point(0.2, rng);
    CHECK(geodesic_distance(0.2, act(0.2, g, a), act(0.2, g, b)) ==
          doctest::Approx(geodesic_distance(0.2, a, b)).epsilon(1e-11));
  }

  bool threw = false;
  try {
    act(1.0, g, {0, 0, 1});
  } catch (const Error& e) {
    threw = e.kind() == ErrorKind::NotOnSurface;
  }
  CHECK(threw);
}

TEST_CASE("composition and projection back onto the group") {
  for (const double k : {-0.6, 0.0, 0.8}) {
    const GroupElement a = exp_group(k, {Vec3(0.1, 0.4, -0.2)}, 1.0);
    const GroupElement b = exp_group(k, {Vec3(-0.3, 0.2, 0.9)}, 0.7);
    CHECK(group_residual(k, a * b) < 1e-12);

    GroupElement noisy = a * b;
    noisy.H.topLeftCorner<3, 3>() += 1e-7 * Mat3::Random();
    if (k == 0.0) noisy.H.block<2, 1>(0, 2).setZero();
    CHECK(group_residual(k, noisy) > 1e-9);
    const GroupElement fixed = project_to_group(k, noisy);
    CHECK(group_residual(k, fixed) < 1e-14);
    CHECK((fixed.H - (a * b).H).cwiseAbs().maxCoeff() < 1e-6);
  }
}
