#include <doctest.h>

#include "curved2body/error.hpp"
#include "curved2body/stability.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>

using namespace curved2body;
using std::numbers::pi;

namespace {

ModelParams model(double kappa, double mu, PotentialFamily v) { return {kappa, mu, 1.0, v}; }

RelEquilibrium sphere_re(double mu, double q) {
  return classify_re(model(1.0, mu, PotentialFamily::repelling_cot()), q).equilibria.at(0);
}

}  // namespace

TEST_CASE("printed linearizations") {
  const double q0 = 2.5;
  const double mu = 0.5;
  const Mat5 La = printed_L0(LinearFamily::Attracting, q0, mu);
  CHECK(La(1, 0) == doctest::Approx(-1.0 / (q0 * q0 * q0)));
  const Vec5 ker = (Vec5() << 2 * std::sqrt(q0 * (mu + 1)), 0, 0, 0, std::sqrt(mu)).finished();
  CHECK((La * ker).norm() < 1e-14);

  const Mat5 Lr = printed_L0(LinearFamily::AttractingRepelling, 1.1, 0.5);
  CHECK((Lr * Lr).norm() < 1e-15 * Lr.squaredNorm());
  Eigen::FullPivLU<Mat5> lu(Lr);
  CHECK(lu.rank() == 2);
}

TEST_CASE("numeric Jacobian matches the printed one at kappa = 0") {
  for (const auto& [q0, mu] : {std::pair{1.0, 1.0}, std::pair{2.5, 0.5}}) {
    const auto re = family_re(LinearFamily::Attracting, q0, mu, 0.0);
    CHECK(re.branch == REBranch::Keplerian);
    CHECK((jacobian_at(re) - printed_L0(LinearFamily::Attracting, q0, mu)).cwiseAbs().maxCoeff() < 1e-7);
  }
  const auto perp = family_re(LinearFamily::AttractingRepelling, 1.1, 0.5, 0.0);
  CHECK(perp.branch == REBranch::PerpendicularFlat);
  CHECK((jacobian_at(perp) - printed_L0(LinearFamily::AttractingRepelling, 1.1, 0.5)).cwiseAbs().maxCoeff() < 1e-7);
}

TEST_CASE("first-order correction of the attracting family") {
  const double q0 = 2.5;
  const double mu = 0.5;
  const double k = 1e-4;
  const Mat5 L = printed_L0(LinearFamily::Attracting, q0, mu) + k * printed_L1(q0, mu);
  const Mat5 J = jacobian_at(family_re(LinearFamily::Attracting, q0, mu, k));
  // remaining error is O(kappa^2)
  CHECK((J - L).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("the Casimir gradient is a left null vector") {
  for (const double k : {-0.3, 0.0, 0.2}) {
    const auto re = family_re(LinearFamily::AttractingRepelling, 1.1, 0.5, k);
    CHECK((jacobian_at(re).transpose() * casimir_gradient(k, re.state)).norm() < 1e-8);
  }
}

TEST_CASE("spectra") {
  SUBCASE("Kepler: a double imaginary pair") {
    for (const auto& [q0, mu] : {std::pair{1.0, 1.0}, std::pair{2.5, 0.5}}) {
      const auto sp = spectrum(jacobian_at(family_re(LinearFamily::Attracting, q0, mu, 0.0)));
      const double omega = std::sqrt((mu + 1) / (mu * q0 * q0 * q0));
      CHECK(sp.classification == SpectralClass::Elliptic);
      CHECK(sp.zero_count == 1);
      int on_pair = 0;
      for (const auto& l : sp.eigenvalues)
        if (std::abs(std::abs(l.imag()) - omega) < 1e-6 * omega) ++on_pair;
      CHECK(on_pair == 4);
    }
  }
  SUBCASE("perpendicular flat RE: nilpotent") {
    const auto sp = spectrum(jacobian_at(family_re(LinearFamily::AttractingRepelling, 1.1, 0.5, 0.0)));
    CHECK(sp.classification == SpectralClass::DegenerateNilpotent);
    for (const auto& l : sp.eigenvalues) CHECK(std::abs(l) < 1e-4);
  }
  SUBCASE("splitting at small curvature") {
    // one real and one imaginary pair whose sizes differ by sqrt(3)
    for (const double k : {1e-3, -1e-3}) {
      const auto sp = spectrum(jacobian_at(family_re(LinearFamily::AttractingRepelling, 1.1, 0.5, k)));
      CHECK(sp.classification == SpectralClass::LinearlyUnstable);
      double re_part = 0;
      double im_part = 0;
      for (const auto& l : sp.eigenvalues) {
        re_part = std::max(re_part, l.real());
        im_part = std::max(im_part, l.imag());
      }
      const double ratio = k > 0 ? im_part / re_part : re_part / im_part;
      CHECK(ratio == doctest::Approx(std::sqrt(3.0)).epsilon(1e-2));
    }
  }
  SUBCASE("an unstable diagonal") {
    Mat5 J = Mat5::Zero();
    J.diagonal() << 1.0, -1.0, 0.0, 0.0, 0.0;
    J(2, 3) = 2.0;
    J(3, 2) = -2.0;
    const auto sp = spectrum(J);
    CHECK(sp.classification == SpectralClass::LinearlyUnstable);
    CHECK(sp.eigenvalues[0].real() == doctest::Approx(1.0));
    CHECK(sp.zero_count == 1);
  }
}

TEST_CASE("characteristic polynomial") {
  const Mat5 J = jacobian_at(family_re(LinearFamily::AttractingRepelling, 1.1, 0.5, 0.05));
  const auto c = char_poly(J);
  // det(x I - J) at a few points, directly
  for (const double x : {-1.3, 0.2, 0.7, 2.0}) {
    const double det = (x * Mat5::Identity() - J).determinant();
    double p = 0;
    for (int k = 5; k >= 0; --k) p = p * x + c[k];
    CHECK(p == doctest::Approx(det).epsilon(1e-9));
  }
  CHECK(c[4] == doctest::Approx(-J.trace()));
  // det(x I - J) = x^5 + b x^3 + c x at an RE
  CHECK(std::abs(c[4]) < 1e-6);
  CHECK(std::abs(c[2]) < 1e-6);
  CHECK(std::abs(c[0]) < 1e-6);
}

TEST_CASE("Hessian signature on the leaf") {
  CHECK(hessian_on_leaf(sphere_re(0.75, 0.8)).str() == "+++-");
  CHECK(hessian_on_leaf(sphere_re(0.75, 1.5)).str() == "++--");
  CHECK(hessian_on_leaf(sphere_re(0.75, 2 * pi / 3)).str() == "++--");
  CHECK(hessian_on_leaf(sphere_re(1.0, 1.0)).str() == "+++-");
  CHECK(hessian_on_leaf(sphere_re(1.0, 2.2)).str() == "++--");
  const auto ra = right_angled_re(model(1.0, 1.0, PotentialFamily::repelling_cot()), 0.3);
  const LeafSignature sig = hessian_on_leaf(ra);
  CHECK(sig.str() == "++--");
  for (int i = 0; i < 3; ++i) CHECK(sig.eigenvalues_on_leaf[i] >= sig.eigenvalues_on_leaf[i + 1]);

  // the leaf through m = 0 is the (q, p) plane only
  const auto p = model(0.0, 0.5, PotentialFamily::curvature_cot());
  bool threw = false;
  try {
    hessian_on_leaf(make_re(p, {1.0, 0.0, 0.0, 0.0, 0.0}, REBranch::ZeroForce));
  } catch (const Error& e) {
    threw = e.kind() == ErrorKind::RankDeficientLeaf;
  }
  CHECK(threw);
}

TEST_CASE("asymptotic fits") {
  const std::vector<double> ks{1e-3, -1e-3, 1e-4, -1e-4};
  const auto rep = asymptotic_check(LinearFamily::AttractingRepelling, 1.1, 0.5, ks);
  bool saw_c = false;
  for (const auto& item : rep.items)
    if (item.name.find("c / kappa^2") != std::string::npos) {
      saw_c = true;
      CHECK(item.printed == doctest::Approx(-3 * 1.5 * 1.5 / (0.25 * std::pow(1.1, 6))));
      CHECK(item.pass);
    }
  CHECK(saw_c);

  const auto att = asymptotic_check(LinearFamily::Attracting, 2.5, 0.5, ks);
  CHECK_FALSE(att.items.empty());
  for (const auto& item : att.items) CHECK(std::isfinite(item.measured));
}
