#include "curved2body/stability.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>

namespace curved2body {
namespace {

// Richardson-extrapolated central difference of f along coordinate i.
template <class F>
auto richardson(F f, const Vec5& x, int i, double h) {
  auto central = [&](double step) {
    Vec5 xp = x;
    Vec5 xm = x;
    xp[i] += step;
    xm[i] -= step;
    return ((f(xp) - f(xm)) / (2.0 * step)).eval();
  };
  return ((4.0 * central(0.5 * h) - central(h)) / 3.0).eval();
}

double step_for(const ModelParams& params, const Vec5& x, int i) {
  double h = 1e-3 * std::max(std::abs(x[i]), 0.1);
  if (i == 0) h = std::min(h, 0.1 * params.curvature().boundary_distance(x[0]));
  return h;
}

}  // namespace

std::string_view to_string(SpectralClass c) {
  switch (c) {
    case SpectralClass::Elliptic: return "Elliptic";
    case SpectralClass::LinearlyUnstable: return "LinearlyUnstable";
    case SpectralClass::DegenerateNilpotent: return "DegenerateNilpotent";
    case SpectralClass::Mixed: return "Mixed";
  }
  return "Mixed";
}

std::string_view to_string(LinearFamily f) {
  return f == LinearFamily::Attracting ? "attracting" : "attracting-repelling";
}

Mat5 jacobian_at(const ModelParams& params, const ReducedState& s) {
  const Vec5 x = s.vec();
  auto f = [&](const Vec5& y) { return eom_rhs(params, ReducedState::from(y)); };
  Mat5 J;
  for (int i = 0; i < 5; ++i) J.col(i) = richardson(f, x, i, step_for(params, x, i));
  return J;
}

Mat5 jacobian_at(const RelEquilibrium& re) { return jacobian_at(re.params, re.state); }

Mat5 printed_L0(LinearFamily family, double q, double mu) {
  Mat5 L = Mat5::Zero();
  const double m1 = mu + 1.0;
  L(0, 1) = m1 / mu;
  L(0, 2) = -1.0 / mu;
  if (family == LinearFamily::Attracting) {
    L(1, 0) = -1.0 / std::pow(q, 3);
    L(1, 3) = -1.0 / (std::pow(q, 1.5) * std::sqrt(mu * m1));
    L(1, 4) = 2.0 * std::sqrt(m1) / (std::pow(q, 2.5) * std::sqrt(mu));
    L(2, 3) = std::sqrt(m1) / (std::pow(q, 1.5) * std::sqrt(mu));
    L(3, 2) = -std::sqrt(m1) / (std::pow(q, 1.5) * std::sqrt(mu));
    L(4, 2) = -1.0 / (std::sqrt(q) * std::sqrt(mu * m1));
    return L;
  }
  const double mu32 = std::pow(mu, 1.5);
  L(1, 0) = -m1 * m1 / (mu * mu * std::pow(q, 5));
  L(1, 3) = -std::sqrt(m1) / (mu32 * std::pow(q, 2.5));
  L(1, 4) = std::pow(m1, 1.5) / (mu32 * std::pow(q, 3.5));
  L(2, 0) = -std::pow(m1, 3) / (mu * mu * std::pow(q, 5));
  L(2, 3) = -std::pow(m1, 1.5) / (mu32 * std::pow(q, 2.5));
  L(2, 4) = std::pow(m1, 2.5) / (mu32 * std::pow(q, 3.5));
  L(4, 1) = std::pow(m1 / (mu * q), 1.5);
  L(4, 2) = -std::sqrt(m1) / std::pow(mu * q, 1.5);
  return L;
}

Mat5 printed_L1(double q, double mu) {
  Mat5 L = Mat5::Zero();
  const double m1 = mu + 1.0;
  const double smq = std::sqrt(mu * q);
  L(1, 0) = -mu * (mu + 2.0) / (q * m1 * m1);
  L(1, 3) = -smq * (mu + 2.0) / (2.0 * std::pow(m1, 2.5));
  L(1, 4) = std::sqrt(m1) / (3.0 * smq);
  L(2, 0) = 1.0 / (q * m1);
  L(2, 3) = smq * (mu - 2.0) / (2.0 * std::pow(m1, 1.5));
  L(2, 4) = 1.0 / std::sqrt(mu * m1 * q);
  L(3, 1) = -std::sqrt(q / (mu * m1));
  L(3, 2) = -std::sqrt(q / mu) * (mu * mu - 2.0 * mu - 2.0) / (2.0 * std::pow(m1, 1.5));
  L(4, 1) = -std::pow(q, 1.5) / (std::pow(m1, 1.5) * std::sqrt(mu));
  L(4, 2) = std::pow(q, 1.5) * (mu * mu + 2.0 * mu + 4.0) / (6.0 * std::sqrt(mu) * std::pow(m1, 2.5));
  return L;
}

namespace {

// Parlett-Reinsch diagonal balancing with powers of two.
Mat5 balanced(Mat5 A) {
  bool done = false;
  while (!done) {
    done = true;
    for (int i = 0; i < 5; ++i) {
      double c = 0.0;
      double r = 0.0;
      for (int j = 0; j < 5; ++j) {
        if (j == i) continue;
        c += std::abs(A(j, i));
        r += std::abs(A(i, j));
      }
      if (c == 0.0 || r == 0.0) continue;
      double f = 1.0;
      const double s = c + r;
      while (c < r / 2.0) {
        c *= 2.0;
        r /= 2.0;
        f *= 2.0;
      }
      while (c >= r * 2.0) {
        c /= 2.0;
        r *= 2.0;
        f /= 2.0;
      }
      if (c + r < 0.95 * s) {
        done = false;
        A.row(i) /= f;
        A.col(i) *= f;
      }
    }
  }
  return A;
}

}  // namespace

SpectrumReport spectrum(const Mat5& jacobian, const SpectrumTolerances& tol) {
  SpectrumReport r;
  r.jacobian = jacobian;
  r.tolerances = tol;
  const double norm = jacobian.norm();
  r.tol_re = tol.rel_re * norm;
  r.tol_zero = tol.rel_zero * norm;

  Eigen::EigenSolver<Mat5> es(jacobian, false);
  const auto ev = es.eigenvalues();
  for (int i = 0; i < 5; ++i) r.eigenvalues[i] = ev[i];
  std::sort(r.eigenvalues.begin(), r.eigenvalues.end(), [](const auto& a, const auto& b) {
    if (a.real() != b.real()) return a.real() > b.real();
    return a.imag() > b.imag();
  });

  bool unstable = false;
  bool all_imaginary = true;
  for (const auto& l : r.eigenvalues) {
    if (std::abs(l) < r.tol_zero) {
      ++r.zero_count;
      continue;
    }
    if (l.real() > r.tol_re) unstable = true;
    if (std::abs(l.real()) >= r.tol_re) all_imaginary = false;
  }
  // On the balanced matrix, since the test is not similarity invariant. A
  // perturbed index-2 nilpotent has eigenvalues of order sqrt(eps) |B|.
  const Mat5 B = balanced(jacobian);
  const double bnorm = B.norm();
  double largest = 0.0;
  for (const auto& l : r.eigenvalues) largest = std::max(largest, std::abs(l));
  const bool nilpotent = (B * B).norm() < tol.rel_nilpotent * bnorm * bnorm &&
                         largest < std::sqrt(tol.rel_nilpotent) * bnorm;
  if (r.zero_count == 5 || norm == 0.0 || nilpotent) {
    r.classification = SpectralClass::DegenerateNilpotent;
  } else if (unstable) {
    r.classification = SpectralClass::LinearlyUnstable;
  } else if (all_imaginary) {
    r.classification = SpectralClass::Elliptic;
  } else {
    r.classification = SpectralClass::Mixed;
  }
  return r;
}

std::array<double, 6> char_poly(const Mat5& J) {
  // Faddeev-LeVerrier
  std::array<double, 6> c{};
  c[5] = 1.0;
  Mat5 M = Mat5::Zero();
  for (int k = 1; k <= 5; ++k) {
    M = J * M + c[6 - k] * Mat5::Identity();
    c[5 - k] = -(J * M).trace() / k;
  }
  return c;
}

LeafSignature hessian_on_leaf(const RelEquilibrium& re) {
  const ModelParams& params = re.params;
  const ReducedState& s = re.state;
  const Mat5 P = poisson_tensor(params.kappa, s);
  Eigen::JacobiSVD<Mat5> svd(P, Eigen::ComputeFullU);
  const auto sv = svd.singularValues();
  const double threshold = 1e-10 * sv[0];
  int rank = 0;
  for (int i = 0; i < 5; ++i)
    if (sv[i] > threshold) ++rank;
  if (rank < 4) throw Error(ErrorKind::RankDeficientLeaf, "Poisson tensor has rank " + std::to_string(rank));
  const Eigen::Matrix<double, 5, 4> B = svd.matrixU().leftCols<4>();

  const Vec5 gH = hamiltonian_gradient(params, s);
  const Vec5 gC = casimir_gradient(params.kappa, s);
  const double lambda = gC.squaredNorm() > 0.0 ? gH.dot(gC) / gC.squaredNorm() : 0.0;

  const Vec5 x = s.vec();
  auto grad = [&](const Vec5& y) { return hamiltonian_gradient(params, ReducedState::from(y)); };
  Mat5 Hess;
  for (int i = 0; i < 5; ++i) Hess.col(i) = richardson(grad, x, i, step_for(params, x, i));
  Hess = 0.5 * (Hess + Hess.transpose()).eval();
  Hess(2, 2) -= 2.0 * lambda;
  Hess(3, 3) -= 2.0 * lambda;
  Hess(4, 4) -= 2.0 * lambda * params.kappa;

  const Eigen::Matrix4d leaf = B.transpose() * Hess * B;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(leaf);
  LeafSignature sig;
  for (int i = 0; i < 4; ++i) sig.eigenvalues_on_leaf[i] = es.eigenvalues()[3 - i];
  for (int i = 0; i < 4; ++i) sig.signs[i] = sig.eigenvalues_on_leaf[i] > 0.0 ? '+' : '-';
  return sig;
}

RelEquilibrium family_re(LinearFamily family, double q0, double mu, double kappa) {
  ModelParams params{kappa, mu, 1.0,
                     family == LinearFamily::Attracting ? PotentialFamily::attracting_cot()
                                                        : PotentialFamily::curvature_cot()};
  REBranch branch;
  double A;
  if (family == LinearFamily::Attracting) {
    A = a_minus(q0, kappa, params);
    branch = kappa < 0.0 ? REBranch::Elliptic : kappa == 0.0 ? REBranch::Keplerian : REBranch::AcuteAttracting;
  } else {
    A = a_plus(q0, kappa, params);
    branch = kappa < 0.0 ? REBranch::Hyperbolic
                         : kappa == 0.0 ? REBranch::PerpendicularFlat : REBranch::AcuteRepelling;
  }
  if (kappa > 0.0 && std::abs(mu - 1.0) < 1e-12)
    branch = cos_kappa(kappa, q0) > 0.0 ? REBranch::IsoscelesAcute : REBranch::IsoscelesObtuse;
  if (!(A > 0.0)) throw Error(ErrorKind::WrongBranch, "family branch has m3^2 <= 0 at this kappa");
  return make_re(params, refine_re(params, re_seed(params, q0, A)), branch);
}

bool AsymptoticReport::all_pass() const {
  return std::all_of(items.begin(), items.end(), [](const AsymptoticItem& i) { return i.pass; });
}

AsymptoticReport asymptotic_check(LinearFamily family, double q0, double mu, const std::vector<double>& kappas) {
  AsymptoticReport rep{family, q0, mu, {}};
  constexpr double kTol = 0.01;
  auto item = [&](std::string name, double measured, double printed, double ref) {
    const double err = std::abs(measured - printed) / std::abs(ref);
    rep.items.push_back({std::move(name), measured, printed, err, err < kTol});
  };
  const double m1 = mu + 1.0;

  if (family == LinearFamily::Attracting) {
    const double w0 = std::sqrt(m1 / (mu * std::pow(q0, 3)));
    const double printed_fast = std::sqrt(q0 / (std::pow(m1, 3) * mu)) * (1.0 + mu * mu);
    const double printed_b1 = 2.0 * (mu * mu + 1.0) / (m1 * mu * q0);
    // least-squares slopes through the origin; symmetric samples cancel O(kappa^2)
    double kk = 0.0, slow = 0.0, fast = 0.0, b1 = 0.0;
    for (const double k : kappas) {
      const SpectrumReport sp = spectrum(jacobian_at(family_re(family, q0, mu, k)));
      std::vector<double> w;
      for (const auto& l : sp.eigenvalues)
        if (l.imag() > sp.tol_zero) w.push_back(l.imag());
      if (w.size() != 2) throw Error(ErrorKind::WrongBranch, "expected two imaginary pairs");
      std::sort(w.begin(), w.end(), [&](double a, double b) { return std::abs(a - w0) < std::abs(b - w0); });
      const auto c = char_poly(sp.jacobian);
      // det(xI - L) = x (x^2 + w_a^2)(x^2 + w_b^2); x^3 coefficient is w_a^2 + w_b^2
      kk += k * k;
      slow += k * (w[0] - w0);
      fast += k * (w[1] - w0);
      b1 += k * (c[3] - 2.0 * w0 * w0);
    }
    item("slow pair slope", slow / kk, 0.0, printed_fast);
    item("fast pair slope", fast / kk, printed_fast, printed_fast);
    item("x^2-coefficient slope (sum of pairs)", b1 / kk, printed_b1, printed_b1);
    return rep;
  }

  const double printed_B0 = std::sqrt(2.0 * m1 / (mu * std::pow(q0, 3)));
  const double printed_b = 2.0 * m1 / (mu * std::pow(q0, 3));
  const double printed_c = -3.0 * m1 * m1 / (mu * mu * std::pow(q0, 6));
  double B_sqrt = 0.0, B_sqrt3 = 0.0, b = 0.0, c2 = 0.0;
  for (const double k : kappas) {
    const SpectrumReport sp = spectrum(jacobian_at(family_re(family, q0, mu, k)));
    double real_mag = 0.0, imag_mag = 0.0;
    for (const auto& l : sp.eigenvalues) {
      real_mag = std::max(real_mag, std::abs(l.real()));
      imag_mag = std::max(imag_mag, std::abs(l.imag()));
    }
    // kappa > 0: +-B0 sqrt(kappa) real, +-B0 sqrt(-3 kappa) imaginary; swapped for kappa < 0
    const double pair1 = k > 0.0 ? real_mag : imag_mag;
    const double pair3 = k > 0.0 ? imag_mag : real_mag;
    B_sqrt += pair1 / std::sqrt(std::abs(k));
    B_sqrt3 += pair3 / std::sqrt(3.0 * std::abs(k));
    const auto c = char_poly(sp.jacobian);
    b += c[3] / k;
    c2 += c[1] / (k * k);
  }
  const double n = static_cast<double>(kappas.size());
  item("B0 from +-B0 sqrt(kappa) pair", B_sqrt / n, printed_B0, printed_B0);
  item("B0 from +-B0 sqrt(-3 kappa) pair", B_sqrt3 / n, printed_B0, printed_B0);
  item("b / kappa", b / n, printed_b, printed_b);
  item("c / kappa^2", c2 / n, printed_c, printed_c);
  return rep;
}

}  // namespace curved2body
