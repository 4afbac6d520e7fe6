#pragma once

// Linear stability of relative equilibria: Jacobians of the reduced flow,
// eigenvalue classification, Hessian signature on the symplectic leaf and
// the small-curvature asymptotics of the two families.

#include "curved2body/equilibria.hpp"

#include <array>
#include <complex>
#include <string>
#include <string_view>
#include <vector>

namespace curved2body {

enum class SpectralClass { Elliptic, LinearlyUnstable, DegenerateNilpotent, Mixed };
std::string_view to_string(SpectralClass c);

/// Classification thresholds, relative to the Frobenius norm of the Jacobian.
struct SpectrumTolerances {
  double rel_re = 1e-6;
  double rel_zero = 1e-7;
  /// |J^2| below rel_nilpotent |J|^2 marks a nilpotent Jacobian, whose
  /// eigenvalues are only resolved to about sqrt(eps).
  double rel_nilpotent = 1e-6;
};

struct SpectrumReport {
  Mat5 jacobian = Mat5::Zero();
  /// Sorted by real part, then imaginary part, both descending.
  std::array<std::complex<double>, 5> eigenvalues{};
  int zero_count = 0;
  SpectralClass classification = SpectralClass::Mixed;
  SpectrumTolerances tolerances;
  double tol_re = 0.0;
  double tol_zero = 0.0;
};

/// Central differences of eom_rhs with one Richardson extrapolation.
Mat5 jacobian_at(const ModelParams& params, const ReducedState& s);
Mat5 jacobian_at(const RelEquilibrium& re);

enum class LinearFamily { Attracting, AttractingRepelling };
std::string_view to_string(LinearFamily f);

/// Leading term of the linearization at kappa = 0 (G = 1, mu2 = 1).
Mat5 printed_L0(LinearFamily family, double q0, double mu);
/// First-order correction in kappa for the attracting family.
Mat5 printed_L1(double q0, double mu);

SpectrumReport spectrum(const Mat5& jacobian, const SpectrumTolerances& tol = {});

/// Coefficients c[k] of x^k in det(x I - J), c[5] = 1.
std::array<double, 6> char_poly(const Mat5& J);

struct LeafSignature {
  /// '+' entries first.
  std::array<char, 4> signs{};
  /// Descending.
  std::array<double, 4> eigenvalues_on_leaf{};

  std::string str() const { return std::string(signs.begin(), signs.end()); }
};

/// Hessian of H - lambda C (with grad H = lambda grad C at the RE) projected
/// onto the image of the Poisson tensor. RankDeficientLeaf where rank P < 4.
LeafSignature hessian_on_leaf(const RelEquilibrium& re);

/// The RE continuing the kappa = 0 family at (q0, kappa): A- for the
/// attracting family, A+ for the attracting-repelling family (G = 1, mu2 = 1).
RelEquilibrium family_re(LinearFamily family, double q0, double mu, double kappa);

struct AsymptoticItem {
  std::string name;
  double measured = 0.0;
  double printed = 0.0;
  double rel_error = 0.0;
  bool pass = false;
};

struct AsymptoticReport {
  LinearFamily family = LinearFamily::Attracting;
  double q0 = 0.0;
  double mu = 0.0;
  std::vector<AsymptoticItem> items;

  bool all_pass() const;
};

/// Fits leading-order eigenvalue coefficients over the kappa samples and
/// compares them with the printed expansions at 1% relative tolerance.
AsymptoticReport asymptotic_check(LinearFamily family, double q0, double mu, const std::vector<double>& kappa_samples);

}  // namespace curved2body
