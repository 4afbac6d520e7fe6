#include "curved2body/error.hpp"
#include "curved2body/reduced_system.hpp"

#include <cmath>

namespace curved2body {

PotentialFamily PotentialFamily::from_name(const std::string& name, double G) {
  if (name == "attracting-cot") return attracting_cot(G);
  if (name == "curvature-cot") return curvature_cot(G);
  if (name == "repelling-cot") return repelling_cot(G);
  throw Error(ErrorKind::InvalidArgument, "unknown potential '" + name + "'");
}

std::string PotentialFamily::name() const {
  switch (kind) {
    case PotentialKind::AttractingCot: return "attracting-cot";
    case PotentialKind::CurvatureCot: return "curvature-cot";
    case PotentialKind::RepellingCot: return "repelling-cot";
    case PotentialKind::Custom: return "custom";
  }
  return "custom";
}

double PotentialFamily::value(double kappa, double q) const {
  switch (kind) {
    case PotentialKind::AttractingCot: return -G * cot_kappa(kappa, q);
    case PotentialKind::CurvatureCot: return G * kappa * cot_kappa(kappa, q);
    case PotentialKind::RepellingCot: return G * cot_kappa(kappa, q);
    case PotentialKind::Custom:
      if (!custom_value) throw Error(ErrorKind::InvalidArgument, "custom potential has no value callback");
      return custom_value(kappa, q);
  }
  return 0.0;
}

double PotentialFamily::derivative(double kappa, double q) const {
  if (kind == PotentialKind::Custom) {
    if (!custom_derivative) throw Error(ErrorKind::InvalidArgument, "custom potential has no derivative callback");
    return custom_derivative(kappa, q);
  }
  const double S = sin_kappa(kappa, q);
  if (std::abs(S) < kSingularTol) throw Error(ErrorKind::SingularArgument, "sin_kappa vanishes in V'");
  const double inv = 1.0 / (S * S);
  switch (kind) {
    case PotentialKind::AttractingCot: return G * inv;
    case PotentialKind::CurvatureCot: return -G * kappa * inv;
    case PotentialKind::RepellingCot: return -G * inv;
    case PotentialKind::Custom: break;
  }
  return 0.0;
}

std::optional<double> PotentialFamily::derivative_over_kappa(double kappa, double q) const {
  if (kind != PotentialKind::CurvatureCot) return std::nullopt;
  const double S = sin_kappa(kappa, q);
  if (std::abs(S) < kSingularTol) throw Error(ErrorKind::SingularArgument, "sin_kappa vanishes in V'");
  return -G / (S * S);
}

}  // namespace curved2body
