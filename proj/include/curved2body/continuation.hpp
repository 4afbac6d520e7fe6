#pragma once

// Parameter sweeps over kappa and q: continuation of RE families, detection
// of stability transitions and (kappa, q) stability rasters.

#include "curved2body/stability.hpp"

#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace curved2body {

/// Worker count: hardware concurrency capped by CURVED2BODY_THREADS.
unsigned scan_threads();

/// Runs body(i) for i in [0, n) on up to scan_threads() workers.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

struct FamilyRow {
  double kappa = 0.0;
  ReducedState state;
  REBranch branch = REBranch::Keplerian;
  std::array<std::complex<double>, 5> eigenvalues{};
  SpectralClass classification = SpectralClass::Mixed;
  double casimir = 0.0;
};

struct FamilyTable {
  LinearFamily family = LinearFamily::Attracting;
  double q = 0.0;
  double mu = 0.0;
  std::vector<FamilyRow> rows;

  /// Largest state distance between adjacent rows.
  double max_state_jump() const;
};

/// Continues the family through kappa in [kappa0, kappa1] at fixed (q, mu).
/// kappa = 0 is always a sample when the range straddles it. BranchLost on failure.
FamilyTable family_sweep(LinearFamily family, double q, double mu, double kappa0, double kappa1, int n);

enum class ABranch { Plus, Minus };

/// One-parameter sweep in q at fixed (kappa, mu, potential) along one A-branch.
struct QSweep {
  ModelParams params;
  ABranch branch = ABranch::Plus;
  std::vector<double> q;
  /// Empty optional where the branch has no RE.
  std::vector<std::optional<SpectralClass>> classification;
  std::vector<double> casimir;
};

QSweep q_sweep(const ModelParams& params, ABranch branch, double q0, double q1, int n);

enum class TransitionKind { StabilityLoss, Pitchfork, SaddleNode };
std::string_view to_string(TransitionKind k);

struct Transition {
  double parameter = 0.0;
  TransitionKind kind = TransitionKind::StabilityLoss;
};

/// Stability changes along kappa, refined by bisection to 1e-8.
std::vector<Transition> detect_transitions(const FamilyTable& table);
/// Stability changes, the equal-mass right-angle junction and Casimir minima along q.
std::vector<Transition> detect_transitions(const QSweep& sweep);

/// Whether the RE on the given A-branch at (params, q) is linearly unstable; nullopt without RE.
std::optional<bool> branch_unstable(const ModelParams& params, ABranch branch, double q);

enum class CellLabel { NoRE, Elliptic, Unstable, Boundary, Failed };
std::string_view to_string(CellLabel l);

/// Label of one raster cell; the raster is built from this alone.
CellLabel raster_cell_label(const PotentialFamily& potential, double mu, double kappa, double q);

struct CurvePoint {
  double kappa = 0.0;
  double q = 0.0;
};

struct RegionRaster {
  std::string potential;
  double mu = 0.0;
  std::vector<double> kappas;
  std::vector<double> qs;
  /// labels[i * qs.size() + j] at (kappas[i], qs[j]).
  std::vector<CellLabel> labels;
  std::vector<CurvePoint> q_star;
  std::vector<CurvePoint> q_dagger;
  std::vector<CurvePoint> right_angle;
  std::vector<CurvePoint> antipodal;

  CellLabel at(std::size_t i, std::size_t j) const { return labels[i * qs.size() + j]; }
};

/// Cell-by-cell classification over [kappa0, kappa1] x [q0, q1]; at most 512 x 512.
RegionRaster region_raster(const PotentialFamily& potential, double mu, double kappa0, double kappa1, double q0,
                           double q1, int n_kappa, int n_q);

}  // namespace curved2body
