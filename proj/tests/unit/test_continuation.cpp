#include <doctest.h>

#include "curved2body/continuation.hpp"
#include "curved2body/error.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <numbers>

using namespace curved2body;
using std::numbers::pi;

namespace {

int count_kind(const std::vector<Transition>& ts, TransitionKind k) {
  int n = 0;
  for (const auto& t : ts) n += t.kind == k;
  return n;
}

const Transition* first_of(const std::vector<Transition>& ts, TransitionKind k) {
  for (const auto& t : ts)
    if (t.kind == k) return &t;
  return nullptr;
}

}  // namespace

TEST_CASE("parallel_for visits every index once") {
  std::vector<std::atomic<int>> hits(1000);
  parallel_for(hits.size(), [&](std::size_t i) { hits[i]++; });
  for (const auto& h : hits) CHECK(h.load() == 1);

  bool threw = false;
  try {
    parallel_for(50, [](std::size_t i) {
      if (i == 17) throw Error(ErrorKind::NoRoot, "boom");
    });
  } catch (const Error& e) {
    threw = e.kind() == ErrorKind::NoRoot;
  }
  CHECK(threw);

  setenv("CURVED2BODY_THREADS", "1", 1);
  CHECK(scan_threads() == 1);
  unsetenv("CURVED2BODY_THREADS");
  CHECK(scan_threads() >= 1);
}

TEST_CASE("attracting family through kappa = 0") {
  const FamilyTable t = family_sweep(LinearFamily::Attracting, 2.5, 0.5, -0.2, 0.2, 40);
  bool has_zero = false;
  for (const auto& r : t.rows) {
    if (r.kappa < 0) CHECK(r.branch == REBranch::Elliptic);
    if (r.kappa == 0) {
      has_zero = true;
      CHECK(r.branch == REBranch::Keplerian);
      CHECK(std::abs(r.casimir) < 1e-12);
    }
    if (r.kappa > 0) CHECK(r.branch == REBranch::AcuteAttracting);
    CHECK(r.classification == SpectralClass::Elliptic);
    if (r.kappa != 0) CHECK((r.casimir > 0) == (r.kappa > 0));
  }
  CHECK(has_zero);
  CHECK(t.max_state_jump() < 0.05);
  CHECK(detect_transitions(t).empty());
}

TEST_CASE("attracting-repelling family through kappa = 0") {
  const FamilyTable t = family_sweep(LinearFamily::AttractingRepelling, 1.1, 0.5, -0.2, 0.2, 41);
  for (const auto& r : t.rows) {
    if (r.kappa < 0) CHECK(r.branch == REBranch::Hyperbolic);
    if (r.kappa == 0) {
      CHECK(r.branch == REBranch::PerpendicularFlat);
      CHECK(r.classification == SpectralClass::DegenerateNilpotent);
    } else {
      CHECK(r.classification == SpectralClass::LinearlyUnstable);
    }
    if (r.kappa > 0) CHECK(r.branch == REBranch::AcuteRepelling);
    CHECK(r.casimir > 0);
  }
  CHECK(t.max_state_jump() < 0.05);
}

TEST_CASE("q-sweeps") {
  SUBCASE("repelling on the unit sphere: loss of stability at q-dagger") {
    const ModelParams p{1.0, 0.75, 1.0, PotentialFamily::repelling_cot()};
    const auto ts = detect_transitions(q_sweep(p, ABranch::Plus, 0.05, pi / 2, 48));
    CHECK(count_kind(ts, TransitionKind::StabilityLoss) == 1);
    const double qd = *critical_angles(0.75, 1.0, CriticalFamily::Repelling).q_dagger;
    CHECK(first_of(ts, TransitionKind::StabilityLoss)->parameter == doctest::Approx(qd).epsilon(1e-6));
    CHECK(count_kind(ts, TransitionKind::Pitchfork) == 0);
  }
  SUBCASE("attracting on the hyperbolic plane: loss of stability at q*") {
    const ModelParams p{-1.0, 0.5, 1.0, PotentialFamily::attracting_cot()};
    const QSweep sw = q_sweep(p, ABranch::Minus, 0.2, 3.0, 48);
    const auto ts = detect_transitions(sw);
    CHECK(count_kind(ts, TransitionKind::StabilityLoss) == 1);
    const double qs = *critical_angles(0.5, -1.0, CriticalFamily::Attracting).q_star;
    CHECK(first_of(ts, TransitionKind::StabilityLoss)->parameter == doctest::Approx(qs).epsilon(1e-6));
    CHECK(sw.classification.front() == SpectralClass::Elliptic);
    CHECK(sw.classification.back() == SpectralClass::LinearlyUnstable);
  }
  SUBCASE("equal masses: pitchfork at the right angle") {
    const ModelParams p{1.0, 1.0, 1.0, PotentialFamily::repelling_cot()};
    const auto ts = detect_transitions(q_sweep(p, ABranch::Plus, 0.5, 2.5, 40));
    REQUIRE(first_of(ts, TransitionKind::Pitchfork) != nullptr);
    CHECK(first_of(ts, TransitionKind::Pitchfork)->parameter == doctest::Approx(pi / 2).epsilon(1e-12));
  }
  SUBCASE("no RE on the branch") {
    const ModelParams p{-1.0, 0.5, 1.0, PotentialFamily::repelling_cot()};
    const QSweep sw = q_sweep(p, ABranch::Plus, 0.5, 2.0, 8);
    for (const auto& c : sw.classification) CHECK_FALSE(c.has_value());
    CHECK(detect_transitions(sw).empty());
    CHECK_FALSE(branch_unstable(p, ABranch::Plus, 1.0).has_value());
  }
}

TEST_CASE("rasters") {
  SUBCASE("repelling potential has no RE on the hyperbolic side") {
    const auto r = region_raster(PotentialFamily::repelling_cot(), 0.5, -1.0, -0.1, 0.1, 3.0, 8, 12);
    for (const auto l : r.labels) CHECK(l == CellLabel::NoRE);
  }
  SUBCASE("attracting: unstable exactly beyond q* on the hyperbolic side") {
    const double mu = 0.5;
    const auto r = region_raster(PotentialFamily::attracting_cot(), mu, -1.0, 1.0, 0.1, 2.5, 9, 25);
    CHECK(r.q_star.size() == 4);
    for (std::size_t i = 0; i < r.kappas.size(); ++i) {
      const double k = r.kappas[i];
      for (std::size_t j = 0; j < r.qs.size(); ++j) {
        const CellLabel l = r.at(i, j);
        if (l == CellLabel::Boundary || l == CellLabel::NoRE) continue;
        if (k == 0 || (k > 0 && r.qs[j] * std::sqrt(k) < pi / 2)) {
          CHECK(l == CellLabel::Elliptic);
        } else if (k > 0) {
          // obtuse attracting RE are antipodal to acute repelling ones
          const double qd = *critical_angles(mu, k, CriticalFamily::Repelling).q_dagger;
          const double edge = pi / std::sqrt(k) - qd;
          if (std::abs(r.qs[j] - edge) > 1e-3) CHECK((l == CellLabel::Unstable) == (r.qs[j] > edge));
        } else {
          const double qs = *critical_angles(mu, k, CriticalFamily::Attracting).q_star;
          if (std::abs(r.qs[j] - qs) > 1e-3) CHECK((l == CellLabel::Unstable) == (r.qs[j] > qs));
        }
      }
    }
  }
  SUBCASE("curvature potential: unstable for kappa <= 0 and below q-dagger") {
    const double mu = 0.5;
    const auto r = region_raster(PotentialFamily::curvature_cot(), mu, -1.0, 1.0, 0.1, 1.5, 9, 15);
    for (std::size_t i = 0; i < r.kappas.size(); ++i) {
      const double k = r.kappas[i];
      for (std::size_t j = 0; j < r.qs.size(); ++j) {
        const double q = r.qs[j];
        const CellLabel l = r.at(i, j);
        if (k <= 0) {
          CHECK(l == CellLabel::Unstable);
        } else if (q * std::sqrt(k) < pi / 2 - 1e-3) {
          const double qd = *critical_angles(mu, k, CriticalFamily::Repelling).q_dagger;
          if (std::abs(q - qd) > 1e-3) CHECK((l == CellLabel::Unstable) == (q < qd));
        }
      }
    }
    CHECK(r.q_dagger.size() == 4);
    CHECK(r.right_angle.empty());

    const auto wide = region_raster(PotentialFamily::curvature_cot(), mu, 0.5, 1.0, 0.1, 5.0, 3, 4);
    REQUIRE(wide.right_angle.size() == 3);
    CHECK(wide.right_angle.back().q == doctest::Approx(pi / 2));
    CHECK(wide.antipodal.size() == 3);
  }
  SUBCASE("independent of the worker count") {
    setenv("CURVED2BODY_THREADS", "1", 1);
    const auto a = region_raster(PotentialFamily::attracting_cot(), 0.5, -1.0, 1.0, 0.1, 2.5, 7, 9);
    unsetenv("CURVED2BODY_THREADS");
    const auto b = region_raster(PotentialFamily::attracting_cot(), 0.5, -1.0, 1.0, 0.1, 2.5, 7, 9);
    CHECK(a.labels == b.labels);
  }
  SUBCASE("resolution limit") {
    bool threw = false;
    try {
      region_raster(PotentialFamily::attracting_cot(), 0.5, -1.0, 1.0, 0.1, 2.5, 513, 4);
    } catch (const Error& e) {
      threw = e.kind() == ErrorKind::InvalidArgument;
    }
    CHECK(threw);
  }
}
