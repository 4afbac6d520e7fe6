#include "curved2body/continuation.hpp"

#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

namespace curved2body {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kBisectTol = 1e-10;

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(static_cast<std::size_t>(n));
  if (n == 1) {
    v[0] = a;
    return v;
  }
  for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = a + (b - a) * i / (n - 1);
  return v;
}

PotentialFamily family_potential(LinearFamily f) {
  return f == LinearFamily::Attracting ? PotentialFamily::attracting_cot() : PotentialFamily::curvature_cot();
}

bool starts_family(LinearFamily f, REBranch b) {
  if (f == LinearFamily::Attracting)
    return b == REBranch::Elliptic || b == REBranch::Keplerian || b == REBranch::AcuteAttracting ||
           b == REBranch::IsoscelesAcute;
  return b == REBranch::Hyperbolic || b == REBranch::PerpendicularFlat || b == REBranch::AcuteRepelling ||
         b == REBranch::IsoscelesAcute;
}

struct Candidate {
  RelEquilibrium re;
  SpectrumReport spectrum;
};

bool unstable(SpectralClass c) { return c == SpectralClass::LinearlyUnstable; }

template <class Pred>
double bisect_change(double a, double b, Pred unstable_at) {
  const bool ua = unstable_at(a);
  while (b - a > kBisectTol) {
    const double m = 0.5 * (a + b);
    (unstable_at(m) == ua ? a : b) = m;
  }
  return 0.5 * (a + b);
}

std::optional<RelEquilibrium> branch_re(const ModelParams& params, ABranch branch, double q) {
  try {
    const double A = branch == ABranch::Plus ? a_plus(q, params.kappa, params) : a_minus(q, params.kappa, params);
    if (!(A > 0.0)) return std::nullopt;
    const ReducedState s = refine_re(params, re_seed(params, q, A));
    return make_re(params, s, REBranch::ZeroForce);
  } catch (const Error&) {
    return std::nullopt;
  }
}

}  // namespace

unsigned scan_threads() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("CURVED2BODY_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && cap > 0) n = std::min(n, static_cast<unsigned>(cap));
  }
  return n;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(scan_threads(), n));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          body(i);
        } catch (...) {
          const std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

double FamilyTable::max_state_jump() const {
  double jump = 0.0;
  for (std::size_t i = 1; i < rows.size(); ++i)
    jump = std::max(jump, (rows[i].state.vec() - rows[i - 1].state.vec()).norm());
  return jump;
}

FamilyTable family_sweep(LinearFamily family, double q, double mu, double kappa0, double kappa1, int n) {
  if (n < 3) throw Error(ErrorKind::InvalidArgument, "family_sweep needs n >= 3");
  if (!(q > 0.0) || !(kappa0 < kappa1)) throw Error(ErrorKind::InvalidArgument, "need q > 0 and kappa0 < kappa1");
  const double kmax = std::pow(kPi / (2.0 * q), 2);
  if (!(kappa1 < kmax)) {
    std::ostringstream os;
    os << "kappa range must stay below (pi/2q)^2 = " << kmax;
    throw Error(ErrorKind::InvalidArgument, os.str());
  }

  std::vector<double> kappas = linspace(kappa0, kappa1, n);
  if (kappa0 < 0.0 && kappa1 > 0.0 && std::find(kappas.begin(), kappas.end(), 0.0) == kappas.end()) {
    kappas.push_back(0.0);
    std::sort(kappas.begin(), kappas.end());
  }

  std::vector<std::vector<Candidate>> candidates(kappas.size());
  std::vector<std::string> failures(kappas.size());
  parallel_for(kappas.size(), [&](std::size_t i) {
    const ModelParams params{kappas[i], mu, 1.0, family_potential(family)};
    try {
      for (const auto& re : classify_re(params, q).equilibria)
        candidates[i].push_back({re, spectrum(jacobian_at(re))});
    } catch (const Error& e) {
      failures[i] = e.what();
    }
  });

  FamilyTable table{family, q, mu, {}};
  const Candidate* prev = nullptr;
  for (std::size_t i = 0; i < kappas.size(); ++i) {
    const Candidate* pick = nullptr;
    double best = std::numeric_limits<double>::infinity();
    for (const auto& c : candidates[i]) {
      const double d = prev ? (c.re.state.vec() - prev->re.state.vec()).norm() : 0.0;
      if (!prev && !starts_family(family, c.re.branch)) continue;
      if (d < best) {
        best = d;
        pick = &c;
      }
    }
    if (!pick) {
      std::ostringstream os;
      os.precision(17);
      os << "no continuing RE at kappa = " << kappas[i];
      if (!failures[i].empty()) os << " (" << failures[i] << ")";
      throw Error(ErrorKind::BranchLost, os.str());
    }
    table.rows.push_back({kappas[i], pick->re.state, pick->re.branch, pick->spectrum.eigenvalues,
                          pick->spectrum.classification, casimir(kappas[i], pick->re.state.m())});
    prev = pick;
  }
  return table;
}

QSweep q_sweep(const ModelParams& params, ABranch branch, double q0, double q1, int n) {
  if (n < 2 || !(q0 < q1)) throw Error(ErrorKind::InvalidArgument, "q_sweep needs n >= 2 and q0 < q1");
  QSweep sw{params, branch, linspace(q0, q1, n), {}, {}};
  sw.classification.resize(sw.q.size());
  sw.casimir.assign(sw.q.size(), std::numeric_limits<double>::quiet_NaN());
  parallel_for(sw.q.size(), [&](std::size_t i) {
    if (!params.curvature().admits(sw.q[i])) return;
    const auto re = branch_re(params, branch, sw.q[i]);
    if (!re) return;
    sw.classification[i] = spectrum(jacobian_at(*re)).classification;
    sw.casimir[i] = casimir(params.kappa, re->state.m());
  });
  return sw;
}

std::optional<bool> branch_unstable(const ModelParams& params, ABranch branch, double q) {
  const auto re = branch_re(params, branch, q);
  if (!re) return std::nullopt;
  return unstable(spectrum(jacobian_at(*re)).classification);
}

std::string_view to_string(TransitionKind k) {
  switch (k) {
    case TransitionKind::StabilityLoss: return "StabilityLoss";
    case TransitionKind::Pitchfork: return "Pitchfork";
    case TransitionKind::SaddleNode: return "SaddleNode";
  }
  return "StabilityLoss";
}

std::vector<Transition> detect_transitions(const FamilyTable& table) {
  std::vector<Transition> out;
  for (std::size_t i = 1; i < table.rows.size(); ++i) {
    const auto a = table.rows[i - 1].classification;
    const auto b = table.rows[i].classification;
    const bool change = (a == SpectralClass::Elliptic && b == SpectralClass::LinearlyUnstable) ||
                        (a == SpectralClass::LinearlyUnstable && b == SpectralClass::Elliptic);
    if (!change) continue;
    const double k = bisect_change(table.rows[i - 1].kappa, table.rows[i].kappa, [&](double kappa) {
      return unstable(spectrum(jacobian_at(family_re(table.family, table.q, table.mu, kappa))).classification);
    });
    out.push_back({k, TransitionKind::StabilityLoss});
  }
  return out;
}

std::vector<Transition> detect_transitions(const QSweep& sw) {
  std::vector<Transition> out;
  const ModelParams& params = sw.params;
  for (std::size_t i = 1; i < sw.q.size(); ++i) {
    const auto& a = sw.classification[i - 1];
    const auto& b = sw.classification[i];
    if (!a || !b || unstable(*a) == unstable(*b)) continue;
    const double q = bisect_change(sw.q[i - 1], sw.q[i], [&](double x) {
      return branch_unstable(params, sw.branch, x).value_or(false);
    });
    out.push_back({q, TransitionKind::StabilityLoss});
  }

  if (params.kappa > 0.0 && std::abs(params.mu() - 1.0) < 1e-12 && sw.q.size() >= 2) {
    const double q_right = 0.5 * kPi / std::sqrt(params.kappa);
    const double h = sw.q[1] - sw.q[0];
    if (q_right >= sw.q.front() && q_right <= sw.q.back() + h) out.push_back({q_right, TransitionKind::Pitchfork});
  }

  for (std::size_t i = 1; i + 1 < sw.q.size(); ++i) {
    const double c = sw.casimir[i];
    if (!(c < sw.casimir[i - 1]) || !(c < sw.casimir[i + 1])) continue;
    auto C_of = [&](double x) {
      const auto re = branch_re(params, sw.branch, x);
      return re ? casimir(params.kappa, re->state.m()) : std::numeric_limits<double>::infinity();
    };
    const auto [qmin, cmin] = boost::math::tools::brent_find_minima(C_of, sw.q[i - 1], sw.q[i + 1], 52);
    (void)cmin;
    out.push_back({qmin, TransitionKind::SaddleNode});
  }
  std::sort(out.begin(), out.end(), [](const Transition& x, const Transition& y) { return x.parameter < y.parameter; });
  return out;
}

std::string_view to_string(CellLabel l) {
  switch (l) {
    case CellLabel::NoRE: return "NoRE";
    case CellLabel::Elliptic: return "Elliptic";
    case CellLabel::Unstable: return "Unstable";
    case CellLabel::Boundary: return "Boundary";
    case CellLabel::Failed: return "Failed";
  }
  return "Failed";
}

CellLabel raster_cell_label(const PotentialFamily& potential, double mu, double kappa, double q) {
  const Curvature c{kappa};
  if (kappa > 0.0) {
    const double q_right = 0.5 * kPi / std::sqrt(kappa);
    if (std::abs(q - q_right) < 1e-6 || std::abs(q - 2.0 * q_right) < 1e-6) return CellLabel::Boundary;
  }
  if (!c.admits(q)) return CellLabel::NoRE;
  try {
    const ModelParams params{kappa, mu, 1.0, potential};
    const auto eq = classify_re(params, q).equilibria;
    if (eq.empty()) return CellLabel::NoRE;
    const RelEquilibrium* pick = &eq.front();
    if (eq.size() > 1) {
      // the branch continuing the flat family
      const REBranch want = potential.kind == PotentialKind::CurvatureCot ? REBranch::Hyperbolic : REBranch::Elliptic;
      for (const auto& re : eq)
        if (re.branch == want) pick = &re;
    }
    return spectrum(jacobian_at(*pick)).classification == SpectralClass::Elliptic ? CellLabel::Elliptic
                                                                                 : CellLabel::Unstable;
  } catch (const Error&) {
    return CellLabel::Failed;
  }
}

RegionRaster region_raster(const PotentialFamily& potential, double mu, double kappa0, double kappa1, double q0,
                           double q1, int n_kappa, int n_q) {
  if (n_kappa < 1 || n_q < 1 || n_kappa > 512 || n_q > 512)
    throw Error(ErrorKind::InvalidArgument, "raster resolution must lie in [1, 512] per axis");
  if (!(q0 > 0.0) || q1 < q0 || kappa1 < kappa0) throw Error(ErrorKind::InvalidArgument, "invalid raster ranges");

  RegionRaster r;
  r.potential = potential.name();
  r.mu = mu;
  r.kappas = linspace(kappa0, kappa1, n_kappa);
  r.qs = linspace(q0, q1, n_q);
  r.labels.assign(r.kappas.size() * r.qs.size(), CellLabel::Failed);
  parallel_for(r.labels.size(), [&](std::size_t idx) {
    const std::size_t i = idx / r.qs.size();
    const std::size_t j = idx % r.qs.size();
    r.labels[idx] = raster_cell_label(potential, mu, r.kappas[i], r.qs[j]);
  });

  const bool repelling_on_sphere =
      potential.kind == PotentialKind::RepellingCot || potential.kind == PotentialKind::CurvatureCot;
  for (const double k : r.kappas) {
    try {
      if (k < 0.0 && potential.kind == PotentialKind::AttractingCot) {
        if (const auto qs = critical_angles(mu, k, CriticalFamily::Attracting).q_star) r.q_star.push_back({k, *qs});
      }
      if (k > 0.0 && repelling_on_sphere) {
        if (const auto qd = critical_angles(mu, k, CriticalFamily::Repelling).q_dagger) r.q_dagger.push_back({k, *qd});
      }
    } catch (const Error&) {
      // no critical angle at this kappa
    }
    if (k > 0.0) {
      const double q_right = 0.5 * kPi / std::sqrt(k);
      if (q_right <= q1) r.right_angle.push_back({k, q_right});
      if (2.0 * q_right <= q1) r.antipodal.push_back({k, 2.0 * q_right});
    }
  }
  return r;
}

}  // namespace curved2body
