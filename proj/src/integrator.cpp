#include "curved2body/error.hpp"
#include "curved2body/reduced_system.hpp"

#include <boost/numeric/odeint.hpp>

#include <array>
#include <cmath>
#include <sstream>

namespace curved2body {
namespace {

namespace odeint = boost::numeric::odeint;

constexpr std::size_t kReduced = 5;
constexpr std::size_t kAugmented = kReduced + 16;

template <std::size_t N>
using State = std::array<double, N>;

template <std::size_t N>
ReducedState reduced_of(const State<N>& x) {
  return {x[0], x[1], x[2], x[3], x[4]};
}

std::string where(double q, double t) {
  std::ostringstream os;
  os.precision(17);
  os << "q = " << q << " at t = " << t;
  return os.str();
}

// Advances x0 over [0, t_end] with dense output. Samples are either the
// given times (ascending, starting at 0) or every accepted step.
template <std::size_t N, class System, class Observer>
void drive(const ModelParams& params, System sys, const State<N>& x0, double t_end, double tol,
           const std::vector<double>& sample_times, double guard, Observer observe) {
  const double qmax = params.curvature().max_separation();
  auto check = [&](double t, const State<N>& x) {
    if (!std::isfinite(x[0]) || x[0] < guard || x[0] > qmax - guard)
      throw Error(ErrorKind::LeftDomain, where(x[0], t));
  };
  auto safe_sys = [&](const State<N>& x, State<N>& dxdt, double t) {
    if (!(x[0] > 0.0 && x[0] < qmax)) throw Error(ErrorKind::LeftDomain, where(x[0], t));
    sys(x, dxdt, t);
  };

  auto stepper = odeint::make_dense_output(tol, tol, odeint::runge_kutta_dopri5<State<N>>());
  const double dt0 = std::min(1e-3, 0.01 * t_end);
  stepper.initialize(x0, 0.0, dt0);
  observe(0.0, x0);

  std::size_t next = 1;
  State<N> x{};
  while (stepper.current_time() < t_end) {
    double t1 = 0.0;
    try {
      t1 = stepper.do_step(safe_sys).second;
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::OutOfInterval || e.kind() == ErrorKind::SingularArgument)
        throw Error(ErrorKind::LeftDomain, where(stepper.current_state()[0], stepper.current_time()));
      throw;
    } catch (const std::runtime_error& e) {
      throw Error(ErrorKind::StepFailure, e.what());
    }
    if (t1 >= t_end) {
      stepper.calc_state(t_end, x);
      check(t_end, x);
    } else {
      check(t1, stepper.current_state());
    }
    if (stepper.current_time_step() < 1e-14 * std::max(1.0, std::abs(t1))) {
      // a collapse caused by running into the boundary of I_kappa (collision
      // or antipodal singularity) is reported as leaving the domain
      const State<N>& xc = stepper.current_state();
      State<N> f{};
      sys(xc, f, t1);
      const double dist = std::min(xc[0], qmax - xc[0]);
      const double towards = xc[0] < 0.5 * qmax ? -f[0] : f[0];
      if (towards > 0.0 && dist < 1e3 * towards * stepper.current_time_step())
        throw Error(ErrorKind::LeftDomain, where(xc[0], t1));
      throw Error(ErrorKind::StepFailure, "step size collapsed at " + where(xc[0], t1) +
                                              " (q rate " + std::to_string(f[0]) + ")");
    }

    if (sample_times.empty()) {
      if (t1 >= t_end) {
        observe(t_end, x);
      } else {
        observe(t1, stepper.current_state());
      }
      continue;
    }
    while (next < sample_times.size() && sample_times[next] <= std::min(t1, t_end)) {
      stepper.calc_state(sample_times[next], x);
      observe(sample_times[next], x);
      ++next;
    }
  }
}

std::vector<double> uniform_times(double t_end, double dt) {
  std::vector<double> times;
  if (dt <= 0.0) return times;
  const auto n = static_cast<std::size_t>(std::floor(t_end / dt + 1e-9));
  for (std::size_t i = 0; i <= n; ++i) times.push_back(static_cast<double>(i) * dt);
  if (t_end - times.back() > 1e-12 * std::max(1.0, t_end)) times.push_back(t_end);
  return times;
}

}  // namespace

Trajectory integrate(const ModelParams& params, const ReducedState& s0, double t_end, double tol,
                     const IntegrateOptions& opts) {
  if (!(tol >= 1e-13 && tol <= 1e-5)) throw Error(ErrorKind::InvalidArgument, "tol must lie in [1e-13, 1e-5]");
  if (!(t_end > 0.0)) throw Error(ErrorKind::InvalidArgument, "t_end must be positive");
  require_in_interval(params.kappa, s0.q);

  auto sys = [&](const State<kReduced>& x, State<kReduced>& dxdt, double) {
    const Vec5 f = eom_rhs(params, reduced_of(x));
    for (std::size_t i = 0; i < kReduced; ++i) dxdt[i] = f[static_cast<Eigen::Index>(i)];
  };

  Trajectory traj;
  traj.tol = tol;
  const State<kReduced> x0{s0.q, s0.p, s0.m1, s0.m2, s0.m3};
  drive<kReduced>(params, sys, x0, t_end, tol, uniform_times(t_end, opts.sample_dt), opts.domain_guard,
                  [&](double t, const State<kReduced>& x) {
                    const ReducedState s = reduced_of(x);
                    traj.times.push_back(t);
                    traj.states.push_back(s);
                    traj.H.push_back(hamiltonian(params, s));
                    traj.C.push_back(casimir(params.kappa, s.m()));
                  });

  const double h0 = traj.H.front();
  const double c0 = traj.C.front();
  for (std::size_t i = 0; i < traj.H.size(); ++i) {
    traj.h_drift = std::max(traj.h_drift, std::abs(traj.H[i] - h0) / std::max(1.0, std::abs(h0)));
    traj.c_drift = std::max(traj.c_drift, std::abs(traj.C[i] - c0) / std::max(1.0, std::abs(c0)));
  }
  return traj;
}

Reconstruction reconstruct(const ModelParams& params, const Trajectory& traj, const GroupElement& g0, double tol) {
  if (traj.states.empty()) throw Error(ErrorKind::InvalidArgument, "empty trajectory");
  const double t_end = traj.times.back();

  auto sys = [&](const State<kAugmented>& x, State<kAugmented>& dxdt, double) {
    const ReducedState s = reduced_of(x);
    const Vec5 f = eom_rhs(params, s);
    const Vec4d v = body_velocity(params, s);
    const Mat4 xi = homogeneous(params.kappa, AlgebraElement{Vec3(v[1], v[2], v[3])});
    const Eigen::Map<const Mat4> g(x.data() + kReduced);
    const Mat4 gdot = g * xi;
    for (std::size_t i = 0; i < kReduced; ++i) dxdt[i] = f[static_cast<Eigen::Index>(i)];
    Eigen::Map<Mat4>(dxdt.data() + kReduced) = gdot;
  };

  // The reduced part is re-seeded from each sample so that g follows the
  // given trajectory even where it is unstable.
  Reconstruction rec;
  const EmbeddedPoint origin{};
  auto record = [&](double t, const Mat4& H, double q) {
    GroupElement g{H};
    rec.times.push_back(t);
    rec.g.push_back(g);
    rec.X1.push_back(EmbeddedPoint::from(g.linear() * origin.vec() + g.translation()));
    rec.X2.push_back(EmbeddedPoint::from(g.linear() * geodesic_gamma(params.kappa, q).vec() + g.translation()));
  };

  Mat4 H = g0.H;
  record(traj.times.front(), H, traj.states.front().q);
  if (t_end <= traj.times.front()) return rec;
  for (std::size_t i = 0; i + 1 < traj.times.size(); ++i) {
    const double dt = traj.times[i + 1] - traj.times[i];
    const ReducedState& s = traj.states[i];
    State<kAugmented> x0{s.q, s.p, s.m1, s.m2, s.m3};
    Eigen::Map<Mat4>(x0.data() + kReduced) = H;
    auto keep = [&](double t, const State<kAugmented>& x) {
      if (t == dt) H = Eigen::Map<const Mat4>(x.data() + kReduced);
    };
    drive<kAugmented>(params, sys, x0, dt, tol, {0.0, dt}, 1e-8, keep);
    H = project_to_group(params.kappa, GroupElement{H}).H;
    record(traj.times[i + 1], H, traj.states[i + 1].q);
  }
  return rec;
}

}  // namespace curved2body
