// curved2body: command-line front end.
//
// Exit codes: 0 success (possibly with an empty result), 1 verify found a
// failing criterion, 2 domain error, 64 usage error.

#include "curved2body/export.hpp"
#include "curved2body/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

using namespace curved2body;
using json = nlohmann::ordered_json;

namespace {

constexpr int kExitDomain = 2;
constexpr int kExitUsage = 64;

const char* kSchemas = R"(Output schemas:
  classify     JSON array of RE records
               {kappa, mu, q, branch, state:{q,p,m1,m2,m3}, residual, casimir, sphere_data?:{theta1,theta2,omega,zeta,alpha}}
  eigs         JSON array of {kappa, mu, q, branch, eigenvalues:[{re,im}], classification, leaf_signature?, note?}
  signature    JSON array of {branch, q, signature, eigenvalues_on_leaf}
  scan family  CSV kappa,q,p,m1,m2,m3,casimir,re1,im1,...,re5,im5,class
  scan raster  CSV kappa,q,label (label in NoRE, Elliptic, Unstable, Boundary, Failed)
               plus JSON sidecar {potential, mu, kappa_range, q_range, resolution, curves:{q_star,q_dagger,right_angle,antipodal}}
  scan q-sweep JSON array of {parameter, kind} (kind in StabilityLoss, Pitchfork, SaddleNode)
  integrate    CSV t,q,p,m1,m2,m3,H,C
  reconstruct  CSV t,x1,y1,z1,x2,y2,z2
  verify       text table "<id> PASS|FAIL <title>: <detail>"
The resolved configuration is echoed as one JSON line on stderr.
Floats in CSV carry 17 significant digits; files are UTF-8 with LF newlines.
Environment: CURVED2BODY_THREADS caps scan parallelism.)";

struct Model {
  double kappa = 0.0;
  double mu = 1.0;
  double G = 1.0;
  std::string potential = "attracting-cot";
};

void add_model(CLI::App* cmd, Model& m) {
  cmd->add_option("--kappa", m.kappa, "Gaussian curvature")->required();
  cmd->add_option("--mu", m.mu, "mass ratio mu1/mu2 (mu2 = 1)")->capture_default_str()->check(CLI::PositiveNumber);
  cmd->add_option("--G", m.G, "coupling")->capture_default_str()->check(CLI::PositiveNumber);
  cmd->add_option("--potential", m.potential, "attracting-cot | curvature-cot | repelling-cot")
      ->capture_default_str()
      ->check(CLI::IsMember({"attracting-cot", "curvature-cot", "repelling-cot"}));
}

ModelParams params_of(const Model& m) { return {m.kappa, m.mu, 1.0, PotentialFamily::from_name(m.potential, m.G)}; }

json model_json(const Model& m) {
  return {{"kappa", m.kappa}, {"mu", m.mu}, {"G", m.G}, {"potential", m.potential}};
}

std::pair<double, double> parse_range(const std::string& s) {
  const auto colon = s.find(':', 1);
  if (colon == std::string::npos) throw CLI::ValidationError("range", "expected a:b, got " + s);
  try {
    return {std::stod(s.substr(0, colon)), std::stod(s.substr(colon + 1))};
  } catch (const std::exception&) {
    throw CLI::ValidationError("range", "expected a:b, got " + s);
  }
}

// stdout unless a path is given
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw Error(ErrorKind::InvalidArgument, "cannot open " + path);
    }
  }
  std::ostream& get() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

 private:
  std::ofstream file_;
};

void echo(const json& config) { std::cerr << config.dump() << '\n'; }

ReducedState initial_state(const ModelParams& params, double q, int re_index, const std::vector<double>& u) {
  if (!u.empty()) return {q, u[0], u[1], u[2], u[3]};
  const auto c = classify_re(params, q);
  if (re_index < 0 || static_cast<std::size_t>(re_index) >= c.equilibria.size())
    throw Error(ErrorKind::InvalidArgument, "no RE with index " + std::to_string(re_index) + " at this q");
  return c.equilibria[static_cast<std::size_t>(re_index)].state;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-body problem on surfaces of constant curvature"};
  app.footer(kSchemas);
  app.require_subcommand(1);
  app.set_version_flag("--version", "curved2body 1.0.0");

  Model model;
  double q = 1.0;
  std::string out_path;

  auto* classify = app.add_subcommand("classify", "enumerate and certify relative equilibria");
  add_model(classify, model);
  classify->add_option("--q", q, "separation")->required();

  std::string family;
  bool leaf = false;
  auto* eigs = app.add_subcommand("eigs", "linearization spectrum at each RE");
  add_model(eigs, model);
  eigs->add_option("--q", q, "separation")->required();
  eigs->add_option("--family", family, "attracting | attracting-repelling (sets the potential)")
      ->check(CLI::IsMember({"attracting", "attracting-repelling"}));
  eigs->add_flag("--leaf", leaf, "also report the Hessian signature on the symplectic leaf");

  double theta = 0.0;
  auto* signature = app.add_subcommand("signature", "Hessian signature on the symplectic leaf");
  add_model(signature, model);
  signature->add_option("--q", q, "separation");
  signature->add_option("--theta", theta, "right-angled family member (kappa > 0, mu = 1)");

  std::string mode = "family";
  std::string kappa_range = "-0.2:0.2";
  std::string q_range = "0.05:3";
  std::string branch = "plus";
  std::string sidecar;
  int n = 41;
  int n_q = 64;
  auto* scan = app.add_subcommand("scan", "family sweeps, q-sweeps and stability rasters");
  scan->add_option("--mode", mode, "family | q-sweep | raster")
      ->capture_default_str()
      ->check(CLI::IsMember({"family", "q-sweep", "raster"}));
  scan->add_option("--family", family, "family mode: attracting | attracting-repelling")
      ->check(CLI::IsMember({"attracting", "attracting-repelling"}));
  scan->add_option("--q", q, "family mode: separation")->capture_default_str();
  scan->add_option("--mu", model.mu, "mass ratio")->capture_default_str()->check(CLI::PositiveNumber);
  scan->add_option("--kappa", model.kappa, "q-sweep mode: curvature")->capture_default_str();
  scan->add_option("--G", model.G, "coupling")->capture_default_str()->check(CLI::PositiveNumber);
  scan->add_option("--potential", model.potential, "q-sweep and raster modes")
      ->capture_default_str()
      ->check(CLI::IsMember({"attracting-cot", "curvature-cot", "repelling-cot"}));
  scan->add_option("--kappa-range", kappa_range, "a:b")->capture_default_str()->allow_extra_args(false);
  scan->add_option("--q-range", q_range, "a:b")->capture_default_str();
  scan->add_option("--n", n, "samples (kappa for family and raster, q for q-sweep)")->capture_default_str();
  scan->add_option("--n-q", n_q, "raster mode: q samples")->capture_default_str();
  scan->add_option("--branch", branch, "q-sweep mode: plus | minus")
      ->capture_default_str()
      ->check(CLI::IsMember({"plus", "minus"}));
  scan->add_option("--sidecar", sidecar, "raster mode: JSON sidecar path (default <out>.json)");

  double t_end = 10.0;
  double tol = 1e-10;
  double dt = 0.0;
  int re_index = 0;
  std::vector<double> u;
  auto* integ = app.add_subcommand("integrate", "integrate the reduced equations");
  auto* recon = app.add_subcommand("reconstruct", "integrate and lift to the two particle paths");
  for (auto* cmd : {integ, recon}) {
    add_model(cmd, model);
    cmd->add_option("--q", q, "initial separation")->required();
    cmd->add_option("--u", u, "initial p m1 m2 m3 (default: the RE selected by --re)")->expected(4);
    cmd->add_option("--re", re_index, "index into the classify output at --q")->capture_default_str();
    cmd->add_option("--t-end", t_end, "final time")->capture_default_str();
    cmd->add_option("--tol", tol, "integrator tolerance in [1e-13, 1e-5]")->capture_default_str();
    cmd->add_option("--dt", dt, "output spacing (0: every step)")->capture_default_str();
  }

  std::vector<int> only;
  auto* verify = app.add_subcommand("verify", "run acceptance criteria 1-11");
  verify->add_option("--only", only, "criterion ids");

  for (auto* cmd : {classify, eigs, signature, scan, integ, recon, verify})
    cmd->add_option("-o,--out", out_path, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*classify) {
      echo({{"command", "classify"}, {"model", model_json(model)}, {"q", q}, {"out", out_path}});
      const auto c = classify_re(params_of(model), q);
      json out = to_json(c);
      if (c.diagnostic) std::cerr << to_string(*c.diagnostic) << ": " << c.diagnostic_message << '\n';
      if (c.right_angled)
        std::cerr << "right-angled family " << to_string(c.right_angled->branch)
                  << " at q = " << format_double(c.right_angled->q) << " (use signature --theta)\n";
      Sink sink(out_path);
      sink.get() << out.dump(2) << '\n';
      return 0;
    }

    if (*eigs) {
      if (family == "attracting") model.potential = "attracting-cot";
      if (family == "attracting-repelling") model.potential = "curvature-cot";
      echo({{"command", "eigs"}, {"model", model_json(model)}, {"q", q}, {"leaf", leaf}, {"out", out_path}});
      const auto c = classify_re(params_of(model), q);
      json out = json::array();
      for (const auto& re : c.equilibria) {
        const SpectrumReport sp = spectrum(jacobian_at(re));
        std::optional<LeafSignature> sig;
        if (leaf) sig = hessian_on_leaf(re);
        json j = spectrum_json(re, sp, sig);
        if (sp.classification == SpectralClass::DegenerateNilpotent) {
          const Mat5& J = sp.jacobian;
          std::ostringstream os;
          os << "nilpotent linearization: |J^2|/|J|^2 = " << format_double((J * J).norm() / J.squaredNorm());
          j["note"] = os.str();
        }
        out.push_back(j);
      }
      Sink sink(out_path);
      sink.get() << out.dump(2) << '\n';
      return 0;
    }

    if (*signature) {
      echo({{"command", "signature"}, {"model", model_json(model)}, {"q", q}, {"theta", theta}, {"out", out_path}});
      const ModelParams params = params_of(model);
      std::vector<RelEquilibrium> res;
      if (theta > 0.0) {
        res.push_back(right_angled_re(params, theta));
      } else {
        res = classify_re(params, q).equilibria;
      }
      json out = json::array();
      for (const auto& re : res) {
        const LeafSignature sig = hessian_on_leaf(re);
        out.push_back({{"branch", to_string(re.branch)},
                       {"q", re.state.q},
                       {"signature", sig.str()},
                       {"eigenvalues_on_leaf", sig.eigenvalues_on_leaf}});
      }
      Sink sink(out_path);
      sink.get() << out.dump(2) << '\n';
      return 0;
    }

    if (*scan) {
      const auto [k0, k1] = parse_range(kappa_range);
      const auto [q0, q1] = parse_range(q_range);
      if (mode == "family") {
        if (family.empty()) throw CLI::ValidationError("--family", "required in family mode");
        echo({{"command", "scan"}, {"mode", mode}, {"family", family}, {"q", q}, {"mu", model.mu},
              {"kappa_range", {k0, k1}}, {"n", n}, {"out", out_path}});
        const auto f = family == "attracting" ? LinearFamily::Attracting : LinearFamily::AttractingRepelling;
        const FamilyTable table = family_sweep(f, q, model.mu, k0, k1, n);
        Sink sink(out_path);
        write_family_csv(sink.get(), table);
      } else if (mode == "q-sweep") {
        echo({{"command", "scan"}, {"mode", mode}, {"model", model_json(model)}, {"branch", branch},
              {"q_range", {q0, q1}}, {"n", n}, {"out", out_path}});
        const QSweep sw =
            q_sweep(params_of(model), branch == "plus" ? ABranch::Plus : ABranch::Minus, q0, q1, n);
        json out = json::array();
        for (const auto& t : detect_transitions(sw)) out.push_back({{"parameter", t.parameter}, {"kind", to_string(t.kind)}});
        Sink sink(out_path);
        sink.get() << out.dump(2) << '\n';
      } else {
        if (out_path.empty()) throw CLI::ValidationError("--out", "raster mode writes files; --out is required");
        if (sidecar.empty()) sidecar = out_path + ".json";
        echo({{"command", "scan"}, {"mode", mode}, {"model", model_json(model)}, {"kappa_range", {k0, k1}},
              {"q_range", {q0, q1}}, {"n", n}, {"n_q", n_q}, {"out", out_path}, {"sidecar", sidecar}});
        const RegionRaster r = region_raster(PotentialFamily::from_name(model.potential, model.G), model.mu, k0, k1,
                                             q0, q1, n, n_q);
        Sink sink(out_path);
        write_raster_csv(sink.get(), r);
        Sink side(sidecar);
        side.get() << raster_sidecar_json(r).dump(2) << '\n';
      }
      return 0;
    }

    if (*integ || *recon) {
      const bool lift = recon->parsed();
      echo({{"command", lift ? "reconstruct" : "integrate"}, {"model", model_json(model)}, {"q", q}, {"u", u},
            {"re", re_index}, {"t_end", t_end}, {"tol", tol}, {"dt", dt}, {"out", out_path}});
      const ModelParams params = params_of(model);
      const ReducedState s0 = initial_state(params, q, re_index, u);
      const Trajectory traj = integrate(params, s0, t_end, tol, {dt, 1e-8});
      Sink sink(out_path);
      if (lift) {
        write_reconstruction_csv(sink.get(), reconstruct(params, traj, GroupElement::identity(), std::min(tol, 1e-12)));
      } else {
        write_trajectory_csv(sink.get(), traj);
      }
      if (!traj.drift_within_contract())
        std::cerr << "warning: invariant drift H " << traj.h_drift << ", C " << traj.c_drift << " exceeds 100 tol\n";
      return 0;
    }

    if (*verify) {
      echo({{"command", "verify"}, {"only", only}, {"out", out_path}});
      Sink sink(out_path);
      bool all = true;
      run_criteria(only, [&](const CriterionResult& r) {
        all = all && r.pass;
        sink.get() << r.id << (r.pass ? " PASS " : " FAIL ") << r.title << ": " << r.detail << std::endl;
      });
      return all ? 0 : 1;
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << e.what() << '\n';
    return kExitDomain;
  }
  return 0;
}
