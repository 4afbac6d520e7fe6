#include "curved2body/export.hpp"

#include <cstdio>

namespace curved2body {
namespace {

using json = nlohmann::ordered_json;

json curve_json(const std::vector<CurvePoint>& pts) {
  json a = json::array();
  for (const auto& p : pts) a.push_back({{"kappa", p.kappa}, {"q", p.q}});
  return a;
}

}  // namespace

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  os << "t,q,p,m1,m2,m3,H,C\n";
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    const auto& s = traj.states[i];
    os << format_double(traj.times[i]) << ',' << format_double(s.q) << ',' << format_double(s.p) << ','
       << format_double(s.m1) << ',' << format_double(s.m2) << ',' << format_double(s.m3) << ','
       << format_double(traj.H[i]) << ',' << format_double(traj.C[i]) << '\n';
  }
}

void write_reconstruction_csv(std::ostream& os, const Reconstruction& rec) {
  os << "t,x1,y1,z1,x2,y2,z2\n";
  for (std::size_t i = 0; i < rec.times.size(); ++i) {
    const auto& a = rec.X1[i];
    const auto& b = rec.X2[i];
    os << format_double(rec.times[i]) << ',' << format_double(a.x) << ',' << format_double(a.y) << ','
       << format_double(a.z) << ',' << format_double(b.x) << ',' << format_double(b.y) << ','
       << format_double(b.z) << '\n';
  }
}

void write_family_csv(std::ostream& os, const FamilyTable& table) {
  os << "kappa,q,p,m1,m2,m3,casimir";
  for (int i = 1; i <= 5; ++i) os << ",re" << i << ",im" << i;
  os << ",class\n";
  for (const auto& r : table.rows) {
    os << format_double(r.kappa) << ',' << format_double(r.state.q) << ',' << format_double(r.state.p) << ','
       << format_double(r.state.m1) << ',' << format_double(r.state.m2) << ',' << format_double(r.state.m3)
       << ',' << format_double(r.casimir);
    for (const auto& l : r.eigenvalues) os << ',' << format_double(l.real()) << ',' << format_double(l.imag());
    os << ',' << to_string(r.classification) << '\n';
  }
}

void write_raster_csv(std::ostream& os, const RegionRaster& raster) {
  os << "kappa,q,label\n";
  for (std::size_t i = 0; i < raster.kappas.size(); ++i)
    for (std::size_t j = 0; j < raster.qs.size(); ++j)
      os << format_double(raster.kappas[i]) << ',' << format_double(raster.qs[j]) << ','
         << to_string(raster.at(i, j)) << '\n';
}

json to_json(const ReducedState& s) {
  return {{"q", s.q}, {"p", s.p}, {"m1", s.m1}, {"m2", s.m2}, {"m3", s.m3}};
}

json to_json(const RelEquilibrium& re) {
  json j{{"kappa", re.params.kappa},
         {"mu", re.params.mu()},
         {"q", re.state.q},
         {"branch", to_string(re.branch)},
         {"state", to_json(re.state)},
         {"residual", re.residual},
         {"casimir", casimir(re.params.kappa, re.state.m())}};
  if (re.sphere_data) {
    const auto& d = *re.sphere_data;
    j["sphere_data"] = {{"theta1", d.theta1}, {"theta2", d.theta2}, {"omega", d.omega}, {"zeta", d.zeta},
                        {"alpha", d.alpha}};
  }
  return j;
}

json to_json(const Classification& c) {
  json a = json::array();
  for (const auto& re : c.equilibria) a.push_back(to_json(re));
  return a;
}

json spectrum_json(const RelEquilibrium& re, const SpectrumReport& sp, const std::optional<LeafSignature>& leaf) {
  json ev = json::array();
  for (const auto& l : sp.eigenvalues) ev.push_back({{"re", l.real()}, {"im", l.imag()}});
  json j{{"kappa", re.params.kappa},
         {"mu", re.params.mu()},
         {"q", re.state.q},
         {"branch", to_string(re.branch)},
         {"eigenvalues", ev},
         {"classification", to_string(sp.classification)}};
  if (leaf) j["leaf_signature"] = leaf->str();
  return j;
}

json raster_sidecar_json(const RegionRaster& r) {
  return {{"potential", r.potential},
          {"mu", r.mu},
          {"kappa_range", {r.kappas.front(), r.kappas.back()}},
          {"q_range", {r.qs.front(), r.qs.back()}},
          {"resolution", {r.kappas.size(), r.qs.size()}},
          {"curves",
           {{"q_star", curve_json(r.q_star)},
            {"q_dagger", curve_json(r.q_dagger)},
            {"right_angle", curve_json(r.right_angle)},
            {"antipodal", curve_json(r.antipodal)}}}};
}

}  // namespace curved2body
