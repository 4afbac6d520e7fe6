#include <doctest.h>

#include "curved2body/export.hpp"

#include <algorithm>
#include <cstdlib>
#include <numbers>
#include <sstream>

using namespace curved2body;

namespace {

std::vector<std::string> lines_of(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  for (std::string l; std::getline(is, l);) out.push_back(l);
  return out;
}

std::size_t fields(const std::string& line) { return static_cast<std::size_t>(std::count(line.begin(), line.end(), ',')) + 1; }

}  // namespace

TEST_CASE("doubles round-trip through 17 digits") {
  for (const double x : {std::numbers::pi, 0.1, -1e-300, 6.02214076e23, 1.0 / 3.0, 0.0}) {
    const std::string s = format_double(x);
    CHECK(std::strtod(s.c_str(), nullptr) == x);
  }
  CHECK(format_double(0.5) == "0.5");
}

TEST_CASE("trajectory and reconstruction CSV") {
  const ModelParams p{0.0, 0.5, 1.0, PotentialFamily::attracting_cot()};
  const auto re = classify_re(p, 2.5).equilibria.at(0);
  const Trajectory tr = integrate(p, re.state, 1.0, 1e-10, {0.25});
  std::ostringstream os;
  write_trajectory_csv(os, tr);
  const auto lines = lines_of(os.str());
  REQUIRE(lines.size() == 6);
  CHECK(lines[0] == "t,q,p,m1,m2,m3,H,C");
  for (const auto& l : lines) CHECK(fields(l) == 8);
  CHECK(lines[2].rfind("0.25,2.5", 0) == 0);
  CHECK(os.str().find('\r') == std::string::npos);

  std::ostringstream rs;
  write_reconstruction_csv(rs, reconstruct(p, tr));
  const auto rl = lines_of(rs.str());
  REQUIRE(rl.size() == 6);
  CHECK(rl[0] == "t,x1,y1,z1,x2,y2,z2");
  for (const auto& l : rl) CHECK(fields(l) == 7);
}

TEST_CASE("family and raster CSV") {
  const FamilyTable t = family_sweep(LinearFamily::Attracting, 2.5, 0.5, -0.1, 0.1, 5);
  std::ostringstream os;
  write_family_csv(os, t);
  const auto lines = lines_of(os.str());
  CHECK(lines[0] == "kappa,q,p,m1,m2,m3,casimir,re1,im1,re2,im2,re3,im3,re4,im4,re5,im5,class");
  CHECK(lines.size() == t.rows.size() + 1);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    CHECK(fields(lines[i]) == 18);
    CHECK(lines[i].substr(lines[i].rfind(',') + 1) == "Elliptic");
  }

  const RegionRaster r = region_raster(PotentialFamily::attracting_cot(), 0.5, -1.0, 1.0, 0.5, 2.0, 3, 4);
  std::ostringstream rs;
  write_raster_csv(rs, r);
  const auto rl = lines_of(rs.str());
  CHECK(rl[0] == "kappa,q,label");
  CHECK(rl.size() == 13);

  const auto side = raster_sidecar_json(r);
  CHECK(side["potential"] == "attracting-cot");
  CHECK(side["resolution"][0] == 3);
  CHECK(side["resolution"][1] == 4);
  CHECK(side["kappa_range"][0] == -1.0);
  CHECK(side["curves"].contains("q_star"));
  CHECK(side["curves"]["q_star"].size() == r.q_star.size());
}

TEST_CASE("JSON records") {
  const ModelParams p{1.0, 0.75, 1.0, PotentialFamily::repelling_cot()};
  const auto c = classify_re(p, 1.0);
  const auto j = to_json(c);
  REQUIRE(j.is_array());
  REQUIRE(j.size() == 1);
  const auto& r = j[0];
  std::vector<std::string> keys;
  for (const auto& [k, v] : r.items()) keys.push_back(k);
  CHECK(keys == std::vector<std::string>{"kappa", "mu", "q", "branch", "state", "residual", "casimir", "sphere_data"});
  CHECK(r["branch"] == "AcuteRepelling");
  CHECK(r["state"]["q"] == 1.0);
  CHECK(r["sphere_data"].contains("theta1"));

  const auto& re = c.equilibria[0];
  const auto sj = spectrum_json(re, spectrum(jacobian_at(re)), hessian_on_leaf(re));
  CHECK(sj["eigenvalues"].size() == 5);
  CHECK(sj["leaf_signature"].get<std::string>().size() == 4);
  // the dump round-trips doubles exactly
  const auto back = nlohmann::json::parse(r.dump());
  CHECK(back["state"]["m3"].get<double>() == re.state.m3);
}
