// Copyright 2026 The geored Authors
// SPDX-License-Identifier: Apache-2.0

#include "geored/scenarios.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include "geored/calc.hpp"
#include "geored/catalog.hpp"
#include "geored/corpus.hpp"
#include "geored/dirac.hpp"
#include "geored/error.hpp"
#include "geored/frames.hpp"
#include "geored/lagsym.hpp"
#include "geored/qriccati.hpp"
#include "geored/random.hpp"
#include "geored/reduce.hpp"

namespace geored::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

class Context {
 public:
  Context(const ScenarioConfig& cfg, const json& params, RunReport& rep)
      : cfg_(cfg), params_(params), rep_(rep), rng_(derive_seed(cfg.seed, cfg.name)) {}

  const json& params() const { return params_; }
  double num(const std::string& key) const { return params_.at(key).get<double>(); }
  std::size_t count(const std::string& key) const { return params_.at(key).get<std::size_t>(); }
  std::vector<double> list(const std::string& key) const { return params_.at(key).get<std::vector<double>>(); }
  flow::IntegratorConfig integrator() const { return cfg_.integrator(); }
  Rng& rng() { return rng_; }

  void metric(const std::string& name, double v) { rep_.metrics[name] = v; }

  void check(const std::string& name, double value, double bound, Bound kind = Bound::BELOW) {
    if (cfg_.tolerances.contains(name)) {
      bound = cfg_.tolerances.at(name).get<double>();
      used_.insert(name);
    }
    Check c{name, value, bound, kind, false};
    c.ok = kind == Bound::BELOW ? value < bound : value > bound;
    if (!std::isfinite(value)) c.ok = false;
    rep_.metrics[name] = value;
    rep_.checks.push_back(c);
  }

  void partial() { partial_ = true; }
  bool is_partial() const { return partial_; }

  void artifact(const std::string& file, const std::string& content) {
    rep_.artifacts.push_back(file);
    if (cfg_.output_dir.empty()) return;
    const fs::path dir = fs::path(cfg_.output_dir) / cfg_.name;
    fs::create_directories(dir);
    std::ofstream(dir / file, std::ios::binary) << content;
  }

  const std::set<std::string>& used_tolerances() const { return used_; }

 private:
  const ScenarioConfig& cfg_;
  const json& params_;
  RunReport& rep_;
  Rng rng_;
  bool partial_ = false;
  std::set<std::string> used_;
};

using Body = std::function<void(Context&)>;

struct Scenario {
  ScenarioInfo info;
  Body body;
};

std::string csv_of_diagram(const reduce::DiagramReport& r) {
  std::ostringstream os;
  os.precision(17);
  os << "t";
  const std::size_t d = r.projected.empty() ? 0 : r.projected[0].size();
  for (std::size_t i = 0; i < d; ++i) os << ",projected" << i;
  for (std::size_t i = 0; i < d; ++i) os << ",direct" << i;
  os << "\n";
  for (std::size_t k = 0; k < r.grid.size(); ++k) {
    os << r.grid[k];
    for (double v : r.projected[k]) os << "," << v;
    for (double v : r.direct[k]) os << "," << v;
    os << "\n";
  }
  return os.str();
}

Scenario catalog_scenario(const std::string& name, const std::string& description,
                          std::function<catalog::CatalogEntry(const json&)> make) {
  auto defaults = make(json::object()).config["params"];
  return {{name, description, {"reduction/commuting-diagram"}, defaults}, [make](Context& cx) {
            auto e = make(cx.params());
            auto rep = reduce::verify_commuting_diagram(e.scenario, e.default_x0, e.t0, e.t1, cx.integrator(),
                                                        cx.rng().engine()(), e.stop);
            cx.metric("samples", static_cast<double>(rep.samples));
            cx.metric("end_time", rep.grid.empty() ? e.t0 : rep.grid.back());
            cx.check("max_dev", rep.max_dev, 1e-6);
            cx.artifact("diagram.csv", csv_of_diagram(rep));
          }};
}

double p_or(const json& p, const char* key, double fallback) { return p.contains(key) ? p.at(key).get<double>() : fallback; }

std::vector<Scenario> build_registry() {
  std::vector<Scenario> reg;

  reg.push_back(catalog_scenario("radial-l", "radial motion of a central-force particle at fixed angular momentum",
                                 [](const json& p) { return catalog::radial_l_entry(p_or(p, "l", 1.0)); }));
  reg.push_back(catalog_scenario("radial-E", "radial motion on a fixed-energy surface",
                                 [](const json& p) { return catalog::radial_E_entry(p_or(p, "E", 0.5)); }));
  reg.push_back(catalog_scenario("calogero-from-matrix",
                                 "eigenvalues of free symmetric matrix motion against the two-body inverse-square flow",
                                 [](const json& p) { return catalog::calogero_entry(p_or(p, "g", 0.35)); }));
  reg.push_back(catalog_scenario("so3-quotient", "rotation-invariant quotient of a central force system",
                                 [](const json& p) {
                                   return catalog::so3_entry(p_or(p, "stiffness", 1.0), p_or(p, "drag", 0.05));
                                 }));
  reg.push_back(catalog_scenario("riccati-classical", "projective image of a linear planar flow",
                                 [](const json& p) {
                                   return catalog::riccati_entry(p_or(p, "a", 0.5), p_or(p, "b", 0.3), p_or(p, "c", 0.2));
                                 }));

  reg.push_back({{"qriccati-n3", "coset image of a unitary flow against the matrix Riccati flow",
                  {"quantum/coset-reduction"}, {{"n1", 1}, {"n2", 2}, {"bound", 2.0}, {"t1", 1.0}}},
                 [](Context& cx) {
                   using namespace qriccati;
                   const int n1 = static_cast<int>(cx.count("n1")), n2 = static_cast<int>(cx.count("n2"));
                   auto H = BlockHamiltonian::random(n1, n2, cx.rng(), cx.num("bound"));
                   auto rep = verify_coset_reduction(H, {CMat::Identity(n1 + n2, n1 + n2), 0.0}, 0.0, cx.num("t1"),
                                                     cx.integrator());
                   if (rep.partial) cx.partial();
                   cx.metric("end_time", rep.end_time);
                   cx.metric("max_dev", rep.max_dev);
                   cx.check("final_dev", rep.final_dev, 1e-6);
                   cx.check("unitarity_drift", rep.unitarity_drift, 1e-9);
                   std::ostringstream a, b;
                   write_z_csv(a, rep.times, rep.z_unitary);
                   write_z_csv(b, rep.times, rep.z_riccati);
                   cx.artifact("z_unitary.csv", a.str());
                   cx.artifact("z_riccati.csv", b.str());
                 }});

  reg.push_back(
      {{"relativistic-free-particle",
        "energy, kernel, Darboux relations, Jacobi identity and Casimir of the presymplectic free particle",
        {"lagrangian/presymplectic-bracket", "lagrangian/newton-wigner"},
        {{"energy_points", 100}, {"points", 20}, {"jacobi_points", 3}, {"m", 1.0}, {"c", 1.0}}},
       [](Context& cx) {
         using namespace lagsym;
         auto rel = relativistic_free(cx.num("m"), cx.num("c"));
         auto A = relativistic_connection(cx.num("m"), cx.num("c"));
         auto P = presymplectic_tensor(rel, A);
         double emax = 0.0;
         for (std::size_t k = 0; k < cx.count("energy_points"); ++k)
           emax = std::max(emax, std::abs(energy(rel, random_timelike_point(cx.rng()))));
         cx.check("energy_max", emax, 1e-12);

         std::vector<ScalarField> c, Q, Pm;
         for (std::size_t i = 0; i < 8; ++i) c.push_back(coordinate(8, i));
         for (std::size_t j = 0; j < 3; ++j) {
           Q.push_back(nw_position(j));
           Pm.push_back(nw_momentum(j));
         }
         double dim_err = 0.0, span = 0.0, darboux = 0.0, casimir = 0.0, jac = 0.0;
         std::vector<double> first;
         for (std::size_t k = 0; k < cx.count("points"); ++k) {
           auto z = random_timelike_point(cx.rng());
           if (k == 0) first = z;
           auto K = kernel_basis(lagrangian_two_form(rel, z));
           dim_err = std::max(dim_err, std::abs(static_cast<double>(K.size()) - 2.0));
           std::vector<double> gam(8, 0.0), del(8, 0.0);
           double n2 = 0.0;
           for (std::size_t mu = 0; mu < 4; ++mu) {
             gam[mu] = del[4 + mu] = z[4 + mu];
             n2 += z[4 + mu] * z[4 + mu];
           }
           span = std::max({span, span_residual(K, gam) / std::sqrt(n2), span_residual(K, del) / std::sqrt(n2)});
           for (std::size_t i = 0; i < 3; ++i)
             for (std::size_t j = 0; j < 3; ++j) {
               darboux = std::max(darboux, std::abs(bracket(P, Q[i], Pm[j], z) - (i == j ? 1.0 : 0.0)));
               darboux = std::max(darboux, std::abs(bracket(P, Q[i], Q[j], z)));
               darboux = std::max(darboux, std::abs(bracket(P, Pm[i], Pm[j], z)));
             }
           for (const auto& f : c) casimir = std::max(casimir, std::abs(bracket(P, rel.L, f, z)));
           if (k < cx.count("jacobi_points"))
             for (std::size_t a = 0; a < 8; ++a)
               for (std::size_t b = a + 1; b < 8; ++b)
                 for (std::size_t d = b + 1; d < 8; ++d) jac = std::max(jac, jacobi_residual(P, c[a], c[b], c[d], z));
         }
         cx.check("kernel_dim_error", dim_err, 0.5);
         cx.check("kernel_span_residual", span, 1e-8);
         cx.check("darboux_max", darboux, 1e-8);
         cx.check("jacobi_max", jac, 1e-6);
         cx.check("casimir_max", casimir, 1e-8);
         if (!first.empty()) cx.artifact("bracket_table.json", bracket_table(cx.num("m"), cx.num("c"), first).dump(2));
       }});

  reg.push_back(
      {{"dirac-bracket-consistency",
        "second-class constraints are Casimirs of the Dirac bracket; Jacobi identity, cross-block determinant and "
        "Poincare brackets",
        {"dirac/two-particle-model", "dirac/constraint-matrix"},
        {{"points", 20}, {"jacobi_points", 20}, {"m1", 1.0}, {"m2", 2.0}, {"lambda", 0.1}}},
       [](Context& cx) {
         using namespace dirac;
         auto model = two_particle_model(cx.num("m1"), cx.num("m2"), InteractionPotential::linear(cx.num("lambda")));
         std::vector<std::vector<double>> pts;
         for (std::size_t k = 0; k < cx.count("points"); ++k) pts.push_back(sample_on_shell(model, cx.rng(), 0.0));
         auto sweep = consistency_sweep(model.set, pts, cx.count("jacobi_points"));
         cx.check("casimir_max", sweep.casimir_max, 1e-9);
         cx.check("jacobi_max", sweep.jacobi_max, 1e-6);
         cx.check("poincare_max", sweep.poincare_max, 1e-8);
         double mismatch = 0.0, block_dev = 0.0;
         json rows = json::array();
         for (const auto& z : pts) {
           auto B = cross_block(model, z);
           const double det = B.determinant();
           const double reference = reference_determinant(model, z);
           mismatch = std::max(mismatch, std::abs(det - reference) / std::max(1.0, std::abs(det)));
           block_dev = std::max(block_dev, (B - reference_block(model, z)).cwiseAbs().maxCoeff());
           rows.push_back({{"determinant", det}, {"reference_pattern", reference}});
         }
         cx.metric("reference_block_deviation", block_dev);
         cx.check("determinant_pattern_mismatch", mismatch, 1e-8);
         cx.artifact("determinants.json", rows.dump(2));
       }});

  reg.push_back({{"dirac-two-particle-noncommuting-positions",
                  "position coordinates fail to commute under the Dirac bracket and commute without constraints",
                  {"dirac/no-interaction"},
                  {{"points", 10}, {"m1", 1.0}, {"m2", 2.0}, {"lambda", 0.1}}},
                 [](Context& cx) {
                   using namespace dirac;
                   auto model =
                       two_particle_model(cx.num("m1"), cx.num("m2"), InteractionPotential::linear(cx.num("lambda")));
                   double lowest = std::numeric_limits<double>::infinity(), free_max = 0.0;
                   ConstraintSet none{model.set.space, {}};
                   json first;
                   for (std::size_t k = 0; k < cx.count("points"); ++k) {
                     auto z = sample_on_shell(model, cx.rng(), 0.0);
                     auto t = position_noncommutativity(model.set, z);
                     if (k == 0) first = to_json(t);
                     lowest = std::min(lowest, t.max_abs);
                     free_max = std::max(free_max, position_noncommutativity(none, z).max_abs);
                   }
                   cx.check("noncommutativity_min", lowest, 1e-6, Bound::ABOVE);
                   cx.check("unconstrained_max", free_max, 1e-300);
                   cx.artifact("position_brackets.json", first.dump(2));
                 }});

  reg.push_back({{"dirac-constrained-flow", "two-particle evolution under the Dirac bracket with a linear potential",
                  {"dirac/constrained-flow"},
                  {{"tau1", 5.0}, {"m1", 1.0}, {"m2", 2.0}, {"lambda", 0.3}}},
                 [](Context& cx) {
                   using namespace dirac;
                   auto model =
                       two_particle_model(cx.num("m1"), cx.num("m2"), InteractionPotential::linear(cx.num("lambda")));
                   auto z = sample_on_shell(model, cx.rng(), 0.0);
                   std::vector<double> s(z.begin(), z.begin() + 16);
                   auto run = constrained_flow(model.set, s, 0.0, cx.num("tau1"));
                   double drift = 0.0, pdrift = 0.0;
                   for (std::size_t i = 0; i < run.traj.size(); ++i) {
                     auto full = run.traj.states[i];
                     full.push_back(run.traj.times[i]);
                     drift = std::max(drift, model.set.violation(full));
                     for (int mu = 0; mu < 4; ++mu)
                       pdrift = std::max(pdrift, std::abs(full[4 + mu] + full[12 + mu] - s[4 + mu] - s[12 + mu]));
                   }
                   cx.metric("projections", run.projections);
                   cx.check("constraint_drift", drift, 1e-7);
                   cx.check("momentum_drift", pdrift, 1e-9);
                   std::ostringstream os;
                   std::vector<std::string> names;
                   for (int a = 1; a <= 2; ++a) {
                     for (int mu = 0; mu < 4; ++mu) names.push_back("x" + std::to_string(a) + "_" + std::to_string(mu));
                     for (int mu = 0; mu < 4; ++mu) names.push_back("p" + std::to_string(a) + "_" + std::to_string(mu));
                   }
                   flow::write_csv(os, run.traj, names);
                   cx.artifact("trajectory.csv", os.str());
                 }});

  reg.push_back({{"world-line-condition",
                  "Poincare transformations under the Dirac bracket move world lines geometrically",
                  {"dirac/world-line-condition"},
                  {{"boosts", 10}, {"omega_norm", 1e-4}, {"m1", 1.0}, {"m2", 2.0}, {"lambda", 0.1}}},
                 [](Context& cx) {
                   using namespace dirac;
                   auto model =
                       two_particle_model(cx.num("m1"), cx.num("m2"), InteractionPotential::linear(cx.num("lambda")));
                   auto kin = two_particle_model(cx.num("m1"), cx.num("m2"),
                                                 InteractionPotential::linear(cx.num("lambda")), Gauge::KINEMATICAL);
                   double rel = 0.0, rel_kin = 0.0, trans = 0.0;
                   json reports = json::array();
                   for (std::size_t k = 0; k < cx.count("boosts"); ++k) {
                     Eigen::Matrix4d w = Eigen::Matrix4d::Zero();
                     for (int i = 0; i < 4; ++i)
                       for (int j = i + 1; j < 4; ++j) {
                         w(i, j) = cx.rng().uniform(-1, 1);
                         w(j, i) = -w(i, j);
                       }
                     w *= cx.num("omega_norm") / w.norm();
                     auto z = sample_on_shell(model, cx.rng(), 0.0);
                     auto r = wlc_residual(model.set, w, Eigen::Vector4d::Zero(), z);
                     rel = std::max(rel, r.max_residual / w.norm());
                     reports.push_back(to_json(r));
                     Eigen::Vector4d a;
                     for (int mu = 0; mu < 4; ++mu) a(mu) = cx.rng().uniform(-1, 1) * cx.num("omega_norm");
                     trans = std::max(trans, wlc_residual(model.set, Eigen::Matrix4d::Zero(), a, z).max_residual);
                     auto zk = sample_on_shell(kin, cx.rng(), 0.0);
                     rel_kin = std::max(rel_kin, wlc_residual(kin.set, w, Eigen::Vector4d::Zero(), zk).max_residual / w.norm());
                   }
                   cx.metric("kinematical_relative_residual", rel_kin);
                   cx.check("relative_residual", rel, 1e-6);
                   cx.check("translation_residual", trans, 1e-10);
                   cx.artifact("wlc.json", reports.dump(2));
                 }});

  reg.push_back({{"deformed-poincare-jacobi", "Jacobi identity and scale dependence of the deformed Poincare algebra",
                  {"dirac/deformed-poincare"},
                  {{"K", {0.1, 1.0, 100.0}}}},
                 [](Context& cx) {
                   using namespace dirac;
                   const auto unit = deformed_poincare(1.0);
                   double jac = 0.0, scaling = 0.0;
                   for (double K : cx.list("K")) {
                     auto d = deformed_poincare(K);
                     jac = std::max(jac, d.jacobi_residual());
                     for (int i = 0; i < 4; ++i)
                       for (int j = 0; j < 4; ++j)
                         for (int k = 0; k < 10; ++k)
                           scaling = std::max(scaling, std::abs(d.c[i][j][k] * K - unit.c[i][j][k]));
                   }
                   cx.check("jacobi_max", jac, 1e-12);
                   cx.check("scaling_residual", scaling, 1e-12);
                   cx.artifact("structure_constants.json", unit.to_json().dump(2));
                 }});

  reg.push_back({{"frames-checks", "frame projectors, mutual compatibility, integrability and the frame-derived metric",
                  {"frames/projector", "frames/compatibility", "frames/metric"},
                  {{"points", 20}, {"rapidity", 1.0}}},
                 [](Context& cx) {
                   using namespace frames;
                   const double r = cx.num("rapidity");
                   auto lab = ReferenceFrame::lab();
                   auto boosted = lab.transformed(boost({r, {1.0, 0.0, 0.0}}));
                   std::vector<Vec4> pts;
                   for (std::size_t k = 0; k < cx.count("points"); ++k)
                     pts.emplace_back(cx.rng().uniform(-1, 1), cx.rng().uniform(-1, 1), cx.rng().uniform(-1, 1),
                                      cx.rng().uniform(-1, 1));
                   double proj = 0.0, trace = 0.0, compat = 0.0;
                   for (const auto& p : pts) {
                     auto R = frame_tensor(boosted, p);
                     proj = std::max(proj, R.projector_residual());
                     trace = std::max(trace, std::abs(R.trace() - 1.0));
                     compat = std::max(compat, std::abs(compatible(lab, boosted, p).trace - std::cosh(r) * std::cosh(r)));
                   }
                   cx.check("projector_residual", proj, 1e-10);
                   cx.check("trace_deviation", trace, 1e-10);
                   cx.check("compatibility_deviation", compat, 1e-10);
                   CovectorField closed = [](const Vec4& x) -> Vec4 {
                     const double f = x(1) * x(1) + std::sin(x(3));
                     return Vec4(1.0, x(2), x(1), 0.0) * std::exp(-f);
                   };
                   CovectorField contact = [](const Vec4& x) -> Vec4 { return Vec4(x(1), 0.0, 1.0, 0.0); };
                   cx.check("frobenius_closed", frobenius_residual(closed, pts), 1e-7);
                   cx.check("frobenius_contact", frobenius_residual(contact, pts), 0.1, Bound::ABOVE);
                   auto m = metric_from_frame_family({{0.7, {1.0, 0.0, 0.0}}, {0.4, {0.0, 1.0, 1.0}}, {-1.1, {0.2, 0.3, -0.9}}});
                   cx.check("metric_residual", m.residual, 1e-12);
                   cx.check("lorentz_residual", m.lorentz_residual, 1e-12);
                 }});

  reg.push_back({{"kernel-cross-check", "dual-number derivatives against central differences; RK4 convergence order",
                  {"kernel/differentiation", "kernel/integration"},
                  {{"points", 10}, {"dt", 0.05}}},
                 [](Context& cx) {
                   double worst = 0.0;
                   for (const auto& f : derivative_corpus()) {
                     for (std::size_t p = 0; p < cx.count("points"); ++p) {
                       auto x = cx.rng().uniform_vec(3, -1.5, 1.5);
                       auto gd = calc::gradient(f, x);
                       auto gc = calc::gradient(f, x, calc::DiffScheme::central());
                       double gn = 0.0;
                       for (double v : gd) gn = std::max(gn, std::abs(v));
                       for (std::size_t i = 0; i < 3; ++i) worst = std::max(worst, std::abs(gd[i] - gc[i]) / (1.0 + gn));
                     }
                   }
                   cx.check("dual_vs_central", worst, 1e-5);
                   auto osc = flow::second_order_lift(
                       1, [](auto q, auto, double) { return std::vector{-q[0]}; }, "harmonic");
                   auto err = [&](double dt) {
                     auto tr = flow::integrate(osc, {1.0, 0.0}, 0.0, 2.0, flow::IntegratorConfig::rk4(dt));
                     return std::abs(tr.back()[0] - std::cos(2.0));
                   };
                   const double dt = cx.num("dt");
                   const double order = std::log2(err(dt) / err(dt / 2.0));
                   cx.metric("rk4_order", order);
                   cx.check("rk4_order_error", std::abs(order - 4.0), 0.2);
                 }});

  std::sort(reg.begin(), reg.end(), [](const Scenario& a, const Scenario& b) { return a.info.name < b.info.name; });
  return reg;
}

const std::vector<Scenario>& registry() {
  static const std::vector<Scenario> reg = build_registry();
  return reg;
}

const Scenario& find(const std::string& name) {
  for (const auto& s : registry())
    if (s.info.name == name) return s;
  throw UnknownScenario("no scenario named '" + name + "'");
}

json merge_params(const ScenarioInfo& info, const json& given) {
  json out = info.defaults;
  if (!given.is_object()) throw ConfigError("params must be an object");
  for (const auto& [k, v] : given.items()) {
    if (!out.contains(k)) throw ConfigError("unknown parameter 'params." + k + "' for scenario " + info.name);
    const auto& d = out.at(k);
    const bool ok = (d.is_number() && v.is_number()) || (d.is_array() && v.is_array());
    if (!ok) throw ConfigError("parameter 'params." + k + "' has the wrong type");
    if (d.is_number_integer() && !(v.is_number_integer() && v.get<long long>() > 0))
      throw ConfigError("parameter 'params." + k + "' must be a positive integer");
    out[k] = v;
  }
  return out;
}

}  // namespace

ScenarioConfig ScenarioConfig::from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  static const std::set<std::string> known = {"name", "params", "rk45_tol", "tolerances", "out_dir", "seed"};
  for (const auto& [k, v] : j.items())
    if (!known.count(k)) throw ConfigError("unknown config field '" + k + "'");
  ScenarioConfig c;
  try {
    if (j.contains("name")) c.name = j.at("name").get<std::string>();
    if (j.contains("params")) c.params = j.at("params");
    if (j.contains("rk45_tol")) c.rk45_tol = j.at("rk45_tol").get<double>();
    if (j.contains("tolerances")) c.tolerances = j.at("tolerances");
    if (j.contains("out_dir")) c.output_dir = j.at("out_dir").get<std::string>();
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid config: ") + e.what());
  }
  if (!c.params.is_object()) throw ConfigError("field 'params' must be an object");
  if (!c.tolerances.is_object()) throw ConfigError("field 'tolerances' must be an object");
  for (const auto& [k, v] : c.tolerances.items())
    if (!v.is_number()) throw ConfigError("field 'tolerances." + k + "' must be a number");
  if (!(c.rk45_tol > 0.0)) throw ConfigError("field 'rk45_tol' must be positive");
  return c;
}

json ScenarioConfig::to_json() const {
  return {{"name", name}, {"params", params}, {"rk45_tol", rk45_tol}, {"tolerances", tolerances}, {"seed", seed}};
}

std::string to_string(Status s) {
  switch (s) {
    case Status::PASS: return "PASS";
    case Status::FAIL: return "FAIL";
    case Status::PARTIAL: return "PARTIAL";
  }
  return "FAIL";
}

json RunReport::to_json() const {
  json checks_j = json::array();
  for (const auto& c : checks)
    checks_j.push_back({{"metric", c.metric},
                        {"value", c.value},
                        {"bound", c.bound},
                        {"kind", c.kind == Bound::BELOW ? "below" : "above"},
                        {"ok", c.ok}});
  json j = {{"name", name},         {"status", to_string(status)}, {"metrics", metrics},
            {"checks", checks_j},   {"artifacts", artifacts},      {"config_echo", config_echo}};
  if (!error.empty()) j["error"] = error;
  return j;
}

std::vector<ScenarioInfo> list_scenarios() {
  std::vector<ScenarioInfo> out;
  for (const auto& s : registry()) out.push_back(s.info);
  return out;
}

RunReport run(const ScenarioConfig& config) {
  const auto& sc = find(config.name);
  const json params = merge_params(sc.info, config.params);
  RunReport rep;
  rep.name = config.name;
  rep.config_echo = config.to_json();
  rep.config_echo["params"] = params;
  const auto start = std::chrono::steady_clock::now();
  Context cx(config, params, rep);
  try {
    sc.body(cx);
  } catch (const Error& e) {
    rep.error = e.what();
  }
  rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  for (const auto& [k, v] : config.tolerances.items())
    if (!cx.used_tolerances().count(k) && rep.error.empty())
      throw ConfigError("field 'tolerances." + k + "' names no check of scenario " + config.name);

  const bool failed = !rep.error.empty() || std::any_of(rep.checks.begin(), rep.checks.end(),
                                                        [](const Check& c) { return !c.ok; });
  rep.status = failed ? Status::FAIL : cx.is_partial() ? Status::PARTIAL : Status::PASS;
  if (!config.output_dir.empty()) {
    const fs::path dir = fs::path(config.output_dir) / config.name;
    fs::create_directories(dir);
    std::ofstream(dir / "report.json", std::ios::binary) << rep.to_json().dump(2) << "\n";
  }
  return rep;
}

RunSummary run_all(const std::string& config_dir, const ScenarioConfig& base, Exec ex) {
  const auto infos = list_scenarios();
  std::vector<ScenarioConfig> cfgs;
  for (const auto& info : infos) {
    ScenarioConfig c = base;
    c.name = info.name;
    c.params = json::object();
    c.tolerances = json::object();
    if (!config_dir.empty()) {
      const fs::path p = fs::path(config_dir) / (info.name + ".json");
      if (fs::exists(p)) {
        std::ifstream in(p);
        json j;
        try {
          j = json::parse(in);
        } catch (const json::exception& e) {
          throw ConfigError(p.string() + ": " + e.what());
        }
        auto fc = ScenarioConfig::from_json(j);
        c.params = fc.params;
        c.tolerances = fc.tolerances;
        if (j.contains("rk45_tol")) c.rk45_tol = fc.rk45_tol;
      }
    }
    cfgs.push_back(c);
  }
  RunSummary sum;
  sum.reports = map_index<RunReport>(ex, cfgs.size(), [&](std::size_t i) {
    try {
      return run(cfgs[i]);
    } catch (const Error& e) {
      RunReport r;
      r.name = cfgs[i].name;
      r.status = Status::FAIL;
      r.error = e.what();
      return r;
    }
  });
  for (const auto& r : sum.reports) {
    if (r.status == Status::PASS) ++sum.pass;
    if (r.status == Status::FAIL) ++sum.fail;
    if (r.status == Status::PARTIAL) ++sum.partial;
  }
  return sum;
}

}  // namespace geored::cli
