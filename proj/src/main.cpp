// batch front end: parses model files, runs the verification suite, and
// emits machine-readable JSON reports
#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <thread>

#include <susylat/dynamics.hpp>
#include <susylat/model.hpp>
#include <susylat/qft.hpp>

using ojson = nlohmann::ordered_json;
using namespace susylat;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

region box(int lo, int hi, int nu) {
  region out;
  std::vector<int> x(nu, lo);
  for (;;) {
    out.insert(site{x});
    int d = 0;
    while (d < nu && x[d] == hi) x[d++] = lo;
    if (d == nu) break;
    ++x[d];
  }
  return out;
}

region model_region(const model_data& m) {
  return box(m.params.region_lo, m.params.region_hi, m.assignment.dimension);
}

ojson region_json(const region& r) {
  ojson out = ojson::array();
  for (const site& s : r) {
    if (s.x.size() == 1) {
      out.push_back(s.x[0]);
    } else {
      out.push_back(s.x);
    }
  }
  return out;
}

ojson poly_json(const charge_poly& p) {
  return ojson{{"terms", p.size()}, {"text", to_string(p)}, {"support", region_json(support(p))}};
}

// seeded random local element with exact coefficients, for identity checks
charge_poly random_poly(std::mt19937_64& rng, const std::vector<site>& sites) {
  std::uniform_int_distribution<int> coeff(-3, 3);
  std::uniform_int_distribution<int> deg(0, 3);
  std::uniform_int_distribution<std::size_t> pick(0, sites.size() - 1);
  std::uniform_int_distribution<int> kind(0, 1);
  charge_poly out = charge_poly::zero();
  for (int w = 0; w < 2; ++w) {
    charge_poly term = charge_poly::scalar(
        gaussian_rational(rational(coeff(rng)), rational(coeff(rng))));
    int d = deg(rng);
    for (int j = 0; j < d; ++j) {
      const site& s = sites[pick(rng)];
      term = term * (kind(rng) ? charge_poly::creator(s) : charge_poly::annihilator(s));
    }
    out = out + term;
  }
  return out;
}

std::vector<site> region_sites(const region& r) { return {r.begin(), r.end()}; }

// dense conjugation oracle on the generator domain; -1 when too large
double conjugation_distance(const charge_assignment& a, const region& lam, const cpoly& A,
                            const cpoly& result, double t, boundary_mode mode) {
  region dom = generator_domain(a, lam, support(A), mode);
  dom = region_union(dom, support(result));
  if (dom.size() > 12) return -1.0;
  fock_space sp(dom);
  dense_matrix hm = dense_matrix(represent(sp, to_numeric(local_time_generator(a, lam, mode))));
  Eigen::SelfAdjointEigenSolver<dense_matrix> es(hm);
  state_vector ph(es.eigenvalues().size());
  for (Eigen::Index i = 0; i < ph.size(); ++i)
    ph[i] = std::exp(cplx(0.0, t * es.eigenvalues()[i]));
  dense_matrix u = es.eigenvectors();
  dense_matrix rot = u * ph.asDiagonal() * u.adjoint();
  dense_matrix exact = rot * dense_matrix(represent(sp, A)) * rot.adjoint();
  return (exact - dense_matrix(represent(sp, result))).cwiseAbs().maxCoeff();
}

// ---- individual checks -------------------------------------------------

ojson check_nilpotent_cmd(const model_data& m) {
  nilpotency_result r = check_nilpotent(m.assignment, 2);
  ojson out{{"check", "nilpotent"},
            {"nilpotent", r.nilpotent},
            {"routes_agree", r.routes_agree},
            {"generators_checked", r.checked.size()}};
  if (r.counterexample) {
    bool l1 = false;
    out["counterexample"] = ojson{{"generator", to_string(r.counterexample->first)},
                                  {"square", to_string(r.counterexample->second)},
                                  {"square_norm", certified_norm(r.counterexample->second, l1)}};
  }
  out["pass"] = r.nilpotent && r.routes_agree;
  return out;
}

ojson check_leibniz(const model_data& m) {
  std::mt19937_64 rng(m.params.seed);
  auto sites = region_sites(model_region(m));
  int rounds = 50, failures = 0;
  for (int i = 0; i < rounds; ++i) {
    charge_poly A = random_poly(rng, sites), B = random_poly(rng, sites);
    charge_poly lhs = apply_delta(m.assignment, A * B);
    charge_poly rhs = apply_delta(m.assignment, A) * B + gamma(A) * apply_delta(m.assignment, B);
    if (!(lhs - rhs).is_zero()) ++failures;
  }
  return ojson{{"check", "leibniz"},
               {"rounds", rounds},
               {"failures", failures},
               {"exact", true},
               {"pass", failures == 0}};
}

ojson check_susy_algebra(const model_data& m) {
  region reg = model_region(m);
  std::vector<charge_poly> probes;
  auto sites = region_sites(reg);
  for (const site& s : sites) {
    probes.push_back(charge_poly::annihilator(s));
    probes.push_back(charge_poly::creator(s));
  }
  if (sites.size() >= 2)
    probes.push_back(charge_poly::creator(sites[0]) * charge_poly::annihilator(sites[1]));
  auto res = structural_identities(m.assignment, reg, probes);
  ojson out{{"check", "susy-algebra"}};
  bool pass = true;
  double tol = 1e-10;
  for (const auto& [k, v] : res) {
    out[k] = v;
    pass = pass && v <= tol;
  }
  out["tolerance"] = tol;
  out["pass"] = pass;
  return out;
}

ojson check_spectrum(const model_data& m) {
  susy_system sys(m.assignment, model_region(m));
  spectral_data rep = spectral_report(sys);
  double floor = -1e-10 * std::max(rep.h_norm, 1.0);
  double min_eig = rep.eigenvalues.empty() ? 0.0 : rep.eigenvalues.front();
  ojson doublets = ojson::array();
  for (const doublet_entry& d : rep.doublets)
    doublets.push_back(ojson{{"value", d.value}, {"even", d.even}, {"odd", d.odd}, {"paired", d.paired}});
  ojson evs = ojson::array();
  std::size_t cap = 128;
  for (std::size_t i = 0; i < rep.eigenvalues.size() && i < cap; ++i)
    evs.push_back(rep.eigenvalues[i]);
  bool pass = min_eig >= floor && rep.all_paired;
  return ojson{{"check", "spectrum"},
               {"dim", sys.space.dim()},
               {"h_norm", rep.h_norm},
               {"min_eigenvalue", min_eig},
               {"positive", min_eig >= floor},
               {"kernel_dim_even", rep.kernel_dim_even},
               {"kernel_dim_odd", rep.kernel_dim_odd},
               {"witten_index", rep.witten_index},
               {"all_paired", rep.all_paired},
               {"doublets", doublets},
               {"eigenvalues", evs},
               {"eigenvalues_truncated", rep.eigenvalues.size() > cap},
               {"pass", pass}};
}

ojson state_json(const state_verdict& v) {
  return ojson{{"q_residual", v.q_residual},
               {"q_dag_residual", v.q_dag_residual},
               {"invariant", v.invariant},
               {"phi_delta", std::abs(v.phi_delta)}};
}

ojson check_states(const model_data& m) {
  region reg = model_region(m);
  susy_system sys(m.assignment, reg);
  charge_poly probe = charge_poly::annihilator(*reg.begin());
  state_vector vac = basis_state(sys.space, 0);
  state_vector fil = basis_state(sys.space, sys.space.dim() - 1);
  state_verdict v1 = verify_state_susy(sys, probe, vac);
  state_verdict v2 = verify_state_susy(sys, probe, fil);
  // exact functional route, independent of the representation
  charge_poly dprobe = apply_delta(m.assignment, probe);
  bool exact_vac = vacuum_expectation(dprobe).is_zero();
  bool exact_fil = filled_expectation(dprobe).is_zero();
  bool pass = v1.invariant && v2.invariant && std::abs(v1.phi_delta) <= 1e-12 &&
              std::abs(v2.phi_delta) <= 1e-12 && exact_vac && exact_fil;
  return ojson{{"check", "states"},
               {"vacuum", state_json(v1)},
               {"filled", state_json(v2)},
               {"vacuum_exact_zero", exact_vac},
               {"filled_exact_zero", exact_fil},
               {"pass", pass}};
}

ojson check_dynamics(const model_data& m) {
  region reg = model_region(m);
  cpoly A = to_numeric(charge_poly::annihilator(*reg.begin()));
  ojson out{{"check", "dynamics"}};
  bool pass = true;

  auto [s1, s2] = symmetrize(m.assignment);
  norm_data nc = norm_constants(s1);
  double t_cert = nc.series_time / 2.0;
  evolution_result certified = lie_series_evolve(m.assignment, reg, A, t_cert, m.params.tol);
  out["analytic_radius"] = ojson{{"time", certified.time},
                                 {"substeps", certified.substeps},
                                 {"order", certified.order_used},
                                 {"error_bound", certified.error_bound},
                                 {"converged", certified.converged}};
  pass = pass && certified.converged;

  window_evolution w = window_evolve(m.assignment, reg, A, m.params.time, m.params.tol);
  double dist = conjugation_distance(m.assignment, reg, A, w.observable, m.params.time,
                                     boundary_mode::interior);
  ojson wj{{"time", w.time},
           {"order", w.order_used},
           {"generator_norm", w.generator_norm},
           {"norm_is_l1", w.norm_is_l1},
           {"error_bound", w.error_bound},
           {"converged", w.converged}};
  if (dist >= 0.0) {
    wj["conjugation_distance"] = dist;
    wj["within_bound"] = dist <= w.error_bound + 1e-10;
    pass = pass && dist <= w.error_bound + 1e-10;
  }
  out["volume_norm"] = wj;
  pass = pass && w.converged;
  out["constants"] = ojson{{"overlap_weight", nc.overlap_weight},
                           {"log_growth", nc.log_growth},
                           {"series_time", nc.series_time}};
  out["pass"] = pass;
  return out;
}

ojson check_face(const model_data& m) {
  susy_system sys(m.assignment, model_region(m));
  face_check_data f =
      check_face_property(sys, m.params.ensembles, 0.05, 1e-10, m.params.seed);
  return ojson{{"check", "face"},
               {"ensembles", f.ensembles},
               {"components", f.components},
               {"max_residual", f.max_residual},
               {"face_holds", f.face_holds},
               {"contaminated_residual", f.contaminated_residual},
               {"contamination_flagged", f.contamination_flagged},
               {"pass", f.face_holds && f.contamination_flagged}};
}

ojson check_affiliation_cmd(const model_data& m) {
  susy_system sys(m.assignment, model_region(m));
  affiliation_data d = check_affiliation(sys);
  return ojson{{"check", "affiliation"},
               {"commutant_residual", d.commutant_residual},
               {"affiliated", d.affiliated},
               {"control_residual", d.control_residual},
               {"control_detected", d.control_detected},
               {"pass", d.affiliated && d.control_detected}};
}

ojson check_case2(const model_data& m) {
  int g = m.params.grid;
  if (g < 64 || (g & (g - 1)))
    throw std::runtime_error("grid must be a power of two, at least 64");
  double dx = 0.02, x0 = -0.5 * g * dx;
  qft::grid_function f = qft::grid_function::gaussian(g, x0, dx, 0.0, 1.0);
  qft::grid_function gg = qft::grid_function::gaussian(g, x0, dx, 0.4, 1.2);
  qft::grid_function narrow = qft::grid_function::gaussian(g, x0, dx, 0.0, 0.5);
  double dp = m.params.momentum;
  bool pass = true;
  ojson out{{"check", "case2"},
            {"modes", m.params.modes},
            {"cutoff", m.params.cutoff},
            {"grid", g},
            {"momentum_step", dp}};

  qft::qft_space s = qft::build_space(m.params.modes, m.params.cutoff, dp);
  out["dim"] = s.dim;

  qft::resolvent_report rr = qft::check_resolvent_relations(s, f, gg, 1.3, -0.7);
  ojson rj{{"definition", rr.definition},
           {"identity", rr.identity},
           {"adjointness", rr.adjointness},
           {"smearing", rr.smearing},
           {"norm_excess", rr.norm_excess},
           {"ccr", rr.ccr}};
  bool rpass = rr.definition <= 1e-12 && rr.identity <= 1e-12 && rr.adjointness <= 1e-12 &&
               rr.smearing <= 1e-12 && rr.norm_excess <= 1e-12;
  ojson sweep = ojson::array();
  double prev = std::numeric_limits<double>::infinity();
  for (int M : {2, 4, 8}) {
    qft::qft_space sm = qft::build_space(1, M, dp);
    qft::resolvent_report r1 = qft::check_resolvent_relations(sm, f, gg, 1.3, -0.7);
    sweep.push_back(ojson{{"cutoff", M}, {"ccr", r1.ccr}, {"ccr_on_vacuum", r1.ccr_on_vacuum}});
    rpass = rpass && r1.ccr < prev;
    prev = r1.ccr;
  }
  rj["ccr_sweep"] = sweep;
  rj["pass"] = rpass;
  out["resolvent"] = rj;
  pass = pass && rpass;

  qft::stein_report st = qft::superderivation_case2(s, f, gg, 3.0);
  ojson sj{{"minus_on_vacuum", st.minus_on_vacuum},
           {"plus_on_vacuum", st.plus_on_vacuum},
           {"phi_minus", st.phi_minus},
           {"phi_plus", st.phi_plus},
           {"phi_abstract", st.phi_abstract}};
  ojson msweep = ojson::array();
  prev = std::numeric_limits<double>::infinity();
  bool spass = st.phi_minus <= 1e-4 && st.phi_abstract <= 1e-12 &&
               st.plus_on_vacuum > 10.0 * st.minus_on_vacuum;
  for (int M : {2, 4, 8}) {
    qft::qft_space sm = qft::build_space(1, M, dp);
    qft::stein_report s1r = qft::superderivation_case2(sm, f, gg, 3.0);
    msweep.push_back(ojson{{"cutoff", M},
                           {"minus_on_vacuum", s1r.minus_on_vacuum},
                           {"plus_on_vacuum", s1r.plus_on_vacuum}});
    spass = spass && s1r.minus_on_vacuum < prev;
    prev = s1r.minus_on_vacuum;
  }
  sj["cap_sweep"] = msweep;
  sj["pass"] = spass;
  out["superderivation"] = sj;
  pass = pass && spass;

  qft::wick_report wk = qft::susy_state_wick_check(s, f, gg);
  bool wpass = wk.wick_residual <= 1e-8 && wk.fermion_match <= 1e-12 && wk.boson_match <= 1e-12;
  out["wick"] = ojson{{"residual", wk.wick_residual},
                      {"fermion_match", wk.fermion_match},
                      {"boson_match", wk.boson_match},
                      {"pass", wpass}};
  pass = pass && wpass;

  qft::qft_space sl = qft::build_space(1, 8, dp);
  std::vector<double> lams = {1.0, 10.0, 100.0};
  qft::mollifier_report mr = qft::mollifier_convergence(
      sl, narrow, lams, dense_matrix::Identity(sl.dim, sl.dim));
  qft::mollified_derivation_report md = qft::check_mollified_derivation(sl, narrow, lams);
  bool mpass = mr.strictly_decreasing && mr.within_bound && md.strictly_decreasing;
  for (double sk : md.slacks) mpass = mpass && sk == 0.0;
  out["mollifier"] = ojson{{"lambdas", lams},
                           {"identity_residuals", mr.residuals},
                           {"identity_decreasing", mr.strictly_decreasing},
                           {"derivation_values", md.values},
                           {"derivation_bounds", md.bounds},
                           {"derivation_slacks", md.slacks},
                           {"gradient_rate", md.gradient_rate},
                           {"derivation_decreasing", md.strictly_decreasing},
                           {"pass", mpass}};
  pass = pass && mpass;

  out["pass"] = pass;
  return out;
}

ojson run_check(const model_data& m, const std::string& name) {
  if (name == "nilpotent") return check_nilpotent_cmd(m);
  if (name == "leibniz") return check_leibniz(m);
  if (name == "susy-algebra") return check_susy_algebra(m);
  if (name == "spectrum") return check_spectrum(m);
  if (name == "states") return check_states(m);
  if (name == "dynamics") return check_dynamics(m);
  if (name == "face") return check_face(m);
  if (name == "affiliation") return check_affiliation_cmd(m);
  if (name == "case2") return check_case2(m);
  throw std::runtime_error("unknown check '" + name + "'");
}

// ---- report plumbing ---------------------------------------------------

ojson base_report(const std::string& command, const model_data& m) {
  return ojson{{"schema", "susylat-report/1"},
               {"command", command},
               {"model", m.assignment.name},
               {"seed", m.params.seed}};
}

void emit(const ojson& report, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << report.dump(2) << "\n";
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + out_path + "'");
    out << report.dump(2) << "\n";
  }
}

int default_jobs() {
  if (const char* env = std::getenv("SUSYLAT_JOBS")) {
    int j = std::atoi(env);
    if (j >= 1) return j;
  }
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"supersymmetric lattice fermion verification suite"};
  app.require_subcommand(1);

  std::string model_path, out_path, mtx_path;
  std::vector<int> region_opt;
  double time_opt = std::numeric_limits<double>::quiet_NaN();
  double tol_opt = 0.0;
  int modes_opt = 0, cutoff_opt = 0, grid_opt = 0, jobs_opt = 0;
  std::vector<std::string> checks_opt;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("model", model_path, "model definition file")->required();
    sub->add_option("--out", out_path, "write the JSON report to a file");
  };
  auto add_region = [&](CLI::App* sub) {
    sub->add_option("--region", region_opt, "override the model region (lo hi)")
        ->expected(2);
  };

  CLI::App* c_validate = app.add_subcommand("validate", "parse and echo the model");
  add_common(c_validate);
  CLI::App* c_nil = app.add_subcommand("nilpotent", "exact nilpotency verdict");
  add_common(c_nil);
  CLI::App* c_charges = app.add_subcommand("charges", "local charge of a region");
  add_common(c_charges);
  add_region(c_charges);
  CLI::App* c_ham = app.add_subcommand("hamiltonian", "represented time generator");
  add_common(c_ham);
  add_region(c_ham);
  c_ham->add_option("--export-mtx", mtx_path, "write the generator in Matrix Market form");
  CLI::App* c_spectrum = app.add_subcommand("spectrum", "parity-split spectrum and pairing");
  add_common(c_spectrum);
  add_region(c_spectrum);
  CLI::App* c_evolve = app.add_subcommand("evolve", "certified series evolution");
  add_common(c_evolve);
  add_region(c_evolve);
  c_evolve->add_option("--time", time_opt, "evolution time");
  c_evolve->add_option("--tol", tol_opt, "certified tail tolerance");
  CLI::App* c_states = app.add_subcommand("states", "empty and filled state invariance");
  add_common(c_states);
  add_region(c_states);
  CLI::App* c_face = app.add_subcommand("face", "convex decompositions of invariant states");
  add_common(c_face);
  add_region(c_face);
  CLI::App* c_case2 = app.add_subcommand("case2", "continuum pair checks");
  add_common(c_case2);
  c_case2->add_option("--modes", modes_opt, "number of momentum modes");
  c_case2->add_option("--cutoff", cutoff_opt, "boson occupation cap");
  c_case2->add_option("--grid", grid_opt, "sample count of the smearing grid");
  CLI::App* c_suite = app.add_subcommand("suite", "run the model's check list");
  add_common(c_suite);
  add_region(c_suite);
  c_suite->add_option("--checks", checks_opt, "override the model's suite selection");
  c_suite->add_option("--jobs", jobs_opt, "concurrent checks (default SUSYLAT_JOBS or 2)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  CLI::App* sub = app.get_subcommands().front();
  const std::string command = sub->get_name();

  try {
    model_data m = parse_model(read_file(model_path));
    if (region_opt.size() == 2) {
      if (region_opt[1] < region_opt[0])
        throw std::runtime_error("region upper end below lower end");
      m.params.region_lo = region_opt[0];
      m.params.region_hi = region_opt[1];
    }
    if (!std::isnan(time_opt)) m.params.time = time_opt;
    if (tol_opt > 0.0) m.params.tol = tol_opt;
    if (modes_opt > 0) m.params.modes = modes_opt;
    if (cutoff_opt > 0) m.params.cutoff = cutoff_opt;
    if (grid_opt > 0) m.params.grid = grid_opt;

    ojson report = base_report(command, m);
    bool pass = true;
    auto t_start = std::chrono::steady_clock::now();

    if (command == "validate") {
      ojson pats = ojson::array();
      for (const charge_pattern& p : m.assignment.patterns)
        pats.push_back(ojson{{"sites", region_json(p.supp)},
                             {"polynomial", to_string(p.value)},
                             {"terms", p.value.size()}});
      report["results"] = ojson{{"name", m.assignment.name},
                                {"dimension", m.assignment.dimension},
                                {"period", m.assignment.period},
                                {"range", m.assignment.range},
                                {"patterns", pats},
                                {"suites", m.suites},
                                {"region", {m.params.region_lo, m.params.region_hi}},
                                {"round_trip", parse_model(serialize(m)).assignment.patterns.size() ==
                                                   m.assignment.patterns.size()}};
    } else if (command == "nilpotent") {
      report["results"] = check_nilpotent_cmd(m);
      pass = report["results"]["pass"];
    } else if (command == "charges") {
      region reg = model_region(m);
      charge_poly c = local_charge(m.assignment, reg);
      bool l1 = false;
      double nrm = certified_norm(c, l1);
      report["results"] = ojson{{"region", region_json(reg)},
                                {"charge", poly_json(c)},
                                {"patterns_meeting", patterns_meeting(m.assignment, reg).size()},
                                {"norm", nrm},
                                {"norm_is_l1", l1}};
    } else if (command == "hamiltonian") {
      susy_system sys(m.assignment, model_region(m));
      report["results"] = ojson{{"dim", sys.space.dim()},
                                {"sites", sys.domain.size()},
                                {"nonzeros", sys.h.nonZeros()},
                                {"norm", operator_norm(sys.h)},
                                {"patterns", sys.pattern_count}};
      if (!mtx_path.empty()) {
        std::ofstream mtx(mtx_path, std::ios::binary);
        if (!mtx) throw std::runtime_error("cannot write '" + mtx_path + "'");
        write_matrix_market(mtx, sys.h);
        report["results"]["exported"] = mtx_path;
      }
    } else if (command == "spectrum") {
      report["results"] = check_spectrum(m);
      pass = report["results"]["pass"];
    } else if (command == "evolve") {
      region reg = model_region(m);
      cpoly A = to_numeric(charge_poly::annihilator(*reg.begin()));
      ojson res;
      try {
        evolution_result er = lie_series_evolve(m.assignment, reg, A, m.params.time, m.params.tol);
        res = ojson{{"certificate", "analytic-radius"},
                    {"time", er.time},
                    {"substeps", er.substeps},
                    {"order", er.order_used},
                    {"error_bound", er.error_bound},
                    {"converged", er.converged},
                    {"result_l1", er.l1},
                    {"support_sites", er.supp.size()}};
        pass = er.converged;
        double dist = conjugation_distance(m.assignment, reg, A, er.observable, m.params.time,
                                           boundary_mode::interior);
        if (dist >= 0.0) {
          res["conjugation_distance"] = dist;
          res["within_bound"] = dist <= er.error_bound + 1e-10;
          pass = pass && dist <= er.error_bound + 1e-10;
        }
      } catch (const std::domain_error& e) {
        // beyond the analytic radius: certify with the volume norm instead
        window_evolution w = window_evolve(m.assignment, reg, A, m.params.time, m.params.tol);
        res = ojson{{"certificate", "volume-norm"},
                    {"analytic_radius_note", e.what()},
                    {"time", w.time},
                    {"order", w.order_used},
                    {"generator_norm", w.generator_norm},
                    {"norm_is_l1", w.norm_is_l1},
                    {"error_bound", w.error_bound},
                    {"converged", w.converged},
                    {"result_l1", l1_norm(w.observable)}};
        pass = w.converged;
        double dist = conjugation_distance(m.assignment, reg, A, w.observable, m.params.time,
                                           boundary_mode::interior);
        if (dist >= 0.0) {
          res["conjugation_distance"] = dist;
          res["within_bound"] = dist <= w.error_bound + 1e-10;
          pass = pass && dist <= w.error_bound + 1e-10;
        }
      }
      report["results"] = res;
    } else if (command == "states") {
      report["results"] = check_states(m);
      pass = report["results"]["pass"];
    } else if (command == "face") {
      report["results"] = check_face(m);
      pass = report["results"]["pass"];
    } else if (command == "case2") {
      report["results"] = check_case2(m);
      pass = report["results"]["pass"];
    } else if (command == "suite") {
      std::vector<std::string> names = checks_opt.empty() ? m.suites : checks_opt;
      if (names.empty()) throw std::runtime_error("model lists no checks and --checks is empty");
      int jobs = jobs_opt >= 1 ? jobs_opt : default_jobs();
      report["jobs"] = jobs;
      std::vector<ojson> results(names.size());
      std::vector<double> millis(names.size(), 0.0);
      std::atomic<std::size_t> next{0};
      std::vector<std::string> errors(names.size());
      auto worker = [&] {
        for (;;) {
          std::size_t i = next.fetch_add(1);
          if (i >= names.size()) break;
          auto t0 = std::chrono::steady_clock::now();
          try {
            results[i] = run_check(m, names[i]);
          } catch (const std::exception& e) {
            errors[i] = e.what();
          }
          millis[i] = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - t0)
                          .count();
        }
      };
      std::vector<std::thread> pool;
      int n_threads = std::min<int>(jobs, static_cast<int>(names.size()));
      for (int tIdx = 0; tIdx < n_threads; ++tIdx) pool.emplace_back(worker);
      for (std::thread& th : pool) th.join();
      for (const std::string& err : errors)
        if (!err.empty()) throw std::runtime_error(err);
      ojson arr = ojson::array();
      ojson timing;
      for (std::size_t i = 0; i < names.size(); ++i) {
        pass = pass && results[i].value("pass", false);
        arr.push_back(results[i]);
        timing[names[i]] = millis[i];
      }
      report["checks"] = arr;
      report["timing_ms"] = timing;
    }

    report["pass"] = pass;
    if (command != "suite")
      report["timing_ms"] = ojson{{command, std::chrono::duration<double, std::milli>(
                                                 std::chrono::steady_clock::now() - t_start)
                                                 .count()}};
    emit(report, out_path);
    return pass ? 0 : 1;
  } catch (const parse_error& e) {
    ojson err{{"schema", "susylat-report/1"},
              {"command", command},
              {"error", ojson{{"message", e.what()}, {"line", e.line}, {"column", e.column}}},
              {"pass", false}};
    emit(err, out_path.empty() ? std::string() : out_path);
    return 2;
  } catch (const std::exception& e) {
    ojson err{{"schema", "susylat-report/1"},
              {"command", command},
              {"error", ojson{{"message", e.what()}}},
              {"pass", false}};
    emit(err, out_path.empty() ? std::string() : out_path);
    return 2;
  }
}
