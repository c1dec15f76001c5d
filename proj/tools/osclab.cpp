// osclab: lattice stopping-time construction, measure/function-class checks,
// oscillation classification, and the growth-chain experiment harness.

#include <CLI11.hpp>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "osclab/report.hpp"
#include "osclab/rng.hpp"

namespace {

using namespace osclab;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

std::uint64_t resolve_seed(std::uint64_t cli_seed, bool seed_set) {
  if (seed_set) return cli_seed;
  if (const char* env = std::getenv("OSCLAB_SEED")) return std::strtoull(env, nullptr, 10);
  return 1;
}

void emit(const json& j, const std::string& out_path, bool no_timestamp) {
  json report = j;
  if (!no_timestamp) {
    report["timestamp"] = std::chrono::duration_cast<std::chrono::seconds>(
                              std::chrono::system_clock::now().time_since_epoch())
                              .count();
  }
  std::string text = report.dump(2);
  text.push_back('\n');
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
  } else {
    std::ofstream f(out_path);
    if (!f) throw std::runtime_error("cannot open output file: " + out_path);
    f << text;
  }
}

DensityGrid make_density(const std::string& omega_spec, const std::string& density_file,
                         const SampleGrid& g) {
  if (!density_file.empty()) {
    std::ifstream f(density_file, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open density file: " + density_file);
    return DensityGrid::load(f);
  }
  auto colon = omega_spec.find(':');
  std::string fam = omega_spec.substr(0, colon);
  std::string args = colon == std::string::npos ? "" : omega_spec.substr(colon + 1);
  if (fam == "uniform") return DensityGrid::uniform(g, args.empty() ? 1.0 : std::stod(args));
  if (fam == "abs") return DensityGrid::abs_power(g, std::stod(args));
  if (fam == "cosbump") return DensityGrid::cos_bump(g, args.empty() ? 8 : std::stoi(args));
  throw std::runtime_error("unknown omega spec: " + omega_spec);
}

RogueSet load_rogue(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open rogue set file: " + path);
  return RogueSet::load(f);
}

struct PipelineArgs {
  double eps = 0.1, r0 = 4.0, c0 = 0.05, alpha = 0.0;
  int margin = 0, threads = 1;

  void attach(CLI::App* cmd) {
    cmd->add_option("--eps", eps, "density threshold epsilon");
    cmd->add_option("--r0", r0, "minimal scale r0 (> 1)");
    cmd->add_option("--c0", c0, "rogue budget fraction");
    cmd->add_option("--alpha", alpha, "step constant override (0 = derive)");
    cmd->add_option("--margin", margin, "boundary margin override (0 = default)");
    cmd->add_option("--threads", threads, "worker pool size");
  }
};

std::vector<double> parse_radii(const std::string& spec) {
  std::vector<double> out;
  std::istringstream is(spec);
  std::string tok;
  while (std::getline(is, tok, ',')) out.push_back(std::stod(tok));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lattice stopping-time and oscillating-function lab"};
  app.require_subcommand(1);
  app.fallthrough();

  std::uint64_t seed = 1;
  bool no_timestamp = false;
  std::string out_path;
  auto* seed_opt = app.add_option("--seed", seed, "root RNG seed (fallback: OSCLAB_SEED env)");
  app.add_flag("--no-timestamp", no_timestamp, "omit the timestamp for byte-identical reports");
  app.add_option("--out", out_path, "report output path ('-' = stdout)");

  // gen-rogue
  auto* gen = app.add_subcommand("gen-rogue", "sample a random rogue set file");
  int gen_d = 2, gen_n = 64;
  long long gen_count = 40;
  gen->add_option("--d", gen_d, "dimension")->required();
  gen->add_option("--n", gen_n, "lattice side N")->required();
  gen->add_option("--count", gen_count, "number of rogue cubes")->required();

  // construct
  auto* cons = app.add_subcommand("construct", "run the stopping-time construction");
  std::string cons_rogue;
  PipelineArgs cons_args;
  cons->add_option("--rogue", cons_rogue, "rogue set file")->required();
  cons_args.attach(cons);

  // verify
  auto* ver = app.add_subcommand("verify", "construct and verify every lemma property");
  std::string ver_rogue;
  PipelineArgs ver_args;
  ver->add_option("--rogue", ver_rogue, "rogue set file")->required();
  ver_args.attach(ver);

  // check-measure
  auto* meas = app.add_subcommand("check-measure", "psi-condition / A_p checks for a density");
  std::string meas_omega = "uniform", meas_density, meas_psi = "linear:1";
  int meas_d = 2, meas_n = 8, meas_s = 32;
  long long meas_trials = 1000;
  bool meas_fit = false;
  double meas_ap = 0.0;
  meas->add_option("--omega", meas_omega, "builtin density: uniform[:v] | abs:alpha | cosbump[:kmax]");
  meas->add_option("--density", meas_density, "density file (overrides --omega)");
  meas->add_option("--psi", meas_psi, "psi spec: linear:slope | power:c,q");
  meas->add_option("--d", meas_d, "dimension");
  meas->add_option("--n", meas_n, "domain side N");
  meas->add_option("--s", meas_s, "samples per unit per axis");
  meas->add_option("--trials", meas_trials, "random trials");
  meas->add_flag("--fit", meas_fit, "grid-search a power psi certificate");
  meas->add_option("--ap", meas_ap, "estimate the Muckenhoupt constant for this p");

  // check-fclass
  auto* fc = app.add_subcommand("check-fclass", "membership checks for F(A,B,mu)");
  std::string fc_family = "constant", fc_omega = "uniform", fc_u_file;
  double fc_A = 1.0, fc_B = 1.0, fc_r0mv = 1.0, fc_tol = 1e-3;
  int fc_d = 2, fc_n = 8, fc_s = 16;
  long long fc_trials = 500;
  bool fc_eq4 = false, fc_harnack = false, fc_calibrate = false;
  double fc_value = 1.0;
  fc->add_option("--family", fc_family, "test function family");
  fc->add_option("--u", fc_u_file, "grid function file (overrides --family)");
  fc->add_option("--omega", fc_omega, "density spec");
  fc->add_option("--A", fc_A, "max principle constant");
  fc->add_option("--B", fc_B, "mean value constant");
  fc->add_option("--r0-mv", fc_r0mv, "minimal mean value radius");
  fc->add_option("--tol", fc_tol, "comparison tolerance");
  fc->add_option("--d", fc_d, "dimension");
  fc->add_option("--n", fc_n, "domain side N");
  fc->add_option("--s", fc_s, "samples per unit per axis");
  fc->add_option("--trials", fc_trials, "random trials");
  fc->add_option("--value", fc_value, "constant family value");
  fc->add_flag("--eq4", fc_eq4, "also run the weighted-average equality check");
  fc->add_flag("--harnack", fc_harnack, "run the Harnack-implies-membership check");
  fc->add_flag("--calibrate", fc_calibrate, "calibrate log-poly-zeros oscillation");

  // classify
  auto* cls = app.add_subcommand("classify", "P1/P2 classification and rogue-set export");
  std::string cls_family = "log-sin", cls_u_file, cls_omega = "uniform", cls_f = "power:1,2";
  std::string cls_export;
  double cls_delta = 0.05;
  int cls_d = 2, cls_n = 16, cls_s = 16;
  bool cls_calibrate = false;
  cls->add_option("--family", cls_family, "test function family");
  cls->add_option("--u", cls_u_file, "grid function file (overrides --family)");
  cls->add_option("--omega", cls_omega, "density spec");
  cls->add_option("--delta", cls_delta, "P2 threshold Delta");
  cls->add_option("--f", cls_f, "budget function spec");
  cls->add_option("--d", cls_d, "dimension");
  cls->add_option("--n", cls_n, "domain side N");
  cls->add_option("--s", cls_s, "samples per unit per axis");
  cls->add_option("--export-rogue", cls_export, "write the rogue set to this file");
  cls->add_flag("--calibrate", cls_calibrate, "calibrate log-poly-zeros oscillation");

  // experiment
  auto* exp = app.add_subcommand("experiment", "classification -> lemma pipeline -> growth chain");
  std::string exp_family = "log-poly-zeros", exp_u_file, exp_omega = "uniform", exp_f = "power:1,2";
  std::string exp_radii = "4,8,16", exp_report;
  double exp_delta = 0.05, exp_A = 1.0, exp_B = 1.0, exp_tol = 1e-3;
  int exp_d = 2, exp_n = 64, exp_s = 8;
  long long exp_centers = 200;
  bool exp_calibrate = false;
  PipelineArgs exp_args;
  std::string exp_psi = "linear:1";
  exp->add_option("--family", exp_family, "test function family");
  exp->add_option("--u", exp_u_file, "grid function file (overrides --family)");
  exp->add_option("--omega", exp_omega, "density spec");
  exp->add_option("--f", exp_f, "budget function spec");
  exp->add_option("--radii", exp_radii, "comma-separated growth curve radii");
  exp->add_option("--delta", exp_delta, "P2 threshold Delta");
  exp->add_option("--A", exp_A, "max principle constant");
  exp->add_option("--B", exp_B, "mean value constant");
  exp->add_option("--psi", exp_psi, "psi spec for the closure inequality");
  exp->add_option("--tol", exp_tol, "chain comparison tolerance");
  exp->add_option("--d", exp_d, "dimension");
  exp->add_option("--n", exp_n, "domain side N");
  exp->add_option("--s", exp_s, "samples per unit per axis");
  exp->add_option("--chain-centers", exp_centers, "max chain walk centers");
  exp->add_option("--report", exp_report, "JSON report path (the --out CSV holds the curve)");
  exp->add_flag("--calibrate", exp_calibrate, "calibrate log-poly-zeros oscillation");
  exp_args.attach(exp);

  CLI11_PARSE(app, argc, argv);
  std::uint64_t root_seed = resolve_seed(seed, seed_opt->count() > 0);

  try {
    if (gen->parsed()) {
      LatticeParams lat = LatticeParams::make(gen_d, gen_n);
      if (gen_count > lat.cube_count())
        throw std::runtime_error("gen-rogue: count exceeds N^d");
      SplitMix64 rng(root_seed);
      std::set<BasicCube> chosen;
      while (static_cast<long long>(chosen.size()) < gen_count) {
        BasicCube c{};
        for (int i = 0; i < gen_d; ++i)
          c[i] = static_cast<int>(rng.uniform_int(-lat.half(), lat.half() - 1));
        chosen.insert(c);
      }
      RogueSet rs = RogueSet::build(lat, {chosen.begin(), chosen.end()});
      if (out_path.empty() || out_path == "-") {
        rs.save(std::cout);
      } else {
        std::ofstream f(out_path);
        if (!f) throw std::runtime_error("cannot open output file: " + out_path);
        rs.save(f);
      }
      return kExitPass;
    }

    if (cons->parsed() || ver->parsed()) {
      const bool verifying = ver->parsed();
      const PipelineArgs& pa = verifying ? ver_args : cons_args;
      RogueSet rs = load_rogue(verifying ? ver_rogue : cons_rogue);
      LatticeParams lat = LatticeParams::make(rs.lattice().d, rs.lattice().N, pa.margin);
      StoppingParams sp = StoppingParams::make(lat.d, pa.eps, pa.r0, pa.c0, pa.alpha);
      Pipeline pl = Pipeline::construct(lat, std::move(rs), sp, pa.threads);
      json report = pipeline_report(pl);
      report["command"] = verifying ? "verify" : "construct";
      report["seed"] = root_seed;
      emit(report, out_path, no_timestamp);
      if (verifying) {
        LemmaReport rep = run_verifiers(pl, pa.threads);
        return rep.all_assertables_pass() ? kExitPass : kExitFail;
      }
      return kExitPass;
    }

    if (meas->parsed()) {
      SampleGrid g = SampleGrid::make(meas_d, meas_n, meas_s);
      DensityGrid w = make_density(meas_omega, meas_density, g);
      PsiFunction psi = PsiFunction::parse(meas_psi);
      MembershipVerdict verdict = check_psi_condition(w, psi, meas_trials, root_seed);
      json report{{"command", "check-measure"},
                  {"omega", meas_density.empty() ? meas_omega : meas_density},
                  {"psi", psi.describe()},
                  {"grid", json{{"d", g.d}, {"N", g.N}, {"s", g.s}}},
                  {"seed", root_seed},
                  {"verdict", to_json(verdict)}};
      if (meas_fit) {
        PowerPsiFit fit = fit_power_psi(w, meas_trials, root_seed);
        json jf{{"found", fit.found}};
        if (fit.found) {
          jf["c"] = fit.c;
          jf["q"] = fit.q;
        } else {
          jf["last_verdict"] = to_json(fit.last_verdict);
        }
        report["power_psi_fit"] = jf;
      }
      if (meas_ap > 1.0) report["ap_constant"] = ap_constant(w, meas_ap, meas_trials, root_seed);
      emit(report, out_path, no_timestamp);
      return verdict.passed ? kExitPass : kExitFail;
    }

    if (fc->parsed()) {
      SampleGrid g = SampleGrid::make(fc_d, fc_n, fc_s);
      GridFunction u = [&] {
        if (!fc_u_file.empty()) {
          std::ifstream f(fc_u_file, std::ios::binary);
          if (!f) throw std::runtime_error("cannot open grid function file: " + fc_u_file);
          return GridFunction::load(f);
        }
        TestFunctionParams tp;
        tp.value = fc_value;
        tp.calibrate = fc_calibrate;
        return generate_test_function(parse_family(fc_family), tp, root_seed, g);
      }();
      DensityGrid w = make_density(fc_omega, "", u.grid);
      CheckVerdict mx = check_weak_max(u, fc_A, fc_trials, mix_seed(root_seed, 1), fc_tol);
      CheckVerdict mv = check_mean_value(u, w, fc_B, fc_r0mv, fc_trials, mix_seed(root_seed, 2), fc_tol);
      json report{{"command", "check-fclass"},
                  {"family", fc_u_file.empty() ? fc_family : fc_u_file},
                  {"A", fc_A},
                  {"B", fc_B},
                  {"grid", json{{"d", u.grid.d}, {"N", u.grid.N}, {"s", u.grid.s}}},
                  {"seed", root_seed},
                  {"weak_max", to_json(mx)},
                  {"mean_value", to_json(mv)}};
      bool ok = mx.passed && mv.passed;
      if (fc_eq4) {
        CheckVerdict wa = check_weighted_average(u, w, fc_r0mv, fc_trials, mix_seed(root_seed, 3), fc_tol);
        report["weighted_average"] = to_json(wa);
        ok = ok && wa.passed;
      }
      if (fc_harnack) {
        HarnackVerdict hv = check_harnack_implies_membership(u, fc_trials, mix_seed(root_seed, 4), fc_tol);
        report["harnack"] = to_json(hv);
        ok = ok && (!hv.applicable || hv.passed());
      }
      emit(report, out_path, no_timestamp);
      return ok ? kExitPass : kExitFail;
    }

    if (cls->parsed()) {
      SampleGrid g = SampleGrid::make(cls_d, cls_n, cls_s);
      GridFunction u = [&] {
        if (!cls_u_file.empty()) {
          std::ifstream f(cls_u_file, std::ios::binary);
          if (!f) throw std::runtime_error("cannot open grid function file: " + cls_u_file);
          return GridFunction::load(f);
        }
        TestFunctionParams tp;
        tp.calibrate = cls_calibrate;
        return generate_test_function(parse_family(cls_family), tp, root_seed, g);
      }();
      DensityGrid w = make_density(cls_omega, "", u.grid);
      BudgetFunction f = BudgetFunction::parse(cls_f);
      OscillationReport rep = classify(u, w, cls_delta, f);
      if (!cls_export.empty()) {
        RogueSet rs = RogueSet::build(rep.lat, rep.rogue_cubes());
        std::ofstream out(cls_export);
        if (!out) throw std::runtime_error("cannot open rogue export file: " + cls_export);
        rs.save(out);
      }
      json report = oscillation_report_json(rep);
      report["command"] = "classify";
      report["seed"] = root_seed;
      emit(report, out_path, no_timestamp);
      return kExitPass;
    }

    if (exp->parsed()) {
      SampleGrid g = SampleGrid::make(exp_d, exp_n, exp_s);
      GridFunction u = [&] {
        if (!exp_u_file.empty()) {
          std::ifstream f(exp_u_file, std::ios::binary);
          if (!f) throw std::runtime_error("cannot open grid function file: " + exp_u_file);
          return GridFunction::load(f);
        }
        TestFunctionParams tp;
        tp.calibrate = exp_calibrate;
        return generate_test_function(parse_family(exp_family), tp, root_seed, g);
      }();
      DensityGrid w = make_density(exp_omega, "", u.grid);
      BudgetFunction f = BudgetFunction::parse(exp_f);
      OscillationReport orep = classify(u, w, exp_delta, f);

      LatticeParams lat = LatticeParams::make(g.d, g.N, exp_args.margin);
      StoppingParams sp = StoppingParams::make(lat.d, exp_args.eps, exp_args.r0, exp_args.c0,
                                               exp_args.alpha);
      RogueSet rogue = RogueSet::build(lat, orep.rogue_cubes());
      Pipeline pl = Pipeline::construct(lat, std::move(rogue), sp, exp_args.threads);

      ClassParams cp = ClassParams::make(exp_A, exp_B, 1.0, exp_delta);
      PsiFunction psi = PsiFunction::parse(exp_psi);
      ChainReport chain = run_chain(pl, u, w, cp, psi, root_seed, exp_centers, exp_tol);
      GrowthCurve curve = growth_curve(u, f, parse_radii(exp_radii), exp_args.eps);

      if (!out_path.empty() && out_path != "-") {
        std::ofstream csv(out_path);
        if (!csv) throw std::runtime_error("cannot open output file: " + out_path);
        write_curve_csv(csv, curve);
      } else {
        write_curve_csv(std::cout, curve);
      }
      json report{{"command", "experiment"},
                  {"seed", root_seed},
                  {"classification", oscillation_report_json(orep)},
                  {"pipeline", pipeline_report(pl)},
                  {"chain", to_json(chain)},
                  {"curve", to_json(curve)}};
      if (!exp_report.empty()) emit(report, exp_report, no_timestamp);

      bool ok = chain.monotone && chain.flagged_steps == 0;
      return ok ? kExitPass : kExitFail;
    }
  } catch (const BudgetError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
