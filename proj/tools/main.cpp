// riskq: distortion / Orlicz-Lorentz / Haezendonck-Goovaerts risk measures
// on quantile-represented distributions, plus the property-test suites.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "riskq/harness.hpp"
#include "riskq/json_io.hpp"
#include "riskq/orders.hpp"
#include "riskq/premium.hpp"
#include "riskq/risk_measures.hpp"

using namespace riskq;
using io::JsonArray;
using io::JsonObject;

namespace {

std::string slurp(std::istream& in) {
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string readInput(const std::string& arg) {
  if (arg == "-") return slurp(std::cin);
  if (!arg.empty() && arg.front() == '{') return arg;
  std::ifstream f(arg);
  if (!f) throw ValidationError("cannot open input file: " + arg);
  return slurp(f);
}

bool looksCsv(const std::string& arg) {
  if (arg == "-") return true;
  return arg.size() > 4 && arg.substr(arg.size() - 4) == ".csv";
}

Distribution loadDist(const std::string& arg) {
  std::string text = readInput(arg);
  if (looksCsv(arg)) return io::parseCsvSamples(text);
  return io::parseDistribution(text);
}

struct CommonOpts {
  std::string dist;
  std::string g = "{\"type\":\"identity\"}";
  std::string phi = "{\"type\":\"identity\"}";
  double alpha = 0.0;
  double tol = 1e-10, xtol = 1e-9, ftol = 1e-7;
  std::uint64_t seed = 42, trials = 1000;
  int jobs = 0;
  std::string out;
  std::string format = "json";
  std::string emit_sigma;
  std::string filter;
  std::string op = "sl";
  std::string dist2;
  std::string problem = "coh";
  double deductible = 0.0;
  std::uint64_t n = 64;
};

void addIoFlags(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--seed", o.seed, "deterministic seed (part of the input surface)");
  cmd->add_option("--out", o.out, "write the result to this path instead of stdout");
  cmd->add_option("--format", o.format, "json|csv")
      ->check(CLI::IsMember({"json", "csv"}));
}

void addModelFlags(CLI::App* cmd, CommonOpts& o, bool need_g, bool need_phi) {
  cmd->add_option("--dist", o.dist,
                  "distribution: JSON file, inline JSON, *.csv samples, or - "
                  "for CSV on stdin")
      ->required();
  if (need_g) cmd->add_option("--g", o.g, "distortion function spec (JSON)");
  if (need_phi) cmd->add_option("--phi", o.phi, "Young function spec (JSON)");
}

JsonObject tolerancesJson(const CommonOpts& o, bool with_hg) {
  JsonObject t;
  t.set("tol", o.tol);
  if (with_hg) {
    t.set("xtol", o.xtol);
    t.set("ftol", o.ftol);
  }
  return t;
}

void emit(const CommonOpts& o, const std::string& payload) {
  if (o.out.empty()) {
    std::cout << payload << "\n";
  } else {
    std::ofstream f(o.out);
    if (!f) throw ValidationError("cannot open output file: " + o.out);
    f << payload << "\n";
  }
}

// csv rendering: one "key,value" row per scalar field of a flat object;
// values use the same 17-significant-digit formatting as the JSON
void emitScalarCsv(const CommonOpts& o,
                   const std::vector<std::pair<std::string, std::string>>& rows) {
  std::string out = "key,value\n";
  for (const auto& [k, v] : rows) out += k + "," + v + "\n";
  if (o.out.empty()) std::cout << out;
  else std::ofstream(o.out) << out;
}

const char* modeName(HGMode m) {
  switch (m) {
    case HGMode::Minimized: return "minimized";
    case HGMode::Limit: return "limit";
    case HGMode::ShortcutRhoG: return "shortcut_rho_g";
  }
  return "?";
}

JsonObject reportJson(const SuiteReport& rep) {
  JsonObject j;
  j.set("suite", rep.suite);
  j.set("trials", rep.trials);
  j.set("passed", rep.passed);
  j.set("maxGap", rep.max_gap);
  j.set("tolerance", rep.tolerance);
  JsonArray vs;
  for (const auto& v : rep.violations) {
    JsonObject vj;
    vj.set("trial", v.trial);
    vj.set("property", v.property);
    vj.set("lhs", v.lhs);
    vj.set("rhs", v.rhs);
    vj.set("gap", v.gap);
    vs.push(vj);
  }
  j.set("violations", vs);
  return j;
}

int runSuite(const CommonOpts& o, const SuiteReport& rep) {
  emit(o, reportJson(rep).dump());
  return rep.passed ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"risk measures on quantile-represented distributions"};
  app.require_subcommand(1);
  CommonOpts o;

  auto* var = app.add_subcommand("var", "value at risk (lower quantile)");
  addModelFlags(var, o, false, false);
  var->add_option("--alpha", o.alpha, "level in (0,1]")->required();
  addIoFlags(var, o);

  auto* tv = app.add_subcommand("tvar", "tail value at risk");
  addModelFlags(tv, o, false, false);
  tv->add_option("--alpha", o.alpha, "level in (0,1)")->required();
  tv->add_option("--tol", o.tol, "agreement tolerance for the two routes");
  addIoFlags(tv, o);

  auto* rho = app.add_subcommand("rho", "distortion risk measure rho_g");
  addModelFlags(rho, o, true, false);
  addIoFlags(rho, o);

  auto* prem = app.add_subcommand("premium", "Orlicz-Lorentz premium");
  addModelFlags(prem, o, true, true);
  prem->add_option("--alpha", o.alpha, "level < 1");
  prem->add_option("--tol", o.tol, "bracket tolerance");
  addIoFlags(prem, o);

  auto* hg = app.add_subcommand("hg", "distortion Haezendonck-Goovaerts measure");
  addModelFlags(hg, o, true, true);
  hg->add_option("--alpha", o.alpha, "level in [0,1)");
  hg->add_option("--tol", o.tol, "inner premium tolerance");
  hg->add_option("--xtol", o.xtol, "bracket width tolerance");
  hg->add_option("--ftol", o.ftol, "sigma variation tolerance");
  hg->add_option("--emit-sigma", o.emit_sigma,
                 "write a (x, sigma(x)) CSV curve to this path");
  addIoFlags(hg, o);

  auto* mem = app.add_subcommand("membership", "does the risk lie in L_g^phi?");
  addModelFlags(mem, o, true, true);
  addIoFlags(mem, o);

  auto* ord = app.add_subcommand("orders", "stochastic order checks");
  addModelFlags(ord, o, false, false);
  ord->add_option("--op", o.op, "st|sl|stoploss|coupling")
      ->check(CLI::IsMember({"st", "sl", "stoploss", "coupling"}));
  ord->add_option("--dist2", o.dist2, "second distribution (st/sl/coupling)");
  ord->add_option("--deductible", o.deductible, "stop-loss deductible");
  ord->add_option("--n", o.n, "coupling sample count");
  addIoFlags(ord, o);

  auto* chk = app.add_subcommand("check", "run a property-test suite");
  std::string suite_name;
  double suite_tol = 1e-7;
  chk->add_option("suite", suite_name, "coherence|fatou|reverse_fatou")
      ->required()
      ->check(CLI::IsMember({"coherence", "fatou", "reverse_fatou"}));
  chk->add_option("--g", o.g, "distortion function spec (JSON)");
  chk->add_option("--phi", o.phi, "Young function spec (JSON)");
  chk->add_option("--alpha", o.alpha, "level in [0,1)");
  chk->add_option("--trials", o.trials, "number of trials");
  chk->add_option("--tol", suite_tol, "axiom tolerance");
  chk->add_option("--jobs", o.jobs, "worker threads (0 = hardware)");
  addIoFlags(chk, o);

  auto* ex = app.add_subcommand("examples", "golden closed-form cases");
  ex->add_option("--filter", o.filter, "substring filter on case names");
  addIoFlags(ex, o);

  auto* se = app.add_subcommand("search",
                                "counterexample search for the open problems "
                                "(emits unverified candidates only)");
  std::uint64_t search_trials = 50;
  se->add_option("--problem", o.problem, "coh|rev_fatou|fatou0")
      ->check(CLI::IsMember({"coh", "rev_fatou", "fatou0"}));
  se->add_option("--trials", search_trials, "number of seeded draws");
  addIoFlags(se, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n" << app.help();
    return 2;
  }

  try {
    if (var->parsed()) {
      double v = varAt(loadDist(o.dist), o.alpha);
      JsonObject j;
      j.set("command", "var").set("alpha", o.alpha).set("value", v);
      j.set("converged", true).set("tolerances", tolerancesJson(o, false));
      if (o.format == "csv") emitScalarCsv(o, {{"value", io::formatDouble(v)}});
      else emit(o, j.dump());
      return 0;
    }
    if (tv->parsed()) {
      Distribution d = loadDist(o.dist);
      double a = tvar(d, o.alpha);
      double b = tvarRU(d, o.alpha, o.tol);
      JsonObject j;
      j.set("command", "tvar").set("alpha", o.alpha).set("value", a);
      j.set("minimization_value", b);
      j.set("converged", std::abs(a - b) <= 1e-8 * std::max(1.0, std::abs(a)));
      j.set("tolerances", tolerancesJson(o, false));
      if (o.format == "csv") emitScalarCsv(o, {{"value", io::formatDouble(a)}});
      else emit(o, j.dump());
      return 0;
    }
    if (rho->parsed()) {
      Distribution d = loadDist(o.dist);
      DistortionFn g = io::parseDistortion(readInput(o.g));
      double v = distortionRho(d, g);
      double s = distortionRhoSurvival(d, g);
      JsonObject diag;
      diag.set("survival_form", s).set("agreement", std::abs(v - s));
      JsonObject j;
      j.set("command", "rho").set("measure", "rho_g").set("value", v);
      j.set("converged", std::abs(v - s) <= 1e-8 * std::max(1.0, std::abs(v)));
      j.set("diagnostics", diag).set("tolerances", tolerancesJson(o, false));
      if (o.format == "csv") emitScalarCsv(o, {{"value", io::formatDouble(v)}});
      else emit(o, j.dump());
      return 0;
    }
    if (prem->parsed()) {
      Distribution d = loadDist(o.dist);
      DistortionFn g = io::parseDistortion(readInput(o.g));
      YoungFn phi = io::parseYoung(readInput(o.phi));
      PremiumOptions popts;
      popts.tol = o.tol;
      PremiumResult r = orliczLorentzPremium(d, g, phi, o.alpha, popts);
      JsonObject j;
      j.set("command", "premium").set("alpha", o.alpha);
      j.set("value", r.value).set("attained", r.attained);
      j.set("equality", r.achieved_equality);
      j.set("iterations", static_cast<std::int64_t>(r.iterations));
      j.set("bracket", JsonArray().push(r.bracket_lo).push(r.bracket_hi));
      j.set("converged", true).set("tolerances", tolerancesJson(o, false));
      if (o.format == "csv") emitScalarCsv(o, {{"value", io::formatDouble(r.value)}});
      else emit(o, j.dump());
      return 0;
    }
    if (hg->parsed()) {
      Distribution d = loadDist(o.dist);
      DistortionFn g = io::parseDistortion(readInput(o.g));
      YoungFn phi = io::parseYoung(readInput(o.phi));
      HGOptions hopts;
      hopts.tol = o.tol;
      hopts.xtol = o.xtol;
      hopts.ftol = o.ftol;
      HGResult r = distortionHG(d, g, phi, o.alpha, hopts);
      JsonObject j;
      j.set("command", "hg").set("measure", "rho_g_phi_alpha");
      j.set("alpha", o.alpha).set("value", r.value);
      j.set("mode", modeName(r.mode));
      if (r.minimizer) j.set("minimizer", *r.minimizer);
      if (r.bounds)
        j.set("bounds", JsonArray().push(r.bounds->first).push(r.bounds->second));
      JsonObject diag;
      diag.set("sigma_at_minimizer", r.sigma_at_minimizer);
      diag.set("iterations", static_cast<std::int64_t>(r.iterations));
      j.set("diagnostics", diag);
      j.set("converged", r.converged).set("tolerances", tolerancesJson(o, true));
      if (!o.emit_sigma.empty()) {
        double lo = std::isfinite(d.essInf()) ? d.essInf() : d.quantile(1e-6);
        double hi = std::isfinite(d.essSup()) ? d.essSup() : d.quantile(1.0 - 1e-6);
        double span = std::max(hi - lo, 1.0);
        std::ofstream f(o.emit_sigma);
        if (!f) throw ValidationError("cannot open sigma output: " + o.emit_sigma);
        f << "x,sigma\n";
        for (int i = 0; i <= 100; ++i) {
          double x = lo - 0.5 * span + 2.0 * span * i / 100.0;
          f << io::formatDouble(x) << ","
            << io::formatDouble(hgSigma(d, g, phi, o.alpha, x, o.tol)) << "\n";
        }
      }
      if (o.format == "csv") emitScalarCsv(o, {{"value", io::formatDouble(r.value)}});
      else emit(o, j.dump());
      return 0;
    }
    if (mem->parsed()) {
      Distribution d = loadDist(o.dist);
      DistortionFn g = io::parseDistortion(readInput(o.g));
      YoungFn phi = io::parseYoung(readInput(o.phi));
      MembershipResult r = membership(d, g, phi);
      const char* s = r.status == MembershipStatus::Member      ? "member"
                      : r.status == MembershipStatus::NotMember ? "not_member"
                                                                : "unknown";
      JsonObject j;
      j.set("command", "membership").set("status", s).set("diagnostic", r.diagnostic);
      j.set("converged", r.status != MembershipStatus::Unknown);
      j.set("tolerances", tolerancesJson(o, false));
      emit(o, j.dump());
      return 0;
    }
    if (ord->parsed()) {
      Distribution d = loadDist(o.dist);
      JsonObject j;
      j.set("command", "orders").set("op", o.op);
      if (o.op == "stoploss") {
        ExtendedValue v = stopLoss(d, o.deductible);
        j.set("deductible", o.deductible);
        j.set("value", v.value());
        j.set("finite", v.isFinite());
        if (v.note()) j.set("diagnostic", v.note()->what);
      } else if (o.op == "st" || o.op == "sl") {
        if (o.dist2.empty())
          throw ValidationError("orders: --dist2 required for order checks");
        Distribution d2 = loadDist(o.dist2);
        OrderCheck c = (o.op == "st") ? stDominates(d, d2) : slDominates(d, d2);
        j.set("result", c.holds);
        j.set("grid_points", static_cast<std::uint64_t>(c.grid.size()));
        if (c.witness) j.set("witness", *c.witness);
      } else {  // coupling
        if (o.dist2.empty())
          throw ValidationError("orders: --dist2 required for coupling");
        Distribution d2 = loadDist(o.dist2);
        CoupledPair pair = comonotonicCoupling(d, d2, o.n);
        j.set("n", static_cast<std::uint64_t>(pair.size()));
        j.set("sum_sl_dominated", independentStyleSumCheck(pair));
      }
      j.set("converged", true).set("tolerances", tolerancesJson(o, false));
      emit(o, j.dump());
      return 0;
    }
    if (chk->parsed()) {
      if (suite_name == "coherence") {
        DistortionFn g = io::parseDistortion(readInput(o.g));
        YoungFn phi = io::parseYoung(readInput(o.phi));
        SuiteConfig cfg{o.trials, o.seed, suite_tol, o.jobs};
        return runSuite(o, coherenceSuite(g, phi, o.alpha, cfg));
      }
      if (suite_name == "fatou") {
        DistortionFn g = io::parseDistortion(readInput(o.g));
        YoungFn phi = io::parseYoung(readInput(o.phi));
        return runSuite(o, fatouScenario(g, phi, o.alpha));
      }
      DistortionFn g = io::parseDistortion(readInput(o.g));
      return runSuite(o, reverseFatouCounterexample(g));
    }
    if (ex->parsed()) {
      return runSuite(o, paperExamplesSuite(o.filter));
    }
    if (se->parsed()) {
      auto found = searchCounterexamples(o.problem, search_trials, o.seed);
      JsonObject j;
      j.set("command", "search").set("problem", o.problem);
      j.set("verified", false);  // candidates make no correctness claim
      JsonArray arr;
      for (const auto& c : found) {
        JsonObject cj;
        cj.set("trial", c.trial).set("description", c.description).set("gap", c.gap);
        arr.push(cj);
      }
      j.set("candidates", arr);
      emit(o, j.dump());
      return 0;
    }
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const UnsupportedError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const NotInSpaceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const AccuracyError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const NonConvergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 2;
}
