// Acceptance suite: exact combinatorial checks against independent oracles,
// growth-class experiments at pinned parameters, and end-to-end CLI
// determinism. Prints one pass/fail line per criterion and exits nonzero if
// any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>
#include <unistd.h>

#include "oracles.hpp"
#include "scalent/config_io.hpp"
#include "scalent/epsilon_entropy.hpp"
#include "scalent/experiment.hpp"
#include "scalent/substitution.hpp"
#include "scalent/systems.hpp"

using namespace scalent;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int criterion, const std::string& what, bool pass,
            const std::string& detail) {
  std::cout << (pass ? "[PASS]" : "[FAIL]") << " criterion " << criterion
            << ": " << what;
  if (!detail.empty()) std::cout << " — " << detail;
  std::cout << "\n";
  if (!pass) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

ConstantLengthSubstitution thue_morse() {
  return make_substitution({{0, 1}, {1, 0}});
}
ConstantLengthSubstitution period_doubling() {
  return make_substitution({{0, 1}, {0, 0}});
}
ConstantLengthSubstitution cyclic3() {
  return make_substitution({{0, 1, 2}, {1, 2, 0}, {2, 0, 1}});
}

// --- criterion 1: exact substitution invariants vs independent oracles -----

void criterion_substitution_invariants() {
  struct Case {
    const char* name;
    ConstantLengthSubstitution xi;
    std::size_t c, h;
    Spectrum spectrum;
  };
  const std::vector<Case> cases = {
      {"Thue-Morse", thue_morse(), 2, 1, Spectrum::NotPurePoint},
      {"period-doubling", period_doubling(), 1, 1, Spectrum::PurePoint},
      {"cyclic-3", cyclic3(), 3, 1, Spectrum::NotPurePoint},
  };

  bool pass = true;
  std::ostringstream detail;
  for (const Case& c : cases) {
    const auto start = std::chrono::steady_clock::now();
    const std::size_t col = column_number(c.xi);
    const std::size_t h = height(c.xi).height;
    const Spectrum sp = classify_spectrum(c.xi);
    const std::size_t col_oracle = oracles::brute_column_number(c.xi, 3);
    const std::size_t h_oracle = oracles::brute_height(c.xi, 1 << 16);
    const double elapsed = seconds_since(start);
    const bool ok = col == c.c && h == c.h && sp == c.spectrum &&
                    col_oracle == c.c && h_oracle == c.h && elapsed < 1.0;
    if (!ok) pass = false;
    detail << c.name << "(c=" << col << "/" << col_oracle << ",h=" << h << "/"
           << h_oracle << "," << elapsed << "s) ";
  }
  report(1, "substitution invariants match the brute-force oracles", pass,
         detail.str());
}

// --- criterion 2: sandwich on a random corpus plus the fixed examples ------

void criterion_sandwich() {
  const auto start = std::chrono::steady_clock::now();
  bool pass = true;
  std::ostringstream detail;

  oracles::TripleGenerator gen(0xacce97edULL);
  int violations = 0;
  const int trials = 220;
  for (int t = 0; t < trials; ++t) {
    const EmpiricalTriple triple = gen.next(1, 10);
    const double eps = 0.05 + 0.9 * gen.u01();
    const std::size_t lo = epsilon_entropy_lower(triple, eps).k_lower;
    const std::size_t ex = epsilon_entropy_exact(triple, eps).k_upper;
    const std::size_t up = epsilon_entropy_greedy(triple, eps).k_upper;
    if (!(lo <= ex && ex <= up)) ++violations;
  }
  if (violations != 0) pass = false;

  std::vector<double> d(16, 1.0);
  for (int i = 0; i < 4; ++i) d[i * 4 + i] = 0.0;
  const EmpiricalTriple four({0.25, 0.25, 0.25, 0.25}, std::move(d));
  if (epsilon_entropy_exact(four, 0.5).k_upper != 3) pass = false;
  const EmpiricalTriple two({0.9, 0.1}, {0.0, 1.0, 1.0, 0.0});
  if (epsilon_entropy_exact(two, 0.2).k_upper != 1) pass = false;

  const double elapsed = seconds_since(start);
  if (elapsed >= 10.0) pass = false;
  detail << trials << " random triples, " << violations << " violations, "
         << "fixed examples k=3 and k=1, " << elapsed << "s";
  report(2, "epsilon-entropy sandwich k_lower <= k_exact <= k_greedy", pass,
         detail.str());
}

// --- experiments shared by criteria 3-7 ------------------------------------

struct Experiments {
  EntropyCurve bernoulli;  // m=512, eps includes 0.25, n = 2^4..2^10
  EntropyCurve rotation;   // m=512, eps includes 0.25, n = 2^6..2^12
  EntropyCurve tm;         // m=512, eps includes 0.2,  n = 2^4..2^12
  EntropyCurve pd;
  RatioReport invariance_tm;
  RatioReport invariance_bernoulli;
};

Experiments run_experiments() {
  Experiments e;

  ExperimentConfig bern;
  bern.system = SystemSpec::bernoulli({0.5, 0.5});
  bern.base = BaseSemimetric::discrete(1);
  bern.m = 512;
  bern.n_grid = geometric_grid(16, 1024);
  bern.epsilon_grid = {0.4, 0.3, 0.25, 0.2, 0.1};
  bern.seed = 1;
  e.bernoulli = run_experiment(bern);

  ExperimentConfig rot = bern;
  rot.system = SystemSpec::rotation();
  rot.n_grid = geometric_grid(64, 4096);
  rot.seed = 2;
  e.rotation = run_experiment(rot);

  ExperimentConfig tm;
  tm.system = SystemSpec::substitution_system(thue_morse());
  tm.base = BaseSemimetric::discrete(1);
  tm.m = 512;
  tm.n_grid = geometric_grid(16, 4096);
  tm.epsilon_grid = {0.4, 0.3, 0.2, 0.1};
  tm.seed = 3;
  e.tm = run_experiment(tm);

  ExperimentConfig pd = tm;
  pd.system = SystemSpec::substitution_system(period_doubling());
  pd.seed = 4;
  e.pd = run_experiment(pd);

  InvarianceConfig inv;
  inv.system = SystemSpec::substitution_system(thue_morse());
  inv.base1 = BaseSemimetric::discrete(1);
  inv.base2 = BaseSemimetric::discrete(2);
  inv.m = 512;
  inv.n_grid = geometric_grid(64, 4096);
  inv.epsilon1 = inv.epsilon2 = 0.2;
  inv.seed = 5;
  inv.ratio_bound = 4.0;
  e.invariance_tm = invariance_test(inv);

  inv.system = SystemSpec::bernoulli({0.5, 0.5});
  inv.seed = 6;
  e.invariance_bernoulli = invariance_test(inv);

  return e;
}

void criterion_monotonicity(const Experiments& e) {
  int violations = 0;
  std::size_t rows = 0;
  for (const EntropyCurve* curve : {&e.bernoulli, &e.rotation, &e.tm, &e.pd}) {
    rows += curve->rows.size();
    for (std::size_t i = 0; i + 1 < curve->rows.size(); ++i) {
      const CurveRow& a = curve->rows[i];
      const CurveRow& b = curve->rows[i + 1];
      if (a.n != b.n) continue;  // within a block epsilon descends
      if (b.h_upper_bits < a.h_upper_bits) ++violations;
      if (b.h_lower_bits < a.h_lower_bits) ++violations;
    }
    for (const CurveRow& r : curve->rows)
      if (r.h_lower_bits > r.h_upper_bits) ++violations;
  }
  std::ostringstream detail;
  detail << rows << " rows across 4 curves, " << violations << " violations";
  report(3, "entropy nonincreasing in epsilon at fixed n, zero violations",
         violations == 0, detail.str());
}

void criterion_bernoulli_linear(const Experiments& e) {
  const GrowthClassification g = classify_growth(e.bernoulli, 0.25);
  bool ratios_ok = true;
  std::ostringstream detail;
  detail.precision(3);
  detail << "class=" << growth_class_name(g.klass);

  std::vector<std::pair<std::size_t, double>> curve;
  for (const CurveRow& r : e.bernoulli.rows)
    if (r.epsilon == 0.25) curve.emplace_back(r.n, r.h_upper_bits);
  detail << " H=[";
  for (std::size_t i = 0; i < curve.size(); ++i)
    detail << (i ? " " : "") << curve[i].second;
  detail << "] ratios=[";
  bool first = true;
  for (std::size_t i = 0; i + 1 < curve.size(); ++i) {
    if (curve[i].first < 64) continue;
    const double ratio = curve[i + 1].second / curve[i].second;
    if (!(ratio >= 1.6 && ratio <= 2.4)) ratios_ok = false;
    detail << (first ? "" : " ") << ratio;
    first = false;
  }
  detail << "]";
  const bool pass = g.klass == GrowthClass::Linear && ratios_ok;
  report(4,
         "fair-coin curve classifies Linear with doubling ratios in [1.6, 2.4]",
         pass, detail.str());
  if (!pass)
    std::cout << "       note: with 512 sampled orbits the upper bound "
                 "saturates near log2(0.75*512) ≈ 8.6 bits by n = 32, so the "
                 "doubling ratios sit at 1.0; see the project notes on the "
                 "sample-size cap\n";
}

void criterion_rotation_bounded(const Experiments& e) {
  const GrowthClassification g = classify_growth(e.rotation, 0.25);
  const bool pass =
      g.klass == GrowthClass::Bounded && std::abs(g.log_slope) < 0.2;
  std::ostringstream detail;
  detail.precision(4);
  detail << "class=" << growth_class_name(g.klass)
         << " log_slope=" << g.log_slope;
  report(5, "golden-rotation curve classifies Bounded with log-slope < 0.2",
         pass, detail.str());
}

void criterion_substitution_growth(const Experiments& e) {
  const GrowthClassification tm = classify_growth(e.tm, 0.2);
  const GrowthClassification pd = classify_growth(e.pd, 0.2);
  const double slope_gap = tm.log_slope - pd.log_slope;
  const bool pass = tm.klass == GrowthClass::Logarithmic &&
                    tm.slope >= 0.3 && tm.slope <= 3.0 &&
                    pd.klass == GrowthClass::Bounded && slope_gap > 0.2;
  std::ostringstream detail;
  detail.precision(4);
  detail << "TM class=" << growth_class_name(tm.klass) << " slope=" << tm.slope
         << "; PD class=" << growth_class_name(pd.klass)
         << " log_slope=" << pd.log_slope << "; gap=" << slope_gap;
  report(6,
         "Thue-Morse classifies Logarithmic (slope in [0.3, 3.0]), "
         "period-doubling Bounded, slope gap > 0.2",
         pass, detail.str());
}

void criterion_invariance(const Experiments& e) {
  const auto ok = [](const RatioReport& r) {
    return r.status == RatioReport::Status::Ok && r.pass;
  };
  std::ostringstream detail;
  detail.precision(4);
  detail << "TM ratios in [" << e.invariance_tm.min_ratio << ", "
         << e.invariance_tm.max_ratio << "], Bernoulli ratios in ["
         << e.invariance_bernoulli.min_ratio << ", "
         << e.invariance_bernoulli.max_ratio << "], bound 4";
  report(7,
         "depth-1 vs depth-2 curves stay within ratio bound [1/4, 4] at eps=0.2",
         ok(e.invariance_tm) && ok(e.invariance_bernoulli), detail.str());
}

void criterion_sequential_entropy() {
  const OrbitSample bern =
      sample_orbits(SystemSpec::bernoulli({0.5, 0.5}), 4096, 16, 7);
  const std::vector<std::size_t> consecutive = {1, 2, 3, 4, 5, 6, 7, 8};
  const SequentialEntropy hb =
      sequential_entropy_estimate(bern, 1, consecutive, 8);

  const OrbitSample rot = sample_orbits(SystemSpec::rotation(), 4096, 200, 8);
  const std::vector<std::size_t> powers = {1, 2, 4, 8, 16, 32, 64, 128};
  const SequentialEntropy hr = sequential_entropy_estimate(rot, 1, powers, 8);

  const bool pass = std::abs(hb.bits_per_term - 1.0) <= 0.05 &&
                    hr.bits_per_term < 0.5 &&
                    hr.bits_per_term < hb.bits_per_term;
  std::ostringstream detail;
  detail.precision(4);
  detail << "bernoulli=" << hb.bits_per_term << " bits/term (support "
         << hb.distinct_tuples << "), rotation=" << hr.bits_per_term
         << " bits/term (support " << hr.distinct_tuples
         << "); the log log n lower bound is out of observable range and not "
            "checked";
  report(8,
         "sequential entropy: fair coin at 1.0±0.05 bits, rotation below 0.5 "
         "and below the coin",
         pass, detail.str());
}

// --- criterion 9: CLI determinism ------------------------------------------

int run_command(const std::string& command) {
  const int status = std::system(command.c_str());
  if (status == -1) return -1;
  if (WIFEXITED(status)) return WEXITSTATUS(status);
  return -1;
}

void criterion_cli(const std::string& cli) {
  if (cli.empty()) {
    report(9, "CLI determinism (byte-identical CSVs)", false,
           "no --cli path given");
    return;
  }

  const fs::path dir =
      fs::temp_directory_path() /
      ("scalent_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);

  const fs::path tm_json = dir / "thue_morse.json";
  {
    std::ofstream out(tm_json);
    out << R"({"alphabet": ["0","1"], "rules": {"0": "01", "1": "10"}, "seed_letter": "0"})";
  }
  const fs::path bad_json = dir / "noninjective.json";
  {
    std::ofstream out(bad_json);
    out << R"({"alphabet": ["0","1"], "rules": {"0": "01", "1": "01"}})";
  }
  const fs::path config_json = dir / "curve_config.json";
  {
    std::ofstream out(config_json);
    out << R"({
      "system": {"kind": "substitution", "file": "thue_morse.json"},
      "base": {"kind": "discrete_coordinate", "depth": 1},
      "m": 64,
      "n_grid": [16, 32, 64, 128, 256],
      "epsilon_grid": [0.3, 0.2],
      "seed": 11,
      "estimator": "bounds-only"
    })";
  }

  bool pass = true;
  std::ostringstream detail;

  const std::string q = "\"";
  const int subst_ok = run_command(q + cli + q + " subst " + q +
                                   tm_json.string() + q + " > " +
                                   (dir / "subst.txt").string() + " 2>&1");
  if (subst_ok != 0) {
    pass = false;
    detail << "subst exit=" << subst_ok << " ";
  } else {
    const std::string text = read_text_file(dir / "subst.txt");
    if (text.find("column_number: 2") == std::string::npos ||
        text.find("height: 1") == std::string::npos ||
        text.find("spectrum: NotPurePoint") == std::string::npos) {
      pass = false;
      detail << "subst report missing expected lines ";
    }
  }

  const int subst_bad = run_command(q + cli + q + " subst " + q +
                                    bad_json.string() + q + " > /dev/null 2>&1");
  if (subst_bad != 2) {
    pass = false;
    detail << "non-injective exit=" << subst_bad << " (want 2) ";
  }

  const fs::path out1 = dir / "curve1.csv";
  const fs::path out2 = dir / "curve2.csv";
  for (const fs::path* out : {&out1, &out2}) {
    const int code = run_command(q + cli + q + " curve " + q +
                                 config_json.string() + q + " -o " + q +
                                 out->string() + q + " > /dev/null 2>&1");
    if (code != 0) {
      pass = false;
      detail << "curve exit=" << code << " ";
    }
  }
  if (pass) {
    const std::string a = read_text_file(out1);
    const std::string b = read_text_file(out2);
    if (a != b) {
      pass = false;
      detail << "CSV bytes differ ";
    } else {
      detail << "two runs, " << a.size() << " bytes each, identical";
    }
  }

  fs::remove_all(dir);
  report(9, "CLI determinism (byte-identical CSVs) and exit codes", pass,
         detail.str());
}

}  // namespace

int main(int argc, char** argv) {
  std::string cli;
  for (int i = 1; i + 1 < argc; ++i)
    if (std::string(argv[i]) == "--cli") cli = argv[i + 1];

  std::cout.precision(6);
  criterion_substitution_invariants();
  criterion_sandwich();

  const Experiments e = run_experiments();
  criterion_monotonicity(e);
  criterion_bernoulli_linear(e);
  criterion_rotation_bounded(e);
  criterion_substitution_growth(e);
  criterion_invariance(e);
  criterion_sequential_entropy();
  criterion_cli(cli);

  std::cout << (g_failures == 0 ? "all criteria passed"
                                : std::to_string(g_failures) +
                                      " criterion(s) failed")
            << "\n";
  return g_failures == 0 ? 0 : 1;
}
