// Command-line front end: substitution reports, entropy-curve experiments,
// growth classification, semimetric-independence checks, and sequential
// entropy estimates. Exit codes: 0 ok, 2 invalid substitution, 3 invalid
// config or grid, 4 instance too large for the exact estimator, 5 I/O.

#include <cstdint>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "scalent/config_io.hpp"
#include "scalent/experiment.hpp"
#include "scalent/substitution.hpp"
#include "scalent/systems.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitBadSubstitution = 2;
constexpr int kExitBadConfig = 3;
constexpr int kExitTooLarge = 4;
constexpr int kExitIo = 5;

std::string hex64(std::uint64_t v) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << v;
  return os.str();
}

nlohmann::json load_json(const std::filesystem::path& path) {
  const std::string text = scalent::read_text_file(path);
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw scalent::ConfigError(path.string() + " is not valid JSON: " + e.what());
  }
}

int cmd_subst(const std::filesystem::path& file) {
  const scalent::ParsedSubstitution parsed = scalent::load_substitution_file(file);
  const scalent::ConstantLengthSubstitution& xi = parsed.xi;

  std::cout << "file: " << file.string() << "\n";
  std::cout << "fingerprint: "
            << hex64(scalent::detail::fnv1a64(scalent::detail::system_token(
                   scalent::SystemSpec::substitution_system(xi))))
            << "\n";
  std::cout << "alphabet:";
  for (char c : parsed.letters) std::cout << " " << c;
  std::cout << "\n";
  std::cout << "length: " << xi.length << "\n";
  std::cout << "seed_letter: " << parsed.letters[xi.seed_letter] << "\n";

  const scalent::SubstitutionReport rep = scalent::analyze_substitution(xi);
  std::cout << "primitive: " << (rep.primitive ? "true" : "false") << "\n";
  std::cout << "incidence:\n";
  for (const auto& row : rep.incidence) {
    std::cout << " ";
    for (std::uint64_t v : row) std::cout << " " << v;
    std::cout << "\n";
  }
  if (!rep.primitive) {
    std::cerr << "error: substitution is not primitive; height, column number "
                 "and spectrum are undefined\n";
    return kExitBadSubstitution;
  }
  std::cout << "height: " << *rep.height << "\n";
  std::cout << "height_prefix_length: " << rep.height_prefix_length << "\n";
  std::cout << "column_number: " << *rep.column_number << "\n";
  std::cout << "spectrum: "
            << (*rep.spectrum == scalent::Spectrum::PurePoint ? "PurePoint"
                                                              : "NotPurePoint")
            << "\n";
  std::cout << "predicted_scaling: " << rep.predicted_scaling << "\n";
  return kExitOk;
}

int cmd_curve(const std::filesystem::path& config_path,
              const std::filesystem::path& out_path) {
  const scalent::ExperimentConfig config = scalent::parse_experiment_config(
      load_json(config_path), config_path.parent_path());
  std::cout << "seed: " << config.seed << "\n";
  std::cout << "fingerprint: " << hex64(scalent::config_fingerprint(config))
            << "\n";
  const scalent::EntropyCurve curve = scalent::run_experiment(config);
  scalent::atomic_write_file(out_path, scalent::curve_to_csv(curve));
  std::cout << "rows: " << curve.rows.size() << "\n";
  std::cout << "wrote: " << out_path.string() << "\n";
  return kExitOk;
}

void print_classification(const scalent::GrowthClassification& g) {
  std::ostringstream os;
  os.precision(6);
  os << "epsilon=" << g.epsilon << " class=" << scalent::growth_class_name(g.klass);
  if (g.klass == scalent::GrowthClass::Logarithmic) os << " slope=" << g.slope;
  if (g.klass == scalent::GrowthClass::Linear) os << " rate=" << g.rate;
  os << " log_slope=" << g.log_slope << " rss_const=" << g.rss_const
     << " rss_log=" << g.rss_log << " rss_linear=" << g.rss_linear
     << " points=" << g.n_points;
  std::cout << os.str() << "\n";
}

int cmd_classify(const std::filesystem::path& csv_path, double epsilon,
                 bool epsilon_given, double margin) {
  const std::string text = scalent::read_text_file(csv_path);
  const scalent::EntropyCurve curve = scalent::curve_from_csv(text);
  std::cout << "seed: " << curve.seed << "\n";
  std::cout << "fingerprint: " << hex64(scalent::detail::fnv1a64(text)) << "\n";

  scalent::GrowthOptions opt;
  opt.margin = margin;
  if (epsilon_given) {
    print_classification(scalent::classify_growth(curve, epsilon, opt));
    return kExitOk;
  }
  const scalent::CurveVerdict v = scalent::classify_curve(curve, opt);
  for (const auto& g : v.per_epsilon) print_classification(g);
  std::cout << "verdict: " << scalent::growth_class_name(v.verdict) << "\n";
  return kExitOk;
}

int cmd_invariance(const std::filesystem::path& config_path) {
  const scalent::InvarianceConfig config = scalent::parse_invariance_config(
      load_json(config_path), config_path.parent_path());
  std::cout << "seed: " << config.seed << "\n";
  std::cout << "fingerprint: "
            << hex64(scalent::detail::fnv1a64(
                   scalent::canonical_config_string(config)))
            << "\n";
  const scalent::RatioReport rep = scalent::invariance_test(config);
  if (rep.status == scalent::RatioReport::Status::AllZero) {
    std::cout << "status: all-zero (comparison undefined)\n";
    std::cout << "pass: false\n";
    return kExitOk;
  }
  std::ostringstream os;
  os.precision(6);
  for (const auto& r : rep.rows)
    os << "n=" << r.n << " h1=" << r.h1 << " h2=" << r.h2 << " ratio=" << r.ratio
       << "\n";
  os << "dropped_leading: " << rep.dropped_leading << "\n";
  os << "min_ratio: " << rep.min_ratio << "\n";
  os << "max_ratio: " << rep.max_ratio << "\n";
  os << "ratio_bound: " << rep.ratio_bound << "\n";
  os << "pass: " << (rep.pass ? "true" : "false") << "\n";
  std::cout << os.str();
  return kExitOk;
}

int cmd_seqentropy(const std::filesystem::path& config_path) {
  const scalent::SequentialEntropyConfig config =
      scalent::parse_sequential_entropy_config(load_json(config_path),
                                               config_path.parent_path());
  std::cout << "seed: " << config.seed << "\n";
  std::cout << "fingerprint: "
            << hex64(scalent::detail::fnv1a64(
                   scalent::canonical_config_string(config)))
            << "\n";
  const std::size_t n_max = config.offsets.empty()
                                ? 1
                                : config.offsets.back() + config.depth;
  const scalent::OrbitSample sample =
      scalent::sample_orbits(config.system, config.m, n_max, config.seed);
  const scalent::SequentialEntropy est = scalent::sequential_entropy_estimate(
      sample, config.depth, config.offsets, config.terms);

  std::ostringstream os;
  os.precision(6);
  os << "depth: " << config.depth << "\n";
  os << "terms: " << config.terms << "\n";
  os << "offsets:";
  for (std::size_t a : config.offsets) os << " " << a;
  os << "\n";
  os << "bits_per_term: " << est.bits_per_term << "\n";
  os << "distinct_tuples: " << est.distinct_tuples << "\n";
  os << "support_warning: " << (est.support_warning ? "true" : "false") << "\n";
  std::cout << os.str();
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"scalent: scaling-entropy experiments on symbolic dynamical systems"};
  app.require_subcommand(1);

  std::string subst_file;
  auto* subst = app.add_subcommand("subst", "analyze a substitution definition file");
  subst->add_option("file", subst_file, "substitution JSON file")->required();

  std::string curve_config, curve_out;
  auto* curve = app.add_subcommand("curve", "run an experiment and write the entropy curve CSV");
  curve->add_option("config", curve_config, "experiment config JSON")->required();
  curve->add_option("-o,--output", curve_out, "output CSV path")->required();

  std::string classify_csv;
  double classify_eps = 0.0, classify_margin = 0.10;
  auto* classify = app.add_subcommand("classify", "classify the growth of an entropy curve CSV");
  classify->add_option("curve", classify_csv, "curve CSV file")->required();
  auto* eps_opt = classify->add_option("--epsilon", classify_eps,
                                       "classify only at this epsilon");
  classify->add_option("--margin", classify_margin,
                       "model-selection dominance margin (default 0.1)");

  std::string invariance_config;
  auto* invariance = app.add_subcommand("invariance", "compare curves from two base semimetrics");
  invariance->add_option("config", invariance_config, "invariance config JSON")->required();

  std::string seq_config;
  auto* seq = app.add_subcommand("seqentropy", "estimate sequential entropy in bits per term");
  seq->add_option("config", seq_config, "seqentropy config JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitBadConfig;
  }

  try {
    if (subst->parsed()) return cmd_subst(subst_file);
    if (curve->parsed()) return cmd_curve(curve_config, curve_out);
    if (classify->parsed())
      return cmd_classify(classify_csv, classify_eps, eps_opt->count() > 0,
                          classify_margin);
    if (invariance->parsed()) return cmd_invariance(invariance_config);
    if (seq->parsed()) return cmd_seqentropy(seq_config);
  } catch (const scalent::SubstitutionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadSubstitution;
  } catch (const scalent::InstanceTooLarge& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitTooLarge;
  } catch (const scalent::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const scalent::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadConfig;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadConfig;
  }
  return kExitOk;
}
