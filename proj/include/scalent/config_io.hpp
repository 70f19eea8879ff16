#pragma once

// File formats: substitution definitions and experiment configs as JSON,
// entropy curves as CSV. CSV reals carry 17 significant digits so identical
// runs produce byte-identical files; output goes through a temp-then-rename
// write.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "scalent/experiment.hpp"
#include "scalent/substitution.hpp"
#include "scalent/systems.hpp"

namespace scalent {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  if (!in.good() && !in.eof()) throw IoError("read failed: " + path.string());
  return os.str();
}

inline void atomic_write_file(const std::filesystem::path& path,
                              const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp.string());
    out << content;
    if (!out.good()) throw IoError("write failed: " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("rename failed: " + path.string() + ": " + ec.message());
}

// ---------------------------------------------------------------------------
// Substitution definition files:
//   {"alphabet": ["0","1"], "rules": {"0": "01", "1": "10"}, "seed_letter": "0"}
// Letters are single characters; symbol indices follow alphabet order.

struct ParsedSubstitution {
  ConstantLengthSubstitution xi;
  std::vector<char> letters;  // letters[i] names symbol i
};

inline ParsedSubstitution parse_substitution_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("alphabet") || !j.contains("rules"))
    throw SubstitutionError(SubstitutionDefect::LengthMismatch,
                            "substitution file needs \"alphabet\" and \"rules\"");

  std::vector<char> letters;
  for (const auto& entry : j.at("alphabet")) {
    if (!entry.is_string() || entry.get<std::string>().size() != 1)
      throw SubstitutionError(SubstitutionDefect::SymbolOutOfRange,
                              "alphabet letters must be single characters");
    const char c = entry.get<std::string>()[0];
    for (char prev : letters)
      if (prev == c)
        throw SubstitutionError(SubstitutionDefect::SymbolOutOfRange,
                                std::string("duplicate alphabet letter '") + c + "'");
    letters.push_back(c);
  }

  auto symbol_of = [&](char c) -> Symbol {
    for (std::size_t i = 0; i < letters.size(); ++i)
      if (letters[i] == c) return static_cast<Symbol>(i);
    throw SubstitutionError(SubstitutionDefect::SymbolOutOfRange,
                            std::string("letter '") + c + "' is not in the alphabet");
  };

  const auto& rules_json = j.at("rules");
  if (!rules_json.is_object())
    throw SubstitutionError(SubstitutionDefect::LengthMismatch,
                            "\"rules\" must map letters to words");
  std::vector<std::vector<Symbol>> rules(letters.size());
  std::vector<char> seen(letters.size(), 0);
  for (const auto& [key, value] : rules_json.items()) {
    if (key.size() != 1 || !value.is_string())
      throw SubstitutionError(SubstitutionDefect::SymbolOutOfRange,
                              "rules must map single letters to words");
    const Symbol a = symbol_of(key[0]);
    seen[a] = 1;
    for (char c : value.get<std::string>()) rules[a].push_back(symbol_of(c));
  }
  for (std::size_t a = 0; a < letters.size(); ++a)
    if (!seen[a])
      throw SubstitutionError(SubstitutionDefect::LengthMismatch,
                              std::string("missing rule for letter '") + letters[a] + "'");

  std::optional<Symbol> seed;
  if (j.contains("seed_letter")) {
    const auto& s = j.at("seed_letter");
    if (!s.is_string() || s.get<std::string>().size() != 1)
      throw SubstitutionError(SubstitutionDefect::NoSeedLetter,
                              "seed_letter must be a single letter");
    seed = symbol_of(s.get<std::string>()[0]);
  }

  ParsedSubstitution p;
  p.xi = make_substitution(std::move(rules), seed);
  p.letters = std::move(letters);
  return p;
}

inline ParsedSubstitution load_substitution_file(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw SubstitutionError(SubstitutionDefect::LengthMismatch,
                            "substitution file is not valid JSON: " + std::string(e.what()));
  }
  return parse_substitution_json(j);
}

// ---------------------------------------------------------------------------
// Experiment configs.

namespace detail {

inline SystemSpec parse_system(const nlohmann::json& j,
                               const std::filesystem::path& base_dir) {
  if (!j.is_object() || !j.contains("kind"))
    throw ConfigError("system needs a \"kind\"");
  const std::string kind = j.at("kind").get<std::string>();

  SystemSpec spec;
  if (kind == "bernoulli_finite") {
    if (!j.contains("probabilities"))
      throw ConfigError("bernoulli_finite needs \"probabilities\"");
    spec = SystemSpec::bernoulli(j.at("probabilities").get<std::vector<double>>());
  } else if (kind == "bernoulli_continuous") {
    spec = SystemSpec::bernoulli_continuous();
  } else if (kind == "irrational_rotation") {
    double alpha = golden_ratio_conjugate();
    if (j.contains("alpha")) {
      const auto& a = j.at("alpha");
      if (a.is_string()) {
        if (a.get<std::string>() != "golden")
          throw ConfigError("unknown rotation angle tag: " + a.get<std::string>());
      } else {
        alpha = a.get<double>();
      }
    }
    std::optional<double> beta;
    if (j.contains("beta")) beta = j.at("beta").get<double>();
    spec = SystemSpec::rotation(alpha, beta);
  } else if (kind == "substitution") {
    if (j.contains("file")) {
      std::filesystem::path p = j.at("file").get<std::string>();
      if (p.is_relative()) p = base_dir / p;
      spec = SystemSpec::substitution_system(load_substitution_file(p).xi);
    } else {
      spec = SystemSpec::substitution_system(parse_substitution_json(j).xi);
    }
  } else {
    throw ConfigError("unknown system kind: " + kind);
  }

  if (j.contains("known_kolmogorov_entropy")) {
    const auto& k = j.at("known_kolmogorov_entropy");
    spec.known_kolmogorov_entropy =
        k.is_string() ? std::numeric_limits<double>::infinity() : k.get<double>();
  }
  return spec;
}

inline BaseSemimetric parse_base(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("kind"))
    throw ConfigError("base needs a \"kind\"");
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "discrete_coordinate")
    return BaseSemimetric::discrete(j.value("depth", std::size_t{1}));
  if (kind == "abs_coordinate") return BaseSemimetric::abs_coordinate();
  throw ConfigError("unknown base kind: " + kind);
}

inline std::vector<std::size_t> parse_n_grid(const nlohmann::json& j) {
  if (j.is_array()) return j.get<std::vector<std::size_t>>();
  if (j.is_object())
    return geometric_grid(j.at("start").get<std::size_t>(),
                          j.at("stop").get<std::size_t>(),
                          j.value("factor", std::size_t{2}));
  throw ConfigError("n_grid must be an array or {start, stop, factor}");
}

inline Estimator parse_estimator(const std::string& name) {
  if (name == "exact-if-small") return Estimator::ExactIfSmall;
  if (name == "bounds-only") return Estimator::BoundsOnly;
  if (name == "exact") return Estimator::ExactStrict;
  throw ConfigError("unknown estimator: " + name);
}

}  // namespace detail

inline ExperimentConfig parse_experiment_config(
    const nlohmann::json& j, const std::filesystem::path& base_dir = {}) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  if (!j.contains("system")) throw ConfigError("config needs a \"system\"");
  ExperimentConfig c;
  c.system = detail::parse_system(j.at("system"), base_dir);
  c.base = j.contains("base") ? detail::parse_base(j.at("base"))
                              : BaseSemimetric::discrete(1);
  if (c.base.kind == BaseSemimetric::Kind::AbsCoordinate &&
      !c.system.real_valued())
    throw ConfigError("abs_coordinate base requires a real-valued system");
  c.m = j.value("m", std::size_t{512});
  c.n_grid = j.contains("n_grid") ? detail::parse_n_grid(j.at("n_grid"))
                                  : default_n_grid();
  c.epsilon_grid = j.contains("epsilon_grid")
                       ? j.at("epsilon_grid").get<std::vector<double>>()
                       : default_epsilon_grid();
  c.seed = j.value("seed", std::uint64_t{0});
  c.estimator = detail::parse_estimator(
      j.value("estimator", std::string("exact-if-small")));
  c.entropy.exact_limit = j.value("exact_limit", std::size_t{14});
  c.entropy.slack = j.value("slack", 1e-12);
  return c;
}

inline InvarianceConfig parse_invariance_config(
    const nlohmann::json& j, const std::filesystem::path& base_dir = {}) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  for (const char* field : {"system", "base1", "base2"})
    if (!j.contains(field))
      throw ConfigError(std::string("invariance config needs \"") + field + "\"");
  InvarianceConfig c;
  c.system = detail::parse_system(j.at("system"), base_dir);
  c.base1 = detail::parse_base(j.at("base1"));
  c.base2 = detail::parse_base(j.at("base2"));
  c.m = j.value("m", std::size_t{512});
  c.n_grid = j.contains("n_grid") ? detail::parse_n_grid(j.at("n_grid"))
                                  : default_n_grid();
  c.epsilon1 = j.value("epsilon1", 0.2);
  c.epsilon2 = j.value("epsilon2", 0.2);
  c.seed = j.value("seed", std::uint64_t{0});
  c.ratio_bound = j.value("ratio_bound", 4.0);
  c.estimator = detail::parse_estimator(
      j.value("estimator", std::string("exact-if-small")));
  c.entropy.exact_limit = j.value("exact_limit", std::size_t{14});
  c.entropy.slack = j.value("slack", 1e-12);
  return c;
}

struct SequentialEntropyConfig {
  SystemSpec system;
  std::size_t m = 4096;
  std::uint64_t seed = 0;
  std::size_t depth = 1;
  std::vector<std::size_t> offsets;
  std::size_t terms = 0;  // defaults to |offsets|
};

inline std::string canonical_config_string(const SequentialEntropyConfig& c) {
  std::ostringstream os;
  os << "seqentropy;system=" << detail::system_token(c.system) << ";m=" << c.m
     << ";seed=" << c.seed << ";depth=" << c.depth << ";offsets=";
  for (std::size_t i = 0; i < c.offsets.size(); ++i)
    os << (i ? "," : "") << c.offsets[i];
  os << ";terms=" << c.terms;
  return os.str();
}

inline SequentialEntropyConfig parse_sequential_entropy_config(
    const nlohmann::json& j, const std::filesystem::path& base_dir = {}) {
  if (!j.is_object() || !j.contains("system"))
    throw ConfigError("seqentropy config needs a \"system\"");
  SequentialEntropyConfig c;
  c.system = detail::parse_system(j.at("system"), base_dir);
  c.m = j.value("m", std::size_t{4096});
  c.seed = j.value("seed", std::uint64_t{0});
  c.depth = j.value("depth", std::size_t{1});
  if (!j.contains("offsets")) throw ConfigError("seqentropy config needs \"offsets\"");
  const auto& off = j.at("offsets");
  if (off.is_array()) {
    c.offsets = off.get<std::vector<std::size_t>>();
  } else if (off.is_object()) {
    const std::string kind = off.at("kind").get<std::string>();
    const std::size_t terms = off.at("terms").get<std::size_t>();
    if (kind == "consecutive") {
      const std::size_t start = off.value("start", std::size_t{1});
      for (std::size_t i = 0; i < terms; ++i) c.offsets.push_back(start + i);
    } else if (kind == "powers_of_two") {
      for (std::size_t i = 0; i < terms; ++i)
        c.offsets.push_back(std::size_t{1} << i);
    } else {
      throw ConfigError("unknown offsets kind: " + kind);
    }
  } else {
    throw ConfigError("offsets must be an array or a generator object");
  }
  c.terms = j.value("terms", c.offsets.size());
  return c;
}

// ---------------------------------------------------------------------------
// Curve CSV.

inline constexpr const char* kCurveCsvHeader =
    "n,epsilon,k_lower,k_upper,h_lower_bits,h_upper_bits,estimator,seed";

inline std::string curve_to_csv(const EntropyCurve& curve) {
  std::ostringstream os;
  os.precision(17);
  os << kCurveCsvHeader << "\n";
  for (const CurveRow& r : curve.rows)
    os << r.n << "," << r.epsilon << "," << r.k_lower << "," << r.k_upper << ","
       << r.h_lower_bits << "," << r.h_upper_bits << "," << curve.estimator
       << "," << curve.seed << "\n";
  return os.str();
}

inline EntropyCurve curve_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kCurveCsvHeader)
    throw ConfigError("curve CSV: missing or unexpected header");

  EntropyCurve curve;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(row, field, ',')) fields.push_back(field);
    if (fields.size() != 8) throw ConfigError("curve CSV: malformed row: " + line);
    CurveRow r;
    try {
      r.n = std::stoull(fields[0]);
      r.epsilon = std::stod(fields[1]);
      r.k_lower = std::stoull(fields[2]);
      r.k_upper = std::stoull(fields[3]);
      r.h_lower_bits = std::stod(fields[4]);
      r.h_upper_bits = std::stod(fields[5]);
      curve.estimator = fields[6];
      curve.seed = std::stoull(fields[7]);
    } catch (const std::exception&) {
      throw ConfigError("curve CSV: malformed row: " + line);
    }
    curve.rows.push_back(r);
  }
  if (curve.rows.empty()) throw ConfigError("curve CSV: no data rows");
  return curve;
}

}  // namespace scalent
