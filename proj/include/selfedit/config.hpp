#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "selfedit/engine.hpp"
#include "selfedit/text.hpp"

namespace selfedit {

// Flat `key = value` run configuration. Lines starting with '#' and blank
// lines are skipped; unknown keys are errors so that a config always means
// what it says.
struct ConfigResult {
  RunConfig config;
  std::vector<std::string> errors;

  bool ok() const { return errors.empty(); }
};

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

class ConfigParser {
 public:
  explicit ConfigParser(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      std::string t = trim(line);
      if (t.empty() || t[0] == '#') continue;
      std::size_t eq = t.find('=');
      if (eq == std::string::npos) {
        errors.push_back("line " + std::to_string(lineno) + ": expected key = value");
        continue;
      }
      std::string key = trim(t.substr(0, eq));
      std::string value = trim(t.substr(eq + 1));
      if (key.empty()) {
        errors.push_back("line " + std::to_string(lineno) + ": empty key");
        continue;
      }
      if (values.contains(key))
        errors.push_back("duplicate key: " + key);
      values[key] = value;
    }
  }

  bool has(const std::string& key) const { return values.contains(key); }

  std::string take_string(const std::string& key, const std::string& fallback) {
    seen.insert(key);
    auto it = values.find(key);
    return it == values.end() ? fallback : it->second;
  }

  std::int64_t take_int(const std::string& key, std::int64_t fallback) {
    seen.insert(key);
    auto it = values.find(key);
    if (it == values.end()) return fallback;
    try {
      std::size_t used = 0;
      std::int64_t v = std::stoll(it->second, &used);
      if (used != it->second.size()) throw std::invalid_argument("");
      return v;
    } catch (...) {
      errors.push_back(key + ": not an integer: '" + it->second + "'");
      return fallback;
    }
  }

  std::uint64_t take_u64(const std::string& key, std::uint64_t fallback) {
    seen.insert(key);
    auto it = values.find(key);
    if (it == values.end()) return fallback;
    try {
      std::size_t used = 0;
      std::uint64_t v = std::stoull(it->second, &used);
      if (used != it->second.size()) throw std::invalid_argument("");
      return v;
    } catch (...) {
      errors.push_back(key + ": not an unsigned integer: '" + it->second + "'");
      return fallback;
    }
  }

  // "3/4", "1", or a short decimal like "0.25"
  Rational take_rational(const std::string& key, const Rational& fallback) {
    seen.insert(key);
    auto it = values.find(key);
    if (it == values.end()) return fallback;
    const std::string& s = it->second;
    try {
      std::size_t slash = s.find('/');
      if (slash != std::string::npos) {
        std::int64_t n = std::stoll(s.substr(0, slash));
        std::int64_t d = std::stoll(s.substr(slash + 1));
        return Rational(n, d);
      }
      std::size_t dot = s.find('.');
      if (dot != std::string::npos) {
        std::string frac = s.substr(dot + 1);
        if (frac.size() > 9) throw std::invalid_argument("");
        std::int64_t den = 1;
        for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
        std::int64_t whole = dot == 0 ? 0 : std::stoll(s.substr(0, dot));
        bool neg = !s.empty() && s[0] == '-';
        std::int64_t num = (neg ? -whole : whole) * den +
                           (frac.empty() ? 0 : std::stoll(frac));
        return Rational(neg ? -num : num, den);
      }
      return Rational(std::stoll(s));
    } catch (...) {
      errors.push_back(key + ": not a rational: '" + s + "'");
      return fallback;
    }
  }

  Code take_code(const std::string& key, const Code& fallback) {
    seen.insert(key);
    auto it = values.find(key);
    if (it == values.end()) return fallback;
    try {
      return parse_text(it->second);
    } catch (const ParseError& e) {
      errors.push_back(key + ": " + e.what());
      return fallback;
    }
  }

  void require(const std::string& key) {
    if (!values.contains(key)) errors.push_back("missing key: " + key);
  }

  void finish() {
    for (const auto& [key, value] : values)
      if (!seen.contains(key)) errors.push_back("unknown key: " + key);
  }

  std::map<std::string, std::string> values;
  std::set<std::string> seen;
  std::vector<std::string> errors;
};

}  // namespace detail

inline ConfigResult parse_config(const std::string& text) {
  detail::ConfigParser p(text);
  RunConfig cfg;

  p.require("seed");
  p.require("capacity");
  p.require("generations");
  p.require("experiment");

  cfg.seed = p.take_u64("seed", cfg.seed);
  cfg.capacity = static_cast<int>(p.take_int("capacity", cfg.capacity));
  cfg.generations = p.take_int("generations", cfg.generations);
  cfg.death_threshold = p.take_int("death_threshold", cfg.death_threshold);
  cfg.alpha = p.take_rational("alpha", cfg.alpha);
  cfg.p_react = p.take_rational("p_react", cfg.p_react);
  cfg.epsilon_explore = p.take_rational("epsilon_explore", cfg.epsilon_explore);
  cfg.budget.max_size = static_cast<int>(p.take_int("max_size", cfg.budget.max_size));
  cfg.budget.max_candidates = p.take_int("max_candidates", cfg.budget.max_candidates);
  cfg.budget.fuel_per_eval = p.take_int("fuel_per_eval", cfg.budget.fuel_per_eval);
  cfg.budget.lit_range = p.take_int("lit_range", cfg.budget.lit_range);
  cfg.neg_max_size = static_cast<int>(p.take_int("neg_max_size", cfg.neg_max_size));
  cfg.neg_max_candidates = p.take_int("neg_max_candidates", cfg.neg_max_candidates);
  cfg.min_support = static_cast<int>(p.take_int("min_support", cfg.min_support));
  cfg.max_memory = static_cast<int>(p.take_int("max_memory", cfg.max_memory));
  cfg.trial_fuel = p.take_int("trial_fuel", cfg.trial_fuel);
  cfg.max_testing_pool =
      static_cast<int>(p.take_int("max_testing_pool", cfg.max_testing_pool));

  std::string mode = p.take_string("step_back_mode", "deactivate");
  if (mode == "deactivate") cfg.step_back_mode = StepBackMode::Deactivate;
  else if (mode == "delete") cfg.step_back_mode = StepBackMode::Delete;
  else p.errors.push_back("step_back_mode: expected deactivate|delete, got '" + mode + "'");

  std::string exp = p.take_string("experiment", "");
  if (exp == "constant") {
    cfg.experiment.family = ExperimentFamily::SequencePrediction;
    cfg.experiment.generator = SequenceGenerator::Constant;
  } else if (exp == "arithmetic") {
    cfg.experiment.family = ExperimentFamily::SequencePrediction;
    cfg.experiment.generator = SequenceGenerator::Arithmetic;
  } else if (exp == "address_copy") {
    cfg.experiment.family = ExperimentFamily::SequencePrediction;
    cfg.experiment.generator = SequenceGenerator::AddressCopy;
  } else if (exp == "integer_series") {
    cfg.experiment.family = ExperimentFamily::IntegerSeries;
  } else if (exp == "punishment_establishment") {
    cfg.experiment.family = ExperimentFamily::PunishmentEstablishment;
  } else if (!exp.empty()) {
    p.errors.push_back(
        "experiment: expected constant|arithmetic|address_copy|integer_series|"
        "punishment_establishment, got '" + exp + "'");
  }

  cfg.experiment.arith_start = p.take_int("arith_start", cfg.experiment.arith_start);
  cfg.experiment.arith_step = p.take_int("arith_step", cfg.experiment.arith_step);
  cfg.experiment.constant_target =
      p.take_code("constant_target", cfg.experiment.constant_target);
  cfg.experiment.address_seed = p.take_code("address_seed", cfg.experiment.address_seed);
  cfg.experiment.reward_correct =
      p.take_int("reward_correct", cfg.experiment.reward_correct);
  cfg.experiment.reward_wrong = p.take_int("reward_wrong", cfg.experiment.reward_wrong);

  std::string theta = p.take_string("address_theta", "");
  if (!theta.empty()) {
    cfg.experiment.address_theta.clear();
    std::istringstream ts(theta);
    std::string part;
    while (std::getline(ts, part, ',')) {
      try {
        cfg.experiment.address_theta.push_back(std::stoi(part));
      } catch (...) {
        p.errors.push_back("address_theta: bad path component '" + part + "'");
      }
    }
  }

  std::string bases = p.take_string("initial_bases", "");
  if (!bases.empty()) {
    std::istringstream bs(bases);
    std::string part;
    while (std::getline(bs, part, ';')) {
      try {
        cfg.initial_bases.push_back(parse_text(detail::trim(part)));
      } catch (const ParseError& e) {
        p.errors.push_back("initial_bases: " + std::string(e.what()));
      }
    }
  }

  p.finish();

  ConfigResult result;
  result.config = cfg;
  result.errors = std::move(p.errors);
  if (result.errors.empty()) {
    for (const std::string& e : cfg.validate()) result.errors.push_back(e);
  }
  return result;
}

}  // namespace selfedit
