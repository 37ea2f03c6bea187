#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>

#include "selfedit/organism.hpp"
#include "selfedit/rational.hpp"
#include "selfedit/rng.hpp"

namespace selfedit {

// A point assignment from the rewarding function; negative = punishment.
struct RewardAssessment {
  std::int64_t points = 0;
  std::string reason;
};

// Applies an assessment: updates the ledger, makes the outcome noticeable
// through the reward register and annotates the current memory entry.
inline Organism assess_and_register(Organism o, const RewardAssessment& a) {
  o.points += a.points;
  o.registers.set(RegisterId::Reward, a.points);
  if (o.memory.empty())
    o.memory.push_back(HistoryEntry{o.base, ActionTag::NoOp});
  HistoryEntry& entry = o.memory.back();
  entry.reward = a.points;
  entry.punished = a.points < 0;
  return o;
}

inline bool is_dead(const Organism& o, std::int64_t death_threshold) {
  return o.points <= death_threshold;
}

// Spontaneous step-back of the newest recursor after a punishment. Once the
// corresponding policy is adopted the caller passes p_react = 1.
// Requires the reward register to be negative; no-op when nothing is active.
inline Organism punishment_reaction(Organism o, const Rational& p_react,
                                    RngStream& stream,
                                    StepBackMode mode = StepBackMode::Deactivate,
                                    std::int64_t generation = 0,
                                    EventLog* log = nullptr) {
  if (o.registers.get(RegisterId::Reward) >= 0) return o;
  if (!stream.bernoulli(p_react)) return o;
  auto stepped = step_back(o, mode, generation, log);
  return stepped ? *stepped : o;
}

// Relative activation frequencies: probability n_k / sum(n).
template <typename Id>
struct FrequencyTable {
  std::map<Id, std::int64_t> counts;

  void activate(const Id& id, std::int64_t times = 1) { counts[id] += times; }
};

template <typename Id>
Rational freq_prob(const FrequencyTable<Id>& t, const Id& option) {
  std::int64_t total = 0;
  for (const auto& [id, n] : t.counts) total += n;
  if (total <= 0) throw std::invalid_argument("freq_prob: empty table");
  auto it = t.counts.find(option);
  std::int64_t n = it == t.counts.end() ? 0 : it->second;
  return Rational(n, total);
}

// Adjustable weights: probability proportional to weight.
template <typename Id>
struct WeightTable {
  std::map<Id, Rational> weights;
};

template <typename Id>
WeightTable<Id> adjust_weight(WeightTable<Id> t, const Id& option,
                              const Rational& delta) {
  Rational w = t.weights[option] + delta;
  t.weights[option] = w.negative() ? Rational(0) : w;
  return t;
}

// nullopt when all weights are zero
template <typename Id>
std::optional<Id> weighted_choice(const WeightTable<Id>& t, RngStream& stream) {
  Rational total(0);
  for (const auto& [id, w] : t.weights) total = total + w;
  if (total.is_zero() || total.negative()) return std::nullopt;
  std::uint64_t u = stream.next_u64();
  Rational acc(0);
  const Id* last = nullptr;
  for (const auto& [id, w] : t.weights) {
    if (w.is_zero()) continue;
    last = &id;
    acc = acc + w;
    Rational p = acc / total;
    unsigned __int128 threshold =
        p >= Rational(1)
            ? (static_cast<unsigned __int128>(1) << 64)
            : (static_cast<unsigned __int128>(p.num()) << 64) /
                  static_cast<unsigned __int128>(p.den());
    if (static_cast<unsigned __int128>(u) < threshold) return id;
  }
  return last ? std::optional<Id>(*last) : std::nullopt;
}

}  // namespace selfedit
