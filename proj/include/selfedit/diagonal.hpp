#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <vector>

#include "selfedit/code.hpp"
#include "selfedit/enumerate.hpp"
#include "selfedit/eval.hpp"
#include "selfedit/organism.hpp"
#include "selfedit/policy.hpp"
#include "selfedit/rng.hpp"

namespace selfedit {

// Bounds on a "find a simple fitting code" search.
struct SearchBudget {
  int max_size = 4;
  std::int64_t max_candidates = 20000;
  std::int64_t fuel_per_eval = 256;
  std::int64_t lit_range = 2;
  KindSet kinds = all_kinds();

  EnumParams enum_params() const { return EnumParams{max_size, lit_range, kinds}; }
};

// r fits a sequence when alg(r) maps every code to its successor exactly.
// Bottom never fits.
inline bool fits(const Code& r, std::span<const Code> seq, std::int64_t fuel) {
  if (seq.size() < 2) throw std::invalid_argument("fits: sequence too short");
  for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
    EvalOutcome out = eval(r, seq[i], fuel);
    if (!out.ok() || !(out.value() == seq[i + 1])) return false;
  }
  return true;
}

// Canonically-first fitting code of minimal size within the budget.
// Shortest-first enumeration makes the first hit minimal.
inline std::optional<Code> find_fitting_recursor(std::span<const Code> seq,
                                                 const SearchBudget& b) {
  if (seq.size() < 2)
    throw std::invalid_argument("find_fitting_recursor: sequence too short");
  std::optional<Code> found;
  std::int64_t tried = 0;
  enumerate_codes(b.enum_params(), [&](const Code& candidate) {
    if (++tried > b.max_candidates) return false;
    if (fits(candidate, seq, b.fuel_per_eval)) {
      found = candidate;
      return false;
    }
    return true;
  });
  return found;
}

// Outcome of drawing the sequence to be diagonalized from memory.
struct Selection {
  std::vector<std::size_t> indices;
  std::vector<Code> snapshots;
};

// Each entry participates with probability min(1, weight); punished entries
// can be excluded outright. One stream draw is consumed per entry so the
// subsequence is a pure function of (memory, flags, stream). The gaps close:
// the result is treated as one contiguous sequence.
inline Selection select_weighted_with_indices(std::span<const HistoryEntry> memory,
                                              bool exclude_punished,
                                              RngStream& stream) {
  Selection sel;
  for (std::size_t i = 0; i < memory.size(); ++i) {
    bool include = stream.bernoulli(Rational::min(Rational(1), memory[i].weight));
    if (exclude_punished && memory[i].punished) continue;
    if (!include) continue;
    sel.indices.push_back(i);
    sel.snapshots.push_back(memory[i].snapshot);
  }
  return sel;
}

inline std::vector<Code> select_weighted_subsequence(
    std::span<const HistoryEntry> memory, bool exclude_punished, RngStream& stream) {
  return select_weighted_with_indices(memory, exclude_punished, stream).snapshots;
}

// Weight update after a diagonalization whose outcome earned
// `outcome_reward`: included entries are highlighted on success and faded on
// failure. With the exclude-punished policy adopted, punished weights clamp
// to zero.
inline std::vector<HistoryEntry> update_weights(std::vector<HistoryEntry> memory,
                                                std::span<const std::size_t> included,
                                                std::int64_t outcome_reward,
                                                const Rational& alpha,
                                                bool clamp_punished = false) {
  if (!(Rational(0) < alpha) || !(alpha < Rational(1)))
    throw std::invalid_argument("update_weights: alpha must be in (0,1)");
  Rational factor = outcome_reward >= 0 ? Rational(1) + alpha : Rational(1) - alpha;
  for (std::size_t i : included) {
    if (i >= memory.size()) continue;
    memory[i].weight = memory[i].weight * factor;
  }
  if (clamp_punished) {
    for (HistoryEntry& e : memory)
      if (e.punished) e.weight = Rational(0);
  }
  return memory;
}

// Sub-codes at address theta across the memory, in order; entries lacking
// the path are skipped.
inline std::vector<Code> project_history(std::span<const HistoryEntry> memory,
                                         std::span<const int> theta) {
  std::vector<Code> out;
  for (const HistoryEntry& e : memory) {
    auto sub = subcode_at(e.snapshot, theta);
    if (sub) out.push_back(*sub);
  }
  return out;
}

namespace detail {

// X with the sub-code at theta replaced by (apply (quote r) (sub at theta))
inline Code lift_at(Code x, std::span<const int> theta, const Code& r) {
  if (theta.empty())
    return Code::make(NodeKind::Apply, 0, {Code::quote(r), std::move(x)});
  Code inner = lift_at(
      Code::make(NodeKind::Get, 0, {x, Code::lit(theta[0])}),
      theta.subspan(1), r);
  return Code::make(NodeKind::Put, 0, {std::move(x), Code::lit(theta[0]),
                                       std::move(inner)});
}

}  // namespace detail

// Diagonalizes only the history seen through address theta, then lifts the
// found sub-recursor into a full-code recursor that edits theta in place.
inline std::optional<Code> scoped_diagonalize(std::span<const HistoryEntry> memory,
                                              std::span<const int> theta,
                                              const SearchBudget& b) {
  std::vector<Code> projected = project_history(memory, theta);
  if (projected.size() < 2)
    throw std::invalid_argument("scoped_diagonalize: projection too short");
  auto sub = find_fitting_recursor(projected, b);
  if (!sub) return std::nullopt;
  if (theta.empty()) return sub;
  return detail::lift_at(Code::input(), theta, *sub);
}

// Finds a testing code n with alg(n)(r) = False exactly for the rejected
// codes and True for the retained ones, canonically first at minimal size.
inline std::optional<TestingCode> negative_diagonalize(std::span<const Code> rejected,
                                                       std::span<const Code> retained,
                                                       const SearchBudget& b) {
  for (const Code& r : rejected)
    for (const Code& k : retained)
      if (r == k)
        throw std::invalid_argument("negative_diagonalize: overlapping samples");

  std::optional<TestingCode> found;
  std::int64_t tried = 0;
  const Code lit0 = Code::lit(0);
  const Code lit1 = Code::lit(1);
  enumerate_codes(b.enum_params(), [&](const Code& n) {
    if (++tried > b.max_candidates) return false;
    for (const Code& r : rejected) {
      EvalOutcome out = eval(n, r, b.fuel_per_eval);
      if (!out.ok() || !(out.value() == lit0)) return true;
    }
    for (const Code& r : retained) {
      EvalOutcome out = eval(n, r, b.fuel_per_eval);
      if (!out.ok() || !(out.value() == lit1)) return true;
    }
    found = TestingCode{n};
    return false;
  });
  return found;
}

enum class TestVerdict : std::uint8_t { True, False, Bottom, NotBoolean };

// Runs a testing code on a candidate. The testing code may itself run the
// candidate through apply; bottoms surface as Bottom and callers decide
// whether that counts as rejection.
inline TestVerdict behavioral_test(const TestingCode& n, const Code& r,
                                   std::int64_t fuel) {
  EvalOutcome out = eval(n.code, r, fuel);
  if (!out.ok()) return TestVerdict::Bottom;
  if (out.value() == Code::lit(1)) return TestVerdict::True;
  if (out.value() == Code::lit(0)) return TestVerdict::False;
  return TestVerdict::NotBoolean;
}

// The standard output-probing tester: True iff running the candidate on
// `probe` yields an integer.
inline TestingCode make_integer_testing_code(const Code& probe) {
  Code apply = Code::make(NodeKind::Apply, 0, {Code::input(), Code::quote(probe)});
  return TestingCode{Code::make(NodeKind::IsLit, 0, {std::move(apply)})};
}

// --- policy fitting -------------------------------------------------------

// Does `condition` hold at memory index i? These mirror the conditions a
// live organism can notice through its registers and newest memory entry.
inline bool policy_condition_holds_at(std::span<const HistoryEntry> memory,
                                      std::size_t i, PolicyCondition c) {
  switch (c) {
    case PolicyCondition::RewardNeg:
      return i > 0 && memory[i - 1].reward < 0;
    case PolicyCondition::RewardPos:
      return i > 0 && memory[i - 1].reward > 0;
    case PolicyCondition::CondE:
      return memory[i].cond_e;
    case PolicyCondition::NewRecursorJustPushed:
      return i > 0 && memory[i - 1].action == ActionTag::PushRecursor;
    case PolicyCondition::Always:
      return true;
  }
  return false;
}

inline std::optional<ActionTag> policy_action_tag(PolicyAction a) {
  switch (a) {
    case PolicyAction::StepBackNewestDeactivate: return ActionTag::StepBackDeactivate;
    case PolicyAction::StepBackNewestDelete: return ActionTag::StepBackDelete;
    case PolicyAction::DiagonalizeNow: return ActionTag::Diagonalize;
    default: return std::nullopt;
  }
}

// A rule fits when it has at least min_support qualifying steps and the
// recorded behavior agrees with the rule at every one of them. Step/diag
// actions compare by recorded tag. UseTestingCode fits when the surviving
// (non-punished) qualifying snapshots all pass the tester; punished steps
// are the rejected sample, not behavior to perpetuate, so they do not
// qualify. ExcludePunished fits when every punished predecessor of a
// qualifying step has already faded to weight zero.
inline bool fit_policy(std::span<const HistoryEntry> memory, const PolicyRule& p,
                       int min_support, std::int64_t fuel = 256) {
  std::int64_t support = 0;
  for (std::size_t i = 0; i < memory.size(); ++i) {
    if (!policy_condition_holds_at(memory, i, p.condition)) continue;
    if (auto tag = policy_action_tag(p.action)) {
      ++support;
      if (memory[i].action != *tag) return false;
      continue;
    }
    if (p.action == PolicyAction::UseTestingCode) {
      if (memory[i].punished) continue;
      ++support;
      if (!p.testing) return false;
      if (behavioral_test(*p.testing, memory[i].snapshot, fuel) != TestVerdict::True)
        return false;
      continue;
    }
    // ExcludePunishedFromDiagonal
    ++support;
    if (i > 0 && memory[i - 1].punished && !memory[i - 1].weight.is_zero())
      return false;
  }
  return support >= min_support;
}

// All candidate rules in fixed declaration order. The Always condition is
// not enumerated: an unconditional rule carries no contextual pattern to
// discover. UseTestingCode expands over the established pool in pool order.
inline std::vector<PolicyRule> enumerate_policies(
    std::span<const TestingCode> testing_pool) {
  static constexpr PolicyCondition kConditions[] = {
      PolicyCondition::RewardNeg, PolicyCondition::RewardPos,
      PolicyCondition::CondE, PolicyCondition::NewRecursorJustPushed};
  static constexpr PolicyAction kActions[] = {
      PolicyAction::StepBackNewestDeactivate, PolicyAction::StepBackNewestDelete,
      PolicyAction::ExcludePunishedFromDiagonal, PolicyAction::UseTestingCode,
      PolicyAction::DiagonalizeNow};
  std::vector<PolicyRule> out;
  for (PolicyCondition c : kConditions) {
    for (PolicyAction a : kActions) {
      if (a == PolicyAction::UseTestingCode) {
        for (const TestingCode& n : testing_pool)
          out.push_back(PolicyRule{c, a, n, Rational(1)});
      } else {
        out.push_back(PolicyRule{c, a, std::nullopt, Rational(1)});
      }
    }
  }
  return out;
}

}  // namespace selfedit
