#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "selfedit/code.hpp"
#include "selfedit/eval.hpp"
#include "selfedit/organism.hpp"
#include "selfedit/reward.hpp"

namespace selfedit {

enum class ExperimentFamily : std::uint8_t {
  SequencePrediction,
  IntegerSeries,
  PunishmentEstablishment,
};

enum class SequenceGenerator : std::uint8_t { Constant, Arithmetic, AddressCopy };

constexpr std::string_view experiment_family_name(ExperimentFamily f) {
  switch (f) {
    case ExperimentFamily::SequencePrediction: return "sequence_prediction";
    case ExperimentFamily::IntegerSeries: return "integer_series";
    case ExperimentFamily::PunishmentEstablishment: return "punishment_establishment";
  }
  return "";
}

struct ExperimentSpec {
  ExperimentFamily family = ExperimentFamily::SequencePrediction;
  SequenceGenerator generator = SequenceGenerator::Arithmetic;
  std::int64_t arith_start = 1;
  std::int64_t arith_step = 1;
  Code constant_target = Code::lit(7);
  std::vector<int> address_theta = {0};
  Code address_seed = Code::pair(Code::lit(7), Code::lit(0));
  std::int64_t reward_correct = 1;
  std::int64_t reward_wrong = -1;  // must stay negative: failure is punished
};

// One trial of the experiment stream.
struct Task {
  std::int64_t index = 0;
  std::optional<Code> target;  // absent for output-class tasks
  bool integer_class = false;  // IntegerSeries: any Lit output is correct
  bool cond_e = false;
  Code input;  // previous target; (lit 0) at index 0
};

namespace detail {

inline Code sequence_target(const ExperimentSpec& spec, std::int64_t index) {
  switch (spec.generator) {
    case SequenceGenerator::Constant:
      return spec.constant_target;
    case SequenceGenerator::Arithmetic:
      return Code::lit(spec.arith_start + index * spec.arith_step);
    case SequenceGenerator::AddressCopy: {
      Code cur = spec.address_seed;
      for (std::int64_t i = 0; i < index; ++i) {
        auto sub = subcode_at(cur, spec.address_theta);
        if (!sub) break;  // persists at the fixpoint
        cur = *sub;
      }
      return cur;
    }
  }
  return Code::lit(0);
}

}  // namespace detail

inline Task make_task(const ExperimentSpec& spec, std::int64_t index) {
  Task t;
  t.index = index;
  switch (spec.family) {
    case ExperimentFamily::SequencePrediction:
      t.target = detail::sequence_target(spec, index);
      t.input = index == 0 ? Code::lit(0) : detail::sequence_target(spec, index - 1);
      break;
    case ExperimentFamily::IntegerSeries:
      t.integer_class = true;
      t.cond_e = true;
      t.input = Code::lit(0);
      break;
    case ExperimentFamily::PunishmentEstablishment:
      // constant stream: any recursor that disturbs a correct output is
      // punished on the next trial
      t.target = spec.constant_target;
      t.input = index == 0 ? Code::lit(0) : spec.constant_target;
      break;
  }
  return t;
}

inline RewardAssessment evaluate_trial(const ExperimentSpec& spec, const Task& task,
                                       const EvalOutcome& output) {
  bool correct;
  if (task.integer_class) {
    correct = output.ok() && output.value().is_lit();
  } else {
    correct = output.ok() && task.target && output.value() == *task.target;
  }
  if (correct) return RewardAssessment{spec.reward_correct, "correct"};
  return RewardAssessment{spec.reward_wrong,
                          output.ok() ? "wrong" : std::string(eval_error_name(output.error()))};
}

// Rejected/retained snapshot samples for negative diagonalization.
// Duplicates removed; a code seen both punished and not lands in rejected
// only, so the two sides never overlap.
struct SamplePair {
  std::vector<Code> rejected;
  std::vector<Code> retained;
};

inline SamplePair collect_samples(std::span<const HistoryEntry> memory) {
  std::set<Code, CanonicalLess> rejected, retained;
  for (const HistoryEntry& e : memory)
    (e.punished ? rejected : retained).insert(e.snapshot);
  SamplePair out;
  for (const Code& c : rejected) out.rejected.push_back(c);
  for (const Code& c : retained)
    if (!rejected.contains(c)) out.retained.push_back(c);
  return out;
}

// Per-generation accuracy and adoption milestones, computed from the event
// stream alone.
struct GenerationAccuracy {
  std::int64_t generation = 0;
  std::int64_t trials = 0;
  std::int64_t correct = 0;
  std::int64_t punishments = 0;
};

struct ExperimentMetrics {
  std::vector<GenerationAccuracy> per_generation;
  std::map<std::string, std::int64_t> first_policy_adoption;  // policy -> generation
  std::optional<std::int64_t> first_negative_diag_success;
};

inline ExperimentMetrics report_metrics(const EventLog& log,
                                        const ExperimentSpec& /*spec*/) {
  ExperimentMetrics m;
  std::map<std::int64_t, GenerationAccuracy> rows;
  for (const TransitionEvent& e : log.events()) {
    if (e.action == "trial") {
      GenerationAccuracy& row = rows[e.generation];
      row.generation = e.generation;
      ++row.trials;
      if (e.reward > 0) ++row.correct;
      if (e.reward < 0) ++row.punishments;
    } else if (e.action == "policy_adopted") {
      if (!m.first_policy_adoption.contains(e.detail))
        m.first_policy_adoption[e.detail] = e.generation;
    } else if (e.action == "testing_code_found") {
      if (!m.first_negative_diag_success)
        m.first_negative_diag_success = e.generation;
    }
  }
  for (auto& [gen, row] : rows) m.per_generation.push_back(row);
  return m;
}

}  // namespace selfedit
