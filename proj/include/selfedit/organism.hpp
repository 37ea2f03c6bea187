#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "selfedit/code.hpp"
#include "selfedit/eval.hpp"
#include "selfedit/policy.hpp"
#include "selfedit/rational.hpp"
#include "selfedit/text.hpp"

namespace selfedit {

enum class ActionTag : std::uint8_t {
  PushRecursor,
  StepBackDelete,
  StepBackDeactivate,
  Diagonalize,
  Proliferate,
  NonSymProliferate,
  Emit,
  NoOp,
};

constexpr std::string_view action_tag_name(ActionTag a) {
  switch (a) {
    case ActionTag::PushRecursor: return "push_recursor";
    case ActionTag::StepBackDelete: return "step_back_delete";
    case ActionTag::StepBackDeactivate: return "step_back_deactivate";
    case ActionTag::Diagonalize: return "diagonalize";
    case ActionTag::Proliferate: return "proliferate";
    case ActionTag::NonSymProliferate: return "non_sym_proliferate";
    case ActionTag::Emit: return "emit";
    case ActionTag::NoOp: return "noop";
  }
  return "";
}

inline bool is_step_back(ActionTag a) {
  return a == ActionTag::StepBackDelete || a == ActionTag::StepBackDeactivate;
}

// A modifying code in the stack, rated old -> new by position.
struct RecursorEntry {
  Code code;
  bool active = true;
  std::int64_t born_at = 0;
};

// One step of an organism's memory sequence.
struct HistoryEntry {
  Code snapshot;  // effective code at that step
  ActionTag action = ActionTag::NoOp;
  std::int64_t reward = 0;
  Rational weight{1};  // participation weight in the sequence to diagonalize
  bool punished = false;
  bool cond_e = false;  // E register at that step, recorded for policy fitting
};

struct TransitionEvent {
  std::int64_t generation = 0;
  std::uint64_t organism_id = 0;
  std::int64_t step_index = 0;
  std::string action;
  std::optional<std::string> code_text;
  std::int64_t reward = 0;
  std::int64_t points_after = 0;
  std::string detail;
};

// Append-only event sink; assigns step indices so records are totally
// ordered by (generation, organism id, step index).
class EventLog {
 public:
  void append(std::int64_t generation, std::uint64_t organism_id,
              std::string action, std::optional<std::string> code_text,
              std::int64_t reward, std::int64_t points_after,
              std::string detail = "") {
    if (generation != counter_generation_) {
      counter_generation_ = generation;
      step_counters_.clear();
    }
    std::int64_t step = step_counters_[organism_id]++;
    events_.push_back(TransitionEvent{generation, organism_id, step,
                                      std::move(action), std::move(code_text),
                                      reward, points_after, std::move(detail)});
  }

  const std::vector<TransitionEvent>& events() const { return events_; }
  std::size_t size() const { return events_.size(); }

 private:
  std::vector<TransitionEvent> events_;
  std::int64_t counter_generation_ = -1;
  std::map<std::uint64_t, std::int64_t> step_counters_;
};

// The unit of selection: a base code plus a stack of recursors rated
// old -> new, with registers, memory and the point ledger.
struct Organism {
  std::uint64_t id = 0;
  Code base;
  std::vector<RecursorEntry> stack;
  Registers registers;
  std::vector<HistoryEntry> memory;
  std::int64_t points = 0;
  std::vector<PolicyRule> adopted_policies;
  std::vector<TestingCode> testing_pool;  // established accept/reject codes
  std::int64_t age = 0;
};

// Folds active recursors oldest-to-newest over the base: c0 = base,
// ck = eval(rk, c(k-1)). Fuel is shared across the whole fold.
inline EvalOutcome effective_code(const Organism& o, std::int64_t fuel) {
  Code current = o.base;
  for (const RecursorEntry& r : o.stack) {
    if (!r.active) continue;
    EvalOutcome next = detail::eval_node(r.code, current, r.code, o.registers, fuel);
    if (!next.ok()) return next;
    current = next.value();
  }
  return EvalOutcome::of(current);
}

inline Organism push_recursor(Organism o, Code r, std::int64_t generation,
                              EventLog* log = nullptr) {
  o.stack.push_back(RecursorEntry{r, true, generation});
  if (log)
    log->append(generation, o.id, std::string(action_tag_name(ActionTag::PushRecursor)),
                to_text(r), 0, o.points);
  return o;
}

enum class StepBackMode : std::uint8_t { Delete, Deactivate };

constexpr ActionTag step_back_tag(StepBackMode m) {
  return m == StepBackMode::Delete ? ActionTag::StepBackDelete
                                   : ActionTag::StepBackDeactivate;
}

// Removes (Delete) or deactivates the newest active recursor.
// nullopt = NoActiveRecursor; callers treat that as a no-op.
inline std::optional<Organism> step_back(Organism o, StepBackMode mode,
                                         std::int64_t generation = 0,
                                         EventLog* log = nullptr) {
  for (auto it = o.stack.rbegin(); it != o.stack.rend(); ++it) {
    if (!it->active) continue;
    std::string code_text = to_text(it->code);
    if (mode == StepBackMode::Delete)
      o.stack.erase(std::next(it).base());
    else
      it->active = false;
    if (log)
      log->append(generation, o.id, std::string(action_tag_name(step_back_tag(mode))),
                  code_text, 0, o.points);
    return o;
  }
  return std::nullopt;
}

// test hook: undoes a Deactivate step-back
inline std::optional<Organism> reactivate_newest(Organism o) {
  for (auto it = o.stack.rbegin(); it != o.stack.rend(); ++it) {
    if (it->active) continue;
    it->active = true;
    return o;
  }
  return std::nullopt;
}

// Sequential id source for spawned organisms.
class IdGen {
 public:
  explicit IdGen(std::uint64_t next = 1) : next_(next) {}
  std::uint64_t next() { return next_++; }

 private:
  std::uint64_t next_;
};

// floor(p/2) point split used by both proliferation flavours
inline std::int64_t half_points_floor(std::int64_t p) {
  return p >= 0 ? p / 2 : -((-p + 1) / 2);
}

namespace detail {

inline Organism child_of(const Organism& parent, std::uint64_t id) {
  Organism c = parent;
  c.id = id;
  c.age = 0;
  c.points = half_points_floor(parent.points);
  return c;
}

}  // namespace detail

// (r, c) -> { (r, alg(r)(c)), c } where r is the newest active recursor and
// c is the fold of everything below it. nullopt = ProliferationFailed.
inline std::optional<std::pair<Organism, Organism>> non_symmetric_proliferate(
    const Organism& o, std::int64_t fuel, IdGen& ids, std::int64_t generation = 0,
    EventLog* log = nullptr) {
  int newest = -1;
  for (int i = static_cast<int>(o.stack.size()) - 1; i >= 0; --i)
    if (o.stack[static_cast<std::size_t>(i)].active) { newest = i; break; }
  if (newest < 0) return std::nullopt;

  Organism below = o;
  below.stack.erase(below.stack.begin() + newest);
  EvalOutcome c = effective_code(below, fuel);
  if (!c.ok()) return std::nullopt;
  EvalOutcome c1 = eval_shared(o.stack[static_cast<std::size_t>(newest)].code,
                               c.value(), o.registers, fuel);
  if (!c1.ok()) return std::nullopt;

  Organism keeper = detail::child_of(o, ids.next());
  keeper.base = c1.value();
  keeper.stack = {o.stack[static_cast<std::size_t>(newest)]};
  Organism dropper = detail::child_of(o, ids.next());
  dropper.base = c.value();
  dropper.stack.clear();
  if (log) {
    std::string d = "children=" + std::to_string(keeper.id) + "," +
                    std::to_string(dropper.id);
    log->append(generation, o.id,
                std::string(action_tag_name(ActionTag::NonSymProliferate)),
                std::nullopt, 0, o.points, d);
  }
  return std::make_pair(std::move(keeper), std::move(dropper));
}

inline std::pair<Organism, Organism> symmetric_proliferate(
    const Organism& o, IdGen& ids, std::int64_t generation = 0,
    EventLog* log = nullptr) {
  Organism a = detail::child_of(o, ids.next());
  Organism b = detail::child_of(o, ids.next());
  if (log) {
    std::string d = "children=" + std::to_string(a.id) + "," + std::to_string(b.id);
    log->append(generation, o.id, std::string(action_tag_name(ActionTag::Proliferate)),
                std::nullopt, 0, o.points, d);
  }
  return {std::move(a), std::move(b)};
}

// Appends a memory entry, dropping the oldest when past the cap.
inline void record_step(Organism& o, HistoryEntry entry, int max_memory) {
  o.memory.push_back(std::move(entry));
  if (max_memory > 0 && o.memory.size() > static_cast<std::size_t>(max_memory))
    o.memory.erase(o.memory.begin(),
                   o.memory.begin() +
                       static_cast<std::ptrdiff_t>(o.memory.size() -
                                                   static_cast<std::size_t>(max_memory)));
}

struct IndexInterval {
  std::size_t first;
  std::size_t last;  // inclusive

  friend bool operator==(const IndexInterval&, const IndexInterval&) = default;
};

// Attempts/cycles: maximal intervals whose interior holds no step-back;
// each step-back closes the interval it belongs to.
inline std::vector<IndexInterval> cycles(std::span<const HistoryEntry> memory) {
  std::vector<IndexInterval> out;
  if (memory.empty()) return out;
  std::size_t start = 0;
  for (std::size_t i = 0; i < memory.size(); ++i) {
    if (is_step_back(memory[i].action)) {
      out.push_back(IndexInterval{start, i});
      start = i + 1;
    }
  }
  if (start < memory.size()) out.push_back(IndexInterval{start, memory.size() - 1});
  return out;
}

// Debug check: the point ledger matches the memory, which holds whenever no
// entry has been evicted and no proliferation split has occurred.
inline bool ledger_consistent(const Organism& o) {
  std::int64_t sum = 0;
  for (const HistoryEntry& e : o.memory) sum += e.reward;
  return sum == o.points;
}

}  // namespace selfedit
