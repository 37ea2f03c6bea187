#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "selfedit/diagonal.hpp"
#include "selfedit/experiment.hpp"
#include "selfedit/organism.hpp"
#include "selfedit/reward.hpp"
#include "selfedit/rng.hpp"

namespace selfedit {

struct RunConfig {
  std::uint64_t seed = 42;
  int capacity = 16;
  std::int64_t generations = 200;
  std::int64_t death_threshold = -1000000000;
  Rational alpha{1, 4};
  Rational p_react{1, 2};
  Rational epsilon_explore{1, 5};
  SearchBudget budget;
  // negative diagonalization gets its own simplicity bound: separators are
  // usually one size class above fitting recursors
  int neg_max_size = 5;
  std::int64_t neg_max_candidates = 60000;
  int min_support = 3;
  int max_memory = 256;
  std::int64_t trial_fuel = 1024;
  StepBackMode step_back_mode = StepBackMode::Deactivate;
  int max_testing_pool = 4;
  ExperimentSpec experiment;
  std::vector<Code> initial_bases;  // empty: defaults per experiment family

  SearchBudget neg_budget() const {
    SearchBudget b = budget;
    b.max_size = neg_max_size;
    b.max_candidates = neg_max_candidates;
    return b;
  }

  std::vector<std::string> validate() const {
    std::vector<std::string> errors;
    if (capacity < 1) errors.push_back("capacity: must be >= 1");
    if (generations < 0) errors.push_back("generations: must be >= 0");
    if (!(Rational(0) < alpha && alpha < Rational(1)))
      errors.push_back("alpha: must be in (0,1)");
    if (p_react < Rational(0) || p_react > Rational(1))
      errors.push_back("p_react: must be in [0,1]");
    if (epsilon_explore < Rational(0) || epsilon_explore > Rational(1))
      errors.push_back("epsilon_explore: must be in [0,1]");
    if (budget.max_size < 1) errors.push_back("max_size: must be >= 1");
    if (budget.max_candidates < 1) errors.push_back("max_candidates: must be >= 1");
    if (budget.fuel_per_eval < 1) errors.push_back("fuel_per_eval: must be >= 1");
    if (budget.lit_range < 0) errors.push_back("lit_range: must be >= 0");
    if (budget.kinds == 0) errors.push_back("kinds: must be nonempty");
    if (neg_max_size < 1) errors.push_back("neg_max_size: must be >= 1");
    if (neg_max_candidates < 1) errors.push_back("neg_max_candidates: must be >= 1");
    if (min_support < 1) errors.push_back("min_support: must be >= 1");
    if (max_memory < 1) errors.push_back("max_memory: must be >= 1");
    if (trial_fuel < 1) errors.push_back("trial_fuel: must be >= 1");
    if (max_testing_pool < 1) errors.push_back("max_testing_pool: must be >= 1");
    if (experiment.reward_wrong >= 0)
      errors.push_back("reward_wrong: must be negative (failure is a punishment)");
    return errors;
  }
};

struct GenMetrics {
  std::int64_t generation = 0;
  std::int64_t pop = 0;
  double mean_points = 0.0;
  std::int64_t punishments = 0;
  std::int64_t diag_success = 0;
  std::int64_t diag_fail = 0;
};

struct AdoptionRecord {
  std::int64_t generation = 0;
  std::uint64_t organism_id = 0;
  std::string policy;
};

struct DiscoveryRecord {
  std::int64_t generation = 0;
  std::uint64_t organism_id = 0;
  std::string testing_code;
};

struct FinalOrganism {
  std::uint64_t id = 0;
  std::int64_t points = 0;
  std::int64_t age = 0;
  std::string effective;
  std::vector<std::string> policies;
};

struct RunReport {
  std::vector<GenMetrics> rows;
  std::vector<AdoptionRecord> adoptions;
  std::vector<DiscoveryRecord> discoveries;
  std::vector<FinalOrganism> final_population;
  std::uint64_t events_hash = 0;
  bool extinct = false;
  std::int64_t generations_executed = 0;
};

struct RunResult {
  RunReport report;
  EventLog events;
  std::vector<Organism> population;
};

inline std::uint64_t fnv1a(std::uint64_t h, std::string_view s) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

inline std::uint64_t hash_events(const EventLog& log) {
  std::uint64_t h = 1469598103934665603ULL;
  for (const TransitionEvent& e : log.events()) {
    std::string line = std::to_string(e.generation) + "|" +
                       std::to_string(e.organism_id) + "|" +
                       std::to_string(e.step_index) + "|" + e.action + "|" +
                       (e.code_text ? *e.code_text : "") + "|" +
                       std::to_string(e.reward) + "|" +
                       std::to_string(e.points_after) + "|" + e.detail;
    h = fnv1a(h, line);
    h = fnv1a(h, "\n");
  }
  return h;
}

// The deterministic, seeded population loop. One instance per run.
class Engine {
 public:
  explicit Engine(RunConfig cfg) : cfg_(std::move(cfg)), ids_(1) {
    explore_pool_ = enumerate_codes_vec(
        EnumParams{3, cfg_.budget.lit_range, all_kinds()});
  }

  RunResult run() {
    init_population();
    bool extinct = false;
    std::int64_t executed = 0;
    for (std::int64_t gen = 0; gen < cfg_.generations; ++gen) {
      ++executed;
      if (!step_generation(gen)) {
        extinct = true;
        break;
      }
    }
    RunResult result;
    result.report.rows = std::move(rows_);
    result.report.adoptions = std::move(adoptions_);
    result.report.discoveries = std::move(discoveries_);
    result.report.extinct = extinct;
    result.report.generations_executed = executed;
    for (const Organism& o : pop_) {
      FinalOrganism f;
      f.id = o.id;
      f.points = o.points;
      f.age = o.age;
      EvalOutcome eff = effective_code(o, cfg_.trial_fuel);
      f.effective = eff.ok() ? to_text(eff.value()) : std::string(eval_error_name(eff.error()));
      for (const PolicyRule& p : o.adopted_policies) f.policies.push_back(p.to_string());
      result.report.final_population.push_back(std::move(f));
    }
    result.report.events_hash = hash_events(log_);
    result.events = std::move(log_);
    result.population = std::move(pop_);
    return result;
  }

 private:
  struct ActionOutcome {
    std::vector<Organism> units;
    ActionTag tag = ActionTag::NoOp;
    std::optional<Code> action_code;
    std::string detail;
    int acting_policy = -1;                 // index into adopted_policies
    std::vector<std::size_t> diag_indices;  // entries used by a diagonalization
  };

  void init_population() {
    for (int slot = 0; slot < cfg_.capacity; ++slot) {
      Organism o;
      o.id = ids_.next();
      o.base = initial_base(slot);
      pop_.push_back(std::move(o));
    }
  }

  Code initial_base(int slot) const {
    if (!cfg_.initial_bases.empty())
      return cfg_.initial_bases[static_cast<std::size_t>(slot) %
                                cfg_.initial_bases.size()];
    const ExperimentSpec& e = cfg_.experiment;
    switch (e.family) {
      case ExperimentFamily::SequencePrediction:
        switch (e.generator) {
          case SequenceGenerator::Constant: return e.constant_target;
          case SequenceGenerator::Arithmetic: return Code::lit(e.arith_start);
          case SequenceGenerator::AddressCopy: return e.address_seed;
        }
        return Code::lit(0);
      case ExperimentFamily::IntegerSeries:
        return Code::lit(1 + slot % 5);
      case ExperimentFamily::PunishmentEstablishment:
        return e.constant_target;
    }
    return Code::lit(0);
  }

  static bool runtime_condition_holds(const Organism& o, PolicyCondition c) {
    switch (c) {
      case PolicyCondition::RewardNeg:
        return o.registers.get(RegisterId::Reward) < 0;
      case PolicyCondition::RewardPos:
        return o.registers.get(RegisterId::Reward) > 0;
      case PolicyCondition::CondE:
        return o.registers.get(RegisterId::CondE) == 1;
      case PolicyCondition::NewRecursorJustPushed:
        return !o.memory.empty() &&
               o.memory.back().action == ActionTag::PushRecursor;
      case PolicyCondition::Always:
        return true;
    }
    return false;
  }

  static bool policy_active(const PolicyRule& p) {
    return p.weight >= Rational(1, 2);
  }

  static bool has_adopted(const Organism& o, PolicyCondition c, PolicyAction a) {
    for (const PolicyRule& p : o.adopted_policies)
      if (p.condition == c && p.action == a && policy_active(p)) return true;
    return false;
  }

  // Testers run under the organism's registers so the vet sees exactly
  // what the trial will see; the extra fuel covers the tester's own nodes.
  bool passes_vets(const Code& effective, const Registers& regs,
                   const std::vector<TestingCode>& vets) const {
    for (const TestingCode& n : vets) {
      EvalOutcome out = eval(n.code, EvalContext{effective, n.code, regs,
                                                 cfg_.trial_fuel + 16});
      if (!out.ok() || !(out.value() == Code::lit(1))) return false;
    }
    return true;
  }

  // candidate state must have a defined effective code and pass every
  // tester fired this generation
  bool admissible(const Organism& o, const std::vector<TestingCode>& vets,
                  std::string* why) const {
    EvalOutcome eff = effective_code(o, cfg_.trial_fuel);
    if (!eff.ok()) {
      if (why) *why = "bottom";
      return false;
    }
    if (!passes_vets(eff.value(), o.registers, vets)) {
      if (why) *why = "vetoed";
      return false;
    }
    return true;
  }

  // A fired testing code vets the current state as well: recursors can
  // read registers, so the fold may have drifted into a rejected shape
  // with no action taken. Such junk steps back before the trial instead
  // of being emitted and punished.
  Organism repair_state(Organism org, const std::vector<TestingCode>& vets,
                        const Task& task, std::int64_t gen) {
    if (vets.empty()) return org;
    while (true) {
      EvalOutcome eff = effective_code(org, cfg_.trial_fuel);
      if (eff.ok() && passes_vets(eff.value(), org.registers, vets)) break;
      auto stepped = step_back(org, cfg_.step_back_mode);
      if (!stepped) break;
      org = std::move(*stepped);
      EvalOutcome after = effective_code(org, cfg_.trial_fuel);
      Code snapshot = after.ok() ? after.value()
                                 : (org.memory.empty() ? org.base
                                                       : org.memory.back().snapshot);
      record_step(org,
                  HistoryEntry{snapshot, step_back_tag(cfg_.step_back_mode), 0,
                               Rational(1), false, task.cond_e},
                  cfg_.max_memory);
      log_.append(gen, org.id,
                  std::string(action_tag_name(step_back_tag(cfg_.step_back_mode))),
                  std::nullopt, 0, org.points, "vet");
    }
    return org;
  }

  std::optional<Code> cached_find_fit(const std::vector<Code>& seq) {
    std::string key;
    for (const Code& c : seq) {
      key += to_text(c);
      key += '\n';
    }
    auto it = fit_cache_.find(key);
    if (it != fit_cache_.end()) return it->second;
    auto found = find_fitting_recursor(seq, cfg_.budget);
    fit_cache_.emplace(std::move(key), found);
    return found;
  }

  std::optional<TestingCode> cached_negdiag(const SamplePair& samples,
                                            const std::string& key) {
    auto it = negdiag_cache_.find(key);
    if (it != negdiag_cache_.end()) return it->second;
    auto found =
        negative_diagonalize(samples.rejected, samples.retained, cfg_.neg_budget());
    negdiag_cache_.emplace(key, found);
    return found;
  }

  static std::string sample_key(const SamplePair& s) {
    std::string key;
    for (const Code& c : s.rejected) {
      key += to_text(c);
      key += '\n';
    }
    key += "---\n";
    for (const Code& c : s.retained) {
      key += to_text(c);
      key += '\n';
    }
    return key;
  }

  ActionOutcome diagonalize_action(Organism org, RngStream& stream,
                                   bool exclude_punished,
                                   const std::vector<TestingCode>& vets,
                                   std::int64_t gen, int policy_idx) {
    ActionOutcome out;
    Selection sel = select_weighted_with_indices(org.memory, exclude_punished, stream);
    if (sel.snapshots.size() < 2) {
      out.units.push_back(std::move(org));
      return out;
    }
    auto r = cached_find_fit(sel.snapshots);
    if (!r) {
      ++diag_fail_;
      out.units.push_back(std::move(org));
      return out;
    }
    Organism pushed = push_recursor(org, *r, gen);
    std::string why;
    if (!admissible(pushed, vets, &why)) {
      ++diag_fail_;
      out.detail = why;
      out.units.push_back(std::move(org));
      return out;
    }
    ++diag_success_;
    out.tag = ActionTag::Diagonalize;
    out.action_code = *r;
    out.acting_policy = policy_idx;
    out.diag_indices = std::move(sel.indices);
    out.units.push_back(std::move(pushed));
    return out;
  }

  ActionOutcome select_action(Organism org, RngStream& stream,
                              const std::vector<int>& fired,
                              bool exclude_punished,
                              const std::vector<TestingCode>& vets,
                              std::int64_t gen) {
    // adopted policies preempt exploration; exploration preempts the
    // default diagonalization
    for (int idx : fired) {
      const PolicyRule& p = org.adopted_policies[static_cast<std::size_t>(idx)];
      if (p.action == PolicyAction::StepBackNewestDeactivate ||
          p.action == PolicyAction::StepBackNewestDelete) {
        if (p.condition == PolicyCondition::RewardNeg) continue;  // reaction path
        StepBackMode mode = p.action == PolicyAction::StepBackNewestDelete
                                ? StepBackMode::Delete
                                : StepBackMode::Deactivate;
        ActionOutcome out;
        auto stepped = step_back(org, mode);
        if (!stepped) {
          out.tag = step_back_tag(mode);
          out.detail = "no_active";
          out.acting_policy = idx;
          out.units.push_back(std::move(org));
          return out;
        }
        std::string why;
        if (!admissible(*stepped, vets, &why)) {
          out.detail = why;
          out.units.push_back(std::move(org));
          return out;
        }
        out.tag = step_back_tag(mode);
        out.acting_policy = idx;
        out.units.push_back(std::move(*stepped));
        return out;
      }
      if (p.action == PolicyAction::DiagonalizeNow)
        return diagonalize_action(std::move(org), stream, exclude_punished, vets,
                                  gen, idx);
    }

    if (stream.bernoulli(cfg_.epsilon_explore)) {
      switch (stream.below(4)) {
        case 0: {  // push a random small recursor
          const Code& r = explore_pool_[stream.below(explore_pool_.size())];
          Organism pushed = push_recursor(org, r, gen);
          ActionOutcome out;
          std::string why;
          if (!admissible(pushed, vets, &why)) {
            out.detail = why;
            out.units.push_back(std::move(org));
            return out;
          }
          out.tag = ActionTag::PushRecursor;
          out.action_code = r;
          out.units.push_back(std::move(pushed));
          return out;
        }
        case 1: {  // spontaneous step back
          ActionOutcome out;
          auto stepped = step_back(org, cfg_.step_back_mode);
          if (!stepped) {
            out.detail = "no_active";
            out.units.push_back(std::move(org));
            return out;
          }
          std::string why;
          if (!admissible(*stepped, vets, &why)) {
            out.detail = why;
            out.units.push_back(std::move(org));
            return out;
          }
          out.tag = step_back_tag(cfg_.step_back_mode);
          out.units.push_back(std::move(*stepped));
          return out;
        }
        case 2: {  // non-symmetric proliferation
          ActionOutcome out;
          IdGen probe = ids_;  // commit ids only if the transition succeeds
          auto children = non_symmetric_proliferate(org, cfg_.trial_fuel, probe, gen);
          if (!children) {
            out.detail = "proliferation_failed";
            out.units.push_back(std::move(org));
            return out;
          }
          std::string why;
          if (!admissible(children->first, vets, &why) ||
              !admissible(children->second, vets, &why)) {
            out.detail = why;
            out.units.push_back(std::move(org));
            return out;
          }
          ids_ = probe;
          log_.append(gen, org.id,
                      std::string(action_tag_name(ActionTag::NonSymProliferate)),
                      std::nullopt, 0, org.points,
                      "children=" + std::to_string(children->first.id) + "," +
                          std::to_string(children->second.id));
          out.tag = ActionTag::NonSymProliferate;
          out.units.push_back(std::move(children->first));
          out.units.push_back(std::move(children->second));
          return out;
        }
        default: {  // symmetric proliferation
          ActionOutcome out;
          auto children = symmetric_proliferate(org, ids_, gen, &log_);
          out.tag = ActionTag::Proliferate;
          out.units.push_back(std::move(children.first));
          out.units.push_back(std::move(children.second));
          return out;
        }
      }
    }
    return diagonalize_action(std::move(org), stream, exclude_punished, vets, gen, -1);
  }

  // returns false on extinction
  bool step_generation(std::int64_t gen) {
    Task task = make_task(cfg_.experiment, gen);
    diag_success_ = 0;
    diag_fail_ = 0;
    std::int64_t punishments = 0;

    std::vector<Organism> next;
    for (Organism& org_ref : pop_) {
      Organism org = std::move(org_ref);
      RngStream stream = derive_stream(cfg_.seed, org.id, gen);
      org.age += 1;
      org.registers.set(RegisterId::CondE, task.cond_e ? 1 : 0);
      org.registers.set(RegisterId::Age, org.age);

      std::vector<int> fired;
      bool exclude_mode = false;
      std::vector<TestingCode> vets;
      for (std::size_t i = 0; i < org.adopted_policies.size(); ++i) {
        const PolicyRule& p = org.adopted_policies[i];
        if (!policy_active(p)) continue;
        if (!runtime_condition_holds(org, p.condition)) continue;
        fired.push_back(static_cast<int>(i));
        if (p.action == PolicyAction::ExcludePunishedFromDiagonal) exclude_mode = true;
        if (p.action == PolicyAction::UseTestingCode && p.testing)
          vets.push_back(*p.testing);
      }
      org = repair_state(std::move(org), vets, task, gen);

      ActionOutcome action =
          select_action(std::move(org), stream, fired, exclude_mode, vets, gen);

      for (Organism& unit : action.units)
        process_unit(std::move(unit), action.tag, action, task, stream, gen,
                     punishments, next);
    }

    // selection: deaths, capacity cull, refill
    std::vector<Organism> alive;
    for (Organism& o : next) {
      if (is_dead(o, cfg_.death_threshold)) {
        log_.append(gen, o.id, "death", std::nullopt, 0, o.points);
      } else {
        alive.push_back(std::move(o));
      }
    }
    if (alive.empty()) {
      log_.append(gen, 0, "extinct", std::nullopt, 0, 0);
      record_row(gen, alive, punishments);
      pop_.clear();
      return false;
    }
    auto fitness_order = [](const Organism& a, const Organism& b) {
      if (a.points != b.points) return a.points > b.points;
      if (a.age != b.age) return a.age < b.age;
      return a.id < b.id;
    };
    std::sort(alive.begin(), alive.end(), fitness_order);
    while (static_cast<int>(alive.size()) > cfg_.capacity) {
      log_.append(gen, alive.back().id, "cull", std::nullopt, 0, alive.back().points);
      alive.pop_back();
    }
    while (static_cast<int>(alive.size()) < cfg_.capacity) {
      Organism best = std::move(alive.front());
      alive.erase(alive.begin());
      auto children = symmetric_proliferate(best, ids_, gen, &log_);
      for (Organism* child : {&children.first, &children.second}) {
        Code snapshot = child->memory.empty() ? child->base
                                              : child->memory.back().snapshot;
        record_step(*child,
                    HistoryEntry{snapshot, ActionTag::Proliferate, 0, Rational(1),
                                 false, task.cond_e},
                    cfg_.max_memory);
      }
      alive.push_back(std::move(children.first));
      alive.push_back(std::move(children.second));
      std::sort(alive.begin(), alive.end(), fitness_order);
    }
    std::sort(alive.begin(), alive.end(),
              [](const Organism& a, const Organism& b) { return a.id < b.id; });
    pop_ = std::move(alive);
    record_row(gen, pop_, punishments);
    return true;
  }

  void process_unit(Organism u, ActionTag tag, const ActionOutcome& action,
                    const Task& task, RngStream& stream, std::int64_t gen,
                    std::int64_t& punishments, std::vector<Organism>& out) {
    int evictions = 0;

    // memory entry for this step; snapshot is the effective code, falling
    // back to the last known one if the fold bottoms under current registers
    EvalOutcome eff = effective_code(u, cfg_.trial_fuel);
    Code snapshot = eff.ok() ? eff.value()
                             : (u.memory.empty() ? u.base : u.memory.back().snapshot);
    std::size_t before = u.memory.size();
    record_step(u, HistoryEntry{snapshot, tag, 0, Rational(1), false, task.cond_e},
                cfg_.max_memory);
    if (u.memory.size() == before) ++evictions;

    log_.append(gen, u.id, std::string(action_tag_name(tag)),
                action.action_code ? std::optional<std::string>(to_text(*action.action_code))
                                   : std::nullopt,
                0, u.points, action.detail);

    // trial
    EvalOutcome output = eff.ok()
                             ? eval(eff.value(), EvalContext{task.input, eff.value(),
                                                             u.registers, cfg_.trial_fuel})
                             : eff;
    RewardAssessment a = evaluate_trial(cfg_.experiment, task, output);
    u = assess_and_register(u, a);
    if (a.points < 0) ++punishments;
    log_.append(gen, u.id, "trial", to_text(snapshot), a.points, u.points, a.reason);

    // policy bookkeeping: a policy whose action just got punished fades
    if (a.points < 0 && action.acting_policy >= 0) {
      PolicyRule& p = u.adopted_policies[static_cast<std::size_t>(action.acting_policy)];
      p.weight = p.weight * (Rational(1) - cfg_.alpha);
    }

    // punishment reaction
    if (u.registers.get(RegisterId::Reward) < 0) {
      StepBackMode mode = cfg_.step_back_mode;
      Rational p_eff = cfg_.p_react;
      if (has_adopted(u, PolicyCondition::RewardNeg,
                      PolicyAction::StepBackNewestDeactivate)) {
        p_eff = Rational(1);
        mode = StepBackMode::Deactivate;
      } else if (has_adopted(u, PolicyCondition::RewardNeg,
                             PolicyAction::StepBackNewestDelete)) {
        p_eff = Rational(1);
        mode = StepBackMode::Delete;
      }
      if (stream.bernoulli(p_eff)) {
        auto stepped = step_back(u, mode);
        std::string detail = "reaction";
        if (stepped)
          u = std::move(*stepped);
        else
          detail = "reaction_no_active";
        EvalOutcome eff2 = effective_code(u, cfg_.trial_fuel);
        Code snap2 = eff2.ok() ? eff2.value() : snapshot;
        before = u.memory.size();
        record_step(u, HistoryEntry{snap2, step_back_tag(mode), 0, Rational(1),
                                    false, task.cond_e},
                    cfg_.max_memory);
        if (u.memory.size() == before) ++evictions;
        log_.append(gen, u.id, std::string(action_tag_name(step_back_tag(mode))),
                    std::nullopt, 0, u.points, detail);
      }
    }

    // fading / highlighting of the entries used by this diagonalization
    if (!action.diag_indices.empty() && tag == ActionTag::Diagonalize) {
      std::vector<std::size_t> adjusted;
      for (std::size_t idx : action.diag_indices) {
        if (idx < static_cast<std::size_t>(evictions)) continue;
        adjusted.push_back(idx - static_cast<std::size_t>(evictions));
      }
      bool clamp = false;
      for (const PolicyRule& p : u.adopted_policies)
        if (p.action == PolicyAction::ExcludePunishedFromDiagonal && policy_active(p))
          clamp = true;
      u.memory = update_weights(std::move(u.memory), adjusted, a.points, cfg_.alpha,
                                clamp);
    }

    discover(u, gen);
    out.push_back(std::move(u));
  }

  // negative diagonalization over the collected samples, then policy
  // discovery over the memory sequence
  void discover(Organism& u, std::int64_t gen) {
    SamplePair samples = collect_samples(u.memory);
    if (!samples.rejected.empty() && !samples.retained.empty() &&
        static_cast<int>(u.testing_pool.size()) < cfg_.max_testing_pool) {
      std::string key = sample_key(samples);
      auto& last = negdiag_memo_[u.id];
      if (last != key) {
        last = key;
        auto n = cached_negdiag(samples, key);
        if (n) {
          bool known = false;
          for (const TestingCode& t : u.testing_pool)
            if (t.code == n->code) known = true;
          if (!known) {
            u.testing_pool.push_back(*n);
            discoveries_.push_back(DiscoveryRecord{gen, u.id, to_text(n->code)});
            log_.append(gen, u.id, "testing_code_found", to_text(n->code), 0,
                        u.points, sample_detail(samples));
          }
        }
      }
    }

    for (const PolicyRule& rule : enumerate_policies(u.testing_pool)) {
      bool already = false;
      for (const PolicyRule& p : u.adopted_policies)
        if (p.same_rule(rule)) already = true;
      if (already) continue;
      if (rule.testing && size(rule.testing->code) > cfg_.neg_max_size) continue;
      if (!fit_policy(u.memory, rule, cfg_.min_support, cfg_.trial_fuel + 16))
        continue;
      u.adopted_policies.push_back(rule);
      adoptions_.push_back(AdoptionRecord{gen, u.id, rule.to_string()});
      log_.append(gen, u.id, "policy_adopted", std::nullopt, 0, u.points,
                  rule.to_string());
    }
  }

  static std::string sample_detail(const SamplePair& s) {
    std::string d = "rejected=";
    for (std::size_t i = 0; i < s.rejected.size(); ++i) {
      if (i) d += ";";
      d += to_text(s.rejected[i]);
    }
    d += " retained=";
    for (std::size_t i = 0; i < s.retained.size(); ++i) {
      if (i) d += ";";
      d += to_text(s.retained[i]);
    }
    return d;
  }

  void record_row(std::int64_t gen, const std::vector<Organism>& pop,
                  std::int64_t punishments) {
    GenMetrics row;
    row.generation = gen;
    row.pop = static_cast<std::int64_t>(pop.size());
    if (!pop.empty()) {
      double sum = 0;
      for (const Organism& o : pop) sum += static_cast<double>(o.points);
      row.mean_points = sum / static_cast<double>(pop.size());
    }
    row.punishments = punishments;
    row.diag_success = diag_success_;
    row.diag_fail = diag_fail_;
    rows_.push_back(row);
  }

  RunConfig cfg_;
  IdGen ids_;
  std::vector<Organism> pop_;
  std::vector<Code> explore_pool_;
  EventLog log_;
  std::vector<GenMetrics> rows_;
  std::vector<AdoptionRecord> adoptions_;
  std::vector<DiscoveryRecord> discoveries_;
  std::map<std::string, std::optional<Code>> fit_cache_;
  std::map<std::string, std::optional<TestingCode>> negdiag_cache_;
  std::map<std::uint64_t, std::string> negdiag_memo_;
  std::int64_t diag_success_ = 0;
  std::int64_t diag_fail_ = 0;
};

inline RunResult run(const RunConfig& cfg) {
  auto errors = cfg.validate();
  if (!errors.empty()) {
    std::string msg = "invalid config:";
    for (const std::string& e : errors) msg += " " + e + ";";
    throw std::invalid_argument(msg);
  }
  return Engine(cfg).run();
}

}  // namespace selfedit
