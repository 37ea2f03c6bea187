// Acceptance suite: one pass/fail line per criterion. Exit status is the
// number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "oracle.hpp"
#include "selfedit/selfedit.hpp"

using namespace selfedit;

namespace {

int failures = 0;

void report(int index, const char* name, bool pass, const std::string& detail) {
  std::printf("[%s] criterion %d: %s%s%s\n", pass ? "PASS" : "FAIL", index, name,
              detail.empty() ? "" : " — ", detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

// ---------------------------------------------------------------------------
// 1. shortest-fit oracle equivalence over 200 seeded recursors, < 60 s

void criterion_shortest_fit() {
  auto t0 = std::chrono::steady_clock::now();
  oracle::Params op{4, 1, all_kinds()};
  auto pool = oracle::all_codes_sorted(op);
  SearchBudget budget;
  budget.max_size = 4;
  budget.lit_range = 1;
  budget.max_candidates = 5000000;
  budget.fuel_per_eval = 256;

  RngStream stream(20260808);
  int done = 0, agreed = 0;
  while (done < 200) {
    const Code& r = pool[stream.below(pool.size())];
    Code seed = Code::lit(static_cast<std::int64_t>(stream.below(5)) - 2);
    EvalOutcome v1 = eval(r, seed, 256);
    if (!v1.ok()) continue;
    EvalOutcome v2 = eval(r, v1.value(), 256);
    if (!v2.ok()) continue;
    std::vector<Code> seq{seed, v1.value(), v2.value()};
    auto found = find_fitting_recursor(seq, budget);
    auto expected = oracle::brute_force_fit(seq, op, 256);
    ++done;
    if (found && expected && *found == *expected && size(*found) <= size(r) &&
        fits(*found, seq, 256))
      ++agreed;
  }
  auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                     std::chrono::steady_clock::now() - t0)
                     .count();
  bool pass = agreed == 200 && elapsed < 60000;
  report(1, "shortest-fit oracle equivalence", pass,
         std::to_string(agreed) + "/200 agreements in " + std::to_string(elapsed) +
             " ms");
}

// ---------------------------------------------------------------------------
// 2. enumeration completeness for sizes <= 3

void criterion_enumeration() {
  EnumParams p{3, 1, all_kinds()};
  auto enumerated = enumerate_codes_vec(p);
  auto reference = oracle::all_codes_sorted({p.max_size, p.lit_range, p.kinds});
  bool pass = enumerated.size() == reference.size();
  std::size_t mismatches = 0;
  if (pass) {
    for (std::size_t i = 0; i < enumerated.size(); ++i)
      if (!(enumerated[i] == reference[i])) ++mismatches;
    for (std::size_t i = 0; i + 1 < enumerated.size(); ++i)
      if (!canonical_less(enumerated[i], enumerated[i + 1])) ++mismatches;
    pass = mismatches == 0;
  }
  report(2, "enumeration completeness vs independent generator", pass,
         std::to_string(enumerated.size()) + " codes, " +
             std::to_string(mismatches) + " mismatches");
}

// ---------------------------------------------------------------------------
// 3. byte-identical replay of the reference config

RunConfig reference_config() {
  RunConfig cfg;
  cfg.seed = 42;
  cfg.capacity = 16;
  cfg.generations = 200;
  cfg.budget.max_size = 3;
  cfg.budget.max_candidates = 3000;
  cfg.budget.lit_range = 1;
  cfg.experiment.family = ExperimentFamily::SequencePrediction;
  cfg.experiment.generator = SequenceGenerator::Arithmetic;
  cfg.experiment.arith_start = 1;
  cfg.experiment.arith_step = 1;
  return cfg;
}

void criterion_determinism() {
  RunConfig cfg = reference_config();
  RunResult a = Engine(cfg).run();
  RunResult b = Engine(cfg).run();
  std::string ja = events_to_jsonl(a.events);
  std::string jb = events_to_jsonl(b.events);
  bool pass = ja == jb && !ja.empty();
  report(3, "byte-identical events.jsonl for the reference run", pass,
         std::to_string(a.events.size()) + " events");
}

// ---------------------------------------------------------------------------
// 4. punishment-reaction establishment across 20 seeds

struct LineageInfo {
  std::map<std::uint64_t, std::uint64_t> parent;     // child -> parent
  std::map<std::uint64_t, std::int64_t> born_at;     // child -> generation
  std::map<std::uint64_t, std::int64_t> adopted_at;  // organism -> generation

  // First generation at which the organism holds the policy: its own
  // adoption, or inheritance when the parent already held it at birth.
  std::optional<std::int64_t> holding_since(std::uint64_t org) const {
    auto it = adopted_at.find(org);
    std::optional<std::int64_t> own;
    if (it != adopted_at.end()) own = it->second;
    auto pit = parent.find(org);
    if (pit != parent.end()) {
      auto up = holding_since(pit->second);
      std::int64_t birth = born_at.at(org);
      if (up && *up <= birth && (!own || birth < *own)) return birth;
    }
    return own;
  }
};

LineageInfo scan_lineage(const EventLog& log, const std::string& policy_prefix) {
  LineageInfo info;
  for (const TransitionEvent& e : log.events()) {
    if (e.action == "proliferate" || e.action == "non_sym_proliferate") {
      auto pos = e.detail.find("children=");
      if (pos == std::string::npos) continue;
      std::string rest = e.detail.substr(pos + 9);
      auto comma = rest.find(',');
      std::uint64_t a = std::stoull(rest.substr(0, comma));
      std::uint64_t b = std::stoull(rest.substr(comma + 1));
      info.parent[a] = e.organism_id;
      info.parent[b] = e.organism_id;
      info.born_at[a] = e.generation;
      info.born_at[b] = e.generation;
    } else if (e.action == "policy_adopted" &&
               e.detail.rfind(policy_prefix, 0) == 0) {
      if (!info.adopted_at.contains(e.organism_id))
        info.adopted_at[e.organism_id] = e.generation;
    }
  }
  return info;
}

void criterion_punishment_establishment() {
  const std::string policy = "RewardNeg->StepBackNewestDeactivate";
  int good_seeds = 0;
  bool causality_ok = true;
  std::string detail;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    RunConfig cfg;
    cfg.seed = seed;
    cfg.capacity = 16;
    cfg.generations = 300;
    cfg.min_support = 3;
    cfg.p_react = Rational(1, 2);
    cfg.epsilon_explore = Rational(1, 2);
    cfg.max_memory = 48;
    cfg.budget.max_size = 3;
    cfg.budget.max_candidates = 3000;
    cfg.budget.lit_range = 1;
    // this scenario isolates the reaction rule; no separator exists at
    // size 1, so testing codes stay out of the picture
    cfg.neg_max_size = 1;
    cfg.neg_max_candidates = 100;
    cfg.experiment.family = ExperimentFamily::PunishmentEstablishment;
    cfg.experiment.constant_target = Code::lit(7);
    cfg.experiment.reward_wrong = -2;
    RunResult r = Engine(cfg).run();
    if (r.report.extinct) continue;

    int holders = 0;
    for (const FinalOrganism& f : r.report.final_population)
      for (const std::string& p : f.policies)
        if (p == policy) { ++holders; break; }
    double fraction = r.report.final_population.empty()
                          ? 0.0
                          : double(holders) / double(r.report.final_population.size());
    if (fraction >= 0.9) ++good_seeds;

    // post-adoption causality: holders' punished trials are followed by a
    // step-back record in the same organism's event stream
    LineageInfo lineage = scan_lineage(r.events, policy);
    const auto& events = r.events.events();
    for (std::size_t i = 0; i < events.size(); ++i) {
      const TransitionEvent& e = events[i];
      if (e.action != "trial" || e.reward >= 0) continue;
      auto since = lineage.holding_since(e.organism_id);
      if (!since || e.generation <= *since) continue;
      bool followed = false;
      for (std::size_t j = i + 1; j < events.size(); ++j) {
        if (events[j].organism_id != e.organism_id) break;
        if (events[j].generation != e.generation) break;
        if (events[j].action == "step_back_deactivate" ||
            events[j].action == "step_back_delete") {
          followed = true;
          break;
        }
      }
      if (!followed) causality_ok = false;
    }
  }
  bool pass = good_seeds >= 18 && causality_ok;
  detail = std::to_string(good_seeds) + "/20 seeds with >=90% adoption; causality " +
           (causality_ok ? "holds" : "violated");
  report(4, "punishment-reaction establishment", pass, detail);
}

// ---------------------------------------------------------------------------
// 5. negative-diagonalization experiment across 20 seeds

std::vector<Code> parse_sample_list(const std::string& text) {
  std::vector<Code> out;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find(';', start);
    if (end == std::string::npos) end = text.size();
    std::string part = text.substr(start, end - start);
    if (!part.empty()) out.push_back(parse_text(part));
    start = end + 1;
  }
  return out;
}

bool verdict_rejects(TestVerdict v) {
  // bottoms count as rejection
  return v == TestVerdict::False || v == TestVerdict::Bottom;
}

void criterion_negative_diagonalization() {
  int good_seeds = 0;
  bool punished_after_ok = true;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    RunConfig cfg;
    cfg.seed = seed;
    cfg.capacity = 16;
    cfg.generations = 300;
    cfg.epsilon_explore = Rational(2, 5);
    cfg.max_memory = 48;
    cfg.budget.max_size = 3;
    cfg.budget.max_candidates = 3000;
    cfg.budget.lit_range = 1;
    cfg.neg_max_size = 5;
    cfg.neg_max_candidates = 60000;
    cfg.experiment.family = ExperimentFamily::IntegerSeries;
    RunResult r = Engine(cfg).run();
    if (r.report.extinct) continue;

    // equivalence on the recorded sample with the reference tester
    TestingCode reference = make_integer_testing_code(Code::lit(0));
    bool equivalent_found = false;
    for (const TransitionEvent& e : r.events.events()) {
      if (e.action != "testing_code_found" || !e.code_text) continue;
      TestingCode n{parse_text(*e.code_text)};
      auto rej_pos = e.detail.find("rejected=");
      auto ret_pos = e.detail.find(" retained=");
      if (rej_pos == std::string::npos || ret_pos == std::string::npos) continue;
      std::vector<Code> rejected =
          parse_sample_list(e.detail.substr(rej_pos + 9, ret_pos - rej_pos - 9));
      std::vector<Code> retained = parse_sample_list(e.detail.substr(ret_pos + 10));
      bool equivalent = true;
      for (const Code& c : rejected) {
        if (verdict_rejects(behavioral_test(n, c, 512)) !=
            verdict_rejects(behavioral_test(reference, c, 512)))
          equivalent = false;
      }
      for (const Code& c : retained) {
        if ((behavioral_test(n, c, 512) == TestVerdict::True) !=
            (behavioral_test(reference, c, 512) == TestVerdict::True))
          equivalent = false;
      }
      if (equivalent) { equivalent_found = true; break; }
    }
    if (equivalent_found) ++good_seeds;

    // zero punished outputs for 50 generations after UseTestingCode adoption
    LineageInfo lineage = scan_lineage(r.events, "CondE->UseTestingCode");
    for (const TransitionEvent& e : r.events.events()) {
      if (e.action != "trial" || e.reward >= 0) continue;
      auto since = lineage.holding_since(e.organism_id);
      if (!since) continue;
      if (e.generation > *since && e.generation <= *since + 50)
        punished_after_ok = false;
    }
  }
  bool pass = good_seeds >= 18 && punished_after_ok;
  report(5, "negative-diagonalization establishment", pass,
         std::to_string(good_seeds) +
             "/20 seeds with an on-sample-equivalent tester; post-adoption "
             "punished rate " +
             (punished_after_ok ? "zero" : "nonzero"));
}

// ---------------------------------------------------------------------------
// 6. fading-memory equivalence over 100 randomized constructions

void criterion_fading_equivalence() {
  SearchBudget budget;
  budget.max_size = 3;
  budget.lit_range = 2;
  budget.max_candidates = 100000;
  int agree = 0, found_cases = 0;
  const int total = 100;
  RngStream stream(555);
  for (int trial = 0; trial < total; ++trial) {
    std::int64_t start = static_cast<std::int64_t>(stream.below(4));
    std::int64_t step = 1 + static_cast<std::int64_t>(stream.below(2));
    std::vector<Code> clean;
    int len = 3 + static_cast<int>(stream.below(3));
    for (int i = 0; i < len; ++i) clean.push_back(Code::lit(start + i * step));

    std::vector<HistoryEntry> mem;
    for (const Code& c : clean) {
      while (stream.below(3) == 0) {
        HistoryEntry junk;
        junk.snapshot = Code::pair(Code::lit(static_cast<std::int64_t>(stream.below(5))),
                                   Code::lit(static_cast<std::int64_t>(stream.below(5))));
        junk.punished = true;
        junk.reward = -1;
        junk.weight = Rational(0);
        mem.push_back(junk);
      }
      HistoryEntry e;
      e.snapshot = c;
      mem.push_back(e);
    }
    RngStream sel = derive_stream(999, 1, trial);
    auto faded = select_weighted_subsequence(mem, true, sel);
    auto from_faded = find_fitting_recursor(faded, budget);
    auto from_clean = find_fitting_recursor(clean, budget);
    // the same result: both searches find the same code, or both nothing
    bool same = from_faded.has_value() == from_clean.has_value() &&
                (!from_faded || *from_faded == *from_clean);
    if (same) ++agree;
    if (from_clean) ++found_cases;
  }
  report(6, "fading-memory equivalence",
         agree == total && found_cases > total / 2,
         std::to_string(agree) + "/" + std::to_string(total) + " agreements, " +
             std::to_string(found_cases) + " with a fit");
}

// ---------------------------------------------------------------------------
// 7. separation soundness for every successful negative diagonalization

void criterion_separation_soundness() {
  int found = 0, sound = 0;

  auto check = [&](const std::vector<Code>& rejected,
                   const std::vector<Code>& retained, const SearchBudget& b) {
    auto n = negative_diagonalize(rejected, retained, b);
    if (!n) return;
    ++found;
    bool ok = true;
    for (const Code& r : rejected) {
      EvalOutcome out = eval(n->code, r, b.fuel_per_eval);
      if (!out.ok() || !(out.value() == Code::lit(0))) ok = false;
    }
    for (const Code& r : retained) {
      EvalOutcome out = eval(n->code, r, b.fuel_per_eval);
      if (!out.ok() || !(out.value() == Code::lit(1))) ok = false;
    }
    if (ok) ++sound;
  };

  SearchBudget b;
  b.max_size = 3;
  b.lit_range = 1;
  b.max_candidates = 50000;

  // fixed corpus
  check({parse_text("(pair (lit 1) (lit 2))")}, {parse_text("(lit 3)")}, b);
  check({}, {parse_text("(lit 1)")}, b);
  check({parse_text("(lit 0)")}, {parse_text("(lit 1)")}, b);
  check({parse_text("(pair (lit 0) (lit 0))"), parse_text("(pair (lit 1) (lit 1))")},
        {parse_text("(lit 0)"), parse_text("(lit 5)")}, b);

  // randomized separable-by-construction corpus: structural families on one
  // side, literals on the other, which a small separator always splits
  RngStream stream(321);
  for (int trial = 0; trial < 40; ++trial) {
    std::set<Code, CanonicalLess> rej, ret;
    for (std::uint64_t i = 0; i <= stream.below(3); ++i) {
      std::int64_t x = static_cast<std::int64_t>(stream.below(3)) - 1;
      std::int64_t y = static_cast<std::int64_t>(stream.below(3)) - 1;
      rej.insert(Code::pair(Code::lit(x), Code::lit(y)));
    }
    for (std::uint64_t i = 0; i <= stream.below(3); ++i)
      ret.insert(Code::lit(static_cast<std::int64_t>(stream.below(5)) - 2));
    check(std::vector<Code>(rej.begin(), rej.end()),
          std::vector<Code>(ret.begin(), ret.end()), b);
  }

  // plus fully random small-code samples, kept whenever they separate
  oracle::Params op{3, 1, all_kinds()};
  auto pool = oracle::all_codes_sorted(op);
  for (int trial = 0; trial < 60; ++trial) {
    std::set<Code, CanonicalLess> rej, ret;
    for (std::uint64_t i = 0; i <= stream.below(2); ++i)
      rej.insert(pool[stream.below(pool.size())]);
    for (std::uint64_t i = 0; i <= stream.below(3); ++i) {
      const Code& c = pool[stream.below(pool.size())];
      if (!rej.contains(c)) ret.insert(c);
    }
    check(std::vector<Code>(rej.begin(), rej.end()),
          std::vector<Code>(ret.begin(), ret.end()), b);
  }

  // plus the behavioral-tester case
  SearchBudget b5 = b;
  b5.max_size = 5;
  b5.max_candidates = 100000;
  check({parse_text("(pair (lit 0) (lit 0))")},
        {parse_text("(lit 3)"), parse_text("(add (input) (lit 1))")}, b5);

  report(7, "separation soundness on every found separator", found > 20 && sound == found,
         std::to_string(sound) + "/" + std::to_string(found) + " separators sound");
}

// ---------------------------------------------------------------------------
// 8. non-symmetric proliferation decomposition over 500 random organisms

void criterion_non_symmetric() {
  EnumParams pool_params{3, 1, all_kinds()};
  auto pool = enumerate_codes_vec(pool_params);
  RngStream stream(777);
  int checked = 0, correct = 0;
  while (checked < 500) {
    Organism o;
    o.id = 1;
    o.base = pool[stream.below(pool.size())];
    int depth = 1 + static_cast<int>(stream.below(4));
    for (int i = 0; i < depth; ++i) {
      o.stack.push_back(RecursorEntry{pool[stream.below(pool.size())],
                                      stream.below(4) != 0, i});
    }
    int newest = -1;
    for (int i = static_cast<int>(o.stack.size()) - 1; i >= 0; --i)
      if (o.stack[static_cast<std::size_t>(i)].active) { newest = i; break; }
    if (newest < 0) continue;

    Organism below = o;
    below.stack.erase(below.stack.begin() + newest);
    EvalOutcome c = effective_code(below, 2000);
    if (!c.ok()) continue;
    std::int64_t fuel = 2000;
    EvalOutcome c1 = eval_shared(o.stack[static_cast<std::size_t>(newest)].code,
                                 c.value(), o.registers, fuel);
    if (!c1.ok()) continue;

    IdGen ids(10);
    auto children = non_symmetric_proliferate(o, 2000, ids);
    ++checked;
    if (children && children->first.base == c1.value() &&
        children->first.stack.size() == 1 &&
        children->first.stack[0].code ==
            o.stack[static_cast<std::size_t>(newest)].code &&
        children->second.base == c.value() && children->second.stack.empty())
      ++correct;
  }
  report(8, "non-symmetric proliferation decomposition", correct == 500,
         std::to_string(correct) + "/500 decompositions exact");
}

// ---------------------------------------------------------------------------
// 9. probability laws

void criterion_probability_laws() {
  bool exact_ok = true;
  FrequencyTable<int> t;
  t.activate(1, 3);
  t.activate(2, 1);
  exact_ok &= freq_prob(t, 1) == Rational(3, 4);
  exact_ok &= freq_prob(t, 2) == Rational(1, 4);
  FrequencyTable<int> even;
  even.activate(1, 7);
  even.activate(2, 7);
  exact_ok &= freq_prob(even, 1) == Rational(1, 2);
  Rational total(0);
  for (const auto& [id, n] : t.counts) total = total + freq_prob(t, id);
  exact_ok &= total == Rational(1);

  WeightTable<int> w;
  w.weights[1] = Rational(1);
  w.weights[2] = Rational(3);
  w.weights[3] = Rational(4);
  std::map<int, int> counts;
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) {
    RngStream stream = derive_stream(12345, 1, i);
    auto pick = weighted_choice(w, stream);
    if (pick) ++counts[*pick];
  }
  double e1 = std::abs(counts[1] / double(draws) - 0.125);
  double e2 = std::abs(counts[2] / double(draws) - 0.375);
  double e3 = std::abs(counts[3] / double(draws) - 0.5);
  bool empirical_ok = e1 < 0.01 && e2 < 0.01 && e3 < 0.01;

  char buf[128];
  std::snprintf(buf, sizeof buf, "exact %s; empirical errors %.4f/%.4f/%.4f",
                exact_ok ? "ok" : "broken", e1, e2, e3);
  report(9, "probability laws", exact_ok && empirical_ok, buf);
}

}  // namespace

int main() {
  std::printf("selfedit acceptance suite\n");
  criterion_shortest_fit();
  criterion_enumeration();
  criterion_determinism();
  criterion_punishment_establishment();
  criterion_negative_diagonalization();
  criterion_fading_equivalence();
  criterion_separation_soundness();
  criterion_non_symmetric();
  criterion_probability_laws();
  std::printf("%d criterion failure(s)\n", failures);
  return failures;
}
