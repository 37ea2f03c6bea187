#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "selfedit/diagonal.hpp"
#include "selfedit/experiment.hpp"
#include "selfedit/text.hpp"

using namespace selfedit;

namespace {

Code P(const char* text) { return parse_text(text); }

ExperimentSpec arithmetic(std::int64_t start, std::int64_t step) {
  ExperimentSpec s;
  s.family = ExperimentFamily::SequencePrediction;
  s.generator = SequenceGenerator::Arithmetic;
  s.arith_start = start;
  s.arith_step = step;
  return s;
}

}  // namespace

TEST_CASE("arithmetic tasks advance by the step") {
  ExperimentSpec spec = arithmetic(1, 1);
  Task t2 = make_task(spec, 2);
  CHECK(*t2.target == P("(lit 3)"));
  CHECK(t2.input == P("(lit 2)"));  // previous target
  Task t0 = make_task(spec, 0);
  CHECK(*t0.target == P("(lit 1)"));
  CHECK(t0.input == P("(lit 0)"));
  CHECK_FALSE(t0.cond_e);
}

TEST_CASE("constant tasks repeat the target") {
  ExperimentSpec spec;
  spec.generator = SequenceGenerator::Constant;
  spec.constant_target = P("(lit 7)");
  for (int i : {0, 1, 5}) {
    Task t = make_task(spec, i);
    CHECK(*t.target == P("(lit 7)"));
  }
}

TEST_CASE("integer series tasks raise cond_e and classify outputs") {
  ExperimentSpec spec;
  spec.family = ExperimentFamily::IntegerSeries;
  Task t = make_task(spec, 3);
  CHECK(t.cond_e);
  CHECK(t.integer_class);
  CHECK_FALSE(t.target.has_value());

  CHECK(evaluate_trial(spec, t, EvalOutcome::of(P("(lit 3)"))).points == 1);
  CHECK(evaluate_trial(spec, t, EvalOutcome::of(P("(pair (lit 1) (lit 2))"))).points ==
        -1);
  CHECK(evaluate_trial(spec, t, EvalOutcome::bottom(EvalError::TypeError)).points == -1);
}

TEST_CASE("sequence prediction rewards exact matches only") {
  ExperimentSpec spec = arithmetic(1, 1);
  Task t = make_task(spec, 2);  // target (lit 3)
  CHECK(evaluate_trial(spec, t, EvalOutcome::of(P("(lit 3)"))).points == 1);
  CHECK(evaluate_trial(spec, t, EvalOutcome::of(P("(lit 4)"))).points == -1);
  CHECK(evaluate_trial(spec, t, EvalOutcome::bottom(EvalError::FuelExhausted)).points ==
        -1);
}

TEST_CASE("address copy persists the theta sub-code") {
  ExperimentSpec spec;
  spec.generator = SequenceGenerator::AddressCopy;
  spec.address_seed = P("(pair (lit 7) (lit 0))");
  spec.address_theta = {0};
  Task t0 = make_task(spec, 0);
  CHECK(*t0.target == P("(pair (lit 7) (lit 0))"));
  Task t1 = make_task(spec, 1);
  CHECK(*t1.target == P("(lit 7)"));
  // once the path runs out the target persists at the fixpoint
  Task t5 = make_task(spec, 5);
  CHECK(*t5.target == P("(lit 7)"));
}

TEST_CASE("punishment establishment punishes disturbed outputs") {
  ExperimentSpec spec;
  spec.family = ExperimentFamily::PunishmentEstablishment;
  spec.constant_target = P("(lit 7)");
  Task t = make_task(spec, 4);
  CHECK(*t.target == P("(lit 7)"));
  CHECK(evaluate_trial(spec, t, EvalOutcome::of(P("(lit 7)"))).points == 1);
  CHECK(evaluate_trial(spec, t, EvalOutcome::of(P("(lit 8)"))).points == -1);
}

TEST_CASE("collect_samples splits punished from retained snapshots") {
  std::vector<HistoryEntry> mem;
  auto add = [&](const char* snap, bool punished) {
    HistoryEntry e;
    e.snapshot = P(snap);
    e.punished = punished;
    e.reward = punished ? -1 : 1;
    mem.push_back(e);
  };
  add("(pair (lit 1) (lit 2))", true);
  add("(pair (lit 3) (lit 4))", true);
  add("(lit 1)", false);
  add("(lit 2)", false);
  add("(lit 3)", false);
  add("(lit 1)", false);  // duplicate

  SamplePair s = collect_samples(mem);
  CHECK(s.rejected.size() == 2);
  CHECK(s.retained.size() == 3);

  // a code both punished and rewarded lands in rejected only
  add("(lit 2)", true);
  s = collect_samples(mem);
  CHECK(s.rejected.size() == 3);
  CHECK(s.retained.size() == 2);
  for (const Code& r : s.rejected)
    for (const Code& k : s.retained) CHECK_FALSE(r == k);
}

TEST_CASE("collect_samples output feeds negative diagonalization directly") {
  std::vector<HistoryEntry> mem;
  HistoryEntry bad;
  bad.snapshot = P("(pair (lit 1) (lit 2))");
  bad.punished = true;
  mem.push_back(bad);
  HistoryEntry good;
  good.snapshot = P("(lit 3)");
  mem.push_back(good);
  SamplePair s = collect_samples(mem);
  SearchBudget b;
  b.max_size = 2;
  auto n = negative_diagonalize(s.rejected, s.retained, b);
  REQUIRE(n.has_value());
  CHECK(to_text(n->code) == "(islit (input))");
}

TEST_CASE("integer series verdicts mirror the behavioral tester") {
  ExperimentSpec spec;
  spec.family = ExperimentFamily::IntegerSeries;
  Task task = make_task(spec, 0);
  TestingCode n = make_integer_testing_code(task.input);
  const char* candidates[] = {"(lit 5)", "(add (input) (lit 1))",
                              "(pair (lit 1) (lit 2))", "(quote (pair (lit 1) (lit 2)))",
                              "(first (input))", "(mul (input) (input))"};
  for (const char* text : candidates) {
    Code r = P(text);
    TestVerdict verdict = behavioral_test(n, r, 256);
    if (verdict == TestVerdict::True || verdict == TestVerdict::False) {
      EvalOutcome output = eval(r, task.input, 256);
      std::int64_t points = evaluate_trial(spec, task, output).points;
      CHECK((verdict == TestVerdict::True) == (points > 0));
    }
  }
}

TEST_CASE("report_metrics aggregates trials per generation") {
  EventLog log;
  log.append(0, 1, "trial", "(lit 1)", 1, 1);
  log.append(0, 2, "trial", "(lit 1)", -1, -1);
  log.append(1, 1, "trial", "(lit 1)", 1, 2);
  log.append(1, 1, "policy_adopted", std::nullopt, 0, 2,
             "RewardNeg->StepBackNewestDeactivate");
  ExperimentSpec spec;
  ExperimentMetrics m = report_metrics(log, spec);
  REQUIRE(m.per_generation.size() == 2);
  CHECK(m.per_generation[0].trials == 2);
  CHECK(m.per_generation[0].correct == 1);
  CHECK(m.per_generation[0].punishments == 1);
  CHECK(m.per_generation[1].trials == 1);
  CHECK(m.first_policy_adoption.at("RewardNeg->StepBackNewestDeactivate") == 1);
  CHECK_FALSE(m.first_negative_diag_success.has_value());
}
