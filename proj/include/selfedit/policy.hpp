#pragma once

#include <optional>
#include <string>

#include "selfedit/code.hpp"
#include "selfedit/rational.hpp"
#include "selfedit/text.hpp"

namespace selfedit {

// A code whose algorithm answers only True (lit 1) or False (lit 0).
// Instances are only built by paths that have checked that contract over a
// sample (negative diagonalization, or the tests' explicit constructors).
struct TestingCode {
  Code code;

  friend bool operator==(const TestingCode& a, const TestingCode& b) {
    return a.code == b.code;
  }
};

enum class PolicyCondition : std::uint8_t {
  RewardNeg,  // previous step was punished
  RewardPos,  // previous step was positively rewarded
  CondE,      // the E register was set
  NewRecursorJustPushed,
  Always,
};

enum class PolicyAction : std::uint8_t {
  StepBackNewestDeactivate,
  StepBackNewestDelete,
  ExcludePunishedFromDiagonal,
  UseTestingCode,
  DiagonalizeNow,
};

constexpr std::string_view policy_condition_name(PolicyCondition c) {
  switch (c) {
    case PolicyCondition::RewardNeg: return "RewardNeg";
    case PolicyCondition::RewardPos: return "RewardPos";
    case PolicyCondition::CondE: return "CondE";
    case PolicyCondition::NewRecursorJustPushed: return "NewRecursorJustPushed";
    case PolicyCondition::Always: return "Always";
  }
  return "";
}

constexpr std::string_view policy_action_name(PolicyAction a) {
  switch (a) {
    case PolicyAction::StepBackNewestDeactivate: return "StepBackNewestDeactivate";
    case PolicyAction::StepBackNewestDelete: return "StepBackNewestDelete";
    case PolicyAction::ExcludePunishedFromDiagonal: return "ExcludePunishedFromDiagonal";
    case PolicyAction::UseTestingCode: return "UseTestingCode";
    case PolicyAction::DiagonalizeNow: return "DiagonalizeNow";
  }
  return "";
}

// Condition -> action pair over noticeable state; the representation in
// which reaction rules are discovered, adopted and then followed.
struct PolicyRule {
  PolicyCondition condition;
  PolicyAction action;
  std::optional<TestingCode> testing;  // present iff action == UseTestingCode
  Rational weight{1};

  bool same_rule(const PolicyRule& other) const {
    if (condition != other.condition || action != other.action) return false;
    if (testing.has_value() != other.testing.has_value()) return false;
    return !testing || testing->code == other.testing->code;
  }

  std::string to_string() const {
    std::string s = std::string(policy_condition_name(condition)) + "->" +
                    std::string(policy_action_name(action));
    if (testing) s += "[" + to_text(testing->code) + "]";
    return s;
  }
};

}  // namespace selfedit
