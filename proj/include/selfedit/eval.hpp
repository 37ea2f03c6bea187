#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <variant>

#include "selfedit/code.hpp"

namespace selfedit {

// Registers a code can read with (env i). The reward register is how the
// outcome of the rewarding function becomes noticeable to the code itself.
enum class RegisterId : std::int64_t { Reward = 0, CondE = 1, Age = 2 };

inline constexpr std::int64_t kRegisterCount = 3;

struct Registers {
  std::array<std::int64_t, kRegisterCount> values{0, 0, 0};

  static bool valid(std::int64_t id) { return id >= 0 && id < kRegisterCount; }
  std::int64_t get(RegisterId id) const { return values[static_cast<std::size_t>(id)]; }
  void set(RegisterId id, std::int64_t v) { values[static_cast<std::size_t>(id)] = v; }

  friend bool operator==(const Registers&, const Registers&) = default;
};

enum class EvalError : std::uint8_t { FuelExhausted, TypeError, BadAddress };

constexpr std::string_view eval_error_name(EvalError e) {
  switch (e) {
    case EvalError::FuelExhausted: return "FuelExhausted";
    case EvalError::TypeError: return "TypeError";
    case EvalError::BadAddress: return "BadAddress";
  }
  return "";
}

// Value or bottom; evaluation never aborts.
class EvalOutcome {
 public:
  static EvalOutcome of(Code value) { return EvalOutcome(std::move(value)); }
  static EvalOutcome bottom(EvalError e) { return EvalOutcome(e); }

  bool ok() const { return std::holds_alternative<Code>(v_); }
  const Code& value() const { return std::get<Code>(v_); }
  EvalError error() const { return std::get<EvalError>(v_); }

  friend bool operator==(const EvalOutcome& a, const EvalOutcome& b) {
    if (a.ok() != b.ok()) return false;
    return a.ok() ? a.value() == b.value() : a.error() == b.error();
  }

 private:
  explicit EvalOutcome(Code c) : v_(std::move(c)) {}
  explicit EvalOutcome(EvalError e) : v_(e) {}
  std::variant<Code, EvalError> v_;
};

struct EvalContext {
  Code input;
  Code self_code;
  Registers registers;
  std::int64_t fuel = 0;
};

namespace detail {

// One fuel unit per node evaluation, shared through Apply.
inline EvalOutcome eval_node(const Code& c, const Code& input, const Code& self,
                             const Registers& regs, std::int64_t& fuel) {
  if (fuel <= 0) return EvalOutcome::bottom(EvalError::FuelExhausted);
  --fuel;
  switch (c.kind()) {
    case NodeKind::Lit:
      return EvalOutcome::of(c);
    case NodeKind::Env:
      if (!Registers::valid(c.payload()))
        return EvalOutcome::bottom(EvalError::BadAddress);
      return EvalOutcome::of(
          Code::lit(regs.values[static_cast<std::size_t>(c.payload())]));
    case NodeKind::Input:
      return EvalOutcome::of(input);
    case NodeKind::SelfCode:
      return EvalOutcome::of(self);
    case NodeKind::Quote:
      return EvalOutcome::of(c.child(0));
    case NodeKind::Pair: {
      EvalOutcome a = eval_node(c.child(0), input, self, regs, fuel);
      if (!a.ok()) return a;
      EvalOutcome b = eval_node(c.child(1), input, self, regs, fuel);
      if (!b.ok()) return b;
      return EvalOutcome::of(Code::pair(a.value(), b.value()));
    }
    case NodeKind::First:
    case NodeKind::Second: {
      EvalOutcome a = eval_node(c.child(0), input, self, regs, fuel);
      if (!a.ok()) return a;
      if (!a.value().is_pair()) return EvalOutcome::bottom(EvalError::TypeError);
      return EvalOutcome::of(a.value().child(c.kind() == NodeKind::First ? 0 : 1));
    }
    case NodeKind::Add:
    case NodeKind::Mul: {
      EvalOutcome a = eval_node(c.child(0), input, self, regs, fuel);
      if (!a.ok()) return a;
      EvalOutcome b = eval_node(c.child(1), input, self, regs, fuel);
      if (!b.ok()) return b;
      if (!a.value().is_lit() || !b.value().is_lit())
        return EvalOutcome::bottom(EvalError::TypeError);
      std::int64_t x = a.value().payload(), y = b.value().payload();
      std::int64_t r = c.kind() == NodeKind::Add
                           ? static_cast<std::int64_t>(static_cast<std::uint64_t>(x) +
                                                       static_cast<std::uint64_t>(y))
                           : static_cast<std::int64_t>(static_cast<std::uint64_t>(x) *
                                                       static_cast<std::uint64_t>(y));
      return EvalOutcome::of(Code::lit(r));
    }
    case NodeKind::IsLit:
    case NodeKind::IsPair: {
      EvalOutcome a = eval_node(c.child(0), input, self, regs, fuel);
      if (!a.ok()) return a;
      bool hit = c.kind() == NodeKind::IsLit ? a.value().is_lit() : a.value().is_pair();
      return EvalOutcome::of(Code::lit(hit ? 1 : 0));
    }
    case NodeKind::EqCode: {
      EvalOutcome a = eval_node(c.child(0), input, self, regs, fuel);
      if (!a.ok()) return a;
      EvalOutcome b = eval_node(c.child(1), input, self, regs, fuel);
      if (!b.ok()) return b;
      return EvalOutcome::of(Code::lit(a.value() == b.value() ? 1 : 0));
    }
    case NodeKind::If: {
      EvalOutcome cond = eval_node(c.child(0), input, self, regs, fuel);
      if (!cond.ok()) return cond;
      bool take_else = cond.value() == Code::lit(0);
      return eval_node(c.child(take_else ? 2 : 1), input, self, regs, fuel);
    }
    case NodeKind::Apply: {
      EvalOutcome f = eval_node(c.child(0), input, self, regs, fuel);
      if (!f.ok()) return f;
      EvalOutcome x = eval_node(c.child(1), input, self, regs, fuel);
      if (!x.ok()) return x;
      // run the value as a program, self rebound to it, fuel shared
      return eval_node(f.value(), x.value(), f.value(), regs, fuel);
    }
    case NodeKind::KindOf: {
      EvalOutcome a = eval_node(c.child(0), input, self, regs, fuel);
      if (!a.ok()) return a;
      return EvalOutcome::of(Code::lit(static_cast<std::int64_t>(a.value().kind())));
    }
    case NodeKind::Get: {
      EvalOutcome a = eval_node(c.child(0), input, self, regs, fuel);
      if (!a.ok()) return a;
      EvalOutcome i = eval_node(c.child(1), input, self, regs, fuel);
      if (!i.ok()) return i;
      if (!i.value().is_lit()) return EvalOutcome::bottom(EvalError::TypeError);
      std::int64_t idx = i.value().payload();
      if (idx < 0 || static_cast<std::size_t>(idx) >= a.value().child_count())
        return EvalOutcome::bottom(EvalError::BadAddress);
      return EvalOutcome::of(a.value().child(static_cast<std::size_t>(idx)));
    }
    case NodeKind::Put: {
      EvalOutcome a = eval_node(c.child(0), input, self, regs, fuel);
      if (!a.ok()) return a;
      EvalOutcome i = eval_node(c.child(1), input, self, regs, fuel);
      if (!i.ok()) return i;
      EvalOutcome b = eval_node(c.child(2), input, self, regs, fuel);
      if (!b.ok()) return b;
      if (!i.value().is_lit()) return EvalOutcome::bottom(EvalError::TypeError);
      std::int64_t idx = i.value().payload();
      if (idx < 0 || static_cast<std::size_t>(idx) >= a.value().child_count())
        return EvalOutcome::bottom(EvalError::BadAddress);
      std::vector<Code> kids = a.value().children();
      kids[static_cast<std::size_t>(idx)] = b.value();
      return EvalOutcome::of(Code::make(a.value().kind(), a.value().payload(),
                                        std::move(kids)));
    }
  }
  return EvalOutcome::bottom(EvalError::TypeError);
}

}  // namespace detail

inline EvalOutcome eval(const Code& program, const EvalContext& ctx) {
  std::int64_t fuel = ctx.fuel;
  return detail::eval_node(program, ctx.input, ctx.self_code, ctx.registers, fuel);
}

// shared-fuel variant used when folding recursor stacks
inline EvalOutcome eval_shared(const Code& program, const Code& input,
                               const Registers& regs, std::int64_t& fuel) {
  return detail::eval_node(program, input, program, regs, fuel);
}

inline EvalOutcome eval(const Code& program, const Code& input, std::int64_t fuel) {
  return eval(program, EvalContext{input, program, Registers{}, fuel});
}

}  // namespace selfedit
