#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string_view>
#include <utility>
#include <vector>

namespace selfedit {

// Node kinds of the code DSL, in canonical order. The ordinal of a kind is
// observable from inside the language via the `kind` instruction, so this
// order is part of the language definition and must not be reshuffled.
enum class NodeKind : std::uint8_t {
  Lit,       // integer literal (payload)
  Input,     // the evaluation input
  SelfCode,  // the code currently being run
  Env,       // register read (payload = register id)
  Quote,     // child, unevaluated
  Pair,
  First,
  Second,
  Add,
  Mul,
  IsLit,
  IsPair,
  EqCode,
  If,
  Apply,
  KindOf,    // spelled "kind" in the text format
  Get,
  Put,
};

inline constexpr int kNodeKindCount = 18;

constexpr int arity(NodeKind k) {
  switch (k) {
    case NodeKind::Lit:
    case NodeKind::Input:
    case NodeKind::SelfCode:
    case NodeKind::Env:
      return 0;
    case NodeKind::Quote:
    case NodeKind::First:
    case NodeKind::Second:
    case NodeKind::IsLit:
    case NodeKind::IsPair:
    case NodeKind::KindOf:
      return 1;
    case NodeKind::Pair:
    case NodeKind::Add:
    case NodeKind::Mul:
    case NodeKind::EqCode:
    case NodeKind::Apply:
    case NodeKind::Get:
      return 2;
    case NodeKind::If:
    case NodeKind::Put:
      return 3;
  }
  return 0;
}

constexpr bool has_payload(NodeKind k) {
  return k == NodeKind::Lit || k == NodeKind::Env;
}

constexpr std::string_view kind_name(NodeKind k) {
  switch (k) {
    case NodeKind::Lit: return "lit";
    case NodeKind::Input: return "input";
    case NodeKind::SelfCode: return "selfcode";
    case NodeKind::Env: return "env";
    case NodeKind::Quote: return "quote";
    case NodeKind::Pair: return "pair";
    case NodeKind::First: return "first";
    case NodeKind::Second: return "second";
    case NodeKind::Add: return "add";
    case NodeKind::Mul: return "mul";
    case NodeKind::IsLit: return "islit";
    case NodeKind::IsPair: return "ispair";
    case NodeKind::EqCode: return "eqcode";
    case NodeKind::If: return "if";
    case NodeKind::Apply: return "apply";
    case NodeKind::KindOf: return "kind";
    case NodeKind::Get: return "get";
    case NodeKind::Put: return "put";
  }
  return "";
}

inline std::optional<NodeKind> kind_from_name(std::string_view s) {
  for (int i = 0; i < kNodeKindCount; ++i) {
    NodeKind k = static_cast<NodeKind>(i);
    if (kind_name(k) == s) return k;
  }
  return std::nullopt;
}

// Immutable tree-structured program/value. Copies share structure, so
// passing codes around and keeping history snapshots is cheap.
class Code {
 public:
  // defaults to (lit 0) so Code is always a valid value
  Code() : Code(lit(0)) {}

  static Code lit(std::int64_t v) { return Code(NodeKind::Lit, v, {}); }
  static Code input() { return Code(NodeKind::Input, 0, {}); }
  static Code self_code() { return Code(NodeKind::SelfCode, 0, {}); }
  static Code env(std::int64_t reg) { return Code(NodeKind::Env, reg, {}); }
  static Code quote(Code c) { return Code(NodeKind::Quote, 0, {std::move(c)}); }
  static Code pair(Code a, Code b) {
    return Code(NodeKind::Pair, 0, {std::move(a), std::move(b)});
  }

  static Code make(NodeKind k, std::int64_t payload, std::vector<Code> children) {
    if (static_cast<int>(children.size()) != arity(k))
      throw std::invalid_argument("code: arity mismatch for " +
                                  std::string(kind_name(k)));
    if (!has_payload(k) && payload != 0)
      throw std::invalid_argument("code: payload not allowed for " +
                                  std::string(kind_name(k)));
    return Code(k, payload, std::move(children));
  }

  NodeKind kind() const { return node_->kind; }
  std::int64_t payload() const { return node_->payload; }
  std::size_t child_count() const { return node_->children.size(); }
  const Code& child(std::size_t i) const { return node_->children[i]; }
  const std::vector<Code>& children() const { return node_->children; }

  bool is_lit() const { return kind() == NodeKind::Lit; }
  bool is_pair() const { return kind() == NodeKind::Pair; }

  friend bool operator==(const Code& a, const Code& b) {
    if (a.node_ == b.node_) return true;
    if (a.kind() != b.kind() || a.payload() != b.payload()) return false;
    if (a.child_count() != b.child_count()) return false;
    for (std::size_t i = 0; i < a.child_count(); ++i)
      if (!(a.child(i) == b.child(i))) return false;
    return true;
  }
  friend bool operator!=(const Code& a, const Code& b) { return !(a == b); }

 private:
  struct Node;
  explicit Code(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  Code(NodeKind k, std::int64_t payload, std::vector<Code> children)
      : node_(std::make_shared<const Node>(Node{k, payload, std::move(children)})) {}

  struct Node {
    NodeKind kind;
    std::int64_t payload;
    std::vector<Code> children;
  };

  std::shared_ptr<const Node> node_;
};

// total node count
inline std::int64_t size(const Code& c) {
  std::int64_t n = 1;
  for (std::size_t i = 0; i < c.child_count(); ++i) n += size(c.child(i));
  return n;
}

// sub-code at a child-index path; nullopt when the path does not exist
inline std::optional<Code> subcode_at(const Code& c, std::span<const int> path) {
  Code cur = c;
  for (int step : path) {
    if (step < 0 || static_cast<std::size_t>(step) >= cur.child_count())
      return std::nullopt;
    cur = cur.child(static_cast<std::size_t>(step));
  }
  return cur;
}

inline std::optional<Code> replace_at(const Code& c, std::span<const int> path,
                                      const Code& replacement) {
  if (path.empty()) return replacement;
  int step = path[0];
  if (step < 0 || static_cast<std::size_t>(step) >= c.child_count())
    return std::nullopt;
  auto inner = replace_at(c.child(static_cast<std::size_t>(step)),
                          path.subspan(1), replacement);
  if (!inner) return std::nullopt;
  std::vector<Code> kids = c.children();
  kids[static_cast<std::size_t>(step)] = *inner;
  return Code::make(c.kind(), c.payload(), std::move(kids));
}

// The "use s instead of c" modifier: a recursor that outputs s on any input.
inline Code make_replacing_recursor(const Code& s) { return Code::quote(s); }

// Payload order used by canonical enumeration: 0, 1, -1, 2, -2, ...
// Encoded as the lexicographic key (|p|, p < 0).
inline bool payload_less(std::int64_t a, std::int64_t b) {
  std::uint64_t ma = a < 0 ? ~static_cast<std::uint64_t>(a) + 1 : static_cast<std::uint64_t>(a);
  std::uint64_t mb = b < 0 ? ~static_cast<std::uint64_t>(b) + 1 : static_cast<std::uint64_t>(b);
  if (ma != mb) return ma < mb;
  return a >= 0 && b < 0;
}

// Canonical total order: size, then kind, then payload (0,1,-1,2,-2,...),
// then children lexicographically under the same order.
inline bool canonical_less(const Code& a, const Code& b) {
  std::int64_t sa = size(a), sb = size(b);
  if (sa != sb) return sa < sb;
  if (a.kind() != b.kind()) return a.kind() < b.kind();
  if (a.payload() != b.payload()) return payload_less(a.payload(), b.payload());
  for (std::size_t i = 0; i < a.child_count(); ++i) {
    if (canonical_less(a.child(i), b.child(i))) return true;
    if (canonical_less(b.child(i), a.child(i))) return false;
  }
  return false;
}

struct CanonicalLess {
  bool operator()(const Code& a, const Code& b) const { return canonical_less(a, b); }
};

}  // namespace selfedit
