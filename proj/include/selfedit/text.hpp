#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include "selfedit/code.hpp"

namespace selfedit {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t position, const std::string& message)
      : std::runtime_error("parse error at " + std::to_string(position) + ": " +
                           message),
        position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

// Grammar: code := "(" kindname (" " payload)? (" " code)* ")"
// Single spaces, lowercase kind names, base-10 payloads, no extra whitespace.
inline std::string to_text(const Code& c) {
  std::string out = "(";
  out += kind_name(c.kind());
  if (has_payload(c.kind())) {
    out += ' ';
    out += std::to_string(c.payload());
  }
  for (std::size_t i = 0; i < c.child_count(); ++i) {
    out += ' ';
    out += to_text(c.child(i));
  }
  out += ')';
  return out;
}

namespace detail {

inline constexpr int kMaxParseDepth = 4096;

class Parser {
 public:
  explicit Parser(std::string_view s) : s_(s) {}

  Code parse() {
    Code c = parse_code(0);
    if (pos_ != s_.size()) fail("trailing characters after code");
    return c;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(pos_, msg); }

  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }

  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  Code parse_code(int depth) {
    if (depth > kMaxParseDepth) fail("nesting too deep");
    expect('(');
    std::size_t name_start = pos_;
    while (pos_ < s_.size() && s_[pos_] >= 'a' && s_[pos_] <= 'z') ++pos_;
    std::string_view name = s_.substr(name_start, pos_ - name_start);
    auto kind = kind_from_name(name);
    if (!kind) {
      pos_ = name_start;
      fail("unknown kind name '" + std::string(name) + "'");
    }
    std::int64_t payload = 0;
    if (has_payload(*kind)) {
      expect(' ');
      payload = parse_int();
    }
    std::vector<Code> children;
    for (int i = 0; i < arity(*kind); ++i) {
      if (peek() == ')') fail("arity mismatch: " + std::string(kind_name(*kind)) +
                              " takes " + std::to_string(arity(*kind)) +
                              " children");
      expect(' ');
      children.push_back(parse_code(depth + 1));
    }
    if (peek() == ' ') fail("arity mismatch: too many children for " +
                            std::string(kind_name(*kind)));
    expect(')');
    return Code::make(*kind, payload, std::move(children));
  }

  std::int64_t parse_int() {
    std::size_t start = pos_;
    bool neg = false;
    if (peek() == '-') { neg = true; ++pos_; }
    if (peek() < '0' || peek() > '9') { pos_ = start; fail("expected integer payload"); }
    std::uint64_t mag = 0;
    while (peek() >= '0' && peek() <= '9') {
      mag = mag * 10 + static_cast<std::uint64_t>(peek() - '0');
      if (mag > (std::uint64_t(1) << 62)) { pos_ = start; fail("payload out of range"); }
      ++pos_;
    }
    std::int64_t v = static_cast<std::int64_t>(mag);
    return neg ? -v : v;
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline Code parse_text(std::string_view s) { return detail::Parser(s).parse(); }

}  // namespace selfedit
