// Copyright 2026 The dexlift Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dot_check.h"

#include <algorithm>
#include <cctype>
#include <set>
#include <stdexcept>

namespace dexlift::testing {
namespace {

enum class Tok { kId, kLBrace, kRBrace, kLBracket, kRBracket, kEq, kSemi, kComma, kColon, kEdgeOp, kEnd };

struct Token {
  Tok kind;
  std::string text;
  bool keyword_candidate = false;  // bare identifier, may be a keyword
  size_t pos = 0;
};

bool id_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || (c & 0x80); }
bool id_char(char c) { return id_start(c) || std::isdigit(static_cast<unsigned char>(c)); }

std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> out;
  size_t i = 0;
  auto fail = [&](const std::string& what) {
    throw std::runtime_error("DOT: " + what + " at offset " + std::to_string(i));
  };
  while (i < s.size()) {
    const char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (s.substr(i, 2) == "//" || (c == '#' && (i == 0 || s[i - 1] == '\n'))) {
      while (i < s.size() && s[i] != '\n') ++i;
    } else if (s.substr(i, 2) == "/*") {
      const size_t end = s.find("*/", i + 2);
      if (end == std::string_view::npos) fail("unterminated comment");
      i = end + 2;
    } else if (c == '{' || c == '}' || c == '[' || c == ']' || c == '=' || c == ';' || c == ',' || c == ':') {
      static const std::string kPunct = "{}[]=;,:";
      static const Tok kKinds[] = {Tok::kLBrace, Tok::kRBrace, Tok::kLBracket, Tok::kRBracket,
                                   Tok::kEq,     Tok::kSemi,   Tok::kComma,    Tok::kColon};
      out.push_back({kKinds[kPunct.find(c)], std::string(1, c), false, i});
      ++i;
    } else if (s.substr(i, 2) == "->" || s.substr(i, 2) == "--") {
      out.push_back({Tok::kEdgeOp, std::string(s.substr(i, 2)), false, i});
      i += 2;
    } else if (c == '"') {
      const size_t start = i;
      std::string text;
      // A quoted string, possibly "a" + "b" concatenated.
      while (true) {
        ++i;
        while (true) {
          if (i >= s.size()) fail("unterminated string");
          if (s[i] == '\\' && i + 1 < s.size()) {
            text += s[i + 1] == '"' ? std::string("\"") : std::string(s.substr(i, 2));
            i += 2;
          } else if (s[i] == '"') {
            ++i;
            break;
          } else {
            text += s[i++];
          }
        }
        size_t j = i;
        while (j < s.size() && std::isspace(static_cast<unsigned char>(s[j]))) ++j;
        if (j >= s.size() || s[j] != '+') break;
        ++j;
        while (j < s.size() && std::isspace(static_cast<unsigned char>(s[j]))) ++j;
        if (j >= s.size() || s[j] != '"') fail("misplaced '+'");
        i = j;
      }
      out.push_back({Tok::kId, text, false, start});
    } else if (c == '<') {
      const size_t start = i;
      int depth = 0;
      do {
        if (i >= s.size()) fail("unterminated HTML string");
        if (s[i] == '<') ++depth;
        if (s[i] == '>') --depth;
        ++i;
      } while (depth > 0);
      out.push_back({Tok::kId, std::string(s.substr(start + 1, i - start - 2)), false, start});
    } else if (c == '-' || c == '.' || std::isdigit(static_cast<unsigned char>(c))) {
      const size_t start = i;
      if (c == '-') ++i;
      bool digits = false, dot = false;
      while (i < s.size() && (std::isdigit(static_cast<unsigned char>(s[i])) || (s[i] == '.' && !dot))) {
        if (s[i] == '.') dot = true; else digits = true;
        ++i;
      }
      if (!digits) fail("bad numeral");
      out.push_back({Tok::kId, std::string(s.substr(start, i - start)), false, start});
    } else if (id_start(c)) {
      const size_t start = i;
      while (i < s.size() && id_char(s[i])) ++i;
      out.push_back({Tok::kId, std::string(s.substr(start, i - start)), true, start});
    } else {
      fail(std::string("unexpected character '") + c + "'");
    }
  }
  out.push_back({Tok::kEnd, "", false, s.size()});
  return out;
}

bool is_keyword(const Token& t, std::string_view kw) {
  if (t.kind != Tok::kId || !t.keyword_candidate || t.text.size() != kw.size()) return false;
  return std::equal(t.text.begin(), t.text.end(), kw.begin(),
                    [](char a, char b) { return std::tolower(static_cast<unsigned char>(a)) == b; });
}

bool any_keyword(const Token& t) {
  for (const char* kw : {"strict", "graph", "digraph", "node", "edge", "subgraph"}) {
    if (is_keyword(t, kw)) return true;
  }
  return false;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  DotGraph parse() {
    if (is_keyword(peek(), "strict")) ++pos_;
    if (is_keyword(peek(), "digraph")) {
      g_.directed = true;
    } else if (!is_keyword(peek(), "graph")) {
      fail("expected graph or digraph");
    }
    ++pos_;
    if (peek().kind == Tok::kId) g_.name = id();
    expect(Tok::kLBrace);
    stmt_list();
    expect(Tok::kRBrace);
    if (peek().kind != Tok::kEnd) fail("trailing input");
    return std::move(g_);
  }

 private:
  const Token& peek(size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  [[noreturn]] void fail(const std::string& what) const {
    throw std::runtime_error("DOT: " + what + " at offset " + std::to_string(peek().pos));
  }
  void expect(Tok k) {
    if (peek().kind != k) fail("unexpected '" + peek().text + "'");
    ++pos_;
  }
  std::string id() {
    if (peek().kind != Tok::kId || any_keyword(peek())) fail("expected ID");
    return toks_[pos_++].text;
  }
  void add_node(const std::string& n) {
    if (seen_.insert(n).second) g_.nodes.push_back(n);
  }

  void stmt_list() {
    while (peek().kind != Tok::kRBrace && peek().kind != Tok::kEnd) {
      stmt();
      if (peek().kind == Tok::kSemi) ++pos_;
    }
  }

  void attr_list() {
    while (peek().kind == Tok::kLBracket) {
      ++pos_;
      while (peek().kind != Tok::kRBracket) {
        id();
        expect(Tok::kEq);
        id();
        if (peek().kind == Tok::kSemi || peek().kind == Tok::kComma) ++pos_;
      }
      ++pos_;
    }
  }

  // node_id or subgraph; returns the nodes it stands for.
  std::vector<std::string> endpoint() {
    if (is_keyword(peek(), "subgraph") || peek().kind == Tok::kLBrace) return subgraph();
    std::string n = id();
    if (peek().kind == Tok::kColon) {
      ++pos_;
      id();
      if (peek().kind == Tok::kColon) {
        ++pos_;
        id();
      }
    }
    add_node(n);
    return {n};
  }

  std::vector<std::string> subgraph() {
    if (is_keyword(peek(), "subgraph")) {
      ++pos_;
      if (peek().kind == Tok::kId && !any_keyword(peek())) id();
    }
    const size_t before = g_.nodes.size();
    expect(Tok::kLBrace);
    stmt_list();
    expect(Tok::kRBrace);
    return {g_.nodes.begin() + static_cast<std::ptrdiff_t>(before), g_.nodes.end()};
  }

  void stmt() {
    if (is_keyword(peek(), "graph") || is_keyword(peek(), "node") || is_keyword(peek(), "edge")) {
      ++pos_;
      if (peek().kind != Tok::kLBracket) fail("expected attribute list");
      attr_list();
      return;
    }
    if (peek().kind == Tok::kId && peek(1).kind == Tok::kEq) {
      id();
      ++pos_;
      id();
      return;
    }
    std::vector<std::string> from = endpoint();
    while (peek().kind == Tok::kEdgeOp) {
      if ((peek().text == "->") != g_.directed) fail("edge operator does not match graph kind");
      ++pos_;
      std::vector<std::string> to = endpoint();
      for (const auto& a : from) {
        for (const auto& b : to) g_.edges.emplace_back(a, b);
      }
      from = std::move(to);
    }
    attr_list();
  }

  std::vector<Token> toks_;
  size_t pos_ = 0;
  DotGraph g_;
  std::set<std::string> seen_;
};

}  // namespace

DotGraph parse_dot(std::string_view text) { return Parser(tokenize(text)).parse(); }

}  // namespace dexlift::testing
