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

#include "dexlift/ir/text.h"

#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "dexlift/error.h"

namespace dexlift::ir {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::string hex(uint64_t v) {
  char buf[24];
  std::snprintf(buf, sizeof(buf), "0x%llx", static_cast<unsigned long long>(v));
  return buf;
}

template <typename T>
std::string decimal(T v) {
  if (std::isnan(v)) return "NaN";
  if (std::isinf(v)) return v < 0 ? "-Infinity" : "Infinity";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  std::string s(buf, res.ptr);
  if (s.find_first_of(".e") == std::string::npos) s += ".0";
  return s;
}

std::string quote(std::string_view s) {
  std::string out = "\"";
  for (const char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", static_cast<unsigned char>(c));
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out + "\"";
}

std::string local_name(const Body& body, LocalId id) {
  if (id < body.locals.size()) return body.locals[id].name;
  return "$bad" + std::to_string(id);
}

std::string field_text(const dex::FieldRef& f) { return "<" + f.to_string() + ">"; }

std::string label(const std::unordered_map<const Statement*, size_t>& index, const Statement* s) {
  const auto it = index.find(s);
  return it == index.end() ? "L?" : "L" + std::to_string(it->second);
}

std::string lvalue_text(const Body& body, const LValue& lv) {
  return std::visit(Overloaded{
                        [&](const LocalRef& l) { return local_name(body, l.id); },
                        [&](const FieldAccess& f) { return value_text(body, Value(f)); },
                        [&](const ArrayAccess& a) { return value_text(body, Value(a)); },
                    },
                    lv);
}

}  // namespace

std::string_view binop_symbol(BinOp op) {
  switch (op) {
    case BinOp::kAdd: return "+";
    case BinOp::kSub: return "-";
    case BinOp::kMul: return "*";
    case BinOp::kDiv: return "/";
    case BinOp::kRem: return "%";
    case BinOp::kAnd: return "&";
    case BinOp::kOr: return "|";
    case BinOp::kXor: return "^";
    case BinOp::kShl: return "<<";
    case BinOp::kShr: return ">>";
    case BinOp::kUshr: return ">>>";
  }
  return "?";
}

std::string_view relop_symbol(RelOp op) {
  switch (op) {
    case RelOp::kEq: return "==";
    case RelOp::kNe: return "!=";
    case RelOp::kLt: return "<";
    case RelOp::kGe: return ">=";
    case RelOp::kGt: return ">";
    case RelOp::kLe: return "<=";
  }
  return "?";
}

std::string_view cmp_kind_name(CmpKind kind) {
  switch (kind) {
    case CmpKind::kCmplFloat: return "cmpl-float";
    case CmpKind::kCmpgFloat: return "cmpg-float";
    case CmpKind::kCmplDouble: return "cmpl-double";
    case CmpKind::kCmpgDouble: return "cmpg-double";
    case CmpKind::kCmpLong: return "cmp-long";
  }
  return "?";
}

std::string_view invoke_keyword(InvokeKind kind) {
  switch (kind) {
    case InvokeKind::kVirtual: return "virtualinvoke";
    case InvokeKind::kSuper: return "superinvoke";
    case InvokeKind::kDirect: return "specialinvoke";
    case InvokeKind::kStatic: return "staticinvoke";
    case InvokeKind::kInterface: return "interfaceinvoke";
  }
  return "?";
}

std::string immediate_text(const Body& body, const Immediate& imm) {
  return std::visit(Overloaded{
                        [&](const LocalRef& l) { return local_name(body, l.id); },
                        [](const IntConstant& c) { return std::to_string(c.value); },
                        [](const LongConstant& c) { return std::to_string(c.value) + "L"; },
                        [](const FloatConstant& c) {
                          return decimal(std::bit_cast<float>(c.bits)) + "F(" + hex(c.bits) + ")";
                        },
                        [](const DoubleConstant& c) {
                          return decimal(std::bit_cast<double>(c.bits)) + "D(" + hex(c.bits) + ")";
                        },
                        [](const NullConstant&) { return std::string("null"); },
                        [](const StringConstant& c) { return quote(c.value); },
                        [](const ClassConstant& c) { return "class " + quote(c.descriptor); },
                    },
                    imm);
}

std::string value_text(const Body& body, const Value& value) {
  auto imm = [&](const Immediate& i) { return immediate_text(body, i); };
  return std::visit(
      Overloaded{
          [&](const Immediate& i) { return imm(i); },
          [&](const FieldAccess& f) {
            return f.base ? local_name(body, *f.base) + "." + field_text(f.field) : field_text(f.field);
          },
          [&](const ArrayAccess& a) { return local_name(body, a.base) + "[" + imm(a.index) + "]"; },
          [&](const BinaryOp& b) { return imm(b.lhs) + " " + std::string(binop_symbol(b.op)) + " " + imm(b.rhs); },
          [&](const UnaryOp& u) { return "neg " + imm(u.operand); },
          [&](const Cast& c) { return "(" + c.to.to_string() + ") " + imm(c.operand); },
          [&](const InstanceOf& i) { return imm(i.operand) + " instanceof " + i.type.to_string(); },
          [&](const New& n) { return "new " + n.descriptor; },
          [&](const NewArray& n) { return "newarray (" + n.type.element().to_string() + ")[" + imm(n.size) + "]"; },
          [&](const Lengthof& l) { return "lengthof " + imm(l.operand); },
          [&](const Compare& c) {
            return imm(c.lhs) + " " + std::string(cmp_kind_name(c.kind)) + " " + imm(c.rhs);
          },
      },
      value);
}

std::string statement_text(const Body& body, const Statement& s,
                           const std::unordered_map<const Statement*, size_t>& index) {
  auto imm = [&](const Immediate& i) { return immediate_text(body, i); };
  auto cases = [&](const auto& keys, const std::vector<Statement*>& targets, const Statement* dflt) {
    std::string out = "{ ";
    for (size_t i = 0; i < targets.size(); ++i) {
      out += "case " + std::to_string(keys(i)) + ": goto " + label(index, targets[i]) + "; ";
    }
    return out + "default: goto " + label(index, dflt) + "; }";
  };
  return std::visit(
      Overloaded{
          [](const NopStmt&) { return std::string("nop"); },
          [&](const IdentityStmt& i) {
            std::string src = i.source == IdentityKind::kThis        ? "@this"
                              : i.source == IdentityKind::kParameter ? "@parameter" + std::to_string(i.parameter)
                                                                     : "@caughtexception";
            return local_name(body, i.target) + " := " + src;
          },
          [&](const AssignStmt& a) { return lvalue_text(body, a.target) + " = " + value_text(body, a.value); },
          [&](const IfStmt& i) {
            return "if " + imm(i.lhs) + " " + std::string(relop_symbol(i.op)) + " " + imm(i.rhs) + " goto " +
                   label(index, i.target);
          },
          [&](const GotoStmt& g) { return "goto " + label(index, g.target); },
          [&](const TableSwitchStmt& t) {
            const int64_t first = t.first_key;
            return "tableswitch(" + imm(t.key) + ") " +
                   cases([&](size_t i) { return first + static_cast<int64_t>(i); }, t.targets, t.default_target);
          },
          [&](const LookupSwitchStmt& l) {
            return "lookupswitch(" + imm(l.key) + ") " +
                   cases([&](size_t i) { return int64_t{l.keys[i]}; }, l.targets, l.default_target);
          },
          [&](const InvokeStmt& inv) {
            std::string out;
            if (inv.result) out = local_name(body, *inv.result) + " = ";
            out += std::string(invoke_keyword(inv.kind)) + " ";
            size_t first_arg = 0;
            if (inv.kind != InvokeKind::kStatic && !inv.args.empty()) {
              out += imm(inv.args[0]) + ".";
              first_arg = 1;
            }
            out += "<" + inv.method.to_string() + ">(";
            for (size_t i = first_arg; i < inv.args.size(); ++i) {
              if (i > first_arg) out += ", ";
              out += imm(inv.args[i]);
            }
            return out + ")";
          },
          [&](const ReturnStmt& r) { return "return " + imm(r.value); },
          [](const ReturnVoidStmt&) { return std::string("return"); },
          [&](const ThrowStmt& t) { return "throw " + imm(t.value); },
          [&](const MonitorEnterStmt& m) { return "entermonitor " + imm(m.value); },
          [&](const MonitorExitStmt& m) { return "exitmonitor " + imm(m.value); },
          [](const BreakpointStmt&) { return std::string("breakpoint"); },
      },
      s.node);
}

std::string emit_text(const Body& body) {
  const auto index = body.index_map();
  std::ostringstream os;
  const dex::Proto& proto = body.signature.proto;
  os << "method " << proto.return_type << " " << body.signature.owner << "." << body.signature.name << "(";
  for (const auto& p : proto.parameters) os << p;
  os << ") {\n";
  for (const Local& l : body.locals) os << "  local " << l.name << ": " << l.type.to_string() << "\n";
  for (size_t i = 0; i < body.statements.size(); ++i) {
    os << "  L" << i << ": " << statement_text(body, *body.statements[i], index) << "\n";
  }
  for (const Trap& t : body.traps) {
    os << "  catch " << (t.exception_type ? *t.exception_type : std::string("*")) << " from "
       << label(index, t.first) << " to " << label(index, t.last) << " with " << label(index, t.handler) << "\n";
  }
  os << "}\n";
  return os.str();
}

// ---- Parser ----

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Body parse() {
    std::vector<std::string_view> lines;
    size_t start = 0;
    while (start < text_.size()) {
      size_t end = text_.find('\n', start);
      if (end == std::string_view::npos) end = text_.size();
      lines.push_back(text_.substr(start, end - start));
      start = end + 1;
    }
    size_t li = 0;
    while (li < lines.size() && trim(lines[li]).empty()) ++li;
    if (li == lines.size()) error("empty listing");
    header(trim(lines[li++]));
    for (; li < lines.size(); ++li) {
      line_ = trim(lines[li]);
      pos_ = 0;
      if (line_.empty()) continue;
      if (line_ == "}") {
        finish();
        return std::move(body_);
      }
      if (accept("local ")) {
        const std::string name = identifier();
        expect(":");
        skip_ws();
        const IrType t = parse_type(rest());
        if (t.is_unknown() && rest() != "unknown") error("bad type");
        if (!local_ids_.emplace(name, body_.add_local(name, t)).second) error("duplicate local " + name);
      } else if (accept("catch ")) {
        Trap t;
        const std::string type(word());
        if (type != "*") t.exception_type = type;
        expect("from");
        pending_trap_.push_back({label_index(), 0, 0});
        expect("to");
        pending_trap_.back()[1] = label_index();
        expect("with");
        pending_trap_.back()[2] = label_index();
        body_.traps.push_back(t);
      } else {
        expect("L");
        const size_t k = number<size_t>();
        if (k != body_.statements.size()) error("labels must be consecutive");
        expect(":");
        skip_ws();
        Statement* s = body_.append(NopStmt{});
        s->node = statement();
        skip_ws();
        if (pos_ != line_.size()) error("trailing text");
      }
    }
    error("missing closing brace");
  }

 private:
  [[noreturn]] void error(const std::string& what) const {
    fail(ErrorCode::kBadString, "IR text: " + what + " in '" + std::string(line_) + "'");
  }

  static std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
  }

  void skip_ws() {
    while (pos_ < line_.size() && line_[pos_] == ' ') ++pos_;
  }
  std::string_view rest() const { return line_.substr(pos_); }
  bool accept(std::string_view s) {
    skip_ws();
    if (line_.substr(pos_, s.size()) != s) return false;
    pos_ += s.size();
    return true;
  }
  void expect(std::string_view s) {
    if (!accept(s)) error("expected '" + std::string(s) + "'");
  }
  char peek() {
    skip_ws();
    return pos_ < line_.size() ? line_[pos_] : '\0';
  }
  // Run of non-space characters.
  std::string_view word() {
    skip_ws();
    const size_t start = pos_;
    while (pos_ < line_.size() && line_[pos_] != ' ') ++pos_;
    if (start == pos_) error("expected a word");
    return line_.substr(start, pos_ - start);
  }
  std::string identifier() {
    skip_ws();
    const size_t start = pos_;
    while (pos_ < line_.size() && (std::isalnum(static_cast<unsigned char>(line_[pos_])) || line_[pos_] == '_' ||
                                   line_[pos_] == '$')) {
      ++pos_;
    }
    if (start == pos_) error("expected an identifier");
    return std::string(line_.substr(start, pos_ - start));
  }
  template <typename T>
  T number() {
    skip_ws();
    T v{};
    const auto res = std::from_chars(line_.data() + pos_, line_.data() + line_.size(), v);
    if (res.ec != std::errc()) error("expected a number");
    pos_ = static_cast<size_t>(res.ptr - line_.data());
    return v;
  }
  uint64_t hex_number() {
    expect("0x");
    uint64_t v = 0;
    const auto res = std::from_chars(line_.data() + pos_, line_.data() + line_.size(), v, 16);
    if (res.ec != std::errc()) error("expected hex digits");
    pos_ = static_cast<size_t>(res.ptr - line_.data());
    return v;
  }
  size_t label_index() {
    expect("L");
    return number<size_t>();
  }
  // Text between a '<' and its matching '>'.
  std::string_view angle() {
    expect("<");
    // Method names such as <init> nest inside the brackets.
    size_t end = pos_;
    for (int depth = 1; end < line_.size(); ++end) {
      if (line_[end] == '<') ++depth;
      if (line_[end] == '>' && --depth == 0) break;
    }
    if (end >= line_.size()) error("unterminated reference");
    const std::string_view inner = line_.substr(pos_, end - pos_);
    pos_ = end + 1;
    return inner;
  }
  dex::FieldRef field_ref() {
    const std::string_view t = angle();
    const size_t semi = t.find(';');
    const size_t colon = t.find(':', semi);
    if (semi == std::string_view::npos || colon == std::string_view::npos || t[semi + 1] != '.') {
      error("bad field reference");
    }
    return {std::string(t.substr(0, semi + 1)), std::string(t.substr(semi + 2, colon - semi - 2)),
            std::string(t.substr(colon + 1))};
  }
  dex::MethodRef method_ref() {
    const std::string_view t = angle();
    const size_t semi = t.find(';');
    const size_t colon = t.find(":(", semi);
    const size_t close = t.find(')', colon);
    if (semi == std::string_view::npos || colon == std::string_view::npos || close == std::string_view::npos) {
      error("bad method reference");
    }
    dex::MethodRef m;
    m.owner = std::string(t.substr(0, semi + 1));
    m.name = std::string(t.substr(semi + 2, colon - semi - 2));
    m.proto.parameters = split_descriptors(t.substr(colon + 2, close - colon - 2));
    m.proto.return_type = std::string(t.substr(close + 1));
    m.proto.shorty = shorty(m.proto);
    return m;
  }
  std::vector<std::string> split_descriptors(std::string_view list) {
    std::vector<std::string> out;
    size_t i = 0;
    while (i < list.size()) {
      size_t j = i;
      while (j < list.size() && list[j] == '[') ++j;
      if (j < list.size() && list[j] == 'L') j = list.find(';', j);
      if (j == std::string_view::npos || j >= list.size()) error("bad descriptor list");
      out.emplace_back(list.substr(i, j - i + 1));
      i = j + 1;
    }
    return out;
  }
  static std::string shorty(const dex::Proto& p) {
    auto ch = [](const std::string& d) { return (d[0] == '[' || d[0] == 'L') ? 'L' : d[0]; };
    std::string s(1, ch(p.return_type));
    for (const auto& t : p.parameters) s += ch(t);
    return s;
  }

  void header(std::string_view line) {
    line_ = line;
    pos_ = 0;
    expect("method ");
    body_.signature.proto.return_type = std::string(word());
    skip_ws();
    const size_t semi = line_.find(';', pos_);
    const size_t open = line_.find('(', semi);
    const size_t close = line_.find(')', open);
    if (semi == std::string_view::npos || open == std::string_view::npos || close == std::string_view::npos ||
        line_[semi + 1] != '.') {
      error("bad method header");
    }
    body_.signature.owner = std::string(line_.substr(pos_, semi + 1 - pos_));
    body_.signature.name = std::string(line_.substr(semi + 2, open - semi - 2));
    body_.signature.proto.parameters = split_descriptors(line_.substr(open + 1, close - open - 1));
    body_.signature.proto.shorty = shorty(body_.signature.proto);
    pos_ = close + 1;
    expect("{");
  }

  std::string quoted() {
    expect("\"");
    std::string out;
    while (pos_ < line_.size() && line_[pos_] != '"') {
      char c = line_[pos_++];
      if (c == '\\') {
        if (pos_ >= line_.size()) error("bad escape");
        const char e = line_[pos_++];
        switch (e) {
          case 'n': c = '\n'; break;
          case 't': c = '\t'; break;
          case 'r': c = '\r'; break;
          case 'u': {
            unsigned v = 0;
            const auto res = std::from_chars(line_.data() + pos_, line_.data() + pos_ + 4, v, 16);
            if (res.ec != std::errc()) error("bad \\u escape");
            pos_ += 4;
            c = static_cast<char>(v);
            break;
          }
          default: c = e;
        }
      }
      out += c;
    }
    expect("\"");
    return out;
  }

  LocalId local(const std::string& name) {
    const auto it = local_ids_.find(name);
    if (it == local_ids_.end()) error("undeclared local " + name);
    return it->second;
  }

  Immediate immediate() {
    const char c = peek();
    if (c == '"') return StringConstant{quoted()};
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '-' || rest().starts_with("NaN") ||
        rest().starts_with("Infinity")) {
      const size_t start = pos_;
      while (pos_ < line_.size() && line_[pos_] != ' ' && line_[pos_] != '(' && line_[pos_] != ',' &&
             line_[pos_] != ')' && line_[pos_] != ']' && line_[pos_] != ';') {
        ++pos_;
      }
      std::string_view tok = line_.substr(start, pos_ - start);
      if (tok.ends_with("F") || tok.ends_with("D")) {
        expect("(");
        const uint64_t bits = hex_number();
        expect(")");
        if (tok.ends_with("F")) return FloatConstant{static_cast<uint32_t>(bits)};
        return DoubleConstant{bits};
      }
      const bool is_long = tok.ends_with("L");
      if (is_long) tok.remove_suffix(1);
      int64_t v = 0;
      const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
      if (res.ec != std::errc() || res.ptr != tok.data() + tok.size()) error("bad number");
      if (is_long) return LongConstant{v};
      return IntConstant{static_cast<int32_t>(v)};
    }
    const std::string id = identifier();
    if (id == "null") return NullConstant{};
    if (id == "class") return ClassConstant{quoted()};
    return LocalRef{local(id)};
  }

  IrType type_in_parens() {
    expect("(");
    const size_t close = line_.find(')', pos_);
    if (close == std::string_view::npos) error("unterminated type");
    const IrType t = parse_type(line_.substr(pos_, close - pos_));
    if (t.is_unknown()) error("bad type");
    pos_ = close + 1;
    return t;
  }

  Value value() {
    if (accept("new ")) return New{std::string(word())};
    if (accept("newarray ")) {
      const IrType elem = type_in_parens();
      expect("[");
      Immediate size = immediate();
      expect("]");
      return NewArray{IrType::array_of(elem), size};
    }
    if (accept("lengthof ")) return Lengthof{immediate()};
    if (accept("neg ")) return UnaryOp{immediate(), IrType::unknown()};
    if (peek() == '(') {
      const IrType to = type_in_parens();
      return Cast{IrType::unknown(), to, immediate()};
    }
    if (peek() == '<') return FieldAccess{std::nullopt, field_ref()};
    const Immediate lhs = immediate();
    if (const auto* l = std::get_if<LocalRef>(&lhs)) {
      if (accept(".")) return FieldAccess{l->id, field_ref()};
      if (accept("[")) {
        Immediate index = immediate();
        expect("]");
        return ArrayAccess{l->id, index, ArrayKind::kWord};
      }
    }
    skip_ws();
    if (pos_ == line_.size()) return lhs;
    const std::string_view op = word();
    if (op == "instanceof") {
      skip_ws();
      const IrType t = parse_type(word());
      return InstanceOf{t, lhs};
    }
    for (CmpKind k : {CmpKind::kCmplFloat, CmpKind::kCmpgFloat, CmpKind::kCmplDouble, CmpKind::kCmpgDouble,
                      CmpKind::kCmpLong}) {
      if (op == cmp_kind_name(k)) return Compare{k, lhs, immediate()};
    }
    for (BinOp b : {BinOp::kAdd, BinOp::kSub, BinOp::kMul, BinOp::kDiv, BinOp::kRem, BinOp::kAnd, BinOp::kOr,
                    BinOp::kXor, BinOp::kShl, BinOp::kShr, BinOp::kUshr}) {
      if (op == binop_symbol(b)) return BinaryOp{b, lhs, immediate(), IrType::unknown()};
    }
    error("unknown operator " + std::string(op));
  }

  std::optional<InvokeKind> invoke_kind() {
    for (InvokeKind k : {InvokeKind::kVirtual, InvokeKind::kSuper, InvokeKind::kDirect, InvokeKind::kStatic,
                         InvokeKind::kInterface}) {
      std::string kw(invoke_keyword(k));
      kw += ' ';
      if (accept(kw)) return k;
    }
    return std::nullopt;
  }

  InvokeStmt invoke(InvokeKind kind) {
    InvokeStmt inv;
    inv.kind = kind;
    if (kind != InvokeKind::kStatic && peek() != '<') {
      inv.args.push_back(immediate());
      expect(".");
    }
    inv.method = method_ref();
    expect("(");
    if (!accept(")")) {
      do {
        inv.args.push_back(immediate());
      } while (accept(","));
      expect(")");
    }
    return inv;
  }

  StmtNode statement() {
    if (rest() == "nop") {
      pos_ = line_.size();
      return NopStmt{};
    }
    if (accept("breakpoint")) return BreakpointStmt{};
    if (accept("return")) {
      if (at_end()) return ReturnVoidStmt{};
      return ReturnStmt{immediate()};
    }
    if (accept("throw ")) return ThrowStmt{immediate()};
    if (accept("entermonitor ")) return MonitorEnterStmt{immediate()};
    if (accept("exitmonitor ")) return MonitorExitStmt{immediate()};
    if (accept("goto ")) {
      pending_index_.push_back({body_.statements.size() - 1, 0, label_index()});
      return GotoStmt{};
    }
    if (accept("if ")) {
      IfStmt s;
      s.lhs = immediate();
      const std::string_view op = word();
      bool found = false;
      for (RelOp r : {RelOp::kEq, RelOp::kNe, RelOp::kLt, RelOp::kGe, RelOp::kGt, RelOp::kLe}) {
        if (op == relop_symbol(r)) {
          s.op = r;
          found = true;
        }
      }
      if (!found) error("bad relational operator");
      s.rhs = immediate();
      expect("goto");
      pending_index_.push_back({body_.statements.size() - 1, 0, label_index()});
      return s;
    }
    if (accept("tableswitch(") || accept("lookupswitch(")) {
      const bool table = line_.substr(0, pos_).ends_with("tableswitch(");
      const Immediate key = immediate();
      expect(")");
      std::vector<int64_t> keys;
      std::vector<size_t> labels;
      expect("{");
      while (accept("case ")) {
        keys.push_back(number<int64_t>());
        expect(":");
        expect("goto");
        labels.push_back(label_index());
        expect(";");
      }
      expect("default:");
      expect("goto");
      const size_t dflt = label_index();
      expect(";");
      expect("}");
      const size_t self_index = body_.statements.size() - 1;
      for (size_t i = 0; i < labels.size(); ++i) pending_index_.push_back({self_index, i + 1, labels[i]});
      pending_index_.push_back({self_index, labels.size() + 1, dflt});
      if (table) {
        TableSwitchStmt t;
        t.key = key;
        t.first_key = keys.empty() ? 0 : static_cast<int32_t>(keys.front());
        for (size_t i = 0; i < keys.size(); ++i) {
          if (keys[i] != keys.front() + static_cast<int64_t>(i)) error("tableswitch keys must be consecutive");
        }
        t.targets.assign(labels.size(), nullptr);
        return t;
      }
      LookupSwitchStmt l;
      l.key = key;
      for (int64_t k : keys) l.keys.push_back(static_cast<int32_t>(k));
      l.targets.assign(labels.size(), nullptr);
      return l;
    }
    if (auto kind = invoke_kind()) return invoke(*kind);

    // Assignment or identity.
    LValue lv;
    if (peek() == '<') {
      lv = FieldAccess{std::nullopt, field_ref()};
    } else {
      const LocalId base = local(identifier());
      if (accept(".")) {
        lv = FieldAccess{base, field_ref()};
      } else if (accept("[")) {
        Immediate index = immediate();
        expect("]");
        lv = ArrayAccess{base, index, ArrayKind::kWord};
      } else {
        lv = LocalRef{base};
      }
      if (accept(":=")) {
        if (!std::holds_alternative<LocalRef>(lv)) error("identity target must be a local");
        IdentityStmt id;
        id.target = base;
        if (accept("@this")) {
          id.source = IdentityKind::kThis;
        } else if (accept("@parameter")) {
          id.source = IdentityKind::kParameter;
          id.parameter = number<uint32_t>();
        } else if (accept("@caughtexception")) {
          id.source = IdentityKind::kCaughtException;
        } else {
          error("bad identity source");
        }
        return id;
      }
    }
    expect("=");
    if (auto kind = invoke_kind()) {
      const auto* l = std::get_if<LocalRef>(&lv);
      if (l == nullptr) error("invoke result must be a local");
      InvokeStmt inv = invoke(*kind);
      inv.result = l->id;
      return inv;
    }
    AssignStmt a;
    a.target = lv;
    a.value = value();
    return a;
  }

  bool at_end() {
    skip_ws();
    return pos_ == line_.size();
  }

  Statement* at(size_t k) const {
    if (k >= body_.statements.size()) fail(ErrorCode::kBadString, "IR text: label L" + std::to_string(k) + " out of range");
    return body_.statements[k].get();
  }

  void finish() {
    for (const auto& [stmt, slot, k] : pending_index_) {
      Statement& s = *body_.statements[stmt];
      const auto slots = branch_targets(s);
      // Slot 0 is the single target of if/goto; switches list cases then default.
      const size_t which = (s.kind() == StmtKind::kIf || s.kind() == StmtKind::kGoto) ? 0 : slot - 1;
      *slots[which] = at(k);
    }
    for (size_t i = 0; i < body_.traps.size(); ++i) {
      body_.traps[i].first = at(pending_trap_[i][0]);
      body_.traps[i].last = at(pending_trap_[i][1]);
      body_.traps[i].handler = at(pending_trap_[i][2]);
    }
    for (const auto& s : body_.statements) {
      if (const auto* id = s->as<IdentityStmt>(); id && id->source == IdentityKind::kThis) body_.is_static = false;
    }
  }

  std::string_view text_;
  std::string_view line_;
  size_t pos_ = 0;
  Body body_;
  std::map<std::string, LocalId> local_ids_;
  std::vector<std::tuple<size_t, size_t, size_t>> pending_index_;  // statement, slot, label
  std::vector<std::array<size_t, 3>> pending_trap_;
};

}  // namespace

Body parse_text(std::string_view text) { return Parser(text).parse(); }

}  // namespace dexlift::ir
