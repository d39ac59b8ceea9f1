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

#include "runtime.h"

#include <bit>
#include <cmath>
#include <cstring>
#include <limits>
#include <sstream>

#include "dexlift/error.h"

namespace dexlift::refinterp {
namespace {

float as_float(const RtValue& v) { return std::bit_cast<float>(static_cast<uint32_t>(v.bits)); }
double as_double(const RtValue& v) { return std::bit_cast<double>(v.bits); }
int32_t as_int(const RtValue& v) { return static_cast<int32_t>(static_cast<uint32_t>(v.bits)); }
int64_t as_long(const RtValue& v) { return static_cast<int64_t>(v.bits); }

// Java's saturating float-to-integer conversion.
template <typename Int, typename Fp>
Int saturate(Fp x) {
  if (std::isnan(x)) return 0;
  if (x >= static_cast<Fp>(std::numeric_limits<Int>::max())) return std::numeric_limits<Int>::max();
  if (x <= static_cast<Fp>(std::numeric_limits<Int>::min())) return std::numeric_limits<Int>::min();
  return static_cast<Int>(x);
}

const std::map<std::string, std::string>& builtin_supers() {
  static const std::map<std::string, std::string> supers = {
      {"Ljava/lang/Throwable;", "Ljava/lang/Object;"},
      {"Ljava/lang/Exception;", "Ljava/lang/Throwable;"},
      {"Ljava/lang/Error;", "Ljava/lang/Throwable;"},
      {"Ljava/lang/RuntimeException;", "Ljava/lang/Exception;"},
      {"Ljava/lang/ArithmeticException;", "Ljava/lang/RuntimeException;"},
      {"Ljava/lang/NullPointerException;", "Ljava/lang/RuntimeException;"},
      {"Ljava/lang/IndexOutOfBoundsException;", "Ljava/lang/RuntimeException;"},
      {"Ljava/lang/ArrayIndexOutOfBoundsException;", "Ljava/lang/IndexOutOfBoundsException;"},
      {"Ljava/lang/NegativeArraySizeException;", "Ljava/lang/RuntimeException;"},
      {"Ljava/lang/ClassCastException;", "Ljava/lang/RuntimeException;"},
      {"Ljava/lang/IllegalArgumentException;", "Ljava/lang/RuntimeException;"},
      {"Ljava/lang/NumberFormatException;", "Ljava/lang/IllegalArgumentException;"},
      {"Ljava/lang/IllegalStateException;", "Ljava/lang/RuntimeException;"},
      {"Ljava/lang/String;", "Ljava/lang/Object;"},
  };
  return supers;
}

}  // namespace

RtValue RtValue::f(float v) { return {'F', std::bit_cast<uint32_t>(v)}; }
RtValue RtValue::d(double v) { return {'D', std::bit_cast<uint64_t>(v)}; }

char kind_of(std::string_view descriptor) {
  if (descriptor.empty()) return '?';
  switch (descriptor[0]) {
    case 'Z': case 'B': case 'S': case 'C': case 'I': return 'I';
    case 'J': return 'J';
    case 'F': return 'F';
    case 'D': return 'D';
    case 'L': case '[': return 'L';
    default: return '?';
  }
}

uint32_t Heap::allocate(std::string type) {
  objects_.push_back(HeapObject{std::move(type), {}, {}, std::nullopt});
  return static_cast<uint32_t>(objects_.size());
}

uint32_t Heap::new_array(const std::string& array_type, size_t length) {
  const uint32_t h = allocate(array_type);
  at(h).elements.assign(length, 0);
  return h;
}

uint32_t Heap::intern_string(const std::string& s) {
  if (auto it = strings_.find(s); it != strings_.end()) return it->second;
  const uint32_t h = allocate("Ljava/lang/String;");
  at(h).text = s;
  strings_[s] = h;
  return h;
}

uint32_t Heap::class_object(const std::string& descriptor) {
  if (auto it = classes_.find(descriptor); it != classes_.end()) return it->second;
  const uint32_t h = allocate("Ljava/lang/Class;");
  at(h).text = descriptor;
  classes_[descriptor] = h;
  return h;
}

HeapObject& Heap::at(uint32_t handle) {
  if (handle == 0 || handle > objects_.size()) fail(ErrorCode::kUnsupportedForOracle, "dangling heap handle");
  return objects_[handle - 1];
}

const HeapObject& Heap::at(uint32_t handle) const {
  if (handle == 0 || handle > objects_.size()) fail(ErrorCode::kUnsupportedForOracle, "dangling heap handle");
  return objects_[handle - 1];
}

std::string Heap::render(const RtValue& v) const {
  std::ostringstream os;
  std::function<void(const RtValue&, int)> go = [&](const RtValue& x, int depth) {
    switch (x.kind) {
      case 'I': os << as_int(x); return;
      case 'J': os << as_long(x) << "L"; return;
      case 'F': os << as_float(x) << "F(0x" << std::hex << static_cast<uint32_t>(x.bits) << std::dec << ")"; return;
      case 'D': os << as_double(x) << "D(0x" << std::hex << x.bits << std::dec << ")"; return;
      default: break;
    }
    if (x.bits == 0) {
      os << "null";
      return;
    }
    const HeapObject& o = at(static_cast<uint32_t>(x.bits));
    if (o.type == "Ljava/lang/String;") {
      os << '"' << o.text.value_or("") << '"';
      return;
    }
    if (o.type == "Ljava/lang/Class;") {
      os << "class " << o.text.value_or("");
      return;
    }
    os << o.type;
    if (depth > 3) {
      os << "#" << x.bits;
      return;
    }
    if (!o.type.empty() && o.type[0] == '[') {
      const std::string elem = o.type.substr(1);
      os << "{";
      for (size_t i = 0; i < o.elements.size(); ++i) {
        if (i) os << ", ";
        go(detail::load_value(elem, o.elements[i]), depth + 1);
      }
      os << "}";
      return;
    }
    os << "#" << x.bits << "{";
    bool first = true;
    for (const auto& [name, bits] : o.fields) {
      if (!first) os << ", ";
      first = false;
      const std::string type = name.substr(name.rfind(':') + 1);
      os << name << "=";
      go(detail::load_value(type, bits), depth + 1);
    }
    os << "}";
  };
  go(v, 0);
  return os.str();
}

Env Env::with_defaults() {
  Env env;
  auto text = [](Heap& h, const RtValue& v) -> const std::string* {
    if (v.bits == 0) return nullptr;
    const HeapObject& o = h.at(static_cast<uint32_t>(v.bits));
    if (o.type != "Ljava/lang/String;") fail(ErrorCode::kUnsupportedForOracle, "string stub on a non-string");
    return &*o.text;
  };
  env.methods["Ljava/lang/Object;.<init>:()V"] = [](Heap&, const std::vector<RtValue>&) { return StubResult{}; };
  env.methods["Ljava/lang/String;.length:()I"] = [text](Heap& h, const std::vector<RtValue>& a) {
    const std::string* s = text(h, a.at(0));
    if (!s) return StubResult{std::nullopt, detail::kNullPointer};
    return StubResult{RtValue::i(static_cast<int32_t>(s->size())), std::nullopt};
  };
  env.methods["Ljava/lang/String;.concat:(Ljava/lang/String;)Ljava/lang/String;"] =
      [text](Heap& h, const std::vector<RtValue>& a) {
        const std::string* s = text(h, a.at(0));
        const std::string* t = text(h, a.at(1));
        if (!s || !t) return StubResult{std::nullopt, detail::kNullPointer};
        return StubResult{RtValue::ref(h.intern_string(*s + *t)), std::nullopt};
      };
  env.methods["Ljava/lang/String;.equals:(Ljava/lang/Object;)Z"] = [text](Heap& h, const std::vector<RtValue>& a) {
    const std::string* s = text(h, a.at(0));
    if (!s) return StubResult{std::nullopt, detail::kNullPointer};
    const bool same = a.at(1).bits != 0 && h.at(static_cast<uint32_t>(a.at(1).bits)).type == "Ljava/lang/String;" &&
                      *text(h, a.at(1)) == *s;
    return StubResult{RtValue::i(same ? 1 : 0), std::nullopt};
  };
  env.methods["Ljava/lang/String;.valueOf:(I)Ljava/lang/String;"] = [](Heap& h, const std::vector<RtValue>& a) {
    return StubResult{RtValue::ref(h.intern_string(std::to_string(static_cast<int32_t>(a.at(0).bits)))),
                      std::nullopt};
  };
  env.methods["Ljava/lang/Integer;.parseInt:(Ljava/lang/String;)I"] = [text](Heap& h, const std::vector<RtValue>& a) {
    const std::string* s = text(h, a.at(0));
    if (!s) return StubResult{std::nullopt, "Ljava/lang/NumberFormatException;"};
    try {
      size_t used = 0;
      const long long v = std::stoll(*s, &used);
      if (used != s->size() || v < INT32_MIN || v > INT32_MAX) throw std::out_of_range("range");
      return StubResult{RtValue::i(static_cast<int32_t>(v)), std::nullopt};
    } catch (const std::exception&) {
      return StubResult{std::nullopt, "Ljava/lang/NumberFormatException;"};
    }
  };
  return env;
}

bool Env::is_subtype(const std::string& sub, const std::string& super) const {
  if (sub == super || super == "Ljava/lang/Object;") return true;
  if (!sub.empty() && sub[0] == '[') {
    if (super == "Ljava/lang/Cloneable;" || super == "Ljava/io/Serializable;") return true;
    if (super.empty() || super[0] != '[') return false;
    const std::string a = sub.substr(1), b = super.substr(1);
    if (kind_of(a) != 'L' || kind_of(b) != 'L') return a == b;
    return is_subtype(a, b);
  }
  std::string cur = sub;
  for (int guard = 0; guard < 64; ++guard) {
    std::string next;
    if (auto it = superclass.find(cur); it != superclass.end()) {
      next = it->second;
    } else if (auto b = builtin_supers().find(cur); b != builtin_supers().end()) {
      next = b->second;
    } else {
      return false;
    }
    if (next == super) return true;
    cur = next;
  }
  return false;
}

std::string Outcome::to_string() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::kReturned: os << "returned " << (value.empty() ? "void" : value); break;
    case Kind::kThrew: os << "threw " << thrown; break;
    case Kind::kStuck: os << "stuck: " << detail; break;
  }
  for (const auto& t : trace) os << "\n  call " << t;
  return os.str();
}

namespace detail {

RtValue arith(Arith op, char kind, RtValue a, RtValue b) {
  switch (kind) {
    case 'I': {
      const int32_t x = as_int(a), y = as_int(b);
      const uint32_t ux = static_cast<uint32_t>(x), uy = static_cast<uint32_t>(y);
      switch (op) {
        case Arith::kAdd: return RtValue::i(static_cast<int32_t>(ux + uy));
        case Arith::kSub: return RtValue::i(static_cast<int32_t>(ux - uy));
        case Arith::kMul: return RtValue::i(static_cast<int32_t>(ux * uy));
        case Arith::kDiv:
          if (y == 0) throw JavaThrow{kArithmetic};
          if (x == INT32_MIN && y == -1) return RtValue::i(x);
          return RtValue::i(x / y);
        case Arith::kRem:
          if (y == 0) throw JavaThrow{kArithmetic};
          if (y == -1) return RtValue::i(0);
          return RtValue::i(x % y);
        case Arith::kAnd: return RtValue::i(x & y);
        case Arith::kOr: return RtValue::i(x | y);
        case Arith::kXor: return RtValue::i(x ^ y);
        case Arith::kShl: return RtValue::i(static_cast<int32_t>(ux << (uy & 31)));
        case Arith::kShr: return RtValue::i(x >> (uy & 31));
        case Arith::kUshr: return RtValue::i(static_cast<int32_t>(ux >> (uy & 31)));
      }
      break;
    }
    case 'J': {
      const int64_t x = as_long(a);
      const uint64_t ux = a.bits;
      // Shift counts are ints; everything else is long.
      const bool shift = op == Arith::kShl || op == Arith::kShr || op == Arith::kUshr;
      const int64_t y = shift ? as_int(b) : as_long(b);
      const uint64_t uy = static_cast<uint64_t>(y);
      switch (op) {
        case Arith::kAdd: return RtValue::j(static_cast<int64_t>(ux + uy));
        case Arith::kSub: return RtValue::j(static_cast<int64_t>(ux - uy));
        case Arith::kMul: return RtValue::j(static_cast<int64_t>(ux * uy));
        case Arith::kDiv:
          if (y == 0) throw JavaThrow{kArithmetic};
          if (x == INT64_MIN && y == -1) return RtValue::j(x);
          return RtValue::j(x / y);
        case Arith::kRem:
          if (y == 0) throw JavaThrow{kArithmetic};
          if (y == -1) return RtValue::j(0);
          return RtValue::j(x % y);
        case Arith::kAnd: return RtValue::j(x & y);
        case Arith::kOr: return RtValue::j(x | y);
        case Arith::kXor: return RtValue::j(x ^ y);
        case Arith::kShl: return RtValue::j(static_cast<int64_t>(ux << (uy & 63)));
        case Arith::kShr: return RtValue::j(x >> (uy & 63));
        case Arith::kUshr: return RtValue::j(static_cast<int64_t>(ux >> (uy & 63)));
      }
      break;
    }
    case 'F': {
      const float x = as_float(a), y = as_float(b);
      switch (op) {
        case Arith::kAdd: return RtValue::f(x + y);
        case Arith::kSub: return RtValue::f(x - y);
        case Arith::kMul: return RtValue::f(x * y);
        case Arith::kDiv: return RtValue::f(x / y);
        case Arith::kRem: return RtValue::f(std::fmod(x, y));
        default: break;
      }
      break;
    }
    case 'D': {
      const double x = as_double(a), y = as_double(b);
      switch (op) {
        case Arith::kAdd: return RtValue::d(x + y);
        case Arith::kSub: return RtValue::d(x - y);
        case Arith::kMul: return RtValue::d(x * y);
        case Arith::kDiv: return RtValue::d(x / y);
        case Arith::kRem: return RtValue::d(std::fmod(x, y));
        default: break;
      }
      break;
    }
    default: break;
  }
  fail(ErrorCode::kUnsupportedForOracle, std::string("no arithmetic on kind ") + kind);
}

RtValue negate(char kind, RtValue a) {
  switch (kind) {
    case 'I': return RtValue::i(static_cast<int32_t>(0u - static_cast<uint32_t>(a.bits)));
    case 'J': return RtValue::j(static_cast<int64_t>(0ull - a.bits));
    case 'F': return RtValue::f(-as_float(a));
    case 'D': return RtValue::d(-as_double(a));
    default: fail(ErrorCode::kUnsupportedForOracle, std::string("no negation on kind ") + kind);
  }
}

RtValue convert(char from, char to, RtValue a) {
  switch (from) {
    case 'I': {
      const int32_t x = as_int(a);
      switch (to) {
        case 'J': return RtValue::j(x);
        case 'F': return RtValue::f(static_cast<float>(x));
        case 'D': return RtValue::d(static_cast<double>(x));
        case 'B': return RtValue::i(static_cast<int8_t>(x));
        case 'C': return RtValue::i(static_cast<uint16_t>(x));
        case 'S': return RtValue::i(static_cast<int16_t>(x));
        case 'Z': return RtValue::i(x & 1);
        case 'I': return RtValue::i(x);
      }
      break;
    }
    case 'J': {
      const int64_t x = as_long(a);
      switch (to) {
        case 'I': return RtValue::i(static_cast<int32_t>(x));
        case 'F': return RtValue::f(static_cast<float>(x));
        case 'D': return RtValue::d(static_cast<double>(x));
      }
      break;
    }
    case 'F': {
      const float x = as_float(a);
      switch (to) {
        case 'I': return RtValue::i(saturate<int32_t>(x));
        case 'J': return RtValue::j(saturate<int64_t>(x));
        case 'D': return RtValue::d(static_cast<double>(x));
      }
      break;
    }
    case 'D': {
      const double x = as_double(a);
      switch (to) {
        case 'I': return RtValue::i(saturate<int32_t>(x));
        case 'J': return RtValue::j(saturate<int64_t>(x));
        case 'F': return RtValue::f(static_cast<float>(x));
      }
      break;
    }
  }
  fail(ErrorCode::kUnsupportedForOracle, std::string("no conversion ") + from + " to " + to);
}

int32_t compare(char kind, bool gt_bias, RtValue a, RtValue b) {
  auto three_way = [&](auto x, auto y) -> int32_t {
    if (x < y) return -1;
    if (x > y) return 1;
    if (x == y) return 0;
    return gt_bias ? 1 : -1;  // unordered
  };
  switch (kind) {
    case 'J': return three_way(as_long(a), as_long(b));
    case 'F': return three_way(as_float(a), as_float(b));
    case 'D': return three_way(as_double(a), as_double(b));
    default: fail(ErrorCode::kUnsupportedForOracle, std::string("no comparison on kind ") + kind);
  }
}

uint64_t store_bits(std::string_view descriptor, const RtValue& v) {
  switch (descriptor.empty() ? '?' : descriptor[0]) {
    case 'Z': return static_cast<uint32_t>(as_int(v) & 1);
    case 'B': return static_cast<uint32_t>(static_cast<int32_t>(static_cast<int8_t>(v.bits)));
    case 'C': return static_cast<uint16_t>(v.bits);
    case 'S': return static_cast<uint32_t>(static_cast<int32_t>(static_cast<int16_t>(v.bits)));
    case 'I': case 'F': return static_cast<uint32_t>(v.bits);
    default: return v.bits;
  }
}

RtValue load_value(std::string_view descriptor, uint64_t bits) { return RtValue{kind_of(descriptor), bits}; }

uint32_t make_exception(Heap& heap, const std::string& type) { return heap.allocate(type); }

std::optional<RtValue> call_stub(const Env& env, Heap& heap, const dex::MethodRef& method,
                                 const std::vector<RtValue>& args, std::vector<std::string>& trace) {
  const std::string name = method.to_string();
  std::string line = name + "(";
  for (size_t i = 0; i < args.size(); ++i) line += (i ? ", " : "") + heap.render(args[i]);
  trace.push_back(line + ")");
  auto it = env.methods.find(name);
  if (it == env.methods.end()) {
    if (env.lenient_constructors && method.name == "<init>") return std::nullopt;
    fail(ErrorCode::kUnsupportedForOracle, "no stub for " + name);
  }
  StubResult r = it->second(heap, args);
  if (r.thrown) throw JavaThrow{*r.thrown};
  const char want = method.proto.return_type == "V" ? 'V' : kind_of(method.proto.return_type);
  if (want == 'V') return std::nullopt;
  if (!r.value || r.value->kind != want) fail(ErrorCode::kUnsupportedForOracle, "stub " + name + " returned a wrong kind");
  return r.value;
}

bool instance_of(const Env& env, const Heap& heap, const RtValue& ref, const std::string& type) {
  if (ref.bits == 0) return false;
  return env.is_subtype(heap.at(static_cast<uint32_t>(ref.bits)).type, type);
}

void charge(uint64_t& steps, const Env& env) {
  if (++steps > env.step_budget) fail(ErrorCode::kUnsupportedForOracle, "step budget exhausted");
}

}  // namespace detail
}  // namespace dexlift::refinterp
