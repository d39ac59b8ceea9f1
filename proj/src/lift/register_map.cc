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

// Register splitting. Reaching definitions are computed over the
// instruction-level flow graph (every instruction inside a try range has an
// edge to each of its handlers), then the definitions reaching each use are
// merged with union-find. Each resulting web becomes one local.

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>

#include "dexlift/error.h"
#include "dexlift/lift/lifter.h"

namespace dexlift::lift {
namespace {

bool is_wide_type(std::string_view t) { return t == "wide" || t == "long" || t == "double"; }
bool is_wide_descriptor(std::string_view d) { return d == "J" || d == "D"; }

[[noreturn]] void bad_register(const isa::Instruction& ins, const std::string& msg) {
  Error e(ErrorCode::kBadRegister, msg);
  e.address = ins.address;
  e.opcode = ins.opcode;
  throw e;
}

class Bits {
 public:
  explicit Bits(size_t n = 0) : words_((n + 63) / 64, 0) {}
  void set(size_t i) { words_[i / 64] |= uint64_t{1} << (i % 64); }
  bool test(size_t i) const { return (words_[i / 64] >> (i % 64)) & 1; }
  // this |= other; returns whether anything changed.
  bool merge(const Bits& other) {
    bool changed = false;
    for (size_t w = 0; w < words_.size(); ++w) {
      const uint64_t next = words_[w] | other.words_[w];
      changed |= next != words_[w];
      words_[w] = next;
    }
    return changed;
  }
  void clear(const Bits& mask) {
    for (size_t w = 0; w < words_.size(); ++w) words_[w] &= ~mask.words_[w];
  }
  template <typename F>
  void for_each_and(const Bits& mask, F f) const {
    for (size_t w = 0; w < words_.size(); ++w) {
      uint64_t v = words_[w] & mask.words_[w];
      while (v != 0) {
        const int b = __builtin_ctzll(v);
        f(w * 64 + static_cast<size_t>(b));
        v &= v - 1;
      }
    }
  }

 private:
  std::vector<uint64_t> words_;
};

struct DefSite {
  uint32_t reg = 0;
  bool wide = false;
  bool high = false;  // upper half of a wide value
  std::optional<size_t> instruction;  // absent for parameters
};

class UnionFind {
 public:
  explicit UnionFind(size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), size_t{0}); }
  size_t find(size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void unite(size_t a, size_t b) {
    a = find(a);
    b = find(b);
    // Keep the earliest definition as representative so naming is stable.
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
  }

 private:
  std::vector<size_t> parent_;
};

uint64_t use_key(size_t i, uint32_t reg) { return (static_cast<uint64_t>(i) << 32) | reg; }

}  // namespace

RegisterEffects register_effects(const isa::Instruction& ins, const dex::DexFile& dex) {
  const MappingRow& row = mapping_for(ins.opcode);
  const auto& r = ins.registers;
  RegisterEffects fx;
  auto use = [&](size_t k, bool wide) { fx.uses.push_back({r.at(k), wide}); };
  auto def = [&](size_t k, bool wide) { fx.def = RegisterAccess{r.at(k), wide}; };
  const bool wide = is_wide_type(row.type);
  switch (row.rule) {
    case Rule::kNop:
    case Rule::kReturnVoid:
    case Rule::kGoto: break;
    case Rule::kNewInstance: def(0, false); break;
    case Rule::kMove:
      use(1, wide);
      def(0, wide);
      break;
    case Rule::kMoveResult:
    case Rule::kMoveException:
    case Rule::kConstString:
    case Rule::kConstClass:
      def(0, wide);
      break;
    case Rule::kConst: def(0, wide); break;
    case Rule::kReturn:
    case Rule::kMonitorEnter:
    case Rule::kMonitorExit:
    case Rule::kThrow:
    case Rule::kPackedSwitch:
    case Rule::kSparseSwitch:
    case Rule::kFillArrayData: use(0, wide); break;
    case Rule::kCheckCast:
      use(0, false);
      def(0, false);
      break;
    case Rule::kInstanceOf:
    case Rule::kArrayLength:
    case Rule::kNewArray:
      use(1, false);
      def(0, false);
      break;
    case Rule::kFilledNewArray:
      for (size_t k = 0; k < r.size(); ++k) use(k, false);
      break;
    case Rule::kCmp: {
      const bool w = row.op.find("double") != std::string::npos || row.op == "cmp-long";
      use(1, w);
      use(2, w);
      def(0, false);
      break;
    }
    case Rule::kIf:
      use(0, false);
      use(1, false);
      break;
    case Rule::kIfz: use(0, false); break;
    case Rule::kAget:
      use(1, false);
      use(2, false);
      def(0, wide);
      break;
    case Rule::kAput:
      use(0, wide);
      use(1, false);
      use(2, false);
      break;
    case Rule::kIget:
      use(1, false);
      def(0, wide);
      break;
    case Rule::kIput:
      use(0, wide);
      use(1, false);
      break;
    case Rule::kSget: def(0, wide); break;
    case Rule::kSput: use(0, wide); break;
    case Rule::kInvoke: {
      const dex::MethodRef& m = dex::resolve_method(dex, ins.pool_index->index);
      size_t k = 0;
      auto take = [&](bool w) {
        if (k >= r.size()) bad_register(ins, "argument registers do not match the signature");
        use(k, w);
        if (w) {
          if (k + 1 >= r.size() || r[k + 1] != r[k] + 1) {
            bad_register(ins, "wide argument does not occupy a register pair");
          }
          ++k;
        }
        ++k;
      };
      if (row.op != "static") take(false);
      for (const auto& p : m.proto.parameters) take(is_wide_descriptor(p));
      if (k != r.size()) bad_register(ins, "argument registers do not match the signature");
      break;
    }
    case Rule::kNeg:
    case Rule::kNot:
      use(1, wide);
      def(0, wide);
      break;
    case Rule::kConvert: {
      const auto gt = row.type.find('>');
      use(1, is_wide_type(row.type.substr(0, gt)));
      def(0, is_wide_type(row.type.substr(gt + 1)));
      break;
    }
    case Rule::kBinop: {
      const bool shift = row.op == "shl" || row.op == "shr" || row.op == "ushr";
      use(1, wide);
      use(2, wide && !shift);
      def(0, wide);
      break;
    }
    case Rule::kBinop2Addr: {
      const bool shift = row.op == "shl" || row.op == "shr" || row.op == "ushr";
      use(0, wide);
      use(1, wide && !shift);
      def(0, wide);
      break;
    }
    case Rule::kBinopLit:
      use(1, false);
      def(0, false);
      break;
  }
  return fx;
}

RegisterMap RegisterMap::build(const dex::CodeItem& code, const std::vector<isa::Instruction>& instructions,
                               const dex::DexFile& dex, const dex::MethodRef& method, bool is_static,
                               ir::Body& body) {
  const size_t n = instructions.size();
  const uint32_t nregs = code.registers_size;

  // Per-instruction effects, with register bounds checked.
  std::vector<RegisterEffects> effects(n);
  std::map<uint32_t, size_t> index_of;
  for (size_t i = 0; i < n; ++i) {
    const auto& ins = instructions[i];
    index_of.emplace(ins.address, i);
    if (ins.is_payload) continue;
    effects[i] = register_effects(ins, dex);
    auto check = [&](const RegisterAccess& a) {
      if (a.reg + (a.wide ? 1u : 0u) >= nregs) {
        bad_register(ins, "register v" + std::to_string(a.reg + (a.wide ? 1 : 0)) + " outside the frame of " +
                              std::to_string(nregs));
      }
    };
    for (const auto& u : effects[i].uses) check(u);
    if (effects[i].def) check(*effects[i].def);
  }

  // Definition sites: parameters first, then instructions in order.
  std::vector<DefSite> defs;
  std::vector<std::vector<size_t>> gen(n);
  std::vector<size_t> entry_defs;
  std::vector<std::pair<size_t, ir::IrType>> parameters;  // def id, declared type
  {
    uint32_t reg = nregs - code.ins_size;
    auto add_param = [&](const ir::IrType& type) {
      const bool w = type.is_wide();
      if (reg + (w ? 1u : 0u) >= nregs) fail(ErrorCode::kBadRegister, "parameters exceed the register frame");
      parameters.emplace_back(defs.size(), type);
      entry_defs.push_back(defs.size());
      defs.push_back({reg, w, false, std::nullopt});
      if (w) {
        entry_defs.push_back(defs.size());
        defs.push_back({reg + 1, false, true, std::nullopt});
      }
      reg += w ? 2 : 1;
    };
    if (!is_static) add_param(ir::IrType::ref(method.owner));
    for (const auto& p : method.proto.parameters) add_param(ir::IrType::from_descriptor(p));
    if (reg != nregs) fail(ErrorCode::kBadRegister, "ins_size does not match the signature");
  }
  for (size_t i = 0; i < n; ++i) {
    if (!effects[i].def) continue;
    const auto& d = *effects[i].def;
    gen[i].push_back(defs.size());
    defs.push_back({d.reg, d.wide, false, i});
    if (d.wide) {
      gen[i].push_back(defs.size());
      defs.push_back({d.reg + 1, false, true, i});
    }
  }

  const size_t nd = defs.size();
  std::vector<Bits> reg_mask(nregs, Bits(nd));
  for (size_t d = 0; d < nd; ++d) reg_mask[defs[d].reg].set(d);

  // Successors on the instruction graph.
  std::vector<std::vector<size_t>> succ(n);
  auto add_edge = [&](size_t from, uint32_t address) {
    auto it = index_of.find(address);
    if (it != index_of.end() && !instructions[it->second].is_payload) succ[from].push_back(it->second);
  };
  for (size_t i = 0; i < n; ++i) {
    const auto& ins = instructions[i];
    if (ins.is_payload) continue;
    const Rule rule = mapping_for(ins.opcode).rule;
    const bool stops = rule == Rule::kGoto || rule == Rule::kReturn || rule == Rule::kReturnVoid ||
                       rule == Rule::kThrow;
    if (!stops && i + 1 < n) add_edge(i, instructions[i + 1].address);
    if (auto t = ins.branch_target(); t && (rule == Rule::kGoto || rule == Rule::kIf || rule == Rule::kIfz)) {
      add_edge(i, *t);
    }
    if (ins.payload) {
      if (const auto* sw = std::get_if<isa::SwitchPayload>(&*ins.payload)) {
        for (int32_t t : sw->targets) add_edge(i, static_cast<uint32_t>(t));
      }
    }
  }
  std::vector<std::vector<size_t>> handlers(n);
  for (const auto& t : code.tries) {
    for (size_t i = 0; i < n; ++i) {
      const uint32_t a = instructions[i].address;
      if (instructions[i].is_payload || a < t.start_address || a >= t.start_address + t.instruction_count) continue;
      for (const auto& h : t.handlers) {
        auto it = index_of.find(h.address);
        if (it != index_of.end()) handlers[i].push_back(it->second);
      }
    }
  }

  // Forward dataflow to a fixpoint.
  std::vector<Bits> in(n, Bits(nd)), out(n, Bits(nd));
  std::vector<Bits> kill(n, Bits(nd));
  for (size_t i = 0; i < n; ++i) {
    if (!effects[i].def) continue;
    const auto& d = *effects[i].def;
    kill[i].merge(reg_mask[d.reg]);
    if (d.wide) kill[i].merge(reg_mask[d.reg + 1]);
  }
  std::deque<size_t> work;
  std::vector<bool> queued(n, false);
  if (n > 0) {
    for (size_t d : entry_defs) in[0].set(d);
  }
  for (size_t i = 0; i < n; ++i) {
    work.push_back(i);
    queued[i] = true;
  }
  while (!work.empty()) {
    const size_t i = work.front();
    work.pop_front();
    queued[i] = false;
    Bits next = in[i];
    next.clear(kill[i]);
    for (size_t d : gen[i]) next.set(d);
    out[i] = next;
    auto push = [&](size_t s, const Bits& b) {
      if (in[s].merge(b) && !queued[s]) {
        queued[s] = true;
        work.push_back(s);
      }
    };
    for (size_t s : succ[i]) push(s, out[i]);
    for (size_t h : handlers[i]) {
      push(h, in[i]);
      push(h, out[i]);
    }
  }

  // Merge definitions reaching each use.
  UnionFind uf(nd);
  struct UseSite {
    size_t instruction;
    uint32_t reg;
    std::optional<size_t> def;
  };
  std::vector<UseSite> use_sites;
  for (size_t i = 0; i < n; ++i) {
    for (const auto& u : effects[i].uses) {
      std::optional<size_t> first;
      in[i].for_each_and(reg_mask[u.reg], [&](size_t d) {
        if (defs[d].high) return;  // half of a wide value read as narrow
        if (first) {
          uf.unite(*first, d);
        } else {
          first = d;
        }
      });
      use_sites.push_back({i, u.reg, first});
    }
  }

  // One local per web, named in definition order.
  RegisterMap map;
  std::vector<uint32_t> counts(nregs, 0);
  auto next_name = [&](uint32_t reg) {
    const uint32_t k = ++counts[reg];
    return "v" + std::to_string(reg) + (k == 1 ? "" : "_" + std::to_string(k));
  };
  std::map<size_t, ir::LocalId> web_local;
  for (size_t d = 0; d < nd; ++d) {
    if (defs[d].high) continue;
    const size_t root = uf.find(d);
    if (!web_local.count(root)) web_local[root] = body.add_local(next_name(defs[d].reg));
  }
  std::map<uint32_t, ir::LocalId> undefined;
  for (const auto& u : use_sites) {
    ir::LocalId id;
    if (u.def) {
      id = web_local.at(uf.find(*u.def));
    } else {
      auto it = undefined.find(u.reg);
      if (it == undefined.end()) it = undefined.emplace(u.reg, body.add_local(next_name(u.reg))).first;
      id = it->second;
    }
    map.uses_[use_key(u.instruction, u.reg)] = id;
  }
  for (size_t d = 0; d < nd; ++d) {
    if (defs[d].high || !defs[d].instruction) continue;
    map.defs_[*defs[d].instruction] = web_local.at(uf.find(d));
  }
  for (const auto& [d, type] : parameters) {
    const ir::LocalId id = web_local.at(uf.find(d));
    body.locals[id].type = type;
    map.parameters_.push_back(id);
  }

  // Results of invoke and filled-new-array bind to the next move-result.
  for (size_t i = 0; i < n; ++i) {
    const auto& ins = instructions[i];
    if (ins.is_payload) continue;
    const Rule rule = mapping_for(ins.opcode).rule;
    if (rule != Rule::kInvoke && rule != Rule::kFilledNewArray) continue;
    size_t j = i + 1;
    while (j < n && !instructions[j].is_payload && mapping_for(instructions[j].opcode).rule == Rule::kNop) ++j;
    if (j < n && !instructions[j].is_payload && mapping_for(instructions[j].opcode).rule == Rule::kMoveResult) {
      map.results_[i] = map.defs_.at(j);
    }
  }
  return map;
}

ir::LocalId RegisterMap::use(size_t i, uint32_t reg) const {
  auto it = uses_.find(use_key(i, reg));
  if (it == uses_.end()) fail(ErrorCode::kBadRegister, "no local for v" + std::to_string(reg));
  return it->second;
}

ir::LocalId RegisterMap::def(size_t i) const {
  auto it = defs_.find(i);
  if (it == defs_.end()) fail(ErrorCode::kBadRegister, "instruction defines no register");
  return it->second;
}

std::optional<ir::LocalId> RegisterMap::result_of(size_t i) const {
  auto it = results_.find(i);
  if (it == results_.end()) return std::nullopt;
  return it->second;
}

}  // namespace dexlift::lift
