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

#include "dexlift/dex/dex_file.h"

#include <cstring>
#include <fstream>
#include <iterator>

#include "dexlift/error.h"

namespace dexlift::dex {
namespace {

constexpr uint8_t kMagic[8] = {'d', 'e', 'x', '\n', '0', '3', '5', '\0'};

std::string hex(uint64_t v) {
  char buf[24];
  std::snprintf(buf, sizeof(buf), "0x%llx", static_cast<unsigned long long>(v));
  return buf;
}

// Bounds-checked little-endian cursor over the file image.
class Reader {
 public:
  explicit Reader(std::span<const uint8_t> bytes) : bytes_(bytes) {}

  size_t size() const { return bytes_.size(); }
  void seek(uint64_t offset) {
    if (offset > bytes_.size()) fail(ErrorCode::kTruncated, "offset " + hex(offset) + " outside file");
    pos_ = static_cast<size_t>(offset);
  }
  size_t pos() const { return pos_; }

  uint8_t u8() {
    need(1);
    return bytes_[pos_++];
  }
  uint16_t u16() {
    need(2);
    uint16_t v = static_cast<uint16_t>(bytes_[pos_] | (bytes_[pos_ + 1] << 8));
    pos_ += 2;
    return v;
  }
  uint32_t u32() {
    need(4);
    uint32_t v = 0;
    for (int i = 3; i >= 0; --i) v = (v << 8) | bytes_[pos_ + i];
    pos_ += 4;
    return v;
  }
  uint32_t uleb128() {
    uint32_t result = 0;
    for (int i = 0; i < 5; ++i) {
      const uint8_t b = u8();
      result |= static_cast<uint32_t>(b & 0x7f) << (7 * i);
      if ((b & 0x80) == 0) return result;
    }
    fail(ErrorCode::kTruncated, "uleb128 longer than 5 bytes at " + hex(pos_));
  }
  int32_t sleb128() {
    uint32_t result = 0;
    int shift = 0;
    uint8_t b = 0;
    for (int i = 0; i < 5; ++i) {
      b = u8();
      result |= static_cast<uint32_t>(b & 0x7f) << shift;
      shift += 7;
      if ((b & 0x80) == 0) break;
      if (i == 4) fail(ErrorCode::kTruncated, "sleb128 longer than 5 bytes at " + hex(pos_));
    }
    if (shift < 32 && (b & 0x40)) result |= ~uint32_t{0} << shift;
    return static_cast<int32_t>(result);
  }
  std::span<const uint8_t> bytes(size_t count) {
    need(count);
    auto s = bytes_.subspan(pos_, count);
    pos_ += count;
    return s;
  }
  // Bytes up to (not including) the next NUL; consumes the NUL.
  std::span<const uint8_t> until_nul() {
    const size_t start = pos_;
    while (true) {
      if (u8() == 0) break;
    }
    return bytes_.subspan(start, pos_ - start - 1);
  }

 private:
  void need(size_t count) const {
    if (pos_ + count > bytes_.size()) {
      fail(ErrorCode::kTruncated, "read of " + std::to_string(count) + " bytes at " + hex(pos_) + " runs past end");
    }
  }

  std::span<const uint8_t> bytes_;
  size_t pos_ = 0;
};

void check_range(const SectionRange& range, uint32_t item_size, uint32_t file_size, const char* what) {
  const uint64_t end = static_cast<uint64_t>(range.offset) + static_cast<uint64_t>(range.size) * item_size;
  if (range.size != 0 && end > file_size) {
    fail(ErrorCode::kTruncated, std::string(what) + " section [" + hex(range.offset) + ", " + hex(end) +
                                    ") exceeds file size " + hex(file_size));
  }
}

void check_index(uint64_t index, size_t pool_size, const char* pool) {
  if (index >= pool_size) {
    fail(ErrorCode::kBadIndex, std::string(pool) + " index " + std::to_string(index) + " out of range (size " +
                                   std::to_string(pool_size) + ")");
  }
}

void append_utf8(std::string& out, uint32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xc0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xe0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3f)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
  } else {
    out.push_back(static_cast<char>(0xf0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3f)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3f)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
  }
}

DexHeader read_header(Reader& r) {
  DexHeader h;
  for (auto& b : h.magic) b = r.u8();
  h.checksum = r.u32();
  for (auto& b : h.signature) b = r.u8();
  h.file_size = r.u32();
  h.header_size = r.u32();
  h.endian_tag = r.u32();
  auto range = [&](SectionRange& s) {
    s.size = r.u32();
    s.offset = r.u32();
  };
  range(h.link);
  h.map_off = r.u32();
  range(h.string_ids);
  range(h.type_ids);
  range(h.proto_ids);
  range(h.field_ids);
  range(h.method_ids);
  range(h.class_defs);
  range(h.data);
  return h;
}

std::vector<std::string> read_type_list(Reader& r, uint32_t offset, const std::vector<std::string>& types) {
  std::vector<std::string> out;
  if (offset == 0) return out;
  r.seek(offset);
  const uint32_t size = r.u32();
  for (uint32_t i = 0; i < size; ++i) {
    const uint16_t idx = r.u16();
    check_index(idx, types.size(), "type");
    out.push_back(types[idx]);
  }
  return out;
}

std::vector<TryItem> read_tries(Reader& r, uint16_t tries_size, const std::vector<std::string>& types,
                                uint32_t insns_size) {
  struct RawTry {
    uint32_t start;
    uint16_t count;
    uint16_t handler_off;
  };
  std::vector<RawTry> raw(tries_size);
  for (auto& t : raw) {
    t.start = r.u32();
    t.count = r.u16();
    t.handler_off = r.u16();
  }
  const size_t list_base = r.pos();
  std::vector<TryItem> tries;
  for (const RawTry& t : raw) {
    if (t.count == 0 || static_cast<uint64_t>(t.start) + t.count > insns_size) {
      fail(ErrorCode::kBadIndex, "try range [" + hex(t.start) + ", +" + std::to_string(t.count) +
                                     ") outside instruction array");
    }
    TryItem item;
    item.start_address = t.start;
    item.instruction_count = t.count;
    r.seek(list_base + t.handler_off);
    const int32_t size = r.sleb128();
    const uint32_t typed = static_cast<uint32_t>(size < 0 ? -static_cast<int64_t>(size) : size);
    for (uint32_t i = 0; i < typed; ++i) {
      const uint32_t type_idx = r.uleb128();
      check_index(type_idx, types.size(), "type");
      const uint32_t addr = r.uleb128();
      item.handlers.push_back({types[type_idx], addr});
    }
    if (size <= 0) item.handlers.push_back({std::nullopt, r.uleb128()});
    for (const CatchHandler& h : item.handlers) {
      if (h.address >= insns_size) fail(ErrorCode::kBadIndex, "handler address " + hex(h.address) + " outside code");
    }
    tries.push_back(std::move(item));
  }
  return tries;
}

CodeItem read_code(Reader& r, uint32_t offset, const std::vector<std::string>& types) {
  r.seek(offset);
  CodeItem code;
  code.registers_size = r.u16();
  code.ins_size = r.u16();
  code.outs_size = r.u16();
  const uint16_t tries_size = r.u16();
  code.debug_info_off = r.u32();
  const uint32_t insns_size = r.u32();
  if (code.ins_size > code.registers_size) {
    fail(ErrorCode::kBadIndex, "code item at " + hex(offset) + " has ins_size > registers_size");
  }
  if (static_cast<uint64_t>(insns_size) * 2 > r.size()) fail(ErrorCode::kTruncated, "instruction array too large");
  code.insns.reserve(insns_size);
  for (uint32_t i = 0; i < insns_size; ++i) code.insns.push_back(r.u16());
  if (tries_size != 0) {
    if (insns_size % 2 == 1) r.u16();  // padding
    code.tries = read_tries(r, tries_size, types, insns_size);
  }
  return code;
}

// Code offsets come back in a parallel vector; code items are read only after
// the whole class_data_item has been consumed.
std::vector<MethodDef> read_methods(Reader& r, uint32_t count, const DexFile& dex,
                                    std::vector<uint32_t>& code_offsets) {
  std::vector<MethodDef> out;
  uint32_t idx = 0;
  for (uint32_t i = 0; i < count; ++i) {
    const uint32_t diff = r.uleb128();
    idx = (i == 0) ? diff : idx + diff;
    check_index(idx, dex.methods().size(), "method");
    MethodDef m;
    m.method_idx = idx;
    m.access_flags = r.uleb128();
    const uint32_t code_off = r.uleb128();
    const bool bodiless = (m.access_flags & (kAccAbstract | kAccNative)) != 0;
    if (bodiless != (code_off == 0)) {
      fail(ErrorCode::kBadIndex, "method " + dex.methods()[idx].to_string() +
                                     (bodiless ? " is abstract/native but has code" : " has no code item"));
    }
    code_offsets.push_back(code_off);
    out.push_back(std::move(m));
  }
  return out;
}

std::vector<FieldDef> read_fields(Reader& r, uint32_t count, const DexFile& dex) {
  std::vector<FieldDef> out;
  uint32_t idx = 0;
  for (uint32_t i = 0; i < count; ++i) {
    const uint32_t diff = r.uleb128();
    idx = (i == 0) ? diff : idx + diff;
    check_index(idx, dex.fields().size(), "field");
    out.push_back({idx, r.uleb128()});
  }
  return out;
}

bool is_class_descriptor(std::string_view d) { return d.size() >= 3 && d.front() == 'L' && d.back() == ';'; }

}  // namespace

std::string Proto::descriptor() const {
  std::string out = "(";
  for (const auto& p : parameters) out += p;
  return out + ")" + return_type;
}

std::string FieldRef::to_string() const { return owner + "." + name + ":" + type; }

std::string MethodRef::to_string() const { return owner + "." + name + ":" + proto.descriptor(); }

std::string decode_mutf8(std::span<const uint8_t> bytes, uint32_t expected_utf16_length) {
  std::vector<uint16_t> units;
  for (size_t i = 0; i < bytes.size();) {
    const uint8_t a = bytes[i];
    auto cont = [&](size_t k) -> uint32_t {
      if (i + k >= bytes.size() || (bytes[i + k] & 0xc0) != 0x80) {
        fail(ErrorCode::kBadString, "malformed modified UTF-8 sequence");
      }
      return bytes[i + k] & 0x3f;
    };
    if (a == 0) {
      fail(ErrorCode::kBadString, "raw NUL byte in modified UTF-8 string");
    } else if (a < 0x80) {
      units.push_back(a);
      i += 1;
    } else if ((a & 0xe0) == 0xc0) {
      units.push_back(static_cast<uint16_t>(((a & 0x1f) << 6) | cont(1)));
      i += 2;
    } else if ((a & 0xf0) == 0xe0) {
      units.push_back(static_cast<uint16_t>(((a & 0x0f) << 12) | (cont(1) << 6) | cont(2)));
      i += 3;
    } else {
      fail(ErrorCode::kBadString, "invalid modified UTF-8 lead byte " + hex(a));
    }
  }
  if (units.size() != expected_utf16_length) {
    fail(ErrorCode::kBadString, "string length " + std::to_string(units.size()) + " != declared " +
                                    std::to_string(expected_utf16_length));
  }
  std::string out;
  for (size_t i = 0; i < units.size(); ++i) {
    const uint32_t u = units[i];
    if (u >= 0xd800 && u <= 0xdbff) {
      if (i + 1 >= units.size() || units[i + 1] < 0xdc00 || units[i + 1] > 0xdfff) {
        fail(ErrorCode::kBadString, "unpaired high surrogate");
      }
      append_utf8(out, 0x10000 + ((u - 0xd800) << 10) + (units[i + 1] - 0xdc00));
      ++i;
    } else if (u >= 0xdc00 && u <= 0xdfff) {
      fail(ErrorCode::kBadString, "unpaired low surrogate");
    } else {
      append_utf8(out, u);
    }
  }
  return out;
}

bool is_valid_descriptor(std::string_view d, bool allow_void) {
  size_t dims = 0;
  while (dims < d.size() && d[dims] == '[') ++dims;
  if (dims > 255) return false;
  std::string_view base = d.substr(dims);
  if (base.size() == 1) {
    if (base[0] == 'V') return allow_void && dims == 0;
    return std::string_view("ZBSCIJFD").find(base[0]) != std::string_view::npos;
  }
  if (!is_class_descriptor(base)) return false;
  std::string_view name = base.substr(1, base.size() - 2);
  if (name.empty() || name.front() == '/' || name.back() == '/') return false;
  for (size_t i = 0; i < name.size(); ++i) {
    const char c = name[i];
    if (c == ';' || c == '[' || c == '.') return false;
    if (c == '/' && i + 1 < name.size() && name[i + 1] == '/') return false;
  }
  return true;
}

std::string descriptor_to_class_name(std::string_view d) {
  if (!is_class_descriptor(d)) return std::string(d);
  std::string out(d.substr(1, d.size() - 2));
  for (char& c : out) {
    if (c == '/') c = '.';
  }
  return out;
}

DexFile parse_dex(std::span<const uint8_t> bytes) {
  if (bytes.size() < kHeaderSize) {
    fail(ErrorCode::kTruncated, "file of " + std::to_string(bytes.size()) + " bytes is shorter than the header");
  }
  Reader r(bytes);
  DexFile dex;
  dex.header_ = read_header(r);
  const DexHeader& h = dex.header_;
  if (std::memcmp(h.magic.data(), kMagic, sizeof(kMagic)) != 0) {
    fail(ErrorCode::kBadMagic, "not a version 035 dex file");
  }
  if (h.endian_tag != kEndianConstant) fail(ErrorCode::kBadMagic, "byte-swapped dex files are not supported");
  if (h.file_size > bytes.size()) {
    fail(ErrorCode::kTruncated, "header declares " + std::to_string(h.file_size) + " bytes, file has " +
                                    std::to_string(bytes.size()));
  }
  if (h.header_size != kHeaderSize) fail(ErrorCode::kTruncated, "unexpected header size " + hex(h.header_size));
  check_range(h.string_ids, 4, h.file_size, "string_ids");
  check_range(h.type_ids, 4, h.file_size, "type_ids");
  check_range(h.proto_ids, 12, h.file_size, "proto_ids");
  check_range(h.field_ids, 8, h.file_size, "field_ids");
  check_range(h.method_ids, 8, h.file_size, "method_ids");
  check_range(h.class_defs, 32, h.file_size, "class_defs");
  check_range(h.data, 1, h.file_size, "data");
  Reader in(bytes.first(h.file_size));

  for (uint32_t i = 0; i < h.string_ids.size; ++i) {
    in.seek(h.string_ids.offset + 4ull * i);
    in.seek(in.u32());
    const uint32_t utf16_len = in.uleb128();
    dex.strings_.push_back(decode_mutf8(in.until_nul(), utf16_len));
  }
  for (uint32_t i = 0; i < h.type_ids.size; ++i) {
    in.seek(h.type_ids.offset + 4ull * i);
    const uint32_t idx = in.u32();
    check_index(idx, dex.strings_.size(), "string");
    const std::string& d = dex.strings_[idx];
    if (!is_valid_descriptor(d, true)) fail(ErrorCode::kBadIndex, "type " + std::to_string(i) + " is not a descriptor: " + d);
    dex.types_.push_back(d);
  }
  for (uint32_t i = 0; i < h.proto_ids.size; ++i) {
    in.seek(h.proto_ids.offset + 12ull * i);
    const uint32_t shorty = in.u32();
    const uint32_t ret = in.u32();
    const uint32_t params_off = in.u32();
    check_index(shorty, dex.strings_.size(), "string");
    check_index(ret, dex.types_.size(), "type");
    Proto p;
    p.shorty = dex.strings_[shorty];
    p.return_type = dex.types_[ret];
    p.parameters = read_type_list(in, params_off, dex.types_);
    for (const auto& param : p.parameters) {
      if (param == "V") fail(ErrorCode::kBadIndex, "void parameter type in proto " + std::to_string(i));
    }
    dex.protos_.push_back(std::move(p));
  }
  for (uint32_t i = 0; i < h.field_ids.size; ++i) {
    in.seek(h.field_ids.offset + 8ull * i);
    const uint16_t cls = in.u16();
    const uint16_t type = in.u16();
    const uint32_t name = in.u32();
    check_index(cls, dex.types_.size(), "type");
    check_index(type, dex.types_.size(), "type");
    check_index(name, dex.strings_.size(), "string");
    if (dex.types_[type] == "V") fail(ErrorCode::kBadIndex, "void field type in field " + std::to_string(i));
    dex.fields_.push_back({dex.types_[cls], dex.strings_[name], dex.types_[type]});
  }
  for (uint32_t i = 0; i < h.method_ids.size; ++i) {
    in.seek(h.method_ids.offset + 8ull * i);
    const uint16_t cls = in.u16();
    const uint16_t proto = in.u16();
    const uint32_t name = in.u32();
    check_index(cls, dex.types_.size(), "type");
    check_index(proto, dex.protos_.size(), "proto");
    check_index(name, dex.strings_.size(), "string");
    dex.methods_.push_back({dex.types_[cls], dex.strings_[name], dex.protos_[proto]});
  }
  for (uint32_t i = 0; i < h.class_defs.size; ++i) {
    in.seek(h.class_defs.offset + 32ull * i);
    const uint32_t class_idx = in.u32();
    ClassDef c;
    c.access_flags = in.u32();
    const uint32_t super_idx = in.u32();
    const uint32_t interfaces_off = in.u32();
    const uint32_t source_idx = in.u32();
    c.opaque.annotations_off = in.u32();
    const uint32_t class_data_off = in.u32();
    c.opaque.static_values_off = in.u32();
    check_index(class_idx, dex.types_.size(), "type");
    c.this_type = dex.types_[class_idx];
    if (!is_class_descriptor(c.this_type)) fail(ErrorCode::kBadIndex, "class_def type is not a class: " + c.this_type);
    if (super_idx != kNoIndex) {
      check_index(super_idx, dex.types_.size(), "type");
      c.superclass = dex.types_[super_idx];
    }
    if (source_idx != kNoIndex) {
      check_index(source_idx, dex.strings_.size(), "string");
      c.source_file = dex.strings_[source_idx];
    }
    c.interfaces = read_type_list(in, interfaces_off, dex.types_);
    if (class_data_off != 0) {
      in.seek(class_data_off);
      const uint32_t sf = in.uleb128();
      const uint32_t inf = in.uleb128();
      const uint32_t dm = in.uleb128();
      const uint32_t vm = in.uleb128();
      std::vector<uint32_t> direct_code;
      std::vector<uint32_t> virtual_code;
      c.static_fields = read_fields(in, sf, dex);
      c.instance_fields = read_fields(in, inf, dex);
      c.direct_methods = read_methods(in, dm, dex, direct_code);
      c.virtual_methods = read_methods(in, vm, dex, virtual_code);
      for (size_t k = 0; k < direct_code.size(); ++k) {
        if (direct_code[k] != 0) c.direct_methods[k].code = read_code(in, direct_code[k], dex.types_);
      }
      for (size_t k = 0; k < virtual_code.size(); ++k) {
        if (virtual_code[k] != 0) c.virtual_methods[k].code = read_code(in, virtual_code[k], dex.types_);
      }
    }
    dex.class_defs_.push_back(std::move(c));
  }
  return dex;
}

DexFile read_dex_file(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) fail(ErrorCode::kIo, "cannot open " + path);
  std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(file)), std::istreambuf_iterator<char>());
  return parse_dex(bytes);
}

const std::string& resolve_string(const DexFile& dex, uint32_t idx) {
  check_index(idx, dex.strings().size(), "string");
  return dex.strings()[idx];
}

const std::string& resolve_type(const DexFile& dex, uint32_t idx) {
  check_index(idx, dex.types().size(), "type");
  return dex.types()[idx];
}

const FieldRef& resolve_field(const DexFile& dex, uint32_t idx) {
  check_index(idx, dex.fields().size(), "field");
  return dex.fields()[idx];
}

const MethodRef& resolve_method(const DexFile& dex, uint32_t idx) {
  check_index(idx, dex.methods().size(), "method");
  return dex.methods()[idx];
}

const Proto& resolve_proto(const DexFile& dex, uint32_t idx) {
  check_index(idx, dex.protos().size(), "proto");
  return dex.protos()[idx];
}

const CodeItem* method_code(const DexFile&, const MethodDef& method) {
  return method.code ? &*method.code : nullptr;
}

}  // namespace dexlift::dex
