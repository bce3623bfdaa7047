// Copyright 2026 The specdiff Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "specdiff/corpus.h"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "specdiff/errors.h"
#include "specdiff/util.h"

namespace specdiff {

std::string to_string(Iset iset) {
  switch (iset) {
    case Iset::kA64: return "A64";
    case Iset::kA32: return "A32";
    case Iset::kT32: return "T32";
    case Iset::kT16: return "T16";
  }
  return "?";
}

std::optional<Iset> iset_from_string(const std::string& s) {
  if (s == "A64") return Iset::kA64;
  if (s == "A32") return Iset::kA32;
  if (s == "T32") return Iset::kT32;
  if (s == "T16") return Iset::kT16;
  return std::nullopt;
}

int iset_width(Iset iset) { return iset == Iset::kT16 ? 16 : 32; }

std::string to_string(SymbolType t) {
  switch (t) {
    case SymbolType::kRegisterIndex: return "RegisterIndex";
    case SymbolType::kImmediate: return "Immediate";
    case SymbolType::kCondition: return "Condition";
    case SymbolType::kOther: return "Other";
  }
  return "?";
}

SymbolInfo infer_symbol_type(const Field& field) {
  const std::string& n = field.name;
  // Register-index names: R or V (any case) followed by a short suffix,
  // e.g. Rd, Rn, Rt2, Vm.
  if (n.size() >= 2 && n.size() <= 3 &&
      (n[0] == 'R' || n[0] == 'r' || n[0] == 'V' || n[0] == 'v')) {
    bool suffix_ok = true;
    for (std::size_t i = 1; i < n.size(); ++i) {
      if (!std::isalnum(static_cast<unsigned char>(n[i]))) suffix_ok = false;
    }
    if (suffix_ok) return {SymbolType::kRegisterIndex, field.width()};
  }
  if (n.size() > 3 && n.compare(0, 3, "imm") == 0) {
    bool digits = true;
    for (std::size_t i = 3; i < n.size(); ++i) {
      if (!std::isdigit(static_cast<unsigned char>(n[i]))) digits = false;
    }
    if (digits) return {SymbolType::kImmediate, field.width()};
  }
  if (n == "cond") return {SymbolType::kCondition, field.width()};
  return {SymbolType::kOther, field.width()};
}

std::uint32_t EncodingDiagram::constant_mask() const {
  std::uint32_t mask = 0;
  for (const auto& f : fields) {
    if (!f.is_constant()) continue;
    for (int b = f.lo; b <= f.hi; ++b) mask |= 1u << b;
  }
  return mask;
}

std::uint32_t EncodingDiagram::constant_value() const {
  std::uint32_t value = 0;
  for (const auto& f : fields) {
    if (!f.is_constant()) continue;
    value |= f.constant_value() << f.lo;
  }
  return value;
}

const Field* EncodingDiagram::find_field(const std::string& name) const {
  for (const auto& f : fields) {
    if (!f.is_constant() && f.name == name) return &f;
  }
  return nullptr;
}

std::uint32_t encode_word(const EncodingDiagram& diagram,
                          const std::map<std::string, std::uint32_t>& values) {
  std::uint32_t word = diagram.constant_value();
  for (const auto& f : diagram.fields) {
    if (f.is_constant()) continue;
    auto it = values.find(f.name);
    if (it == values.end()) {
      throw ValidationError("missing value for symbol field '" + f.name + "'");
    }
    std::uint32_t limit =
        f.width() >= 32 ? 0xffffffffu : ((1u << f.width()) - 1u);
    if (it->second > limit) {
      throw ValidationError("value " + std::to_string(it->second) +
                            " does not fit " + std::to_string(f.width()) +
                            "-bit field '" + f.name + "'");
    }
    word |= it->second << f.lo;
  }
  return word;
}

std::map<std::string, std::uint32_t> decode_word(
    const EncodingDiagram& diagram, std::uint32_t word) {
  if ((word & diagram.constant_mask()) != diagram.constant_value()) {
    throw ValidationError("word 0x" + to_hex(word, diagram.width / 4) +
                          " does not match the encoding's constant bits");
  }
  std::map<std::string, std::uint32_t> values;
  for (const auto& f : diagram.fields) {
    if (f.is_constant()) continue;
    std::uint32_t mask =
        f.width() >= 32 ? 0xffffffffu : ((1u << f.width()) - 1u);
    values[f.name] = (word >> f.lo) & mask;
  }
  return values;
}

bool InstructionSpec::has_tag(const std::string& tag) const {
  return std::find(tags.begin(), tags.end(), tag) != tags.end();
}

std::vector<asl::StmtPtr> InstructionSpec::combined_statements() const {
  std::vector<asl::StmtPtr> out = decode.statements;
  out.insert(out.end(), execute.statements.begin(), execute.statements.end());
  return out;
}

const InstructionSpec* Corpus::find(const std::string& id) const {
  for (const auto& e : encodings) {
    if (e.id == id) return &e;
  }
  return nullptr;
}

namespace {

// Splits an attribute line into key=value pairs. Values may be quoted to
// contain spaces.
std::map<std::string, std::string> parse_attributes(const std::string& line,
                                                    int line_no) {
  std::map<std::string, std::string> attrs;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i])))
      ++i;
    if (i >= line.size()) break;
    std::size_t eq = line.find('=', i);
    if (eq == std::string::npos) {
      throw SyntaxError("expected key=value attribute", line_no,
                        static_cast<int>(i) + 1);
    }
    std::string key = std::string(trim(line.substr(i, eq - i)));
    if (key.empty()) {
      throw SyntaxError("empty attribute key", line_no,
                        static_cast<int>(i) + 1);
    }
    std::string value;
    i = eq + 1;
    if (i < line.size() && line[i] == '"') {
      std::size_t close = line.find('"', i + 1);
      if (close == std::string::npos) {
        throw SyntaxError("unterminated quoted attribute value", line_no,
                          static_cast<int>(i) + 1);
      }
      value = line.substr(i + 1, close - i - 1);
      i = close + 1;
    } else {
      std::size_t end = i;
      while (end < line.size() &&
             !std::isspace(static_cast<unsigned char>(line[end])))
        ++end;
      value = line.substr(i, end - i);
      i = end;
    }
    if (attrs.count(key)) {
      throw SyntaxError("duplicate attribute '" + key + "'", line_no, 1);
    }
    attrs[key] = value;
  }
  return attrs;
}

bool valid_identifier(const std::string& s) {
  if (s.empty()) return false;
  if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_')
    return false;
  for (char c : s) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  }
  return true;
}

// Parses one `NAME@hi:lo` or `'BITS'@hi:lo` span.
Field parse_field_spec(const std::string& spec, int line_no) {
  std::string s = std::string(trim(spec));
  std::size_t at = s.rfind('@');
  if (at == std::string::npos) {
    throw SyntaxError("field '" + s + "' is missing its @hi:lo span", line_no,
                      1);
  }
  std::string head = std::string(trim(s.substr(0, at)));
  std::string span = std::string(trim(s.substr(at + 1)));
  std::size_t colon = span.find(':');
  if (colon == std::string::npos) {
    throw SyntaxError("field span '" + span + "' must be hi:lo", line_no, 1);
  }
  Field f;
  try {
    f.hi = std::stoi(span.substr(0, colon));
    f.lo = std::stoi(span.substr(colon + 1));
  } catch (const std::exception&) {
    throw SyntaxError("field span '" + span + "' must be hi:lo with integer "
                      "bit positions",
                      line_no, 1);
  }
  if (head.size() >= 2 && head.front() == '\'' && head.back() == '\'') {
    f.constant_bits = head.substr(1, head.size() - 2);
    if (f.constant_bits.empty()) {
      throw SyntaxError("empty constant field", line_no, 1);
    }
    for (char c : f.constant_bits) {
      if (c != '0' && c != '1') {
        throw SyntaxError("constant field may contain only 0 and 1", line_no,
                          1);
      }
    }
  } else {
    if (!valid_identifier(head)) {
      throw SyntaxError("invalid field name '" + head + "'", line_no, 1);
    }
    f.name = head;
  }
  return f;
}

void validate_diagram(const std::string& id, EncodingDiagram* diagram) {
  std::set<std::string> names;
  for (const auto& f : diagram->fields) {
    if (f.hi < f.lo) {
      throw ValidationError(id, "field span " + std::to_string(f.hi) + ":" +
                                    std::to_string(f.lo) +
                                    " has hi below lo");
    }
    if (f.hi >= diagram->width || f.lo < 0) {
      throw ValidationError(
          id, "field span " + std::to_string(f.hi) + ":" +
                  std::to_string(f.lo) + " exceeds the " +
                  std::to_string(diagram->width) + "-bit word");
    }
    if (f.is_constant() &&
        static_cast<int>(f.constant_bits.size()) != f.width()) {
      throw ValidationError(
          id, "constant '" + f.constant_bits + "' has " +
                  std::to_string(f.constant_bits.size()) + " bits but spans " +
                  std::to_string(f.width()));
    }
    if (!f.is_constant() && !names.insert(f.name).second) {
      throw ValidationError(id, "duplicate symbol field '" + f.name + "'");
    }
  }
  // Coverage and overlap across the whole word.
  std::vector<int> owner(static_cast<std::size_t>(diagram->width), -1);
  for (std::size_t fi = 0; fi < diagram->fields.size(); ++fi) {
    const auto& f = diagram->fields[fi];
    for (int b = f.lo; b <= f.hi; ++b) {
      if (owner[static_cast<std::size_t>(b)] != -1) {
        throw ValidationError(id, "bit " + std::to_string(b) +
                                      " is covered by two fields");
      }
      owner[static_cast<std::size_t>(b)] = static_cast<int>(fi);
    }
  }
  std::vector<int> missing;
  for (int b = 0; b < diagram->width; ++b) {
    if (owner[static_cast<std::size_t>(b)] == -1) missing.push_back(b);
  }
  if (!missing.empty()) {
    std::string bits;
    for (int b : missing) {
      if (!bits.empty()) bits += ", ";
      bits += std::to_string(b);
    }
    throw ValidationError(id, "bits not covered by any field: " + bits);
  }
  // Canonical order: highest span first.
  std::sort(diagram->fields.begin(), diagram->fields.end(),
            [](const Field& a, const Field& b) { return a.hi > b.hi; });
}

struct RawBlock {
  std::map<std::string, std::string> attrs;
  int header_line = 0;
  std::string bits;
  int bits_line = 0;
  std::string decode_text;
  int decode_line = 0;
  std::string execute_text;
  int execute_line = 0;
};

InstructionSpec build_encoding(const RawBlock& raw,
                               const std::string& source_name) {
  InstructionSpec spec;
  auto require = [&](const char* key) -> const std::string& {
    auto it = raw.attrs.find(key);
    if (it == raw.attrs.end()) {
      throw SyntaxError(source_name + ": [encoding] is missing the '" +
                            std::string(key) + "' attribute",
                        raw.header_line, 1);
    }
    return it->second;
  };
  spec.id = require("id");
  spec.name = require("name");
  auto iset = iset_from_string(require("iset"));
  if (!iset) {
    throw ValidationError(spec.id, "iset must be one of A64, A32, T32, T16");
  }
  spec.iset = *iset;
  const std::string& width_s = require("width");
  if (width_s != "16" && width_s != "32") {
    throw ValidationError(spec.id, "width must be 16 or 32");
  }
  spec.diagram.width = width_s == "16" ? 16 : 32;
  if (spec.diagram.width != iset_width(spec.iset)) {
    throw ValidationError(spec.id, "width " + width_s +
                                       " does not match instruction set " +
                                       to_string(spec.iset));
  }
  if (auto it = raw.attrs.find("tags"); it != raw.attrs.end()) {
    for (auto& tag : split(it->second, ',')) {
      std::string t = std::string(trim(tag));
      if (!t.empty()) spec.tags.push_back(t);
    }
  }
  for (const auto& [key, value] : raw.attrs) {
    (void)value;
    if (key != "id" && key != "name" && key != "iset" && key != "width" &&
        key != "tags") {
      throw SyntaxError(
          source_name + ": unknown [encoding] attribute '" + key + "'",
          raw.header_line, 1);
    }
  }

  if (raw.bits.empty()) {
    throw ValidationError(spec.id, "missing bits: line");
  }
  for (const auto& part : split(raw.bits, ',')) {
    spec.diagram.fields.push_back(parse_field_spec(part, raw.bits_line));
  }
  validate_diagram(spec.id, &spec.diagram);

  for (const auto& f : spec.diagram.fields) {
    if (f.is_constant()) continue;
    SymbolInfo info = infer_symbol_type(f);
    if (info.type == SymbolType::kCondition && f.width() != 4) {
      throw ValidationError(spec.id, "the cond field must be 4 bits, got " +
                                         std::to_string(f.width()));
    }
    spec.symbol_types[f.name] = info;
  }

  asl::ParseContext decode_ctx;
  decode_ctx.first_line = raw.decode_line;
  decode_ctx.allow_state_access = false;
  for (const auto& f : spec.diagram.fields) {
    if (!f.is_constant()) decode_ctx.symbols[f.name] = f.width();
  }
  spec.decode_text = raw.decode_text;
  spec.decode = asl::parse_program(raw.decode_text, decode_ctx);

  asl::ParseContext execute_ctx = decode_ctx;
  execute_ctx.first_line = raw.execute_line;
  execute_ctx.allow_state_access = true;
  execute_ctx.prebound_vars = asl::may_assign(spec.decode.statements);
  spec.execute_text = raw.execute_text;
  spec.execute = asl::parse_program(raw.execute_text, execute_ctx);

  return spec;
}

}  // namespace

Corpus parse_corpus(const std::string& text, const std::string& source_name) {
  Corpus corpus;
  std::vector<std::string> lines = split(text, '\n');
  std::optional<RawBlock> current;
  std::set<std::string> seen_ids;

  auto finish = [&]() {
    if (!current) return;
    InstructionSpec spec = build_encoding(*current, source_name);
    if (!seen_ids.insert(spec.id).second) {
      throw ValidationError(spec.id, "duplicate encoding id");
    }
    corpus.encodings.push_back(std::move(spec));
    current.reset();
  };

  std::size_t i = 0;
  auto read_block = [&](std::size_t header_index, const std::string& after,
                        std::string* out, int* out_line) -> std::size_t {
    // `after` is the text following `decode:`/`execute:` on the same line.
    std::string rest = std::string(trim(after));
    if (rest.substr(0, 3) != "<<<") {
      throw SyntaxError(source_name + ": expected '<<<' to open the block",
                        static_cast<int>(header_index) + 1, 1);
    }
    rest = std::string(trim(rest.substr(3)));
    if (!rest.empty()) {
      // Single-line block: `decode: <<< ... >>>`.
      std::size_t close = rest.rfind(">>>");
      if (close == std::string::npos) {
        throw SyntaxError(source_name + ": missing '>>>' block terminator",
                          static_cast<int>(header_index) + 1, 1);
      }
      *out = rest.substr(0, close);
      *out_line = static_cast<int>(header_index) + 1;
      return header_index + 1;
    }
    *out_line = static_cast<int>(header_index) + 2;
    std::string body;
    std::size_t j = header_index + 1;
    for (; j < lines.size(); ++j) {
      if (std::string(trim(lines[j])) == ">>>") {
        *out = body;
        return j + 1;
      }
      body += lines[j];
      body += '\n';
    }
    throw SyntaxError(source_name + ": missing '>>>' block terminator",
                      static_cast<int>(header_index) + 1, 1);
  };

  while (i < lines.size()) {
    std::string line = std::string(trim(lines[i]));
    int line_no = static_cast<int>(i) + 1;
    if (line.empty() || line[0] == '#') {
      ++i;
      continue;
    }
    if (line.rfind("[encoding]", 0) == 0) {
      finish();
      current.emplace();
      current->header_line = line_no;
      current->attrs = parse_attributes(line.substr(10), line_no);
      ++i;
      continue;
    }
    if (!current) {
      throw SyntaxError(source_name + ": content before the first [encoding]",
                        line_no, 1);
    }
    if (line.rfind("bits:", 0) == 0) {
      if (!current->bits.empty()) {
        throw SyntaxError(source_name + ": duplicate bits: line", line_no, 1);
      }
      current->bits = line.substr(5);
      current->bits_line = line_no;
      ++i;
      continue;
    }
    if (line.rfind("decode:", 0) == 0) {
      i = read_block(i, line.substr(7), &current->decode_text,
                     &current->decode_line);
      continue;
    }
    if (line.rfind("execute:", 0) == 0) {
      i = read_block(i, line.substr(8), &current->execute_text,
                     &current->execute_line);
      continue;
    }
    throw SyntaxError(source_name + ": unrecognized line '" + line + "'",
                      line_no, 1);
  }
  finish();
  if (corpus.encodings.empty()) {
    throw ValidationError("corpus contains no encodings");
  }
  return corpus;
}

Corpus load_corpus(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open corpus file '" + path.string() + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_corpus(buf.str(), path.filename().string());
}

std::string serialize_corpus(const Corpus& corpus) {
  std::ostringstream out;
  bool first = true;
  for (const auto& e : corpus.encodings) {
    if (!first) out << "\n";
    first = false;
    out << "[encoding] id=" << e.id << " name=\"" << e.name
        << "\" iset=" << to_string(e.iset) << " width=" << e.diagram.width;
    if (!e.tags.empty()) {
      out << " tags=";
      for (std::size_t i = 0; i < e.tags.size(); ++i) {
        if (i) out << ",";
        out << e.tags[i];
      }
    }
    out << "\n";
    out << "bits: ";
    for (std::size_t i = 0; i < e.diagram.fields.size(); ++i) {
      const Field& f = e.diagram.fields[i];
      if (i) out << ", ";
      if (f.is_constant()) {
        out << "'" << f.constant_bits << "'";
      } else {
        out << f.name;
      }
      out << "@" << f.hi << ":" << f.lo;
    }
    out << "\n";
    out << "decode: <<<\n" << e.decode_text;
    if (!e.decode_text.empty() && e.decode_text.back() != '\n') out << "\n";
    out << ">>>\n";
    out << "execute: <<<\n" << e.execute_text;
    if (!e.execute_text.empty() && e.execute_text.back() != '\n') out << "\n";
    out << ">>>\n";
  }
  return out.str();
}

}  // namespace specdiff
