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

#include "specdiff/mutation.h"

#include <algorithm>
#include <fstream>
#include <random>
#include <set>

#include "specdiff/errors.h"
#include "specdiff/util.h"

namespace specdiff {

bool MutationSet::contains(std::uint32_t v) const {
  return std::find(values.begin(), values.end(), v) != values.end();
}

const std::vector<std::uint32_t>* InitOverrides::find(
    const std::string& encoding_id, const std::string& field) const {
  auto it = sets.find({encoding_id, field});
  return it == sets.end() ? nullptr : &it->second;
}

InitOverrides InitOverrides::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open init-set file '" + path.string() + "'");
  }
  InitOverrides out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view body = trim(line);
    if (body.empty() || body[0] == '#') continue;
    auto fail = [&](const std::string& msg) -> void {
      throw IoError(path.string() + ":" + std::to_string(line_no) + ": " +
                    msg);
    };
    std::size_t eq = body.find('=');
    if (eq == std::string_view::npos) {
      fail("expected '<encoding>.<field> = v1, v2, ...'");
    }
    std::string key = std::string(trim(body.substr(0, eq)));
    std::size_t dot = key.rfind('.');
    if (dot == std::string::npos || dot == 0 || dot + 1 == key.size()) {
      fail("key must be <encoding>.<field>");
    }
    std::string encoding = key.substr(0, dot);
    std::string field = key.substr(dot + 1);
    std::vector<std::uint32_t> values;
    for (const auto& tok : split(body.substr(eq + 1), ',')) {
      std::string v = std::string(trim(tok));
      if (v.empty()) fail("empty value");
      try {
        unsigned long parsed = std::stoul(v, nullptr, 0);
        if (parsed > 0xffffffffUL) fail("value out of range: " + v);
        values.push_back(static_cast<std::uint32_t>(parsed));
      } catch (const IoError&) {
        throw;
      } catch (const std::exception&) {
        fail("malformed value '" + v + "'");
      }
    }
    if (values.empty()) fail("no values given");
    if (!out.sets.emplace(std::make_pair(encoding, field), values).second) {
      fail("duplicate entry for " + key);
    }
  }
  return out;
}

namespace {

constexpr int kCollisionRetryLimit = 64;

std::uint32_t draw_distinct(std::mt19937_64* engine, std::uint32_t mask,
                            const std::set<std::uint32_t>& taken,
                            const std::set<std::uint32_t>& excluded) {
  for (int attempt = 0; attempt < kCollisionRetryLimit; ++attempt) {
    std::uint32_t v = static_cast<std::uint32_t>((*engine)()) & mask;
    if (!taken.count(v) && !excluded.count(v)) return v;
  }
  throw Error("could not draw a distinct field value after " +
              std::to_string(kCollisionRetryLimit) + " attempts");
}

void push_unique(MutationSet* set, std::uint32_t v) {
  if (!set->contains(v)) set->values.push_back(v);
}

}  // namespace

MutationSet init_mutation_set(const Field& field, std::uint64_t seed) {
  MutationSet set;
  if (field.is_constant()) {
    set.constant = true;
    set.values.push_back(field.constant_value());
    return set;
  }
  set.field_name = field.name;
  const int width = field.width();
  const std::uint32_t mask =
      width >= 32 ? 0xffffffffu : ((1u << width) - 1u);
  SymbolInfo info = infer_symbol_type(field);
  std::mt19937_64 engine(seed);
  std::set<std::uint32_t> taken;
  auto add = [&](std::uint32_t v) {
    if (taken.insert(v).second) set.values.push_back(v);
  };

  switch (info.type) {
    case SymbolType::kRegisterIndex: {
      for (std::uint32_t v : {0u, 1u, 15u}) {
        if (v <= mask) add(v);
      }
      const std::set<std::uint32_t> excluded = {11, 13};
      std::size_t target = std::min<std::size_t>(4, std::size_t{1} << width);
      while (set.values.size() < target) {
        add(draw_distinct(&engine, mask, taken, excluded));
      }
      break;
    }
    case SymbolType::kImmediate: {
      add(mask);  // all ones: 2^N - 1
      add(0);
      int extra = info.bit_length - 2;
      for (int i = 0; i < extra; ++i) {
        add(draw_distinct(&engine, mask, taken, {}));
      }
      break;
    }
    case SymbolType::kCondition:
      add(14);  // '1110', the always condition
      break;
    case SymbolType::kOther: {
      if (width == 1) {
        add(0);
        add(1);
      } else {
        std::size_t target =
            std::min<std::size_t>(static_cast<std::size_t>(width),
                                  std::size_t{1} << width);
        while (set.values.size() < target) {
          add(draw_distinct(&engine, mask, taken, {}));
        }
      }
      break;
    }
  }
  return set;
}

std::vector<std::pair<std::string, std::uint32_t>> witness_field_values(
    const InstructionSpec& spec, const Constraint& constraint,
    const Witness& witness) {
  std::vector<std::pair<std::string, std::uint32_t>> out;
  for (const auto& [name, value] : witness.assignment) {
    if (spec.diagram.find_field(name)) {
      out.emplace_back(name, value);
      continue;
    }
    auto aux = constraint.aux_defs.find(name);
    if (aux == constraint.aux_defs.end()) {
      throw MappingError("witness symbol '" + name +
                         "' is neither an encoding field of '" + spec.id +
                         "' nor an auxiliary symbol of the constraint");
    }
    const AuxChoice* inducing = nullptr;
    for (const auto& choice : aux->second) {
      if (choice.value == static_cast<std::int64_t>(value)) {
        inducing = &choice;
        break;
      }
    }
    if (!inducing) {
      throw MappingError("no case arm induces value " + std::to_string(value) +
                         " for auxiliary symbol '" + name + "'");
    }
    if (inducing->source_symbol.empty()) {
      throw MappingError("auxiliary symbol '" + name +
                         "' is selected by a compound expression, not a "
                         "plain encoding field");
    }
    out.emplace_back(inducing->source_symbol,
                     static_cast<std::uint32_t>(
                         asl::BitLit{inducing->pattern}.value()));
  }
  return out;
}

std::vector<MutationSet> build_mutation_sets(
    const InstructionSpec& spec,
    const std::vector<std::pair<Constraint, Witness>>& solved,
    std::uint64_t rng_seed, const InitOverrides* overrides) {
  std::vector<MutationSet> sets;
  sets.reserve(spec.diagram.fields.size());
  if (overrides) {
    for (const auto& [key, values] : overrides->sets) {
      (void)values;
      if (key.first == spec.id && !spec.diagram.find_field(key.second)) {
        throw ValidationError(spec.id, "init-set override names unknown "
                                       "field '" +
                                           key.second + "'");
      }
    }
  }
  for (const auto& field : spec.diagram.fields) {
    const std::vector<std::uint32_t>* override_values =
        overrides && !field.is_constant()
            ? overrides->find(spec.id, field.name)
            : nullptr;
    if (override_values) {
      MutationSet set;
      set.field_name = field.name;
      const std::uint32_t mask =
          field.width() >= 32 ? 0xffffffffu : ((1u << field.width()) - 1u);
      for (std::uint32_t v : *override_values) {
        if (v > mask) {
          throw ValidationError(
              spec.id, "override value " + std::to_string(v) +
                           " does not fit field '" + field.name + "'");
        }
        push_unique(&set, v);
      }
      sets.push_back(std::move(set));
    } else {
      sets.push_back(init_mutation_set(
          field, derive_seed(rng_seed, spec.id, field.name)));
    }
  }
  auto set_for = [&](const std::string& field_name) -> MutationSet* {
    for (std::size_t i = 0; i < sets.size(); ++i) {
      if (!sets[i].constant && sets[i].field_name == field_name) {
        return &sets[i];
      }
    }
    return nullptr;
  };
  for (const auto& [constraint, witness] : solved) {
    for (const auto& [field_name, value] :
         witness_field_values(spec, constraint, witness)) {
      MutationSet* set = set_for(field_name);
      if (!set) {
        throw MappingError("witness references unknown field '" + field_name +
                           "' of encoding '" + spec.id + "'");
      }
      push_unique(set, value);
    }
  }
  return sets;
}

}  // namespace specdiff
