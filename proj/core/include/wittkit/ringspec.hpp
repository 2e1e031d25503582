#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wittkit/algebra.hpp"
#include "wittkit/towers.hpp"

namespace wittkit {

/// `key=value;` inside a block. Positions point at the start of the value.
struct SpecEntry {
  std::string key;
  std::string value;
  int line = 0;
  int column = 0;

  bool operator==(const SpecEntry& o) const { return key == o.key && value == o.value; }
};

enum class BlockType { Tower, Algebra, Check };

/// One declaration: `tower T { ... }`, `algebra A { ... }` or
/// `check <kind> <name> { ... }`.
struct SpecBlock {
  BlockType type = BlockType::Tower;
  std::string kind;  ///< check kind, empty for declarations
  std::string name;
  std::vector<SpecEntry> entries;
  int line = 0;
  int column = 0;

  std::optional<std::string> get(const std::string& key) const;
  std::vector<const SpecEntry*> all(const std::string& key) const;
  const SpecEntry* entry(const std::string& key) const;

  bool operator==(const SpecBlock& o) const {
    return type == o.type && kind == o.kind && name == o.name && entries == o.entries;
  }
};

struct CheckPlan {
  std::vector<SpecBlock> blocks;

  bool operator==(const CheckPlan& o) const { return blocks == o.blocks; }
  std::size_t check_count() const;
};

/// Check kinds accepted by the runner, in the order they are documented.
const std::vector<std::string>& check_kinds();

/// Parses the block grammar. With `validate`, also checks keys, references
/// and caps (SyntaxError, UnknownReference, CapExceeded, InvalidSpec).
CheckPlan parse_ringspec(const std::string& text, bool validate = true);

/// Canonical text: one block per line, entries in declaration order.
std::string print_ringspec(const CheckPlan& plan);

/// Declared objects, built in declaration order.
struct SpecEnvironment {
  std::map<std::string, TowerSpec> towers;
  std::map<std::string, AlgebraPtr> algebras;
};

/// Validates the plan and builds every tower spec and algebra.
SpecEnvironment build_environment(const CheckPlan& plan);

/// Number of basis monomials of a tower level's algebra (before relations).
std::size_t tower_level_dimension(const TowerSpec& spec, int n);

/// Helpers shared by the runner: integer-valued entries with range checks.
long entry_int(const SpecBlock& b, const std::string& key, long fallback, long lo, long hi);
std::vector<std::string> split_list(const std::string& value);

inline constexpr std::size_t kMaxBasisDimension = 10000;
inline constexpr int kMaxLevel = 4;

}  // namespace wittkit
