// Guarded partial fractional-linear maps on filling tuples, the built-in map
// families for the chain-link exteriors, orbit closure, and equivalence-class
// partitioning with canonical representatives.
#pragma once

#include <array>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "slopes.hpp"

namespace exfill {

using FillingInstruction = std::vector<ExtSlope>;

// (a α + b) / (c α + d) acting on extended slopes; ∅ is fixed, ∞ -> a/c.
ExtSlope apply_mobius(const std::array<std::int64_t, 4>& mat, const ExtSlope& s);

struct FillingMap {
  // out[i] = mats[i] applied to in[sigma[i]]
  std::vector<int> sigma;
  std::vector<std::array<std::int64_t, 4>> mats;
  // All (position, slope) guards must match for the map to apply.
  std::vector<std::pair<int, ExtSlope>> guards;

  int arity() const { return static_cast<int>(sigma.size()); }
};

// Returns nullopt when a guard fails.
std::optional<FillingInstruction> apply_filling_map(const FillingMap& m,
                                                    const FillingInstruction& f);

enum class Manifold { M2, M3, M4, M5 };

// The published generator lists: 3 maps for M2, 8 for M3, 6 for M4, 5 for M5.
std::vector<FillingMap> builtin_map_families(Manifold which);

// Map families from a JSON array of {sigma, mats, guard} records.
std::vector<FillingMap> map_family_from_json(const std::string& json_text);

struct OrbitResult {
  std::set<FillingInstruction> elements;
  bool stabilized = false;  // closure reached a fixed point before the limit
};

OrbitResult orbit_closure(const FillingInstruction& f,
                          const std::vector<FillingMap>& maps,
                          int depth_limit = 12, std::size_t cap = 2000000);

struct ClassPartition {
  // One entry per class: the input instructions in it plus the
  // lexicographically minimal representative of everything discovered.
  struct Class {
    std::vector<FillingInstruction> members;  // from the input list
    FillingInstruction representative;        // lex min over the closure
  };
  std::vector<Class> classes;  // sorted by representative
};

ClassPartition partition_classes(const std::vector<FillingInstruction>& input,
                                 const std::vector<FillingMap>& maps,
                                 int depth_limit = 12);

std::string instruction_text(const FillingInstruction& f);
FillingInstruction parse_instruction(const std::string& text);

}  // namespace exfill
