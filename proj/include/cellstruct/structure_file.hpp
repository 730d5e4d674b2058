#pragma once

// StructureFile: the JSON interchange format, its canonical form, and DOT
// rendering.
//
// Canonical JSON (version "cellstruct/1"):
//   {
//     "version": "cellstruct/1",
//     "levels":   [ {"cells": [...], "relation": [[a, b], ...], "min_open": {...}}, ... ],
//     "bondings": [ {"from_level": n + 1, "table": {"child": "parent", ...}}, ... ],
//     "target":   { "levels": [...], "bondings": [...] },          (optional)
//     "maps":     { "<name>": {"kind": ..., ...}, ... }             (optional)
//   }
// Cells are sorted; "relation" lists every ordered pair of the closed relation
// in lexicographic order; "min_open" is omitted for discrete levels. Object
// keys are sorted. Map kinds: weak, quotient (thread tables), gcell, family, dt.

#include <cellstruct/maps.hpp>

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace cellstruct {

inline constexpr const char* kFormatVersion = "cellstruct/1";

/// Thread-to-thread table keyed by coordinates so it survives re-truncation.
struct ThreadTable {
  int depth = 0;
  std::vector<std::pair<Thread, Thread>> entries;  ///< sorted by source thread
  friend bool operator==(const ThreadTable&, const ThreadTable&) = default;
};

struct WeakMapSpec {
  ThreadTable table;
};

/// Class map given by representatives: class of `first` goes to class of `second`.
struct QuotientMapSpec {
  ThreadTable table;
};

using MapSpec = std::variant<WeakMapSpec, QuotientMapSpec, GCellMap, LevelMapFamily, DTCellMap>;

std::string map_kind(const MapSpec& m);

struct StructureFile {
  InverseSequence source;
  std::optional<InverseSequence> target;
  std::map<std::string, MapSpec> maps;
  /// Human-readable notes produced while loading (e.g. relation closure).
  std::vector<std::string> notices;

  const InverseSequence& target_or_source() const { return target ? *target : source; }
};

StructureFile load_structure(const std::string& text);
StructureFile load_structure_file(const std::string& path);
/// Canonical JSON text, newline-terminated.
std::string save_structure(const StructureFile& file);

std::string to_dot(const StructureFile& file);

WeakGCellMap resolve(const WeakMapSpec& spec, const TruncatedLimit& src, const TruncatedLimit& dst);
QuotientMap resolve(const QuotientMapSpec& spec, const TruncatedLimit& src,
                    const TruncatedLimit& dst);

WeakMapSpec to_spec(const WeakGCellMap& f, const TruncatedLimit& src, const TruncatedLimit& dst);
QuotientMapSpec to_spec(const QuotientMap& f, const TruncatedLimit& src, const TruncatedLimit& dst);

/// "id1/id2/..." rendering of a thread.
std::string describe(const InverseSequence& s, const Thread& t);
std::string describe(const InverseSequence& s, CellRef c);

}  // namespace cellstruct
