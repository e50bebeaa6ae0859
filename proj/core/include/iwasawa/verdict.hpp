#pragma once

#include <string>

namespace iwasawa {

enum class Verdict { kHolds, kFails, kUnknown };

std::string to_string(Verdict v);

/// Conjunction that never upgrades UNKNOWN: FAILS dominates, then UNKNOWN.
inline Verdict combine(Verdict a, Verdict b) {
  if (a == Verdict::kFails || b == Verdict::kFails) return Verdict::kFails;
  if (a == Verdict::kUnknown || b == Verdict::kUnknown) return Verdict::kUnknown;
  return Verdict::kHolds;
}

}  // namespace iwasawa
