#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "trades/latin.hpp"  // kDefaultNodeBudget
#include "trades/model.hpp"

// Isomorph-free exhaustive enumeration of small mu-way Steiner trades,
// exact canonical labeling for small foundations, and homogeneous-subtrade
// discovery.

namespace trades {

// Exact canonicalization minimizes over all foundation relabelings (and,
// optionally, collection reorderings); it is capped at 12 elements.
inline constexpr int kExactCanonicalCap = 12;

struct CanonicalForm {
  bool exact = true;
  int mu = 0, k = 0, t = 0, points = 0;
  std::vector<std::uint64_t> code;

  friend bool operator==(const CanonicalForm&, const CanonicalForm&) = default;
  friend auto operator<=>(const CanonicalForm& a, const CanonicalForm& b) {
    if (auto c = a.mu <=> b.mu; c != 0) return c;
    if (auto c = a.k <=> b.k; c != 0) return c;
    if (auto c = a.t <=> b.t; c != 0) return c;
    if (auto c = a.points <=> b.points; c != 0) return c;
    if (auto c = a.exact <=> b.exact; c != 0) return c;
    return a.code <=> b.code;
  }
};

// Minimal image over relabelings of the foundation (exact for up to
// kExactCanonicalCap elements, an iterated-refinement fingerprint beyond,
// flagged non-exact).  When canonical_image is non-null and the exact path
// ran, the relabeled minimal trade is stored there.
CanonicalForm canonical_form(const Trade& trade,
                             bool allow_collection_permutation = true,
                             Trade* canonical_image = nullptr);

// Exact path only; throws FoundationTooLarge beyond the cap.
CanonicalForm exact_canonical_form(const Trade& trade,
                                   bool allow_collection_permutation = true,
                                   Trade* canonical_image = nullptr);

struct SearchSpec {
  int mu = 3;
  int k = 3;
  int t = 2;
  int volume = 1;
  bool steiner = true;
  std::optional<int> homogeneous_d;
  std::optional<int> max_foundation;  // defaults to k*volume
  unsigned long long budget = kDefaultNodeBudget;
  bool reduce_isomorphs = true;
};

struct SearchResult {
  std::vector<Trade> classes;  // canonical representatives, ascending
  bool exhausted = false;      // true certifies completeness
  unsigned long long nodes = 0;
};

// Orderly generation: lex-least first collection under first-use labeling,
// blocks ascending, remaining collections by exact coverage matching.
SearchResult exhaustive_search(const SearchSpec& spec);

// A subtrade of `trade` that is d-homogeneous on its own foundation with
// the given volume, or nullopt after exhausting the search space.
std::optional<Trade> find_homogeneous_subtrade(const Trade& trade,
                                               int target_volume, int d);

}  // namespace trades
