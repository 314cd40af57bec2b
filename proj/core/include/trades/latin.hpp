#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "trades/model.hpp"

// 3-way d-homogeneous Latin trades: three partial Latin squares on a
// shared m x m shape, cellwise-distinct entries, set-equal rows and
// columns, d entries per row/column and each symbol d times per square.

namespace trades {

struct LatinCell {
  int row = 0;
  int col = 0;
  std::array<int, 3> symbols{};  // one per square, pairwise distinct
};

struct LatinTriple {
  int order = 0;   // m
  int degree = 0;  // d
  std::vector<LatinCell> cells;  // sorted by (row, col)
};

Verdict verify_latin_trade(const LatinTriple& triple);

// Rows map to labels [0,m), columns to [m,2m), symbols to [2m,3m); each
// square contributes one collection.  Throws InvalidTriple if the input
// does not verify.  The result is a 3-way d-homogeneous (3m,3,2) Steiner
// trade of volume d*m.
Trade latin_to_steiner(const LatinTriple& triple);

// Block-diagonal composition of m/3 copies of the cyclic order-3 triple.
// Throws NotMultipleOf3.
LatinTriple construct_3_3_m(int m);

// The full m x m array with square c holding (i + j + c) mod m: a
// (3, m, m) Latin trade for every m >= 3.
LatinTriple full_square_triple(int m);

// Block-diagonal sum: degrees must match; orders and symbols concatenate.
LatinTriple diagonal_sum(const LatinTriple& a, const LatinTriple& b);

enum class SearchStatus {
  Found,      // witness returned
  Exhausted,  // full space searched, no witness (certifies nonexistence)
  Budget,     // node budget hit, inconclusive
};

struct LatinSearchResult {
  SearchStatus status = SearchStatus::Budget;
  std::optional<LatinTriple> triple;
  unsigned long long nodes = 0;
};

inline constexpr unsigned long long kDefaultNodeBudget = 100'000'000ULL;

// Exhaustive backtracking over d-regular shapes (rows nondecreasing as
// column bitmasks, first row forced to columns {0..d-1}) and symbol
// assignments (square 1's first row forced ascending, squares 2/3 ordered
// at the first cell).  Deterministic: same inputs give the same witness.
// jobs > 1 splits the shape stream across threads; results are merged in
// shape order, so the witness does not depend on scheduling.
LatinSearchResult search_latin_trade(int d, int m,
                                     unsigned long long budget = kDefaultNodeBudget,
                                     int jobs = 1);

}  // namespace trades
