#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "trades/model.hpp"

// Explicit combinatorial objects shipped with the library, plus desk-scale
// searchers for the auxiliary designs they are assembled from (disjoint
// Steiner triple systems, triple packings).  All constant data is embedded
// in its original compact one-based notation and parsed on first use.

namespace trades::catalog {

inline constexpr std::uint64_t kDefaultSeed = 0x5eed1e55ULL;
inline constexpr unsigned long long kDefaultTries = 2'000'000ULL;

struct TripleSystem {
  int points = 0;
  Collection triples;
};

// Every pair of distinct points in exactly one triple.
Verdict verify_triple_system(const TripleSystem& ts);
TripleSystem relabel(const TripleSystem& ts, const Permutation& pi);

// The 3-way 3-homogeneous (8,3,2) Steiner trade of volume 8.
Trade base_8_3_2();

// The two non-isomorphic 3-way (6,2,1) Steiner trades of volume 3, as
// printed: the first completes to a non-bipartite 3-regular union graph,
// the second to a bipartite one.
std::pair<Trade, Trade> pair_trades_volume3();

TripleSystem kts15_A();
TripleSystem kts15_B();
Collection kts15_B1();  // the distinguished parallel class (5 triples)
Collection kts15_B2();  // the remaining 30 triples

// 3-way 6-homogeneous Steiner trades on 14, 15 and 16 points.
Trade trade_14();
Trade trade_15();
Trade trade_16();

// The common 7-triple intersection removed in trade_14.
Collection trade_14_common();
// Block set of the Kirkman frame of type 4^4 behind trade_16.
Collection kirkman_frame_16();
std::vector<Block> kirkman_frame_groups();

// An STS(v) for admissible v: the affine plane of order 3 for v = 9,
// otherwise developed from a difference family found by backtracking.
// Throws NotAdmissible when v is not 1 or 3 mod 6 (or too small).
TripleSystem steiner_triple_system(int v);

// Three pairwise block-disjoint STS(v), packaged as a 3-way
// ((v-1)/2)-homogeneous (v,3,2) Steiner trade of volume v(v-1)/6.
// Throws NotAdmissible for v not 1,3 mod 6, v = 7 or v < 9; returns
// nullopt when the randomized search exhausts its try budget.
std::optional<Trade> three_disjoint_sts(int v, std::uint64_t seed = kDefaultSeed,
                                        unsigned long long tries = kDefaultTries);

// The perfect matching left uncovered by every collection below.
std::vector<Block> packing_leave_12();

// Three block-disjoint decompositions of K12 minus a fixed perfect
// matching into 20 triples each: a 3-way 5-homogeneous (12,3,2) Steiner
// trade of volume 20.  Ships as an embedded witness.
Trade three_disjoint_packings_12();

// Regenerates such a witness by randomized exact-cover search (the route
// that produced the embedded one).
std::optional<Trade> find_three_disjoint_packings(
    std::uint64_t seed = kDefaultSeed, unsigned long long tries = 200);

// Named objects for the CLI: triple systems are wrapped as mu=1 documents.
std::vector<std::string> names();
std::optional<Trade> emit(const std::string& name);

}  // namespace trades::catalog
