#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

// Block collections, mu-way trades and the verification predicates that
// everything else in the library is checked against.

namespace trades {

using Element = int;

// A block is a sorted k-subset of element labels.
using Block = std::vector<Element>;

// Presentation order is kept; identity is by content (see sorted_blocks()).
using Collection = std::vector<Block>;

enum class ErrorCode {
  FoundationMismatch,
  UnknownElement,
  NotABijection,
  ParameterMismatch,
  NotMultipleOf3,
  InvalidTriple,
  FoundationTooLarge,
  NotAdmissible,
  ParseError,
};

class TradeError : public std::runtime_error {
 public:
  TradeError(ErrorCode code, const std::string& msg)
      : std::runtime_error(msg), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// One failed rule with a human-readable witness and the offending
// blocks/subsets, if any.
struct Violation {
  std::string rule;
  std::string witness;
  std::vector<Block> blocks;
};

struct Verdict {
  std::vector<Violation> violations;
  bool valid() const { return violations.empty(); }
  explicit operator bool() const { return valid(); }
  std::string summary() const;
};

// mu block collections sharing parameters (mu, k, t).  Collections are
// stored in presentation order; all invariants are checked by the
// verify_* functions rather than enforced on construction.
struct Trade {
  int mu = 0;
  int k = 0;
  int t = 0;
  std::vector<Collection> collections;

  int volume() const {
    return collections.empty() ? 0 : static_cast<int>(collections[0].size());
  }
};

// Occurrence count of every materialized t-subset, per collection.
// Subsets that appear in no collection are not stored.
struct PairCoverage {
  int t = 0;
  std::map<Block, std::vector<int>> counts;

  // Per-collection totals; for a well-formed trade each equals m*C(k,t).
  std::vector<long long> totals(int mu) const;
};

// Finite-support bijection on element labels; unmapped labels are fixed.
struct Permutation {
  std::map<Element, Element> mapping;

  Element apply(Element x) const {
    auto it = mapping.find(x);
    return it == mapping.end() ? x : it->second;
  }
  Block apply(const Block& b) const;
  Permutation inverse() const;
  bool is_identity() const;

  // Throws NotABijection unless the support maps onto itself injectively.
  void validate() const;
};

Block make_block(std::initializer_list<Element> xs);
Collection sorted_blocks(const Collection& c);

// Union of elements over the blocks of collection 1; throws
// FoundationMismatch if any other collection covers a different set.
std::vector<Element> foundation(const Trade& trade);

// Foundation of a single collection (no cross-checks).
std::vector<Element> collection_foundation(const Collection& c);

PairCoverage pair_coverage(const Trade& trade);

// Valid iff volumes are equal, foundations are equal, t-subset coverage is
// identical across collections and no block is shared between collections.
// Degenerate inputs (mu < 2, volume 0) are rejected with a violation.
Verdict verify_trade(const Trade& trade);

// Every t-subset occurs at most once per collection.  Meaningful once
// verify_trade has passed, but callable on anything.
Verdict verify_steiner(const Trade& trade);

// Every foundation element occurs in exactly d blocks of every collection.
Verdict verify_homogeneous(const Trade& trade, int d);

// Blocks containing x, one count per collection.  Throws UnknownElement.
std::vector<int> replication(const Trade& trade, Element x);

// Restrict to blocks containing x and delete x: parameters drop to
// (k-1, t-1), volume becomes r_x.  Throws UnknownElement.
Trade derived_trade(const Trade& trade, Element x);

// Blockwise image under pi, blocks re-sorted.  Throws NotABijection.
Trade relabel(const Trade& trade, const Permutation& pi);

// b's elements are shifted past a's largest label, then collections are
// concatenated componentwise.  Throws ParameterMismatch.
Trade disjoint_union(const Trade& a, const Trade& b);

// 3 | d*v and v >= 2d+1.
Verdict necessary_conditions(int d, long long v);

// Componentwise sub-multiset test.  Throws ParameterMismatch.
bool is_subtrade(const Trade& sub, const Trade& full);

// Content identity under D4 canonical ordering (blocks and collections
// sorted), ignoring presentation order.
bool same_trade(const Trade& a, const Trade& b);

std::string block_to_string(const Block& b);

}  // namespace trades
