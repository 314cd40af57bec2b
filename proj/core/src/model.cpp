#include "trades/model.hpp"

#include <algorithm>
#include <sstream>

namespace trades {

namespace {

void push_subsets(const Block& b, int t, Block& cur, size_t start,
                  std::vector<Block>& out) {
  if (static_cast<int>(cur.size()) == t) {
    out.push_back(cur);
    return;
  }
  for (size_t i = start; i < b.size(); ++i) {
    cur.push_back(b[i]);
    push_subsets(b, t, cur, i + 1, out);
    cur.pop_back();
  }
}

std::vector<Block> t_subsets(const Block& b, int t) {
  std::vector<Block> out;
  Block cur;
  push_subsets(b, t, cur, 0, out);
  return out;
}

std::string elems_to_string(const std::vector<Element>& xs) {
  std::ostringstream os;
  os << "{";
  for (size_t i = 0; i < xs.size(); ++i) {
    if (i) os << ",";
    os << xs[i];
  }
  os << "}";
  return os.str();
}

}  // namespace

std::string block_to_string(const Block& b) { return elems_to_string(b); }

std::string Verdict::summary() const {
  if (violations.empty()) return "valid";
  std::ostringstream os;
  os << "invalid (" << violations.size() << " violation"
     << (violations.size() == 1 ? "" : "s") << ")";
  for (const auto& v : violations) {
    os << "\n  [" << v.rule << "] " << v.witness;
  }
  return os.str();
}

std::vector<long long> PairCoverage::totals(int mu) const {
  std::vector<long long> sums(mu, 0);
  for (const auto& [subset, per] : counts) {
    for (int i = 0; i < mu && i < static_cast<int>(per.size()); ++i)
      sums[i] += per[i];
  }
  return sums;
}

Block Permutation::apply(const Block& b) const {
  Block out;
  out.reserve(b.size());
  for (Element x : b) out.push_back(apply(x));
  std::sort(out.begin(), out.end());
  return out;
}

Permutation Permutation::inverse() const {
  Permutation inv;
  for (const auto& [from, to] : mapping) inv.mapping[to] = from;
  return inv;
}

bool Permutation::is_identity() const {
  for (const auto& [from, to] : mapping)
    if (from != to) return false;
  return true;
}

void Permutation::validate() const {
  std::set<Element> domain, image;
  for (const auto& [from, to] : mapping) {
    domain.insert(from);
    if (!image.insert(to).second)
      throw TradeError(ErrorCode::NotABijection,
                       "duplicate image " + std::to_string(to));
  }
  if (domain != image)
    throw TradeError(ErrorCode::NotABijection,
                     "support is not mapped onto itself");
}

Block make_block(std::initializer_list<Element> xs) {
  Block b(xs);
  std::sort(b.begin(), b.end());
  return b;
}

Collection sorted_blocks(const Collection& c) {
  Collection out = c;
  for (auto& b : out) std::sort(b.begin(), b.end());
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Element> collection_foundation(const Collection& c) {
  std::set<Element> s;
  for (const auto& b : c) s.insert(b.begin(), b.end());
  return {s.begin(), s.end()};
}

std::vector<Element> foundation(const Trade& trade) {
  if (trade.collections.empty())
    throw TradeError(ErrorCode::FoundationMismatch, "trade has no collections");
  auto base = collection_foundation(trade.collections[0]);
  for (size_t i = 1; i < trade.collections.size(); ++i) {
    if (collection_foundation(trade.collections[i]) != base)
      throw TradeError(
          ErrorCode::FoundationMismatch,
          "collection " + std::to_string(i + 1) + " covers a different set");
  }
  return base;
}

PairCoverage pair_coverage(const Trade& trade) {
  PairCoverage cov;
  cov.t = trade.t;
  const int mu = static_cast<int>(trade.collections.size());
  for (int i = 0; i < mu; ++i) {
    for (const auto& b : trade.collections[i]) {
      for (auto& s : t_subsets(b, trade.t)) {
        auto it = cov.counts.find(s);
        if (it == cov.counts.end())
          it = cov.counts.emplace(std::move(s), std::vector<int>(mu, 0)).first;
        it->second[i]++;
      }
    }
  }
  return cov;
}

Verdict verify_trade(const Trade& trade) {
  Verdict v;
  const int mu = static_cast<int>(trade.collections.size());
  if (trade.mu != mu)
    v.violations.push_back(
        {"parameter", "declared mu=" + std::to_string(trade.mu) + " but " +
                          std::to_string(mu) + " collections present",
         {}});
  if (mu < 2) {
    v.violations.push_back({"degenerate",
                            "a trade needs at least 2 collections, got " +
                                std::to_string(mu),
                            {}});
    return v;
  }
  if (trade.t >= trade.k || trade.t < 1)
    v.violations.push_back(
        {"parameter", "requires 1 <= t < k, got t=" + std::to_string(trade.t) +
                          " k=" + std::to_string(trade.k),
         {}});
  const size_t m = trade.collections[0].size();
  if (m == 0) {
    v.violations.push_back({"degenerate", "volume 0", {}});
    return v;
  }
  for (int i = 0; i < mu; ++i) {
    if (trade.collections[i].size() != m)
      v.violations.push_back(
          {"volume-mismatch",
           "collection " + std::to_string(i + 1) + " has volume " +
               std::to_string(trade.collections[i].size()) + ", expected " +
               std::to_string(m),
           {}});
    for (const auto& b : trade.collections[i]) {
      if (static_cast<int>(b.size()) != trade.k ||
          !std::is_sorted(b.begin(), b.end()) ||
          std::adjacent_find(b.begin(), b.end()) != b.end())
        v.violations.push_back({"block-shape",
                                "collection " + std::to_string(i + 1) +
                                    " block " + block_to_string(b) +
                                    " is not a sorted " +
                                    std::to_string(trade.k) + "-subset",
                                {b}});
    }
  }
  if (!v.violations.empty()) return v;

  auto base = collection_foundation(trade.collections[0]);
  for (int i = 1; i < mu; ++i) {
    if (collection_foundation(trade.collections[i]) != base)
      v.violations.push_back({"foundation-mismatch",
                              "collection " + std::to_string(i + 1) +
                                  " covers a different element set",
                              {}});
  }

  auto cov = pair_coverage(trade);
  for (const auto& [subset, per] : cov.counts) {
    for (int i = 1; i < mu; ++i) {
      if (per[i] != per[0]) {
        v.violations.push_back(
            {"coverage-mismatch",
             block_to_string(subset) + " covered " + std::to_string(per[0]) +
                 " times in collection 1 but " + std::to_string(per[i]) +
                 " times in collection " + std::to_string(i + 1),
             {subset}});
        break;
      }
    }
  }

  // D1: the mu collections are pairwise block-disjoint.
  for (int i = 0; i < mu; ++i) {
    std::set<Block> seen;
    for (const auto& b : trade.collections[i]) {
      Block s = b;
      std::sort(s.begin(), s.end());
      seen.insert(s);
    }
    for (int j = i + 1; j < mu; ++j) {
      for (const auto& b : trade.collections[j]) {
        Block s = b;
        std::sort(s.begin(), s.end());
        if (seen.count(s)) {
          v.violations.push_back({"block-shared",
                                  block_to_string(s) + " occurs in both "
                                      "collection " + std::to_string(i + 1) +
                                      " and collection " + std::to_string(j + 1),
                                  {s}});
        }
      }
    }
  }
  return v;
}

Verdict verify_steiner(const Trade& trade) {
  Verdict v;
  auto cov = pair_coverage(trade);
  for (const auto& [subset, per] : cov.counts) {
    for (size_t i = 0; i < per.size(); ++i) {
      if (per[i] > 1) {
        // Name two blocks containing the repeated subset.
        std::vector<Block> offenders;
        for (const auto& b : trade.collections[i]) {
          if (std::includes(b.begin(), b.end(), subset.begin(), subset.end()))
            offenders.push_back(b);
          if (offenders.size() == 2) break;
        }
        v.violations.push_back(
            {"steiner-repeat",
             block_to_string(subset) + " occurs " + std::to_string(per[i]) +
                 " times in collection " + std::to_string(i + 1),
             offenders});
      }
    }
  }
  return v;
}

Verdict verify_homogeneous(const Trade& trade, int d) {
  Verdict v;
  std::set<Element> found;
  for (const auto& c : trade.collections)
    for (const auto& b : c) found.insert(b.begin(), b.end());
  for (size_t i = 0; i < trade.collections.size(); ++i) {
    std::map<Element, int> deg;
    for (const auto& b : trade.collections[i])
      for (Element x : b) deg[x]++;
    for (Element x : found) {
      int r = deg.count(x) ? deg[x] : 0;
      if (r != d)
        v.violations.push_back(
            {"replication", "element " + std::to_string(x) + " occurs in " +
                                std::to_string(r) + " blocks of collection " +
                                std::to_string(i + 1) + ", expected " +
                                std::to_string(d),
             {}});
    }
  }
  return v;
}

std::vector<int> replication(const Trade& trade, Element x) {
  bool known = false;
  std::vector<int> counts;
  for (const auto& c : trade.collections) {
    int r = 0;
    for (const auto& b : c)
      if (std::binary_search(b.begin(), b.end(), x)) {
        ++r;
        known = true;
      }
    counts.push_back(r);
  }
  if (!known)
    throw TradeError(ErrorCode::UnknownElement,
                     "element " + std::to_string(x) + " not in foundation");
  return counts;
}

Trade derived_trade(const Trade& trade, Element x) {
  replication(trade, x);  // UnknownElement check
  Trade out;
  out.mu = trade.mu;
  out.k = trade.k - 1;
  out.t = trade.t - 1;
  for (const auto& c : trade.collections) {
    Collection rc;
    for (const auto& b : c) {
      if (!std::binary_search(b.begin(), b.end(), x)) continue;
      Block nb;
      for (Element y : b)
        if (y != x) nb.push_back(y);
      rc.push_back(nb);
    }
    out.collections.push_back(std::move(rc));
  }
  return out;
}

Trade relabel(const Trade& trade, const Permutation& pi) {
  pi.validate();
  Trade out = trade;
  for (auto& c : out.collections)
    for (auto& b : c) b = pi.apply(b);
  return out;
}

Trade disjoint_union(const Trade& a, const Trade& b) {
  if (a.mu != b.mu || a.k != b.k || a.t != b.t)
    throw TradeError(ErrorCode::ParameterMismatch,
                     "disjoint_union requires equal (mu,k,t)");
  Element shift = 0;
  for (const auto& c : a.collections)
    for (const auto& blk : c)
      for (Element x : blk) shift = std::max(shift, x);
  shift += 1;

  Trade out = a;
  for (int i = 0; i < a.mu; ++i) {
    for (const auto& blk : b.collections[i]) {
      Block nb = blk;
      for (auto& x : nb) x += shift;
      out.collections[i].push_back(nb);
    }
  }
  return out;
}

Verdict necessary_conditions(int d, long long v) {
  Verdict out;
  if ((static_cast<long long>(d) * v) % 3 != 0)
    out.violations.push_back(
        {"volume-integrality", "d*v = " + std::to_string(d * v) +
                                   " is not divisible by 3, so the volume d*v/3 "
                                   "is not an integer",
         {}});
  if (v < 2LL * d + 1)
    out.violations.push_back(
        {"foundation-bound", "v = " + std::to_string(v) + " < 2d+1 = " +
                                 std::to_string(2 * d + 1),
         {}});
  return out;
}

bool is_subtrade(const Trade& sub, const Trade& full) {
  if (sub.mu != full.mu || sub.k != full.k || sub.t != full.t)
    throw TradeError(ErrorCode::ParameterMismatch,
                     "is_subtrade requires equal (mu,k,t)");
  for (int i = 0; i < sub.mu; ++i) {
    auto s = sorted_blocks(sub.collections[i]);
    auto f = sorted_blocks(full.collections[i]);
    if (!std::includes(f.begin(), f.end(), s.begin(), s.end())) return false;
  }
  return true;
}

bool same_trade(const Trade& a, const Trade& b) {
  if (a.mu != b.mu || a.k != b.k || a.t != b.t) return false;
  if (a.collections.size() != b.collections.size()) return false;
  for (size_t i = 0; i < a.collections.size(); ++i)
    if (sorted_blocks(a.collections[i]) != sorted_blocks(b.collections[i]))
      return false;
  return true;
}

}  // namespace trades
