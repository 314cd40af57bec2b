#include "trades/search.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

namespace trades {

namespace {

// ---- canonical labeling ----------------------------------------------------

struct CompactTrade {
  int mu = 0, k = 0, t = 0, v = 0;
  std::vector<Element> labels;  // compact -> original
  std::vector<std::map<Block, int>> blockCount;
};

CompactTrade compact(const Trade& trade) {
  CompactTrade ct;
  ct.mu = static_cast<int>(trade.collections.size());
  ct.k = trade.k;
  ct.t = trade.t;
  std::set<Element> found;
  for (const auto& c : trade.collections)
    for (const auto& b : c) found.insert(b.begin(), b.end());
  ct.labels.assign(found.begin(), found.end());
  ct.v = static_cast<int>(ct.labels.size());
  std::map<Element, int> toCompact;
  for (int i = 0; i < ct.v; ++i) toCompact[ct.labels[i]] = i;
  for (const auto& c : trade.collections) {
    std::map<Block, int> counts;
    for (const auto& b : c) {
      Block nb;
      nb.reserve(b.size());
      for (Element x : b) nb.push_back(toCompact[x]);
      std::sort(nb.begin(), nb.end());
      counts[nb]++;
    }
    ct.blockCount.push_back(std::move(counts));
  }
  return ct;
}

std::vector<std::vector<int>> permutations_of(int n) {
  std::vector<int> idx(n);
  for (int i = 0; i < n; ++i) idx[i] = i;
  std::vector<std::vector<int>> out;
  do {
    out.push_back(idx);
  } while (std::next_permutation(idx.begin(), idx.end()));
  return out;
}

// Lex-min of the colex-ordered subset membership sequence over all label
// assignments; prefix lengths per level are fixed, so prefixes compare
// positionally against the best complete sequence.
struct Minimizer {
  const CompactTrade& ct;
  std::vector<int> order;  // collection order under trial
  std::vector<int> sigma;  // new label -> compact element
  std::vector<char> used;
  std::vector<std::uint8_t> cur;
  std::vector<std::uint8_t>& best;
  bool& haveBest;
  std::vector<int>& bestSigma;
  std::vector<int>& bestOrder;

  Minimizer(const CompactTrade& ct_, std::vector<int> order_,
            std::vector<std::uint8_t>& best_, bool& haveBest_,
            std::vector<int>& bestSigma_, std::vector<int>& bestOrder_)
      : ct(ct_), order(std::move(order_)), best(best_), haveBest(haveBest_),
        bestSigma(bestSigma_), bestOrder(bestOrder_) {
    sigma.assign(ct.v, -1);
    used.assign(ct.v, 0);
  }

  int count_of(int coll, Block b) const {
    std::sort(b.begin(), b.end());
    auto& m = ct.blockCount[order[coll]];
    auto it = m.find(b);
    return it == m.end() ? 0 : it->second;
  }

  // Counts for every k-subset of {0..j} that contains label j, colex order.
  void append_segment(int j) {
    if (ct.k == 2) {
      for (int a = 0; a < j; ++a)
        for (int c = 0; c < ct.mu; ++c)
          cur.push_back(static_cast<std::uint8_t>(
              count_of(c, {sigma[a], sigma[j]})));
    } else {
      for (int b = 1; b < j; ++b)
        for (int a = 0; a < b; ++a)
          for (int c = 0; c < ct.mu; ++c)
            cur.push_back(static_cast<std::uint8_t>(
                count_of(c, {sigma[a], sigma[b], sigma[j]})));
    }
  }

  bool prefix_beaten() const {
    // true when cur > best on the shared prefix
    return std::lexicographical_compare(best.begin(),
                                        best.begin() + cur.size(),
                                        cur.begin(), cur.end());
  }

  void rec(int j) {
    if (j == ct.v) {
      if (!haveBest || cur < best) {
        best = cur;
        haveBest = true;
        bestSigma = sigma;
        bestOrder = order;
      }
      return;
    }
    const size_t offset = cur.size();
    for (int e = 0; e < ct.v; ++e) {
      if (used[e]) continue;
      used[e] = 1;
      sigma[j] = e;
      append_segment(j);
      if (!haveBest || !prefix_beaten()) rec(j + 1);
      cur.resize(offset);
      sigma[j] = -1;
      used[e] = 0;
    }
  }
};

std::uint64_t mix(std::uint64_t h, std::uint64_t x) {
  h ^= x + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  h *= 0xff51afd7ed558ccdULL;
  return h ^ (h >> 33);
}

// Iterated color refinement; collection-permutation invariance is obtained
// by folding per-collection summaries as sorted multisets.
CanonicalForm heuristic_form(const CompactTrade& ct, bool allowPerm) {
  std::vector<std::uint64_t> color(ct.v, 1);
  std::vector<std::vector<Collection>> blocksOf(ct.v);
  for (int i = 0; i < ct.mu; ++i) {
    std::vector<Collection> tmp(ct.v);
    for (const auto& [b, cnt] : ct.blockCount[i])
      for (Element x : b)
        for (int rep = 0; rep < cnt; ++rep) tmp[x].push_back(b);
    for (int x = 0; x < ct.v; ++x) blocksOf[x].push_back(tmp[x]);
  }
  for (int round = 0; round < ct.v; ++round) {
    std::vector<std::uint64_t> next(ct.v);
    for (int x = 0; x < ct.v; ++x) {
      std::vector<std::uint64_t> perColl;
      for (int i = 0; i < ct.mu; ++i) {
        std::vector<std::uint64_t> sigs;
        for (const auto& b : blocksOf[x][i]) {
          std::vector<std::uint64_t> cs;
          for (Element y : b)
            if (y != x) cs.push_back(color[y]);
          std::sort(cs.begin(), cs.end());
          std::uint64_t h = 7;
          for (auto c : cs) h = mix(h, c);
          sigs.push_back(h);
        }
        std::sort(sigs.begin(), sigs.end());
        std::uint64_t h = 13;
        for (auto s : sigs) h = mix(h, s);
        perColl.push_back(h);
      }
      if (allowPerm) std::sort(perColl.begin(), perColl.end());
      std::uint64_t h = mix(17, color[x]);
      for (auto p : perColl) h = mix(h, p);
      next[x] = h;
    }
    if (next == color) break;
    color = next;
  }
  std::sort(color.begin(), color.end());
  CanonicalForm form;
  form.exact = false;
  form.mu = ct.mu;
  form.k = ct.k;
  form.t = ct.t;
  form.points = ct.v;
  std::uint64_t h = 31;
  for (auto c : color) h = mix(h, c);
  form.code = color;
  form.code.push_back(h);
  return form;
}

}  // namespace

CanonicalForm canonical_form(const Trade& trade, bool allow_collection_permutation,
                             Trade* canonical_image) {
  CompactTrade ct = compact(trade);
  if (ct.k != 2 && ct.k != 3)
    throw TradeError(ErrorCode::ParameterMismatch,
                     "canonical_form supports k in {2,3}");
  if (ct.v > kExactCanonicalCap) {
    if (canonical_image)
      throw TradeError(ErrorCode::FoundationTooLarge,
                       "exact canonicalization capped at " +
                           std::to_string(kExactCanonicalCap) + " elements");
    return heuristic_form(ct, allow_collection_permutation);
  }

  std::vector<std::uint8_t> best;
  bool haveBest = false;
  std::vector<int> bestSigma, bestOrder;
  auto orders = allow_collection_permutation
                    ? permutations_of(ct.mu)
                    : std::vector<std::vector<int>>{permutations_of(ct.mu)[0]};
  for (auto& order : orders) {
    Minimizer mz(ct, order, best, haveBest, bestSigma, bestOrder);
    mz.rec(0);
  }

  CanonicalForm form;
  form.exact = true;
  form.mu = ct.mu;
  form.k = ct.k;
  form.t = ct.t;
  form.points = ct.v;
  form.code.assign(best.begin(), best.end());

  if (canonical_image) {
    // bestSigma maps new label -> compact element; invert it.
    std::vector<int> newLabel(ct.v);
    for (int j = 0; j < ct.v; ++j) newLabel[bestSigma[j]] = j;
    Trade img;
    img.mu = ct.mu;
    img.k = ct.k;
    img.t = ct.t;
    for (int i = 0; i < ct.mu; ++i) {
      Collection c;
      for (const auto& [b, cnt] : ct.blockCount[bestOrder[i]]) {
        Block nb;
        for (Element x : b) nb.push_back(newLabel[x]);
        std::sort(nb.begin(), nb.end());
        for (int rep = 0; rep < cnt; ++rep) c.push_back(nb);
      }
      std::sort(c.begin(), c.end());
      img.collections.push_back(std::move(c));
    }
    *canonical_image = img;
  }
  return form;
}

// ---- exhaustive enumeration ------------------------------------------------

namespace {

void subsets_rec(const Block& b, int t, Block& cur, size_t start,
                 std::vector<Block>& out) {
  if (static_cast<int>(cur.size()) == t) {
    out.push_back(cur);
    return;
  }
  for (size_t i = start; i < b.size(); ++i) {
    cur.push_back(b[i]);
    subsets_rec(b, t, cur, i + 1, out);
    cur.pop_back();
  }
}

std::vector<Block> subsets_of(const Block& b, int t) {
  std::vector<Block> out;
  Block cur;
  subsets_rec(b, t, cur, 0, out);
  return out;
}

struct Enumerator {
  SearchSpec spec;
  int maxF;
  unsigned long long nodes = 0;
  bool budgetHit = false;
  std::vector<Trade> found;

  Collection t1;
  std::map<Block, int> coverage;  // t-subsets of T1, with multiplicity
  std::vector<int> degree;        // element degrees in T1
  int usedLabels = 0;

  explicit Enumerator(const SearchSpec& s) : spec(s) {
    maxF = spec.max_foundation.value_or(spec.k * spec.volume);
    degree.assign(maxF, 0);
  }

  bool tick() {
    if (++nodes >= spec.budget) budgetHit = true;
    return !budgetHit;
  }

  // Candidate next blocks for T1: sorted, strictly/weakly above prev, old
  // labels plus a consecutive run of new ones.
  std::vector<Block> t1_candidates(const Block& prev) {
    std::vector<Block> cands;
    const int newMax = std::min(maxF - usedLabels, spec.k);
    for (int fresh = 0; fresh <= newMax; ++fresh) {
      const int oldCount = spec.k - fresh;
      if (oldCount > usedLabels) continue;
      std::vector<int> pick(oldCount);
      std::function<void(int, int)> rec = [&](int pos, int from) {
        if (pos == oldCount) {
          Block b(pick.begin(), pick.end());
          for (int n = 0; n < fresh; ++n) b.push_back(usedLabels + n);
          bool ok = spec.steiner ? b > prev : b >= prev;
          if (ok) cands.push_back(std::move(b));
          return;
        }
        for (int e = from; e < usedLabels; ++e) {
          pick[pos] = e;
          rec(pos + 1, e + 1);
        }
      };
      rec(0, 0);
    }
    std::sort(cands.begin(), cands.end());
    return cands;
  }

  bool block_ok_for_t1(const Block& b) {
    if (spec.homogeneous_d) {
      for (Element x : b)
        if (x < usedLabels && degree[x] >= *spec.homogeneous_d) return false;
      // fixed foundation size when a homogeneity degree is requested
      int newLabels = 0;
      for (Element x : b)
        if (x >= usedLabels) ++newLabels;
      if ((usedLabels + newLabels) * *spec.homogeneous_d >
          spec.k * spec.volume)
        return false;
    }
    if (spec.steiner) {
      for (const auto& s : subsets_of(b, spec.t))
        if (coverage.count(s)) return false;
    }
    return true;
  }

  void apply_t1(const Block& b, int& freshOut) {
    freshOut = 0;
    for (Element x : b) {
      if (x >= usedLabels) ++freshOut;
      degree[x]++;
    }
    usedLabels += freshOut;
    for (const auto& s : subsets_of(b, spec.t)) coverage[s]++;
    t1.push_back(b);
  }

  void undo_t1(const Block& b, int fresh) {
    t1.pop_back();
    for (const auto& s : subsets_of(b, spec.t)) {
      auto it = coverage.find(s);
      if (--it->second == 0) coverage.erase(it);
    }
    usedLabels -= fresh;
    for (Element x : b) degree[x]--;
  }

  void enumerate_t1(const Block& prev) {
    if (budgetHit) return;
    if (static_cast<int>(t1.size()) == spec.volume) {
      finish_t1();
      return;
    }
    for (const auto& b : t1_candidates(prev)) {
      if (!block_ok_for_t1(b)) continue;
      if (!tick()) return;
      int fresh = 0;
      apply_t1(b, fresh);
      enumerate_t1(b);
      undo_t1(b, fresh);
      if (budgetHit) return;
    }
  }

  void finish_t1() {
    if (spec.homogeneous_d) {
      for (int x = 0; x < usedLabels; ++x)
        if (degree[x] != *spec.homogeneous_d) return;
    }
    if (spec.steiner)
      complete_steiner();
    else
      complete_general();
  }

  // ---- Steiner completion: exact cover of the T1 subset family ----------

  std::vector<Block> universe;
  std::vector<Collection> others;  // collections 2..mu under construction
  std::set<Block> usedBlocks;

  void complete_steiner() {
    universe.clear();
    // all k-subsets of the foundation whose t-subsets are all covered once
    std::vector<Element> f;
    for (int x = 0; x < usedLabels; ++x) f.push_back(x);
    Block cur;
    std::function<void(size_t)> rec = [&](size_t from) {
      if (static_cast<int>(cur.size()) == spec.k) {
        for (const auto& s : subsets_of(cur, spec.t))
          if (!coverage.count(s)) return;
        universe.push_back(cur);
        return;
      }
      for (size_t i = from; i < f.size(); ++i) {
        cur.push_back(f[i]);
        rec(i + 1);
        cur.pop_back();
      }
    };
    rec(0);

    usedBlocks.clear();
    for (const auto& b : t1) usedBlocks.insert(b);
    others.clear();
    cover_collection();
  }

  void cover_collection() {
    if (budgetHit) return;
    // Current collection under construction is others.back() once started;
    // we drive a fresh exact cover per collection.
    std::map<Block, int> remaining = coverage;
    Collection current;
    cover_rec(remaining, current);
  }

  void cover_rec(std::map<Block, int>& remaining, Collection& current) {
    if (budgetHit) return;
    if (remaining.empty()) {
      others.push_back(current);
      if (static_cast<int>(others.size()) == spec.mu - 1) {
        record();
      } else {
        for (const auto& b : current) usedBlocks.insert(b);
        cover_collection();
        for (const auto& b : current) usedBlocks.erase(b);
      }
      others.pop_back();
      return;
    }
    // branch on the t-subset with fewest available covering blocks
    const Block* bestSubset = nullptr;
    std::vector<Block> bestCands;
    for (const auto& [s, cnt] : remaining) {
      (void)cnt;
      std::vector<Block> cands;
      for (const auto& b : universe) {
        if (usedBlocks.count(b)) continue;
        if (!std::includes(b.begin(), b.end(), s.begin(), s.end())) continue;
        bool ok = true;
        for (const auto& sub : subsets_of(b, spec.t))
          if (!remaining.count(sub)) {
            ok = false;
            break;
          }
        if (ok) cands.push_back(b);
      }
      if (!bestSubset || cands.size() < bestCands.size()) {
        bestSubset = &s;
        bestCands = std::move(cands);
        if (bestCands.empty()) break;
      }
    }
    if (!bestSubset) return;
    for (const auto& b : bestCands) {
      if (!tick()) return;
      for (const auto& s : subsets_of(b, spec.t)) {
        auto it = remaining.find(s);
        if (--it->second == 0) remaining.erase(it);
      }
      usedBlocks.insert(b);
      current.push_back(b);
      cover_rec(remaining, current);
      current.pop_back();
      usedBlocks.erase(b);
      for (const auto& s : subsets_of(b, spec.t)) remaining[s]++;
      if (budgetHit) return;
    }
  }

  // ---- general (multiset) completion, ascending blocks ------------------

  void complete_general() {
    universe.clear();
    std::vector<Element> f;
    for (int x = 0; x < usedLabels; ++x) f.push_back(x);
    Block cur;
    std::function<void(size_t)> rec = [&](size_t from) {
      if (static_cast<int>(cur.size()) == spec.k) {
        universe.push_back(cur);
        return;
      }
      for (size_t i = from; i < f.size(); ++i) {
        cur.push_back(f[i]);
        rec(i + 1);
        cur.pop_back();
      }
    };
    rec(0);
    usedBlocks.clear();
    for (const auto& b : t1) usedBlocks.insert(b);
    others.clear();
    Collection current;
    std::map<Block, int> progress;
    general_rec(current, progress, 0);
  }

  void general_rec(Collection& current, std::map<Block, int>& progress,
                   size_t fromIdx) {
    if (budgetHit) return;
    if (static_cast<int>(current.size()) == spec.volume) {
      if (progress != coverage) return;
      others.push_back(current);
      if (static_cast<int>(others.size()) == spec.mu - 1) {
        record();
      } else {
        for (const auto& b : current) usedBlocks.insert(b);
        Collection next;
        std::map<Block, int> p2;
        general_rec(next, p2, 0);
        for (const auto& b : current) usedBlocks.erase(b);
      }
      others.pop_back();
      return;
    }
    for (size_t i = fromIdx; i < universe.size(); ++i) {
      const Block& b = universe[i];
      if (usedBlocks.count(b)) continue;
      bool ok = true;
      for (const auto& s : subsets_of(b, spec.t)) {
        auto it = coverage.find(s);
        if (it == coverage.end() || progress[s] + 1 > it->second) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      if (!tick()) return;
      for (const auto& s : subsets_of(b, spec.t)) progress[s]++;
      current.push_back(b);
      general_rec(current, progress, i);  // duplicates allowed
      current.pop_back();
      for (const auto& s : subsets_of(b, spec.t)) {
        auto it = progress.find(s);
        if (--it->second == 0) progress.erase(it);
      }
      if (budgetHit) return;
    }
  }

  void record() {
    Trade trade;
    trade.mu = spec.mu;
    trade.k = spec.k;
    trade.t = spec.t;
    trade.collections.push_back(t1);
    for (const auto& c : others) trade.collections.push_back(c);
    found.push_back(std::move(trade));
  }
};

}  // namespace

SearchResult exhaustive_search(const SearchSpec& spec) {
  if (spec.mu < 2 || spec.t >= spec.k || spec.volume < 1)
    throw TradeError(ErrorCode::ParameterMismatch,
                     "search spec requires mu >= 2, t < k, volume >= 1");
  Enumerator e(spec);
  // first block fixed to {0..k-1} by first-use labeling
  e.enumerate_t1(Block{});
  SearchResult result;
  result.nodes = e.nodes;
  result.exhausted = !e.budgetHit;

  if (!spec.reduce_isomorphs) {
    result.classes = std::move(e.found);
    return result;
  }
  std::map<CanonicalForm, Trade> classes;
  for (const auto& t : e.found) {
    Trade img;
    CanonicalForm form = canonical_form(t, true, &img);
    classes.emplace(std::move(form), std::move(img));
  }
  for (auto& [form, img] : classes) result.classes.push_back(img);
  return result;
}

// ---- homogeneous subtrade discovery ----------------------------------------

namespace {

struct SubtradeSearch {
  const Trade& trade;
  int target, d, mu, pieceFoundation;
  std::vector<std::vector<Element>> blockElems;  // flattened, per collection
  std::vector<std::vector<std::vector<int>>> blocksOf;  // [i][y] -> indices
  std::vector<Element> foundationList;
  std::map<Element, int> elemIndex;

  std::set<Element> F;
  Element minElement = 0;
  std::vector<std::set<int>> chosen;
  std::vector<std::map<Element, int>> cnt;
  std::optional<Trade> result;

  SubtradeSearch(const Trade& tr, int target_, int d_)
      : trade(tr), target(target_), d(d_),
        mu(static_cast<int>(tr.collections.size())) {
    foundationList = foundation(tr);
    for (size_t i = 0; i < foundationList.size(); ++i)
      elemIndex[foundationList[i]] = static_cast<int>(i);
    pieceFoundation = trade.k * target / d;
    blocksOf.assign(mu, {});
    for (int i = 0; i < mu; ++i) {
      blocksOf[i].assign(foundationList.size(), {});
      for (size_t bi = 0; bi < trade.collections[i].size(); ++bi)
        for (Element x : trade.collections[i][bi])
          blocksOf[i][elemIndex[x]].push_back(static_cast<int>(bi));
    }
    chosen.assign(mu, {});
    cnt.assign(mu, {});
  }

  bool run() {
    if (trade.k * target % d != 0) return false;
    if (pieceFoundation > static_cast<int>(foundationList.size())) return false;
    for (Element x : foundationList) {
      minElement = x;
      F = {x};
      for (auto& c : chosen) c.clear();
      for (auto& c : cnt) c.clear();
      if (extend()) return true;
    }
    return false;
  }

  // next unfinished (element, collection), smallest element first
  bool next_gap(Element& y, int& coll) const {
    for (Element e : F)
      for (int i = 0; i < mu; ++i) {
        auto it = cnt[i].find(e);
        int c = it == cnt[i].end() ? 0 : it->second;
        if (c < d) {
          y = e;
          coll = i;
          return true;
        }
      }
    return false;
  }

  bool extend() {
    Element y;
    int coll;
    if (!next_gap(y, coll)) {
      if (static_cast<int>(F.size()) != pieceFoundation) return false;
      Trade piece;
      piece.mu = mu;
      piece.k = trade.k;
      piece.t = trade.t;
      for (int i = 0; i < mu; ++i) {
        Collection c;
        for (int bi : chosen[i]) c.push_back(trade.collections[i][bi]);
        std::sort(c.begin(), c.end());
        piece.collections.push_back(std::move(c));
      }
      if (static_cast<int>(piece.collections[0].size()) != target) return false;
      if (!verify_trade(piece).valid()) return false;
      result = piece;
      return true;
    }
    const int have = cnt[coll].count(y) ? cnt[coll][y] : 0;
    const int need = d - have;
    std::vector<int> cands;
    for (int bi : blocksOf[coll][elemIndex[y]]) {
      if (chosen[coll].count(bi)) continue;
      bool ok = true;
      int fresh = 0;
      for (Element z : trade.collections[coll][bi]) {
        if (z < minElement) ok = false;
        if (!F.count(z)) ++fresh;
        auto it = cnt[coll].find(z);
        if (it != cnt[coll].end() && it->second >= d) ok = false;
      }
      if (ok && static_cast<int>(F.size()) + fresh <= pieceFoundation + 2)
        cands.push_back(bi);
    }
    if (static_cast<int>(cands.size()) < need) return false;
    std::vector<int> combo(need);
    return combos(cands, combo, 0, 0, y, coll);
  }

  bool combos(const std::vector<int>& cands, std::vector<int>& combo, int pos,
              int from, Element y, int coll) {
    if (pos == static_cast<int>(combo.size())) return apply_combo(combo, coll);
    for (int i = from; i <= static_cast<int>(cands.size()) - (static_cast<int>(combo.size()) - pos); ++i) {
      combo[pos] = cands[i];
      if (combos(cands, combo, pos + 1, i + 1, y, coll)) return true;
    }
    return false;
  }

  bool apply_combo(const std::vector<int>& combo, int coll) {
    std::vector<Element> added;
    bool ok = true;
    for (int bi : combo) {
      chosen[coll].insert(bi);
      for (Element z : trade.collections[coll][bi]) {
        if (++cnt[coll][z] > d) ok = false;
        if (!F.count(z)) {
          F.insert(z);
          added.push_back(z);
        }
      }
    }
    if (ok && static_cast<int>(F.size()) <= pieceFoundation &&
        static_cast<int>(chosen[coll].size()) <= target) {
      if (extend()) return true;
    }
    for (int bi : combo) {
      chosen[coll].erase(bi);
      for (Element z : trade.collections[coll][bi]) {
        auto it = cnt[coll].find(z);
        if (--it->second == 0) cnt[coll].erase(it);
      }
    }
    for (Element z : added) F.erase(z);
    return false;
  }
};

}  // namespace

std::optional<Trade> find_homogeneous_subtrade(const Trade& trade,
                                               int target_volume, int d) {
  if (target_volume < 1 || d < 1 ||
      target_volume > trade.volume())
    return std::nullopt;
  SubtradeSearch s(trade, target_volume, d);
  if (s.run()) return s.result;
  return std::nullopt;
}

}  // namespace trades
