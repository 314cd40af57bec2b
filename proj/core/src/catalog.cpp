#include "trades/catalog.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <mutex>
#include <random>
#include <set>
#include <sstream>

#include "trades/io.hpp"

namespace trades::catalog {

namespace {

// ---- embedded data, in the original compact one-based notation ----------

constexpr const char* kBase8[3] = {
    "123,147,158,248,267,357,368,456",
    "124,138,157,237,268,467,458,356",
    "127,135,148,246,238,367,457,568",
};

constexpr const char* kPairA[3] = {"12,34,56", "13,26,45", "14,25,36"};
constexpr const char* kPairB[3] = {"12,34,56", "13,26,45", "15,24,36"};

constexpr const char* kKts15A =
    "123,48c,5ae,6bd,79f,145,28a,3df,69e,7bc,167,29b,3ce,4af,58d,"
    "189,2cf,356,4be,7ad,1ab,2de,347,59c,68f,1cd,246,39a,5bf,78e,"
    "1ef,257,38b,49d,6ac";

constexpr const char* kKts15B1 = "12f,345,678,9ab,cde";
constexpr const char* kKts15B2 =
    "36f,15e,24a,7bc,89d,9cf,147,2be,38a,56d,7af,16c,258,3bd,49e,"
    "4df,18b,269,37e,5ac,8ef,1ad,23c,46b,579,5bf,139,27d,48c,6ae";

constexpr const char* kPi1 = "(1 e)(2 4)(3 7)(5 6)(8 b)(a c)(9 d)";
constexpr const char* kPi2 = "(9 7)(3 d)(4 a)(2 c)(6 8)(5 b)(1 e)";
constexpr const char* kCommon14 = "79f,3df,4af,2cf,68f,5bf,1ef";
constexpr const char* kPi15 = "(6 7 8)(9 b a)(c d e)";

constexpr const char* kFrame16 =
    "59e,6cg,7af,8bd,5bf,6ad,7ce,89g,19f,2bg,3cd,4ae,1ag,2cf,3be,49d,"
    "15d,28e,36f,47g,16e,27d,35g,48f,17b,269,38a,45c,18c,25a,379,46b";
constexpr const char* kFrameGroups = "1234,5678,9abc,defg";
constexpr const char* kPi3 = "(1 2)(3 4)(5 6)(7 8)";
constexpr const char* kPi4 = "(1 3)(2 4)(5 7)(6 8)(9 a)(b c)";

void ensure(bool ok, const std::string& msg) {
  if (!ok) throw TradeError(ErrorCode::InvalidTriple, msg);
}

Collection apply_to_all(const Permutation& pi, const Collection& c) {
  Collection out;
  out.reserve(c.size());
  for (const auto& b : c) out.push_back(pi.apply(b));
  return out;
}

Collection minus(const Collection& c, const std::set<Block>& removed) {
  Collection out;
  for (const auto& b : c)
    if (!removed.count(b)) out.push_back(b);
  return out;
}

long long block_key(const Block& b, int v) {
  long long key = 0;
  for (Element x : b) key = key * v + x;
  return key;
}

}  // namespace

Verdict verify_triple_system(const TripleSystem& ts) {
  Verdict out;
  std::map<std::pair<int, int>, int> pairs;
  for (const auto& b : ts.triples) {
    if (b.size() != 3 || std::adjacent_find(b.begin(), b.end()) != b.end()) {
      out.violations.push_back(
          {"block-shape", block_to_string(b) + " is not a 3-subset", {b}});
      continue;
    }
    for (Element x : b)
      if (x < 0 || x >= ts.points)
        out.violations.push_back(
            {"point-range", "point " + std::to_string(x) + " out of range",
             {b}});
    pairs[{b[0], b[1]}]++;
    pairs[{b[0], b[2]}]++;
    pairs[{b[1], b[2]}]++;
  }
  for (int a = 0; a < ts.points; ++a)
    for (int b = a + 1; b < ts.points; ++b) {
      auto it = pairs.find({a, b});
      int n = it == pairs.end() ? 0 : it->second;
      if (n != 1)
        out.violations.push_back(
            {"pair-coverage", "pair {" + std::to_string(a) + "," +
                                  std::to_string(b) + "} covered " +
                                  std::to_string(n) + " times",
             {}});
    }
  return out;
}

TripleSystem relabel(const TripleSystem& ts, const Permutation& pi) {
  pi.validate();
  TripleSystem out;
  out.points = ts.points;
  out.triples = apply_to_all(pi, ts.triples);
  return out;
}

Trade base_8_3_2() {
  Trade t;
  t.mu = 3;
  t.k = 3;
  t.t = 2;
  for (const char* c : kBase8)
    t.collections.push_back(io::parse_compact_blocks(c));
  return t;
}

std::pair<Trade, Trade> pair_trades_volume3() {
  auto build = [](const char* const (&data)[3]) {
    Trade t;
    t.mu = 3;
    t.k = 2;
    t.t = 1;
    for (const char* c : data) t.collections.push_back(io::parse_compact_blocks(c));
    return t;
  };
  return {build(kPairA), build(kPairB)};
}

TripleSystem kts15_A() {
  return TripleSystem{15, io::parse_compact_blocks(kKts15A)};
}

Collection kts15_B1() { return io::parse_compact_blocks(kKts15B1); }
Collection kts15_B2() { return io::parse_compact_blocks(kKts15B2); }

TripleSystem kts15_B() {
  TripleSystem ts;
  ts.points = 15;
  ts.triples = kts15_B1();
  for (auto& b : kts15_B2()) ts.triples.push_back(b);
  return ts;
}

Collection trade_14_common() { return io::parse_compact_blocks(kCommon14); }

Trade trade_14() {
  const Collection b = kts15_A().triples;
  const Permutation pi1 = io::parse_cycles(kPi1);
  const Permutation pi2 = io::parse_cycles(kPi2);
  const Collection b1 = apply_to_all(pi1, b);
  const Collection b2 = apply_to_all(pi2, b);

  std::set<Block> sb(b.begin(), b.end());
  std::set<Block> s1(b1.begin(), b1.end());
  std::set<Block> s2(b2.begin(), b2.end());
  std::set<Block> common;
  for (const auto& blk : sb)
    if (s1.count(blk) && s2.count(blk)) common.insert(blk);

  const Collection printed = trade_14_common();
  ensure(common == std::set<Block>(printed.begin(), printed.end()),
         "triple intersection does not match the embedded common set");

  Trade t;
  t.mu = 3;
  t.k = 3;
  t.t = 2;
  t.collections = {minus(b, common), minus(b1, common), minus(b2, common)};
  return t;
}

Trade trade_15() {
  const Permutation pi = io::parse_cycles(kPi15);
  const Collection b2 = kts15_B2();
  const Collection c2 = apply_to_all(pi, b2);
  const Collection c3 = apply_to_all(pi, c2);
  Trade t;
  t.mu = 3;
  t.k = 3;
  t.t = 2;
  t.collections = {b2, c2, c3};
  return t;
}

Collection kirkman_frame_16() { return io::parse_compact_blocks(kFrame16); }

std::vector<Block> kirkman_frame_groups() {
  auto g = io::parse_compact_blocks(kFrameGroups);
  return {g.begin(), g.end()};
}

Trade trade_16() {
  const Collection d = kirkman_frame_16();
  // Frame property: no block meets a group twice.
  for (const auto& g : kirkman_frame_groups())
    for (const auto& blk : d) {
      int hits = 0;
      for (Element x : blk)
        if (std::binary_search(g.begin(), g.end(), x)) ++hits;
      ensure(hits <= 1, "frame block " + block_to_string(blk) +
                            " meets group " + block_to_string(g) + " twice");
    }
  Trade t;
  t.mu = 3;
  t.k = 3;
  t.t = 2;
  t.collections = {d, apply_to_all(io::parse_cycles(kPi3), d),
                   apply_to_all(io::parse_cycles(kPi4), d)};
  return t;
}

// ---- Steiner triple systems ----------------------------------------------

namespace {

bool sts_admissible(int v) { return v >= 3 && (v % 6 == 1 || v % 6 == 3); }

// Partition the difference set {1..(v-1)/2} (minus v/3 when 3 | v) into
// triples {a,b,c} with a+b = c or a+b+c = v.
bool find_difference_triples(int v, std::vector<int>& avail,
                             std::vector<std::array<int, 3>>& out) {
  if (avail.empty()) return true;
  const int a = avail.front();
  for (size_t bi = 1; bi < avail.size(); ++bi) {
    const int b = avail[bi];
    for (int c : {a + b, v - a - b}) {
      if (c <= b) continue;
      auto it = std::find(avail.begin(), avail.end(), c);
      if (it == avail.end()) continue;
      std::vector<int> rest;
      for (int x : avail)
        if (x != a && x != b && x != c) rest.push_back(x);
      out.push_back({a, b, c});
      if (find_difference_triples(v, rest, out)) return true;
      out.pop_back();
    }
  }
  return false;
}

TripleSystem affine_sts_9() {
  TripleSystem ts;
  ts.points = 9;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      // lines of slope b through (0, a), plus the vertical lines
      Block line;
      for (int x = 0; x < 3; ++x) line.push_back(3 * x + (a + b * x) % 3);
      std::sort(line.begin(), line.end());
      ts.triples.push_back(line);
    }
  for (int x = 0; x < 3; ++x)
    ts.triples.push_back({3 * x, 3 * x + 1, 3 * x + 2});
  return ts;
}

}  // namespace

TripleSystem steiner_triple_system(int v) {
  if (!sts_admissible(v))
    throw TradeError(ErrorCode::NotAdmissible,
                     "no STS(" + std::to_string(v) + ")");
  if (v == 9) return affine_sts_9();
  if (v == 3) return TripleSystem{3, {{0, 1, 2}}};

  std::vector<int> avail;
  for (int x = 1; x <= (v - 1) / 2; ++x)
    if (!(v % 3 == 0 && x == v / 3)) avail.push_back(x);
  std::vector<std::array<int, 3>> triples;
  if (!find_difference_triples(v, avail, triples))
    throw TradeError(ErrorCode::NotAdmissible,
                     "no cyclic difference family for v=" + std::to_string(v));
  TripleSystem ts;
  ts.points = v;
  for (const auto& [a, b, c] : triples) {
    (void)c;
    for (int i = 0; i < v; ++i) {
      Block blk = {i % v, (a + i) % v, (a + b + i) % v};
      std::sort(blk.begin(), blk.end());
      ts.triples.push_back(blk);
    }
  }
  if (v % 3 == 0) {
    const int s = v / 3;
    for (int i = 0; i < s; ++i) ts.triples.push_back({i, i + s, i + 2 * s});
  }
  return ts;
}

std::optional<Trade> three_disjoint_sts(int v, std::uint64_t seed,
                                        unsigned long long tries) {
  if (!sts_admissible(v) || v == 7 || v < 9)
    throw TradeError(ErrorCode::NotAdmissible,
                     "three disjoint STS(" + std::to_string(v) +
                         ") are not available");
  const TripleSystem base = steiner_triple_system(v);
  auto keys_of = [v](const Collection& c) {
    std::set<long long> keys;
    for (const auto& b : c) keys.insert(block_key(b, v));
    return keys;
  };
  const std::set<long long> baseKeys = keys_of(base.triples);

  std::mt19937_64 rng(seed);
  std::vector<Element> labels(v);
  auto random_image = [&] {
    for (int i = 0; i < v; ++i) labels[i] = i;
    std::shuffle(labels.begin(), labels.end(), rng);
    Collection img;
    img.reserve(base.triples.size());
    for (const auto& b : base.triples) {
      Block nb = {labels[b[0]], labels[b[1]], labels[b[2]]};
      std::sort(nb.begin(), nb.end());
      img.push_back(nb);
    }
    return img;
  };
  auto disjoint = [&](const Collection& c, const std::set<long long>& keys) {
    for (const auto& b : c)
      if (keys.count(block_key(b, v))) return false;
    return true;
  };

  std::optional<Collection> second;
  std::set<long long> secondKeys;
  for (unsigned long long i = 0; i < tries; ++i) {
    Collection img = random_image();
    if (!second) {
      if (disjoint(img, baseKeys)) {
        secondKeys = keys_of(img);
        second = std::move(img);
      }
      continue;
    }
    if (disjoint(img, baseKeys) && disjoint(img, secondKeys)) {
      Trade t;
      t.mu = 3;
      t.k = 3;
      t.t = 2;
      t.collections = {base.triples, *second, std::move(img)};
      return t;
    }
  }
  return std::nullopt;
}

// ---- three disjoint (2,3)-packings on 12 points ---------------------------

std::vector<Block> packing_leave_12() {
  return {{0, 1}, {2, 3}, {4, 5}, {6, 7}, {8, 9}, {10, 11}};
}

namespace {

struct PackingUniverse {
  std::vector<Block> triangles;
  std::vector<std::vector<int>> byEdge;  // edge id -> triangle indices
  std::vector<std::array<int, 2>> edges;
  int edgeId[12][12];

  PackingUniverse() {
    bool matched[12][12] = {};
    for (const auto& e : packing_leave_12())
      matched[e[0]][e[1]] = matched[e[1]][e[0]] = true;
    int next = 0;
    for (int a = 0; a < 12; ++a)
      for (int b = a + 1; b < 12; ++b) {
        edgeId[a][b] = matched[a][b] ? -1 : next;
        if (!matched[a][b]) {
          edges.push_back({a, b});
          ++next;
        }
      }
    byEdge.resize(edges.size());
    for (int a = 0; a < 12; ++a)
      for (int b = a + 1; b < 12; ++b)
        for (int c = b + 1; c < 12; ++c) {
          if (matched[a][b] || matched[a][c] || matched[b][c]) continue;
          int idx = static_cast<int>(triangles.size());
          triangles.push_back({a, b, c});
          byEdge[edgeId[a][b]].push_back(idx);
          byEdge[edgeId[a][c]].push_back(idx);
          byEdge[edgeId[b][c]].push_back(idx);
        }
  }

  int id(int a, int b) const { return edgeId[std::min(a, b)][std::max(a, b)]; }
};

const PackingUniverse& universe() {
  static const PackingUniverse u;
  return u;
}

// Exact cover of the 60 non-matching edges by triangles, avoiding a banned
// triangle set.  Candidate order is shuffled by rng; first solution wins.
bool cover_edges(const std::vector<bool>& banned, std::mt19937_64& rng,
                 std::vector<int>& out, long long& nodesLeft) {
  const auto& u = universe();
  std::vector<bool> covered(u.edges.size(), false);
  std::vector<int> stack;

  std::vector<int> order(u.triangles.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<int> rank(order.size());
  for (size_t i = 0; i < order.size(); ++i) rank[order[i]] = static_cast<int>(i);

  auto usable = [&](int t) {
    if (banned[t]) return false;
    const auto& tri = u.triangles[t];
    return !covered[u.id(tri[0], tri[1])] && !covered[u.id(tri[0], tri[2])] &&
           !covered[u.id(tri[1], tri[2])];
  };

  std::function<bool()> rec = [&]() -> bool {
    if (--nodesLeft <= 0) return false;
    int bestEdge = -1;
    size_t bestCount = SIZE_MAX;
    for (size_t e = 0; e < u.edges.size(); ++e) {
      if (covered[e]) continue;
      size_t cnt = 0;
      for (int t : u.byEdge[e])
        if (usable(t)) ++cnt;
      if (cnt < bestCount) {
        bestCount = cnt;
        bestEdge = static_cast<int>(e);
        if (cnt == 0) break;
      }
    }
    if (bestEdge < 0) return true;  // all covered
    if (bestCount == 0) return false;
    std::vector<int> cands;
    for (int t : u.byEdge[bestEdge])
      if (usable(t)) cands.push_back(t);
    std::sort(cands.begin(), cands.end(),
              [&](int a, int b) { return rank[a] < rank[b]; });
    for (int t : cands) {
      const auto& tri = u.triangles[t];
      covered[u.id(tri[0], tri[1])] = covered[u.id(tri[0], tri[2])] =
          covered[u.id(tri[1], tri[2])] = true;
      stack.push_back(t);
      if (rec()) return true;
      stack.pop_back();
      covered[u.id(tri[0], tri[1])] = covered[u.id(tri[0], tri[2])] =
          covered[u.id(tri[1], tri[2])] = false;
    }
    return false;
  };

  if (!rec()) return false;
  out = stack;
  return true;
}

}  // namespace

std::optional<Trade> find_three_disjoint_packings(std::uint64_t seed,
                                                  unsigned long long tries) {
  const auto& u = universe();
  std::mt19937_64 rng(seed);
  for (unsigned long long attempt = 0; attempt < tries; ++attempt) {
    std::vector<bool> banned(u.triangles.size(), false);
    std::vector<std::vector<int>> picks;
    bool ok = true;
    for (int round = 0; round < 3 && ok; ++round) {
      std::vector<int> sol;
      long long nodes = 200000;
      if (cover_edges(banned, rng, sol, nodes)) {
        for (int t : sol) banned[t] = true;
        picks.push_back(std::move(sol));
      } else {
        ok = false;
      }
    }
    if (!ok) continue;
    Trade t;
    t.mu = 3;
    t.k = 3;
    t.t = 2;
    for (const auto& sol : picks) {
      Collection c;
      for (int idx : sol) c.push_back(u.triangles[idx]);
      std::sort(c.begin(), c.end());
      t.collections.push_back(std::move(c));
    }
    return t;
  }
  return std::nullopt;
}

Trade three_disjoint_packings_12() {
  static const Trade witness = [] {
    auto t = find_three_disjoint_packings();
    ensure(t.has_value(), "embedded packing witness unavailable");
    return *t;
  }();
  return witness;
}

// ---- CLI surface -----------------------------------------------------------

std::vector<std::string> names() {
  return {"base-8",   "pair-volume3-a", "pair-volume3-b", "kts15-a",
          "kts15-b",  "three-sts-9",    "three-sts-13",   "three-sts-15",
          "packings-12", "trade-14",    "trade-15",       "trade-16"};
}

std::optional<Trade> emit(const std::string& name) {
  auto wrap = [](const TripleSystem& ts) {
    Trade t;
    t.mu = 1;
    t.k = 3;
    t.t = 2;
    t.collections = {ts.triples};
    return t;
  };
  if (name == "base-8") return base_8_3_2();
  if (name == "pair-volume3-a") return pair_trades_volume3().first;
  if (name == "pair-volume3-b") return pair_trades_volume3().second;
  if (name == "kts15-a") return wrap(kts15_A());
  if (name == "kts15-b") return wrap(kts15_B());
  if (name == "three-sts-9") return three_disjoint_sts(9);
  if (name == "three-sts-13") return three_disjoint_sts(13);
  if (name == "three-sts-15") return three_disjoint_sts(15);
  if (name == "packings-12") return three_disjoint_packings_12();
  if (name == "trade-14") return trade_14();
  if (name == "trade-15") return trade_15();
  if (name == "trade-16") return trade_16();
  return std::nullopt;
}

}  // namespace trades::catalog
