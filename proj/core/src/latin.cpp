#include "trades/latin.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <condition_variable>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

namespace trades {

namespace {

uint64_t low_mask(int n) { return n >= 64 ? ~0ULL : (1ULL << n) - 1; }

std::string cell_name(int i, int j) {
  return "(" + std::to_string(i) + "," + std::to_string(j) + ")";
}

}  // namespace

Verdict verify_latin_trade(const LatinTriple& triple) {
  Verdict v;
  const int m = triple.order;
  const int d = triple.degree;
  if (m < 1 || d < 1 || d > m) {
    v.violations.push_back(
        {"parameter", "requires 1 <= d <= m, got d=" + std::to_string(d) +
                          " m=" + std::to_string(m),
         {}});
    return v;
  }
  if (static_cast<int>(triple.cells.size()) != d * m)
    v.violations.push_back(
        {"cell-count", "expected d*m = " + std::to_string(d * m) +
                           " filled cells, got " +
                           std::to_string(triple.cells.size()),
         {}});

  std::set<std::pair<int, int>> seen;
  std::vector<int> rowFill(m, 0), colFill(m, 0);
  // symbol sets per square, per row / per column
  std::vector<std::array<std::set<int>, 3>> rowSyms(m), colSyms(m);
  std::array<std::map<int, int>, 3> symCount;

  for (const auto& c : triple.cells) {
    if (c.row < 0 || c.row >= m || c.col < 0 || c.col >= m) {
      v.violations.push_back(
          {"cell-range", "cell " + cell_name(c.row, c.col) + " out of range",
           {}});
      continue;
    }
    if (!seen.insert({c.row, c.col}).second) {
      v.violations.push_back(
          {"cell-duplicate", "cell " + cell_name(c.row, c.col) + " repeated",
           {}});
      continue;
    }
    rowFill[c.row]++;
    colFill[c.col]++;
    if (c.symbols[0] == c.symbols[1] || c.symbols[0] == c.symbols[2] ||
        c.symbols[1] == c.symbols[2])
      v.violations.push_back({"entry-collision",
                              "cell " + cell_name(c.row, c.col) +
                                  " holds a repeated entry across squares",
                              {}});
    for (int r = 0; r < 3; ++r) {
      int s = c.symbols[r];
      if (s < 0 || s >= m) {
        v.violations.push_back(
            {"symbol-range", "cell " + cell_name(c.row, c.col) + " square " +
                                 std::to_string(r + 1) + " symbol " +
                                 std::to_string(s) + " out of range",
             {}});
        continue;
      }
      if (!rowSyms[c.row][r].insert(s).second)
        v.violations.push_back(
            {"row-repeat", "symbol " + std::to_string(s) + " repeats in row " +
                               std::to_string(c.row) + " of square " +
                               std::to_string(r + 1),
             {}});
      if (!colSyms[c.col][r].insert(s).second)
        v.violations.push_back(
            {"col-repeat", "symbol " + std::to_string(s) +
                               " repeats in column " + std::to_string(c.col) +
                               " of square " + std::to_string(r + 1),
             {}});
      symCount[r][s]++;
    }
  }
  for (int i = 0; i < m; ++i) {
    if (rowFill[i] != d)
      v.violations.push_back(
          {"row-degree", "row " + std::to_string(i) + " has " +
                             std::to_string(rowFill[i]) + " filled cells",
           {}});
    if (colFill[i] != d)
      v.violations.push_back(
          {"col-degree", "column " + std::to_string(i) + " has " +
                             std::to_string(colFill[i]) + " filled cells",
           {}});
    for (int r = 1; r < 3; ++r) {
      if (rowSyms[i][r] != rowSyms[i][0])
        v.violations.push_back({"row-set",
                                "row " + std::to_string(i) +
                                    " symbol sets differ between squares 1 and " +
                                    std::to_string(r + 1),
                                {}});
      if (colSyms[i][r] != colSyms[i][0])
        v.violations.push_back({"col-set",
                                "column " + std::to_string(i) +
                                    " symbol sets differ between squares 1 and " +
                                    std::to_string(r + 1),
                                {}});
    }
  }
  for (int r = 0; r < 3; ++r)
    for (const auto& [s, cnt] : symCount[r])
      if (cnt != d)
        v.violations.push_back(
            {"symbol-count", "symbol " + std::to_string(s) + " appears " +
                                 std::to_string(cnt) + " times in square " +
                                 std::to_string(r + 1) + ", expected " +
                                 std::to_string(d),
             {}});
  return v;
}

Trade latin_to_steiner(const LatinTriple& triple) {
  auto verdict = verify_latin_trade(triple);
  if (!verdict.valid())
    throw TradeError(ErrorCode::InvalidTriple,
                     "latin triple does not verify: " + verdict.summary());
  const int m = triple.order;
  Trade out;
  out.mu = 3;
  out.k = 3;
  out.t = 2;
  out.collections.resize(3);
  for (const auto& c : triple.cells)
    for (int r = 0; r < 3; ++r)
      out.collections[r].push_back(
          make_block({c.row, m + c.col, 2 * m + c.symbols[r]}));
  return out;
}

LatinTriple full_square_triple(int m) {
  if (m < 3)
    throw TradeError(ErrorCode::InvalidTriple,
                     "full-square triple needs m >= 3");
  LatinTriple out;
  out.order = m;
  out.degree = m;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      out.cells.push_back(
          {i, j, {(i + j) % m, (i + j + 1) % m, (i + j + 2) % m}});
  return out;
}

LatinTriple diagonal_sum(const LatinTriple& a, const LatinTriple& b) {
  if (a.degree != b.degree)
    throw TradeError(ErrorCode::ParameterMismatch,
                     "diagonal_sum requires equal degrees");
  LatinTriple out;
  out.order = a.order + b.order;
  out.degree = a.degree;
  out.cells = a.cells;
  for (const auto& c : b.cells)
    out.cells.push_back({c.row + a.order, c.col + a.order,
                         {c.symbols[0] + a.order, c.symbols[1] + a.order,
                          c.symbols[2] + a.order}});
  return out;
}

LatinTriple construct_3_3_m(int m) {
  if (m <= 0 || m % 3 != 0)
    throw TradeError(ErrorCode::NotMultipleOf3,
                     "construct_3_3_m requires 3 | m, got m=" +
                         std::to_string(m));
  LatinTriple out = full_square_triple(3);
  for (int b = 1; b < m / 3; ++b) out = diagonal_sum(out, full_square_triple(3));
  out.degree = 3;
  return out;
}

// ---------------------------------------------------------------------------
// Exhaustive search for (3, d, m) Latin trades.
//
// Phase 1 enumerates d-regular 0/1 shapes with rows nondecreasing as column
// bitmasks and the first row forced to columns {0..d-1}; every equivalence
// class under row/column permutation contains such a representative, so
// exhausting this space certifies nonexistence.  Phase 2 assigns symbol
// triples cell by cell in row-major order with the first row of square 1
// forced to (0..d-1) and squares 2/3 ordered at the first cell.

namespace {

struct SymbolSearch {
  int m, d;
  const std::vector<uint64_t>& shape;
  std::vector<std::pair<int, int>> cells;
  uint64_t full;
  std::array<std::vector<uint64_t>, 3> rowUsed, colUsed, colsWith;
  std::array<std::vector<int>, 3> symCnt;
  std::array<uint64_t, 3> sat{};
  std::vector<int> remRow, remCol;
  std::vector<std::array<int, 3>> assigned;

  std::atomic<unsigned long long>* nodes;
  unsigned long long budget;

  enum class St { Found, Dead, Budget };

  SymbolSearch(int m_, int d_, const std::vector<uint64_t>& shape_,
               std::atomic<unsigned long long>* nodes_,
               unsigned long long budget_)
      : m(m_), d(d_), shape(shape_), full(low_mask(m_)), nodes(nodes_),
        budget(budget_) {
    for (int r = 0; r < 3; ++r) {
      rowUsed[r].assign(m, 0);
      colUsed[r].assign(m, 0);
      colsWith[r].assign(m, 0);
      symCnt[r].assign(m, 0);
    }
    remRow.assign(m, 0);
    remCol.assign(m, 0);
    for (int i = 0; i < m; ++i) {
      uint64_t mask = shape[i];
      while (mask) {
        int j = std::countr_zero(mask);
        mask &= mask - 1;
        cells.push_back({i, j});
        remRow[i]++;
        remCol[j]++;
      }
    }
    assigned.assign(cells.size(), {});
  }

  void apply(int r, int s, int i, int j) {
    rowUsed[r][i] |= 1ULL << s;
    colUsed[r][j] |= 1ULL << s;
    colsWith[r][s] |= 1ULL << j;
    if (++symCnt[r][s] == d) sat[r] |= 1ULL << s;
  }
  void undo(int r, int s, int i, int j) {
    rowUsed[r][i] &= ~(1ULL << s);
    colUsed[r][j] &= ~(1ULL << s);
    colsWith[r][s] &= ~(1ULL << j);
    if (symCnt[r][s]-- == d) sat[r] &= ~(1ULL << s);
  }

  // Equal-set feasibility for row i / column j after an assignment.
  bool balanced(int i, int j) const {
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        if (a == b) continue;
        if (std::popcount(rowUsed[a][i] & ~rowUsed[b][i]) > remRow[i])
          return false;
        if (std::popcount(colUsed[a][j] & ~colUsed[b][j]) > remCol[j])
          return false;
      }
    return true;
  }

  // Every deficient symbol must still fit in the untouched rows below i.
  bool symbols_completable(int i) const {
    for (int r = 0; r < 3; ++r) {
      for (int s = 0; s < m; ++s) {
        int need = d - symCnt[r][s];
        if (need <= 0) continue;
        int avail = 0;
        for (int i2 = i + 1; i2 < m && avail < need; ++i2)
          if (shape[i2] & ~colsWith[r][s]) ++avail;
        if (avail < need) return false;
      }
    }
    return true;
  }

  St place(size_t idx) {
    if (idx == cells.size()) {
      for (int r = 0; r < 3; ++r)
        for (int s = 0; s < m; ++s)
          if (symCnt[r][s] != d) return St::Dead;
      return St::Found;
    }
    auto [i, j] = cells[idx];
    uint64_t cand[3];
    for (int r = 0; r < 3; ++r) {
      uint64_t c = ~rowUsed[r][i] & ~colUsed[r][j] & ~sat[r] & full;
      if (i == 0) c &= low_mask(d);
      for (int a = 0; a < 3; ++a) {
        if (a == r) continue;
        uint64_t diff = rowUsed[a][i] & ~rowUsed[r][i];
        int def = std::popcount(diff);
        if (def > remRow[i]) return St::Dead;
        if (def == remRow[i]) c &= diff;
        uint64_t cdiff = colUsed[a][j] & ~colUsed[r][j];
        int cdef = std::popcount(cdiff);
        if (cdef > remCol[j]) return St::Dead;
        if (cdef == remCol[j]) c &= cdiff;
      }
      if (!c) return St::Dead;
      cand[r] = c;
    }
    if (i == 0) {
      // First row of square 1 reads (0, 1, ..., d-1) left to right.
      if (!(cand[0] >> j & 1)) return St::Dead;
      cand[0] = 1ULL << j;
    }

    for (uint64_t m1 = cand[0]; m1;) {
      const int s1 = std::countr_zero(m1);
      m1 &= m1 - 1;
      for (uint64_t m2 = cand[1] & ~(1ULL << s1); m2;) {
        const int s2 = std::countr_zero(m2);
        m2 &= m2 - 1;
        uint64_t m3 = cand[2] & ~(1ULL << s1) & ~(1ULL << s2);
        if (idx == 0) m3 &= ~low_mask(s2 + 1);  // order squares 2 and 3
        while (m3) {
          const int s3 = std::countr_zero(m3);
          m3 &= m3 - 1;
          if (nodes->fetch_add(1, std::memory_order_relaxed) >= budget)
            return St::Budget;
          apply(0, s1, i, j);
          apply(1, s2, i, j);
          apply(2, s3, i, j);
          remRow[i]--;
          remCol[j]--;
          St st = St::Dead;
          if (balanced(i, j) &&
              (remRow[i] != 0 || symbols_completable(i))) {
            assigned[idx] = {s1, s2, s3};
            st = place(idx + 1);
          }
          remRow[i]++;
          remCol[j]++;
          undo(2, s3, i, j);
          undo(1, s2, i, j);
          undo(0, s1, i, j);
          if (st != St::Dead) return st;
        }
      }
    }
    return St::Dead;
  }

  LatinTriple witness() const {
    LatinTriple out;
    out.order = m;
    out.degree = d;
    for (size_t idx = 0; idx < cells.size(); ++idx)
      out.cells.push_back({cells[idx].first, cells[idx].second,
                           {assigned[idx][0], assigned[idx][1],
                            assigned[idx][2]}});
    return out;
  }
};

// Enumerates d-regular shapes in ascending row-mask order, invoking fn on
// each complete shape.  fn returns true to stop the enumeration early.
// Returns false if the enumeration was cut short (stop or budget).
class ShapeEnum {
 public:
  ShapeEnum(int d, int m, std::atomic<unsigned long long>* nodes,
            unsigned long long budget)
      : d_(d), m_(m), nodes_(nodes), budget_(budget) {
    colCnt_.assign(m, 0);
    rows_.assign(m, 0);
    rows_[0] = low_mask(d);
    for (int j = 0; j < d; ++j) colCnt_[j] = 1;
  }

  bool budget_hit() const { return budget_hit_; }

  template <typename Fn>
  bool run(Fn&& fn) {
    return recurse(1, std::forward<Fn>(fn));
  }

 private:
  template <typename Fn>
  bool recurse(int depth, Fn&& fn) {
    if (depth == m_) return !fn(rows_);
    const int rowsLeft = m_ - depth;  // including this one
    uint64_t must = 0, allowed = 0;
    for (int j = 0; j < m_; ++j) {
      const int deficit = d_ - colCnt_[j];
      if (deficit > rowsLeft) return true;  // dead branch, keep searching
      if (deficit > 0) allowed |= 1ULL << j;
      if (deficit == rowsLeft) must |= 1ULL << j;
    }
    const int q = d_ - std::popcount(must);
    if (q < 0) return true;
    uint64_t free = allowed & ~must;
    std::vector<int> pos;
    for (uint64_t f = free; f;) {
      pos.push_back(std::countr_zero(f));
      f &= f - 1;
    }
    const int w = static_cast<int>(pos.size());
    if (q > w) return true;
    const uint64_t prev = rows_[depth - 1];
    uint64_t comp = q == 0 ? 0 : low_mask(q);
    const uint64_t compEnd = 1ULL << w;
    for (;;) {
      if (q > 0 && comp >= compEnd) break;
      uint64_t mask = must;
      for (uint64_t c = comp; c;) {
        const int b = std::countr_zero(c);
        c &= c - 1;
        mask |= 1ULL << pos[b];
      }
      if (mask >= prev) {
        if (nodes_->fetch_add(1, std::memory_order_relaxed) >= budget_) {
          budget_hit_ = true;
          return false;
        }
        rows_[depth] = mask;
        for (uint64_t c = mask; c;) {
          colCnt_[std::countr_zero(c)]++;
          c &= c - 1;
        }
        bool keep = recurse(depth + 1, fn);
        for (uint64_t c = mask; c;) {
          colCnt_[std::countr_zero(c)]--;
          c &= c - 1;
        }
        if (!keep) return false;
      }
      if (q == 0) break;
      // Gosper's hack: next q-subset of the compressed free set.
      const uint64_t lo = comp & -comp;
      const uint64_t left = comp + lo;
      comp = left | (((comp ^ left) >> 2) / lo);
    }
    return true;
  }

  int d_, m_;
  std::atomic<unsigned long long>* nodes_;
  unsigned long long budget_;
  std::vector<int> colCnt_;
  std::vector<uint64_t> rows_;
  bool budget_hit_ = false;
};

LatinSearchResult search_sequential(int d, int m, unsigned long long budget) {
  std::atomic<unsigned long long> nodes{0};
  LatinSearchResult result;
  bool budgetHit = false;
  ShapeEnum shapes(d, m, &nodes, budget);
  shapes.run([&](const std::vector<uint64_t>& shape) {
    SymbolSearch ss(m, d, shape, &nodes, budget);
    auto st = ss.place(0);
    if (st == SymbolSearch::St::Found) {
      result.status = SearchStatus::Found;
      result.triple = ss.witness();
      return true;
    }
    if (st == SymbolSearch::St::Budget) {
      budgetHit = true;
      return true;
    }
    return false;
  });
  if (!result.triple) {
    result.status = (budgetHit || shapes.budget_hit()) ? SearchStatus::Budget
                                                       : SearchStatus::Exhausted;
  }
  result.nodes = nodes.load();
  return result;
}

LatinSearchResult search_parallel(int d, int m, unsigned long long budget,
                                  int jobs) {
  std::atomic<unsigned long long> nodes{0};
  std::mutex mx;
  std::condition_variable cv;
  std::vector<std::pair<size_t, std::vector<uint64_t>>> queue;
  bool producerDone = false;
  std::atomic<size_t> bestIdx{SIZE_MAX};
  std::atomic<bool> budgetHit{false};
  std::map<size_t, LatinTriple> witnesses;
  std::mutex witnessMx;

  std::thread producer([&] {
    size_t idx = 0;
    ShapeEnum shapes(d, m, &nodes, budget);
    shapes.run([&](const std::vector<uint64_t>& shape) {
      std::unique_lock lk(mx);
      cv.wait(lk, [&] { return queue.size() < 64; });
      queue.emplace_back(idx++, shape);
      cv.notify_all();
      return bestIdx.load() != SIZE_MAX && idx > bestIdx.load();
    });
    if (shapes.budget_hit()) budgetHit = true;
    std::lock_guard lk(mx);
    producerDone = true;
    cv.notify_all();
  });

  auto worker = [&] {
    for (;;) {
      std::pair<size_t, std::vector<uint64_t>> item;
      {
        std::unique_lock lk(mx);
        cv.wait(lk, [&] { return !queue.empty() || producerDone; });
        if (queue.empty()) return;
        item = std::move(queue.front());
        queue.erase(queue.begin());
        cv.notify_all();
      }
      if (item.first > bestIdx.load()) continue;
      SymbolSearch ss(m, d, item.second, &nodes, budget);
      auto st = ss.place(0);
      if (st == SymbolSearch::St::Found) {
        std::lock_guard lk(witnessMx);
        witnesses[item.first] = ss.witness();
        size_t cur = bestIdx.load();
        while (item.first < cur &&
               !bestIdx.compare_exchange_weak(cur, item.first)) {
        }
      } else if (st == SymbolSearch::St::Budget) {
        budgetHit = true;
      }
    }
  };
  std::vector<std::thread> workers;
  for (int i = 0; i < jobs; ++i) workers.emplace_back(worker);
  producer.join();
  for (auto& w : workers) w.join();

  LatinSearchResult result;
  result.nodes = nodes.load();
  size_t best = bestIdx.load();
  if (best != SIZE_MAX && !budgetHit.load()) {
    result.status = SearchStatus::Found;
    result.triple = witnesses[best];
  } else if (budgetHit.load()) {
    result.status = SearchStatus::Budget;
  } else {
    result.status = SearchStatus::Exhausted;
  }
  return result;
}

}  // namespace

LatinSearchResult search_latin_trade(int d, int m, unsigned long long budget,
                                     int jobs) {
  if (d < 3 || d > m)
    throw TradeError(ErrorCode::ParameterMismatch,
                     "search_latin_trade requires 3 <= d <= m");
  if (m > 64)
    throw TradeError(ErrorCode::ParameterMismatch,
                     "search_latin_trade supports m <= 64");
  if (jobs > 1) return search_parallel(d, m, budget, jobs);
  return search_sequential(d, m, budget);
}

}  // namespace trades
