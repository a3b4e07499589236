#include "pmc/smith.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

namespace pmc {

namespace {

constexpr long long kLimit = (1LL << 62);

bool add_mul_safe(long long a, long long b, long long c, long long* out) {
  // computes a + b*c with overflow detection
  __int128 r = static_cast<__int128>(a) + static_cast<__int128>(b) * c;
  if (r >= kLimit || r <= -kLimit) return false;
  *out = static_cast<long long>(r);
  return true;
}

}  // namespace

SmithResult smith_normal_form(std::vector<std::vector<long long>> m) {
  SmithResult res;
  int rows = static_cast<int>(m.size());
  int cols = rows ? static_cast<int>(m[0].size()) : 0;
  int n = std::min(rows, cols);
  res.diagonal.assign(n, 0);

  int t = 0;
  while (t < n) {
    // find pivot: smallest |entry| in the remaining block
    int pr = -1, pc = -1;
    long long best = 0;
    for (int i = t; i < rows; ++i)
      for (int j = t; j < cols; ++j)
        if (m[i][j] != 0 && (pr < 0 || std::llabs(m[i][j]) < best)) {
          best = std::llabs(m[i][j]);
          pr = i;
          pc = j;
        }
    if (pr < 0) break;
    std::swap(m[t], m[pr]);
    for (int i = t; i < rows; ++i) std::swap(m[i][t], m[i][pc]);

    bool clean = true;
    // clear column t
    for (int i = t + 1; i < rows; ++i) {
      if (m[i][t] == 0) continue;
      long long q = m[i][t] / m[t][t];
      if (q != 0)
        for (int j = t; j < cols; ++j)
          if (!add_mul_safe(m[i][j], -q, m[t][j], &m[i][j])) {
            res.overflow = true;
            return res;
          }
      if (m[i][t] != 0) clean = false;
    }
    // clear row t
    for (int j = t + 1; j < cols; ++j) {
      if (m[t][j] == 0) continue;
      long long q = m[t][j] / m[t][t];
      if (q != 0)
        for (int i = t; i < rows; ++i)
          if (!add_mul_safe(m[i][j], -q, m[i][t], &m[i][j])) {
            res.overflow = true;
            return res;
          }
      if (m[t][j] != 0) clean = false;
    }
    if (!clean) continue;  // remainders left; repeat with smaller pivot

    // divisibility: m[t][t] must divide everything below-right
    long long d = std::llabs(m[t][t]);
    bool fixed = false;
    for (int i = t + 1; i < rows && !fixed; ++i)
      for (int j = t + 1; j < cols && !fixed; ++j)
        if (m[i][j] % d != 0) {
          // add row i to row t and restart this pivot
          for (int k = t; k < cols; ++k)
            if (!add_mul_safe(m[t][k], 1, m[i][k], &m[t][k])) {
              res.overflow = true;
              return res;
            }
          fixed = true;
        }
    if (fixed) continue;

    res.diagonal[t] = d;
    ++t;
  }
  res.rank = t;
  return res;
}

std::optional<std::vector<long long>> cokernel_invariant_factors(const SparseMat& mat) {
  // row-major sparse storage with lazy deletion
  std::vector<std::map<int, long long>> rows(mat.rows);
  std::vector<std::set<int>> colRows(mat.cols);
  for (auto& [rc, v] : mat.entries) {
    if (v == 0) continue;
    auto [r, c] = rc;
    long long& slot = rows[r][c];
    slot += v;
    if (slot == 0)
      rows[r].erase(c);
    else
      colRows[c].insert(r);
  }
  // rebuild col index (duplicates may have cancelled)
  for (int c = 0; c < mat.cols; ++c) {
    std::set<int> keep;
    for (int r : colRows[c])
      if (rows[r].count(c)) keep.insert(r);
    colRows[c] = std::move(keep);
  }

  std::vector<bool> colGone(mat.cols, false);
  std::vector<bool> rowGone(mat.rows, false);

  // eliminate with +-1 pivots; each such pivot removes one generator with a
  // unimodular change of basis, so invariant factors are unaffected
  bool progress = true;
  while (progress) {
    progress = false;
    for (int c = 0; c < mat.cols; ++c) {
      if (colGone[c]) continue;
      int bestRow = -1;
      long long bestFill = -1;
      for (int r : colRows[c]) {
        if (rowGone[r]) continue;
        auto it = rows[r].find(c);
        if (it == rows[r].end() || std::llabs(it->second) != 1) continue;
        long long fill = static_cast<long long>(rows[r].size() - 1) *
                         static_cast<long long>(colRows[c].size() - 1);
        if (bestRow < 0 || fill < bestFill) {
          bestRow = r;
          bestFill = fill;
        }
      }
      if (bestRow < 0) continue;
      if (bestFill > 4096) continue;  // avoid fill-in blowup; dense pass handles the rest

      int pr = bestRow;
      long long pv = rows[pr][c];
      std::vector<int> targets(colRows[c].begin(), colRows[c].end());
      for (int r : targets) {
        if (r == pr || rowGone[r]) continue;
        auto it = rows[r].find(c);
        if (it == rows[r].end()) continue;
        long long factor = it->second * pv;  // pv in {1,-1}
        for (auto& [cc, vv] : rows[pr]) {
          long long& slot = rows[r][cc];
          if (!add_mul_safe(slot, -factor, vv, &slot)) return std::nullopt;
          if (slot == 0)
            rows[r].erase(cc);
          else
            colRows[cc].insert(r);
        }
      }
      for (auto& [cc, vv] : rows[pr]) colRows[cc].erase(pr);
      rowGone[pr] = true;
      colGone[c] = true;
      progress = true;
    }
  }

  // collect the residual dense block
  std::vector<int> liveCols;
  for (int c = 0; c < mat.cols; ++c)
    if (!colGone[c]) liveCols.push_back(c);
  std::map<int, int> colIdx;
  for (size_t i = 0; i < liveCols.size(); ++i) colIdx[liveCols[i]] = static_cast<int>(i);

  std::vector<std::vector<long long>> dense;
  std::set<std::vector<long long>> seen;
  for (int r = 0; r < mat.rows; ++r) {
    if (rowGone[r] || rows[r].empty()) continue;
    std::vector<long long> row(liveCols.size(), 0);
    for (auto& [c, v] : rows[r]) {
      if (colGone[c]) continue;  // stale entries on removed columns cannot remain...
      row[colIdx[c]] = v;
    }
    bool zero = std::all_of(row.begin(), row.end(), [](long long v) { return v == 0; });
    if (!zero && seen.insert(row).second) dense.push_back(std::move(row));
  }

  if (liveCols.empty()) return std::vector<long long>{};
  if (dense.empty())
    return std::vector<long long>(liveCols.size(), 0);  // all free

  if (dense.size() > 3000 || liveCols.size() > 3000) return std::nullopt;
  SmithResult snf = smith_normal_form(dense);
  if (snf.overflow) return std::nullopt;

  std::vector<long long> factors;
  for (int i = 0; i < snf.rank; ++i)
    if (snf.diagonal[i] != 1) factors.push_back(snf.diagonal[i]);
  int freeRank = static_cast<int>(liveCols.size()) - snf.rank;
  for (int i = 0; i < freeRank; ++i) factors.push_back(0);
  std::sort(factors.begin(), factors.end(), [](long long a, long long b) {
    if ((a == 0) != (b == 0)) return b == 0;  // torsion first, zeros last
    return a < b;
  });
  return factors;
}

}  // namespace pmc
