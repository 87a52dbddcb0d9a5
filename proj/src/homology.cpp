#include "wallspace/homology.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

namespace wallspace {

void SparseIntMatrix::add(int row, int col, std::int64_t v) {
  if (v == 0) return;
  auto& c = columns[col];
  for (auto& [r, x] : c)
    if (r == row) {
      x += v;
      if (x == 0) c.erase(std::find_if(c.begin(), c.end(), [&](auto& p) { return p.first == row; }));
      return;
    }
  c.emplace_back(row, v);
}

namespace {

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("integer overflow in Smith normal form");
  return r;
}

std::int64_t checked_sub(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_sub_overflow(a, b, &r)) throw std::overflow_error("integer overflow in Smith normal form");
  return r;
}

std::vector<std::int64_t> normalize_diagonal(std::vector<std::int64_t> d) {
  for (auto& x : d) x = std::llabs(x);
  d.erase(std::remove(d.begin(), d.end(), 0), d.end());
  // enforce divisibility chain
  for (size_t i = 0; i < d.size(); ++i)
    for (size_t j = i + 1; j < d.size(); ++j) {
      std::int64_t g = std::gcd(d[i], d[j]);
      std::int64_t l = checked_mul(d[i] / g, d[j]);
      d[i] = g;
      d[j] = l;
    }
  std::sort(d.begin(), d.end());
  return d;
}

}  // namespace

SmithResult smith_normal_form_dense(std::vector<std::vector<std::int64_t>> a) {
  int m = static_cast<int>(a.size());
  int n = m ? static_cast<int>(a[0].size()) : 0;
  std::vector<std::int64_t> diag;
  for (int t = 0; t < std::min(m, n); ++t) {
    while (true) {
      int pr = -1, pc = -1;
      std::int64_t best = 0;
      for (int i = t; i < m; ++i)
        for (int j = t; j < n; ++j)
          if (a[i][j] != 0 && (best == 0 || std::llabs(a[i][j]) < best)) {
            best = std::llabs(a[i][j]);
            pr = i;
            pc = j;
          }
      if (pr < 0) return {static_cast<int>(normalize_diagonal(diag).size()), normalize_diagonal(diag)};
      std::swap(a[t], a[pr]);
      for (auto& row : a) std::swap(row[t], row[pc]);
      bool clean = true;
      std::int64_t p = a[t][t];
      for (int i = t + 1; i < m; ++i) {
        std::int64_t q = a[i][t] / p;
        if (q != 0)
          for (int j = t; j < n; ++j) a[i][j] = checked_sub(a[i][j], checked_mul(q, a[t][j]));
        if (a[i][t] != 0) clean = false;
      }
      for (int j = t + 1; j < n; ++j) {
        std::int64_t q = a[t][j] / p;
        if (q != 0)
          for (int i = t; i < m; ++i) a[i][j] = checked_sub(a[i][j], checked_mul(q, a[i][t]));
        if (a[t][j] != 0) clean = false;
      }
      if (clean) break;
    }
    diag.push_back(a[t][t]);
  }
  auto d = normalize_diagonal(diag);
  return {static_cast<int>(d.size()), d};
}

SmithResult smith_normal_form(const SparseIntMatrix& mat) {
  const int m = mat.rows, n = mat.cols;
  std::vector<std::map<int, std::int64_t>> col(n);
  std::vector<std::set<int>> row(m);
  for (int c = 0; c < n; ++c)
    for (auto [r, v] : mat.columns[c])
      if (v != 0) {
        col[c][r] += v;
        if (col[c][r] == 0) col[c].erase(r);
      }
  for (int c = 0; c < n; ++c)
    for (auto& [r, v] : col[c]) row[r].insert(c);

  std::vector<char> col_alive(n, 1), row_alive(m, 1);
  int rank = 0;

  auto drop_column = [&](int c) {
    for (auto& [r, v] : col[c]) row[r].erase(c);
    col[c].clear();
    col_alive[c] = 0;
  };
  auto drop_row = [&](int r) {
    for (int c : row[r]) col[c].erase(r);
    row[r].clear();
    row_alive[r] = 0;
  };

  // fill-free pivots: unit entries alone in their row or column
  bool progress = true;
  while (progress) {
    progress = false;
    for (int r = 0; r < m; ++r) {
      if (!row_alive[r] || row[r].size() != 1) continue;
      int c = *row[r].begin();
      if (std::llabs(col[c].at(r)) != 1) continue;
      drop_column(c);
      drop_row(r);
      ++rank;
      progress = true;
    }
    for (int c = 0; c < n; ++c) {
      if (!col_alive[c] || col[c].size() != 1) continue;
      auto [r, v] = *col[c].begin();
      if (std::llabs(v) != 1) continue;
      drop_row(r);
      drop_column(c);
      ++rank;
      progress = true;
    }
  }

  // unit pivots with fill, sparsest first
  while (true) {
    int pc = -1, pr = -1;
    size_t best = SIZE_MAX;
    for (int c = 0; c < n; ++c) {
      if (!col_alive[c] || col[c].empty()) continue;
      for (auto& [r, v] : col[c]) {
        if (std::llabs(v) != 1) continue;
        size_t cost = (col[c].size() - 1) * (row[r].size() - 1);
        if (cost < best) {
          best = cost;
          pc = c;
          pr = r;
        }
      }
      if (best == 0) break;
    }
    if (pc < 0) break;
    std::int64_t p = col[pc].at(pr);
    std::vector<int> others(row[pr].begin(), row[pr].end());
    for (int c2 : others) {
      if (c2 == pc) continue;
      std::int64_t f = col[c2].at(pr) * p;  // p = +-1 so f = a/p
      for (auto& [r, v] : col[pc]) {
        std::int64_t nv = checked_sub(col[c2].count(r) ? col[c2][r] : 0, checked_mul(f, v));
        if (nv == 0) {
          col[c2].erase(r);
          row[r].erase(c2);
        } else {
          col[c2][r] = nv;
          row[r].insert(c2);
        }
      }
    }
    drop_column(pc);
    drop_row(pr);
    ++rank;
  }

  // dense finish on the residual core
  std::vector<int> rows_left, cols_left;
  for (int c = 0; c < n; ++c)
    if (col_alive[c] && !col[c].empty()) cols_left.push_back(c);
  std::map<int, int> row_pos;
  for (int c : cols_left)
    for (auto& [r, v] : col[c])
      if (!row_pos.count(r)) row_pos[r] = 0;
  int k = 0;
  for (auto& [r, idx] : row_pos) idx = k++;
  std::vector<std::vector<std::int64_t>> dense(row_pos.size(), std::vector<std::int64_t>(cols_left.size(), 0));
  for (size_t j = 0; j < cols_left.size(); ++j)
    for (auto& [r, v] : col[cols_left[j]]) dense[row_pos[r]][j] = v;
  SmithResult core = smith_normal_form_dense(std::move(dense));
  SmithResult out;
  out.rank = rank + core.rank;
  out.invariant_factors.assign(rank, 1);
  out.invariant_factors.insert(out.invariant_factors.end(), core.invariant_factors.begin(),
                               core.invariant_factors.end());
  out.invariant_factors = normalize_diagonal(out.invariant_factors);
  return out;
}

H1Result h1_from_boundaries(const SparseIntMatrix& d1, const SparseIntMatrix& d2) {
  SmithResult s1 = smith_normal_form(d1);
  SmithResult s2 = smith_normal_form(d2);
  H1Result h;
  h.betti_1 = (d1.cols - s1.rank) - s2.rank;
  for (auto f : s2.invariant_factors)
    if (f > 1) h.torsion.push_back(f);
  return h;
}

}  // namespace wallspace
