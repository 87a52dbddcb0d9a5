#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace wallspace {

/// Column-major sparse integer matrix.
struct SparseIntMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<std::vector<std::pair<int, std::int64_t>>> columns;

  SparseIntMatrix() = default;
  SparseIntMatrix(int r, int c) : rows(r), cols(c), columns(c) {}
  void add(int row, int col, std::int64_t v);
};

struct SmithResult {
  int rank = 0;
  std::vector<std::int64_t> invariant_factors;  // nonzero diagonal, ascending divisibility
};

/// Smith normal form by sparse unit-pivot elimination, finished densely on the residual core.
SmithResult smith_normal_form(const SparseIntMatrix& m);

/// Dense reference implementation (used for small matrices and as a test oracle).
SmithResult smith_normal_form_dense(std::vector<std::vector<std::int64_t>> a);

struct H1Result {
  int betti_1 = 0;
  std::vector<std::int64_t> torsion;
  friend bool operator==(const H1Result& a, const H1Result& b) {
    return a.betti_1 == b.betti_1 && a.torsion == b.torsion;
  }
};

/// H1 from boundary matrices d1 (edges -> vertices) and d2 (faces -> edges).
H1Result h1_from_boundaries(const SparseIntMatrix& d1, const SparseIntMatrix& d2);

}  // namespace wallspace
