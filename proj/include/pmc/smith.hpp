// Smith normal form over the integers, plus a sparse prereduction for the
// large relator matrices coming out of classifier components.
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace pmc {

struct SmithResult {
  // diagonal entries d1 | d2 | ... (nonnegative), padded with 0 up to min(rows, cols)
  std::vector<long long> diagonal;
  int rank = 0;  // number of nonzero diagonal entries
  bool overflow = false;
};

// classic dense SNF; returns overflow=true instead of wrong answers when
// intermediate entries leave the safe int64 range
SmithResult smith_normal_form(std::vector<std::vector<long long>> m);

// sparse triple (row, col, value)
struct SparseMat {
  int rows = 0;
  int cols = 0;
  std::vector<std::pair<std::pair<int, int>, long long>> entries;
};

// H1 invariant factors of coker(M^T ...): for a relator matrix (rows = relators,
// cols = generators) returns the non-unit invariant factors of Z^cols / rowspan(M),
// with one 0 per free rank. Empty result means the quotient is trivial.
// Uses unimodular pivoting on +-1 entries to shrink the problem, then dense SNF.
std::optional<std::vector<long long>> cokernel_invariant_factors(const SparseMat& m);

}  // namespace pmc
