#pragma once

// Named algebras and structures used across several test files.

#include "support.hpp"

namespace aalg::testing {

struct Term {
  int k, i, j;  // d f^{k+1} gets coeff * f^{(i+1)(j+1)}
  Q coeff = 1;
};

inline LieAlgebra<Q> from_tuples(int dim, const std::vector<Term>& terms) {
  StructureConstants<Q> c(dim);
  for (const auto& t : terms) {
    c(t.k, t.i, t.j) -= t.coeff;
    c(t.k, t.j, t.i) += t.coeff;
  }
  return LieAlgebra<Q>::validate(c);
}

inline LieAlgebra<Q> aff2_2r() { return from_tuples(4, {{0, 0, 1}}); }
inline LieAlgebra<Q> h3_r() { return from_tuples(4, {{3, 0, 1}}); }
inline LieAlgebra<Q> g4() { return from_tuples(6, {{0, 0, 5}, {1, 1, 5}, {2, 2, 5}, {3, 3, 5}}); }
inline LieAlgebra<Q> b2() { return from_tuples(6, {{0, 0, 5}, {1, 2, 5}, {3, 4, 5}}); }

inline ComplexStructure<Q> pairs_j(std::size_t dim, const std::vector<std::pair<int, int>>& p) {
  return ComplexStructure<Q>::from_pairs(dim, p);
}

inline Matrix<Q> aff2_metric_prime() { return Matrix<Q>{{2, 0, 1, 0}, {0, 2, 0, 1}, {1, 0, 1, 0}, {0, 1, 0, 1}}; }

inline Matrix<Q> b2_metric_prime() {
  Matrix<Q> g = Matrix<Q>::diagonal({3, 1, 1, 1, 1, 3});
  for (auto [i, j] : std::vector<std::pair<int, int>>{{0, 1}, {0, 2}, {3, 5}, {4, 5}}) {
    g(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = 1;
    g(static_cast<std::size_t>(j), static_cast<std::size_t>(i)) = 1;
  }
  return g;
}

inline HermitianStructure<Q> aff2_structure(bool prime) {
  return HermitianStructure<Q>(aff2_2r(), pairs_j(4, {{0, 1}, {2, 3}}),
                               Metric<Q>(prime ? aff2_metric_prime() : Matrix<Q>::identity(4)));
}

inline HermitianStructure<Q> b2_structure(bool prime) {
  return HermitianStructure<Q>(b2(), pairs_j(6, {{0, 5}, {1, 3}, {2, 4}}),
                               Metric<Q>(prime ? b2_metric_prime() : Matrix<Q>::identity(6)));
}

inline HermitianStructure<Q> g4_structure() {
  return HermitianStructure<Q>(g4(), pairs_j(6, {{0, 1}, {2, 3}, {4, 5}}), Metric<Q>::identity(6));
}

inline HermitianStructure<Q> h3_structure() {
  return HermitianStructure<Q>(h3_r(), pairs_j(4, {{0, 1}, {2, 3}}), Metric<Q>::identity(4));
}

/// s_{2n}: a, A = [[-a/2, 1], [-1, -a/2]] + rotation blocks c, v = 0.
inline HermitianData<Q> s2n_data(int n, const Q& a, const Q& c) {
  std::vector<Matrix<Q>> blocks{Matrix<Q>{{-a / 2, 1}, {-1, -a / 2}}};
  for (int k = 1; k < n - 1; ++k) blocks.push_back(Matrix<Q>{{0, c}, {-c, 0}});
  Matrix<Q> A = block_diagonal(blocks);
  return make_data(a, Vector<Q>{}, A, paired_j1<Q>(A.rows()));
}

}  // namespace aalg::testing
