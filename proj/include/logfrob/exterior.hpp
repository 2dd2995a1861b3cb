// Combinatorics of the lex-ordered wedge basis of Lambda^i(F_p^n).
// Basis elements are subsets of {0..n-1} encoded as bitmasks; index order is
// lexicographic on the increasing element tuples.

#ifndef LOGFROB_EXTERIOR_HPP
#define LOGFROB_EXTERIOR_HPP

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "logfrob/fp.hpp"
#include "logfrob/linalg.hpp"

namespace logfrob {

int binom(int n, int k);

// All i-subsets of {0..n-1} as bitmasks, in lex order of element tuples.
const std::vector<uint32_t>& wedge_masks(int n, int i);

// Index of mask within wedge_masks(n, popcount(mask)).
int wedge_index(int n, uint32_t mask);

// Sign (-1)^inversions of merging the increasing tuples of a and b;
// 0 if they intersect.
int wedge_sign(uint32_t a, uint32_t b);

// Sign of removing element `el` from mask: (-1)^(position of el in mask).
int removal_sign(uint32_t mask, int el);

// Matrix of (v wedge .) : Lambda^i -> Lambda^(i+1) for v in F_p^n.
MatF wedge_by_vector(const VecF& v, int n, int i);

// Matrix of contraction with an integer covector/ray rho:
// Lambda^i -> Lambda^(i-1).
MatF contraction_by(const Eigen::VectorXi& rho, int n, int i);

// Wedge of rows: given k vectors in F_p^n (rows of m), their wedge as a
// vector in Lambda^k(F_p^n).
VecF wedge_rows(const MatF& rows, int n);

// Lambda^i of a linear map a : F_p^n -> F_p^m in the lex bases (minors).
MatF exterior_power(const MatF& a, int i);

} // namespace logfrob

#endif
