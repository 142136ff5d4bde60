#pragma once

#include "bilstm/tensor.hpp"

namespace bilstm {

// Lower-triangular Cholesky factor of a symmetric positive-definite matrix.
// Throws ErrorKind::contract if S is not square/symmetric and
// ErrorKind::not_positive_definite (with the pivot index) on a pivot that is
// <= 0 or non-finite.
Tensor cholesky(const Tensor& s);

// Solves S * X = B for SPD S via Cholesky + forward/back substitution.
// B may be a vector (rank 1) or a matrix of right-hand-side columns.
Tensor solve_spd(const Tensor& s, const Tensor& b);

// Substitution against a precomputed lower factor: solves L * L^T * X = B.
// Only the leading `k` rows/cols of L are used when k >= 0, which gives the
// factor of the leading k x k block of the original matrix.
Tensor cholesky_solve(const Tensor& l, const Tensor& b, int k = -1);

// Leading principal block copy, rows [0,r) x cols [0,c).
Tensor leading_block(const Tensor& m, int r, int c);

// General sub-block copy, rows [r0,r1) x cols [c0,c1).
Tensor block(const Tensor& m, int r0, int r1, int c0, int c1);

}  // namespace bilstm
