#include "bilstm/linalg.hpp"

#include <cmath>

namespace bilstm {

namespace {

void require_square_symmetric(const Tensor& s) {
  if (s.rank() != 2 || s.rows() != s.cols()) {
    throw Error::contract("expected square matrix, got " + shape_to_string(s.shape()));
  }
  const int n = s.rows();
  double scale = 0.0;
  for (int64_t i = 0; i < s.size(); ++i) scale = std::max(scale, std::fabs(s[i]));
  const double tol = 1e-9 * std::max(scale, 1.0);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (std::fabs(s.at(i, j) - s.at(j, i)) > tol) {
        throw Error::contract("matrix not symmetric at (" + std::to_string(i) + "," +
                              std::to_string(j) + ")");
      }
    }
  }
}

}  // namespace

Tensor cholesky(const Tensor& s) {
  require_square_symmetric(s);
  const int n = s.rows();
  Tensor l({n, n});
  for (int j = 0; j < n; ++j) {
    double d = s.at(j, j);
    const double* lj = l.data() + static_cast<int64_t>(j) * n;
    for (int k = 0; k < j; ++k) d -= lj[k] * lj[k];
    if (!(d > 0.0) || !std::isfinite(d)) {
      throw Error::not_positive_definite(
          j, "matrix is not positive definite: pivot " + std::to_string(j) + " = " +
                 std::to_string(d));
    }
    const double ljj = std::sqrt(d);
    l.at(j, j) = ljj;
    for (int i = j + 1; i < n; ++i) {
      const double* li = l.data() + static_cast<int64_t>(i) * n;
      double sum = s.at(i, j);
      for (int k = 0; k < j; ++k) sum -= li[k] * lj[k];
      l.at(i, j) = sum / ljj;
    }
  }
  return l;
}

Tensor cholesky_solve(const Tensor& l, const Tensor& b, int k) {
  const int n = (k >= 0) ? k : l.rows();
  if (l.rank() != 2 || l.rows() != l.cols() || n > l.rows()) {
    throw Error::contract("bad factor shape " + shape_to_string(l.shape()));
  }
  const bool vector_rhs = (b.rank() == 1);
  const int rhs_rows = vector_rhs ? b.extent(0) : b.rows();
  const int rhs_cols = vector_rhs ? 1 : b.cols();
  if (rhs_rows != n) {
    throw Error::contract("rhs rows " + std::to_string(rhs_rows) + " do not match system size " +
                          std::to_string(n));
  }
  Tensor x = vector_rhs ? b.reshaped({n, 1}) : b;
  const int ld = l.cols();
  // forward: L y = b
  for (int i = 0; i < n; ++i) {
    const double* li = l.data() + static_cast<int64_t>(i) * ld;
    for (int c = 0; c < rhs_cols; ++c) {
      double sum = x.at(i, c);
      for (int j = 0; j < i; ++j) sum -= li[j] * x.at(j, c);
      x.at(i, c) = sum / li[i];
    }
  }
  // back: L^T x = y
  for (int i = n - 1; i >= 0; --i) {
    for (int c = 0; c < rhs_cols; ++c) {
      double sum = x.at(i, c);
      for (int j = i + 1; j < n; ++j) sum -= l.at(j, i) * x.at(j, c);
      x.at(i, c) = sum / l.at(i, i);
    }
  }
  return vector_rhs ? x.reshaped({n}) : x;
}

Tensor solve_spd(const Tensor& s, const Tensor& b) {
  Tensor l = cholesky(s);
  return cholesky_solve(l, b);
}

Tensor leading_block(const Tensor& m, int r, int c) { return block(m, 0, r, 0, c); }

Tensor block(const Tensor& m, int r0, int r1, int c0, int c1) {
  if (m.rank() != 2 || r0 < 0 || c0 < 0 || r1 > m.rows() || c1 > m.cols() || r0 > r1 ||
      c0 > c1) {
    throw Error::contract("bad block [" + std::to_string(r0) + "," + std::to_string(r1) +
                          ")x[" + std::to_string(c0) + "," + std::to_string(c1) + ") of " +
                          shape_to_string(m.shape()));
  }
  Tensor out({r1 - r0, c1 - c0});
  for (int i = r0; i < r1; ++i) {
    for (int j = c0; j < c1; ++j) out.at(i - r0, j - c0) = m.at(i, j);
  }
  return out;
}

}  // namespace bilstm
