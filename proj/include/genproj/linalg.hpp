#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/SVD>

#include "genproj/errors.hpp"
#include "genproj/matrix.hpp"

namespace genproj {

/// Rank tolerance. The default threshold is relative to the largest
/// singular value: eps * sigma_max * max(rows, cols).
struct TolPolicy {
  double eps = 1e-10;
  std::optional<double> absolute;

  double threshold(double sigma_max, std::size_t rows, std::size_t cols) const {
    if (absolute) return *absolute;
    return eps * sigma_max * double(std::max(rows, cols));
  }
};

struct RankResult {
  int rank = 0;
  /// Singular values (float path) or pivot magnitudes (exact path), descending.
  std::vector<double> values;
  double tol_used = 0.0;
};

namespace detail {

struct Svd {
  Eigen::VectorXd sigma;
  Eigen::MatrixXcd v;  // full right singular basis
  int rank = 0;
  double tol = 0.0;
};

inline Svd svd(const CMat& a, const TolPolicy& policy, bool want_v) {
  Svd out;
  if (a.empty()) {
    out.v = Eigen::MatrixXcd::Identity(Eigen::Index(a.cols()), Eigen::Index(a.cols()));
    return out;
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> dec(to_eigen(a), want_v ? Eigen::ComputeFullV : 0);
  out.sigma = dec.singularValues();
  if (want_v) out.v = dec.matrixV();
  double smax = out.sigma.size() ? out.sigma(0) : 0.0;
  out.tol = policy.threshold(smax, a.rows(), a.cols());
  for (Eigen::Index k = 0; k < out.sigma.size(); ++k)
    if (out.sigma(k) > out.tol) ++out.rank;
  return out;
}

}  // namespace detail

/// Numerical rank from the singular values. An empty matrix has rank 0.
inline RankResult numerical_rank(const CMat& a, const TolPolicy& policy = {}) {
  auto s = detail::svd(a, policy, false);
  RankResult r;
  r.rank = s.rank;
  r.tol_used = s.tol;
  r.values.assign(s.sigma.data(), s.sigma.data() + s.sigma.size());
  return r;
}

/// Fraction-free (Bareiss) elimination with full pivoting on a copy of `a`.
/// Returns the pivots in elimination order and the permutation parity.
namespace detail {

struct BareissResult {
  std::vector<GaussRational> pivots;
  bool odd_permutation = false;
};

inline BareissResult bareiss(QMat m) {
  BareissResult out;
  const std::size_t rows = m.rows(), cols = m.cols();
  GaussRational prev(1);
  for (std::size_t k = 0; k < std::min(rows, cols); ++k) {
    std::size_t pr = rows, pc = cols;
    for (std::size_t i = k; i < rows && pr == rows; ++i)
      for (std::size_t j = k; j < cols; ++j)
        if (!m(i, j).is_zero()) {
          pr = i;
          pc = j;
          break;
        }
    if (pr == rows) break;
    if (pr != k) {
      for (std::size_t j = 0; j < cols; ++j) std::swap(m(pr, j), m(k, j));
      out.odd_permutation = !out.odd_permutation;
    }
    if (pc != k) {
      for (std::size_t i = 0; i < rows; ++i) std::swap(m(i, pc), m(i, k));
      out.odd_permutation = !out.odd_permutation;
    }
    const GaussRational pivot = m(k, k);
    for (std::size_t i = k + 1; i < rows; ++i) {
      for (std::size_t j = k + 1; j < cols; ++j) m(i, j) = (pivot * m(i, j) - m(i, k) * m(k, j)) / prev;
      m(i, k) = GaussRational(0);
    }
    out.pivots.push_back(pivot);
    prev = pivot;
  }
  return out;
}

}  // namespace detail

/// Exact rank; `values` holds the magnitudes of the nonzero pivots.
inline RankResult exact_rank(const QMat& a) {
  auto b = detail::bareiss(a);
  RankResult r;
  r.rank = int(b.pivots.size());
  for (const auto& p : b.pivots) r.values.push_back(magnitude(p));
  std::sort(r.values.begin(), r.values.end(), std::greater<>());
  return r;
}

inline GaussRational determinant(const QMat& a) {
  if (a.rows() != a.cols()) throw DimensionMismatch("determinant: matrix not square");
  if (a.rows() == 0) return GaussRational(1);
  auto b = detail::bareiss(a);
  if (b.pivots.size() < a.rows()) return GaussRational(0);
  // The last Bareiss pivot is the determinant up to the permutation sign.
  GaussRational d = b.pivots.back();
  return b.odd_permutation ? -d : d;
}

/// Gaussian elimination with partial pivoting. Throws SingularMatrix when a
/// pivot falls below pivot_tol * max|A|.
inline CVec solve(const CMat& a, const CVec& b, double pivot_tol = 1e-13) {
  const std::size_t n = a.rows();
  if (a.cols() != n) throw DimensionMismatch("solve: matrix not square");
  if (b.size() != n) throw DimensionMismatch("solve: right-hand side has wrong length");
  CMat m = a;
  CVec x = b;
  const double scale = max_abs(a);
  if (scale == 0.0 && n > 0) throw SingularMatrix("solve: zero matrix");
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(m(i, k)) > std::abs(m(p, k))) p = i;
    if (std::abs(m(p, k)) <= pivot_tol * scale) throw SingularMatrix("solve: numerically singular pivot");
    if (p != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m(p, j), m(k, j));
      std::swap(x[p], x[k]);
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      cplx f = m(i, k) / m(k, k);
      if (f == cplx(0.0)) continue;
      for (std::size_t j = k; j < n; ++j) m(i, j) -= f * m(k, j);
      x[i] -= f * x[k];
    }
  }
  for (std::size_t k = n; k-- > 0;) {
    cplx s = x[k];
    for (std::size_t j = k + 1; j < n; ++j) s -= m(k, j) * x[j];
    x[k] = s / m(k, k);
  }
  return x;
}

/// Solves A X = B column by column.
inline CMat solve(const CMat& a, const CMat& b, double pivot_tol = 1e-13) {
  CMat x(a.cols(), b.cols());
  for (std::size_t j = 0; j < b.cols(); ++j) {
    CVec col = solve(a, b.col_vec(j), pivot_tol);
    for (std::size_t i = 0; i < col.size(); ++i) x(i, j) = col[i];
  }
  return x;
}

/// Exact Gauss-Jordan elimination with full pivoting.
inline QVec solve(const QMat& a, const QVec& b) {
  const std::size_t n = a.rows();
  if (a.cols() != n) throw DimensionMismatch("solve: matrix not square");
  if (b.size() != n) throw DimensionMismatch("solve: right-hand side has wrong length");
  QMat m = a;
  QVec x = b;
  std::vector<std::size_t> colperm(n);
  for (std::size_t j = 0; j < n; ++j) colperm[j] = j;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pr = n, pc = n;
    for (std::size_t i = k; i < n && pr == n; ++i)
      for (std::size_t j = k; j < n; ++j)
        if (!m(i, j).is_zero()) {
          pr = i;
          pc = j;
          break;
        }
    if (pr == n) throw SingularMatrix("solve: exactly singular matrix");
    if (pr != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m(pr, j), m(k, j));
      std::swap(x[pr], x[k]);
    }
    if (pc != k) {
      for (std::size_t i = 0; i < n; ++i) std::swap(m(i, pc), m(i, k));
      std::swap(colperm[pc], colperm[k]);
    }
    const GaussRational pivot = m(k, k);
    for (std::size_t i = 0; i < n; ++i) {
      if (i == k || m(i, k).is_zero()) continue;
      GaussRational f = m(i, k) / pivot;
      for (std::size_t j = k; j < n; ++j) m(i, j) -= f * m(k, j);
      x[i] -= f * x[k];
    }
  }
  QVec out(n);
  for (std::size_t k = 0; k < n; ++k) out[colperm[k]] = x[k] / m(k, k);
  return out;
}

inline QMat inverse(const QMat& a) {
  const std::size_t n = a.rows();
  QMat inv(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    QVec e(n);
    e[j] = GaussRational(1);
    QVec c = solve(a, e);
    for (std::size_t i = 0; i < n; ++i) inv(i, j) = c[i];
  }
  return inv;
}

inline CMat inverse(const CMat& a, double pivot_tol = 1e-13) {
  return solve(a, CMat::identity(a.rows()), pivot_tol);
}

/// Orthonormal rows spanning the row space of `a`.
inline CMat orthonormal_rows(const CMat& a, const TolPolicy& policy = {}) {
  auto s = detail::svd(a, policy, true);
  CMat out(std::size_t(s.rank), a.cols());
  // row i of A = sum_j U_ij sigma_j conj(v_j)^T
  for (int r = 0; r < s.rank; ++r)
    for (std::size_t j = 0; j < a.cols(); ++j) out(std::size_t(r), j) = std::conj(s.v(Eigen::Index(j), r));
  return out;
}

/// Orthonormal rows spanning {x : A x = 0}.
inline CMat nullspace(const CMat& a, const TolPolicy& policy = {}) {
  auto s = detail::svd(a, policy, true);
  const std::size_t nullity = a.cols() - std::size_t(s.rank);
  CMat out(nullity, a.cols());
  for (std::size_t r = 0; r < nullity; ++r)
    for (std::size_t j = 0; j < a.cols(); ++j) out(r, j) = s.v(Eigen::Index(j), Eigen::Index(s.rank + r));
  return out;
}

/// Orthonormal rows spanning rowspan(A) ∩ rowspan(B), from the nullspace of
/// the stacked system [A^T | -B^T]. Throws DegenerateInput when A or B is
/// row-deficient.
inline CMat subspace_intersection(const CMat& a, const CMat& b, const TolPolicy& policy = {}) {
  if (a.cols() != b.cols()) throw DimensionMismatch("subspace_intersection: ambient dimensions differ");
  if (numerical_rank(a, policy).rank != int(a.rows()))
    throw DegenerateInput("subspace_intersection: first basis is row-deficient");
  if (numerical_rank(b, policy).rank != int(b.rows()))
    throw DegenerateInput("subspace_intersection: second basis is row-deficient");
  const std::size_t d = a.cols(), na = a.rows(), nb = b.rows();
  CMat m(d, na + nb);
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t i = 0; i < na; ++i) m(j, i) = a(i, j);
    for (std::size_t i = 0; i < nb; ++i) m(j, na + i) = -b(i, j);
  }
  CMat null = nullspace(m, policy);
  CMat points(null.rows(), d);
  for (std::size_t r = 0; r < null.rows(); ++r)
    for (std::size_t j = 0; j < d; ++j) {
      cplx s = 0.0;
      for (std::size_t i = 0; i < na; ++i) s += null(r, i) * a(i, j);
      points(r, j) = s;
    }
  if (points.rows() == 0) return points;
  return orthonormal_rows(points, policy);
}

/// Relative distance from v to the span of orthonormal rows q: |v - P v| / |v|.
inline double rowspan_residual(const CVec& v, const CMat& q) {
  CVec r = v;
  for (std::size_t i = 0; i < q.rows(); ++i) {
    cplx c = 0.0;
    for (std::size_t j = 0; j < q.cols(); ++j) c += std::conj(q(i, j)) * v[j];
    for (std::size_t j = 0; j < q.cols(); ++j) r[j] -= c * q(i, j);
  }
  double nv = norm2(v);
  return nv == 0.0 ? 0.0 : norm2(r) / nv;
}

/// Sine of the angle between two projective points; accurate for small angles.
inline double chordal_distance(const CVec& p, const CVec& q) {
  if (p.size() != q.size()) throw DimensionMismatch("chordal_distance: size mismatch");
  double np = norm2(p), nq = norm2(q);
  if (np == 0.0 || nq == 0.0) throw DegenerateInput("chordal_distance: zero vector is not a projective point");
  cplx c = 0.0;
  for (std::size_t j = 0; j < p.size(); ++j) c += std::conj(q[j]) * p[j];
  c /= nq * nq;
  double s = 0.0;
  for (std::size_t j = 0; j < p.size(); ++j) s += std::norm(p[j] - c * q[j]);
  return std::min(1.0, std::sqrt(s) / np);
}

}  // namespace genproj
