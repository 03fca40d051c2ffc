#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "genproj/certificate.hpp"
#include "genproj/errors.hpp"
#include "genproj/linalg.hpp"
#include "genproj/poly.hpp"
#include "genproj/random.hpp"
#include "genproj/variety.hpp"

namespace genproj {

/// A local graph u -> (u, f(u)) that can report second-order jets of f.
/// GraphVariety and NormalizedChart both qualify.
template <class G>
concept GraphSource = requires(const G& g, std::span<const cplx> u) {
  { g.dim() } -> std::convertible_to<std::size_t>;
  { g.is_normalized() } -> std::convertible_to<bool>;
  { g.jet(u) } -> std::same_as<CJet2>;
};

struct SamplingOptions {
  int trials = 100;
  double box = 0.1;
  std::uint64_t seed = 1;
  TolPolicy tol{};
};

// ---------------------------------------------------------------------------
// Tangent frames

/// Rows spanning the affine cone over the projective tangent space:
/// row 0 is the point [1 : x], rows 1..n are the directions [0 : dx/du_j].
template <class S>
struct TangentFrame {
  Matrix<S> rows;
};

namespace detail {

template <class S>
TangentFrame<S> frame_from_jet(std::span<const S> u, const Vec<S>& value, const Matrix<S>& jac, bool graph) {
  const std::size_t n = jac.cols();
  const std::size_t amb = graph ? 2 * n : value.size();
  TangentFrame<S> t{Matrix<S>(n + 1, amb + 1)};
  t.rows(0, 0) = S(1);
  if (graph) {
    for (std::size_t k = 0; k < n; ++k) {
      t.rows(0, 1 + k) = u[k];
      t.rows(0, 1 + n + k) = value[k];
      t.rows(1 + k, 1 + k) = S(1);
      for (std::size_t i = 0; i < n; ++i) t.rows(1 + k, 1 + n + i) = jac(i, k);
    }
  } else {
    for (std::size_t i = 0; i < amb; ++i) {
      t.rows(0, 1 + i) = value[i];
      for (std::size_t k = 0; k < n; ++k) t.rows(1 + k, 1 + i) = jac(i, k);
    }
  }
  return t;
}

}  // namespace detail

template <class S>
TangentFrame<S> tangent_frame(const GraphVariety& g, std::span<const S> u) {
  if (u.size() != g.dim()) throw DimensionMismatch("tangent_frame: point has wrong length");
  auto j = g.map().jet2<S>(u);
  return detail::frame_from_jet<S>(u, j.value, j.jacobian, true);
}

template <class S>
TangentFrame<S> tangent_frame(const GraphVariety& g, const Vec<S>& u) {
  return tangent_frame<S>(g, std::span<const S>(u));
}

/// Frame of the parametrized variety at psi(u), in the original coordinates.
template <class S>
TangentFrame<S> tangent_frame(const ParamVariety& v, const Vec<S>& u) {
  if (u.size() != v.dim()) throw DimensionMismatch("tangent_frame: point has wrong length");
  auto j = v.map().jet2<S>(u);
  return detail::frame_from_jet<S>(std::span<const S>(u), j.value, j.jacobian, false);
}

/// Frame in chart coordinates (v, f~(v)).
inline TangentFrame<cplx> tangent_frame(const NormalizedChart& c, const CVec& v) {
  auto j = c.jet(v);
  return detail::frame_from_jet<cplx>(std::span<const cplx>(v), j.value, j.jacobian, true);
}

// ---------------------------------------------------------------------------
// Hessian contraction and the fullness test

/// H(u)[i][j] = sum_k T[i][j][k] u_k.
template <class S>
Matrix<S> hessian_contraction(const HessianTensor<S>& t, std::span<const S> u) {
  const std::size_t m = t.size();
  const std::size_t n = m ? t.front().rows() : 0;
  if (u.size() != n) throw DimensionMismatch("hessian_contraction: vector has wrong length");
  Matrix<S> h(m, n);
  for (std::size_t i = 0; i < m; ++i) {
    if (t[i].rows() != n || t[i].cols() != n) throw DimensionMismatch("hessian_contraction: ragged tensor");
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        if (!is_zero(t[i](j, k))) h(i, j) += t[i](j, k) * u[k];
  }
  return h;
}

template <class S>
Matrix<S> hessian_contraction(const HessianTensor<S>& t, const Vec<S>& u) {
  return hessian_contraction<S>(t, std::span<const S>(u));
}

namespace detail {

inline Polynomial laplace_determinant(const std::vector<std::vector<Polynomial>>& m, std::size_t num_vars) {
  const std::size_t n = m.size();
  if (n == 0) return Polynomial::constant(num_vars, GaussRational(1));
  if (n == 1) return m[0][0];
  Polynomial det(num_vars);
  for (std::size_t c = 0; c < n; ++c) {
    if (m[0][c].is_zero()) continue;
    std::vector<std::vector<Polynomial>> minor;
    for (std::size_t r = 1; r < n; ++r) {
      std::vector<Polynomial> row;
      for (std::size_t k = 0; k < n; ++k)
        if (k != c) row.push_back(m[r][k]);
      minor.push_back(std::move(row));
    }
    Polynomial term = m[0][c] * laplace_determinant(minor, num_vars);
    if (c % 2) det -= term;
    else det += term;
  }
  return det;
}

}  // namespace detail

/// det H(u) as a polynomial in u (cofactor expansion; intended for n <= 4).
inline Polynomial contraction_determinant(const HessianTensor<GaussRational>& t) {
  const std::size_t n = t.size();
  std::vector<std::vector<Polynomial>> h(n, std::vector<Polynomial>(n, Polynomial(n)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) h[i][j] += t[i](j, k) * Polynomial::variable(n, k);
  return detail::laplace_determinant(h, n);
}

struct TanCheckOptions {
  int trials = 100;              // Schwartz-Zippel evaluations s
  std::uint64_t seed = 1;
  std::size_t symbolic_max_dim = 4;
  std::optional<Method> force_method;
};

/// Decides whether det(f_uu(0) . u) vanishes identically, given the exact
/// tensor f_uu(0). Holds means the tangent variety fills P^{2n}.
inline Certificate tan_is_full(const HessianTensor<GaussRational>& t, const TanCheckOptions& opts = {}) {
  const std::size_t n = t.size();
  for (const auto& slice : t)
    if (slice.rows() != n || slice.cols() != n) throw DimensionMismatch("tan_is_full: tensor must be n x n x n");
  Method method = opts.force_method.value_or(n <= opts.symbolic_max_dim ? Method::ExactSymbolic
                                                                         : Method::SchwartzZippel);
  Certificate cert;
  cert.method = method;
  cert.stats["n"] = double(n);

  if (method == Method::ExactSymbolic) {
    Polynomial det = contraction_determinant(t);
    cert.trials = 1;
    cert.detail = "det H(u) = " + det.to_string();
    cert.stats["det_degree"] = det.degree();
    if (det.is_zero()) {
      cert.verdict = Verdict::Fails;
      return cert;
    }
    // A nonzero polynomial of degree <= n has a nonvanishing point in {1..n+1}^n.
    QVec u(n, GaussRational(1));
    for (;;) {
      GaussRational value = det.eval<GaussRational>(u);
      if (!value.is_zero()) {
        cert.verdict = Verdict::Holds;
        cert.successes = 1;
        cert.witness = to_complex(u);
        std::ostringstream os;
        os << value;
        cert.detail += "; witness value " + os.str();
        return cert;
      }
      std::size_t k = 0;
      while (k < n && u[k] == GaussRational(static_cast<long long>(n) + 1)) u[k++] = GaussRational(1);
      if (k == n) break;
      u[k] += GaussRational(1);
    }
    throw Error("tan_is_full: nonzero determinant without a witness on the grid");
  }

  if (method != Method::SchwartzZippel) throw Error("tan_is_full: unsupported method");
  const int s = std::max(1, opts.trials);
  const std::int64_t bound = 2 * std::int64_t(n) * s;
  cert.stats["sample_bound"] = double(bound);
  for (int trial = 0; trial < s; ++trial) {
    Rng rng = stream_rng(opts.seed, std::uint64_t(trial));
    QVec u = random_rational_point(n, bound, rng);
    GaussRational value = determinant(hessian_contraction(t, u));
    cert.trials = trial + 1;
    if (!value.is_zero()) {
      cert.verdict = Verdict::Holds;
      cert.successes = 1;
      cert.witness = to_complex(u);
      std::ostringstream os;
      os << value;
      cert.detail = "det H(witness) = " + os.str();
      return cert;
    }
  }
  cert.verdict = Verdict::Fails;
  cert.stats["error_bound"] = std::pow(double(n) / (2.0 * double(bound)), s);
  cert.detail = "det H vanished at all " + std::to_string(s) + " sample points";
  return cert;
}

/// Fullness test for a graph normalized at the origin; throws NotNormalized.
inline Certificate tan_is_full(const GraphVariety& g, const TanCheckOptions& opts = {}) {
  if (!g.is_normalized()) throw NotNormalized("tan_is_full: f(0) and f_u(0) must vanish");
  return tan_is_full(g.hessian_at_origin(), opts);
}

/// Random integer base point where Dpsi has exact rank n, drawn from `seed`.
inline QVec immersive_base_point(const ParamVariety& v, std::uint64_t seed) {
  for (std::uint64_t attempt = 0; attempt < 8; ++attempt) {
    Rng rng = stream_rng(seed ^ 0x5bd1e995ull, attempt);
    QVec u0 = random_rational_point(v.dim(), 100, rng);
    if (exact_rank(v.map().jet2<GaussRational>(u0).jacobian).rank == int(v.dim())) return u0;
  }
  throw RankDeficientJacobian("immersive_base_point: no immersive base point found");
}

/// Fullness test for a parametrization, via the exact normalized chart at
/// immersive_base_point(v, opts.seed).
inline Certificate tan_is_full(const ParamVariety& v, const TanCheckOptions& opts = {}) {
  return tan_is_full(chart_hessian_exact(v, immersive_base_point(v, opts.seed)), opts);
}

/// Differential of (u, xi) -> (u + xi, f(u) + f_u(u) xi):
///   [[E, E], [f_u(u) + f_uu(u) xi, f_u(u)]].
/// At u = 0 on a normalized graph this is [[E, E], [H(xi), 0]].
template <class S>
Matrix<S> tangent_bundle_matrix(const GraphVariety& g, const Vec<S>& u, const Vec<S>& xi) {
  const std::size_t n = g.dim();
  if (u.size() != n || xi.size() != n) throw DimensionMismatch("tangent_bundle_matrix: wrong vector length");
  auto j = g.map().jet2<S>(u);
  Matrix<S> h = hessian_contraction(j.hessian, xi);
  Matrix<S> m(2 * n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    m(i, i) = S(1);
    m(i, n + i) = S(1);
    for (std::size_t k = 0; k < n; ++k) {
      m(n + i, k) = j.jacobian(i, k) + h(i, k);
      m(n + i, n + k) = j.jacobian(i, k);
    }
  }
  return m;
}

/// Rank of the tangent-bundle differential; exact for rational inputs.
/// Cross-check: equals n + rank(f_uu(u) . xi).
template <class S>
RankResult tangent_bundle_rank_check(const GraphVariety& g, const Vec<S>& u, const Vec<S>& xi,
                                     const TolPolicy& tol = {}) {
  if (!g.is_normalized()) throw NotNormalized("tangent_bundle_rank_check: graph is not normalized");
  Matrix<S> m = tangent_bundle_matrix(g, u, xi);
  if constexpr (is_exact_v<S>) {
    (void)tol;
    return exact_rank(m);
  } else {
    return numerical_rank(m, tol);
  }
}

template <class S>
RankResult tangent_bundle_rank_check(const GraphVariety& g, const Vec<S>& xi, const TolPolicy& tol = {}) {
  return tangent_bundle_rank_check(g, Vec<S>(g.dim()), xi, tol);
}

/// Exact rank of [[E, E], [H(xi), 0]] built from a tensor f_uu(0) alone.
inline RankResult tangent_bundle_rank_check(const HessianTensor<GaussRational>& t, const QVec& xi) {
  const std::size_t n = t.size();
  QMat h = hessian_contraction(t, xi);
  QMat m(2 * n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    m(i, i) = GaussRational(1);
    m(i, n + i) = GaussRational(1);
    for (std::size_t k = 0; k < n; ++k) m(n + i, k) = h(i, k);
  }
  return exact_rank(m);
}

// ---------------------------------------------------------------------------
// Secant dimension

struct SecantEstimate {
  int dimension = -1;
  std::map<int, int> rank_histogram;
  Certificate certificate;  // claim: Sec X = P^{2n}
};

/// dim Sec X from the rank of two stacked tangent frames at random pairs.
template <class V>
SecantEstimate secant_dim_estimate(const V& variety, const SamplingOptions& opts) {
  const std::size_t n = variety.dim();
  const int full = int(2 * n + 1);
  SecantEstimate out;
  int max_rank = 0, full_count = 0;
  for (int t = 0; t < opts.trials; ++t) {
    Rng rng = stream_rng(opts.seed, std::uint64_t(t));
    CVec u = random_point(n, opts.box, rng);
    CVec v = random_point(n, opts.box, rng);
    CMat stack = CMat::stack(tangent_frame<cplx>(variety, u).rows, tangent_frame<cplx>(variety, v).rows);
    int r = numerical_rank(stack, opts.tol).rank;
    out.rank_histogram[r]++;
    max_rank = std::max(max_rank, r);
    if (r == full) ++full_count;
  }
  out.dimension = max_rank - 1;
  auto& c = out.certificate;
  c.method = Method::FloatSampling;
  c.trials = opts.trials;
  c.successes = full_count;
  c.tolerance = opts.tol.eps;
  c.verdict = sampling_verdict(full_count, opts.trials);
  c.stats["dimension"] = out.dimension;
  c.detail = "dim Sec X = " + std::to_string(out.dimension) + " (max stacked rank - 1)";
  return out;
}

// ---------------------------------------------------------------------------
// Tangent intersections and the point map p

/// Orthonormal rows spanning rowspan(F1) ∩ rowspan(F2).
inline CMat frame_intersection(const TangentFrame<cplx>& f1, const TangentFrame<cplx>& f2,
                               const TolPolicy& tol = {}) {
  return subspace_intersection(f1.rows, f2.rows, tol);
}

/// Scales a projective point so its largest-modulus coordinate is 1.
inline CVec normalize_projective(CVec p) {
  std::size_t m = 0;
  for (std::size_t j = 1; j < p.size(); ++j)
    if (std::abs(p[j]) > std::abs(p[m])) m = j;
  if (p.empty() || p[m] == cplx(0.0)) throw DegenerateInput("normalize_projective: zero vector");
  cplx s = p[m];
  for (auto& x : p) x /= s;
  p[m] = 1.0;
  return p;
}

/// The unique point of t_x X ∩ t_y X. Throws NonTransverse if the linear
/// intersection is not one-dimensional.
inline CVec tangent_intersection(const TangentFrame<cplx>& f1, const TangentFrame<cplx>& f2,
                                 const TolPolicy& tol = {}) {
  CMat inter = frame_intersection(f1, f2, tol);
  if (inter.rows() != 1)
    throw NonTransverse("tangent_intersection: intersection has projective dimension " +
                            std::to_string(int(inter.rows()) - 1),
                        int(inter.rows()));
  return normalize_projective(inter.row_vec(0));
}

namespace detail {

inline CVec tangent_solve(const CMat& fu, const CVec& rhs) {
  try {
    return solve(fu, rhs);
  } catch (const SingularMatrix&) {
    throw SingularTangentJacobian("f_u(u) is singular");
  }
}

}  // namespace detail

/// p(u) = u - f_u(u)^{-1} f(u): the point (p(u), 0) where the tangent space
/// at (u, f(u)) meets C^n x 0.
template <GraphSource G>
CVec p_map(const G& g, const CVec& u) {
  if (!g.is_normalized()) throw NotNormalized("p_map: graph is not normalized");
  CJet2 j = g.jet(std::span<const cplx>(u));
  CVec w = detail::tangent_solve(j.jacobian, j.value);
  return u - w;
}

/// dp(eta) = f_u^{-1} f_uu[f_u^{-1} f, eta], column j = dp(e_j).
template <GraphSource G>
CMat p_jacobian_closed(const G& g, const CVec& u) {
  if (!g.is_normalized()) throw NotNormalized("p_jacobian_closed: graph is not normalized");
  CJet2 j = g.jet(std::span<const cplx>(u));
  CVec w = detail::tangent_solve(j.jacobian, j.value);
  CMat m = hessian_contraction<cplx>(j.hessian, w);
  try {
    return solve(j.jacobian, m);
  } catch (const SingularMatrix&) {
    throw SingularTangentJacobian("f_u(u) is singular");
  }
}

/// Central differences of p_map with step h * max(1, |u|).
template <GraphSource G>
CMat p_jacobian_fd(const G& g, const CVec& u, double h = 1e-5) {
  const std::size_t n = g.dim();
  const double step = h * std::max(1.0, norm2(u));
  CMat jac(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    CVec up = u, um = u;
    up[k] += step;
    um[k] -= step;
    CVec d = p_map(g, up) - p_map(g, um);
    for (std::size_t i = 0; i < n; ++i) jac(i, k) = d[i] / (2.0 * step);
  }
  return jac;
}

/// Samples u in a small complex box and checks that dp has rank n.
/// Samples where f_u(u) is singular are counted separately and excluded
/// from `trials`.
template <GraphSource G>
Certificate dominance_certificate(const G& g, const SamplingOptions& opts = {}) {
  const std::size_t n = g.dim();
  Certificate c;
  c.method = Method::FloatSampling;
  c.tolerance = opts.tol.eps;
  int singular = 0, evaluated = 0, full = 0;
  for (int t = 0; t < opts.trials; ++t) {
    Rng rng = stream_rng(opts.seed, std::uint64_t(t));
    CVec u = random_point(n, opts.box, rng);
    try {
      CMat dp = p_jacobian_closed(g, u);
      ++evaluated;
      if (numerical_rank(dp, opts.tol).rank == int(n)) {
        ++full;
        if (!c.witness) c.witness = u;
      }
    } catch (const SingularTangentJacobian&) {
      ++singular;
    }
  }
  c.trials = evaluated;
  c.successes = full;
  c.verdict = evaluated == 0 ? Verdict::Fails : sampling_verdict(full, evaluated);
  c.stats["requested"] = opts.trials;
  c.stats["singular_tangent_jacobian"] = singular;
  c.stats["box"] = opts.box;
  c.detail = std::to_string(full) + "/" + std::to_string(evaluated) + " samples with rank dp = n; " +
             std::to_string(singular) + " singular f_u";
  return c;
}

}  // namespace genproj
