#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "genproj/errors.hpp"
#include "genproj/linalg.hpp"
#include "genproj/newton.hpp"
#include "genproj/poly.hpp"
#include "genproj/random.hpp"

namespace genproj {

/// Hessian tensor of an n-to-m map: m symmetric n x n slices.
template <class S>
using HessianTensor = std::vector<Matrix<S>>;

/// n-fold in affine C^{2n} given as the graph u -> (u, f(u)).
class GraphVariety {
public:
  explicit GraphVariety(PolyMap f) : f_(std::move(f)) {
    if (f_.num_vars() == 0) throw DimensionMismatch("GraphVariety: dimension must be positive");
    if (f_.size() != f_.num_vars())
      throw DimensionMismatch("GraphVariety: f must have as many components as variables");
    normalized_ = true;
    for (const auto& c : f_.components())
      for (const auto& [e, coeff] : c.terms())
        if (total_degree(e) <= 1) normalized_ = false;
  }

  std::size_t dim() const noexcept { return f_.num_vars(); }
  std::size_t ambient_dim() const noexcept { return 2 * dim(); }
  const PolyMap& map() const noexcept { return f_; }

  /// f(0) = 0 and f_u(0) = 0, checked exactly on the coefficients.
  bool is_normalized() const noexcept { return normalized_; }

  template <class S>
  Jet2<S> jet(std::span<const S> u) const {
    return f_.template jet2<S>(u);
  }
  template <class S>
  Jet2<S> jet(const Vec<S>& u) const {
    return f_.template jet2<S>(std::span<const S>(u));
  }

  /// f_uu(0), exact.
  HessianTensor<GaussRational> hessian_at_origin() const {
    QVec zero(dim());
    return f_.jet2<GaussRational>(zero).hessian;
  }

private:
  PolyMap f_;
  bool normalized_ = false;
};

/// Re-expands G around u0 as the normalized graph v -> f(u0+v) - f(u0) - f_u(u0) v.
/// This is the affine change of coordinates (u, y) -> (u - u0, y - f(u0) - f_u(u0)(u - u0)).
inline GraphVariety recenter(const GraphVariety& g, const QVec& u0) {
  const std::size_t n = g.dim();
  if (u0.size() != n) throw DimensionMismatch("recenter: base point has wrong length");
  auto j = g.map().jet2<GaussRational>(u0);
  std::vector<Polynomial> comps;
  for (std::size_t i = 0; i < n; ++i) {
    Polynomial p = g.map()[i].shifted(u0);
    p -= Polynomial::constant(n, j.value[i]);
    for (std::size_t k = 0; k < n; ++k) p -= j.jacobian(i, k) * Polynomial::variable(n, k);
    comps.push_back(std::move(p));
  }
  return GraphVariety(PolyMap(n, std::move(comps)));
}

/// n-fold in affine C^{2n} given by a polynomial parametrization psi: C^n -> C^{2n}.
class ParamVariety {
public:
  /// Certifies generic immersivity: the Jacobian of psi must have exact rank n
  /// at one of a few random integer points drawn from `seed`.
  explicit ParamVariety(PolyMap psi, std::uint64_t seed = 1) : psi_(std::move(psi)) {
    const std::size_t n = psi_.num_vars();
    if (n == 0) throw DimensionMismatch("ParamVariety: dimension must be positive");
    if (psi_.size() != 2 * n) throw DimensionMismatch("ParamVariety: psi must have 2n components");
    for (std::uint64_t attempt = 0; attempt < 3; ++attempt) {
      Rng rng = stream_rng(seed, attempt);
      QVec u = random_rational_point(n, 1000, rng);
      if (exact_rank(psi_.jet2<GaussRational>(u).jacobian).rank == int(n)) return;
    }
    throw RankDeficientJacobian("ParamVariety: Jacobian is rank-deficient at every sampled point");
  }

  std::size_t dim() const noexcept { return psi_.num_vars(); }
  std::size_t ambient_dim() const noexcept { return psi_.size(); }
  const PolyMap& map() const noexcept { return psi_; }

private:
  PolyMap psi_;
};

/// u -> (u, f(u)) as a parametrization.
inline ParamVariety wrap(const GraphVariety& g) {
  const std::size_t n = g.dim();
  std::vector<Polynomial> comps;
  for (std::size_t k = 0; k < n; ++k) comps.push_back(Polynomial::variable(n, k));
  for (const auto& c : g.map().components()) comps.push_back(c);
  return ParamVariety(PolyMap(n, std::move(comps)));
}

namespace detail {

/// Picks n standard basis vectors completing the columns of D (2n x n) to a
/// basis. Candidates are tried in the order e_{n+1..2n}, e_{1..n}; the first
/// one whose residual against the current span is at least a tenth of the
/// best available residual is taken.
inline std::vector<std::size_t> complement_coordinates(const CMat& d) {
  const std::size_t big = d.rows(), n = d.cols();
  std::vector<CVec> basis;  // orthonormal, modified Gram-Schmidt
  auto residual = [&](CVec v) {
    for (const auto& q : basis) {
      cplx c = 0.0;
      for (std::size_t j = 0; j < big; ++j) c += std::conj(q[j]) * v[j];
      for (std::size_t j = 0; j < big; ++j) v[j] -= c * q[j];
    }
    return v;
  };
  auto push = [&](CVec v) {
    v = residual(std::move(v));
    double s = norm2(v);
    for (auto& x : v) x /= s;
    basis.push_back(std::move(v));
  };
  for (std::size_t j = 0; j < n; ++j) push(d.col_vec(j));

  std::vector<std::size_t> order;
  for (std::size_t k = n; k < big; ++k) order.push_back(k);
  for (std::size_t k = 0; k < n; ++k) order.push_back(k);

  std::vector<std::size_t> chosen;
  while (chosen.size() < big - n) {
    std::vector<double> r(order.size());
    double best = 0.0;
    for (std::size_t c = 0; c < order.size(); ++c) {
      CVec e(big);
      e[order[c]] = 1.0;
      r[c] = norm2(residual(e));
      best = std::max(best, r[c]);
    }
    std::size_t pick = 0;
    while (r[pick] < 0.1 * best) ++pick;
    CVec e(big);
    e[order[pick]] = 1.0;
    push(e);
    chosen.push_back(order[pick]);
    order.erase(order.begin() + std::ptrdiff_t(pick));
  }
  return chosen;
}

template <class S>
Matrix<S> extended_basis(const Matrix<S>& d, const std::vector<std::size_t>& extra) {
  const std::size_t n = d.cols(), big = d.rows();
  Matrix<S> m(big, big);
  for (std::size_t i = 0; i < big; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = d(i, j);
  for (std::size_t c = 0; c < extra.size(); ++c) m(extra[c], n + c) = S(1);
  return m;
}

template <class S>
HessianTensor<S> push_hessian(const Matrix<S>& a, const HessianTensor<S>& psi_h, std::size_t first_row,
                              std::size_t count) {
  const std::size_t n = psi_h.empty() ? 0 : psi_h.front().rows();
  HessianTensor<S> out(count, Matrix<S>(n, n));
  for (std::size_t i = 0; i < count; ++i)
    for (std::size_t m = 0; m < psi_h.size(); ++m) {
      const S& c = a(first_row + i, m);
      if (is_zero(c)) continue;
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) out[i](j, k) += c * psi_h[m](j, k);
    }
  return out;
}

}  // namespace detail

/// Local graph presentation of a parametrized variety at u0: a linear change
/// A with A * Dpsi(u0) = [I; 0], so that near 0 the variety is the graph of
/// f~ with f~(0) = 0 and f~_u(0) = 0. f~ is evaluated by Newton inversion of
/// the first coordinate block; its jets follow from the chain rule.
class NormalizedChart {
public:
  std::size_t dim() const noexcept { return psi_.num_vars(); }
  bool is_normalized() const noexcept { return true; }

  const CVec& base_point() const noexcept { return u0_; }
  const CMat& change() const noexcept { return a_; }
  const CVec& origin() const noexcept { return psi0_; }
  const NewtonConfig& config() const noexcept { return cfg_; }
  double trust_radius() const noexcept { return cfg_.trust_radius; }

  /// Chart coordinates (A (psi(w) - psi(u0))) of the parameter point w.
  CVec forward(const CVec& w) const {
    CVec d = psi_.eval<cplx>(w) - psi0_;
    return a_ * d;
  }

  /// Parameter point w over chart coordinate v; throws NewtonDiverged.
  CVec lift(const CVec& v, const NewtonConfig& cfg) const {
    const std::size_t n = dim();
    if (v.size() != n) throw DimensionMismatch("NormalizedChart: point has wrong length");
    auto system = [&](const CVec& w) {
      auto j = psi_.jet2<cplx>(w);
      CVec phi = a_ * (j.value - psi0_);
      CMat dphi = a_ * j.jacobian;
      CVec g(n);
      CMat jac(n, n);
      for (std::size_t i = 0; i < n; ++i) {
        g[i] = phi[i] - v[i];
        for (std::size_t k = 0; k < n; ++k) jac(i, k) = dphi(i, k);
      }
      return std::make_pair(std::move(g), std::move(jac));
    };
    NewtonResult r = newton_solve(system, u0_ + v, cfg);
    if (!r.converged) throw NewtonDiverged("NormalizedChart: Newton inversion of the chart did not converge");
    return r.x;
  }

  CVec eval(const CVec& v) const { return eval(v, cfg_); }

  CVec eval(const CVec& v, const NewtonConfig& cfg) const {
    CVec phi = forward(lift(v, cfg));
    return CVec(phi.begin() + std::ptrdiff_t(dim()), phi.end());
  }

  /// Value, Jacobian and Hessian of f~ at v.
  CJet2 jet(std::span<const cplx> v) const {
    const std::size_t n = dim();
    CVec w = lift(CVec(v.begin(), v.end()), cfg_);
    auto pj = psi_.jet2<cplx>(w);
    CVec phi = a_ * (pj.value - psi0_);
    CMat dphi = a_ * pj.jacobian;
    CMat j1(n, n), j2(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k) {
        j1(i, k) = dphi(i, k);
        j2(i, k) = dphi(n + i, k);
      }
    CMat winv = inverse(j1);
    auto h1 = detail::push_hessian(a_, pj.hessian, 0, n);
    auto h2 = detail::push_hessian(a_, pj.hessian, n, n);

    CJet2 out;
    out.value.assign(phi.begin() + std::ptrdiff_t(n), phi.end());
    out.jacobian = j2 * winv;
    out.hessian.assign(n, CMat(n, n));
    for (std::size_t i = 0; i < n; ++i) {
      CMat q = h2[i];
      for (std::size_t m = 0; m < n; ++m) q = q - out.jacobian(i, m) * h1[m];
      CMat hi = winv.transpose() * q * winv;
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = j; k < n; ++k) {
          out.hessian[i](j, k) = hi(j, k);
          out.hessian[i](k, j) = hi(j, k);
        }
    }
    return out;
  }
  CJet2 jet(const CVec& v) const { return jet(std::span<const cplx>(v)); }

  /// f~_uu(0) = second derivatives of the last block of A psi at u0.
  HessianTensor<cplx> hessian_at_origin() const {
    return detail::push_hessian(a_, psi_.jet2<cplx>(u0_).hessian, dim(), dim());
  }

private:
  friend NormalizedChart normalize_at(const ParamVariety&, const CVec&, const NewtonConfig&);

  NormalizedChart(PolyMap psi, CVec u0, CMat a, CVec psi0, NewtonConfig cfg)
      : psi_(std::move(psi)), u0_(std::move(u0)), a_(std::move(a)), psi0_(std::move(psi0)), cfg_(cfg) {}

  double estimate_convergence_radius() const {
    const std::size_t n = dim();
    for (double r = 4.0; r >= 1.0 / 1024; r *= 0.5) {
      bool ok = true;
      for (std::size_t k = 0; k < n && ok; ++k)
        for (cplx dir : {cplx(1, 0), cplx(-1, 0), cplx(0, 1), cplx(0, -1)}) {
          CVec v(n);
          v[k] = r * dir;
          try {
            lift(v, cfg_);
          } catch (const NewtonDiverged&) {
            ok = false;
            break;
          }
        }
      if (ok) return r;
    }
    return 0.0;
  }

  PolyMap psi_;
  CVec u0_;
  CMat a_;
  CVec psi0_;
  NewtonConfig cfg_;
};

/// Builds the normalized chart at u0. Throws RankDeficientJacobian if
/// Dpsi(u0) has numerical rank below n.
inline NormalizedChart normalize_at(const ParamVariety& v, const CVec& u0, const NewtonConfig& cfg = {}) {
  const std::size_t n = v.dim();
  if (u0.size() != n) throw DimensionMismatch("normalize_at: base point has wrong length");
  auto j = v.map().jet2<cplx>(u0);
  if (numerical_rank(j.jacobian).rank < int(n))
    throw RankDeficientJacobian("normalize_at: Dpsi(u0) is rank-deficient");
  auto extra = detail::complement_coordinates(j.jacobian);
  CMat a = inverse(detail::extended_basis(j.jacobian, extra));
  NormalizedChart chart(v.map(), u0, std::move(a), j.value, cfg);
  if (chart.cfg_.trust_radius <= 0.0) chart.cfg_.trust_radius = 0.5 * chart.estimate_convergence_radius();
  return chart;
}

/// f~(v); the result always satisfies the Newton residual check or throws.
inline CVec chart_graph_eval(const NormalizedChart& c, const CVec& v, const NewtonConfig& cfg) {
  return c.eval(v, cfg);
}

/// Exact f~_uu(0) for a rational base point: the change A is computed with
/// exact arithmetic, using the same basis completion as normalize_at.
inline HessianTensor<GaussRational> chart_hessian_exact(const ParamVariety& v, const QVec& u0) {
  const std::size_t n = v.dim();
  if (u0.size() != n) throw DimensionMismatch("chart_hessian_exact: base point has wrong length");
  auto j = v.map().jet2<GaussRational>(u0);
  if (exact_rank(j.jacobian).rank < int(n))
    throw RankDeficientJacobian("chart_hessian_exact: Dpsi(u0) is rank-deficient");
  auto extra = detail::complement_coordinates(to_complex(j.jacobian));
  QMat a = inverse(detail::extended_basis(j.jacobian, extra));
  return detail::push_hessian(a, j.hessian, n, n);
}

}  // namespace genproj
