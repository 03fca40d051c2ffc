#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "genproj/errors.hpp"
#include "genproj/linalg.hpp"
#include "genproj/newton.hpp"
#include "genproj/random.hpp"
#include "genproj/tangent.hpp"
#include "genproj/variety.hpp"

namespace genproj {

/// Projection center, stored as homogeneous coordinates in P^{2n}.
class Center {
public:
  static Center from_affine(const CVec& p) {
    CVec h(p.size() + 1);
    h[0] = 1.0;
    std::copy(p.begin(), p.end(), h.begin() + 1);
    return Center(std::move(h));
  }

  static Center from_projective(CVec h) {
    if (h.empty() || norm2(h) == 0.0) throw InvalidCenter("Center: zero vector is not a projective point");
    return Center(std::move(h));
  }

  const CVec& homogeneous() const noexcept { return h_; }
  std::size_t ambient_dim() const noexcept { return h_.size() - 1; }

  bool is_affine(double tol = 1e-14) const { return std::abs(h_[0]) > tol * norm2(h_); }

  /// Affine coordinates (P1, P2); throws InvalidCenter for points at infinity.
  CVec affine() const {
    if (!is_affine()) throw InvalidCenter("Center: point lies at infinity of the affine chart");
    CVec a(h_.begin() + 1, h_.end());
    for (auto& x : a) x /= h_[0];
    return a;
  }

private:
  explicit Center(CVec h) : h_(std::move(h)) {}
  CVec h_;
};

/// Linear projection from P: normalizes P at its largest-modulus entry m,
/// subtracts x_m * P and deletes coordinate m. Throws CenterHit if x = P.
inline CVec project(const Center& center, const CVec& x, double tol = 1e-12) {
  const CVec& p = center.homogeneous();
  if (x.size() != p.size()) throw DimensionMismatch("project: point has wrong length");
  if (chordal_distance(x, p) <= tol) throw CenterHit("project: point coincides with the center");
  std::size_t m = 0;
  for (std::size_t j = 1; j < p.size(); ++j)
    if (std::abs(p[j]) > std::abs(p[m])) m = j;
  CVec out;
  out.reserve(p.size() - 1);
  for (std::size_t j = 0; j < p.size(); ++j)
    if (j != m) out.push_back(x[j] - x[m] * (p[j] / p[m]));
  return out;
}

namespace detail {

inline void split_center(const Center& c, std::size_t n, CVec& p1, CVec& p2) {
  if (c.ambient_dim() != 2 * n) throw DimensionMismatch("center has wrong ambient dimension");
  CVec a = c.affine();
  p1.assign(a.begin(), a.begin() + std::ptrdiff_t(n));
  p2.assign(a.begin() + std::ptrdiff_t(n), a.end());
}

}  // namespace detail

/// g_P(u) = f(u) + f_u(u)(P1 - u) - P2; zero iff P lies on the tangent space at (u, f(u)).
inline CVec ramification_residual(const GraphVariety& g, const Center& c, const CVec& u) {
  const std::size_t n = g.dim();
  CVec p1, p2;
  detail::split_center(c, n, p1, p2);
  auto j = g.jet(u);
  CVec r = j.value + j.jacobian * (p1 - u);
  return r - p2;
}

/// dg(eta) = f_uu(u)[P1 - u, eta].
inline CMat ramification_jacobian(const GraphVariety& g, const Center& c, const CVec& u) {
  CVec p1, p2;
  detail::split_center(c, g.dim(), p1, p2);
  auto j = g.jet(u);
  return hessian_contraction<cplx>(j.hessian, p1 - u);
}

struct RamificationSet {
  std::vector<CVec> points;      // parameter points u
  std::vector<double> residuals;
  int starts = 0;
  int converged = 0;
  int distinct = 0;
};

namespace detail {

inline bool lex_less(const CVec& a, const CVec& b) {
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k].real() != b[k].real()) return a[k].real() < b[k].real();
    if (a[k].imag() != b[k].imag()) return a[k].imag() < b[k].imag();
  }
  return false;
}

/// Sorts converged points lexicographically and keeps one per dedup ball.
inline RamificationSet merge_solutions(std::vector<std::pair<CVec, double>> found, int starts, double radius) {
  std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) { return lex_less(a.first, b.first); });
  RamificationSet out;
  out.starts = starts;
  out.converged = int(found.size());
  for (auto& [u, res] : found) {
    bool dup = false;
    for (const auto& kept : out.points)
      if (norm2(u - kept) <= radius) {
        dup = true;
        break;
      }
    if (dup) continue;
    out.points.push_back(std::move(u));
    out.residuals.push_back(res);
  }
  out.distinct = int(out.points.size());
  return out;
}

}  // namespace detail

/// Multi-start damped Newton on g_P from complex starts in a box around P1.
/// Returns an empty set (with statistics) when nothing converges.
inline RamificationSet ramification_points(const GraphVariety& g, const Center& c, const NewtonConfig& cfg = {}) {
  const std::size_t n = g.dim();
  CVec p1, p2;
  detail::split_center(c, n, p1, p2);
  auto system = [&](const CVec& u) {
    auto j = g.jet(u);
    CVec d = p1 - u;
    CVec r = j.value + j.jacobian * d;
    return std::make_pair(r - p2, hessian_contraction<cplx>(j.hessian, d));
  };
  std::vector<std::pair<CVec, double>> found;
  for (int s = 0; s < cfg.starts; ++s) {
    Rng rng = stream_rng(cfg.seed, std::uint64_t(s));
    CVec start = p1 + random_point(n, cfg.box, rng);
    NewtonResult r = newton_solve(system, start, cfg);
    if (r.converged) found.emplace_back(std::move(r.x), r.residual);
  }
  return detail::merge_solutions(std::move(found), cfg.starts, cfg.dedup_radius);
}

/// Parametrized input: Newton on (u, xi) for psi(u) + Dpsi(u) xi = P.
inline RamificationSet ramification_points(const ParamVariety& v, const Center& c, const NewtonConfig& cfg = {}) {
  const std::size_t n = v.dim();
  if (c.ambient_dim() != 2 * n) throw DimensionMismatch("center has wrong ambient dimension");
  const CVec p = c.affine();
  auto system = [&](const CVec& x) {
    CVec u(x.begin(), x.begin() + std::ptrdiff_t(n)), xi(x.begin() + std::ptrdiff_t(n), x.end());
    auto j = v.map().jet2<cplx>(u);
    CVec r = j.value + j.jacobian * xi;
    CMat jac(2 * n, 2 * n);
    for (std::size_t i = 0; i < 2 * n; ++i)
      for (std::size_t k = 0; k < n; ++k) {
        cplx s = j.jacobian(i, k);
        for (std::size_t l = 0; l < n; ++l) s += j.hessian[i](k, l) * xi[l];
        jac(i, k) = s;
        jac(i, n + k) = j.jacobian(i, k);
      }
    return std::make_pair(r - p, std::move(jac));
  };
  std::vector<std::pair<CVec, double>> found;
  for (int s = 0; s < cfg.starts; ++s) {
    Rng rng = stream_rng(cfg.seed, std::uint64_t(s));
    CVec u = random_point(n, cfg.box, rng);
    auto j = v.map().jet2<cplx>(u);
    // least-squares xi: (D^H D) xi = D^H (P - psi(u))
    CMat dh = j.jacobian.transpose();
    for (std::size_t i = 0; i < dh.rows(); ++i)
      for (std::size_t k = 0; k < dh.cols(); ++k) dh(i, k) = std::conj(dh(i, k));
    CVec xi;
    try {
      xi = solve(dh * j.jacobian, dh * (p - j.value));
    } catch (const SingularMatrix&) {
      continue;
    }
    CVec x = u;
    x.insert(x.end(), xi.begin(), xi.end());
    NewtonResult r = newton_solve(system, x, cfg);
    if (r.converged) found.emplace_back(CVec(r.x.begin(), r.x.begin() + std::ptrdiff_t(n)), r.residual);
  }
  return detail::merge_solutions(std::move(found), cfg.starts, cfg.dedup_radius);
}

/// Rank of the tangent frame at u stacked with P; n + 1 iff P lies on the tangent space.
template <class V>
RankResult membership_rank(const V& variety, const Center& c, const CVec& u, const TolPolicy& tol = {}) {
  CMat frame = tangent_frame<cplx>(variety, u).rows;
  CMat pc(1, c.homogeneous().size());
  for (std::size_t j = 0; j < pc.cols(); ++j) pc(0, j) = c.homogeneous()[j];
  return numerical_rank(CMat::stack(frame, pc), tol);
}

struct RecoveryReport {
  CVec center;                 // consensus point, largest coordinate 1
  int pairs_total = 0;
  int pairs_transverse = 0;
  int pairs_skipped = 0;       // NonTransverse
  int cluster_size = 0;
  double spread = 0.0;         // max pairwise chordal distance in the cluster
  std::vector<CVec> pair_points;
};

/// Intersects the tangent spaces of every pair of ramification points and
/// returns the consensus of the largest chordal cluster.
template <class V>
RecoveryReport recover_center(const V& variety, const RamificationSet& r, double cluster_radius = 1e-6,
                              const TolPolicy& tol = {}) {
  const std::size_t m = r.points.size();
  if (m < 2) throw InsufficientPoints("recover_center: need at least two ramification points");
  std::vector<TangentFrame<cplx>> frames;
  for (const auto& u : r.points) frames.push_back(tangent_frame<cplx>(variety, u));

  RecoveryReport out;
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = a + 1; b < m; ++b) {
      ++out.pairs_total;
      try {
        out.pair_points.push_back(tangent_intersection(frames[a], frames[b], tol));
        ++out.pairs_transverse;
      } catch (const NonTransverse&) {
        ++out.pairs_skipped;
      }
    }
  const auto& pts = out.pair_points;
  if (pts.empty()) throw NoConsensus("recover_center: no transverse pair of tangent spaces");

  std::size_t best = 0, best_count = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    std::size_t count = 0;
    for (const auto& q : pts)
      if (chordal_distance(pts[i], q) <= cluster_radius) ++count;
    if (count > best_count) {
      best = i;
      best_count = count;
    }
  }
  if (2 * best_count < pts.size())
    throw NoConsensus("recover_center: largest cluster holds " + std::to_string(best_count) + " of " +
                      std::to_string(pts.size()) + " pair points");

  std::vector<const CVec*> cluster;
  for (const auto& q : pts)
    if (chordal_distance(pts[best], q) <= cluster_radius) cluster.push_back(&q);
  std::size_t pivot = 0;
  for (std::size_t j = 1; j < pts[best].size(); ++j)
    if (std::abs(pts[best][j]) > std::abs(pts[best][pivot])) pivot = j;
  CVec mean(pts[best].size());
  for (const CVec* q : cluster)
    for (std::size_t j = 0; j < mean.size(); ++j) mean[j] += (*q)[j] / (*q)[pivot];
  for (auto& x : mean) x /= double(cluster.size());
  out.center = normalize_projective(mean);
  out.cluster_size = int(cluster.size());
  for (std::size_t i = 0; i < cluster.size(); ++i)
    for (std::size_t j = i + 1; j < cluster.size(); ++j)
      out.spread = std::max(out.spread, chordal_distance(*cluster[i], *cluster[j]));
  return out;
}

struct RoundtripReport {
  Certificate fullness;
  RamificationSet ramification;
  std::optional<RecoveryReport> recovery;
  double distance = 1.0;       // chordal distance between P and the recovered center
  bool success = false;
  std::string failure;         // InsufficientPoints / NoConsensus message when recovery failed
};

inline constexpr double kRoundtripTolerance = 1e-6;

namespace detail {

inline Certificate fullness_for(const GraphVariety& g, const TanCheckOptions& opts) {
  return tan_is_full(g.is_normalized() ? g : recenter(g, QVec(g.dim())), opts);
}
inline Certificate fullness_for(const ParamVariety& v, const TanCheckOptions& opts) { return tan_is_full(v, opts); }

}  // namespace detail

/// Ramification points of P, then recovery of P from them. Throws
/// HypothesisNotMet when the tangent variety does not fill P^{2n}.
template <class V>
RoundtripReport roundtrip(const V& variety, const Center& c, const NewtonConfig& cfg = {},
                          const TanCheckOptions& tan_opts = {}) {
  RoundtripReport out;
  out.fullness = detail::fullness_for(variety, tan_opts);
  if (out.fullness.verdict != Verdict::Holds)
    throw HypothesisNotMet("roundtrip: tangent variety does not fill P^2n (" + out.fullness.detail + ")");
  out.ramification = ramification_points(variety, c, cfg);
  try {
    out.recovery = recover_center(variety, out.ramification);
    out.distance = chordal_distance(out.recovery->center, c.homogeneous());
    out.success = out.distance <= kRoundtripTolerance;
  } catch (const InsufficientPoints& e) {
    out.failure = e.what();
  } catch (const NoConsensus& e) {
    out.failure = e.what();
  }
  return out;
}

}  // namespace genproj
