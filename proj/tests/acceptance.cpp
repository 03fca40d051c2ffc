// Acceptance gate: one PASS/FAIL line per criterion, each under its own time
// limit. Exit status is nonzero if any criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "genproj/cli.hpp"
#include "oracles.hpp"

using namespace genproj;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) detail = what;
    ok = ok && cond;
  }
};

struct Criterion {
  int id;
  const char* title;
  double limit_seconds;
  std::function<Outcome()> run;
};

GraphVariety graph(std::size_t n, std::initializer_list<const char*> comps) {
  std::vector<Polynomial> ps;
  for (const char* c : comps) ps.push_back(parse_poly(c, n));
  return GraphVariety(PolyMap(n, std::move(ps)));
}

GraphVariety registry_graph(const char* name) {
  return GraphVariety(cli::component_map(cli::load_variety_file(std::string("@") + name)));
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(3);
  os << x;
  return os.str();
}

CVec embed(const CVec& u, std::size_t ambient) {
  CVec h(ambient + 1);
  h[0] = 1.0;
  for (std::size_t i = 0; i < u.size(); ++i) h[1 + i] = u[i];
  return h;
}

const std::vector<const char*> kPositive = {"conic", "cubic-conic", "quadric-pair", "mixed-surface"};

Outcome exact_fullness() {
  Outcome o;
  Certificate a = tan_is_full(graph(2, {"u1^2", "u2^2"}));
  Certificate b = tan_is_full(graph(2, {"u1^2", "u1*u2"}));
  Certificate c = tan_is_full(graph(2, {"u1^2", "u1^3"}));
  o.require(a.verdict == Verdict::Holds && a.method == Method::ExactSymbolic, "quadric pair not Holds");
  o.require(b.verdict == Verdict::Holds && b.method == Method::ExactSymbolic, "mixed surface not Holds");
  o.require(c.verdict == Verdict::Fails && c.method == Method::ExactSymbolic, "cylinder not Fails");
  o.require(contraction_determinant(graph(2, {"u1^2", "u2^2"}).hessian_at_origin()) == parse_poly("4*u1*u2", 2),
            "det for quadric pair is not 4*u1*u2");
  o.require(contraction_determinant(graph(2, {"u1^2", "u1*u2"}).hessian_at_origin()) == parse_poly("2*u1^2", 2),
            "det for mixed surface is not 2*u1^2");
  o.require(contraction_determinant(graph(2, {"u1^2", "u1^3"}).hessian_at_origin()).is_zero(),
            "det for cylinder is not identically zero");
  o.detail = o.ok ? "det H = 4*u1*u2, 2*u1^2, 0" : o.detail;
  return o;
}

Outcome block_rank_identity() {
  Outcome o;
  int checked = 0;
  for (const auto& entry : cli::registry()) {
    GraphVariety g = registry_graph(entry.name);
    auto t = g.hessian_at_origin();
    for (std::uint64_t s = 0; s < 100; ++s) {
      Rng rng = stream_rng(0xb10c, s);
      QVec xi = random_rational_point(g.dim(), 1000, rng);
      int block = tangent_bundle_rank_check(g, xi).rank;
      int h = exact_rank(hessian_contraction(t, xi)).rank;
      o.require(block == int(g.dim()) + h, std::string(entry.name) + ": block rank != n + rank H");
      ++checked;
    }
  }
  if (o.ok) o.detail = std::to_string(checked) + " exact samples over " + std::to_string(cli::registry().size()) +
                       " registry examples";
  return o;
}

Outcome differential() {
  Outcome o;
  double worst = 0.0;
  for (const char* name : kPositive) {
    GraphVariety g = registry_graph(name);
    for (std::uint64_t s = 0; s < 100; ++s) {
      Rng rng = stream_rng(0xd1ff, s);
      CVec u = random_point(g.dim(), 0.1, rng);
      CMat closed = p_jacobian_closed(g, u), fd = p_jacobian_fd(g, u);
      double rel = norm_fro(closed - fd) / norm_fro(closed);
      worst = std::max(worst, rel);
      o.require(rel <= 1e-6, std::string(name) + ": closed vs FD relative error " + fmt(rel));
    }
  }
  GraphVariety conic = registry_graph("conic"), cubic = registry_graph("cubic-conic");
  for (double u : {-2.0, -0.5, 0.25, 1.0, 3.0})
    o.require(std::abs(p_jacobian_closed(conic, CVec{u})(0, 0) - 0.5) <= 1e-10, "conic p'(u) != 1/2");
  double d1 = std::abs(p_jacobian_closed(cubic, CVec{1.0})(0, 0) - 0.64);
  o.require(d1 <= 1e-10, "cubic-conic p'(1) off by " + fmt(d1));
  if (o.ok) o.detail = "max relative error " + fmt(worst) + ", |p'(1) - 16/25| = " + fmt(d1);
  return o;
}

Outcome dominance() {
  Outcome o;
  SamplingOptions opts;  // 100 samples, box 0.1
  std::string summary;
  for (const char* name : kPositive) {
    Certificate c = dominance_certificate(registry_graph(name), opts);
    o.require(c.verdict == Verdict::Holds && c.trials == 100 && c.successes >= 95,
              std::string(name) + ": dominance " + to_string(c.verdict));
    summary += std::string(name) + " " + std::to_string(c.successes) + "/100, ";
  }
  Certificate cyl = dominance_certificate(registry_graph("cylinder"), opts);
  o.require(cyl.verdict == Verdict::Fails, "cylinder dominance not Fails");
  o.require(cyl.stats["singular_tangent_jacobian"] == 100.0, "cylinder: not every sample singular");
  if (o.ok) o.detail = summary + "cylinder 100/100 singular";
  return o;
}

Outcome near_origin() {
  Outcome o;
  double worst_limit = 0.0, worst_exact = 0.0;
  for (const char* name : kPositive) {
    GraphVariety g = registry_graph(name);
    const std::size_t n = g.dim();
    for (std::uint64_t s = 0; s < 100; ++s) {
      Rng rng = stream_rng(0x0a1f, s);
      CVec u = random_unit_vector(n, rng);
      double dev = norm_fro(p_jacobian_closed(g, 1e-3 * u) - 0.5 * CMat::identity(n));
      worst_limit = std::max(worst_limit, dev);
      o.require(dev <= 1e-2, std::string(name) + ": ||Jp - I/2|| = " + fmt(dev));
    }
  }
  for (const char* name : {"conic", "quadric-pair", "mixed-surface"}) {
    GraphVariety g = registry_graph(name);
    for (std::uint64_t s = 0; s < 100; ++s) {
      Rng rng = stream_rng(0x0a20, s);
      CVec u = random_unit_vector(g.dim(), rng);
      double err = norm2(p_map(g, u) - 0.5 * u);
      worst_exact = std::max(worst_exact, err);
      o.require(err <= 1e-12, std::string(name) + ": |p(u) - u/2| = " + fmt(err));
    }
  }
  if (o.ok) o.detail = "max ||Jp - I/2|| " + fmt(worst_limit) + ", max |p(u) - u/2| " + fmt(worst_exact);
  return o;
}

Outcome cross_path() {
  Outcome o;
  std::string summary;
  for (const char* name : kPositive) {
    GraphVariety g = registry_graph(name);
    const std::size_t n = g.dim();
    auto f0 = tangent_frame<cplx>(g, CVec(n));
    int agree = 0;
    for (std::uint64_t s = 0; s < 100; ++s) {
      Rng rng = stream_rng(0xc055, s);
      CVec u = random_point(n, 1.0, rng);
      try {
        CVec meet = tangent_intersection(f0, tangent_frame<cplx>(g, u));
        if (chordal_distance(meet, embed(p_map(g, u), 2 * n)) <= 1e-8) ++agree;
      } catch (const Error&) {
      }
    }
    o.require(agree >= 95, std::string(name) + ": only " + std::to_string(agree) + "/100 agree");
    summary += std::string(name) + " " + std::to_string(agree) + "/100, ";
  }
  if (o.ok) o.detail = summary.substr(0, summary.size() - 2);
  return o;
}

Outcome curve_roundtrip() {
  Outcome o;
  GraphVariety g = registry_graph("conic");
  Center c = Center::from_affine({3.0, 5.0});
  RoundtripReport rt = roundtrip(g, c);
  o.require(rt.ramification.distinct == 2, "expected two ramification points");
  o.require(oracle::set_distance({{1.0}, {5.0}}, rt.ramification.points) <= 1e-9, "points are not {1, 5}");
  o.require(rt.recovery.has_value(), "no recovery");
  double d = rt.recovery ? chordal_distance(rt.recovery->center, {1.0, 3.0, 5.0}) : 1.0;
  o.require(d <= 1e-9, "recovered center off by " + fmt(d));
  RamificationSet cx = ramification_points(g, Center::from_affine({0.0, 1.0}));
  o.require(cx.distinct == 2 && oracle::set_distance({{cplx(0, 1)}, {cplx(0, -1)}}, cx.points) <= 1e-9,
            "complex center did not give +-i");
  if (o.ok) o.detail = "{1, 5} -> [1:3:5] at distance " + fmt(d) + "; +-i found";
  return o;
}

Outcome surface_roundtrip() {
  Outcome o;
  GraphVariety qp = registry_graph("quadric-pair"), ms = registry_graph("mixed-surface");
  int qp_ok = 0, ms_ok = 0, transverse = 0;
  for (std::uint64_t s = 0; s < 20; ++s) {
    Rng rng = stream_rng(0x5afe, s);
    CVec p;
    for (const auto& x : random_rational_point(4, 2000, rng)) p.push_back(x.to_complex() / 1000.0);
    Center c = Center::from_affine(p);

    RoundtripReport rt = roundtrip(qp, c);
    const auto& pts = rt.ramification.points;
    o.require(rt.ramification.distinct == 4, "quadric pair: " + std::to_string(rt.ramification.distinct) + " points");
    o.require(oracle::set_distance(oracle::quadric_pair_ramification(p), pts) <= 1e-9,
              "quadric pair: points disagree with the separable oracle");
    for (std::size_t a = 0; a < pts.size(); ++a)
      for (std::size_t b = a + 1; b < pts.size(); ++b) {
        auto fa = tangent_frame<cplx>(qp, pts[a]), fb = tangent_frame<cplx>(qp, pts[b]);
        CMat meet = frame_intersection(fa, fb);
        o.require(rowspan_residual(c.homogeneous(), meet) <= 1e-9, "quadric pair: a pair's meet misses P");
        if (meet.rows() == 1) {
          ++transverse;
          o.require(chordal_distance(tangent_intersection(fa, fb), c.homogeneous()) <= 1e-9,
                    "quadric pair: transverse meet is not P");
        }
      }
    if (rt.success && rt.distance <= 1e-6) ++qp_ok;

    RoundtripReport rm = roundtrip(ms, c);
    o.require(rm.ramification.distinct == 2, "mixed surface: " + std::to_string(rm.ramification.distinct) + " points");
    o.require(oracle::set_distance(oracle::mixed_surface_ramification(p), rm.ramification.points) <= 1e-8,
              "mixed surface: points disagree with the oracle");
    if (rm.success && rm.distance <= 1e-6) ++ms_ok;
  }
  o.require(qp_ok >= 19, "quadric pair recovered in only " + std::to_string(qp_ok) + "/20");
  o.require(ms_ok >= 19, "mixed surface recovered in only " + std::to_string(ms_ok) + "/20");
  if (o.ok)
    o.detail = "quadric pair " + std::to_string(qp_ok) + "/20 (" + std::to_string(transverse) +
               "/120 pairs transverse, all meets contain P), mixed surface " + std::to_string(ms_ok) + "/20";
  return o;
}

Outcome negative_control() {
  Outcome o;
  GraphVariety cyl = registry_graph("cylinder");
  bool threw = false;
  try {
    roundtrip(cyl, Center::from_affine({0.3, -0.2, 0.7, 1.1}));
  } catch (const HypothesisNotMet&) {
    threw = true;
  }
  o.require(threw, "roundtrip did not report HypothesisNotMet");
  double worst = 0.0;
  for (std::uint64_t s = 0; s < 50; ++s) {
    Rng rng = stream_rng(0xc71d, s);
    auto f1 = tangent_frame<cplx>(cyl, random_point(2, 1.0, rng));
    auto f2 = tangent_frame<cplx>(cyl, random_point(2, 1.0, rng));
    double d = chordal_distance(tangent_intersection(f1, f2), {0.0, 0.0, 1.0, 0.0, 0.0});
    worst = std::max(worst, d);
  }
  o.require(worst <= 1e-10, "tangent meets drift from [0:0:1:0:0] by " + fmt(worst));
  if (o.ok) o.detail = "HypothesisNotMet; 50 meets at [0:0:1:0:0] within " + fmt(worst);
  return o;
}

std::string run_tool(const std::string& args) {
  std::string cmd = std::string(GENPROJ_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  std::string out;
  if (!pipe) return out;
  char buf[4096];
  while (std::size_t k = fread(buf, 1, sizeof buf, pipe)) out.append(buf, k);
  pclose(pipe);
  return out;
}

Outcome determinism() {
  Outcome o;
  int reports = 0;
  cli::CommandOptions opts;
  opts.seed = 20240607;
  opts.center = "random";
  for (const auto& entry : cli::registry())
    for (const char* cmd : {"tan-check", "secant-dim", "dominance", "ramify", "recover"}) {
      std::string input = std::string("@") + entry.name;
      std::string a = cli::machine_text(cli::run_command(cmd, input, opts));
      std::string b = cli::machine_text(cli::run_command(cmd, input, opts));
      o.require(a == b, std::string(cmd) + " " + input + ": reports differ");
      ++reports;
    }
  for (const char* args : {"recover @quadric-pair --center random", "dominance @mixed-surface"}) {
    std::string a = run_tool(std::string(args) + " --format machine --seed 5");
    std::string b = run_tool(std::string(args) + " --format machine --seed 5");
    o.require(!a.empty() && a == b, std::string("tool output differs: ") + args);
    ++reports;
  }
  if (o.ok) o.detail = std::to_string(reports) + " report pairs byte-identical";
  return o;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "exact fullness suite", 1.0, exact_fullness},
      {2, "block rank equals n + rank H", 5.0, block_rank_identity},
      {3, "closed-form differential vs finite differences", 5.0, differential},
      {4, "dominance certificates", 10.0, dominance},
      {5, "near-origin limit and quadratic halving", 5.0, near_origin},
      {6, "p map agrees with tangent intersection", 10.0, cross_path},
      {7, "curve round trip", 5.0, curve_roundtrip},
      {8, "surface round trip", 60.0, surface_roundtrip},
      {9, "negative control", 10.0, negative_control},
      {10, "deterministic reports", 5.0, determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out.ok = false;
      out.detail = std::string("exception: ") + e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool in_time = secs <= c.limit_seconds;
    bool pass = out.ok && in_time;
    if (!pass) ++failed;
    std::printf("%s %2d  %-48s %7.3fs / %4.0fs  %s%s\n", pass ? "PASS" : "FAIL", c.id, c.title, secs,
                c.limit_seconds, in_time ? "" : "[time limit exceeded] ", out.detail.c_str());
  }
  std::printf("%d/%zu criteria passed\n", int(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
