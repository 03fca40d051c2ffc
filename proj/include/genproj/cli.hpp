#pragma once

// Variety files, the built-in registry and the report-producing commands
// behind the `genproj` tool. Kept header-only so tests drive the commands
// in-process.

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "genproj/genproj.hpp"

namespace genproj::cli {

using Json = nlohmann::ordered_json;

enum ExitCode : int { kSuccess = 0, kNegative = 1, kInputError = 2 };

/// Problem in a variety file or command-line input; line/column are 1-based
/// (0 when not applicable).
class InputError : public Error {
public:
  InputError(const std::string& what, std::size_t line = 0, std::size_t column = 0)
      : Error(line ? "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what : what),
        line_(line), column_(column) {}
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

private:
  std::size_t line_, column_;
};

enum class Kind { Graph, Param };

struct VarietyFile {
  std::string name;
  std::string description;
  std::size_t n = 0;
  Kind kind = Kind::Graph;
  std::vector<std::string> components;
  std::string text;  // source, for the digest
};

namespace detail {

inline std::string trim(std::string_view s, std::size_t* offset = nullptr) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  if (offset) *offset = b;
  return std::string(s.substr(b, e - b));
}

}  // namespace detail

/// Flat `key = value` format; `#` starts a comment. Keys: n, kind, name,
/// description, f1..fm (m = n for graphs, 2n for parametrizations).
inline VarietyFile parse_variety_file(std::string_view text) {
  VarietyFile vf;
  vf.text = std::string(text);
  struct Entry {
    std::string value;
    std::size_t line, column;
  };
  std::map<std::string, Entry> entries;
  std::map<std::size_t, Entry> comps;

  std::size_t line_no = 0, pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    ++line_no;
    pos = eol + 1;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    if (detail::trim(line).empty()) continue;

    auto eq = line.find('=');
    if (eq == std::string_view::npos) throw InputError("expected 'key = value'", line_no, 1);
    std::size_t key_off = 0, val_off = 0;
    std::string key = detail::trim(line.substr(0, eq), &key_off);
    std::string value = detail::trim(line.substr(eq + 1), &val_off);
    const std::size_t value_col = eq + 1 + val_off + 1;
    if (key.empty()) throw InputError("missing key", line_no, 1);
    if (value.empty()) throw InputError("missing value for '" + key + "'", line_no, value_col);

    if (key.size() > 1 && key[0] == 'f' &&
        key.find_first_not_of("0123456789", 1) == std::string::npos) {
      std::size_t idx = std::stoul(key.substr(1));
      if (idx == 0) throw InputError("component indices start at f1", line_no, key_off + 1);
      if (!comps.emplace(idx, Entry{value, line_no, value_col}).second)
        throw InputError("duplicate key '" + key + "'", line_no, key_off + 1);
    } else if (key == "n" || key == "kind" || key == "name" || key == "description") {
      if (!entries.emplace(key, Entry{value, line_no, value_col}).second)
        throw InputError("duplicate key '" + key + "'", line_no, key_off + 1);
    } else {
      throw InputError("unknown key '" + key + "'", line_no, key_off + 1);
    }
  }

  auto n_it = entries.find("n");
  if (n_it == entries.end()) throw InputError("missing 'n = <int>'");
  {
    const auto& e = n_it->second;
    if (e.value.find_first_not_of("0123456789") != std::string::npos || e.value.size() > 3)
      throw InputError("n must be a positive integer", e.line, e.column);
    vf.n = std::stoul(e.value);
    if (vf.n == 0) throw InputError("n must be a positive integer", e.line, e.column);
  }
  if (auto k = entries.find("kind"); k != entries.end()) {
    if (k->second.value == "graph") vf.kind = Kind::Graph;
    else if (k->second.value == "param") vf.kind = Kind::Param;
    else throw InputError("kind must be 'graph' or 'param'", k->second.line, k->second.column);
  } else {
    throw InputError("missing 'kind = graph|param'");
  }
  if (auto k = entries.find("name"); k != entries.end()) vf.name = k->second.value;
  if (auto k = entries.find("description"); k != entries.end()) vf.description = k->second.value;

  const std::size_t expected = vf.kind == Kind::Graph ? vf.n : 2 * vf.n;
  for (std::size_t i = 1; i <= expected; ++i) {
    auto it = comps.find(i);
    if (it == comps.end())
      throw InputError("missing component f" + std::to_string(i) + " (" + std::to_string(expected) +
                       " required for kind " + (vf.kind == Kind::Graph ? "graph" : "param") + ")");
    try {
      parse_poly(it->second.value, vf.n);
    } catch (const ParseError& e) {
      throw InputError(e.message(), it->second.line, it->second.column + e.position());
    }
    vf.components.push_back(it->second.value);
  }
  if (comps.size() != expected) {
    auto extra = comps.rbegin();
    throw InputError("unexpected component f" + std::to_string(extra->first), extra->second.line, 1);
  }
  return vf;
}

inline PolyMap component_map(const VarietyFile& vf) {
  std::vector<Polynomial> comps;
  for (const auto& c : vf.components) comps.push_back(parse_poly(c, vf.n));
  return PolyMap(vf.n, std::move(comps));
}

struct RegistryEntry {
  const char* name;
  const char* text;
};

inline const std::vector<RegistryEntry>& registry() {
  static const std::vector<RegistryEntry> entries = {
      {"conic", "name = conic\ndescription = plane conic, f = u^2\nn = 1\nkind = graph\nf1 = u1^2\n"},
      {"cubic-conic",
       "name = cubic-conic\ndescription = cubic-perturbed conic, f = u^2 + u^3\nn = 1\nkind = graph\n"
       "f1 = u1^2 + u1^3\n"},
      {"quadric-pair",
       "name = quadric-pair\ndescription = surface in P^4, f = (u1^2, u2^2)\nn = 2\nkind = graph\n"
       "f1 = u1^2\nf2 = u2^2\n"},
      {"mixed-surface",
       "name = mixed-surface\ndescription = surface in P^4, f = (u1^2, u1*u2)\nn = 2\nkind = graph\n"
       "f1 = u1^2\nf2 = u1*u2\n"},
      {"cylinder",
       "name = cylinder\ndescription = counterexample with Tan X != P^4, f = (u1^2, u1^3)\nn = 2\n"
       "kind = graph\nf1 = u1^2\nf2 = u1^3\n"},
      {"linear", "name = linear\ndescription = linear graph, f = 0\nn = 1\nkind = graph\nf1 = 0\n"},
  };
  return entries;
}

/// `@name` selects a registry entry; anything else is a file path.
inline VarietyFile load_variety_file(const std::string& source) {
  if (!source.empty() && source[0] == '@') {
    for (const auto& e : registry())
      if (source.substr(1) == e.name) return parse_variety_file(e.text);
    throw InputError("unknown registry entry '" + source.substr(1) + "'");
  }
  std::ifstream in(source, std::ios::binary);
  if (!in) throw InputError("cannot open '" + source + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_variety_file(ss.str());
}

inline std::string digest(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  std::ostringstream os;
  os << "fnv1a64:" << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

struct CommandOptions {
  std::uint64_t seed = 1;
  int trials = 100;
  std::optional<double> tol;    // relative rank tolerance eps
  std::optional<double> box;
  std::optional<int> starts;
  std::optional<std::string> center;
};

struct CommandResult {
  int exit_code = kSuccess;
  Json report;
  std::string human;
};

// ---------------------------------------------------------------------------
// JSON helpers

inline Json to_json(const cplx& z) { return Json::array({z.real(), z.imag()}); }

inline Json to_json(const CVec& v) {
  Json a = Json::array();
  for (const auto& z : v) a.push_back(to_json(z));
  return a;
}

inline Json to_json(const Certificate& c) {
  Json j;
  j["verdict"] = to_string(c.verdict);
  j["method"] = to_string(c.method);
  j["trials"] = c.trials;
  j["successes"] = c.successes;
  j["tolerance"] = c.tolerance;
  j["witness"] = c.witness ? to_json(*c.witness) : Json(nullptr);
  j["detail"] = c.detail;
  Json stats = Json::object();
  for (const auto& [k, v] : c.stats) stats[k] = v;
  j["stats"] = stats;
  return j;
}

inline std::string format_point(const CVec& v) {
  std::ostringstream os;
  os << std::setprecision(10) << "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) os << " : ";
    // roundoff-level imaginary parts are not printed
    if (std::abs(v[i].imag()) <= 1e-12 * std::max(1.0, std::abs(v[i]))) os << v[i].real();
    else os << v[i].real() << (v[i].imag() < 0 ? "-" : "+") << std::abs(v[i].imag()) << "i";
  }
  os << "]";
  return os.str();
}

namespace detail {

struct Loaded {
  VarietyFile file;
  std::optional<GraphVariety> graph;
  std::optional<ParamVariety> param;
};

inline Loaded load(const VarietyFile& vf, std::uint64_t seed) {
  Loaded l{vf, std::nullopt, std::nullopt};
  if (vf.kind == Kind::Graph) {
    l.graph.emplace(component_map(vf));
  } else {
    try {
      l.param.emplace(component_map(vf), seed);
    } catch (const RankDeficientJacobian& e) {
      throw InputError(std::string("parametrization is not immersive: ") + e.what());
    }
  }
  return l;
}

inline Json header(const std::string& command, const VarietyFile& vf, const CommandOptions& o) {
  Json j;
  j["command"] = command;
  j["input"] = {{"name", vf.name},
                {"kind", vf.kind == Kind::Graph ? "graph" : "param"},
                {"n", vf.n},
                {"digest", digest(vf.text)}};
  j["seed"] = o.seed;
  return j;
}

inline void human_header(std::ostringstream& os, const std::string& command, const VarietyFile& vf,
                         const CommandOptions& o) {
  os << "command: " << command << "\n";
  os << "input:   " << (vf.name.empty() ? "(unnamed)" : vf.name) << " (" << digest(vf.text) << ")\n";
  os << "seed:    " << o.seed << "\n";
}

inline void human_cert(std::ostringstream& os, const std::string& label, const Certificate& c) {
  os << label << ": " << to_string(c.verdict) << " [" << to_string(c.method) << ", " << c.successes << "/"
     << c.trials << "]";
  if (!c.detail.empty()) os << "  " << c.detail;
  os << "\n";
}

inline Center parse_center(const std::string& text, std::size_t n, std::uint64_t seed) {
  if (text == "random") {
    Rng rng = stream_rng(seed ^ 0xc3a5c85c97cb3127ull, 0);
    QVec p = random_rational_point(2 * n, 2000, rng);
    CVec a;
    for (const auto& x : p) a.push_back(x.to_complex() / 1000.0);
    return Center::from_affine(a);
  }
  CVec vals;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t comma = text.find(',', start);
    if (comma == std::string::npos) comma = text.size();
    std::string item = text.substr(start, comma - start);
    try {
      vals.push_back(parse_constant(item).to_complex());
    } catch (const ParseError& e) {
      throw InputError("center entry '" + trim(item) + "': " + e.what());
    }
    start = comma + 1;
  }
  if (vals.size() == 2 * n) return Center::from_affine(vals);
  if (vals.size() == 2 * n + 1) {
    try {
      Center c = Center::from_projective(vals);
      c.affine();
      return c;
    } catch (const InvalidCenter& e) {
      throw InputError(std::string("center: ") + e.what());
    }
  }
  throw InputError("center needs " + std::to_string(2 * n) + " affine or " + std::to_string(2 * n + 1) +
                   " projective entries, got " + std::to_string(vals.size()));
}

inline TolPolicy tol_policy(const CommandOptions& o) {
  TolPolicy t;
  if (o.tol) t.eps = *o.tol;
  return t;
}

inline GraphVariety normalized(const GraphVariety& g) {
  return g.is_normalized() ? g : recenter(g, QVec(g.dim()));
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Commands

/// Fullness of the tangent variety, with the block-matrix rank cross-check.
inline CommandResult cmd_tan_check(const VarietyFile& vf, const CommandOptions& o) {
  auto l = detail::load(vf, o.seed);
  const std::size_t n = vf.n;
  TanCheckOptions topts;
  topts.trials = o.trials;
  topts.seed = o.seed;

  HessianTensor<GaussRational> tensor;
  Json base;
  if (l.graph) {
    GraphVariety g = detail::normalized(*l.graph);
    tensor = g.hessian_at_origin();
    base = {{"chart", "graph"}, {"recentered", !l.graph->is_normalized()}};
  } else {
    QVec u0 = immersive_base_point(*l.param, o.seed);
    tensor = chart_hessian_exact(*l.param, u0);
    base = {{"chart", "normalized chart"}, {"base_point", to_json(to_complex(u0))}};
  }
  Certificate full = tan_is_full(tensor, topts);

  Certificate cross;
  cross.method = Method::SchwartzZippel;
  int full_rank = 0;
  for (int t = 0; t < o.trials; ++t) {
    Rng rng = stream_rng(o.seed ^ 0x27d4eb2f165667c5ull, std::uint64_t(t));
    QVec xi = random_rational_point(n, 1000, rng);
    int block = tangent_bundle_rank_check(tensor, xi).rank;
    int h = exact_rank(hessian_contraction(tensor, xi)).rank;
    ++cross.trials;
    if (block == int(n) + h) ++cross.successes;
    if (block == int(2 * n)) ++full_rank;
  }
  cross.verdict = cross.successes == cross.trials ? Verdict::Holds : Verdict::Fails;
  cross.stats["full_rank_samples"] = full_rank;
  cross.detail = "rank [[E,E],[H(xi),0]] = n + rank H(xi) on " + std::to_string(cross.successes) + "/" +
                 std::to_string(cross.trials) + " samples; full rank 2n on " + std::to_string(full_rank);

  CommandResult r;
  r.exit_code = full.verdict == Verdict::Holds && cross.verdict == Verdict::Holds ? kSuccess : kNegative;
  r.report = detail::header("tan-check", vf, o);
  r.report["tolerances"] = {{"exact", true}};
  r.report["certificates"] = {{"tan_is_full", to_json(full)}, {"rank_crosscheck", to_json(cross)}};
  r.report["results"] = base;
  r.report["exit_code"] = r.exit_code;

  std::ostringstream os;
  detail::human_header(os, "tan-check", vf, o);
  detail::human_cert(os, "Tan X = P^" + std::to_string(2 * n), full);
  detail::human_cert(os, "block-rank cross-check", cross);
  r.human = os.str();
  return r;
}

inline CommandResult cmd_secant_dim(const VarietyFile& vf, const CommandOptions& o) {
  auto l = detail::load(vf, o.seed);
  SamplingOptions s{o.trials, o.box.value_or(1.0), o.seed, detail::tol_policy(o)};
  SecantEstimate est = l.graph ? secant_dim_estimate(*l.graph, s) : secant_dim_estimate(*l.param, s);

  CommandResult r;
  r.exit_code = est.certificate.verdict == Verdict::Holds ? kSuccess : kNegative;
  r.report = detail::header("secant-dim", vf, o);
  r.report["tolerances"] = {{"rank_eps", s.tol.eps}, {"box", s.box}};
  r.report["certificates"] = {{"secant_fills", to_json(est.certificate)}};
  Json hist = Json::object();
  for (const auto& [rank, count] : est.rank_histogram) hist[std::to_string(rank)] = count;
  r.report["results"] = {{"secant_dimension", est.dimension}, {"ambient_dimension", 2 * vf.n},
                         {"rank_histogram", hist}};
  r.report["exit_code"] = r.exit_code;

  std::ostringstream os;
  detail::human_header(os, "secant-dim", vf, o);
  os << "dim Sec X: " << est.dimension << " (ambient " << 2 * vf.n << ")\n";
  detail::human_cert(os, "Sec X = P^" + std::to_string(2 * vf.n), est.certificate);
  r.human = os.str();
  return r;
}

namespace detail {

template <GraphSource G>
Certificate fd_agreement(const G& g, const SamplingOptions& s) {
  constexpr double kRel = 1e-6;
  Certificate c;
  c.method = Method::FloatSampling;
  c.tolerance = kRel;
  double worst = 0.0;
  int singular = 0;
  for (int t = 0; t < s.trials; ++t) {
    Rng rng = stream_rng(s.seed ^ 0x9e3779b97f4a7c15ull, std::uint64_t(t));
    CVec u = random_point(g.dim(), s.box, rng);
    try {
      CMat closed = p_jacobian_closed(g, u);
      CMat fd = p_jacobian_fd(g, u);
      double rel = norm_fro(closed - fd) / std::max(norm_fro(closed), 1e-300);
      worst = std::max(worst, rel);
      ++c.trials;
      if (rel <= kRel) ++c.successes;
    } catch (const SingularTangentJacobian&) {
      ++singular;
    }
  }
  c.verdict = c.trials == 0 ? Verdict::Fails : sampling_verdict(c.successes, c.trials);
  c.stats["max_relative_error"] = worst;
  c.stats["singular_tangent_jacobian"] = singular;
  c.detail = "closed-form dp vs central differences";
  return c;
}

}  // namespace detail

/// Dominance of the tangent-intersection map, plus the closed-vs-FD check of dp.
inline CommandResult cmd_dominance(const VarietyFile& vf, const CommandOptions& o) {
  auto l = detail::load(vf, o.seed);
  SamplingOptions s{o.trials, o.box.value_or(0.1), o.seed, detail::tol_policy(o)};
  Certificate dom, fd;
  Json base;
  if (l.graph) {
    GraphVariety g = detail::normalized(*l.graph);
    dom = dominance_certificate(g, s);
    fd = detail::fd_agreement(g, s);
    base = {{"chart", "graph"}, {"recentered", !l.graph->is_normalized()}};
  } else {
    CVec u0 = to_complex(immersive_base_point(*l.param, o.seed));
    NormalizedChart chart = normalize_at(*l.param, u0);
    dom = dominance_certificate(chart, s);
    fd = detail::fd_agreement(chart, s);
    base = {{"chart", "normalized chart"}, {"base_point", to_json(u0)}, {"trust_radius", chart.trust_radius()}};
  }

  CommandResult r;
  r.exit_code = dom.verdict == Verdict::Holds && fd.verdict == Verdict::Holds ? kSuccess : kNegative;
  r.report = detail::header("dominance", vf, o);
  r.report["tolerances"] = {{"rank_eps", s.tol.eps}, {"box", s.box}, {"fd_relative", 1e-6}, {"fd_step", 1e-5}};
  r.report["certificates"] = {{"dominance", to_json(dom)}, {"jacobian_fd_agreement", to_json(fd)}};
  r.report["results"] = base;
  r.report["exit_code"] = r.exit_code;

  std::ostringstream os;
  detail::human_header(os, "dominance", vf, o);
  detail::human_cert(os, "(x,y) -> t_xX ∩ t_yX dominant", dom);
  detail::human_cert(os, "dp closed form vs finite differences", fd);
  r.human = os.str();
  return r;
}

namespace detail {

inline NewtonConfig newton_config(const CommandOptions& o) {
  NewtonConfig cfg;
  cfg.seed = o.seed;
  if (o.starts) cfg.starts = *o.starts;
  if (o.box) cfg.box = *o.box;
  return cfg;
}

inline Json ramification_json(const RamificationSet& rs) {
  Json pts = Json::array();
  for (std::size_t i = 0; i < rs.points.size(); ++i)
    pts.push_back({{"u", to_json(rs.points[i])}, {"residual", rs.residuals[i]}});
  return {{"points", pts}, {"starts", rs.starts}, {"converged", rs.converged}, {"distinct", rs.distinct}};
}

inline Center require_center(const CommandOptions& o, std::size_t n) {
  if (!o.center) throw InputError("this command needs --center (2n affine or 2n+1 projective values, or 'random')");
  return parse_center(*o.center, n, o.seed);
}

}  // namespace detail

/// Ramification points of the projection from P, each with a membership check.
inline CommandResult cmd_ramify(const VarietyFile& vf, const CommandOptions& o) {
  auto l = detail::load(vf, o.seed);
  Center c = detail::require_center(o, vf.n);
  NewtonConfig cfg = detail::newton_config(o);
  TolPolicy tol = detail::tol_policy(o);
  RamificationSet rs = l.graph ? ramification_points(*l.graph, c, cfg) : ramification_points(*l.param, c, cfg);

  Certificate member;
  member.method = Method::FloatSampling;
  member.tolerance = tol.eps;
  Json ranks = Json::array();
  for (const auto& u : rs.points) {
    int rank = l.graph ? membership_rank(*l.graph, c, u, tol).rank : membership_rank(*l.param, c, u, tol).rank;
    ranks.push_back(rank);
    ++member.trials;
    if (rank == int(vf.n) + 1) ++member.successes;
  }
  member.verdict = !rs.points.empty() && member.successes == member.trials ? Verdict::Holds : Verdict::Fails;
  member.detail = rs.points.empty() ? "NoSolutionsFound" : "P lies on the tangent space at each point";

  CommandResult r;
  r.exit_code = member.verdict == Verdict::Holds ? kSuccess : kNegative;
  r.report = detail::header("ramify", vf, o);
  r.report["tolerances"] = {{"newton_tol", cfg.tol}, {"dedup_radius", cfg.dedup_radius}, {"rank_eps", tol.eps},
                            {"box", cfg.box}, {"starts", cfg.starts}};
  r.report["center"] = to_json(c.homogeneous());
  r.report["certificates"] = {{"membership", to_json(member)}};
  Json res = detail::ramification_json(rs);
  res["membership_ranks"] = ranks;
  r.report["results"] = res;
  r.report["exit_code"] = r.exit_code;

  std::ostringstream os;
  detail::human_header(os, "ramify", vf, o);
  os << "center:  " << format_point(c.homogeneous()) << "\n";
  os << "starts " << rs.starts << ", converged " << rs.converged << ", distinct " << rs.distinct << "\n";
  for (std::size_t i = 0; i < rs.points.size(); ++i)
    os << "  u = " << format_point(rs.points[i]) << "  |g| = " << rs.residuals[i] << "\n";
  detail::human_cert(os, "membership", member);
  r.human = os.str();
  return r;
}

/// Full round trip: ramification locus of P, then P recovered from it.
inline CommandResult cmd_recover(const VarietyFile& vf, const CommandOptions& o) {
  auto l = detail::load(vf, o.seed);
  Center c = detail::require_center(o, vf.n);
  NewtonConfig cfg = detail::newton_config(o);
  TanCheckOptions topts;
  topts.trials = o.trials;
  topts.seed = o.seed;

  CommandResult r;
  r.report = detail::header("recover", vf, o);
  r.report["tolerances"] = {{"newton_tol", cfg.tol}, {"dedup_radius", cfg.dedup_radius},
                            {"cluster_radius", 1e-6}, {"success_distance", kRoundtripTolerance},
                            {"box", cfg.box}, {"starts", cfg.starts}};
  r.report["center"] = to_json(c.homogeneous());
  std::ostringstream os;
  detail::human_header(os, "recover", vf, o);
  os << "center:  " << format_point(c.homogeneous()) << "\n";

  try {
    RoundtripReport rt = l.graph ? roundtrip(*l.graph, c, cfg, topts) : roundtrip(*l.param, c, cfg, topts);
    r.exit_code = rt.success ? kSuccess : kNegative;
    r.report["certificates"] = {{"tan_is_full", to_json(rt.fullness)}};
    Json res;
    res["ramification"] = detail::ramification_json(rt.ramification);
    if (rt.recovery) {
      const auto& rec = *rt.recovery;
      res["recovered"] = to_json(rec.center);
      res["pairs_total"] = rec.pairs_total;
      res["pairs_transverse"] = rec.pairs_transverse;
      res["pairs_non_transverse"] = rec.pairs_skipped;
      res["cluster_size"] = rec.cluster_size;
      res["spread"] = rec.spread;
      res["distance"] = rt.distance;
    } else {
      res["failure"] = rt.failure;
    }
    res["success"] = rt.success;
    r.report["results"] = res;

    detail::human_cert(os, "Tan X = P^" + std::to_string(2 * vf.n), rt.fullness);
    os << "ramification points: " << rt.ramification.distinct << "\n";
    if (rt.recovery) {
      os << "recovered: " << format_point(rt.recovery->center) << "  (chordal distance " << rt.distance
         << ", " << rt.recovery->pairs_transverse << "/" << rt.recovery->pairs_total << " transverse pairs)\n";
    } else {
      os << "recovery failed: " << rt.failure << "\n";
    }
    os << (rt.success ? "SUCCESS" : "FAILURE") << "\n";
  } catch (const HypothesisNotMet& e) {
    r.exit_code = kNegative;
    r.report["results"] = {{"error", "HypothesisNotMet"}, {"message", e.what()}, {"success", false}};
    os << "HypothesisNotMet: " << e.what() << "\n";
  }
  r.report["exit_code"] = r.exit_code;
  r.human = os.str();
  return r;
}

inline CommandResult cmd_examples() {
  CommandResult r;
  Json list = Json::array();
  std::ostringstream os;
  os << "built-in varieties (use as @name):\n";
  for (const auto& e : registry()) {
    VarietyFile vf = parse_variety_file(e.text);
    list.push_back({{"name", vf.name},
                    {"description", vf.description},
                    {"n", vf.n},
                    {"kind", vf.kind == Kind::Graph ? "graph" : "param"},
                    {"components", vf.components}});
    os << "  @" << std::left << std::setw(14) << vf.name << vf.description << "\n";
  }
  r.report["command"] = "examples";
  r.report["examples"] = list;
  r.report["exit_code"] = 0;
  r.human = os.str();
  return r;
}

/// Dispatches by command name, mapping input errors to exit code 2.
inline CommandResult run_command(const std::string& command, const std::string& input, const CommandOptions& o) {
  try {
    if (command == "examples") return cmd_examples();
    VarietyFile vf = load_variety_file(input);
    if (command == "tan-check") return cmd_tan_check(vf, o);
    if (command == "secant-dim") return cmd_secant_dim(vf, o);
    if (command == "dominance") return cmd_dominance(vf, o);
    if (command == "ramify") return cmd_ramify(vf, o);
    if (command == "recover") return cmd_recover(vf, o);
    throw InputError("unknown command '" + command + "'");
  } catch (const InputError& e) {
    CommandResult r;
    r.exit_code = kInputError;
    r.report = {{"command", command}, {"error", "InputError"}, {"message", e.what()},
                {"line", e.line()}, {"column", e.column()}, {"exit_code", kInputError}};
    r.human = std::string("error: ") + e.what() + "\n";
    return r;
  } catch (const ParseError& e) {
    CommandResult r;
    r.exit_code = kInputError;
    r.report = {{"command", command}, {"error", "ParseError"}, {"message", e.what()},
                {"position", e.position()}, {"exit_code", kInputError}};
    r.human = std::string("error: ") + e.what() + "\n";
    return r;
  } catch (const DimensionMismatch& e) {
    CommandResult r;
    r.exit_code = kInputError;
    r.report = {{"command", command}, {"error", "DimensionMismatch"}, {"message", e.what()},
                {"exit_code", kInputError}};
    r.human = std::string("error: ") + e.what() + "\n";
    return r;
  }
}

/// Machine-readable form: the JSON document, pretty-printed, newline-terminated.
inline std::string machine_text(const CommandResult& r) { return r.report.dump(2) + "\n"; }

}  // namespace genproj::cli
