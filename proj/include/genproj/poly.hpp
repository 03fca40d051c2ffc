#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <numeric>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "genproj/errors.hpp"
#include "genproj/matrix.hpp"
#include "genproj/scalar.hpp"

namespace genproj {

using Exponent = std::vector<unsigned>;

inline unsigned total_degree(const Exponent& e) {
  return std::accumulate(e.begin(), e.end(), 0u);
}

/// Sparse multivariate polynomial with exact Gaussian-rational coefficients.
///
/// Terms are stored keyed by exponent vector; zero coefficients are never
/// stored, so two polynomials are equal iff their term maps are equal.
/// Variables are indexed from 0 in the API and printed as u1..un.
class Polynomial {
public:
  using TermMap = std::map<Exponent, GaussRational>;

  explicit Polynomial(std::size_t num_vars = 0) : num_vars_(num_vars) {}

  static Polynomial constant(std::size_t num_vars, const GaussRational& c) {
    Polynomial p(num_vars);
    p.add_term(Exponent(num_vars, 0), c);
    return p;
  }

  static Polynomial variable(std::size_t num_vars, std::size_t var) {
    if (var >= num_vars) throw IndexOutOfRange("Polynomial::variable: index out of range");
    Exponent e(num_vars, 0);
    e[var] = 1;
    Polynomial p(num_vars);
    p.add_term(e, GaussRational(1));
    return p;
  }

  static Polynomial monomial(const Exponent& e, const GaussRational& c) {
    Polynomial p(e.size());
    p.add_term(e, c);
    return p;
  }

  std::size_t num_vars() const noexcept { return num_vars_; }
  const TermMap& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }
  bool is_zero() const noexcept { return terms_.empty(); }

  /// Maximum total degree; -1 for the zero polynomial.
  int degree() const {
    int d = -1;
    for (const auto& [e, c] : terms_) d = std::max(d, int(total_degree(e)));
    return d;
  }

  GaussRational coefficient(const Exponent& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? GaussRational(0) : it->second;
  }

  /// Adds c * u^e, merging with an existing term and dropping zero results.
  void add_term(const Exponent& e, const GaussRational& c) {
    if (e.size() != num_vars_) throw DimensionMismatch("Polynomial::add_term: exponent length");
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  Polynomial operator-() const {
    Polynomial r(*this);
    for (auto& [e, c] : r.terms_) c = -c;
    return r;
  }

  Polynomial& operator+=(const Polynomial& o) {
    check_compatible(o);
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
  }

  Polynomial& operator-=(const Polynomial& o) {
    check_compatible(o);
    for (const auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
  }

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    a.check_compatible(b);
    Polynomial r(a.num_vars_);
    Exponent e(a.num_vars_);
    for (const auto& [ea, ca] : a.terms_)
      for (const auto& [eb, cb] : b.terms_) {
        for (std::size_t k = 0; k < e.size(); ++k) e[k] = ea[k] + eb[k];
        r.add_term(e, ca * cb);
      }
    return r;
  }

  friend Polynomial operator*(const GaussRational& s, const Polynomial& p) {
    Polynomial r(p.num_vars_);
    if (s.is_zero()) return r;
    for (const auto& [e, c] : p.terms_) r.terms_.emplace(e, s * c);
    return r;
  }

  Polynomial pow(unsigned k) const {
    Polynomial result = constant(num_vars_, GaussRational(1));
    Polynomial base = *this;
    while (k) {
      if (k & 1u) result = result * base;
      k >>= 1u;
      if (k) base = base * base;
    }
    return result;
  }

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.num_vars_ == b.num_vars_ && a.terms_ == b.terms_;
  }
  friend bool operator!=(const Polynomial& a, const Polynomial& b) { return !(a == b); }

  /// Formal partial derivative with respect to variable `var` (0-based).
  Polynomial partial(std::size_t var) const {
    if (var >= num_vars_) throw IndexOutOfRange("Polynomial::partial: variable index out of range");
    Polynomial r(num_vars_);
    for (const auto& [e, c] : terms_) {
      if (e[var] == 0) continue;
      Exponent d = e;
      --d[var];
      r.terms_.emplace(std::move(d), c * GaussRational(static_cast<long long>(e[var])));
    }
    return r;
  }

  /// Substitutes u -> u + shift and expands.
  Polynomial shifted(std::span<const GaussRational> shift) const {
    if (shift.size() != num_vars_) throw DimensionMismatch("Polynomial::shifted: shift length");
    std::vector<Polynomial> lin;
    lin.reserve(num_vars_);
    for (std::size_t k = 0; k < num_vars_; ++k)
      lin.push_back(variable(num_vars_, k) + constant(num_vars_, shift[k]));
    Polynomial r(num_vars_);
    for (const auto& [e, c] : terms_) {
      Polynomial t = constant(num_vars_, c);
      for (std::size_t k = 0; k < num_vars_; ++k)
        if (e[k]) t = t * lin[k].pow(e[k]);
      r += t;
    }
    return r;
  }

  /// Evaluation on either path: S = cplx or S = GaussRational.
  template <class S>
  S eval(std::span<const S> u) const {
    if (u.size() != num_vars_) throw DimensionMismatch("Polynomial::eval: point has wrong length");
    S acc{};
    for (const auto& [e, c] : terms_) {
      S t = scalar_from<S>(c);
      for (std::size_t k = 0; k < num_vars_; ++k)
        for (unsigned p = 0; p < e[k]; ++p) t *= u[k];
      acc += t;
    }
    return acc;
  }

  template <class S>
  S eval(const Vec<S>& u) const {
    return eval<S>(std::span<const S>(u));
  }

  /// Canonical text in the expression grammar: terms by descending total
  /// degree, then descending exponent vector.
  std::string to_string() const;

  friend std::ostream& operator<<(std::ostream& os, const Polynomial& p) { return os << p.to_string(); }

private:
  void check_compatible(const Polynomial& o) const {
    if (o.num_vars_ != num_vars_) throw DimensionMismatch("Polynomial: variable counts differ");
  }

  std::size_t num_vars_;
  TermMap terms_;
};

namespace detail {

inline std::string monomial_text(const Exponent& e) {
  std::string s;
  for (std::size_t k = 0; k < e.size(); ++k) {
    if (e[k] == 0) continue;
    if (!s.empty()) s += "*";
    s += "u" + std::to_string(k + 1);
    if (e[k] > 1) s += "^" + std::to_string(e[k]);
  }
  return s;
}

}  // namespace detail

inline std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::vector<const TermMap::value_type*> order;
  order.reserve(terms_.size());
  for (const auto& t : terms_) order.push_back(&t);
  std::sort(order.begin(), order.end(), [](auto* a, auto* b) {
    unsigned da = total_degree(a->first), db = total_degree(b->first);
    if (da != db) return da > db;
    return a->first > b->first;
  });

  std::string out;
  for (const auto* term : order) {
    const auto& [e, c] = *term;
    std::string mono = detail::monomial_text(e);
    bool negative = false;
    std::string coeff;
    if (c.is_real()) {
      negative = c.re < 0;
      Rational a = negative ? Rational(-c.re) : c.re;
      if (a != 1 || mono.empty()) coeff = genproj::to_string(a);
    } else if (c.re == 0) {
      negative = c.im < 0;
      Rational a = negative ? Rational(-c.im) : c.im;
      coeff = (a == 1 ? std::string() : genproj::to_string(a) + "*") + "i";
    } else {
      std::ostringstream os;
      os << c;
      coeff = os.str();
    }
    std::string body = coeff;
    if (!mono.empty()) body += (body.empty() ? "" : "*") + mono;
    if (out.empty()) {
      out = negative ? "-" + body : body;
    } else {
      out += negative ? " - " : " + ";
      out += body;
    }
  }
  return out;
}

/// Second-order jet of a polynomial map at a point.
template <class S>
struct Jet2 {
  Vec<S> value;                 // m
  Matrix<S> jacobian;           // m x n
  std::vector<Matrix<S>> hessian;  // m slices, each n x n and symmetric
};

using CJet2 = Jet2<cplx>;
using QJet2 = Jet2<GaussRational>;

/// Ordered list of polynomials in a common set of variables.
class PolyMap {
public:
  PolyMap() = default;
  PolyMap(std::size_t num_vars, std::vector<Polynomial> components)
      : num_vars_(num_vars), components_(std::move(components)) {
    for (const auto& c : components_)
      if (c.num_vars() != num_vars_) throw DimensionMismatch("PolyMap: component has wrong variable count");
  }

  std::size_t num_vars() const noexcept { return num_vars_; }
  std::size_t size() const noexcept { return components_.size(); }
  const Polynomial& operator[](std::size_t i) const { return components_[i]; }
  const std::vector<Polynomial>& components() const noexcept { return components_; }

  template <class S>
  Vec<S> eval(std::span<const S> u) const {
    Vec<S> out;
    out.reserve(components_.size());
    for (const auto& c : components_) out.push_back(c.template eval<S>(u));
    return out;
  }

  template <class S>
  Vec<S> eval(const Vec<S>& u) const {
    return eval<S>(std::span<const S>(u));
  }

  /// Value, Jacobian and Hessian at `u`, computed term by term from the
  /// formal derivatives. Hessian slices are filled for j <= k and mirrored.
  template <class S>
  Jet2<S> jet2(std::span<const S> u) const {
    const std::size_t n = num_vars_, m = components_.size();
    if (u.size() != n) throw DimensionMismatch("jet2: point has wrong length");

    unsigned max_exp = 0;
    for (const auto& c : components_)
      for (const auto& [e, coeff] : c.terms())
        for (unsigned a : e) max_exp = std::max(max_exp, a);
    // powers[k][p] = u_k^p
    std::vector<Vec<S>> powers(n, Vec<S>(max_exp + 1));
    for (std::size_t k = 0; k < n; ++k) {
      powers[k][0] = S(1);
      for (unsigned p = 1; p <= max_exp; ++p) powers[k][p] = powers[k][p - 1] * u[k];
    }
    auto mono = [&](const Exponent& e) {
      S t(1);
      for (std::size_t k = 0; k < n; ++k)
        if (e[k]) t *= powers[k][e[k]];
      return t;
    };

    Jet2<S> jet{Vec<S>(m), Matrix<S>(m, n), std::vector<Matrix<S>>(m, Matrix<S>(n, n))};
    Exponent d(n);
    for (std::size_t i = 0; i < m; ++i) {
      for (const auto& [e, coeff] : components_[i].terms()) {
        const S c = scalar_from<S>(coeff);
        jet.value[i] += c * mono(e);
        for (std::size_t j = 0; j < n; ++j) {
          if (e[j] == 0) continue;
          d = e;
          --d[j];
          jet.jacobian(i, j) += c * S(static_cast<int>(e[j])) * mono(d);
          for (std::size_t k = j; k < n; ++k) {
            if (d[k] == 0) continue;
            Exponent dd = d;
            --dd[k];
            jet.hessian[i](j, k) += c * S(static_cast<int>(e[j] * d[k])) * mono(dd);
          }
        }
      }
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = j + 1; k < n; ++k) jet.hessian[i](k, j) = jet.hessian[i](j, k);
    }
    return jet;
  }

  template <class S>
  Jet2<S> jet2(const Vec<S>& u) const {
    return jet2<S>(std::span<const S>(u));
  }

  friend bool operator==(const PolyMap& a, const PolyMap& b) {
    return a.num_vars_ == b.num_vars_ && a.components_ == b.components_;
  }

private:
  std::size_t num_vars_ = 0;
  std::vector<Polynomial> components_;
};

/// Free-function spelling of PolyMap::jet2.
template <class S>
Jet2<S> jet2(const PolyMap& f, std::span<const S> u) {
  return f.template jet2<S>(u);
}

template <class S>
Jet2<S> jet2(const PolyMap& f, const Vec<S>& u) {
  return f.template jet2<S>(std::span<const S>(u));
}

inline Polynomial partial(const Polynomial& p, std::size_t var) { return p.partial(var); }

}  // namespace genproj
