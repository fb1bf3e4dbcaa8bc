#include "ordtop/ordinal.hpp"

#include <algorithm>

namespace ordtop {

Ordinal Ordinal::from_nat(const Nat& n) {
  Ordinal o;
  if (n > 0) o.terms_.push_back({Nat(0), n});
  return o;
}

Ordinal Ordinal::omega_power(const Nat& exp, const Nat& coeff) {
  Ordinal o;
  if (coeff > 0) o.terms_.push_back({exp, coeff});
  return o;
}

Ordinal Ordinal::from_terms(std::vector<Term> terms) {
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (terms[i].coeff < 1) throw error("CNF coefficient must be >= 1");
    if (i > 0 && terms[i - 1].exp <= terms[i].exp)
      throw error("CNF exponents must be strictly decreasing");
  }
  Ordinal o;
  o.terms_ = std::move(terms);
  return o;
}

Nat Ordinal::coeff_of(const Nat& e) const {
  for (const Term& t : terms_)
    if (t.exp == e) return t.coeff;
  return 0;
}

Nat Ordinal::as_nat() const {
  if (is_zero()) return 0;
  if (!is_finite()) throw error("ordinal is not finite: " + str());
  return terms_.front().coeff;
}

std::strong_ordering Ordinal::operator<=>(const Ordinal& o) const {
  std::size_t n = std::min(terms_.size(), o.terms_.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (terms_[i].exp != o.terms_[i].exp)
      return terms_[i].exp < o.terms_[i].exp ? std::strong_ordering::less
                                             : std::strong_ordering::greater;
    if (terms_[i].coeff != o.terms_[i].coeff)
      return terms_[i].coeff < o.terms_[i].coeff ? std::strong_ordering::less
                                                 : std::strong_ordering::greater;
  }
  if (terms_.size() != o.terms_.size())
    return terms_.size() < o.terms_.size() ? std::strong_ordering::less
                                           : std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::string Ordinal::str() const {
  if (terms_.empty()) return "0";
  std::string s;
  for (const Term& t : terms_) {
    if (!s.empty()) s += "+";
    if (t.exp == 0) {
      s += t.coeff.str();
    } else {
      s += "w";
      if (t.exp != 1) s += "^" + t.exp.str();
      if (t.coeff != 1) s += "*" + t.coeff.str();
    }
  }
  return s;
}

Cmp compare(const Ordinal& a, const Ordinal& b) {
  auto c = a <=> b;
  return c < 0 ? Cmp::LT : c > 0 ? Cmp::GT : Cmp::EQ;
}

Ordinal add(const Ordinal& a, const Ordinal& b) {
  if (b.is_zero()) return a;
  std::vector<Ordinal::Term> out;
  const Nat& lead = b.terms().front().exp;
  for (const auto& t : a.terms()) {
    if (t.exp > lead) out.push_back(t);
  }
  auto rest = b.terms();
  if (!out.empty() || !a.terms().empty()) {
    // merge the a-term at b's leading exponent, if present
    Nat c = a.coeff_of(lead);
    if (c > 0) rest.front().coeff += c;
  }
  out.insert(out.end(), rest.begin(), rest.end());
  return Ordinal::from_terms(std::move(out));
}

Ordinal left_subtract(const Ordinal& a, const Ordinal& b) {
  if (a > b) throw underflow_error();
  if (a == b) return Ordinal();
  // Walk common leading terms; the first difference decides the remainder.
  const auto& ta = a.terms();
  const auto& tb = b.terms();
  std::size_t i = 0;
  while (i < ta.size() && i < tb.size() && ta[i] == tb[i]) ++i;
  // b > a, so b has a term here and it dominates what is left of a.
  std::vector<Ordinal::Term> out;
  if (i == ta.size()) {
    out.assign(tb.begin() + static_cast<std::ptrdiff_t>(i), tb.end());
    return Ordinal::from_terms(std::move(out));
  }
  // Same exponent with larger coefficient in b: keep the difference then
  // b's tail; a's tail is absorbed.
  if (ta[i].exp == tb[i].exp) {
    out.push_back({tb[i].exp, tb[i].coeff - ta[i].coeff});
    out.insert(out.end(), tb.begin() + static_cast<std::ptrdiff_t>(i) + 1, tb.end());
    return Ordinal::from_terms(std::move(out));
  }
  // b's term has a larger exponent: the whole rest of b is the remainder.
  out.assign(tb.begin() + static_cast<std::ptrdiff_t>(i), tb.end());
  return Ordinal::from_terms(std::move(out));
}

Ordinal shift(const Nat& k, const Ordinal& a) {
  if (k == 0) return a;
  std::vector<Ordinal::Term> out;
  out.reserve(a.terms().size());
  for (const auto& t : a.terms()) out.push_back({t.exp + k, t.coeff});
  return Ordinal::from_terms(std::move(out));
}

Ordinal successor(const Ordinal& a) { return add(a, Ordinal::from_nat(1)); }

Ordinal times_omega(const Ordinal& g) {
  if (g.is_zero()) return Ordinal();
  return Ordinal::omega_power(g.leading_exp() + 1);
}

std::pair<Nat, Ordinal> divmod_bounded(const Ordinal& b, const Ordinal& g) {
  if (g.is_zero()) throw error("divmod_bounded: divisor must be positive");
  if (b < g) return {Nat(0), b};
  const Nat& e = g.leading_exp();
  const Nat& c = g.terms().front().coeff;
  if (b.leading_exp() > e) throw error("divmod_bounded: b >= g*omega");
  Nat big = b.coeff_of(e);
  // g*q = w^e*(c*q) + tail(g) for q >= 1; pick the largest q with g*q <= b.
  Nat q = big / c;
  auto times = [&](const Nat& n) {
    if (n == 0) return Ordinal();
    std::vector<Ordinal::Term> ts;
    ts.push_back({e, c * n});
    for (std::size_t i = 1; i < g.terms().size(); ++i) ts.push_back(g.terms()[i]);
    return Ordinal::from_terms(std::move(ts));
  };
  while (q > 0 && times(q) > b) --q;
  Ordinal r = left_subtract(times(q), b);
  if (r >= g) throw error("divmod_bounded: internal remainder overflow");
  return {q, r};
}

// --- nu ---------------------------------------------------------------------

namespace {

std::vector<Nat> decode_seq(Nat n) {
  std::vector<Nat> out;
  while (n > 0) {
    auto [a, b] = cantor_unpair(n - 1);
    out.push_back(a);
    n = b;
  }
  return out;
}

Nat encode_seq(const std::vector<Nat>& v) {
  Nat n = 0;
  for (auto it = v.rbegin(); it != v.rend(); ++it) n = cantor_pair(*it, n) + 1;
  return n;
}

}  // namespace

Ordinal nu(const Nat& n) {
  std::vector<Nat> v = decode_seq(n);
  if (!v.empty()) v.back() += 1;
  std::vector<Ordinal::Term> terms;
  for (std::size_t i = v.size(); i-- > 0;) {
    if (v[i] > 0) terms.push_back({Nat(i), v[i]});
  }
  return Ordinal::from_terms(std::move(terms));
}

Nat nu_inv(const Ordinal& a) {
  if (a.is_zero()) return 0;
  std::size_t k = to_index(a.leading_exp());
  std::vector<Nat> v(k + 1, Nat(0));
  for (const auto& t : a.terms()) v[to_index(t.exp)] = t.coeff;
  v.back() -= 1;
  return encode_seq(v);
}

// --- ExtOrdinal --------------------------------------------------------------

std::strong_ordering ExtOrdinal::operator<=>(const ExtOrdinal& o) const {
  if (is_top() && o.is_top()) return std::strong_ordering::equal;
  if (is_top()) return std::strong_ordering::greater;
  if (o.is_top()) return std::strong_ordering::less;
  return *v_ <=> *o.v_;
}

Cmp compare(const ExtOrdinal& a, const ExtOrdinal& b) {
  auto c = a <=> b;
  return c < 0 ? Cmp::LT : c > 0 ? Cmp::GT : Cmp::EQ;
}

}  // namespace ordtop
