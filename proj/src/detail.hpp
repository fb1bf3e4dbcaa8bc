#ifndef ORDTOP_SRC_DETAIL_HPP
#define ORDTOP_SRC_DETAIL_HPP

// Internal geometry of least-exponent classes, shared by the normalizer and
// the order-type machinery. Not installed; not part of the public surface.

#include <optional>

#include "ordtop/ordinal.hpp"
#include "ordtop/ordset.hpp"

namespace ordtop::detail {

// a == w^k exactly, k >= 1
inline std::optional<Nat> power_of(const Ordinal& a) {
  if (a.terms().size() == 1 && a.terms()[0].coeff == 1 && a.terms()[0].exp >= 1)
    return a.terms()[0].exp;
  return std::nullopt;
}

// terms of a with exponent >= k (the w^k-floor of a)
inline Ordinal floor_terms(const Ordinal& a, const Nat& k) {
  std::vector<Ordinal::Term> ts;
  for (const auto& t : a.terms())
    if (t.exp >= k) ts.push_back(t);
  return Ordinal::from_terms(std::move(ts));
}

// terms with exponent strictly above k
inline Ordinal strict_upper(const Ordinal& a, const Nat& k) {
  std::vector<Ordinal::Term> ts;
  for (const auto& t : a.terms())
    if (t.exp > k) ts.push_back(t);
  return Ordinal::from_terms(std::move(ts));
}

// largest multiple-of-w^(t+1)-style prefix strictly below the nonzero
// multiple T: T with its least term's coefficient lowered by one
inline Ordinal decrement_prefix(const Ordinal& T) {
  auto ts = T.terms();
  if (ts.back().coeff > 1)
    ts.back().coeff -= 1;
  else
    ts.pop_back();
  return Ordinal::from_terms(std::move(ts));
}

// smallest x >= a with least exponent exactly j
inline Ordinal first_in_class(const Nat& j, const Ordinal& a) {
  if (a.is_zero()) return Ordinal::omega_power(j);
  Ordinal T = strict_upper(a, j);
  Nat c = a.coeff_of(j);
  bool has_rest = a.least_exp() < j;
  if (c >= 1 && !has_rest) return a;
  if (c >= 1 && has_rest) return add(T, Ordinal::omega_power(j, c + 1));
  return add(T, Ordinal::omega_power(j));
}

// smallest multiple of w^t that is >= a
inline Ordinal first_in_tail(const Nat& t, const Ordinal& a) {
  Ordinal T = floor_terms(a, t);
  if (T == a) return a;
  return add(T, Ordinal::omega_power(t));
}

struct SupInfo {
  Ordinal sup;    // least h with trace /\ [.., b) == trace /\ [.., h)
  bool attained;  // max element exists (h == max+1) vs h is a limit
};

// tight upper end of EXACT(j) below the bound b
inline std::optional<SupInfo> class_sup_below(const Nat& j, const Ordinal& b) {
  if (Ordinal::omega_power(j) >= b) return std::nullopt;
  if (!b.is_zero() && b.least_exp() > j) return SupInfo{b, false};
  Ordinal T = strict_upper(b, j);
  Nat c = b.coeff_of(j);
  bool has_rest = !b.is_zero() && b.least_exp() < j;
  if (has_rest) {
    if (c >= 1) return SupInfo{successor(add(T, Ordinal::omega_power(j, c))), true};
    if (T.is_zero()) return std::nullopt;
    return SupInfo{add(decrement_prefix(T), Ordinal::omega_power(j + 1)), false};
  }
  if (c >= 2) return SupInfo{successor(add(T, Ordinal::omega_power(j, c - 1))), true};
  if (T.is_zero()) return std::nullopt;
  return SupInfo{add(decrement_prefix(T), Ordinal::omega_power(j + 1)), false};
}

// tight upper end of TAIL(t), t >= 1, below b, ignoring the 0 point
inline std::optional<SupInfo> tail_sup_below(const Nat& t, const Ordinal& b) {
  if (Ordinal::omega_power(t) >= b) return std::nullopt;
  if (b.least_exp() >= t) return SupInfo{b, false};
  Ordinal T = floor_terms(b, t);
  if (T.is_zero()) return std::nullopt;
  return SupInfo{successor(T), true};
}

// k-range of powers w^k (k >= 1) inside [lo, hi)
struct PowerRange {
  Nat kmin;
  std::optional<Nat> kmax;  // exclusive; nullopt when hi == TOP
  bool empty() const { return kmax && *kmax <= kmin; }
};

inline PowerRange power_range(const Ordinal& lo, const ExtOrdinal& hi) {
  PowerRange r;
  if (lo.is_zero()) {
    r.kmin = 1;
  } else {
    Nat L = lo.leading_exp();
    r.kmin = power_of(lo) ? L : L + 1;
    if (r.kmin < 1) r.kmin = 1;
  }
  if (!hi.is_top()) {
    const Ordinal& h = hi.ord();
    if (h.is_zero() || h <= Ordinal::omega_power(1)) {
      r.kmax = Nat(1);
    } else {
      Nat H = h.leading_exp();
      r.kmax = (Ordinal::omega_power(H) < h) ? H + 1 : H;
    }
  }
  return r;
}

}  // namespace ordtop::detail

#endif
