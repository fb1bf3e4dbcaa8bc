#include <algorithm>

#include "detail.hpp"
#include "ordtop/ordset.hpp"

// Exact structural transports. Left multiplication by w^k and left
// translation are order isomorphisms onto their ranges whose action on
// cells is computable term by term; position_image composes them into the
// inverse-enumeration image for carriers with closed-form enumerations.

namespace ordtop {

using detail::first_in_tail;
using detail::floor_terms;
using detail::power_of;

OrdSet shift_set(const Nat& k, const OrdSet& s) {
  if (k == 0) return s;
  RawSet raw;
  for (const auto& c : s.cells()) {
    Cell m;
    m.lo = shift(k, c.lo);
    m.hi = c.hi.is_top() ? ExtOrdinal::top() : ExtOrdinal(shift(k, c.hi.ord()));
    switch (c.stratum.kind) {
      case Stratum::All:
        m.stratum = Stratum::tail(k);
        break;
      case Stratum::Exact:
        m.stratum = Stratum::exact(c.stratum.level + k);
        break;
      case Stratum::Tail:
        m.stratum = Stratum::tail(c.stratum.level + k);
        break;
    }
    raw.cells.push_back(m);
  }
  if (s.plus_powers()) raw.plus_powers.push_back(*s.plus_powers() + k);
  if (s.minus_powers()) raw.minus_powers.push_back(*s.minus_powers() + k);
  return OrdSet::normalize(raw);
}

OrdSet unshift_set(const Nat& k, const OrdSet& s) {
  if (k == 0) return s;
  auto unshift_exact = [&](const Ordinal& a) {
    std::vector<Ordinal::Term> ts;
    for (const auto& t : a.terms()) ts.push_back({t.exp - k, t.coeff});
    return Ordinal::from_terms(std::move(ts));
  };
  RawSet raw;
  for (const auto& c : s.cells()) {
    Ordinal lo = unshift_exact(first_in_tail(k, c.lo));
    ExtOrdinal hi = c.hi.is_top()
                        ? ExtOrdinal::top()
                        : ExtOrdinal(unshift_exact(first_in_tail(k, c.hi.ord())));
    if (!hi.is_top() && !(ExtOrdinal(lo) < hi)) continue;
    switch (c.stratum.kind) {
      case Stratum::All:
        raw.cells.push_back({lo, hi, Stratum::all()});
        break;
      case Stratum::Exact:
        if (c.stratum.level >= k)
          raw.cells.push_back({lo, hi, Stratum::exact(c.stratum.level - k)});
        break;
      case Stratum::Tail:
        if (c.stratum.level <= k)
          raw.cells.push_back({lo, hi, Stratum::all()});
        else
          raw.cells.push_back({lo, hi, Stratum::tail(c.stratum.level - k)});
        break;
    }
  }
  auto unshift_power = [&](const Nat& j, std::vector<Cell>& cells,
                           std::vector<Nat>& atoms) {
    // {w^(i-k) : i >= j, i >= k} = possibly the point 1 plus a power tail
    Nat start = std::max(j, k);
    if (start == k) {
      cells.push_back({Ordinal::from_nat(1), ExtOrdinal(Ordinal::from_nat(2)),
                       Stratum::all()});
      atoms.push_back(Nat(1));
    } else {
      atoms.push_back(start - k);
    }
  };
  if (s.plus_powers()) {
    std::vector<Cell> pc;
    unshift_power(*s.plus_powers(), pc, raw.plus_powers);
    for (auto& c : pc) raw.cells.push_back(c);
  }
  if (s.minus_powers()) {
    std::vector<Cell> mc;
    std::vector<Nat> matoms;
    unshift_power(*s.minus_powers(), mc, matoms);
    for (const Nat& j : matoms) raw.minus_powers.push_back(j);
    OrdSet base = OrdSet::normalize(raw);
    for (auto& c : mc)
      base = set_difference(base, OrdSet::single(c.lo));
    return base;
  }
  return OrdSet::normalize(raw);
}

OrdSet translate_down(const OrdSet& s, const Ordinal& c) {
  if (c.is_zero()) return s;
  OrdSet r = set_intersect(s, OrdSet::interval(c, ExtOrdinal::top()));
  Nat L = c.leading_exp();
  Ordinal split = Ordinal::omega_power(L + 1);
  RawSet raw;
  for (const auto& cell : r.cells()) {
    // pieces at or above w^(L+1) are fixed by the translation
    Ordinal lo_hi = cell.hi.is_top() ? split : std::min(split, cell.hi.ord());
    if (cell.lo < lo_hi) {
      // x -> x - c preserves the interval structure and, except at x == c,
      // the least exponent (the sum c + g ends with g's tail)
      Ordinal tlo = left_subtract(c, cell.lo);
      Ordinal thi = left_subtract(c, lo_hi);
      if (tlo < thi) {
        if (cell.lo == c && !cell.stratum.contains(Ordinal())) {
          // image of the point c itself is 0, which escapes the stratum
          raw.cells.push_back({Ordinal(), ExtOrdinal(Ordinal::from_nat(1)),
                               Stratum::all()});
          Ordinal nlo = left_subtract(c, successor(cell.lo));
          if (nlo < thi) raw.cells.push_back({nlo, ExtOrdinal(thi), cell.stratum});
        } else {
          raw.cells.push_back({tlo, ExtOrdinal(thi), cell.stratum});
        }
      }
    }
    if (cell.hi.is_top() || cell.hi.ord() > split) {
      Ordinal hlo = std::max(cell.lo, split);
      raw.cells.push_back({hlo, cell.hi, cell.stratum});
    }
  }
  if (r.plus_powers()) {
    Nat thr = *r.plus_powers();
    for (Nat j = thr; j <= L; ++j) {
      Ordinal p = Ordinal::omega_power(j);
      if (p >= c) raw.cells.push_back({left_subtract(c, p),
                                       ExtOrdinal(successor(left_subtract(c, p))),
                                       Stratum::all()});
    }
    raw.plus_powers.push_back(std::max(thr, L + 1));
  }
  std::vector<Ordinal> low_holes;
  if (r.minus_powers()) {
    Nat thr = *r.minus_powers();
    for (Nat j = thr; j <= L; ++j) {
      Ordinal p = Ordinal::omega_power(j);
      if (p >= c) low_holes.push_back(left_subtract(c, p));
    }
    raw.minus_powers.push_back(std::max(thr, L + 1));
  }
  OrdSet out = OrdSet::normalize(raw);
  for (const Ordinal& h : low_holes) out = set_difference(out, OrdSet::single(h));
  return out;
}

OrdSet translate_up(const OrdSet& s, const Ordinal& c) {
  if (c.is_zero()) return s;
  Nat L = c.leading_exp();
  Ordinal split = Ordinal::omega_power(L + 1);
  RawSet raw;
  bool zero_in = s.member(Ordinal());
  for (const auto& cell : s.cells()) {
    Ordinal lo = cell.lo.is_zero() ? Ordinal::from_nat(1) : cell.lo;
    if (!cell.hi.is_top() && lo >= cell.hi.ord()) {
      // nothing besides possibly the 0 point
    } else {
      Ordinal tlo = add(c, lo);
      ExtOrdinal thi = cell.hi.is_top() ? ExtOrdinal::top()
                                        : ExtOrdinal(add(c, cell.hi.ord()));
      // adding c fixes everything at or above w^(L+1); below, it shifts the
      // interval while preserving least exponents of nonzero points
      raw.cells.push_back({tlo, thi, cell.stratum});
    }
  }
  if (zero_in)
    raw.cells.push_back({c, ExtOrdinal(successor(c)), Stratum::all()});
  if (s.plus_powers()) {
    Nat thr = *s.plus_powers();
    for (Nat j = thr; j <= L; ++j) {
      Ordinal p = add(c, Ordinal::omega_power(j));
      raw.cells.push_back({p, ExtOrdinal(successor(p)), Stratum::all()});
    }
    raw.plus_powers.push_back(std::max(thr, L + 1));
  }
  std::vector<Ordinal> low_holes;
  if (s.minus_powers()) {
    Nat thr = *s.minus_powers();
    for (Nat j = thr; j <= L; ++j) low_holes.push_back(add(c, Ordinal::omega_power(j)));
    raw.minus_powers.push_back(std::max(*s.minus_powers(), L + 1));
  }
  OrdSet out = OrdSet::normalize(raw);
  for (const Ordinal& h : low_holes) out = set_difference(out, OrdSet::single(h));
  return out;
}

// --- enumeration images --------------------------------------------------------

namespace {

// supported carrier shapes: a finite prefix (explicitly listable) followed by
// one closed-form tail
struct CarrierShape {
  std::vector<Ordinal> prefix;  // sorted members below the tail
  // tail = { shift_k(b) : b >= c0 }   restricted to [start, TOP)
  bool has_tail = false;
  Nat shift_k = 0;      // 0 for plain interval tails
  Ordinal start;        // tail cell lower bound (a member)
};

CarrierShape carrier_shape(const OrdSet& x) {
  CarrierShape sh;
  if (x.plus_powers() || x.minus_powers())
    throw unrepresentable_error("carrier with sparse power corrections");
  std::vector<Cell> bounded;
  std::optional<Cell> tail;
  for (const auto& c : x.cells()) {
    if (c.hi.is_top()) {
      if (tail) throw unrepresentable_error("carrier with several unbounded cells");
      tail = c;
    } else {
      bounded.push_back(c);
    }
  }
  if (tail) {
    sh.has_tail = true;
    sh.start = tail->lo;
    switch (tail->stratum.kind) {
      case Stratum::All:
        sh.shift_k = 0;
        break;
      case Stratum::Tail:
        sh.shift_k = tail->stratum.level;
        break;
      case Stratum::Exact:
        throw unrepresentable_error("carrier tail over an EXACT stratum");
    }
    for (const auto& b : bounded)
      if (!(b.hi.ord() <= tail->lo))
        throw unrepresentable_error("carrier prefix interleaves its tail");
  }
  // list the bounded part explicitly
  for (const auto& b : bounded) {
    OrdSet one = OrdSet::normalize({{b}, {}, {}});
    ExtOrdinal t = one.order_type();
    if (t.is_top() || !t.ord().is_finite())
      throw unrepresentable_error("carrier prefix is infinite");
    Nat n = t.ord().is_zero() ? Nat(0) : t.ord().as_nat();
    for (Nat i = 0; i < n; ++i) sh.prefix.push_back(one.enumerate(Ordinal::from_nat(i)));
  }
  std::sort(sh.prefix.begin(), sh.prefix.end());
  return sh;
}

}  // namespace

OrdSet position_image(const OrdSet& carrier, const OrdSet& b) {
  OrdSet bb = set_intersect(carrier, b);
  if (bb.is_empty()) return OrdSet::empty();
  if (bb == carrier) {
    ExtOrdinal t = carrier.order_type();
    return t.is_top() ? OrdSet::full()
                      : OrdSet::interval(Ordinal(), ExtOrdinal(t.ord()));
  }
  CarrierShape sh = carrier_shape(carrier);
  RawSet out;
  Nat idx = 0;
  for (const Ordinal& p : sh.prefix) {
    if (bb.member(p)) {
      Ordinal pos = Ordinal::from_nat(idx);
      out.cells.push_back({pos, ExtOrdinal(successor(pos)), Stratum::all()});
    }
    ++idx;
  }
  OrdSet head = OrdSet::normalize(out);
  if (!sh.has_tail) return head;
  OrdSet tail_part = set_intersect(bb, OrdSet::interval(sh.start, ExtOrdinal::top()));
  OrdSet q = unshift_set(sh.shift_k, tail_part);
  Ordinal c0 = unshift_set(sh.shift_k, OrdSet::single(sh.start)).min_element().value();
  OrdSet positions = translate_down(q, c0);
  positions = translate_up(positions, Ordinal::from_nat(idx));
  return set_union(head, positions);
}

OrdSet enum_image(const OrdSet& carrier, const OrdSet& p) {
  if (p.is_empty()) return OrdSet::empty();
  CarrierShape sh = carrier_shape(carrier);
  RawSet head;
  Nat i = 0;
  for (const Ordinal& e : sh.prefix) {
    if (p.member(Ordinal::from_nat(i)))
      head.cells.push_back({e, ExtOrdinal(successor(e)), Stratum::all()});
    ++i;
  }
  OrdSet img = OrdSet::normalize(head);
  if (!sh.has_tail) return img;
  Nat off = Nat(sh.prefix.size());
  OrdSet rest = translate_down(p, Ordinal::from_nat(off));
  Ordinal c0 = unshift_set(sh.shift_k, OrdSet::single(sh.start)).min_element().value();
  OrdSet shifted = shift_set(sh.shift_k, translate_up(rest, c0));
  return set_union(img, shifted);
}

}  // namespace ordtop
