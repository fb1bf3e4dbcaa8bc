#include "ordtop/ordset.hpp"

#include <algorithm>
#include <cassert>
#include <set>

#include "detail.hpp"

namespace ordtop {

using detail::class_sup_below;
using detail::first_in_class;
using detail::first_in_tail;
using detail::power_of;
using detail::power_range;
using detail::PowerRange;
using detail::tail_sup_below;

namespace {
constexpr std::size_t kMaxClassScan = 1u << 20;
constexpr std::size_t kMaxMaterialize = 1u << 17;
}  // namespace

// --- Stratum / Cell ----------------------------------------------------------

bool Stratum::contains(const Ordinal& a) const {
  switch (kind) {
    case All:
      return true;
    case Exact:
      return !a.is_zero() && a.least_exp() == level;
    case Tail:
      return a.is_zero() || a.least_exp() >= level;
  }
  return false;
}

std::strong_ordering Stratum::operator<=>(const Stratum& o) const {
  if (kind != o.kind) return static_cast<int>(kind) <=> static_cast<int>(o.kind);
  return level < o.level    ? std::strong_ordering::less
         : level > o.level  ? std::strong_ordering::greater
                            : std::strong_ordering::equal;
}

std::string Stratum::str() const {
  switch (kind) {
    case All:
      return "ALL";
    case Exact:
      return "E(" + level.str() + ")";
    case Tail:
      return "D(" + level.str() + ")";
  }
  return "?";
}

std::string Cell::str() const {
  return "[" + lo.str() + "," + hi.str() + ")&" + stratum.str();
}

namespace {

// --- KSet: finite unions of [a,b) intervals of naturals plus one tail -------

struct KSet {
  std::vector<std::pair<Nat, Nat>> segs;  // disjoint, sorted, nonempty
  std::optional<Nat> tail;                // [tail, inf)

  static KSet none() { return {}; }

  void norm() {
    if (tail) {
      std::vector<std::pair<Nat, Nat>> keep;
      for (auto& s : segs) {
        if (s.first >= *tail) continue;
        if (s.second > *tail) s.second = *tail;
        if (s.second > s.first) keep.push_back(s);
      }
      segs = keep;
    }
    std::sort(segs.begin(), segs.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<std::pair<Nat, Nat>> out;
    for (auto& s : segs) {
      if (s.second <= s.first) continue;
      if (!out.empty() && s.first <= out.back().second) {
        if (s.second > out.back().second) out.back().second = s.second;
      } else {
        out.push_back(s);
      }
    }
    segs = out;
    if (tail && !segs.empty() && segs.back().second == *tail) {
      tail = segs.back().first;
      segs.pop_back();
    }
  }

  bool contains(const Nat& k) const {
    if (tail && k >= *tail) return true;
    for (auto& s : segs)
      if (k >= s.first && k < s.second) return true;
    return false;
  }
  bool empty() const { return segs.empty() && !tail; }
};

KSet kset_union(const KSet& a, const KSet& b) {
  KSet r = a;
  r.segs.insert(r.segs.end(), b.segs.begin(), b.segs.end());
  if (b.tail) r.tail = r.tail ? std::min(*r.tail, *b.tail) : *b.tail;
  r.norm();
  return r;
}

KSet kset_intersect(const KSet& a, const KSet& b) {
  KSet r;
  for (auto& s : a.segs) {
    for (auto& t : b.segs) {
      Nat lo = std::max(s.first, t.first), hi = std::min(s.second, t.second);
      if (hi > lo) r.segs.push_back({lo, hi});
    }
    if (b.tail) {
      Nat lo = std::max(s.first, *b.tail);
      if (s.second > lo) r.segs.push_back({lo, s.second});
    }
  }
  if (a.tail) {
    for (auto& t : b.segs) {
      Nat lo = std::max(*a.tail, t.first);
      if (t.second > lo) r.segs.push_back({lo, t.second});
    }
    if (b.tail) r.tail = std::max(*a.tail, *b.tail);
  }
  r.norm();
  return r;
}

KSet kset_diff(const KSet& a, const KSet& b) {
  // a minus b, segment by segment; the a-tail splits into segments up to the
  // relevant b-boundaries and keeps a tail unless b has a later tail.
  KSet r;
  auto sub_segment = [&](Nat lo, Nat hi) {
    std::vector<std::pair<Nat, Nat>> cur{{lo, hi}};
    auto carve = [&](const Nat& blo, const Nat& bhi) {
      std::vector<std::pair<Nat, Nat>> next;
      for (auto& c : cur) {
        if (bhi <= c.first || blo >= c.second) {
          next.push_back(c);
          continue;
        }
        if (blo > c.first) next.push_back({c.first, blo});
        if (bhi < c.second) next.push_back({bhi, c.second});
      }
      cur = next;
    };
    for (auto& bs : b.segs) carve(bs.first, bs.second);
    if (b.tail) {
      std::vector<std::pair<Nat, Nat>> next;
      for (auto& c : cur) {
        if (c.first >= *b.tail) continue;
        next.push_back({c.first, std::min(c.second, *b.tail)});
      }
      cur = next;
    }
    for (auto& c : cur) r.segs.push_back(c);
  };
  for (auto& s : a.segs) sub_segment(s.first, s.second);
  if (a.tail) {
    if (b.tail) {
      if (*b.tail > *a.tail) sub_segment(*a.tail, *b.tail);
    } else {
      Nat start = *a.tail;
      Nat hi_seen = start;
      for (auto& bs : b.segs) hi_seen = std::max(hi_seen, bs.second);
      if (hi_seen > start) sub_segment(start, hi_seen);
      r.tail = hi_seen;
    }
  }
  r.norm();
  return r;
}

// --- ClassSet: which least-exponent classes (and 0) a trace includes --------

struct ClassSet {
  std::vector<Nat> E;        // sorted, all below tail when tail is set
  std::optional<Nat> tail;   // classes [tail, inf)
  bool zero = false;

  void norm() {
    std::sort(E.begin(), E.end());
    E.erase(std::unique(E.begin(), E.end()), E.end());
    if (tail) {
      while (!E.empty() && E.back() >= *tail) E.pop_back();
      // pull the tail down over contiguous E entries
      while (!E.empty() && E.back() + 1 == *tail) {
        tail = E.back();
        E.pop_back();
      }
    }
  }
  bool has_class(const Nat& j) const {
    if (tail && j >= *tail) return true;
    return std::binary_search(E.begin(), E.end(), j);
  }
  bool empty_trace() const { return E.empty() && !tail && !zero; }
  bool operator==(const ClassSet&) const = default;
};

ClassSet cs_union(const ClassSet& a, const ClassSet& b) {
  ClassSet r;
  r.E = a.E;
  r.E.insert(r.E.end(), b.E.begin(), b.E.end());
  if (a.tail && b.tail) r.tail = std::min(*a.tail, *b.tail);
  else r.tail = a.tail ? a.tail : b.tail;
  r.zero = a.zero || b.zero;
  r.norm();
  return r;
}

ClassSet cs_intersect(const ClassSet& a, const ClassSet& b) {
  ClassSet r;
  for (const Nat& j : a.E)
    if (b.has_class(j)) r.E.push_back(j);
  if (a.tail) {
    for (const Nat& j : b.E)
      if (j >= *a.tail) r.E.push_back(j);
  }
  if (a.tail && b.tail) r.tail = std::max(*a.tail, *b.tail);
  r.zero = a.zero && b.zero;
  r.norm();
  return r;
}

ClassSet cs_diff(const ClassSet& a, const ClassSet& b) {
  ClassSet r;
  for (const Nat& j : a.E)
    if (!b.has_class(j)) r.E.push_back(j);
  if (a.tail) {
    if (!b.tail) {
      Nat t = *a.tail;
      Nat hi = t;
      for (const Nat& j : b.E) hi = std::max(hi, j + 1);
      for (Nat j = t; j < hi; ++j)
        if (!b.has_class(j)) r.E.push_back(j);
      r.tail = hi;
    } else {
      for (Nat j = *a.tail; j < std::max(*a.tail, *b.tail); ++j)
        if (!b.has_class(j)) r.E.push_back(j);
    }
  }
  r.zero = a.zero && !b.zero;
  r.norm();
  return r;
}

ClassSet cs_of_stratum(const Stratum& s) {
  ClassSet r;
  switch (s.kind) {
    case Stratum::All:
      r.tail = Nat(0);
      r.zero = true;
      break;
    case Stratum::Exact:
      r.E.push_back(s.level);
      break;
    case Stratum::Tail:
      r.tail = s.level;
      r.zero = true;
      break;
  }
  return r;
}

// --- piece emission ----------------------------------------------------------

struct Piece {
  Ordinal lo;
  ExtOrdinal hi;
  ClassSet trace;
};

// classes with at least one element in [lo,hi); for hi == TOP every class is
// present, flagged by `all`
struct PresentClasses {
  std::vector<Nat> list;  // meaningful when !all
  bool all = false;
};

PresentClasses classes_in_interval(const Ordinal& lo, const ExtOrdinal& hi) {
  PresentClasses pc;
  if (hi.is_top()) {
    pc.all = true;
    return pc;
  }
  const Ordinal& b = hi.ord();
  if (b.is_zero()) return pc;
  Nat maxj = b.leading_exp();
  if (maxj > Nat(kMaxClassScan))
    throw error("class scan bound exceeded (exponent too large)");
  for (Nat j = 0; j <= maxj; ++j) {
    if (first_in_class(j, lo) < b) pc.list.push_back(j);
  }
  return pc;
}

void emit_piece(const Piece& p, std::vector<Cell>& out) {
  if (p.trace.empty_trace()) return;
  bool zero_present = p.trace.zero && p.lo.is_zero();

  // classes of the interval that actually occur
  PresentClasses pc = classes_in_interval(p.lo, p.hi);
  std::vector<Nat> present;  // present classes included by the trace
  bool full = true;
  if (pc.all) {
    // unbounded piece: every class occurs
    full = p.trace.tail.has_value();
    if (full) {
      for (Nat j = 0; j < *p.trace.tail; ++j)
        if (!p.trace.has_class(j)) { full = false; break; }
    }
    if (p.lo.is_zero() && !p.trace.zero) full = false;
  } else {
    for (const Nat& j : pc.list) {
      if (p.trace.has_class(j)) present.push_back(j);
      else full = false;
    }
    if (p.lo.is_zero() && !p.trace.zero) full = false;
    if (present.empty() && !zero_present) return;
  }

  if (full) {
    out.push_back({p.lo, p.hi, Stratum::all()});
    return;
  }

  // try a TAIL cell for the topmost run of included classes
  std::optional<Nat> t_emit;
  if (pc.all) {
    if (p.trace.tail) {
      Nat t = *p.trace.tail;
      while (t >= 1 && p.trace.has_class(t - 1)) --t;
      t_emit = t;
    }
  } else if (!present.empty()) {
    // smallest t such that every present interval class >= t is included
    Nat t = pc.list.back() + 1;
    for (std::size_t i = pc.list.size(); i-- > 0;) {
      if (p.trace.has_class(pc.list[i])) t = pc.list[i];
      else break;
    }
    if (t <= pc.list.back()) {
      std::size_t covered = 0;
      for (const Nat& j : present)
        if (j >= t) ++covered;
      if (zero_present || covered >= 2) t_emit = t;
    }
  }

  std::vector<Nat> exact_classes;
  if (pc.all) {
    for (const Nat& j : p.trace.E)
      if (!t_emit || j < *t_emit) exact_classes.push_back(j);
  } else {
    for (const Nat& j : present)
      if (!t_emit || j < *t_emit) exact_classes.push_back(j);
  }

  if (t_emit) {
    // tight bounds over the classes >= t_emit (plus 0 when carried);
    // when 0 is in the interval but not in the set, start past it so the
    // TAIL cell cannot pick it up
    Nat tt = std::max<Nat>(*t_emit, 1);
    Ordinal start = p.lo;
    if (p.lo.is_zero() && !zero_present) start = Ordinal::from_nat(1);
    Ordinal lo = zero_present ? Ordinal() : first_in_tail(tt, start);
    if (p.hi.is_top()) {
      out.push_back({lo, p.hi, Stratum::tail(*t_emit)});
    } else {
      auto s = tail_sup_below(tt, p.hi.ord());
      ExtOrdinal hi = s && s->sup > lo ? ExtOrdinal(s->sup)
                                       : ExtOrdinal(successor(lo));
      if (zero_present || (s && s->sup > lo))
        out.push_back({lo, zero_present && !s ? ExtOrdinal(Ordinal::from_nat(1)) : hi,
                       Stratum::tail(*t_emit)});
    }
  } else if (zero_present) {
    out.push_back({Ordinal(), ExtOrdinal(Ordinal::from_nat(1)), Stratum::all()});
  }

  for (const Nat& j : exact_classes) {
    Ordinal lo = first_in_class(j, p.lo);
    if (p.hi.is_top()) {
      out.push_back({lo, ExtOrdinal::top(), Stratum::exact(j)});
    } else {
      auto s = class_sup_below(j, p.hi.ord());
      if (!s) continue;
      if (s->sup <= lo) continue;
      out.push_back({lo, ExtOrdinal(s->sup), Stratum::exact(j)});
    }
  }
}

// canonical polish of one emitted cell relative to its own tight interval;
// nullopt when the cell turns out to denote nothing
std::optional<Cell> reduce_cell(Cell c) {
  if (c.stratum.kind == Stratum::All) return c;
  bool zero_in = c.lo.is_zero();
  ClassSet cs = cs_of_stratum(c.stratum);
  if (c.hi.is_top()) {
    // every class occurs on an unbounded interval; a TAIL threshold is
    // already minimal and only TAIL(0) collapses
    if (c.stratum.kind == Stratum::Tail && c.stratum.level == 0)
      c.stratum = Stratum::all();
    return c;
  }
  PresentClasses pc = classes_in_interval(c.lo, c.hi);
  std::vector<Nat> covered;
  bool full = true;
  for (const Nat& j : pc.list) {
    if (cs.has_class(j)) covered.push_back(j);
    else full = false;
  }
  if (zero_in && !cs.zero) full = false;
  if (full) {
    c.stratum = Stratum::all();
    return c;
  }
  if (c.stratum.kind == Stratum::Tail) {
    if (covered.empty()) {
      if (!zero_in) return std::nullopt;
      return Cell{Ordinal(), ExtOrdinal(Ordinal::from_nat(1)), Stratum::all()};
    }
    if (!zero_in && covered.size() == 1) {
      c.stratum = Stratum::exact(covered[0]);
      return c;
    }
    // minimal threshold denoting the same trace on this interval
    Nat t = c.stratum.level;
    while (t >= 1 && first_in_class(t - 1, c.lo) >= c.hi.ord()) --t;
    c.stratum.level = t;
  }
  return c;
}

bool cell_lt(const Cell& a, const Cell& b) {
  if (a.lo != b.lo) return a.lo < b.lo;
  return a.stratum < b.stratum;
}

// can [a.hi, b.lo) contain an element of the common stratum?
bool gap_empty(const Cell& a, const Cell& b) {
  if (a.hi.is_top()) return false;
  const Ordinal& g0 = a.hi.ord();
  const Ordinal& g1 = b.lo;
  if (g1 <= g0) return true;
  switch (a.stratum.kind) {
    case Stratum::All:
      return g0 >= g1;
    case Stratum::Exact:
      return first_in_class(a.stratum.level, g0) >= g1;
    case Stratum::Tail:
      return first_in_tail(std::max<Nat>(a.stratum.level, 1), g0) >= g1 && !g0.is_zero();
  }
  return false;
}

std::vector<Cell> merge_cells(std::vector<Cell> cells) {
  std::sort(cells.begin(), cells.end(), cell_lt);
  // merge same-stratum neighbours whose gap holds no stratum element
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i + 1 < cells.size(); ++i) {
      for (std::size_t j = i + 1; j < cells.size(); ++j) {
        if (cells[i].stratum != cells[j].stratum) continue;
        if (cells[j].lo < cells[i].hi || gap_empty(cells[i], cells[j])) {
          if (cells[j].hi > cells[i].hi) cells[i].hi = cells[j].hi;
          cells.erase(cells.begin() + static_cast<std::ptrdiff_t>(j));
          changed = true;
          break;
        }
      }
      if (changed) break;
    }
  }
  std::sort(cells.begin(), cells.end(), cell_lt);
  return cells;
}

}  // namespace

// --- trace extraction over refined pieces ------------------------------------

namespace {

std::vector<Ordinal> collect_breaks(const std::vector<Cell>& cells) {
  std::set<Ordinal> bs;
  bs.insert(Ordinal());
  for (const auto& c : cells) {
    bs.insert(c.lo);
    if (!c.hi.is_top()) bs.insert(c.hi.ord());
  }
  return {bs.begin(), bs.end()};
}

// class trace of a cell list on the piece [lo, next); every cell either
// covers the piece or misses it (pieces are refined by all endpoints)
ClassSet trace_on(const std::vector<Cell>& cells, const Ordinal& lo) {
  ClassSet r;
  for (const auto& c : cells) {
    if (c.lo <= lo && (c.hi.is_top() || c.hi.ord() > lo))
      r = cs_union(r, cs_of_stratum(c.stratum));
  }
  return r;
}

KSet cell_powers(const std::vector<Cell>& cells) {
  KSet r;
  for (const auto& c : cells) {
    PowerRange pr = power_range(c.lo, c.hi);
    if (pr.empty()) continue;
    KSet one;
    if (pr.kmax) one.segs.push_back({pr.kmin, *pr.kmax});
    else one.tail = pr.kmin;
    // filter by stratum
    ClassSet cs = cs_of_stratum(c.stratum);
    KSet strat;
    for (const Nat& j : cs.E)
      if (j >= 1) strat.segs.push_back({j, j + 1});
    if (cs.tail) strat.tail = std::max<Nat>(*cs.tail, 1);
    r = kset_union(r, kset_intersect(one, strat));
  }
  r.norm();
  return r;
}

KSet raw_powers(const RawSet& raw) {
  KSet cellk = cell_powers(raw.cells);
  KSet plus, minus;
  for (const Nat& j : raw.plus_powers) {
    if (j < 1) throw error("POWERS_FROM threshold must be >= 1");
    plus.tail = plus.tail ? std::min(*plus.tail, j) : j;
  }
  for (const Nat& j : raw.minus_powers) {
    if (j < 1) throw error("POWERS_FROM threshold must be >= 1");
    minus.tail = minus.tail ? std::min(*minus.tail, j) : j;
  }
  return kset_union(kset_diff(cellk, minus), plus);
}

OrdSet assemble(std::vector<Piece> pieces, const KSet& desired);

}  // namespace

// --- OrdSet constructors ------------------------------------------------------

OrdSet OrdSet::full() {
  RawSet raw;
  raw.cells.push_back({Ordinal(), ExtOrdinal::top(), Stratum::all()});
  return normalize(raw);
}

OrdSet OrdSet::interval(const Ordinal& lo, const ExtOrdinal& hi) {
  RawSet raw;
  raw.cells.push_back({lo, hi, Stratum::all()});
  return normalize(raw);
}

OrdSet OrdSet::single(const Ordinal& a) {
  return interval(a, ExtOrdinal(successor(a)));
}

OrdSet OrdSet::stratum(Stratum s) {
  RawSet raw;
  raw.cells.push_back({Ordinal(), ExtOrdinal::top(), s});
  return normalize(raw);
}

OrdSet OrdSet::powers_from(const Nat& j) {
  RawSet raw;
  raw.plus_powers.push_back(j);
  return normalize(raw);
}

OrdSet OrdSet::normalize(const RawSet& raw) {
  for (const auto& c : raw.cells) {
    if (!(ExtOrdinal(c.lo) < c.hi)) throw malformed_cell_error();
  }
  std::vector<Ordinal> breaks = collect_breaks(raw.cells);
  std::vector<Piece> pieces;
  for (std::size_t i = 0; i < breaks.size(); ++i) {
    Piece p;
    p.lo = breaks[i];
    p.hi = (i + 1 < breaks.size()) ? ExtOrdinal(breaks[i + 1]) : ExtOrdinal::top();
    p.trace = trace_on(raw.cells, p.lo);
    pieces.push_back(std::move(p));
  }
  return assemble(std::move(pieces), raw_powers(raw));
}

namespace {

// Insert power-correction breakpoints and apply per-point class edits, then
// emit tight canonical cells plus at most one sparse atom.
OrdSet assemble(std::vector<Piece> pieces, const KSet& desired) {
  // provisional power trace implied by the piece traces
  KSet provisional;
  for (const auto& p : pieces) {
    PowerRange pr = power_range(p.lo, p.hi);
    if (pr.empty()) continue;
    KSet rng;
    if (pr.kmax) rng.segs.push_back({pr.kmin, *pr.kmax});
    else rng.tail = pr.kmin;
    KSet cls;
    for (const Nat& j : p.trace.E)
      if (j >= 1) cls.segs.push_back({j, j + 1});
    if (p.trace.tail) cls.tail = std::max<Nat>(*p.trace.tail, 1);
    provisional = kset_union(provisional, kset_intersect(rng, cls));
  }
  KSet adds = kset_diff(desired, provisional);
  KSet removes = kset_diff(provisional, desired);

  std::optional<Nat> plus_atom, minus_atom;
  if (adds.tail) plus_atom = *adds.tail;
  if (removes.tail) minus_atom = *removes.tail;

  auto explicit_points = [&](const KSet& s) {
    std::vector<Nat> ks;
    for (auto& seg : s.segs) {
      if (Nat(seg.second - seg.first) > Nat(kMaxMaterialize))
        throw error("set requires materializing too many isolated powers");
      for (Nat k = seg.first; k < seg.second; ++k) ks.push_back(k);
    }
    return ks;
  };
  std::vector<Nat> add_pts = explicit_points(adds);
  std::vector<Nat> rm_pts = explicit_points(removes);

  // refine pieces at the correction points and edit the singleton traces
  std::set<Ordinal> extra;
  for (const Nat& k : add_pts) {
    extra.insert(Ordinal::omega_power(k));
    extra.insert(successor(Ordinal::omega_power(k)));
  }
  for (const Nat& k : rm_pts) {
    extra.insert(Ordinal::omega_power(k));
    extra.insert(successor(Ordinal::omega_power(k)));
  }
  if (!extra.empty()) {
    std::vector<Piece> refined;
    for (const auto& p : pieces) {
      std::vector<Ordinal> cuts{p.lo};
      for (const Ordinal& x : extra)
        if (x > p.lo && ExtOrdinal(x) < p.hi) cuts.push_back(x);
      std::sort(cuts.begin(), cuts.end());
      for (std::size_t i = 0; i < cuts.size(); ++i) {
        Piece q;
        q.lo = cuts[i];
        q.hi = (i + 1 < cuts.size()) ? ExtOrdinal(cuts[i + 1]) : p.hi;
        q.trace = p.trace;
        refined.push_back(std::move(q));
      }
    }
    pieces = std::move(refined);
  }
  for (auto& p : pieces) {
    if (auto k = power_of(p.lo); k && ExtOrdinal(successor(p.lo)) == p.hi) {
      bool want = desired.contains(*k);
      bool have = p.trace.has_class(*k);
      if (want && !have) p.trace = cs_union(p.trace, [&] {
        ClassSet c; c.E.push_back(*k); return c; }());
      if (!want && have) p.trace = cs_diff(p.trace, [&] {
        ClassSet c; c.E.push_back(*k); return c; }());
    }
  }

  std::vector<Cell> cells;
  for (const auto& p : pieces) emit_piece(p, cells);
  std::vector<Cell> reduced;
  for (auto& c : cells)
    if (auto r = reduce_cell(c)) reduced.push_back(*r);
  cells = merge_cells(std::move(reduced));

  // atom maximality: a power point contiguous with a sparse tail belongs to
  // the atom, not to the cells, so equal sets normalize identically
  if (plus_atom) {
    bool moved = true;
    while (moved && *plus_atom > 1) {
      moved = false;
      Ordinal pw = Ordinal::omega_power(*plus_atom - 1);
      for (std::size_t i = 0; i < cells.size(); ++i) {
        if (cells[i].stratum.kind == Stratum::All && cells[i].lo == pw &&
            cells[i].hi == ExtOrdinal(successor(pw))) {
          cells.erase(cells.begin() + static_cast<std::ptrdiff_t>(i));
          *plus_atom -= 1;
          moved = true;
          break;
        }
      }
    }
  }
  if (minus_atom) {
    bool moved = true;
    while (moved && *minus_atom > 1) {
      moved = false;
      Ordinal pw = Ordinal::omega_power(*minus_atom - 1);
      // a hole exactly at pw between two same-stratum cells collapses into the atom
      for (std::size_t i = 0; i + 1 < cells.size() && !moved; ++i) {
        for (std::size_t j = i + 1; j < cells.size(); ++j) {
          if (cells[i].stratum != cells[j].stratum) continue;
          if (cells[i].hi.is_top()) continue;
          const Stratum& st = cells[i].stratum;
          if (!st.contains(pw)) continue;
          const Ordinal& g0 = cells[i].hi.ord();
          const Ordinal& g1 = cells[j].lo;
          if (!(g0 <= pw && pw < g1)) continue;
          // gap elements of the stratum must be exactly {pw}
          Ordinal f0 = st.kind == Stratum::Exact ? first_in_class(st.level, g0)
                       : st.kind == Stratum::Tail
                           ? first_in_tail(std::max<Nat>(st.level, 1), g0)
                           : g0;
          Ordinal f1 = st.kind == Stratum::Exact
                           ? first_in_class(st.level, successor(pw))
                           : st.kind == Stratum::Tail
                               ? first_in_tail(std::max<Nat>(st.level, 1), successor(pw))
                               : successor(pw);
          if (f0 == pw && f1 >= g1) {
            cells[i].hi = cells[j].hi;
            cells.erase(cells.begin() + static_cast<std::ptrdiff_t>(j));
            *minus_atom -= 1;
            moved = true;
            break;
          }
        }
      }
    }
  }

  OrdSet s;
  s.cells_ = std::move(cells);
  s.plus_ = plus_atom;
  s.minus_ = minus_atom;
  return s;
}

// common refinement of two canonical sets, with a boolean trace op
OrdSet combine(const OrdSet& a, const OrdSet& b, ClassSet (*op)(const ClassSet&, const ClassSet&),
               KSet (*kop)(const KSet&, const KSet&)) {
  std::set<Ordinal> bs;
  for (const Ordinal& x : collect_breaks(a.cells())) bs.insert(x);
  for (const Ordinal& x : collect_breaks(b.cells())) bs.insert(x);
  std::vector<Ordinal> breaks(bs.begin(), bs.end());
  std::vector<Piece> pieces;
  for (std::size_t i = 0; i < breaks.size(); ++i) {
    Piece p;
    p.lo = breaks[i];
    p.hi = (i + 1 < breaks.size()) ? ExtOrdinal(breaks[i + 1]) : ExtOrdinal::top();
    p.trace = op(trace_on(a.cells(), p.lo), trace_on(b.cells(), p.lo));
    pieces.push_back(std::move(p));
  }
  auto set_powers = [](const OrdSet& s) {
    KSet k = cell_powers(s.cells());
    if (s.minus_powers()) {
      KSet m;
      m.tail = *s.minus_powers();
      k = kset_diff(k, m);
    }
    if (s.plus_powers()) {
      KSet p;
      p.tail = *s.plus_powers();
      k = kset_union(k, p);
    }
    return k;
  };
  return assemble(std::move(pieces), kop(set_powers(a), set_powers(b)));
}

}  // namespace

OrdSet set_union(const OrdSet& a, const OrdSet& b) {
  return combine(a, b, cs_union, kset_union);
}
OrdSet set_intersect(const OrdSet& a, const OrdSet& b) {
  return combine(a, b, cs_intersect, kset_intersect);
}
OrdSet set_difference(const OrdSet& a, const OrdSet& b) {
  return combine(a, b, cs_diff, kset_diff);
}
OrdSet set_complement(const OrdSet& a) { return set_difference(OrdSet::full(), a); }

// --- membership ----------------------------------------------------------------

bool OrdSet::member(const Ordinal& a) const {
  if (auto k = power_of(a)) {
    if (minus_ && *k >= *minus_) return false;
    if (plus_ && *k >= *plus_) return true;
  }
  for (const auto& c : cells_) {
    if (a < c.lo) break;  // cells sorted by lo; later cells cannot contain a
    if (ExtOrdinal(a) < c.hi && c.stratum.contains(a)) return true;
  }
  return false;
}

std::optional<Ordinal> OrdSet::min_element() const {
  std::optional<Ordinal> best;
  for (const auto& c : cells_) {
    // canonical cells are tight: lo is a member
    if (!best || c.lo < *best) best = c.lo;
  }
  if (plus_) {
    Ordinal p = Ordinal::omega_power(*plus_);
    if (!best || p < *best) best = p;
  }
  return best;
}

bool OrdSet::has_fat_tail() const {
  for (const auto& c : cells_)
    if (c.hi.is_top()) return true;
  return false;
}

std::string OrdSet::str() const {
  if (is_empty()) return "{}";
  std::string s;
  for (const auto& c : cells_) {
    if (!s.empty()) s += " | ";
    s += c.str();
  }
  if (plus_) s += (s.empty() ? "" : " | ") + ("POWERS(" + plus_->str() + ")");
  if (minus_) s += " \\ POWERS(" + minus_->str() + ")";
  return s;
}

std::vector<Nat> OrdSet::prefix_members(const Nat& n) const {
  std::vector<Nat> out;
  for (Nat i = 0; i < n; ++i)
    if (member(nu(i))) out.push_back(i);
  return out;
}

}  // namespace ordtop
