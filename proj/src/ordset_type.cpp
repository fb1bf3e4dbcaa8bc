#include <algorithm>
#include <set>

#include "detail.hpp"
#include "ordtop/ordset.hpp"

// Exact order types and the canonical enumeration isomorphism.
//
// The computation decomposes [0, w^w) into superblocks U_n = [w^n, w^(n+1)).
// Within a block, membership splits over the leading coefficient c into
// fibers that are again algebra sets one level down; fibers are eventually
// constant in c, and the block's type is the finite fiber sum followed by
// (constant fiber type) * omega. Across blocks the trace is eventually
// uniform, and for a uniform run the per-block type obeys
// tau(n+1) = tau(n) * omega, so a run contributes a single power of omega
// (ordinal addition absorbs everything earlier).

namespace ordtop {

using detail::first_in_class;
using detail::first_in_tail;
using detail::power_of;

namespace {

struct RunTrace {
  std::vector<Nat> E;
  std::optional<Nat> tail;
  bool has_class(const Nat& j) const {
    if (tail && j >= *tail) return true;
    return std::find(E.begin(), E.end(), j) != E.end();
  }
  bool empty() const { return E.empty() && !tail; }
};

// the uniform class trace spanned by cells that cover every block in [a,b)
RunTrace run_trace(const OrdSet& s, const Nat& blk) {
  RunTrace r;
  Ordinal probe = Ordinal::omega_power(blk);
  for (const auto& c : s.cells()) {
    if (c.lo <= probe && (c.hi.is_top() || c.hi.ord() >= Ordinal::omega_power(blk + 1))) {
      switch (c.stratum.kind) {
        case Stratum::All:
          r.tail = Nat(0);
          break;
        case Stratum::Exact:
          r.E.push_back(c.stratum.level);
          break;
        case Stratum::Tail:
          if (!r.tail || c.stratum.level < *r.tail) r.tail = c.stratum.level;
          break;
      }
    }
  }
  if (r.tail) {
    std::vector<Nat> keep;
    for (const Nat& j : r.E)
      if (j < *r.tail) keep.push_back(j);
    r.E = keep;
  }
  return r;
}

// fiber of s at superblock blk, leading coefficient c: the transported
// subset of [0, w^blk)
OrdSet fiber_at(const OrdSet& s, const Nat& blk, const Nat& c) {
  Ordinal base = Ordinal::omega_power(blk, c);
  Ordinal top = Ordinal::omega_power(blk, c + 1);
  RawSet raw;
  bool zero_pt = false;
  for (const auto& cell : s.cells()) {
    Ordinal ilo = std::max(cell.lo, base);
    Ordinal ihi = (!cell.hi.is_top() && cell.hi.ord() < top) ? cell.hi.ord() : top;
    if (ilo >= ihi) continue;
    Ordinal tlo = left_subtract(base, ilo);
    Ordinal thi = left_subtract(base, ihi);
    bool base_in_interval = cell.lo <= base;  // ilo == base
    switch (cell.stratum.kind) {
      case Stratum::All:
        raw.cells.push_back({tlo, ExtOrdinal(thi), Stratum::all()});
        if (base_in_interval) zero_pt = true;
        break;
      case Stratum::Exact:
        if (cell.stratum.level < blk) {
          raw.cells.push_back({tlo, ExtOrdinal(thi), Stratum::exact(cell.stratum.level)});
        } else if (cell.stratum.level == blk && base_in_interval) {
          zero_pt = true;
        }
        break;
      case Stratum::Tail:
        if (cell.stratum.level <= blk) {
          raw.cells.push_back({tlo, ExtOrdinal(thi), Stratum::tail(cell.stratum.level)});
          if (base_in_interval) zero_pt = true;
        }
        break;
    }
  }
  OrdSet f = OrdSet::normalize(raw);
  // the block's base point transports to 0
  if (s.plus_powers() && c == 1 && blk >= *s.plus_powers()) zero_pt = true;
  if (s.minus_powers() && c == 1 && blk >= *s.minus_powers()) zero_pt = false;
  if (zero_pt && !f.member(Ordinal()))
    f = set_union(f, OrdSet::single(Ordinal()));
  if (!zero_pt && f.member(Ordinal()))
    f = set_difference(f, OrdSet::single(Ordinal()));
  return f;
}

// leading-coefficient breakpoints of block blk: fibers are constant for
// c >= cstar
Nat coeff_cstar(const OrdSet& s, const Nat& blk) {
  Nat cstar = 2;  // c = 1 can differ (sparse power corrections)
  for (const auto& cell : s.cells()) {
    if (!cell.lo.is_zero() && cell.lo.leading_exp() == blk)
      cstar = std::max(cstar, cell.lo.coeff_of(blk) + 2);
    if (!cell.hi.is_top() && !cell.hi.ord().is_zero() &&
        cell.hi.ord().leading_exp() == blk)
      cstar = std::max(cstar, cell.hi.ord().coeff_of(blk) + 2);
  }
  return cstar;
}

Ordinal type_bounded(const OrdSet& s, const Nat& nblocks);

// type of s restricted to superblock blk (explicit fiber walk)
Ordinal block_type(const OrdSet& s, const Nat& blk) {
  Nat cstar = coeff_cstar(s, blk);
  Ordinal total;
  for (Nat c = 1; c < cstar; ++c) {
    total = add(total, type_bounded(fiber_at(s, blk, c), blk));
  }
  Ordinal tconst = type_bounded(fiber_at(s, blk, cstar), blk);
  if (!tconst.is_zero()) total = add(total, times_omega(tconst));
  return total;
}

// materialize the constant fiber of a uniform run at block blk
OrdSet run_fiber(const RunTrace& tr, const Nat& blk) {
  RawSet raw;
  ExtOrdinal top{Ordinal::omega_power(blk)};
  for (const Nat& j : tr.E)
    if (j < blk) raw.cells.push_back({Ordinal(), top, Stratum::exact(j)});
  if (tr.tail && *tr.tail < blk)
    raw.cells.push_back({Ordinal(), top, Stratum::tail(*tr.tail)});
  OrdSet f = OrdSet::normalize(raw);
  bool zero_pt = tr.has_class(blk);
  if (zero_pt && !f.member(Ordinal())) f = set_union(f, OrdSet::single(Ordinal()));
  if (!zero_pt && f.member(Ordinal())) f = set_difference(f, OrdSet::single(Ordinal()));
  return f;
}

// block indices where the trace can change; between consecutive entries the
// trace and the per-block structure are uniform
std::vector<Nat> interesting_blocks(const OrdSet& s, const std::optional<Nat>& cap) {
  std::set<Nat> marks;
  marks.insert(Nat(0));
  auto mark = [&](const Nat& n) {
    if (!cap || n < *cap) marks.insert(n);
  };
  for (const auto& c : s.cells()) {
    if (!c.lo.is_zero()) {
      mark(c.lo.leading_exp());
      mark(c.lo.leading_exp() + 1);
    }
    if (!c.hi.is_top() && !c.hi.ord().is_zero()) {
      mark(c.hi.ord().leading_exp());
      mark(c.hi.ord().leading_exp() + 1);
    }
    switch (c.stratum.kind) {
      case Stratum::All:
        break;
      case Stratum::Exact:
        mark(c.stratum.level);
        mark(c.stratum.level + 1);
        break;
      case Stratum::Tail:
        mark(c.stratum.level);
        mark(c.stratum.level + 1);
        break;
    }
  }
  if (s.plus_powers()) mark(*s.plus_powers());
  if (s.minus_powers()) mark(*s.minus_powers());
  return {marks.begin(), marks.end()};
}

// type of one uniform run [a, b) of blocks; bounded runs only
Ordinal run_type(const OrdSet& s, const Nat& a, const Nat& b) {
  RunTrace tr = run_trace(s, a);
  if (tr.empty()) {
    // at most the sparse power points, one per block
    if (!s.plus_powers()) return Ordinal();
    Nat from = std::max(a, *s.plus_powers());
    if (from >= b) return Ordinal();
    return Ordinal::from_nat(b - from);
  }
  Ordinal tau_a = type_bounded(run_fiber(tr, a), a);
  // per-block types are tau(n)*omega with tau(n+1) = tau(n)*omega, so the
  // ordinal sum over the run collapses to the last block's type
  if (tau_a.is_zero()) {
    // trace classes all >= b? then nothing lives below; recheck at b-1
    Ordinal tau_last = type_bounded(run_fiber(tr, b - 1), b - 1);
    if (tau_last.is_zero()) return Ordinal();
    return Ordinal::omega_power(tau_last.leading_exp() + 1);
  }
  Nat lead = tau_a.leading_exp() + (b - 1 - a) + 1;
  return Ordinal::omega_power(lead);
}

Ordinal type_bounded(const OrdSet& s, const Nat& nblocks) {
  Ordinal total;
  if (s.member(Ordinal())) total = Ordinal::from_nat(1);
  if (nblocks == 0) return total;
  std::vector<Nat> marks = interesting_blocks(s, nblocks);
  for (std::size_t i = 0; i < marks.size(); ++i) {
    const Nat& n = marks[i];
    if (n >= nblocks) break;
    total = add(total, block_type(s, n));
    Nat next = (i + 1 < marks.size()) ? marks[i + 1] : nblocks;
    if (next > nblocks) next = nblocks;
    if (next > n + 1) total = add(total, run_type(s, n + 1, next));
  }
  return total;
}

}  // namespace

ExtOrdinal OrdSet::order_type() const {
  if (is_empty()) return ExtOrdinal(Ordinal());
  if (has_fat_tail()) return ExtOrdinal::top();
  Nat nblocks = 0;
  for (const auto& c : cells_) {
    Nat top_exp = c.hi.ord().is_zero() ? Nat(0) : c.hi.ord().leading_exp() + 1;
    nblocks = std::max(nblocks, top_exp);
  }
  Ordinal t = type_bounded(*this, nblocks);
  if (plus_) t = add(t, Ordinal::omega_power(1));
  return ExtOrdinal(t);
}

// --- enumeration ---------------------------------------------------------------

namespace {

// enumerate within one explicit block; pos < block_type(s, blk)
Ordinal enumerate_in_block(const OrdSet& s, const Nat& blk, Ordinal pos) {
  Nat cstar = coeff_cstar(s, blk);
  for (Nat c = 1; c < cstar; ++c) {
    OrdSet f = fiber_at(s, blk, c);
    Ordinal t = type_bounded(f, blk);
    if (pos < t) return add(Ordinal::omega_power(blk, c), f.enumerate(pos));
    pos = left_subtract(t, pos);
  }
  OrdSet f = fiber_at(s, blk, cstar);
  Ordinal gamma = type_bounded(f, blk);
  auto [q, r] = divmod_bounded(pos, gamma);
  return add(Ordinal::omega_power(blk, cstar + q), f.enumerate(r));
}

}  // namespace

Ordinal OrdSet::enumerate(const Ordinal& beta) const {
  if (!(ExtOrdinal(beta) < order_type())) throw out_of_range_error();
  Ordinal pos = beta;
  if (member(Ordinal())) {
    if (pos.is_zero()) return Ordinal();
    pos = left_subtract(Ordinal::from_nat(1), pos);
  }
  std::optional<Nat> limit;
  if (!has_fat_tail()) {
    Nat nblocks = 0;
    for (const auto& c : cells_) {
      Nat e = c.hi.ord().is_zero() ? Nat(0) : c.hi.ord().leading_exp() + 1;
      nblocks = std::max(nblocks, e);
    }
    limit = nblocks;
  }
  std::vector<Nat> marks = interesting_blocks(*this, limit);
  for (std::size_t i = 0; i < marks.size(); ++i) {
    const Nat& n = marks[i];
    if (limit && n >= *limit) break;
    Ordinal bt = block_type(*this, n);
    if (pos < bt) return enumerate_in_block(*this, n, pos);
    pos = left_subtract(bt, pos);
    // the run (n+1 .. next)
    Nat next_mark = (i + 1 < marks.size()) ? marks[i + 1]
                    : limit               ? *limit
                                          : n + 1;
    if (limit && next_mark > *limit) next_mark = *limit;
    Nat a = n + 1;
    if (next_mark <= a) continue;
    RunTrace tr = run_trace(*this, a);
    if (tr.empty()) {
      if (plus_) {
        Nat from = std::max(a, *plus_);
        Nat count = next_mark > from ? next_mark - from : Nat(0);
        if (pos.is_finite() && pos.as_nat() < count)
          return Ordinal::omega_power(from + pos.as_nat());
        if (count > 0) pos = left_subtract(Ordinal::from_nat(count), pos);
      }
      continue;
    }
    Ordinal tau_a = type_bounded(run_fiber(tr, a), a);
    if (tau_a.is_zero()) {
      Ordinal rt = run_type(*this, a, next_mark);
      if (pos >= rt) {
        pos = left_subtract(rt, pos);
        continue;
      }
      // fall through block by block (rare; short runs)
      for (Nat m = a; m < next_mark; ++m) {
        Ordinal bt2 = block_type(*this, m);
        if (pos < bt2) return enumerate_in_block(*this, m, pos);
        pos = left_subtract(bt2, pos);
      }
      continue;
    }
    Nat lead_a = tau_a.leading_exp();
    // block m in the run has type w^(lead_a + (m-a) + 1)
    Ordinal rt = run_type(*this, a, next_mark);
    if (!(pos < rt) && !(i + 1 == marks.size() && !limit)) {
      pos = left_subtract(rt, pos);
      continue;
    }
    // find the landing block: smallest m with w^(lead_a+(m-a)+1) > pos
    Nat lp = pos.is_zero() ? Nat(0) : pos.leading_exp();
    Nat m = (lp < lead_a + 1) ? a : a + (lp - lead_a);
    if (limit && m >= next_mark) {
      pos = left_subtract(rt, pos);
      continue;
    }
    Ordinal offset = (m > a) ? Ordinal::omega_power(lead_a + (m - 1 - a) + 1) : Ordinal();
    pos = left_subtract(offset, pos);
    return enumerate_in_block(*this, m, pos);
  }
  // unbounded uniform tail beyond the last mark
  if (!limit) {
    Nat a = marks.empty() ? Nat(0) : marks.back() + 1;
    RunTrace tr = run_trace(*this, a);
    if (!tr.empty()) {
      Ordinal tau_a = type_bounded(run_fiber(tr, a), a);
      if (!tau_a.is_zero()) {
        Nat lead_a = tau_a.leading_exp();
        Nat lp = pos.is_zero() ? Nat(0) : pos.leading_exp();
        Nat m = (lp < lead_a + 1) ? a : a + (lp - lead_a);
        Ordinal offset = (m > a) ? Ordinal::omega_power(lead_a + (m - 1 - a) + 1) : Ordinal();
        pos = left_subtract(offset, pos);
        return enumerate_in_block(*this, m, pos);
      }
    }
    if (plus_) {
      Nat from = std::max(a, *plus_);
      if (pos.is_finite()) return Ordinal::omega_power(from + pos.as_nat());
    }
  } else if (plus_) {
    // sparse points above every cell
    Nat from = std::max(*limit, *plus_);
    if (pos.is_finite()) return Ordinal::omega_power(from + pos.as_nat());
  }
  throw error("enumerate: internal walk exhausted");
}

Ordinal OrdSet::enum_inv(const Ordinal& a) const {
  if (!member(a)) throw not_member_error();
  OrdSet below = set_intersect(*this, OrdSet::interval(Ordinal(), ExtOrdinal(a)));
  ExtOrdinal t = below.order_type();
  return t.ord();
}

}  // namespace ordtop
