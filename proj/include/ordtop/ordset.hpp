#ifndef ORDTOP_ORDSET_HPP
#define ORDTOP_ORDSET_HPP

#include <optional>
#include <string>
#include <vector>

#include "ordtop/ordinal.hpp"

namespace ordtop {

struct malformed_cell_error : error {
  malformed_cell_error() : error("malformed cell: lo must be < hi") {}
};
struct mixed_order_type_error : error {
  mixed_order_type_error() : error("order type undecidable under sparse correction rules") {}
};
struct out_of_range_error : error {
  out_of_range_error() : error("enumerate: index not below the set's order type") {}
};
struct not_member_error : error {
  not_member_error() : error("enum_inv: argument is not a member of the set") {}
};
struct unrepresentable_error : error {
  explicit unrepresentable_error(const std::string& what)
      : error("not representable in the set algebra: " + what) {}
};

// A stratum selects ordinals by their least CNF exponent.
//   All      - no constraint.
//   Exact(j) - nonzero ordinals whose least exponent is exactly j.
//   Tail(k)  - multiples of w^k (every exponent >= k); 0 belongs to all Tails.
struct Stratum {
  enum Kind { All, Exact, Tail } kind = All;
  Nat level = 0;

  static Stratum all() { return {All, 0}; }
  static Stratum exact(const Nat& j) { return {Exact, j}; }
  static Stratum tail(const Nat& k) { return {Tail, k}; }

  bool contains(const Ordinal& a) const;
  bool operator==(const Stratum&) const = default;
  // ALL < EXACT(0) < EXACT(1) < ... < TAIL(0) < TAIL(1) < ...
  std::strong_ordering operator<=>(const Stratum& o) const;
  std::string str() const;
};

// Denotes [lo, hi) intersected with the stratum.
struct Cell {
  Ordinal lo;
  ExtOrdinal hi;
  Stratum stratum;
  bool operator==(const Cell&) const = default;
  std::string str() const;
};

// Raw, not-yet-normalized set description: union of cells, then power
// tails removed, then power tails added (adds win over removes).
struct RawSet {
  std::vector<Cell> cells;
  std::vector<Nat> plus_powers;   // POWERS_FROM(j), j >= 1
  std::vector<Nat> minus_powers;  // POWERS_FROM(j), j >= 1
};

// A subset of [0, w^w) in canonical normal form: disjoint tight cells
// sorted by (lo, stratum), plus at most one sparse correction -
// either a tail of powers {w^k : k >= j} added (disjoint from the cells)
// or one removed (contained in the cells). Canonical forms are unique:
// equal sets compare equal with ==.
class OrdSet {
 public:
  OrdSet() = default;  // empty

  static OrdSet empty() { return OrdSet(); }
  static OrdSet full();
  static OrdSet interval(const Ordinal& lo, const ExtOrdinal& hi);
  static OrdSet single(const Ordinal& a);
  static OrdSet stratum(Stratum s);  // full-range stratum
  static OrdSet powers_from(const Nat& j);
  static OrdSet normalize(const RawSet& raw);

  const std::vector<Cell>& cells() const { return cells_; }
  const std::optional<Nat>& plus_powers() const { return plus_; }
  const std::optional<Nat>& minus_powers() const { return minus_; }

  bool is_empty() const { return cells_.empty() && !plus_; }
  bool member(const Ordinal& a) const;
  // Least element; nullopt when empty.
  std::optional<Ordinal> min_element() const;
  // True when some cell reaches TOP (the set meets cofinally many superblocks
  // with fat traces). A lone powers tail is cofinal but not fat.
  bool has_fat_tail() const;
  bool is_cofinal() const { return has_fat_tail() || plus_.has_value(); }

  bool operator==(const OrdSet&) const = default;
  std::string str() const;

  // number of naturals below n that land in the set under nu
  std::vector<Nat> prefix_members(const Nat& n) const;

  ExtOrdinal order_type() const;
  // The unique order isomorphism [0, order_type()) -> set, and its inverse.
  Ordinal enumerate(const Ordinal& beta) const;
  Ordinal enum_inv(const Ordinal& a) const;

 private:
  std::vector<Cell> cells_;
  std::optional<Nat> plus_;
  std::optional<Nat> minus_;
  friend class SetBuilder;
};

OrdSet set_union(const OrdSet& a, const OrdSet& b);
OrdSet set_intersect(const OrdSet& a, const OrdSet& b);
OrdSet set_difference(const OrdSet& a, const OrdSet& b);
OrdSet set_complement(const OrdSet& a);

// --- structural transports (exact; used by reindexing machinery) ------------

// {w^k * a : a in S} as a set: exponents raised by k.
OrdSet shift_set(const Nat& k, const OrdSet& s);
// { b : w^k * b in S }.
OrdSet unshift_set(const Nat& k, const OrdSet& s);
// { x - c : x in S, x >= c } (left subtraction).
OrdSet translate_down(const OrdSet& s, const Ordinal& c);
// { c + x : x in S }.
OrdSet translate_up(const OrdSet& s, const Ordinal& c);

// Position image: the set of order_type(X /\ [0,b)) over b in B /\ X, i.e.
// the image of B under the inverse enumeration of X. Exact for carriers
// whose enumeration has closed form (full range, interval tails, Tail(k)
// strata, finite prefixes attached to those); throws unrepresentable_error
// otherwise.
OrdSet position_image(const OrdSet& carrier, const OrdSet& b);
// Forward image of a position set P under the enumeration of the carrier:
// { enumerate(carrier, p) : p in P }. Same supported class.
OrdSet enum_image(const OrdSet& carrier, const OrdSet& p);

}  // namespace ordtop

#endif
