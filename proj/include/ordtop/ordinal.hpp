#ifndef ORDTOP_ORDINAL_HPP
#define ORDTOP_ORDINAL_HPP

#include <compare>
#include <optional>
#include <string>
#include <vector>

#include "ordtop/nat.hpp"

namespace ordtop {

// An ordinal below w^w in Cantor normal form: a finite sum of terms
// w^exp * coeff with strictly decreasing exponents and coefficients >= 1.
// The empty sum is 0. Values are immutable once built.
class Ordinal {
 public:
  struct Term {
    Nat exp;
    Nat coeff;
    bool operator==(const Term&) const = default;
  };

  Ordinal() = default;
  static Ordinal from_nat(const Nat& n);
  // w^exp * coeff (zero coeff gives 0).
  static Ordinal omega_power(const Nat& exp, const Nat& coeff = 1);
  // Validates the CNF invariants; throws on violation.
  static Ordinal from_terms(std::vector<Term> terms);

  bool is_zero() const { return terms_.empty(); }
  bool is_finite() const { return terms_.empty() || terms_.front().exp == 0; }
  const std::vector<Term>& terms() const { return terms_; }

  // Leading (largest) exponent; 0 for the ordinal 0.
  Nat leading_exp() const { return terms_.empty() ? Nat(0) : terms_.front().exp; }
  // Least exponent among nonzero terms; 0 for the ordinal 0.
  Nat least_exp() const { return terms_.empty() ? Nat(0) : terms_.back().exp; }
  // Coefficient of w^e (0 when absent).
  Nat coeff_of(const Nat& e) const;
  // The finite value when is_finite(); throws otherwise.
  Nat as_nat() const;

  bool operator==(const Ordinal&) const = default;
  std::strong_ordering operator<=>(const Ordinal& o) const;

  std::string str() const;

 private:
  std::vector<Term> terms_;  // decreasing exponents
};

enum class Cmp { LT, EQ, GT };

Cmp compare(const Ordinal& a, const Ordinal& b);

// Ordinal sum a+b in CNF: terms of a below b's leading exponent are
// absorbed; equal leading exponents merge coefficients.
Ordinal add(const Ordinal& a, const Ordinal& b);

// The unique g with a+g = b; requires a <= b.
Ordinal left_subtract(const Ordinal& a, const Ordinal& b);

// Left multiplication by w^k: every exponent raised by k.
Ordinal shift(const Nat& k, const Ordinal& a);

Ordinal successor(const Ordinal& a);

// g*omega for g > 0, i.e. w^(leading_exp(g)+1).
Ordinal times_omega(const Ordinal& g);

// For b < g*omega with g > 0: the unique (q, r) with b = g*q + r, r < g.
std::pair<Nat, Ordinal> divmod_bounded(const Ordinal& b, const Ordinal& g);

// --- the fixed bijection between N and ordinals below w^w -------------------
//
// nu(n): decode n to a finite sequence of naturals by iterated Cantor
// pairing (0 -> [], n+1 -> cons(unpair(n))), then bump the last entry by 1;
// the result is the coefficient vector (c_0,...,c_k), least exponent first,
// of the ordinal. nu(0) = 0, and nu is a bijection because the bump maps
// arbitrary sequences onto exactly the vectors with nonzero last entry.
// This encoding is frozen: index sets and subspace semantics depend on it.
Ordinal nu(const Nat& n);
Nat nu_inv(const Ordinal& a);

// --- w^w as a sentinel ------------------------------------------------------

// Either an ordinal below w^w or TOP = w^w itself (the order type of the
// full carrier; strictly above every Ordinal).
class ExtOrdinal {
 public:
  ExtOrdinal() : v_(Ordinal()) {}
  ExtOrdinal(Ordinal o) : v_(std::move(o)) {}  // NOLINT(google-explicit-constructor)
  static ExtOrdinal top() { ExtOrdinal e; e.v_.reset(); return e; }

  bool is_top() const { return !v_.has_value(); }
  const Ordinal& ord() const {
    if (is_top()) throw error("TOP is not an Ordinal");
    return *v_;
  }

  bool operator==(const ExtOrdinal&) const = default;
  std::strong_ordering operator<=>(const ExtOrdinal& o) const;

  std::string str() const { return is_top() ? "TOP" : v_->str(); }

 private:
  std::optional<Ordinal> v_;  // nullopt encodes TOP
};

Cmp compare(const ExtOrdinal& a, const ExtOrdinal& b);

}  // namespace ordtop

#endif
