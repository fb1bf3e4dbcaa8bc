#ifndef ORDTOP_NAT_HPP
#define ORDTOP_NAT_HPP

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

namespace ordtop {

// Arbitrary-precision natural number. Negative values never appear in
// canonical data; operations that could underflow throw instead.
// Expression templates are off so arithmetic yields plain values.
using Nat = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>,
                                          boost::multiprecision::et_off>;

struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct underflow_error : error {
  underflow_error() : error("ordinal underflow: left_subtract(a,b) needs a <= b") {}
};

inline std::size_t to_index(const Nat& n) {
  if (n > Nat(std::numeric_limits<std::size_t>::max() / 2))
    throw error("natural too large for an index: " + n.str());
  return static_cast<std::size_t>(n);
}

// Cantor pairing on naturals, used by the nu encoding.
inline Nat cantor_pair(const Nat& a, const Nat& b) {
  Nat s = a + b;
  return s * (s + 1) / 2 + b;
}

inline std::pair<Nat, Nat> cantor_unpair(const Nat& v) {
  // Largest s with s(s+1)/2 <= v, found by integer sqrt then correction.
  Nat s = boost::multiprecision::sqrt(Nat(8) * v + 1);
  s = (s - 1) / 2;
  while (s * (s + 1) / 2 > v) --s;
  while ((s + 1) * (s + 2) / 2 <= v) ++s;
  Nat b = v - s * (s + 1) / 2;
  Nat a = s - b;
  return {a, b};
}

}  // namespace ordtop

#endif
