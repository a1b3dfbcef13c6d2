#pragma once

#include <string>

namespace seqdual {

// Norm exponent p in [1, inf]. Infinity is a distinct state of the type,
// never a sentinel double, so conjugation and serialization stay exact.
class PIndex {
 public:
  static PIndex finite(double p);
  static PIndex inf();

  // Accepts a decimal ("2", "1.5"), a fraction ("4/3"), or "inf".
  static PIndex parse(const std::string& text);

  bool is_inf() const { return infinite_; }
  bool is_one() const { return !infinite_ && p_ == 1.0; }

  // Finite value; throws std::logic_error when the index is infinite.
  double value() const;

  // Hoelder conjugate: 1 <-> inf, otherwise p/(p-1).
  PIndex conjugate() const;

  // Decimal form with full round-trip precision, or "inf".
  std::string str() const;

  friend bool operator==(const PIndex& a, const PIndex& b) {
    return a.infinite_ == b.infinite_ && (a.infinite_ || a.p_ == b.p_);
  }
  friend bool operator!=(const PIndex& a, const PIndex& b) { return !(a == b); }

 private:
  PIndex(double p, bool infinite) : p_(p), infinite_(infinite) {}

  double p_;
  bool infinite_;
};

// Free-function spelling of PIndex::conjugate for exponents passed around
// as plain values. Throws std::invalid_argument outside [1, inf].
PIndex conjugate_index(const PIndex& p);

}  // namespace seqdual
