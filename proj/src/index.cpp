#include "seqdual/index.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace seqdual {

PIndex PIndex::finite(double p) {
  if (!std::isfinite(p) || p < 1.0) {
    throw std::invalid_argument("norm index must lie in [1, inf], got " +
                                std::to_string(p));
  }
  return PIndex(p, false);
}

PIndex PIndex::inf() { return PIndex(0.0, true); }

PIndex PIndex::parse(const std::string& text) {
  if (text == "inf" || text == "Inf" || text == "INF" || text == "infinity") {
    return inf();
  }
  const auto slash = text.find('/');
  try {
    if (slash != std::string::npos) {
      size_t na = 0, nb = 0;
      const double num = std::stod(text.substr(0, slash), &na);
      const double den = std::stod(text.substr(slash + 1), &nb);
      if (na != slash || nb != text.size() - slash - 1 || den == 0.0) {
        throw std::invalid_argument("");
      }
      return finite(num / den);
    }
    size_t n = 0;
    const double p = std::stod(text, &n);
    if (n != text.size()) throw std::invalid_argument("");
    return finite(p);
  } catch (const std::invalid_argument&) {
    throw std::invalid_argument("cannot parse norm index '" + text + "'");
  }
}

double PIndex::value() const {
  if (infinite_) throw std::logic_error("value() called on infinite index");
  return p_;
}

PIndex PIndex::conjugate() const {
  if (infinite_) return finite(1.0);
  if (p_ == 1.0) return inf();
  return finite(p_ / (p_ - 1.0));
}

std::string PIndex::str() const {
  if (infinite_) return "inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", p_);
  return buf;
}

PIndex conjugate_index(const PIndex& p) { return p.conjugate(); }

}  // namespace seqdual
