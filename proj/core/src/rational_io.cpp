#include "dpp/scalar.hpp"

#include <cstdio>

namespace dpp {

Rational parse_rational(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("empty rational literal");
  mpq_class q;
  if (q.set_str(text, 10) != 0) {
    throw std::invalid_argument("bad rational literal: '" + text + "'");
  }
  if (sgn(q.get_den()) == 0) {
    throw std::invalid_argument("zero denominator in rational literal: '" + text + "'");
  }
  q.canonicalize();
  return q;
}

std::string format_rational(const Rational& x) {
  return x.get_num().get_str() + "/" + x.get_den().get_str();
}

std::string scalar_debug_string(const Rational& x) { return format_rational(x); }

std::string scalar_debug_string(double x) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string scalar_debug_string(const Complex& x) {
  return "(" + scalar_debug_string(x.real()) + "," + scalar_debug_string(x.imag()) + ")";
}

}  // namespace dpp
