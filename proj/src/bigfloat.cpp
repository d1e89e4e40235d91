#include "gaudin/bigfloat.hpp"

#include <cstdlib>
#include <cstring>

namespace gaudin {

std::string MpReal::str() const {
  if (!mpfr_number_p(v_)) {
    if (mpfr_nan_p(v_)) return "nan";
    return mpfr_sgn(v_) > 0 ? "inf" : "-inf";
  }
  if (mpfr_zero_p(v_)) return mpfr_signbit(v_) ? "-0" : "0";
  mpfr_exp_t exp;
  // n_digits = 0 asks for exactly as many digits as are needed to read the
  // value back unchanged at this precision.
  char* s = mpfr_get_str(nullptr, &exp, 10, 0, v_, MPFR_RNDN);
  std::string digits(s);
  mpfr_free_str(s);
  std::string sign;
  if (digits[0] == '-') {
    sign = "-";
    digits.erase(0, 1);
  }
  // Strip trailing zeros; keep at least one digit.
  std::size_t last = digits.find_last_not_of('0');
  digits.erase(last + 1);
  // mpfr exponent convention: value = 0.digits * 10^exp.
  std::string mant = digits.substr(0, 1);
  if (digits.size() > 1) mant += "." + digits.substr(1);
  return sign + mant + "e" + std::to_string(static_cast<long>(exp - 1));
}

MpReal MpReal::from_string(const std::string& s, unsigned prec_bits) {
  MpReal r(prec_bits);
  if (mpfr_set_str(r.v_, s.c_str(), 10, MPFR_RNDN) != 0)
    throw input_error("bad float literal: '" + s + "'");
  return r;
}

}  // namespace gaudin
