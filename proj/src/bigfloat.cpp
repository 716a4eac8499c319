#include "hamext/bigfloat.hpp"

#include <cmath>
#include <vector>

namespace hamext {

mpfr_prec_t BigFloat::bits_for_digits(int digits10) {
  return static_cast<mpfr_prec_t>(std::ceil(digits10 * 3.3219280948873622)) + 16;
}

std::string BigFloat::to_string(int digits10) const {
  std::vector<char> buf(static_cast<std::size_t>(digits10) + 32);
  mpfr_snprintf(buf.data(), buf.size(), "%.*Rg", digits10, v_);
  return buf.data();
}

}  // namespace hamext
