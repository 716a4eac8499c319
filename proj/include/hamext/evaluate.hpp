// Numeric evaluation of exact coefficients in double or MPFR precision.
#pragma once

#include <array>
#include <cmath>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>

#include "hamext/bigfloat.hpp"
#include "hamext/expr.hpp"

namespace hamext {

// Raised when a sample point sits too close to a coefficient singularity.
class SampleRejected : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kDefaultDigits = 50;
inline constexpr double kDefaultGuard = 1e-12;

template <class T>
struct Real;

template <>
struct Real<double> {
  static double from(const Scalar& q, mpfr_prec_t) { return q.get_d(); }
  static double from(double x, mpfr_prec_t) { return x; }
  static double to_double(double x) { return x; }
};

template <>
struct Real<BigFloat> {
  static BigFloat from(const Scalar& q, mpfr_prec_t bits) { return BigFloat(q, bits); }
  static BigFloat from(double x, mpfr_prec_t bits) { return BigFloat(x, bits); }
  static double to_double(const BigFloat& x) { return x.to_double(); }
};

// k >= 1.
template <class T>
T ipow(T base, int k) {
  T result = base;
  --k;
  while (k > 0) {
    if (k & 1) result = result * base;
    k >>= 1;
    if (k > 0) base = base * base;
  }
  return result;
}

// Values of every generator at one point: positions (with their
// trigonometric images) and parameters.
template <class T>
class Valuation {
 public:
  explicit Valuation(int digits10 = kDefaultDigits, double guard = kDefaultGuard)
      : bits_(BigFloat::bits_for_digits(digits10)), guard_(guard) {}

  mpfr_prec_t bits() const { return bits_; }
  double guard() const { return guard_; }
  T real(const Scalar& q) const { return Real<T>::from(q, bits_); }
  T real(double x) const { return Real<T>::from(x, bits_); }

  void set_position(int slot, const T& x) {
    using std::cos;
    using std::cosh;
    using std::sin;
    using std::sinh;
    vals_[gen_index(slot, Fn::id)] = x;
    vals_[gen_index(slot, Fn::sin)] = sin(x);
    vals_[gen_index(slot, Fn::cos)] = cos(x);
    vals_[gen_index(slot, Fn::sinh)] = sinh(x);
    vals_[gen_index(slot, Fn::cosh)] = cosh(x);
  }
  void set_param(Param p, const T& x) { vals_[gen_index(p)] = x; }
  bool has(int g) const { return vals_[g].has_value(); }

  const T& gen(int g) const {
    if (!vals_[g]) {
      if (is_param_gen(g)) {
        throw std::invalid_argument("no value for parameter " +
                                    std::string(kParamNames[g - kPositionSlots * kFnCount]));
      }
      throw std::invalid_argument("no value for position slot " + std::to_string(gen_slot(g)));
    }
    return *vals_[g];
  }

  T monomial(const Monomial& m) const {
    using std::abs;
    T r = real(1.0);
    for (int g = 0; g < kGenCount; ++g) {
      const int k = m.e[g];
      if (k == 0) continue;
      const T& x = gen(g);
      if (k > 0) {
        r = r * ipow(x, k);
      } else {
        if (Real<T>::to_double(abs(x)) < guard_) throw SampleRejected("point on a coefficient pole");
        r = r / ipow(x, -k);
      }
    }
    return r;
  }

 private:
  mpfr_prec_t bits_;
  double guard_;
  std::array<std::optional<T>, kGenCount> vals_{};
};

template <class T>
T evaluate(const Poly& p, const Valuation<T>& v) {
  T sum = v.real(0.0);
  for (const auto& t : p.terms()) sum = sum + v.real(t.coef) * v.monomial(t.mono);
  return sum;
}

template <class T>
T evaluate(const Coeff& c, const Valuation<T>& v) {
  using std::abs;
  if (c.is_zero()) return v.real(0.0);
  T den = v.monomial(c.denominator_monomial());
  for (const auto& a : c.atoms()) den = den * ipow(evaluate(a.poly, v), a.power);
  if (Real<T>::to_double(abs(den)) < v.guard()) throw SampleRejected("near-singular denominator");
  return evaluate(c.numerator(), v) / den;
}

}  // namespace hamext
