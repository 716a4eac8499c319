// Polynomials in the momenta with exact position-dependent coefficients,
// the canonical Poisson bracket and Hamiltonian vector fields.
#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "hamext/evaluate.hpp"
#include "hamext/expr.hpp"
#include "hamext/phase_space.hpp"

namespace hamext {

using MomentumIndex = std::array<std::int16_t, kPositionSlots>;

// Higher total degree first, then lexicographic.
struct MomentumOrder {
  bool operator()(const MomentumIndex& a, const MomentumIndex& b) const;
};

class PhaseSpaceMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class PPoly {
 public:
  using TermMap = std::map<MomentumIndex, Coeff, MomentumOrder>;

  explicit PPoly(SpacePtr space);
  static PPoly constant(SpacePtr space, const Coeff& c);
  static PPoly momentum(SpacePtr space, int slot, int power = 1);

  const SpacePtr& space_ptr() const { return space_; }
  const PhaseSpace& space() const { return *space_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  int degree() const;
  int degree_in(int slot) const;
  // Coefficient of the given momentum monomial (zero when absent).
  Coeff coeff(const MomentumIndex& idx) const;
  bool depends_on_slot(int slot) const;

  PPoly operator-() const;
  friend PPoly operator+(const PPoly& a, const PPoly& b);
  friend PPoly operator-(const PPoly& a, const PPoly& b);
  friend PPoly operator*(const PPoly& a, const PPoly& b);
  PPoly& operator+=(const PPoly& o);
  PPoly scaled(const Coeff& c) const;
  PPoly times_momentum(int slot, int power = 1) const;
  PPoly pow(int k) const;

  PPoly d_position(int slot) const;
  PPoly d_momentum(int slot) const;

  // Same polynomial viewed on a space whose leading positions agree.
  PPoly lift(SpacePtr target) const;
  PPoly map_coefficients(const std::function<Coeff(const Coeff&)>& f) const;

  bool operator==(const PPoly& o) const;
  void add_term(const MomentumIndex& idx, const Coeff& c);

 private:
  SpacePtr space_;
  TermMap terms_;
};

void require_same_space(const PPoly& a, const PPoly& b, const char* what);

// {F, G} = sum_i dF/dq_i dG/dp_i - dF/dp_i dG/dq_i.
PPoly poisson_bracket(const PPoly& f, const PPoly& g);

// X_L(F) := {F, L}. L must not involve the extension pair.
PPoly apply_XL(const PPoly& l, const PPoly& f);

bool is_zero(const PPoly& p);

std::string to_string(const PPoly& p);
inline std::ostream& operator<<(std::ostream& os, const PPoly& p) { return os << to_string(p); }

// Numeric phase-space point: one position and one momentum per dimension.
template <class T>
struct PhasePoint {
  std::vector<T> q;
  std::vector<T> p;
};

template <class T>
Valuation<T> valuation_at(const PhasePoint<T>& x, Valuation<T> params) {
  for (std::size_t i = 0; i < x.q.size(); ++i) params.set_position(static_cast<int>(i), x.q[i]);
  return params;
}

// Sum of coefficient values times momentum monomials. `params` carries the
// parameter values and working precision; positions are taken from x.
template <class T>
T evaluate_ppoly(const PPoly& f, const PhasePoint<T>& x, const Valuation<T>& params) {
  if (static_cast<int>(x.q.size()) != f.space().dims() || x.p.size() != x.q.size()) {
    throw PhaseSpaceMismatch("evaluate_ppoly: point dimension does not match phase space");
  }
  const Valuation<T> v = valuation_at(x, params);
  T sum = v.real(0.0);
  for (const auto& [idx, c] : f.terms()) {
    T term = evaluate(c, v);
    for (std::size_t i = 0; i < x.p.size(); ++i) {
      if (idx[i] > 0) term = term * ipow(x.p[i], idx[i]);
    }
    sum = sum + term;
  }
  return sum;
}

}  // namespace hamext
