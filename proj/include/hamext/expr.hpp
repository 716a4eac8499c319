// Exact coefficient ring: fractions of Laurent-trigonometric polynomials in
// the position generators with rational coefficients polynomial in a fixed
// parameter alphabet.
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <ostream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <gmpxx.h>

namespace hamext {

using Scalar = mpq_class;

// Free constants that may appear symbolically in coefficients.
enum class Param : std::uint8_t {
  c1, c2, L0, omega, A, a1, a2, b, alpha1, alpha2, f0, h0
};
inline constexpr int kParamCount = 12;
inline constexpr std::array<std::string_view, kParamCount> kParamNames = {
    "c1", "c2", "L0", "omega", "A", "a1", "a2", "b", "alpha1", "alpha2", "f0", "h0"};

std::optional<Param> param_from_name(std::string_view name);

// Functions of one position variable that act as ring generators.
enum class Fn : std::uint8_t { id, sin, cos, sinh, cosh };
inline constexpr int kFnCount = 5;

// Position slot 0 is the base coordinate, slot 1 the extension coordinate.
inline constexpr int kPositionSlots = 2;
inline constexpr int kGenCount = kPositionSlots * kFnCount + kParamCount;

constexpr int gen_index(int slot, Fn fn) { return slot * kFnCount + static_cast<int>(fn); }
constexpr int gen_index(Param p) { return kPositionSlots * kFnCount + static_cast<int>(p); }
constexpr bool is_param_gen(int g) { return g >= kPositionSlots * kFnCount; }
constexpr int gen_slot(int g) { return g / kFnCount; }
constexpr Fn gen_fn(int g) { return static_cast<Fn>(g % kFnCount); }

class DivisionByZero : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct Monomial {
  std::array<std::int16_t, kGenCount> e{};

  bool is_one() const;
  int total_degree() const;
  Monomial operator*(const Monomial& o) const;
  bool operator==(const Monomial& o) const = default;
};

struct MonomialHash {
  std::size_t operator()(const Monomial& m) const noexcept;
};

// Graded order: higher total degree first, ties broken lexicographically by
// generator index (positions before parameters).
bool graded_before(const Monomial& a, const Monomial& b);

struct Term {
  Monomial mono;
  Scalar coef;
};

// Polynomial over the generators. Stored terms are sorted by graded_before,
// carry nonzero coefficients, and have cos/cosh exponents at most 1.
// Linear generators may carry negative exponents.
class Poly {
 public:
  Poly() = default;
  static Poly constant(const Scalar& c);
  static Poly monomial(const Monomial& m, const Scalar& c = 1);
  static Poly generator(int gen);

  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  std::size_t size() const { return terms_.size(); }
  bool depends_on_slot(int slot) const;
  bool uses_generator(int gen) const;

  Poly operator-() const;
  friend Poly operator+(const Poly& a, const Poly& b);
  friend Poly operator-(const Poly& a, const Poly& b);
  friend Poly operator*(const Poly& a, const Poly& b);
  Poly scaled(const Scalar& c) const;
  Poly times(const Monomial& m, const Scalar& c = 1) const;
  Poly pow(int k) const;
  Poly derivative(int slot) const;

  bool operator==(const Poly& o) const;
  // Total order used to sort denominator factors deterministically.
  static int compare(const Poly& a, const Poly& b);

 private:
  friend class PolyBuilder;
  std::vector<Term> terms_;
};

// Accumulates terms (reducing cos^2 and cosh^2 on the fly) and produces a
// canonical Poly.
class PolyBuilder {
 public:
  void add(const Monomial& m, const Scalar& c);
  void add(const Poly& p, const Scalar& c = 1);
  void reserve(std::size_t n) { acc_.reserve(n); }
  Poly build();
  // Wraps terms already sorted, reduced and free of zero coefficients.
  static Poly adopt_sorted(std::vector<Term> terms);

 private:
  std::unordered_map<Monomial, Scalar, MonomialHash> acc_;
};

// A denominator factor that is not a monomial in sin/sinh/parameters.
struct Atom {
  Poly poly;
  int power = 1;
  bool operator==(const Atom& o) const = default;
};

// Exact coefficient function N/D. D is stored factored as a monic monomial in
// parameters and sin/sinh generators times a sorted product of atoms, each a
// monic polynomial raised to a positive power. Without atoms the stored form
// is unique for a given function.
class Coeff {
 public:
  Coeff() = default;
  Coeff(const Scalar& c);  // NOLINT(google-explicit-constructor)
  Coeff(long c) : Coeff(Scalar(c)) {}  // NOLINT(google-explicit-constructor)
  explicit Coeff(Poly num);

  static Coeff param(Param p);
  static Coeff fn(int slot, Fn f);
  static Coeff var(int slot) { return fn(slot, Fn::id); }
  static Coeff ratio(long num, long den) { return Coeff(Scalar(num, den)); }

  const Poly& numerator() const { return num_; }
  const Monomial& denominator_monomial() const { return den_; }
  const std::vector<Atom>& atoms() const { return atoms_; }
  Poly denominator() const;

  bool is_zero() const { return num_.is_zero(); }
  bool is_constant() const;
  bool depends_on_slot(int slot) const;
  std::optional<Scalar> as_scalar() const;

  Coeff operator-() const;
  friend Coeff operator+(const Coeff& a, const Coeff& b);
  friend Coeff operator-(const Coeff& a, const Coeff& b);
  friend Coeff operator*(const Coeff& a, const Coeff& b);
  friend Coeff operator/(const Coeff& a, const Coeff& b);
  Coeff& operator+=(const Coeff& o) { return *this = *this + o; }
  Coeff& operator-=(const Coeff& o) { return *this = *this - o; }
  Coeff& operator*=(const Coeff& o) { return *this = *this * o; }
  Coeff inverse() const;
  Coeff pow(int k) const;
  Coeff derivative(int slot) const;

  bool operator==(const Coeff& o) const;

 private:
  void normalize();

  Poly num_;
  Monomial den_;
  std::vector<Atom> atoms_;
};

Coeff differentiate(const Coeff& a, int slot);
bool is_zero(const Coeff& a);

// Exact division of the numerator by every cos/cosh-free atom that divides
// it. Optional: the ring operations never call it.
Coeff compact(const Coeff& a);

// Names used when rendering the position generators.
struct VarNames {
  std::array<std::string, kPositionSlots> slot{"q", "u"};
};

std::string to_string(const Scalar& s);
std::string to_string(const Poly& p, const VarNames& names = {});
std::string to_string(const Coeff& c, const VarNames& names = {});
inline std::ostream& operator<<(std::ostream& os, const Coeff& c) { return os << to_string(c); }

}  // namespace hamext
