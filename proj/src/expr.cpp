#include "hamext/expr.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>

#include <fmt/format.h>

namespace hamext {

std::optional<Param> param_from_name(std::string_view name) {
  for (int i = 0; i < kParamCount; ++i) {
    if (kParamNames[i] == name) return static_cast<Param>(i);
  }
  return std::nullopt;
}

// ---------------------------------------------------------------- Monomial

bool Monomial::is_one() const {
  return std::all_of(e.begin(), e.end(), [](std::int16_t x) { return x == 0; });
}

int Monomial::total_degree() const {
  int d = 0;
  for (auto x : e) d += x;
  return d;
}

Monomial Monomial::operator*(const Monomial& o) const {
  Monomial r;
  for (int i = 0; i < kGenCount; ++i) r.e[i] = static_cast<std::int16_t>(e[i] + o.e[i]);
  return r;
}

std::size_t MonomialHash::operator()(const Monomial& m) const noexcept {
  std::size_t h = 1469598103934665603ULL;
  for (auto x : m.e) {
    h ^= static_cast<std::uint16_t>(x);
    h *= 1099511628211ULL;
  }
  return h;
}

bool graded_before(const Monomial& a, const Monomial& b) {
  const int da = a.total_degree();
  const int db = b.total_degree();
  if (da != db) return da > db;
  for (int i = 0; i < kGenCount; ++i) {
    if (a.e[i] != b.e[i]) return a.e[i] > b.e[i];
  }
  return false;
}

namespace {

bool has_pythagorean_excess(const Monomial& m) {
  for (int s = 0; s < kPositionSlots; ++s) {
    if (m.e[gen_index(s, Fn::cos)] >= 2 || m.e[gen_index(s, Fn::cosh)] >= 2) return true;
  }
  return false;
}

bool touches_cos(const Monomial& m) {
  for (int s = 0; s < kPositionSlots; ++s) {
    if (m.e[gen_index(s, Fn::cos)] != 0 || m.e[gen_index(s, Fn::cosh)] != 0) return true;
  }
  return false;
}

// Generators allowed in the monomial part of a denominator.
bool is_den_gen(int g) {
  if (is_param_gen(g)) return true;
  const Fn f = gen_fn(g);
  return f == Fn::sin || f == Fn::sinh;
}

using TermMap = std::unordered_map<Monomial, Scalar, MonomialHash>;

void accumulate(TermMap& acc, const Monomial& m, const Scalar& c) {
  if (c == 0) return;
  if (has_pythagorean_excess(m)) {
    for (int s = 0; s < kPositionSlots; ++s) {
      const int ci = gen_index(s, Fn::cos);
      const int chi = gen_index(s, Fn::cosh);
      if (m.e[ci] >= 2) {
        // cos^2 = 1 - sin^2
        Monomial rest = m;
        rest.e[ci] = static_cast<std::int16_t>(rest.e[ci] - 2);
        accumulate(acc, rest, c);
        rest.e[gen_index(s, Fn::sin)] += 2;
        accumulate(acc, rest, -c);
        return;
      }
      if (m.e[chi] >= 2) {
        // cosh^2 = 1 + sinh^2
        Monomial rest = m;
        rest.e[chi] = static_cast<std::int16_t>(rest.e[chi] - 2);
        accumulate(acc, rest, c);
        rest.e[gen_index(s, Fn::sinh)] += 2;
        accumulate(acc, rest, c);
        return;
      }
    }
  }
  auto [it, inserted] = acc.try_emplace(m, c);
  if (!inserted) it->second += c;
}

}  // namespace

// ------------------------------------------------------------- PolyBuilder

// gmpxx does not reduce fractions built from two integers; GMP arithmetic
// expects reduced operands.
void PolyBuilder::add(const Monomial& m, const Scalar& c) {
  Scalar r = c;
  r.canonicalize();
  accumulate(acc_, m, r);
}

void PolyBuilder::add(const Poly& p, const Scalar& c) {
  Scalar r = c;
  r.canonicalize();
  if (r == 0) return;
  for (const auto& t : p.terms()) accumulate(acc_, t.mono, t.coef * r);
}

Poly PolyBuilder::build() {
  Poly p;
  p.terms_.reserve(acc_.size());
  for (auto& [m, c] : acc_) {
    if (c != 0) p.terms_.push_back({m, std::move(c)});
  }
  acc_.clear();
  std::sort(p.terms_.begin(), p.terms_.end(),
            [](const Term& a, const Term& b) { return graded_before(a.mono, b.mono); });
  return p;
}

Poly PolyBuilder::adopt_sorted(std::vector<Term> terms) {
  Poly p;
  p.terms_ = std::move(terms);
  return p;
}

// -------------------------------------------------------------------- Poly

Poly Poly::constant(const Scalar& c) { return monomial(Monomial{}, c); }

Poly Poly::monomial(const Monomial& m, const Scalar& c) {
  PolyBuilder b;
  b.add(m, c);
  return b.build();
}

Poly Poly::generator(int gen) {
  Monomial m;
  m.e[gen] = 1;
  return monomial(m);
}

bool Poly::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_[0].mono.is_one());
}

bool Poly::depends_on_slot(int slot) const {
  for (const auto& t : terms_) {
    for (int f = 0; f < kFnCount; ++f) {
      if (t.mono.e[slot * kFnCount + f] != 0) return true;
    }
  }
  return false;
}

bool Poly::uses_generator(int gen) const {
  return std::any_of(terms_.begin(), terms_.end(),
                     [gen](const Term& t) { return t.mono.e[gen] != 0; });
}

Poly Poly::operator-() const {
  Poly r = *this;
  for (auto& t : r.terms_) t.coef = -t.coef;
  return r;
}

namespace {

Poly merge_add(const Poly& a, const Poly& b, bool subtract) {
  const auto& ta = a.terms();
  const auto& tb = b.terms();
  std::vector<Term> out;
  out.reserve(ta.size() + tb.size());
  std::size_t i = 0, j = 0;
  while (i < ta.size() || j < tb.size()) {
    if (j == tb.size() || (i < ta.size() && graded_before(ta[i].mono, tb[j].mono))) {
      out.push_back(ta[i++]);
    } else if (i == ta.size() || graded_before(tb[j].mono, ta[i].mono)) {
      out.push_back({tb[j].mono, subtract ? Scalar(-tb[j].coef) : tb[j].coef});
      ++j;
    } else {
      Scalar c = subtract ? Scalar(ta[i].coef - tb[j].coef) : Scalar(ta[i].coef + tb[j].coef);
      if (c != 0) out.push_back({ta[i].mono, std::move(c)});
      ++i;
      ++j;
    }
  }
  return PolyBuilder::adopt_sorted(std::move(out));
}

}  // namespace

Poly operator+(const Poly& a, const Poly& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  return merge_add(a, b, false);
}

Poly operator-(const Poly& a, const Poly& b) {
  if (b.is_zero()) return a;
  if (a.is_zero()) return -b;
  return merge_add(a, b, true);
}

Poly operator*(const Poly& a, const Poly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  if (a.size() == 1) return b.times(a.terms()[0].mono, a.terms()[0].coef);
  if (b.size() == 1) return a.times(b.terms()[0].mono, b.terms()[0].coef);
  PolyBuilder builder;
  builder.reserve(a.size() * b.size());
  Scalar prod;
  for (const auto& x : a.terms()) {
    for (const auto& y : b.terms()) {
      mpq_mul(prod.get_mpq_t(), x.coef.get_mpq_t(), y.coef.get_mpq_t());
      builder.add(x.mono * y.mono, prod);
    }
  }
  return builder.build();
}

Poly Poly::scaled(const Scalar& c0) const {
  Scalar c = c0;
  c.canonicalize();
  if (c == 0) return {};
  Poly r = *this;
  for (auto& t : r.terms_) t.coef *= c;
  return r;
}

Poly Poly::times(const Monomial& m, const Scalar& c0) const {
  Scalar c = c0;
  c.canonicalize();
  if (c == 0 || is_zero()) return {};
  if (!touches_cos(m)) {
    // A uniform shift keeps the graded order.
    Poly r;
    r.terms_.reserve(terms_.size());
    for (const auto& t : terms_) r.terms_.push_back({t.mono * m, t.coef * c});
    return r;
  }
  PolyBuilder b;
  for (const auto& t : terms_) b.add(t.mono * m, t.coef * c);
  return b.build();
}

Poly Poly::pow(int k) const {
  if (k < 0) throw std::invalid_argument("Poly::pow: negative exponent");
  Poly result = constant(1);
  Poly base = *this;
  while (k > 0) {
    if (k & 1) result = result * base;
    k >>= 1;
    if (k > 0) base = base * base;
  }
  return result;
}

Poly Poly::derivative(int slot) const {
  PolyBuilder b;
  const int id = gen_index(slot, Fn::id);
  const int sn = gen_index(slot, Fn::sin);
  const int cs = gen_index(slot, Fn::cos);
  const int sh = gen_index(slot, Fn::sinh);
  const int ch = gen_index(slot, Fn::cosh);
  for (const auto& t : terms_) {
    const auto& e = t.mono.e;
    if (e[id] != 0) {
      Monomial m = t.mono;
      m.e[id] = static_cast<std::int16_t>(m.e[id] - 1);
      b.add(m, t.coef * e[id]);
    }
    if (e[sn] != 0) {
      Monomial m = t.mono;
      m.e[sn] = static_cast<std::int16_t>(m.e[sn] - 1);
      m.e[cs] = static_cast<std::int16_t>(m.e[cs] + 1);
      b.add(m, t.coef * e[sn]);
    }
    if (e[cs] != 0) {
      Monomial m = t.mono;
      m.e[cs] = static_cast<std::int16_t>(m.e[cs] - 1);
      m.e[sn] = static_cast<std::int16_t>(m.e[sn] + 1);
      b.add(m, -t.coef * e[cs]);
    }
    if (e[sh] != 0) {
      Monomial m = t.mono;
      m.e[sh] = static_cast<std::int16_t>(m.e[sh] - 1);
      m.e[ch] = static_cast<std::int16_t>(m.e[ch] + 1);
      b.add(m, t.coef * e[sh]);
    }
    if (e[ch] != 0) {
      Monomial m = t.mono;
      m.e[ch] = static_cast<std::int16_t>(m.e[ch] - 1);
      m.e[sh] = static_cast<std::int16_t>(m.e[sh] + 1);
      b.add(m, t.coef * e[ch]);
    }
  }
  return b.build();
}

bool Poly::operator==(const Poly& o) const {
  if (terms_.size() != o.terms_.size()) return false;
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (!(terms_[i].mono == o.terms_[i].mono) || terms_[i].coef != o.terms_[i].coef) return false;
  }
  return true;
}

int Poly::compare(const Poly& a, const Poly& b) {
  const std::size_t n = std::min(a.terms_.size(), b.terms_.size());
  for (std::size_t i = 0; i < n; ++i) {
    const auto& x = a.terms_[i];
    const auto& y = b.terms_[i];
    if (graded_before(x.mono, y.mono)) return -1;
    if (graded_before(y.mono, x.mono)) return 1;
    if (x.coef != y.coef) return x.coef < y.coef ? -1 : 1;
  }
  if (a.terms_.size() != b.terms_.size()) return a.terms_.size() < b.terms_.size() ? -1 : 1;
  return 0;
}

// ------------------------------------------------------------------- Coeff

namespace {

// p = scalar * content * primitive, with content the per-generator minimum
// exponent and primitive having leading coefficient 1.
struct Factored {
  Scalar scalar;
  Monomial content;
  Poly primitive;
};

Factored factor_content(const Poly& p) {
  Factored f;
  const auto& ts = p.terms();
  f.content = ts.front().mono;
  for (const auto& t : ts) {
    for (int g = 0; g < kGenCount; ++g) f.content.e[g] = std::min(f.content.e[g], t.mono.e[g]);
  }
  Monomial inv;
  for (int g = 0; g < kGenCount; ++g) inv.e[g] = static_cast<std::int16_t>(-f.content.e[g]);
  f.scalar = ts.front().coef;
  f.primitive = p.times(inv, Scalar(1) / f.scalar);
  return f;
}

std::vector<Atom> merge_atoms(const std::vector<Atom>& a, const std::vector<Atom>& b,
                              bool take_max) {
  std::vector<Atom> out;
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    int cmp = 0;
    if (i == a.size()) cmp = 1;
    else if (j == b.size()) cmp = -1;
    else cmp = Poly::compare(a[i].poly, b[j].poly);
    if (cmp < 0) out.push_back(a[i++]);
    else if (cmp > 0) out.push_back(b[j++]);
    else {
      Atom x = a[i];
      x.power = take_max ? std::max(a[i].power, b[j].power) : a[i].power + b[j].power;
      out.push_back(std::move(x));
      ++i;
      ++j;
    }
  }
  return out;
}

void insert_atom(std::vector<Atom>& atoms, Poly p, int power) {
  Atom a{std::move(p), power};
  atoms = merge_atoms(atoms, {a}, false);
}

Poly atoms_product(const std::vector<Atom>& atoms) {
  Poly r = Poly::constant(1);
  for (const auto& a : atoms) r = r * a.poly.pow(a.power);
  return r;
}

// Product of the atoms of `full` with powers exceeding those in `part`.
Poly atoms_quotient(const std::vector<Atom>& full, const std::vector<Atom>& part) {
  Poly r = Poly::constant(1);
  std::size_t j = 0;
  for (const auto& a : full) {
    while (j < part.size() && Poly::compare(part[j].poly, a.poly) < 0) ++j;
    int have = 0;
    if (j < part.size() && part[j].poly == a.poly) have = part[j].power;
    if (a.power > have) r = r * a.poly.pow(a.power - have);
  }
  return r;
}

Poly cos_atom(int slot, Fn f) { return Poly::generator(gen_index(slot, f)); }

}  // namespace

Coeff::Coeff(const Scalar& c) : num_(Poly::constant(c)) {}

Coeff::Coeff(Poly num) : num_(std::move(num)) { normalize(); }

Coeff Coeff::param(Param p) { return Coeff(Poly::generator(gen_index(p))); }

Coeff Coeff::fn(int slot, Fn f) {
  if (slot < 0 || slot >= kPositionSlots) throw std::out_of_range("Coeff::fn: bad position slot");
  return Coeff(Poly::generator(gen_index(slot, f)));
}

Poly Coeff::denominator() const { return Poly::monomial(den_) * atoms_product(atoms_); }

bool Coeff::is_constant() const {
  for (int s = 0; s < kPositionSlots; ++s) {
    if (depends_on_slot(s)) return false;
  }
  return true;
}

bool Coeff::depends_on_slot(int slot) const {
  if (num_.depends_on_slot(slot)) return true;
  for (int f = 0; f < kFnCount; ++f) {
    if (den_.e[slot * kFnCount + f] != 0) return true;
  }
  return std::any_of(atoms_.begin(), atoms_.end(),
                     [slot](const Atom& a) { return a.poly.depends_on_slot(slot); });
}

std::optional<Scalar> Coeff::as_scalar() const {
  if (!den_.is_one() || !atoms_.empty()) return std::nullopt;
  if (num_.is_zero()) return Scalar(0);
  if (num_.size() == 1 && num_.terms()[0].mono.is_one()) return num_.terms()[0].coef;
  return std::nullopt;
}

void Coeff::normalize() {
  if (num_.is_zero()) {
    den_ = Monomial{};
    atoms_.clear();
    return;
  }
  // Cancel common sin/sinh/parameter powers.
  Monomial shift;
  bool any = false;
  for (int g = 0; g < kGenCount; ++g) {
    if (den_.e[g] == 0 || !is_den_gen(g)) continue;
    int k = den_.e[g];
    for (const auto& t : num_.terms()) {
      k = std::min<int>(k, t.mono.e[g]);
      if (k <= 0) break;
    }
    if (k > 0) {
      shift.e[g] = static_cast<std::int16_t>(-k);
      den_.e[g] = static_cast<std::int16_t>(den_.e[g] - k);
      any = true;
    }
  }
  // cos/cosh atoms cancel against a numerator whose every term carries them.
  for (int s = 0; s < kPositionSlots; ++s) {
    for (Fn f : {Fn::cos, Fn::cosh}) {
      const int g = gen_index(s, f);
      const Poly atom = cos_atom(s, f);
      auto it = std::find_if(atoms_.begin(), atoms_.end(),
                             [&](const Atom& a) { return a.poly == atom; });
      if (it == atoms_.end()) continue;
      const bool all = std::all_of(num_.terms().begin(), num_.terms().end(),
                                   [&](const Term& t) { return t.mono.e[g] + shift.e[g] >= 1; });
      if (!all) continue;
      shift.e[g] = static_cast<std::int16_t>(shift.e[g] - 1);
      if (--it->power == 0) atoms_.erase(it);
      any = true;
    }
  }
  if (any) num_ = num_.times(shift);
}

Coeff Coeff::operator-() const {
  Coeff r = *this;
  r.num_ = -r.num_;
  return r;
}

Coeff operator+(const Coeff& a, const Coeff& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  Coeff r;
  if (a.den_ == b.den_ && a.atoms_ == b.atoms_) {
    r.num_ = a.num_ + b.num_;
    r.den_ = a.den_;
    r.atoms_ = a.atoms_;
    r.normalize();
    return r;
  }
  Monomial lcm;
  Monomial fa, fb;
  for (int g = 0; g < kGenCount; ++g) {
    lcm.e[g] = std::max(a.den_.e[g], b.den_.e[g]);
    fa.e[g] = static_cast<std::int16_t>(lcm.e[g] - a.den_.e[g]);
    fb.e[g] = static_cast<std::int16_t>(lcm.e[g] - b.den_.e[g]);
  }
  r.den_ = lcm;
  if (a.atoms_.empty() && b.atoms_.empty()) {
    r.num_ = a.num_.times(fa) + b.num_.times(fb);
  } else {
    r.atoms_ = merge_atoms(a.atoms_, b.atoms_, true);
    r.num_ = a.num_.times(fa) * atoms_quotient(r.atoms_, a.atoms_) +
             b.num_.times(fb) * atoms_quotient(r.atoms_, b.atoms_);
  }
  r.normalize();
  return r;
}

Coeff operator-(const Coeff& a, const Coeff& b) { return a + (-b); }

Coeff operator*(const Coeff& a, const Coeff& b) {
  if (a.is_zero() || b.is_zero()) return {};
  Coeff r;
  r.num_ = a.num_ * b.num_;
  r.den_ = a.den_ * b.den_;
  if (!a.atoms_.empty() || !b.atoms_.empty()) r.atoms_ = merge_atoms(a.atoms_, b.atoms_, false);
  r.normalize();
  return r;
}

Coeff Coeff::inverse() const {
  if (is_zero()) throw DivisionByZero("division by an identically zero coefficient");
  Coeff r;
  Poly num = Poly::monomial(den_);
  if (!atoms_.empty()) num = num * atoms_product(atoms_);
  const Factored f = factor_content(num_);
  Monomial lin_inv;
  for (int g = 0; g < kGenCount; ++g) {
    const int x = f.content.e[g];
    if (x == 0) continue;
    if (is_den_gen(g)) {
      r.den_.e[g] = static_cast<std::int16_t>(x);
    } else if (gen_fn(g) == Fn::id) {
      lin_inv.e[g] = static_cast<std::int16_t>(-x);
    } else {
      insert_atom(r.atoms_, cos_atom(gen_slot(g), gen_fn(g)), x);
    }
  }
  r.num_ = num.times(lin_inv, Scalar(1) / f.scalar);
  if (!f.primitive.is_constant()) insert_atom(r.atoms_, f.primitive, 1);
  r.normalize();
  return r;
}

Coeff operator/(const Coeff& a, const Coeff& b) {
  if (b.is_zero()) throw DivisionByZero("division by an identically zero coefficient");
  return a * b.inverse();
}

Coeff Coeff::pow(int k) const {
  if (k < 0) return inverse().pow(-k);
  Coeff result(1);
  Coeff base = *this;
  while (k > 0) {
    if (k & 1) result = result * base;
    k >>= 1;
    if (k > 0) base = base * base;
  }
  return result;
}

Coeff Coeff::derivative(int slot) const {
  if (slot < 0 || slot >= kPositionSlots) throw std::out_of_range("Coeff::derivative: bad slot");
  const Poly dn = num_.derivative(slot);
  const int sn = gen_index(slot, Fn::sin);
  const int sh = gen_index(slot, Fn::sinh);

  // Factors of the denominator that vary with the slot, each to power one.
  struct Factor {
    Poly poly;
    Poly dpoly;
    int power;
  };
  std::vector<Factor> factors;
  if (den_.e[sn] > 0) {
    factors.push_back({Poly::generator(sn), Poly::generator(gen_index(slot, Fn::cos)), den_.e[sn]});
  }
  if (den_.e[sh] > 0) {
    factors.push_back({Poly::generator(sh), Poly::generator(gen_index(slot, Fn::cosh)), den_.e[sh]});
  }
  for (const auto& a : atoms_) {
    if (a.poly.depends_on_slot(slot)) factors.push_back({a.poly, a.poly.derivative(slot), a.power});
  }

  Coeff r;
  r.den_ = den_;
  r.atoms_ = atoms_;
  if (factors.empty()) {
    r.num_ = dn;
    r.normalize();
    return r;
  }
  // d(N/(D0 * prod f_i^e_i)) = (N' R - N sum e_i f_i' R/f_i) / (D R), R = prod f_i.
  Poly rad = Poly::constant(1);
  for (const auto& f : factors) rad = rad * f.poly;
  PolyBuilder correction;
  for (std::size_t i = 0; i < factors.size(); ++i) {
    Poly others = factors[i].dpoly;
    for (std::size_t j = 0; j < factors.size(); ++j) {
      if (j != i) others = others * factors[j].poly;
    }
    correction.add(others, Scalar(factors[i].power));
  }
  r.num_ = dn * rad - num_ * correction.build();
  if (den_.e[sn] > 0) ++r.den_.e[sn];
  if (den_.e[sh] > 0) ++r.den_.e[sh];
  for (auto& a : r.atoms_) {
    if (a.poly.depends_on_slot(slot)) ++a.power;
  }
  r.normalize();
  return r;
}

bool Coeff::operator==(const Coeff& o) const {
  return num_ == o.num_ && den_ == o.den_ && atoms_ == o.atoms_;
}

Coeff differentiate(const Coeff& a, int slot) { return a.derivative(slot); }

bool is_zero(const Coeff& a) { return a.is_zero(); }

// ------------------------------------------------------------- compaction

namespace {

struct LexGreater {
  bool operator()(const Monomial& a, const Monomial& b) const {
    for (int i = 0; i < kGenCount; ++i) {
      if (a.e[i] != b.e[i]) return a.e[i] > b.e[i];
    }
    return false;
  }
};

bool divides(const Monomial& d, const Monomial& m) {
  for (int g = 0; g < kGenCount; ++g) {
    if (d.e[g] > m.e[g]) return false;
  }
  return true;
}

// Exact division treating cos/cosh as free variables; valid when the divisor
// is free of them. Both inputs must have non-negative exponents.
std::optional<Poly> exact_divide(const Poly& num, const Poly& den) {
  std::map<Monomial, Scalar, LexGreater> rem;
  for (const auto& t : num.terms()) rem.emplace(t.mono, t.coef);
  std::map<Monomial, Scalar, LexGreater> dmap;
  for (const auto& t : den.terms()) dmap.emplace(t.mono, t.coef);
  const auto& [lead_m, lead_c] = *dmap.begin();
  PolyBuilder quotient;
  while (!rem.empty()) {
    const auto [m, c] = *rem.begin();
    if (!divides(lead_m, m)) return std::nullopt;
    Monomial qm;
    for (int g = 0; g < kGenCount; ++g) qm.e[g] = static_cast<std::int16_t>(m.e[g] - lead_m.e[g]);
    const Scalar qc = c / lead_c;
    quotient.add(qm, qc);
    for (const auto& [dm, dc] : dmap) {
      const Monomial pm = qm * dm;
      auto [it, inserted] = rem.try_emplace(pm, -qc * dc);
      if (!inserted) {
        it->second -= qc * dc;
        if (it->second == 0) rem.erase(it);
      }
    }
  }
  return quotient.build();
}

}  // namespace

Coeff compact(const Coeff& a) {
  if (a.atoms().empty() || a.is_zero()) return a;
  Poly num = a.numerator();
  // Shift negative linear exponents out of the way.
  Monomial shift;
  for (const auto& t : num.terms()) {
    for (int s = 0; s < kPositionSlots; ++s) {
      const int g = gen_index(s, Fn::id);
      shift.e[g] = std::max<std::int16_t>(shift.e[g], static_cast<std::int16_t>(-t.mono.e[g]));
    }
  }
  num = num.times(shift);
  std::vector<Atom> kept;
  for (const auto& atom : a.atoms()) {
    bool cos_free = true;
    for (int s = 0; s < kPositionSlots; ++s) {
      if (atom.poly.uses_generator(gen_index(s, Fn::cos)) ||
          atom.poly.uses_generator(gen_index(s, Fn::cosh))) {
        cos_free = false;
      }
    }
    int power = atom.power;
    while (cos_free && power > 0) {
      auto q = exact_divide(num, atom.poly);
      if (!q) break;
      num = std::move(*q);
      --power;
    }
    if (power > 0) kept.push_back({atom.poly, power});
  }
  Monomial unshift;
  for (int g = 0; g < kGenCount; ++g) unshift.e[g] = static_cast<std::int16_t>(-shift.e[g]);
  Coeff r(num.times(unshift));
  Coeff den(Poly::monomial(a.denominator_monomial()));
  for (const auto& k : kept) den = den * Coeff(k.poly).pow(k.power);
  return r / den;
}

// -------------------------------------------------------------- rendering

std::string to_string(const Scalar& s) { return s.get_str(); }

namespace {

std::string gen_name(int g, const VarNames& names) {
  if (is_param_gen(g)) return std::string(kParamNames[g - kPositionSlots * kFnCount]);
  const std::string& v = names.slot[gen_slot(g)];
  switch (gen_fn(g)) {
    case Fn::id: return v;
    case Fn::sin: return "sin(" + v + ")";
    case Fn::cos: return "cos(" + v + ")";
    case Fn::sinh: return "sinh(" + v + ")";
    case Fn::cosh: return "cosh(" + v + ")";
  }
  return "?";
}

// Parameters are written before position generators.
std::string monomial_string(const Monomial& m, const VarNames& names) {
  std::string out;
  constexpr int kFirstParam = kPositionSlots * kFnCount;
  for (int i = 0; i < kGenCount; ++i) {
    const int g = (i + kFirstParam) % kGenCount;
    if (m.e[g] == 0) continue;
    if (!out.empty()) out += '*';
    out += gen_name(g, names);
    if (m.e[g] != 1) out += fmt::format("^{}", m.e[g]);
  }
  return out;
}

}  // namespace

std::string to_string(const Poly& p, const VarNames& names) {
  if (p.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& t : p.terms()) {
    const bool neg = t.coef < 0;
    const Scalar mag = abs(t.coef);
    if (first) {
      if (neg) out += '-';
    } else {
      out += neg ? " - " : " + ";
    }
    first = false;
    const std::string mono = monomial_string(t.mono, names);
    if (mono.empty()) {
      out += mag.get_str();
    } else if (mag == 1) {
      out += mono;
    } else {
      out += mag.get_str() + "*" + mono;
    }
  }
  return out;
}

std::string to_string(const Coeff& c, const VarNames& names) {
  if (c.denominator_monomial().is_one() && c.atoms().empty()) return to_string(c.numerator(), names);
  std::string den = monomial_string(c.denominator_monomial(), names);
  for (const auto& a : c.atoms()) {
    if (!den.empty()) den += '*';
    den += "(" + to_string(a.poly, names) + ")";
    if (a.power != 1) den += fmt::format("^{}", a.power);
  }
  return "(" + to_string(c.numerator(), names) + ")/(" + den + ")";
}

}  // namespace hamext
