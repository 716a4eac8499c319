#include "hamext/ppoly.hpp"

#include <algorithm>

#include <fmt/format.h>

namespace hamext {

bool MomentumOrder::operator()(const MomentumIndex& a, const MomentumIndex& b) const {
  int da = 0, db = 0;
  for (int i = 0; i < kPositionSlots; ++i) {
    da += a[i];
    db += b[i];
  }
  if (da != db) return da > db;
  for (int i = 0; i < kPositionSlots; ++i) {
    if (a[i] != b[i]) return a[i] > b[i];
  }
  return false;
}

void require_same_space(const PPoly& a, const PPoly& b, const char* what) {
  if (a.space_ptr() != b.space_ptr() && !(a.space() == b.space())) {
    throw PhaseSpaceMismatch(std::string(what) + ": operands live on different phase spaces");
  }
}

PPoly::PPoly(SpacePtr space) : space_(std::move(space)) {
  if (!space_) throw std::invalid_argument("PPoly: null phase space");
}

PPoly PPoly::constant(SpacePtr space, const Coeff& c) {
  PPoly p(std::move(space));
  p.add_term(MomentumIndex{}, c);
  return p;
}

PPoly PPoly::momentum(SpacePtr space, int slot, int power) {
  if (slot < 0 || slot >= space->dims()) throw std::out_of_range("PPoly::momentum: bad slot");
  PPoly p(std::move(space));
  MomentumIndex idx{};
  idx[slot] = static_cast<std::int16_t>(power);
  p.add_term(idx, Coeff(1));
  return p;
}

void PPoly::add_term(const MomentumIndex& idx, const Coeff& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(idx, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

int PPoly::degree() const {
  int d = 0;
  for (const auto& [idx, c] : terms_) {
    int s = 0;
    for (auto x : idx) s += x;
    d = std::max(d, s);
  }
  return d;
}

int PPoly::degree_in(int slot) const {
  int d = 0;
  for (const auto& [idx, c] : terms_) d = std::max<int>(d, idx[slot]);
  return d;
}

Coeff PPoly::coeff(const MomentumIndex& idx) const {
  auto it = terms_.find(idx);
  return it == terms_.end() ? Coeff() : it->second;
}

bool PPoly::depends_on_slot(int slot) const {
  for (const auto& [idx, c] : terms_) {
    if (idx[slot] != 0 || c.depends_on_slot(slot)) return true;
  }
  return false;
}

PPoly PPoly::operator-() const {
  PPoly r = *this;
  for (auto& [idx, c] : r.terms_) c = -c;
  return r;
}

PPoly& PPoly::operator+=(const PPoly& o) {
  require_same_space(*this, o, "PPoly addition");
  for (const auto& [idx, c] : o.terms_) add_term(idx, c);
  return *this;
}

PPoly operator+(const PPoly& a, const PPoly& b) {
  PPoly r = a;
  r += b;
  return r;
}

PPoly operator-(const PPoly& a, const PPoly& b) {
  PPoly r = a;
  r += -b;
  return r;
}

PPoly operator*(const PPoly& a, const PPoly& b) {
  require_same_space(a, b, "PPoly product");
  PPoly r(a.space_);
  for (const auto& [ia, ca] : a.terms_) {
    for (const auto& [ib, cb] : b.terms_) {
      MomentumIndex idx{};
      for (int i = 0; i < kPositionSlots; ++i) idx[i] = static_cast<std::int16_t>(ia[i] + ib[i]);
      r.add_term(idx, ca * cb);
    }
  }
  return r;
}

PPoly PPoly::scaled(const Coeff& c) const {
  PPoly r(space_);
  if (c.is_zero()) return r;
  for (const auto& [idx, x] : terms_) r.add_term(idx, x * c);
  return r;
}

PPoly PPoly::times_momentum(int slot, int power) const {
  PPoly r(space_);
  for (const auto& [idx, c] : terms_) {
    MomentumIndex i2 = idx;
    i2[slot] = static_cast<std::int16_t>(i2[slot] + power);
    r.terms_.emplace(i2, c);
  }
  return r;
}

PPoly PPoly::pow(int k) const {
  if (k < 0) throw std::invalid_argument("PPoly::pow: negative exponent");
  PPoly r = constant(space_, Coeff(1));
  for (int i = 0; i < k; ++i) r = r * *this;
  return r;
}

PPoly PPoly::d_position(int slot) const {
  PPoly r(space_);
  for (const auto& [idx, c] : terms_) r.add_term(idx, c.derivative(slot));
  return r;
}

PPoly PPoly::d_momentum(int slot) const {
  PPoly r(space_);
  for (const auto& [idx, c] : terms_) {
    if (idx[slot] == 0) continue;
    MomentumIndex i2 = idx;
    --i2[slot];
    r.terms_.emplace(i2, c * Coeff(static_cast<long>(idx[slot])));
  }
  return r;
}

PPoly PPoly::lift(SpacePtr target) const {
  if (target->dims() < space_->dims()) throw PhaseSpaceMismatch("lift: target space is smaller");
  for (int i = 0; i < space_->dims(); ++i) {
    if (!(target->position(i) == space_->position(i))) {
      throw PhaseSpaceMismatch("lift: base variables do not match");
    }
  }
  PPoly r(std::move(target));
  r.terms_ = terms_;
  return r;
}

PPoly PPoly::map_coefficients(const std::function<Coeff(const Coeff&)>& f) const {
  PPoly r(space_);
  for (const auto& [idx, c] : terms_) r.add_term(idx, f(c));
  return r;
}

bool PPoly::operator==(const PPoly& o) const {
  return space() == o.space() && terms_.size() == o.terms_.size() &&
         std::equal(terms_.begin(), terms_.end(), o.terms_.begin(),
                    [](const auto& x, const auto& y) { return x.first == y.first && x.second == y.second; });
}

PPoly poisson_bracket(const PPoly& f, const PPoly& g) {
  require_same_space(f, g, "poisson_bracket");
  PPoly r(f.space_ptr());
  for (int i = 0; i < f.space().dims(); ++i) {
    const PPoly fq = f.d_position(i);
    const PPoly gp = g.d_momentum(i);
    if (!fq.is_zero() && !gp.is_zero()) r += fq * gp;
    const PPoly fp = f.d_momentum(i);
    const PPoly gq = g.d_position(i);
    if (!fp.is_zero() && !gq.is_zero()) r += -(fp * gq);
  }
  return r;
}

PPoly apply_XL(const PPoly& l, const PPoly& f) {
  PPoly lifted = l;
  if (!(l.space() == f.space())) lifted = l.lift(f.space_ptr());
  if (f.space().has_extension() && lifted.depends_on_slot(f.space().extension_slot())) {
    throw std::invalid_argument("apply_XL: L must not depend on the extension pair");
  }
  return poisson_bracket(f, lifted);
}

bool is_zero(const PPoly& p) { return p.is_zero(); }

std::string to_string(const PPoly& p) {
  if (p.is_zero()) return "0";
  const VarNames names = p.space().names();
  std::string out;
  for (const auto& [idx, c] : p.terms()) {
    std::string mono;
    for (int i = 0; i < p.space().dims(); ++i) {
      if (idx[i] == 0) continue;
      if (!mono.empty()) mono += '*';
      mono += p.space().position(i).momentum;
      if (idx[i] != 1) mono += fmt::format("^{}", idx[i]);
    }
    const std::string cs = to_string(c, names);
    if (!out.empty()) out += " + ";
    if (mono.empty()) {
      out += "(" + cs + ")";
    } else if (cs == "1") {
      out += mono;
    } else {
      out += "(" + cs + ")*" + mono;
    }
  }
  return out;
}

}  // namespace hamext
