#include "hamext/phase_space.hpp"

#include <stdexcept>

namespace hamext {

std::shared_ptr<const PhaseSpace> PhaseSpace::base(PositionVar q) {
  auto s = std::make_shared<PhaseSpace>();
  s->positions_.push_back(std::move(q));
  return s;
}

std::shared_ptr<const PhaseSpace> PhaseSpace::extended(PositionVar q, PositionVar u) {
  if (q.name == u.name || q.momentum == u.momentum) {
    throw std::invalid_argument("extension pair must be distinct from the base variables");
  }
  auto s = std::make_shared<PhaseSpace>();
  s->positions_.push_back(std::move(q));
  s->positions_.push_back(std::move(u));
  s->has_extension_ = true;
  return s;
}

std::shared_ptr<const PhaseSpace> PhaseSpace::extend(const PhaseSpace& base, PositionVar u) {
  if (base.has_extension_ || base.dims() != 1) {
    throw std::invalid_argument("only a one-dimensional base space can be extended");
  }
  return extended(base.positions_[0], std::move(u));
}

int PhaseSpace::extension_slot() const {
  if (!has_extension_) throw std::logic_error("phase space has no extension pair");
  return dims() - 1;
}

VarNames PhaseSpace::names() const {
  VarNames n;
  for (int i = 0; i < dims(); ++i) n.slot[i] = positions_[i].name;
  return n;
}

void PhaseSpace::validate(const Coeff& c) const {
  auto check_poly = [&](const Poly& p) {
    for (const auto& t : p.terms()) {
      for (int g = 0; g < kPositionSlots * kFnCount; ++g) {
        if (t.mono.e[g] == 0) continue;
        const int slot = gen_slot(g);
        if (slot >= dims()) throw std::invalid_argument("coefficient uses a position outside the phase space");
        const Fn f = gen_fn(g);
        const auto kind = positions_[slot].kind;
        const bool circular = f == Fn::sin || f == Fn::cos;
        const bool hyperbolic = f == Fn::sinh || f == Fn::cosh;
        if ((circular && kind != GeneratorKind::circular) ||
            (hyperbolic && kind != GeneratorKind::hyperbolic)) {
          throw std::invalid_argument("generator not allowed for variable " + positions_[slot].name);
        }
      }
    }
  };
  check_poly(c.numerator());
  check_poly(c.denominator());
}

}  // namespace hamext
