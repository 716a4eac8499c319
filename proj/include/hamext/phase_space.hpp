#pragma once

#include <memory>
#include <string>
#include <vector>

#include "hamext/expr.hpp"

namespace hamext {

enum class GeneratorKind { linear, circular, hyperbolic };

struct PositionVar {
  std::string name;
  std::string momentum;
  GeneratorKind kind = GeneratorKind::linear;
  bool operator==(const PositionVar&) const = default;
};

// Ordered canonical coordinates. Position i occupies coefficient slot i; an
// extension pair (u, p_u), when present, is the last position.
class PhaseSpace {
 public:
  static std::shared_ptr<const PhaseSpace> base(PositionVar q);
  static std::shared_ptr<const PhaseSpace> extended(PositionVar q, PositionVar u);
  // The base space extended by (u, p_u) of the given kind.
  static std::shared_ptr<const PhaseSpace> extend(const PhaseSpace& base, PositionVar u);

  int dims() const { return static_cast<int>(positions_.size()); }
  const PositionVar& position(int i) const { return positions_.at(i); }
  const std::vector<PositionVar>& positions() const { return positions_; }
  bool has_extension() const { return has_extension_; }
  int extension_slot() const;
  VarNames names() const;

  // Throws std::invalid_argument if the coefficient uses a generator the
  // variable's kind does not allow, or a slot outside this space.
  void validate(const Coeff& c) const;

  bool operator==(const PhaseSpace& o) const {
    return positions_ == o.positions_ && has_extension_ == o.has_extension_;
  }

 private:
  std::vector<PositionVar> positions_;
  bool has_extension_ = false;
};

using SpacePtr = std::shared_ptr<const PhaseSpace>;

}  // namespace hamext
