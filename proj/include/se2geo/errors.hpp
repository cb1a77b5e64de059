#pragma once

#include <stdexcept>
#include <string>

namespace se2geo {

/// Integration produced a NaN or infinity; usually dt is too large for the energy.
class NonFiniteState : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// p1 = p2 = 0, so the pendulum angle is undefined.
class ZeroEnergy : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

class ZeroGradient : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// An inducer was requested at a pixel outside the regular set.
class IrregularPoint : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file (image, curve CSV).
class ParseError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace se2geo
