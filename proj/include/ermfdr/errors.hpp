#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ermfdr {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Requested generator is not strictly convex / not differentiable (total variation).
class NotStrictlyConvex : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

// A density-ratio vector does not integrate to one against the reference weights.
class NotAProbability : public Error {
 public:
  using Error::Error;
};

// f(0) = +inf while the density ratio vanishes on an atom of positive mass.
class InfiniteDivergence : public Error {
 public:
  using Error::Error;
};

class NotAbsolutelyContinuous : public Error {
 public:
  using Error::Error;
};

// A conjugate-domain argument fell on or outside the open interval dom f*.
class OutOfDomain : public Error {
 public:
  OutOfDomain(std::size_t atom_index, const std::string& what)
      : Error(what), atom(atom_index) {}
  std::size_t atom;
};

class PositivityViolated : public Error {
 public:
  PositivityViolated(std::size_t atom_index, const std::string& what)
      : Error(what), atom(atom_index) {}
  std::size_t atom;
};

// No normalization constant exists for this regularization factor.
class Infeasible : public Error {
 public:
  Infeasible(double lambda_value, const std::string& what)
      : Error(what), lambda(lambda_value) {}
  double lambda;
};

class EmptyFeasibleSet : public Error {
 public:
  using Error::Error;
};

// The supplied beta is inconsistent with lambda on this space.
class StaleBeta : public Error {
 public:
  using Error::Error;
};

class NotApplicable : public Error {
 public:
  using Error::Error;
};

class TransformInfeasible : public Error {
 public:
  using Error::Error;
};

}  // namespace ermfdr
