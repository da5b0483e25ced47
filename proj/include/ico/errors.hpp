#pragma once

#include <stdexcept>
#include <string>

namespace ico {

// Base type for every validation or domain error thrown by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {
inline std::string with_magnitude(const std::string& msg, double v) {
  return msg + " (violation = " + std::to_string(v) + ")";
}
}  // namespace detail

class InvalidParameter : public Error {
 public:
  explicit InvalidParameter(const std::string& what) : Error(what) {}
};

class NotHermitian : public Error {
 public:
  explicit NotHermitian(double violation)
      : Error(detail::with_magnitude("matrix is not Hermitian", violation)),
        violation(violation) {}
  double violation;
};

class TraceNotOne : public Error {
 public:
  explicit TraceNotOne(double violation)
      : Error(detail::with_magnitude("trace differs from one", violation)),
        violation(violation) {}
  double violation;
};

class NotPSD : public Error {
 public:
  explicit NotPSD(double violation)
      : Error(detail::with_magnitude("matrix has a negative eigenvalue", violation)),
        violation(violation) {}
  double violation;
};

class NonDiagonalInput : public Error {
 public:
  explicit NonDiagonalInput(double violation)
      : Error(detail::with_magnitude("matrix is not diagonal with real entries", violation)),
        violation(violation) {}
  double violation;
};

class NegativeDiagonal : public Error {
 public:
  explicit NegativeDiagonal(double violation)
      : Error(detail::with_magnitude("diagonal entry is negative", violation)),
        violation(violation) {}
  double violation;
};

class NonDiagonalState : public Error {
 public:
  explicit NonDiagonalState(double violation)
      : Error(detail::with_magnitude("state is not diagonal in the energy basis", violation)),
        violation(violation) {}
  double violation;
};

// Populations too small for a meaningful effective inverse temperature.
class DegeneratePopulation : public Error {
 public:
  explicit DegeneratePopulation(double population)
      : Error(detail::with_magnitude("population leaves the effective temperature unbounded",
                                     population)),
        population(population) {}
  double population;
};

class ZeroProbabilityPostselection : public Error {
 public:
  explicit ZeroProbabilityPostselection(double prob)
      : Error(detail::with_magnitude("postselection outcome has (near-)zero probability", prob)),
        prob(prob) {}
  double prob;
};

class DegenerateDenominator : public Error {
 public:
  explicit DegenerateDenominator(double denominator)
      : Error(detail::with_magnitude("effective-temperature denominator is degenerate",
                                     denominator)),
        denominator(denominator) {}
  double denominator;
};

class NoFeasiblePoint : public Error {
 public:
  NoFeasiblePoint() : Error("every candidate point is probability-excluded") {}
};

}  // namespace ico
