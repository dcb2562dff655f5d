#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace critlab {

// Base class for every error raised by the library.  The CLI maps subtrees of
// this hierarchy onto its exit codes, so new error types should derive from
// one of the categories below rather than from Error directly.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// --- invalid input / unsupported parameter regimes -----------------------

class InvalidInput : public Error {
public:
  using Error::Error;
};

// Parameter combination outside the supported regime (e.g. n <= p, where the
// decay exponents are undefined).
class UnsupportedRegime : public InvalidInput {
public:
  using InvalidInput::InvalidInput;
};

// Evaluation outside a function's stated domain (negative t, t > eps, ...).
class DomainError : public InvalidInput {
public:
  using InvalidInput::InvalidInput;
};

class MeshInvalid : public InvalidInput {
public:
  using InvalidInput::InvalidInput;
};

class LambdaOutOfRange : public InvalidInput {
public:
  using InvalidInput::InvalidInput;
};

class ZeroSamples : public InvalidInput {
public:
  using InvalidInput::InvalidInput;
};

class GridTooCoarse : public InvalidInput {
public:
  using InvalidInput::InvalidInput;
};

// --- numeric failures -----------------------------------------------------

class NumericError : public Error {
public:
  using Error::Error;
};

// Adaptive quadrature exhausted its subdivision budget.  Carries the best
// available estimate so callers can decide whether to accept it.
class NonConvergence : public NumericError {
public:
  NonConvergence(const std::string& msg, double value, double error_estimate)
      : NumericError(msg), value(value), error_estimate(error_estimate) {}
  double value;
  double error_estimate;
};

class NonFinite : public NumericError {
public:
  using NumericError::NumericError;
};

class DivergentMoment : public NumericError {
public:
  using NumericError::NumericError;
};

class DivergentMass : public NumericError {
public:
  using NumericError::NumericError;
};

class DivergentNorm : public NumericError {
public:
  using NumericError::NumericError;
};

// --- workflow-level refusals ---------------------------------------------

// Construction refused because the smallness criterion diverges: only the
// trivial solution exists, there is nothing to build.
class CriterionDiverges : public Error {
public:
  using Error::Error;
};

// Construction refused because the criterion could not be classified.
class CriterionInconclusive : public Error {
public:
  using Error::Error;
};

class SearchExhausted : public Error {
public:
  using Error::Error;
};

// Nonlinear solver ran out of iterations; carries the residual trace.
class NoConvergence : public NumericError {
public:
  NoConvergence(const std::string& msg, std::vector<double> trace)
      : NumericError(msg), trace(std::move(trace)) {}
  std::vector<double> trace;
};

class LineSearchStall : public NumericError {
public:
  using NumericError::NumericError;
};

}  // namespace critlab
