#pragma once

#include <stdexcept>
#include <string>

namespace noisescape {

/// Too few observations for the requested statistic.
class InsufficientData : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Regression design matrix is singular (e.g. all time indices equal).
class DegenerateDesign : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Function evaluated outside its domain, e.g. an average of nothing.
class UndefinedInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A diagnostic whose normalisation vanishes (constant input).
class UndefinedDiagnostic : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Timestamp outside the configured analysis window.
class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Fatal problem with an input file: unreadable stream, duplicate ids, bad config.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace noisescape
