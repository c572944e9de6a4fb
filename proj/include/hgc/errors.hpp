#pragma once

#include <stdexcept>
#include <string>

namespace hgc {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input data (bad CSV row, bad GeoJSON, bad raster header).
class ParseError : public Error {
 public:
  using Error::Error;
};

// Filesystem-level failures (cannot open, cannot write).
class IoError : public Error {
 public:
  using Error::Error;
};

// Structurally valid input that violates a domain precondition
// (self-intersecting contour, duplicate sample locations, bad bounds).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// No plan exists within the given budget and density bounds.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

// Model fitting failures (rank-deficient basis, degenerate variance,
// factorization failure after jitter escalation).
class EstimationError : public Error {
 public:
  using Error::Error;
};

class TimeoutError : public Error {
 public:
  using Error::Error;
};

}  // namespace hgc
