#pragma once

#include <stdexcept>
#include <string>

namespace fredholm {

// Base of every error raised by the library. Callers that only need a
// message can catch this; the CLI maps the concrete types to exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad arguments or malformed input (JSON, CSV, ranges).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// The root iteration hit its cap without meeting the residual bound.
class NonConvergence : public Error {
 public:
  using Error::Error;
};

// Index requested for the zero polynomial.
class ZeroSymbol : public Error {
 public:
  using Error::Error;
};

// |f| <= vanish_tol at some sample: not Fredholm, or undecidable numerically.
class VanishingSymbol : public Error {
 public:
  VanishingSymbol(const std::string& what, double min_modulus, long samples)
      : Error(what), min_modulus_(min_modulus), samples_(samples) {}
  double min_modulus() const noexcept { return min_modulus_; }
  long samples() const noexcept { return samples_; }

 private:
  double min_modulus_;
  long samples_;
};

// Phase steps never settled below the unwrapping bound within the sample cap.
class Unresolved : public Error {
 public:
  using Error::Error;
};

class SizeExceeded : public Error {
 public:
  using Error::Error;
};

// Singular-value counts did not stabilize between N and 2N.
class Inconclusive : public Error {
 public:
  Inconclusive(const std::string& what, int count_n, int count_2n)
      : Error(what), count_n_(count_n), count_2n_(count_2n) {}
  int count_n() const noexcept { return count_n_; }
  int count_2n() const noexcept { return count_2n_; }

 private:
  int count_n_;
  int count_2n_;
};

// Even q, j = q/2: the Diophantine equation has no representative with |s| < q/2.
class CentralGap : public Error {
 public:
  using Error::Error;
};

}  // namespace fredholm
