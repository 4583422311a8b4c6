#pragma once

#include <stdexcept>
#include <string>

namespace growthlab {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A construction or probe parameter lies outside its admissible domain.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// A sequence query outside 0..k_max.
class IndexError : public Error {
 public:
  using Error::Error;
};

/// Evaluation outside the range on which a weight is faithfully represented,
/// or an input that violates a structural requirement (e.g. log-convexity).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A parameter-choice rule could not land inside its admissible band.
class ConstructionError : public Error {
 public:
  ConstructionError(const std::string& what, int j, double band_lo, double band_hi)
      : Error(what), j_(j), band_lo_(band_lo), band_hi_(band_hi) {}

  int j() const { return j_; }
  double band_lo() const { return band_lo_; }
  double band_hi() const { return band_hi_; }

 private:
  int j_;
  double band_lo_;
  double band_hi_;
};

/// The improper integral defining the kappa transform diverges.
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, double piece_ratio)
      : Error(what), piece_ratio_(piece_ratio) {}

  /// Ratio of successive unit-length pieces of the integral in log variable;
  /// >= 1 means the integrand does not decay.
  double piece_ratio() const { return piece_ratio_; }

 private:
  double piece_ratio_;
};

/// Quadrature ran out of budget without converging or diverging.
class QuadratureError : public Error {
 public:
  using Error::Error;
};

}  // namespace growthlab
