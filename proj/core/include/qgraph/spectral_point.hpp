#pragma once

#include <complex>

namespace qgraph {

using cdouble = std::complex<double>;

/// A value of the spectral parameter lambda together with mu = sqrt(lambda)
/// on the branch Im mu >= 0. For real negative lambda, mu = i*kappa with
/// kappa = sqrt(-lambda) > 0.
class SpectralPoint {
 public:
  static SpectralPoint at(cdouble lambda);
  static SpectralPoint at(double lambda);
  /// lambda = -tau^2, i.e. mu = i*tau.
  static SpectralPoint from_tau(double tau);

  cdouble lambda() const noexcept { return lambda_; }
  cdouble mu() const noexcept { return mu_; }
  /// tau = -i mu; equals kappa (real, positive) for real negative lambda.
  cdouble tau() const noexcept { return cdouble(0.0, -1.0) * mu_; }

  bool is_real() const noexcept { return lambda_.imag() == 0.0; }
  double real_lambda() const noexcept { return lambda_.real(); }
  /// sqrt(|lambda|) for real lambda: mu when lambda >= 0, kappa when lambda < 0.
  double mu_or_kappa() const noexcept;

 private:
  SpectralPoint(cdouble lambda, cdouble mu) : lambda_(lambda), mu_(mu) {}
  cdouble lambda_;
  cdouble mu_;
};

}  // namespace qgraph
