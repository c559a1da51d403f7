#include "qgraph/spectral_point.hpp"

#include <cmath>

namespace qgraph {

SpectralPoint SpectralPoint::at(cdouble lambda) {
  if (lambda.imag() == 0.0) return at(lambda.real());
  cdouble mu = std::sqrt(lambda);
  if (mu.imag() < 0.0) mu = -mu;
  return SpectralPoint(lambda, mu);
}

SpectralPoint SpectralPoint::at(double lambda) {
  // Normalise -0.0 so the real branch never flips sign.
  const cdouble l(lambda, 0.0);
  if (lambda >= 0.0) return SpectralPoint(l, cdouble(std::sqrt(lambda), 0.0));
  return SpectralPoint(l, cdouble(0.0, std::sqrt(-lambda)));
}

SpectralPoint SpectralPoint::from_tau(double tau) {
  return SpectralPoint(cdouble(-tau * tau, 0.0), cdouble(0.0, tau));
}

double SpectralPoint::mu_or_kappa() const noexcept { return std::abs(mu_); }

}  // namespace qgraph
