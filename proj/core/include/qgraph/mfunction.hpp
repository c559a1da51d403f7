#pragma once

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "qgraph/graph.hpp"
#include "qgraph/spectral_point.hpp"

namespace qgraph {

/// Minimum distance, in mu, between the evaluation point and a pole of any
/// M-matrix entry.
inline constexpr double kPoleEpsilon = 1e-8;

/// Above this value of kappa*l the hyperbolic forms are replaced by their limits.
inline constexpr double kHyperbolicCutoff = 700.0;

/// Weyl-Titchmarsh matrix M(lambda) of the graph for the boundary triple in
/// which delta vertices carry the common value and delta' vertices the common
/// normal derivative. Assembled once per unordered vertex pair, so the matrix
/// is exactly symmetric.
struct MMatrix {
  SpectralPoint at;
  Eigen::MatrixXcd entries;
};

/// B = diag(alpha_1, ..., alpha_N). Construction rejects infinite couplings.
struct CouplingMatrix {
  Eigen::VectorXd diagonal;

  static CouplingMatrix from_graph(const MarkedGraph& g);
};

/// Distance from p.mu() to the nearest pole of any M-matrix entry.
double pole_distance(const MarkedGraph& g, const SpectralPoint& p);

/// Errors: PoleProximity (pole closer than pole_eps), InfiniteCoupling.
MMatrix m_matrix(const MarkedGraph& g, const SpectralPoint& p, double pole_eps = kPoleEpsilon);

/// det(B - M(lambda)); exactly real for real lambda. Errors as m_matrix.
cdouble secular_vertex(const MarkedGraph& g, const SpectralPoint& p,
                       double pole_eps = kPoleEpsilon);

/// Leading large-tau behaviour of det(B - M(-tau^2)):
///   prod_{delta} (alpha_i + gamma_i tau) * prod_{delta'} (alpha_i - gamma_i / tau).
double asymptotic_secular(const MarkedGraph& g, double tau);

/// Value the determinant ratio must take for an isospectral pair: the ratio of
/// non-zero delta' couplings times the ratio of degrees at zero delta' couplings.
/// Requires equal zero counts at delta' vertices (InvalidArgument otherwise).
double hadamard_limit(const MarkedGraph& g1, const MarkedGraph& g2);

struct RatioSample {
  double tau = 0.0;
  double ratio = 0.0;
};

/// Samples det(B1 - M)/det(B2 - M) at lambda = -tau^2. g1 and g2 must share
/// edges, lengths and vertex types (ParamMismatch otherwise).
/// Errors: DivisionNearZero when |det(B2 - M)| < 1e-300.
std::vector<RatioSample> hadamard_ratio(const MarkedGraph& g1, const MarkedGraph& g2,
                                        std::span<const double> tau_grid);

}  // namespace qgraph
