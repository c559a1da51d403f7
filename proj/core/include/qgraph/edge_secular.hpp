#pragma once

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qgraph/graph.hpp"
#include "qgraph/spectral_point.hpp"

namespace qgraph {

/// Values and normal derivatives of the entire basis c(mu, x) = cos(mu x),
/// s(mu, x) = sin(mu x) / mu at one edge endpoint (normal derivative points
/// into the edge: +d/dx at x = 0, -d/dx at x = l).
template <typename T>
struct EndpointBasis {
  T c{};
  T s{};
  T dn_c{};
  T dn_s{};
};

template <typename T>
struct EdgeBasisValues {
  EndpointBasis<T> left;
  EndpointBasis<T> right;
  /// log of the factor every entry was multiplied by (exp(-kappa l) scaling).
  double log_scale = 0.0;
};

struct EdgeSecularOptions {
  /// For lambda < 0 multiply both columns of edge j by exp(-kappa l_j). When
  /// kappa l_j >= 1 the columns of edge j then hold an equivalent pair of
  /// decaying exponentials with the same determinant.
  bool exp_scaling = true;
  /// Largest kappa * l accepted before Errc::Overflow.
  double max_kappa_length = 1e8;
};

/// c, s and their x-derivatives at an interior point, unscaled.
template <typename T>
struct PointBasis {
  T c{}, s{}, dc{}, ds{};
};
PointBasis<double> basis_at(double lambda, double x);
PointBasis<cdouble> basis_at(const SpectralPoint& p, double x);

EdgeBasisValues<double> edge_basis(double lambda, double length,
                                   const EdgeSecularOptions& opts = {});
EdgeBasisValues<cdouble> edge_basis(const SpectralPoint& p, double length,
                                    const EdgeSecularOptions& opts = {});

/// Square 2n x 2n linear system for the coefficients (a_j, b_j) of
/// f_j = a_j c + b_j s on every edge. Columns 2j, 2j+1 belong to edge j.
/// Rows are grouped per vertex: (degree - 1) continuity (delta) or
/// derivative-equality (delta') rows, then one coupling row.
template <typename T>
struct BasicMatchingSystem {
  SpectralPoint at;
  Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic> matrix;
  std::vector<std::string> row_labels;
  double log_scale = 0.0;
};

using RealMatchingSystem = BasicMatchingSystem<double>;
using MatchingSystem = BasicMatchingSystem<cdouble>;

RealMatchingSystem matching_system(const MarkedGraph& g, double lambda,
                                   const EdgeSecularOptions& opts = {});
MatchingSystem matching_system(const MarkedGraph& g, const SpectralPoint& p,
                               const EdgeSecularOptions& opts = {});

/// det of the matching system (LU with partial pivoting). Entire in lambda;
/// vanishes exactly at eigenvalues, including those with couplings = infinity.
double secular_edge(const MarkedGraph& g, double lambda, const EdgeSecularOptions& opts = {});
cdouble secular_edge(const MarkedGraph& g, const SpectralPoint& p,
                     const EdgeSecularOptions& opts = {});

/// Number of singular values below rank_tol * sigma_max of the column-scaled
/// matching matrix. Errors: RankTolDegenerate when sigma_max == 0.
int nullspace_dimension(const MarkedGraph& g, double lambda, double rank_tol = 1e-6);
int nullspace_dimension(const MarkedGraph& g, const SpectralPoint& p, double rank_tol = 1e-6);

/// Smallest singular value relative to the largest, same normalisation as
/// nullspace_dimension. Used to refine roots that do not change sign.
double relative_sigma_min(const MarkedGraph& g, double lambda);

}  // namespace qgraph
