#pragma once

#include <cstddef>
#include <vector>

#include "qgraph/graph.hpp"
#include "qgraph/spectrum.hpp"

namespace qgraph {

/// Discretisation: each edge of length l gets ceil(mesh_per_unit * l) intervals
/// (at least 4). Lumped-mass linear elements; vertex conditions enter through
/// the quadratic form, so the scheme converges at O(h^2).
struct FdOptions {
  int mesh_per_unit = 200;    // >= 16
  std::size_t count = 30;     // number of lowest eigenvalues returned
  std::size_t max_unknowns = 20'000;
};

/// The `count` lowest eigenvalues of the discretised operator, ascending,
/// repeated by multiplicity. Errors: MeshTooCoarse, InvalidArgument.
std::vector<double> fd_eigenvalues(const MarkedGraph& g, const FdOptions& opts);

/// Same eigenvalues grouped into a Spectrum (method FiniteDifference). Values
/// closer than 1e-3 h^2 max(1, |lambda|)^2 are reported as one eigenvalue with
/// multiplicity. lambda_max of the result is the largest returned eigenvalue.
Spectrum fd_spectrum(const MarkedGraph& g, const FdOptions& opts);

/// Largest mesh width used for `g` under `opts`.
double fd_mesh_width(const MarkedGraph& g, const FdOptions& opts);

}  // namespace qgraph
