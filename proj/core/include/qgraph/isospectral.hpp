#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qgraph/graph.hpp"
#include "qgraph/spectrum.hpp"

namespace qgraph {

/// sum over delta vertices of (-alpha/gamma)^m plus sum over delta' vertices with
/// alpha != 0 of (gamma/alpha)^m. Errors: InfiniteCoupling, InvalidArgument (m < 1).
double trace_sum(const MarkedGraph& g, int m);

struct TraceRow {
  int m = 0;
  double lhs_sum = 0.0;
  double rhs_sum = 0.0;
  double residual = 0.0;  // lhs_sum - rhs_sum
};

struct TraceReport {
  std::vector<TraceRow> rows;  // m = 1..M
};

/// Power sums of both graphs for m = 1..max_m. Errors: InfiniteCoupling, InvalidArgument.
TraceReport trace_report(const MarkedGraph& g1, const MarkedGraph& g2, int max_m);

struct SigmaMultiset {
  std::vector<double> values;  // in vertex order
  std::size_t deltaprime_zero_count = 0;
  std::size_t total_zero_count = 0;

  std::vector<double> sorted() const;
};

/// sigma = -alpha/gamma at delta vertices, gamma/alpha at delta' vertices with
/// alpha != 0, and 0 at delta' vertices with alpha = 0. Errors: InfiniteCoupling.
SigmaMultiset sigma_multiset(const MarkedGraph& g);

struct CheckReport {
  bool passes = false;
  std::vector<double> sigma1;  // sorted
  std::vector<double> sigma2;  // sorted
  std::size_t deltaprime_zeros1 = 0, deltaprime_zeros2 = 0;
  std::size_t total_zeros1 = 0, total_zeros2 = 0;
  /// Empty when passes; otherwise describes the first violated condition.
  std::string violation;
  std::optional<std::size_t> first_differing_index;  // into the sorted sigma lists
  TraceReport newton;                               // m = 1..N
};

/// Necessary condition for isospectrality: equal sigma multisets (sorted,
/// compared with tol * max(1, max |sigma|)) and equal zero counts.
/// Errors: SizeMismatch, InfiniteCoupling.
CheckReport necessary_check(const MarkedGraph& g1, const MarkedGraph& g2, double tol = 1e-10);

/// True iff sum beta1^m == sum beta2^m for m = 1..max_m, each compared relative
/// to the sum of |beta|^m. Errors: SizeMismatch, InvalidArgument (max_m < size).
bool power_sums_agree(std::span<const double> beta1, std::span<const double> beta2, int max_m,
                      double tol = 1e-9);

inline constexpr std::size_t kMaxSearchVertices = 8;

struct SearchHit {
  std::vector<Coupling> couplings;
  ComparisonReport report;
};

struct SearchResult {
  std::vector<SearchHit> isospectral;   // lexicographic in the coupling vector
  std::vector<SearchHit> inconclusive;  // too few eigenvalues below lambda_max to decide
  std::size_t permutations = 0;         // distinct permutations of the sigma multiset
  std::size_t pruned = 0;               // rejected by the delta' zero count
  std::size_t evaluated = 0;            // spectra computed
};

/// Every distinct rearrangement of the sigma multiset is turned back into a
/// coupling vector, and its spectrum compared with that of g. The identity is
/// excluded. Errors: SearchSpaceTooLarge (N > 8), InfiniteCoupling.
SearchResult search_isospectral(const MarkedGraph& g, double lambda_max, double tol = 1e-7,
                                const ScanConfig& cfg = {});

/// Compares g against the same graph with every coupling infinite.
/// Errors: MixedTypes, InvalidArgument (all couplings zero), InfiniteCoupling.
ComparisonReport decoupled_isospectrality_check(const MarkedGraph& g, double lambda_max,
                                                double tol = 1e-7, const ScanConfig& cfg = {});

}  // namespace qgraph
