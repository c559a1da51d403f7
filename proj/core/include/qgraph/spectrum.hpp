#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "qgraph/graph.hpp"

namespace qgraph {

enum class SpectrumMethod { EdgeSecular, FiniteDifference };

std::string_view to_string(SpectrumMethod m) noexcept;

struct Eigenvalue {
  double lambda = 0.0;
  int multiplicity = 1;
};

/// Scan and refinement settings. Zero for mu_step / kappa_max / threads selects
/// the automatic value.
struct ScanConfig {
  double mu_step = 0.0;      // default pi / (2 L_total oversample); must be <= pi / (2 L_total)
  int oversample = 8;        // >= 4
  double refine_tol = 1e-10;  // bracket width in mu (or kappa)
  double merge_tol = 1e-7;    // roots closer than this in mu are one eigenvalue
  double kappa_max = 0.0;     // negative-spectrum bound; default from default_kappa_max()
  double rank_tol = 1e-6;
  std::size_t max_evaluations = 20'000'000;
  unsigned threads = 0;
  bool exp_scaling = true;
};

struct ScanStats {
  std::size_t evaluations = 0;
  std::size_t brackets = 0;
  std::size_t tangential_candidates = 0;  // local minima of |det| without sign change
  int max_bisection_iterations = 0;
  double max_final_bracket = 0.0;
  double mu_step = 0.0;
  double kappa_max = 0.0;
};

struct Spectrum {
  std::vector<Eigenvalue> eigenvalues;  // strictly increasing
  double lambda_max = 0.0;
  SpectrumMethod method = SpectrumMethod::EdgeSecular;
  ScanConfig params;
  ScanStats stats;
  /// Set when the Weyl counting check fails; the spectrum is still returned.
  bool suspected_missed_root = false;
  std::string warning;

  /// Eigenvalues repeated according to multiplicity.
  std::vector<double> expanded() const;
  std::size_t count() const;
};

/// L_total sqrt(Lambda) / pi, the leading term of the counting function.
double weyl_estimate(const MarkedGraph& g, double lambda);

/// 1 + 2 max_k max(|alpha_k|, gamma_k / |alpha_k| at non-zero delta' couplings).
double default_kappa_max(const MarkedGraph& g);

/// All eigenvalues in [-kappa_max^2, lambda_max] with multiplicities, located by
/// scanning the edge secular determinant in mu (and kappa for lambda < 0).
/// Errors: InvalidArgument, BudgetExceeded.
Spectrum find_spectrum(const MarkedGraph& g, double lambda_max, const ScanConfig& cfg = {});

enum class Verdict { Isospectral, NotIsospectral, Inconclusive };
std::string_view to_string(Verdict v) noexcept;

/// Fewer agreeing eigenvalues than this never yield an Isospectral verdict.
inline constexpr std::size_t kMinComparable = 10;

struct Mismatch {
  enum class Kind { Value, Multiplicity, Count };
  Kind kind = Kind::Value;
  std::size_t index = 0;  // position in the expanded (with multiplicity) lists
  std::optional<double> lambda1;
  std::optional<double> lambda2;
  int multiplicity1 = 0;
  int multiplicity2 = 0;
};

std::string_view to_string(Mismatch::Kind k) noexcept;

struct ComparisonReport {
  bool isospectral = false;  // no mismatch up to the cutoff
  Verdict verdict = Verdict::Inconclusive;
  double cutoff = 0.0;
  double tolerance = 0.0;
  std::size_t count1 = 0;
  std::size_t count2 = 0;
  std::size_t compared = 0;
  double max_deviation = 0.0;
  std::optional<Mismatch> first_mismatch;
};

/// Compares two spectra up to min(lambda_max) with absolute tolerance `tol`.
/// Eigenvalues within tol of the cutoff that have no partner are not counted
/// as mismatches.
ComparisonReport compare_spectra(const Spectrum& s1, const Spectrum& s2, double tol);

}  // namespace qgraph
