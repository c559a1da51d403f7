#include "qgraph/isospectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qgraph/error.hpp"

namespace qgraph {

namespace {

void require_finite(const MarkedGraph& g) {
  if (!g.all_couplings_finite()) {
    throw Error(Errc::InfiniteCoupling, "trace and sigma invariants need finite couplings");
  }
}

double sigma_of(VertexType t, double alpha, int gamma) {
  if (t == VertexType::Delta) return -alpha / gamma;
  return alpha == 0.0 ? 0.0 : gamma / alpha;
}

double alpha_of(VertexType t, double sigma, int gamma) {
  if (t == VertexType::Delta) return -sigma * gamma;
  return sigma == 0.0 ? 0.0 : gamma / sigma;
}

}  // namespace

double trace_sum(const MarkedGraph& g, int m) {
  require_finite(g);
  if (m < 1) throw Error(Errc::InvalidArgument, "trace order m must be >= 1");
  double sum = 0.0;
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    const double alpha = g.coupling(v).value();
    if (g.type(v) == VertexType::DeltaPrime && alpha == 0.0) continue;
    sum += std::pow(sigma_of(g.type(v), alpha, g.degree(v)), m);
  }
  return sum;
}

TraceReport trace_report(const MarkedGraph& g1, const MarkedGraph& g2, int max_m) {
  if (max_m < 1) throw Error(Errc::InvalidArgument, "trace order m must be >= 1");
  TraceReport rep;
  for (int m = 1; m <= max_m; ++m) {
    const double a = trace_sum(g1, m), b = trace_sum(g2, m);
    rep.rows.push_back({m, a, b, a - b});
  }
  return rep;
}

std::vector<double> SigmaMultiset::sorted() const {
  std::vector<double> v = values;
  std::sort(v.begin(), v.end());
  return v;
}

SigmaMultiset sigma_multiset(const MarkedGraph& g) {
  require_finite(g);
  SigmaMultiset s;
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    const double alpha = g.coupling(v).value();
    s.values.push_back(sigma_of(g.type(v), alpha, g.degree(v)));
    if (alpha == 0.0) {
      ++s.total_zero_count;
      if (g.type(v) == VertexType::DeltaPrime) ++s.deltaprime_zero_count;
    }
  }
  return s;
}

CheckReport necessary_check(const MarkedGraph& g1, const MarkedGraph& g2, double tol) {
  if (g1.num_vertices() != g2.num_vertices()) {
    throw Error(Errc::SizeMismatch, "graphs have " + std::to_string(g1.num_vertices()) + " and " +
                                        std::to_string(g2.num_vertices()) + " vertices");
  }
  const SigmaMultiset s1 = sigma_multiset(g1), s2 = sigma_multiset(g2);
  CheckReport rep;
  rep.sigma1 = s1.sorted();
  rep.sigma2 = s2.sorted();
  rep.deltaprime_zeros1 = s1.deltaprime_zero_count;
  rep.deltaprime_zeros2 = s2.deltaprime_zero_count;
  rep.total_zeros1 = s1.total_zero_count;
  rep.total_zeros2 = s2.total_zero_count;
  rep.newton = trace_report(g1, g2, static_cast<int>(g1.num_vertices()));

  double scale = 1.0;
  for (double x : rep.sigma1) scale = std::max(scale, std::abs(x));
  for (double x : rep.sigma2) scale = std::max(scale, std::abs(x));

  for (std::size_t i = 0; i < rep.sigma1.size(); ++i) {
    if (std::abs(rep.sigma1[i] - rep.sigma2[i]) > tol * scale) {
      rep.first_differing_index = i;
      rep.violation = "sigma multisets differ at sorted position " + std::to_string(i) + ": " +
                      std::to_string(rep.sigma1[i]) + " vs " + std::to_string(rep.sigma2[i]);
      return rep;
    }
  }
  if (rep.deltaprime_zeros1 != rep.deltaprime_zeros2) {
    rep.violation = "numbers of zero delta' couplings differ: " +
                    std::to_string(rep.deltaprime_zeros1) + " vs " +
                    std::to_string(rep.deltaprime_zeros2);
    return rep;
  }
  if (rep.total_zeros1 != rep.total_zeros2) {
    rep.violation = "numbers of zero couplings differ: " + std::to_string(rep.total_zeros1) +
                    " vs " + std::to_string(rep.total_zeros2);
    return rep;
  }
  rep.passes = true;
  return rep;
}

bool power_sums_agree(std::span<const double> beta1, std::span<const double> beta2, int max_m,
                      double tol) {
  if (beta1.size() != beta2.size()) {
    throw Error(Errc::SizeMismatch, "multisets have different sizes");
  }
  if (max_m < static_cast<int>(beta1.size()) || max_m < 1) {
    throw Error(Errc::InvalidArgument, "max_m must be at least the multiset size");
  }
  for (int m = 1; m <= max_m; ++m) {
    double s1 = 0.0, s2 = 0.0, scale = 0.0;
    for (double b : beta1) {
      s1 += std::pow(b, m);
      scale += std::pow(std::abs(b), m);
    }
    for (double b : beta2) {
      s2 += std::pow(b, m);
      scale += std::pow(std::abs(b), m);
    }
    if (std::abs(s1 - s2) > tol * scale) return false;
  }
  return true;
}

SearchResult search_isospectral(const MarkedGraph& g, double lambda_max, double tol,
                                const ScanConfig& cfg) {
  const std::size_t n = g.num_vertices();
  if (n > kMaxSearchVertices) {
    throw Error(Errc::SearchSpaceTooLarge, std::to_string(n) + " vertices (at most " +
                                               std::to_string(kMaxSearchVertices) + ")");
  }
  const SigmaMultiset sigma = sigma_multiset(g);

  // Sources sorted by sigma; next_permutation on sigma alone yields each
  // distinct arrangement of the multiset once.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return sigma.values[a] < sigma.values[b]; });
  auto less = [&](std::size_t a, std::size_t b) { return sigma.values[a] < sigma.values[b]; };

  // Reuse an original coupling whenever it produced the same sigma at a vertex of
  // the same type and degree, so that round-off never disguises the identity.
  auto invert = [&](VertexId target, std::size_t source) {
    const double s = sigma.values[source];
    for (VertexId k = 0; k < n; ++k) {
      if (sigma.values[k] == s && g.type(k) == g.type(target) && g.degree(k) == g.degree(target)) {
        return g.coupling(k).value();
      }
    }
    return alpha_of(g.type(target), s, g.degree(target));
  };

  std::vector<std::vector<Coupling>> candidates;
  SearchResult result;
  do {
    ++result.permutations;
    // sigma = 0 at a delta' vertex is the structural case alpha = 0; a different
    // number of such vertices changes the zero count and cannot be isospectral.
    std::size_t dp_zeros = 0;
    for (VertexId v = 0; v < n; ++v) {
      if (g.type(v) == VertexType::DeltaPrime && sigma.values[order[v]] == 0.0) ++dp_zeros;
    }
    if (dp_zeros != sigma.deltaprime_zero_count) {
      ++result.pruned;
      continue;
    }
    std::vector<Coupling> alpha(n);
    bool identity = true;
    for (VertexId v = 0; v < n; ++v) {
      const double a = invert(v, order[v]);
      alpha[v] = a;
      identity = identity && a == g.coupling(v).value();
    }
    if (!identity) candidates.push_back(std::move(alpha));
  } while (std::next_permutation(order.begin(), order.end(), less));

  std::sort(candidates.begin(), candidates.end(), [](const auto& a, const auto& b) {
    return std::lexicographical_compare(
        a.begin(), a.end(), b.begin(), b.end(),
        [](const Coupling& x, const Coupling& y) { return x.value() < y.value(); });
  });
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  const Spectrum reference = find_spectrum(g, lambda_max, cfg);
  for (auto& alpha : candidates) {
    const MarkedGraph h = g.with_couplings(alpha);
    const Spectrum s = find_spectrum(h, lambda_max, cfg);
    ++result.evaluated;
    ComparisonReport rep = compare_spectra(reference, s, tol);
    if (rep.verdict == Verdict::Isospectral) {
      result.isospectral.push_back({std::move(alpha), std::move(rep)});
    } else if (rep.verdict == Verdict::Inconclusive) {
      result.inconclusive.push_back({std::move(alpha), std::move(rep)});
    }
  }
  return result;
}

ComparisonReport decoupled_isospectrality_check(const MarkedGraph& g, double lambda_max,
                                                double tol, const ScanConfig& cfg) {
  if (!g.homogeneous_type()) {
    throw Error(Errc::MixedTypes, "graph mixes delta and delta' vertices");
  }
  require_finite(g);
  const auto& c = g.couplings();
  if (std::all_of(c.begin(), c.end(), [](const Coupling& x) { return x.is_zero(); })) {
    throw Error(Errc::InvalidArgument, "all couplings are zero");
  }
  const MarkedGraph decoupled =
      g.with_couplings(std::vector<Coupling>(g.num_vertices(), Coupling::infinite()));
  return compare_spectra(find_spectrum(g, lambda_max, cfg), find_spectrum(decoupled, lambda_max, cfg),
                         tol);
}

}  // namespace qgraph
