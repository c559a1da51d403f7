#include "qgraph/spectrum.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <future>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

#include "qgraph/edge_secular.hpp"
#include "qgraph/error.hpp"

namespace qgraph {

std::string_view to_string(SpectrumMethod m) noexcept {
  return m == SpectrumMethod::EdgeSecular ? "edge" : "fd";
}

std::string_view to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::Isospectral: return "ISOSPECTRAL";
    case Verdict::NotIsospectral: return "NOT ISOSPECTRAL";
    case Verdict::Inconclusive: return "INCONCLUSIVE";
  }
  return "?";
}

std::string_view to_string(Mismatch::Kind k) noexcept {
  switch (k) {
    case Mismatch::Kind::Value: return "value";
    case Mismatch::Kind::Multiplicity: return "multiplicity";
    case Mismatch::Kind::Count: return "count";
  }
  return "?";
}

std::vector<double> Spectrum::expanded() const {
  std::vector<double> out;
  for (const Eigenvalue& e : eigenvalues) out.insert(out.end(), e.multiplicity, e.lambda);
  return out;
}

std::size_t Spectrum::count() const {
  std::size_t n = 0;
  for (const Eigenvalue& e : eigenvalues) n += static_cast<std::size_t>(e.multiplicity);
  return n;
}

double weyl_estimate(const MarkedGraph& g, double lambda) {
  return lambda > 0.0 ? g.total_length() * std::sqrt(lambda) / std::numbers::pi : 0.0;
}

double default_kappa_max(const MarkedGraph& g) {
  double m = 0.0;
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    const Coupling& c = g.coupling(v);
    if (c.is_infinite()) continue;
    const double a = std::abs(c.value());
    m = std::max(m, a);
    if (g.type(v) == VertexType::DeltaPrime && a > 0.0) m = std::max(m, g.degree(v) / a);
  }
  return 1.0 + 2.0 * m;
}

namespace {

enum class Branch { Positive, Negative };

struct Root {
  double s = 0.0;
  int multiplicity_hint = 0;  // 0: decide by rank test
};

constexpr int kMaxBisection = 60;
constexpr int kMaxSubdivisionDepth = 5;
constexpr int kSubdivisionSamples = 33;

int sign(double x) { return (x > 0.0) - (x < 0.0); }

template <typename Task>
auto run_parallel(std::size_t count, unsigned threads, Task task)
    -> std::vector<decltype(task(std::size_t{}))> {
  using R = decltype(task(std::size_t{}));
  std::vector<R> out(count);
  if (count == 0) return out;
  const std::size_t workers = std::min<std::size_t>(std::max(1u, threads), count);
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) out[i] = task(i);
    return out;
  }
  // Contiguous index blocks; output slots are fixed, so the result does not
  // depend on scheduling.
  std::vector<std::future<void>> jobs;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t lo = count * w / workers, hi = count * (w + 1) / workers;
    jobs.push_back(std::async(std::launch::async, [&, lo, hi] {
      for (std::size_t i = lo; i < hi; ++i) out[i] = task(i);
    }));
  }
  for (auto& j : jobs) j.get();
  return out;
}

class Scanner {
 public:
  Scanner(const MarkedGraph& g, const ScanConfig& cfg, ScanStats& stats, unsigned threads)
      : g_(g), cfg_(cfg), stats_(stats), threads_(threads) {}

  static double lambda_of(double s, Branch b) { return b == Branch::Positive ? s * s : -s * s; }

  double det(double s, Branch b) {
    if (evaluations_.fetch_add(1, std::memory_order_relaxed) >= cfg_.max_evaluations) {
      throw Error(Errc::BudgetExceeded, "more than " + std::to_string(cfg_.max_evaluations) +
                                            " secular evaluations");
    }
    EdgeSecularOptions opts;
    opts.exp_scaling = cfg_.exp_scaling;
    return secular_edge(g_, lambda_of(s, b), opts);
  }

  /// Roots of the secular determinant with s in (0, s_end]; s = 0 is handled by the caller.
  std::vector<Root> scan(Branch b, double s_end, double step, bool zero_is_root) {
    const auto cells = static_cast<std::size_t>(std::ceil(s_end / step));
    const double h = s_end / static_cast<double>(cells);
    const std::size_t points = cells + 2;  // one cell past s_end
    auto grid = [h](std::size_t i) { return h * static_cast<double>(i); };

    std::vector<double> d = run_parallel(points, threads_, [&](std::size_t i) {
      // Near a zero eigenvalue det ~ lambda^m; probe just right of 0 for the sign.
      if (i == 0 && zero_is_root) return det(h * 1e-4, b);
      return det(grid(i), b);
    });

    std::vector<std::pair<double, double>> brackets;
    std::vector<Root> roots;
    std::vector<std::pair<double, double>> tangential;
    for (std::size_t i = 0; i + 1 < points; ++i) {
      if (i > 0 && d[i] == 0.0) {
        roots.push_back({grid(i), 0});
      } else if (sign(d[i]) * sign(d[i + 1]) < 0) {
        brackets.emplace_back(grid(i), grid(i + 1));
      }
    }
    for (std::size_t i = 1; i + 1 < points; ++i) {
      const bool local_min =
          std::abs(d[i]) < std::abs(d[i - 1]) && std::abs(d[i]) <= std::abs(d[i + 1]);
      const bool no_change = sign(d[i - 1]) == sign(d[i]) && sign(d[i]) == sign(d[i + 1]) &&
                             d[i] != 0.0;
      if (local_min && no_change) tangential.emplace_back(grid(i - 1), grid(i + 1));
    }
    stats_.brackets += brackets.size();
    stats_.tangential_candidates += tangential.size();

    auto bisected = run_parallel(brackets.size(), threads_, [&](std::size_t k) {
      return bisect(b, brackets[k].first, brackets[k].second);
    });
    for (const auto& r : bisected) roots.push_back(r);

    auto resolved = run_parallel(tangential.size(), threads_, [&](std::size_t k) {
      return resolve_cell(b, tangential[k].first, tangential[k].second, 0);
    });
    for (const auto& rs : resolved) roots.insert(roots.end(), rs.begin(), rs.end());
    return roots;
  }

  std::size_t evaluations() const { return evaluations_.load(); }

 private:
  Root bisect(Branch b, double lo, double hi) { return bisect(b, lo, hi, det(lo, b)); }

  Root bisect(Branch b, double lo, double hi, double dlo) {
    int iter = 0;
    while (hi - lo > cfg_.refine_tol && iter < kMaxBisection) {
      const double mid = 0.5 * (lo + hi);
      const double dm = det(mid, b);
      ++iter;
      if (dm == 0.0) {
        lo = hi = mid;
        break;
      }
      if (sign(dm) == sign(dlo)) {
        lo = mid;
        dlo = dm;
      } else {
        hi = mid;
      }
    }
    record_bisection(iter, hi - lo);
    return {0.5 * (lo + hi), 0};
  }

  void record_bisection(int iter, double width) {
    std::lock_guard lock(stats_mutex_);
    stats_.max_bisection_iterations = std::max(stats_.max_bisection_iterations, iter);
    stats_.max_final_bracket = std::max(stats_.max_final_bracket, width);
  }

  double sigma(double s, Branch b) {
    evaluations_.fetch_add(1, std::memory_order_relaxed);
    return relative_sigma_min(g_, lambda_of(s, b));
  }

  // Golden-section search for the minimum of sigma_min/sigma_max on [lo, hi].
  double minimise_sigma(Branch b, double lo, double hi) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - inv_phi * (hi - lo), x2 = lo + inv_phi * (hi - lo);
    double f1 = sigma(x1, b), f2 = sigma(x2, b);
    for (int it = 0; it < 200 && hi - lo > 0.1 * cfg_.refine_tol; ++it) {
      if (f1 <= f2) {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - inv_phi * (hi - lo);
        f1 = sigma(x1, b);
      } else {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + inv_phi * (hi - lo);
        f2 = sigma(x2, b);
      }
    }
    return 0.5 * (lo + hi);
  }

  // A cell whose grid samples share one sign but where |det| dips: either an
  // even-multiplicity root, a close pair of simple roots, or a near miss.
  std::vector<Root> resolve_cell(Branch b, double lo, double hi, int depth) {
    const double s_star = minimise_sigma(b, lo, hi);
    const int nullity = nullspace_dimension(g_, lambda_of(s_star, b), cfg_.rank_tol);
    if (nullity == 0) return {};
    if (nullity >= 2) return {{s_star, nullity}};

    // Rank one without a sign change: look for the pair on a finer grid.
    std::vector<double> xs(kSubdivisionSamples), ds(kSubdivisionSamples);
    for (int i = 0; i < kSubdivisionSamples; ++i) {
      xs[i] = lo + (hi - lo) * i / (kSubdivisionSamples - 1);
      ds[i] = det(xs[i], b);
    }
    std::vector<Root> found;
    for (int i = 0; i + 1 < kSubdivisionSamples; ++i) {
      if (sign(ds[i]) * sign(ds[i + 1]) < 0) found.push_back(bisect(b, xs[i], xs[i + 1], ds[i]));
    }
    if (!found.empty()) return found;
    if (depth + 1 >= kMaxSubdivisionDepth) return {{s_star, 2}};
    const double w = (hi - lo) / 16.0;
    return resolve_cell(b, std::max(lo, s_star - w), std::min(hi, s_star + w), depth + 1);
  }

  const MarkedGraph& g_;
  const ScanConfig& cfg_;
  ScanStats& stats_;
  unsigned threads_;
  std::atomic<std::size_t> evaluations_{0};
  std::mutex stats_mutex_;
};

void validate(const MarkedGraph& g, double lambda_max, const ScanConfig& cfg) {
  if (!(lambda_max > 0.0)) throw Error(Errc::InvalidArgument, "lambda_max must be positive");
  if (cfg.oversample < 4) throw Error(Errc::InvalidArgument, "oversample must be >= 4");
  if (cfg.mu_step < 0.0 || cfg.mu_step > std::numbers::pi / (2.0 * g.total_length())) {
    throw Error(Errc::InvalidArgument, "mu_step must lie in (0, pi / (2 L_total)]");
  }
  if (!(cfg.refine_tol > 0.0) || !(cfg.merge_tol > 0.0) || !(cfg.rank_tol > 0.0)) {
    throw Error(Errc::InvalidArgument, "tolerances must be positive");
  }
  if (cfg.kappa_max < 0.0) throw Error(Errc::InvalidArgument, "kappa_max must be >= 0");
}

// Sorted by s; roots closer than merge_tol collapse into one eigenvalue.
std::vector<Eigenvalue> finalize(const MarkedGraph& g, std::vector<Root> roots, Branch b,
                                 const ScanConfig& cfg) {
  std::sort(roots.begin(), roots.end(), [](const Root& x, const Root& y) { return x.s < y.s; });
  std::vector<Eigenvalue> out;
  std::size_t i = 0;
  while (i < roots.size()) {
    std::size_t j = i + 1;
    int hint = roots[i].multiplicity_hint;
    while (j < roots.size() && roots[j].s - roots[j - 1].s <= cfg.merge_tol) {
      hint = std::max(hint, roots[j].multiplicity_hint);
      ++j;
    }
    const double s = roots[i + (j - i - 1) / 2].s;
    if (s > cfg.merge_tol) {
      const double lambda = Scanner::lambda_of(s, b);
      const int nullity = nullspace_dimension(g, lambda, cfg.rank_tol);
      const int members = static_cast<int>(j - i);
      out.push_back({lambda, std::max({1, nullity, hint, members})});
    }
    i = j;
  }
  return out;
}

}  // namespace

Spectrum find_spectrum(const MarkedGraph& g, double lambda_max, const ScanConfig& cfg) {
  validate(g, lambda_max, cfg);

  Spectrum spec;
  spec.lambda_max = lambda_max;
  spec.method = SpectrumMethod::EdgeSecular;
  spec.params = cfg;

  const double total = g.total_length();
  const double step =
      cfg.mu_step > 0.0 ? cfg.mu_step : std::numbers::pi / (2.0 * total * cfg.oversample);
  const double kappa_max = cfg.kappa_max > 0.0 ? cfg.kappa_max : default_kappa_max(g);
  const unsigned threads =
      cfg.threads > 0 ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  spec.params.mu_step = step;
  spec.params.kappa_max = kappa_max;
  spec.stats.mu_step = step;
  spec.stats.kappa_max = kappa_max;

  Scanner scanner(g, spec.params, spec.stats, threads);

  const int zero_mult = nullspace_dimension(g, 0.0, cfg.rank_tol);

  std::vector<Eigenvalue> negative = finalize(
      g, scanner.scan(Branch::Negative, kappa_max, step, zero_mult > 0), Branch::Negative, spec.params);
  std::vector<Eigenvalue> positive =
      finalize(g, scanner.scan(Branch::Positive, std::sqrt(lambda_max), step, zero_mult > 0),
               Branch::Positive, spec.params);

  for (auto it = negative.rbegin(); it != negative.rend(); ++it) spec.eigenvalues.push_back(*it);
  if (zero_mult > 0) spec.eigenvalues.push_back({0.0, zero_mult});
  for (const Eigenvalue& e : positive) {
    if (e.lambda <= lambda_max) spec.eigenvalues.push_back(e);
  }
  spec.stats.evaluations = scanner.evaluations();

  const double counted = static_cast<double>(spec.count());
  const double weyl = weyl_estimate(g, lambda_max);
  const double bound = static_cast<double>(g.num_vertices() + g.num_edges());
  if (std::abs(counted - weyl) > bound) {
    spec.suspected_missed_root = true;
    std::ostringstream os;
    os << "SuspectedMissedRoot: " << counted << " eigenvalues up to " << lambda_max
       << ", Weyl estimate " << weyl << " (allowed deviation " << bound << ")";
    spec.warning = os.str();
  }
  return spec;
}

ComparisonReport compare_spectra(const Spectrum& s1, const Spectrum& s2, double tol) {
  ComparisonReport rep;
  rep.cutoff = std::min(s1.lambda_max, s2.lambda_max);
  rep.tolerance = tol;

  auto below = [&](const Spectrum& s) {
    std::vector<double> v = s.expanded();
    v.erase(std::remove_if(v.begin(), v.end(), [&](double x) { return x > rep.cutoff; }), v.end());
    return v;
  };
  const std::vector<double> a = below(s1);
  const std::vector<double> b = below(s2);
  rep.count1 = a.size();
  rep.count2 = b.size();

  auto multiplicity_of = [](const Spectrum& s, double lambda) {
    for (const Eigenvalue& e : s.eigenvalues) {
      if (e.lambda == lambda) return e.multiplicity;
    }
    return 0;
  };

  const std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    const double dev = std::abs(a[i] - b[i]);
    if (dev > tol) {
      Mismatch m;
      m.index = i;
      m.lambda1 = a[i];
      m.lambda2 = b[i];
      m.multiplicity1 = multiplicity_of(s1, a[i]);
      m.multiplicity2 = multiplicity_of(s2, b[i]);
      const bool shifted = (i > 0 && (std::abs(a[i] - b[i - 1]) <= tol ||
                                      std::abs(b[i] - a[i - 1]) <= tol)) ||
                           (i + 1 < n && (std::abs(a[i] - b[i + 1]) <= tol ||
                                          std::abs(b[i] - a[i + 1]) <= tol));
      m.kind = shifted ? Mismatch::Kind::Multiplicity : Mismatch::Kind::Value;
      rep.first_mismatch = m;
      break;
    }
    rep.max_deviation = std::max(rep.max_deviation, dev);
    ++rep.compared;
  }

  if (!rep.first_mismatch && a.size() != b.size()) {
    const bool first_longer = a.size() > b.size();
    const double extra = first_longer ? a[n] : b[n];
    // An unpartnered eigenvalue right at the cutoff may have its twin just above it.
    if (extra <= rep.cutoff - tol) {
      Mismatch m;
      m.kind = Mismatch::Kind::Count;
      m.index = n;
      if (first_longer) {
        m.lambda1 = extra;
        m.multiplicity1 = multiplicity_of(s1, extra);
      } else {
        m.lambda2 = extra;
        m.multiplicity2 = multiplicity_of(s2, extra);
      }
      rep.first_mismatch = m;
    }
  }

  rep.isospectral = !rep.first_mismatch.has_value();
  if (!rep.isospectral) {
    rep.verdict = Verdict::NotIsospectral;
  } else if (rep.compared < kMinComparable) {
    rep.verdict = Verdict::Inconclusive;
  } else {
    rep.verdict = Verdict::Isospectral;
  }
  return rep;
}

}  // namespace qgraph
