#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "qgraph/error.hpp"
#include "qgraph/fixtures.hpp"
#include "qgraph/spectrum.hpp"

using namespace qgraph;

namespace {

MarkedGraph interval(double l, Coupling a, Coupling b) {
  std::vector<EdgeSpec> e{{0, 1, l}};
  std::vector<VertexType> t{VertexType::Delta, VertexType::Delta};
  std::vector<Coupling> c{a, b};
  return build_graph(e, t, c);
}

Spectrum make(std::vector<std::pair<double, int>> values, double lambda_max) {
  Spectrum s;
  for (auto [l, m] : values) s.eigenvalues.push_back({l, m});
  s.lambda_max = lambda_max;
  return s;
}

// Roots of an entire characteristic function in t, lambda = t |t|.
std::vector<double> reference_roots(const std::function<double(double)>& f, double kappa_max,
                                    double lambda_max) {
  std::vector<double> out;
  for (double t : oracle::sign_change_roots([&](double t) { return f(t * std::abs(t)); },
                                            -kappa_max, std::sqrt(lambda_max), 40000)) {
    out.push_back(t * std::abs(t));
  }
  return out;
}

}  // namespace

TEST_SUITE("spectrum") {

TEST_CASE("Neumann and Dirichlet intervals") {
  const double pi = oracle::kPi;
  const Spectrum n = find_spectrum(interval(pi, 0.0, 0.0), 20.0);
  REQUIRE(n.eigenvalues.size() == 5);
  for (int k = 0; k < 5; ++k) {
    CHECK(n.eigenvalues[k].lambda == doctest::Approx(k * k).epsilon(1e-8));
    CHECK(n.eigenvalues[k].multiplicity == 1);
  }
  CHECK(std::abs(n.eigenvalues[0].lambda) < 1e-12);
  const Spectrum d = find_spectrum(interval(pi, Coupling::infinite(), Coupling::infinite()), 20.0);
  REQUIRE(d.eigenvalues.size() == 4);
  for (int k = 1; k <= 4; ++k) CHECK(d.eigenvalues[k - 1].lambda == doctest::Approx(k * k).epsilon(1e-8));
  CHECK_FALSE(n.suspected_missed_root);
  CHECK_FALSE(d.suspected_missed_root);
}

TEST_CASE("Robin interval with strongly attractive ends") {
  const MarkedGraph g = interval(1.0, -10.0, -10.0);
  const Spectrum s = find_spectrum(g, 60.0);
  REQUIRE(s.eigenvalues.size() >= 3);
  // Even and odd bound states: kappa = 10 tanh(kappa / 2) and 10 coth(kappa / 2),
  // solved by fixed-point iteration.
  double even = 10.0, odd = 10.0;
  for (int i = 0; i < 200; ++i) {
    even = 10.0 / std::tanh(even / 2.0);
    odd = 10.0 * std::tanh(odd / 2.0);
  }
  CHECK(s.eigenvalues[0].lambda == doctest::Approx(-even * even).epsilon(1e-9));
  CHECK(s.eigenvalues[1].lambda == doctest::Approx(-odd * odd).epsilon(1e-9));
  const auto want = reference_roots(
      [](double lambda) {
        return oracle::star_characteristic(lambda, {1.0}, {-10.0}, -10.0);
      },
      s.stats.kappa_max, 60.0);
  REQUIRE(want.size() == s.eigenvalues.size());
  for (std::size_t i = 0; i < want.size(); ++i) {
    CHECK(s.eigenvalues[i].lambda == doctest::Approx(want[i]).epsilon(1e-8));
  }
}

TEST_CASE("star agrees with its characteristic function") {
  const MarkedGraph g = default_fixture(Family::Star);
  const double lmax = 80.0;
  const Spectrum s = find_spectrum(g, lmax);
  std::vector<double> lengths;
  for (const Edge& e : g.edges()) lengths.push_back(e.length);
  const auto want = reference_roots(
      [&](double lambda) { return oracle::star_characteristic(lambda, lengths, {1, 1, 1}, 1.0); },
      s.stats.kappa_max, lmax);
  const auto got = s.expanded();
  REQUIRE(got.size() == want.size());
  for (std::size_t i = 0; i < got.size(); ++i) CHECK(std::abs(got[i] - want[i]) < 1e-8);
}

TEST_CASE("C4 sign-alternating pair") {
  const MarkedGraph a = default_fixture(Family::Cycle);
  const MarkedGraph b = a.with_couplings({-2.0, 2.0, -2.0, 2.0});
  const Spectrum sa = find_spectrum(a, 60.0), sb = find_spectrum(b, 60.0);
  const auto x = sa.expanded(), y = sb.expanded();
  REQUIRE(x.size() == y.size());
  for (std::size_t i = 0; i < x.size(); ++i) CHECK(std::abs(x[i] - y[i]) < 1e-8);
  CHECK(compare_spectra(sa, sb, 1e-7).verdict == Verdict::Isospectral);
}

TEST_CASE("counting function and bisection statistics") {
  for (Family f : kAllFamilies) {
    const MarkedGraph g = default_fixture(f);
    const double lmax = 100.0;
    const Spectrum s = find_spectrum(g, lmax);
    CAPTURE(to_string(f));
    std::size_t positive = 0;
    for (double x : s.expanded()) positive += x >= 0.0;
    const double bound = static_cast<double>(g.num_vertices() + g.num_edges());
    CHECK(std::abs(static_cast<double>(positive) - weyl_estimate(g, lmax)) <= bound);
    CHECK_FALSE(s.suspected_missed_root);
    CHECK(s.stats.max_bisection_iterations <= 60);
    CHECK(s.stats.max_final_bracket <= 1e-10);
    for (std::size_t i = 1; i < s.eigenvalues.size(); ++i) {
      CHECK(s.eigenvalues[i].lambda > s.eigenvalues[i - 1].lambda);
    }
  }
}

TEST_CASE("degenerate eigenvalues on equilateral graphs") {
  const double pi = oracle::kPi;
  SUBCASE("cycle of four unit edges") {
    const MarkedGraph g = standard_graph(Family::Cycle, {{1, 1, 1, 1}, {0, 0, 0, 0}, {}});
    const Spectrum s = find_spectrum(g, 40.0);
    REQUIRE(s.eigenvalues.size() == 5);
    CHECK(std::abs(s.eigenvalues[0].lambda) < 1e-10);
    CHECK(s.eigenvalues[0].multiplicity == 1);
    for (int k = 1; k <= 4; ++k) {
      CHECK(s.eigenvalues[k].lambda == doctest::Approx(std::pow(k * pi / 2.0, 2)).epsilon(1e-8));
      CHECK(s.eigenvalues[k].multiplicity == 2);
    }
  }
  SUBCASE("star of three unit edges") {
    const MarkedGraph g = standard_graph(Family::Star, {{1, 1, 1}, {0, 0, 0, 0}, {}});
    const Spectrum s = find_spectrum(g, 50.0);
    // (k pi)^2 once, ((k + 1/2) pi)^2 twice
    std::vector<std::pair<double, int>> want{{0.0, 1}, {std::pow(0.5 * pi, 2), 2}, {pi * pi, 1},
                                             {std::pow(1.5 * pi, 2), 2}, {4 * pi * pi, 1}};
    REQUIRE(s.eigenvalues.size() == want.size());
    for (std::size_t i = 0; i < want.size(); ++i) {
      CHECK(s.eigenvalues[i].lambda == doctest::Approx(want[i].first).epsilon(1e-8));
      CHECK(s.eigenvalues[i].multiplicity == want[i].second);
    }
  }
}

TEST_CASE("negative spectrum is stable under a larger kappa_max") {
  for (Family f : {Family::Example34, Family::Cycle, Family::ChainA4}) {
    const MarkedGraph g = default_fixture(f);
    const Spectrum a = find_spectrum(g, 10.0);
    ScanConfig wide;
    wide.kappa_max = 2.0 * a.stats.kappa_max;
    const Spectrum b = find_spectrum(g, 10.0, wide);
    const auto x = a.expanded(), y = b.expanded();
    REQUIRE(x.size() == y.size());
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(x[i] == doctest::Approx(y[i]).epsilon(1e-9));
  }
}

TEST_CASE("results do not depend on the thread count") {
  const MarkedGraph g = default_fixture(Family::Example34);
  ScanConfig one, many;
  one.threads = 1;
  many.threads = 7;
  const Spectrum a = find_spectrum(g, 150.0, one), b = find_spectrum(g, 150.0, many);
  REQUIRE(a.eigenvalues.size() == b.eigenvalues.size());
  for (std::size_t i = 0; i < a.eigenvalues.size(); ++i) {
    CHECK(a.eigenvalues[i].lambda == b.eigenvalues[i].lambda);
    CHECK(a.eigenvalues[i].multiplicity == b.eigenvalues[i].multiplicity);
  }
  CHECK(a.stats.evaluations == b.stats.evaluations);
}

TEST_CASE("argument validation and budget") {
  const MarkedGraph g = default_fixture(Family::Cycle);
  auto code = [&](double lmax, const ScanConfig& cfg) {
    try {
      find_spectrum(g, lmax, cfg);
    } catch (const Error& e) {
      return e.code();
    }
    return Errc::ParseError;  // sentinel: no error
  };
  CHECK(code(-1.0, {}) == Errc::InvalidArgument);
  ScanConfig c;
  c.oversample = 2;
  CHECK(code(10.0, c) == Errc::InvalidArgument);
  c = {};
  c.mu_step = 1.0;
  CHECK(code(10.0, c) == Errc::InvalidArgument);
  c = {};
  c.refine_tol = 0.0;
  CHECK(code(10.0, c) == Errc::InvalidArgument);
  c = {};
  c.max_evaluations = 10;
  CHECK(code(10.0, c) == Errc::BudgetExceeded);
}

TEST_CASE("compare_spectra") {
  std::vector<std::pair<double, int>> base;
  for (int k = 1; k <= 12; ++k) base.push_back({k * 1.0, 1});
  const Spectrum a = make(base, 12.5);

  SUBCASE("identical lists") {
    const ComparisonReport r = compare_spectra(a, a, 1e-9);
    CHECK(r.verdict == Verdict::Isospectral);
    CHECK(r.compared == 12);
    CHECK(r.max_deviation == 0.0);
  }
  SUBCASE("too few eigenvalues") {
    const Spectrum s = make({{1.0, 1}, {2.0, 1}}, 2.5);
    CHECK(compare_spectra(s, s, 1e-9).verdict == Verdict::Inconclusive);
  }
  SUBCASE("value mismatch") {
    auto v = base;
    v[4].first += 0.3;
    const ComparisonReport r = compare_spectra(a, make(v, 12.5), 1e-6);
    CHECK(r.verdict == Verdict::NotIsospectral);
    REQUIRE(r.first_mismatch);
    CHECK(r.first_mismatch->kind == Mismatch::Kind::Value);
    CHECK(r.first_mismatch->index == 4);
  }
  SUBCASE("multiplicity mismatch") {
    auto v = base;
    v[2].second = 2;
    v.pop_back();
    const ComparisonReport r = compare_spectra(a, make(v, 12.5), 1e-6);
    REQUIRE(r.first_mismatch);
    CHECK(r.first_mismatch->kind == Mismatch::Kind::Multiplicity);
    CHECK(r.first_mismatch->multiplicity2 == 2);
  }
  SUBCASE("count mismatch") {
    auto v = base;
    v.pop_back();
    const ComparisonReport r = compare_spectra(a, make(v, 12.5), 1e-6);
    REQUIRE(r.first_mismatch);
    CHECK(r.first_mismatch->kind == Mismatch::Kind::Count);
    CHECK(r.first_mismatch->lambda1 == 12.0);
  }
  SUBCASE("an unpartnered eigenvalue at the cutoff is ignored") {
    auto v = base;
    v.pop_back();
    const ComparisonReport r = compare_spectra(make(base, 12.0), make(v, 12.0 + 1e-9), 1e-6);
    CHECK(r.verdict == Verdict::Isospectral);
  }
  SUBCASE("cutoff is the smaller lambda_max") {
    auto v = base;
    v.push_back({20.0, 1});
    const ComparisonReport r = compare_spectra(a, make(v, 30.0), 1e-9);
    CHECK(r.cutoff == 12.5);
    CHECK(r.verdict == Verdict::Isospectral);
  }
}

}  // TEST_SUITE
