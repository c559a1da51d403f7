#include <doctest.h>

#include <algorithm>
#include <random>

#include "qgraph/error.hpp"
#include "qgraph/fixtures.hpp"
#include "qgraph/isospectral.hpp"

using namespace qgraph;

namespace {

MarkedGraph c4() { return default_fixture(Family::Cycle); }

bool contains(const std::vector<SearchHit>& hits, const std::vector<Coupling>& alpha) {
  return std::any_of(hits.begin(), hits.end(), [&](const SearchHit& h) { return h.couplings == alpha; });
}

}  // namespace

TEST_SUITE("isospectral") {

TEST_CASE("trace sums") {
  const TraceReport r = trace_report(c4(), c4().with_couplings({-2.0, 2.0, -2.0, 2.0}), 6);
  REQUIRE(r.rows.size() == 6);
  for (const TraceRow& row : r.rows) CHECK(row.residual == 0.0);
  CHECK(trace_sum(c4(), 1) == 0.0);
  CHECK(trace_sum(c4(), 2) == doctest::Approx(4.0));
  // sigma = -1, -2/3, 1, 1/4
  const MarkedGraph mixed = default_fixture(Family::Example34);
  CHECK(trace_sum(mixed, 1) == doctest::Approx(-5.0 / 12.0));
  CHECK(trace_sum(mixed, 2) == doctest::Approx(1.0 + 4.0 / 9.0 + 1.0 + 1.0 / 16.0));
  CHECK_THROWS_AS(trace_sum(mixed, 0), Error);
  const MarkedGraph inf = mixed.with_couplings({1.0, Coupling::infinite(), 3.0, 4.0});
  CHECK_THROWS_AS(trace_sum(inf, 1), Error);
}

TEST_CASE("sigma multiset") {
  const MarkedGraph mixed = default_fixture(Family::Example34);
  const SigmaMultiset s = sigma_multiset(mixed);
  REQUIRE(s.values.size() == 4);
  CHECK(s.values[0] == doctest::Approx(-1.0));
  CHECK(s.values[1] == doctest::Approx(-2.0 / 3.0));
  CHECK(s.values[2] == doctest::Approx(1.0));
  CHECK(s.values[3] == doctest::Approx(0.25));
  const SigmaMultiset z = sigma_multiset(mixed.with_couplings({0.0, 2.0, 0.0, 4.0}));
  CHECK(z.values[2] == 0.0);
  CHECK(z.deltaprime_zero_count == 1);
  CHECK(z.total_zero_count == 2);
  const std::vector<double> sorted = z.sorted();
  CHECK(std::is_sorted(sorted.begin(), sorted.end()));
}

TEST_CASE("necessary check") {
  const MarkedGraph star = default_fixture(Family::Star);
  SUBCASE("different sigma multisets") {
    const CheckReport r = necessary_check(star, star.with_couplings({1.0, 1.0, 1.0, 2.0}));
    CHECK_FALSE(r.passes);
    REQUIRE(r.first_differing_index);
    CHECK(*r.first_differing_index == 3);  // -1/3 vs -2/3 after sorting
    CHECK_FALSE(r.violation.empty());
  }
  SUBCASE("permuted sigma passes") {
    const CheckReport r = necessary_check(c4(), c4().with_couplings({-2.0, 2.0, -2.0, 2.0}));
    CHECK(r.passes);
    CHECK(r.violation.empty());
    CHECK(r.newton.rows.size() == 4);
  }
  SUBCASE("equal multisets but different delta' zero counts") {
    std::vector<EdgeSpec> e{{0, 1, 1.0}};
    std::vector<VertexType> t{VertexType::Delta, VertexType::DeltaPrime};
    std::vector<Coupling> a{0.0, 5.0}, b{-0.2, 0.0};
    const CheckReport r = necessary_check(build_graph(e, t, a), build_graph(e, t, b));
    CHECK(r.sigma1 == r.sigma2);
    CHECK_FALSE(r.passes);
    CHECK(r.deltaprime_zeros1 == 0);
    CHECK(r.deltaprime_zeros2 == 1);
  }
  SUBCASE("size mismatch") {
    try {
      necessary_check(star, default_fixture(Family::Interval));
      FAIL("no error");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::SizeMismatch);
    }
  }
}

TEST_CASE("power sums") {
  const std::vector<double> a{1, 2, 3}, b{3, 1, 2}, c{1, 2, 4};
  CHECK(power_sums_agree(a, b, 3));
  CHECK_FALSE(power_sums_agree(a, c, 3));
  CHECK_THROWS_AS(power_sums_agree(a, b, 2), Error);
  const std::vector<double> d{1, 2};
  CHECK_THROWS_AS(power_sums_agree(a, d, 3), Error);

  std::mt19937_64 rng(51);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  std::uniform_int_distribution<int> size(1, 8);
  for (int i = 0; i < 1000; ++i) {
    std::vector<double> x(static_cast<std::size_t>(size(rng)));
    for (double& v : x) v = u(rng);
    std::vector<double> y = x;
    std::shuffle(y.begin(), y.end(), rng);
    const int m = static_cast<int>(x.size());
    CHECK(power_sums_agree(x, y, m));
    std::vector<double> z = y;
    z[static_cast<std::size_t>(i) % z.size()] += 1e-6 * std::max(1.0, std::abs(z.front()));
    CHECK_FALSE(power_sums_agree(x, z, m));
    std::vector<double> w(x.size());
    for (double& v : w) v = u(rng);
    CHECK_FALSE(power_sums_agree(x, w, m));
  }
}

TEST_CASE("search finds the C4 sign-alternating partner") {
  const SearchResult r = search_isospectral(c4(), 60.0);
  CHECK(contains(r.isospectral, {-2.0, 2.0, -2.0, 2.0}));
  CHECK(r.evaluated > 0);
  for (const SearchHit& h : r.isospectral) {
    const MarkedGraph partner = c4().with_couplings(h.couplings);
    CHECK(necessary_check(c4(), partner).passes);
    for (const TraceRow& row : trace_report(c4(), partner, 6).rows) {
      CHECK(std::abs(row.residual) < 1e-12);
    }
    CHECK(h.report.compared >= kMinComparable);
  }
  // and back again
  const SearchResult back = search_isospectral(c4().with_couplings({-2.0, 2.0, -2.0, 2.0}), 60.0);
  CHECK(contains(back.isospectral, {2.0, -2.0, 2.0, -2.0}));
}

TEST_CASE("search finds the lasso partner") {
  const MarkedGraph lasso = default_fixture(Family::Lasso);
  const SearchResult r = search_isospectral(lasso, 800.0);
  CHECK(contains(r.isospectral, {2.0, 9.0, 2.0}));
  const MarkedGraph partner = lasso.with_couplings({2.0, 9.0, 2.0});
  CHECK(necessary_check(lasso, partner).passes);
  for (const TraceRow& row : trace_report(lasso, partner, 6).rows) CHECK(std::abs(row.residual) < 1e-12);
}

TEST_CASE("generic couplings have no partner") {
  const SearchResult star = search_isospectral(default_fixture(Family::Star), 80.0);
  CHECK(star.isospectral.empty());
  CHECK(star.inconclusive.empty());
  CHECK(star.evaluated == 3);

  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  const MarkedGraph chain = default_fixture(Family::ChainA4);
  for (int i = 0; i < 2; ++i) {
    const MarkedGraph g = chain.with_couplings({u(rng), u(rng), u(rng), u(rng)});
    CHECK(search_isospectral(g, 60.0).isospectral.empty());
  }
}

TEST_CASE("search limits") {
  std::vector<double> l(9, 1.0);
  std::vector<Coupling> a(9, 1.0);
  const MarkedGraph big = standard_graph(Family::Cycle, {l, a, {}});
  try {
    search_isospectral(big, 10.0);
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::SearchSpaceTooLarge);
  }
}

TEST_CASE("coupled and fully decoupled operators differ") {
  const MarkedGraph star = default_fixture(Family::Star);
  const ComparisonReport r = decoupled_isospectrality_check(star, 30.0);
  CHECK(r.verdict == Verdict::NotIsospectral);
  try {
    decoupled_isospectrality_check(default_fixture(Family::Example34), 30.0);
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::MixedTypes);
  }
  CHECK_THROWS_AS(decoupled_isospectrality_check(star.with_couplings({0.0, 0.0, 0.0, 0.0}), 30.0),
                  Error);
}

}  // TEST_SUITE
