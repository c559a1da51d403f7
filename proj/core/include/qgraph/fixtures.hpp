#pragma once

#include <array>
#include <string_view>
#include <vector>

#include "qgraph/graph.hpp"

namespace qgraph {

enum class Family { Interval, Star, ChainA4, Cycle, Lasso, Example34 };

inline constexpr std::array<Family, 6> kAllFamilies = {
    Family::Interval, Family::Star, Family::ChainA4, Family::Cycle, Family::Lasso, Family::Example34};

std::string_view to_string(Family f) noexcept;
/// Throws Errc::UnknownFamily.
Family family_from_string(std::string_view name);

/// Empty `couplings` means all zero; empty `types` means the family default
/// (all delta, except Example34 which is delta, delta, delta', delta').
struct FixtureParams {
  std::vector<double> lengths;
  std::vector<Coupling> couplings;
  std::vector<VertexType> types;
};

/// Vertex layouts:
///   Interval   0 -- 1                              (1 length)
///   Star       pendants 0..N-1, centre N           (N >= 2 lengths)
///   ChainA4    0 - 1 - 2 - 3                       (3 lengths)
///   Cycle      0 - 1 - ... - (n-1) - 0             (n >= 2 lengths)
///   Lasso      0 - 1, then 1 = 2 double edge       (3 lengths; degrees 1, 3, 2)
///   Example34  0 - 1, 1 = 2 double edge, 2 - 3     (4 lengths; degrees 1, 3, 3, 1)
/// Errors: ParamMismatch, plus anything build_graph raises.
MarkedGraph standard_graph(Family family, const FixtureParams& params);

/// Lengths that look rationally independent: 1, sqrt 2, sqrt 3, sqrt 5 to 10 decimals.
inline constexpr std::array<double, 4> kDefaultLengths = {1.0, 1.4142135624, 1.7320508076,
                                                          2.2360679775};

/// Catalogue defaults used by the CLI `examples` subcommand.
MarkedGraph default_fixture(Family family);

}  // namespace qgraph
