#include "qgraph/fixtures.hpp"

#include <string>

#include "qgraph/error.hpp"

namespace qgraph {

std::string_view to_string(Family f) noexcept {
  switch (f) {
    case Family::Interval: return "interval";
    case Family::Star: return "star";
    case Family::ChainA4: return "chain_a4";
    case Family::Cycle: return "cycle";
    case Family::Lasso: return "lasso";
    case Family::Example34: return "example_3_4";
  }
  return "unknown";
}

Family family_from_string(std::string_view name) {
  for (Family f : kAllFamilies) {
    if (to_string(f) == name) return f;
  }
  throw Error(Errc::UnknownFamily, "no fixture family named '" + std::string(name) + "'");
}

namespace {

void require_lengths(Family f, const FixtureParams& p, std::size_t expected) {
  if (p.lengths.size() != expected) {
    throw Error(Errc::ParamMismatch, std::string(to_string(f)) + " expects " +
                                         std::to_string(expected) + " lengths, got " +
                                         std::to_string(p.lengths.size()));
  }
}

}  // namespace

MarkedGraph standard_graph(Family family, const FixtureParams& params) {
  std::vector<EdgeSpec> edges;
  std::size_t n_vertices = 0;
  std::vector<VertexType> default_types;
  const auto& l = params.lengths;

  switch (family) {
    case Family::Interval:
      require_lengths(family, params, 1);
      n_vertices = 2;
      edges = {{0, 1, l[0]}};
      break;
    case Family::Star: {
      if (l.size() < 2) throw Error(Errc::ParamMismatch, "star needs at least 2 edges");
      const std::size_t n = l.size();
      n_vertices = n + 1;
      for (std::size_t i = 0; i < n; ++i) edges.push_back({i, n, l[i]});
      break;
    }
    case Family::ChainA4:
      require_lengths(family, params, 3);
      n_vertices = 4;
      edges = {{0, 1, l[0]}, {1, 2, l[1]}, {2, 3, l[2]}};
      break;
    case Family::Cycle: {
      if (l.size() < 2) throw Error(Errc::ParamMismatch, "cycle needs at least 2 edges");
      const std::size_t n = l.size();
      n_vertices = n;
      for (std::size_t i = 0; i < n; ++i) edges.push_back({i, (i + 1) % n, l[i]});
      break;
    }
    case Family::Lasso:
      require_lengths(family, params, 3);
      n_vertices = 3;
      edges = {{0, 1, l[0]}, {1, 2, l[1]}, {1, 2, l[2]}};
      break;
    case Family::Example34:
      require_lengths(family, params, 4);
      n_vertices = 4;
      edges = {{0, 1, l[0]}, {1, 2, l[1]}, {1, 2, l[2]}, {2, 3, l[3]}};
      default_types = {VertexType::Delta, VertexType::Delta, VertexType::DeltaPrime,
                       VertexType::DeltaPrime};
      break;
  }
  if (default_types.empty()) default_types.assign(n_vertices, VertexType::Delta);

  std::vector<VertexType> types = params.types.empty() ? default_types : params.types;
  std::vector<Coupling> couplings = params.couplings;
  if (couplings.empty()) couplings.assign(n_vertices, Coupling(0.0));
  if (types.size() != n_vertices || couplings.size() != n_vertices) {
    throw Error(Errc::ParamMismatch, std::string(to_string(family)) + " has " +
                                         std::to_string(n_vertices) + " vertices; got " +
                                         std::to_string(types.size()) + " types and " +
                                         std::to_string(couplings.size()) + " couplings");
  }
  return build_graph(edges, types, couplings);
}

MarkedGraph default_fixture(Family family) {
  const auto& d = kDefaultLengths;
  switch (family) {
    case Family::Interval:
      return standard_graph(family, {{1.0}, {0.0, 0.0}, {}});
    case Family::Star:
      return standard_graph(family, {{d[0], d[1], d[2]}, {1.0, 1.0, 1.0, 1.0}, {}});
    case Family::ChainA4:
      return standard_graph(family, {{d[0], d[1], d[2]}, {1.0, 2.0, 3.0, 4.0}, {}});
    case Family::Cycle:
      return standard_graph(family, {{d[0], d[1], d[2], d[3]}, {2.0, -2.0, 2.0, -2.0}, {}});
    case Family::Lasso:
      return standard_graph(family, {{1.0, 1.0, 1.0}, {1.0, 6.0, 6.0}, {}});
    case Family::Example34:
      return standard_graph(family, {{d[0], d[1], d[2], d[3]}, {1.0, 2.0, 3.0, 4.0}, {}});
  }
  throw Error(Errc::UnknownFamily, "unhandled family");
}

}  // namespace qgraph
