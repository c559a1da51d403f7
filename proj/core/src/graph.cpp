#include "qgraph/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "qgraph/error.hpp"

namespace qgraph {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::NonPositiveLength: return "NonPositiveLength";
    case Errc::DisconnectedGraph: return "DisconnectedGraph";
    case Errc::IndexOutOfRange: return "IndexOutOfRange";
    case Errc::ArityMismatch: return "ArityMismatch";
    case Errc::UnknownFamily: return "UnknownFamily";
    case Errc::ParamMismatch: return "ParamMismatch";
    case Errc::ParseError: return "ParseError";
    case Errc::PoleProximity: return "PoleProximity";
    case Errc::InfiniteCoupling: return "InfiniteCoupling";
    case Errc::DivisionNearZero: return "DivisionNearZero";
    case Errc::Overflow: return "Overflow";
    case Errc::RankTolDegenerate: return "RankTolDegenerate";
    case Errc::BudgetExceeded: return "BudgetExceeded";
    case Errc::MeshTooCoarse: return "MeshTooCoarse";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::SizeMismatch: return "SizeMismatch";
    case Errc::SearchSpaceTooLarge: return "SearchSpaceTooLarge";
    case Errc::MixedTypes: return "MixedTypes";
  }
  return "Unknown";
}

std::string_view to_string(VertexType t) noexcept {
  return t == VertexType::Delta ? "delta" : "delta_prime";
}

double Coupling::value() const {
  if (infinite_) throw Error(Errc::InfiniteCoupling, "coupling is infinite");
  return value_;
}

const Edge& MarkedGraph::edge(EdgeId e) const {
  if (e >= edges_.size()) throw Error(Errc::IndexOutOfRange, "edge id " + std::to_string(e));
  return edges_[e];
}

VertexType MarkedGraph::type(VertexId v) const {
  if (v >= types_.size()) throw Error(Errc::IndexOutOfRange, "vertex id " + std::to_string(v));
  return types_[v];
}

const Coupling& MarkedGraph::coupling(VertexId v) const {
  if (v >= couplings_.size()) throw Error(Errc::IndexOutOfRange, "vertex id " + std::to_string(v));
  return couplings_[v];
}

int MarkedGraph::degree(VertexId v) const { return static_cast<int>(endpoints(v).size()); }

std::vector<int> MarkedGraph::degrees() const {
  std::vector<int> out(num_vertices());
  for (VertexId v = 0; v < num_vertices(); ++v) out[v] = degree(v);
  return out;
}

const std::vector<Endpoint>& MarkedGraph::endpoints(VertexId v) const {
  if (v >= incident_.size()) throw Error(Errc::IndexOutOfRange, "vertex id " + std::to_string(v));
  return incident_[v];
}

VertexId MarkedGraph::vertex_at(const Endpoint& p) const {
  const Edge& e = edge(p.edge);
  return p.side == Side::Left ? e.left : e.right;
}

double MarkedGraph::total_length() const noexcept {
  double total = 0.0;
  for (const Edge& e : edges_) total += e.length;
  return total;
}

bool MarkedGraph::all_couplings_finite() const noexcept {
  return std::all_of(couplings_.begin(), couplings_.end(),
                     [](const Coupling& c) { return c.is_finite(); });
}

bool MarkedGraph::homogeneous_type() const noexcept {
  return std::all_of(types_.begin(), types_.end(),
                     [&](VertexType t) { return t == types_.front(); });
}

MarkedGraph MarkedGraph::with_couplings(std::vector<Coupling> couplings) const {
  std::vector<EdgeSpec> specs;
  specs.reserve(edges_.size());
  for (const Edge& e : edges_) specs.push_back({e.left, e.right, e.length});
  return build_graph(specs, types_, couplings);
}

bool MarkedGraph::same_structure(const MarkedGraph& other) const noexcept {
  if (types_ != other.types_ || edges_.size() != other.edges_.size()) return false;
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    const Edge& a = edges_[i];
    const Edge& b = other.edges_[i];
    if (a.left != b.left || a.right != b.right || a.length != b.length) return false;
  }
  return true;
}

bool operator==(const MarkedGraph& a, const MarkedGraph& b) noexcept {
  return a.same_structure(b) && a.couplings_ == b.couplings_;
}

MarkedGraph build_graph(std::span<const EdgeSpec> edges, std::span<const VertexType> vertex_types,
                        std::span<const Coupling> couplings) {
  const std::size_t n_vertices = vertex_types.size();
  if (couplings.size() != n_vertices) {
    throw Error(Errc::ArityMismatch, std::to_string(n_vertices) + " vertex types but " +
                                         std::to_string(couplings.size()) + " couplings");
  }
  if (n_vertices == 0) throw Error(Errc::ArityMismatch, "graph needs at least one vertex");
  if (edges.empty()) throw Error(Errc::ArityMismatch, "graph needs at least one edge");

  MarkedGraph g;
  g.types_.assign(vertex_types.begin(), vertex_types.end());
  g.couplings_.assign(couplings.begin(), couplings.end());
  g.incident_.resize(n_vertices);

  for (std::size_t v = 0; v < n_vertices; ++v) {
    if (g.couplings_[v].is_finite() && !std::isfinite(g.couplings_[v].value())) {
      throw Error(Errc::InvalidArgument, "coupling at vertex " + std::to_string(v) +
                                             " is not a finite number");
    }
  }

  g.edges_.reserve(edges.size());
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const EdgeSpec& s = edges[i];
    if (s.from >= n_vertices || s.to >= n_vertices) {
      throw Error(Errc::IndexOutOfRange, "edge " + std::to_string(i) + " references vertex " +
                                             std::to_string(std::max(s.from, s.to)) + " of " +
                                             std::to_string(n_vertices));
    }
    if (!(s.length > 0.0) || !std::isfinite(s.length)) {
      throw Error(Errc::NonPositiveLength, "edge " + std::to_string(i) + " has length " +
                                               std::to_string(s.length));
    }
    g.edges_.push_back({i, s.from, s.to, s.length});
    // Pushed in edge order, so each list is already sorted by (edge, side).
    g.incident_[s.from].push_back({i, Side::Left});
    g.incident_[s.to].push_back({i, Side::Right});
  }

  // Connectivity by union-find over edge endpoints.
  std::vector<std::size_t> parent(n_vertices);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const Edge& e : g.edges_) parent[find(e.left)] = find(e.right);
  const std::size_t root = find(0);
  for (std::size_t v = 1; v < n_vertices; ++v) {
    if (find(v) != root) {
      throw Error(Errc::DisconnectedGraph,
                  "vertex " + std::to_string(v) + " is not reachable from vertex 0");
    }
  }
  // With N >= 2 connectivity implies degree >= 1; a lone vertex needs a loop.
  if (g.incident_[0].empty()) throw Error(Errc::DisconnectedGraph, "vertex 0 has no edges");
  return g;
}

IncidenceSets incidence_sets(const MarkedGraph& g, VertexId k, std::optional<VertexId> j) {
  const VertexType tk = g.type(k);
  if (j) (void)g.type(*j);

  IncidenceSets out;
  for (const Endpoint& p : g.endpoints(k)) {
    const Edge& e = g.edge(p.edge);
    if (e.is_loop()) {
      if (p.side == Side::Left) out.loops.push_back(e.id);
      continue;
    }
    const VertexId other = p.side == Side::Left ? e.right : e.left;
    const bool same = g.type(other) == tk;
    (same ? out.same_type : out.mixed_type).push_back(e.id);
    if (j && *j == other && *j != k) (same ? out.joining_same : out.joining_mixed).push_back(e.id);
  }
  return out;
}

std::string to_string(const LinearRelation& r) {
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = 0; i < r.coefficients.size(); ++i) {
    const int c = r.coefficients[i];
    if (c == 0) continue;
    if (first) {
      if (c < 0) os << "-";
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    os << std::abs(c) << "*l" << (i + 1);
    first = false;
  }
  os << " = 0";
  return os.str();
}

RationalIndependenceReport rational_independence_advisory(std::span<const double> lengths,
                                                          int max_coeff, double tolerance) {
  RationalIndependenceReport report;
  report.tolerance = tolerance;
  const std::size_t n = lengths.size();
  if (n == 0 || max_coeff < 1) return report;

  std::vector<int> c(n, -max_coeff);
  for (;;) {
    // Canonical representative: first non-zero coefficient positive, gcd 1.
    auto nz = std::find_if(c.begin(), c.end(), [](int x) { return x != 0; });
    if (nz != c.end() && *nz > 0) {
      int g = 0;
      for (int x : c) g = std::gcd(g, x);
      if (g == 1) {
        ++report.combinations_scanned;
        double sum = 0.0;
        double scale = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          sum += c[i] * lengths[i];
          scale += std::abs(c[i] * lengths[i]);
        }
        if (std::abs(sum) <= tolerance * std::max(1.0, scale)) {
          report.relations.push_back({c, sum});
        }
      }
    }
    std::size_t i = 0;
    while (i < n && c[i] == max_coeff) c[i++] = -max_coeff;
    if (i == n) break;
    ++c[i];
  }

  std::stable_sort(report.relations.begin(), report.relations.end(),
                   [](const LinearRelation& a, const LinearRelation& b) {
                     auto l1 = [](const LinearRelation& r) {
                       int s = 0;
                       for (int x : r.coefficients) s += std::abs(x);
                       return s;
                     };
                     return l1(a) < l1(b);
                   });
  return report;
}

}  // namespace qgraph
