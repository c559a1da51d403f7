#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace qgraph {

using VertexId = std::size_t;
using EdgeId = std::size_t;

enum class VertexType { Delta, DeltaPrime };

std::string_view to_string(VertexType t) noexcept;

/// Coupling constant at a vertex: a finite real, or the decoupling marker
/// (Dirichlet data at a delta vertex, Neumann data at a delta-prime vertex).
class Coupling {
 public:
  constexpr Coupling() = default;
  constexpr Coupling(double value) : value_(value) {}  // NOLINT(implicit)

  static constexpr Coupling infinite() {
    Coupling c;
    c.infinite_ = true;
    return c;
  }

  constexpr bool is_infinite() const noexcept { return infinite_; }
  constexpr bool is_finite() const noexcept { return !infinite_; }
  constexpr bool is_zero() const noexcept { return !infinite_ && value_ == 0.0; }

  /// Throws Errc::InfiniteCoupling for the infinite marker.
  double value() const;

  friend constexpr bool operator==(const Coupling& a, const Coupling& b) noexcept {
    return a.infinite_ == b.infinite_ && (a.infinite_ || a.value_ == b.value_);
  }

 private:
  double value_ = 0.0;
  bool infinite_ = false;
};

enum class Side { Left, Right };

/// Edge `id` is the interval [0, length]; x = 0 sits at `left`, x = length at `right`.
struct Edge {
  EdgeId id = 0;
  VertexId left = 0;
  VertexId right = 0;
  double length = 1.0;

  bool is_loop() const noexcept { return left == right; }
};

/// Input form of an edge; ids are assigned in list order by build_graph.
struct EdgeSpec {
  VertexId from = 0;
  VertexId to = 0;
  double length = 1.0;
};

struct Endpoint {
  EdgeId edge = 0;
  Side side = Side::Left;

  friend bool operator==(const Endpoint&, const Endpoint&) = default;
};

/// Immutable, validated marked metric graph. Construct with build_graph().
class MarkedGraph {
 public:
  std::size_t num_vertices() const noexcept { return types_.size(); }
  std::size_t num_edges() const noexcept { return edges_.size(); }

  const std::vector<Edge>& edges() const noexcept { return edges_; }
  const Edge& edge(EdgeId e) const;

  std::span<const VertexType> types() const noexcept { return types_; }
  std::span<const Coupling> couplings() const noexcept { return couplings_; }
  VertexType type(VertexId v) const;
  const Coupling& coupling(VertexId v) const;

  /// Valence of v; a loop contributes 2.
  int degree(VertexId v) const;
  std::vector<int> degrees() const;

  /// Endpoints at v ordered by (edge id, Left before Right).
  const std::vector<Endpoint>& endpoints(VertexId v) const;

  VertexId vertex_at(const Endpoint& p) const;

  double total_length() const noexcept;
  bool all_couplings_finite() const noexcept;
  bool homogeneous_type() const noexcept;

  /// Same edges and vertex types, different coupling constants.
  MarkedGraph with_couplings(std::vector<Coupling> couplings) const;

  /// True when topology, lengths and vertex types coincide exactly.
  bool same_structure(const MarkedGraph& other) const noexcept;

  friend bool operator==(const MarkedGraph& a, const MarkedGraph& b) noexcept;

 private:
  friend MarkedGraph build_graph(std::span<const EdgeSpec>, std::span<const VertexType>,
                                 std::span<const Coupling>);
  MarkedGraph() = default;

  std::vector<Edge> edges_;
  std::vector<VertexType> types_;
  std::vector<Coupling> couplings_;
  std::vector<std::vector<Endpoint>> incident_;
};

/// Validates and assembles a marked graph.
/// Errors: NonPositiveLength, DisconnectedGraph, IndexOutOfRange, ArityMismatch.
MarkedGraph build_graph(std::span<const EdgeSpec> edges, std::span<const VertexType> vertex_types,
                        std::span<const Coupling> couplings);

/// Edge classes used to assemble the M-matrix. For a vertex k: `loops` (L_k),
/// `same_type` (E_k) and `mixed_type` (E'_k) partition the incident edges.
/// For a pair (k, j), j != k: `joining_same` (C_kj) and `joining_mixed` (C'_kj);
/// at most one of the two is non-empty. All lists are in ascending edge id.
struct IncidenceSets {
  std::vector<EdgeId> loops;
  std::vector<EdgeId> same_type;
  std::vector<EdgeId> mixed_type;
  std::vector<EdgeId> joining_same;
  std::vector<EdgeId> joining_mixed;
};

IncidenceSets incidence_sets(const MarkedGraph& g, VertexId k,
                             std::optional<VertexId> j = std::nullopt);

struct LinearRelation {
  std::vector<int> coefficients;
  double residual = 0.0;
};

std::string to_string(const LinearRelation& r);

struct RationalIndependenceReport {
  std::vector<LinearRelation> relations;  // warnings only
  std::size_t combinations_scanned = 0;
  double tolerance = 1e-9;

  bool independent() const noexcept { return relations.empty(); }
};

/// Scans primitive integer combinations sum c_i l_i with |c_i| <= max_coeff
/// (first non-zero coefficient positive) and reports those within `tolerance`
/// of zero. Cost grows as (2 max_coeff + 1)^n.
RationalIndependenceReport rational_independence_advisory(std::span<const double> lengths,
                                                          int max_coeff, double tolerance = 1e-9);

}  // namespace qgraph
