#include "qgraph/fd_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "qgraph/error.hpp"

namespace qgraph {

namespace {

constexpr int kMinMesh = 16;
constexpr int kMinIntervals = 4;
constexpr std::ptrdiff_t kDropped = -1;

int intervals(double length, int mesh) {
  return std::max(kMinIntervals, static_cast<int>(std::ceil(mesh * length - 1e-9)));
}

struct Discretisation {
  // raw unknown per (edge, node); kDropped for Dirichlet nodes
  std::vector<std::vector<std::ptrdiff_t>> node_index;
  std::size_t raw = 0;
};

// Linear map raw = T * reduced removing the sum-zero constraint at delta' vertices
// with alpha = 0: the first endpoint value becomes minus the sum of the others.
using Sparse = Eigen::SparseMatrix<double>;
using Triplets = std::vector<Eigen::Triplet<double>>;

Sparse reduction(const MarkedGraph& g, const Discretisation& d) {
  std::vector<std::vector<std::ptrdiff_t>> dependents(d.raw);
  std::vector<bool> removed(d.raw, false);
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    if (g.type(v) != VertexType::DeltaPrime || !g.coupling(v).is_zero()) continue;
    const auto& pts = g.endpoints(v);
    auto raw_of = [&](const Endpoint& p) {
      const auto& nodes = d.node_index[p.edge];
      return p.side == Side::Left ? nodes.front() : nodes.back();
    };
    const std::ptrdiff_t head = raw_of(pts.front());
    removed[static_cast<std::size_t>(head)] = true;
    for (std::size_t k = 1; k < pts.size(); ++k) {
      dependents[static_cast<std::size_t>(head)].push_back(raw_of(pts[k]));
    }
  }
  std::vector<std::ptrdiff_t> column(d.raw, kDropped);
  Eigen::Index cols = 0;
  for (std::size_t i = 0; i < d.raw; ++i) {
    if (!removed[i]) column[i] = cols++;
  }
  Triplets entries;
  for (std::size_t i = 0; i < d.raw; ++i) {
    const auto row = static_cast<Eigen::Index>(i);
    if (!removed[i]) {
      entries.emplace_back(row, column[i], 1.0);
      continue;
    }
    for (std::ptrdiff_t j : dependents[i]) {
      entries.emplace_back(row, column[static_cast<std::size_t>(j)], -1.0);
    }
  }
  Sparse t(static_cast<Eigen::Index>(d.raw), cols);
  t.setFromTriplets(entries.begin(), entries.end());
  return t;
}

}  // namespace

double fd_mesh_width(const MarkedGraph& g, const FdOptions& opts) {
  double h = 0.0;
  for (const Edge& e : g.edges()) h = std::max(h, e.length / intervals(e.length, opts.mesh_per_unit));
  return h;
}

std::vector<double> fd_eigenvalues(const MarkedGraph& g, const FdOptions& opts) {
  if (opts.mesh_per_unit < kMinMesh) {
    throw Error(Errc::MeshTooCoarse, "mesh_per_unit = " + std::to_string(opts.mesh_per_unit) +
                                         " (minimum " + std::to_string(kMinMesh) + ")");
  }
  if (opts.count < 1) throw Error(Errc::InvalidArgument, "count must be >= 1");

  Discretisation d;
  d.node_index.resize(g.num_edges());

  // Shared unknown for every finite delta vertex.
  std::vector<std::ptrdiff_t> vertex_index(g.num_vertices(), kDropped);
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    if (g.type(v) == VertexType::Delta && g.coupling(v).is_finite()) {
      vertex_index[v] = static_cast<std::ptrdiff_t>(d.raw++);
    }
  }
  auto endpoint_unknown = [&](VertexId v) -> std::ptrdiff_t {
    if (g.type(v) == VertexType::Delta) return vertex_index[v];  // kDropped when Dirichlet
    return static_cast<std::ptrdiff_t>(d.raw++);
  };
  std::vector<double> hs(g.num_edges());
  for (const Edge& e : g.edges()) {
    const int m = intervals(e.length, opts.mesh_per_unit);
    hs[e.id] = e.length / m;
    auto& nodes = d.node_index[e.id];
    nodes.resize(static_cast<std::size_t>(m) + 1);
    nodes.front() = endpoint_unknown(e.left);
    for (int i = 1; i < m; ++i) nodes[static_cast<std::size_t>(i)] = static_cast<std::ptrdiff_t>(d.raw++);
    nodes.back() = endpoint_unknown(e.right);
  }
  if (d.raw > opts.max_unknowns) {
    throw Error(Errc::InvalidArgument, std::to_string(d.raw) + " unknowns exceed the limit of " +
                                           std::to_string(opts.max_unknowns));
  }

  const auto n = static_cast<Eigen::Index>(d.raw);
  Triplets k;  // duplicates are summed by setFromTriplets
  Triplets mass;

  for (const Edge& e : g.edges()) {
    const auto& nodes = d.node_index[e.id];
    const double h = hs[e.id];
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
      const std::ptrdiff_t a = nodes[i], b = nodes[i + 1];
      if (a != kDropped) {
        k.emplace_back(a, a, 1.0 / h);
        mass.emplace_back(a, a, 0.5 * h);
      }
      if (b != kDropped) {
        k.emplace_back(b, b, 1.0 / h);
        mass.emplace_back(b, b, 0.5 * h);
      }
      if (a != kDropped && b != kDropped) {
        k.emplace_back(a, b, -1.0 / h);
        k.emplace_back(b, a, -1.0 / h);
      }
    }
  }

  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    const Coupling& c = g.coupling(v);
    if (c.is_infinite() || c.is_zero()) continue;
    if (g.type(v) == VertexType::Delta) {
      k.emplace_back(vertex_index[v], vertex_index[v], c.value());
      continue;
    }
    // -|sum of endpoint values|^2 / alpha
    std::vector<std::ptrdiff_t> ids;
    for (const Endpoint& p : g.endpoints(v)) {
      const auto& nodes = d.node_index[p.edge];
      ids.push_back(p.side == Side::Left ? nodes.front() : nodes.back());
    }
    for (std::ptrdiff_t a : ids) {
      for (std::ptrdiff_t b : ids) k.emplace_back(a, b, -1.0 / c.value());
    }
  }

  Sparse ks(n, n), ms(n, n);
  ks.setFromTriplets(k.begin(), k.end());
  ms.setFromTriplets(mass.begin(), mass.end());
  const Sparse t = reduction(g, d);
  const Sparse tt = t.transpose();
  const Eigen::MatrixXd kr = Eigen::MatrixXd(tt * ks * t);
  const Eigen::MatrixXd mr = Eigen::MatrixXd(tt * ms * t);
  if (kr.rows() == 0) throw Error(Errc::MeshTooCoarse, "no free unknowns");

  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(kr, mr, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw Error(Errc::InvalidArgument, "discrete eigenproblem did not converge");
  }
  const Eigen::VectorXd& ev = solver.eigenvalues();  // ascending
  const auto take = std::min<Eigen::Index>(static_cast<Eigen::Index>(opts.count), ev.size());
  return {ev.data(), ev.data() + take};
}

Spectrum fd_spectrum(const MarkedGraph& g, const FdOptions& opts) {
  const std::vector<double> values = fd_eigenvalues(g, opts);
  const double h = fd_mesh_width(g, opts);

  Spectrum spec;
  spec.method = SpectrumMethod::FiniteDifference;
  for (double x : values) {
    const double scale = std::max(1.0, std::abs(x));
    const double tol = 1e-3 * h * h * scale * scale;
    if (!spec.eigenvalues.empty() && x - spec.eigenvalues.back().lambda <= tol) {
      ++spec.eigenvalues.back().multiplicity;
    } else {
      spec.eigenvalues.push_back({x, 1});
    }
  }
  spec.lambda_max = values.empty() ? 0.0 : values.back();
  return spec;
}

}  // namespace qgraph
