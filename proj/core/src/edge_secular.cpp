#include "qgraph/edge_secular.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qgraph/error.hpp"
#include "qgraph/mfunction.hpp"

namespace qgraph {

PointBasis<double> basis_at(double lambda, double x) {
  if (lambda > 0.0) {
    const double mu = std::sqrt(lambda);
    const double sn = std::sin(mu * x), cs = std::cos(mu * x);
    return {cs, sn / mu, -mu * sn, cs};
  }
  if (lambda < 0.0) {
    const double kappa = std::sqrt(-lambda);
    const double sh = std::sinh(kappa * x), ch = std::cosh(kappa * x);
    return {ch, sh / kappa, kappa * sh, ch};
  }
  return {1.0, x, 0.0, 1.0};
}

PointBasis<cdouble> basis_at(const SpectralPoint& p, double x) {
  if (p.is_real()) {
    const auto b = basis_at(p.real_lambda(), x);
    return {b.c, b.s, b.dc, b.ds};
  }
  const cdouble mu = p.mu();
  const cdouble sn = std::sin(mu * x), cs = std::cos(mu * x);
  return {cs, sn / mu, -mu * sn, cs};
}

namespace {

void check_range(double kappa_l, const EdgeSecularOptions& opts) {
  if (kappa_l > opts.max_kappa_length || (!opts.exp_scaling && kappa_l > kHyperbolicCutoff)) {
    throw Error(Errc::Overflow, "kappa * l = " + std::to_string(kappa_l) +
                                    " exceeds the representable range");
  }
}

}  // namespace

EdgeBasisValues<double> edge_basis(double lambda, double length, const EdgeSecularOptions& opts) {
  EdgeBasisValues<double> out;
  out.left = {1.0, 0.0, 0.0, 1.0};
  if (lambda < 0.0 && opts.exp_scaling) {
    const double kappa = std::sqrt(-lambda);
    const double x = kappa * length;
    check_range(x, opts);
    const double e = std::exp(-x);
    out.log_scale = -x;
    if (x >= 1.0) {
      // w exp(-kappa x) and w exp(-kappa (l - x)). The pair spans the same space
      // as (c, s) with transition determinant 2 kappa w^2 exp(-kappa l), which w
      // makes equal to the exp(-2 kappa l) of the column-scaled (c, s) pair. Rows
      // stay well conditioned when the solution is localised at the edge ends.
      const double w = std::exp(-0.5 * x) / std::sqrt(2.0 * kappa);
      out.left = {w, w * e, -kappa * w, kappa * w * e};
      out.right = {w * e, w, kappa * w * e, -kappa * w};
      return out;
    }
    // cosh(x) e^{-x} and sinh(x) e^{-x} without forming cosh(x).
    const double e2 = e * e;
    const double ch = 0.5 * (1.0 + e2);
    const double sh = 0.5 * (1.0 - e2);
    out.left = {e, 0.0, 0.0, e};
    out.right = {ch, sh / kappa, -kappa * sh, -ch};
    out.log_scale = -x;
    return out;
  }
  if (lambda < 0.0) check_range(std::sqrt(-lambda) * length, opts);
  const auto b = basis_at(lambda, length);
  out.right = {b.c, b.s, -b.dc, -b.ds};
  return out;
}

EdgeBasisValues<cdouble> edge_basis(const SpectralPoint& p, double length,
                                    const EdgeSecularOptions& opts) {
  EdgeBasisValues<cdouble> out;
  if (p.is_real()) {
    const auto r = edge_basis(p.real_lambda(), length, opts);
    out.left = {r.left.c, r.left.s, r.left.dn_c, r.left.dn_s};
    out.right = {r.right.c, r.right.s, r.right.dn_c, r.right.dn_s};
    out.log_scale = r.log_scale;
    return out;
  }
  out.left = {1.0, 0.0, 0.0, 1.0};
  const auto b = basis_at(p, length);
  out.right = {b.c, b.s, -b.dc, -b.ds};
  return out;
}

namespace {

std::string endpoint_name(const Endpoint& p) {
  return "e" + std::to_string(p.edge) + (p.side == Side::Left ? "L" : "R");
}

template <typename T, typename BasisFn>
BasicMatchingSystem<T> assemble(const MarkedGraph& g, const SpectralPoint& at, BasisFn&& basis,
                                bool labels) {
  using Matrix = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;
  const auto size = static_cast<Eigen::Index>(2 * g.num_edges());

  std::vector<EdgeBasisValues<T>> values;
  values.reserve(g.num_edges());
  double log_scale = 0.0;
  for (const Edge& e : g.edges()) {
    values.push_back(basis(e.length));
    log_scale += 2.0 * values.back().log_scale;
  }

  BasicMatchingSystem<T> sys{at, Matrix::Zero(size, size), {}, log_scale};
  Matrix& m = sys.matrix;
  if (labels) sys.row_labels.reserve(static_cast<std::size_t>(size));

  auto at_endpoint = [&](const Endpoint& p) -> const EndpointBasis<T>& {
    return p.side == Side::Left ? values[p.edge].left : values[p.edge].right;
  };
  // row += w * f(p)  or  row += w * dn f(p)
  auto add_value = [&](Eigen::Index row, const Endpoint& p, T w) {
    const auto& b = at_endpoint(p);
    const auto col = static_cast<Eigen::Index>(2 * p.edge);
    m(row, col) += w * b.c;
    m(row, col + 1) += w * b.s;
  };
  auto add_normal = [&](Eigen::Index row, const Endpoint& p, T w) {
    const auto& b = at_endpoint(p);
    const auto col = static_cast<Eigen::Index>(2 * p.edge);
    m(row, col) += w * b.dn_c;
    m(row, col + 1) += w * b.dn_s;
  };

  Eigen::Index row = 0;
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    const auto& pts = g.endpoints(v);
    const bool delta = g.type(v) == VertexType::Delta;
    const std::string vname = "v" + std::to_string(v);

    // Consecutive-pair differences keep the system square.
    for (std::size_t i = 0; i + 1 < pts.size(); ++i, ++row) {
      if (delta) {
        add_value(row, pts[i], T(1.0));
        add_value(row, pts[i + 1], T(-1.0));
      } else {
        add_normal(row, pts[i], T(1.0));
        add_normal(row, pts[i + 1], T(-1.0));
      }
      if (labels) {
        sys.row_labels.push_back(vname + (delta ? ": f(" : ": dn f(") + endpoint_name(pts[i]) +
                                 ") = " + (delta ? "f(" : "dn f(") +
                                 endpoint_name(pts[i + 1]) + ")");
      }
    }

    const Coupling& c = g.coupling(v);
    if (c.is_infinite()) {
      // Anchor on the lowest edge id; the rows above make the choice immaterial.
      if (delta) {
        add_value(row, pts.front(), T(1.0));
      } else {
        add_normal(row, pts.front(), T(1.0));
      }
      if (labels) {
        sys.row_labels.push_back(vname + (delta ? ": f(" : ": dn f(") +
                                 endpoint_name(pts.front()) + ") = 0");
      }
    } else {
      const T ratio(c.value() / static_cast<double>(pts.size()));
      for (const Endpoint& p : pts) {
        if (delta) {
          add_normal(row, p, T(1.0));
          add_value(row, p, -ratio);
        } else {
          add_value(row, p, T(1.0));
          add_normal(row, p, ratio);
        }
      }
      if (labels) {
        sys.row_labels.push_back(vname + (delta ? ": sum dn f = (alpha/gamma) sum f"
                                                : ": sum f = -(alpha/gamma) sum dn f"));
      }
    }
    ++row;
  }
  return sys;
}

RealMatchingSystem real_system(const MarkedGraph& g, double lambda, const EdgeSecularOptions& opts,
                               bool labels) {
  return assemble<double>(
      g, SpectralPoint::at(lambda), [&](double l) { return edge_basis(lambda, l, opts); }, labels);
}

MatchingSystem complex_system(const MarkedGraph& g, const SpectralPoint& p,
                              const EdgeSecularOptions& opts, bool labels) {
  return assemble<cdouble>(
      g, p, [&](double l) { return edge_basis(p, l, opts); }, labels);
}

// Column scales come from the magnitudes of the basis values, not from the
// assembled columns, which can be tiny through cancellation at an eigenvalue.
template <typename MatrixT, typename T>
Eigen::VectorXd scaled_singular_values(MatrixT a, const std::vector<EdgeBasisValues<T>>& values) {
  auto largest = [](std::initializer_list<T> xs) {
    double m = 0.0;
    for (const T& x : xs) m = std::max(m, std::abs(x));
    return m;
  };
  for (std::size_t j = 0; j < values.size(); ++j) {
    const auto& l = values[j].left;
    const auto& r = values[j].right;
    const double sc = largest({l.c, l.dn_c, r.c, r.dn_c});
    const double ss = largest({l.s, l.dn_s, r.s, r.dn_s});
    const auto col = static_cast<Eigen::Index>(2 * j);
    if (sc > 0.0) a.col(col) /= sc;
    if (ss > 0.0) a.col(col + 1) /= ss;
  }
  return Eigen::JacobiSVD<MatrixT>(a).singularValues();
}

std::vector<EdgeBasisValues<double>> basis_values(const MarkedGraph& g, double lambda) {
  std::vector<EdgeBasisValues<double>> v;
  for (const Edge& e : g.edges()) v.push_back(edge_basis(lambda, e.length));
  return v;
}

std::vector<EdgeBasisValues<cdouble>> basis_values(const MarkedGraph& g, const SpectralPoint& p) {
  std::vector<EdgeBasisValues<cdouble>> v;
  for (const Edge& e : g.edges()) v.push_back(edge_basis(p, e.length));
  return v;
}

int count_small(const Eigen::VectorXd& sv, double rank_tol) {
  const double smax = sv.size() ? sv.maxCoeff() : 0.0;
  if (!(smax > 0.0)) throw Error(Errc::RankTolDegenerate, "matching matrix is identically zero");
  int count = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv[i] < rank_tol * smax) ++count;
  }
  return count;
}

}  // namespace

RealMatchingSystem matching_system(const MarkedGraph& g, double lambda,
                                   const EdgeSecularOptions& opts) {
  return real_system(g, lambda, opts, true);
}

MatchingSystem matching_system(const MarkedGraph& g, const SpectralPoint& p,
                               const EdgeSecularOptions& opts) {
  return complex_system(g, p, opts, true);
}

double secular_edge(const MarkedGraph& g, double lambda, const EdgeSecularOptions& opts) {
  const auto sys = real_system(g, lambda, opts, false);
  return Eigen::PartialPivLU<Eigen::MatrixXd>(sys.matrix).determinant();
}

cdouble secular_edge(const MarkedGraph& g, const SpectralPoint& p,
                     const EdgeSecularOptions& opts) {
  if (p.is_real()) return {secular_edge(g, p.real_lambda(), opts), 0.0};
  const auto sys = complex_system(g, p, opts, false);
  return Eigen::PartialPivLU<Eigen::MatrixXcd>(sys.matrix).determinant();
}

int nullspace_dimension(const MarkedGraph& g, double lambda, double rank_tol) {
  const auto sys = real_system(g, lambda, {}, false);
  return count_small(scaled_singular_values(sys.matrix, basis_values(g, lambda)), rank_tol);
}

int nullspace_dimension(const MarkedGraph& g, const SpectralPoint& p, double rank_tol) {
  if (p.is_real()) return nullspace_dimension(g, p.real_lambda(), rank_tol);
  const auto sys = complex_system(g, p, {}, false);
  return count_small(scaled_singular_values(sys.matrix, basis_values(g, p)), rank_tol);
}

double relative_sigma_min(const MarkedGraph& g, double lambda) {
  const auto sys = real_system(g, lambda, {}, false);
  const Eigen::VectorXd sv = scaled_singular_values(sys.matrix, basis_values(g, lambda));
  const double smax = sv.maxCoeff();
  if (!(smax > 0.0)) throw Error(Errc::RankTolDegenerate, "matching matrix is identically zero");
  return sv.minCoeff() / smax;
}

}  // namespace qgraph
