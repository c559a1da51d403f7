#include "qgraph/mfunction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "qgraph/error.hpp"

namespace qgraph {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// Per-edge trigonometric blocks. Every M-matrix entry is a signed sum of these.
struct EdgeKernels {
  cdouble mu_cot;            // mu cot(mu l)
  cdouble mu_csc;            // mu / sin(mu l)
  cdouble mu_tan;            // mu tan(mu l)
  cdouble mu_tan_half;       // mu tan(mu l / 2)
  cdouble cot_over_mu;       // cot(mu l) / mu
  cdouble csc_over_mu;       // 1 / (mu sin(mu l))
  cdouble tan_over_mu;       // tan(mu l) / mu
  cdouble cot_half_over_mu;  // cot(mu l / 2) / mu
  cdouble sec;               // 1 / cos(mu l)
};

EdgeKernels real_kernels(double mu, double l) {
  const double x = mu * l;
  const double s = std::sin(x), c = std::cos(x);
  const double th = std::tan(0.5 * x);
  return {mu * c / s,       mu / s,        mu * s / c, mu * th,       c / (s * mu),
          1.0 / (mu * s), s / (c * mu), 1.0 / (th * mu), 1.0 / c};
}

// lambda = -kappa^2, mu = i kappa.
EdgeKernels hyperbolic_kernels(double kappa, double l) {
  const double x = kappa * l;
  const double coth = x > kHyperbolicCutoff ? 1.0 : 1.0 / std::tanh(x);
  const double csch = x > kHyperbolicCutoff ? 0.0 : 1.0 / std::sinh(x);
  const double tanh = x > kHyperbolicCutoff ? 1.0 : std::tanh(x);
  const double sech = x > kHyperbolicCutoff ? 0.0 : 1.0 / std::cosh(x);
  const double half = 0.5 * x;
  const double tanh_half = half > kHyperbolicCutoff ? 1.0 : std::tanh(half);
  return {kappa * coth,  kappa * csch, -kappa * tanh,          -kappa * tanh_half,
          -coth / kappa, -csch / kappa, tanh / kappa, -1.0 / (tanh_half * kappa), sech};
}

// Series limits at lambda = 0; the delta'-delta' and loop-at-delta' blocks have
// genuine poles there and are never requested (pole check runs first).
EdgeKernels zero_kernels(double l) {
  return {1.0 / l, 1.0 / l, 0.0, 0.0, kNaN, kNaN, l, kNaN, 1.0};
}

// Exponential forms with w = exp(iz), |w| <= 1 for Im z >= 0: no overflow.
EdgeKernels complex_kernels(cdouble mu, double l) {
  const cdouble I(0.0, 1.0);
  const cdouble z = mu * l;
  const cdouble w = std::exp(I * z);
  const cdouble q = w * w;
  const cdouble cot = I * (q + 1.0) / (q - 1.0);
  const cdouble csc = 2.0 * I * w / (q - 1.0);
  const cdouble tan = -I * (q - 1.0) / (q + 1.0);
  const cdouble sec = 2.0 * w / (q + 1.0);
  const cdouble wh = std::exp(I * 0.5 * z);
  const cdouble qh = wh * wh;
  const cdouble cot_half = I * (qh + 1.0) / (qh - 1.0);
  const cdouble tan_half = -I * (qh - 1.0) / (qh + 1.0);
  return {mu * cot,  mu * csc,  mu * tan,       mu * tan_half, cot / mu,
          csc / mu, tan / mu, cot_half / mu, sec};
}

EdgeKernels kernels(const SpectralPoint& p, double l) {
  if (!p.is_real()) return complex_kernels(p.mu(), l);
  const double lambda = p.real_lambda();
  if (lambda > 0.0) return real_kernels(p.mu().real(), l);
  if (lambda < 0.0) return hyperbolic_kernels(p.mu().imag(), l);
  return zero_kernels(l);
}

// Poles of one family sit at mu = (offset + n * period) / l, n >= 0.
double family_distance(cdouble mu, double l, double offset, double period) {
  const double a = std::abs(mu.real());
  const double b = mu.imag();
  const double n0 = std::max(0.0, std::round((a * l - offset) / period));
  double best = std::numeric_limits<double>::infinity();
  for (double n = std::max(0.0, n0 - 1.0); n <= n0 + 1.0; n += 1.0) {
    const double pole = (offset + n * period) / l;
    best = std::min(best, std::hypot(a - pole, b));
  }
  return best;
}

double edge_pole_distance(const MarkedGraph& g, const Edge& e, cdouble mu) {
  const VertexType tl = g.type(e.left);
  if (e.is_loop()) {
    // delta: tan(mu l / 2); delta': cot(mu l / 2).
    return tl == VertexType::Delta ? family_distance(mu, e.length, kPi, 2.0 * kPi)
                                   : family_distance(mu, e.length, 0.0, 2.0 * kPi);
  }
  const VertexType tr = g.type(e.right);
  if (tl != tr) return family_distance(mu, e.length, 0.5 * kPi, kPi);
  // mu cot, mu csc are regular at mu = 0; cot/mu, csc/mu are not.
  return tl == VertexType::Delta ? family_distance(mu, e.length, kPi, kPi)
                                 : family_distance(mu, e.length, 0.0, kPi);
}

void require_finite_couplings(const MarkedGraph& g) {
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    if (g.coupling(v).is_infinite()) {
      throw Error(Errc::InfiniteCoupling,
                  "vertex " + std::to_string(v) + " has an infinite coupling; use the edge "
                  "secular determinant for decoupled vertices");
    }
  }
}

}  // namespace

CouplingMatrix CouplingMatrix::from_graph(const MarkedGraph& g) {
  require_finite_couplings(g);
  CouplingMatrix b;
  b.diagonal.resize(static_cast<Eigen::Index>(g.num_vertices()));
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    b.diagonal[static_cast<Eigen::Index>(v)] = g.coupling(v).value();
  }
  return b;
}

double pole_distance(const MarkedGraph& g, const SpectralPoint& p) {
  double best = std::numeric_limits<double>::infinity();
  for (const Edge& e : g.edges()) best = std::min(best, edge_pole_distance(g, e, p.mu()));
  return best;
}

MMatrix m_matrix(const MarkedGraph& g, const SpectralPoint& p, double pole_eps) {
  require_finite_couplings(g);
  const double dist = pole_distance(g, p);
  if (dist < pole_eps) {
    throw Error(Errc::PoleProximity, "mu = (" + std::to_string(p.mu().real()) + ", " +
                                         std::to_string(p.mu().imag()) + ") lies within " +
                                         std::to_string(dist) + " of a pole of M");
  }

  const auto n = static_cast<Eigen::Index>(g.num_vertices());
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);

  for (const Edge& e : g.edges()) {
    const EdgeKernels k = kernels(p, e.length);
    const auto a = static_cast<Eigen::Index>(e.left);
    const auto b = static_cast<Eigen::Index>(e.right);
    const VertexType ta = g.type(e.left);

    if (e.is_loop()) {
      m(a, a) += ta == VertexType::Delta ? 2.0 * k.mu_tan_half : -2.0 * k.cot_half_over_mu;
      continue;
    }

    const VertexType tb = g.type(e.right);
    const bool same = ta == tb;
    auto diagonal_term = [&](VertexType t) {
      if (t == VertexType::Delta) return same ? -k.mu_cot : k.mu_tan;
      return same ? -k.cot_over_mu : k.tan_over_mu;
    };
    m(a, a) += diagonal_term(ta);
    m(b, b) += diagonal_term(tb);

    cdouble off;
    if (!same) {
      off = -k.sec;
    } else if (ta == VertexType::Delta) {
      off = k.mu_csc;
    } else {
      off = -k.csc_over_mu;
    }
    // Upper triangle only; mirrored below.
    m(std::min(a, b), std::max(a, b)) += off;
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) m(j, i) = m(i, j);
  }
  return {p, std::move(m)};
}

cdouble secular_vertex(const MarkedGraph& g, const SpectralPoint& p, double pole_eps) {
  const MMatrix m = m_matrix(g, p, pole_eps);
  const CouplingMatrix b = CouplingMatrix::from_graph(g);
  if (p.is_real()) {
    Eigen::MatrixXd a = -m.entries.real();
    a.diagonal() += b.diagonal;
    return {Eigen::PartialPivLU<Eigen::MatrixXd>(a).determinant(), 0.0};
  }
  Eigen::MatrixXcd a = -m.entries;
  a.diagonal() += b.diagonal.cast<cdouble>();
  return Eigen::PartialPivLU<Eigen::MatrixXcd>(a).determinant();
}

double asymptotic_secular(const MarkedGraph& g, double tau) {
  require_finite_couplings(g);
  double prod = 1.0;
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    const double alpha = g.coupling(v).value();
    const double gamma = g.degree(v);
    prod *= g.type(v) == VertexType::Delta ? alpha + gamma * tau : alpha - gamma / tau;
  }
  return prod;
}

double hadamard_limit(const MarkedGraph& g1, const MarkedGraph& g2) {
  if (!g1.same_structure(g2)) {
    throw Error(Errc::ParamMismatch, "graphs differ in topology, lengths or vertex types");
  }
  require_finite_couplings(g1);
  require_finite_couplings(g2);
  double ratio = 1.0;
  int zeros1 = 0, zeros2 = 0;
  for (VertexId v = 0; v < g1.num_vertices(); ++v) {
    if (g1.type(v) != VertexType::DeltaPrime) continue;
    const double a1 = g1.coupling(v).value();
    const double a2 = g2.coupling(v).value();
    const double gamma = g1.degree(v);
    if (a1 != 0.0) {
      ratio *= a1;
    } else {
      ratio *= gamma;
      ++zeros1;
    }
    if (a2 != 0.0) {
      ratio /= a2;
    } else {
      ratio /= gamma;
      ++zeros2;
    }
  }
  if (zeros1 != zeros2) {
    throw Error(Errc::InvalidArgument,
                "zero delta' coupling counts differ; the determinant ratio has no finite limit");
  }
  return ratio;
}

std::vector<RatioSample> hadamard_ratio(const MarkedGraph& g1, const MarkedGraph& g2,
                                        std::span<const double> tau_grid) {
  if (!g1.same_structure(g2)) {
    throw Error(Errc::ParamMismatch, "graphs differ in topology, lengths or vertex types");
  }
  std::vector<RatioSample> out;
  out.reserve(tau_grid.size());
  for (double tau : tau_grid) {
    if (!(tau > 0.0)) throw Error(Errc::InvalidArgument, "tau must be positive");
    const SpectralPoint p = SpectralPoint::from_tau(tau);
    const double num = secular_vertex(g1, p).real();
    const double den = secular_vertex(g2, p).real();
    if (std::abs(den) < 1e-300) {
      throw Error(Errc::DivisionNearZero, "denominator vanishes at tau = " + std::to_string(tau));
    }
    out.push_back({tau, num / den});
  }
  return out;
}

}  // namespace qgraph
