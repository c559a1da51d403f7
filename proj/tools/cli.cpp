#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "qgraph/edge_secular.hpp"
#include "qgraph/error.hpp"
#include "qgraph/fd_oracle.hpp"
#include "qgraph/fixtures.hpp"
#include "qgraph/graph_io.hpp"
#include "qgraph/isospectral.hpp"
#include "qgraph/mfunction.hpp"
#include "qgraph/spectrum.hpp"

namespace qgraph::cli {

namespace {

using json = nlohmann::ordered_json;

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string fmt_short(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

class Output {
 public:
  Output(const std::string& path, std::ostream& fallback) {
    if (path.empty()) {
      os_ = &fallback;
      return;
    }
    file_.open(path, std::ios::binary | std::ios::trunc);
    if (!file_) throw Error(Errc::InvalidArgument, "cannot write " + path);
    os_ = &file_;
  }
  std::ostream& stream() { return *os_; }

 private:
  std::ofstream file_;
  std::ostream* os_ = nullptr;
};

json coupling_json(const Coupling& c) {
  return c.is_infinite() ? json("inf") : json(c.value());
}

json report_json(const ComparisonReport& r) {
  json j;
  j["verdict"] = std::string(to_string(r.verdict));
  j["isospectral"] = r.isospectral;
  j["cutoff"] = r.cutoff;
  j["tolerance"] = r.tolerance;
  j["count1"] = r.count1;
  j["count2"] = r.count2;
  j["compared"] = r.compared;
  j["max_deviation"] = r.max_deviation;
  if (r.first_mismatch) {
    const Mismatch& m = *r.first_mismatch;
    json mj;
    mj["kind"] = std::string(to_string(m.kind));
    mj["index"] = m.index;
    mj["lambda1"] = m.lambda1 ? json(*m.lambda1) : json(nullptr);
    mj["lambda2"] = m.lambda2 ? json(*m.lambda2) : json(nullptr);
    mj["multiplicity1"] = m.multiplicity1;
    mj["multiplicity2"] = m.multiplicity2;
    j["first_mismatch"] = mj;
  } else {
    j["first_mismatch"] = nullptr;
  }
  return j;
}

std::string report_line(const ComparisonReport& r) {
  std::ostringstream os;
  const std::string cutoff = fmt_short(r.cutoff);
  switch (r.verdict) {
    case Verdict::Isospectral:
      os << "ISOSPECTRAL up to " << cutoff << " (" << r.compared << " eigenvalues, max dev "
         << fmt_short(r.max_deviation) << ")";
      break;
    case Verdict::Inconclusive:
      os << "INCONCLUSIVE up to " << cutoff << " (only " << r.compared
         << " eigenvalues agree, at least " << kMinComparable << " needed)";
      break;
    case Verdict::NotIsospectral: {
      const Mismatch& m = *r.first_mismatch;
      os << "NOT ISOSPECTRAL below " << cutoff << ": " << to_string(m.kind)
         << " mismatch at eigenvalue #" << m.index + 1 << " (";
      os << (m.lambda1 ? fmt17(*m.lambda1) : std::string("none")) << " vs "
         << (m.lambda2 ? fmt17(*m.lambda2) : std::string("none")) << ")";
      break;
    }
  }
  return os.str();
}

int exit_code_for(Errc c) {
  switch (c) {
    case Errc::PoleProximity:
    case Errc::Overflow:
    case Errc::DivisionNearZero:
    case Errc::RankTolDegenerate:
    case Errc::BudgetExceeded:
      return kNumericalWarning;
    default:
      return kValidationError;
  }
}

struct Common {
  std::string out;
  unsigned threads = 0;
};

void add_threads(CLI::App* sub, Common& c) {
  sub->add_option("--threads", c.threads, "Worker threads for spectrum scans (0 = all cores)");
}

ScanConfig scan_config(const Common& c) {
  ScanConfig cfg;
  cfg.threads = c.threads;
  return cfg;
}

// ---- subcommands ----------------------------------------------------------

int cmd_validate(const std::string& path, std::ostream& out) {
  const MarkedGraph g = load_graph(path);
  out << "valid: " << g.num_vertices() << " vertices, " << g.num_edges()
      << " edges, total length " << fmt17(g.total_length()) << "\n";
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    out << "  vertex " << v << ": " << to_string(g.type(v)) << ", degree " << g.degree(v)
        << ", alpha " << (g.coupling(v).is_infinite() ? "inf" : fmt17(g.coupling(v).value()))
        << "\n";
  }
  std::vector<double> lengths;
  for (const Edge& e : g.edges()) lengths.push_back(e.length);
  const auto rep = rational_independence_advisory(lengths, 6);
  if (rep.independent()) {
    out << "lengths: no integer relation with |c| <= 6 (tolerance " << rep.tolerance << ")\n";
  } else {
    for (const auto& r : rep.relations) out << "lengths: possible relation " << to_string(r) << "\n";
  }
  return kSuccess;
}

struct MMatrixArgs {
  std::string graph;
  double lambda = 0.0;
  double lambda_im = 0.0;
  std::string format = "text";
};

int cmd_mmatrix(const MMatrixArgs& a, const Common& c, std::ostream& stdout_) {
  const MarkedGraph g = load_graph(a.graph);
  const SpectralPoint p = SpectralPoint::at(cdouble(a.lambda, a.lambda_im));
  const MMatrix m = m_matrix(g, p);
  Output o(c.out, stdout_);
  std::ostream& os = o.stream();
  const bool real = p.is_real();
  if (a.format == "json") {
    json j;
    j["lambda"] = real ? json(a.lambda) : json::array({a.lambda, a.lambda_im});
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.entries.rows(); ++r) {
      json row = json::array();
      for (Eigen::Index k = 0; k < m.entries.cols(); ++k) {
        const cdouble z = m.entries(r, k);
        row.push_back(real ? json(z.real()) : json::array({z.real(), z.imag()}));
      }
      rows.push_back(row);
    }
    j["matrix"] = rows;
    os << j.dump(2) << "\n";
    return kSuccess;
  }
  std::vector<std::string> cells;
  std::size_t width = 0;
  for (Eigen::Index r = 0; r < m.entries.rows(); ++r) {
    for (Eigen::Index k = 0; k < m.entries.cols(); ++k) {
      const cdouble z = m.entries(r, k);
      std::string s = fmt17(z.real());
      if (!real) s += (z.imag() < 0 ? "-" : "+") + fmt17(std::abs(z.imag())) + "i";
      width = std::max(width, s.size());
      cells.push_back(std::move(s));
    }
  }
  const auto n = static_cast<std::size_t>(m.entries.cols());
  for (std::size_t i = 0; i < cells.size(); ++i) {
    os << std::string(width - cells[i].size() + (i % n ? 2 : 0), ' ') << cells[i];
    if (i % n == n - 1) os << "\n";
  }
  return kSuccess;
}

struct SecularArgs {
  std::string graph;
  double from = 0.0, to = 0.0, step = 0.01;
  std::string formulation = "edge";
};

int cmd_secular(const SecularArgs& a, const Common& c, std::ostream& stdout_) {
  const MarkedGraph g = load_graph(a.graph);
  const bool vertex = a.formulation != "edge";
  const bool edge = a.formulation != "vertex";
  if (vertex && !g.all_couplings_finite()) {
    throw Error(Errc::InfiniteCoupling,
                "vertex formulation needs finite couplings; use --formulation edge");
  }
  if (a.to < a.from) throw Error(Errc::InvalidArgument, "--to must not be below --from");
  const auto steps = static_cast<std::size_t>(std::floor((a.to - a.from) / a.step + 1e-9));

  Output o(c.out, stdout_);
  std::ostream& os = o.stream();
  const bool both = vertex && edge;
  os << (both ? "lambda,mu_or_kappa,vertex,edge\n" : "lambda,mu_or_kappa,value,formulation\n");
  for (std::size_t i = 0; i <= steps; ++i) {
    const double lambda = a.from + static_cast<double>(i) * a.step;
    const std::string head = fmt17(lambda) + "," + fmt17(std::sqrt(std::abs(lambda)));
    std::string vcell;
    if (vertex) {
      try {
        vcell = fmt17(secular_vertex(g, SpectralPoint::at(lambda)).real());
      } catch (const Error& e) {
        if (e.code() != Errc::PoleProximity) throw;
      }
    }
    const std::string ecell = edge ? fmt17(secular_edge(g, lambda)) : std::string();
    if (both) {
      os << head << "," << vcell << "," << ecell << "\n";
    } else {
      os << head << "," << (vertex ? vcell : ecell) << "," << a.formulation << "\n";
    }
  }
  return kSuccess;
}

struct SpectrumArgs {
  std::string graph;
  double lambda_max = 0.0;
  std::string method = "edge";
  int mesh = 200;
  std::size_t count = 0;
};

int cmd_spectrum(const SpectrumArgs& a, const Common& c, std::ostream& stdout_,
                 std::ostream& err) {
  const MarkedGraph g = load_graph(a.graph);
  Spectrum s;
  if (a.method == "fd") {
    FdOptions opts;
    opts.mesh_per_unit = a.mesh;
    // Enough discrete eigenvalues to cover lambda_max with room for the counting error.
    opts.count = a.count > 0 ? a.count
                             : static_cast<std::size_t>(std::ceil(weyl_estimate(g, a.lambda_max))) +
                                   2 * (g.num_vertices() + g.num_edges()) + 4;
    s = fd_spectrum(g, opts);
    std::erase_if(s.eigenvalues, [&](const Eigenvalue& e) { return e.lambda > a.lambda_max; });
  } else {
    s = find_spectrum(g, a.lambda_max, scan_config(c));
  }
  Output o(c.out, stdout_);
  std::ostream& os = o.stream();
  os << "lambda,multiplicity,method\n";
  for (const Eigenvalue& e : s.eigenvalues) {
    os << fmt17(e.lambda) << "," << e.multiplicity << "," << to_string(s.method) << "\n";
  }
  if (s.suspected_missed_root) {
    err << "warning: " << s.warning << "\n";
    return kNumericalWarning;
  }
  return kSuccess;
}

struct CompareArgs {
  std::string g1, g2;
  double lambda_max = 50.0;
  double tol = 1e-7;
  std::string format = "text";
};

int cmd_compare(const CompareArgs& a, const Common& c, std::ostream& stdout_, std::ostream& err) {
  const MarkedGraph g1 = load_graph(a.g1);
  const MarkedGraph g2 = load_graph(a.g2);
  const ScanConfig cfg = scan_config(c);
  const Spectrum s1 = find_spectrum(g1, a.lambda_max, cfg);
  const Spectrum s2 = find_spectrum(g2, a.lambda_max, cfg);
  const ComparisonReport r = compare_spectra(s1, s2, a.tol);
  Output o(c.out, stdout_);
  if (a.format == "json") {
    o.stream() << report_json(r).dump(2) << "\n";
  } else {
    o.stream() << report_line(r) << "\n";
  }
  int code = kSuccess;
  for (const Spectrum* s : {&s1, &s2}) {
    if (s->suspected_missed_root) {
      err << "warning: " << s->warning << "\n";
      code = kNumericalWarning;
    }
  }
  return code;
}

struct TracesArgs {
  std::vector<std::string> graphs;
  int max_m = 6;
};

json sigma_json(const SigmaMultiset& s) {
  json j;
  j["values"] = s.values;
  j["deltaprime_zero_count"] = s.deltaprime_zero_count;
  j["total_zero_count"] = s.total_zero_count;
  return j;
}

int cmd_traces(const TracesArgs& a, const Common& c, std::ostream& stdout_) {
  const MarkedGraph g1 = load_graph(a.graphs.at(0));
  json j;
  if (a.graphs.size() == 1) {
    j["sigma"] = sigma_json(sigma_multiset(g1));
    json rows = json::array();
    for (int m = 1; m <= a.max_m; ++m) rows.push_back({{"m", m}, {"sum", trace_sum(g1, m)}});
    j["traces"] = rows;
  } else {
    const MarkedGraph g2 = load_graph(a.graphs.at(1));
    const TraceReport tr = trace_report(g1, g2, a.max_m);
    json rows = json::array();
    for (const TraceRow& r : tr.rows) {
      rows.push_back({{"m", r.m}, {"lhs_sum", r.lhs_sum}, {"rhs_sum", r.rhs_sum},
                      {"residual", r.residual}});
    }
    j["traces"] = rows;
    const CheckReport ck = necessary_check(g1, g2);
    json cj;
    cj["passes"] = ck.passes;
    cj["sigma1"] = ck.sigma1;
    cj["sigma2"] = ck.sigma2;
    cj["deltaprime_zeros"] = {ck.deltaprime_zeros1, ck.deltaprime_zeros2};
    cj["total_zeros"] = {ck.total_zeros1, ck.total_zeros2};
    cj["violation"] = ck.violation;
    j["necessary_check"] = cj;
  }
  Output o(c.out, stdout_);
  o.stream() << j.dump(2) << "\n";
  return kSuccess;
}

struct SearchArgs {
  std::string graph;
  double lambda_max = 50.0;
  double tol = 1e-7;
};

int cmd_search(const SearchArgs& a, const Common& c, std::ostream& stdout_) {
  const MarkedGraph g = load_graph(a.graph);
  const SearchResult r = search_isospectral(g, a.lambda_max, a.tol, scan_config(c));
  auto hits = [](const std::vector<SearchHit>& hs) {
    json arr = json::array();
    for (const SearchHit& h : hs) {
      json alpha = json::array();
      for (const Coupling& x : h.couplings) alpha.push_back(coupling_json(x));
      arr.push_back({{"alpha", alpha}, {"report", report_json(h.report)}});
    }
    return arr;
  };
  json j;
  j["lambda_max"] = a.lambda_max;
  j["tolerance"] = a.tol;
  j["permutations"] = r.permutations;
  j["pruned"] = r.pruned;
  j["evaluated"] = r.evaluated;
  j["isospectral"] = hits(r.isospectral);
  j["inconclusive"] = hits(r.inconclusive);
  Output o(c.out, stdout_);
  o.stream() << j.dump(2) << "\n";
  return kSuccess;
}

int cmd_examples(const std::string& action, const std::string& name, const Common& c,
                 std::ostream& stdout_) {
  if (action == "list") {
    for (Family f : kAllFamilies) stdout_ << to_string(f) << "\n";
    return kSuccess;
  }
  if (name.empty()) throw Error(Errc::UnknownFamily, "examples emit needs a fixture name");
  const MarkedGraph g = default_fixture(family_from_string(name));
  Output o(c.out, stdout_);
  o.stream() << to_json(g);
  return kSuccess;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spectra of quantum graphs with delta and delta' vertex couplings", "qgraph"};
  app.require_subcommand(1);
  app.set_config("--config", "", "TOML/INI file with option values", false);
  app.allow_config_extras(false);

  Common common;
  std::function<int()> action;

  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "Check a graph file and print its structure");
  validate->add_option("graph", validate_path, "Graph JSON")->required();
  validate->callback([&] { action = [&] { return cmd_validate(validate_path, out); }; });

  MMatrixArgs mm;
  auto* mmatrix = app.add_subcommand("mmatrix", "Print the vertex M-matrix at one spectral point");
  mmatrix->add_option("graph", mm.graph, "Graph JSON")->required();
  mmatrix->add_option("--lambda", mm.lambda, "Real part of lambda")->required();
  mmatrix->add_option("--lambda-im", mm.lambda_im, "Imaginary part of lambda");
  mmatrix->add_option("--format", mm.format)->check(CLI::IsMember({"text", "json"}));
  mmatrix->add_option("--out", common.out, "Output file (default stdout)");
  mmatrix->callback([&] { action = [&] { return cmd_mmatrix(mm, common, out); }; });

  SecularArgs sa;
  auto* secular = app.add_subcommand("secular", "Tabulate secular functions on a lambda grid");
  secular->add_option("graph", sa.graph, "Graph JSON")->required();
  secular->add_option("--from", sa.from)->required();
  secular->add_option("--to", sa.to)->required();
  secular->add_option("--step", sa.step)->check(CLI::PositiveNumber);
  secular->add_option("--formulation", sa.formulation)
      ->check(CLI::IsMember({"vertex", "edge", "both"}));
  secular->add_option("--out", common.out, "Output CSV (default stdout)");
  secular->callback([&] { action = [&] { return cmd_secular(sa, common, out); }; });

  SpectrumArgs sp;
  auto* spectrum = app.add_subcommand("spectrum", "Eigenvalues up to lambda_max with multiplicities");
  spectrum->add_option("graph", sp.graph, "Graph JSON")->required();
  spectrum->add_option("--lambda-max", sp.lambda_max)->required()->check(CLI::PositiveNumber);
  spectrum->add_option("--method", sp.method)->check(CLI::IsMember({"edge", "fd"}));
  spectrum->add_option("--mesh", sp.mesh, "fd intervals per unit length")->check(CLI::PositiveNumber);
  spectrum->add_option("--count", sp.count, "fd eigenvalues to compute (0 = automatic)");
  spectrum->add_option("--out", common.out, "Output CSV (default stdout)");
  add_threads(spectrum, common);
  spectrum->callback([&] { action = [&] { return cmd_spectrum(sp, common, out, err); }; });

  CompareArgs ca;
  auto* compare = app.add_subcommand("compare", "Compare the spectra of two graphs");
  compare->add_option("graph1", ca.g1, "Graph JSON")->required();
  compare->add_option("graph2", ca.g2, "Graph JSON")->required();
  compare->add_option("--lambda-max", ca.lambda_max)->check(CLI::PositiveNumber);
  compare->add_option("--tol", ca.tol)->check(CLI::PositiveNumber);
  compare->add_option("--format", ca.format)->check(CLI::IsMember({"text", "json"}));
  compare->add_option("--out", common.out, "Output file (default stdout)");
  add_threads(compare, common);
  compare->callback([&] { action = [&] { return cmd_compare(ca, common, out, err); }; });

  TracesArgs ta;
  auto* traces = app.add_subcommand("traces", "Coupling power sums; with two graphs, their residuals");
  traces->add_option("graphs", ta.graphs, "One or two graph JSON files")->required()->expected(1, 2);
  traces->add_option("-m", ta.max_m, "Highest power")->check(CLI::PositiveNumber);
  traces->add_option("--out", common.out, "Output file (default stdout)");
  traces->callback([&] { action = [&] { return cmd_traces(ta, common, out); }; });

  SearchArgs se;
  auto* search = app.add_subcommand("search", "Search coupling rearrangements for isospectral partners");
  search->add_option("graph", se.graph, "Graph JSON")->required();
  search->add_option("--lambda-max", se.lambda_max)->check(CLI::PositiveNumber);
  search->add_option("--tol", se.tol)->check(CLI::PositiveNumber);
  search->add_option("--out", common.out, "Output file (default stdout)");
  add_threads(search, common);
  search->callback([&] { action = [&] { return cmd_search(se, common, out); }; });

  std::string ex_action, ex_name;
  auto* examples = app.add_subcommand("examples", "List or emit the built-in fixture graphs");
  examples->add_option("action", ex_action)->required()->check(CLI::IsMember({"list", "emit"}));
  examples->add_option("name", ex_name, "Fixture name for emit");
  examples->add_option("--out", common.out, "Output file (default stdout)");
  examples->callback([&] { action = [&] { return cmd_examples(ex_action, ex_name, common, out); }; });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsageError;
  }

  try {
    return action();
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kValidationError;
  }
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, out, err);
}

}  // namespace qgraph::cli
