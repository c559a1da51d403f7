#include "qgraph/graph_io.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "qgraph/error.hpp"

namespace qgraph {

namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

void require_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw Error(Errc::ParseError, where + " must be an object");
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.count(key)) throw Error(Errc::ParseError, where + ": unknown key '" + key + "'");
  }
  for (const auto& key : allowed) {
    if (!obj.contains(key)) throw Error(Errc::ParseError, where + ": missing key '" + key + "'");
  }
}

std::size_t parse_index(const json& v, const std::string& where) {
  if (!v.is_number_integer()) throw Error(Errc::ParseError, where + " must be an integer");
  const auto i = v.get<long long>();
  if (i < 0) throw Error(Errc::IndexOutOfRange, where + " is negative");
  return static_cast<std::size_t>(i);
}

}  // namespace

MarkedGraph parse_graph_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(Errc::ParseError, e.what());
  }
  require_keys(doc, {"vertices", "edges"}, "graph");
  if (!doc["vertices"].is_array()) throw Error(Errc::ParseError, "'vertices' must be an array");
  if (!doc["edges"].is_array()) throw Error(Errc::ParseError, "'edges' must be an array");

  std::vector<VertexType> types;
  std::vector<Coupling> couplings;
  for (std::size_t i = 0; i < doc["vertices"].size(); ++i) {
    const json& v = doc["vertices"][i];
    const std::string where = "vertices[" + std::to_string(i) + "]";
    require_keys(v, {"type", "alpha"}, where);
    const json& t = v["type"];
    if (t == "delta") {
      types.push_back(VertexType::Delta);
    } else if (t == "delta_prime") {
      types.push_back(VertexType::DeltaPrime);
    } else {
      throw Error(Errc::ParseError, where + ".type must be \"delta\" or \"delta_prime\"");
    }
    const json& a = v["alpha"];
    if (a.is_number()) {
      couplings.emplace_back(a.get<double>());
    } else if (a == "inf") {
      couplings.push_back(Coupling::infinite());
    } else {
      throw Error(Errc::ParseError, where + ".alpha must be a number or \"inf\"");
    }
  }

  std::vector<EdgeSpec> edges;
  for (std::size_t i = 0; i < doc["edges"].size(); ++i) {
    const json& e = doc["edges"][i];
    const std::string where = "edges[" + std::to_string(i) + "]";
    require_keys(e, {"from", "to", "length"}, where);
    if (!e["length"].is_number()) throw Error(Errc::ParseError, where + ".length must be a number");
    edges.push_back({parse_index(e["from"], where + ".from"), parse_index(e["to"], where + ".to"),
                     e["length"].get<double>()});
  }
  return build_graph(edges, types, couplings);
}

MarkedGraph load_graph(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::ParseError, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_graph_json(buf.str());
}

std::string to_json(const MarkedGraph& g) {
  ordered_json doc;
  doc["vertices"] = ordered_json::array();
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    ordered_json vertex;
    vertex["type"] = std::string(to_string(g.type(v)));
    const Coupling& c = g.coupling(v);
    if (c.is_infinite()) {
      vertex["alpha"] = "inf";
    } else {
      vertex["alpha"] = c.value();
    }
    doc["vertices"].push_back(std::move(vertex));
  }
  doc["edges"] = ordered_json::array();
  for (const Edge& e : g.edges()) {
    ordered_json edge;
    edge["from"] = e.left;
    edge["to"] = e.right;
    edge["length"] = e.length;
    doc["edges"].push_back(std::move(edge));
  }
  return doc.dump(2) + "\n";
}

void save_graph(const MarkedGraph& g, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::ParseError, "cannot write " + path.string());
  out << to_json(g);
}

}  // namespace qgraph
