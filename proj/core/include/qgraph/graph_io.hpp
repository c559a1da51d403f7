#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "qgraph/graph.hpp"

namespace qgraph {

// Graph config format:
//
//   { "vertices": [ {"type": "delta"|"delta_prime", "alpha": number|"inf"}, ... ],
//     "edges":    [ {"from": int, "to": int, "length": number}, ... ] }
//
// Vertices are indexed from 0 in file order. Unknown keys are rejected.

/// Throws Errc::ParseError for malformed documents, then whatever build_graph raises.
MarkedGraph parse_graph_json(std::string_view text);
MarkedGraph load_graph(const std::filesystem::path& path);

/// Canonical serialization: fixed key order, shortest round-trip numbers,
/// two-space indentation, trailing newline.
std::string to_json(const MarkedGraph& g);
void save_graph(const MarkedGraph& g, const std::filesystem::path& path);

}  // namespace qgraph
