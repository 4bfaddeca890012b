#pragma once

#include <string>
#include <utility>
#include <vector>

#include "gscat/types.hpp"

namespace gscat {

// Finite scattering center with rails attached to vertices 1..N.
//
// Vertices are labelled 1..N+M; the first N are boundary vertices (rail n is
// attached to vertex n), the remaining M are internal. The adjacency matrix is
// stored in block form
//
//     H_G = [ A  B^T ]
//           [ B  D   ]
//
// with A: NxN, B: MxN, D: MxM. Instances are immutable.
class Graph {
 public:
  Graph(std::string name, RMatrix adjacency, int n_boundary);

  const std::string& name() const { return name_; }
  int n_boundary() const { return n_boundary_; }
  int n_internal() const { return static_cast<int>(adjacency_.rows()) - n_boundary_; }
  int n_vertices() const { return static_cast<int>(adjacency_.rows()); }

  const RMatrix& adjacency() const { return adjacency_; }
  RMatrix block_a() const { return adjacency_.topLeftCorner(n_boundary_, n_boundary_); }
  RMatrix block_b() const {
    return adjacency_.bottomLeftCorner(n_internal(), n_boundary_);
  }
  RMatrix block_d() const {
    return adjacency_.bottomRightCorner(n_internal(), n_internal());
  }
  // Diagonal projector onto the internal vertices.
  RMatrix internal_projector() const;

  // Edge list with 1-based labels, u < v, lexicographically sorted.
  std::vector<std::pair<int, int>> edges() const;

  bool operator==(const Graph& other) const {
    return n_boundary_ == other.n_boundary_ && adjacency_ == other.adjacency_;
  }

 private:
  std::string name_;
  RMatrix adjacency_;
  int n_boundary_;
};

// Builds a graph from 1-based edges. `boundary` lists the rail vertices in
// rail order; remaining vertices become internal in increasing label order.
// `n_vertices` = 0 infers the vertex count from the edges and boundary.
Graph build_graph(const std::vector<std::pair<int, int>>& edges,
                  const std::vector<int>& boundary, std::string name = "graph",
                  int n_vertices = 0);

enum class Family { Line, AL, AC, AC2, Cycle };

struct FamilySpec {
  Family family = Family::Line;
  int n = 0;  // interaction-vertex count, or total vertex count for Cycle
  int l = 0;  // Cycle only: boundary separation

  std::string to_string() const;  // "C:10:5", "AC:4", ...
};

// Parses "Line:7", "AL:21", "AC:4", "AC2:6", "C:10:5" (also "Cycle:10:5").
FamilySpec parse_family(const std::string& text);

Graph make_family(const FamilySpec& spec);

enum class ChainCondition { Holds, Fails, EdgeBetweenBoundary };

const char* to_string(ChainCondition c);

// (d1-1)(d2-1) - p12^2 != 0 for a two-rail graph.
ChainCondition chain_condition(const Graph& g);

// Text format:
//   graph <name> <N> <M>
//   u v            (one edge per line)
//   boundary: 1 2 ... N
// '#' starts a comment. Anything after the boundary line is rejected.
Graph parse_graph(const std::string& text);
Graph read_graph_file(const std::string& path);
std::string format_graph(const Graph& g);

}  // namespace gscat
