#include "gscat/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace gscat {

double statistics_factor(Statistics s) {
  switch (s) {
    case Statistics::Distinguishable:
      return 1.0;
    case Statistics::Boson:
      return std::sqrt(2.0);
    case Statistics::Fermion:
      return 0.0;
  }
  return 0.0;
}

const char* to_string(Statistics s) {
  switch (s) {
    case Statistics::Distinguishable:
      return "distinguishable";
    case Statistics::Boson:
      return "boson";
    case Statistics::Fermion:
      return "fermion";
  }
  return "?";
}

Statistics parse_statistics(const std::string& s) {
  if (s == "distinguishable" || s == "D" || s == "dist") return Statistics::Distinguishable;
  if (s == "boson" || s == "B" || s == "bosons") return Statistics::Boson;
  if (s == "fermion" || s == "F" || s == "fermions") return Statistics::Fermion;
  throw DomainError("unknown statistics '" + s + "'");
}

Graph::Graph(std::string name, RMatrix adjacency, int n_boundary)
    : name_(std::move(name)), adjacency_(std::move(adjacency)), n_boundary_(n_boundary) {
  const auto n = adjacency_.rows();
  if (adjacency_.cols() != n) throw GraphError("adjacency matrix must be square");
  if (n_boundary_ < 1 || n_boundary_ > n) throw GraphError("invalid boundary vertex count");
  for (Eigen::Index i = 0; i < n; ++i) {
    if (adjacency_(i, i) != 0.0) throw GraphError("self-loop at vertex " + std::to_string(i + 1));
    for (Eigen::Index j = 0; j < n; ++j) {
      const double a = adjacency_(i, j);
      if (a != 0.0 && a != 1.0) throw GraphError("adjacency entries must be 0 or 1");
      if (a != adjacency_(j, i)) throw GraphError("adjacency matrix must be symmetric");
    }
  }
}

RMatrix Graph::internal_projector() const {
  RMatrix p = RMatrix::Zero(n_vertices(), n_vertices());
  for (int i = n_boundary_; i < n_vertices(); ++i) p(i, i) = 1.0;
  return p;
}

std::vector<std::pair<int, int>> Graph::edges() const {
  std::vector<std::pair<int, int>> out;
  for (int i = 0; i < n_vertices(); ++i)
    for (int j = i + 1; j < n_vertices(); ++j)
      if (adjacency_(i, j) != 0.0) out.emplace_back(i + 1, j + 1);
  return out;
}

Graph build_graph(const std::vector<std::pair<int, int>>& edges, const std::vector<int>& boundary,
                  std::string name, int n_vertices) {
  int n = n_vertices;
  if (n == 0) {
    for (const auto& [u, v] : edges) n = std::max({n, u, v});
    for (int b : boundary) n = std::max(n, b);
  }
  if (boundary.empty()) throw GraphError("graph needs at least one boundary vertex");

  std::set<int> seen;
  for (int b : boundary) {
    if (b < 1 || b > n) throw GraphError("boundary vertex " + std::to_string(b) + " not in vertex set");
    if (!seen.insert(b).second) throw GraphError("boundary vertex " + std::to_string(b) + " repeated");
  }

  // Relabel: boundary vertices first in rail order, then the rest ascending.
  std::vector<int> slot(n + 1, -1);
  int next = 0;
  for (int b : boundary) slot[b] = next++;
  for (int v = 1; v <= n; ++v)
    if (slot[v] < 0) slot[v] = next++;

  RMatrix adj = RMatrix::Zero(n, n);
  for (const auto& [u, v] : edges) {
    if (u < 1 || u > n || v < 1 || v > n)
      throw GraphError("edge (" + std::to_string(u) + "," + std::to_string(v) +
                       ") references an undeclared vertex");
    if (u == v) throw GraphError("self-loop at vertex " + std::to_string(u));
    const int a = slot[u], b = slot[v];
    if (adj(a, b) != 0.0)
      throw GraphError("duplicate edge (" + std::to_string(u) + "," + std::to_string(v) + ")");
    adj(a, b) = adj(b, a) = 1.0;
  }
  return Graph(std::move(name), std::move(adj), static_cast<int>(boundary.size()));
}

std::string FamilySpec::to_string() const {
  switch (family) {
    case Family::Line:
      return "Line:" + std::to_string(n);
    case Family::AL:
      return "AL:" + std::to_string(n);
    case Family::AC:
      return "AC:" + std::to_string(n);
    case Family::AC2:
      return "AC2:" + std::to_string(n);
    case Family::Cycle:
      return "C:" + std::to_string(n) + ":" + std::to_string(l);
  }
  return "?";
}

FamilySpec parse_family(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  auto to_int = [&](const std::string& s) {
    try {
      size_t pos = 0;
      int v = std::stoi(s, &pos);
      if (pos != s.size()) throw std::invalid_argument("trailing");
      return v;
    } catch (const std::exception&) {
      throw DomainError("bad family size '" + s + "' in '" + text + "'");
    }
  };
  if (parts.empty()) throw DomainError("empty family spec");
  FamilySpec spec;
  const std::string& f = parts[0];
  if (f == "C" || f == "Cycle") {
    if (parts.size() != 3) throw DomainError("cycle family needs C:N:L, got '" + text + "'");
    spec.family = Family::Cycle;
    spec.n = to_int(parts[1]);
    spec.l = to_int(parts[2]);
    return spec;
  }
  if (parts.size() != 2) throw DomainError("family needs NAME:N, got '" + text + "'");
  if (f == "Line") spec.family = Family::Line;
  else if (f == "AL") spec.family = Family::AL;
  else if (f == "AC") spec.family = Family::AC;
  else if (f == "AC2") spec.family = Family::AC2;
  else throw DomainError("unknown graph family '" + f + "'");
  spec.n = to_int(parts[1]);
  return spec;
}

Graph make_family(const FamilySpec& spec) {
  std::vector<std::pair<int, int>> e;
  const int n = spec.n;
  const std::string name = spec.to_string();
  switch (spec.family) {
    case Family::Line: {
      if (n < 0) throw DomainError("Line(N) requires N >= 0");
      // 1 - 3 - 4 - ... - (n+2) - 2
      int prev = 1;
      for (int v = 3; v <= n + 2; ++v) {
        e.emplace_back(prev, v);
        prev = v;
      }
      e.emplace_back(prev, 2);
      return build_graph(e, {1, 2}, name, n + 2);
    }
    case Family::AL: {
      if (n < 2) throw DomainError("AL(N) requires N >= 2");
      e = {{1, 3}, {2, 3}};
      for (int v = 3; v < n + 2; ++v) e.emplace_back(v, v + 1);
      return build_graph(e, {1, 2}, name, n + 2);
    }
    case Family::AC: {
      if (n < 3) throw DomainError("AC(N) requires N >= 3");
      e = {{1, 3}, {2, 3}};
      for (int v = 3; v < n + 2; ++v) e.emplace_back(v, v + 1);
      e.emplace_back(n + 2, 3);
      return build_graph(e, {1, 2}, name, n + 2);
    }
    case Family::AC2: {
      if (n < 3) throw DomainError("AC2(N) requires N >= 3");
      e = {{1, 3}, {2, 3}, {3, 4}};
      for (int v = 4; v < n + 3; ++v) e.emplace_back(v, v + 1);
      e.emplace_back(n + 3, 4);
      return build_graph(e, {1, 2}, name, n + 3);
    }
    case Family::Cycle: {
      const int l = spec.l;
      if (n < 4) throw DomainError("C(N,L) requires N >= 4");
      if (l < 2 || l > n / 2)
        throw DomainError("C(N,L) requires 2 <= L <= floor(N/2), got " + name);
      // Cycle positions 0..n-1; position 0 -> vertex 1, position l -> vertex 2.
      std::vector<int> label(n);
      int next = 3;
      for (int pos = 0; pos < n; ++pos) {
        if (pos == 0) label[pos] = 1;
        else if (pos == l) label[pos] = 2;
        else label[pos] = next++;
      }
      for (int pos = 0; pos < n; ++pos) e.emplace_back(label[pos], label[(pos + 1) % n]);
      return build_graph(e, {1, 2}, name, n);
    }
  }
  throw DomainError("unknown family");
}

const char* to_string(ChainCondition c) {
  switch (c) {
    case ChainCondition::Holds:
      return "holds";
    case ChainCondition::Fails:
      return "fails";
    case ChainCondition::EdgeBetweenBoundary:
      return "edge_between_boundary";
  }
  return "?";
}

ChainCondition chain_condition(const Graph& g) {
  if (g.n_boundary() != 2)
    throw DomainError("chain condition is defined for exactly two rails, graph has " +
                      std::to_string(g.n_boundary()));
  const RMatrix& h = g.adjacency();
  if (h(0, 1) != 0.0) return ChainCondition::EdgeBetweenBoundary;
  const double d1 = h.row(0).sum();
  const double d2 = h.row(1).sum();
  const double p12 = (h * h)(0, 1);
  const double c = (d1 - 1.0) * (d2 - 1.0) - p12 * p12;
  return c != 0.0 ? ChainCondition::Holds : ChainCondition::Fails;
}

namespace {

std::string strip(const std::string& s) {
  auto hash = s.find('#');
  std::string t = s.substr(0, hash);
  const auto b = t.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = t.find_last_not_of(" \t\r");
  return t.substr(b, e - b + 1);
}

[[noreturn]] void parse_fail(int line, const std::string& msg) {
  throw GraphError("graph file line " + std::to_string(line) + ": " + msg);
}

}  // namespace

Graph parse_graph(const std::string& text) {
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  bool have_header = false, have_boundary = false;
  std::string name;
  int n_b = 0, n_m = 0;
  std::vector<std::pair<int, int>> edges;
  std::vector<int> boundary;

  while (std::getline(in, raw)) {
    ++lineno;
    const std::string line = strip(raw);
    if (line.empty()) continue;
    if (have_boundary) parse_fail(lineno, "unexpected content after boundary line");
    std::istringstream ls(line);
    if (!have_header) {
      std::string kw;
      ls >> kw;
      if (kw != "graph") parse_fail(lineno, "expected header 'graph <name> <N> <M>'");
      if (!(ls >> name >> n_b >> n_m)) parse_fail(lineno, "malformed header");
      std::string extra;
      if (ls >> extra) parse_fail(lineno, "trailing garbage in header");
      if (n_b < 1 || n_m < 0) parse_fail(lineno, "invalid vertex counts");
      have_header = true;
      continue;
    }
    if (line.rfind("boundary:", 0) == 0) {
      std::istringstream bs(line.substr(9));
      std::string tok;
      while (bs >> tok) {
        try {
          size_t pos = 0;
          int v = std::stoi(tok, &pos);
          if (pos != tok.size()) throw std::invalid_argument(tok);
          boundary.push_back(v);
        } catch (const std::exception&) {
          parse_fail(lineno, "bad boundary vertex '" + tok + "'");
        }
      }
      if (static_cast<int>(boundary.size()) != n_b)
        parse_fail(lineno, "boundary lists " + std::to_string(boundary.size()) +
                               " vertices, header declares " + std::to_string(n_b));
      have_boundary = true;
      continue;
    }
    int u = 0, v = 0;
    std::string extra;
    if (!(ls >> u >> v) || (ls >> extra)) parse_fail(lineno, "expected edge 'u v'");
    edges.emplace_back(u, v);
  }
  if (!have_header) throw GraphError("graph file: missing header");
  if (!have_boundary) throw GraphError("graph file: missing boundary line");
  try {
    return build_graph(edges, boundary, name, n_b + n_m);
  } catch (const GraphError& e) {
    throw GraphError(std::string("graph file: ") + e.what());
  }
}

Graph read_graph_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw GraphError("cannot open graph file '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_graph(ss.str());
}

std::string format_graph(const Graph& g) {
  std::ostringstream out;
  out << "graph " << g.name() << " " << g.n_boundary() << " " << g.n_internal() << "\n";
  for (const auto& [u, v] : g.edges()) out << u << " " << v << "\n";
  out << "boundary:";
  for (int i = 1; i <= g.n_boundary(); ++i) out << " " << i;
  out << "\n";
  return out.str();
}

}  // namespace gscat
