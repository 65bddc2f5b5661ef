#include "rotorcut/graph.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "rotorcut/rng.hpp"

namespace rotorcut {

namespace {

std::pair<int, int> ordered(int i, int j) { return {std::min(i, j), std::max(i, j)}; }

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
    std::size_t end = pos;
    while (end < line.size() && !std::isspace(static_cast<unsigned char>(line[end]))) ++end;
    if (end > pos) fields.push_back(line.substr(pos, end - pos));
    pos = end;
  }
  return fields;
}

template <typename T>
bool parse_number(std::string_view field, T& out) {
  const char* first = field.data();
  const char* last = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

}  // namespace

Graph::Graph(int n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)) {
  if (n_ < 2) throw std::invalid_argument("graph needs at least 2 vertices");
  adjacency_.resize(n_);
  std::set<std::pair<int, int>> seen;
  for (const Edge& e : edges_) {
    if (e.i < 0 || e.i >= n_ || e.j < 0 || e.j >= n_)
      throw std::invalid_argument("edge endpoint out of range");
    if (e.i == e.j) throw std::invalid_argument("self-loop");
    if (!std::isfinite(e.w)) throw std::invalid_argument("non-finite edge weight");
    if (!seen.insert(ordered(e.i, e.j)).second) throw std::invalid_argument("duplicate edge");
    adjacency_[e.i].emplace_back(e.j, e.w);
    adjacency_[e.j].emplace_back(e.i, e.w);
  }
}

double Graph::weight(int i, int j) const {
  for (const auto& [v, w] : adjacency_.at(i))
    if (v == j) return w;
  return 0.0;
}

double Graph::total_weight() const {
  double sum = 0.0;
  for (const Edge& e : edges_) sum += e.w;
  return sum;
}

double Graph::density() const {
  const double pairs = 0.5 * static_cast<double>(n_) * (n_ - 1);
  return static_cast<double>(edges_.size()) / pairs;
}

Graph parse_edge_list(std::string_view text) {
  std::vector<std::pair<int, std::string_view>> lines;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    ++line_no;
    std::string_view line = text.substr(pos, end - pos);
    if (!split_fields(line).empty()) lines.emplace_back(line_no, line);
    pos = end + 1;
  }
  if (lines.empty()) throw ParseError(ParseErrorKind::malformed_line, 0, "empty edge list");

  const auto header = split_fields(lines.front().second);
  int n = 0;
  long long m = 0;
  if (header.size() != 2 || !parse_number(header[0], n) || !parse_number(header[1], m) || m < 0)
    throw ParseError(ParseErrorKind::malformed_line, lines.front().first,
                     "header must be \"n m\"");
  if (n < 2)
    throw ParseError(ParseErrorKind::too_few_vertices, lines.front().first,
                     "graph needs at least 2 vertices");
  if (static_cast<long long>(lines.size()) - 1 != m)
    throw ParseError(ParseErrorKind::edge_count_mismatch, lines.back().first,
                     "header declares " + std::to_string(m) + " edges, found " +
                         std::to_string(lines.size() - 1));

  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(m));
  std::set<std::pair<int, int>> seen;
  for (std::size_t k = 1; k < lines.size(); ++k) {
    const auto [no, line] = lines[k];
    const auto f = split_fields(line);
    Edge e;
    if (f.size() != 3 || !parse_number(f[0], e.i) || !parse_number(f[1], e.j) ||
        !parse_number(f[2], e.w) || !std::isfinite(e.w))
      throw ParseError(ParseErrorKind::malformed_line, no, "expected \"i j w\"");
    if (e.i < 1 || e.i > n || e.j < 1 || e.j > n)
      throw ParseError(ParseErrorKind::index_out_of_range, no, "vertex index out of range");
    if (e.i == e.j) throw ParseError(ParseErrorKind::self_loop, no, "self-loop");
    --e.i;
    --e.j;
    if (!seen.insert(ordered(e.i, e.j)).second)
      throw ParseError(ParseErrorKind::duplicate_edge, no, "duplicate edge");
    edges.push_back(e);
  }
  return Graph(n, std::move(edges));
}

Graph read_edge_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open graph file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_edge_list(buffer.str());
}

std::string serialize_edge_list(const Graph& g) {
  std::ostringstream out;
  out << g.num_vertices() << ' ' << g.num_edges() << '\n';
  out << std::setprecision(17);
  for (const Edge& e : g.edges()) out << e.i + 1 << ' ' << e.j + 1 << ' ' << e.w << '\n';
  return out.str();
}

void write_edge_list(const Graph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write graph file: " + path);
  out << serialize_edge_list(g);
  if (!out) throw std::runtime_error("write failed: " + path);
}

Graph generate_graph(int n, std::int64_t num_edges, WeightMode mode, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("generate_graph: n must be at least 2");
  const std::int64_t max_edges = static_cast<std::int64_t>(n) * (n - 1) / 2;
  if (num_edges < 0 || num_edges > max_edges)
    throw std::invalid_argument("generate_graph: edge count exceeds n(n-1)/2");
  if (mode.random && !(mode.lo < mode.hi))
    throw std::invalid_argument("generate_graph: weight range must satisfy lo < hi");

  Rng rng(seed);
  std::set<std::pair<int, int>> chosen;
  while (static_cast<std::int64_t>(chosen.size()) < num_edges) {
    const int i = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
    const int j = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
    if (i == j) continue;
    chosen.insert(ordered(i, j));
  }

  std::vector<Edge> edges;
  edges.reserve(chosen.size());
  for (const auto& [i, j] : chosen) {
    const double w = mode.random ? mode.lo + (mode.hi - mode.lo) * rng.uniform_open() : 1.0;
    edges.push_back({i, j, w});
  }
  return Graph(n, std::move(edges));
}

double cut_value(const Graph& g, const CutAssignment& x) {
  if (static_cast<int>(x.size()) != g.num_vertices())
    throw std::invalid_argument("cut_value: assignment length does not match vertex count");
  double value = 0.0;
  for (const Edge& e : g.edges())
    if (x[e.i] != x[e.j]) value += e.w;
  return value;
}

MaxCutResult brute_force_max_cut(const Graph& g) {
  const int n = g.num_vertices();
  if (n > kBruteForceMaxVertices)
    throw std::invalid_argument("brute_force_max_cut: at most " +
                                std::to_string(kBruteForceMaxVertices) + " vertices");

  // Gray-code walk over vertices 1..n-1; vertex 0 stays on the +1 side.
  CutAssignment x(n, 1);
  CutAssignment best = x;
  double current = 0.0;
  double best_value = 0.0;
  const std::uint64_t count = std::uint64_t{1} << (n - 1);
  for (std::uint64_t k = 1; k < count; ++k) {
    const int v = std::countr_zero(k) + 1;
    double delta = 0.0;
    for (const auto& [u, w] : g.neighbours(v)) delta += x[u] == x[v] ? w : -w;
    x[v] = -x[v];
    current += delta;
    if (current > best_value) {
      best_value = current;
      best = x;
    }
  }
  return {cut_value(g, best), best};
}

}  // namespace rotorcut
