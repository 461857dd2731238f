#include "lobstur/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace lobstur {

namespace {

[[noreturn]] void fail(const std::string& msg) {
  throw std::runtime_error(msg);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail("cannot open file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) fail("read error: " + path.string());
  return buf.str();
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' ||
                        s.front() == '\r'))
    s.remove_prefix(1);
  while (!s.empty() &&
         (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

long long parse_int(std::string_view tok, const std::filesystem::path& path) {
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || ptr != tok.data() + tok.size())
    fail("non-integer token '" + std::string(tok) + "' in " + path.string());
  return v;
}

double parse_double(std::string_view tok, const std::filesystem::path& path) {
  double v = 0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || ptr != tok.data() + tok.size())
    fail("non-numeric token '" + std::string(tok) + "' in " + path.string());
  return v;
}

}  // namespace

Graph make_graph(int n, std::vector<Edge> edges,
                 std::optional<Eigen::MatrixXd> features) {
  if (n < 0) throw std::invalid_argument("node count must be non-negative");
  for (auto& [u, v] : edges) {
    if (u < 0 || v < 0 || u >= n || v >= n)
      throw std::invalid_argument("edge endpoint outside [0, n)");
    if (u > v) std::swap(u, v);
  }
  std::erase_if(edges, [](const Edge& e) { return e.first == e.second; });
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  if (features) {
    if (features->rows() != n)
      throw std::invalid_argument("feature row count does not match n");
    if (features->cols() < 1)
      throw std::invalid_argument("feature matrix must have at least 1 column");
    if (!features->allFinite())
      throw std::invalid_argument("features contain non-finite values");
  }
  return Graph{n, std::move(edges), std::move(features)};
}

std::vector<std::vector<int>> adjacency_lists(const Graph& g) {
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(g.n));
  for (const auto& [u, v] : g.edges) {
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  for (auto& nbrs : adj) std::sort(nbrs.begin(), nbrs.end());
  return adj;
}

std::vector<int> degrees(const Graph& g) {
  std::vector<int> deg(static_cast<std::size_t>(g.n), 0);
  for (const auto& [u, v] : g.edges) {
    ++deg[u];
    ++deg[v];
  }
  return deg;
}

bool has_edge(const Graph& g, int u, int v) {
  if (u == v) return false;
  if (u > v) std::swap(u, v);
  return std::binary_search(g.edges.begin(), g.edges.end(), Edge{u, v});
}

Graph load_graph(const std::filesystem::path& edge_path,
                 const std::optional<std::filesystem::path>& feature_path) {
  const std::string text = read_file(edge_path);

  std::vector<Edge> edges;
  long long declared_n = -1;
  long long max_id = -1;

  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string::npos) eol = text.size();
    std::string_view line = trim(std::string_view(text).substr(pos, eol - pos));
    pos = eol + 1;
    if (line.empty()) continue;
    if (line.front() == '#') {
      // comment; "#n <count>" pins the node count
      std::string_view rest = line.substr(1);
      if (rest.substr(0, 1) == "n") {
        rest = trim(rest.substr(1));
        if (!rest.empty() && declared_n < 0) {
          declared_n = parse_int(rest, edge_path);
          if (declared_n < 0) fail("negative node count in " + edge_path.string());
        }
      }
      continue;
    }
    // split into whitespace-separated tokens
    std::vector<std::string_view> toks;
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
      std::size_t j = i;
      while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
      if (j > i) toks.push_back(line.substr(i, j - i));
      i = j;
    }
    if (toks.empty()) continue;
    if (toks.size() != 2)
      fail("expected 'u v' pair in " + edge_path.string());
    const long long u = parse_int(toks[0], edge_path);
    const long long v = parse_int(toks[1], edge_path);
    if (u < 0 || v < 0) fail("negative node id in " + edge_path.string());
    max_id = std::max({max_id, u, v});
    edges.emplace_back(static_cast<int>(u), static_cast<int>(v));
  }

  long long n = declared_n >= 0 ? declared_n : max_id + 1;

  std::optional<Eigen::MatrixXd> features;
  if (feature_path) {
    features = load_matrix(*feature_path);
    if (declared_n < 0) {
      if (features->rows() < max_id + 1)
        fail("feature row count smaller than highest node id + 1");
      n = features->rows();
    } else if (features->rows() != n) {
      fail("feature row count does not match declared node count");
    }
  }

  try {
    return make_graph(static_cast<int>(n), std::move(edges),
                      std::move(features));
  } catch (const std::invalid_argument& e) {
    fail(std::string(e.what()) + " while loading " + edge_path.string());
  }
}

void save_graph(const Graph& g, const std::filesystem::path& edge_path,
                const std::optional<std::filesystem::path>& feature_path) {
  std::ofstream out(edge_path, std::ios::binary);
  if (!out) fail("cannot open file for writing: " + edge_path.string());
  out << "#n " << g.n << "\n";
  for (const auto& [u, v] : g.edges) out << u << " " << v << "\n";
  out.flush();
  if (!out) fail("write error: " + edge_path.string());

  if (feature_path) {
    if (!g.has_features())
      fail("graph has no features to save: " + feature_path->string());
    save_matrix(*g.features, *feature_path);
  }
}

Eigen::MatrixXd load_matrix(const std::filesystem::path& path) {
  const std::string text = read_file(path);

  std::vector<double> values;
  long long rows = 0;
  long long cols = -1;

  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string::npos) eol = text.size();
    std::string_view line = trim(std::string_view(text).substr(pos, eol - pos));
    pos = eol + 1;
    if (line.empty()) continue;

    long long c = 0;
    std::size_t i = 0;
    for (;;) {
      std::size_t comma = line.find(',', i);
      std::string_view tok = trim(
          comma == std::string_view::npos ? line.substr(i)
                                          : line.substr(i, comma - i));
      const double v = parse_double(tok, path);
      if (!std::isfinite(v))
        fail("non-finite value in matrix file " + path.string());
      values.push_back(v);
      ++c;
      if (comma == std::string_view::npos) break;
      i = comma + 1;
    }
    if (cols < 0)
      cols = c;
    else if (c != cols)
      fail("inconsistent column count in " + path.string());
    ++rows;
  }

  Eigen::MatrixXd m(rows, cols < 0 ? 0 : cols);
  for (long long r = 0; r < rows; ++r)
    for (long long c = 0; c < cols; ++c) m(r, c) = values[r * cols + c];
  return m;
}

void save_matrix(const Eigen::Ref<const Eigen::MatrixXd>& m,
                 const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail("cannot open file for writing: " + path.string());
  char buf[64];
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      const auto res = std::to_chars(buf, buf + sizeof(buf), m(r, c),
                                     std::chars_format::general, 17);
      if (c) out.put(',');
      out.write(buf, res.ptr - buf);
    }
    out.put('\n');
  }
  out.flush();
  if (!out) fail("write error: " + path.string());
}

}  // namespace lobstur
