#include "netdata.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace zlpcm {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

long long parse_weight(const std::string& tok, const std::string& context) {
  const std::string t = trim(tok);
  if (t.empty()) throw DataError("malformed cell (" + context + "): empty");
  std::size_t pos = 0;
  long long v;
  try {
    v = std::stoll(t, &pos);
  } catch (const std::exception&) {
    throw DataError("malformed cell (" + context + "): '" + t + "'");
  }
  if (pos != t.size())
    throw DataError("non-integer weight (" + context + "): '" + t + "'");
  if (v < 0) throw DataError("negative weight (" + context + "): " + t);
  return v;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(tok);
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

WeightedNetwork load_dense(const std::string& path, bool directed) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  std::vector<std::vector<long long>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    auto toks = split_csv(line);
    std::vector<long long> row;
    row.reserve(toks.size());
    for (std::size_t j = 0; j < toks.size(); ++j)
      row.push_back(parse_weight(toks[j], "row " + std::to_string(rows.size() + 1) +
                                              " col " + std::to_string(j + 1)));
    rows.push_back(std::move(row));
  }
  const int n = static_cast<int>(rows.size());
  if (n == 0) throw DataError("empty network file: " + path);
  WeightedNetwork net;
  net.n = n;
  net.directed = directed;
  net.y.assign(static_cast<std::size_t>(n) * n, 0);
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(rows[i].size()) != n)
      throw DataError("row " + std::to_string(i + 1) + " has " +
                      std::to_string(rows[i].size()) + " cells, expected " +
                      std::to_string(n));
    for (int j = 0; j < n; ++j) net.at(i, j) = rows[i][j];
  }
  return net;
}

WeightedNetwork load_edge_list(const std::string& path, bool directed) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw DataError("empty edge list: " + path);
  {
    auto header = split_csv(line);
    if (header.size() != 3 || trim(header[0]) != "src" || trim(header[1]) != "dst" ||
        trim(header[2]) != "weight")
      throw DataError("edge list must start with header src,dst,weight");
  }
  struct Edge {
    int src, dst;
    long long w;
  };
  std::vector<Edge> edges;
  int n = 0;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    auto toks = split_csv(line);
    if (toks.size() != 3)
      throw DataError("edge list line " + std::to_string(lineno) + ": expected 3 fields");
    const std::string ctx = "line " + std::to_string(lineno);
    long long src = parse_weight(toks[0], ctx);
    long long dst = parse_weight(toks[1], ctx);
    long long w = parse_weight(toks[2], ctx);
    if (src < 1 || dst < 1)
      throw DataError("edge list " + ctx + ": node indices are 1-based");
    edges.push_back({static_cast<int>(src) - 1, static_cast<int>(dst) - 1, w});
    n = std::max(n, static_cast<int>(std::max(src, dst)));
  }
  if (n == 0) throw DataError("edge list has no edges: " + path);
  WeightedNetwork net;
  net.n = n;
  net.directed = directed;
  net.y.assign(static_cast<std::size_t>(n) * n, 0);
  std::vector<bool> set(net.y.size(), false);
  for (const auto& e : edges) {
    auto put = [&](int i, int j, long long w) {
      std::size_t idx = static_cast<std::size_t>(i) * n + j;
      if (set[idx] && net.y[idx] != w)
        throw DataError("duplicate edge (" + std::to_string(i + 1) + "," +
                        std::to_string(j + 1) + ") with conflicting weights " +
                        std::to_string(net.y[idx]) + " vs " + std::to_string(w));
      net.y[idx] = w;
      set[idx] = true;
    };
    put(e.src, e.dst, e.w);
    if (!directed) put(e.dst, e.src, e.w);
  }
  return net;
}

}  // namespace

void validate_network(const WeightedNetwork& net) {
  const int n = net.n;
  if (n < 1) throw DataError("network must have at least one node");
  if (static_cast<std::size_t>(n) * n != net.y.size())
    throw DataError("adjacency storage size mismatch");
  for (int i = 0; i < n; ++i) {
    if (net.at(i, i) != 0)
      throw DataError("nonzero diagonal at node " + std::to_string(i + 1) +
                      " (self-loops are not allowed)");
    for (int j = 0; j < n; ++j) {
      if (net.at(i, j) < 0)
        throw DataError("negative weight at (" + std::to_string(i + 1) + "," +
                        std::to_string(j + 1) + ")");
      if (!net.directed && net.at(i, j) != net.at(j, i))
        throw DataError("undirected network is asymmetric at (" + std::to_string(i + 1) +
                        "," + std::to_string(j + 1) + ")");
    }
  }
  if (!net.node_labels.empty() && static_cast<int>(net.node_labels.size()) != n)
    throw DataError("node label count mismatch");
}

WeightedNetwork load_network(const std::string& path, NetworkFormat format, bool directed) {
  WeightedNetwork net = format == NetworkFormat::DenseCsv ? load_dense(path, directed)
                                                          : load_edge_list(path, directed);
  validate_network(net);
  return net;
}

NodeAttributes load_attributes(const std::string& path, int n) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  NodeAttributes attrs;
  std::string line;
  int row = 0;
  while (std::getline(in, line)) {
    const std::string tok = trim(line);
    if (tok.empty() && in.eof()) break;
    ++row;
    if (tok.empty())
      throw DataError("empty attribute token at row " + std::to_string(row));
    int level = 0;
    for (std::size_t l = 0; l < attrs.level_names.size(); ++l)
      if (attrs.level_names[l] == tok) {
        level = static_cast<int>(l) + 1;
        break;
      }
    if (level == 0) {
      attrs.level_names.push_back(tok);
      level = static_cast<int>(attrs.level_names.size());
    }
    attrs.c.push_back(level);
  }
  if (row != n)
    throw DataError("attribute file has " + std::to_string(row) + " rows, expected " +
                    std::to_string(n));
  attrs.C = static_cast<int>(attrs.level_names.size());
  return attrs;
}

void write_int_matrix(const std::string& path, const std::vector<long long>& m, int rows,
                      int cols) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open for write: " + path);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      if (j) out << ',';
      out << m[static_cast<std::size_t>(i) * cols + j];
    }
    out << '\n';
  }
  if (!out) throw DataError("write failed: " + path);
}

void write_real_matrix(const std::string& path, const std::vector<double>& m, int rows,
                       int cols) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open for write: " + path);
  char buf[64];
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      if (j) out << ',';
      std::snprintf(buf, sizeof(buf), "%.17g", m[static_cast<std::size_t>(i) * cols + j]);
      out << buf;
    }
    out << '\n';
  }
  if (!out) throw DataError("write failed: " + path);
}

void write_network(const std::string& path, const WeightedNetwork& net) {
  write_int_matrix(path, net.y, net.n, net.n);
}

std::vector<double> load_real_matrix(const std::string& path, int* rows, int* cols) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  std::vector<double> m;
  std::string line;
  int r = 0, c = -1;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    auto toks = split_csv(line);
    if (c == -1)
      c = static_cast<int>(toks.size());
    else if (static_cast<int>(toks.size()) != c)
      throw DataError("ragged matrix in " + path);
    for (const auto& t : toks) {
      try {
        m.push_back(std::stod(trim(t)));
      } catch (const std::exception&) {
        throw DataError("malformed cell in " + path + ": '" + t + "'");
      }
    }
    ++r;
  }
  *rows = r;
  *cols = c < 0 ? 0 : c;
  return m;
}

}  // namespace zlpcm
