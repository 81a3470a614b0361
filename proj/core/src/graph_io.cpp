#include "ecm/graph_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>

#include "ecm/error.hpp"

namespace ecm {

NodeId NodeIndex::intern(std::string_view name) {
  auto [it, inserted] = ids_.try_emplace(std::string(name), static_cast<NodeId>(names_.size()));
  if (inserted) names_.emplace_back(name);
  return it->second;
}

std::optional<NodeId> NodeIndex::find(std::string_view name) const {
  auto it = ids_.find(std::string(name));
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\v' || c == '\f'; };
  while (i < line.size()) {
    while (i < line.size() && is_space(line[i])) ++i;
    const auto start = i;
    while (i < line.size() && !is_space(line[i])) ++i;
    if (i > start) fields.push_back(line.substr(start, i - start));
  }
  return fields;
}

NamedGraph read_edge_list(std::istream& in, const std::string& source_name) {
  NodeIndex index;
  std::vector<Edge> edges;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto fields = split_fields(line);
    if (fields.empty() || fields.front().front() == '#') continue;
    if (fields.size() < 2) {
      throw FormatError(source_name, line_no, "expected 'source target'");
    }
    const NodeId u = index.intern(fields[0]);
    const NodeId v = index.intern(fields[1]);
    edges.push_back({u, v});
  }
  if (in.bad()) throw DataError("read failure on " + source_name);

  NamedGraph out{DirectedGraph(index.size()), std::move(index)};
  for (const auto& e : edges) {
    if (e.source != e.target) out.graph.add_edge(e.source, e.target);
  }
  return out;
}

NamedGraph read_edge_list(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  return read_edge_list(in, path.string());
}

void write_edge_list(std::ostream& out, const DirectedGraph& g,
                     const std::vector<std::string>* names) {
  for (const auto& e : g.edges()) {
    if (names) {
      out << (*names)[e.source] << ' ' << (*names)[e.target] << '\n';
    } else {
      out << e.source << ' ' << e.target << '\n';
    }
  }
}

void write_node_map(std::ostream& out, const std::vector<std::string>& names) {
  out << "id,name\n";
  for (std::size_t i = 0; i < names.size(); ++i) out << i << ',' << names[i] << '\n';
}

}  // namespace ecm
