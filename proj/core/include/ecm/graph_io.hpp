#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ecm/graph.hpp"

namespace ecm {

/// Bidirectional mapping between external string ids and dense NodeIds,
/// assigned in order of first appearance.
class NodeIndex {
 public:
  NodeId intern(std::string_view name);
  std::optional<NodeId> find(std::string_view name) const;
  const std::string& name(NodeId id) const { return names_[id]; }
  const std::vector<std::string>& names() const noexcept { return names_; }
  std::size_t size() const noexcept { return names_.size(); }

 private:
  std::unordered_map<std::string, NodeId> ids_;
  std::vector<std::string> names_;
};

struct NamedGraph {
  DirectedGraph graph;
  NodeIndex index;
};

/// Whitespace-separated "source target [ignored...]" lines. Blank lines and
/// lines starting with '#' are skipped; self-loops and repeated edges are
/// dropped so the result is a simple graph.
NamedGraph read_edge_list(std::istream& in, const std::string& source_name);
NamedGraph read_edge_list(const std::filesystem::path& path);

/// Writes "source target" lines in sorted edge order. With `names`, ids are
/// written through the mapping instead of as integers.
void write_edge_list(std::ostream& out, const DirectedGraph& g,
                     const std::vector<std::string>* names = nullptr);

/// "id,name" rows for the dense-id mapping.
void write_node_map(std::ostream& out, const std::vector<std::string>& names);

/// Splits a line on ASCII whitespace.
std::vector<std::string_view> split_fields(std::string_view line);

}  // namespace ecm
