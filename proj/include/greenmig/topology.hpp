// Copyright 2026 The greenmig Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GREENMIG_TOPOLOGY_HPP
#define GREENMIG_TOPOLOGY_HPP

#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace greenmig {

/// Nodes are numbered 1..node_count, matching the usual convention for the
/// reference topologies shipped under data/.
using NodeId = int;

struct Link {
  NodeId u = 0;
  NodeId v = 0;
  int id = 0;

  NodeId other(NodeId n) const { return n == u ? v : u; }
};

/// Undirected simple graph of optical switches. Immutable after
/// construction, so instances can be shared read-only across threads.
/// The constructor rejects self-loops and parallel links; connectivity is a
/// property of the shipped topologies and is enforced by load_topology().
class Graph {
 public:
  Graph(int node_count, const std::vector<std::pair<NodeId, NodeId>>& edges);

  int node_count() const { return node_count_; }
  int link_count() const { return static_cast<int>(links_.size()); }
  const Link& link(int id) const;
  const std::vector<Link>& links() const { return links_; }

  /// Link ids incident to n.
  const std::vector<int>& links_at(NodeId n) const;
  /// Neighbor node ids of n, ascending.
  const std::vector<NodeId>& neighbors(NodeId n) const;
  std::optional<int> link_between(NodeId a, NodeId b) const;

  bool is_connected() const;

 private:
  int node_count_;
  std::vector<Link> links_;
  std::vector<std::vector<int>> adjacency_;   // per node, link ids
  std::vector<std::vector<NodeId>> neighbors_;  // per node, ascending
};

/// The 14-node, 21-link NSFNET instance (same edge list as data/nsfnet.edges).
Graph build_nsfnet();

/// Reads a plain-text edge list ("u v" per line, 1-based ids, '#' comments)
/// and validates all graph invariants including connectivity.
Graph load_topology(const std::string& path);
Graph load_topology(std::istream& in);

/// Simple path: at least one hop, consecutive links share a node, no node
/// visited twice.
class Path {
 public:
  Path(const Graph& g, std::vector<NodeId> nodes);

  const std::vector<NodeId>& nodes() const { return nodes_; }
  const std::vector<int>& links() const { return links_; }
  int hops() const { return static_cast<int>(links_.size()); }
  NodeId source() const { return nodes_.front(); }
  NodeId destination() const { return nodes_.back(); }

  friend bool operator==(const Path& a, const Path& b) {
    return a.nodes_ == b.nodes_;
  }

 private:
  std::vector<NodeId> nodes_;
  std::vector<int> links_;
};

std::set<int> path_links(const Path& p);

/// Total order used everywhere paths are ranked: fewer hops first, then
/// lexicographically smaller node sequence.
bool path_order_less(const Path& a, const Path& b);

/// Up to k loopless paths from s to d, ordered by path_order_less. The
/// result is prefix-stable: the first k entries do not depend on how much
/// larger k gets. Returns an empty list when s and d are disconnected.
std::vector<Path> k_shortest_paths(const Graph& g, NodeId s, NodeId d, int k);

/// Every simple path from s to d, ordered by path_order_less. Throws if the
/// enumeration exceeds max_paths (guard for accidental use on large graphs).
std::vector<Path> all_simple_paths(const Graph& g, NodeId s, NodeId d,
                                   std::size_t max_paths = 1000000);

/// Precomputed routes over an immutable graph: hop-count shortest paths for
/// every node pair plus the k-shortest lists for the endpoint set that the
/// migration heuristics draw from. Read-only after construction.
class RoutingTable {
 public:
  RoutingTable(const Graph& g, const std::vector<NodeId>& endpoints, int k);

  const Graph& graph() const { return *graph_; }
  int k() const { return k_; }

  /// Lexicographically smallest hop-count shortest path; identical to
  /// k_shortest_paths(...)[0].
  Path shortest_path(NodeId s, NodeId d) const;

  /// Cached k-shortest list; s and d must be in the endpoint set.
  const std::vector<Path>& k_paths(NodeId s, NodeId d) const;

 private:
  const Graph* graph_;
  int k_;
  std::vector<std::vector<int>> dist_;  // dist_[d][v]: hops from v to d
  std::map<std::pair<NodeId, NodeId>, std::vector<Path>> k_paths_;
};

}  // namespace greenmig

#endif  // GREENMIG_TOPOLOGY_HPP
