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

#include "greenmig/topology.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <istream>
#include <sstream>
#include <stdexcept>

namespace greenmig {

namespace {

void check_node(int node_count, NodeId n, const char* what) {
  if (n < 1 || n > node_count) {
    throw std::invalid_argument(std::string(what) + ": node id " +
                                std::to_string(n) + " out of range 1.." +
                                std::to_string(node_count));
  }
}

}  // namespace

Graph::Graph(int node_count,
             const std::vector<std::pair<NodeId, NodeId>>& edges)
    : node_count_(node_count) {
  if (node_count < 1) throw std::invalid_argument("Graph: empty node set");
  adjacency_.assign(node_count + 1, {});
  neighbors_.assign(node_count + 1, {});
  std::set<std::pair<NodeId, NodeId>> seen;
  for (const auto& [a, b] : edges) {
    check_node(node_count_, a, "Graph");
    check_node(node_count_, b, "Graph");
    if (a == b) throw std::invalid_argument("Graph: self-loop at node " +
                                            std::to_string(a));
    auto key = std::minmax(a, b);
    if (!seen.insert(key).second) {
      throw std::invalid_argument("Graph: parallel link " +
                                  std::to_string(a) + "-" + std::to_string(b));
    }
    const int id = static_cast<int>(links_.size());
    links_.push_back(Link{key.first, key.second, id});
    adjacency_[a].push_back(id);
    adjacency_[b].push_back(id);
    neighbors_[a].push_back(b);
    neighbors_[b].push_back(a);
  }
  for (auto& nb : neighbors_) std::sort(nb.begin(), nb.end());
}

const Link& Graph::link(int id) const {
  if (id < 0 || id >= link_count()) {
    throw std::invalid_argument("Graph: bad link id " + std::to_string(id));
  }
  return links_[id];
}

const std::vector<int>& Graph::links_at(NodeId n) const {
  check_node(node_count_, n, "links_at");
  return adjacency_[n];
}

const std::vector<NodeId>& Graph::neighbors(NodeId n) const {
  check_node(node_count_, n, "neighbors");
  return neighbors_[n];
}

std::optional<int> Graph::link_between(NodeId a, NodeId b) const {
  check_node(node_count_, a, "link_between");
  check_node(node_count_, b, "link_between");
  for (int id : adjacency_[a]) {
    if (links_[id].other(a) == b) return id;
  }
  return std::nullopt;
}

bool Graph::is_connected() const {
  std::vector<char> seen(node_count_ + 1, 0);
  std::deque<NodeId> queue{1};
  seen[1] = 1;
  int reached = 1;
  while (!queue.empty()) {
    NodeId n = queue.front();
    queue.pop_front();
    for (NodeId nb : neighbors_[n]) {
      if (!seen[nb]) {
        seen[nb] = 1;
        ++reached;
        queue.push_back(nb);
      }
    }
  }
  return reached == node_count_;
}

Graph build_nsfnet() {
  static const std::vector<std::pair<NodeId, NodeId>> kEdges = {
      {1, 2},  {1, 3},  {1, 8},  {2, 3},   {2, 4},   {3, 6},   {4, 5},
      {4, 11}, {5, 6},  {5, 7},  {6, 10},  {6, 13},  {7, 8},   {8, 9},
      {9, 10}, {9, 12}, {9, 14}, {11, 12}, {11, 14}, {12, 13}, {13, 14}};
  return Graph(14, kEdges);
}

Graph load_topology(std::istream& in) {
  std::vector<std::pair<NodeId, NodeId>> edges;
  int max_node = 0;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    NodeId a = 0, b = 0;
    if (!(ls >> a)) continue;  // blank line
    if (!(ls >> b)) {
      throw std::runtime_error("topology line " + std::to_string(line_no) +
                               ": expected 'u v'");
    }
    edges.emplace_back(a, b);
    max_node = std::max({max_node, a, b});
  }
  if (edges.empty()) throw std::runtime_error("topology: no edges");
  Graph g(max_node, edges);
  if (!g.is_connected()) throw std::runtime_error("topology: not connected");
  return g;
}

Graph load_topology(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("topology: cannot open " + path);
  return load_topology(in);
}

Path::Path(const Graph& g, std::vector<NodeId> nodes)
    : nodes_(std::move(nodes)) {
  if (nodes_.size() < 2) {
    throw std::invalid_argument("Path: needs at least two nodes");
  }
  std::set<NodeId> uniq(nodes_.begin(), nodes_.end());
  if (uniq.size() != nodes_.size()) {
    throw std::invalid_argument("Path: repeated node");
  }
  links_.reserve(nodes_.size() - 1);
  for (std::size_t i = 0; i + 1 < nodes_.size(); ++i) {
    auto id = g.link_between(nodes_[i], nodes_[i + 1]);
    if (!id) {
      throw std::invalid_argument("Path: nodes " + std::to_string(nodes_[i]) +
                                  " and " + std::to_string(nodes_[i + 1]) +
                                  " are not adjacent");
    }
    links_.push_back(*id);
  }
}

std::set<int> path_links(const Path& p) {
  return std::set<int>(p.links().begin(), p.links().end());
}

bool path_order_less(const Path& a, const Path& b) {
  if (a.hops() != b.hops()) return a.hops() < b.hops();
  return a.nodes() < b.nodes();
}

namespace {

// Node sequence of the lexicographically smallest hop-count shortest path
// from s to d, avoiding banned nodes/links. Works on the distance-to-d
// field: from s, repeatedly step to the smallest neighbor that strictly
// decreases the remaining distance.
std::optional<std::vector<NodeId>> shortest_lex(const Graph& g, NodeId s,
                                                NodeId d,
                                                const std::vector<char>& node_banned,
                                                const std::vector<char>& link_banned) {
  const int n = g.node_count();
  std::vector<int> dist(n + 1, -1);
  std::deque<NodeId> queue{d};
  dist[d] = 0;
  while (!queue.empty()) {
    NodeId cur = queue.front();
    queue.pop_front();
    for (int lid : g.links_at(cur)) {
      if (link_banned[lid]) continue;
      NodeId nb = g.link(lid).other(cur);
      if (node_banned[nb] || dist[nb] >= 0) continue;
      dist[nb] = dist[cur] + 1;
      queue.push_back(nb);
    }
  }
  if (s != d && dist[s] < 0) return std::nullopt;
  std::vector<NodeId> nodes{s};
  NodeId cur = s;
  while (cur != d) {
    NodeId next = 0;
    for (NodeId nb : g.neighbors(cur)) {  // ascending, so first hit is lex-min
      if (node_banned[nb]) continue;
      int lid = *g.link_between(cur, nb);
      if (link_banned[lid]) continue;
      if (dist[nb] == dist[cur] - 1) {
        next = nb;
        break;
      }
    }
    nodes.push_back(next);
    cur = next;
  }
  return nodes;
}

struct NodeSeqLess {
  bool operator()(const std::vector<NodeId>& a,
                  const std::vector<NodeId>& b) const {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  }
};

}  // namespace

// Yen's loopless k-shortest-paths with hop-count metric. Ties are resolved
// by the lexicographic node-sequence order at every step (both in the spur
// searches and in the candidate pool), which makes the enumeration a stable
// prefix of the total path order.
std::vector<Path> k_shortest_paths(const Graph& g, NodeId s, NodeId d, int k) {
  if (s == d) throw std::invalid_argument("k_shortest_paths: s == d");
  if (k < 1) throw std::invalid_argument("k_shortest_paths: k < 1");
  const int n = g.node_count();
  std::vector<char> no_node(n + 1, 0), no_link(g.link_count(), 0);

  std::vector<std::vector<NodeId>> found;
  std::set<std::vector<NodeId>, NodeSeqLess> candidates;
  std::set<std::vector<NodeId>> member;  // fast "already in found" test

  auto first = shortest_lex(g, s, d, no_node, no_link);
  if (!first) return {};
  found.push_back(*first);
  member.insert(*first);

  while (static_cast<int>(found.size()) < k) {
    const std::vector<NodeId>& prev = found.back();
    for (std::size_t i = 0; i + 1 < prev.size(); ++i) {
      const NodeId spur = prev[i];
      std::vector<NodeId> root(prev.begin(), prev.begin() + i + 1);

      std::vector<char> node_banned(n + 1, 0), link_banned(g.link_count(), 0);
      for (const auto& p : found) {
        if (p.size() > i &&
            std::equal(root.begin(), root.end(), p.begin())) {
          if (p.size() > i + 1) {
            link_banned[*g.link_between(p[i], p[i + 1])] = 1;
          }
        }
      }
      for (std::size_t j = 0; j < i; ++j) node_banned[root[j]] = 1;

      auto spur_nodes = shortest_lex(g, spur, d, node_banned, link_banned);
      if (!spur_nodes) continue;
      std::vector<NodeId> cand(root.begin(), root.end() - 1);
      cand.insert(cand.end(), spur_nodes->begin(), spur_nodes->end());
      if (!member.count(cand)) candidates.insert(std::move(cand));
    }
    if (candidates.empty()) break;
    auto best = *candidates.begin();
    candidates.erase(candidates.begin());
    member.insert(best);
    found.push_back(std::move(best));
  }

  std::vector<Path> out;
  out.reserve(found.size());
  for (auto& nodes : found) out.emplace_back(g, std::move(nodes));
  return out;
}

std::vector<Path> all_simple_paths(const Graph& g, NodeId s, NodeId d,
                                   std::size_t max_paths) {
  if (s == d) throw std::invalid_argument("all_simple_paths: s == d");
  std::vector<Path> out;
  std::vector<NodeId> stack{s};
  std::vector<char> visited(g.node_count() + 1, 0);
  visited[s] = 1;

  // Iterative DFS over neighbor indices.
  std::vector<std::size_t> next_index{0};
  while (!stack.empty()) {
    NodeId cur = stack.back();
    const auto& nbs = g.neighbors(cur);
    if (next_index.back() >= nbs.size()) {
      visited[cur] = 0;
      stack.pop_back();
      next_index.pop_back();
      continue;
    }
    NodeId nb = nbs[next_index.back()++];
    if (visited[nb]) continue;
    if (nb == d) {
      auto nodes = stack;
      nodes.push_back(d);
      out.emplace_back(g, std::move(nodes));
      if (out.size() > max_paths) {
        throw std::runtime_error("all_simple_paths: enumeration too large");
      }
      continue;
    }
    visited[nb] = 1;
    stack.push_back(nb);
    next_index.push_back(0);
  }
  std::sort(out.begin(), out.end(), path_order_less);
  return out;
}

RoutingTable::RoutingTable(const Graph& g, const std::vector<NodeId>& endpoints,
                           int k)
    : graph_(&g), k_(k) {
  if (k < 1) throw std::invalid_argument("RoutingTable: k < 1");
  const int n = g.node_count();
  dist_.assign(n + 1, {});
  for (NodeId d = 1; d <= n; ++d) {
    auto& dist = dist_[d];
    dist.assign(n + 1, -1);
    std::deque<NodeId> queue{d};
    dist[d] = 0;
    while (!queue.empty()) {
      NodeId cur = queue.front();
      queue.pop_front();
      for (NodeId nb : g.neighbors(cur)) {
        if (dist[nb] < 0) {
          dist[nb] = dist[cur] + 1;
          queue.push_back(nb);
        }
      }
    }
  }
  for (NodeId s : endpoints) {
    for (NodeId d : endpoints) {
      if (s == d) continue;
      k_paths_.emplace(std::make_pair(s, d), k_shortest_paths(g, s, d, k));
    }
  }
}

Path RoutingTable::shortest_path(NodeId s, NodeId d) const {
  if (s == d) throw std::invalid_argument("shortest_path: s == d");
  const auto& dist = dist_[d];
  if (dist[s] < 0) throw std::runtime_error("shortest_path: disconnected pair");
  std::vector<NodeId> nodes{s};
  NodeId cur = s;
  while (cur != d) {
    for (NodeId nb : graph_->neighbors(cur)) {
      if (dist[nb] == dist[cur] - 1) {
        nodes.push_back(nb);
        cur = nb;
        break;
      }
    }
  }
  return Path(*graph_, std::move(nodes));
}

const std::vector<Path>& RoutingTable::k_paths(NodeId s, NodeId d) const {
  auto it = k_paths_.find(std::make_pair(s, d));
  if (it == k_paths_.end()) {
    throw std::invalid_argument("RoutingTable: pair not precomputed");
  }
  return it->second;
}

}  // namespace greenmig
