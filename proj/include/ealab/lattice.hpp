// Copyright 2026 The ea-lab Authors.
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.

#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace ealab {

using Vertex = std::uint32_t;
using EdgeIndex = std::uint32_t;

/// Returned by distance queries when no path exists (e.g. distance to an empty boundary).
inline constexpr std::size_t kInfiniteDistance = std::numeric_limits<std::size_t>::max();

/// a + b, saturating at kInfiniteDistance.
constexpr std::size_t distance_add(std::size_t a, std::size_t b) noexcept {
    if (a == kInfiniteDistance || b == kInfiniteDistance) return kInfiniteDistance;
    return a + b;
}

struct Edge {
    Vertex u;
    Vertex v;

    friend bool operator==(const Edge&, const Edge&) = default;
};

/// Sorted, duplicate-free index sequence. The ordering operator compares the
/// sorted sequences lexicographically, which is the tie rule used when several
/// regions attain the same objective.
template <class Tag>
class IndexSet {
  public:
    using value_type = std::uint32_t;

    IndexSet() = default;
    explicit IndexSet(std::vector<value_type> items);

    std::size_t size() const noexcept { return items_.size(); }
    bool empty() const noexcept { return items_.empty(); }
    bool contains(value_type x) const noexcept;
    auto begin() const noexcept { return items_.begin(); }
    auto end() const noexcept { return items_.end(); }
    value_type operator[](std::size_t k) const { return items_[k]; }
    std::span<const value_type> items() const noexcept { return items_; }

    friend bool operator==(const IndexSet&, const IndexSet&) = default;
    friend auto operator<=>(const IndexSet& a, const IndexSet& b) { return a.items_ <=> b.items_; }

  private:
    std::vector<value_type> items_;
};

struct VertexTag;
struct EdgeTag;
using VertexSet = IndexSet<VertexTag>;
using EdgeSet = IndexSet<EdgeTag>;

enum class TopologyKind { OpenCube, FreeCube, Torus, Explicit };

struct Topology {
    TopologyKind kind = TopologyKind::Explicit;
    int dimension = 0;
    int side = 0;

    static Topology open_cube(int d, int L) { return {TopologyKind::OpenCube, d, L}; }
    static Topology free_cube(int d, int L) { return {TopologyKind::FreeCube, d, L}; }
    static Topology torus(int d, int L) { return {TopologyKind::Torus, d, L}; }
    static Topology explicit_graph() { return {}; }

    bool is_cube() const noexcept { return kind != TopologyKind::Explicit; }
    /// Number of sites along each axis: L + 1 for open/free cubes, L for the torus.
    int extent() const noexcept { return kind == TopologyKind::Torus ? side : side + 1; }

    friend bool operator==(const Topology&, const Topology&) = default;
};

std::string topology_name(TopologyKind kind);

struct Neighbor {
    Vertex vertex;
    EdgeIndex edge;
};

/// Finite simple connected graph with a boundary set B and connected interior V \ B.
/// Immutable after construction.
class LatticeGraph {
  public:
    std::size_t num_vertices() const noexcept { return adjacency_start_.size() - 1; }
    std::size_t num_edges() const noexcept { return edges_.size(); }
    std::span<const Edge> edges() const noexcept { return edges_; }
    const Edge& edge(EdgeIndex e) const { return edges_.at(e); }
    const VertexSet& boundary() const noexcept { return boundary_; }
    const VertexSet& interior() const noexcept { return interior_; }
    const Topology& topology() const noexcept { return topology_; }
    std::size_t max_degree() const noexcept { return max_degree_; }

    std::span<const Neighbor> neighbors(Vertex v) const;
    std::size_t degree(Vertex v) const { return neighbors(v).size(); }
    bool is_boundary(Vertex v) const { return on_boundary_.at(v) != 0; }
    std::optional<EdgeIndex> find_edge(Vertex a, Vertex b) const;

    /// Multi-source BFS distance from v to B, computed once at construction.
    std::size_t boundary_distance(Vertex v) const { return boundary_distance_.at(v); }

    /// Coordinates of a cube vertex, axis 0 most significant.
    std::vector<int> coordinates(Vertex v) const;
    Vertex vertex_at(std::span<const int> coords) const;

    void check_vertex(Vertex v) const;

  private:
    friend LatticeGraph build_cube(const Topology&);
    friend LatticeGraph build_explicit(std::size_t, std::vector<Edge>, VertexSet);
    static LatticeGraph assemble(std::size_t n, std::vector<Edge> edges, VertexSet boundary, Topology topology);

    std::vector<Edge> edges_;
    std::vector<std::size_t> adjacency_start_{0};
    std::vector<Neighbor> adjacency_;
    std::vector<std::uint8_t> on_boundary_;
    std::vector<std::size_t> boundary_distance_;
    VertexSet boundary_;
    VertexSet interior_;
    Topology topology_;
    std::size_t max_degree_ = 0;
};

/// Row-major cube or torus with nearest-neighbor edges sorted by (min endpoint, max endpoint).
LatticeGraph build_cube(const Topology& topology);

/// Validates an arbitrary graph. Edge indices follow the input order.
LatticeGraph build_explicit(std::size_t n, std::vector<Edge> edges, VertexSet boundary);

/// Reads "n m b", m lines "u v", then b boundary indices (0-based, whitespace-delimited).
LatticeGraph read_graph(std::istream& in);
LatticeGraph read_graph_file(const std::string& path);
void write_graph(std::ostream& out, const LatticeGraph& g);

std::size_t graph_distance(const LatticeGraph& g, Vertex i, Vertex j);
/// kInfiniteDistance when B is empty.
std::size_t distance_to_boundary(const LatticeGraph& g, Vertex i);
EdgeSet edge_boundary(const LatticeGraph& g, const VertexSet& region);

/// All BFS distances from one source; unreachable entries are kInfiniteDistance.
std::vector<std::size_t> bfs_distances(const LatticeGraph& g, Vertex source);

/// Lazily filled all-pairs distance cache, one BFS row per queried source.
/// Not safe for concurrent use; give each worker its own cache.
class DistanceCache {
  public:
    static constexpr std::size_t kMaxVertices = 10000;

    explicit DistanceCache(const LatticeGraph& g);
    std::size_t operator()(Vertex i, Vertex j);

  private:
    const LatticeGraph* graph_;
    std::vector<std::vector<std::uint32_t>> rows_;
};

}  // namespace ealab
