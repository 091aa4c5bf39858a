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

#include "ealab/lattice.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <istream>
#include <ostream>

#include "ealab/error.hpp"

namespace ealab {

template <class Tag>
IndexSet<Tag>::IndexSet(std::vector<value_type> items) : items_(std::move(items)) {
    std::sort(items_.begin(), items_.end());
    items_.erase(std::unique(items_.begin(), items_.end()), items_.end());
}

template <class Tag>
bool IndexSet<Tag>::contains(value_type x) const noexcept {
    return std::binary_search(items_.begin(), items_.end(), x);
}

template class IndexSet<VertexTag>;
template class IndexSet<EdgeTag>;

std::string topology_name(TopologyKind kind) {
    switch (kind) {
        case TopologyKind::OpenCube: return "open";
        case TopologyKind::FreeCube: return "free";
        case TopologyKind::Torus: return "torus";
        case TopologyKind::Explicit: return "explicit";
    }
    return "unknown";
}

namespace {

// BFS restricted to vertices with allowed[v] != 0, starting from all sources.
std::vector<std::size_t> restricted_bfs(const LatticeGraph& g, std::span<const Vertex> sources,
                                        const std::vector<std::uint8_t>* allowed) {
    std::vector<std::size_t> dist(g.num_vertices(), kInfiniteDistance);
    std::deque<Vertex> queue;
    for (Vertex s : sources) {
        if (dist[s] == 0) continue;
        dist[s] = 0;
        queue.push_back(s);
    }
    while (!queue.empty()) {
        Vertex v = queue.front();
        queue.pop_front();
        for (const Neighbor& nb : g.neighbors(v)) {
            if (allowed && !(*allowed)[nb.vertex]) continue;
            if (dist[nb.vertex] != kInfiniteDistance) continue;
            dist[nb.vertex] = dist[v] + 1;
            queue.push_back(nb.vertex);
        }
    }
    return dist;
}

}  // namespace

std::span<const Neighbor> LatticeGraph::neighbors(Vertex v) const {
    check_vertex(v);
    return {adjacency_.data() + adjacency_start_[v], adjacency_start_[v + 1] - adjacency_start_[v]};
}

void LatticeGraph::check_vertex(Vertex v) const {
    if (v >= num_vertices()) {
        throw Error(Errc::InvalidVertex, "vertex " + std::to_string(v) + " out of range");
    }
}

std::optional<EdgeIndex> LatticeGraph::find_edge(Vertex a, Vertex b) const {
    check_vertex(b);
    for (const Neighbor& nb : neighbors(a)) {
        if (nb.vertex == b) return nb.edge;
    }
    return std::nullopt;
}

std::vector<int> LatticeGraph::coordinates(Vertex v) const {
    if (!topology_.is_cube()) throw Error(Errc::InvalidTopology, "coordinates need a cube topology");
    check_vertex(v);
    const int extent = topology_.extent();
    std::vector<int> coords(static_cast<std::size_t>(topology_.dimension));
    for (int a = topology_.dimension - 1; a >= 0; --a) {
        coords[static_cast<std::size_t>(a)] = static_cast<int>(v % static_cast<Vertex>(extent));
        v /= static_cast<Vertex>(extent);
    }
    return coords;
}

Vertex LatticeGraph::vertex_at(std::span<const int> coords) const {
    if (!topology_.is_cube() || coords.size() != static_cast<std::size_t>(topology_.dimension)) {
        throw Error(Errc::InvalidTopology, "coordinate arity does not match the cube");
    }
    const int extent = topology_.extent();
    Vertex v = 0;
    for (int c : coords) {
        if (c < 0 || c >= extent) throw Error(Errc::InvalidVertex, "coordinate out of range");
        v = v * static_cast<Vertex>(extent) + static_cast<Vertex>(c);
    }
    return v;
}

LatticeGraph LatticeGraph::assemble(std::size_t n, std::vector<Edge> edges, VertexSet boundary,
                                    Topology topology) {
    if (n == 0) throw Error(Errc::EmptyInterior, "graph has no vertices");
    if (n > std::numeric_limits<Vertex>::max() / 2) throw Error(Errc::InvalidTopology, "too many vertices");

    LatticeGraph g;
    g.topology_ = topology;
    for (Edge& e : edges) {
        if (e.u >= n || e.v >= n) throw Error(Errc::InvalidVertex, "edge endpoint out of range");
        if (e.u == e.v) throw Error(Errc::NotSimple, "self-loop at vertex " + std::to_string(e.u));
        if (e.u > e.v) std::swap(e.u, e.v);
    }
    {
        std::vector<Edge> sorted = edges;
        std::sort(sorted.begin(), sorted.end(),
                  [](const Edge& a, const Edge& b) { return std::pair(a.u, a.v) < std::pair(b.u, b.v); });
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
            throw Error(Errc::NotSimple, "duplicate edge");
        }
    }
    for (Vertex b : boundary) {
        if (b >= n) throw Error(Errc::InvalidVertex, "boundary vertex out of range");
    }

    std::vector<std::size_t> degree(n, 0);
    for (const Edge& e : edges) {
        ++degree[e.u];
        ++degree[e.v];
    }
    g.adjacency_start_.assign(n + 1, 0);
    for (std::size_t v = 0; v < n; ++v) g.adjacency_start_[v + 1] = g.adjacency_start_[v] + degree[v];
    g.adjacency_.resize(g.adjacency_start_[n]);
    std::vector<std::size_t> fill(g.adjacency_start_.begin(), g.adjacency_start_.end() - 1);
    for (std::size_t k = 0; k < edges.size(); ++k) {
        const Edge& e = edges[k];
        g.adjacency_[fill[e.u]++] = {e.v, static_cast<EdgeIndex>(k)};
        g.adjacency_[fill[e.v]++] = {e.u, static_cast<EdgeIndex>(k)};
    }
    g.max_degree_ = n ? *std::max_element(degree.begin(), degree.end()) : 0;
    g.edges_ = std::move(edges);

    g.on_boundary_.assign(n, 0);
    for (Vertex b : boundary) g.on_boundary_[b] = 1;
    std::vector<Vertex> inner;
    for (Vertex v = 0; v < n; ++v) {
        if (!g.on_boundary_[v]) inner.push_back(v);
    }
    g.boundary_ = std::move(boundary);
    g.interior_ = VertexSet(inner);

    if (g.interior_.empty()) throw Error(Errc::EmptyInterior, "interior V \\ B is empty");

    const Vertex start[] = {0};
    auto all = restricted_bfs(g, start, nullptr);
    if (std::find(all.begin(), all.end(), kInfiniteDistance) != all.end()) {
        throw Error(Errc::Disconnected, "graph is not connected");
    }
    std::vector<std::uint8_t> allowed(n);
    for (Vertex v = 0; v < n; ++v) allowed[v] = !g.on_boundary_[v];
    const Vertex inner_start[] = {g.interior_[0]};
    auto in = restricted_bfs(g, inner_start, &allowed);
    for (Vertex v : g.interior_) {
        if (in[v] == kInfiniteDistance) throw Error(Errc::InteriorDisconnected, "interior V \\ B is not connected");
    }
    if (g.edges_.size() < 2) throw Error(Errc::TooFewEdges, "need at least two edges");

    g.boundary_distance_ = restricted_bfs(g, g.boundary_.items(), nullptr);
    return g;
}

LatticeGraph build_cube(const Topology& topology) {
    const int d = topology.dimension;
    const int L = topology.side;
    if (!topology.is_cube()) throw Error(Errc::InvalidTopology, "build_cube needs a cube topology");
    if (d < 1 || L < 1) throw Error(Errc::InvalidTopology, "need d >= 1 and L >= 1");
    if (topology.kind == TopologyKind::Torus && L < 3) {
        throw Error(Errc::TorusTooSmall, "torus side must be at least 3 to stay simple");
    }
    const int extent = topology.extent();
    double volume = 1.0;
    for (int a = 0; a < d; ++a) volume *= extent;
    if (volume > 5e7) throw Error(Errc::InvalidTopology, "cube too large");
    const auto n = static_cast<std::size_t>(volume);

    std::vector<std::size_t> stride(static_cast<std::size_t>(d));
    std::size_t s = 1;
    for (int a = d - 1; a >= 0; --a) {
        stride[static_cast<std::size_t>(a)] = s;
        s *= static_cast<std::size_t>(extent);
    }

    std::vector<Edge> edges;
    std::vector<Vertex> boundary;
    std::vector<int> coords(static_cast<std::size_t>(d), 0);
    for (std::size_t v = 0; v < n; ++v) {
        std::size_t rest = v;
        bool on_face = false;
        for (int a = d - 1; a >= 0; --a) {
            coords[static_cast<std::size_t>(a)] = static_cast<int>(rest % static_cast<std::size_t>(extent));
            rest /= static_cast<std::size_t>(extent);
        }
        for (int a = 0; a < d; ++a) {
            const int c = coords[static_cast<std::size_t>(a)];
            if (c == 0 || c == L) on_face = true;
            if (topology.kind == TopologyKind::Torus) {
                const std::size_t w = c + 1 < extent ? v + stride[static_cast<std::size_t>(a)]
                                                     : v - static_cast<std::size_t>(c) * stride[static_cast<std::size_t>(a)];
                edges.push_back({static_cast<Vertex>(std::min(v, w)), static_cast<Vertex>(std::max(v, w))});
            } else if (c < L) {
                edges.push_back({static_cast<Vertex>(v), static_cast<Vertex>(v + stride[static_cast<std::size_t>(a)])});
            }
        }
        if (topology.kind == TopologyKind::OpenCube && on_face) boundary.push_back(static_cast<Vertex>(v));
    }
    std::sort(edges.begin(), edges.end(),
              [](const Edge& a, const Edge& b) { return std::pair(a.u, a.v) < std::pair(b.u, b.v); });
    return LatticeGraph::assemble(n, std::move(edges), VertexSet(std::move(boundary)), topology);
}

LatticeGraph build_explicit(std::size_t n, std::vector<Edge> edges, VertexSet boundary) {
    return LatticeGraph::assemble(n, std::move(edges), std::move(boundary), Topology::explicit_graph());
}

LatticeGraph read_graph(std::istream& in) {
    long long n = -1, m = -1, b = -1;
    if (!(in >> n >> m >> b) || n < 0 || m < 0 || b < 0) {
        throw Error(Errc::ParseError, "graph header must be 'n m b' with nonnegative counts");
    }
    std::vector<Edge> edges;
    edges.reserve(static_cast<std::size_t>(m));
    for (long long k = 0; k < m; ++k) {
        long long u = -1, v = -1;
        if (!(in >> u >> v) || u < 0 || v < 0) {
            throw Error(Errc::ParseError, "edge line " + std::to_string(k + 1) + " malformed");
        }
        edges.push_back({static_cast<Vertex>(u), static_cast<Vertex>(v)});
    }
    std::vector<Vertex> boundary;
    for (long long k = 0; k < b; ++k) {
        long long v = -1;
        if (!(in >> v) || v < 0) throw Error(Errc::ParseError, "boundary entry " + std::to_string(k + 1) + " malformed");
        boundary.push_back(static_cast<Vertex>(v));
    }
    return build_explicit(static_cast<std::size_t>(n), std::move(edges), VertexSet(std::move(boundary)));
}

LatticeGraph read_graph_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::Io, "cannot open graph file " + path);
    return read_graph(in);
}

void write_graph(std::ostream& out, const LatticeGraph& g) {
    out << g.num_vertices() << ' ' << g.num_edges() << ' ' << g.boundary().size() << '\n';
    for (const Edge& e : g.edges()) out << e.u << ' ' << e.v << '\n';
    bool first = true;
    for (Vertex v : g.boundary()) {
        out << (first ? "" : " ") << v;
        first = false;
    }
    if (!g.boundary().empty()) out << '\n';
}

std::vector<std::size_t> bfs_distances(const LatticeGraph& g, Vertex source) {
    g.check_vertex(source);
    const Vertex start[] = {source};
    return restricted_bfs(g, start, nullptr);
}

std::size_t graph_distance(const LatticeGraph& g, Vertex i, Vertex j) {
    g.check_vertex(j);
    if (i == j) {
        g.check_vertex(i);
        return 0;
    }
    return bfs_distances(g, i)[j];
}

std::size_t distance_to_boundary(const LatticeGraph& g, Vertex i) {
    g.check_vertex(i);
    return g.boundary_distance(i);
}

EdgeSet edge_boundary(const LatticeGraph& g, const VertexSet& region) {
    std::vector<std::uint8_t> in(g.num_vertices(), 0);
    for (Vertex v : region) {
        g.check_vertex(v);
        in[v] = 1;
    }
    std::vector<std::uint32_t> cut;
    const auto edges = g.edges();
    for (std::size_t k = 0; k < edges.size(); ++k) {
        if (in[edges[k].u] != in[edges[k].v]) cut.push_back(static_cast<std::uint32_t>(k));
    }
    return EdgeSet(std::move(cut));
}

DistanceCache::DistanceCache(const LatticeGraph& g) : graph_(&g) {
    if (g.num_vertices() > kMaxVertices) {
        throw Error(Errc::TooLarge, "distance cache limited to " + std::to_string(kMaxVertices) + " vertices");
    }
    rows_.resize(g.num_vertices());
}

std::size_t DistanceCache::operator()(Vertex i, Vertex j) {
    graph_->check_vertex(i);
    graph_->check_vertex(j);
    auto& row = rows_[i];
    if (row.empty()) {
        auto dist = bfs_distances(*graph_, i);
        row.resize(dist.size());
        for (std::size_t k = 0; k < dist.size(); ++k) {
            row[k] = dist[k] == kInfiniteDistance ? std::numeric_limits<std::uint32_t>::max()
                                                  : static_cast<std::uint32_t>(dist[k]);
        }
    }
    return row[j] == std::numeric_limits<std::uint32_t>::max() ? kInfiniteDistance : row[j];
}

}  // namespace ealab
