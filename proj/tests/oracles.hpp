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

// Brute-force reference computations for tests. Deliberately naive and independent
// of the library's solver paths: they only use the graph's edge list.

#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <vector>

#include "ealab/disorder.hpp"
#include "ealab/lattice.hpp"
#include "ealab/solver.hpp"

namespace oracle {

using ealab::Disorder;
using ealab::LatticeGraph;
using ealab::Spin;
using ealab::Vertex;

inline double hamiltonian(const LatticeGraph& g, const Disorder& J, const std::vector<Spin>& s,
                          std::optional<std::uint32_t> skip_edge = std::nullopt) {
    double e = 0.0;
    for (std::uint32_t k = 0; k < g.num_edges(); ++k) {
        if (skip_edge && *skip_edge == k) continue;
        const auto& ed = g.edges()[k];
        e -= J.values()[k] * s[ed.u] * s[ed.v];
    }
    return e;
}

struct BruteResult {
    double energy = std::numeric_limits<double>::infinity();
    std::vector<Spin> config;  // lexicographically smallest minimizer (-1 < +1)
    int minimizers = 0;        // counted within 1e-12
};

/// Enumerates every assignment of all |V| spins. `gamma` pins boundary spins (in g.boundary() order)
/// when nonempty; `pair` imposes s_i s_j = sign; `zero` drops that pair's coupling from the energy.
inline BruteResult brute_ground_state(const LatticeGraph& g, const Disorder& J, const std::vector<Spin>& gamma = {},
                                      std::optional<ealab::PairConstraint> pair = std::nullopt, bool zero = false) {
    const std::size_t n = g.num_vertices();
    BruteResult best;
    std::optional<std::uint32_t> skip;
    if (pair && zero) skip = *g.find_edge(pair->i, pair->j);
    std::vector<Spin> s(n);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        for (std::size_t v = 0; v < n; ++v) s[v] = ((mask >> (n - 1 - v)) & 1) ? 1 : -1;
        bool ok = true;
        for (std::size_t k = 0; k < gamma.size() && ok; ++k) ok = s[g.boundary()[k]] == gamma[k];
        if (ok && pair) ok = s[pair->i] * s[pair->j] == pair->sign;
        if (!ok) continue;
        const double e = hamiltonian(g, J, s, skip);
        if (e < best.energy - 1e-12) {
            best.energy = e;
            best.config = s;
            best.minimizers = 1;
        } else if (e <= best.energy + 1e-12) {
            ++best.minimizers;
        }
    }
    return best;
}

/// All-pairs shortest paths by Floyd-Warshall.
inline std::vector<std::vector<std::size_t>> floyd_warshall(const LatticeGraph& g) {
    const std::size_t n = g.num_vertices();
    const std::size_t inf = std::numeric_limits<std::size_t>::max() / 4;
    std::vector<std::vector<std::size_t>> d(n, std::vector<std::size_t>(n, inf));
    for (std::size_t v = 0; v < n; ++v) d[v][v] = 0;
    for (const auto& e : g.edges()) d[e.u][e.v] = d[e.v][e.u] = 1;
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (d[i][k] + d[k][j] < d[i][j]) d[i][j] = d[i][k] + d[k][j];
    return d;
}

/// Random connected graph: a random spanning tree plus `extra` random chords.
inline LatticeGraph random_connected_graph(std::mt19937_64& rng, std::size_t n, std::size_t extra) {
    std::vector<ealab::Edge> edges;
    std::vector<std::vector<bool>> used(n, std::vector<bool>(n, false));
    for (Vertex v = 1; v < n; ++v) {
        const auto u = static_cast<Vertex>(std::uniform_int_distribution<std::size_t>(0, v - 1)(rng));
        edges.push_back({u, v});
        used[u][v] = used[v][u] = true;
    }
    for (std::size_t k = 0, tries = 0; k < extra && tries < 100 * (extra + 1); ++tries) {
        const auto a = static_cast<Vertex>(std::uniform_int_distribution<std::size_t>(0, n - 1)(rng));
        const auto b = static_cast<Vertex>(std::uniform_int_distribution<std::size_t>(0, n - 1)(rng));
        if (a == b || used[a][b]) continue;
        used[a][b] = used[b][a] = true;
        edges.push_back({a, b});
        ++k;
    }
    return ealab::build_explicit(n, std::move(edges), ealab::VertexSet{});
}

inline LatticeGraph random_tree(std::mt19937_64& rng, std::size_t n) { return random_connected_graph(rng, n, 0); }

inline std::vector<Spin> random_spins(std::mt19937_64& rng, std::size_t n) {
    std::vector<Spin> s(n);
    for (auto& x : s) x = (rng() & 1) ? 1 : -1;
    return s;
}

}  // namespace oracle
