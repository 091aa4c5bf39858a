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

#include "solver/problem.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "ealab/error.hpp"

namespace ealab::detail {

double ReducedProblem::energy(std::span<const Spin> x) const {
    double e = offset;
    for (const Coupling& c : couplings) e -= c.J * x[c.a] * x[c.b];
    for (std::size_t a = 0; a < n_vars; ++a) e -= field[a] * x[a];
    return e;
}

double ReducedProblem::local_field(std::span<const Spin> x, std::uint32_t a) const {
    double f = field[a];
    for (std::size_t k = adj_start[a]; k < adj_start[a + 1]; ++k) f += adj_J[k] * x[adj_var[k]];
    return f;
}

SpinConfiguration ReducedProblem::lift(std::span<const Spin> x) const {
    std::vector<Spin> spins(var_of.size());
    for (std::size_t v = 0; v < var_of.size(); ++v) {
        spins[v] = var_of[v] < 0 ? sign_of[v] : static_cast<Spin>(sign_of[v] * x[static_cast<std::size_t>(var_of[v])]);
    }
    return SpinConfiguration(std::move(spins));
}

bool ReducedProblem::lifted_less(std::span<const Spin> x, std::span<const Spin> y) const {
    for (std::size_t v = 0; v < var_of.size(); ++v) {
        if (var_of[v] < 0) continue;
        const auto a = static_cast<std::size_t>(var_of[v]);
        const int sx = sign_of[v] * x[a];
        const int sy = sign_of[v] * y[a];
        if (sx != sy) return sx < sy;
    }
    return false;
}

void ReducedProblem::canonicalize(std::vector<Spin>& x) const {
    if (!gauge || x[gauge->first] == gauge->second) return;
    for (Spin& s : x) s = static_cast<Spin>(-s);
}

void Incumbent::offer(double e, std::span<const Spin> x) {
    if (e < best_ - kTieTolerance) {
        best_ = e;
        x_.assign(x.begin(), x.end());
        tie_ = false;
    } else if (e <= best_ + kTieTolerance) {
        if (std::equal(x.begin(), x.end(), x_.begin(), x_.end())) return;
        tie_ = true;
        if (problem_->lifted_less(x, x_)) x_.assign(x.begin(), x.end());
        best_ = std::min(best_, e);
    }
}

ReducedProblem reduce(const LatticeGraph& g, const Disorder& J, const BoundaryCondition& bc,
                      const PairConstraint* constraint, bool zero_edge) {
    if (J.size() != g.num_edges()) throw Error(Errc::DimensionMismatch, "disorder length differs from |E|");
    bc.validate(g);
    const std::size_t n = g.num_vertices();

    ReducedProblem P;
    P.var_of.assign(n, 0);
    P.sign_of.assign(n, 1);
    std::vector<std::uint8_t> pinned(n, 0);
    if (bc.is_fixed()) {
        const auto gamma = bc.assignment();
        for (std::size_t k = 0; k < g.boundary().size(); ++k) {
            pinned[g.boundary()[k]] = 1;
            P.sign_of[g.boundary()[k]] = gamma[k];
        }
    }

    std::optional<EdgeIndex> constraint_edge;
    Vertex alias_from = 0, alias_to = 0;
    bool aliased = false;
    if (constraint) {
        const Vertex i = constraint->i, j = constraint->j;
        if (i >= n || j >= n) throw Error(Errc::InvalidConstraint, "constraint vertex out of range");
        if (constraint->sign != 1 && constraint->sign != -1) throw Error(Errc::InvalidConstraint, "sign must be +1 or -1");
        constraint_edge = g.find_edge(i, j);
        if (!constraint_edge) throw Error(Errc::InvalidConstraint, "constraint pair is not an edge");
        if (pinned[i] && pinned[j]) {
            if (P.sign_of[i] * P.sign_of[j] != constraint->sign) {
                throw Error(Errc::InfeasibleConstraint, "boundary condition violates the pair constraint");
            }
        } else if (pinned[i]) {
            pinned[j] = 1;
            P.sign_of[j] = static_cast<Spin>(constraint->sign * P.sign_of[i]);
        } else if (pinned[j]) {
            pinned[i] = 1;
            P.sign_of[i] = static_cast<Spin>(constraint->sign * P.sign_of[j]);
        } else {
            aliased = true;
            alias_from = std::max(i, j);
            alias_to = std::min(i, j);
        }
    }

    bool any_pinned = false;
    for (std::size_t v = 0; v < n; ++v) {
        if (pinned[v]) {
            P.var_of[v] = -1;
            any_pinned = true;
        } else if (aliased && v == alias_from) {
            P.var_of[v] = P.var_of[alias_to];
            P.sign_of[v] = constraint->sign;
        } else {
            P.var_of[v] = static_cast<std::int32_t>(P.n_vars++);
            P.sign_of[v] = 1;
        }
    }

    P.field.assign(P.n_vars, 0.0);
    std::map<std::pair<std::uint32_t, std::uint32_t>, double> merged;
    const auto edges = g.edges();
    for (std::size_t k = 0; k < edges.size(); ++k) {
        const double Jk = (zero_edge && constraint_edge && *constraint_edge == k) ? 0.0 : J[static_cast<EdgeIndex>(k)];
        const Vertex u = edges[k].u, v = edges[k].v;
        const double w = Jk * P.sign_of[u] * P.sign_of[v];
        const std::int32_t a = P.var_of[u], b = P.var_of[v];
        if (a < 0 && b < 0) {
            P.offset -= w;
        } else if (a < 0) {
            P.field[static_cast<std::size_t>(b)] += w;
        } else if (b < 0) {
            P.field[static_cast<std::size_t>(a)] += w;
        } else if (a == b) {
            P.offset -= w;
        } else {
            merged[{static_cast<std::uint32_t>(std::min(a, b)), static_cast<std::uint32_t>(std::max(a, b))}] += w;
        }
    }
    for (const auto& [key, w] : merged) {
        if (w != 0.0) P.couplings.push_back({key.first, key.second, w});
    }

    std::vector<std::size_t> deg(P.n_vars, 0);
    for (const auto& c : P.couplings) {
        ++deg[c.a];
        ++deg[c.b];
    }
    P.adj_start.assign(P.n_vars + 1, 0);
    for (std::size_t a = 0; a < P.n_vars; ++a) P.adj_start[a + 1] = P.adj_start[a] + deg[a];
    P.adj_var.resize(P.adj_start[P.n_vars]);
    P.adj_J.resize(P.adj_start[P.n_vars]);
    std::vector<std::size_t> fill(P.adj_start.begin(), P.adj_start.end() - 1);
    for (const auto& c : P.couplings) {
        P.adj_var[fill[c.a]] = c.b;
        P.adj_J[fill[c.a]++] = c.J;
        P.adj_var[fill[c.b]] = c.a;
        P.adj_J[fill[c.b]++] = c.J;
    }

    if (!any_pinned && P.n_vars > 0) {
        const Vertex ref = g.interior()[0];
        P.gauge = std::pair{static_cast<std::uint32_t>(P.var_of[ref]), P.sign_of[ref]};
    }
    return P;
}

}  // namespace ealab::detail
