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

#include "ealab/solver.hpp"

#include <cmath>

#include "ealab/error.hpp"
#include "solver/problem.hpp"

namespace ealab {

SpinConfiguration::SpinConfiguration(std::vector<Spin> spins) : spins_(std::move(spins)) {
    for (Spin s : spins_) {
        if (s != 1 && s != -1) throw Error(Errc::DimensionMismatch, "spins must be +1 or -1");
    }
}

void SpinConfiguration::set(Vertex v, Spin s) {
    if (s != 1 && s != -1) throw Error(Errc::DimensionMismatch, "spins must be +1 or -1");
    spins_.at(v) = s;
}

SpinConfiguration SpinConfiguration::flipped() const {
    SpinConfiguration out = *this;
    for (Spin& s : out.spins_) s = static_cast<Spin>(-s);
    return out;
}

std::string SpinConfiguration::to_string() const {
    std::string out;
    out.reserve(spins_.size());
    for (Spin s : spins_) out.push_back(s > 0 ? '+' : '-');
    return out;
}

BoundaryCondition BoundaryCondition::fixed(std::vector<Spin> gamma) {
    for (Spin s : gamma) {
        if (s != 1 && s != -1) throw Error(Errc::InvalidBoundaryCondition, "boundary spins must be +1 or -1");
    }
    BoundaryCondition bc;
    bc.fixed_ = true;
    bc.gamma_ = std::move(gamma);
    return bc;
}

BoundaryCondition BoundaryCondition::all_plus(const LatticeGraph& g) {
    return fixed(std::vector<Spin>(g.boundary().size(), 1));
}

void BoundaryCondition::validate(const LatticeGraph& g) const {
    if (!fixed_) return;
    if (g.boundary().empty()) throw Error(Errc::InvalidBoundaryCondition, "fixed boundary condition needs B nonempty");
    if (gamma_.size() != g.boundary().size()) {
        throw Error(Errc::InvalidBoundaryCondition, "assignment must cover exactly the boundary set");
    }
}

std::string method_name(SolveMethod m) {
    switch (m) {
        case SolveMethod::Exhaustive: return "exhaustive";
        case SolveMethod::BranchBound: return "branch-bound";
        case SolveMethod::Elimination: return "elimination";
        case SolveMethod::Anneal: return "anneal";
    }
    return "unknown";
}

double energy(const LatticeGraph& g, const Disorder& J, const SpinConfiguration& sigma) {
    if (J.size() != g.num_edges() || sigma.size() != g.num_vertices()) {
        throw Error(Errc::DimensionMismatch, "configuration or disorder does not match the graph");
    }
    double e = 0.0;
    const auto edges = g.edges();
    for (std::size_t k = 0; k < edges.size(); ++k) {
        e -= J[static_cast<EdgeIndex>(k)] * sigma[edges[k].u] * sigma[edges[k].v];
    }
    return e;
}

SpinConfiguration canonicalize(const LatticeGraph& g, const BoundaryCondition& bc, const SpinConfiguration& sigma) {
    if (sigma.size() != g.num_vertices()) throw Error(Errc::DimensionMismatch, "configuration size differs from |V|");
    if (bc.is_fixed() || sigma[g.interior()[0]] > 0) return sigma;
    return sigma.flipped();
}

namespace {

std::size_t enumerated_vars(const detail::ReducedProblem& P) { return P.n_vars - (P.gauge ? 1 : 0); }

SolveResult finish(const LatticeGraph& g, const Disorder& J, const BoundaryCondition& bc,
                   const detail::ReducedProblem& P, detail::EngineResult r, SolveMethod method,
                   const PairConstraint* constraint, bool zero_edge) {
    SolveResult out;
    out.config = canonicalize(g, bc, P.lift(r.x));
    out.energy = energy(g, J, out.config);
    if (constraint && zero_edge) {
        const EdgeIndex e = *g.find_edge(constraint->i, constraint->j);
        out.energy += J[e] * out.config[constraint->i] * out.config[constraint->j];
    }
    out.method = method;
    out.exact = method != SolveMethod::Anneal;
    out.tie_detected = r.tie;
    out.free_spin_count = P.n_vars;
    return out;
}

SolveResult run_exact(const LatticeGraph& g, const Disorder& J, const BoundaryCondition& bc,
                      const detail::ReducedProblem& P, const ExactOptions& opt, const PairConstraint* constraint,
                      bool zero_edge) {
    const std::size_t n = P.n_vars;
    ExactMethod method = opt.method;
    if (method == ExactMethod::Auto) {
        if (n <= opt.exhaustive_cap) {
            method = ExactMethod::Exhaustive;
        } else if (n <= opt.branch_bound_cap) {
            method = ExactMethod::BranchBound;
        } else {
            throw Error(Errc::TooLarge, std::to_string(n) + " free spins exceed the exact-solver caps; use annealing");
        }
    }
    switch (method) {
        case ExactMethod::Exhaustive:
            if (n > opt.exhaustive_cap || enumerated_vars(P) > 40) {
                throw Error(Errc::TooLarge, std::to_string(n) + " free spins exceed the exhaustive cap");
            }
            return finish(g, J, bc, P, detail::solve_exhaustive(P), SolveMethod::Exhaustive, constraint, zero_edge);
        case ExactMethod::BranchBound:
            if (n > opt.branch_bound_cap) {
                throw Error(Errc::TooLarge, std::to_string(n) + " free spins exceed the branch-and-bound cap");
            }
            return finish(g, J, bc, P, detail::solve_branch_bound(P), SolveMethod::BranchBound, constraint, zero_edge);
        case ExactMethod::Elimination: {
            const detail::EliminationPlan plan(P);
            if (plan.width() > opt.elimination_width_cap) {
                throw Error(Errc::TooLarge, "elimination width " + std::to_string(plan.width()) + " exceeds the cap");
            }
            auto r = plan.solve();
            // The table does not order tied optima; defer to enumeration when it is affordable.
            if (r.tie && n <= opt.exhaustive_cap) {
                return finish(g, J, bc, P, detail::solve_exhaustive(P), SolveMethod::Exhaustive, constraint, zero_edge);
            }
            return finish(g, J, bc, P, std::move(r), SolveMethod::Elimination, constraint, zero_edge);
        }
        case ExactMethod::Auto: break;
    }
    throw Error(Errc::InternalMismatch, "unreachable exact method");
}

void validate_anneal(const AnnealOptions& options) {
    if (options.restarts <= 0) throw Error(Errc::InvalidRestarts, "restarts must be positive");
    const auto& s = options.schedule;
    if (!(s.t_final > 0.0 && s.t_init > s.t_final) || s.sweeps < 1) {
        throw Error(Errc::InvalidSchedule, "need T_init > T_final > 0 and sweeps >= 1");
    }
}

}  // namespace

SolveResult solve_exact(const LatticeGraph& g, const Disorder& J, const BoundaryCondition& bc,
                        const ExactOptions& options) {
    const auto P = detail::reduce(g, J, bc, nullptr, false);
    return run_exact(g, J, bc, P, options, nullptr, false);
}

SolveResult solve_anneal(const LatticeGraph& g, const Disorder& J, const BoundaryCondition& bc,
                         const AnnealOptions& options, std::uint64_t seed) {
    validate_anneal(options);
    const auto P = detail::reduce(g, J, bc, nullptr, false);
    return finish(g, J, bc, P, detail::solve_anneal(P, options, seed), SolveMethod::Anneal, nullptr, false);
}

SolveResult solve_constrained(const LatticeGraph& g, const Disorder& J, const BoundaryCondition& bc,
                              const PairConstraint& c, bool zero_edge, const ExactOptions& options) {
    const auto P = detail::reduce(g, J, bc, &c, zero_edge);
    return run_exact(g, J, bc, P, options, &c, zero_edge);
}

SolveResult solve_with_policy(const LatticeGraph& g, const Disorder& J, const BoundaryCondition& bc,
                              const SolverPolicy& policy, std::uint64_t anneal_seed, const PairConstraint* constraint,
                              bool zero_edge) {
    const auto P = detail::reduce(g, J, bc, constraint, zero_edge);
    const double exhaustive_cost = std::ldexp(1.0, static_cast<int>(enumerated_vars(P)));
    const bool exhaustive_ok = P.n_vars <= policy.exhaustive_cap;

    if (policy.elimination_width_cap > 0) {
        const detail::EliminationPlan plan(P);
        if (plan.width() <= policy.elimination_width_cap && (!exhaustive_ok || plan.cost() < exhaustive_cost)) {
            ExactOptions opt;
            opt.method = ExactMethod::Elimination;
            opt.exhaustive_cap = policy.exhaustive_cap;
            opt.elimination_width_cap = policy.elimination_width_cap;
            return run_exact(g, J, bc, P, opt, constraint, zero_edge);
        }
    }
    if (exhaustive_ok) {
        ExactOptions opt;
        opt.method = ExactMethod::Exhaustive;
        opt.exhaustive_cap = policy.exhaustive_cap;
        return run_exact(g, J, bc, P, opt, constraint, zero_edge);
    }
    if (!policy.allow_anneal) {
        throw Error(Errc::TooLarge, std::to_string(P.n_vars) + " free spins exceed the exact caps and annealing is off");
    }
    validate_anneal(policy.anneal);
    return finish(g, J, bc, P, detail::solve_anneal(P, policy.anneal, anneal_seed), SolveMethod::Anneal, constraint,
                  zero_edge);
}

}  // namespace ealab
