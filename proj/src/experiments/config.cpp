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

#include <cmath>
#include <string>

#include "ealab/error.hpp"
#include "ealab/experiments.hpp"
#include "ealab/rng.hpp"

namespace ealab {

std::string experiment_name(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::Chaos: return "chaos";
        case ExperimentKind::PairCorrelation: return "pair_correlation";
        case ExperimentKind::Fractal: return "fractal";
        case ExperimentKind::Valleys: return "valleys";
        case ExperimentKind::FixedRegionTail: return "fixed_region_tail";
        case ExperimentKind::Critical: return "critical";
        case ExperimentKind::Decay: return "decay";
    }
    return "unknown";
}

ExperimentKind parse_experiment(const std::string& name) {
    for (auto k : {ExperimentKind::Chaos, ExperimentKind::PairCorrelation, ExperimentKind::Fractal,
                   ExperimentKind::Valleys, ExperimentKind::FixedRegionTail, ExperimentKind::Critical,
                   ExperimentKind::Decay}) {
        if (experiment_name(k) == name) return k;
    }
    if (name == "paircorr") return ExperimentKind::PairCorrelation;
    if (name == "tail") return ExperimentKind::FixedRegionTail;
    throw Error(Errc::InvalidConfig, "unknown experiment '" + name + "'");
}

std::string bc_policy_name(BcPolicy policy) {
    switch (policy) {
        case BcPolicy::Free: return "free";
        case BcPolicy::Periodic: return "periodic";
        case BcPolicy::FixedAllPlus: return "fixed-plus";
        case BcPolicy::FixedRandomOnce: return "fixed-random";
    }
    return "unknown";
}

BcPolicy parse_bc_policy(const std::string& name) {
    if (name == "free") return BcPolicy::Free;
    if (name == "periodic") return BcPolicy::Periodic;
    if (name == "fixed-plus" || name == "fixed_all_plus") return BcPolicy::FixedAllPlus;
    if (name == "fixed-random" || name == "fixed_random_once") return BcPolicy::FixedRandomOnce;
    throw Error(Errc::InvalidConfig, "unknown boundary policy '" + name + "'");
}

TopologyKind parse_topology(const std::string& name) {
    if (name == "open") return TopologyKind::OpenCube;
    if (name == "free") return TopologyKind::FreeCube;
    if (name == "torus") return TopologyKind::Torus;
    throw Error(Errc::InvalidConfig, "unknown topology '" + name + "'");
}

PerturbationKind parse_perturbation(const std::string& name) {
    if (name == "rotate") return PerturbationKind::GaussianRotation;
    if (name == "resample") return PerturbationKind::Resample;
    throw Error(Errc::InvalidConfig, "unknown perturbation kind '" + name + "'");
}

TopologyKind ExperimentConfig::effective_topology() const {
    return bc == BcPolicy::Periodic ? TopologyKind::Torus : topology;
}

std::vector<double> ExperimentConfig::p_values(int side) const {
    if (K) return {*K / side};
    return p;
}

void ExperimentConfig::validate() const {
    auto bad = [](const std::string& what) { throw Error(Errc::InvalidConfig, what); };
    if (replicates < 1) bad("replicates must be at least 1");
    if (d < 1) bad("dimension must be at least 1");
    if (L.empty()) bad("at least one side length is required");
    for (int side : L) {
        if (side < 1) bad("side lengths must be positive");
    }
    const TopologyKind topo = effective_topology();
    if (topo == TopologyKind::Explicit) bad("experiments run on cubes or tori");
    const bool fixed = bc == BcPolicy::FixedAllPlus || bc == BcPolicy::FixedRandomOnce;
    if (fixed && topo != TopologyKind::OpenCube) bad("fixed boundary policies need the open cube");

    const bool perturbs = experiment == ExperimentKind::Chaos || experiment == ExperimentKind::PairCorrelation ||
                          experiment == ExperimentKind::Fractal || experiment == ExperimentKind::Valleys;
    if (K && !p.empty()) bad("p and K are mutually exclusive");
    if (perturbs) {
        if (!K && p.empty()) bad("this experiment needs p values or K");
        for (int side : L) {
            for (double q : p_values(side)) {
                if (!(q > 0.0 && q < 1.0)) bad("p must lie in the open interval (0, 1)");
            }
        }
        if (K && !(*K > 0.0)) bad("K must be positive");
    }
    if ((experiment == ExperimentKind::Fractal || experiment == ExperimentKind::Valleys) &&
        kind != PerturbationKind::GaussianRotation) {
        bad(experiment_name(experiment) + " uses the Gaussian rotation only");
    }
    if (experiment == ExperimentKind::Decay && topo != TopologyKind::OpenCube) bad("decay runs on the open cube");
    if (experiment == ExperimentKind::FixedRegionTail && topo == TopologyKind::FreeCube) {
        bad("the fixed-region tail runs on the open cube or the torus");
    }
    if (format != "csv" && format != "jsonl") bad("format must be csv or jsonl");
    if (spot_checks < 0) bad("spot_checks must be nonnegative");
    if (solver.anneal.restarts <= 0) bad("anneal restarts must be positive");
    const auto& s = solver.anneal.schedule;
    if (!(s.t_final > 0.0 && s.t_init > s.t_final) || s.sweeps < 1) bad("anneal schedule needs T_init > T_final > 0");
}

LatticeGraph make_graph(const ExperimentConfig& cfg, int side) {
    return build_cube(Topology{cfg.effective_topology(), cfg.d, side});
}

BoundaryCondition make_boundary(const ExperimentConfig& cfg, const LatticeGraph& g, int side) {
    switch (cfg.bc) {
        case BcPolicy::Free:
        case BcPolicy::Periodic: return BoundaryCondition::free();
        case BcPolicy::FixedAllPlus: return BoundaryCondition::all_plus(g);
        case BcPolicy::FixedRandomOnce: {
            const Stream s(cfg.seed, "bc/L" + std::to_string(side));
            std::vector<Spin> gamma(g.boundary().size());
            for (std::size_t k = 0; k < gamma.size(); ++k) gamma[k] = (s.bits(k) >> 63) ? Spin{1} : Spin{-1};
            return BoundaryCondition::fixed(std::move(gamma));
        }
    }
    throw Error(Errc::InvalidConfig, "unknown boundary policy");
}

}  // namespace ealab
