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

#include "ealab/disorder.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "ealab/error.hpp"
#include "ealab/rng.hpp"

namespace ealab {

Disorder::Disorder(std::vector<double> couplings, SeedTag tag) : couplings_(std::move(couplings)), tag_(std::move(tag)) {
    for (double x : couplings_) {
        if (!std::isfinite(x)) throw Error(Errc::InvalidPerturbation, "coupling is not finite");
    }
}

double Disorder::max_abs() const noexcept {
    double m = 0.0;
    for (double x : couplings_) m = std::max(m, std::abs(x));
    return m;
}

Disorder Disorder::negated() const {
    std::vector<double> out(couplings_.size());
    std::transform(couplings_.begin(), couplings_.end(), out.begin(), [](double x) { return -x; });
    return Disorder(std::move(out), tag_);
}

Disorder sample_disorder(std::size_t num_edges, std::uint64_t seed, const std::string& stream) {
    const Stream rng(seed, stream);
    std::vector<double> values(num_edges);
    for (std::size_t e = 0; e < num_edges; ++e) values[e] = rng.normal(e);
    return Disorder(std::move(values), SeedTag{seed, stream});
}

Disorder sample_disorder(const LatticeGraph& g, std::uint64_t seed, const std::string& stream) {
    return sample_disorder(g.num_edges(), seed, stream);
}

std::string perturbation_name(PerturbationKind kind) {
    return kind == PerturbationKind::GaussianRotation ? "rotate" : "resample";
}

PerturbationSpec::PerturbationSpec(PerturbationKind kind, double p) : kind_(kind), p_(p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw Error(Errc::InvalidPerturbation, "p must lie in the open interval (0, 1)");
    }
}

double PerturbationSpec::t() const noexcept { return -std::log1p(-p_); }

double PerturbationSpec::fresh_coefficient() const noexcept { return std::sqrt(2.0 * p_ - p_ * p_); }

CoupledEnvironments perturb(const Disorder& original, const Disorder& fresh, const PerturbationSpec& spec,
                            std::uint64_t mask_seed, const std::string& mask_stream) {
    if (original.size() != fresh.size()) {
        throw Error(Errc::LengthMismatch, "original and fresh disorder differ in length");
    }
    const std::size_t n = original.size();
    std::vector<double> out(n);
    std::vector<bool> mask;
    if (spec.kind() == PerturbationKind::GaussianRotation) {
        const double a = spec.keep_coefficient();
        const double b = spec.fresh_coefficient();
        for (std::size_t e = 0; e < n; ++e) out[e] = a * original[static_cast<EdgeIndex>(e)] + b * fresh[static_cast<EdgeIndex>(e)];
    } else {
        const Stream rng(mask_seed, mask_stream);
        mask.resize(n);
        for (std::size_t e = 0; e < n; ++e) {
            mask[e] = rng.uniform(e) < spec.p();
            out[e] = mask[e] ? fresh[static_cast<EdgeIndex>(e)] : original[static_cast<EdgeIndex>(e)];
        }
    }
    SeedTag tag{original.tag().seed, original.tag().stream + "+" + perturbation_name(spec.kind())};
    return CoupledEnvironments{original, fresh, Disorder(std::move(out), std::move(tag)), spec, std::move(mask)};
}

MomentReport marginal_check(std::span<const CoupledEnvironments> envs) {
    MomentReport r;
    double sx = 0, sy = 0;
    for (const auto& env : envs) {
        if (env.original.size() != env.perturbed.size()) throw Error(Errc::LengthMismatch, "environment arrays differ");
        for (std::size_t e = 0; e < env.original.size(); ++e) {
            sx += env.original[static_cast<EdgeIndex>(e)];
            sy += env.perturbed[static_cast<EdgeIndex>(e)];
            ++r.n;
        }
    }
    if (r.n < 2) return r;
    r.mean_original = sx / static_cast<double>(r.n);
    r.mean_perturbed = sy / static_cast<double>(r.n);
    double sxx = 0, syy = 0, sxy = 0;
    for (const auto& env : envs) {
        for (std::size_t e = 0; e < env.original.size(); ++e) {
            const double dx = env.original[static_cast<EdgeIndex>(e)] - r.mean_original;
            const double dy = env.perturbed[static_cast<EdgeIndex>(e)] - r.mean_perturbed;
            sxx += dx * dx;
            syy += dy * dy;
            sxy += dx * dy;
        }
    }
    const double dof = static_cast<double>(r.n - 1);
    r.var_original = sxx / dof;
    r.var_perturbed = syy / dof;
    r.correlation = (sxx > 0 && syy > 0) ? sxy / std::sqrt(sxx * syy) : 0.0;
    return r;
}

MomentReport marginal_check(const CoupledEnvironments& env) { return marginal_check(std::span(&env, 1)); }

void write_disorder_csv(std::ostream& out, const LatticeGraph& g, const Disorder& J) {
    if (J.size() != g.num_edges()) throw Error(Errc::LengthMismatch, "disorder length differs from |E|");
    out << "edge_index,u,v,J\n";
    char buf[64];
    for (std::size_t e = 0; e < J.size(); ++e) {
        const Edge& edge = g.edge(static_cast<EdgeIndex>(e));
        std::snprintf(buf, sizeof buf, "%.17g", J[static_cast<EdgeIndex>(e)]);
        out << e << ',' << edge.u << ',' << edge.v << ',' << buf << '\n';
    }
}

Disorder read_disorder_csv(std::istream& in, const LatticeGraph& g) {
    std::string line;
    if (!std::getline(in, line) || line.rfind("edge_index,u,v,J", 0) != 0) {
        throw Error(Errc::ParseError, "disorder CSV must start with header 'edge_index,u,v,J'");
    }
    std::vector<double> values(g.num_edges(), 0.0);
    std::vector<bool> seen(g.num_edges(), false);
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string f[4];
        for (auto& field : f) {
            if (!std::getline(row, field, ',')) {
                throw Error(Errc::ParseError, "line " + std::to_string(lineno) + ": expected 4 fields");
            }
        }
        try {
            const auto e = std::stoul(f[0]);
            const auto u = std::stoul(f[1]);
            const auto v = std::stoul(f[2]);
            const double x = std::stod(f[3]);
            if (e >= g.num_edges()) throw Error(Errc::ParseError, "edge index out of range");
            const Edge& edge = g.edge(static_cast<EdgeIndex>(e));
            if (!((edge.u == u && edge.v == v) || (edge.u == v && edge.v == u))) {
                throw Error(Errc::ParseError, "endpoints do not match edge " + f[0]);
            }
            values[e] = x;
            seen[e] = true;
        } catch (const std::logic_error&) {
            throw Error(Errc::ParseError, "line " + std::to_string(lineno) + ": malformed number");
        }
    }
    if (std::find(seen.begin(), seen.end(), false) != seen.end()) {
        throw Error(Errc::LengthMismatch, "disorder CSV does not cover every edge");
    }
    return Disorder(std::move(values));
}

}  // namespace ealab
