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

#include "ealab/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>
#include <unistd.h>

#include "CLI11.hpp"
#include "ealab/error.hpp"
#include "ealab/observables.hpp"
#include "ealab/rng.hpp"
#include "json.hpp"

namespace ealab {

namespace {

using nlohmann::json;

[[noreturn]] void parse_fail(const std::string& what) { throw Error(Errc::ParseError, what); }

AnnealOptions parse_anneal(const std::string& text) {
    std::vector<std::string> parts;
    std::stringstream in(text);
    for (std::string item; std::getline(in, item, ',');) parts.push_back(item);
    if (parts.size() != 4) throw Error(Errc::InvalidConfig, "--anneal expects Tinit,Tfinal,sweeps,restarts");
    AnnealOptions a;
    try {
        a.schedule.t_init = std::stod(parts[0]);
        a.schedule.t_final = std::stod(parts[1]);
        a.schedule.sweeps = std::stoi(parts[2]);
        a.restarts = std::stoi(parts[3]);
    } catch (const std::exception&) {
        throw Error(Errc::InvalidConfig, "--anneal expects numbers, got '" + text + "'");
    }
    return a;
}

void check_p(double p) {
    if (!(p > 0.0 && p < 1.0)) throw Error(Errc::InvalidConfig, "p must lie in the open interval (0, 1)");
}

void apply_defaults(ConfigSource& src, bool replicates_set, bool bc_set) {
    auto& c = src.config;
    if (!replicates_set) {
        const bool heavy = c.experiment == ExperimentKind::Chaos || c.experiment == ExperimentKind::PairCorrelation;
        c.replicates = heavy ? 2000 : 500;
    }
    if (!bc_set && c.topology != TopologyKind::OpenCube) c.bc = BcPolicy::Free;
}

// Applies one config key; throws nlohmann exceptions on type errors and InvalidConfig on bad values.
void apply_key(ExperimentConfig& c, const std::string& key, const json& v) {
    if (key == "experiment") {
        c.experiment = parse_experiment(v.get<std::string>());
    } else if (key == "d") {
        c.d = v.get<int>();
        if (c.d < 1) throw Error(Errc::InvalidConfig, "d must be at least 1");
    } else if (key == "L") {
        c.L = v.is_array() ? v.get<std::vector<int>>() : std::vector<int>{v.get<int>()};
    } else if (key == "topology") {
        c.topology = parse_topology(v.get<std::string>());
    } else if (key == "bc") {
        c.bc = parse_bc_policy(v.get<std::string>());
    } else if (key == "kind") {
        c.kind = parse_perturbation(v.get<std::string>());
    } else if (key == "p") {
        c.p = v.is_array() ? v.get<std::vector<double>>() : std::vector<double>{v.get<double>()};
        for (double p : c.p) check_p(p);
    } else if (key == "K") {
        c.K = v.get<double>();
        if (!(*c.K > 0.0)) throw Error(Errc::InvalidConfig, "K must be positive");
    } else if (key == "replicates") {
        c.replicates = v.get<int>();
        if (c.replicates < 1) throw Error(Errc::InvalidConfig, "replicates must be at least 1");
    } else if (key == "seed") {
        c.seed = v.get<std::uint64_t>();
    } else if (key == "threads") {
        c.threads = v.get<unsigned>();
    } else if (key == "exact_cap") {
        c.solver.exhaustive_cap = v.get<std::size_t>();
    } else if (key == "elimination_cap") {
        c.solver.elimination_width_cap = v.get<std::size_t>();
    } else if (key == "allow_anneal") {
        c.solver.allow_anneal = v.get<bool>();
    } else if (key == "anneal") {
        if (v.is_string()) {
            c.solver.anneal = parse_anneal(v.get<std::string>());
        } else {
            for (const auto& [k, x] : v.items()) {
                if (k == "t_init") {
                    c.solver.anneal.schedule.t_init = x.get<double>();
                } else if (k == "t_final") {
                    c.solver.anneal.schedule.t_final = x.get<double>();
                } else if (k == "sweeps") {
                    c.solver.anneal.schedule.sweeps = x.get<int>();
                } else if (k == "restarts") {
                    c.solver.anneal.restarts = x.get<int>();
                } else {
                    throw Error(Errc::UnknownKey, "unknown key 'anneal." + k + "'");
                }
            }
        }
    } else if (key == "pairs") {
        c.pairs.clear();
        for (const auto& pr : v) {
            const auto ij = pr.get<std::vector<Vertex>>();
            if (ij.size() != 2) throw Error(Errc::InvalidConfig, "pairs are [i, j] arrays");
            c.pairs.emplace_back(ij[0], ij[1]);
        }
    } else if (key == "tail_thresholds") {
        c.tail_thresholds = v.get<std::vector<double>>();
    } else if (key == "spot_checks") {
        c.spot_checks = v.get<int>();
    } else if (key == "check_consistency") {
        c.check_consistency = v.get<bool>();
    } else if (key == "valley_exact_cap") {
        c.valley_exact_cap = v.get<std::size_t>();
    } else if (key == "timing") {
        c.timing = v.get<bool>();
    } else if (key == "out") {
        c.out = v.get<std::string>();
    } else if (key == "format") {
        c.format = v.get<std::string>();
        if (c.format != "csv" && c.format != "jsonl") throw Error(Errc::InvalidConfig, "format must be csv or jsonl");
    } else {
        throw Error(Errc::UnknownKey, "unknown key '" + key + "'");
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::Io, "cannot open '" + path + "'");
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

}  // namespace

bool ConfigSource::has(std::string_view key) const {
    return std::find(keys.begin(), keys.end(), key) != keys.end();
}

ConfigSource parse_config(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        parse_fail(std::string("malformed config: ") + e.what());
    }
    if (!doc.is_object()) parse_fail("config must be a JSON object");
    ConfigSource src;
    for (const auto& [key, value] : doc.items()) {
        try {
            apply_key(src.config, key, value);
        } catch (const json::exception& e) {
            parse_fail("key '" + key + "': " + e.what());
        } catch (const Error& e) {
            if (e.code() == Errc::UnknownKey) throw;
            parse_fail("key '" + key + "': " + e.what());
        }
        src.keys.push_back(key);
    }
    apply_defaults(src, src.has("replicates"), src.has("bc"));
    return src;
}

ConfigSource load_config_source(const std::string& path) {
    try {
        return parse_config(read_file(path));
    } catch (const Error& e) {
        if (e.code() == Errc::Io) throw;
        const std::string msg = e.what();
        throw Error(e.code(), path + ": " + msg.substr(msg.find(": ") + 2));
    }
}

ExperimentConfig load_config(const std::string& path) {
    auto src = load_config_source(path);
    try {
        src.config.validate();
    } catch (const Error& e) {
        const std::string msg = e.what();
        parse_fail(path + ": " + msg.substr(msg.find(": ") + 2));
    }
    return src.config;
}

void write_file_atomic(const std::string& path, const std::string& contents) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(Errc::Io, "cannot write '" + tmp.string() + "'");
        out << contents;
        out.flush();
        if (!out) throw Error(Errc::Io, "write failed for '" + tmp.string() + "'");
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp);
        throw Error(Errc::Io, "cannot rename into '" + path + "': " + ec.message());
    }
}

// ---------------------------------------------------------------- verify

std::vector<VerifyItem> run_verify(std::uint64_t seed, unsigned threads) {
    std::vector<VerifyItem> items;
    const Stream pick(seed, "verify");
    std::uint64_t draw = 0;

    // Interface identity and ground-state optimality over random regions.
    {
        VerifyItem identity{"interface_identity"};
        VerifyItem optimal{"interface_nonnegative"};
        const std::vector<Topology> shapes{Topology::open_cube(2, 3), Topology::open_cube(2, 4),
                                           Topology::open_cube(1, 8), Topology::torus(2, 4)};
        for (int k = 0; k < 80; ++k) {
            const auto g = build_cube(shapes[k % shapes.size()]);
            const auto bc = g.boundary().empty() ? BoundaryCondition::free() : BoundaryCondition::all_plus(g);
            const auto J = sample_disorder(g, seed, "verify/J/" + std::to_string(k));
            const auto gs = solve_exact(g, J, bc);
            for (int a = 0; a < 10; ++a) {
                std::vector<Vertex> region;
                for (Vertex v : g.interior()) {
                    if (pick.bits(draw++) >> 63) region.push_back(v);
                }
                const VertexSet A(std::move(region));
                ++identity.checks;
                ++optimal.checks;
                try {
                    const double delta = interface_energy(g, J, bc, gs.config, A);
                    if (delta < -1e-9) ++optimal.failures;
                } catch (const Error&) {
                    ++identity.failures;
                }
            }
        }
        items.push_back(identity);
        items.push_back(optimal);
    }

    // Exact engines agree with each other.
    {
        VerifyItem engines{"exact_engines_agree"};
        for (int k = 0; k < 60; ++k) {
            const auto g = build_cube(k % 2 ? Topology::open_cube(2, 4) : Topology::torus(2, 4));
            const auto bc = g.boundary().empty() ? BoundaryCondition::free() : BoundaryCondition::all_plus(g);
            const auto J = sample_disorder(g, seed, "verify/engines/" + std::to_string(k));
            const auto ex = solve_exact(g, J, bc, {ExactMethod::Exhaustive});
            for (ExactMethod m : {ExactMethod::BranchBound, ExactMethod::Elimination}) {
                const auto other = solve_exact(g, J, bc, {m});
                ++engines.checks;
                if (std::abs(other.energy - ex.energy) > 1e-9 || other.config != ex.config) ++engines.failures;
            }
        }
        items.push_back(engines);
    }

    // Overlap-droplet identity on chaos records.
    {
        VerifyItem overlap{"overlap_identity"};
        ExperimentConfig c;
        c.experiment = ExperimentKind::Chaos;
        c.L = {4};
        c.p = {0.1, 0.5};
        c.replicates = 100;
        c.seed = seed;
        c.threads = threads;
        const auto g = make_graph(c, 4);
        const double n = static_cast<double>(g.interior().size());
        for (const auto& r : run_chaos(c).records) {
            const double R = 1.0 - 2.0 * static_cast<double>(*r.droplet_size) / n;
            ++overlap.checks;
            if (std::abs(*r.R2 - R * R) > 1e-12) ++overlap.failures;
        }
        items.push_back(overlap);
    }

    // Ratio bound on exact replicates, and the exact valley oracle on chains.
    {
        VerifyItem bound{"ratio_bound"};
        ExperimentConfig c;
        c.experiment = ExperimentKind::Valleys;
        c.L = {4};
        c.p = {0.1, 0.3, 0.5};
        c.replicates = 100;
        c.seed = seed;
        c.threads = threads;
        c.valley_exact_cap = 0;
        for (const auto& r : run_valleys(c).records) {
            if (!r.exact) continue;
            ++bound.checks;
            if (!*r.bound_ok) ++bound.failures;
        }
        items.push_back(bound);

        VerifyItem valley{"valley_oracle"};
        c.d = 1;
        c.L = {8, 12};
        c.p.clear();
        c.K = 2.0;
        c.valley_exact_cap = 20;
        const auto res = run_valleys(c);
        valley.checks = res.oracle_checks;
        valley.failures = res.oracle_failures;
        items.push_back(valley);
    }

    // Threshold rule and isoperimetry for critical droplets on the torus.
    {
        ExperimentConfig c;
        c.experiment = ExperimentKind::Critical;
        c.bc = BcPolicy::Periodic;
        c.L = {4};
        c.replicates = 100;
        c.seed = seed;
        c.threads = threads;
        const auto res = run_critical(c);
        items.push_back({"threshold_rule", res.threshold_checks, res.threshold_failures});
        std::size_t nonempty = 0;
        for (const auto& r : res.records) nonempty += *r.Dsize > 0;
        items.push_back({"isoperimetry", nonempty, res.isoperimetry_violations});
    }
    return items;
}

// ---------------------------------------------------------------- command line

namespace {

struct InstanceFlags {
    int d = 2;
    int L = 4;
    std::string topology = "open";
    std::string bc;
    std::uint64_t seed = 0;
    std::string graph;
    std::string couplings;
    std::size_t exact_cap = 24;
    std::string anneal;
    std::string out;
    std::string kind = "rotate";
    double p = 0.0;
};

struct ExperimentFlags {
    std::string config;
    int d = 2;
    std::vector<int> L;
    std::string topology;
    std::string bc;
    std::string kind;
    std::vector<double> p;
    double K = 0.0;
    int replicates = 0;
    std::uint64_t seed = 0;
    unsigned threads = 1;
    std::size_t exact_cap = 24;
    std::string anneal;
    std::string out;
    std::string format;
    int spot_checks = 0;
    bool timing = false;
};

class UsageError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

bool given(const CLI::App* app, const std::string& name) { return app->count(name) > 0; }

struct Instance {
    LatticeGraph g;
    BoundaryCondition bc;
    Disorder J;
};

Instance make_instance(const InstanceFlags& f) {
    if (!f.anneal.empty()) parse_anneal(f.anneal);
    ExperimentConfig c;
    c.d = f.d;
    c.L = {f.L};
    c.seed = f.seed;
    c.topology = parse_topology(f.topology);
    Instance inst;
    int side = f.L;
    if (!f.graph.empty()) {
        inst.g = read_graph_file(f.graph);
        side = 0;
    } else {
        if (c.topology == TopologyKind::Explicit) throw Error(Errc::InvalidConfig, "unknown topology");
        inst.g = make_graph(c, side);
    }
    std::string bc = f.bc;
    if (bc.empty()) bc = inst.g.boundary().empty() ? "free" : "fixed-plus";
    c.bc = parse_bc_policy(bc);
    if (c.bc == BcPolicy::Periodic) c.bc = BcPolicy::Free;
    if (c.bc != BcPolicy::Free && inst.g.boundary().empty()) {
        throw Error(Errc::InvalidConfig, "a fixed boundary needs a graph with boundary vertices");
    }
    inst.bc = make_boundary(c, inst.g, side);
    if (!f.couplings.empty()) {
        std::ifstream in(f.couplings);
        if (!in) throw Error(Errc::Io, "cannot open '" + f.couplings + "'");
        inst.J = read_disorder_csv(in, inst.g);
    } else {
        inst.J = sample_disorder(inst.g, f.seed, "J");
    }
    return inst;
}

SolveResult solve_instance(const Instance& inst, const InstanceFlags& f, std::uint64_t anneal_seed,
                           const Disorder& J) {
    ExactOptions eo;
    eo.exhaustive_cap = f.exact_cap;
    eo.branch_bound_cap = f.exact_cap;
    try {
        return solve_exact(inst.g, J, inst.bc, eo);
    } catch (const Error& e) {
        if (e.code() != Errc::TooLarge) throw;
    }
    SolverPolicy policy;
    policy.exhaustive_cap = f.exact_cap;
    if (!f.anneal.empty()) policy.anneal = parse_anneal(f.anneal);
    return solve_with_policy(inst.g, J, inst.bc, policy, anneal_seed);
}

void add_instance_flags(CLI::App* app, InstanceFlags& f, bool with_perturbation) {
    app->add_option("--d", f.d, "Dimension")->check(CLI::PositiveNumber);
    app->add_option("--L", f.L, "Side length")->check(CLI::PositiveNumber);
    app->add_option("--topology", f.topology, "open, free or torus")
        ->check(CLI::IsMember({"open", "free", "torus"}));
    app->add_option("--bc", f.bc, "free, fixed-plus or fixed-random")
        ->check(CLI::IsMember({"free", "fixed-plus", "fixed-random", "periodic"}));
    app->add_option("--seed", f.seed, "Master seed");
    app->add_option("--graph", f.graph, "Graph file instead of a generated cube");
    app->add_option("--couplings", f.couplings, "Coupling CSV instead of sampled couplings");
    app->add_option("--exact-cap", f.exact_cap, "Largest free-spin count solved by enumeration");
    app->add_option("--anneal", f.anneal, "Tinit,Tfinal,sweeps,restarts");
    if (with_perturbation) {
        app->add_option("--kind", f.kind, "rotate or resample")->check(CLI::IsMember({"rotate", "resample"}));
        app->add_option("--p", f.p, "Perturbation strength in (0, 1)");
    }
}

void add_experiment_flags(CLI::App* app, ExperimentFlags& f) {
    app->add_option("--config", f.config, "JSON config file; flags override its values");
    app->add_option("--d", f.d, "Dimension")->check(CLI::PositiveNumber);
    app->add_option("--L", f.L, "Side lengths, comma separated")->delimiter(',');
    app->add_option("--topology", f.topology, "open, free or torus")
        ->check(CLI::IsMember({"open", "free", "torus"}));
    app->add_option("--bc", f.bc, "free, fixed-plus or fixed-random")
        ->check(CLI::IsMember({"free", "periodic", "fixed-plus", "fixed-random"}));
    app->add_option("--kind", f.kind, "rotate or resample")->check(CLI::IsMember({"rotate", "resample"}));
    auto* p = app->add_option("--p", f.p, "Perturbation strengths, comma separated")->delimiter(',');
    auto* K = app->add_option("--K", f.K, "Use p = K / L at each side length");
    p->excludes(K);
    app->add_option("--replicates", f.replicates, "Disorder replicates per parameter point");
    app->add_option("--seed", f.seed, "Master seed");
    app->add_option("--threads", f.threads, "Worker threads (0 = all cores)");
    app->add_option("--exact-cap", f.exact_cap, "Largest free-spin count solved by enumeration");
    app->add_option("--anneal", f.anneal, "Tinit,Tfinal,sweeps,restarts");
    app->add_option("--out", f.out, "Record file; the aggregate table goes to <out>.agg");
    app->add_option("--format", f.format, "csv or jsonl")->check(CLI::IsMember({"csv", "jsonl"}));
    app->add_option("--spot-checks", f.spot_checks, "Critical: replicates re-solved exactly after annealing");
    app->add_flag("--timing", f.timing, "Record wall time per replicate");
}

ExperimentConfig merge_config(const CLI::App* app, const ExperimentFlags& f, ExperimentKind kind) {
    ConfigSource src;
    if (!f.config.empty()) {
        src = load_config_source(f.config);
        if (src.has("experiment") && src.config.experiment != kind) {
            throw UsageError("config file is for experiment '" + experiment_name(src.config.experiment) + "'");
        }
    }
    ExperimentConfig& c = src.config;
    c.experiment = kind;
    if (given(app, "--d")) c.d = f.d;
    if (given(app, "--L")) c.L = f.L;
    if (given(app, "--topology")) c.topology = parse_topology(f.topology);
    if (given(app, "--bc")) c.bc = parse_bc_policy(f.bc);
    if (given(app, "--kind")) c.kind = parse_perturbation(f.kind);
    if (given(app, "--p")) {
        c.p = f.p;
        c.K.reset();
    }
    if (given(app, "--K")) {
        c.K = f.K;
        c.p.clear();
    }
    if (given(app, "--replicates")) c.replicates = f.replicates;
    if (given(app, "--seed")) c.seed = f.seed;
    if (given(app, "--threads")) {
        c.threads = f.threads;
    } else if (const char* env = std::getenv("EA_LAB_THREADS")) {
        try {
            std::size_t used = 0;
            const long v = std::stol(env, &used);
            if (used != std::string(env).size() || v < 0) throw std::invalid_argument(env);
            c.threads = static_cast<unsigned>(v);
        } catch (const std::exception&) {
            throw UsageError(std::string("EA_LAB_THREADS must be a nonnegative integer, got '") + env + "'");
        }
    } else if (!src.has("threads")) {
        c.threads = 1;
    }
    if (given(app, "--exact-cap")) c.solver.exhaustive_cap = f.exact_cap;
    if (given(app, "--anneal")) c.solver.anneal = parse_anneal(f.anneal);
    if (given(app, "--out")) c.out = f.out;
    if (given(app, "--format")) c.format = f.format;
    if (given(app, "--spot-checks")) c.spot_checks = f.spot_checks;
    if (given(app, "--timing")) c.timing = f.timing;
    apply_defaults(src, src.has("replicates") || given(app, "--replicates"), src.has("bc") || given(app, "--bc"));
    c.validate();
    return c;
}

void print_config_line(std::ostream& out, const Instance& inst) {
    out << "vertices=" << inst.g.num_vertices() << " edges=" << inst.g.num_edges()
        << " boundary=" << inst.g.boundary().size() << " interior=" << inst.g.interior().size()
        << " max_degree=" << inst.g.max_degree() << " bc=" << (inst.bc.is_fixed() ? "fixed" : "free") << '\n';
}

void print_solve(std::ostream& out, const SolveResult& r) {
    out << "energy=" << std::setprecision(17) << r.energy << '\n';
    out << "config=" << r.config.to_string() << '\n';
    out << "method=" << method_name(r.method) << '\n';
    out << "exact=" << (r.exact ? "true" : "false") << '\n';
    out << "tie=" << (r.tie_detected ? "true" : "false") << '\n';
}

int cmd_gen(const InstanceFlags& f, std::ostream& out) {
    const auto inst = make_instance(f);
    std::ostringstream graph, couplings;
    write_graph(graph, inst.g);
    write_disorder_csv(couplings, inst.g, inst.J);
    if (f.out.empty()) {
        out << graph.str() << couplings.str();
    } else {
        write_file_atomic(f.out + ".graph", graph.str());
        write_file_atomic(f.out + ".couplings.csv", couplings.str());
        out << "wrote " << f.out << ".graph and " << f.out << ".couplings.csv\n";
    }
    return 0;
}

int cmd_solve(const InstanceFlags& f, std::ostream& out) {
    const auto inst = make_instance(f);
    const auto r = solve_instance(inst, f, Stream(f.seed, "solve").bits(0), inst.J);
    print_solve(out, r);
    if (!f.out.empty()) write_file_atomic(f.out, r.config.to_string() + "\n");
    return 0;
}

int cmd_inspect(const CLI::App* app, const InstanceFlags& f, std::ostream& out) {
    const auto inst = make_instance(f);
    print_config_line(out, inst);
    const auto vals = inst.J.values();
    double lo = vals.empty() ? 0.0 : vals[0], hi = lo, sum = 0.0;
    for (double v : vals) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
        sum += v;
    }
    out << std::setprecision(17) << "couplings min=" << lo << " max=" << hi
        << " mean=" << (vals.empty() ? 0.0 : sum / static_cast<double>(vals.size())) << '\n';
    const Stream seeds(f.seed, "solve");
    const auto r0 = solve_instance(inst, f, seeds.bits(0), inst.J);
    print_solve(out, r0);
    if (given(app, "--p")) {
        check_p(f.p);
        const auto fresh = sample_disorder(inst.g, f.seed, "Jprime");
        const auto env = perturb(inst.J, fresh, PerturbationSpec(parse_perturbation(f.kind), f.p), f.seed, "mask");
        const auto r1 = solve_instance(inst, f, seeds.bits(1), env.perturbed);
        const auto s0 = canonicalize(inst.g, inst.bc, r0.config);
        const auto s1 = canonicalize(inst.g, inst.bc, r1.config);
        const auto ov = site_overlap(inst.g, s0, s1);
        const auto dr = droplet(inst.g, inst.bc, s0, s1, &inst.J);
        out << "perturbed_energy=" << r1.energy << " perturbed_exact=" << (r1.exact ? "true" : "false") << '\n';
        out << "R2=" << ov.R_squared << " droplet_size=" << dr.size << " boundary_size=" << dr.boundary_size
            << " delta=" << dr.delta << " ratio=" << dr.ratio << '\n';
        if (env.spec.kind() == PerturbationKind::GaussianRotation) {
            out << "ratio_bound=" << valley_bound_constant(f.p, fresh.max_abs()) << '\n';
        }
    }
    return 0;
}

int cmd_experiment(const CLI::App* app, const ExperimentFlags& f, ExperimentKind kind, std::ostream& out) {
    const auto cfg = merge_config(app, f, kind);
    const auto res = run_experiment(cfg);
    std::ostringstream agg;
    write_aggregate_table(agg, res.aggregates);
    if (!cfg.out.empty()) {
        std::ostringstream rec;
        if (cfg.format == "jsonl") {
            write_records_jsonl(rec, res.records);
        } else {
            write_records_csv(rec, res.records);
        }
        write_file_atomic(cfg.out, rec.str());
        write_file_atomic(cfg.out + ".agg", agg.str());
    }
    out << "# seed=" << cfg.seed << " records=" << res.records.size() << '\n';
    if (!res.pair_cells.empty()) {
        std::size_t pass = 0;
        for (const auto& c : res.pair_cells) pass += c.pass;
        out << "# pair_cells=" << res.pair_cells.size() << " passing=" << pass << '\n';
    }
    if (res.oracle_checks > 0) {
        out << "# oracle_checks=" << res.oracle_checks << " failures=" << res.oracle_failures << '\n';
    }
    if (kind == ExperimentKind::Critical) {
        out << "# threshold_checks=" << res.threshold_checks << " failures=" << res.threshold_failures
            << " isoperimetry_violations=" << res.isoperimetry_violations << '\n';
    }
    out << agg.str();
    return 0;
}

int cmd_verify(std::uint64_t seed, unsigned threads, std::ostream& out) {
    const auto items = run_verify(seed, threads);
    std::size_t checks = 0, failures = 0;
    for (const auto& it : items) {
        out << (it.failures == 0 ? "PASS " : "FAIL ") << it.name << " checks=" << it.checks
            << " failures=" << it.failures << '\n';
        checks += it.checks;
        failures += it.failures;
    }
    out << "total checks=" << checks << " failures=" << failures << '\n';
    return failures == 0 ? 0 : 2;
}

bool is_usage(Errc code) {
    return code == Errc::InvalidConfig || code == Errc::ParseError || code == Errc::UnknownKey ||
           code == Errc::InvalidPerturbation || code == Errc::InvalidRestarts || code == Errc::InvalidSchedule;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Edwards-Anderson ground-state laboratory", "ea-lab"};
    app.require_subcommand(1, 1);

    InstanceFlags gen_f, solve_f, inspect_f;
    add_instance_flags(app.add_subcommand("gen", "Write a cube graph and sampled couplings"), gen_f, false);
    add_instance_flags(app.add_subcommand("solve", "Ground state of one instance"), solve_f, false);
    add_instance_flags(app.add_subcommand("inspect", "Instance summary and optional perturbation"), inspect_f, true);
    app.get_subcommand("gen")->add_option("--out", gen_f.out, "Output prefix");
    app.get_subcommand("solve")->add_option("--out", solve_f.out, "Write the configuration here");

    const std::vector<std::pair<std::string, ExperimentKind>> experiments{
        {"chaos", ExperimentKind::Chaos},       {"paircorr", ExperimentKind::PairCorrelation},
        {"fractal", ExperimentKind::Fractal},   {"valleys", ExperimentKind::Valleys},
        {"tail", ExperimentKind::FixedRegionTail}, {"critical", ExperimentKind::Critical},
        {"decay", ExperimentKind::Decay}};
    std::vector<ExperimentFlags> exp_f(experiments.size());
    for (std::size_t k = 0; k < experiments.size(); ++k) {
        add_experiment_flags(app.add_subcommand(experiments[k].first, "Run the " + experiments[k].first + " experiment"),
                             exp_f[k]);
    }
    std::uint64_t verify_seed = 1;
    unsigned verify_threads = 1;
    auto* verify = app.add_subcommand("verify", "Run the built-in invariant suite");
    verify->add_option("--seed", verify_seed, "Seed for the verification instances");
    verify->add_option("--threads", verify_threads, "Worker threads");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 1;
    }

    try {
        if (app.got_subcommand("gen")) return cmd_gen(gen_f, out);
        if (app.got_subcommand("solve")) return cmd_solve(solve_f, out);
        if (app.got_subcommand("inspect")) return cmd_inspect(app.get_subcommand("inspect"), inspect_f, out);
        if (app.got_subcommand("verify")) return cmd_verify(verify_seed, verify_threads, out);
        for (std::size_t k = 0; k < experiments.size(); ++k) {
            if (app.got_subcommand(experiments[k].first)) {
                return cmd_experiment(app.get_subcommand(experiments[k].first), exp_f[k], experiments[k].second,
                                      out);
            }
        }
    } catch (const UsageError& e) {
        err << "ea-lab: " << e.what() << '\n';
        return 1;
    } catch (const Error& e) {
        err << "ea-lab: " << e.what() << '\n';
        return is_usage(e.code()) ? 1 : 2;
    } catch (const std::exception& e) {
        err << "ea-lab: " << e.what() << '\n';
        return 2;
    }
    err << "ea-lab: no subcommand\n";
    return 1;
}

}  // namespace ealab
