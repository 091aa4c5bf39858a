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

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ealab/disorder.hpp"
#include "ealab/lattice.hpp"
#include "ealab/solver.hpp"

namespace ealab {

// ---------------------------------------------------------------- statistics

struct Estimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t n = 0;
    double lo95 = 0.0;
    double hi95 = 0.0;
};

/// Sample mean, standard error sd/sqrt(n) with the n-1 variance, and a normal 95% interval.
/// n = 1 gives stderr 0. Throws EmptyAggregation for n = 0.
Estimate estimate_mean(std::span<const double> values);
/// Proportion with the Wilson 95% interval; stderr is sqrt(p(1-p)/n).
Estimate estimate_proportion(std::size_t successes, std::size_t n);
/// sqrt of the summed squared standard errors.
double pooled_stderr(const Estimate& a, const Estimate& b);
/// Linear-interpolated sample quantile (type 7), q in [0, 1].
double quantile(std::vector<double> values, double q);

// ---------------------------------------------------------------- configuration

enum class ExperimentKind { Chaos, PairCorrelation, Fractal, Valleys, FixedRegionTail, Critical, Decay };
enum class BcPolicy { Free, Periodic, FixedAllPlus, FixedRandomOnce };

/// Record identifiers: chaos, pair_correlation, fractal, valleys, fixed_region_tail, critical, decay.
std::string experiment_name(ExperimentKind kind);
ExperimentKind parse_experiment(const std::string& name);
/// free, periodic, fixed-plus, fixed-random. Parsing also accepts fixed_all_plus and fixed_random_once.
std::string bc_policy_name(BcPolicy policy);
BcPolicy parse_bc_policy(const std::string& name);
TopologyKind parse_topology(const std::string& name);
PerturbationKind parse_perturbation(const std::string& name);

struct ExperimentConfig {
    ExperimentKind experiment = ExperimentKind::Chaos;
    int d = 2;
    std::vector<int> L{5};
    TopologyKind topology = TopologyKind::OpenCube;
    BcPolicy bc = BcPolicy::FixedAllPlus;
    PerturbationKind kind = PerturbationKind::GaussianRotation;
    std::vector<double> p;
    /// When set, p = K / L at each L and the p list must be empty.
    std::optional<double> K;
    int replicates = 500;
    std::uint64_t seed = 0;
    SolverPolicy solver;
    /// 0 means one worker per hardware thread.
    unsigned threads = 1;
    /// Pair correlation: interior pairs; empty means all interior pairs.
    std::vector<std::pair<Vertex, Vertex>> pairs;
    /// Fixed-region tail: thresholds c for P(ratio < c).
    std::vector<double> tail_thresholds{0.0, 0.05, 0.1, 0.2, 0.5, 1.0, 2.0, 10.0};
    /// Critical: replicates per L re-solved exactly when the policy fell back to annealing.
    int spot_checks = 0;
    /// Critical: also solve the unconstrained problem to check the threshold rule.
    bool check_consistency = true;
    /// Valleys: exact valley statistic for instances with at most this many interior sites.
    std::size_t valley_exact_cap = 20;
    /// Record wall time per replicate; off by default so outputs are byte-reproducible.
    bool timing = false;
    /// Record output path; empty writes nothing. The aggregate table goes to out + ".agg".
    std::string out;
    /// "csv" or "jsonl".
    std::string format = "csv";

    /// Throws InvalidConfig on inconsistent settings.
    void validate() const;
    /// The p values used at side L.
    std::vector<double> p_values(int side) const;
    TopologyKind effective_topology() const;
};

LatticeGraph make_graph(const ExperimentConfig& cfg, int side);
/// The boundary condition used at side L; fixed_random_once draws gamma from a stream keyed by seed and L.
BoundaryCondition make_boundary(const ExperimentConfig& cfg, const LatticeGraph& g, int side);

// ---------------------------------------------------------------- records

struct Record {
    std::string experiment;
    int d = 0;
    int L = 0;
    std::string topology;
    std::string bc;
    std::string kind;
    std::optional<double> p;
    std::optional<double> K;
    std::uint64_t replicate = 0;
    std::uint64_t seed = 0;
    bool exact = false;
    std::optional<double> R2;
    std::optional<std::uint64_t> droplet_size;
    std::optional<std::uint64_t> boundary_size;
    std::optional<double> delta;
    std::optional<double> ratio;
    std::optional<bool> size_ok;
    std::optional<bool> bound_ok;
    std::optional<std::uint64_t> Dsize;
    std::optional<std::uint64_t> DboundarySize;
    std::optional<bool> event;
    std::optional<std::uint64_t> r;
    std::optional<double> energy0;
    std::optional<double> energy1;
    double walltime_ms = 0.0;

    friend bool operator==(const Record&, const Record&) = default;
};

/// Header line of the record CSV.
const std::string& record_csv_header();
void write_records_csv(std::ostream& out, std::span<const Record> records);
std::vector<Record> read_records_csv(std::istream& in);
void write_records_jsonl(std::ostream& out, std::span<const Record> records);
std::vector<Record> read_records_jsonl(std::istream& in);

struct AggregateRow {
    std::string experiment;
    int d = 0;
    int L = 0;
    std::string topology;
    std::string bc;
    std::string kind;
    std::optional<double> p;
    std::optional<double> K;
    /// Sub-point label, e.g. a pair "i-j/m" or a threshold "c=0.1"; "-" when unused.
    std::string key = "-";
    std::string quantity;
    Estimate estimate;
};

/// Whitespace-separated table with a commented header, one row per parameter point and quantity.
void write_aggregate_table(std::ostream& out, std::span<const AggregateRow> rows);

/// Mean of a numeric record field per (L, p) in first-appearance order.
std::vector<AggregateRow> aggregate(std::span<const Record> records, const std::string& field);

// ---------------------------------------------------------------- results

struct PairCell {
    int L = 0;
    double p = 0.0;
    Vertex i = 0;
    Vertex j = 0;
    std::size_t m = 0;
    double bound = 0.0;
    Estimate estimate;
    /// |estimate| <= bound + 3 stderr.
    bool pass = false;
};

struct ExperimentResult {
    std::vector<Record> records;
    std::vector<AggregateRow> aggregates;
    std::vector<PairCell> pair_cells;
    /// Oracle comparisons run alongside (F_exact vs ratio, critical spot checks, threshold rule).
    std::size_t oracle_checks = 0;
    std::size_t oracle_failures = 0;
    /// Critical droplets violating |dD| >= 2 |D|^(1 - 1/d) on a torus.
    std::size_t isoperimetry_violations = 0;
    std::size_t threshold_checks = 0;
    std::size_t threshold_failures = 0;

    const AggregateRow* find(int L, std::optional<double> p, const std::string& key, const std::string& quantity) const;
};

/// Runs fn(0..n-1) on up to `threads` workers; rethrows the exception of the lowest failing index.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn);

ExperimentResult run_chaos(const ExperimentConfig& cfg);
ExperimentResult run_pair_correlation(const ExperimentConfig& cfg);
ExperimentResult run_fractal(const ExperimentConfig& cfg);
ExperimentResult run_valleys(const ExperimentConfig& cfg);
ExperimentResult run_fixed_region_tail(const ExperimentConfig& cfg);
ExperimentResult run_critical(const ExperimentConfig& cfg);
ExperimentResult run_decay(const ExperimentConfig& cfg);
ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// (1 - p)^m with m = min{d(i,j), d(i,B) + d(j,B)}; boundary distances count only under a fixed boundary.
std::size_t pair_exponent(const LatticeGraph& g, const BoundaryCondition& bc, Vertex i, Vertex j);

/// Interior vertices with first coordinate at most floor(L/2) (open cube) or below L/2 (torus).
VertexSet left_half_region(const LatticeGraph& g);

}  // namespace ealab
