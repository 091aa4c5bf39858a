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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <atomic>
#include <cmath>
#include <random>
#include <sstream>

#include "ealab/error.hpp"
#include "ealab/experiments.hpp"
#include "ealab/observables.hpp"
#include "ealab/rng.hpp"

using namespace ealab;

namespace {

Errc error_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an ealab::Error");
    return Errc::Io;
}

ExperimentConfig small(ExperimentKind kind) {
    ExperimentConfig cfg;
    cfg.experiment = kind;
    cfg.d = 2;
    cfg.L = {3};
    cfg.replicates = 40;
    cfg.seed = 11;
    return cfg;
}

std::string csv_of(const ExperimentResult& r) {
    std::ostringstream out;
    write_records_csv(out, r.records);
    return out.str();
}

Record random_record(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1e3, 1e3);
    std::bernoulli_distribution coin(0.5);
    auto maybe_d = [&]() -> std::optional<double> {
        if (coin(rng)) return std::nullopt;
        // Mix ordinary values with awkward ones that need all 17 digits.
        return coin(rng) ? u(rng) : std::nextafter(u(rng), 0.0) * 1e-300;
    };
    auto maybe_u = [&]() -> std::optional<std::uint64_t> {
        if (coin(rng)) return std::nullopt;
        return rng() % 100000;
    };
    auto maybe_b = [&]() -> std::optional<bool> {
        if (coin(rng)) return std::nullopt;
        return coin(rng);
    };
    Record r;
    r.experiment = coin(rng) ? "chaos" : "decay";
    r.d = static_cast<int>(rng() % 4) + 1;
    r.L = static_cast<int>(rng() % 40) + 1;
    r.topology = coin(rng) ? "open" : "torus";
    r.bc = coin(rng) ? "fixed-plus" : "free";
    r.kind = coin(rng) ? "rotate" : "none";
    r.p = maybe_d();
    r.K = maybe_d();
    r.replicate = rng() % 5000;
    r.seed = rng();
    r.exact = coin(rng);
    r.R2 = maybe_d();
    r.droplet_size = maybe_u();
    r.boundary_size = maybe_u();
    r.delta = maybe_d();
    r.ratio = maybe_d();
    r.size_ok = maybe_b();
    r.bound_ok = maybe_b();
    r.Dsize = maybe_u();
    r.DboundarySize = maybe_u();
    r.event = maybe_b();
    r.r = maybe_u();
    r.energy0 = maybe_d();
    r.energy1 = maybe_d();
    r.walltime_ms = std::abs(u(rng));
    return r;
}

}  // namespace

TEST_CASE("mean estimate of a small sample") {
    const std::vector<double> v{1.0, 2.0, 3.0};
    const auto e = estimate_mean(v);
    CHECK(e.mean == doctest::Approx(2.0));
    CHECK(e.std_error == doctest::Approx(1.0 / std::sqrt(3.0)));
    CHECK(e.std_error == doctest::Approx(0.5773503).epsilon(1e-6));
    CHECK(e.n == 3);
    CHECK(e.lo95 <= e.mean);
    CHECK(e.mean <= e.hi95);

    const std::vector<double> one{4.5};
    const auto s = estimate_mean(one);
    CHECK(s.n == 1);
    CHECK(s.std_error == 0.0);

    CHECK(error_of([] { estimate_mean(std::vector<double>{}); }) == Errc::EmptyAggregation);
    CHECK(error_of([] { estimate_proportion(0, 0); }) == Errc::EmptyAggregation);
}

TEST_CASE("Wilson interval properties") {
    // Zero successes: the upper end has the closed form (z^2/n) / (1 + z^2/n).
    const double z2 = 1.959963984540054 * 1.959963984540054;
    const auto none = estimate_proportion(0, 10);
    CHECK(none.lo95 == 0.0);
    CHECK(none.hi95 == doctest::Approx((z2 / 10.0) / (1.0 + z2 / 10.0)));
    const auto all = estimate_proportion(10, 10);
    CHECK(all.hi95 == 1.0);
    CHECK(all.lo95 == doctest::Approx(1.0 - none.hi95));
    for (std::size_t n : {1u, 2u, 7u, 50u, 1000u}) {
        for (std::size_t k = 0; k <= n; k += std::max<std::size_t>(1, n / 9)) {
            const auto e = estimate_proportion(k, n);
            CHECK(e.lo95 >= 0.0);
            CHECK(e.hi95 <= 1.0);
            CHECK(e.lo95 <= e.mean);
            CHECK(e.mean <= e.hi95);
            CHECK(e.std_error >= 0.0);
            // Symmetry under relabeling successes and failures.
            const auto f = estimate_proportion(n - k, n);
            CHECK(e.lo95 == doctest::Approx(1.0 - f.hi95));
        }
    }
}

TEST_CASE("quantiles and pooled stderr") {
    CHECK(quantile({4.0, 1.0, 3.0, 2.0}, 0.5) == doctest::Approx(2.5));
    CHECK(quantile({4.0, 1.0, 3.0, 2.0}, 0.0) == 1.0);
    CHECK(quantile({4.0, 1.0, 3.0, 2.0}, 1.0) == 4.0);
    CHECK(quantile({1.0, 2.0, 3.0, 4.0, 5.0}, 0.1) == doctest::Approx(1.4));
    Estimate a, b;
    a.std_error = 3.0;
    b.std_error = 4.0;
    CHECK(pooled_stderr(a, b) == doctest::Approx(5.0));
}

TEST_CASE("parallel_for visits every index and reports the first failure") {
    for (unsigned threads : {1u, 3u, 8u}) {
        std::vector<std::atomic<int>> hits(97);
        parallel_for(hits.size(), threads, [&](std::size_t k) { ++hits[k]; });
        for (auto& h : hits) CHECK(h.load() == 1);
        try {
            parallel_for(50, threads, [](std::size_t k) {
                if (k == 17 || k == 30) throw Error(Errc::TooLarge, std::to_string(k));
            });
            FAIL("expected a rethrow");
        } catch (const Error& e) {
            CHECK(std::string(e.what()).find("17") != std::string::npos);
        }
    }
}

TEST_CASE("configuration validation") {
    auto cfg = small(ExperimentKind::Chaos);
    cfg.p = {0.3};
    CHECK_NOTHROW(cfg.validate());

    auto bad = cfg;
    bad.p = {1.0};
    CHECK(error_of([&] { bad.validate(); }) == Errc::InvalidConfig);
    bad = cfg;
    bad.K = 2.0;
    CHECK(error_of([&] { bad.validate(); }) == Errc::InvalidConfig);
    bad = cfg;
    bad.p.clear();
    CHECK(error_of([&] { bad.validate(); }) == Errc::InvalidConfig);
    bad = cfg;
    bad.replicates = 0;
    CHECK(error_of([&] { bad.validate(); }) == Errc::InvalidConfig);
    bad = cfg;
    bad.topology = TopologyKind::Torus;
    CHECK(error_of([&] { bad.validate(); }) == Errc::InvalidConfig);
    bad = cfg;
    bad.experiment = ExperimentKind::Fractal;
    bad.kind = PerturbationKind::Resample;
    CHECK(error_of([&] { bad.validate(); }) == Errc::InvalidConfig);

    // K = 1.5 with L = 3 gives p = 0.5.
    auto k = cfg;
    k.p.clear();
    k.K = 1.5;
    CHECK_NOTHROW(k.validate());
    CHECK(k.p_values(3) == std::vector<double>{0.5});
    k.K = 3.0;
    CHECK(error_of([&] { k.validate(); }) == Errc::InvalidConfig);

    CHECK(parse_experiment("paircorr") == ExperimentKind::PairCorrelation);
    CHECK(parse_experiment("tail") == ExperimentKind::FixedRegionTail);
    CHECK(parse_bc_policy("fixed_random_once") == BcPolicy::FixedRandomOnce);
    CHECK(error_of([] { parse_experiment("nope"); }) == Errc::InvalidConfig);
}

TEST_CASE("random fixed boundary is drawn once per side length") {
    auto cfg = small(ExperimentKind::Chaos);
    cfg.bc = BcPolicy::FixedRandomOnce;
    const auto g = make_graph(cfg, 4);
    const auto a = make_boundary(cfg, g, 4);
    const auto b = make_boundary(cfg, g, 4);
    CHECK(a.is_fixed());
    CHECK(std::ranges::equal(a.assignment(), b.assignment()));
    CHECK_NOTHROW(a.validate(g));
    std::size_t plus = 0;
    for (Spin s : a.assignment()) plus += s == 1;
    CHECK(plus > 0);
    CHECK(plus < a.assignment().size());
}

TEST_CASE("records round trip through CSV and JSON lines") {
    std::mt19937_64 rng(5);
    std::vector<Record> records;
    for (int k = 0; k < 1000; ++k) records.push_back(random_record(rng));

    std::stringstream csv;
    write_records_csv(csv, records);
    const auto back = read_records_csv(csv);
    REQUIRE(back.size() == records.size());
    for (std::size_t k = 0; k < records.size(); ++k) CHECK(back[k] == records[k]);

    std::stringstream jsonl;
    write_records_jsonl(jsonl, records);
    const auto back2 = read_records_jsonl(jsonl);
    REQUIRE(back2.size() == records.size());
    for (std::size_t k = 0; k < records.size(); ++k) CHECK(back2[k] == records[k]);

    // Writing again reproduces the bytes.
    std::stringstream again;
    write_records_csv(again, back);
    std::stringstream first;
    write_records_csv(first, records);
    CHECK(again.str() == first.str());
}

TEST_CASE("record readers reject malformed input") {
    std::istringstream wrong_header("experiment,d\nchaos,2\n");
    CHECK(error_of([&] { read_records_csv(wrong_header); }) == Errc::ParseError);
    std::istringstream short_row(record_csv_header() + "\nchaos,2,5\n");
    CHECK(error_of([&] { read_records_csv(short_row); }) == Errc::ParseError);
    std::istringstream bad_json("{\"experiment\": 3}\n");
    CHECK(error_of([&] { read_records_jsonl(bad_json); }) == Errc::ParseError);
    std::istringstream not_json("{oops\n");
    CHECK(error_of([&] { read_records_jsonl(not_json); }) == Errc::ParseError);
}

TEST_CASE("aggregate table layout") {
    AggregateRow row;
    row.experiment = "chaos";
    row.d = 2;
    row.L = 5;
    row.topology = "open";
    row.bc = "fixed-plus";
    row.kind = "rotate";
    row.p = 0.5;
    row.quantity = "R2";
    row.estimate = estimate_mean(std::vector<double>{1.0, 2.0, 3.0});
    std::ostringstream out;
    write_aggregate_table(out, std::span<const AggregateRow>(&row, 1));
    std::istringstream in(out.str());
    std::string header, line;
    std::getline(in, header);
    std::getline(in, line);
    CHECK(header.rfind("# experiment", 0) == 0);
    std::istringstream cells(line);
    std::vector<std::string> tok;
    for (std::string t; cells >> t;) tok.push_back(t);
    REQUIRE(tok.size() == 15);
    CHECK(tok[0] == "chaos");
    CHECK(tok[7] == "NaN");
    CHECK(tok[8] == "-");
    CHECK(tok[10] == "3");
    CHECK(std::stod(tok[11]) == 2.0);
}

TEST_CASE("chaos records satisfy the overlap-droplet identity and are thread independent") {
    for (BcPolicy bc : {BcPolicy::FixedAllPlus, BcPolicy::Periodic, BcPolicy::FixedRandomOnce}) {
        for (PerturbationKind kind : {PerturbationKind::GaussianRotation, PerturbationKind::Resample}) {
            auto cfg = small(ExperimentKind::Chaos);
            cfg.bc = bc;
            cfg.L = {3, 4};
            cfg.kind = kind;
            cfg.p = {0.2, 0.6};
            const auto r1 = run_chaos(cfg);
            REQUIRE(r1.records.size() == 2 * 2 * 40);
            for (const auto& r : r1.records) {
                const auto g = make_graph(cfg, r.L);
                const double n = static_cast<double>(g.interior().size());
                const double R = 1.0 - 2.0 * static_cast<double>(*r.droplet_size) / n;
                CHECK(*r.R2 == doctest::Approx(R * R).epsilon(1e-14));
                CHECK(*r.delta >= -1e-9);
                CHECK(*r.boundary_size <= g.num_edges());
                CHECK(r.exact);
            }
            cfg.threads = 4;
            CHECK(csv_of(run_chaos(cfg)) == csv_of(r1));
            REQUIRE(r1.find(4, 0.6, "-", "R2") != nullptr);
            CHECK(r1.find(4, 0.6, "-", "R2")->estimate.n == 40);
        }
    }
}

TEST_CASE("chaos with a single replicate reports zero stderr") {
    auto cfg = small(ExperimentKind::Chaos);
    cfg.replicates = 1;
    cfg.p = {0.3};
    const auto res = run_chaos(cfg);
    const auto* row = res.find(3, 0.3, "-", "R2");
    REQUIRE(row != nullptr);
    CHECK(row->estimate.n == 1);
    CHECK(row->estimate.std_error == 0.0);
}

TEST_CASE("pair exponent and left half region") {
    const auto g = build_cube(Topology::open_cube(2, 5));
    const auto plus = BoundaryCondition::all_plus(g);
    const Vertex a = g.vertex_at(std::vector<int>{1, 1});
    const Vertex b = g.vertex_at(std::vector<int>{1, 2});
    const Vertex c = g.vertex_at(std::vector<int>{2, 2});
    const Vertex far = g.vertex_at(std::vector<int>{4, 4});
    CHECK(pair_exponent(g, plus, a, b) == 1);
    CHECK(pair_exponent(g, plus, c, far) == 3);
    CHECK(pair_exponent(g, plus, a, far) == 2);
    CHECK(pair_exponent(g, BoundaryCondition::free(), a, far) == 6);

    CHECK(left_half_region(g).size() == 8);
    CHECK(left_half_region(build_cube(Topology::open_cube(2, 4))).size() == 6);
    CHECK(left_half_region(build_cube(Topology::open_cube(2, 6))).size() == 15);
    CHECK(left_half_region(build_cube(Topology::torus(2, 4))).size() == 8);
}

TEST_CASE("pair correlation cells carry the bound and pass flags") {
    auto cfg = small(ExperimentKind::PairCorrelation);
    cfg.L = {4};
    cfg.replicates = 200;
    cfg.p = {0.3};
    const auto res = run_pair_correlation(cfg);
    REQUIRE(res.pair_cells.size() == 9 * 8 / 2);
    std::size_t pass = 0;
    for (const auto& cell : res.pair_cells) {
        CHECK(cell.m >= 1);
        CHECK(cell.bound < 1.0);
        CHECK(cell.bound == doctest::Approx(std::pow(0.7, static_cast<double>(cell.m))));
        CHECK(std::abs(cell.estimate.mean) <= 1.0);
        pass += cell.pass;
    }
    CHECK(pass >= res.pair_cells.size() * 9 / 10);

    cfg.pairs = {{0, 1}};
    CHECK(error_of([&] { run_pair_correlation(cfg); }) == Errc::InvalidConfig);
}

TEST_CASE("fractal droplets vanish as p goes to zero") {
    auto cfg = small(ExperimentKind::Fractal);
    cfg.L = {4};
    cfg.p = {1e-6};
    cfg.replicates = 100;
    const auto res = run_fractal(cfg);
    const auto* empty = res.find(4, 1e-6, "-", "empty");
    REQUIRE(empty != nullptr);
    CHECK(empty->estimate.mean >= 0.95);
    for (const auto& r : res.records) {
        const auto g = make_graph(cfg, r.L);
        CHECK(*r.boundary_size <= g.num_edges());
    }
    CHECK(res.find(4, 1e-6, "q=0.5", "boundary_size_quantile") != nullptr);
    CHECK(res.find(4, 1e-6, "-", "covariate") != nullptr);
}

TEST_CASE("valleys on chains respect the exact oracle and the ratio bound") {
    auto cfg = small(ExperimentKind::Valleys);
    cfg.d = 1;
    cfg.L = {8, 12};
    cfg.K = 2.0;
    cfg.replicates = 60;
    const auto res = run_valleys(cfg);
    CHECK(res.oracle_checks > 0);
    CHECK(res.oracle_failures == 0);
    for (const auto& r : res.records) {
        CHECK(r.exact);
        CHECK(*r.bound_ok);
        CHECK(*r.p == doctest::Approx(2.0 / r.L));
    }
    CHECK(res.find(8, 0.25, "-", "F_exact") != nullptr);
}

TEST_CASE("fixed-region tail endpoints") {
    auto cfg = small(ExperimentKind::FixedRegionTail);
    cfg.L = {4};
    cfg.replicates = 100;
    const auto res = run_fixed_region_tail(cfg);
    const auto* zero = res.find(4, std::nullopt, "c=0", "P_ratio_below");
    const auto* ten = res.find(4, std::nullopt, "c=10", "P_ratio_below");
    REQUIRE(zero != nullptr);
    REQUIRE(ten != nullptr);
    CHECK(zero->estimate.mean == 0.0);
    CHECK(ten->estimate.mean == 1.0);
    for (const auto& r : res.records) CHECK(*r.droplet_size == 6);
}

TEST_CASE("critical droplets on a small torus") {
    auto cfg = small(ExperimentKind::Critical);
    cfg.bc = BcPolicy::Periodic;
    cfg.L = {4};
    cfg.replicates = 60;
    const auto res = run_critical(cfg);
    CHECK(res.isoperimetry_violations == 0);
    CHECK(res.threshold_checks == 60);
    CHECK(res.threshold_failures == 0);
    for (const auto& r : res.records) {
        CHECK(*r.Dsize >= 1);
        CHECK(2 * *r.Dsize <= 16);
    }

    // Forcing annealing makes the spot checks run.
    cfg.solver.elimination_width_cap = 0;
    cfg.solver.exhaustive_cap = 4;
    cfg.replicates = 6;
    cfg.spot_checks = 6;
    const auto an = run_critical(cfg);
    CHECK(an.oracle_checks == 6);
    CHECK(an.oracle_failures == 0);
}

TEST_CASE("decay events per depth") {
    auto cfg = small(ExperimentKind::Decay);
    cfg.L = {4, 5};
    cfg.replicates = 12;
    const auto res = run_decay(cfg);
    CHECK(res.records.size() == 12 * (1 + 2));
    REQUIRE(res.find(4, std::nullopt, "r=1", "P_event") != nullptr);
    REQUIRE(res.find(5, std::nullopt, "r=2", "P_event") != nullptr);
    CHECK(res.find(4, std::nullopt, "r=2", "P_event") == nullptr);
    for (const auto& row : res.aggregates) {
        CHECK(row.estimate.lo95 >= 0.0);
        CHECK(row.estimate.hi95 <= 1.0);
    }
    cfg.threads = 3;
    CHECK(csv_of(run_decay(cfg)) == csv_of(res));
}

TEST_CASE("chaos near p = 1 matches an independent-disorder control") {
    auto cfg = small(ExperimentKind::Chaos);
    cfg.L = {4};
    cfg.p = {1.0 - 1e-9};
    cfg.replicates = 600;
    const auto res = run_chaos(cfg);
    const auto& near_one = res.find(4, cfg.p[0], "-", "R2")->estimate;

    // Control: ground states of two disorders drawn from unrelated streams.
    const auto g = make_graph(cfg, 4);
    const auto bc = make_boundary(cfg, g, 4);
    std::vector<double> r2;
    for (int rep = 0; rep < 600; ++rep) {
        const auto a = sample_disorder(g, 99, "control/a/" + std::to_string(rep));
        const auto b = sample_disorder(g, 99, "control/b/" + std::to_string(rep));
        const auto sa = solve_exact(g, a, bc, {ExactMethod::Elimination});
        const auto sb = solve_exact(g, b, bc, {ExactMethod::Elimination});
        r2.push_back(site_overlap(g, sa.config, sb.config).R_squared);
    }
    const auto control = estimate_mean(r2);
    CHECK(std::abs(near_one.mean - control.mean) <= 3.0 * pooled_stderr(near_one, control));
}

TEST_CASE("fractal median boundary grows with p") {
    auto cfg = small(ExperimentKind::Fractal);
    cfg.L = {4};
    cfg.p = {0.05, 0.2, 0.5};
    cfg.replicates = 300;
    const auto res = run_fractal(cfg);
    double prev = -1.0;
    for (double p : cfg.p) {
        const double median = res.find(4, p, "q=0.5", "boundary_size_quantile")->estimate.mean;
        CHECK(median >= prev);
        prev = median;
    }
}
