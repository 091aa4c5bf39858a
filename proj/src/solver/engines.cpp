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

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <string>

#include "ealab/error.hpp"
#include "ealab/rng.hpp"
#include "solver/problem.hpp"

namespace ealab::detail {

namespace {

std::vector<std::uint32_t> free_variables(const ReducedProblem& P) {
    std::vector<std::uint32_t> out;
    for (std::uint32_t a = 0; a < P.n_vars; ++a) {
        if (!P.gauge || P.gauge->first != a) out.push_back(a);
    }
    return out;
}

std::vector<Spin> initial_assignment(const ReducedProblem& P) {
    std::vector<Spin> x(P.n_vars, 1);
    if (P.gauge) x[P.gauge->first] = P.gauge->second;
    return x;
}

}  // namespace

// Gray-code walk: each step flips one variable and updates the energy and the
// neighbors' local fields incrementally.
EngineResult solve_exhaustive(const ReducedProblem& P) {
    const auto vars = free_variables(P);
    if (vars.size() > 40) throw Error(Errc::TooLarge, "exhaustive enumeration limited to 40 free variables");
    std::vector<Spin> x = initial_assignment(P);
    std::vector<double> f(P.n_vars);
    auto refresh = [&](double& e) {
        for (std::uint32_t a = 0; a < P.n_vars; ++a) f[a] = P.local_field(x, a);
        e = P.energy(x);
    };
    double e = 0.0;
    refresh(e);

    Incumbent inc(P);
    inc.offer(e, x);
    const std::uint64_t steps = std::uint64_t{1} << vars.size();
    for (std::uint64_t t = 1; t < steps; ++t) {
        const std::uint32_t a = vars[static_cast<std::size_t>(std::countr_zero(t))];
        e += 2.0 * x[a] * f[a];
        x[a] = static_cast<Spin>(-x[a]);
        const double delta = 2.0 * x[a];
        for (std::size_t k = P.adj_start[a]; k < P.adj_start[a + 1]; ++k) f[P.adj_var[k]] += delta * P.adj_J[k];
        if ((t & 0xFFFF) == 0) refresh(e);
        if (e <= inc.best() + kTieTolerance) inc.offer(P.energy(x), x);
    }
    return inc.take();
}

namespace {

class BranchBound {
  public:
    explicit BranchBound(const ReducedProblem& P) : P_(P), inc_(P), x_(P.n_vars, 0), pos_(P.n_vars) {
        if (P.gauge) order_.push_back(P.gauge->first);
        for (std::uint32_t a = 0; a < P.n_vars; ++a) {
            if (!P.gauge || P.gauge->first != a) order_.push_back(a);
        }
        for (std::size_t k = 0; k < order_.size(); ++k) pos_[order_[k]] = k;
        // rest_[k]: sum of |J| over couplings with an endpoint at position >= k, plus |h| there.
        rest_.assign(order_.size() + 1, 0.0);
        std::vector<double> at(order_.size() + 1, 0.0);
        for (const auto& c : P.couplings) at[std::max(pos_[c.a], pos_[c.b])] += std::abs(c.J);
        for (std::uint32_t a = 0; a < P.n_vars; ++a) at[pos_[a]] += std::abs(P.field[a]);
        for (std::size_t k = order_.size(); k-- > 0;) rest_[k] = rest_[k + 1] + at[k];
    }

    EngineResult run() {
        descend(0, P_.offset);
        return inc_.take();
    }

  private:
    void descend(std::size_t depth, double partial) {
        if (depth == order_.size()) {
            inc_.offer(P_.energy(x_), x_);
            return;
        }
        const std::uint32_t a = order_[depth];
        double local = P_.field[a];
        for (std::size_t k = P_.adj_start[a]; k < P_.adj_start[a + 1]; ++k) {
            const std::uint32_t b = P_.adj_var[k];
            if (pos_[b] < depth) local += P_.adj_J[k] * x_[b];
        }
        Spin first = local >= 0.0 ? Spin{1} : Spin{-1};
        Spin choices[2] = {first, static_cast<Spin>(-first)};
        int count = 2;
        if (P_.gauge && P_.gauge->first == a) {
            choices[0] = P_.gauge->second;
            count = 1;
        }
        for (int c = 0; c < count; ++c) {
            const double next = partial - choices[c] * local;
            if (next - rest_[depth + 1] > inc_.best() + kTieTolerance) continue;
            x_[a] = choices[c];
            descend(depth + 1, next);
        }
        x_[a] = 0;
    }

    const ReducedProblem& P_;
    Incumbent inc_;
    std::vector<Spin> x_;
    std::vector<std::uint32_t> order_;
    std::vector<std::size_t> pos_;
    std::vector<double> rest_;
};

}  // namespace

EngineResult solve_branch_bound(const ReducedProblem& P) { return BranchBound(P).run(); }

EngineResult solve_anneal(const ReducedProblem& P, const AnnealOptions& options, std::uint64_t seed) {
    const auto& sched = options.schedule;
    Incumbent inc(P);
    std::vector<Spin> x(P.n_vars);
    std::vector<double> f(P.n_vars);
    const double ratio = sched.t_final / sched.t_init;

    auto flip = [&](std::uint32_t a) {
        x[a] = static_cast<Spin>(-x[a]);
        const double delta = 2.0 * x[a];
        for (std::size_t k = P.adj_start[a]; k < P.adj_start[a + 1]; ++k) f[P.adj_var[k]] += delta * P.adj_J[k];
    };

    for (int r = 0; r < options.restarts; ++r) {
        auto rng = Stream(seed, "anneal/" + std::to_string(r)).engine();
        for (auto& s : x) s = (rng() >> 63) ? Spin{1} : Spin{-1};
        for (std::uint32_t a = 0; a < P.n_vars; ++a) f[a] = P.local_field(x, a);

        for (int sweep = 0; sweep < sched.sweeps; ++sweep) {
            const double frac = sched.sweeps > 1 ? static_cast<double>(sweep) / (sched.sweeps - 1) : 0.0;
            const double beta = 1.0 / (sched.t_init * std::pow(ratio, frac));
            for (std::uint32_t a = 0; a < P.n_vars; ++a) {
                const double dE = 2.0 * x[a] * f[a];
                if (dE <= 0.0 || to_unit_open(rng()) < std::exp(-beta * dE)) flip(a);
            }
        }
        // zero-temperature quench to a single-flip local minimum
        for (std::uint32_t a = 0; a < P.n_vars; ++a) f[a] = P.local_field(x, a);
        bool improved = true;
        while (improved) {
            improved = false;
            for (std::uint32_t a = 0; a < P.n_vars; ++a) {
                if (2.0 * x[a] * f[a] < -kTieTolerance) {
                    flip(a);
                    improved = true;
                }
            }
        }
        std::vector<Spin> candidate = x;
        P.canonicalize(candidate);
        inc.offer(P.energy(candidate), candidate);
    }
    return inc.take();
}

EliminationPlan::EliminationPlan(const ReducedProblem& P) : problem_(&P) {
    const std::size_t n = P.n_vars;
    std::vector<std::uint32_t> last_use(n);
    for (std::uint32_t a = 0; a < n; ++a) {
        last_use[a] = a;
        for (std::size_t k = P.adj_start[a]; k < P.adj_start[a + 1]; ++k) last_use[a] = std::max(last_use[a], P.adj_var[k]);
    }
    std::vector<std::uint32_t> frontier;
    for (std::uint32_t a = 0; a < n; ++a) {
        Step step;
        step.var = a;
        step.old_size = static_cast<std::uint32_t>(frontier.size());
        for (std::size_t k = P.adj_start[a]; k < P.adj_start[a + 1]; ++k) {
            const std::uint32_t b = P.adj_var[k];
            if (b >= a) continue;
            const auto it = std::find(frontier.begin(), frontier.end(), b);
            step.neighbor_bit.push_back(static_cast<std::uint32_t>(it - frontier.begin()));
            step.neighbor_J.push_back(P.adj_J[k]);
        }
        std::vector<std::uint32_t> next;
        for (std::uint32_t bit = 0; bit < frontier.size(); ++bit) {
            if (last_use[frontier[bit]] > a) {
                step.kept_bits.push_back(bit);
                next.push_back(frontier[bit]);
            }
        }
        step.keep_var = last_use[a] > a;
        if (step.keep_var) next.push_back(a);
        step.new_size = static_cast<std::uint32_t>(next.size());
        width_ = std::max<std::size_t>(width_, step.old_size + 1);
        cost_ += std::ldexp(1.0, static_cast<int>(step.old_size + 1));
        frontier = std::move(next);
        steps_.push_back(std::move(step));
    }
}

EngineResult EliminationPlan::solve(std::span<const double> fields, Workspace& ws) const {
    const ReducedProblem& P = *problem_;
    constexpr double inf = std::numeric_limits<double>::infinity();
    ws.table.assign(1, P.offset);
    ws.count.assign(1, 1);
    ws.back.resize(steps_.size());

    for (std::size_t k = 0; k < steps_.size(); ++k) {
        const Step& st = steps_[k];
        const std::size_t new_states = std::size_t{1} << st.new_size;
        ws.next.assign(new_states, inf);
        ws.next_count.assign(new_states, 0);
        auto& bp = ws.back[k];
        bp.assign(new_states, 0);

        int lo = 0, hi = 1;
        if (P.gauge && P.gauge->first == st.var) lo = hi = (P.gauge->second > 0 ? 1 : 0);

        const std::size_t old_states = std::size_t{1} << st.old_size;
        for (std::uint32_t s = 0; s < old_states; ++s) {
            const double base = ws.table[s];
            if (base == inf) continue;
            double local = fields[st.var];
            for (std::size_t m = 0; m < st.neighbor_bit.size(); ++m) {
                local += ((s >> st.neighbor_bit[m]) & 1u) ? st.neighbor_J[m] : -st.neighbor_J[m];
            }
            std::uint32_t packed = 0;
            for (std::size_t m = 0; m < st.kept_bits.size(); ++m) packed |= ((s >> st.kept_bits[m]) & 1u) << m;
            for (int xb = lo; xb <= hi; ++xb) {
                const double value = base - (xb ? local : -local);
                const std::uint32_t ns = packed | (st.keep_var ? static_cast<std::uint32_t>(xb) << (st.new_size - 1) : 0u);
                double& slot = ws.next[ns];
                if (value < slot - kTieTolerance) {
                    slot = value;
                    ws.next_count[ns] = ws.count[s];
                    bp[ns] = (s << 1) | static_cast<std::uint32_t>(xb);
                } else if (value <= slot + kTieTolerance) {
                    ws.next_count[ns] = static_cast<std::uint8_t>(std::min(2, ws.next_count[ns] + ws.count[s]));
                }
            }
        }
        std::swap(ws.table, ws.next);
        std::swap(ws.count, ws.next_count);
    }

    EngineResult out;
    out.x.assign(P.n_vars, 1);
    out.tie = !ws.count.empty() && ws.count[0] >= 2;
    std::uint32_t state = 0;
    for (std::size_t k = steps_.size(); k-- > 0;) {
        const std::uint32_t entry = ws.back[k][state];
        out.x[steps_[k].var] = (entry & 1u) ? Spin{1} : Spin{-1};
        state = entry >> 1;
    }
    return out;
}

}  // namespace ealab::detail
