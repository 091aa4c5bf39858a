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
#include <atomic>
#include <cmath>
#include <exception>
#include <thread>

#include "ealab/error.hpp"
#include "ealab/experiments.hpp"

namespace ealab {

namespace {
constexpr double kZ95 = 1.959963984540054;
}

Estimate estimate_mean(std::span<const double> values) {
    if (values.empty()) throw Error(Errc::EmptyAggregation, "no values to aggregate");
    Estimate e;
    e.n = values.size();
    double sum = 0.0;
    for (double v : values) sum += v;
    e.mean = sum / static_cast<double>(e.n);
    if (e.n > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - e.mean) * (v - e.mean);
        e.std_error = std::sqrt(ss / static_cast<double>(e.n - 1) / static_cast<double>(e.n));
    }
    e.lo95 = e.mean - kZ95 * e.std_error;
    e.hi95 = e.mean + kZ95 * e.std_error;
    return e;
}

Estimate estimate_proportion(std::size_t successes, std::size_t n) {
    if (n == 0) throw Error(Errc::EmptyAggregation, "no trials to aggregate");
    if (successes > n) throw Error(Errc::InvalidConfig, "more successes than trials");
    Estimate e;
    e.n = n;
    const double nn = static_cast<double>(n);
    const double ph = static_cast<double>(successes) / nn;
    e.mean = ph;
    e.std_error = std::sqrt(ph * (1.0 - ph) / nn);
    const double z2 = kZ95 * kZ95;
    const double denom = 1.0 + z2 / nn;
    const double center = (ph + z2 / (2.0 * nn)) / denom;
    const double half = kZ95 * std::sqrt(ph * (1.0 - ph) / nn + z2 / (4.0 * nn * nn)) / denom;
    e.lo95 = std::max(0.0, std::min(ph, center - half));
    e.hi95 = std::min(1.0, std::max(ph, center + half));
    return e;
}

double pooled_stderr(const Estimate& a, const Estimate& b) {
    return std::sqrt(a.std_error * a.std_error + b.std_error * b.std_error);
}

double quantile(std::vector<double> values, double q) {
    if (values.empty()) throw Error(Errc::EmptyAggregation, "no values for a quantile");
    std::sort(values.begin(), values.end());
    const double h = q * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t k = next.fetch_add(1); k < n; k = next.fetch_add(1)) {
            try {
                fn(k);
            } catch (...) {
                errors[k] = std::current_exception();
            }
        }
    };
    const auto workers = static_cast<unsigned>(std::min<std::size_t>(threads, n));
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned t = 0; t < workers; ++t) pool.emplace_back(worker);
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

}  // namespace ealab
