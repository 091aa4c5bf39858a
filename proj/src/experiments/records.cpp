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
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>

#include "ealab/error.hpp"
#include "ealab/experiments.hpp"
#include "json.hpp"

namespace ealab {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

template <class T>
std::string opt(const std::optional<T>& v) {
    if (!v) return {};
    if constexpr (std::is_same_v<T, double>) {
        return fmt(*v);
    } else if constexpr (std::is_same_v<T, bool>) {
        return *v ? "1" : "0";
    } else {
        return std::to_string(*v);
    }
}

// Fields in schema order: name, CSV writer, CSV reader, JSON writer, JSON reader.
struct Field {
    const char* name;
    std::string (*to_csv)(const Record&);
    void (*from_csv)(Record&, const std::string&);
    ordered_json (*to_json)(const Record&);
    void (*from_json)(Record&, const ordered_json&);
};

[[noreturn]] void parse_fail(const std::string& what) { throw Error(Errc::ParseError, what); }

double parse_double(const std::string& s) {
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE) parse_fail("bad number '" + s + "'");
    return v;
}

std::uint64_t parse_u64(const std::string& s) {
    errno = 0;
    char* end = nullptr;
    const auto v = std::strtoull(s.c_str(), &end, 10);
    if (s.empty() || s[0] == '-' || end != s.c_str() + s.size() || errno == ERANGE) parse_fail("bad integer '" + s + "'");
    return v;
}

bool parse_bool(const std::string& s) {
    if (s == "1") return true;
    if (s == "0") return false;
    parse_fail("bad flag '" + s + "'");
}

template <class T>
std::optional<T> parse_opt(const std::string& s) {
    if (s.empty()) return std::nullopt;
    if constexpr (std::is_same_v<T, double>) {
        return parse_double(s);
    } else if constexpr (std::is_same_v<T, bool>) {
        return parse_bool(s);
    } else {
        return parse_u64(s);
    }
}

template <class T>
ordered_json json_opt(const std::optional<T>& v) {
    return v ? ordered_json(*v) : ordered_json(nullptr);
}

template <class T>
std::optional<T> opt_json(const ordered_json& j) {
    if (j.is_null()) return std::nullopt;
    if constexpr (std::is_same_v<T, bool>) {
        if (j.is_boolean()) return j.get<bool>();
        return j.get<int>() != 0;
    } else {
        return j.get<T>();
    }
}

#define EALAB_STR_FIELD(F)                                                                                   \
    Field {                                                                                                  \
        #F, [](const Record& r) { return r.F; }, [](Record& r, const std::string& s) { r.F = s; },          \
            [](const Record& r) { return ordered_json(r.F); },                                               \
            [](Record& r, const ordered_json& j) { r.F = j.get<std::string>(); }                             \
    }
#define EALAB_INT_FIELD(F, T)                                                                                \
    Field {                                                                                                  \
        #F, [](const Record& r) { return std::to_string(r.F); },                                             \
            [](Record& r, const std::string& s) {                                                            \
                const auto v = parse_u64(s);                                                                 \
                r.F = static_cast<T>(v);                                                                     \
            },                                                                                               \
            [](const Record& r) { return ordered_json(r.F); },                                               \
            [](Record& r, const ordered_json& j) { r.F = j.get<T>(); }                                       \
    }
#define EALAB_OPT_FIELD(F, T)                                                                                \
    Field {                                                                                                  \
        #F, [](const Record& r) { return opt(r.F); }, [](Record& r, const std::string& s) { r.F = parse_opt<T>(s); }, \
            [](const Record& r) { return json_opt(r.F); },                                                   \
            [](Record& r, const ordered_json& j) { r.F = opt_json<T>(j); }                                   \
    }

const std::vector<Field>& fields() {
    static const std::vector<Field> f = {
        EALAB_STR_FIELD(experiment),
        EALAB_INT_FIELD(d, int),
        EALAB_INT_FIELD(L, int),
        EALAB_STR_FIELD(topology),
        EALAB_STR_FIELD(bc),
        EALAB_STR_FIELD(kind),
        EALAB_OPT_FIELD(p, double),
        EALAB_OPT_FIELD(K, double),
        EALAB_INT_FIELD(replicate, std::uint64_t),
        EALAB_INT_FIELD(seed, std::uint64_t),
        Field{"exact", [](const Record& r) { return std::string(r.exact ? "1" : "0"); },
              [](Record& r, const std::string& s) { r.exact = parse_bool(s); },
              [](const Record& r) { return ordered_json(r.exact); },
              [](Record& r, const ordered_json& j) { r.exact = *opt_json<bool>(j); }},
        EALAB_OPT_FIELD(R2, double),
        EALAB_OPT_FIELD(droplet_size, std::uint64_t),
        EALAB_OPT_FIELD(boundary_size, std::uint64_t),
        EALAB_OPT_FIELD(delta, double),
        EALAB_OPT_FIELD(ratio, double),
        EALAB_OPT_FIELD(size_ok, bool),
        EALAB_OPT_FIELD(bound_ok, bool),
        EALAB_OPT_FIELD(Dsize, std::uint64_t),
        EALAB_OPT_FIELD(DboundarySize, std::uint64_t),
        EALAB_OPT_FIELD(event, bool),
        EALAB_OPT_FIELD(r, std::uint64_t),
        EALAB_OPT_FIELD(energy0, double),
        EALAB_OPT_FIELD(energy1, double),
        Field{"walltime_ms", [](const Record& r) { return fmt(r.walltime_ms); },
              [](Record& r, const std::string& s) { r.walltime_ms = parse_double(s); },
              [](const Record& r) { return ordered_json(r.walltime_ms); },
              [](Record& r, const ordered_json& j) { r.walltime_ms = j.get<double>(); }},
    };
    return f;
}

#undef EALAB_STR_FIELD
#undef EALAB_INT_FIELD
#undef EALAB_OPT_FIELD

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == sep) {
            out.push_back(std::move(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(std::move(cur));
    return out;
}

}  // namespace

const std::string& record_csv_header() {
    static const std::string header = [] {
        std::string h;
        for (const auto& f : fields()) {
            if (!h.empty()) h += ',';
            h += f.name;
        }
        return h;
    }();
    return header;
}

void write_records_csv(std::ostream& out, std::span<const Record> records) {
    out << record_csv_header() << '\n';
    for (const Record& r : records) {
        bool first = true;
        for (const auto& f : fields()) {
            if (!first) out << ',';
            out << f.to_csv(r);
            first = false;
        }
        out << '\n';
    }
}

std::vector<Record> read_records_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != record_csv_header()) parse_fail("missing or unexpected record header");
    std::vector<Record> out;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto cells = split(line, ',');
        if (cells.size() != fields().size()) {
            parse_fail("line " + std::to_string(line_no) + ": expected " + std::to_string(fields().size()) + " columns");
        }
        Record r;
        try {
            for (std::size_t k = 0; k < cells.size(); ++k) fields()[k].from_csv(r, cells[k]);
        } catch (const Error& e) {
            parse_fail("line " + std::to_string(line_no) + ": " + e.what());
        }
        out.push_back(std::move(r));
    }
    return out;
}

void write_records_jsonl(std::ostream& out, std::span<const Record> records) {
    for (const Record& r : records) {
        ordered_json j = ordered_json::object();
        for (const auto& f : fields()) j[f.name] = f.to_json(r);
        out << j.dump() << '\n';
    }
}

std::vector<Record> read_records_jsonl(std::istream& in) {
    std::vector<Record> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        try {
            const auto j = ordered_json::parse(line);
            if (!j.is_object() || j.size() != fields().size()) parse_fail("unexpected field set");
            Record r;
            for (const auto& f : fields()) f.from_json(r, j.at(f.name));
            out.push_back(std::move(r));
        } catch (const nlohmann::json::exception& e) {
            parse_fail("line " + std::to_string(line_no) + ": " + e.what());
        } catch (const Error& e) {
            parse_fail("line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return out;
}

void write_aggregate_table(std::ostream& out, std::span<const AggregateRow> rows) {
    out << "# experiment d L topology bc kind p K key quantity n mean stderr lo95 hi95\n";
    auto num = [](const std::optional<double>& v) { return v ? fmt(*v) : std::string("NaN"); };
    for (const auto& r : rows) {
        const auto& e = r.estimate;
        out << r.experiment << ' ' << r.d << ' ' << r.L << ' ' << r.topology << ' ' << r.bc << ' ' << r.kind << ' '
            << num(r.p) << ' ' << num(r.K) << ' ' << r.key << ' ' << r.quantity << ' ' << e.n << ' ' << fmt(e.mean)
            << ' ' << fmt(e.std_error) << ' ' << fmt(e.lo95) << ' ' << fmt(e.hi95) << '\n';
    }
}

std::vector<AggregateRow> aggregate(std::span<const Record> records, const std::string& field) {
    const Field* f = nullptr;
    for (const auto& x : fields()) {
        if (field == x.name) f = &x;
    }
    if (!f) throw Error(Errc::InvalidConfig, "unknown record field '" + field + "'");

    struct Group {
        const Record* first;
        std::vector<double> values;
        std::size_t trues = 0;
        bool boolean = false;
    };
    std::vector<Group> groups;
    for (const Record& r : records) {
        const auto j = f->to_json(r);
        if (j.is_null() || j.is_string()) continue;
        auto it = std::find_if(groups.begin(), groups.end(), [&](const Group& g) {
            return g.first->experiment == r.experiment && g.first->L == r.L && g.first->p == r.p &&
                   g.first->kind == r.kind && g.first->bc == r.bc;
        });
        if (it == groups.end()) {
            groups.push_back({&r, {}, 0, j.is_boolean()});
            it = groups.end() - 1;
        }
        if (j.is_boolean()) {
            it->values.push_back(j.get<bool>() ? 1.0 : 0.0);
            it->trues += j.get<bool>();
        } else {
            it->values.push_back(j.get<double>());
        }
    }
    std::vector<AggregateRow> out;
    for (const auto& g : groups) {
        AggregateRow row;
        const Record& r = *g.first;
        row.experiment = r.experiment;
        row.d = r.d;
        row.L = r.L;
        row.topology = r.topology;
        row.bc = r.bc;
        row.kind = r.kind;
        row.p = r.p;
        row.K = r.K;
        row.quantity = field;
        row.estimate = g.boolean ? estimate_proportion(g.trues, g.values.size()) : estimate_mean(g.values);
        out.push_back(std::move(row));
    }
    return out;
}

const AggregateRow* ExperimentResult::find(int L, std::optional<double> p, const std::string& key,
                                           const std::string& quantity) const {
    for (const auto& row : aggregates) {
        if (row.L != L || row.key != key || row.quantity != quantity) continue;
        if (p.has_value() != row.p.has_value()) continue;
        if (p && std::abs(*p - *row.p) > 1e-12) continue;
        return &row;
    }
    return nullptr;
}

}  // namespace ealab
