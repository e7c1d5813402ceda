#pragma once

// Configuration, suite scheduling and rendering for the cmfactor driver.

#include "cmfactor/suites.hpp"

#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <future>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

namespace cmfactor {

enum ExitCode { kExitPass = 0, kExitFail = 1, kExitUsage = 2 };

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr int kMaxTrunc = 8;
inline constexpr std::size_t kMaxFiberOrder = 8;

/// Raw, unvalidated settings. Scalars stay as strings until validate().
struct RunConfig {
    std::string group;
    std::string b;       // comma separated
    std::string c = "1"; // "v", "v1,v2,..." in reflection-class order, or "k:v,..."
    std::string lambda;  // comma separated, empty for the origin
    int trunc = 4;
    unsigned seed = 1;
    std::vector<std::string> suites;
    std::string output;
    int jobs = 1;
    bool timing = true;

    /// Fields present in the file override the defaults; flags are applied later.
    void merge_json(const nlohmann::json& j) {
        auto list = [](const nlohmann::json& v) {
            if (v.is_string()) return v.get<std::string>();
            std::string s;
            for (const auto& x : v) {
                std::string item = x.is_string() ? x.get<std::string>() : x.dump();
                s += (s.empty() ? "" : ",") + item;
            }
            return s;
        };
        if (j.contains("group")) group = j["group"].get<std::string>();
        if (j.contains("b")) b = list(j["b"]);
        if (j.contains("c")) {
            const auto& v = j["c"];
            if (v.is_object()) {
                std::string s;
                for (const auto& [k, val] : v.items())
                    s += (s.empty() ? "" : ",") + k + ":" + (val.is_string() ? val.get<std::string>() : val.dump());
                c = s;
            } else {
                c = v.is_number() ? v.dump() : list(v);
            }
        }
        if (j.contains("lambda")) lambda = j["lambda"].is_null() ? std::string() : list(j["lambda"]);
        if (j.contains("trunc")) trunc = j["trunc"].get<int>();
        if (j.contains("seed")) seed = j["seed"].get<unsigned>();
        if (j.contains("suites")) suites = j["suites"].get<std::vector<std::string>>();
        if (j.contains("output")) output = j["output"].get<std::string>();
        if (j.contains("jobs")) jobs = j["jobs"].get<int>();
    }
};

inline std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (ch != ' ') {
            cur += ch;
        }
    }
    if (!cur.empty() || !out.empty()) out.push_back(cur);
    return out;
}

inline std::vector<CycScalar> parse_scalar_list(const std::string& what, const std::string& s) {
    std::vector<CycScalar> v;
    auto items = split_list(s);
    for (std::size_t i = 0; i < items.size(); ++i) {
        try {
            v.push_back(parse_scalar(items[i]));
        } catch (const std::exception& e) {
            throw UsageError(what + " entry " + std::to_string(i + 1) + " '" + items[i] + "': " + e.what());
        }
    }
    return v;
}

/// Checks the configuration against the group and returns the instance.
inline Instance validate(const RunConfig& cfg, ReflectionGroup* out_group = nullptr) {
    if (cfg.group.empty()) throw UsageError("missing --group");
    std::optional<ReflectionGroup> W;
    try {
        W.emplace(build_group(cfg.group));
    } catch (const GroupSpecError& e) {
        throw UsageError(std::string("invalid group spec: ") + e.what());
    }
    Instance inst;
    inst.group = W->label();
    std::size_t n = static_cast<std::size_t>(W->rank());
    inst.b = cfg.b.empty() ? std::vector<CycScalar>(n, CycScalar(0)) : parse_scalar_list("b", cfg.b);
    if (inst.b.size() != n) throw UsageError("b has rank " + std::to_string(inst.b.size()) + ", group rank " + std::to_string(n));
    if (!cfg.lambda.empty()) {
        inst.lambda = parse_scalar_list("lambda", cfg.lambda);
        if (inst.lambda->size() != n)
            throw UsageError("lambda has rank " + std::to_string(inst.lambda->size()) + ", group rank " + std::to_string(n));
    }
    std::size_t ncls = W->reflection_classes().size();
    if (cfg.c.find(':') != std::string::npos) {
        std::vector<std::optional<CycScalar>> vals(ncls);
        for (const auto& item : split_list(cfg.c)) {
            auto colon = item.find(':');
            if (colon == std::string::npos) throw UsageError("c entry '" + item + "' is not of the form class:value");
            int k = -1;
            try {
                k = std::stoi(item.substr(0, colon));
            } catch (const std::exception&) {
                throw UsageError("c entry '" + item + "': bad class index");
            }
            if (k < 0 || static_cast<std::size_t>(k) >= ncls)
                throw UsageError("c class " + std::to_string(k) + " out of range (group has " + std::to_string(ncls) + " reflection classes)");
            vals[k] = parse_scalar_list("c", item.substr(colon + 1)).at(0);
        }
        for (std::size_t k = 0; k < ncls; ++k) {
            if (!vals[k]) throw UsageError("c does not cover reflection class " + std::to_string(k));
            inst.c.push_back(*vals[k]);
        }
    } else {
        auto vals = parse_scalar_list("c", cfg.c);
        if (vals.size() == 1) vals.assign(ncls, vals.front());
        if (vals.size() != ncls)
            throw UsageError("c has " + std::to_string(vals.size()) + " values, group has " + std::to_string(ncls) + " reflection classes");
        inst.c = vals;
    }
    if (cfg.trunc < 1 || cfg.trunc > kMaxTrunc)
        throw UsageError("--trunc must be between 1 and " + std::to_string(kMaxTrunc) + ", got " + std::to_string(cfg.trunc));
    inst.trunc = cfg.trunc;
    inst.seed = cfg.seed;
    if (out_group) *out_group = *W;
    return inst;
}

/// "all" expands to every suite; the result is deduplicated in dependency order.
inline std::vector<std::string> expand_suites(const std::vector<std::string>& requested) {
    std::set<std::string> want;
    for (const auto& s : requested) {
        if (s == "all") {
            want.insert(suite_names().begin(), suite_names().end());
            continue;
        }
        if (std::find(suite_names().begin(), suite_names().end(), s) == suite_names().end())
            throw UsageError("unknown suite '" + s + "'");
        want.insert(s);
    }
    if (want.empty()) throw UsageError("no suite given");
    std::vector<std::string> out;
    for (const auto& s : suite_names())
        if (want.count(s)) out.push_back(s);
    return out;
}

/// CMFACTOR_JOBS overrides the configured bound.
inline int effective_jobs(int configured) {
    if (const char* env = std::getenv("CMFACTOR_JOBS")) {
        try {
            int j = std::stoi(env);
            if (j >= 1) return j;
        } catch (const std::exception&) {
        }
        throw UsageError(std::string("CMFACTOR_JOBS must be a positive integer, got '") + env + "'");
    }
    return std::max(1, configured);
}

struct RunResult {
    Instance instance;
    std::vector<VerificationReport> reports;

    bool passed() const {
        for (const auto& r : reports)
            if (!r.passed()) return false;
        return !reports.empty();
    }
    nlohmann::json to_json(bool timing = true) const {
        nlohmann::json j;
        j["schema_version"] = kReportSchemaVersion;
        j["instance"] = instance.to_json();
        j["reports"] = nlohmann::json::array();
        for (const auto& r : reports) j["reports"].push_back(r.to_json(timing));
        j["passed"] = passed();
        return j;
    }
    std::string summary() const {
        std::string s;
        for (const auto& r : reports) s += r.summary();
        s += passed() ? "ALL PASS\n" : "FAILURES\n";
        return s;
    }
};

namespace detail {

inline VerificationReport guarded(const std::string& suite, const Instance& inst, const FiberComparison* fiber,
                                  const std::string& fiber_error) {
    if (needs_fiber(suite) && !fiber) {
        VerificationReport rep(suite, inst);
        rep.expect(suite + ".construction", false, fiber_error);
        rep.finish();
        return rep;
    }
    try {
        return run_suite(suite, inst, fiber);
    } catch (const std::exception& e) {
        VerificationReport rep(suite, inst);
        rep.expect(suite + ".error", false, e.what());
        rep.finish();
        return rep;
    }
}

}  // namespace detail

/// Runs the suites of a validated instance, up to `jobs` at a time. Reports
/// are returned in dependency order regardless of completion order.
inline RunResult run_suites(const Instance& inst, const std::vector<std::string>& suites, int jobs) {
    RunResult res;
    res.instance = inst;
    std::unique_ptr<FiberComparison> fiber;
    std::string fiber_error;
    if (std::any_of(suites.begin(), suites.end(), needs_fiber)) {
        auto W = build_group(inst.group);
        if (W.order() > kMaxFiberOrder)
            throw UsageError("quotient, phi and factorization need |W| <= " + std::to_string(kMaxFiberOrder) + ", got " +
                             std::to_string(W.order()));
        try {
            fiber = make_fiber_comparison(inst);
        } catch (const std::exception& e) {
            fiber_error = e.what();
        }
    }
    std::vector<std::optional<VerificationReport>> slots(suites.size());
    std::size_t next = 0;
    while (next < suites.size()) {
        std::vector<std::pair<std::size_t, std::future<VerificationReport>>> batch;
        for (int j = 0; j < jobs && next < suites.size(); ++j, ++next)
            batch.emplace_back(next, std::async(std::launch::async, detail::guarded, suites[next], std::cref(inst), fiber.get(),
                                                std::cref(fiber_error)));
        for (auto& [i, f] : batch) slots[i].emplace(f.get());
    }
    for (auto& s : slots) res.reports.push_back(std::move(*s));
    return res;
}

inline std::string render_table(const std::vector<OrbitRow>& rows) {
    std::ostringstream os;
    os << std::left << std::setw(10) << "type" << std::setw(12) << "W_b" << std::setw(7) << "|W_b|" << std::setw(7) << "index"
       << std::setw(11) << "dim C[h]/m" << std::setw(11) << "dim local" << "prod n_i!\n";
    for (const auto& r : rows)
        os << std::setw(10) << r.type_str() << std::setw(12) << r.stabilizer << std::setw(7) << r.order << std::setw(7) << r.index
           << std::setw(11) << r.fiber_dim << std::setw(11) << r.local_fiber_dim << r.factor_product << "\n";
    return os.str();
}

inline nlohmann::json table_json(const std::string& group, const std::vector<OrbitRow>& rows) {
    nlohmann::json j;
    j["schema_version"] = kReportSchemaVersion;
    j["group"] = group;
    j["rows"] = nlohmann::json::array();
    for (const auto& r : rows) {
        nlohmann::json e;
        e["type"] = r.type_str();
        nlohmann::json b = nlohmann::json::array();
        for (const auto& s : r.b) b.push_back(s.str());
        e["b"] = b;
        e["stabilizer"] = r.stabilizer;
        e["order"] = r.order;
        e["index"] = r.index;
        e["fiber_dim"] = r.fiber_dim;
        e["local_fiber_dim"] = r.local_fiber_dim;
        e["factor_product"] = r.factor_product;
        j["rows"].push_back(e);
    }
    return j;
}

/// Description for a check name; suite-qualified lemma21 names resolve to the generic entry.
inline std::optional<std::string> explain(const std::string& name) {
    const auto& d = check_descriptions();
    if (auto it = d.find(name); it != d.end()) return it->second;
    auto first = name.find('.');
    auto last = name.rfind('.');
    if (first != std::string::npos && last != first) {
        if (auto it = d.find(name.substr(0, first) + name.substr(last)); it != d.end()) return it->second;
    }
    return std::nullopt;
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw UsageError("cannot write " + path);
    out << content;
}

}  // namespace cmfactor
