#pragma once

// Named pass/fail checks for one instance, with JSON and text renderings.

#include "cmfactor/exactfield.hpp"

#include <json.hpp>

#include <chrono>
#include <cstdint>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace cmfactor {

inline constexpr int kReportSchemaVersion = 1;

/// Instance descriptor. c holds one value per reflection class.
struct Instance {
    std::string group;
    std::vector<CycScalar> b;
    std::vector<CycScalar> c;
    std::optional<std::vector<CycScalar>> lambda;
    int trunc = 4;
    unsigned seed = 1;

    nlohmann::json to_json() const {
        auto strs = [](const std::vector<CycScalar>& v) {
            nlohmann::json a = nlohmann::json::array();
            for (const auto& s : v) a.push_back(s.str());
            return a;
        };
        nlohmann::json j;
        j["group"] = group;
        j["b"] = strs(b);
        j["c"] = strs(c);
        j["lambda"] = lambda ? strs(*lambda) : nlohmann::json(nullptr);
        j["trunc"] = trunc;
        j["seed"] = seed;
        return j;
    }
};

struct Check {
    std::string name;
    bool pass = false;
    std::string residual;  // first offending coefficient or element on failure
    std::string scalar;    // reported scalar, when the check produces one
    std::string detail;
};

/// 64-bit FNV-1a, stable across platforms.
inline std::string fnv1a_hex(const std::string& data) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : data) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << h;
    return os.str();
}

class VerificationReport {
public:
    VerificationReport(std::string suite, Instance inst)
        : suite_(std::move(suite)), inst_(std::move(inst)), start_(std::chrono::steady_clock::now()) {}

    const std::string& suite() const { return suite_; }
    const Instance& instance() const { return inst_; }
    const std::vector<Check>& checks() const { return checks_; }
    const std::vector<std::string>& notes() const { return notes_; }
    double wall_time_ms() const { return wall_ms_; }

    Check& add(Check c) {
        checks_.push_back(std::move(c));
        return checks_.back();
    }
    Check& expect(const std::string& name, bool ok, const std::string& residual = {}, const std::string& detail = {}) {
        return add({name, ok, ok ? std::string() : residual, {}, detail});
    }
    void note(std::string n) { notes_.push_back(std::move(n)); }
    /// Exported data (dimensions, characters, hashes) for golden comparison.
    void record(const std::string& key, nlohmann::json value) { records_[key] = std::move(value); }
    const nlohmann::json& records() const { return records_; }
    void append(const VerificationReport& other) {
        checks_.insert(checks_.end(), other.checks_.begin(), other.checks_.end());
        notes_.insert(notes_.end(), other.notes_.begin(), other.notes_.end());
        for (const auto& [k, v] : other.records_.items()) records_[k] = v;
    }

    /// Stops the clock.
    void finish() {
        wall_ms_ = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
    }

    bool passed() const {
        for (const auto& c : checks_)
            if (!c.pass) return false;
        return !checks_.empty();
    }
    const Check* find(const std::string& name) const {
        for (const auto& c : checks_)
            if (c.name == name) return &c;
        return nullptr;
    }

    nlohmann::json to_json(bool with_timing = true) const {
        nlohmann::json j;
        j["schema_version"] = kReportSchemaVersion;
        j["suite"] = suite_;
        j["instance"] = inst_.to_json();
        j["checks"] = nlohmann::json::array();
        for (const auto& c : checks_) {
            nlohmann::json e;
            e["name"] = c.name;
            e["status"] = c.pass ? "pass" : "fail";
            if (!c.residual.empty()) e["residual"] = c.residual;
            if (!c.scalar.empty()) e["scalar"] = c.scalar;
            if (!c.detail.empty()) e["detail"] = c.detail;
            j["checks"].push_back(std::move(e));
        }
        if (!notes_.empty()) j["notes"] = notes_;
        if (!records_.empty()) j["records"] = records_;
        j["passed"] = passed();
        if (with_timing) j["wall_time_ms"] = static_cast<long long>(wall_ms_);
        return j;
    }

    std::string summary() const {
        std::ostringstream os;
        os << suite_ << " [" << inst_.group << "]: " << (passed() ? "PASS" : "FAIL") << "\n";
        for (const auto& c : checks_) {
            os << "  " << (c.pass ? "ok   " : "FAIL ") << c.name;
            if (!c.scalar.empty()) os << "  scalar=" << c.scalar;
            if (!c.detail.empty()) os << "  (" << c.detail << ")";
            if (!c.residual.empty()) os << "\n       residual: " << c.residual;
            os << "\n";
        }
        for (const auto& n : notes_) os << "  note: " << n << "\n";
        return os.str();
    }

private:
    std::string suite_;
    Instance inst_;
    std::vector<Check> checks_;
    std::vector<std::string> notes_;
    nlohmann::json records_ = nlohmann::json::object();
    std::chrono::steady_clock::time_point start_;
    double wall_ms_ = 0;
};

}  // namespace cmfactor
