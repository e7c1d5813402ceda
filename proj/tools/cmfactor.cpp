// cmfactor: run verification suites, print the S_n orbit table, explain checks.

#include "cmfactor/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

using namespace cmfactor;

namespace {

struct Flags {
    std::string config, group, b, c, lambda, output;
    int trunc = 4, jobs = 1;
    unsigned seed = 1;
    bool json = false, no_timing = false;
};

void add_instance_options(CLI::App& cmd, Flags& f) {
    cmd.add_option("--config", f.config, "JSON config file; flags override its fields");
    cmd.add_option("--group", f.group, "group spec, e.g. S3, Z4, S2xZ3");
    cmd.add_option("--b", f.b, "point b in h, comma separated");
    cmd.add_option("--c", f.c, "c: one value, one per reflection class, or class:value pairs");
    cmd.add_option("--lambda", f.lambda, "point lambda in h*, comma separated (default origin)");
    cmd.add_option("--trunc", f.trunc, "truncation order N (1..8)");
    cmd.add_option("--seed", f.seed, "seed for random sampling");
}

RunConfig build_config(const CLI::App& cmd, const Flags& f) {
    RunConfig cfg;
    if (!f.config.empty()) {
        std::ifstream in(f.config);
        if (!in) throw UsageError("cannot read config " + f.config);
        nlohmann::json j;
        try {
            in >> j;
        } catch (const nlohmann::json::parse_error& e) {
            throw UsageError("config " + f.config + ": " + e.what());
        }
        try {
            cfg.merge_json(j);
        } catch (const nlohmann::json::exception& e) {
            throw UsageError("config " + f.config + ": " + e.what());
        }
    }
    auto given = [&](const char* name) {
        const CLI::Option* o = cmd.get_option_no_throw(name);
        return o && o->count() > 0;
    };
    if (given("--group")) cfg.group = f.group;
    if (given("--b")) cfg.b = f.b;
    if (given("--c")) cfg.c = f.c;
    if (given("--lambda")) cfg.lambda = f.lambda;
    if (given("--trunc")) cfg.trunc = f.trunc;
    if (given("--seed")) cfg.seed = f.seed;
    if (given("--output")) cfg.output = f.output;
    if (given("--jobs")) cfg.jobs = f.jobs;
    cfg.timing = !f.no_timing;
    return cfg;
}

int run_verify(const CLI::App& cmd, const Flags& f, const std::vector<std::string>& suites) {
    RunConfig cfg = build_config(cmd, f);
    if (!suites.empty()) cfg.suites = suites;
    Instance inst = validate(cfg);
    auto list = expand_suites(cfg.suites);
    RunResult res = run_suites(inst, list, effective_jobs(cfg.jobs));
    std::string json = res.to_json(cfg.timing).dump(2) + "\n";
    if (f.json) std::cout << json;
    else std::cout << res.summary();
    if (!cfg.output.empty()) write_file(cfg.output, json);
    return res.passed() ? kExitPass : kExitFail;
}

int run_table(const CLI::App& cmd, const Flags& f) {
    RunConfig cfg = build_config(cmd, f);
    if (cfg.group.empty()) throw UsageError("missing --group");
    std::vector<OrbitRow> rows;
    try {
        rows = orbit_table(cfg.group);
    } catch (const GroupSpecError& e) {
        throw UsageError(std::string("invalid group spec: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    std::string json = table_json(cfg.group, rows).dump(2) + "\n";
    if (f.json) std::cout << json;
    else std::cout << render_table(rows);
    if (!cfg.output.empty()) write_file(cfg.output, json);
    bool ok = true;
    for (const auto& r : rows) ok = ok && r.fiber_dim == r.index * r.local_fiber_dim && r.local_fiber_dim == r.factor_product;
    return ok ? kExitPass : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Factorization checks for rational Cherednik algebras at t = 0"};
    app.require_subcommand(1);
    Flags f;

    std::vector<std::string> suites;
    auto* verify = app.add_subcommand("verify", "run verification suites (pbw lemma21 theta psi quotient phi factorization all)");
    std::vector<std::string> suite_opt;
    verify->add_option("suite", suites, "suites to run");
    verify->add_option("--suites", suite_opt, "suites to run, comma separated")->delimiter(',');
    add_instance_options(*verify, f);
    verify->add_option("--output", f.output, "write the JSON report here");
    verify->add_option("--jobs", f.jobs, "suites run in parallel (CMFACTOR_JOBS overrides)");
    verify->add_flag("--json", f.json, "print JSON instead of the summary");
    verify->add_flag("--no-timing", f.no_timing, "omit wall-clock fields from the JSON");

    auto* table = app.add_subcommand("table", "orbit types of S_n with stabilizers, indices and fiber dimensions");
    add_instance_options(*table, f);
    table->add_option("--output", f.output, "write the JSON table here");
    table->add_flag("--json", f.json, "print JSON instead of the table");

    std::string check;
    auto* expl = app.add_subcommand("explain", "describe a check");
    expl->add_option("check", check, "check name, e.g. theta.cherednik_relation")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitPass : kExitUsage;
    }

    try {
        if (verify->parsed()) {
            suites.insert(suites.end(), suite_opt.begin(), suite_opt.end());
            return run_verify(*verify, f, suites);
        }
        if (table->parsed()) return run_table(*table, f);
        if (expl->parsed()) {
            auto d = explain(check);
            if (!d) {
                std::cerr << "unknown check '" << check << "'\n";
                return kExitUsage;
            }
            std::cout << check << ": " << *d << "\n";
            return kExitPass;
        }
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFail;
    }
    return kExitUsage;
}
