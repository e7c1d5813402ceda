// Acceptance run: one PASS/FAIL line per criterion, with its time bound.
// Exits nonzero if any criterion fails or overruns.

#include "cmfactor/suites.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <string>
#include <vector>

using namespace cmfactor;

namespace {

std::vector<CycScalar> vec(std::initializer_list<long> v) {
    std::vector<CycScalar> out;
    for (long x : v) out.emplace_back(x);
    return out;
}

Instance make(const std::string& group, std::vector<CycScalar> b, long c, std::optional<std::vector<CycScalar>> lambda = {}) {
    Instance inst;
    inst.group = group;
    inst.b = std::move(b);
    auto W = build_group(group);
    inst.c.assign(W.reflection_classes().size(), CycScalar(c));
    inst.lambda = std::move(lambda);
    return inst;
}

std::string label(const Instance& i) {
    std::string s = i.group + " b=" + vec_str(i.b) + " c=" + vec_str(i.c);
    if (i.lambda) s += " lambda=" + vec_str(*i.lambda);
    return s;
}

// Collects failures of one criterion.
struct Outcome {
    std::vector<std::string> failures;
    std::vector<std::string> facts;

    void require(bool ok, const std::string& what) {
        if (!ok) failures.push_back(what);
    }
    void report(const VerificationReport& rep) {
        for (const auto& c : rep.checks())
            if (!c.pass) failures.push_back(label(rep.instance()) + ": " + c.name + (c.residual.empty() ? "" : " [" + c.residual + "]"));
    }
};

struct Criterion {
    int id;
    std::string title;
    double limit_s;
    std::function<void(Outcome&)> body;
};

void pbw_soundness(Outcome& out) {
    for (const auto& g : {"S3", "Z4"}) {
        auto W = build_group(g);
        auto inst = make(g, std::vector<CycScalar>(W.rank(), CycScalar(1)), 1);
        auto rep = pbw_check(inst, 100);
        const Check* a = rep.find("pbw.associativity");
        out.require(a && a->pass, std::string(g) + ": associativity on 100 triples");
        out.require(a && a->detail == "100 triples", std::string(g) + ": triple count");
    }
    out.facts.push_back("100 triples each for S3, Z4");
}

void chevalley_dims(Outcome& out) {
    std::mt19937 rng(2024);
    std::uniform_int_distribution<int> coord(-5, 5);
    for (const auto& g : {"S2", "S3", "Z2", "Z3", "Z4"}) {
        auto W = build_group(g);
        std::size_t n = static_cast<std::size_t>(W.rank());
        std::vector<std::vector<CycScalar>> points{std::vector<CycScalar>(n, CycScalar(0))};
        for (int k = 0; k < 2; ++k) {
            std::vector<CycScalar> b;
            for (std::size_t i = 0; i < n; ++i) b.emplace_back(static_cast<long>(coord(rng)));
            points.push_back(b);
        }
        for (const auto& b : points) {
            std::size_t d = x_fiber(W, b).dimension();
            out.require(d == W.order(), std::string(g) + " b=" + vec_str(b) + ": dim " + std::to_string(d));
        }
    }
    out.facts.push_back("15 fibers");
}

void lemma21(Outcome& out) {
    auto s2 = lemma21_check(make("S2", vec({0, 1}), 1));
    auto s3 = lemma21_check(make("S3", vec({1, 1, 0}), 1));
    out.report(s2);
    out.report(s3);
    for (const auto& name : {"zeta_eta", "eta_zeta", "G_equivariant", "Z_equivariant"}) {
        out.require(s2.find(std::string("lemma21.scalars.") + name) != nullptr, std::string("S2 scalars ") + name + " missing");
        out.require(s3.find(std::string("lemma21.group_algebra.") + name) != nullptr, std::string("S3 group algebra ") + name + " missing");
        out.require(s3.find(std::string("lemma21.cherednik_cut.") + name) != nullptr, std::string("S3 cut ") + name + " missing");
    }
}

std::vector<Instance> theta_instances(long c) {
    return {make("S2", vec({0, 1}), c), make("S3", vec({1, 1, 0}), c), make("S3", vec({0, 1, 2}), c), make("Z3", vec({1}), c)};
}

void theta(Outcome& out) {
    for (long c : {1L, 2L})
        for (auto inst : theta_instances(c)) {
            inst.trunc = 4;
            out.report(verify_theta_relations(inst));
            if (c == 1) {
                Check s = theta_scaling_check(inst, CycScalar(2));
                out.require(s.pass, label(inst) + ": scaling c -> 2c " + s.residual);
            }
        }
    out.facts.push_back("8 instances at N = 4");
}

void psi(Outcome& out) {
    for (long c : {1L, 2L})
        for (const auto& inst : theta_instances(c)) {
            auto rep = psi_check(inst);
            out.report(rep);
            const Check* p = rep.find("psi.jacobian_proportional");
            out.require(p && !p->scalar.empty() && p->scalar != "0", label(inst) + ": proportionality scalar");
            if (c == 1 && p) out.facts.push_back(inst.group + " b=" + vec_str(inst.b) + " ratio " + p->scalar);
        }
}

void quotient_phi(Outcome& out) {
    struct Case {
        Instance inst;
        std::size_t dim;
    };
    std::vector<Case> cases{{make("S2", vec({0, 1}), 1, vec({0, 0})), 8},
                            {make("S2", vec({0, 1}), 1, vec({1, -1})), 8},
                            {make("S3", vec({1, 1, 0}), 1, vec({0, 0, 0})), 216}};
    for (const auto& [inst, dim] : cases) {
        auto F = make_fiber_comparison(inst);
        out.report(quotient_iso_check(inst, *F));
        out.report(phi_check(inst, *F));
        std::size_t m = F->centralizer().index();
        out.require(F->source().dim() == dim, label(inst) + ": source dim " + std::to_string(F->source().dim()));
        out.require(m * m * F->target().dim() == dim, label(inst) + ": target side dim " + std::to_string(m * m * F->target().dim()));
        out.facts.push_back(inst.group + " " + std::to_string(dim) + " = " + std::to_string(m * m * F->target().dim()));
    }
}

void factorization(Outcome& out) {
    auto s3 = make("S3", vec({1, 1, 0}), 1, vec({0, 0, 0}));
    auto F3 = make_fiber_comparison(s3);
    auto r3 = verify_factorization(s3, *F3);
    out.report(r3);
    out.require(r3.find("factorization.intertwines_W") && r3.find("factorization.intertwines_Z"), "S3: intertwining checks missing");

    auto s2 = make("S2", vec({0, 1}), 1, vec({1, -1}));
    auto F2 = make_fiber_comparison(s2);
    auto r2 = verify_factorization(s2, *F2);
    out.report(r2);
    CentreMap cm = centre_map(*F2);
    ModuleHe lhs = module_He(F2->source(), cm.source.center);
    Character chi = module_character(F2->group(), lhs.w_action, s2.seed);
    // S2 has two classes; twice the regular character is 4 at the identity, 0 at the swap
    Character expected{std::vector<CycScalar>(2, CycScalar(0))};
    expected.values[F2->group().class_of(F2->group().identity())] = CycScalar(4);
    out.require(chi == expected, "S2: char(He) = " + chi.str());
    out.facts.push_back("S2 char " + chi.str());
}

void table(Outcome& out) {
    auto rows = orbit_table("S3");
    const std::vector<std::string> types{"3", "2+1", "1+1+1"};
    const std::vector<std::string> stab{"S3", "S2xS1", "S1xS1xS1"};
    const std::vector<std::size_t> index{1, 3, 6};
    out.require(rows.size() == 3, "S3 has " + std::to_string(rows.size()) + " rows");
    for (std::size_t i = 0; i < rows.size() && i < 3; ++i) {
        out.require(rows[i].type_str() == types[i], "row " + std::to_string(i) + " type " + rows[i].type_str());
        out.require(rows[i].stabilizer == stab[i], "row " + std::to_string(i) + " stabilizer " + rows[i].stabilizer);
        out.require(rows[i].index == index[i], "row " + std::to_string(i) + " index " + std::to_string(rows[i].index));
    }
    auto W = build_group("S3");
    auto H = stabilizer(W, vec({1, 1, 0}));
    out.require(H.group.label() == "S2xS1", "W_b at (1,1,0) is " + H.group.label());
    out.require(H.index_in(W) == 3, "index at (1,1,0)");
}

void degeneration(Outcome& out) {
    std::vector<Instance> cases{make("S2", vec({0, 1}), 0, vec({1, -1})), make("S3", vec({1, 1, 0}), 0, vec({0, 0, 0}))};
    for (const auto& inst : cases) {
        auto F = make_fiber_comparison(inst);
        for (const auto& s : suite_names()) {
            auto rep = run_suite(s, inst, F.get());
            out.report(rep);
            if (s == "pbw") out.require(rep.find("pbw.smash_product_model") != nullptr, label(inst) + ": smash product model not run");
        }
    }
    out.facts.push_back("all suites for S2, S3 at c = 0");
}

}  // namespace

int main() {
    std::vector<Criterion> criteria{
        {1, "PBW associativity", 30, pbw_soundness},
        {2, "Chevalley fiber dimension", 30, chevalley_dims},
        {3, "centralizer identities", 60, lemma21},
        {4, "theta relations and scaling", 300, theta},
        {5, "psi Jacobian", 60, psi},
        {6, "quotient isomorphism and centre map", 600, quotient_phi},
        {7, "factorization", 600, factorization},
        {8, "S3 orbit table", 60, table},
        {9, "c = 0 degeneration", 120, degeneration},
    };
    bool all = true;
    for (const auto& cr : criteria) {
        Outcome out;
        auto t0 = std::chrono::steady_clock::now();
        try {
            cr.body(out);
        } catch (const std::exception& e) {
            out.failures.push_back(std::string("exception: ") + e.what());
        }
        double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (s > cr.limit_s) out.failures.push_back("took " + std::to_string(s) + " s");
        bool ok = out.failures.empty();
        all = all && ok;
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.1f s / %.0f s", s, cr.limit_s);
        std::cout << "criterion " << cr.id << ": " << (ok ? "PASS" : "FAIL") << "  " << cr.title << "  (" << buf << ")";
        for (const auto& f : out.facts) std::cout << "; " << f;
        std::cout << "\n";
        for (const auto& f : out.failures) std::cout << "    " << f << "\n";
        std::cout.flush();
    }
    return all ? 0 : 1;
}
