#include "cmfactor/cherednik.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace cmfactor;

namespace {

std::vector<CycScalar> pt(std::initializer_list<int> v) {
    std::vector<CycScalar> b;
    for (int x : v) b.emplace_back(x);
    return b;
}

std::shared_ptr<const ReflectionGroup> grp(const std::string& s) { return std::make_shared<ReflectionGroup>(build_group(s)); }

std::shared_ptr<const CherednikAlgebra> alg(const std::shared_ptr<const ReflectionGroup>& W, const CycScalar& gamma,
                                            const CycScalar& t = 0) {
    return std::make_shared<CherednikAlgebra>(W, CParam::uniform(*W, gamma), t);
}

int transposition(const ReflectionGroup& W) { return W.reflections().front().element; }

// Exact division by a linear form via leading terms.
Poly divide_linear(Poly g, const Poly& L) {
    Poly q(g.vars());
    auto [lm, lc] = *L.terms().rbegin();
    while (!g.is_zero()) {
        auto [m, c] = *g.terms().rbegin();
        if (!lm.divides(m)) throw std::logic_error("not divisible");
        Poly t = Poly::monomial(g.vars(), m / lm, c / lc);
        q += t;
        g -= t * L;
    }
    return q;
}

// Polynomial representation: x multiplies, w acts, y_j acts by
// -t d/dx_j + sum_s c_s alpha_s(e_j) (2/(1-lambda_s)) (1/alpha_s)(1 - s).
struct DunklModel {
    const CherednikAlgebra& H;

    Poly dunkl(int j, const Poly& f) const {
        const auto& W = H.group();
        Poly r = f.derivative(j) * (-H.t());
        for (const auto& s : W.reflections()) {
            CycScalar k = H.c().of(W, s.element) * s.alpha[j] * CycScalar(2) / (CycScalar(1) - s.lambda);
            if (k.is_zero()) continue;
            Poly L(W.xvars());
            for (int i = 0; i < W.rank(); ++i) L.add_term(Monomial::var(W.rank(), i), s.alpha[i]);
            r += divide_linear(f - W.act_x(s.element, f), L) * k;
        }
        return r;
    }

    Poly act(const PBWElement& e, const Poly& f) const {
        const auto& W = H.group();
        Poly out(W.xvars());
        for (const auto& [k, c] : e.terms()) {
            Poly g = f;
            for (int j = 0; j < W.rank(); ++j)
                for (int p = 0; p < k.y[j]; ++p) g = dunkl(j, g);
            g = W.act_x(k.w, g);
            out += g.times_monomial(k.x, c);
        }
        return out;
    }
};

PBWElement random_element(std::mt19937& rng, const CherednikAlgebra& H, int maxdeg, int terms) {
    const auto& W = H.group();
    int n = W.rank();
    std::uniform_int_distribution<int> e(0, maxdeg), c(-3, 3), g(0, static_cast<int>(W.order()) - 1);
    PBWElement r = H.zero();
    for (int t = 0; t < terms; ++t) {
        Monomial x(n), y(n);
        int bx = maxdeg, by = maxdeg;
        for (int i = 0; i < n; ++i) {
            int a = std::min(bx, e(rng) % (bx + 1)), b = std::min(by, e(rng) % (by + 1));
            x.set(i, a);
            y.set(i, b);
            bx -= a;
            by -= b;
        }
        r.add_term({x, g(rng), y}, CycScalar(c(rng)));
    }
    return r;
}

}  // namespace

TEST(Cherednik, NormalFormExamples) {
    auto W = grp("S2");
    CycScalar gamma(3, 2);
    auto H = alg(W, gamma);
    int s = transposition(*W);
    EXPECT_EQ(H->normal_form(std::vector<std::string>{"y1", "x1"}), H->x(0) * H->y(0) + H->element(s) * gamma);
    EXPECT_EQ(H->normal_form(std::vector<std::string>{"g" + std::to_string(s), "x1"}), H->x(1) * H->element(s));
    auto H0 = alg(W, 0);
    EXPECT_EQ(H0->normal_form(std::vector<std::string>{"y1", "x1"}), H0->x(0) * H0->y(0));
    EXPECT_THROW(H->normal_form(std::vector<std::string>{"z1"}), UnknownGenerator);
    EXPECT_THROW(H->normal_form(std::vector<std::string>{"x3"}), UnknownGenerator);
    EXPECT_EQ(H->normal_form(std::vector<std::string>{"2", "x1"}), H->x(0) * CycScalar(2));
}

TEST(Cherednik, MultiplyExamples) {
    auto W = grp("S2");
    CycScalar gamma(5);
    auto H = alg(W, gamma);
    auto a = H->x(0) * H->y(1) + H->element(1);
    EXPECT_EQ(H->one() * a, a);
    auto e = H->symmetrizer();
    EXPECT_EQ(e * e, e);
    EXPECT_EQ(H->x(0) * H->y(0) - H->y(0) * H->x(0), H->element(transposition(*W)) * (-gamma));
    auto other = alg(W, gamma);
    EXPECT_THROW(H->multiply(H->x(0), other->x(0)), AlgebraMismatch);
}

TEST(Cherednik, Symmetrizer) {
    auto W = grp("S2");
    auto H = alg(W, 1);
    EXPECT_EQ(H->symmetrizer(), (H->one() + H->element(transposition(*W))) * CycScalar(1, 2));
    auto T = alg(grp("S1"), 1);
    EXPECT_EQ(T->symmetrizer(), T->one());
    auto W3 = grp("S3");
    auto H3 = alg(W3, 1);
    auto e = H3->symmetrizer();
    for (const auto& r : W3->reflections()) {
        EXPECT_EQ(e * H3->element(r.element), e);
        EXPECT_EQ(H3->element(r.element) * e, e);
    }
}

TEST(Cherednik, Centrality) {
    auto W = grp("S2");
    auto H = alg(W, 2);
    EXPECT_TRUE(H->is_central(H->x(0) + H->x(1)));
    EXPECT_TRUE(H->is_central(H->y(0) * H->y(1)));
    EXPECT_FALSE(H->is_central(H->x(0)));
    EXPECT_TRUE(H->is_central(H->one()));
    for (const char* spec : {"S3", "Z3", "S2xZ2"}) {
        auto G = grp(spec);
        auto A = std::make_shared<CherednikAlgebra>(G, CParam::uniform(*G, 1));
        for (const auto& F : G->invariants()) EXPECT_TRUE(A->is_central(A->from_x_poly(F))) << spec;
        for (const auto& F : G->y_invariants()) EXPECT_TRUE(A->is_central(A->from_y_poly(F))) << spec;
    }
    // at t != 0 invariants stop being central
    auto Ht = alg(W, 2, 1);
    EXPECT_FALSE(Ht->is_central(Ht->x(0) + Ht->x(1)));
}

TEST(Cherednik, AgreesWithDunklRepresentation) {
    std::mt19937 rng(17);
    for (const char* spec : {"S2", "S3", "Z3", "S2xZ2"}) {
        auto W = grp(spec);
        for (int t : {0, 1}) {
            auto H = std::make_shared<CherednikAlgebra>(W, CParam::uniform(*W, CycScalar(2, 3)), CycScalar(t));
            DunklModel D{*H};
            Poly f = Poly::variable(W->xvars(), 0).pow(3) + Poly::variable(W->xvars(), W->rank() - 1) * CycScalar(2) +
                     Poly(W->xvars(), CycScalar(1));
            for (int trial = 0; trial < 8; ++trial) {
                auto a = random_element(rng, *H, 2, 2), b = random_element(rng, *H, 2, 2);
                EXPECT_EQ(D.act(a * b, f), D.act(a, D.act(b, f))) << spec << " t=" << t;
            }
        }
    }
}

TEST(Cherednik, Associativity) {
    std::mt19937 rng(23);
    for (const char* spec : {"S3", "Z4"}) {
        auto W = grp(spec);
        auto H = alg(W, CycScalar(1, 2));
        for (int i = 0; i < 30; ++i) {
            auto a = random_element(rng, *H, 2, 2), b = random_element(rng, *H, 2, 2), c = random_element(rng, *H, 2, 2);
            EXPECT_EQ((a * b) * c, a * (b * c)) << spec;
        }
    }
}

TEST(Cherednik, ParameterScaling) {
    auto W = grp("S3");
    CycScalar gamma(3);
    auto H = alg(W, 1), Hg = alg(W, gamma);
    std::mt19937 rng(5);
    for (int i = 0; i < 10; ++i) {
        auto a = random_element(rng, *H, 2, 1), b = random_element(rng, *H, 2, 1);
        auto p = a * b;
        PBWElement ag(Hg.get()), bg(Hg.get());
        for (const auto& [k, c] : a.terms()) ag.add_term(k, c);
        for (const auto& [k, c] : b.terms()) bg.add_term(k, c);
        auto pg = ag * bg;
        // each commutation lowers x-degree by one and contributes one factor of c
        int xdeg = a.terms().begin()->first.x.degree() + b.terms().begin()->first.x.degree();
        PBWElement expect(Hg.get());
        for (const auto& [k, c] : p.terms()) expect.add_term(k, c * gamma.pow(xdeg - k.x.degree()));
        EXPECT_EQ(pg, expect);
    }
}

TEST(Cherednik, QuotientDimensions) {
    auto W = grp("S2");
    auto H = alg(W, 1);
    auto Q = QuotientAlgebra::double_cut(H, pt({0, 0}), pt({0, 0}));
    EXPECT_EQ(Q.dim(), 8u);
    auto T = alg(grp("S1"), 1);
    EXPECT_EQ(QuotientAlgebra::double_cut(T, pt({0}), pt({0})).dim(), 1u);
    EXPECT_THROW(QuotientAlgebra::quotient(H, IdealCut{pt({0, 0}), std::nullopt}), std::invalid_argument);
    std::mt19937 rng(3);
    std::uniform_int_distribution<int> d(-3, 3);
    for (const char* spec : {"S2", "S3", "Z2", "Z3", "Z4"}) {
        auto G = grp(spec);
        for (int trial = 0; trial < 3; ++trial) {
            std::vector<CycScalar> b;
            for (int i = 0; i < G->rank(); ++i) b.emplace_back(trial == 0 ? 0 : d(rng));
            EXPECT_EQ(x_fiber(*G, b).dimension(), G->order()) << spec;
        }
    }
    auto W3 = grp("S3");
    auto Q3 = QuotientAlgebra::double_cut(alg(W3, 1), pt({1, 1, 0}), pt({0, 2, -1}));
    EXPECT_EQ(Q3.dim(), 216u);
    auto Ht = alg(W, 1, 1);
    EXPECT_THROW(QuotientAlgebra::double_cut(Ht, pt({0, 0}), pt({0, 0})), NonCentralCut);
}

TEST(Cherednik, QuotientIsAssociativeWithUnitAndSymmetrizer) {
    auto W = grp("S2");
    for (auto [b, l] : std::vector<std::pair<std::vector<CycScalar>, std::vector<CycScalar>>>{
             {pt({0, 0}), pt({0, 0})}, {pt({1, -1}), pt({2, 3})}}) {
        auto Q = QuotientAlgebra::double_cut(alg(W, 2), b, l);
        ASSERT_TRUE(Q.has_table());
        auto A = Q.to_coeff_algebra();
        EXPECT_TRUE(A.check_unit());
        EXPECT_TRUE(A.check_associative(1, 200));
        EXPECT_TRUE(A.check_images());
        Vec e = Q.symmetrizer();
        EXPECT_EQ(Q.mul(e, e), e);
        for (std::size_t g = 0; g < W->order(); ++g) EXPECT_EQ(Q.mul(Q.element(static_cast<int>(g)), e), e);
        // structure constants agree with lifting and multiplying in H
        for (std::size_t i = 0; i < Q.dim(); ++i)
            for (std::size_t j = 0; j < Q.dim(); ++j)
                EXPECT_EQ(Q.mul(unit_vec(Q.dim(), i), unit_vec(Q.dim(), j)),
                          Q.reduce(Q.algebra().multiply(Q.lift(unit_vec(Q.dim(), i)), Q.lift(unit_vec(Q.dim(), j)))));
    }
}

TEST(Cherednik, LargeQuotientAssociativity) {
    auto W = grp("S3");
    auto Q = QuotientAlgebra::double_cut(alg(W, 1), pt({1, 1, 0}), pt({0, 0, 0}));
    std::mt19937 rng(9);
    std::uniform_int_distribution<std::size_t> pick(0, Q.dim() - 1);
    for (int t = 0; t < 10; ++t) {
        Vec a = unit_vec(Q.dim(), pick(rng)), b = unit_vec(Q.dim(), pick(rng)), c = unit_vec(Q.dim(), pick(rng));
        a[pick(rng)] += CycScalar(1);
        EXPECT_EQ(Q.mul(Q.mul(a, b), c), Q.mul(a, Q.mul(b, c)));
    }
}

TEST(Cherednik, CentralCutMatchesDoubleCut) {
    // cutting by the y-invariants as central elements reproduces the double cut
    auto W = grp("S2");
    auto H = alg(W, 1);
    std::vector<PBWElement> z;
    std::vector<CycScalar> vals;
    auto lambda = pt({1, 3});
    for (const auto& G : W->y_invariants()) {
        z.push_back(H->from_y_poly(G));
        vals.push_back(G.evaluate(lambda));
    }
    auto C = QuotientAlgebra::central_cut(H, pt({0, 0}), z, vals, 2);
    auto Q = QuotientAlgebra::double_cut(H, pt({0, 0}), lambda);
    ASSERT_EQ(C.dim(), Q.dim());
    EXPECT_EQ(C.basis(), Q.basis());
    for (std::size_t i = 0; i < Q.dim(); ++i)
        for (std::size_t j = 0; j < Q.dim(); ++j)
            EXPECT_EQ(C.mul(unit_vec(C.dim(), i), unit_vec(C.dim(), j)), Q.mul(unit_vec(Q.dim(), i), unit_vec(Q.dim(), j)));
    EXPECT_THROW(QuotientAlgebra::central_cut(H, pt({0, 0}), {H->y(0)}, {CycScalar(0)}, 2), NonCentralCut);
}

TEST(Cherednik, SatakeMap) {
    auto T = alg(grp("S1"), 1);
    auto QT = QuotientAlgebra::double_cut(T, pt({0}), pt({0}));
    auto sT = spherical_and_satake(QT);
    EXPECT_TRUE(sT.bijective());
    EXPECT_EQ(sT.center.size(), 1u);

    auto W = grp("S2");
    auto Q = QuotientAlgebra::double_cut(alg(W, 1), pt({0, 0}), pt({0, 0}));
    auto s = spherical_and_satake(Q, SatakeDomain::commutant);
    EXPECT_TRUE(s.bijective());
    EXPECT_EQ(s.center.size(), s.spherical.size());
    EXPECT_EQ(s.spherical.size(), 2u);

    auto Q0 = QuotientAlgebra::double_cut(alg(W, 0), pt({0, 0}), pt({0, 0}));
    auto s0 = spherical_and_satake(Q0);
    EXPECT_EQ(s0.domain, SatakeDomain::invariants);
    EXPECT_TRUE(s0.bijective());
}

TEST(Cherednik, ModuleHe) {
    auto T = alg(grp("S1"), 1);
    EXPECT_EQ(module_He(QuotientAlgebra::double_cut(T, pt({0}), pt({0}))).dim(), 1u);
    auto W = grp("S2");
    auto Q = QuotientAlgebra::double_cut(alg(W, 1), pt({0, 0}), pt({0, 0}));
    EXPECT_EQ(module_He(Q).dim(), 4u);
    auto Qr = QuotientAlgebra::double_cut(alg(W, 1), pt({1, -1}), pt({2, 5}));
    auto M = module_He(Qr);
    ASSERT_EQ(M.dim(), 4u);
    auto ch = module_character(*W, M.w_action);
    EXPECT_EQ(ch, regular_character(*W).scaled(CycScalar(2)));
}

TEST(Cherednik, ZeroParameterIsSmashProduct) {
    for (auto [spec, b, l] : std::vector<std::tuple<std::string, std::vector<CycScalar>, std::vector<CycScalar>>>{
             {"S2", pt({0, 0}), pt({0, 0})}, {"S2", pt({1, 2}), pt({0, 3})}, {"Z3", pt({1}), pt({0})}}) {
        auto W = grp(spec);
        auto Q = QuotientAlgebra::double_cut(alg(W, 0), b, l);
        SmashProductModel S(W, b, l);
        ASSERT_EQ(S.dim(), Q.dim());
        std::vector<Vec> img;
        for (const auto& k : Q.basis()) img.push_back(S.from_pbw(k));
        EXPECT_EQ(rank(Matrix::from_columns(img, S.dim())), Q.dim());
        for (std::size_t i = 0; i < Q.dim(); ++i)
            for (std::size_t j = 0; j < Q.dim(); ++j) {
                Vec p = Q.mul(unit_vec(Q.dim(), i), unit_vec(Q.dim(), j));
                Vec mapped = zero_vec(S.dim());
                for (std::size_t k = 0; k < p.size(); ++k) axpy(mapped, p[k], img[k]);
                EXPECT_EQ(mapped, S.mul(img[i], img[j]));
            }
    }
}

TEST(Cherednik, Fingerprint) {
    auto W = grp("S2");
    auto Q1 = QuotientAlgebra::double_cut(alg(W, 1), pt({0, 0}), pt({0, 0}));
    auto Q2 = QuotientAlgebra::double_cut(alg(W, 1), pt({0, 0}), pt({0, 0}));
    auto Q3 = QuotientAlgebra::double_cut(alg(W, 2), pt({0, 0}), pt({0, 0}));
    EXPECT_EQ(Q1.fingerprint(), Q2.fingerprint());
    EXPECT_NE(Q1.fingerprint(), Q3.fingerprint());
}
