#include "cmfactor/reflgroup.hpp"

#include <gtest/gtest.h>

using namespace cmfactor;

namespace {

std::vector<CycScalar> point(std::initializer_list<int> v) {
    std::vector<CycScalar> b;
    for (int x : v) b.emplace_back(x);
    return b;
}

// Permutation character on W_b \ W computed straight from the cosets.
Character coset_permutation_character(const ReflectionGroup& W, const Stabilizer& H) {
    auto reps = coset_reps(W, H);
    std::set<int> sub(H.embed.begin(), H.embed.end());
    Character c;
    for (const auto& cls : W.classes()) {
        int g = cls.front();
        long fixed = 0;
        for (int r : reps)
            if (sub.count(W.mul(W.mul(r, g), W.inv(r)))) ++fixed;
        c.values.emplace_back(fixed);
    }
    return c;
}

bool proportional(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return false;
    const auto& [m, c] = *b.terms().begin();
    CycScalar k = a.coeff(m) / c;
    return a == b * k;
}

}  // namespace

TEST(ReflGroup, ParseErrors) {
    EXPECT_THROW(parse_group_spec(""), GroupSpecError);
    EXPECT_THROW(parse_group_spec("S5"), GroupSpecError);
    EXPECT_THROW(parse_group_spec("Z7"), GroupSpecError);
    EXPECT_THROW(parse_group_spec("S3xS3"), GroupSpecError);
    EXPECT_THROW(parse_group_spec("S2x"), GroupSpecError);
    EXPECT_THROW(parse_group_spec("Q2"), GroupSpecError);
    EXPECT_EQ(parse_group_spec("S2xZ3").rank, 3);
    EXPECT_EQ(parse_group_spec("S2xZ3").label(), "S2xZ3");
}

TEST(ReflGroup, SymmetricThree) {
    auto W = build_group("S3");
    EXPECT_EQ(W.order(), 6u);
    EXPECT_EQ(W.reflection_count(), 3u);
    ASSERT_EQ(W.hyperplanes().size(), 3u);
    for (const auto& H : W.hyperplanes()) EXPECT_EQ(H.e, 2);
    EXPECT_EQ(W.classes().size(), 3u);
    EXPECT_EQ(W.reflection_classes().size(), 1u);
    for (const auto& r : W.reflections()) {
        EXPECT_EQ(r.lambda, CycScalar(-1));
        EXPECT_EQ(pairing(r.alpha, r.coroot), CycScalar(2));
    }
}

TEST(ReflGroup, CyclicThree) {
    auto W = build_group("Z3");
    EXPECT_EQ(W.order(), 3u);
    EXPECT_EQ(W.reflection_count(), 2u);
    ASSERT_EQ(W.hyperplanes().size(), 1u);
    EXPECT_EQ(W.hyperplanes()[0].e, 3);
    EXPECT_EQ(W.reflection_classes().size(), 2u);
    for (const auto& r : W.reflections()) {
        // s = diag(mu) on h acts on x by mu^{-1}
        CycScalar mu = W.element(r.element).mu[0];
        EXPECT_EQ(r.lambda, mu.inverse());
        EXPECT_EQ(r.coroot, (Vec{CycScalar(2)}));
        EXPECT_EQ(r.alpha, (Vec{CycScalar(1)}));
    }
}

TEST(ReflGroup, ProductGroup) {
    auto W = build_group("S2xZ2");
    EXPECT_EQ(W.order(), 4u);
    EXPECT_EQ(W.rank(), 3);
    EXPECT_EQ(W.reflection_count(), 2u);
    EXPECT_EQ(W.hyperplanes().size(), 2u);
}

TEST(ReflGroup, GroupTablesAreConsistent) {
    for (const char* spec : {"S3", "Z4", "S2xZ3", "S4", "S1xZ2xS2"}) {
        auto W = build_group(spec);
        for (std::size_t a = 0; a < W.order(); ++a) {
            int ia = static_cast<int>(a);
            EXPECT_EQ(W.mul(ia, W.inv(ia)), W.identity());
            EXPECT_EQ(W.element(ia).matrix() * W.element(W.inv(ia)).matrix(), Matrix::identity(W.rank()));
            for (std::size_t b = 0; b < W.order(); b += 3) {
                int ib = static_cast<int>(b);
                EXPECT_EQ(W.element(W.mul(ia, ib)).matrix(), W.element(ia).matrix() * W.element(ib).matrix());
            }
        }
    }
}

TEST(ReflGroup, ReflectionCountMatchesHyperplaneExponents) {
    for (const char* spec : {"S3", "Z3", "Z6", "S2xZ3", "S4", "Z4xS2"}) {
        auto W = build_group(spec);
        std::size_t total = 0;
        for (const auto& H : W.hyperplanes()) total += H.e - 1;
        EXPECT_EQ(total, W.reflection_count()) << spec;
    }
}

TEST(ReflGroup, RootDataSatisfiesReflectionFormula) {
    for (const char* spec : {"S3", "Z4", "S2xZ3"}) {
        auto W = build_group(spec);
        for (const auto& r : W.reflections()) {
            const auto& s = W.element(r.element);
            EXPECT_EQ(s.act_covector(r.alpha), scaled(r.alpha, r.lambda));
            // s fixes the hyperplane ker(alpha) and moves the coroot by a scalar
            Vec sv = s.act_vector(r.coroot);
            EXPECT_EQ(sv, scaled(r.coroot, r.lambda.inverse()));
        }
    }
}

TEST(ReflGroup, InvariantsAreInvariantAndJacobianMatchesHyperplanes) {
    for (const char* spec : {"S3", "Z3", "S2xZ3", "S4", "Z2xZ2"}) {
        auto W = build_group(spec);
        long degprod = 1;
        for (const auto& F : W.invariants()) {
            EXPECT_TRUE(F.is_homogeneous());
            degprod *= F.degree();
            for (std::size_t g = 0; g < W.order(); ++g) EXPECT_EQ(W.act_x(static_cast<int>(g), F), F);
        }
        for (const auto& G : W.y_invariants())
            for (std::size_t g = 0; g < W.order(); ++g) EXPECT_EQ(W.act_y(static_cast<int>(g), G), G);
        EXPECT_EQ(degprod, static_cast<long>(W.order()));
        Poly prod(W.xvars(), CycScalar(1));
        for (const auto& H : W.hyperplanes()) prod *= H.L.pow(H.e - 1);
        EXPECT_TRUE(proportional(jacobian_det(W.invariants()), prod)) << spec;
    }
}

TEST(ReflGroup, Stabilizers) {
    auto W = build_group("S3");
    auto s110 = stabilizer(W, point({1, 1, 0}));
    EXPECT_EQ(s110.group.order(), 2u);
    EXPECT_EQ(s110.group.label(), "S2xS1");
    EXPECT_TRUE(s110.reflection_generated);
    EXPECT_EQ(coset_reps(W, s110).size(), 3u);

    auto s0 = stabilizer(W, point({0, 0, 0}));
    EXPECT_EQ(s0.group.order(), 6u);
    EXPECT_EQ(coset_reps(W, s0).size(), 1u);

    auto s012 = stabilizer(W, point({0, 1, 2}));
    EXPECT_EQ(s012.group.order(), 1u);
    EXPECT_EQ(coset_reps(W, s012).size(), 6u);
    EXPECT_EQ(s012.fixed.size(), 3u);
    EXPECT_TRUE(s012.complement.empty());

    EXPECT_THROW(stabilizer(W, point({1, 1})), std::invalid_argument);
}

TEST(ReflGroup, StabilizerSplitting) {
    for (auto [spec, b] : std::vector<std::pair<std::string, std::vector<CycScalar>>>{
             {"S3", point({1, 1, 0})}, {"S4", point({2, 2, 5, 5})}, {"S2xZ3", point({1, 1, 0})}, {"S2xZ3", point({0, 1, 1})}}) {
        auto W = build_group(spec);
        auto H = stabilizer(W, b);
        EXPECT_TRUE(H.reflection_generated);
        EXPECT_EQ(H.fixed.size() + H.complement.size(), static_cast<std::size_t>(W.rank()));
        std::vector<Vec> all = H.fixed;
        all.insert(all.end(), H.complement.begin(), H.complement.end());
        EXPECT_EQ(rank(Matrix::from_columns(all, W.rank())), static_cast<std::size_t>(W.rank()));
        // b is fixed, the complement is stable
        SubspaceBasis comp(W.rank());
        for (const auto& v : H.complement) comp.insert(v);
        for (const auto& g : H.group.elements()) {
            EXPECT_EQ(g.act_vector(b), b);
            for (const auto& v : H.complement) EXPECT_TRUE(comp.contains(g.act_vector(v)));
        }
    }
}

TEST(ReflGroup, CosetRepresentatives) {
    auto W = build_group("S3");
    auto H = stabilizer(W, point({1, 1, 0}));
    auto reps = coset_reps(W, H);
    ASSERT_EQ(reps.size(), 3u);
    EXPECT_EQ(reps.front(), W.identity());
    std::set<int> sub(H.embed.begin(), H.embed.end());
    std::set<int> covered;
    for (int r : reps)
        for (int h : H.embed) covered.insert(W.mul(h, r));
    EXPECT_EQ(covered.size(), W.order());
    auto alt = coset_reps(W, H, CosetChoice::maximal);
    ASSERT_EQ(alt.size(), 3u);
    EXPECT_NE(alt, reps);
    for (std::size_t k = 0; k < reps.size(); ++k)
        for (std::size_t g = 0; g < W.order(); ++g) {
            auto [l, h] = coset_decompose(W, reps, sub, static_cast<int>(k), static_cast<int>(g));
            EXPECT_EQ(W.mul(reps[k], static_cast<int>(g)), W.mul(h, reps[l]));
        }
}

TEST(ReflGroup, InducedTrivialCharacterOfS2InS3) {
    auto W = build_group("S3");
    auto H = stabilizer(W, point({1, 1, 0}));
    Character ind = induce_character(W, H, trivial_character(H.group));
    EXPECT_EQ(ind, coset_permutation_character(W, H));
    // value 3 on the identity, 1 on transpositions, 0 on 3-cycles
    for (std::size_t k = 0; k < W.classes().size(); ++k) {
        int g = W.classes()[k].front();
        CycScalar expect = g == W.identity() ? CycScalar(3) : W.reflection_of(g) >= 0 ? CycScalar(1) : CycScalar(0);
        EXPECT_EQ(ind.values[k], expect);
    }
}

TEST(ReflGroup, InductionMatchesOracleAndIsTransitive) {
    auto W = build_group("S4");
    auto H1 = stabilizer(W, point({1, 1, 1, 0}));  // S3 x S1
    auto H2 = stabilizer(W, point({1, 1, 2, 0}));  // S2 x S1 x S1
    EXPECT_EQ(induce_character(W, H1, trivial_character(H1.group)), coset_permutation_character(W, H1));
    // Ind_{H2}^{W} = Ind_{H1}^{W} Ind_{H2}^{H1} with H2 inside H1
    auto H2in1 = stabilizer(H1.group, point({1, 1, 2, 0}));
    Character step = induce_character(H1.group, H2in1, trivial_character(H2in1.group));
    EXPECT_EQ(induce_character(W, H1, step), induce_character(W, H2, trivial_character(H2.group)));
    // regular character induces to the regular character
    EXPECT_EQ(induce_character(W, H2, regular_character(H2.group)), regular_character(W));
}

TEST(ReflGroup, ModuleCharacterOfReflectionRepresentation) {
    auto W = build_group("S3");
    std::vector<Matrix> act;
    for (const auto& g : W.elements()) act.push_back(g.matrix());
    Character ch = module_character(W, act);
    EXPECT_EQ(ch, coset_permutation_character(W, stabilizer(W, point({1, 0, 0}))));
    act[1] = Matrix::identity(3) + Matrix::identity(3);
    EXPECT_THROW(module_character(W, act, 1, 200), std::invalid_argument);
}

TEST(ReflGroup, ParameterRestriction) {
    auto W = build_group("S2xZ3");
    ASSERT_EQ(W.reflection_classes().size(), 3u);
    auto c = CParam::per_class(W, {CycScalar(1), CycScalar(2), CycScalar(3)});
    EXPECT_THROW(CParam::per_class(W, {CycScalar(1)}), std::invalid_argument);
    auto H = stabilizer(W, point({1, 1, 0}));
    auto cr = restrict_c(W, c, H);
    for (const auto& r : H.group.reflections())
        EXPECT_EQ(cr.of(H.group, r.element), c.of(W, H.embed[r.element]));
    auto Hb = stabilizer(W, point({0, 1, 1}));
    EXPECT_EQ(Hb.group.order(), 1u);
    EXPECT_TRUE(restrict_c(W, c, Hb).empty());
}
