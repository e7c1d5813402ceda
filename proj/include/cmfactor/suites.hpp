#pragma once

// Named verification suites over one instance, and the orbit-type table for S_n.

#include "cmfactor/bemorphism.hpp"

#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

namespace cmfactor {

/// Suites in dependency order; "all" expands to this list.
inline const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{"pbw", "lemma21", "theta", "psi", "quotient", "phi", "factorization"};
    return names;
}

inline bool needs_fiber(const std::string& suite) { return suite == "quotient" || suite == "phi" || suite == "factorization"; }

namespace detail {

inline PBWElement random_pbw(const CherednikAlgebra& H, std::mt19937& rng, int terms = 3, int maxdeg = 2) {
    std::uniform_int_distribution<int> deg(0, maxdeg), coef(-3, 3);
    std::uniform_int_distribution<int> var(0, H.rank() - 1);
    std::uniform_int_distribution<int> elem(0, static_cast<int>(H.group().order()) - 1);
    PBWElement e = H.zero();
    for (int t = 0; t < terms; ++t) {
        Monomial x(H.rank()), y(H.rank());
        for (int d = deg(rng); d > 0; --d) x = x * Monomial::var(H.rank(), var(rng));
        for (int d = deg(rng); d > 0; --d) y = y * Monomial::var(H.rank(), var(rng));
        int c = coef(rng);
        e.add_term({x, elem(rng), y}, CycScalar(c == 0 ? 1 : c));
    }
    return e;
}

}  // namespace detail

/// Associativity on random triples, the group action by conjugation, the
/// Chevalley fiber dimension and, for c = 0, the smash-product model.
inline VerificationReport pbw_check(const Instance& inst, int triples = 20) {
    VerificationReport rep("pbw", inst);
    auto W = std::make_shared<ReflectionGroup>(build_group(inst.group));
    CParam c = resolve_c(*W, inst.c);
    auto H = std::make_shared<CherednikAlgebra>(W, c);
    std::mt19937 rng(inst.seed);
    std::string assoc;
    for (int t = 0; t < triples && assoc.empty(); ++t) {
        auto a = detail::random_pbw(*H, rng), b = detail::random_pbw(*H, rng), d = detail::random_pbw(*H, rng);
        PBWElement r = (a * b) * d - a * (b * d);
        if (!r.is_zero()) assoc = "triple " + std::to_string(t) + ": " + r.str();
    }
    rep.expect("pbw.associativity", assoc.empty(), assoc, std::to_string(triples) + " triples");

    std::string conj;
    std::size_t n = static_cast<std::size_t>(W->rank());
    for (int g : W->generators())
        for (std::size_t i = 0; i < n && conj.empty(); ++i) {
            const auto& ge = W->element(g);
            PBWElement lx = H->element(g) * H->x(static_cast<int>(i)) * H->element(W->inv(g));
            PBWElement ly = H->element(g) * H->y(static_cast<int>(i)) * H->element(W->inv(g));
            if (lx != H->x_form(ge.act_covector(unit_vec(n, i))) || ly != H->y_vector(ge.act_vector(unit_vec(n, i))))
                conj = "generator g" + std::to_string(g) + ", coordinate " + std::to_string(i + 1);
        }
    rep.expect("pbw.group_conjugation", conj.empty(), conj);

    std::size_t fd = x_fiber(*W, inst.b).dimension();
    rep.expect("pbw.chevalley_fiber", fd == W->order(), "dim " + std::to_string(fd) + " != |W| = " + std::to_string(W->order()),
               "dim C[h]/m(b) = " + std::to_string(fd));

    if (c.is_zero() && W->order() <= 6) {
        auto lambda = instance_lambda(inst);
        auto Q = QuotientAlgebra::double_cut(H, inst.b, lambda);
        SmashProductModel S(W, inst.b, lambda);
        std::vector<Vec> img;
        for (const auto& k : Q.basis()) img.push_back(S.from_pbw(k));
        std::size_t r = rank(Matrix::from_columns(img, S.dim()));
        std::string fail;
        if (r != Q.dim() || S.dim() != Q.dim()) fail = "basis map has rank " + std::to_string(r) + " of " + std::to_string(Q.dim());
        auto gens = Q.generator_images();
        for (std::size_t i = 0; i < Q.dim() && fail.empty(); ++i)
            for (std::size_t g = 0; g < gens.size() && fail.empty(); ++g) {
                Vec p = Q.mul(unit_vec(Q.dim(), i), gens[g]);
                Vec mapped = zero_vec(S.dim()), gm = zero_vec(S.dim());
                for (std::size_t k = 0; k < p.size(); ++k) axpy(mapped, p[k], img[k]);
                for (std::size_t k = 0; k < gens[g].size(); ++k) axpy(gm, gens[g][k], img[k]);
                if (mapped != S.mul(img[i], gm)) fail = "basis " + std::to_string(i) + " times generator " + std::to_string(g);
            }
        rep.expect("pbw.smash_product_model", fail.empty(), fail, "dim " + std::to_string(Q.dim()));
    }
    rep.finish();
    return rep;
}

/// zeta and eta inverse to each other and equivariant, for C, C[W_b] and the
/// double cut of H(W_b) at the origin as coefficient algebras.
inline VerificationReport lemma21_check(const Instance& inst, int samples = 10) {
    VerificationReport rep("lemma21", inst);
    auto W = std::make_shared<ReflectionGroup>(build_group(inst.group));
    CParam c = resolve_c(*W, inst.c);
    auto H = stabilizer(*W, inst.b);
    auto Hg = std::make_shared<ReflectionGroup>(H.group);
    std::mt19937 rng(inst.seed);
    std::uniform_int_distribution<int> coef(-3, 3);

    std::vector<std::pair<std::string, std::function<CoeffAlgebra()>>> triples{
        {"scalars", [&] { return CoeffAlgebra::scalars(Hg); }},
        {"group_algebra", [&] { return CoeffAlgebra::group_algebra(Hg); }},
    };
    std::size_t cut_dim = Hg->order() * Hg->order() * Hg->order();
    if (cut_dim <= 216) {
        triples.push_back({"cherednik_cut", [&] {
                               auto A = std::make_shared<CherednikAlgebra>(Hg, restrict_c(*W, c, H));
                               std::vector<CycScalar> origin(inst.b.size(), CycScalar(0));
                               return QuotientAlgebra::double_cut(A, origin, origin).to_coeff_algebra("cut");
                           }});
    } else {
        rep.note("cherednik_cut skipped: coefficient algebra of dimension " + std::to_string(cut_dim));
    }

    for (const auto& [label, make] : triples) {
        CoeffAlgebra A = make();
        Centralizer C(W, H, A);
        Centralizer C2(W, H, A, CosetChoice::maximal);
        auto center = A.center_basis();
        auto rand_vec = [&] {
            Vec v(A.dim());
            for (auto& s : v) s = CycScalar(coef(rng));
            return v;
        };
        Vec e = A.symmetrizer();
        std::string ze, ez, geq, zeq;
        for (int t = 0; t < samples; ++t) {
            FunElement f;
            for (std::size_t k = 0; k < C.index(); ++k) f.values.push_back(A.mul(rand_vec(), e));
            if (ze.empty() && C.zeta(C.eta(f)) != f) ze = "sample " + std::to_string(t);
            CentElement M = C.zero();
            for (auto& x : M.entries) x = rand_vec();
            M = C.mul(M, C.iota_symmetrizer());
            if (ez.empty() && C.eta(C.zeta(M)) != M) ez = "sample " + std::to_string(t);
            for (std::size_t g = 0; g < W->order() && geq.empty(); ++g) {
                int gi = static_cast<int>(g);
                if (C.zeta(C.mul(C.iota(gi), M)) != C.act(gi, C.zeta(M)) || C.eta(C.act(gi, f)) != C.mul(C.iota(gi), C.eta(f)))
                    geq = "sample " + std::to_string(t) + ", element " + std::to_string(g);
            }
            Vec z = zero_vec(A.dim());
            for (const auto& v : center) axpy(z, CycScalar(coef(rng)), v);
            if (zeq.empty() && (C.zeta(C.right_mul(M, z)) != C.right_mul(C.zeta(M), z) ||
                                C.eta(C.right_mul(f, z)) != C.right_mul(C.eta(f), z)))
                zeq = "sample " + std::to_string(t);
        }
        rep.expect("lemma21." + label + ".zeta_eta", ze.empty(), ze, A.name() + ", dim " + std::to_string(A.dim()));
        rep.expect("lemma21." + label + ".eta_zeta", ez.empty(), ez);
        rep.expect("lemma21." + label + ".G_equivariant", geq.empty(), geq);
        rep.expect("lemma21." + label + ".Z_equivariant", zeq.empty(), zeq, "dim Z(A) = " + std::to_string(center.size()));

        CentElement T = C.change_of_reps(C2);
        std::string ind;
        for (std::size_t g = 0; g < W->order() && ind.empty(); ++g)
            if (C.mul(T, C.iota(static_cast<int>(g))) != C.mul(C2.iota(static_cast<int>(g)), T)) ind = "element " + std::to_string(g);
        if (ind.empty() &&
            module_character(*W, induced_module(C).g_action, inst.seed) != module_character(*W, induced_module(C2).g_action, inst.seed))
            ind = "induced characters differ";
        rep.expect("lemma21." + label + ".independent_of_representatives", ind.empty(), ind);
    }
    rep.finish();
    return rep;
}

struct OrbitRow {
    std::vector<int> type;  // block sizes, descending
    std::vector<CycScalar> b;
    std::string stabilizer;
    std::size_t order = 0;
    std::size_t index = 0;
    std::size_t fiber_dim = 0;        // dim C[h]/m(b)
    std::size_t local_fiber_dim = 0;  // dim C[h]/n(0) for W_b
    std::size_t factor_product = 1;   // product of |S_{n_i}|

    std::string type_str() const {
        std::string s;
        for (std::size_t i = 0; i < type.size(); ++i) s += (i ? "+" : "") + std::to_string(type[i]);
        return s;
    }
};

namespace detail {

inline void partitions(int n, int max, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
    if (n == 0) {
        out.push_back(cur);
        return;
    }
    for (int k = std::min(n, max); k >= 1; --k) {
        cur.push_back(k);
        partitions(n - k, k, cur, out);
        cur.pop_back();
    }
}

inline std::size_t factorial(int n) { return n <= 1 ? 1 : static_cast<std::size_t>(n) * factorial(n - 1); }

}  // namespace detail

/// One row per orbit type n_1 + ... + n_k of S_n, all numbers computed.
inline std::vector<OrbitRow> orbit_table(const std::string& group) {
    GroupSpec spec = parse_group_spec(group);
    if (spec.factors.size() != 1 || spec.factors[0].kind != FactorKind::symmetric)
        throw std::invalid_argument("table needs a single symmetric factor S_n, got " + group);
    int n = spec.factors[0].order;
    ReflectionGroup W(spec);
    std::vector<std::vector<int>> types;
    std::vector<int> cur;
    detail::partitions(n, n, cur, types);
    std::vector<OrbitRow> rows;
    for (const auto& t : types) {
        OrbitRow r;
        r.type = t;
        for (std::size_t blk = 0; blk < t.size(); ++blk)
            for (int j = 0; j < t[blk]; ++j) r.b.emplace_back(static_cast<long>(blk));
        auto H = stabilizer(W, r.b);
        r.stabilizer = H.group.label();
        r.order = H.group.order();
        r.index = H.index_in(W);
        r.fiber_dim = x_fiber(W, r.b).dimension();
        r.local_fiber_dim = x_fiber(H.group, std::vector<CycScalar>(r.b.size(), CycScalar(0))).dimension();
        for (int k : t) r.factor_product *= detail::factorial(k);
        rows.push_back(std::move(r));
    }
    return rows;
}

/// Runs one suite; quotient, phi and factorization need the shared fiber data.
inline VerificationReport run_suite(const std::string& suite, const Instance& inst, const FiberComparison* fiber) {
    if (suite == "pbw") return pbw_check(inst);
    if (suite == "lemma21") return lemma21_check(inst);
    if (suite == "theta") {
        auto rep = verify_theta_relations(inst);
        rep.add(theta_scaling_check(inst, CycScalar(2)));
        return rep;
    }
    if (suite == "psi") return psi_check(inst);
    if (!fiber) throw std::logic_error("run_suite: fiber data missing for " + suite);
    if (suite == "quotient") return quotient_iso_check(inst, *fiber);
    if (suite == "phi") return phi_check(inst, *fiber);
    if (suite == "factorization") return verify_factorization(inst, *fiber);
    throw std::invalid_argument("unknown suite " + suite);
}

/// Formula and meaning of each check, for `explain`.
inline const std::map<std::string, std::string>& check_descriptions() {
    static const std::map<std::string, std::string> d{
        {"pbw.associativity", "(a b) d = a (b d) for random PBW elements x^A w y^B of H_{0,c}(W)."},
        {"pbw.group_conjugation", "g x_i g^{-1} = x_{g e_i} and g y_i g^{-1} = y_{g e_i} for the generators g of W."},
        {"pbw.chevalley_fiber", "dim C[h]/m(b)C[h] = |W|, with m(b) generated by F_i(x) - F_i(b)."},
        {"pbw.smash_product_model", "At c = 0 the double cut equals (C[h + h*]/cut) x W: x^A w y^B -> x^A (w.y^B) w is a bijective algebra map."},
        {"lemma21.zeta_eta", "zeta(eta(f)) = f for f in Fun_{W_b}(W, A e_{W_b}), eta(f)_{kl} = f(r_k)/[W:W_b]."},
        {"lemma21.eta_zeta", "eta(zeta(M)) = M for M in C iota(e_W), zeta(M) = M delta with delta = e_{W_b}."},
        {"lemma21.G_equivariant", "zeta(iota(g) M) = g.zeta(M), with (g f)(x) = f(x g)."},
        {"lemma21.Z_equivariant", "zeta(M z) = zeta(M) z for z in the centre of A."},
        {"lemma21.independent_of_representatives", "T iota(g) = iota'(g) T for the change of coset representatives T."},
        {"theta.x_commute", "[theta(x_a), theta(x_b)] = 0 through x-degree N."},
        {"theta.y_commute", "[theta(y_a), theta(y_b)] = 0 through x-degree N."},
        {"theta.w_multiplicative", "theta(u) theta(v) = theta(uv), theta(u) = iota(u)."},
        {"theta.w_conjugates_x", "theta(u) theta(x_a) theta(u)^{-1} = theta(x_{u a})."},
        {"theta.w_conjugates_y", "theta(u) theta(y_a) theta(u)^{-1} = theta(y_{u a})."},
        {"theta.cherednik_relation", "[theta(x_a), theta(y_v)] + sum_s c_s alpha_s(v) a(alpha_s^vee) theta(s) = 0."},
        {"theta.symmetrizer_idempotent", "theta(e_W)^2 = theta(e_W)."},
        {"theta.c_scaling", "The reflection terms of theta(y_a) at gamma c are gamma times those at c."},
        {"psi.reexpansion", "F_i(x + b) - F_i(b) = Q_i(P(x)) exactly, with P the invariants of W_b."},
        {"psi.jacobian_nonzero", "det(dQ_i/dP_k)(0) != 0; the value is reported."},
        {"psi.jacobian_proportional", "det(dQ/dP)(0) / prod_{b not in H} L_H(b)^{e_H - 1}, reported as a nonzero scalar."},
        {"quotient.x_ideal_membership", "theta(F_i - F_i(b)) has entries F_i(x + b) - F_i(b) in n(0) C[h]."},
        {"quotient.y_cut_central_scalar", "theta(G_j(y)) is a scalar matrix z'_j; the target is cut at z'_j = G_j(lambda)."},
        {"quotient.dimensions", "dim Q = [W:W_b]^2 dim A, both sides computed."},
        {"quotient.unital", "theta(1) = 1."},
        {"quotient.symmetrizer", "theta(e_W) = iota(e_W)."},
        {"quotient.multiplicative", "theta(q g) = theta(q) theta(g) for every basis element q and generator g."},
        {"quotient.multiplicative_samples", "theta(a b) = theta(a) theta(b) on random sparse pairs."},
        {"quotient.bijective", "The images of a basis of Q have full rank."},
        {"phi.satake_source", "z -> z e_W is a bijection from the centre of Q onto e_W Q e_W."},
        {"phi.satake_target", "z -> z e_{W_b} is a bijection from the centre of A onto e A e."},
        {"phi.corner", "theta(z e_W) lies in the corner theta(e_W) C theta(e_W)."},
        {"phi.corner_entry_multiplicative", "M -> [W:W_b] M_{11} is multiplicative on the corner."},
        {"phi.symmetrizer_to_symmetrizer", "[W:W_b] theta(e_W)_{11} = e_{W_b}."},
        {"phi.spherical_preimage", "Each corner entry is z' e_{W_b} for a central z' of A."},
        {"phi.unital", "The centre map sends 1 to 1."},
        {"phi.multiplicative", "The centre map is multiplicative on a basis of the centre."},
        {"phi.lands_in_centre", "The centre map lands in the centre of A."},
        {"phi.bijective", "The centre map has full rank and both centres have the same dimension."},
        {"phi.theta_of_centre_is_scalar", "theta(z) is the scalar matrix with entry the image of z."},
        {"factorization.centre_map", "The centre map used for the right actions is well defined."},
        {"factorization.dimensions", "dim Q e_W = [W:W_b] dim A e_{W_b}."},
        {"factorization.character", "char(Q e_W) = Ind_{W_b}^W char(A e_{W_b}) by the Frobenius formula."},
        {"factorization.character_rhs_direct", "The induced module's own character matches the Frobenius formula."},
        {"factorization.map_defined", "q e -> zeta(theta(q e)) lands in Fun_{W_b}(W, A e_{W_b})."},
        {"factorization.map_bijective", "That map has full rank."},
        {"factorization.intertwines_W", "The map commutes with the W-actions on both sides."},
        {"factorization.intertwines_Z", "The map sends q e z to zeta(theta(q e)) phi(z) for central z."},
    };
    return d;
}

}  // namespace cmfactor
