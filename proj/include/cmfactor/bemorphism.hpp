#pragma once

// theta : H_{0,c}(W) -> C(W, W_b, H_{0,c'}(W_b, h)) near b, at t = 0.
//
// Entries are PBW elements of H' = H_{0,c'}(W_b, h). In series mode the
// x-part is truncated at a fixed order (the completion at 0 replaced by
// degree cutoffs); in xcut mode it is reduced modulo the x-invariants of W_b,
// which is exact because every x-monomial above the coinvariant top degree
// lies in that ideal. The checks at the bottom compare the double cut of H at
// (b, lambda) with the centralizer algebra over the matching cut of H'.

#include "cmfactor/centralizer.hpp"
#include "cmfactor/cherednik.hpp"
#include "cmfactor/report.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace cmfactor {

/// m x m matrix with entries in H' (PBW form).
struct ThetaImage {
    std::size_t m = 0;
    std::vector<PBWElement> entries;

    const PBWElement& at(std::size_t k, std::size_t l) const { return entries[k * m + l]; }
    PBWElement& at(std::size_t k, std::size_t l) { return entries[k * m + l]; }
    friend bool operator==(const ThetaImage& a, const ThetaImage& b) { return a.m == b.m && a.entries == b.entries; }
    friend bool operator!=(const ThetaImage& a, const ThetaImage& b) { return !(a == b); }
};

class ThetaMap {
public:
    enum class Mode { series, xcut };

    /// Entries truncated at x-degree `order`.
    static ThetaMap series(std::shared_ptr<const ReflectionGroup> W, CParam c, std::vector<CycScalar> b, int order,
                           CosetChoice choice = CosetChoice::minimal) {
        if (order < 1) throw std::invalid_argument("ThetaMap: truncation order must be positive");
        return ThetaMap(std::move(W), std::move(c), std::move(b), Mode::series, order, choice);
    }
    /// Entries reduced modulo the x-invariants of W_b.
    static ThetaMap xcut(std::shared_ptr<const ReflectionGroup> W, CParam c, std::vector<CycScalar> b,
                         CosetChoice choice = CosetChoice::minimal) {
        return ThetaMap(std::move(W), std::move(c), std::move(b), Mode::xcut, 0, choice);
    }

    const ReflectionGroup& group() const { return *W_; }
    const std::shared_ptr<const ReflectionGroup>& group_ptr() const { return W_; }
    const CParam& c() const { return c_; }
    const std::vector<CycScalar>& b() const { return b_; }
    const Stabilizer& stabilizer() const { return H_; }
    const std::shared_ptr<const CherednikAlgebra>& target_ptr() const { return target_; }
    const CherednikAlgebra& target() const { return *target_; }
    const std::vector<int>& reps() const { return reps_; }
    std::size_t index() const { return reps_.size(); }
    Mode mode() const { return mode_; }
    int order() const { return order_; }

    PBWElement normalize(const PBWElement& e) const {
        if (mode_ == Mode::series) return e.truncated_x(order_);
        PBWElement r(target_.get());
        const auto& std_mons = xred_->standard_monomials();
        for (const auto& [k, c] : e.terms()) {
            const Vec& xc = xred_->monomial_coords(k.x);
            for (std::size_t i = 0; i < xc.size(); ++i)
                if (!xc[i].is_zero()) r.add_term({std_mons[i], k.w, k.y}, c * xc[i]);
        }
        return r;
    }

    ThetaImage zero() const { return {index(), std::vector<PBWElement>(index() * index(), target_->zero())}; }
    ThetaImage identity() const {
        ThetaImage M = zero();
        for (std::size_t k = 0; k < index(); ++k) M.at(k, k) = target_->one();
        return M;
    }
    ThetaImage mul(const ThetaImage& A, const ThetaImage& B) const {
        ThetaImage R = zero();
        std::size_t m = index();
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t k = 0; k < m; ++k) {
                if (A.at(i, k).is_zero()) continue;
                for (std::size_t j = 0; j < m; ++j)
                    if (!B.at(k, j).is_zero()) R.at(i, j) += target_->multiply_truncated(A.at(i, k), B.at(k, j), order_);
            }
        if (mode_ == Mode::xcut)
            for (auto& e : R.entries) e = normalize(e);
        return R;
    }
    ThetaImage add(ThetaImage A, const ThetaImage& B) const {
        for (std::size_t i = 0; i < A.entries.size(); ++i) A.entries[i] += B.entries[i];
        return A;
    }
    ThetaImage sub(ThetaImage A, const ThetaImage& B) const {
        for (std::size_t i = 0; i < A.entries.size(); ++i) A.entries[i] -= B.entries[i];
        return A;
    }
    ThetaImage scale(ThetaImage A, const CycScalar& s) const {
        for (auto& e : A.entries) e *= s;
        return A;
    }
    ThetaImage commutator(const ThetaImage& A, const ThetaImage& B) const { return sub(mul(A, B), mul(B, A)); }

    /// (theta(u) f)(g) = f(g u): entry image(h) at (k, l) where r_k u = h r_l.
    ThetaImage theta_w(int u) const {
        ThetaImage M = zero();
        for (std::size_t k = 0; k < index(); ++k) {
            auto [l, h] = coset_decompose(*W_, reps_, subgroup_, static_cast<int>(k), u);
            M.at(k, static_cast<std::size_t>(l)) = target_->element(H_.to_local(h));
        }
        return M;
    }
    ThetaImage theta_symmetrizer() const {
        ThetaImage M = zero();
        CycScalar w = CycScalar(1) / CycScalar(static_cast<long>(W_->order()));
        for (std::size_t g = 0; g < W_->order(); ++g) M = add(M, scale(theta_w(static_cast<int>(g)), w));
        return M;
    }

    /// Diagonal with entries (r_k . F)(x + b) for F in C[h] (variables of W).
    ThetaImage theta_x_poly(const Poly& F) const {
        ThetaImage M = zero();
        for (std::size_t k = 0; k < index(); ++k)
            M.at(k, k) = normalize(target_->from_x_poly(shift_by_point(W_->act_x(reps_[k], F), b_)));
        return M;
    }
    ThetaImage theta_x(const Vec& alpha) const {
        Poly p(W_->xvars());
        for (std::size_t i = 0; i < alpha.size(); ++i)
            if (!alpha[i].is_zero()) p += Poly::variable(W_->xvars(), static_cast<int>(i)) * Poly(W_->xvars(), alpha[i]);
        return theta_x_poly(p);
    }

    /// theta(y_a) = y_{r_k a} on the diagonal, plus for every reflection s
    /// outside W_b the term kappa_s alpha_s(r_k a) u_s^{-1} (f(s r_k) - f(r_k))
    /// with u_s = x_{alpha_s} + alpha_s(b).
    ThetaImage theta_y(const Vec& a) const {
        ThetaImage M = zero();
        for (std::size_t k = 0; k < index(); ++k) {
            Vec ra = W_->element(reps_[k]).act_vector(a);
            M.at(k, k) += target_->y_vector(ra);
            for (const auto& s : outer_) {
                CycScalar p = pairing(s.alpha, ra);
                if (p.is_zero()) continue;
                PBWElement coeff = s.uinv * (s.kappa * p);
                M.at(k, k) -= coeff;
                auto [l, h] = locate(W_->mul(s.element, reps_[k]));
                M.at(k, l) += target_->multiply(coeff, target_->element(h));
            }
        }
        return M;
    }
    /// Just the reflection sum of theta_y.
    ThetaImage theta_y_correction(const Vec& a) const {
        ThetaImage M = theta_y(a);
        for (std::size_t k = 0; k < index(); ++k) M.at(k, k) -= target_->y_vector(W_->element(reps_[k]).act_vector(a));
        return M;
    }

    ThetaImage theta_y_monomial(const Monomial& B) const {
        {
            std::lock_guard<std::mutex> lock(mu_);
            auto it = ycache_.find(B);
            if (it != ycache_.end()) return it->second;
        }
        ThetaImage r;
        if (B.degree() == 0) {
            r = identity();
        } else {
            int i = 0;
            while (B[i] == 0) ++i;
            Monomial rest = B / Monomial::var(B.nvars(), i);
            r = mul(theta_y(unit_vec(static_cast<std::size_t>(W_->rank()), static_cast<std::size_t>(i))), theta_y_monomial(rest));
        }
        std::lock_guard<std::mutex> lock(mu_);
        return ycache_.emplace(B, std::move(r)).first->second;
    }
    ThetaImage theta_y_poly(const Poly& G) const {
        ThetaImage M = zero();
        for (const auto& [mon, c] : G.terms()) M = add(M, scale(theta_y_monomial(mon), c));
        return M;
    }

    /// theta of an element of H_{0,c}(W) given in PBW form.
    ThetaImage theta(const PBWElement& e) const {
        ThetaImage M = zero();
        for (const auto& [k, c] : e.terms()) {
            ThetaImage t = mul(mul(theta_x_poly(Poly::monomial(W_->xvars(), k.x)), theta_w(k.w)), theta_y_monomial(k.y));
            M = add(M, scale(t, c));
        }
        return M;
    }

    /// First nonzero coefficient of x-degree at most N, or nothing.
    std::optional<std::string> residual(const ThetaImage& M, int N) const {
        for (std::size_t k = 0; k < index(); ++k)
            for (std::size_t l = 0; l < index(); ++l)
                for (const auto& [key, c] : M.at(k, l).terms())
                    if (key.x.degree() <= N)
                        return "entry (" + std::to_string(k + 1) + "," + std::to_string(l + 1) + "): " + target_->term(key, c).str();
        return std::nullopt;
    }

private:
    struct Outer {
        int element;
        Vec alpha;
        CycScalar kappa;
        PBWElement uinv;
    };

    ThetaMap(std::shared_ptr<const ReflectionGroup> W, CParam c, std::vector<CycScalar> b, Mode mode, int order,
             CosetChoice choice)
        : W_(std::move(W)), c_(std::move(c)), b_(std::move(b)), H_(::cmfactor::stabilizer(*W_, b_)), mode_(mode), order_(order) {
        auto Hg = std::make_shared<ReflectionGroup>(H_.group);
        target_ = std::make_shared<CherednikAlgebra>(Hg, restrict_c(*W_, c_, H_));
        reps_ = coset_reps(*W_, H_, choice);
        subgroup_.insert(H_.embed.begin(), H_.embed.end());
        if (mode_ == Mode::xcut) {
            std::vector<CycScalar> origin(b_.size(), CycScalar(0));
            xred_ = std::make_shared<IdealReducer>(Hg->xvars(), fiber_generators(*Hg, origin));
            order_ = xred_->top_degree();
        }
        for (const auto& s : W_->reflections()) {
            if (subgroup_.count(s.element)) continue;
            CycScalar ab = pairing(s.alpha, b_);
            if (ab.is_zero()) throw std::logic_error("theta: reflection outside W_b fixes b (inconsistent stabilizer)");
            Poly u(W_->xvars(), ab);
            for (std::size_t i = 0; i < s.alpha.size(); ++i)
                if (!s.alpha[i].is_zero())
                    u += Poly::variable(W_->xvars(), static_cast<int>(i)) * Poly(W_->xvars(), s.alpha[i]);
            int cut = std::max(order_, 0);
            Poly inv = series_inverse(TruncSeries(u, cut), cut).body();
            // kappa_s = -2 c_s / (1 - lambda_s)
            CycScalar kappa = CycScalar(-2) * c_.of(*W_, s.element) / (CycScalar(1) - s.lambda);
            outer_.push_back({s.element, s.alpha, kappa, normalize(target_->from_x_poly(inv))});
        }
    }

    /// g = h r_l with h local to W_b.
    std::pair<std::size_t, int> locate(int g) const {
        for (std::size_t l = 0; l < reps_.size(); ++l) {
            int h = W_->mul(g, W_->inv(reps_[l]));
            if (subgroup_.count(h)) return {l, H_.to_local(h)};
        }
        throw std::logic_error("theta: element outside every coset");
    }

    std::shared_ptr<const ReflectionGroup> W_;
    CParam c_;
    std::vector<CycScalar> b_;
    Stabilizer H_;
    Mode mode_;
    int order_;
    std::shared_ptr<const CherednikAlgebra> target_;
    std::vector<int> reps_;
    std::set<int> subgroup_;
    std::shared_ptr<const IdealReducer> xred_;
    std::vector<Outer> outer_;
    mutable std::mutex mu_;
    mutable std::map<Monomial, ThetaImage, GrlexLess> ycache_;
};

/// c from one value (uniform) or one value per reflection class.
inline CParam resolve_c(const ReflectionGroup& W, const std::vector<CycScalar>& vals) {
    if (vals.size() == 1) return CParam::uniform(W, vals.front());
    if (vals.size() != W.reflection_classes().size())
        throw std::invalid_argument("c has " + std::to_string(vals.size()) + " values, group has " +
                                    std::to_string(W.reflection_classes().size()) + " reflection classes");
    return CParam::per_class(W, vals);
}

inline std::string vec_str(const std::vector<CycScalar>& v) {
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + v[i].str();
    return s + ")";
}

/// Zero residuals up to x-degree N, with entries computed to N + 2 so that
/// products of two images are exact through degree N.
inline VerificationReport verify_theta_relations(const Instance& inst) {
    VerificationReport rep("theta", inst);
    auto W = std::make_shared<ReflectionGroup>(build_group(inst.group));
    CParam c = resolve_c(*W, inst.c);
    int N = inst.trunc;
    auto th = ThetaMap::series(W, c, inst.b, N + 2);
    std::size_t n = static_cast<std::size_t>(W->rank());
    rep.note("W_b = " + th.stabilizer().group.label() + ", index " + std::to_string(th.index()) +
             ", relations checked through x-degree " + std::to_string(N));

    std::vector<ThetaImage> X, Y;
    for (std::size_t i = 0; i < n; ++i) {
        X.push_back(th.theta_x(unit_vec(n, i)));
        Y.push_back(th.theta_y(unit_vec(n, i)));
    }
    auto first = [&](const std::vector<std::pair<std::string, ThetaImage>>& items) -> std::string {
        for (const auto& [what, M] : items)
            if (auto r = th.residual(M, N)) return what + ": " + *r;
        return {};
    };
    auto run = [&](const std::string& name, const std::vector<std::pair<std::string, ThetaImage>>& items) {
        std::string r = first(items);
        rep.expect(name, r.empty(), r);
    };

    std::vector<std::pair<std::string, ThetaImage>> items;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            items.push_back({"[x" + std::to_string(i + 1) + ",x" + std::to_string(j + 1) + "]", th.commutator(X[i], X[j])});
    run("theta.x_commute", items);

    items.clear();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            items.push_back({"[y" + std::to_string(i + 1) + ",y" + std::to_string(j + 1) + "]", th.commutator(Y[i], Y[j])});
    run("theta.y_commute", items);

    items.clear();
    for (std::size_t u = 0; u < W->order(); ++u)
        for (std::size_t v = 0; v < W->order(); ++v) {
            int iu = static_cast<int>(u), iv = static_cast<int>(v);
            items.push_back({"g" + std::to_string(u) + "*g" + std::to_string(v),
                             th.sub(th.mul(th.theta_w(iu), th.theta_w(iv)), th.theta_w(W->mul(iu, iv)))});
        }
    run("theta.w_multiplicative", items);

    items.clear();
    std::vector<std::pair<std::string, ThetaImage>> yitems;
    for (std::size_t u = 0; u < W->order(); ++u) {
        int iu = static_cast<int>(u);
        ThetaImage Tu = th.theta_w(iu);
        const auto& g = W->element(iu);
        for (std::size_t i = 0; i < n; ++i) {
            // theta(u) theta(x_a) theta(u)^{-1} = theta(x_{u a})
            items.push_back({"g" + std::to_string(u) + " x" + std::to_string(i + 1),
                             th.sub(th.mul(Tu, X[i]), th.mul(th.theta_x(g.act_covector(unit_vec(n, i))), Tu))});
            yitems.push_back({"g" + std::to_string(u) + " y" + std::to_string(i + 1),
                              th.sub(th.mul(Tu, Y[i]), th.mul(th.theta_y(g.act_vector(unit_vec(n, i))), Tu))});
        }
    }
    run("theta.w_conjugates_x", items);
    run("theta.w_conjugates_y", yitems);

    // [x_alpha, y_a] + sum_s c_s alpha_s(a) alpha(alpha_s^vee) s = 0
    items.clear();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            ThetaImage R = th.commutator(X[i], Y[j]);
            for (const auto& s : W->reflections()) {
                CycScalar k = c.of(*W, s.element) * s.alpha[j] * s.coroot[i];
                if (!k.is_zero()) R = th.add(R, th.scale(th.theta_w(s.element), k));
            }
            items.push_back({"[x" + std::to_string(i + 1) + ",y" + std::to_string(j + 1) + "]", R});
        }
    run("theta.cherednik_relation", items);

    ThetaImage E = th.theta_symmetrizer();
    run("theta.symmetrizer_idempotent", {{"e^2 - e", th.sub(th.mul(E, E), E)}});
    rep.finish();
    return rep;
}

/// Correction terms of theta_y scale linearly with c.
inline Check theta_scaling_check(const Instance& inst, const CycScalar& gamma) {
    auto W = std::make_shared<ReflectionGroup>(build_group(inst.group));
    CParam c = resolve_c(*W, inst.c);
    auto th1 = ThetaMap::series(W, c, inst.b, inst.trunc + 2);
    auto th2 = ThetaMap::series(W, c.scaled(gamma), inst.b, inst.trunc + 2);
    std::size_t n = static_cast<std::size_t>(W->rank());
    for (std::size_t i = 0; i < n; ++i) {
        ThetaImage a = th1.theta_y_correction(unit_vec(n, i)), g = th2.theta_y_correction(unit_vec(n, i));
        // the two targets differ in c', so compare coefficientwise
        ThetaImage d = th2.zero();
        for (std::size_t e = 0; e < d.entries.size(); ++e) {
            d.entries[e] = g.entries[e];
            for (const auto& [key, cf] : a.entries[e].terms()) d.entries[e].add_term(key, -cf * gamma);
        }
        if (auto r = th2.residual(d, inst.trunc)) return {"theta.c_scaling", false, "y" + std::to_string(i + 1) + ": " + *r, gamma.str(), {}};
    }
    return {"theta.c_scaling", true, {}, gamma.str(), {}};
}

/// Shifted invariants F_i(x + b) - F_i(b) as polynomials Q_i in the W_b
/// invariants P, and det(dQ/dP)(0) against prod_{b not in H} L_H(b)^{e_H - 1}.
inline VerificationReport psi_check(const Instance& inst) {
    VerificationReport rep("psi", inst);
    auto W = std::make_shared<ReflectionGroup>(build_group(inst.group));
    auto H = stabilizer(*W, inst.b);
    const auto& xv = W->xvars();
    std::vector<Poly> xs;
    for (int i = 0; i < W->rank(); ++i) xs.push_back(Poly::variable(xv, i));
    std::vector<Poly> P;
    for (const auto& p : H.group.invariants()) P.push_back(p.compose(xs));
    auto fresh = VarContext::indexed("P", static_cast<int>(P.size()));

    std::vector<Poly> Q;
    std::string failure;
    for (std::size_t i = 0; i < W->invariants().size() && failure.empty(); ++i) {
        const Poly& F = W->invariants()[i];
        Poly g = shift_by_point(F, inst.b) - Poly(xv, F.evaluate(inst.b));
        try {
            Poly q = express_in_generators(g, P, fresh);
            Poly back = q.compose(P) - g;
            if (!back.is_zero()) failure = "F" + std::to_string(i + 1) + ": re-expansion residual " + back.str();
            Q.push_back(std::move(q));
        } catch (const std::exception& e) {
            failure = "F" + std::to_string(i + 1) + ": " + e.what();
        }
    }
    rep.expect("psi.reexpansion", failure.empty(), failure);
    if (!failure.empty()) {
        rep.finish();
        return rep;
    }
    std::vector<CycScalar> origin(P.size(), CycScalar(0));
    CycScalar det0 = jacobian_det(Q).evaluate(origin);
    rep.expect("psi.jacobian_nonzero", !det0.is_zero(), "det(dQ/dP)(0) = 0").scalar = det0.str();

    CycScalar prod(1);
    for (const auto& hp : W->hyperplanes()) {
        CycScalar v = hp.L.evaluate(inst.b);
        if (!v.is_zero()) prod *= v.pow(hp.e - 1);
    }
    CycScalar ratio = det0.is_zero() ? CycScalar(0) : det0 / prod;
    Check& pc = rep.expect("psi.jacobian_proportional", !det0.is_zero() && !prod.is_zero(), "zero determinant or product",
                           "prod L_H(b)^(e_H-1) = " + prod.str());
    pc.scalar = ratio.str();
    rep.finish();
    return rep;
}

namespace detail {

inline std::string first_nonzero(const CentElement& M, const std::vector<PBWKey>& basis, const CherednikAlgebra& alg) {
    for (std::size_t k = 0; k < M.m; ++k)
        for (std::size_t l = 0; l < M.m; ++l) {
            const Vec& v = M.at(k, l);
            for (std::size_t i = 0; i < v.size(); ++i)
                if (!v[i].is_zero())
                    return "entry (" + std::to_string(k + 1) + "," + std::to_string(l + 1) + "): " + alg.term(basis[i], v[i]).str();
        }
    return {};
}

inline Vec flatten(const CentElement& M) {
    Vec out;
    for (const auto& e : M.entries) out.insert(out.end(), e.begin(), e.end());
    return out;
}

}  // namespace detail

/// The source cut Q = H_{0,c}(W)/(m(b), n(lambda)), the target cut
/// A = H'/(n(0), z'_j - G_j(lambda)) with z'_j = theta(G_j)_{11}, and the map
/// induced by theta from Q to [W:W_b] x [W:W_b] matrices over A.
class FiberComparison {
public:
    FiberComparison(std::shared_ptr<const ReflectionGroup> W, CParam c, std::vector<CycScalar> b, std::vector<CycScalar> lambda)
        : W_(W), c_(c), b_(b), lambda_(lambda), theta_(ThetaMap::xcut(W, c, b)) {
        auto Hw = std::make_shared<CherednikAlgebra>(W_, c_);
        source_.emplace(QuotientAlgebra::double_cut(Hw, b_, lambda_));

        const auto& Gs = W_->y_invariants();
        std::vector<CycScalar> values;
        int maxdeg = 1;
        for (const auto& G : Gs) {
            ThetaImage T = theta_.theta_y_poly(G);
            for (std::size_t k = 0; k < T.m && central_residual_.empty(); ++k)
                for (std::size_t l = 0; l < T.m && central_residual_.empty(); ++l) {
                    PBWElement d = k == l ? T.at(k, k) - T.at(0, 0) : T.at(k, l);
                    if (!d.is_zero())
                        central_residual_ = "theta(G" + std::to_string(zcut_.size() + 1) + ") entry (" + std::to_string(k + 1) +
                                            "," + std::to_string(l + 1) + "): " + d.str();
                }
            zcut_.push_back(T.at(0, 0));
            values.push_back(G.evaluate(lambda_));
            maxdeg = std::max(maxdeg, G.degree());
        }
        std::vector<CycScalar> origin(b_.size(), CycScalar(0));
        // when every z'_j is a polynomial in y alone (W_b = W) the commutative
        // y-side reduction applies; otherwise the general central cut
        std::vector<Poly> ypolys;
        const auto& Hg = theta_.target().group();
        for (std::size_t j = 0; j < zcut_.size(); ++j) {
            Poly p(Hg.yvars(), -values[j]);
            bool pure = true;
            for (const auto& [k, cf] : zcut_[j].terms()) {
                if (k.x.degree() > 0 || k.w != Hg.identity()) pure = false;
                p += Poly::monomial(Hg.yvars(), k.y, cf);
            }
            if (!pure) {
                ypolys.clear();
                break;
            }
            ypolys.push_back(std::move(p));
        }
        if (ypolys.size() == zcut_.size() && !ypolys.empty())
            target_.emplace(QuotientAlgebra::polynomial_cut(theta_.target_ptr(), origin, ypolys));
        else
            target_.emplace(QuotientAlgebra::central_cut(theta_.target_ptr(), origin, zcut_, values, 2 * maxdeg));
        target_->build_table();
        C_.emplace(W_, theta_.stabilizer(), target_->to_coeff_algebra("A_cut"));

        std::size_t n = static_cast<std::size_t>(W_->rank());
        for (std::size_t i = 0; i < n; ++i) {
            xgen_.push_back(reduce(theta_.theta_x(unit_vec(n, i))));
            ygen_.push_back(reduce(theta_.theta_y(unit_vec(n, i))));
        }
        for (std::size_t g = 0; g < W_->order(); ++g) wgen_.push_back(reduce(theta_.theta_w(static_cast<int>(g))));
        for (const auto& k : source_->basis()) {
            CentElement M = C_->mul(C_->mul(x_monomial(k.x), wgen_[static_cast<std::size_t>(k.w)]), y_monomial(k.y));
            images_.push_back(std::move(M));
        }
    }

    const ReflectionGroup& group() const { return *W_; }
    const QuotientAlgebra& source() const { return *source_; }
    const QuotientAlgebra& target() const { return *target_; }
    const Centralizer& centralizer() const { return *C_; }
    const ThetaMap& theta() const { return theta_; }
    const std::vector<PBWElement>& central_cut_elements() const { return zcut_; }
    /// Empty when every theta(G_j) is a scalar matrix.
    const std::string& central_residual() const { return central_residual_; }
    const std::vector<CentElement>& basis_images() const { return images_; }

    /// Image of an element of Q.
    CentElement image(const Vec& q) const {
        CentElement M = C_->zero();
        for (std::size_t i = 0; i < q.size(); ++i)
            if (!q[i].is_zero()) M = C_->add(M, C_->scale(images_[i], q[i]));
        return M;
    }
    /// Matrix over A from an xcut theta image.
    CentElement reduce(const ThetaImage& T) const {
        CentElement M = C_->zero();
        for (std::size_t i = 0; i < T.entries.size(); ++i) M.entries[i] = target_->reduce(T.entries[i]);
        return M;
    }
    /// Generator images in the order of the source algebra's generators().
    std::vector<CentElement> generator_images() const {
        std::vector<CentElement> g(xgen_.begin(), xgen_.end());
        g.insert(g.end(), ygen_.begin(), ygen_.end());
        for (int s : W_->generators()) g.push_back(wgen_[static_cast<std::size_t>(s)]);
        return g;
    }

    std::string describe(const CentElement& M) const { return detail::first_nonzero(M, target_->basis(), target_->algebra()); }

private:
    CentElement x_monomial(const Monomial& A) {
        auto it = xcache_.find(A);
        if (it != xcache_.end()) return it->second;
        CentElement r = C_->identity();
        for (int i = 0; i < A.nvars(); ++i)
            for (int e = 0; e < A[i]; ++e) r = C_->mul(r, xgen_[static_cast<std::size_t>(i)]);
        return xcache_.emplace(A, r).first->second;
    }
    CentElement y_monomial(const Monomial& B) {
        auto it = ycache_.find(B);
        if (it != ycache_.end()) return it->second;
        CentElement r = C_->identity();
        for (int i = 0; i < B.nvars(); ++i)
            for (int e = 0; e < B[i]; ++e) r = C_->mul(r, ygen_[static_cast<std::size_t>(i)]);
        return ycache_.emplace(B, r).first->second;
    }

    std::shared_ptr<const ReflectionGroup> W_;
    CParam c_;
    std::vector<CycScalar> b_, lambda_;
    ThetaMap theta_;
    std::optional<QuotientAlgebra> source_, target_;
    std::optional<Centralizer> C_;
    std::vector<PBWElement> zcut_;
    std::string central_residual_;
    std::vector<CentElement> xgen_, ygen_, wgen_;
    std::vector<CentElement> images_;
    std::map<Monomial, CentElement, GrlexLess> xcache_, ycache_;
};

inline std::vector<CycScalar> instance_lambda(const Instance& inst) {
    if (inst.lambda) return *inst.lambda;
    return std::vector<CycScalar>(inst.b.size(), CycScalar(0));
}

inline std::unique_ptr<FiberComparison> make_fiber_comparison(const Instance& inst) {
    auto W = std::make_shared<ReflectionGroup>(build_group(inst.group));
    return std::make_unique<FiberComparison>(W, resolve_c(*W, inst.c), inst.b, instance_lambda(inst));
}

/// theta maps m(b) into n(0) and the y-cut into the central cut, and the
/// induced map Q -> C(W, W_b, A) is a bijective algebra map.
/// Dimension and a hash of the basis and of every product basis * generator.
inline nlohmann::json structure_record(const QuotientAlgebra& Q) {
    std::ostringstream os;
    auto mono = [&](const Monomial& m) {
        for (int i = 0; i < m.nvars(); ++i) os << m[i] << ' ';
    };
    for (const auto& k : Q.basis()) {
        mono(k.x);
        os << '|' << k.w << '|';
        mono(k.y);
        os << ';';
    }
    auto gens = Q.generator_images();
    for (std::size_t i = 0; i < Q.dim(); ++i)
        for (const auto& g : gens) {
            for (const auto& c : Q.mul(unit_vec(Q.dim(), i), g)) os << c.str() << ',';
            os << ';';
        }
    nlohmann::json j;
    j["dim"] = Q.dim();
    j["structure_hash"] = fnv1a_hex(os.str());
    return j;
}

inline nlohmann::json character_record(const Character& c) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& v : c.values) a.push_back(v.str());
    return a;
}

inline VerificationReport quotient_iso_check(const Instance& inst, const FiberComparison& F) {
    VerificationReport rep("quotient", inst);
    const auto& W = F.group();
    const auto& th = F.theta();
    const auto& Q = F.source();
    const auto& A = F.target();
    const auto& C = F.centralizer();

    // theta(F_i - F_i(b)) has entries F_i(x + b) - F_i(b), which must lie in n(0) C[h]
    auto series = ThetaMap::series(F.theta().group_ptr(), th.c(), th.b(), std::max(1, W.invariants().back().degree()));
    IdealReducer n0 = x_fiber(th.stabilizer().group, std::vector<CycScalar>(th.b().size(), CycScalar(0)));
    std::string member;
    const auto gens = fiber_generators(W, th.b());
    for (std::size_t i = 0; i < gens.size() && member.empty(); ++i) {
        ThetaImage T = series.theta_x_poly(gens[i]);
        for (std::size_t k = 0; k < T.m && member.empty(); ++k)
            for (std::size_t l = 0; l < T.m && member.empty(); ++l) {
                const PBWElement& e = T.at(k, l);
                Poly p(th.stabilizer().group.xvars());
                bool pure = true;
                for (const auto& [key, cf] : e.terms()) {
                    if (key.w != series.target().group().identity() || key.y.degree() > 0 || k != l) pure = false;
                    p += Poly::monomial(p.vars(), key.x, cf);
                }
                if (!pure || !n0.reduces_to_zero(p))
                    member = "theta(F" + std::to_string(i + 1) + " - F" + std::to_string(i + 1) + "(b)) entry (" +
                             std::to_string(k + 1) + "," + std::to_string(l + 1) + "): " + e.str();
            }
    }
    rep.expect("quotient.x_ideal_membership", member.empty(), member);
    rep.expect("quotient.y_cut_central_scalar", F.central_residual().empty(), F.central_residual());

    std::size_t m = C.index();
    std::size_t src = Q.dim(), tgt = m * m * A.dim();
    rep.expect("quotient.dimensions", src == tgt, "source " + std::to_string(src) + " != target " + std::to_string(tgt),
               "source " + std::to_string(src) + " = " + std::to_string(m) + "^2 * " + std::to_string(A.dim()) + " = target " +
                   std::to_string(tgt));

    // theta(e_W) = iota(e_W), unit and symmetrizer
    rep.expect("quotient.unital", F.image(Q.unit()) == C.identity(), F.describe(C.sub(F.image(Q.unit()), C.identity())));
    rep.expect("quotient.symmetrizer", F.image(Q.symmetrizer()) == C.iota_symmetrizer(),
               F.describe(C.sub(F.image(Q.symmetrizer()), C.iota_symmetrizer())));

    // theta(q g) = theta(q) theta(g) for every basis element q and generator g,
    // which forces multiplicativity on all of Q
    auto ggens = Q.generator_images();
    auto tgens = F.generator_images();
    std::string mult;
    for (std::size_t i = 0; i < Q.dim() && mult.empty(); ++i)
        for (std::size_t g = 0; g < ggens.size() && mult.empty(); ++g) {
            CentElement lhs = F.image(Q.mul(unit_vec(Q.dim(), i), ggens[g]));
            CentElement rhs = C.mul(F.basis_images()[i], tgens[g]);
            if (lhs != rhs) mult = "basis " + std::to_string(i) + " times generator " + std::to_string(g) + ": " + F.describe(C.sub(lhs, rhs));
        }
    rep.expect("quotient.multiplicative", mult.empty(), mult);

    // a few random pairs as an independent sample
    std::mt19937 rng(inst.seed);
    std::uniform_int_distribution<std::size_t> pick(0, Q.dim() - 1);
    std::uniform_int_distribution<int> coef(-2, 2);
    std::string sample;
    for (int t = 0; t < 4 && sample.empty(); ++t) {
        Vec a = zero_vec(Q.dim()), b = zero_vec(Q.dim());
        for (int r = 0; r < 3; ++r) {
            a[pick(rng)] += CycScalar(coef(rng));
            b[pick(rng)] += CycScalar(coef(rng));
        }
        CentElement lhs = F.image(Q.mul(a, b)), rhs = C.mul(F.image(a), F.image(b));
        if (lhs != rhs) sample = "sample " + std::to_string(t) + ": " + F.describe(C.sub(lhs, rhs));
    }
    rep.expect("quotient.multiplicative_samples", sample.empty(), sample);

    Matrix M(F.basis_images().size(), tgt);
    for (std::size_t i = 0; i < F.basis_images().size(); ++i) {
        Vec v = detail::flatten(F.basis_images()[i]);
        for (std::size_t j = 0; j < v.size(); ++j) M(i, j) = v[j];
    }
    std::size_t r = rank(M);
    rep.expect("quotient.bijective", r == src && src == tgt, "rank " + std::to_string(r) + " of " + std::to_string(src),
               "rank " + std::to_string(r));
    rep.record("source", structure_record(Q));
    rep.record("target", structure_record(A));
    rep.record("index", m);
    rep.finish();
    return rep;
}

/// The map Z(Q) -> Z(A), z -> S_A^{-1}(m (theta(z e_W))_{11}), with its checks.
struct CentreMap {
    SatakeResult source, target;
    std::vector<Vec> images;  // one per source centre basis element, in A coordinates
    std::string failure;      // first failure while building the map
};

inline CentreMap centre_map(const FiberComparison& F, VerificationReport* rep = nullptr) {
    const auto& Q = F.source();
    const auto& A = F.target();
    const auto& C = F.centralizer();
    CentreMap out;
    out.source = spherical_and_satake(Q);
    out.target = spherical_and_satake(A);
    Vec e = Q.symmetrizer();
    CentElement E = C.iota_symmetrizer();
    CycScalar m(static_cast<long>(C.index()));
    Matrix S = Matrix::from_columns(out.target.images, A.dim());

    std::string corner, corner_mult, solve_fail;
    std::vector<Vec> corner_entries;
    for (std::size_t i = 0; i < out.source.center.size(); ++i) {
        CentElement M = F.image(Q.mul(out.source.center[i], e));
        if (corner.empty() && C.mul(C.mul(E, M), E) != M) corner = "centre element " + std::to_string(i) + ": " + F.describe(C.sub(C.mul(C.mul(E, M), E), M));
        Vec s = scaled(M.at(0, 0), m);
        corner_entries.push_back(s);
        auto coords = solve(S, s);
        Vec z = zero_vec(A.dim());
        if (!coords) {
            if (solve_fail.empty()) solve_fail = "centre element " + std::to_string(i) + " has no preimage under z -> z e";
        } else {
            for (std::size_t j = 0; j < coords->size(); ++j) axpy(z, (*coords)[j], out.target.center[j]);
        }
        out.images.push_back(std::move(z));
    }
    // the corner entry map m(.)_{11} is multiplicative on theta(e) C theta(e)
    for (std::size_t i = 0; i < out.source.center.size() && corner_mult.empty(); ++i)
        for (std::size_t j = 0; j < out.source.center.size() && corner_mult.empty(); ++j) {
            CentElement Mi = F.image(Q.mul(out.source.center[i], e)), Mj = F.image(Q.mul(out.source.center[j], e));
            Vec lhs = scaled(C.mul(Mi, Mj).at(0, 0), m);
            if (lhs != A.mul(corner_entries[i], corner_entries[j]))
                corner_mult = "centre elements " + std::to_string(i) + ", " + std::to_string(j);
        }
    if (rep) {
        rep->expect("phi.satake_source", out.source.bijective(), "z -> z e is not bijective on the source",
                    "dim Z = " + std::to_string(out.source.center.size()) + " (" + satake_domain_name(out.source.domain) + ")");
        rep->expect("phi.satake_target", out.target.bijective(), "z -> z e is not bijective on the target",
                    "dim Z = " + std::to_string(out.target.center.size()) + " (" + satake_domain_name(out.target.domain) + ")");
        rep->expect("phi.corner", corner.empty(), corner);
        rep->expect("phi.corner_entry_multiplicative", corner_mult.empty(), corner_mult);
        Vec ee = scaled(F.image(e).at(0, 0), m);
        rep->expect("phi.symmetrizer_to_symmetrizer", ee == A.symmetrizer(), "m theta(e_W)_11 != e_{W_b}");
        rep->expect("phi.spherical_preimage", solve_fail.empty(), solve_fail);
    }
    out.failure = !corner.empty() ? corner : !corner_mult.empty() ? corner_mult : solve_fail;
    return out;
}

/// Images in Z(A) of arbitrary central q, by linearity over the source basis.
inline Vec apply_centre_map(const CentreMap& cm, const FiberComparison& F, const Vec& z) {
    Matrix Z = Matrix::from_columns(cm.source.center, F.source().dim());
    auto coords = solve(Z, z);
    if (!coords) throw std::invalid_argument("apply_centre_map: element is not central");
    Vec out = zero_vec(F.target().dim());
    for (std::size_t i = 0; i < coords->size(); ++i) axpy(out, (*coords)[i], cm.images[i]);
    return out;
}

inline VerificationReport phi_check(const Instance& inst, const FiberComparison& F) {
    VerificationReport rep("phi", inst);
    rep.note("orientation: computed Z(source) -> Z(target); the comorphism is its inverse, bijectivity is direction-free");
    const auto& Q = F.source();
    const auto& A = F.target();
    CentreMap cm = centre_map(F, &rep);

    Vec one = apply_centre_map(cm, F, Q.unit());
    rep.expect("phi.unital", one == A.unit(), "image of 1 is not 1");

    std::string mult;
    const auto& Z = cm.source.center;
    for (std::size_t i = 0; i < Z.size() && mult.empty(); ++i)
        for (std::size_t j = i; j < Z.size() && mult.empty(); ++j) {
            Vec lhs = apply_centre_map(cm, F, Q.mul(Z[i], Z[j]));
            if (lhs != A.mul(cm.images[i], cm.images[j])) mult = "centre elements " + std::to_string(i) + ", " + std::to_string(j);
        }
    rep.expect("phi.multiplicative", mult.empty(), mult);

    SubspaceBasis img(A.dim());
    for (const auto& v : cm.images) img.insert(v);
    bool central = true;
    for (const auto& v : cm.images)
        for (const auto& g : A.generator_images())
            if (A.mul(g, v) != A.mul(v, g)) central = false;
    rep.expect("phi.lands_in_centre", central, "image is not central");
    rep.expect("phi.bijective", img.size() == Z.size() && Z.size() == cm.target.center.size(),
               "rank " + std::to_string(img.size()) + ", dims " + std::to_string(Z.size()) + " and " +
                   std::to_string(cm.target.center.size()),
               "rank " + std::to_string(img.size()));

    // Phi*(z) agrees with the scalar-matrix entry theta(z)_{11}
    std::string shortcut;
    for (std::size_t i = 0; i < Z.size() && shortcut.empty(); ++i) {
        CentElement M = F.image(Z[i]);
        if (M != F.centralizer().diagonal(cm.images[i])) shortcut = "centre element " + std::to_string(i) + ": " + F.describe(F.centralizer().sub(M, F.centralizer().diagonal(cm.images[i])));
    }
    rep.expect("phi.theta_of_centre_is_scalar", shortcut.empty(), shortcut);
    rep.finish();
    return rep;
}

/// He over Q against Ind_{W_b}^W (A e_{W_b}), with the map q e -> zeta(theta(q e)).
inline VerificationReport verify_factorization(const Instance& inst, const FiberComparison& F) {
    VerificationReport rep("factorization", inst);
    const auto& W = F.group();
    const auto& Q = F.source();
    const auto& A = F.target();
    const auto& C = F.centralizer();
    const auto& H = C.subgroup();
    CentreMap cm = centre_map(F);
    rep.expect("factorization.centre_map", cm.failure.empty(), cm.failure);

    ModuleHe lhs = module_He(Q, cm.source.center);
    InducedModule rhs = induced_module(C, cm.images);
    rep.expect("factorization.dimensions", lhs.dim() == rhs.dim(),
               "lhs " + std::to_string(lhs.dim()) + " != rhs " + std::to_string(rhs.dim()),
               "dim " + std::to_string(lhs.dim()) + " = " + std::to_string(C.index()) + " * " + std::to_string(rhs.fiber.size()));

    Character chi_l = module_character(W, lhs.w_action, inst.seed);
    std::vector<Matrix> h_act;
    for (std::size_t h = 0; h < H.group.order(); ++h) {
        Vec eh = A.element(static_cast<int>(h));
        Matrix mh(rhs.fiber.size(), rhs.fiber.size());
        for (std::size_t j = 0; j < rhs.fiber.size(); ++j) {
            Vec cc = *rhs.fiber.coordinates(A.mul(eh, rhs.fiber.generators()[j]));
            for (std::size_t i = 0; i < cc.size(); ++i) mh(i, j) = cc[i];
        }
        h_act.push_back(std::move(mh));
    }
    Character chi_fiber = module_character(H.group, h_act, inst.seed);
    Character chi_ind = induce_character(W, H, chi_fiber);
    rep.expect("factorization.character", chi_l == chi_ind, "lhs " + chi_l.str() + " != induced " + chi_ind.str(),
               "char " + chi_l.str());
    Character chi_r = module_character(W, rhs.g_action, inst.seed);
    nlohmann::json mods;
    mods["lhs"] = {{"dim", lhs.dim()}, {"character", character_record(chi_l)}};
    mods["fiber"] = {{"dim", rhs.fiber.size()}, {"character", character_record(chi_fiber)}};
    mods["induced"] = {{"dim", rhs.dim()}, {"character", character_record(chi_ind)}};
    rep.record("modules", mods);
    rep.expect("factorization.character_rhs_direct", chi_r == chi_ind, "rhs " + chi_r.str() + " != induced " + chi_ind.str());

    // the map on the basis of Q e
    std::size_t d = lhs.dim();
    Matrix Phi(rhs.dim(), d);
    std::string zeta_fail;
    for (std::size_t j = 0; j < d && zeta_fail.empty(); ++j) {
        try {
            Vec c = rhs.coordinates(C.zeta(F.image(lhs.span.generators()[j])));
            for (std::size_t i = 0; i < c.size(); ++i) Phi(i, j) = c[i];
        } catch (const std::exception& e) {
            zeta_fail = "basis element " + std::to_string(j) + ": " + e.what();
        }
    }
    rep.expect("factorization.map_defined", zeta_fail.empty(), zeta_fail);
    if (zeta_fail.empty() && lhs.dim() == rhs.dim()) {
        std::size_t r = rank(Phi);
        rep.expect("factorization.map_bijective", r == d, "rank " + std::to_string(r) + " of " + std::to_string(d));
        std::string wfail, zfail;
        for (std::size_t g = 0; g < W.order() && wfail.empty(); ++g)
            if (Phi * lhs.w_action[g] != rhs.g_action[g] * Phi) wfail = "group element " + std::to_string(g) + " (class " + std::to_string(W.class_of(static_cast<int>(g))) + ")";
        for (std::size_t z = 0; z < lhs.z_action.size() && zfail.empty(); ++z)
            if (Phi * lhs.z_action[z] != rhs.z_action[z] * Phi) zfail = "centre basis element " + std::to_string(z);
        rep.expect("factorization.intertwines_W", wfail.empty(), wfail);
        rep.expect("factorization.intertwines_Z", zfail.empty(), zfail);
    }
    rep.finish();
    return rep;
}

}  // namespace cmfactor
