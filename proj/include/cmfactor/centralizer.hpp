#pragma once

// C(G, H, A): endomorphisms of the right A-module Fun_H(G, A), realized as
// [G:H] x [G:H] matrices over A, with the embedding of CG and the maps between
// the right ideal C iota(e_G) and Fun_H(G, A e_H).

#include "cmfactor/coeffalgebra.hpp"
#include "cmfactor/linalg.hpp"
#include "cmfactor/reflgroup.hpp"

#include <memory>
#include <set>
#include <utility>
#include <vector>

namespace cmfactor {

/// Values f(r_k) on the coset representatives; f(h r_k) = h f(r_k).
struct FunElement {
    std::vector<Vec> values;

    friend bool operator==(const FunElement& a, const FunElement& b) { return a.values == b.values; }
    friend bool operator!=(const FunElement& a, const FunElement& b) { return !(a == b); }
};

/// m x m matrix over A, entry (k, l) at k * m + l.
struct CentElement {
    std::size_t m = 0;
    std::vector<Vec> entries;

    const Vec& at(std::size_t k, std::size_t l) const { return entries[k * m + l]; }
    Vec& at(std::size_t k, std::size_t l) { return entries[k * m + l]; }
    friend bool operator==(const CentElement& a, const CentElement& b) { return a.m == b.m && a.entries == b.entries; }
    friend bool operator!=(const CentElement& a, const CentElement& b) { return !(a == b); }
};

class Centralizer {
public:
    Centralizer(std::shared_ptr<const ReflectionGroup> G, Stabilizer H, CoeffAlgebra A, CosetChoice choice = CosetChoice::minimal)
        : G_(std::move(G)), H_(std::move(H)), A_(std::move(A)) {
        if (A_.group().elements() != H_.group.elements())
            throw std::invalid_argument("Centralizer: coefficient algebra is not over the subgroup");
        reps_ = coset_reps(*G_, H_, choice);
        subgroup_.insert(H_.embed.begin(), H_.embed.end());
        local_.assign(G_->order(), -1);
        for (std::size_t i = 0; i < H_.embed.size(); ++i) local_[H_.embed[i]] = static_cast<int>(i);
    }

    const ReflectionGroup& group() const { return *G_; }
    const Stabilizer& subgroup() const { return H_; }
    const CoeffAlgebra& coeff() const { return A_; }
    const std::vector<int>& reps() const { return reps_; }
    std::size_t index() const { return reps_.size(); }

    /// r_k g = h r_l; returns (l, h as an index into the subgroup).
    std::pair<std::size_t, int> decompose(std::size_t k, int g) const {
        auto [l, h] = coset_decompose(*G_, reps_, subgroup_, static_cast<int>(k), g);
        return {static_cast<std::size_t>(l), local_[h]};
    }
    /// g = h r_l; returns (l, h as an index into the subgroup).
    std::pair<std::size_t, int> locate(int g) const {
        for (std::size_t l = 0; l < reps_.size(); ++l) {
            int h = G_->mul(g, G_->inv(reps_[l]));
            if (subgroup_.count(h)) return {l, local_[h]};
        }
        throw std::logic_error("Centralizer: element outside every coset");
    }

    CentElement zero() const { return {index(), std::vector<Vec>(index() * index(), A_.zero())}; }
    CentElement identity() const { return diagonal(A_.unit()); }
    CentElement diagonal(const Vec& a) const {
        CentElement M = zero();
        for (std::size_t k = 0; k < index(); ++k) M.at(k, k) = a;
        return M;
    }

    CentElement iota(int g) const {
        if (g < 0 || g >= static_cast<int>(G_->order())) throw std::invalid_argument("iota: element not in G");
        CentElement M = zero();
        for (std::size_t k = 0; k < index(); ++k) {
            auto [l, h] = decompose(k, g);
            M.at(k, l) = A_.image(h);
        }
        return M;
    }
    /// iota of the symmetrizer e_G.
    CentElement iota_symmetrizer() const {
        CentElement M = zero();
        CycScalar w = CycScalar(1) / CycScalar(static_cast<long>(G_->order()));
        for (std::size_t g = 0; g < G_->order(); ++g) M = add(M, scale(iota(static_cast<int>(g)), w));
        return M;
    }

    CentElement mul(const CentElement& M, const CentElement& N) const {
        CentElement R = zero();
        std::size_t m = index();
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t k = 0; k < m; ++k) {
                const Vec& a = M.at(i, k);
                if (is_zero(a)) continue;
                for (std::size_t j = 0; j < m; ++j) {
                    const Vec& b = N.at(k, j);
                    if (!is_zero(b)) R.at(i, j) = R.at(i, j) + A_.mul(a, b);
                }
            }
        return R;
    }
    CentElement add(CentElement M, const CentElement& N) const {
        for (std::size_t i = 0; i < M.entries.size(); ++i) M.entries[i] = M.entries[i] + N.entries[i];
        return M;
    }
    CentElement sub(CentElement M, const CentElement& N) const {
        for (std::size_t i = 0; i < M.entries.size(); ++i) M.entries[i] = M.entries[i] - N.entries[i];
        return M;
    }
    CentElement scale(CentElement M, const CycScalar& s) const {
        for (auto& e : M.entries) e = scaled(e, s);
        return M;
    }
    /// Right action of a central z of A: entrywise M_kl z.
    CentElement right_mul(CentElement M, const Vec& z) const {
        for (auto& e : M.entries) e = A_.mul(e, z);
        return M;
    }
    CentElement commutator(const CentElement& M, const CentElement& N) const { return sub(mul(M, N), mul(N, M)); }

    FunElement apply(const CentElement& M, const FunElement& f) const {
        FunElement r{std::vector<Vec>(index(), A_.zero())};
        for (std::size_t k = 0; k < index(); ++k)
            for (std::size_t l = 0; l < index(); ++l)
                if (!is_zero(M.at(k, l)) && !is_zero(f.values[l])) r.values[k] = r.values[k] + A_.mul(M.at(k, l), f.values[l]);
        return r;
    }
    /// (g f)(x) = f(x g).
    FunElement act(int g, const FunElement& f) const { return apply(iota(g), f); }
    FunElement right_mul(FunElement f, const Vec& z) const {
        for (auto& v : f.values) v = A_.mul(v, z);
        return f;
    }

    /// f(g) from the stored values, via g = h r_l.
    Vec evaluate(const FunElement& f, int g) const {
        auto [l, h] = locate(g);
        return A_.mul(A_.image(h), f.values[l]);
    }

    /// delta(g) = e_H for all g.
    FunElement delta() const { return {std::vector<Vec>(index(), A_.symmetrizer())}; }

    bool in_right_ideal(const CentElement& M) const { return mul(M, iota_symmetrizer()) == M; }
    bool valued_in_AeH(const FunElement& f) const {
        Vec e = A_.symmetrizer();
        for (const auto& v : f.values)
            if (A_.mul(v, e) != v) return false;
        return true;
    }

    /// zeta(M) = M(delta) for M in C iota(e_G).
    FunElement zeta(const CentElement& M) const {
        if (!in_right_ideal(M)) throw std::invalid_argument("zeta: matrix is not in the right ideal C iota(e_G)");
        return apply(M, delta());
    }
    /// eta(f)_{kl} = f(r_k) / [G:H], the inverse of zeta.
    CentElement eta(const FunElement& f) const {
        if (!valued_in_AeH(f)) throw std::invalid_argument("eta: function is not valued in A e_H");
        CentElement M = zero();
        CycScalar w = CycScalar(1) / CycScalar(static_cast<long>(index()));
        for (std::size_t k = 0; k < index(); ++k)
            for (std::size_t l = 0; l < index(); ++l) M.at(k, l) = scaled(f.values[k], w);
        return M;
    }

    /// T with f'(r'_k) = sum_l T_kl f(r_l) for the representatives of `other`;
    /// then iota'(g) = T iota(g) T^{-1}.
    CentElement change_of_reps(const Centralizer& other) const {
        CentElement T = zero();
        for (std::size_t k = 0; k < index(); ++k) {
            auto [l, h] = locate(other.reps()[k]);
            T.at(k, l) = A_.image(h);
        }
        return T;
    }

private:
    std::shared_ptr<const ReflectionGroup> G_;
    Stabilizer H_;
    CoeffAlgebra A_;
    std::vector<int> reps_;
    std::set<int> subgroup_;
    std::vector<int> local_;
};

/// Fun_H(G, A e_H) with basis (k, basis of A e_H), the G-action through iota,
/// and right actions of supplied central elements of A.
struct InducedModule {
    std::size_t m = 0;
    SubspaceBasis fiber{0};        // basis of A e_H inside A
    std::vector<Matrix> g_action;  // one per element of G
    std::vector<Matrix> z_action;  // one per supplied central element
    std::size_t dim() const { return m * fiber.size(); }

    /// Coordinates of a function valued in A e_H.
    Vec coordinates(const FunElement& f) const {
        Vec out;
        for (const auto& v : f.values) {
            auto c = fiber.coordinates(v);
            if (!c) throw std::invalid_argument("InducedModule: value outside A e_H");
            out.insert(out.end(), c->begin(), c->end());
        }
        return out;
    }
    FunElement function(const Vec& coords) const {
        FunElement f;
        std::size_t d = fiber.size();
        for (std::size_t k = 0; k < m; ++k) {
            Vec v = zero_vec(fiber.ambient_dim());
            for (std::size_t i = 0; i < d; ++i) axpy(v, coords[k * d + i], fiber.generators()[i]);
            f.values.push_back(std::move(v));
        }
        return f;
    }
};

inline InducedModule induced_module(const Centralizer& C, const std::vector<Vec>& central = {}) {
    const auto& A = C.coeff();
    InducedModule M;
    M.m = C.index();
    M.fiber = SubspaceBasis(A.dim());
    Vec e = A.symmetrizer();
    for (std::size_t i = 0; i < A.dim(); ++i) M.fiber.insert(A.mul(unit_vec(A.dim(), i), e));
    std::size_t d = M.dim();
    auto basis_fun = [&](std::size_t j) {
        Vec c = zero_vec(d);
        c[j] = 1;
        return M.function(c);
    };
    for (std::size_t g = 0; g < C.group().order(); ++g) {
        Matrix mat(d, d);
        for (std::size_t j = 0; j < d; ++j) {
            Vec c = M.coordinates(C.act(static_cast<int>(g), basis_fun(j)));
            for (std::size_t i = 0; i < d; ++i) mat(i, j) = c[i];
        }
        M.g_action.push_back(std::move(mat));
    }
    for (const auto& z : central) {
        Matrix mat(d, d);
        for (std::size_t j = 0; j < d; ++j) {
            Vec c = M.coordinates(C.right_mul(basis_fun(j), z));
            for (std::size_t i = 0; i < d; ++i) mat(i, j) = c[i];
        }
        M.z_action.push_back(std::move(mat));
    }
    return M;
}

}  // namespace cmfactor
