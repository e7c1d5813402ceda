#pragma once

// Rational Cherednik algebras H_{t,c}(W, h) in PBW normal form x^A w y^B,
// finite quotients by centrally generated ideals, centres, the Satake map and
// the module He.

#include "cmfactor/coeffalgebra.hpp"
#include "cmfactor/linalg.hpp"
#include "cmfactor/polyring.hpp"
#include "cmfactor/reflgroup.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace cmfactor {

struct PBWKey {
    Monomial x;
    int w = 0;
    Monomial y;

    friend bool operator==(const PBWKey& a, const PBWKey& b) { return a.w == b.w && a.x == b.x && a.y == b.y; }
};

struct PBWKeyLess {
    bool operator()(const PBWKey& a, const PBWKey& b) const {
        GrlexLess lt;
        if (lt(a.x, b.x)) return true;
        if (lt(b.x, a.x)) return false;
        if (a.w != b.w) return a.w < b.w;
        return lt(a.y, b.y);
    }
};

class CherednikAlgebra;

struct AlgebraMismatch : std::invalid_argument {
    AlgebraMismatch() : std::invalid_argument("PBW elements belong to different algebras") {}
};

class PBWElement {
public:
    using Terms = std::map<PBWKey, CycScalar, PBWKeyLess>;

    PBWElement() = default;
    explicit PBWElement(const CherednikAlgebra* alg) : alg_(alg) {}

    const CherednikAlgebra* algebra() const { return alg_; }
    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    void add_term(const PBWKey& k, const CycScalar& c) {
        if (c.is_zero()) return;
        auto [it, inserted] = terms_.try_emplace(k, c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }
    CycScalar coeff(const PBWKey& k) const {
        auto it = terms_.find(k);
        return it == terms_.end() ? CycScalar(0) : it->second;
    }

    PBWElement& operator+=(const PBWElement& o) {
        check(o);
        for (const auto& [k, c] : o.terms_) add_term(k, c);
        return *this;
    }
    PBWElement& operator-=(const PBWElement& o) {
        check(o);
        for (const auto& [k, c] : o.terms_) add_term(k, -c);
        return *this;
    }
    PBWElement& operator*=(const CycScalar& s) {
        if (s.is_zero()) {
            terms_.clear();
            return *this;
        }
        for (auto& [k, c] : terms_) c *= s;
        return *this;
    }
    friend PBWElement operator+(PBWElement a, const PBWElement& b) { return a += b; }
    friend PBWElement operator-(PBWElement a, const PBWElement& b) { return a -= b; }
    friend PBWElement operator*(PBWElement a, const CycScalar& s) { return a *= s; }
    friend PBWElement operator*(const CycScalar& s, PBWElement a) { return a *= s; }
    PBWElement operator-() const { return PBWElement(*this) *= CycScalar(-1); }
    friend PBWElement operator*(const PBWElement& a, const PBWElement& b);
    friend bool operator==(const PBWElement& a, const PBWElement& b) { return a.terms_ == b.terms_; }
    friend bool operator!=(const PBWElement& a, const PBWElement& b) { return !(a == b); }

    int x_degree() const {
        int d = -1;
        for (const auto& [k, c] : terms_) d = std::max(d, k.x.degree());
        return d;
    }
    int y_degree() const {
        int d = -1;
        for (const auto& [k, c] : terms_) d = std::max(d, k.y.degree());
        return d;
    }
    /// Drops all terms of x-degree above N.
    PBWElement truncated_x(int N) const {
        PBWElement r(alg_);
        for (const auto& [k, c] : terms_)
            if (k.x.degree() <= N) r.terms_.emplace(k, c);
        return r;
    }

    std::string str() const;

private:
    void check(const PBWElement& o) {
        if (!alg_) alg_ = o.alg_;
        else if (o.alg_ && o.alg_ != alg_) throw AlgebraMismatch();
    }

    const CherednikAlgebra* alg_ = nullptr;
    Terms terms_;
};

/// A symbol in a word handed to normal_form.
struct Generator {
    enum class Kind { x, y, group, scalar };
    Kind kind = Kind::scalar;
    Vec vec;  // covector for x, vector for y
    int element = 0;
    CycScalar value = 1;

    static Generator x_form(Vec alpha) { return {Kind::x, std::move(alpha), 0, 1}; }
    static Generator y_vector(Vec a) { return {Kind::y, std::move(a), 0, 1}; }
    static Generator group(int g) { return {Kind::group, {}, g, 1}; }
    static Generator scalar(CycScalar s) { return {Kind::scalar, {}, 0, std::move(s)}; }
};

struct UnknownGenerator : std::invalid_argument {
    explicit UnknownGenerator(const std::string& tok) : std::invalid_argument("unknown generator symbol '" + tok + "'") {}
};

class CherednikAlgebra {
public:
    CherednikAlgebra(std::shared_ptr<const ReflectionGroup> W, CParam c, CycScalar t = CycScalar(0))
        : W_(std::move(W)), c_(std::move(c)), t_(std::move(t)), n_(W_->rank()) {
        for (const auto& r : W_->reflections()) {
            ReflTerm rt;
            rt.element = r.element;
            CycScalar cs = c_.of(*W_, r.element);
            rt.weight.assign(n_ * n_, CycScalar(0));
            for (int j = 0; j < n_; ++j)
                for (int i = 0; i < n_; ++i) rt.weight[j * n_ + i] = cs * r.alpha[j] * r.coroot[i];
            if (!cs.is_zero()) refl_.push_back(std::move(rt));
        }
    }

    const ReflectionGroup& group() const { return *W_; }
    const std::shared_ptr<const ReflectionGroup>& group_ptr() const { return W_; }
    const CParam& c() const { return c_; }
    const CycScalar& t() const { return t_; }
    int rank() const { return n_; }

    PBWElement zero() const { return PBWElement(this); }
    PBWElement term(const PBWKey& k, const CycScalar& c = 1) const {
        PBWElement e(this);
        e.add_term(k, c);
        return e;
    }
    PBWElement one() const { return scalar(1); }
    PBWElement scalar(const CycScalar& s) const { return term({Monomial(n_), W_->identity(), Monomial(n_)}, s); }
    PBWElement x(int i) const { return term({Monomial::var(n_, i), W_->identity(), Monomial(n_)}); }
    PBWElement y(int i) const { return term({Monomial(n_), W_->identity(), Monomial::var(n_, i)}); }
    PBWElement element(int g) const { return term({Monomial(n_), g, Monomial(n_)}); }
    PBWElement x_form(const Vec& alpha) const {
        PBWElement e(this);
        for (int i = 0; i < n_; ++i) e.add_term({Monomial::var(n_, i), W_->identity(), Monomial(n_)}, alpha[i]);
        return e;
    }
    PBWElement y_vector(const Vec& a) const {
        PBWElement e(this);
        for (int i = 0; i < n_; ++i) e.add_term({Monomial(n_), W_->identity(), Monomial::var(n_, i)}, a[i]);
        return e;
    }
    PBWElement from_x_poly(const Poly& p) const {
        PBWElement e(this);
        for (const auto& [m, c] : p.terms()) e.add_term({m, W_->identity(), Monomial(n_)}, c);
        return e;
    }
    PBWElement from_y_poly(const Poly& p) const {
        PBWElement e(this);
        for (const auto& [m, c] : p.terms()) e.add_term({Monomial(n_), W_->identity(), m}, c);
        return e;
    }

    /// e_W = (1/|W|) sum of all group elements.
    PBWElement symmetrizer() const {
        PBWElement e(this);
        CycScalar w = CycScalar(1) / CycScalar(static_cast<long>(W_->order()));
        for (std::size_t g = 0; g < W_->order(); ++g) e.add_term({Monomial(n_), static_cast<int>(g), Monomial(n_)}, w);
        return e;
    }

    /// x_1..x_n, y_1..y_n and the group generators.
    std::vector<PBWElement> generators() const {
        std::vector<PBWElement> g;
        for (int i = 0; i < n_; ++i) g.push_back(x(i));
        for (int i = 0; i < n_; ++i) g.push_back(y(i));
        for (int s : W_->generators()) g.push_back(element(s));
        return g;
    }

    PBWElement multiply(const PBWElement& a, const PBWElement& b) const {
        if ((a.algebra() && a.algebra() != this) || (b.algebra() && b.algebra() != this)) throw AlgebraMismatch();
        PBWElement r(this);
        for (const auto& [ka, ca] : a.terms())
            for (const auto& [kb, cb] : b.terms()) multiply_terms(ka, kb, ca * cb, r);
        return r;
    }

    /// The product with every term of x-degree above N dropped. Pairs whose
    /// product cannot reach x-degree N are skipped before reordering.
    PBWElement multiply_truncated(const PBWElement& a, const PBWElement& b, int N) const {
        if ((a.algebra() && a.algebra() != this) || (b.algebra() && b.algebra() != this)) throw AlgebraMismatch();
        PBWElement r(this);
        for (const auto& [ka, ca] : a.terms())
            for (const auto& [kb, cb] : b.terms())
                if (ka.x.degree() + kb.x.degree() - ka.y.degree() <= N) multiply_terms(ka, kb, ca * cb, r);
        return r.truncated_x(N);
    }

    PBWElement commutator(const PBWElement& a, const PBWElement& b) const { return multiply(a, b) - multiply(b, a); }

    bool is_central(const PBWElement& z) const {
        for (const auto& g : generators())
            if (!commutator(g, z).is_zero()) return false;
        return true;
    }

    PBWElement normal_form(const std::vector<Generator>& word) const {
        PBWElement r = one();
        for (const auto& g : word) {
            switch (g.kind) {
                case Generator::Kind::x: r = multiply(r, x_form(g.vec)); break;
                case Generator::Kind::y: r = multiply(r, y_vector(g.vec)); break;
                case Generator::Kind::group:
                    if (g.element < 0 || g.element >= static_cast<int>(W_->order()))
                        throw UnknownGenerator("g" + std::to_string(g.element));
                    r = multiply(r, element(g.element));
                    break;
                case Generator::Kind::scalar: r *= g.value; break;
            }
        }
        return r;
    }

    /// Tokens: x<i>, y<i> (1-based), g<k> (group element index), e (identity), or a scalar.
    PBWElement normal_form(const std::vector<std::string>& tokens) const {
        std::vector<Generator> word;
        for (const auto& tok : tokens) word.push_back(parse_generator(tok));
        return normal_form(word);
    }

    Generator parse_generator(const std::string& tok) const {
        if (tok == "e") return Generator::group(W_->identity());
        auto index = [&](std::size_t from) -> int {
            if (tok.size() <= from) throw UnknownGenerator(tok);
            for (std::size_t i = from; i < tok.size(); ++i)
                if (!std::isdigit(static_cast<unsigned char>(tok[i]))) throw UnknownGenerator(tok);
            return std::stoi(tok.substr(from));
        };
        if (!tok.empty() && (tok[0] == 'x' || tok[0] == 'y')) {
            int i = index(1);
            if (i < 1 || i > n_) throw UnknownGenerator(tok);
            Vec v = unit_vec(n_, i - 1);
            return tok[0] == 'x' ? Generator::x_form(v) : Generator::y_vector(v);
        }
        if (!tok.empty() && tok[0] == 'g') {
            int k = index(1);
            if (k >= static_cast<int>(W_->order())) throw UnknownGenerator(tok);
            return Generator::group(k);
        }
        try {
            return Generator::scalar(parse_scalar(tok));
        } catch (const ParseError&) {
            throw UnknownGenerator(tok);
        }
    }

private:
    struct Term {
        Monomial x;
        int w;
        Monomial y;
        CycScalar c;
    };
    using TermList = std::vector<Term>;
    struct ReflTerm {
        int element;
        std::vector<CycScalar> weight;  // c(s) alpha_s(e_j) alpha_s^vee(x_i) at j * n + i
    };
    struct PairLess {
        bool operator()(const std::pair<Monomial, Monomial>& a, const std::pair<Monomial, Monomial>& b) const {
            GrlexLess lt;
            if (lt(a.first, b.first)) return true;
            if (lt(b.first, a.first)) return false;
            return lt(a.second, b.second);
        }
    };

    // [y_j, x^A] = sum over factor positions of x_<p [y_j, x_{i_p}] x_>p
    TermList y_commutator(int j, const Monomial& A) const {
        PBWElement acc(this);
        Monomial left(n_);
        for (int i = 0; i < n_; ++i) {
            for (int k = 0; k < A[i]; ++k) {
                Monomial right = A / left / Monomial::var(n_, i);
                if (i == j && !t_.is_zero()) {
                    PBWKey k{left * right, W_->identity(), Monomial(n_)};
                    acc.add_term(k, -t_);
                }
                for (const auto& r : refl_) {
                    const CycScalar& w = r.weight[j * n_ + i];
                    if (w.is_zero()) continue;
                    auto [sc, sr] = W_->element(r.element).act_x(right);
                    acc.add_term({left * sr, r.element, Monomial(n_)}, w * sc);
                }
                left = left * Monomial::var(n_, i);
            }
        }
        TermList out;
        for (const auto& [k, c] : acc.terms()) out.push_back({k.x, k.w, k.y, c});
        return out;
    }

    // y^B x^C in normal form
    std::shared_ptr<const TermList> yx(const Monomial& B, const Monomial& C) const {
        {
            std::lock_guard<std::mutex> lock(mu_);
            auto it = memo_.find({B, C});
            if (it != memo_.end()) return it->second;
        }
        auto out = std::make_shared<TermList>();
        if (B.degree() == 0 || C.degree() == 0) {
            out->push_back({C, W_->identity(), B, CycScalar(1)});
        } else {
            int j = 0;
            while (B[j] == 0) ++j;
            Monomial Bp = B / Monomial::var(n_, j);
            auto inner = yx(Bp, C);
            PBWElement acc(this);
            for (const auto& t : *inner) {
                // x^A y_j u y^D = x^A u (u^{-1} y_j) y^D
                auto [sc, ym] = W_->element(W_->inv(t.w)).act_y(Monomial::var(n_, j));
                acc.add_term({t.x, t.w, ym * t.y}, t.c * sc);
                for (const auto& s : y_commutator(j, t.x))
                    acc.add_term({s.x, W_->mul(s.w, t.w), t.y}, t.c * s.c);
            }
            for (const auto& [k, c] : acc.terms()) out->push_back({k.x, k.w, k.y, c});
        }
        std::lock_guard<std::mutex> lock(mu_);
        return memo_.emplace(std::make_pair(B, C), std::move(out)).first->second;
    }

    void multiply_terms(const PBWKey& a, const PBWKey& b, const CycScalar& coeff, PBWElement& out) const {
        // (x^A w y^B)(x^C v y^D) = x^A w (y^B x^C) v y^D
        auto mid = yx(a.y, b.x);
        for (const auto& t : *mid) {
            auto [s1, xm] = W_->element(a.w).act_x(t.x);
            int vinv = W_->inv(b.w);
            auto [s2, ym] = W_->element(vinv).act_y(t.y);
            int g = W_->mul(W_->mul(a.w, t.w), b.w);
            out.add_term({a.x * xm, g, ym * b.y}, coeff * t.c * s1 * s2);
        }
    }

    std::shared_ptr<const ReflectionGroup> W_;
    CParam c_;
    CycScalar t_;
    int n_;
    std::vector<ReflTerm> refl_;
    mutable std::mutex mu_;
    mutable std::map<std::pair<Monomial, Monomial>, std::shared_ptr<const TermList>, PairLess> memo_;
};

inline PBWElement operator*(const PBWElement& a, const PBWElement& b) {
    const CherednikAlgebra* alg = a.algebra() ? a.algebra() : b.algebra();
    if (!alg) return PBWElement();
    return alg->multiply(a, b);
}

inline std::string PBWElement::str() const {
    if (terms_.empty()) return "0";
    std::string s;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const auto& [k, c] = *it;
        std::vector<std::string> parts;
        if (alg_) {
            const auto& W = alg_->group();
            Poly px = Poly::monomial(W.xvars(), k.x), py = Poly::monomial(W.yvars(), k.y);
            if (k.x.degree() > 0) parts.push_back(px.monomial_str(k.x));
            if (k.w != W.identity()) parts.push_back("g" + std::to_string(k.w));
            if (k.y.degree() > 0) parts.push_back(py.monomial_str(k.y));
        }
        std::string body;
        for (const auto& p : parts) body += (body.empty() ? "" : "*") + p;
        std::string cs = coefficient_prefix(c, body.empty(), first);
        s += cs + body;
        first = false;
    }
    return s;
}

/// Cut data: the point b in h and, optionally, the point lambda in h*.
struct IdealCut {
    std::vector<CycScalar> b;
    std::optional<std::vector<CycScalar>> lambda;
};

struct NonCentralCut : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Generators F_i(x) - F_i(b) of m(b) C[h].
inline std::vector<Poly> fiber_generators(const ReflectionGroup& W, const std::vector<CycScalar>& b) {
    if (static_cast<int>(b.size()) != W.rank())
        throw std::invalid_argument("b has rank " + std::to_string(b.size()) + ", group rank " + std::to_string(W.rank()));
    std::vector<Poly> g;
    for (const auto& F : W.invariants()) g.push_back(F - Poly(W.xvars(), F.evaluate(b)));
    return g;
}

inline std::vector<Poly> y_fiber_generators(const ReflectionGroup& W, const std::vector<CycScalar>& lambda) {
    if (static_cast<int>(lambda.size()) != W.rank())
        throw std::invalid_argument("lambda has rank " + std::to_string(lambda.size()) + ", group rank " + std::to_string(W.rank()));
    std::vector<Poly> g;
    for (const auto& G : W.y_invariants()) g.push_back(G - Poly(W.yvars(), G.evaluate(lambda)));
    return g;
}

/// C[h]/m(b)C[h] as a reducer.
inline IdealReducer x_fiber(const ReflectionGroup& W, const std::vector<CycScalar>& b) {
    return IdealReducer(W.xvars(), fiber_generators(W, b));
}

/// Finite-dimensional quotient of H_{0,c} by a centrally generated ideal. The
/// x-side is always cut at m(b); the y-side is cut either by the invariants at
/// lambda or by given central elements z_j - v_j (filtered by y-degree).
class QuotientAlgebra {
public:
    using HPtr = std::shared_ptr<const CherednikAlgebra>;

    static QuotientAlgebra double_cut(HPtr H, const std::vector<CycScalar>& b, const std::vector<CycScalar>& lambda) {
        const auto& W = H->group();
        auto Q = polynomial_cut(std::move(H), b, y_fiber_generators(W, lambda));
        Q.lambda_ = lambda;
        return Q;
    }

    /// x-side cut at b and y-side cut by central polynomials in y alone.
    static QuotientAlgebra polynomial_cut(HPtr H, const std::vector<CycScalar>& b, const std::vector<Poly>& ygens) {
        QuotientAlgebra Q(std::move(H), b);
        const auto& W = Q.H_->group();
        for (const auto& g : ygens)
            if (!Q.H_->is_central(Q.H_->from_y_poly(g))) throw NonCentralCut("y-side cut generator is not central");
        Q.yred_ = std::make_shared<IdealReducer>(W.yvars(), ygens);
        const auto& xs = Q.xred_->standard_monomials();
        const auto& ys = Q.yred_->standard_monomials();
        for (const auto& xm : xs)
            for (std::size_t w = 0; w < W.order(); ++w)
                for (const auto& ym : ys) Q.basis_.push_back({xm, static_cast<int>(w), ym});
        Q.finish();
        return Q;
    }

    static QuotientAlgebra quotient(HPtr H, const IdealCut& cut) {
        if (!cut.lambda) throw std::invalid_argument("quotient: the y-side point is required for a finite-dimensional cut");
        return double_cut(std::move(H), cut.b, *cut.lambda);
    }

    /// x-side cut at b plus the ideal generated by z_j - values_j, where the
    /// z_j are central modulo the x-cut and have y-leading forms forming a
    /// regular sequence. Reduction is exact for y-degree up to the bound.
    static QuotientAlgebra central_cut(HPtr H, const std::vector<CycScalar>& b, const std::vector<PBWElement>& z,
                                       const std::vector<CycScalar>& values, int degree_bound) {
        if (z.size() != values.size()) throw std::invalid_argument("central_cut: one value per central element");
        for (int D = degree_bound;; D *= 2) {
            QuotientAlgebra Q(H, b);
            Q.build_central(z, values, D);
            int top = 0;
            for (const auto& k : Q.basis_) top = std::max(top, k.y.degree());
            if (2 * top <= D) {
                Q.finish();
                return Q;
            }
            if (D > 64) throw std::runtime_error("central_cut: degree bound does not stabilize");
        }
    }

    const CherednikAlgebra& algebra() const { return *H_; }
    const HPtr& algebra_ptr() const { return H_; }
    const ReflectionGroup& group() const { return H_->group(); }
    std::size_t dim() const { return basis_.size(); }
    const std::vector<PBWKey>& basis() const { return basis_; }
    const IdealReducer& x_reducer() const { return *xred_; }
    const std::vector<CycScalar>& b() const { return b_; }
    int degree_bound() const { return D_; }
    bool is_central_cut() const { return !yred_; }

    /// Coordinates of the image of a PBW element.
    Vec reduce(const PBWElement& e) const {
        Vec out = zero_vec(dim());
        if (yred_) {
            std::size_t ny = yred_->dimension(), nw = group().order();
            for (const auto& [k, c] : e.terms()) {
                const Vec& xc = xred_->monomial_coords(k.x);
                const Vec& yc = yred_->monomial_coords(k.y);
                for (std::size_t i = 0; i < xc.size(); ++i) {
                    if (xc[i].is_zero()) continue;
                    CycScalar cx = c * xc[i];
                    for (std::size_t j = 0; j < yc.size(); ++j)
                        if (!yc[j].is_zero()) out[(i * nw + k.w) * ny + j] += cx * yc[j];
                }
            }
            return out;
        }
        Vec cols = zero_vec(central_->ambient_dim());
        for (const auto& [k, c] : e.terms()) {
            if (k.y.degree() > D_) throw std::length_error("central_cut: y-degree exceeds the reduction bound");
            const Vec& xc = xred_->monomial_coords(k.x);
            for (std::size_t i = 0; i < xc.size(); ++i)
                if (!xc[i].is_zero()) cols[column(i, k.w, k.y)] += c * xc[i];
        }
        cols = central_->reduce(std::move(cols));
        for (std::size_t col = 0; col < cols.size(); ++col) {
            if (cols[col].is_zero()) continue;
            int bi = col_to_basis_[col];
            if (bi < 0) throw std::logic_error("central_cut: residual on a pivot column");
            out[bi] = cols[col];
        }
        return out;
    }

    PBWElement lift(const Vec& v) const {
        PBWElement e(H_.get());
        for (std::size_t i = 0; i < v.size(); ++i)
            if (!v[i].is_zero()) e.add_term(basis_[i], v[i]);
        return e;
    }

    Vec mul(const Vec& a, const Vec& b) const {
        if (table_) {
            Vec r = zero_vec(dim());
            std::size_t d = dim();
            for (std::size_t i = 0; i < d; ++i) {
                if (a[i].is_zero()) continue;
                for (std::size_t j = 0; j < d; ++j) {
                    if (b[j].is_zero()) continue;
                    CycScalar ab = a[i] * b[j];
                    for (const auto& [k, s] : (*table_)[i * d + j]) r[k] += ab * s;
                }
            }
            return r;
        }
        return reduce(H_->multiply(lift(a), lift(b)));
    }

    Vec image(const PBWElement& e) const { return reduce(e); }
    Vec unit() const { return reduce(H_->one()); }
    Vec symmetrizer() const { return reduce(H_->symmetrizer()); }
    Vec element(int g) const { return reduce(H_->element(g)); }
    Vec x(int i) const { return reduce(H_->x(i)); }
    Vec y(int i) const { return reduce(H_->y(i)); }
    std::vector<Vec> generator_images() const {
        std::vector<Vec> g;
        for (const auto& e : H_->generators()) g.push_back(reduce(e));
        return g;
    }

    bool has_table() const { return static_cast<bool>(table_); }
    /// Precomputes all structure constants (dimension permitting).
    void build_table() {
        if (table_) return;
        std::size_t d = dim();
        auto t = std::make_shared<std::vector<CoeffAlgebra::SparseVec>>(d * d);
        for (std::size_t i = 0; i < d; ++i) {
            PBWElement bi = H_->term(basis_[i]);
            for (std::size_t j = 0; j < d; ++j) {
                Vec p = reduce(H_->multiply(bi, H_->term(basis_[j])));
                for (std::size_t k = 0; k < d; ++k)
                    if (!p[k].is_zero()) (*t)[i * d + j].emplace_back(k, p[k]);
            }
        }
        table_ = std::move(t);
    }

    /// The presentation as basis and structure constants with W -> A^x.
    CoeffAlgebra to_coeff_algebra(const std::string& name = "Q") const {
        std::size_t d = dim();
        std::vector<Vec> products;
        products.reserve(d * d);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) products.push_back(mul(unit_vec(d, i), unit_vec(d, j)));
        std::vector<Vec> images;
        for (std::size_t g = 0; g < group().order(); ++g) images.push_back(element(static_cast<int>(g)));
        return CoeffAlgebra(d, products, unit(), H_->group_ptr(), std::move(images), name);
    }

    /// Left multiplication matrix by a.
    Matrix left_matrix(const Vec& a) const {
        Matrix m(dim(), dim());
        for (std::size_t j = 0; j < dim(); ++j) {
            Vec c = mul(a, unit_vec(dim(), j));
            for (std::size_t i = 0; i < dim(); ++i) m(i, j) = c[i];
        }
        return m;
    }

    /// FNV-1a fingerprint of the generator multiplication matrices.
    std::string fingerprint() const {
        std::uint64_t h = 1469598103934665603ull;
        auto feed = [&](const std::string& s) {
            for (unsigned char ch : s) {
                h ^= ch;
                h *= 1099511628211ull;
            }
            h ^= 0xff;
            h *= 1099511628211ull;
        };
        feed(std::to_string(dim()));
        for (const auto& g : generator_images())
            for (std::size_t j = 0; j < dim(); ++j) {
                Vec c = mul(g, unit_vec(dim(), j));
                for (std::size_t i = 0; i < dim(); ++i)
                    if (!c[i].is_zero()) feed(std::to_string(i) + ":" + std::to_string(j) + "=" + c[i].str());
            }
        char buf[17];
        std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
        return buf;
    }

private:
    QuotientAlgebra(HPtr H, std::vector<CycScalar> b) : H_(std::move(H)), b_(std::move(b)) {
        const auto& W = H_->group();
        auto gens = fiber_generators(W, b_);
        for (const auto& g : gens)
            if (!H_->is_central(H_->from_x_poly(g))) throw NonCentralCut("x-side cut generator is not central");
        xred_ = std::make_shared<IdealReducer>(W.xvars(), gens);
    }

    std::size_t column(std::size_t ix, int w, const Monomial& B) const {
        std::size_t pos = ypos_.at(B);
        std::size_t nx = xred_->dimension(), nw = group().order();
        return (ymons_.size() - 1 - pos) * nx * nw + ix * nw + static_cast<std::size_t>(w);
    }

    void build_central(const std::vector<PBWElement>& z, const std::vector<CycScalar>& values, int D) {
        D_ = D;
        const auto& W = group();
        int n = W.rank();
        ymons_ = monomials_up_to(n, D);
        ypos_.clear();
        for (std::size_t i = 0; i < ymons_.size(); ++i) ypos_.emplace(ymons_[i], i);
        std::size_t nx = xred_->dimension(), nw = W.order();
        std::size_t ncols = ymons_.size() * nx * nw;
        central_ = std::make_shared<SparseEchelon>(ncols);
        const auto& xs = xred_->standard_monomials();
        SparseEchelon& ech = *central_;
        auto to_cols = [&](const PBWElement& e) {
            Vec cols = zero_vec(ncols);
            for (const auto& [k, c] : e.terms()) {
                const Vec& xc = xred_->monomial_coords(k.x);
                for (std::size_t i = 0; i < xc.size(); ++i)
                    if (!xc[i].is_zero()) cols[column(i, k.w, k.y)] += c * xc[i];
            }
            return cols;
        };
        for (std::size_t j = 0; j < z.size(); ++j) {
            PBWElement g = z[j] - H_->scalar(values[j]);
            // centrality modulo the x-cut
            for (const auto& gen : H_->generators())
                if (!is_zero(to_cols(H_->commutator(gen, g)))) throw NonCentralCut("central_cut: element is not central modulo the x-cut");
            int dj = g.y_degree();
            for (const auto& B : ymons_) {
                if (B.degree() + dj > D) continue;
                for (const auto& xm : xs)
                    for (std::size_t w = 0; w < nw; ++w)
                        ech.insert(to_cols(H_->multiply(g, H_->term({xm, static_cast<int>(w), B}))));
            }
        }
        basis_.clear();
        std::vector<std::pair<PBWKey, std::size_t>> free_cols;
        for (const auto& B : ymons_)
            for (std::size_t ix = 0; ix < nx; ++ix)
                for (std::size_t w = 0; w < nw; ++w) {
                    std::size_t col = column(ix, static_cast<int>(w), B);
                    if (!ech.is_pivot(col)) free_cols.push_back({{xs[ix], static_cast<int>(w), B}, col});
                }
        std::sort(free_cols.begin(), free_cols.end(),
                  [](const auto& a, const auto& b) { return PBWKeyLess{}(a.first, b.first); });
        col_to_basis_.assign(ncols, -1);
        for (std::size_t i = 0; i < free_cols.size(); ++i) {
            basis_.push_back(free_cols[i].first);
            col_to_basis_[free_cols[i].second] = static_cast<int>(i);
        }
    }

    void finish() {
        if (dim() <= 64) build_table();
    }

    HPtr H_;
    std::vector<CycScalar> b_;
    std::optional<std::vector<CycScalar>> lambda_;
    std::shared_ptr<IdealReducer> xred_, yred_;
    std::vector<PBWKey> basis_;
    // central cut data
    int D_ = 0;
    std::vector<Monomial> ymons_;
    std::map<Monomial, std::size_t, GrlexLess> ypos_;
    std::shared_ptr<SparseEchelon> central_;
    std::vector<int> col_to_basis_;
    std::shared_ptr<const std::vector<CoeffAlgebra::SparseVec>> table_;
};

/// Basis of the centre of Q: common kernel of commutators with all generators,
/// intersected one generator at a time.
inline std::vector<Vec> center_by_commutant(const QuotientAlgebra& Q) {
    std::size_t d = Q.dim();
    std::vector<Vec> K;
    for (std::size_t i = 0; i < d; ++i) K.push_back(unit_vec(d, i));
    for (const auto& g : Q.generator_images()) {
        if (K.empty()) break;
        Matrix m(d, K.size());
        for (std::size_t j = 0; j < K.size(); ++j) {
            Vec c = Q.mul(g, K[j]) - Q.mul(K[j], g);
            for (std::size_t i = 0; i < d; ++i) m(i, j) = c[i];
        }
        std::vector<Vec> next;
        for (const auto& v : nullspace(m)) {
            Vec k = zero_vec(d);
            for (std::size_t j = 0; j < K.size(); ++j) axpy(k, v[j], K[j]);
            next.push_back(std::move(k));
        }
        K = std::move(next);
    }
    return K;
}

/// (1/|W|) sum_g g q g^{-1}.
inline Vec reynolds(const QuotientAlgebra& Q, const Vec& q) {
    const auto& W = Q.group();
    Vec r = zero_vec(Q.dim());
    CycScalar w = CycScalar(1) / CycScalar(static_cast<long>(W.order()));
    for (std::size_t g = 0; g < W.order(); ++g) {
        int gi = static_cast<int>(g);
        axpy(r, w, Q.mul(Q.mul(Q.element(gi), q), Q.element(W.inv(gi))));
    }
    return r;
}

/// Span of the images of invariant polynomials in x and y: Reynolds images of
/// the basis elements without a group part.
inline std::vector<Vec> center_by_invariants(const QuotientAlgebra& Q) {
    SubspaceBasis span(Q.dim());
    for (std::size_t i = 0; i < Q.dim(); ++i)
        if (Q.basis()[i].w == Q.group().identity()) span.insert(reynolds(Q, unit_vec(Q.dim(), i)));
    return span.generators();
}

enum class SatakeDomain { automatic, commutant, invariants };

inline const char* satake_domain_name(SatakeDomain d) {
    switch (d) {
        case SatakeDomain::commutant: return "commutant";
        case SatakeDomain::invariants: return "invariants";
        default: return "auto";
    }
}

/// The spherical subalgebra eQe and the Satake map z -> z e on the chosen
/// central domain.
struct SatakeResult {
    SatakeDomain domain = SatakeDomain::commutant;
    std::vector<Vec> center;     // basis of the domain, in Q coordinates
    std::vector<Vec> spherical;  // basis of eQe
    std::vector<Vec> images;     // z e for each center basis element
    std::size_t rank = 0;
    bool idempotent = false;
    bool central = false;
    bool bijective() const { return idempotent && central && rank == center.size() && rank == spherical.size(); }
};

inline SatakeResult spherical_and_satake(const QuotientAlgebra& Q, SatakeDomain domain = SatakeDomain::automatic) {
    SatakeResult res;
    Vec e = Q.symmetrizer();
    res.idempotent = Q.mul(e, e) == e;
    if (!res.idempotent) throw std::logic_error("symmetrizer image is not idempotent");
    SubspaceBasis sph(Q.dim());
    for (std::size_t i = 0; i < Q.dim(); ++i) sph.insert(Q.mul(Q.mul(e, unit_vec(Q.dim(), i)), e));
    res.spherical = sph.generators();
    if (domain == SatakeDomain::automatic)
        domain = Q.algebra().c().is_zero() ? SatakeDomain::invariants : SatakeDomain::commutant;
    res.domain = domain;
    res.center = domain == SatakeDomain::commutant ? center_by_commutant(Q) : center_by_invariants(Q);
    res.central = true;
    auto gens = Q.generator_images();
    for (const auto& z : res.center)
        for (const auto& g : gens)
            if (Q.mul(g, z) != Q.mul(z, g)) res.central = false;
    SubspaceBasis img(Q.dim());
    for (const auto& z : res.center) {
        Vec ze = Q.mul(z, e);
        res.images.push_back(ze);
        if (!sph.contains(ze)) res.central = false;
        img.insert(ze);
    }
    res.rank = img.size();
    return res;
}

/// The left ideal Q e with its W-action and right actions of central elements.
struct ModuleHe {
    SubspaceBasis span{0};
    std::vector<Matrix> w_action;  // one matrix per group element
    std::vector<Matrix> z_action;  // one matrix per supplied central element
    std::size_t dim() const { return span.size(); }
};

inline ModuleHe module_He(const QuotientAlgebra& Q, const std::vector<Vec>& central = {}) {
    ModuleHe M;
    M.span = SubspaceBasis(Q.dim());
    Vec e = Q.symmetrizer();
    for (std::size_t i = 0; i < Q.dim(); ++i) M.span.insert(Q.mul(unit_vec(Q.dim(), i), e));
    std::size_t d = M.span.size();
    auto coords = [&](const Vec& v) {
        auto c = M.span.coordinates(v);
        if (!c) throw std::logic_error("module_He: action leaves the module");
        return *c;
    };
    for (std::size_t g = 0; g < Q.group().order(); ++g) {
        Vec gv = Q.element(static_cast<int>(g));
        Matrix m(d, d);
        for (std::size_t j = 0; j < d; ++j) {
            Vec c = coords(Q.mul(gv, M.span.generators()[j]));
            for (std::size_t i = 0; i < d; ++i) m(i, j) = c[i];
        }
        M.w_action.push_back(std::move(m));
    }
    for (const auto& z : central) {
        Matrix m(d, d);
        for (std::size_t j = 0; j < d; ++j) {
            Vec c = coords(Q.mul(M.span.generators()[j], z));
            for (std::size_t i = 0; i < d; ++i) m(i, j) = c[i];
        }
        M.z_action.push_back(std::move(m));
    }
    return M;
}

/// (C[h + h*]/cut) x W with basis x^a y^b w, multiplied directly from the
/// commutative rule (f w)(g v) = f (w.g) wv. Used as an independent model of
/// the c = 0 double cut.
class SmashProductModel {
public:
    SmashProductModel(std::shared_ptr<const ReflectionGroup> W, const std::vector<CycScalar>& b, const std::vector<CycScalar>& lambda)
        : W_(std::move(W)), xred_(W_->xvars(), fiber_generators(*W_, b)), yred_(W_->yvars(), y_fiber_generators(*W_, lambda)) {}

    std::size_t dim() const { return xred_.dimension() * yred_.dimension() * W_->order(); }

    std::size_t index(std::size_t ix, std::size_t iy, int w) const {
        return (ix * yred_.dimension() + iy) * W_->order() + static_cast<std::size_t>(w);
    }

    /// Coordinates of x^A y^B w.
    Vec monomial(const Monomial& A, const Monomial& B, int w, const CycScalar& c = 1) const {
        Vec out = zero_vec(dim());
        const Vec& xc = xred_.monomial_coords(A);
        const Vec& yc = yred_.monomial_coords(B);
        for (std::size_t i = 0; i < xc.size(); ++i) {
            if (xc[i].is_zero()) continue;
            for (std::size_t j = 0; j < yc.size(); ++j)
                if (!yc[j].is_zero()) out[index(i, j, w)] += c * xc[i] * yc[j];
        }
        return out;
    }

    Vec mul(const Vec& a, const Vec& b) const {
        Vec out = zero_vec(dim());
        const auto& xs = xred_.standard_monomials();
        const auto& ys = yred_.standard_monomials();
        std::size_t nw = W_->order(), ny = ys.size();
        for (std::size_t p = 0; p < a.size(); ++p) {
            if (a[p].is_zero()) continue;
            std::size_t w = p % nw, iy = (p / nw) % ny, ix = p / nw / ny;
            for (std::size_t q = 0; q < b.size(); ++q) {
                if (b[q].is_zero()) continue;
                std::size_t v = q % nw, jy = (q / nw) % ny, jx = q / nw / ny;
                const auto& g = W_->element(static_cast<int>(w));
                auto [sx, mx] = g.act_x(xs[jx]);
                auto [sy, my] = g.act_y(ys[jy]);
                int wv = W_->mul(static_cast<int>(w), static_cast<int>(v));
                axpy(out, 1, monomial(xs[ix] * mx, ys[iy] * my, wv, a[p] * b[q] * sx * sy));
            }
        }
        return out;
    }

    /// Image of the PBW basis element x^A w y^B, which equals x^A (w.y^B) w.
    Vec from_pbw(const PBWKey& k) const {
        auto [s, my] = W_->element(k.w).act_y(k.y);
        return monomial(k.x, my, k.w, s);
    }

private:
    std::shared_ptr<const ReflectionGroup> W_;
    IdealReducer xred_, yred_;
};

}  // namespace cmfactor
