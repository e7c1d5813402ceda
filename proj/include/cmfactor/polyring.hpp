#pragma once

// Sparse multivariate polynomials and degree-truncated series over CycScalar.

#include "cmfactor/exactfield.hpp"
#include "cmfactor/linalg.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <string>
#include <vector>

namespace cmfactor {

inline constexpr int kMaxVars = 8;

/// Exponent vector over a fixed variable count (at most kMaxVars).
class Monomial {
public:
    Monomial() = default;
    explicit Monomial(int nvars) : n_(static_cast<std::uint8_t>(nvars)) {
        if (nvars < 0 || nvars > kMaxVars) throw std::invalid_argument("Monomial: too many variables");
    }
    Monomial(std::initializer_list<int> exps) : Monomial(static_cast<int>(exps.size())) {
        int i = 0;
        for (int e : exps) set(i++, e);
    }
    static Monomial var(int nvars, int i, int e = 1) {
        Monomial m(nvars);
        m.set(i, e);
        return m;
    }

    int nvars() const { return n_; }
    int operator[](int i) const { return e_[i]; }
    void set(int i, int e) {
        if (e < 0 || e > 255) throw std::overflow_error("Monomial: exponent out of range");
        e_[i] = static_cast<std::uint8_t>(e);
    }
    int degree() const {
        int d = 0;
        for (int i = 0; i < n_; ++i) d += e_[i];
        return d;
    }
    bool is_one() const { return degree() == 0; }
    bool divides(const Monomial& o) const {
        for (int i = 0; i < n_; ++i)
            if (e_[i] > o.e_[i]) return false;
        return true;
    }

    friend Monomial operator*(const Monomial& a, const Monomial& b) {
        Monomial r(a.n_);
        for (int i = 0; i < a.n_; ++i) r.set(i, a.e_[i] + b.e_[i]);
        return r;
    }
    friend Monomial operator/(const Monomial& a, const Monomial& b) {
        Monomial r(a.n_);
        for (int i = 0; i < a.n_; ++i) r.set(i, a.e_[i] - b.e_[i]);
        return r;
    }
    friend bool operator==(const Monomial& a, const Monomial& b) { return a.n_ == b.n_ && a.e_ == b.e_; }
    friend bool operator!=(const Monomial& a, const Monomial& b) { return !(a == b); }

    const std::array<std::uint8_t, kMaxVars>& raw() const { return e_; }

private:
    std::uint8_t n_ = 0;
    std::array<std::uint8_t, kMaxVars> e_{};
};

/// Graded lexicographic order: lower total degree first, then x1 > x2 > ... within a degree.
struct GrlexLess {
    bool operator()(const Monomial& a, const Monomial& b) const {
        int da = a.degree(), db = b.degree();
        if (da != db) return da < db;
        for (int i = 0; i < a.nvars(); ++i)
            if (a[i] != b[i]) return a[i] < b[i];
        return false;
    }
};

/// All exponent vectors in nvars variables with sum_i weight_i * e_i <= max_degree,
/// in ascending grlex order when all weights are 1.
inline std::vector<Monomial> monomials_up_to(int nvars, int max_degree, std::vector<int> weights = {}) {
    if (weights.empty()) weights.assign(nvars, 1);
    std::vector<Monomial> out;
    Monomial cur(nvars);
    std::function<void(int, int)> rec = [&](int i, int budget) {
        if (i == nvars) {
            out.push_back(cur);
            return;
        }
        for (int e = 0; e * weights[i] <= budget; ++e) {
            cur.set(i, e);
            rec(i + 1, budget - e * weights[i]);
        }
        cur.set(i, 0);
    };
    rec(0, max_degree);
    std::sort(out.begin(), out.end(), GrlexLess{});
    return out;
}

/// Ordered variable names shared by all polynomials of one ring.
struct VarContext {
    std::vector<std::string> names;
    int size() const { return static_cast<int>(names.size()); }
    static std::shared_ptr<const VarContext> make(std::vector<std::string> names) {
        if (names.size() > static_cast<std::size_t>(kMaxVars)) throw std::invalid_argument("too many variables");
        return std::make_shared<const VarContext>(VarContext{std::move(names)});
    }
    static std::shared_ptr<const VarContext> indexed(const std::string& stem, int n) {
        std::vector<std::string> names;
        for (int i = 1; i <= n; ++i) names.push_back(stem + std::to_string(i));
        return make(std::move(names));
    }
};
using VarsPtr = std::shared_ptr<const VarContext>;

struct ContextMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

inline std::string coefficient_prefix(const CycScalar& c, bool constant_term, bool first) {
    std::string s;
    if (c.is_rational()) {
        Rational q = c.rational();
        bool neg = sgn(q) < 0;
        if (neg) q = -q;
        s = first ? (neg ? "-" : "") : (neg ? " - " : " + ");
        if (constant_term) return s + rational_str(q);
        if (q == 1) return s;
        std::string r = rational_str(q);
        return s + (q.get_den() == 1 ? r : "(" + r + ")") + "*";
    }
    s = first ? "" : " + ";
    return s + "[" + c.str() + "]" + (constant_term ? "" : "*");
}

class Poly {
public:
    using Terms = std::map<Monomial, CycScalar, GrlexLess>;

    Poly() = default;
    explicit Poly(VarsPtr vars) : vars_(std::move(vars)) {}
    Poly(VarsPtr vars, const CycScalar& c) : vars_(std::move(vars)) {
        if (!c.is_zero()) terms_[Monomial(vars_->size())] = c;
    }
    static Poly variable(VarsPtr vars, int i) {
        Poly p(vars);
        p.terms_[Monomial::var(vars->size(), i)] = 1;
        return p;
    }
    static Poly monomial(VarsPtr vars, const Monomial& m, const CycScalar& c = 1) {
        Poly p(std::move(vars));
        if (!c.is_zero()) p.terms_[m] = c;
        return p;
    }

    const VarsPtr& vars() const { return vars_; }
    int nvars() const { return vars_ ? vars_->size() : 0; }
    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    int degree() const { return terms_.empty() ? -1 : terms_.rbegin()->first.degree(); }
    CycScalar coeff(const Monomial& m) const {
        auto it = terms_.find(m);
        return it == terms_.end() ? CycScalar(0) : it->second;
    }
    CycScalar constant_term() const { return coeff(Monomial(nvars())); }
    bool is_homogeneous() const {
        return terms_.empty() || terms_.begin()->first.degree() == terms_.rbegin()->first.degree();
    }
    Poly homogeneous_part(int d) const {
        Poly r(vars_);
        for (const auto& [m, c] : terms_)
            if (m.degree() == d) r.terms_.emplace(m, c);
        return r;
    }
    Poly truncated(int max_degree) const {
        Poly r(vars_);
        for (const auto& [m, c] : terms_)
            if (m.degree() <= max_degree) r.terms_.emplace(m, c);
        return r;
    }

    void add_term(const Monomial& m, const CycScalar& c) {
        if (c.is_zero()) return;
        auto [it, inserted] = terms_.try_emplace(m, c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    Poly& operator+=(const Poly& o) {
        check(o);
        for (const auto& [m, c] : o.terms_) add_term(m, c);
        return *this;
    }
    Poly& operator-=(const Poly& o) {
        check(o);
        for (const auto& [m, c] : o.terms_) add_term(m, -c);
        return *this;
    }
    Poly& operator*=(const CycScalar& s) {
        if (s.is_zero()) {
            terms_.clear();
            return *this;
        }
        for (auto& [m, c] : terms_) c *= s;
        return *this;
    }
    Poly operator-() const {
        Poly r = *this;
        for (auto& [m, c] : r.terms_) c = -c;
        return r;
    }
    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator*(Poly a, const CycScalar& s) { return a *= s; }
    friend Poly operator*(const CycScalar& s, Poly a) { return a *= s; }
    friend Poly operator*(const Poly& a, const Poly& b) {
        a.check(b);
        Poly r(a.vars_);
        for (const auto& [ma, ca] : a.terms_)
            for (const auto& [mb, cb] : b.terms_) r.add_term(ma * mb, ca * cb);
        return r;
    }
    Poly& operator*=(const Poly& o) { return *this = *this * o; }
    friend bool operator==(const Poly& a, const Poly& b) {
        if (a.terms_.empty() && b.terms_.empty()) return true;
        a.check(b);
        return a.terms_ == b.terms_;
    }
    friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

    Poly pow(int e) const {
        Poly r(vars_, CycScalar(1));
        for (int i = 0; i < e; ++i) r *= *this;
        return r;
    }

    /// Product with a monomial, optionally discarding terms above max_degree.
    Poly times_monomial(const Monomial& m, const CycScalar& c = 1) const {
        Poly r(vars_);
        for (const auto& [mm, cc] : terms_) r.terms_.emplace(mm * m, cc * c);
        return r;
    }

    Poly derivative(int j) const {
        Poly r(vars_);
        for (const auto& [m, c] : terms_) {
            if (m[j] == 0) continue;
            Monomial d = m;
            d.set(j, m[j] - 1);
            r.add_term(d, c * CycScalar(m[j]));
        }
        return r;
    }

    CycScalar evaluate(const std::vector<CycScalar>& point) const {
        if (static_cast<int>(point.size()) != nvars()) throw std::invalid_argument("evaluate: dimension mismatch");
        CycScalar total(0);
        for (const auto& [m, c] : terms_) {
            CycScalar t = c;
            for (int i = 0; i < m.nvars(); ++i)
                if (m[i] > 0) t *= point[i].pow(m[i]);
            total += t;
        }
        return total;
    }

    /// f(g_1, ..., g_n) where the g_i live in a common target ring.
    Poly compose(const std::vector<Poly>& subs) const {
        if (static_cast<int>(subs.size()) != nvars()) throw std::invalid_argument("compose: arity mismatch");
        if (subs.empty()) throw std::invalid_argument("compose: empty substitution");
        const VarsPtr& target = subs.front().vars();
        std::vector<std::vector<Poly>> powers(subs.size());
        Poly r(target);
        for (const auto& [m, c] : terms_) {
            Poly t(target, c);
            for (int i = 0; i < m.nvars(); ++i) {
                if (m[i] == 0) continue;
                auto& pw = powers[i];
                if (pw.empty()) pw.push_back(Poly(target, CycScalar(1)));
                while (static_cast<int>(pw.size()) <= m[i]) pw.push_back(pw.back() * subs[i]);
                t *= pw[m[i]];
            }
            r += t;
        }
        return r;
    }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::string s;
        bool first = true;
        for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
            const auto& [m, c] = *it;
            s += coefficient_prefix(c, m.is_one(), first);
            s += monomial_str(m);
            first = false;
        }
        return s;
    }
    std::string monomial_str(const Monomial& m) const {
        std::string s;
        for (int i = 0; i < m.nvars(); ++i) {
            if (m[i] == 0) continue;
            if (!s.empty()) s += "*";
            s += vars_->names[i];
            if (m[i] > 1) s += "^" + std::to_string(m[i]);
        }
        return s;
    }

private:
    void check(const Poly& o) const {
        if (vars_ == o.vars_) return;
        if (!vars_ || !o.vars_ || vars_->names != o.vars_->names)
            throw ContextMismatch("polynomials live in different variable contexts");
    }

    VarsPtr vars_;
    Terms terms_;
};

inline std::ostream& operator<<(std::ostream& os, const Poly& p) { return os << p.str(); }

enum class PolyOp { add, sub, mul, scale };

/// Binary polynomial arithmetic; `scale` multiplies f by the constant term of g.
inline Poly poly_arith(const Poly& f, const Poly& g, PolyOp op) {
    switch (op) {
        case PolyOp::add: return f + g;
        case PolyOp::sub: return f - g;
        case PolyOp::mul: return f * g;
        case PolyOp::scale:
            if (g.degree() > 0) throw std::invalid_argument("scale expects a constant");
            return f * g.constant_term();
    }
    return f;
}

/// f(x + b).
inline Poly shift_by_point(const Poly& f, const std::vector<CycScalar>& b) {
    if (static_cast<int>(b.size()) != f.nvars()) throw std::invalid_argument("shift_by_point: dimension mismatch");
    std::vector<Poly> subs;
    for (int i = 0; i < f.nvars(); ++i) subs.push_back(Poly::variable(f.vars(), i) + Poly(f.vars(), b[i]));
    if (subs.empty()) return f;
    return f.compose(subs);
}

/// Determinant of a square matrix of polynomials by cofactor expansion.
inline Poly poly_determinant(const std::vector<std::vector<Poly>>& m, const VarsPtr& vars) {
    std::size_t n = m.size();
    if (n == 0) return Poly(vars, CycScalar(1));
    for (const auto& row : m)
        if (row.size() != n) throw std::invalid_argument("determinant: non-square matrix");
    if (n == 1) return m[0][0];
    Poly det(vars);
    for (std::size_t j = 0; j < n; ++j) {
        if (m[0][j].is_zero()) continue;
        std::vector<std::vector<Poly>> minor;
        for (std::size_t i = 1; i < n; ++i) {
            std::vector<Poly> row;
            for (std::size_t k = 0; k < n; ++k)
                if (k != j) row.push_back(m[i][k]);
            minor.push_back(std::move(row));
        }
        Poly term = m[0][j] * poly_determinant(minor, vars);
        if (j % 2) det -= term;
        else det += term;
    }
    return det;
}

/// det(dF_i/dx_j) for n polynomials in n variables.
inline Poly jacobian_det(const std::vector<Poly>& F) {
    if (F.empty()) throw std::invalid_argument("jacobian_det: empty map");
    int n = F.front().nvars();
    if (static_cast<int>(F.size()) != n) throw std::invalid_argument("jacobian_det: non-square input");
    std::vector<std::vector<Poly>> jac(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) jac[i].push_back(F[i].derivative(j));
    return poly_determinant(jac, F.front().vars());
}

struct NotInSubring : std::runtime_error {
    NotInSubring() : std::runtime_error("not in subring") {}
};

/// Finds Q with Q(P_1, ..., P_n) = g by solving over the graded pieces of the
/// subring generated by P. The result lives in `fresh` (one variable per P_k).
inline Poly express_in_generators(const Poly& g, const std::vector<Poly>& P, VarsPtr fresh = nullptr) {
    if (P.empty()) throw std::invalid_argument("express_in_generators: no generators");
    if (!fresh) fresh = VarContext::indexed("P", static_cast<int>(P.size()));
    if (fresh->size() != static_cast<int>(P.size())) throw std::invalid_argument("fresh context arity mismatch");
    std::vector<int> weights;
    for (const auto& p : P) {
        if (p.degree() <= 0) throw std::invalid_argument("express_in_generators: generator of degree <= 0");
        weights.push_back(p.degree());
    }
    int d = std::max(g.degree(), 0);
    auto betas = monomials_up_to(static_cast<int>(P.size()), d, weights);
    Poly dummy(fresh);
    std::vector<Poly> images;
    for (const auto& beta : betas) images.push_back(Poly::monomial(fresh, beta).compose(P));
    // rows: monomials in the x variables that appear anywhere
    std::map<Monomial, std::size_t, GrlexLess> rows;
    auto note = [&](const Poly& p) {
        for (const auto& [m, c] : p.terms()) rows.try_emplace(m, 0);
    };
    note(g);
    for (const auto& im : images) note(im);
    std::size_t r = 0;
    for (auto& [m, idx] : rows) idx = r++;
    Matrix A(rows.size(), images.size());
    for (std::size_t j = 0; j < images.size(); ++j)
        for (const auto& [m, c] : images[j].terms()) A(rows[m], j) = c;
    Vec rhs = zero_vec(rows.size());
    for (const auto& [m, c] : g.terms()) rhs[rows[m]] = c;
    auto sol = solve(A, rhs);
    if (!sol) throw NotInSubring();
    Poly Q(fresh);
    for (std::size_t j = 0; j < betas.size(); ++j) Q.add_term(betas[j], (*sol)[j]);
    if (Q.compose(P) != g) throw NotInSubring();
    return Q;
}

/// Polynomial with a hard total-degree cutoff.
class TruncSeries {
public:
    TruncSeries(Poly body, int cutoff) : body_(body.truncated(cutoff)), cutoff_(cutoff) {
        if (cutoff < 0) throw std::invalid_argument("TruncSeries: negative cutoff");
    }
    const Poly& body() const { return body_; }
    int cutoff() const { return cutoff_; }

    friend TruncSeries operator+(const TruncSeries& a, const TruncSeries& b) {
        return TruncSeries(a.body_ + b.body_, std::min(a.cutoff_, b.cutoff_));
    }
    friend TruncSeries operator-(const TruncSeries& a, const TruncSeries& b) {
        return TruncSeries(a.body_ - b.body_, std::min(a.cutoff_, b.cutoff_));
    }
    friend TruncSeries operator*(const TruncSeries& a, const TruncSeries& b) {
        int n = std::min(a.cutoff_, b.cutoff_);
        Poly r(a.body_.vars());
        for (const auto& [ma, ca] : a.body_.terms())
            for (const auto& [mb, cb] : b.body_.terms())
                if (ma.degree() + mb.degree() <= n) r.add_term(ma * mb, ca * cb);
        return TruncSeries(std::move(r), n);
    }
    friend bool operator==(const TruncSeries& a, const TruncSeries& b) {
        int n = std::min(a.cutoff_, b.cutoff_);
        return a.body_.truncated(n) == b.body_.truncated(n);
    }

private:
    Poly body_;
    int cutoff_;
};

struct NonUnit : std::domain_error {
    NonUnit() : std::domain_error("non-unit") {}
};

/// v with u * v = 1 modulo terms of degree > N.
inline TruncSeries series_inverse(const TruncSeries& u, int N) {
    CycScalar u0 = u.body().constant_term();
    if (u0.is_zero()) throw NonUnit();
    const VarsPtr& vars = u.body().vars();
    CycScalar inv0 = u0.inverse();
    // u = u0 (1 - r), 1/u = (1/u0) sum_k r^k; r has no constant term
    TruncSeries r(Poly(vars, CycScalar(1)) - u.body() * inv0, N);
    TruncSeries acc(Poly(vars, CycScalar(1)), N);
    TruncSeries pw = acc;
    for (int k = 1; k <= N; ++k) {
        pw = pw * r;
        if (pw.body().is_zero()) break;
        acc = acc + pw;
    }
    return TruncSeries(acc.body() * inv0, N);
}

/// Normal forms in C[vars]/I for an ideal I whose generators have top-degree
/// forms forming a regular sequence (so I has a finite-dimensional quotient and
/// I restricted to degree <= D is spanned by products of degree <= D).
///
/// Standard monomials are the non-leading monomials in grlex order. The level
/// D is raised until no monomial of degree D is standard, which certifies that
/// every higher-degree monomial also reduces.
class IdealReducer {
public:
    IdealReducer(VarsPtr vars, std::vector<Poly> generators, int max_level = 24)
        : vars_(std::move(vars)), gens_(std::move(generators)) {
        int level = 1;
        int topsum = 0;
        for (const auto& g : gens_) {
            if (g.is_zero()) continue;
            level = std::max(level, g.degree());
            topsum += g.degree() - 1;
        }
        level = std::max(level, topsum + 1);
        for (;; ++level) {
            if (level > max_level) throw std::runtime_error("IdealReducer: quotient is not finite up to the level limit");
            build(level);
            bool top_standard = false;
            for (const auto& m : standard_)
                if (m.degree() == level) top_standard = true;
            if (!top_standard) break;
        }
    }

    const VarsPtr& vars() const { return vars_; }
    const std::vector<Poly>& generators() const { return gens_; }
    /// Standard monomials in ascending grlex order; they form a basis of the quotient.
    const std::vector<Monomial>& standard_monomials() const { return standard_; }
    std::size_t dimension() const { return standard_.size(); }
    int level() const { return level_; }
    int top_degree() const {
        int d = 0;
        for (const auto& m : standard_) d = std::max(d, m.degree());
        return d;
    }
    std::size_t standard_index(const Monomial& m) const {
        auto it = std_index_.find(m);
        if (it == std_index_.end()) throw std::out_of_range("not a standard monomial");
        return it->second;
    }

    /// Coordinates of the class of a monomial in the standard basis.
    const Vec& monomial_coords(const Monomial& m) const {
        {
            std::lock_guard<std::mutex> lock(mu_);
            auto it = memo_.find(m);
            if (it != memo_.end()) return it->second;
        }
        Vec coords;
        if (m.degree() <= level_) {
            coords = reduce_in_level(m);
        } else {
            // m = x_j * m', and the class of m' has degree <= top degree < level
            int j = 0;
            while (m[j] == 0) ++j;
            Monomial rest = m;
            rest.set(j, m[j] - 1);
            const Vec& cr = monomial_coords(rest);
            coords = zero_vec(standard_.size());
            for (std::size_t k = 0; k < standard_.size(); ++k) {
                if (cr[k].is_zero()) continue;
                axpy(coords, cr[k], monomial_coords(standard_[k] * Monomial::var(m.nvars(), j)));
            }
        }
        std::lock_guard<std::mutex> lock(mu_);
        return memo_.emplace(m, std::move(coords)).first->second;
    }

    Vec coords(const Poly& p) const {
        Vec v = zero_vec(standard_.size());
        for (const auto& [m, c] : p.terms()) axpy(v, c, monomial_coords(m));
        return v;
    }
    Poly from_coords(const Vec& v) const {
        Poly p(vars_);
        for (std::size_t k = 0; k < v.size(); ++k) p.add_term(standard_[k], v[k]);
        return p;
    }
    Poly normal_form(const Poly& p) const { return from_coords(coords(p)); }
    bool reduces_to_zero(const Poly& p) const { return ::cmfactor::is_zero(coords(p)); }

private:
    using SparseRow = std::map<int, CycScalar>;  // column -> coefficient

    void build(int level) {
        level_ = level;
        columns_ = monomials_up_to(vars_->size(), level);
        col_index_.clear();
        for (std::size_t i = 0; i < columns_.size(); ++i) col_index_[columns_[i]] = static_cast<int>(i);
        pivots_.clear();
        for (const auto& g : gens_) {
            if (g.is_zero()) continue;
            for (const auto& m : monomials_up_to(vars_->size(), level - g.degree())) {
                SparseRow row;
                for (const auto& [gm, gc] : g.terms()) row[col_index_.at(gm * m)] = gc;
                insert_row(std::move(row));
            }
        }
        standard_.clear();
        std_index_.clear();
        for (std::size_t i = 0; i < columns_.size(); ++i)
            if (!pivots_.count(static_cast<int>(i))) {
                std_index_[columns_[i]] = standard_.size();
                standard_.push_back(columns_[i]);
            }
        memo_.clear();
    }

    static void subtract(SparseRow& row, const CycScalar& f, const SparseRow& piv) {
        for (const auto& [c, v] : piv) {
            auto [it, inserted] = row.try_emplace(c, -f * v);
            if (!inserted) {
                it->second -= f * v;
                if (it->second.is_zero()) row.erase(it);
            }
        }
    }

    void insert_row(SparseRow row) {
        while (!row.empty()) {
            int lead = row.rbegin()->first;
            auto it = pivots_.find(lead);
            if (it == pivots_.end()) {
                CycScalar inv = row.rbegin()->second.inverse();
                for (auto& [c, v] : row) v *= inv;
                pivots_.emplace(lead, std::move(row));
                return;
            }
            CycScalar f = row.rbegin()->second;
            subtract(row, f, it->second);
        }
    }

    Vec reduce_in_level(const Monomial& m) const {
        SparseRow row;
        row[col_index_.at(m)] = 1;
        Vec out = zero_vec(standard_.size());
        while (!row.empty()) {
            auto top = std::prev(row.end());
            int c = top->first;
            CycScalar f = top->second;
            auto it = pivots_.find(c);
            if (it == pivots_.end()) {
                out[std_index_.at(columns_[c])] = f;
                row.erase(top);
            } else {
                subtract(row, f, it->second);
            }
        }
        return out;
    }

    VarsPtr vars_;
    std::vector<Poly> gens_;
    int level_ = 0;
    std::vector<Monomial> columns_;
    std::map<Monomial, int, GrlexLess> col_index_;
    std::map<int, SparseRow> pivots_;
    std::vector<Monomial> standard_;
    std::map<Monomial, std::size_t, GrlexLess> std_index_;
    mutable std::mutex mu_;
    mutable std::map<Monomial, Vec, GrlexLess> memo_;
};

}  // namespace cmfactor
