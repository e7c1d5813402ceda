#pragma once

// Complex reflection groups built from symmetric and cyclic factors acting on
// coordinate blocks of h = C^n: elements, reflections with root data,
// hyperplanes, invariants, stabilizers, cosets, and characters.

#include "cmfactor/exactfield.hpp"
#include "cmfactor/linalg.hpp"
#include "cmfactor/polyring.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace cmfactor {

enum class FactorKind { symmetric, cyclic };

/// One direct factor: S_k permuting `coords`, or Z_l scaling the single coordinate in `coords`.
struct GroupFactor {
    FactorKind kind = FactorKind::symmetric;
    int order = 1;  // k for S_k, l for Z_l
    std::vector<int> coords;
};

struct GroupSpec {
    int rank = 0;
    std::vector<GroupFactor> factors;

    std::string label() const {
        std::string s;
        for (const auto& f : factors) {
            if (!s.empty()) s += "x";
            s += (f.kind == FactorKind::symmetric ? "S" : "Z") + std::to_string(f.order);
        }
        return s.empty() ? "1" : s;
    }
};

struct GroupSpecError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Parses "S3", "Z4", "S2xZ3" (factors on consecutive coordinates).
inline GroupSpec parse_group_spec(const std::string& text) {
    GroupSpec spec;
    std::size_t pos = 0;
    if (text.empty()) throw GroupSpecError("empty group spec");
    while (pos < text.size()) {
        char k = text[pos];
        if (k != 'S' && k != 'Z') throw GroupSpecError("group factor must start with 'S' or 'Z' at position " + std::to_string(pos));
        std::size_t start = ++pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        if (start == pos) throw GroupSpecError("missing factor size at position " + std::to_string(start));
        int n = std::stoi(text.substr(start, pos - start));
        GroupFactor f;
        f.kind = k == 'S' ? FactorKind::symmetric : FactorKind::cyclic;
        f.order = n;
        if (f.kind == FactorKind::symmetric) {
            if (n < 1 || n > 4) throw GroupSpecError("symmetric factor S" + std::to_string(n) + " outside supported range 1..4");
            for (int i = 0; i < n; ++i) f.coords.push_back(spec.rank + i);
            spec.rank += n;
        } else {
            if (n < 1 || n > 6) throw GroupSpecError("cyclic factor Z" + std::to_string(n) + " outside supported range 1..6");
            f.coords.push_back(spec.rank);
            spec.rank += 1;
        }
        spec.factors.push_back(std::move(f));
        if (pos < text.size()) {
            if (text[pos] != 'x') throw GroupSpecError("expected 'x' between factors at position " + std::to_string(pos));
            ++pos;
            if (pos == text.size()) throw GroupSpecError("dangling 'x' in group spec");
        }
    }
    if (spec.rank > 5) throw GroupSpecError("total rank " + std::to_string(spec.rank) + " exceeds the limit 5");
    return spec;
}

/// Monomial matrix g with g e_j = mu_j e_{perm_j}.
struct GroupElement {
    std::vector<int> perm;
    std::vector<CycScalar> mu;

    int rank() const { return static_cast<int>(perm.size()); }

    static GroupElement identity(int n) {
        GroupElement g;
        g.perm.resize(n);
        std::iota(g.perm.begin(), g.perm.end(), 0);
        g.mu.assign(n, CycScalar(1));
        return g;
    }

    Matrix matrix() const {
        Matrix m(perm.size(), perm.size());
        for (std::size_t j = 0; j < perm.size(); ++j) m(perm[j], j) = mu[j];
        return m;
    }

    friend GroupElement operator*(const GroupElement& g, const GroupElement& h) {
        GroupElement r;
        int n = g.rank();
        r.perm.resize(n);
        r.mu.resize(n);
        for (int j = 0; j < n; ++j) {
            r.perm[j] = g.perm[h.perm[j]];
            r.mu[j] = h.mu[j] * g.mu[h.perm[j]];
        }
        return r;
    }
    GroupElement inverse() const {
        GroupElement r;
        int n = rank();
        r.perm.resize(n);
        r.mu.resize(n);
        for (int j = 0; j < n; ++j) {
            r.perm[perm[j]] = j;
            r.mu[perm[j]] = mu[j].inverse();
        }
        return r;
    }
    friend bool operator==(const GroupElement& a, const GroupElement& b) { return a.perm == b.perm && a.mu == b.mu; }

    /// g v for v in h.
    Vec act_vector(const Vec& v) const {
        Vec r = zero_vec(v.size());
        for (std::size_t j = 0; j < v.size(); ++j) r[perm[j]] = mu[j] * v[j];
        return r;
    }
    /// g alpha = alpha o g^{-1} for alpha in h*.
    Vec act_covector(const Vec& a) const {
        Vec r = zero_vec(a.size());
        for (std::size_t j = 0; j < a.size(); ++j) r[perm[j]] = mu[j].inverse() * a[j];
        return r;
    }
    /// g . x^A where g x_j = mu_j^{-1} x_{perm_j}.
    std::pair<CycScalar, Monomial> act_x(const Monomial& m) const {
        CycScalar c(1);
        Monomial r(m.nvars());
        for (int j = 0; j < m.nvars(); ++j) {
            if (m[j] == 0) continue;
            r.set(perm[j], m[j]);
            if (mu[j] != CycScalar(1)) c *= mu[j].pow(-m[j]);
        }
        return {c, r};
    }
    /// g . y^B where g y_j = mu_j y_{perm_j}.
    std::pair<CycScalar, Monomial> act_y(const Monomial& m) const {
        CycScalar c(1);
        Monomial r(m.nvars());
        for (int j = 0; j < m.nvars(); ++j) {
            if (m[j] == 0) continue;
            r.set(perm[j], m[j]);
            if (mu[j] != CycScalar(1)) c *= mu[j].pow(m[j]);
        }
        return {c, r};
    }
};

/// Deterministic total order on group elements: row-major comparison of matrix entries.
inline int compare_elements(const GroupElement& a, const GroupElement& b) {
    Matrix ma = a.matrix(), mb = b.matrix();
    for (std::size_t i = 0; i < ma.rows(); ++i)
        for (std::size_t j = 0; j < ma.cols(); ++j) {
            int c = compare(ma(i, j), mb(i, j));
            if (c != 0) return c;
        }
    return 0;
}

inline CycScalar pairing(const Vec& covector, const Vec& vector) {
    CycScalar s(0);
    for (std::size_t i = 0; i < covector.size(); ++i)
        if (!covector[i].is_zero() && !vector[i].is_zero()) s += covector[i] * vector[i];
    return s;
}

struct ReflectionData {
    int element = 0;   // index into the group's element list
    Vec alpha;         // alpha_s in h*
    Vec coroot;        // alpha_s^vee in h
    CycScalar lambda;  // s alpha_s = lambda alpha_s
    int hyperplane = 0;
};

struct HyperplaneData {
    Poly L;
    int e = 2;
};

class ReflectionGroup {
public:
    explicit ReflectionGroup(GroupSpec spec) : spec_(std::move(spec)) {
        n_ = spec_.rank;
        xvars_ = VarContext::indexed("x", n_);
        yvars_ = VarContext::indexed("y", n_);
        validate_spec();
        enumerate();
        find_reflections();
        build_invariants();
        build_classes();
    }

    const GroupSpec& spec() const { return spec_; }
    std::string label() const { return spec_.label(); }
    int rank() const { return n_; }
    std::size_t order() const { return elements_.size(); }
    int conductor() const { return conductor_; }
    const std::vector<GroupElement>& elements() const { return elements_; }
    const GroupElement& element(int i) const { return elements_[i]; }
    int identity() const { return 0; }
    int mul(int a, int b) const { return table_[a * order() + b]; }
    int inv(int a) const { return inverse_[a]; }
    int index_of(const GroupElement& g) const {
        for (std::size_t i = 0; i < elements_.size(); ++i)
            if (elements_[i] == g) return static_cast<int>(i);
        return -1;
    }

    const std::vector<ReflectionData>& reflections() const { return reflections_; }
    const std::vector<HyperplaneData>& hyperplanes() const { return hyperplanes_; }
    /// Index into reflections() for an element, or -1.
    int reflection_of(int elem) const { return reflection_index_[elem]; }
    /// Generators of the group (one or two per factor).
    const std::vector<int>& generators() const { return generators_; }

    const VarsPtr& xvars() const { return xvars_; }
    const VarsPtr& yvars() const { return yvars_; }
    /// Homogeneous invariant generators F_i of C[h]^W, in the x variables.
    const std::vector<Poly>& invariants() const { return F_; }
    /// The same generators written in the y variables (invariants of C[h*]^W).
    const std::vector<Poly>& y_invariants() const { return G_; }

    const std::vector<std::vector<int>>& classes() const { return classes_; }
    int class_of(int elem) const { return class_of_[elem]; }
    /// Conjugacy classes that consist of reflections, in class order.
    const std::vector<int>& reflection_classes() const { return reflection_classes_; }

    Poly act_x(int g, const Poly& p) const {
        Poly r(p.vars());
        for (const auto& [m, c] : p.terms()) {
            auto [s, mm] = elements_[g].act_x(m);
            r.add_term(mm, c * s);
        }
        return r;
    }
    Poly act_y(int g, const Poly& p) const {
        Poly r(p.vars());
        for (const auto& [m, c] : p.terms()) {
            auto [s, mm] = elements_[g].act_y(m);
            r.add_term(mm, c * s);
        }
        return r;
    }

    /// Total number of reflections.
    std::size_t reflection_count() const { return reflections_.size(); }

private:
    void validate_spec() {
        std::vector<int> seen(n_, 0);
        for (const auto& f : spec_.factors) {
            if (f.kind == FactorKind::symmetric && static_cast<int>(f.coords.size()) != f.order)
                throw GroupSpecError("symmetric factor coordinate count mismatch");
            if (f.kind == FactorKind::cyclic && f.coords.size() != 1)
                throw GroupSpecError("cyclic factor must act on one coordinate");
            for (int c : f.coords) {
                if (c < 0 || c >= n_) throw GroupSpecError("factor coordinate out of range");
                ++seen[c];
            }
        }
        for (int s : seen)
            if (s != 1) throw GroupSpecError("each coordinate must belong to exactly one factor");
        conductor_ = 1;
        for (const auto& f : spec_.factors)
            if (f.kind == FactorKind::cyclic) conductor_ = detail::lcm_int(conductor_, f.order);
    }

    std::vector<GroupElement> factor_elements(const GroupFactor& f, std::vector<GroupElement>& gens) const {
        std::vector<GroupElement> out;
        if (f.kind == FactorKind::symmetric) {
            std::vector<int> sigma(f.order);
            std::iota(sigma.begin(), sigma.end(), 0);
            do {
                GroupElement g = GroupElement::identity(n_);
                for (int i = 0; i < f.order; ++i) g.perm[f.coords[i]] = f.coords[sigma[i]];
                out.push_back(std::move(g));
            } while (std::next_permutation(sigma.begin(), sigma.end()));
            for (int i = 0; i + 1 < f.order; ++i) {
                GroupElement g = GroupElement::identity(n_);
                std::swap(g.perm[f.coords[i]], g.perm[f.coords[i + 1]]);
                gens.push_back(std::move(g));
            }
        } else {
            for (int k = 0; k < f.order; ++k) {
                GroupElement g = GroupElement::identity(n_);
                g.mu[f.coords[0]] = root_of_unity(f.order, k);
                out.push_back(std::move(g));
            }
            if (f.order > 1) gens.push_back(out[1]);
        }
        return out;
    }

    void enumerate() {
        elements_ = {GroupElement::identity(n_)};
        std::vector<GroupElement> gens;
        for (const auto& f : spec_.factors) {
            auto fe = factor_elements(f, gens);
            std::vector<GroupElement> next;
            for (const auto& a : elements_)
                for (const auto& b : fe) next.push_back(a * b);
            elements_ = std::move(next);
        }
        std::size_t N = elements_.size();
        std::map<std::pair<std::vector<int>, std::string>, int> lookup;
        auto key = [](const GroupElement& g) {
            std::string s;
            for (const auto& m : g.mu) s += m.str() + ";";
            return std::make_pair(g.perm, s);
        };
        for (std::size_t i = 0; i < N; ++i)
            if (!lookup.emplace(key(elements_[i]), static_cast<int>(i)).second)
                throw std::logic_error("duplicate group element");
        table_.assign(N * N, -1);
        inverse_.assign(N, -1);
        for (std::size_t a = 0; a < N; ++a)
            for (std::size_t b = 0; b < N; ++b) {
                auto it = lookup.find(key(elements_[a] * elements_[b]));
                if (it == lookup.end()) throw std::logic_error("group not closed under multiplication");
                table_[a * N + b] = it->second;
                if (it->second == 0) inverse_[a] = static_cast<int>(b);
            }
        for (const auto& g : gens) generators_.push_back(lookup.at(key(g)));
    }

    void find_reflections() {
        reflection_index_.assign(order(), -1);
        std::map<std::string, int> hyper_lookup;
        std::vector<int> hyper_count;
        for (std::size_t i = 1; i < order(); ++i) {
            const auto& g = elements_[i];
            Matrix s = g.matrix();
            Matrix sm = s - Matrix::identity(n_);
            if (::cmfactor::rank(sm) != 1) continue;
            ReflectionData r;
            r.element = static_cast<int>(i);
            // alpha spans Im(s - 1) on h*: first nonzero column, first nonzero entry 1
            Matrix dual = g.inverse().matrix();
            Vec alpha;
            for (int j = 0; j < n_ && alpha.empty(); ++j) {
                Vec col = zero_vec(n_);
                for (int k = 0; k < n_; ++k) col[k] = dual(j, k) - (j == k ? CycScalar(1) : CycScalar(0));
                if (!is_zero(col)) alpha = col;
            }
            {
                std::size_t p = 0;
                while (alpha[p].is_zero()) ++p;
                CycScalar inv = alpha[p].inverse();
                for (auto& a : alpha) a *= inv;
            }
            Vec v;
            for (int j = 0; j < n_ && v.empty(); ++j) {
                Vec col = sm.col(j);
                if (!is_zero(col)) v = col;
            }
            CycScalar pv = pairing(alpha, v);
            if (pv.is_zero()) throw std::logic_error("degenerate reflection root pairing");
            r.coroot = scaled(v, CycScalar(2) / pv);
            r.alpha = alpha;
            Vec sa = g.act_covector(alpha);
            std::size_t p = 0;
            while (alpha[p].is_zero()) ++p;
            r.lambda = sa[p] / alpha[p];
            std::string hkey;
            for (const auto& a : alpha) hkey += a.str() + ",";
            auto [it, inserted] = hyper_lookup.try_emplace(hkey, static_cast<int>(hyperplanes_.size()));
            if (inserted) {
                Poly L(xvars_);
                for (int k = 0; k < n_; ++k) L.add_term(Monomial::var(n_, k), alpha[k]);
                hyperplanes_.push_back({L, 1});
            }
            r.hyperplane = it->second;
            hyperplanes_[it->second].e += 1;
            reflection_index_[i] = static_cast<int>(reflections_.size());
            reflections_.push_back(std::move(r));
        }
    }

    void build_invariants() {
        for (const auto& f : spec_.factors) {
            if (f.kind == FactorKind::symmetric) {
                // elementary symmetric polynomials e_1..e_k in the block
                std::vector<Poly> e{Poly(xvars_, CycScalar(1))};
                for (int c : f.coords) {
                    Poly xc = Poly::variable(xvars_, c);
                    std::vector<Poly> next(e.size() + 1, Poly(xvars_));
                    for (std::size_t d = 0; d < e.size(); ++d) {
                        next[d] += e[d];
                        next[d + 1] += e[d] * xc;
                    }
                    e = std::move(next);
                }
                for (std::size_t d = 1; d < e.size(); ++d) F_.push_back(e[d]);
            } else {
                F_.push_back(Poly::variable(xvars_, f.coords[0]).pow(f.order));
            }
        }
        // invariants are ordered by coordinate block; the y-copies use the same shape
        for (const auto& p : F_) {
            Poly q(yvars_);
            for (const auto& [m, c] : p.terms()) q.add_term(m, c);
            G_.push_back(q);
        }
    }

    void build_classes() {
        class_of_.assign(order(), -1);
        for (std::size_t g = 0; g < order(); ++g) {
            if (class_of_[g] >= 0) continue;
            std::set<int> cls;
            for (std::size_t h = 0; h < order(); ++h) cls.insert(mul(mul(static_cast<int>(h), static_cast<int>(g)), inv(static_cast<int>(h))));
            int id = static_cast<int>(classes_.size());
            for (int c : cls) class_of_[c] = id;
            classes_.emplace_back(cls.begin(), cls.end());
        }
        for (std::size_t k = 0; k < classes_.size(); ++k)
            if (reflection_index_[classes_[k].front()] >= 0) reflection_classes_.push_back(static_cast<int>(k));
    }

    GroupSpec spec_;
    int n_ = 0;
    int conductor_ = 1;
    VarsPtr xvars_, yvars_;
    std::vector<GroupElement> elements_;
    std::vector<int> table_, inverse_;
    std::vector<int> generators_;
    std::vector<ReflectionData> reflections_;
    std::vector<int> reflection_index_;
    std::vector<HyperplaneData> hyperplanes_;
    std::vector<Poly> F_, G_;
    std::vector<std::vector<int>> classes_;
    std::vector<int> class_of_;
    std::vector<int> reflection_classes_;
};

inline ReflectionGroup build_group(const std::string& text) { return ReflectionGroup(parse_group_spec(text)); }

/// c : reflections -> C, stored per reflection conjugacy class.
class CParam {
public:
    CParam() = default;
    /// Same value on every reflection class.
    static CParam uniform(const ReflectionGroup& W, const CycScalar& v) {
        CParam c;
        for (int k : W.reflection_classes()) c.values_[k] = v;
        return c;
    }
    /// One value per reflection class, in the order of W.reflection_classes().
    static CParam per_class(const ReflectionGroup& W, const std::vector<CycScalar>& vals) {
        if (vals.size() != W.reflection_classes().size())
            throw std::invalid_argument("c must give one value per reflection class (" +
                                        std::to_string(W.reflection_classes().size()) + " expected)");
        CParam c;
        for (std::size_t i = 0; i < vals.size(); ++i) c.values_[W.reflection_classes()[i]] = vals[i];
        return c;
    }
    const std::map<int, CycScalar>& values() const { return values_; }
    CycScalar at_class(int cls) const {
        auto it = values_.find(cls);
        return it == values_.end() ? CycScalar(0) : it->second;
    }
    CycScalar of(const ReflectionGroup& W, int elem) const { return at_class(W.class_of(elem)); }
    bool empty() const { return values_.empty(); }
    CParam scaled(const CycScalar& g) const {
        CParam c = *this;
        for (auto& [k, v] : c.values_) v *= g;
        return c;
    }
    bool is_zero() const {
        for (const auto& [k, v] : values_)
            if (!v.is_zero()) return false;
        return true;
    }

private:
    std::map<int, CycScalar> values_;
};

/// W_b = {w : w b = b} realized as a reflection group on the full h, with its
/// embedding into W and the decomposition h = h^{W_b} + (h*^{W_b})^perp.
struct Stabilizer {
    ReflectionGroup group;
    std::vector<int> embed;        // W_b element index -> W element index
    std::vector<Vec> fixed;        // basis of h^{W_b}
    std::vector<Vec> complement;   // basis of (h*^{W_b})^perp
    bool reflection_generated = false;

    int to_local(int w_elem) const {
        for (std::size_t i = 0; i < embed.size(); ++i)
            if (embed[i] == w_elem) return static_cast<int>(i);
        return -1;
    }
    std::size_t index_in(const ReflectionGroup& W) const { return W.order() / group.order(); }
};

inline Stabilizer stabilizer(const ReflectionGroup& W, const std::vector<CycScalar>& b) {
    int n = W.rank();
    if (static_cast<int>(b.size()) != n)
        throw std::invalid_argument("b has rank " + std::to_string(b.size()) + ", group rank " + std::to_string(n));
    std::set<int> exhaustive;
    for (std::size_t i = 0; i < W.order(); ++i)
        if (W.element(static_cast<int>(i)).act_vector(b) == b) exhaustive.insert(static_cast<int>(i));

    GroupSpec sub;
    sub.rank = n;
    for (const auto& f : W.spec().factors) {
        if (f.kind == FactorKind::symmetric) {
            std::vector<std::vector<int>> blocks;
            std::vector<CycScalar> vals;
            for (int c : f.coords) {
                std::size_t k = 0;
                while (k < vals.size() && vals[k] != b[c]) ++k;
                if (k == vals.size()) {
                    vals.push_back(b[c]);
                    blocks.emplace_back();
                }
                blocks[k].push_back(c);
            }
            for (auto& bl : blocks) sub.factors.push_back({FactorKind::symmetric, static_cast<int>(bl.size()), bl});
        } else {
            int c = f.coords[0];
            sub.factors.push_back({FactorKind::cyclic, b[c].is_zero() ? f.order : 1, {c}});
        }
    }
    Stabilizer st{ReflectionGroup(sub), {}, {}, {}, false};
    for (const auto& g : st.group.elements()) {
        int idx = W.index_of(g);
        if (idx < 0) throw std::logic_error("stabilizer element not in W");
        st.embed.push_back(idx);
    }
    std::set<int> structured(st.embed.begin(), st.embed.end());
    if (structured != exhaustive) throw std::logic_error("structured stabilizer disagrees with exhaustive search");

    // Steinberg: W_b is generated by the reflections of W it contains
    std::set<int> gen{W.identity()};
    std::vector<int> refl;
    for (const auto& r : W.reflections())
        if (exhaustive.count(r.element)) refl.push_back(r.element);
    bool grew = true;
    while (grew) {
        grew = false;
        std::vector<int> cur(gen.begin(), gen.end());
        for (int g : cur)
            for (int s : refl)
                if (gen.insert(W.mul(g, s)).second) grew = true;
    }
    st.reflection_generated = gen == exhaustive;

    // fixed vectors and the perpendicular of fixed covectors
    Matrix fix_eq(n * st.group.order(), n), cofix_eq(n * st.group.order(), n);
    for (std::size_t k = 0; k < st.group.order(); ++k) {
        Matrix m = st.group.element(static_cast<int>(k)).matrix();
        Matrix d = st.group.element(static_cast<int>(k)).inverse().matrix();
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                fix_eq(k * n + i, j) = m(i, j) - (i == j ? CycScalar(1) : CycScalar(0));
                // covector coordinates transform by the transpose of g^{-1}
                cofix_eq(k * n + i, j) = d(j, i) - (i == j ? CycScalar(1) : CycScalar(0));
            }
    }
    st.fixed = nullspace(fix_eq);
    auto cofixed = nullspace(cofix_eq);
    if (cofixed.empty()) {
        for (int i = 0; i < n; ++i) st.complement.push_back(unit_vec(n, i));
    } else {
        Matrix perp(cofixed.size(), n);
        for (std::size_t i = 0; i < cofixed.size(); ++i)
            for (int j = 0; j < n; ++j) perp(i, j) = cofixed[i][j];
        st.complement = nullspace(perp);
    }
    return st;
}

enum class CosetChoice { minimal, maximal };

/// Representatives r_k of the cosets W_b r_k, identity first, then ordered by
/// the chosen extremal representative. With `maximal` the identity coset is
/// represented by its largest element as well.
inline std::vector<int> coset_reps(const ReflectionGroup& W, const Stabilizer& H, CosetChoice choice = CosetChoice::minimal) {
    std::set<int> subgroup(H.embed.begin(), H.embed.end());
    if (!subgroup.count(W.identity())) throw std::invalid_argument("coset_reps: not a subgroup");
    for (int a : H.embed)
        for (int b : H.embed)
            if (!subgroup.count(W.mul(a, b))) throw std::invalid_argument("coset_reps: not a subgroup");
    std::vector<int> assigned(W.order(), -1);
    std::vector<std::vector<int>> cosets;
    for (std::size_t g = 0; g < W.order(); ++g) {
        if (assigned[g] >= 0) continue;
        std::vector<int> cs;
        for (int h : H.embed) {
            int e = W.mul(h, static_cast<int>(g));
            assigned[e] = static_cast<int>(cosets.size());
            cs.push_back(e);
        }
        cosets.push_back(std::move(cs));
    }
    std::vector<int> reps;
    for (std::size_t k = 0; k < cosets.size(); ++k) {
        const auto& cs = cosets[k];
        int best = cs.front();
        for (int e : cs) {
            int c = compare_elements(W.element(e), W.element(best));
            if ((choice == CosetChoice::minimal && c < 0) || (choice == CosetChoice::maximal && c > 0)) best = e;
        }
        if (choice == CosetChoice::minimal && assigned[W.identity()] == static_cast<int>(k)) best = W.identity();
        reps.push_back(best);
    }
    int idc = assigned[W.identity()];
    std::sort(reps.begin(), reps.end(), [&](int a, int b) {
        bool ia = assigned[a] == idc, ib = assigned[b] == idc;
        if (ia != ib) return ia;
        int c = compare_elements(W.element(a), W.element(b));
        return choice == CosetChoice::minimal ? c < 0 : c > 0;
    });
    return reps;
}

/// For coset representatives r_k of W_b \ W and g in W: r_k g = h r_l.
/// Returns (l, h as a W element index).
inline std::pair<int, int> coset_decompose(const ReflectionGroup& W, const std::vector<int>& reps,
                                           const std::set<int>& subgroup, int k, int g) {
    int x = W.mul(reps[k], g);
    for (std::size_t l = 0; l < reps.size(); ++l) {
        int h = W.mul(x, W.inv(reps[l]));
        if (subgroup.count(h)) return {static_cast<int>(l), h};
    }
    throw std::logic_error("coset_decompose: element not covered by cosets");
}

/// c' = c restricted to the reflections of W_b.
inline CParam restrict_c(const ReflectionGroup& W, const CParam& c, const Stabilizer& H) {
    std::vector<CycScalar> vals;
    for (int cls : H.group.reflection_classes()) {
        CycScalar v = c.of(W, H.embed[H.group.classes()[cls].front()]);
        for (int e : H.group.classes()[cls])
            if (c.of(W, H.embed[e]) != v) throw std::logic_error("restrict_c: parameter not constant on a W_b class");
        vals.push_back(v);
    }
    return CParam::per_class(H.group, vals);
}

/// Class function: one value per conjugacy class of its group.
struct Character {
    std::vector<CycScalar> values;

    friend bool operator==(const Character& a, const Character& b) { return a.values == b.values; }
    friend Character operator+(Character a, const Character& b) {
        for (std::size_t i = 0; i < a.values.size(); ++i) a.values[i] += b.values[i];
        return a;
    }
    Character scaled(const CycScalar& s) const {
        Character c = *this;
        for (auto& v : c.values) v *= s;
        return c;
    }
    std::string str() const {
        std::string s = "(";
        for (std::size_t i = 0; i < values.size(); ++i) s += (i ? ", " : "") + values[i].str();
        return s + ")";
    }
};

inline Character trivial_character(const ReflectionGroup& G) { return {std::vector<CycScalar>(G.classes().size(), CycScalar(1))}; }

inline Character regular_character(const ReflectionGroup& G) {
    Character c{std::vector<CycScalar>(G.classes().size(), CycScalar(0))};
    c.values[G.class_of(G.identity())] = CycScalar(static_cast<long>(G.order()));
    return c;
}

/// Frobenius induction: Ind chi(g) = (1/|H|) sum_{x in G, x g x^-1 in H} chi(x g x^-1).
inline Character induce_character(const ReflectionGroup& W, const Stabilizer& H, const Character& chi) {
    if (chi.values.size() != H.group.classes().size())
        throw std::invalid_argument("induce_character: not a class function on the subgroup");
    std::vector<int> local(W.order(), -1);
    for (std::size_t i = 0; i < H.embed.size(); ++i) local[H.embed[i]] = static_cast<int>(i);
    Character out{std::vector<CycScalar>(W.classes().size(), CycScalar(0))};
    for (std::size_t k = 0; k < W.classes().size(); ++k) {
        int g = W.classes()[k].front();
        CycScalar sum(0);
        for (std::size_t x = 0; x < W.order(); ++x) {
            int c = W.mul(W.mul(static_cast<int>(x), g), W.inv(static_cast<int>(x)));
            if (local[c] >= 0) sum += chi.values[H.group.class_of(local[c])];
        }
        out.values[k] = sum / CycScalar(static_cast<long>(H.group.order()));
    }
    return out;
}

/// Traces of a representation given by one matrix per group element; the
/// homomorphism property is spot-checked on random pairs.
inline Character module_character(const ReflectionGroup& G, const std::vector<Matrix>& action, unsigned seed = 1,
                                  int spot_checks = 8) {
    if (action.size() != G.order()) throw std::invalid_argument("module_character: need one matrix per element");
    std::mt19937 rng(seed);
    std::uniform_int_distribution<int> pick(0, static_cast<int>(G.order()) - 1);
    for (int t = 0; t < spot_checks; ++t) {
        int a = pick(rng), b = pick(rng);
        if (!(action[a] * action[b] == action[G.mul(a, b)]))
            throw std::invalid_argument("module_character: matrices do not form a representation");
    }
    Character c;
    for (const auto& cls : G.classes()) c.values.push_back(action[cls.front()].trace());
    return c;
}

}  // namespace cmfactor
