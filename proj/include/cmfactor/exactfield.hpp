#pragma once

// Exact arithmetic kernel: GMP rationals and elements of cyclotomic fields
// Q(zeta_m) in the power basis 1, z, ..., z^(phi(m)-1) modulo Phi_m.

#include <gmpxx.h>

#include <boost/container/small_vector.hpp>

#include <cctype>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cmfactor {

using Rational = mpq_class;

struct ArithmeticError : std::domain_error {
    using std::domain_error::domain_error;
};

struct ParseError : std::invalid_argument {
    ParseError(const std::string& what, std::size_t pos)
        : std::invalid_argument(what + " (at position " + std::to_string(pos) + ")"), position(pos) {}
    std::size_t position;
};

namespace detail {

// Reduction data for one conductor: Phi_m and z^k mod Phi_m for 0 <= k < max(m, 2 phi(m)).
struct CyclotomicTable {
    int m = 1;
    int phi = 1;
    std::vector<std::int64_t> poly;                 // Phi_m, low degree first, monic
    std::vector<std::vector<std::int64_t>> powers;  // powers[k] = coordinates of z^k
};

inline std::vector<std::int64_t> cyclotomic_polynomial(int m) {
    // x^m - 1 divided by Phi_d for every proper divisor d of m
    std::vector<std::int64_t> num(m + 1, 0);
    num[0] = -1;
    num[m] = 1;
    for (int d = 1; d < m; ++d) {
        if (m % d != 0) continue;
        auto den = cyclotomic_polynomial(d);
        int dn = static_cast<int>(den.size()) - 1;
        int nn = static_cast<int>(num.size()) - 1;
        std::vector<std::int64_t> q(nn - dn + 1, 0);
        for (int i = nn; i >= dn; --i) {
            std::int64_t c = num[i];  // den is monic
            q[i - dn] = c;
            if (c == 0) continue;
            for (int j = 0; j <= dn; ++j) num[i - dn + j] -= c * den[j];
        }
        num = std::move(q);
    }
    return num;
}

inline const CyclotomicTable& cyclotomic_table(int m) {
    static std::mutex mu;
    static std::map<int, std::unique_ptr<CyclotomicTable>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(m);
    if (it != cache.end()) return *it->second;
    auto t = std::make_unique<CyclotomicTable>();
    t->m = m;
    t->poly = cyclotomic_polynomial(m);
    t->phi = static_cast<int>(t->poly.size()) - 1;
    int count = std::max(m, 2 * t->phi);
    std::vector<std::int64_t> cur(t->phi, 0);
    cur[0] = 1;
    for (int k = 0; k < count; ++k) {
        t->powers.push_back(cur);
        // cur *= z, then reduce the overflowing top coefficient
        std::int64_t top = cur[t->phi - 1];
        for (int i = t->phi - 1; i > 0; --i) cur[i] = cur[i - 1];
        cur[0] = 0;
        if (top != 0)
            for (int i = 0; i < t->phi; ++i) cur[i] -= top * t->poly[i];
    }
    auto& ref = *t;
    cache.emplace(m, std::move(t));
    return ref;
}

inline int lcm_int(int a, int b) { return a / std::gcd(a, b) * b; }

}  // namespace detail

inline int euler_phi(int m) { return detail::cyclotomic_table(m).phi; }

/// Element of Q(zeta_m), stored canonically as phi(m) rational coordinates.
///
/// Values with different conductors compare and combine after lifting both
/// to the lcm of the conductors. The conductor is never lowered implicitly,
/// so a rational number multiplied by a cyclotomic keeps the larger conductor.
class CycScalar {
public:
    using Coeffs = boost::container::small_vector<Rational, 4>;

    CycScalar() : m_(1), c_(1) {}
    CycScalar(long v) : m_(1), c_(1) { c_[0] = v; }  // NOLINT(google-explicit-constructor)
    CycScalar(int v) : CycScalar(static_cast<long>(v)) {}  // NOLINT(google-explicit-constructor)
    CycScalar(const Rational& q) : m_(1), c_(1) { c_[0] = q; }  // NOLINT(google-explicit-constructor)
    CycScalar(long num, long den) : m_(1), c_(1) {
        if (den == 0) throw ArithmeticError("zero denominator");
        c_[0] = Rational(num, den);
        c_[0].canonicalize();
    }

    /// Coordinates in the power basis of Q(zeta_m); length must be phi(m).
    CycScalar(int m, Coeffs coeffs) : m_(m), c_(std::move(coeffs)) {
        if (m < 1) throw std::invalid_argument("conductor must be positive");
        if (static_cast<int>(c_.size()) != euler_phi(m))
            throw std::invalid_argument("coefficient count must equal phi(m)");
        for (auto& q : c_) q.canonicalize();
    }

    int conductor() const { return m_; }
    const Coeffs& coeffs() const { return c_; }

    bool is_zero() const {
        for (const auto& q : c_)
            if (sgn(q) != 0) return false;
        return true;
    }
    bool is_rational() const {
        for (std::size_t i = 1; i < c_.size(); ++i)
            if (sgn(c_[i]) != 0) return false;
        return true;
    }
    /// Rational value; throws when the element is irrational.
    const Rational& rational() const {
        if (!is_rational()) throw ArithmeticError("cyclotomic element is not rational");
        return c_[0];
    }

    /// Re-express in Q(zeta_target); target must be a multiple of the conductor.
    CycScalar lift(int target) const {
        if (target == m_) return *this;
        if (target % m_ != 0) throw std::invalid_argument("lift target must be a multiple of the conductor");
        const auto& tab = detail::cyclotomic_table(target);
        Coeffs out(tab.phi);
        int step = target / m_;
        for (std::size_t i = 0; i < c_.size(); ++i) {
            if (sgn(c_[i]) == 0) continue;
            const auto& p = tab.powers[(i * step) % target];
            for (int j = 0; j < tab.phi; ++j)
                if (p[j] != 0) out[j] += c_[i] * p[j];
        }
        CycScalar r;
        r.m_ = target;
        r.c_ = std::move(out);
        return r;
    }

    CycScalar& operator+=(const CycScalar& o) { return add_scaled(o, 1); }
    CycScalar& operator-=(const CycScalar& o) { return add_scaled(o, -1); }

    CycScalar& operator*=(const CycScalar& o) {
        if (o.m_ == 1) {
            for (auto& q : c_) q *= o.c_[0];
            return *this;
        }
        if (m_ == 1) {
            Rational s = c_[0];
            *this = o;
            for (auto& q : c_) q *= s;
            return *this;
        }
        int L = detail::lcm_int(m_, o.m_);
        CycScalar a = lift(L), b = o.lift(L);
        const auto& tab = detail::cyclotomic_table(L);
        std::vector<Rational> prod(2 * tab.phi - 1);
        for (int i = 0; i < tab.phi; ++i) {
            if (sgn(a.c_[i]) == 0) continue;
            for (int j = 0; j < tab.phi; ++j)
                if (sgn(b.c_[j]) != 0) prod[i + j] += a.c_[i] * b.c_[j];
        }
        Coeffs out(tab.phi);
        for (int k = 0; k < 2 * tab.phi - 1; ++k) {
            if (sgn(prod[k]) == 0) continue;
            const auto& p = tab.powers[k];
            for (int j = 0; j < tab.phi; ++j)
                if (p[j] != 0) out[j] += prod[k] * p[j];
        }
        m_ = L;
        c_ = std::move(out);
        return *this;
    }

    /// Multiplicative inverse; throws ArithmeticError on zero.
    CycScalar inverse() const {
        if (is_zero()) throw ArithmeticError("division by zero");
        if (m_ == 1 || is_rational()) {
            CycScalar r = *this;
            for (auto& q : r.c_) q = 0;
            r.c_[0] = 1 / c_[0];
            return r;
        }
        // solve (multiplication-by-this) * v = e_0 exactly
        const int n = static_cast<int>(c_.size());
        std::vector<std::vector<Rational>> mat(n, std::vector<Rational>(n + 1));
        for (int j = 0; j < n; ++j) {
            Coeffs e(n);
            e[j] = 1;
            CycScalar col = *this * CycScalar(m_, e);
            for (int i = 0; i < n; ++i) mat[i][j] = col.c_[i];
        }
        mat[0][n] = 1;
        for (int col = 0; col < n; ++col) {
            int piv = col;
            while (piv < n && sgn(mat[piv][col]) == 0) ++piv;
            if (piv == n) throw ArithmeticError("singular multiplication map");
            std::swap(mat[piv], mat[col]);
            Rational inv = 1 / mat[col][col];
            for (int k = col; k <= n; ++k) mat[col][k] *= inv;
            for (int r = 0; r < n; ++r) {
                if (r == col || sgn(mat[r][col]) == 0) continue;
                Rational f = mat[r][col];
                for (int k = col; k <= n; ++k) mat[r][k] -= f * mat[col][k];
            }
        }
        Coeffs out(n);
        for (int i = 0; i < n; ++i) out[i] = mat[i][n];
        return CycScalar(m_, std::move(out));
    }

    CycScalar& operator/=(const CycScalar& o) { return *this *= o.inverse(); }

    CycScalar operator-() const {
        CycScalar r = *this;
        for (auto& q : r.c_) q = -q;
        return r;
    }

    friend CycScalar operator+(CycScalar a, const CycScalar& b) { return a += b; }
    friend CycScalar operator-(CycScalar a, const CycScalar& b) { return a -= b; }
    friend CycScalar operator*(CycScalar a, const CycScalar& b) { return a *= b; }
    friend CycScalar operator/(CycScalar a, const CycScalar& b) { return a /= b; }

    friend bool operator==(const CycScalar& a, const CycScalar& b) {
        if (a.m_ == b.m_) return a.c_ == b.c_;
        int L = detail::lcm_int(a.m_, b.m_);
        return a.lift(L).c_ == b.lift(L).c_;
    }
    friend bool operator!=(const CycScalar& a, const CycScalar& b) { return !(a == b); }

    /// Total order: lexicographic on coordinates after lifting to a common conductor.
    friend int compare(const CycScalar& a, const CycScalar& b) {
        int L = detail::lcm_int(a.m_, b.m_);
        CycScalar x = a.lift(L), y = b.lift(L);
        for (std::size_t i = 0; i < x.c_.size(); ++i) {
            int s = cmp(x.c_[i], y.c_[i]);
            if (s != 0) return s < 0 ? -1 : 1;
        }
        return 0;
    }
    friend bool operator<(const CycScalar& a, const CycScalar& b) { return compare(a, b) < 0; }

    CycScalar pow(long e) const {
        if (e < 0) return inverse().pow(-e);
        CycScalar result(1), base = *this;
        while (e > 0) {
            if (e & 1) result *= base;
            base *= base;
            e >>= 1;
        }
        return result;
    }

    std::string str() const;

private:
    CycScalar& add_scaled(const CycScalar& o, int sign) {
        if (o.m_ != m_) {
            int L = detail::lcm_int(m_, o.m_);
            if (L != m_) *this = lift(L);
            if (L != o.m_) return add_scaled(o.lift(L), sign);
        }
        for (std::size_t i = 0; i < c_.size(); ++i) {
            if (sgn(o.c_[i]) == 0) continue;
            if (sign > 0) c_[i] += o.c_[i];
            else c_[i] -= o.c_[i];
        }
        return *this;
    }

    int m_;
    Coeffs c_;
};

/// zeta_m^k in canonical form.
inline CycScalar root_of_unity(int m, long k) {
    if (m < 1) throw std::invalid_argument("root_of_unity: m must be positive");
    const auto& tab = detail::cyclotomic_table(m);
    long r = ((k % m) + m) % m;
    CycScalar::Coeffs c(tab.phi);
    for (int j = 0; j < tab.phi; ++j) c[j] = tab.powers[r][j];
    return CycScalar(m, std::move(c));
}

enum class ArithOp { add, sub, mul, div };

/// Checked arithmetic: returns nullopt for division by zero.
inline std::optional<CycScalar> scalar_arith(const CycScalar& a, const CycScalar& b, ArithOp op) {
    switch (op) {
        case ArithOp::add: return a + b;
        case ArithOp::sub: return a - b;
        case ArithOp::mul: return a * b;
        case ArithOp::div:
            if (b.is_zero()) return std::nullopt;
            return a / b;
    }
    return std::nullopt;
}

inline std::string rational_str(const Rational& q) {
    if (q.get_den() == 1) return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

inline std::string CycScalar::str() const {
    if (is_rational()) return rational_str(c_[0]);
    std::string out;
    for (std::size_t i = 0; i < c_.size(); ++i) {
        if (sgn(c_[i]) == 0) continue;
        if (!out.empty()) out += " + ";
        out += "(" + rational_str(c_[i]) + ")";
        if (i == 1) out += "*z";
        else if (i > 1) out += "*z^" + std::to_string(i);
    }
    return out + " @ m=" + std::to_string(m_);
}

inline std::ostream& operator<<(std::ostream& os, const CycScalar& s) { return os << s.str(); }

namespace detail {

class ScalarParser {
public:
    explicit ScalarParser(std::string_view s) : s_(s) {}

    CycScalar parse() {
        auto at = s_.find('@');
        std::string_view body = s_.substr(0, at);
        int m = 1;
        if (at != std::string_view::npos) {
            pos_ = at + 1;
            skip_ws();
            expect("m");
            skip_ws();
            expect("=");
            skip_ws();
            m = static_cast<int>(parse_int_literal());
            skip_ws();
            if (pos_ != s_.size()) throw ParseError("trailing characters in scalar", pos_);
            if (m < 1) throw ParseError("conductor must be positive", at);
        }
        end_ = body.size();
        pos_ = 0;
        CycScalar acc = root_of_unity(m, 0) * CycScalar(0);
        skip_ws();
        if (pos_ == end_) throw ParseError("empty scalar", pos_);
        bool first = true;
        while (pos_ < end_) {
            int sign = 1;
            skip_ws();
            if (!first || peek() == '-' || peek() == '+') {
                char c = peek();
                if (c == '+') ++pos_;
                else if (c == '-') {
                    sign = -1;
                    ++pos_;
                } else if (!first) throw ParseError("expected '+' or '-'", pos_);
                skip_ws();
            }
            acc += sign * parse_term(m);
            skip_ws();
            first = false;
        }
        return acc;
    }

private:
    char peek() const { return pos_ < end_ ? s_[pos_] : '\0'; }
    void skip_ws() {
        while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t')) ++pos_;
    }
    void expect(std::string_view tok) {
        if (s_.substr(pos_, tok.size()) != tok) throw ParseError("expected '" + std::string(tok) + "'", pos_);
        pos_ += tok.size();
    }
    long parse_int_literal() {
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (start == pos_) throw ParseError("expected integer", start);
        return std::stol(std::string(s_.substr(start, pos_ - start)));
    }
    Rational parse_rational() {
        std::size_t start = pos_;
        bool neg = false;
        if (peek() == '-') {
            neg = true;
            ++pos_;
        }
        std::size_t ds = pos_;
        while (pos_ < end_ && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (ds == pos_) throw ParseError("expected number", start);
        mpz_class num(std::string(s_.substr(ds, pos_ - ds)));
        mpz_class den = 1;
        if (peek() == '/') {
            ++pos_;
            std::size_t dd = pos_;
            while (pos_ < end_ && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            if (dd == pos_) throw ParseError("expected denominator", dd);
            den = mpz_class(std::string(s_.substr(dd, pos_ - dd)));
            if (den == 0) throw ParseError("zero denominator", dd);
        }
        Rational q(neg ? -num : num, den);
        q.canonicalize();
        return q;
    }
    // term := coeff ['*' 'z' ['^' k]] | 'z' ['^' k]; coeff := rational | '(' rational ')'
    CycScalar parse_term(int m) {
        Rational coeff = 1;
        bool have_coeff = false;
        if (peek() == '(') {
            ++pos_;
            skip_ws();
            coeff = parse_rational();
            skip_ws();
            if (peek() != ')') throw ParseError("expected ')'", pos_);
            ++pos_;
            have_coeff = true;
        } else if (std::isdigit(static_cast<unsigned char>(peek()))) {
            coeff = parse_rational();
            have_coeff = true;
        }
        skip_ws();
        long k = 0;
        bool have_z = false;
        if (have_coeff && peek() == '*') {
            ++pos_;
            skip_ws();
            if (peek() != 'z') throw ParseError("expected 'z'", pos_);
        }
        if (peek() == 'z') {
            ++pos_;
            have_z = true;
            k = 1;
            if (peek() == '^') {
                ++pos_;
                k = parse_int_literal();
            }
        }
        if (!have_coeff && !have_z) throw ParseError("expected scalar term", pos_);
        if (have_z && m == 1) throw ParseError("'z' requires a conductor suffix '@ m=<m>'", pos_);
        return root_of_unity(m, k) * CycScalar(coeff);
    }

    std::string_view s_;
    std::size_t pos_ = 0;
    std::size_t end_ = 0;
};

}  // namespace detail

/// Parses "p/q", "-3", or "(1/2) + (1/2)*z^2 @ m=4".
inline CycScalar parse_scalar(std::string_view s) { return detail::ScalarParser(s).parse(); }

inline CycScalar operator*(int k, const CycScalar& s) { return CycScalar(k) * s; }

}  // namespace cmfactor
