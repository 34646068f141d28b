#pragma once

// Sparse polynomials with rational coefficients in up to three variables,
// a small infix parser, and univariate helpers (gcd, rational roots,
// translation) used by the branch algorithms.

#include "cuspforge/core.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cuspforge {

using Exponents = std::array<int, 3>;

class Polynomial {
public:
    using Terms = std::map<Exponents, Rational>;

    Polynomial() = default;

    static Polynomial constant(const Rational& c)
    {
        Polynomial p;
        p.add_term({0, 0, 0}, c);
        return p;
    }

    static Polynomial variable(int slot)
    {
        Exponents e{0, 0, 0};
        e.at(static_cast<std::size_t>(slot)) = 1;
        return monomial(Rational(1), e);
    }

    static Polynomial monomial(const Rational& c, const Exponents& e)
    {
        Polynomial p;
        p.add_term(e, c);
        return p;
    }

    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    Rational coefficient(const Exponents& e) const
    {
        auto it = terms_.find(e);
        return it == terms_.end() ? Rational(0) : it->second;
    }

    void add_term(const Exponents& e, const Rational& c)
    {
        if (c == 0) {
            return;
        }
        auto [it, inserted] = terms_.emplace(e, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) {
                terms_.erase(it);
            }
        }
    }

    Polynomial& operator+=(const Polynomial& o)
    {
        for (const auto& [e, c] : o.terms_) {
            add_term(e, c);
        }
        return *this;
    }

    Polynomial& operator-=(const Polynomial& o)
    {
        for (const auto& [e, c] : o.terms_) {
            add_term(e, -c);
        }
        return *this;
    }

    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }

    friend Polynomial operator-(const Polynomial& a)
    {
        Polynomial out;
        for (const auto& [e, c] : a.terms_) {
            out.terms_.emplace(e, -c);
        }
        return out;
    }

    friend Polynomial operator*(const Polynomial& a, const Polynomial& b)
    {
        Polynomial out;
        for (const auto& [ea, ca] : a.terms_) {
            for (const auto& [eb, cb] : b.terms_) {
                out.add_term({ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]}, ca * cb);
            }
        }
        return out;
    }

    Polynomial scaled(const Rational& s) const
    {
        Polynomial out;
        for (const auto& [e, c] : terms_) {
            out.add_term(e, c * s);
        }
        return out;
    }

    Polynomial pow(unsigned n) const
    {
        Polynomial result = constant(1);
        Polynomial base = *this;
        while (n > 0) {
            if (n & 1U) {
                result = result * base;
            }
            n >>= 1U;
            if (n > 0) {
                base = base * base;
            }
        }
        return result;
    }

    int total_degree() const
    {
        int d = -1;
        for (const auto& [e, c] : terms_) {
            d = std::max(d, e[0] + e[1] + e[2]);
        }
        return d;
    }

    int degree_in(int slot) const
    {
        int d = -1;
        for (const auto& [e, c] : terms_) {
            d = std::max(d, e.at(static_cast<std::size_t>(slot)));
        }
        return d;
    }

    bool is_homogeneous() const
    {
        int d = total_degree();
        for (const auto& [e, c] : terms_) {
            if (e[0] + e[1] + e[2] != d) {
                return false;
            }
        }
        return true;
    }

    bool has_integer_coefficients() const
    {
        for (const auto& [e, c] : terms_) {
            if (boost::multiprecision::denominator(c) != 1) {
                return false;
            }
        }
        return true;
    }

    Rational evaluate(const std::array<Rational, 3>& at) const
    {
        Rational sum = 0;
        for (const auto& [e, c] : terms_) {
            Rational term = c;
            for (std::size_t v = 0; v < 3; ++v) {
                for (int k = 0; k < e[v]; ++k) {
                    term *= at[v];
                }
            }
            sum += term;
        }
        return sum;
    }

    Polynomial derivative(int slot) const
    {
        Polynomial out;
        auto s = static_cast<std::size_t>(slot);
        for (const auto& [e, c] : terms_) {
            if (e[s] == 0) {
                continue;
            }
            Exponents d = e;
            d[s] -= 1;
            out.add_term(d, c * e[s]);
        }
        return out;
    }

    /// Replaces variable v by images[v] for every slot.
    Polynomial substitute(const std::array<Polynomial, 3>& images) const
    {
        std::array<std::vector<Polynomial>, 3> powers;
        for (std::size_t v = 0; v < 3; ++v) {
            powers[v].push_back(constant(1));
        }
        auto power = [&](std::size_t v, int k) -> const Polynomial& {
            while (static_cast<int>(powers[v].size()) <= k) {
                powers[v].push_back(powers[v].back() * images[v]);
            }
            return powers[v][static_cast<std::size_t>(k)];
        };
        Polynomial out;
        for (const auto& [e, c] : terms_) {
            Polynomial term = constant(c);
            for (std::size_t v = 0; v < 3; ++v) {
                if (e[v] > 0) {
                    term = term * power(v, e[v]);
                }
            }
            out += term;
        }
        return out;
    }

    std::string to_string(const std::array<std::string, 3>& names = {"x", "y", "z"}) const
    {
        if (terms_.empty()) {
            return "0";
        }
        std::string s;
        // highest total degree first, then lexicographically largest exponent
        std::vector<std::pair<Exponents, Rational>> ordered(terms_.rbegin(), terms_.rend());
        std::stable_sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) {
            return a.first[0] + a.first[1] + a.first[2] > b.first[0] + b.first[1] + b.first[2];
        });
        bool first = true;
        for (const auto& [e, c] : ordered) {
            Rational mag = c < 0 ? Rational(-c) : c;
            if (first) {
                s += c < 0 ? "-" : "";
            } else {
                s += c < 0 ? " - " : " + ";
            }
            first = false;
            std::string mono;
            for (std::size_t v = 0; v < 3; ++v) {
                if (e[v] == 0) {
                    continue;
                }
                if (!mono.empty()) {
                    mono += "*";
                }
                mono += names[v];
                if (e[v] > 1) {
                    mono += "^" + std::to_string(e[v]);
                }
            }
            if (mono.empty()) {
                s += mag.str();
            } else if (mag == 1) {
                s += mono;
            } else {
                s += mag.str() + "*" + mono;
            }
        }
        return s;
    }

    friend bool operator==(const Polynomial&, const Polynomial&) = default;

private:
    Terms terms_;
};

namespace detail {

class PolynomialParser {
public:
    PolynomialParser(std::string_view text, const std::vector<std::string>& variables)
        : text_(text), variables_(variables)
    {
    }

    Polynomial parse()
    {
        Polynomial p = expression();
        skip_ws();
        if (pos_ != text_.size()) {
            fail("unexpected character");
        }
        return p;
    }

private:
    void skip_ws()
    {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
    }

    bool accept(char c)
    {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    bool starts_factor()
    {
        skip_ws();
        if (pos_ >= text_.size()) {
            return false;
        }
        char c = text_[pos_];
        return c == '(' || std::isalnum(static_cast<unsigned char>(c));
    }

    [[noreturn]] void fail(const std::string& msg) const
    {
        throw InvalidInput("polynomial: " + msg + " at offset " + std::to_string(pos_) + " in \""
                           + std::string(text_) + "\"");
    }

    Polynomial expression()
    {
        Polynomial acc = term();
        for (;;) {
            if (accept('+')) {
                acc += term();
            } else if (accept('-')) {
                acc -= term();
            } else {
                return acc;
            }
        }
    }

    Polynomial term()
    {
        Polynomial acc = unary();
        for (;;) {
            if (accept('*')) {
                acc = acc * unary();
            } else if (starts_factor()) {
                acc = acc * unary();
            } else {
                return acc;
            }
        }
    }

    Polynomial unary()
    {
        if (accept('-')) {
            return -unary();
        }
        if (accept('+')) {
            return unary();
        }
        return power();
    }

    Polynomial power()
    {
        Polynomial base = primary();
        if (accept('^')) {
            skip_ws();
            std::size_t start = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                ++pos_;
            }
            if (start == pos_) {
                fail("expected a non-negative integer exponent");
            }
            unsigned long e = std::stoul(std::string(text_.substr(start, pos_ - start)));
            if (e > 100000) {
                fail("exponent too large");
            }
            return base.pow(static_cast<unsigned>(e));
        }
        return base;
    }

    Polynomial primary()
    {
        skip_ws();
        if (accept('(')) {
            Polynomial inner = expression();
            if (!accept(')')) {
                fail("expected ')'");
            }
            return inner;
        }
        if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
            std::size_t start = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                ++pos_;
            }
            return Polynomial::constant(Rational(Integer(std::string(text_.substr(start, pos_ - start)))));
        }
        if (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) {
            std::size_t start = pos_;
            // single-letter variables, so "xy" is x*y
            ++pos_;
            std::string name(text_.substr(start, 1));
            for (std::size_t v = 0; v < variables_.size(); ++v) {
                if (variables_[v] == name) {
                    return Polynomial::variable(static_cast<int>(v));
                }
            }
            pos_ = start;
            fail("unknown variable '" + name + "'");
        }
        fail("expected a number, variable or '('");
    }

    std::string_view text_;
    const std::vector<std::string>& variables_;
    std::size_t pos_ = 0;
};

} // namespace detail

/// Parses an infix polynomial with integer literals over the given
/// single-letter variables (at most three), e.g. "(y*z - x^2)^2 - x^3*y".
inline Polynomial parse_polynomial(std::string_view text, const std::vector<std::string>& variables = {"x", "y", "z"})
{
    if (variables.size() > 3) {
        throw InvalidInput("polynomial: at most three variables are supported");
    }
    return detail::PolynomialParser(text, variables).parse();
}

// ---------------------------------------------------------------------------
// Univariate polynomials (coefficient of t^k at index k).

class UPoly {
public:
    UPoly() = default;
    explicit UPoly(std::vector<Rational> c) : c_(std::move(c)) { trim(); }

    static UPoly from_slot(const Polynomial& p, int slot)
    {
        std::vector<Rational> c;
        for (const auto& [e, v] : p.terms()) {
            int k = e.at(static_cast<std::size_t>(slot));
            if (static_cast<int>(c.size()) <= k) {
                c.resize(static_cast<std::size_t>(k) + 1);
            }
            c[static_cast<std::size_t>(k)] += v;
        }
        return UPoly(std::move(c));
    }

    const std::vector<Rational>& coefficients() const { return c_; }
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    const Rational& leading() const { return c_.back(); }

    Rational coefficient(int k) const
    {
        return k >= 0 && k < static_cast<int>(c_.size()) ? c_[static_cast<std::size_t>(k)] : Rational(0);
    }

    Rational evaluate(const Rational& x) const
    {
        Rational acc = 0;
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
            acc = acc * x + *it;
        }
        return acc;
    }

    UPoly derivative() const
    {
        std::vector<Rational> d;
        for (std::size_t k = 1; k < c_.size(); ++k) {
            d.push_back(c_[k] * static_cast<long>(k));
        }
        return UPoly(std::move(d));
    }

    /// p(shift + t)
    UPoly translate(const Rational& shift) const
    {
        std::vector<Rational> acc;
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
            // acc = acc * (t + shift) + coeff
            std::vector<Rational> next(acc.size() + 1);
            for (std::size_t k = 0; k < acc.size(); ++k) {
                next[k + 1] += acc[k];
                next[k] += acc[k] * shift;
            }
            next[0] += *it;
            acc = std::move(next);
        }
        return UPoly(std::move(acc));
    }

    /// Quotient and remainder of division by a nonzero polynomial.
    std::pair<UPoly, UPoly> divmod(const UPoly& d) const
    {
        if (d.is_zero()) {
            throw InvalidInput("polynomial division by zero");
        }
        std::vector<Rational> r = c_;
        std::vector<Rational> q(c_.size() >= d.c_.size() ? c_.size() - d.c_.size() + 1 : 0);
        for (int k = degree() - d.degree(); k >= 0; --k) {
            Rational f = r[static_cast<std::size_t>(k + d.degree())] / d.leading();
            q[static_cast<std::size_t>(k)] = f;
            if (f == 0) {
                continue;
            }
            for (int j = 0; j <= d.degree(); ++j) {
                r[static_cast<std::size_t>(k + j)] -= f * d.c_[static_cast<std::size_t>(j)];
            }
        }
        return {UPoly(std::move(q)), UPoly(std::move(r))};
    }

    friend UPoly operator*(const UPoly& a, const UPoly& b)
    {
        if (a.is_zero() || b.is_zero()) {
            return UPoly();
        }
        std::vector<Rational> c(a.c_.size() + b.c_.size() - 1);
        for (std::size_t i = 0; i < a.c_.size(); ++i) {
            for (std::size_t j = 0; j < b.c_.size(); ++j) {
                c[i + j] += a.c_[i] * b.c_[j];
            }
        }
        return UPoly(std::move(c));
    }

    friend UPoly operator-(const UPoly& a, const UPoly& b)
    {
        std::vector<Rational> c(std::max(a.c_.size(), b.c_.size()));
        for (std::size_t i = 0; i < c.size(); ++i) {
            c[i] = a.coefficient(static_cast<int>(i)) - b.coefficient(static_cast<int>(i));
        }
        return UPoly(std::move(c));
    }

    UPoly monic() const
    {
        if (is_zero()) {
            return *this;
        }
        std::vector<Rational> c = c_;
        Rational lead = leading();
        for (auto& v : c) {
            v /= lead;
        }
        return UPoly(std::move(c));
    }

    friend UPoly gcd(UPoly a, UPoly b)
    {
        while (!b.is_zero()) {
            auto r = a.divmod(b).second;
            a = std::move(b);
            b = std::move(r);
        }
        return a.monic();
    }

    friend bool operator==(const UPoly&, const UPoly&) = default;

private:
    void trim()
    {
        while (!c_.empty() && c_.back() == 0) {
            c_.pop_back();
        }
    }

    std::vector<Rational> c_;
};

namespace detail {

/// Positive divisors of |n|. Factors by trial division up to 10^6; a larger
/// leftover cofactor is treated as prime.
inline std::vector<Integer> divisors(Integer n)
{
    if (n < 0) {
        n = -n;
    }
    std::vector<std::pair<Integer, unsigned>> factors;
    for (Integer p = 2; p <= 1000000 && p * p <= n; ++p) {
        unsigned k = 0;
        while (n % p == 0) {
            n /= p;
            ++k;
        }
        if (k > 0) {
            factors.emplace_back(p, k);
        }
    }
    if (n > 1) {
        factors.emplace_back(n, 1U);
    }
    std::vector<Integer> out{1};
    for (const auto& [p, k] : factors) {
        std::size_t base = out.size();
        Integer pk = 1;
        for (unsigned i = 0; i < k; ++i) {
            pk *= p;
            for (std::size_t j = 0; j < base; ++j) {
                out.push_back(out[j] * pk);
            }
        }
    }
    return out;
}

} // namespace detail

struct RationalRoot {
    Rational value;
    int multiplicity;
};

/// All rational roots with multiplicities, in increasing order.
inline std::vector<RationalRoot> rational_roots(const UPoly& p)
{
    if (p.is_zero()) {
        throw InvalidInput("rational_roots: zero polynomial");
    }
    std::vector<RationalRoot> out;
    UPoly rest = p;
    int zero_mult = 0;
    while (rest.degree() > 0 && rest.coefficient(0) == 0) {
        std::vector<Rational> c(rest.coefficients().begin() + 1, rest.coefficients().end());
        rest = UPoly(std::move(c));
        ++zero_mult;
    }
    if (rest.degree() <= 0) {
        if (zero_mult > 0) {
            out.push_back({Rational(0), zero_mult});
        }
        return out;
    }
    // squarefree part with integer coefficients
    UPoly sqf = rest.divmod(gcd(rest, rest.derivative())).first;
    Integer lcm = 1;
    for (const auto& c : sqf.coefficients()) {
        Integer den = boost::multiprecision::denominator(c);
        lcm = lcm / gcd(lcm, den) * den;
    }
    Integer a0 = boost::multiprecision::numerator(Rational(sqf.coefficient(0) * lcm));
    Integer an = boost::multiprecision::numerator(Rational(sqf.leading() * lcm));
    auto num = detail::divisors(a0);
    auto den = detail::divisors(an);
    std::vector<Rational> found;
    for (const auto& n : num) {
        for (const auto& d : den) {
            if (gcd(n, d) != 1) {
                continue;
            }
            for (int sign : {1, -1}) {
                Rational cand(n * sign, d);
                if (sqf.evaluate(cand) == 0) {
                    found.push_back(cand);
                }
            }
        }
    }
    if (zero_mult > 0) {
        found.push_back(Rational(0));
    }
    std::sort(found.begin(), found.end());
    for (const auto& r : found) {
        if (r == 0) {
            out.push_back({r, zero_mult});
            continue;
        }
        UPoly lin(std::vector<Rational>{-r, Rational(1)});
        int mult = 0;
        UPoly q = rest;
        for (;;) {
            auto [quo, rem] = q.divmod(lin);
            if (!rem.is_zero()) {
                break;
            }
            q = std::move(quo);
            ++mult;
        }
        out.push_back({r, mult});
    }
    return out;
}

} // namespace cuspforge
