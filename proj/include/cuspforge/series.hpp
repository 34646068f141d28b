#pragma once

// Truncated power series over Q and branch-level algorithms: blow-ups of a
// parametrized germ, multiplicity sequences, characteristic exponents and
// intersection orders with curves.

#include "cuspforge/invariants.hpp"
#include "cuspforge/polynomial.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace cuspforge {

/// Power series in t known modulo t^N.
class TruncatedSeries {
public:
    TruncatedSeries() = default;

    explicit TruncatedSeries(int precision) : c_(static_cast<std::size_t>(std::max(precision, 0))) {}

    TruncatedSeries(std::vector<Rational> coeffs, int precision)
        : c_(std::move(coeffs))
    {
        c_.resize(static_cast<std::size_t>(std::max(precision, 0)));
    }

    static TruncatedSeries monomial(const Rational& c, int k, int precision)
    {
        TruncatedSeries s(precision);
        if (k < precision) {
            s.c_[static_cast<std::size_t>(k)] = c;
        }
        return s;
    }

    static TruncatedSeries from_upoly(const UPoly& p, int precision)
    {
        return TruncatedSeries(p.coefficients(), precision);
    }

    int precision() const { return static_cast<int>(c_.size()); }

    Rational coefficient(int k) const
    {
        if (k < 0) {
            return 0;
        }
        if (k >= precision()) {
            throw PrecisionExhausted("series coefficient t^" + std::to_string(k) + " unknown at precision "
                                     + std::to_string(precision()));
        }
        return c_[static_cast<std::size_t>(k)];
    }

    /// Nonzero coefficients below the precision.
    std::map<int, Rational> terms() const
    {
        std::map<int, Rational> out;
        for (std::size_t k = 0; k < c_.size(); ++k) {
            if (c_[k] != 0) {
                out.emplace(static_cast<int>(k), c_[k]);
            }
        }
        return out;
    }

    std::optional<int> try_order() const
    {
        for (std::size_t k = 0; k < c_.size(); ++k) {
            if (c_[k] != 0) {
                return static_cast<int>(k);
            }
        }
        return std::nullopt;
    }

    int order() const
    {
        auto o = try_order();
        if (!o) {
            throw PrecisionExhausted("series order undecidable: zero to precision " + std::to_string(precision()));
        }
        return *o;
    }

    /// Order if known, otherwise the precision (a lower bound).
    int order_bound() const { return try_order().value_or(precision()); }

    bool is_zero_to_precision() const { return !try_order().has_value(); }

    TruncatedSeries truncated(int precision) const
    {
        TruncatedSeries s = *this;
        s.c_.resize(static_cast<std::size_t>(std::clamp(precision, 0, this->precision())));
        return s;
    }

    TruncatedSeries scaled(const Rational& k) const
    {
        TruncatedSeries s = *this;
        for (auto& v : s.c_) {
            v *= k;
        }
        return s;
    }

    /// Multiplication by t^k.
    TruncatedSeries shifted_up(int k) const
    {
        std::vector<Rational> c(static_cast<std::size_t>(k));
        c.insert(c.end(), c_.begin(), c_.end());
        return TruncatedSeries(std::move(c), precision() + k);
    }

    /// Division by t^k; the coefficients below t^k must vanish.
    TruncatedSeries shifted_down(int k) const
    {
        for (int i = 0; i < std::min(k, precision()); ++i) {
            if (c_[static_cast<std::size_t>(i)] != 0) {
                throw InvalidInput("series is not divisible by t^" + std::to_string(k));
            }
        }
        if (k >= precision()) {
            return TruncatedSeries(0);
        }
        return TruncatedSeries(std::vector<Rational>(c_.begin() + k, c_.end()), precision() - k);
    }

    /// Same series with the constant term replaced by zero.
    TruncatedSeries without_constant() const
    {
        TruncatedSeries s = *this;
        if (!s.c_.empty()) {
            s.c_[0] = 0;
        }
        return s;
    }

    friend TruncatedSeries operator+(const TruncatedSeries& a, const TruncatedSeries& b)
    {
        int n = std::min(a.precision(), b.precision());
        TruncatedSeries s(n);
        for (std::size_t k = 0; k < static_cast<std::size_t>(n); ++k) {
            s.c_[k] = a.c_[k] + b.c_[k];
        }
        return s;
    }

    friend TruncatedSeries operator-(const TruncatedSeries& a) { return a.scaled(-1); }

    friend TruncatedSeries operator-(const TruncatedSeries& a, const TruncatedSeries& b) { return a + (-b); }

    friend TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b)
    {
        int va = a.order_bound();
        int vb = b.order_bound();
        int n = std::min(a.precision() + vb, b.precision() + va);
        return multiply_to(a, b, n);
    }

    /// Product computed only below t^n (n must not exceed the sound precision).
    static TruncatedSeries multiply_to(const TruncatedSeries& a, const TruncatedSeries& b, int n)
    {
        TruncatedSeries s(n);
        int va = a.order_bound();
        int vb = b.order_bound();
        for (int i = va; i < a.precision() && i < n; ++i) {
            const Rational& ai = a.c_[static_cast<std::size_t>(i)];
            if (ai == 0) {
                continue;
            }
            for (int j = vb; j < b.precision() && i + j < n; ++j) {
                const Rational& bj = b.c_[static_cast<std::size_t>(j)];
                if (bj != 0) {
                    s.c_[static_cast<std::size_t>(i + j)] += ai * bj;
                }
            }
        }
        return s;
    }

    /// u^alpha for a unit u. Non-integral alpha needs u(0) = 1.
    static TruncatedSeries unit_power(const TruncatedSeries& u, const Rational& alpha)
    {
        if (u.precision() == 0) {
            return u;
        }
        const Rational& u0 = u.c_[0];
        if (u0 == 0) {
            throw InvalidInput("unit_power: series is not a unit");
        }
        Rational w0;
        if (boost::multiprecision::denominator(alpha) == 1) {
            Integer e = boost::multiprecision::numerator(alpha);
            Rational base = e < 0 ? Rational(1) / u0 : u0;
            Integer n = e < 0 ? Integer(-e) : e;
            w0 = 1;
            for (Integer i = 0; i < n; ++i) {
                w0 *= base;
            }
        } else if (u0 == 1) {
            w0 = 1;
        } else {
            throw InvalidInput("unit_power: fractional power needs constant term 1");
        }
        int n = u.precision();
        TruncatedSeries w(n);
        w.c_[0] = w0;
        for (int k = 1; k < n; ++k) {
            Rational acc = 0;
            for (int j = 1; j <= k; ++j) {
                const Rational& uj = u.c_[static_cast<std::size_t>(j)];
                if (uj == 0) {
                    continue;
                }
                acc += ((alpha + 1) * j - k) * uj * w.c_[static_cast<std::size_t>(k - j)];
            }
            w.c_[static_cast<std::size_t>(k)] = acc / (u0 * k);
        }
        return w;
    }

    /// f / g where ord g <= ord f and g has a known order.
    friend TruncatedSeries divide(const TruncatedSeries& f, const TruncatedSeries& g)
    {
        int v = g.order();
        int vf = f.order_bound();
        if (vf < v) {
            throw InvalidInput("series division: dividend order below divisor order");
        }
        int n = std::min(f.precision(), g.precision() + vf - v) - v;
        TruncatedSeries fu = f.shifted_down(v).truncated(n);
        TruncatedSeries gu = g.shifted_down(v).truncated(n);
        TruncatedSeries inv = unit_power(gu, -1);
        return multiply_to(fu, inv, n);
    }

    /// f(g(t)) for g with positive order.
    friend TruncatedSeries compose(const TruncatedSeries& f, const TruncatedSeries& g)
    {
        int w = g.order();
        if (w < 1) {
            throw InvalidInput("series composition needs an inner series without constant term");
        }
        int vf = f.order_bound();
        int n = std::min(f.precision() * w, g.precision() + (std::max(vf, 1) - 1) * w);
        TruncatedSeries result(n);
        TruncatedSeries power = monomial(1, 0, n);
        for (int k = 0; k < f.precision() && k * w < n; ++k) {
            if (k > 0) {
                power = multiply_to(power, g, n);
            }
            const Rational& fk = f.c_[static_cast<std::size_t>(k)];
            if (fk == 0) {
                continue;
            }
            for (int i = k * w; i < n; ++i) {
                result.c_[static_cast<std::size_t>(i)] += fk * power.c_[static_cast<std::size_t>(i)];
            }
        }
        return result;
    }

    /// Compositional inverse of a series of order exactly 1.
    TruncatedSeries reverted() const
    {
        if (order() != 1) {
            throw InvalidInput("series reversion needs order 1");
        }
        TruncatedSeries v = shifted_down(1);
        int n = precision();
        TruncatedSeries g(n);
        for (int k = 1; k < n; ++k) {
            // [tau^k] g = (1/k) [t^(k-1)] v^(-k)
            TruncatedSeries p = unit_power(v.truncated(k), Rational(-k));
            g.c_[static_cast<std::size_t>(k)] = p.c_[static_cast<std::size_t>(k - 1)] / k;
        }
        return g;
    }

    TruncatedSeries pow(unsigned e) const
    {
        TruncatedSeries result = monomial(1, 0, std::max(precision(), 1) + static_cast<int>(e) * order_bound());
        for (unsigned i = 0; i < e; ++i) {
            result = result * *this;
        }
        return result;
    }

    std::string to_string(const std::string& var = "t") const
    {
        std::string s;
        for (const auto& [k, c] : terms()) {
            Rational mag = c < 0 ? Rational(-c) : c;
            s += s.empty() ? (c < 0 ? "-" : "") : (c < 0 ? " - " : " + ");
            std::string mono = k == 0 ? "" : (k == 1 ? var : var + "^" + std::to_string(k));
            if (mono.empty()) {
                s += mag.str();
            } else if (mag == 1) {
                s += mono;
            } else {
                s += mag.str() + "*" + mono;
            }
        }
        if (s.empty()) {
            s = "0";
        }
        return s + " + O(" + var + "^" + std::to_string(precision()) + ")";
    }

    friend bool operator==(const TruncatedSeries&, const TruncatedSeries&) = default;

private:
    std::vector<Rational> c_;
};

/// Germ t -> (x(t), y(t)) at the origin.
struct LocalBranch {
    TruncatedSeries x;
    TruncatedSeries y;

    static LocalBranch make(TruncatedSeries x, TruncatedSeries y)
    {
        if (x.precision() > 0 && x.coefficient(0) != 0) {
            throw InvalidInput("local branch: x has a constant term");
        }
        if (y.precision() > 0 && y.coefficient(0) != 0) {
            throw InvalidInput("local branch: y has a constant term");
        }
        return LocalBranch{std::move(x), std::move(y)};
    }

    /// The monomial branch (t^a, sum t^b_i) of a characteristic exponent tuple.
    static LocalBranch monomial(const CharacteristicExponents& ce, int precision)
    {
        TruncatedSeries x = TruncatedSeries::monomial(1, static_cast<int>(to_int64(ce.a())), precision);
        TruncatedSeries y(precision);
        for (const auto& b : ce.b()) {
            y = y + TruncatedSeries::monomial(1, static_cast<int>(to_int64(b)), precision);
        }
        return LocalBranch{x, y};
    }

    int precision() const { return std::min(x.precision(), y.precision()); }
};

namespace detail {

/// min(ord x, ord y) when it can be decided at the current precision.
inline std::pair<int, bool> branch_multiplicity(const LocalBranch& b)
{
    auto ox = b.x.try_order();
    auto oy = b.y.try_order();
    if (ox && oy) {
        return {std::min(*ox, *oy), *ox <= *oy};
    }
    if (ox && *ox <= b.y.precision()) {
        return {*ox, true};
    }
    if (oy && *oy < b.x.precision()) {
        return {*oy, false};
    }
    throw PrecisionExhausted("branch multiplicity undecidable at precision " + std::to_string(b.precision()));
}

} // namespace detail

struct BlowupStep {
    int multiplicity;
    LocalBranch next;
};

/// One point blow-up of the germ, translated back to the origin.
inline BlowupStep branch_blowup(const LocalBranch& b)
{
    auto [m, x_lower] = detail::branch_multiplicity(b);
    if (x_lower) {
        TruncatedSeries q = divide(b.y, b.x);
        return {m, LocalBranch{b.x, q.without_constant()}};
    }
    TruncatedSeries q = divide(b.x, b.y);
    return {m, LocalBranch{q.without_constant(), b.y}};
}

inline constexpr int kSmoothGuardBlowups = 3;

/// Multiplicities under successive blow-ups, stopping once the germ is smooth.
inline MultiplicitySequence multseq_from_branch(const LocalBranch& b)
{
    std::vector<Integer> out;
    LocalBranch cur = b;
    for (;;) {
        auto step = branch_blowup(cur);
        if (step.multiplicity < 1) {
            throw InvalidInput("branch has a zero coordinate order");
        }
        if (step.multiplicity == 1) {
            cur = std::move(step.next);
            for (int i = 0; i < kSmoothGuardBlowups; ++i) {
                auto guard = branch_blowup(cur);
                if (guard.multiplicity != 1) {
                    throw InvalidInput("branch parametrization is not primitive");
                }
                cur = std::move(guard.next);
            }
            break;
        }
        if (!out.empty() && Integer(step.multiplicity) > out.back()) {
            throw InvalidInput("branch parametrization is not primitive");
        }
        out.emplace_back(step.multiplicity);
        cur = std::move(step.next);
    }
    return MultiplicitySequence::validate(std::move(out));
}

/// Characteristic exponents read off a Puiseux expansion of the branch.
inline CharacteristicExponents char_from_branch(const LocalBranch& b)
{
    auto [a, x_lower] = detail::branch_multiplicity(b);
    if (a == 1) {
        return CharacteristicExponents::validate(1, {});
    }
    const TruncatedSeries& xs = x_lower ? b.x : b.y;
    const TruncatedSeries& ys = x_lower ? b.y : b.x;
    // x = c t^a u(t) with u(0) = 1; tau = t u^(1/a) gives x = c tau^a
    Rational c = xs.coefficient(a);
    TruncatedSeries u = xs.shifted_down(a).scaled(Rational(1) / c);
    TruncatedSeries root = TruncatedSeries::unit_power(u, Rational(1, a));
    TruncatedSeries tau = root.shifted_up(1);
    TruncatedSeries t_of_tau = tau.reverted();
    TruncatedSeries y = compose(ys, t_of_tau);
    Integer g = a;
    std::vector<Integer> exps;
    for (int k = 1; g > 1; ++k) {
        if (k >= y.precision()) {
            throw PrecisionExhausted("characteristic exponents undecidable at precision "
                                     + std::to_string(y.precision()));
        }
        if (k % g == 0 || y.coefficient(k) == 0) {
            continue;
        }
        if (k < a) {
            throw InvalidInput("char_from_branch: coordinate orders inconsistent");
        }
        exps.emplace_back(k);
        g = gcd(g, Integer(k));
    }
    return CharacteristicExponents::validate(a, std::move(exps));
}

/// g(x(t), y(t)) with g a polynomial in slots 0 and 1.
inline TruncatedSeries pullback(const LocalBranch& b, const Polynomial& g)
{
    int n = b.precision();
    std::vector<TruncatedSeries> xp{TruncatedSeries::monomial(1, 0, n)};
    std::vector<TruncatedSeries> yp{TruncatedSeries::monomial(1, 0, n)};
    auto power = [](std::vector<TruncatedSeries>& cache, const TruncatedSeries& base, int k) {
        while (static_cast<int>(cache.size()) <= k) {
            cache.push_back(cache.back() * base);
        }
        return cache[static_cast<std::size_t>(k)];
    };
    std::optional<TruncatedSeries> sum;
    for (const auto& [e, c] : g.terms()) {
        if (e[2] != 0) {
            throw InvalidInput("pullback: polynomial uses a third variable");
        }
        TruncatedSeries term = power(xp, b.x, e[0]) * power(yp, b.y, e[1]);
        term = term.scaled(c);
        sum = sum ? *sum + term : term;
    }
    return sum ? *sum : TruncatedSeries(n);
}

/// Local intersection multiplicity of the branch with {g = 0}.
inline int pullback_order(const LocalBranch& b, const Polynomial& g)
{
    if (g.coefficient({0, 0, 0}) != 0) {
        throw InvalidInput("pullback_order: curve does not pass through the origin");
    }
    return pullback(b, g).order();
}

// ---------------------------------------------------------------------------
// Precision policy.

inline constexpr int kPrecisionRetryFactor = 1024;

/// 4 * degree, unless CUSPFORGE_PRECISION holds a positive integer.
inline int default_precision(int degree)
{
    if (const char* env = std::getenv("CUSPFORGE_PRECISION")) {
        try {
            int v = std::stoi(env);
            if (v > 0) {
                return v;
            }
        } catch (const std::exception&) {
        }
        throw InvalidInput(std::string("CUSPFORGE_PRECISION must be a positive integer, got \"") + env + "\"");
    }
    return std::max(4 * degree, 8);
}

/// Calls fn(N) with N = base, 2 base, ... up to the retry cap.
template <class Fn>
auto with_precision_retry(int base, Fn&& fn, int max_factor = kPrecisionRetryFactor)
{
    std::string last;
    for (int factor = 1; factor <= max_factor; factor *= 2) {
        try {
            return fn(base * factor);
        } catch (const PrecisionExhausted& e) {
            last = e.what();
        }
    }
    throw PrecisionExhausted("precision retries exhausted (base " + std::to_string(base) + "): " + last);
}

} // namespace cuspforge
