#pragma once

// Newton-Puiseux over Q: branches of a plane curve germ at the origin,
// following edges of the Newton polygon and substituting
// x = alpha T^p, y = T^q (beta + Y) as long as every edge polynomial splits
// over the rationals.

#include "cuspforge/series.hpp"

#include <array>
#include <map>
#include <numeric>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace cuspforge {

namespace detail {

inline constexpr int kPuiseuxMaxDepth = 256;

/// Integers (a, b) with b*p - a*q = 1 for coprime p, q.
inline std::pair<long, long> bezout_pq(long p, long q)
{
    // extended Euclid on (p, q): s*p + t*q = 1, then b = s, a = -t
    long old_r = p, r = q, old_s = 1, s = 0, old_t = 0, t = 1;
    while (r != 0) {
        long quo = old_r / r;
        std::tie(old_r, r) = std::make_pair(r, old_r - quo * r);
        std::tie(old_s, s) = std::make_pair(s, old_s - quo * s);
        std::tie(old_t, t) = std::make_pair(t, old_t - quo * t);
    }
    return {-old_t, old_s};
}

inline Rational rational_power(const Rational& w, long e)
{
    Rational base = e < 0 ? Rational(1) / w : w;
    Rational out = 1;
    for (long i = 0; i < (e < 0 ? -e : e); ++i) {
        out *= base;
    }
    return out;
}

/// G with every term divided by X^i Y^j (exponents must allow it).
inline Polynomial divide_monomial(const Polynomial& g, int i, int j)
{
    Polynomial out;
    for (const auto& [e, c] : g.terms()) {
        out.add_term({e[0] - i, e[1] - j, e[2]}, c);
    }
    return out;
}

/// Evaluates sum_j c_j(T) Y^j at T = s, Y = phi(s).
inline TruncatedSeries evaluate_at(const Polynomial& g, const TruncatedSeries& phi, int n)
{
    std::map<int, std::vector<Rational>> by_y;
    for (const auto& [e, c] : g.terms()) {
        auto& row = by_y[e[1]];
        if (static_cast<int>(row.size()) <= e[0]) {
            row.resize(static_cast<std::size_t>(e[0]) + 1);
        }
        row[static_cast<std::size_t>(e[0])] += c;
    }
    int top = by_y.empty() ? 0 : by_y.rbegin()->first;
    TruncatedSeries acc(n);
    for (int j = top; j >= 0; --j) {
        acc = TruncatedSeries::multiply_to(acc, phi, n);
        auto it = by_y.find(j);
        if (it != by_y.end()) {
            acc = acc + TruncatedSeries(it->second, n);
        }
    }
    return acc;
}

/// Solves G(s, phi(s)) = 0 with phi(0) = 0 when dG/dY(0,0) != 0.
inline TruncatedSeries implicit_solve(const Polynomial& g, int n)
{
    Polynomial gy = g.derivative(1);
    TruncatedSeries phi(n);
    for (int known = 1;; known *= 2) {
        TruncatedSeries val = evaluate_at(g, phi, n);
        TruncatedSeries der = evaluate_at(gy, phi, n);
        phi = phi - divide(val, der);
        if (known >= n) {
            break;
        }
    }
    return phi;
}

struct RawBranch {
    TruncatedSeries x;
    TruncatedSeries y;
};

inline std::vector<RawBranch> puiseux_rec(const Polynomial& f, int n, bool top, int depth)
{
    if (depth > kPuiseuxMaxDepth) {
        throw InvalidInput("newton_puiseux: recursion too deep; is the polynomial squarefree?");
    }
    if (f.is_zero()) {
        throw InvalidInput("newton_puiseux: zero polynomial");
    }
    if (f.coefficient({0, 0, 0}) != 0) {
        throw InvalidInput("newton_puiseux: curve does not pass through the origin");
    }
    std::vector<RawBranch> out;
    Polynomial g = f;
    int xmin = INT32_MAX;
    int ymin = INT32_MAX;
    for (const auto& [e, c] : g.terms()) {
        xmin = std::min(xmin, e[0]);
        ymin = std::min(ymin, e[1]);
    }
    if (xmin > 0) {
        if (!top) {
            throw InvalidInput("newton_puiseux: unexpected T factor");
        }
        if (xmin > 1) {
            throw InvalidInput("newton_puiseux: polynomial is not squarefree (x^" + std::to_string(xmin) + ")");
        }
        out.push_back({TruncatedSeries(n), TruncatedSeries::monomial(1, 1, n)});
        g = divide_monomial(g, 1, 0);
    }
    if (ymin > 0) {
        if (ymin > 1) {
            throw InvalidInput("newton_puiseux: polynomial is not squarefree (y^" + std::to_string(ymin) + ")");
        }
        out.push_back({TruncatedSeries::monomial(1, 1, n), TruncatedSeries(n)});
        g = divide_monomial(g, 0, 1);
    }
    // endpoints on the axes
    int jy = INT32_MAX;
    int ix = INT32_MAX;
    for (const auto& [e, c] : g.terms()) {
        if (e[0] == 0) {
            jy = std::min(jy, e[1]);
        }
        if (e[1] == 0) {
            ix = std::min(ix, e[0]);
        }
    }
    if (jy == 0 || ix == 0) {
        return out; // the remaining factor does not pass through the origin
    }
    std::array<int, 2> cur{0, jy};
    while (cur[1] > 0) {
        // steepest edge to the right, farthest point on ties
        std::array<int, 2> best{-1, -1};
        for (const auto& [e, c] : g.terms()) {
            if (e[0] <= cur[0] || e[1] >= cur[1]) {
                continue;
            }
            if (best[0] < 0) {
                best = {e[0], e[1]};
                continue;
            }
            // compare slopes (e1 - cur1)/(e0 - cur0) vs (b1 - cur1)/(b0 - cur0)
            long lhs = static_cast<long>(e[1] - cur[1]) * (best[0] - cur[0]);
            long rhs = static_cast<long>(best[1] - cur[1]) * (e[0] - cur[0]);
            if (lhs < rhs || (lhs == rhs && e[0] > best[0])) {
                best = {e[0], e[1]};
            }
        }
        int i1 = cur[0], j1 = cur[1], i2 = best[0], j2 = best[1];
        long di = i2 - i1;
        long dj = j1 - j2;
        long gg = std::gcd(di, dj);
        long p = dj / gg;
        long q = di / gg;
        std::vector<Rational> edge(static_cast<std::size_t>(gg) + 1);
        for (long k = 0; k <= gg; ++k) {
            edge[static_cast<std::size_t>(k)] =
                g.coefficient({static_cast<int>(i2 - k * q), static_cast<int>(j2 + k * p), 0});
        }
        auto roots = rational_roots(UPoly(edge));
        long found = 0;
        for (const auto& r : roots) {
            found += r.multiplicity;
        }
        if (found != gg) {
            throw IrrationalCoefficient("newton_puiseux: edge polynomial of degree " + std::to_string(gg)
                                        + " has only " + std::to_string(found) + " rational roots");
        }
        auto [a1, b1] = bezout_pq(p, q);
        int w = static_cast<int>(p * i1 + q * j1);
        for (const auto& r : roots) {
            Rational alpha = rational_power(r.value, a1);
            Rational beta = rational_power(r.value, b1);
            Polynomial yvar = Polynomial::variable(1);
            std::array<Polynomial, 3> images{
                Polynomial::monomial(alpha, {static_cast<int>(p), 0, 0}),
                Polynomial::monomial(1, {static_cast<int>(q), 0, 0}) * (Polynomial::constant(beta) + yvar),
                Polynomial::variable(2)};
            Polynomial g1 = divide_monomial(g.substitute(images), w, 0);
            std::vector<RawBranch> sub;
            if (r.multiplicity == 1) {
                sub.push_back({TruncatedSeries::monomial(1, 1, n), implicit_solve(g1, n)});
            } else {
                sub = puiseux_rec(g1, n, false, depth + 1);
            }
            for (auto& s : sub) {
                TruncatedSeries tp = s.x.pow(static_cast<unsigned>(p)).scaled(alpha).truncated(n);
                TruncatedSeries tq = s.x.pow(static_cast<unsigned>(q));
                TruncatedSeries y = (tq * (s.y + TruncatedSeries::monomial(beta, 0, n))).truncated(n);
                out.push_back({tp, y});
            }
        }
        cur = best;
    }
    return out;
}

} // namespace detail

/// Branches at the origin of {f = 0}, f a polynomial in slots 0 (x) and 1 (y).
inline std::vector<LocalBranch> newton_puiseux_rational(const Polynomial& f, int precision)
{
    for (const auto& [e, c] : f.terms()) {
        if (e[2] != 0) {
            throw InvalidInput("newton_puiseux: polynomial must be bivariate in x, y");
        }
    }
    std::vector<LocalBranch> out;
    for (auto& b : detail::puiseux_rec(f, precision, true, 0)) {
        out.push_back(LocalBranch::make(std::move(b.x), std::move(b.y)));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Projective points and affine charts.

using ProjectivePoint = std::array<Rational, 3>;

inline ProjectivePoint parse_projective_point(std::string_view text)
{
    detail::TextCursor cur(text);
    ProjectivePoint pt;
    cur.expect('[', "'['");
    for (std::size_t i = 0; i < 3; ++i) {
        if (i > 0) {
            cur.expect(':', "':'");
        }
        Integer num = cur.integer("coordinate");
        Integer den = 1;
        if (cur.accept('/')) {
            den = cur.integer("denominator");
            if (den == 0) {
                throw InvalidInput("projective point: zero denominator");
            }
        }
        pt[i] = Rational(num, den);
    }
    cur.expect(']', "']'");
    if (!cur.at_end()) {
        throw InvalidInput("projective point: trailing characters in \"" + std::string(text) + "\"");
    }
    if (pt[0] == 0 && pt[1] == 0 && pt[2] == 0) {
        throw InvalidInput("projective point: all coordinates are zero");
    }
    return pt;
}

inline std::string to_string(const ProjectivePoint& pt)
{
    return "[" + pt[0].str() + ":" + pt[1].str() + ":" + pt[2].str() + "]";
}

/// Affine chart around a point: the first nonzero coordinate is set to 1 and
/// the other two, in natural order, become local coordinates (slots 0, 1)
/// centered at the point.
struct Chart {
    int denominator;
    std::array<int, 2> locals;
};

inline Chart chart_for(const ProjectivePoint& pt)
{
    for (int k = 0; k < 3; ++k) {
        if (pt[static_cast<std::size_t>(k)] != 0) {
            std::array<int, 2> rest{};
            int n = 0;
            for (int i = 0; i < 3; ++i) {
                if (i != k) {
                    rest[static_cast<std::size_t>(n++)] = i;
                }
            }
            return {k, rest};
        }
    }
    throw InvalidInput("chart_for: zero point");
}

/// Dehomogenized form of F in the local coordinates of chart_for(pt).
inline Polynomial localize_form(const Polynomial& form, const ProjectivePoint& pt)
{
    if (!form.is_homogeneous()) {
        throw InvalidInput("localize: polynomial is not homogeneous");
    }
    Chart ch = chart_for(pt);
    const Rational& d = pt[static_cast<std::size_t>(ch.denominator)];
    std::array<Polynomial, 3> images;
    images[static_cast<std::size_t>(ch.denominator)] = Polynomial::constant(1);
    for (std::size_t k = 0; k < 2; ++k) {
        auto slot = static_cast<std::size_t>(ch.locals[k]);
        images[slot] = Polynomial::variable(static_cast<int>(k)) + Polynomial::constant(pt[slot] / d);
    }
    return form.substitute(images);
}

/// Branches of the projective curve {F = 0} at pt, in the local chart.
inline std::vector<LocalBranch> branches_at(const Polynomial& form, const ProjectivePoint& pt, int precision)
{
    Polynomial local = localize_form(form, pt);
    if (local.coefficient({0, 0, 0}) != 0) {
        throw InvalidInput("point " + to_string(pt) + " is not on the curve");
    }
    return newton_puiseux_rational(local, precision);
}

} // namespace cuspforge
