#pragma once

// Rational plane curves given by a parametrization [t:s] -> [X:Y:Z], their
// local branches and singular parameter values.

#include "cuspforge/puiseux.hpp"

#include <array>
#include <string>
#include <string_view>
#include <vector>

namespace cuspforge {

/// Three binary forms in t (slot 0) and s (slot 1) of a common degree.
class ProjectiveParametrization {
public:
    static ProjectiveParametrization validate(std::array<Polynomial, 3> forms)
    {
        int d = -1;
        for (const auto& f : forms) {
            if (f.is_zero()) {
                throw InvalidInput("parametrization: zero coordinate");
            }
            if (!f.is_homogeneous()) {
                throw InvalidInput("parametrization: coordinate " + f.to_string({"t", "s", "?"}) + " is not homogeneous");
            }
            if (!f.has_integer_coefficients()) {
                throw InvalidInput("parametrization: coefficients must be integers");
            }
            if (f.degree_in(2) > 0) {
                throw InvalidInput("parametrization: only variables t and s are allowed");
            }
            if (d >= 0 && f.total_degree() != d) {
                throw InvalidInput("parametrization: coordinates have different degrees");
            }
            d = f.total_degree();
        }
        ProjectiveParametrization p;
        p.forms_ = std::move(forms);
        p.degree_ = d;
        if (p.has_common_factor()) {
            throw InvalidInput("parametrization: coordinates share a common factor");
        }
        return p;
    }

    const std::array<Polynomial, 3>& forms() const { return forms_; }
    int degree() const { return degree_; }

    /// Coordinate k restricted to s = 1, as a polynomial in t.
    UPoly affine_t(int k) const { return restrict(k, false); }

    /// Coordinate k restricted to t = 1, as a polynomial in s.
    UPoly affine_s(int k) const { return restrict(k, true); }

    std::string to_string() const
    {
        std::string s;
        for (std::size_t k = 0; k < 3; ++k) {
            s += (k ? ", " : "") + forms_[k].to_string({"t", "s", "z"});
        }
        return s;
    }

private:
    UPoly restrict(int k, bool t_is_one) const
    {
        std::vector<Rational> c;
        for (const auto& [e, v] : forms_[static_cast<std::size_t>(k)].terms()) {
            int deg = t_is_one ? e[1] : e[0];
            if (static_cast<int>(c.size()) <= deg) {
                c.resize(static_cast<std::size_t>(deg) + 1);
            }
            c[static_cast<std::size_t>(deg)] += v;
        }
        return UPoly(std::move(c));
    }

    bool has_common_factor() const
    {
        UPoly g = affine_t(0);
        for (int k = 1; k < 3; ++k) {
            g = gcd(g, affine_t(k));
        }
        if (g.degree() > 0) {
            return true;
        }
        // the factor s is invisible at s = 1
        for (int k = 0; k < 3; ++k) {
            if (affine_s(k).coefficient(0) != 0) {
                return false;
            }
        }
        return true;
    }

    std::array<Polynomial, 3> forms_;
    int degree_ = 0;
};

/// Parses "X, Y, Z" (optionally wrapped in brackets) over the variables t, s.
inline ProjectiveParametrization parse_parametrization(std::string_view text)
{
    std::string body(text);
    auto first = body.find_first_not_of(" \t\n");
    auto last = body.find_last_not_of(" \t\n");
    if (first == std::string::npos) {
        throw InvalidInput("parametrization: empty input");
    }
    body = body.substr(first, last - first + 1);
    if (body.front() == '[' && body.back() == ']') {
        body = body.substr(1, body.size() - 2);
    }
    std::vector<std::string> parts(1);
    for (char c : body) {
        if (c == ',' || c == ';') {
            parts.emplace_back();
        } else {
            parts.back() += c;
        }
    }
    if (parts.size() != 3) {
        throw InvalidInput("parametrization: expected three comma-separated forms, got "
                           + std::to_string(parts.size()));
    }
    std::array<Polynomial, 3> forms;
    for (std::size_t k = 0; k < 3; ++k) {
        forms[k] = parse_polynomial(parts[k], {"t", "s"});
    }
    return ProjectiveParametrization::validate(std::move(forms));
}

/// Parameter value [t0:s0].
using ParameterPoint = std::array<Rational, 2>;

inline ParameterPoint parse_parameter_point(std::string_view text)
{
    detail::TextCursor cur(text);
    cur.expect('[', "parameter point");
    Integer t = cur.integer("parameter point");
    cur.expect(':', "parameter point");
    Integer s = cur.integer("parameter point");
    cur.expect(']', "parameter point");
    if (!cur.at_end()) {
        throw InvalidInput("parameter point: trailing characters in \"" + std::string(text) + "\"");
    }
    if (t == 0 && s == 0) {
        throw InvalidInput("parameter point: [0:0] is not a point");
    }
    return {Rational(t), Rational(s)};
}

inline std::string to_string(const ParameterPoint& p)
{
    return "[" + p[0].str() + ":" + p[1].str() + "]";
}

struct LocalizedBranch {
    ProjectivePoint image;
    Chart chart;
    LocalBranch branch;
};

/// Germ of the image curve at P([t0:s0]) in the affine chart whose
/// denominator is the first coordinate not vanishing there.
inline LocalizedBranch localize_parametrization(const ProjectiveParametrization& param, const ParameterPoint& at,
                                                int precision)
{
    std::array<TruncatedSeries, 3> coords;
    for (int k = 0; k < 3; ++k) {
        UPoly local;
        if (at[1] != 0) {
            local = param.affine_t(k).translate(at[0] / at[1]);
        } else {
            local = param.affine_s(k);
        }
        coords[static_cast<std::size_t>(k)] = TruncatedSeries::from_upoly(local, precision);
    }
    ProjectivePoint image;
    for (std::size_t k = 0; k < 3; ++k) {
        image[k] = coords[k].coefficient(0);
    }
    if (image[0] == 0 && image[1] == 0 && image[2] == 0) {
        throw InvalidInput("localize_parametrization: all coordinates vanish at " + to_string(at));
    }
    Chart ch = chart_for(image);
    const TruncatedSeries& den = coords[static_cast<std::size_t>(ch.denominator)];
    std::array<TruncatedSeries, 2> local;
    for (std::size_t k = 0; k < 2; ++k) {
        local[k] = divide(coords[static_cast<std::size_t>(ch.locals[k])], den).without_constant();
    }
    // normalize the image so the chart coordinate is 1
    Rational d = image[static_cast<std::size_t>(ch.denominator)];
    for (auto& v : image) {
        v /= d;
    }
    return {image, ch, LocalBranch::make(std::move(local[0]), std::move(local[1]))};
}

/// Parameter values where the image curve is singular, together with the
/// degree of the part of the singular locus without rational parameters.
struct SingularParameters {
    std::vector<ParameterPoint> points;
    int irrational_degree = 0;
};

namespace detail {

inline UPoly cross_gcd(const std::array<UPoly, 3>& p)
{
    std::array<UPoly, 3> d{p[0].derivative(), p[1].derivative(), p[2].derivative()};
    UPoly c0 = p[1] * d[2] - p[2] * d[1];
    UPoly c1 = p[2] * d[0] - p[0] * d[2];
    UPoly c2 = p[0] * d[1] - p[1] * d[0];
    return gcd(gcd(c0, c1), c2);
}

} // namespace detail

inline SingularParameters singular_parameters(const ProjectiveParametrization& param)
{
    SingularParameters out;
    std::array<UPoly, 3> at{param.affine_t(0), param.affine_t(1), param.affine_t(2)};
    UPoly h = detail::cross_gcd(at);
    if (!h.is_zero() && h.degree() > 0) {
        UPoly sqf = h.divmod(gcd(h, h.derivative())).first;
        auto roots = rational_roots(h);
        for (const auto& r : roots) {
            out.points.push_back({r.value, Rational(1)});
        }
        out.irrational_degree = sqf.degree() - static_cast<int>(roots.size());
    }
    std::array<UPoly, 3> as{param.affine_s(0), param.affine_s(1), param.affine_s(2)};
    UPoly hs = detail::cross_gcd(as);
    if (hs.is_zero() || hs.coefficient(0) == 0) {
        out.points.push_back({Rational(1), Rational(0)});
    }
    return out;
}

struct SingularPointReport {
    ParameterPoint parameter;
    ProjectivePoint image;
    MultiplicitySequence multseq;
    CharacteristicExponents chars;
    NewtonPairs newton;
    Integer delta;
};

struct ParametrizationReport {
    int degree = 0;
    std::vector<SingularPointReport> points;
    int irrational_degree = 0;
    Integer delta_sum;
    Integer arithmetic_genus;
    /// Sum of deltas accounts for the whole arithmetic genus.
    bool complete = false;
};

/// Local invariants at one parameter value, with precision retries.
inline SingularPointReport analyze_parameter(const ProjectiveParametrization& param, const ParameterPoint& at,
                                             int base_precision)
{
    return with_precision_retry(base_precision, [&](int n) {
        auto loc = localize_parametrization(param, at, n);
        SingularPointReport r;
        r.parameter = at;
        r.image = loc.image;
        r.multseq = multseq_from_branch(loc.branch);
        r.chars = char_from_branch(loc.branch);
        r.newton = char_to_newton(r.chars);
        r.delta = multseq_delta(r.multseq);
        return r;
    });
}

inline ParametrizationReport analyze_parametrization(const ProjectiveParametrization& param, int base_precision)
{
    ParametrizationReport rep;
    rep.degree = param.degree();
    auto sing = singular_parameters(param);
    rep.irrational_degree = sing.irrational_degree;
    rep.delta_sum = 0;
    for (const auto& at : sing.points) {
        auto r = analyze_parameter(param, at, base_precision);
        rep.delta_sum += r.delta;
        rep.points.push_back(std::move(r));
    }
    Integer d = rep.degree;
    rep.arithmetic_genus = (d - 1) * (d - 2) / 2;
    bool distinct = true;
    for (std::size_t i = 0; i < rep.points.size(); ++i) {
        for (std::size_t j = i + 1; j < rep.points.size(); ++j) {
            distinct = distinct && rep.points[i].image != rep.points[j].image;
        }
    }
    rep.complete = distinct && rep.irrational_degree == 0 && rep.delta_sum == rep.arithmetic_genus;
    return rep;
}

} // namespace cuspforge
