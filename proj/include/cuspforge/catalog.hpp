#pragma once

// The ten families of rational bicuspidal curves, the initial curves and
// start configurations of their constructions, and the explicit
// parametrization of the degree 14 curve.

#include "cuspforge/parametrization.hpp"
#include "cuspforge/surface.hpp"

#include <nlohmann/json.hpp>

#include <array>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace cuspforge {

enum class Family { a1, a2, a3, a4, b, c, d1, d2, e, f };

inline constexpr std::array<Family, 10> kAllFamilies{Family::a1, Family::a2, Family::a3, Family::a4, Family::b,
                                                     Family::c,  Family::d1, Family::d2, Family::e,  Family::f};

inline std::string to_string(Family f)
{
    static const char* names[] = {"a1", "a2", "a3", "a4", "b", "c", "d1", "d2", "e", "f"};
    return names[static_cast<int>(f)];
}

inline Family parse_family(std::string_view s)
{
    for (auto f : kAllFamilies) {
        if (to_string(f) == s) {
            return f;
        }
    }
    throw InvalidInput("unknown family '" + std::string(s) + "' (expected a1..a4, b, c, d1, d2, e or f)");
}

inline bool uses_ulm(Family f) { return f == Family::a1 || f == Family::a2 || f == Family::a3 || f == Family::a4; }
inline bool uses_k(Family f) { return f == Family::b || f == Family::c || f == Family::d1 || f == Family::d2 || f == Family::e; }

struct FamilyInfo {
    Family id;
    std::string degree_formula;
    std::string ranges;
    std::string notes;
};

inline const std::vector<FamilyInfo>& family_table()
{
    static const std::vector<FamilyInfo> table{
        {Family::a1, "u(l-1)m + m - u + 1", "u>=2, l>=2, m>=2",
         "u=2: Tono's first bicuspidal series with Cbar^2 = -1 (a_Tono = l-1); l=2: Fenske's 6th series "
         "(a_Fenske = u, d_Fenske = m-1)"},
        {Family::a2, "ulm + m + 1", "u>=2, l>=1, m>=2",
         "u=2: Tono's second bicuspidal series with Cbar^2 = -1 (a_Tono = l); l=1: Fenske's 5th series (d_Fenske = m, a_Fenske = u)"},
        {Family::a3, "ulm + um + 1", "u>=2, l>=1, m>=2",
         "u=2: Tono's third bicuspidal series with Cbar^2 = -1 (a_Tono = l+1); l=0: Fenske's 4th series (d_Fenske = m, a_Fenske = u-1)"},
        {Family::a4, "ulm - u + 1", "u>=2, l>=2, m>=2",
         "u=2: Tono's 4th bicuspidal series with Cbar^2 = -1 (a_Tono = l-1); type (d, d-k) with k = min(lm, (u-1)(lm-1))"},
        {Family::b, "2k + 1", "k>=2", ""},
        {Family::c, "4k + 1", "k>=1", ""},
        {Family::d1, "8k + 2", "k>=1", ""},
        {Family::d2, "8k + 6", "k>=1", ""},
        {Family::e, "3k + 4", "k>=1", ""},
        {Family::f, "14", "no parameters", "given by an explicit parametrization"},
    };
    return table;
}

struct FamilyParams {
    Family family = Family::f;
    Integer u = 0;
    Integer l = 0;
    Integer m = 0;
    Integer k = 0;

    static FamilyParams ulm(Family f, Integer u, Integer l, Integer m) { return {f, std::move(u), std::move(l), std::move(m), 0}; }
    static FamilyParams with_k(Family f, Integer k) { return {f, 0, 0, 0, std::move(k)}; }

    void validate() const
    {
        auto need = [&](bool ok, const std::string& what) {
            if (!ok) {
                throw InvalidInput("family " + to_string(family) + ": parameters out of range (" + what + ")");
            }
        };
        switch (family) {
        case Family::a1:
        case Family::a4:
            need(u >= 2 && l >= 2 && m >= 2, "u>=2, l>=2, m>=2");
            break;
        case Family::a2:
        case Family::a3:
            need(u >= 2 && l >= 1 && m >= 2, "u>=2, l>=1, m>=2");
            break;
        case Family::b:
            need(k >= 2, "k>=2");
            break;
        case Family::c:
        case Family::d1:
        case Family::d2:
        case Family::e:
            need(k >= 1, "k>=1");
            break;
        case Family::f:
            break;
        }
    }

    std::string label() const
    {
        if (uses_ulm(family)) {
            return to_string(family) + "(u=" + u.str() + ",l=" + l.str() + ",m=" + m.str() + ")";
        }
        if (uses_k(family)) {
            return to_string(family) + "(k=" + k.str() + ")";
        }
        return to_string(family);
    }

    friend bool operator==(const FamilyParams&, const FamilyParams&) = default;
};

struct ClaimedCusp {
    MultiplicitySequence multseq;
    NewtonPairs newton;
};

struct FamilyInstance {
    FamilyParams params;
    Integer degree;
    std::vector<ClaimedCusp> cusps;

    CurveProfile profile() const
    {
        std::vector<CuspType> types;
        for (const auto& c : cusps) {
            types.push_back(CuspType::from_multseq(c.multseq));
        }
        return CurveProfile(degree, std::move(types));
    }
};

namespace detail {

inline std::string power(const std::string& var, const Integer& e)
{
    return e == 1 ? var : var + "^" + e.str();
}

/// Multiplicity sequence built from (value, count) runs; 1-entries dropped.
inline MultiplicitySequence runs(std::initializer_list<std::pair<Integer, Integer>> parts)
{
    std::vector<Integer> e;
    for (const auto& [value, count] : parts) {
        if (count < 0) {
            throw InvalidInput("negative repetition count");
        }
        for (Integer i = 0; i < count; ++i) {
            e.push_back(value);
        }
    }
    return MultiplicitySequence::normalize(std::move(e));
}

inline NewtonPairs pairs(std::initializer_list<std::pair<Integer, Integer>> parts)
{
    std::vector<NewtonPair> v;
    for (const auto& [p, q] : parts) {
        v.push_back({p, q});
    }
    return NewtonPairs::validate(std::move(v));
}

} // namespace detail

/// Degree and both encodings of both cusps, exactly as claimed for the family.
inline FamilyInstance instantiate(const FamilyParams& p);

/// The printed formulas evaluated without the range check; used where a
/// construction passes through boundary values such as (b) at k = 1.
inline FamilyInstance formula_instance(const FamilyParams& p)
{
    using detail::pairs;
    using detail::runs;
    const Integer& u = p.u;
    const Integer& l = p.l;
    const Integer& m = p.m;
    const Integer& k = p.k;
    FamilyInstance fi;
    fi.params = p;
    switch (p.family) {
    case Family::a1:
        fi.degree = u * (l - 1) * m + m - u + 1;
        fi.cusps = {
            {runs({{(u - 1) * (l - 1) * m + m - u + 1, 1}, {m * (l - 1) - 1, u - 1}, {m, l - 2}, {m - 1, 1}}),
             pairs({{(u - 1) * (l - 1) * m + m - u + 1, u * (l - 1) * m + m - u}})},
            {runs({{(l - 1) * m, u}, {m, l - 1}}), pairs({{l - 1, u * (l - 1) + 1}, {m, 1}})},
        };
        break;
    case Family::a2:
        fi.degree = u * l * m + m + 1;
        fi.cusps = {
            {runs({{l * m + 1, u}, {m, l}}), pairs({{l * m + 1, m * (u * l + 1) + u}})},
            {runs({{(u - 1) * m * l + m, 1}, {l * m, u - 1}, {m, l}}), pairs({{(u - 1) * l + 1, u * l + 1}, {m, 1}})},
        };
        break;
    case Family::a3:
        fi.degree = u * l * m + u * m + 1;
        fi.cusps = {
            {runs({{(l + 1) * m + 1, u - 1}, {l * m + 1, 1}, {m, l}}),
             pairs({{m * (l + 1) + 1, m * (u * (l + 1) - 1) + u}})},
            {runs({{(u - 1) * (l + 1) * m, 1}, {(l + 1) * m, u - 1}, {m, l + 1}}),
             pairs({{u - 1, u}, {l + 1, 1}, {m, 1}})},
        };
        break;
    case Family::a4:
        fi.degree = u * l * m - u + 1;
        fi.cusps = {
            {runs({{(u - 1) * (l * m - 1), 1}, {l * m - 1, u - 1}, {m, l - 1}, {m - 1, 1}}),
             pairs({{u - 1, u}, {l * m - 1, m}})},
            {runs({{l * m, u - 1}, {(l - 1) * m, 1}, {m, l - 1}}), pairs({{l, u * l - 1}, {m, 1}})},
        };
        break;
    case Family::b:
        fi.degree = 2 * k + 1;
        fi.cusps = {
            {runs({{k, 4}}), pairs({{k, 4 * k + 1}})},
            {runs({{2, k}}), pairs({{2, 2 * k + 1}})},
        };
        break;
    case Family::c:
        fi.degree = 4 * k + 1;
        fi.cusps = {
            {runs({{2 * k, 3}, {2, k}}), pairs({{k, 3 * k + 1}, {2, 1}})},
            {runs({{2 * k, 1}, {2, k}}), pairs({{k, k + 1}, {2, 1}})},
        };
        break;
    case Family::d1:
        fi.degree = 8 * k + 2;
        fi.cusps = {
            {runs({{4 * k + 2, 1}, {4 * k - 2, 1}, {4, k - 1}, {2, 2}}), pairs({{2 * k + 1, 4 * k}, {2, 1}})},
            {runs({{4 * k, 2}, {4, k}}), pairs({{k, 2 * k + 1}, {4, 1}})},
        };
        break;
    case Family::d2:
        fi.degree = 8 * k + 6;
        fi.cusps = {
            {runs({{4 * k + 4, 1}, {4 * k, 1}, {4, k}}), pairs({{k + 1, 2 * k + 1}, {4, 1}})},
            {runs({{4 * k + 2, 2}, {4, k}, {2, 2}}), pairs({{2 * k + 1, 4 * k + 4}, {2, 1}})},
        };
        break;
    case Family::e:
        fi.degree = 3 * k + 4;
        fi.cusps = {
            {runs({{3 * k, 1}, {3, k}}), pairs({{k, k + 1}, {3, 1}})},
            {runs({{4, k}, {2, 3}}), pairs({{2, 2 * k + 1}, {2, 3}})},
        };
        break;
    case Family::f:
        fi.degree = 14;
        fi.cusps = {
            {runs({{8, 1}, {4, 2}, {2, 2}}), pairs({{2, 3}, {2, 1}, {2, 1}})},
            {runs({{6, 2}, {3, 2}}), pairs({{2, 5}, {3, 1}})},
        };
        break;
    }
    return fi;
}

inline FamilyInstance instantiate(const FamilyParams& p)
{
    p.validate();
    return formula_instance(p);
}

struct CuspCheck {
    MultiplicitySequence claimed;
    NewtonPairs newton;
    std::optional<CharacteristicExponents> chars;
    std::optional<MultiplicitySequence> converted;
    bool match = false;
    std::string error;
};

struct InstanceReport {
    FamilyInstance instance;
    GenusReport genus;
    std::vector<CuspCheck> cusps;
    Integer cbar_squared;
    bool ok = false;
};

/// Genus identity, agreement of the two cusp encodings, and Cbar^2.
inline InstanceReport verify_instance(const FamilyInstance& fi)
{
    InstanceReport r;
    r.instance = fi;
    CurveProfile profile = fi.profile();
    r.genus = genus_check(profile);
    r.cbar_squared = cbar_squared(profile);
    bool all = r.genus.ok;
    for (const auto& c : fi.cusps) {
        CuspCheck cc;
        cc.claimed = c.multseq;
        cc.newton = c.newton;
        try {
            cc.chars = newton_to_char(c.newton);
            cc.converted = char_to_multseq(*cc.chars);
            cc.match = *cc.converted == c.multseq;
        } catch (const Error& e) {
            cc.error = e.what();
        }
        all = all && cc.match;
        r.cusps.push_back(std::move(cc));
    }
    r.ok = all;
    return r;
}

struct GridBounds {
    Integer umax = 6;
    Integer lmax = 6;
    Integer mmax = 6;
    Integer kmax = 12;
};

/// In-range parameter tuples up to the bounds, in a fixed order.
inline std::vector<FamilyParams> grid(Family f, const GridBounds& b = {})
{
    std::vector<FamilyParams> out;
    if (uses_ulm(f)) {
        Integer lmin = (f == Family::a2 || f == Family::a3) ? 1 : 2;
        for (Integer u = 2; u <= b.umax; ++u) {
            for (Integer l = lmin; l <= b.lmax; ++l) {
                for (Integer m = 2; m <= b.mmax; ++m) {
                    out.push_back(FamilyParams::ulm(f, u, l, m));
                }
            }
        }
    } else if (uses_k(f)) {
        for (Integer k = f == Family::b ? 2 : 1; k <= b.kmax; ++k) {
            out.push_back(FamilyParams::with_k(f, k));
        }
    } else {
        out.push_back(FamilyParams{Family::f});
    }
    return out;
}

inline std::vector<FamilyParams> full_grid(const GridBounds& b = {})
{
    std::vector<FamilyParams> out;
    for (auto f : kAllFamilies) {
        auto g = grid(f, b);
        out.insert(out.end(), g.begin(), g.end());
    }
    return out;
}

// ---------------------------------------------------------------------------
// Explicit curves used by the constructions.

struct PlaneCurve {
    std::string name;
    std::string equation;
    Integer degree;
};

struct StartPoint {
    std::string name;
    /// Absent when the point is not defined over the rationals.
    std::optional<ProjectivePoint> coords;
    std::map<std::string, MultiplicitySequence> germs;
    std::map<OwnerPair, Integer> meets;
};

/// A plane configuration: a tracked curve, auxiliary curves and the points
/// where at least two of them meet or the tracked curve is singular.
struct StartConfiguration {
    PlaneCurve tracked;
    std::vector<PlaneCurve> divisors;
    std::vector<StartPoint> points;
};

struct TangentClaim {
    std::string point;
    std::string line;
    Integer order;
};

/// Initial bicuspidal curve of the (a) constructions with its claimed data.
struct InitialCurve {
    Family series;
    Integer l;
    Integer m;
    std::string equation;
    Integer degree;
    std::vector<std::pair<std::string, ProjectivePoint>> singular_points;
    std::map<std::string, MultiplicitySequence> claimed_multseq;
    std::map<std::string, NewtonPairs> claimed_newton;
    std::vector<TangentClaim> tangents;
    /// Lines by name: tangent lines and the line through both cusps.
    std::map<std::string, std::string> lines;

    CurveProfile profile() const
    {
        std::vector<CuspType> cusps;
        for (const auto& [name, pt] : singular_points) {
            cusps.push_back(CuspType::from_multseq(claimed_multseq.at(name)));
        }
        return CurveProfile(degree, std::move(cusps));
    }
};

inline InitialCurve initial_curve(Family series, const Integer& l, const Integer& m)
{
    using detail::pairs;
    using detail::runs;
    InitialCurve ic;
    ic.series = series;
    ic.l = l;
    ic.m = m;
    if (series == Family::a1 || series == Family::a4) {
        if (l < 2 || m < 2) {
            throw InvalidInput("initial curve " + to_string(series) + ": need l>=2, m>=2");
        }
        ic.equation = "(" + detail::power("y", l - 1) + "*z - x^" + l.str() + ")^" + m.str() + " - x^"
                      + Integer(l * m - 1).str() + "*y";
        ic.degree = l * m;
        ic.singular_points = {{"p", {0, 1, 0}}, {"q", {0, 0, 1}}};
        ic.claimed_multseq["p"] = runs({{m, l - 1}, {m - 1, 1}});
        ic.claimed_multseq["q"] = runs({{(l - 1) * m, 1}, {m, l - 1}});
        ic.claimed_newton["p"] = pairs({{m, l * m - 1}});
        ic.claimed_newton["q"] = pairs({{l - 1, l}, {m, 1}});
        ic.lines = {{"Tp", "z"}, {"Tq", "y"}, {"pq", "x"}};
        ic.tangents.push_back({"p", "Tp", l * m - 1});
        ic.tangents.push_back({"q", "Tq", l * m});
    } else if (series == Family::a2 || series == Family::a3) {
        if (l < 1 || m < 2) {
            throw InvalidInput("initial curve " + to_string(series) + ": need l>=1, m>=2");
        }
        ic.equation = "x*(y*" + detail::power("x", l) + " + z^" + Integer(l + 1).str() + ")^" + m.str() + " - z^"
                      + Integer((l + 1) * m + 1).str();
        ic.degree = (l + 1) * m + 1;
        ic.singular_points = {{"p", {0, 1, 0}}, {"q", {1, 0, 0}}};
        ic.claimed_multseq["p"] = runs({{l * m + 1, 1}, {m, l}});
        ic.claimed_multseq["q"] = runs({{m, l + 1}});
        ic.claimed_newton["p"] = pairs({{l * m + 1, (l + 1) * m + 1}});
        ic.claimed_newton["q"] = pairs({{m, (l + 1) * m + 1}});
        ic.lines = {{"Tp", "x"}, {"Tq", "y"}, {"pq", "z"}};
        ic.tangents.push_back({"q", "Tq", (l + 1) * m});
        ic.tangents.push_back({"p", "Tp", (l + 1) * m + 1});
    } else {
        throw InvalidInput("initial curves exist for a1..a4 only");
    }
    return ic;
}

/// The parametrization of the degree 14 curve, [t:s] -> [x:y:z].
inline ProjectiveParametrization parametrization_f()
{
    return parse_parametrization("3t^14 + 3s*t^13 + 2s^2*t^12, 3s^12*t^2 - 3s^13*t + s^14, 3s^6*t^8");
}

/// Roles of the lines in one quadratic Cremona step: the step blows up
/// `base` = tan ∩ other, the transverse point `transverse` of the curve with
/// `tan`, and the point infinitely near `base` on `other`.
struct CremonaRoles {
    std::string tan;
    std::string other;
    std::string base;
    std::string transverse;
};

struct ConstructionStart {
    StartConfiguration config;
    std::optional<CremonaRoles> roles;
};

namespace detail {

inline StartPoint start_point(std::string name, std::optional<ProjectivePoint> coords,
                              std::map<std::string, MultiplicitySequence> germs,
                              std::map<OwnerPair, Integer> meets)
{
    return {std::move(name), std::move(coords), std::move(germs), std::move(meets)};
}

} // namespace detail

/// Plane start configuration of a construction, with local data derived from
/// the explicit equations.
inline ConstructionStart construction_start(Family f, const Integer& l = 0, const Integer& m = 0)
{
    using detail::runs;
    using detail::start_point;
    const MultiplicitySequence smooth;
    ConstructionStart cs;
    auto& sc = cs.config;
    switch (f) {
    case Family::a1:
    case Family::a4: {
        auto ic = initial_curve(f, l, m);
        sc.tracked = {"C", ic.equation, ic.degree};
        ProjectivePoint t{1, (m % 2 == 0) ? 1 : -1, 0};
        if (f == Family::a1) {
            sc.divisors = {{"Tp", "z", 1}, {"pq", "x", 1}};
            sc.points = {
                start_point("p", ProjectivePoint{0, 1, 0}, {{"C", ic.claimed_multseq["p"]}, {"Tp", smooth}, {"pq", smooth}},
                            {{owner_pair("C", "Tp"), l * m - 1}, {owner_pair("C", "pq"), m}, {owner_pair("Tp", "pq"), 1}}),
                start_point("q", ProjectivePoint{0, 0, 1}, {{"C", ic.claimed_multseq["q"]}, {"pq", smooth}},
                            {{owner_pair("C", "pq"), (l - 1) * m}}),
                start_point("t", t, {{"C", smooth}, {"Tp", smooth}}, {{owner_pair("C", "Tp"), 1}}),
            };
            cs.roles = CremonaRoles{"Tp", "pq", "p", "t"};
        } else {
            sc.divisors = {{"Tp", "z", 1}, {"Tq", "y", 1}};
            sc.points = {
                start_point("p", ProjectivePoint{0, 1, 0}, {{"C", ic.claimed_multseq["p"]}, {"Tp", smooth}},
                            {{owner_pair("C", "Tp"), l * m - 1}}),
                start_point("q", ProjectivePoint{0, 0, 1}, {{"C", ic.claimed_multseq["q"]}, {"Tq", smooth}},
                            {{owner_pair("C", "Tq"), l * m}}),
                start_point("t", t, {{"C", smooth}, {"Tp", smooth}}, {{owner_pair("C", "Tp"), 1}}),
                start_point("s", ProjectivePoint{1, 0, 0}, {{"Tp", smooth}, {"Tq", smooth}}, {{owner_pair("Tp", "Tq"), 1}}),
            };
            cs.roles = CremonaRoles{"Tp", "Tq", "s", "t"};
        }
        break;
    }
    case Family::a2:
    case Family::a3: {
        auto ic = initial_curve(f, l, m);
        sc.tracked = {"C", ic.equation, ic.degree};
        ProjectivePoint t{1, 0, 1};
        if (f == Family::a2) {
            sc.divisors = {{"Tq", "y", 1}, {"pq", "z", 1}};
            sc.points = {
                start_point("q", ProjectivePoint{1, 0, 0}, {{"C", ic.claimed_multseq["q"]}, {"Tq", smooth}, {"pq", smooth}},
                            {{owner_pair("C", "Tq"), (l + 1) * m}, {owner_pair("C", "pq"), m}, {owner_pair("Tq", "pq"), 1}}),
                start_point("p", ProjectivePoint{0, 1, 0}, {{"C", ic.claimed_multseq["p"]}, {"pq", smooth}},
                            {{owner_pair("C", "pq"), l * m + 1}}),
                start_point("t", t, {{"C", smooth}, {"Tq", smooth}}, {{owner_pair("C", "Tq"), 1}}),
            };
            cs.roles = CremonaRoles{"Tq", "pq", "q", "t"};
        } else {
            sc.divisors = {{"Tq", "y", 1}, {"Tp", "x", 1}};
            sc.points = {
                start_point("q", ProjectivePoint{1, 0, 0}, {{"C", ic.claimed_multseq["q"]}, {"Tq", smooth}},
                            {{owner_pair("C", "Tq"), (l + 1) * m}}),
                start_point("p", ProjectivePoint{0, 1, 0}, {{"C", ic.claimed_multseq["p"]}, {"Tp", smooth}},
                            {{owner_pair("C", "Tp"), (l + 1) * m + 1}}),
                start_point("t", t, {{"C", smooth}, {"Tq", smooth}}, {{owner_pair("C", "Tq"), 1}}),
                start_point("s", ProjectivePoint{0, 0, 1}, {{"Tq", smooth}, {"Tp", smooth}}, {{owner_pair("Tq", "Tp"), 1}}),
            };
            cs.roles = CremonaRoles{"Tq", "Tp", "s", "t"};
        }
        break;
    }
    case Family::b:
        sc.tracked = {"L", "y - z", 1};
        sc.divisors = {{"C1", "x^2 + y^2 - y*z", 2}, {"C2", "x^2 - y^2 - y*z", 2}};
        sc.points = {
            start_point("p", ProjectivePoint{0, 0, 1}, {{"C1", smooth}, {"C2", smooth}}, {{owner_pair("C1", "C2"), 4}}),
            start_point("q", ProjectivePoint{0, 1, 1}, {{"C1", smooth}, {"L", smooth}}, {{owner_pair("C1", "L"), 2}}),
            // r, s = [+-sqrt(2):1:1] are not rational
            start_point("r", std::nullopt, {{"C2", smooth}, {"L", smooth}}, {{owner_pair("C2", "L"), 1}}),
            start_point("s", std::nullopt, {{"C2", smooth}, {"L", smooth}}, {{owner_pair("C2", "L"), 1}}),
        };
        break;
    case Family::c:
        sc.tracked = {"L", "3*y - 4*z", 1};
        sc.divisors = {{"C1", "x^2 + y^2 + x*y - y*z", 2}, {"C2", "x^2 + y^2 - x*y - y*z", 2}};
        sc.points = {
            start_point("p", ProjectivePoint{0, 0, 1}, {{"C1", smooth}, {"C2", smooth}}, {{owner_pair("C1", "C2"), 3}}),
            start_point("q", ProjectivePoint{0, 1, 1}, {{"C1", smooth}, {"C2", smooth}}, {{owner_pair("C1", "C2"), 1}}),
            start_point("r", ProjectivePoint{-2, 4, 3}, {{"C1", smooth}, {"L", smooth}}, {{owner_pair("C1", "L"), 2}}),
            start_point("s", ProjectivePoint{2, 4, 3}, {{"C2", smooth}, {"L", smooth}}, {{owner_pair("C2", "L"), 2}}),
        };
        break;
    case Family::d1:
    case Family::d2:
        sc.tracked = {"K", "x^2 - y*z + y^2", 2};
        sc.divisors = {{"C", "x^2 - y*z", 2}, {"L", "y - z", 1}};
        sc.points = {
            start_point("p", ProjectivePoint{1, 1, 1}, {{"C", smooth}, {"L", smooth}}, {{owner_pair("C", "L"), 1}}),
            start_point("q", ProjectivePoint{-1, 1, 1}, {{"C", smooth}, {"L", smooth}}, {{owner_pair("C", "L"), 1}}),
            start_point("r", ProjectivePoint{0, 0, 1}, {{"K", smooth}, {"C", smooth}}, {{owner_pair("K", "C"), 4}}),
            start_point("s", ProjectivePoint{0, 1, 1}, {{"K", smooth}, {"L", smooth}}, {{owner_pair("K", "L"), 2}}),
        };
        break;
    case Family::e:
        sc.tracked = {"Q", "y^4 - 2*x*y^2*z + x^2*z^2 - y*z^3", 4};
        sc.divisors = {{"L1", "16*x - 24*y - 3*z", 1}, {"L2", "z", 1}};
        sc.points = {
            start_point("q", ProjectivePoint{1, 0, 0}, {{"Q", runs({{2, 3}})}, {"L2", smooth}}, {{owner_pair("Q", "L2"), 4}}),
            start_point("p", ProjectivePoint{9, 4, 16}, {{"Q", smooth}, {"L1", smooth}}, {{owner_pair("Q", "L1"), 3}}),
            start_point("r", ProjectivePoint{57, 36, 16}, {{"Q", smooth}, {"L1", smooth}}, {{owner_pair("Q", "L1"), 1}}),
            start_point("s", ProjectivePoint{3, 2, 0}, {{"L1", smooth}, {"L2", smooth}}, {{owner_pair("L1", "L2"), 1}}),
        };
        cs.roles = CremonaRoles{"L1", "L2", "s", "r"};
        break;
    case Family::f:
        throw InvalidInput("the degree 14 curve is given by a parametrization, not a construction");
    }
    return cs;
}

/// Compares the local data of a start configuration with its equations at
/// every rational point; returns the mismatches.
inline std::vector<std::string> check_start_configuration(const StartConfiguration& sc, int precision)
{
    std::vector<std::string> issues;
    std::map<std::string, Polynomial> eq;
    eq[sc.tracked.name] = parse_polynomial(sc.tracked.equation);
    for (const auto& d : sc.divisors) {
        eq[d.name] = parse_polynomial(d.equation);
    }
    for (const auto& [name, f] : eq) {
        Integer want = name == sc.tracked.name ? sc.tracked.degree : Integer(0);
        for (const auto& d : sc.divisors) {
            if (d.name == name) {
                want = d.degree;
            }
        }
        if (!f.is_homogeneous() || f.total_degree() != want) {
            issues.push_back(name + ": equation is not a form of degree " + want.str());
        }
    }
    for (const auto& pt : sc.points) {
        if (!pt.coords) {
            continue;
        }
        std::map<std::string, LocalBranch> branch;
        for (const auto& [name, f] : eq) {
            Polynomial local = localize_form(f, *pt.coords);
            bool on = local.coefficient({0, 0, 0}) == 0;
            if (on != (pt.germs.count(name) > 0)) {
                issues.push_back(pt.name + ": " + name + (on ? " passes through the point but has no germ"
                                                              : " has a germ but misses the point"));
                continue;
            }
            if (!on) {
                continue;
            }
            auto bs = newton_puiseux_rational(local, precision);
            if (bs.size() != 1) {
                issues.push_back(pt.name + ": " + name + " has " + std::to_string(bs.size()) + " branches");
                continue;
            }
            auto ms = multseq_from_branch(bs.front());
            if (ms != pt.germs.at(name)) {
                issues.push_back(pt.name + ": " + name + " has multiplicity sequence " + to_string(ms) + ", recorded "
                                 + to_string(pt.germs.at(name)));
            }
            branch.emplace(name, bs.front());
        }
        for (auto a = branch.begin(); a != branch.end(); ++a) {
            for (auto b = std::next(a); b != branch.end(); ++b) {
                Integer got = pullback_order(a->second, localize_form(eq.at(b->first), *pt.coords));
                auto it = pt.meets.find(owner_pair(a->first, b->first));
                Integer want = it != pt.meets.end() ? it->second
                                                     : pt.germs.at(a->first).multiplicity()
                                                           * pt.germs.at(b->first).multiplicity();
                if (got != want) {
                    issues.push_back(pt.name + ": (" + a->first + "." + b->first + ") is " + got.str()
                                     + ", recorded " + want.str());
                }
            }
        }
    }
    return issues;
}

// ---------------------------------------------------------------------------
// JSON

inline nlohmann::json to_json(const FamilyParams& p)
{
    nlohmann::json j{{"family", to_string(p.family)}};
    if (uses_ulm(p.family)) {
        j["u"] = json_integer(p.u);
        j["l"] = json_integer(p.l);
        j["m"] = json_integer(p.m);
    } else if (uses_k(p.family)) {
        j["k"] = json_integer(p.k);
    }
    return j;
}

inline nlohmann::json to_json(const FamilyInstance& fi)
{
    nlohmann::json j = to_json(fi.params);
    j["degree"] = json_integer(fi.degree);
    j["cusps"] = nlohmann::json::array();
    for (const auto& c : fi.cusps) {
        j["cusps"].push_back({{"multseq", to_json(c.multseq)}, {"newton", to_json(c.newton)}});
    }
    return j;
}

inline nlohmann::json to_json(const InstanceReport& r)
{
    nlohmann::json j = to_json(r.instance);
    j["ok"] = r.ok;
    j["genus"] = {{"ok", r.genus.ok},
                  {"arithmetic_genus", json_integer(r.genus.arithmetic_genus)},
                  {"delta_sum", json_integer(r.genus.delta_sum)}};
    j["cbar_squared"] = json_integer(r.cbar_squared);
    j["checks"] = nlohmann::json::array();
    for (const auto& c : r.cusps) {
        nlohmann::json cj{{"claimed", to_json(c.claimed)}, {"newton", to_json(c.newton)}, {"match", c.match}};
        if (c.chars) {
            cj["char"] = to_json(*c.chars);
        }
        if (c.converted) {
            cj["converted"] = to_json(*c.converted);
        }
        if (!c.error.empty()) {
            cj["error"] = c.error;
        }
        j["checks"].push_back(std::move(cj));
    }
    return j;
}

} // namespace cuspforge
