#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace cuspforge;

namespace {

// Hand transcription of the curve list, in machine integers.
struct Expected {
    long degree = 0;
    std::vector<std::vector<long>> multseq;
    std::vector<std::vector<std::pair<long, long>>> newton;
};

std::vector<long> R(std::initializer_list<std::pair<long, long>> runs)
{
    std::vector<long> out;
    for (auto [v, c] : runs) {
        for (long i = 0; i < c; ++i) {
            if (v > 1) {
                out.push_back(v);
            }
        }
    }
    return out;
}

Expected expected(Family f, long u, long l, long m, long k)
{
    switch (f) {
    case Family::a1:
        return {u * (l - 1) * m + m - u + 1,
                {R({{(u - 1) * (l - 1) * m + m - u + 1, 1}, {m * (l - 1) - 1, u - 1}, {m, l - 2}, {m - 1, 1}}),
                 R({{(l - 1) * m, u}, {m, l - 1}})},
                {{{(u - 1) * (l - 1) * m + m - u + 1, u * (l - 1) * m + m - u}},
                 {{l - 1, u * (l - 1) + 1}, {m, 1}}}};
    case Family::a2:
        return {u * l * m + m + 1,
                {R({{l * m + 1, u}, {m, l}}), R({{(u - 1) * m * l + m, 1}, {l * m, u - 1}, {m, l}})},
                {{{l * m + 1, m * (u * l + 1) + u}}, {{(u - 1) * l + 1, u * l + 1}, {m, 1}}}};
    case Family::a3:
        return {u * l * m + u * m + 1,
                {R({{(l + 1) * m + 1, u - 1}, {l * m + 1, 1}, {m, l}}),
                 R({{(u - 1) * (l + 1) * m, 1}, {(l + 1) * m, u - 1}, {m, l + 1}})},
                {{{m * (l + 1) + 1, m * (u * (l + 1) - 1) + u}}, {{u - 1, u}, {l + 1, 1}, {m, 1}}}};
    case Family::a4:
        return {u * l * m - u + 1,
                {R({{(u - 1) * (l * m - 1), 1}, {l * m - 1, u - 1}, {m, l - 1}, {m - 1, 1}}),
                 R({{l * m, u - 1}, {(l - 1) * m, 1}, {m, l - 1}})},
                {{{u - 1, u}, {l * m - 1, m}}, {{l, u * l - 1}, {m, 1}}}};
    case Family::b:
        return {2 * k + 1, {R({{k, 4}}), R({{2, k}})}, {{{k, 4 * k + 1}}, {{2, 2 * k + 1}}}};
    case Family::c:
        return {4 * k + 1,
                {R({{2 * k, 3}, {2, k}}), R({{2 * k, 1}, {2, k}})},
                {{{k, 3 * k + 1}, {2, 1}}, {{k, k + 1}, {2, 1}}}};
    case Family::d1:
        return {8 * k + 2,
                {R({{4 * k + 2, 1}, {4 * k - 2, 1}, {4, k - 1}, {2, 2}}), R({{4 * k, 2}, {4, k}})},
                {{{2 * k + 1, 4 * k}, {2, 1}}, {{k, 2 * k + 1}, {4, 1}}}};
    case Family::d2:
        return {8 * k + 6,
                {R({{4 * k + 4, 1}, {4 * k, 1}, {4, k}}), R({{4 * k + 2, 2}, {4, k}, {2, 2}})},
                {{{k + 1, 2 * k + 1}, {4, 1}}, {{2 * k + 1, 4 * k + 4}, {2, 1}}}};
    case Family::e:
        return {3 * k + 4, {R({{3 * k, 1}, {3, k}}), R({{4, k}, {2, 3}})}, {{{k, k + 1}, {3, 1}}, {{2, 2 * k + 1}, {2, 3}}}};
    case Family::f:
        return {14, {{8, 4, 4, 2, 2}, {6, 6, 3, 3}}, {{{2, 3}, {2, 1}, {2, 1}}, {{2, 5}, {3, 1}}}};
    }
    return {};
}

Expected expected(const FamilyParams& p)
{
    auto L = [](const Integer& v) { return v.convert_to<long>(); };
    return expected(p.family, L(p.u), L(p.l), L(p.m), L(p.k));
}

NewtonPairs np(const std::vector<std::pair<long, long>>& v)
{
    std::vector<NewtonPair> out;
    for (auto [p, q] : v) {
        out.push_back({p, q});
    }
    return NewtonPairs::validate(out);
}

MultiplicitySequence ms(std::string_view s) { return parse_multseq(s); }

template <class Fn>
auto retry(int degree, Fn&& fn)
{
    return with_precision_retry(default_precision(degree), std::forward<Fn>(fn));
}

} // namespace

TEST(Instantiate, Examples)
{
    auto b2 = instantiate(FamilyParams::with_k(Family::b, 2));
    EXPECT_EQ(b2.degree, 5);
    ASSERT_EQ(b2.cusps.size(), 2u);
    EXPECT_EQ(b2.cusps[0].multseq, ms("[2,2,2,2]"));
    EXPECT_EQ(b2.cusps[1].multseq, ms("[2,2]"));
    EXPECT_EQ(to_string(b2.cusps[0].newton), "(2,9)");
    EXPECT_EQ(to_string(b2.cusps[1].newton), "(2,5)");

    auto a1 = instantiate(FamilyParams::ulm(Family::a1, 2, 2, 2));
    EXPECT_EQ(a1.degree, 5);
    EXPECT_EQ(a1.cusps[0].multseq, ms("[3]"));
    EXPECT_EQ(a1.cusps[1].multseq, ms("[2,2,2]"));

    auto d2 = instantiate(FamilyParams::with_k(Family::d2, 1));
    EXPECT_EQ(d2.degree, 14);
    EXPECT_EQ(d2.cusps[0].multseq, ms("[8,4,4]"));
    EXPECT_EQ(d2.cusps[1].multseq, ms("[6,6,4,2,2]"));

    auto f = instantiate(FamilyParams{Family::f});
    EXPECT_EQ(f.degree, 14);
    EXPECT_EQ(f.cusps[0].multseq, ms("[8,4,4,2,2]"));
    EXPECT_EQ(f.cusps[1].multseq, ms("[6,6,3,3]"));
}

TEST(Instantiate, OutOfRange)
{
    EXPECT_THROW(instantiate(FamilyParams::with_k(Family::b, 1)), InvalidInput);
    EXPECT_THROW(instantiate(FamilyParams::with_k(Family::c, 0)), InvalidInput);
    EXPECT_THROW(instantiate(FamilyParams::ulm(Family::a1, 2, 1, 2)), InvalidInput);
    EXPECT_THROW(instantiate(FamilyParams::ulm(Family::a4, 1, 2, 2)), InvalidInput);
    EXPECT_THROW(instantiate(FamilyParams::ulm(Family::a2, 2, 0, 2)), InvalidInput);
    EXPECT_THROW(instantiate(FamilyParams::ulm(Family::a3, 2, 1, 1)), InvalidInput);
    EXPECT_NO_THROW(instantiate(FamilyParams::ulm(Family::a3, 2, 1, 2)));
}

TEST(Instantiate, AgreesWithTranscriptionOverGrid)
{
    int n = 0;
    for (const auto& p : full_grid()) {
        auto fi = instantiate(p);
        auto want = expected(p);
        EXPECT_EQ(fi.degree, want.degree) << p.label();
        ASSERT_EQ(fi.cusps.size(), 2u) << p.label();
        for (std::size_t i = 0; i < 2; ++i) {
            EXPECT_EQ(oracle::entries(fi.cusps[i].multseq), want.multseq[i]) << p.label() << " cusp " << i;
            EXPECT_EQ(newton_to_char(fi.cusps[i].newton), newton_to_char(np(want.newton[i])))
                << p.label() << " cusp " << i;
        }
        ++n;
    }
    EXPECT_EQ(n, 2 * 125 + 2 * 150 + 11 + 4 * 12 + 1);
}

TEST(Instantiate, FormulaInstanceMatches)
{
    for (const auto& p : full_grid({3, 3, 3, 4})) {
        auto a = instantiate(p);
        auto b = formula_instance(p);
        EXPECT_EQ(a.degree, b.degree);
        for (std::size_t i = 0; i < a.cusps.size(); ++i) {
            EXPECT_EQ(a.cusps[i].multseq, b.cusps[i].multseq) << p.label();
        }
    }
}

TEST(VerifyInstance, CurveF)
{
    auto r = verify_instance(instantiate(FamilyParams{Family::f}));
    EXPECT_TRUE(r.ok);
    EXPECT_EQ(r.genus.arithmetic_genus, 78);
    EXPECT_EQ(r.genus.delta_sum, 78);
    for (const auto& c : r.cusps) {
        EXPECT_TRUE(c.match);
    }
}

TEST(VerifyInstance, DegeneratePairInA3)
{
    auto r = verify_instance(instantiate(FamilyParams::ulm(Family::a3, 2, 1, 2)));
    EXPECT_TRUE(r.ok);
    EXPECT_EQ(r.instance.degree, 9);
    EXPECT_EQ(r.genus.arithmetic_genus, 28);
    ASSERT_EQ(r.cusps.size(), 2u);
    EXPECT_EQ(multseq_delta(r.cusps[0].claimed) + multseq_delta(r.cusps[1].claimed), 28);
    EXPECT_EQ(multseq_delta(r.cusps[0].claimed), 14);
    EXPECT_EQ(r.cusps[1].claimed, ms("[4,4,2,2]"));
    EXPECT_EQ(to_string(r.cusps[1].newton), "(1,2)(2,1)(2,1)");
    EXPECT_TRUE(r.cusps[1].newton.degenerate());
    EXPECT_TRUE(r.cusps[1].match);
}

TEST(VerifyInstance, CorruptedClaimsAreCaught)
{
    auto fi = instantiate(FamilyParams::with_k(Family::c, 3));
    auto bad = fi;
    bad.cusps[1].multseq = ms("[6,2,2,2,2]");
    auto r = verify_instance(bad);
    EXPECT_FALSE(r.ok);
    EXPECT_FALSE(r.genus.ok);
    EXPECT_FALSE(r.cusps[1].match);

    auto wrong_degree = fi;
    wrong_degree.degree += 1;
    EXPECT_FALSE(verify_instance(wrong_degree).ok);

    auto swapped = fi;
    swapped.cusps[0].newton = fi.cusps[1].newton;
    auto rs = verify_instance(swapped);
    EXPECT_FALSE(rs.ok);
    EXPECT_TRUE(rs.genus.ok);
    EXPECT_FALSE(rs.cusps[0].match);
}

TEST(VerifyInstance, WholeGridAndGenusByHand)
{
    for (const auto& p : full_grid()) {
        auto r = verify_instance(instantiate(p));
        EXPECT_TRUE(r.ok) << p.label();
        auto want = expected(p);
        long g = (want.degree - 1) * (want.degree - 2) / 2;
        EXPECT_EQ(oracle::delta_of(want.multseq[0]) + oracle::delta_of(want.multseq[1]), g) << p.label();
        EXPECT_EQ(r.genus.arithmetic_genus, g);
    }
}

TEST(VerifyInstance, BigParametersStayExact)
{
    Integer m("100000000000");
    auto r = verify_instance(instantiate(FamilyParams::ulm(Family::a1, 2, 3, m)));
    EXPECT_TRUE(r.ok);
    EXPECT_EQ(r.instance.degree, 2 * 2 * m + m - 1);
    EXPECT_EQ(r.cusps[1].claimed.multiplicity(), 2 * m);
    EXPECT_TRUE(verify_instance(instantiate(FamilyParams::ulm(Family::a3, 3, 2, m))).ok);
}

TEST(FamilyTable, TonoSeriesHaveCbarSquaredMinusOne)
{
    const auto& table = family_table();
    ASSERT_EQ(table.size(), 10u);
    for (auto f : {Family::a1, Family::a2, Family::a3, Family::a4}) {
        auto it = std::find_if(table.begin(), table.end(), [&](const FamilyInfo& i) { return i.id == f; });
        ASSERT_NE(it, table.end());
        EXPECT_NE(it->notes.find("Cbar^2 = -1"), std::string::npos);
        for (long l = 2; l <= 5; ++l) {
            for (long m = 2; m <= 5; ++m) {
                auto want = expected(f, 2, l, m, 0);
                long cbar = want.degree * want.degree;
                for (const auto& s : want.multseq) {
                    for (long e : s) {
                        cbar -= e * e;
                    }
                    cbar -= s.back();
                }
                EXPECT_EQ(cbar, -1) << to_string(f) << " l=" << l << " m=" << m;
                EXPECT_EQ(verify_instance(instantiate(FamilyParams::ulm(f, 2, l, m))).cbar_squared, -1);
            }
        }
    }
}

TEST(Grid, Sizes)
{
    EXPECT_EQ(grid(Family::b).size(), 11u);
    EXPECT_EQ(grid(Family::e).size(), 12u);
    EXPECT_EQ(grid(Family::a1).size(), 125u);
    EXPECT_EQ(grid(Family::a2).size(), 150u);
    EXPECT_EQ(grid(Family::f).size(), 1u);
    EXPECT_EQ(grid(Family::a3, {3, 2, 2, 1}).size(), 4u);
    EXPECT_EQ(grid(Family::c, {2, 2, 2, 3}).size(), 3u);
}

TEST(Json, Report)
{
    auto j = to_json(verify_instance(instantiate(FamilyParams::with_k(Family::e, 1))));
    EXPECT_EQ(j["family"], "e");
    EXPECT_EQ(j["k"], 1);
    EXPECT_EQ(j["degree"], 7);
    EXPECT_EQ(j["ok"], true);
    EXPECT_EQ(j["genus"]["arithmetic_genus"], 15);
    ASSERT_EQ(j["checks"].size(), 2u);
    EXPECT_EQ(j["checks"][0]["match"], true);
    auto back = nlohmann::json::parse(j.dump());
    EXPECT_EQ(back, j);
}

TEST(InitialCurve, SmallExample)
{
    auto ic = initial_curve(Family::a1, 2, 2);
    EXPECT_EQ(parse_polynomial(ic.equation), parse_polynomial("(y*z - x^2)^2 - x^3*y"));
    EXPECT_EQ(ic.equation, "(y*z - x^2)^2 - x^3*y");
    EXPECT_EQ(ic.degree, 4);
    EXPECT_EQ(ic.claimed_multseq.at("p"), ms("[2]"));
    EXPECT_EQ(ic.claimed_multseq.at("q"), ms("[2,2]"));
    EXPECT_THROW(initial_curve(Family::a1, 1, 2), InvalidInput);
    EXPECT_THROW(initial_curve(Family::b, 2, 2), InvalidInput);
}

// Multiplicity sequences and tangent orders recomputed from the equations.
TEST(InitialCurve, LocalDataFromEquation)
{
    for (auto series : {Family::a1, Family::a2}) {
        long lmin = series == Family::a1 ? 2 : 1;
        for (long l = lmin; l <= 4; ++l) {
            for (long m = 2; m <= 4; ++m) {
                auto ic = initial_curve(series, l, m);
                auto f = parse_polynomial(ic.equation);
                ASSERT_TRUE(f.is_homogeneous());
                ASSERT_EQ(f.total_degree(), ic.degree);
                int deg = f.total_degree();
                EXPECT_EQ(ic.degree, series == Family::a1 ? l * m : (l + 1) * m + 1);

                std::map<std::string, std::vector<long>> want;
                if (series == Family::a1) {
                    want["p"] = R({{m, l - 1}, {m - 1, 1}});
                    want["q"] = R({{(l - 1) * m, 1}, {m, l - 1}});
                } else {
                    want["p"] = R({{l * m + 1, 1}, {m, l}});
                    want["q"] = R({{m, l + 1}});
                }
                struct Local {
                    std::size_t count;
                    MultiplicitySequence multseq;
                    CharacteristicExponents chars;
                    std::map<std::string, Integer> orders;
                };
                for (const auto& [name, pt] : ic.singular_points) {
                    auto got = retry(deg, [&](int n) {
                        auto bs = branches_at(f, pt, n);
                        Local out{bs.size(), multseq_from_branch(bs.front()), char_from_branch(bs.front()), {}};
                        for (const auto& t : ic.tangents) {
                            if (t.point == name) {
                                auto line = localize_form(parse_polynomial(ic.lines.at(t.line)), pt);
                                out.orders[t.line] = pullback_order(bs.front(), line);
                            }
                        }
                        return out;
                    });
                    EXPECT_EQ(got.count, 1u) << name;
                    EXPECT_EQ(got.multseq, ic.claimed_multseq.at(name)) << ic.equation << " at " << name;
                    EXPECT_EQ(oracle::entries(got.multseq), want[name]) << ic.equation << " at " << name;
                    EXPECT_EQ(got.chars, newton_to_char(ic.claimed_newton.at(name))) << name;
                    for (const auto& t : ic.tangents) {
                        if (t.point == name) {
                            EXPECT_EQ(got.orders.at(t.line), t.order) << ic.equation << " " << t.line;
                        }
                    }
                }
                auto report = genus_check(ic.profile());
                EXPECT_TRUE(report.ok);
                EXPECT_EQ(cbar_squared(ic.profile()), 0);
            }
        }
    }
}

TEST(CurveF, Parametrization)
{
    auto par = parametrization_f();
    EXPECT_EQ(par.degree(), 14);
    Rational x11 = 0;
    for (const auto& [e, v] : par.forms()[0].terms()) {
        x11 += v;
    }
    EXPECT_EQ(x11, 8);
    auto rep = analyze_parametrization(par, default_precision(14));
    EXPECT_TRUE(rep.complete);
    EXPECT_EQ(rep.delta_sum, 78);
    ASSERT_EQ(rep.points.size(), 2u);
    std::vector<MultiplicitySequence> got{rep.points[0].multseq, rep.points[1].multseq};
    std::sort(got.begin(), got.end(), [](const auto& a, const auto& b) { return multseq_delta(a) > multseq_delta(b); });
    EXPECT_EQ(got[0], ms("[8,4,4,2,2]"));
    EXPECT_EQ(got[1], ms("[6,6,3,3]"));
}

TEST(ConstructionStart, EquationsMatchRecordedData)
{
    std::vector<std::pair<Family, std::pair<long, long>>> cases;
    for (auto f : {Family::b, Family::c, Family::d1, Family::d2, Family::e}) {
        cases.push_back({f, {0, 0}});
    }
    for (auto f : {Family::a1, Family::a2, Family::a3, Family::a4}) {
        long lmin = (f == Family::a2 || f == Family::a3) ? 1 : 2;
        for (long l = lmin; l <= 3; ++l) {
            for (long m = 2; m <= 3; ++m) {
                cases.push_back({f, {l, m}});
            }
        }
    }
    for (const auto& [f, lm] : cases) {
        auto cs = construction_start(f, lm.first, lm.second);
        int deg = 0;
        for (const auto& d : cs.config.divisors) {
            deg = std::max(deg, d.degree.convert_to<int>());
        }
        deg = std::max(deg, cs.config.tracked.degree.convert_to<int>());
        auto issues = retry(deg, [&](int n) { return check_start_configuration(cs.config, n); });
        EXPECT_TRUE(issues.empty()) << to_string(f) << " l=" << lm.first << " m=" << lm.second << ": "
                                    << (issues.empty() ? "" : issues.front());
    }
    EXPECT_THROW(construction_start(Family::f), InvalidInput);
}

TEST(ConstructionStart, CorruptedDataIsReported)
{
    auto cs = construction_start(Family::a1, 2, 2);
    ASSERT_FALSE(cs.config.points.empty());
    auto& pt = cs.config.points.front();
    ASSERT_FALSE(pt.germs.empty());
    pt.germs.begin()->second = ms("[7]");
    auto issues = retry(8, [&](int n) { return check_start_configuration(cs.config, n); });
    EXPECT_FALSE(issues.empty());
}
