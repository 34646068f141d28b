#pragma once

// Expander for the construction scripts: each family's start configuration
// and inductive step, unrolled for concrete parameters.

#include "cuspforge/catalog.hpp"
#include "cuspforge/script.hpp"

#include <string>
#include <utility>
#include <vector>

namespace cuspforge {

struct CorpusEntry {
    std::string file_name;
    FamilyParams params;
    /// Number of inductive steps performed.
    int steps = 0;
    Script script;
};

namespace detail {

class ScriptBuilder {
public:
    void header(std::string line) { script_.header.push_back(" " + std::move(line)); }

    void decl(Decl d, std::vector<std::string> comments = {})
    {
        script_.config.push_back({std::move(d), {}, prefix(std::move(comments))});
    }

    ScriptBuilder& comment(std::string line)
    {
        pending_.push_back(" " + std::move(line));
        return *this;
    }

    void stmt(StatementBody body)
    {
        script_.statements.push_back({std::move(body), {}, std::move(pending_)});
        pending_.clear();
    }

    void blowup(const std::string& p, const std::string& e) { stmt(BlowupStmt{p, e}); }
    void name(const std::string& p, const std::string& a, const std::string& b) { stmt(NameStmt{p, a, b}); }
    void blowdown(const std::string& e) { stmt(BlowdownStmt{e}); }
    void assert_selfint(const std::string& c, Integer v) { stmt(AssertSelfint{c, std::move(v)}); }
    void assert_multseq(const std::string& c, const std::string& p, MultiplicitySequence v)
    {
        stmt(AssertMultseq{c, p, std::move(v)});
    }
    void assert_meet(const std::string& a, const std::string& b, const std::string& p, Integer v)
    {
        stmt(AssertMeet{a, b, p, std::move(v)});
    }

    void finalize(const FamilyInstance& fi)
    {
        std::vector<MultiplicitySequence> cusps;
        for (const auto& c : fi.cusps) {
            cusps.push_back(c.multseq);
        }
        finalize(fi.degree, cusps);
    }

    void finalize(const Integer& degree, const std::vector<MultiplicitySequence>& cusps)
    {
        FinalizeStmt f{degree, {}};
        for (const auto& c : cusps) {
            if (!c.empty()) {
                f.cusps.push_back(c);
            }
        }
        stmt(std::move(f));
    }

    void start(const StartConfiguration& sc)
    {
        decl(AmbientDecl{});
        decl(TrackedDecl{sc.tracked.name, sc.tracked.degree, sc.tracked.degree * sc.tracked.degree,
                         -3 * sc.tracked.degree},
             {sc.tracked.name + ": " + sc.tracked.equation + " = 0"});
        for (const auto& d : sc.divisors) {
            decl(DivisorDecl{d.name, d.degree, d.degree * d.degree}, {d.name + ": " + d.equation + " = 0"});
        }
        for (const auto& p : sc.points) {
            PointDecl pd{p.name, {}, {}};
            for (const auto& owner : owners(sc)) {
                auto it = p.germs.find(owner);
                if (it == p.germs.end()) {
                    continue;
                }
                GermDecl g{owner, std::nullopt};
                if (owner == sc.tracked.name) {
                    g.multseq = it->second;
                }
                pd.germs.push_back(std::move(g));
            }
            for (const auto& [key, value] : p.meets) {
                pd.meets.push_back({key.first, key.second, value});
            }
            std::string where = p.coords ? to_string(*p.coords) : "not defined over Q";
            decl(std::move(pd), {p.name + " = " + where});
        }
    }

    Script take() { return std::move(script_); }

private:
    static std::vector<std::string> owners(const StartConfiguration& sc)
    {
        std::vector<std::string> out{sc.tracked.name};
        for (const auto& d : sc.divisors) {
            out.push_back(d.name);
        }
        return out;
    }

    static std::vector<std::string> prefix(std::vector<std::string> lines)
    {
        for (auto& l : lines) {
            l = " " + l;
        }
        return lines;
    }

    Script script_;
    std::vector<std::string> pending_;
};

inline std::string idx(const std::string& base, int i) { return base + std::to_string(i); }

} // namespace detail

namespace detail {

/// One quadratic Cremona transformation with proper base points `base` and
/// `transverse` and a third base point on `other` infinitely near `base`.
/// Returns the roles for the next step.
inline CremonaRoles cremona_step(ScriptBuilder& b, const std::string& tracked, const CremonaRoles& r, int i)
{
    std::string E = idx("E", i);
    std::string T = idx("T", i);
    std::string O = idx("O", i);
    std::string y = idx("y", i);
    std::string t = idx("t", i);
    std::string x = idx("x", i);
    b.comment("Cremona step " + std::to_string(i) + ": base points " + r.base + ", " + r.transverse
              + " and the point of " + r.other + " infinitely near " + r.base);
    b.blowup(r.base, E);
    b.blowup(r.transverse, T);
    b.name(t, tracked, T);
    b.name(y, E, r.other);
    b.blowup(y, O);
    b.blowdown(r.tan);
    b.blowdown(r.other);
    b.blowdown(E);
    b.name(x, T, O);
    b.assert_selfint(T, 1);
    b.assert_selfint(O, 1);
    b.assert_meet(T, O, x, 1);
    return {T, O, x, t};
}

inline std::string corpus_name(const FamilyParams& p)
{
    std::string s = to_string(p.family);
    if (uses_ulm(p.family)) {
        return s + "_l" + p.l.str() + "_m" + p.m.str() + "_u" + p.u.str() + ".cfs";
    }
    return s + "_k" + p.k.str() + ".cfs";
}

} // namespace detail

/// (a1)-(a4): the initial curve followed by u - 1 quadratic Cremona
/// transformations.
inline CorpusEntry expand_a(Family f, const Integer& l, const Integer& m, const Integer& u)
{
    if (!uses_ulm(f) || u < 1) {
        throw InvalidInput("expand_a: needs a family a1..a4 and u >= 1");
    }
    auto cs = construction_start(f, l, m);
    auto ic = initial_curve(f, l, m);
    int steps = static_cast<int>(to_int64(u)) - 1;
    detail::ScriptBuilder b;
    b.header("family " + to_string(f) + " with l = " + l.str() + ", m = " + m.str()
             + ": the initial curve, then quadratic Cremona transformations up to u = " + u.str());
    b.header("the lines are the tangents at the cusps p, q and the line pq through both");
    b.start(cs.config);
    std::vector<MultiplicitySequence> claimed;
    for (const auto& [name, pt] : ic.singular_points) {
        claimed.push_back(ic.claimed_multseq.at(name));
    }
    b.comment("the initial curve");
    b.finalize(ic.degree, claimed);
    CremonaRoles roles = *cs.roles;
    for (int i = 1; i <= steps; ++i) {
        roles = detail::cremona_step(b, cs.config.tracked.name, roles, i);
        b.finalize(formula_instance(FamilyParams::ulm(f, i + 1, l, m)));
    }
    CorpusEntry e;
    e.params = FamilyParams::ulm(f, u, l, m);
    e.steps = steps;
    e.file_name = detail::corpus_name(e.params);
    e.script = b.take();
    return e;
}

/// (b): the first pass produces the cuspidal cubic (k = 1); every further
/// pass raises k by one.
inline CorpusEntry expand_b(const Integer& k)
{
    if (k < 1) {
        throw InvalidInput("expand_b: needs k >= 1");
    }
    using detail::idx;
    auto cs = construction_start(Family::b);
    detail::ScriptBuilder b;
    b.header("family b up to k = " + k.str() + ": two conics and a line, then repeated passes");
    b.start(cs.config);
    std::string c1 = "C1";
    std::string c2 = "C2";
    std::string r = "p";
    int passes = static_cast<int>(to_int64(k));
    for (int j = 1; j <= passes; ++j) {
        std::string sfx = "_" + std::to_string(j);
        if (j == 1) {
            b.comment("pass 1: four blow-ups at the point where C1 and C2 meet");
        } else {
            b.comment("pass " + std::to_string(j) + ": four blow-ups at r");
        }
        for (int i = 1; i <= 4; ++i) {
            if (i > 1) {
                b.name(r, c1, c2);
            }
            b.blowup(r, "E" + std::to_string(i) + sfx);
        }
        std::string e4 = "E4" + sfx;
        if (j > 1) {
            b.name("r", "L", e4);
            b.assert_meet("L", e4, "r", j - 1);
        }
        b.name("c", c1, e4);
        b.blowup("c", "C1" + sfx);
        b.comment("s is the point of L and " + c2 + " off " + e4);
        b.blowup("s", "C2" + sfx);
        b.name("s", "L", "C2" + sfx);
        if (j > 1) {
            for (const auto& d : {c1, c2, "C1" + sfx, "C2" + sfx}) {
                b.assert_selfint(d, -1);
            }
            for (int i = 1; i <= 4; ++i) {
                b.assert_selfint("E" + std::to_string(i) + sfx, -2);
            }
            b.assert_multseq("L", "q", detail::runs({{2, j - 1}}));
            b.assert_meet("L", c1, "q", 2);
        }
        b.comment("contract " + c1 + ", " + c2 + " and the chain E4" + sfx + ", ..., E1" + sfx);
        b.blowdown(c1);
        b.name("q", "L", "C1" + sfx);
        b.blowdown(c2);
        for (int i = 4; i >= 1; --i) {
            b.blowdown("E" + std::to_string(i) + sfx);
        }
        c1 = "C1" + sfx;
        c2 = "C2" + sfx;
        b.name("r", c1, c2);
        b.assert_multseq("L", "q", detail::runs({{2, j}}));
        b.assert_meet("L", c1, "q", 2);
        b.assert_meet("L", c1, "r", 4 * j);
        b.assert_meet("L", c2, "r", 4 * j + 1);
        b.assert_meet("L", c2, "s", 1);
        b.finalize(formula_instance(FamilyParams::with_k(Family::b, j)));
        r = "r";
    }
    CorpusEntry e;
    e.params = FamilyParams::with_k(Family::b, k);
    e.steps = passes;
    e.file_name = detail::corpus_name(e.params);
    e.script = b.take();
    return e;
}

/// (c): the first pass produces the k = 1 curve; every further pass raises
/// k by one. The blow-up at q comes first so that the remaining point of
/// C1 and C2 is unique; blow-ups at distinct points commute.
inline CorpusEntry expand_c(const Integer& k)
{
    if (k < 1) {
        throw InvalidInput("expand_c: needs k >= 1");
    }
    auto cs = construction_start(Family::c);
    detail::ScriptBuilder b;
    b.header("family c up to k = " + k.str() + ": two conics and a common tangent line, then repeated passes");
    b.start(cs.config);
    std::string c1 = "C1";
    std::string c2 = "C2";
    int passes = static_cast<int>(to_int64(k));
    for (int j = 1; j <= passes; ++j) {
        std::string sfx = "_" + std::to_string(j);
        std::string e0 = "E0" + sfx;
        b.comment("pass " + std::to_string(j) + ": blow up q, then three times at p");
        b.blowup("q", e0);
        for (int i = 1; i <= 3; ++i) {
            if (i > 1) {
                b.name("p", c1, c2);
            }
            b.blowup("p", "E" + std::to_string(i) + sfx);
        }
        std::string e3 = "E3" + sfx;
        if (j > 1) {
            Integer kk = j - 1;
            b.name("u", e3, c2);
            b.assert_multseq("L", "u", detail::runs({{2, kk}}));
            b.assert_meet("L", e3, "u", 2 * kk);
            b.assert_meet("L", c2, "u", 2);
            b.name("v", e0, c1);
            b.assert_multseq("L", "v", detail::runs({{2, kk}}));
            b.assert_meet("L", e0, "v", 2 * kk);
            b.assert_meet("L", c1, "v", 2);
        }
        b.name("c", e3, c1);
        b.blowup("c", "C1" + sfx);
        b.name("c", e0, c2);
        b.blowup("c", "C2" + sfx);
        b.comment("contract " + c1 + ", " + c2 + ", " + e0 + " and the chain E3" + sfx + ", ..., E1" + sfx);
        b.blowdown(c1);
        b.blowdown(c2);
        b.blowdown(e0);
        for (int i = 3; i >= 1; --i) {
            b.blowdown("E" + std::to_string(i) + sfx);
        }
        c1 = "C1" + sfx;
        c2 = "C2" + sfx;
        if (j == 1) {
            b.assert_meet("L", c1, "p", 6);
            b.assert_meet("L", c1, "q", 4);
            b.assert_meet("L", c2, "p", 8);
            b.assert_meet("L", c2, "q", 2);
        }
        b.finalize(formula_instance(FamilyParams::with_k(Family::c, j)));
    }
    CorpusEntry e;
    e.params = FamilyParams::with_k(Family::c, k);
    e.steps = passes;
    e.file_name = detail::corpus_name(e.params);
    e.script = b.take();
    return e;
}

/// (e): the unicuspidal quartic followed by k quadratic Cremona
/// transformations.
inline CorpusEntry expand_e(const Integer& k)
{
    if (k < 1) {
        throw InvalidInput("expand_e: needs k >= 1");
    }
    auto cs = construction_start(Family::e);
    detail::ScriptBuilder b;
    b.header("family e up to k = " + k.str() + ": the quartic with cusp [2_3], its inflectional tangent L1 at p");
    b.header("and the line L2 through the cusp q, then quadratic Cremona transformations");
    b.start(cs.config);
    CremonaRoles roles = *cs.roles;
    int steps = static_cast<int>(to_int64(k));
    for (int i = 1; i <= steps; ++i) {
        roles = detail::cremona_step(b, cs.config.tracked.name, roles, i);
        b.finalize(formula_instance(FamilyParams::with_k(Family::e, i)));
    }
    CorpusEntry e;
    e.params = FamilyParams::with_k(Family::e, k);
    e.steps = steps;
    e.file_name = detail::corpus_name(e.params);
    e.script = b.take();
    return e;
}

/// (d1)/(d2), following the sketch: the conic K touching C and L, then
/// alternating transformations K -> D_0 -> C_1 -> D_1 -> ... . After the
/// first step the chain of four blow-ups starts at the point of C and L
/// where the tracked curve has its cusp [4k] or [4k+4]; starting at the
/// other point undoes the previous step.
inline CorpusEntry expand_d(Family f, const Integer& k)
{
    if ((f != Family::d1 && f != Family::d2) || k < (f == Family::d1 ? 1 : 0)) {
        throw InvalidInput("expand_d: needs d1 with k >= 1 or d2 with k >= 0");
    }
    auto cs = construction_start(Family::d1);
    detail::ScriptBuilder b;
    b.header("family " + to_string(f) + " up to k = " + k.str() + " (best effort)");
    b.start(cs.config);
    std::string c = "C";
    std::string l = "L";
    std::string p = "p";
    int steps = static_cast<int>(to_int64(f == Family::d1 ? Integer(2 * k) : Integer(2 * k + 1)));
    for (int j = 1; j <= steps; ++j) {
        std::string sfx = "_" + std::to_string(j);
        std::string f_new = "F" + sfx;
        std::string e4 = "E4" + sfx;
        b.comment("step " + std::to_string(j) + ": four blow-ups along " + c + " starting at " + p);
        std::string chain = "p" + sfx;
        std::string q = "q" + sfx;
        std::string a = "a" + sfx;
        b.blowup(p, "E1" + sfx);
        for (int i = 1; i <= 3; ++i) {
            b.name(chain, "E" + std::to_string(i) + sfx, c);
            b.blowup(chain, "E" + std::to_string(i + 1) + sfx);
        }
        b.name(q, l, c);
        b.blowup(q, f_new);
        b.blowdown(c);
        b.name(a, f_new, e4);
        b.blowdown(l);
        for (int i = 1; i <= 3; ++i) {
            b.blowdown("E" + std::to_string(i) + sfx);
        }
        c = f_new;
        l = e4;
        p = a;
        if (j % 2 == 1) {
            Integer kk = (j - 1) / 2;
            if (kk == 0) {
                b.finalize(6, {detail::runs({{4, 1}}), detail::runs({{2, 4}})});
            } else {
                b.finalize(formula_instance(FamilyParams::with_k(Family::d2, kk)));
            }
        } else {
            b.finalize(formula_instance(FamilyParams::with_k(Family::d1, j / 2)));
        }
    }
    CorpusEntry e;
    e.params = FamilyParams::with_k(f, k);
    e.steps = steps;
    e.file_name = detail::corpus_name(e.params);
    e.script = b.take();
    return e;
}

/// Script for one parameter tuple; for (a1)-(a4) u counts the initial curve
/// as u = 1.
inline CorpusEntry expand(const FamilyParams& p)
{
    switch (p.family) {
    case Family::a1:
    case Family::a2:
    case Family::a3:
    case Family::a4:
        return expand_a(p.family, p.l, p.m, p.u);
    case Family::b:
        return expand_b(p.k);
    case Family::c:
        return expand_c(p.k);
    case Family::d1:
    case Family::d2:
        return expand_d(p.family, p.k);
    case Family::e:
        return expand_e(p.k);
    case Family::f:
        break;
    }
    throw InvalidInput("no construction script for family f (it is given by a parametrization)");
}

/// Replays of (d1)/(d2) follow a sketch and are not acceptance gates.
inline bool is_best_effort(const CorpusEntry& e)
{
    return e.params.family == Family::d1 || e.params.family == Family::d2;
}

/// The shipped corpus, in a fixed order.
inline std::vector<CorpusEntry> shipped_corpus()
{
    std::vector<CorpusEntry> out;
    for (auto f : {Family::a1, Family::a2, Family::a3, Family::a4}) {
        for (int l = 2; l <= 3; ++l) {
            for (int m = 2; m <= 3; ++m) {
                out.push_back(expand_a(f, l, m, 3));
            }
        }
    }
    for (auto f : {Family::b, Family::c, Family::e}) {
        for (int k = 1; k <= 6; ++k) {
            out.push_back(expand(FamilyParams::with_k(f, k)));
        }
    }
    for (auto f : {Family::d1, Family::d2}) {
        for (int k = 1; k <= 3; ++k) {
            out.push_back(expand_d(f, k));
        }
    }
    return out;
}

} // namespace cuspforge
