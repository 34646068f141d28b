#pragma once

// A small language for blow-up constructions: a config block describing the
// start configuration, followed by blowup / name / blowdown / assert /
// finalize statements that drive the surface engine.

#include "cuspforge/surface.hpp"

#include <nlohmann/json.hpp>

#include <cctype>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace cuspforge {

struct SourcePos {
    int line = 1;
    int column = 1;

    std::string str() const { return std::to_string(line) + ":" + std::to_string(column); }
    friend bool operator==(const SourcePos&, const SourcePos&) = default;
};

class ScriptError : public InvalidInput {
public:
    ScriptError(const SourcePos& pos, const std::string& what)
        : InvalidInput(pos.str() + ": " + what), pos_(pos)
    {
    }
    const SourcePos& pos() const { return pos_; }

private:
    SourcePos pos_;
};

// -- AST ---------------------------------------------------------------------

struct AmbientDecl {
    friend bool operator==(const AmbientDecl&, const AmbientDecl&) = default;
};

struct TrackedDecl {
    std::string name;
    std::optional<Integer> degree;
    Integer self_int;
    Integer k_dot;
    friend bool operator==(const TrackedDecl&, const TrackedDecl&) = default;
};

struct DivisorDecl {
    std::string name;
    std::optional<Integer> degree;
    Integer self_int;
    friend bool operator==(const DivisorDecl&, const DivisorDecl&) = default;
};

struct GermDecl {
    std::string owner;
    std::optional<MultiplicitySequence> multseq;
    friend bool operator==(const GermDecl&, const GermDecl&) = default;
};

struct MeetDecl {
    std::string a;
    std::string b;
    Integer value;
    friend bool operator==(const MeetDecl&, const MeetDecl&) = default;
};

struct PointDecl {
    std::string name;
    std::vector<GermDecl> germs;
    std::vector<MeetDecl> meets;
    friend bool operator==(const PointDecl&, const PointDecl&) = default;
};

using Decl = std::variant<AmbientDecl, TrackedDecl, DivisorDecl, PointDecl>;

struct BlowupStmt {
    std::string point;
    std::string divisor;
    friend bool operator==(const BlowupStmt&, const BlowupStmt&) = default;
};

struct NameStmt {
    std::string point;
    std::string a;
    std::string b;
    friend bool operator==(const NameStmt&, const NameStmt&) = default;
};

struct BlowdownStmt {
    std::string divisor;
    friend bool operator==(const BlowdownStmt&, const BlowdownStmt&) = default;
};

struct AssertSelfint {
    std::string curve;
    Integer value;
    friend bool operator==(const AssertSelfint&, const AssertSelfint&) = default;
};

struct AssertMultseq {
    std::string curve;
    std::string point;
    MultiplicitySequence value;
    friend bool operator==(const AssertMultseq&, const AssertMultseq&) = default;
};

struct AssertMeet {
    std::string a;
    std::string b;
    std::string point;
    Integer value;
    friend bool operator==(const AssertMeet&, const AssertMeet&) = default;
};

struct FinalizeStmt {
    Integer degree;
    std::vector<MultiplicitySequence> cusps;
    friend bool operator==(const FinalizeStmt&, const FinalizeStmt&) = default;
};

using StatementBody =
    std::variant<BlowupStmt, NameStmt, BlowdownStmt, AssertSelfint, AssertMultseq, AssertMeet, FinalizeStmt>;

template <class T>
struct Located {
    T node;
    SourcePos pos;
    /// Whole-line comments directly above, without the leading '#'.
    std::vector<std::string> comments;

    // positions are not part of the structure
    friend bool operator==(const Located& a, const Located& b) { return a.node == b.node && a.comments == b.comments; }
};

using Statement = Located<StatementBody>;

struct Script {
    std::vector<std::string> header;
    std::vector<Located<Decl>> config;
    std::vector<Statement> statements;
    std::vector<std::string> footer;

    friend bool operator==(const Script&, const Script&) = default;
};

// -- lexer -------------------------------------------------------------------

namespace detail {

enum class Tok { ident, integer, punct, comment, end };

struct Token {
    Tok kind;
    std::string text;
    SourcePos pos;
    /// comment token that starts its own line
    bool own_line = false;
};

inline bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }

inline bool ident_char(char c)
{
    return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_' || c == '\'' || c == '@';
}

inline std::vector<Token> lex_script(std::string_view text)
{
    std::vector<Token> out;
    SourcePos pos;
    bool line_start = true;
    std::size_t i = 0;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k) {
            if (text[i] == '\n') {
                ++pos.line;
                pos.column = 1;
                line_start = true;
            } else {
                ++pos.column;
            }
            ++i;
        }
    };
    while (i < text.size()) {
        char c = text[i];
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
            advance(1);
            continue;
        }
        SourcePos start = pos;
        if (c == '#') {
            std::size_t j = text.find('\n', i);
            if (j == std::string_view::npos) {
                j = text.size();
            }
            std::string body(text.substr(i + 1, j - i - 1));
            while (!body.empty() && (body.back() == '\r' || body.back() == ' ')) {
                body.pop_back();
            }
            out.push_back({Tok::comment, body, start, line_start});
            advance(j - i);
            continue;
        }
        line_start = false;
        if (ident_start(c)) {
            std::size_t j = i;
            while (j < text.size() && ident_char(text[j])) {
                ++j;
            }
            out.push_back({Tok::ident, std::string(text.substr(i, j - i)), start});
            advance(j - i);
            continue;
        }
        bool neg = c == '-' && i + 1 < text.size() && std::isdigit(static_cast<unsigned char>(text[i + 1]));
        if (std::isdigit(static_cast<unsigned char>(c)) || neg) {
            std::size_t j = i + 1;
            while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) {
                ++j;
            }
            out.push_back({Tok::integer, std::string(text.substr(i, j - i)), start});
            advance(j - i);
            continue;
        }
        if (text.substr(i, 2) == "->" || text.substr(i, 2) == "==") {
            out.push_back({Tok::punct, std::string(text.substr(i, 2)), start});
            advance(2);
            continue;
        }
        if (std::string_view("{}[](),;:=_").find(c) != std::string_view::npos) {
            out.push_back({Tok::punct, std::string(1, c), start});
            advance(1);
            continue;
        }
        if (static_cast<unsigned char>(c) >= 0x80) {
            throw ScriptError(start, "unexpected non-ASCII character");
        }
        throw ScriptError(start, std::string("unexpected character '") + c + "'");
    }
    // a missing token is reported right after the last one
    for (auto it = out.rbegin(); it != out.rend(); ++it) {
        if (it->kind != Tok::comment) {
            pos = {it->pos.line, it->pos.column + static_cast<int>(it->text.size())};
            break;
        }
    }
    out.push_back({Tok::end, "", pos});
    return out;
}

// -- parser ------------------------------------------------------------------

class ScriptParser {
public:
    explicit ScriptParser(std::string_view text) : toks_(lex_script(text)) {}

    Script parse()
    {
        Script s;
        s.header = take_comments();
        const Token& kw = peek();
        if (!is_word("config")) {
            fail(kw, "expected 'config'");
        }
        next();
        expect("{");
        for (;;) {
            auto comments = take_comments();
            if (is_punct("}")) {
                if (!comments.empty()) {
                    fail(peek(), "comment before '}' is not attached to anything");
                }
                next();
                break;
            }
            SourcePos pos = peek().pos;
            s.config.push_back({parse_decl(), pos, std::move(comments)});
        }
        for (;;) {
            auto comments = take_comments();
            if (peek().kind == Tok::end) {
                s.footer = std::move(comments);
                break;
            }
            SourcePos pos = peek().pos;
            s.statements.push_back({parse_statement(), pos, std::move(comments)});
        }
        check_names(s);
        return s;
    }

private:
    const Token& peek() const { return toks_[idx_]; }

    const Token& next()
    {
        // inline comments are skipped; they do not survive rendering
        const Token& t = toks_[idx_];
        if (t.kind != Tok::end) {
            ++idx_;
        }
        while (toks_[idx_].kind == Tok::comment && !toks_[idx_].own_line) {
            ++idx_;
        }
        return t;
    }

    std::vector<std::string> take_comments()
    {
        while (toks_[idx_].kind == Tok::comment && !toks_[idx_].own_line) {
            ++idx_;
        }
        std::vector<std::string> out;
        while (toks_[idx_].kind == Tok::comment) {
            out.push_back(toks_[idx_].text);
            ++idx_;
        }
        return out;
    }

    [[noreturn]] void fail(const Token& t, const std::string& what) const
    {
        std::string found = t.kind == Tok::end ? "end of input" : "'" + t.text + "'";
        throw ScriptError(t.pos, what + ", found " + found);
    }

    bool is_word(std::string_view w) const { return peek().kind == Tok::ident && peek().text == w; }
    bool is_punct(std::string_view p) const { return peek().kind == Tok::punct && peek().text == p; }

    void expect(std::string_view p)
    {
        if (!is_punct(p)) {
            fail(peek(), "expected '" + std::string(p) + "'");
        }
        next();
    }

    void keyword(std::string_view w)
    {
        if (!is_word(w)) {
            fail(peek(), "expected '" + std::string(w) + "'");
        }
        next();
    }

    std::string ident(const std::string& what)
    {
        if (peek().kind != Tok::ident) {
            fail(peek(), "expected " + what);
        }
        return next().text;
    }

    Integer integer(const std::string& what)
    {
        if (peek().kind != Tok::integer) {
            fail(peek(), "expected " + what);
        }
        return Integer(next().text);
    }

    MultiplicitySequence multseq()
    {
        const Token& start = peek();
        expect("[");
        std::vector<std::pair<Integer, Integer>> raw;
        if (!is_punct("]")) {
            do {
                Integer v = integer("multiplicity");
                Integer n = 1;
                if (is_punct("_")) {
                    next();
                    n = integer("repetition count");
                }
                raw.emplace_back(v, n);
                if (!is_punct(",")) {
                    break;
                }
                next();
            } while (true);
        }
        expect("]");
        try {
            return MultiplicitySequence::normalize(expand_repetitions(raw));
        } catch (const InvalidInput& e) {
            throw ScriptError(start.pos, std::string("malformed multiplicity sequence: ") + e.what());
        }
    }

    Decl parse_decl()
    {
        const Token& t = peek();
        if (is_word("ambient")) {
            next();
            keyword("p2");
            return AmbientDecl{};
        }
        if (is_word("tracked")) {
            next();
            TrackedDecl d;
            d.name = ident("curve name");
            if (is_word("degree")) {
                next();
                d.degree = positive("degree");
                d.self_int = *d.degree * *d.degree;
                d.k_dot = -3 * *d.degree;
            } else if (is_word("selfint")) {
                next();
                d.self_int = integer("self-intersection");
                keyword("kdot");
                d.k_dot = integer("K.C");
            } else {
                fail(peek(), "expected 'degree' or 'selfint'");
            }
            return d;
        }
        if (is_word("divisor")) {
            next();
            DivisorDecl d;
            d.name = ident("curve name");
            if (is_word("degree")) {
                next();
                d.degree = positive("degree");
                d.self_int = *d.degree * *d.degree;
            } else if (is_word("selfint")) {
                next();
                d.self_int = integer("self-intersection");
            } else {
                fail(peek(), "expected 'degree' or 'selfint'");
            }
            return d;
        }
        if (is_word("point")) {
            next();
            PointDecl p;
            p.name = ident("point name");
            expect("{");
            do {
                GermDecl g;
                g.owner = ident("curve name");
                if (is_punct(":")) {
                    next();
                    g.multseq = multseq();
                }
                p.germs.push_back(std::move(g));
                if (!is_punct(",")) {
                    break;
                }
                next();
            } while (true);
            if (is_punct(";")) {
                next();
                keyword("meets");
                do {
                    p.meets.push_back(meet_pair());
                    if (!is_punct(",")) {
                        break;
                    }
                    next();
                } while (true);
            }
            expect("}");
            return p;
        }
        fail(t, "expected a declaration (ambient, tracked, divisor, point) or '}'");
    }

    Integer positive(const std::string& what)
    {
        const Token& t = peek();
        Integer v = integer(what);
        if (v <= 0) {
            throw ScriptError(t.pos, what + " must be positive");
        }
        return v;
    }

    MeetDecl meet_pair()
    {
        MeetDecl m;
        expect("(");
        m.a = ident("curve name");
        expect(",");
        m.b = ident("curve name");
        expect(")");
        expect("=");
        m.value = integer("intersection multiplicity");
        return m;
    }

    StatementBody parse_statement()
    {
        const Token& t = peek();
        if (is_word("blowup")) {
            next();
            BlowupStmt s;
            s.point = ident("point name");
            expect("->");
            s.divisor = ident("divisor name");
            return s;
        }
        if (is_word("name")) {
            next();
            NameStmt s;
            s.point = ident("point name");
            expect("=");
            keyword("meet");
            expect("(");
            s.a = ident("curve name");
            expect(",");
            s.b = ident("curve name");
            expect(")");
            return s;
        }
        if (is_word("blowdown")) {
            next();
            return BlowdownStmt{ident("divisor name")};
        }
        if (is_word("assert")) {
            next();
            if (is_word("selfint")) {
                next();
                AssertSelfint s;
                s.curve = ident("curve name");
                expect("==");
                s.value = integer("self-intersection");
                return s;
            }
            if (is_word("multseq")) {
                next();
                AssertMultseq s;
                s.curve = ident("curve name");
                keyword("at");
                s.point = ident("point name");
                expect("==");
                s.value = multseq();
                return s;
            }
            if (is_word("meet")) {
                next();
                AssertMeet s;
                expect("(");
                s.a = ident("curve name");
                expect(",");
                s.b = ident("curve name");
                expect(")");
                keyword("at");
                s.point = ident("point name");
                expect("==");
                s.value = integer("intersection multiplicity");
                return s;
            }
            fail(peek(), "expected 'selfint', 'multseq' or 'meet'");
        }
        if (is_word("finalize")) {
            next();
            keyword("expect");
            keyword("degree");
            FinalizeStmt s;
            s.degree = positive("degree");
            keyword("cusps");
            expect("[");
            if (!is_punct("]")) {
                do {
                    s.cusps.push_back(multseq());
                    if (!is_punct(",")) {
                        break;
                    }
                    next();
                } while (true);
            }
            expect("]");
            return s;
        }
        fail(t, "expected a statement (blowup, name, blowdown, assert, finalize)");
    }

    // Static name resolution. Curves are tracked exactly; point names created
    // at run time (blow-up points "<E>@<i>", images of contractions) are
    // admitted conservatively.
    void check_names(const Script& s) const
    {
        std::set<std::string> curves;
        std::set<std::string> ever;
        std::set<std::string> points;
        std::set<std::string> exceptional;
        std::map<std::string, std::string> origin;
        bool tracked = false;
        auto dup = [](const SourcePos& pos, const std::string& kind, const std::string& name) {
            throw ScriptError(pos, "duplicate " + kind + " identifier '" + name + "'");
        };
        auto new_curve = [&](const SourcePos& pos, const std::string& name) {
            if (!ever.insert(name).second) {
                dup(pos, "curve", name);
            }
            curves.insert(name);
        };
        auto curve = [&](const SourcePos& pos, const std::string& name) {
            if (!curves.count(name)) {
                throw ScriptError(pos, "unknown curve '" + name + "'");
            }
        };
        auto point = [&](const SourcePos& pos, const std::string& name) {
            if (points.count(name)) {
                return;
            }
            auto at = name.find('@');
            if (at != std::string::npos && exceptional.count(name.substr(0, at))) {
                return;
            }
            throw ScriptError(pos, "unknown point '" + name + "'");
        };
        for (const auto& d : s.config) {
            if (std::holds_alternative<AmbientDecl>(d.node)) {
                continue;
            }
            if (const auto* t = std::get_if<TrackedDecl>(&d.node)) {
                if (tracked) {
                    throw ScriptError(d.pos, "only one tracked curve is allowed");
                }
                tracked = true;
                new_curve(d.pos, t->name);
            } else if (const auto* v = std::get_if<DivisorDecl>(&d.node)) {
                new_curve(d.pos, v->name);
            } else {
                const auto& p = std::get<PointDecl>(d.node);
                if (!points.insert(p.name).second) {
                    dup(d.pos, "point", p.name);
                }
                std::set<std::string> seen;
                for (const auto& g : p.germs) {
                    curve(d.pos, g.owner);
                    if (!seen.insert(g.owner).second) {
                        throw ScriptError(d.pos, "point '" + p.name + "' lists curve '" + g.owner + "' twice");
                    }
                }
                for (const auto& m : p.meets) {
                    if (!seen.count(m.a) || !seen.count(m.b) || m.a == m.b) {
                        throw ScriptError(d.pos, "meets (" + m.a + "," + m.b + ") must name two germs of '" + p.name
                                                     + "'");
                    }
                }
            }
        }
        for (const auto& st : s.statements) {
            const SourcePos& pos = st.pos;
            std::visit(
                [&](const auto& n) {
                    using T = std::decay_t<decltype(n)>;
                    if constexpr (std::is_same_v<T, BlowupStmt>) {
                        point(pos, n.point);
                        new_curve(pos, n.divisor);
                        points.erase(n.point);
                        exceptional.insert(n.divisor);
                        origin[n.divisor] = n.point;
                    } else if constexpr (std::is_same_v<T, NameStmt>) {
                        // whether the name is still taken depends on which
                        // points contractions consumed; checked at run time
                        curve(pos, n.a);
                        curve(pos, n.b);
                        points.insert(n.point);
                    } else if constexpr (std::is_same_v<T, BlowdownStmt>) {
                        curve(pos, n.divisor);
                        curves.erase(n.divisor);
                        points.insert(n.divisor);
                        if (origin.count(n.divisor)) {
                            points.insert(origin[n.divisor]);
                        }
                    } else if constexpr (std::is_same_v<T, AssertSelfint>) {
                        curve(pos, n.curve);
                    } else if constexpr (std::is_same_v<T, AssertMultseq>) {
                        curve(pos, n.curve);
                        point(pos, n.point);
                    } else if constexpr (std::is_same_v<T, AssertMeet>) {
                        curve(pos, n.a);
                        curve(pos, n.b);
                        point(pos, n.point);
                    }
                },
                st.node);
        }
    }

    std::vector<Token> toks_;
    std::size_t idx_ = 0;
};

} // namespace detail

inline Script parse_script(std::string_view text)
{
    return detail::ScriptParser(text).parse();
}

// -- rendering ---------------------------------------------------------------

inline std::string render(const Decl& d)
{
    return std::visit(
        [](const auto& n) -> std::string {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, AmbientDecl>) {
                return "ambient p2";
            } else if constexpr (std::is_same_v<T, TrackedDecl>) {
                if (n.degree) {
                    return "tracked " + n.name + " degree " + n.degree->str();
                }
                return "tracked " + n.name + " selfint " + n.self_int.str() + " kdot " + n.k_dot.str();
            } else if constexpr (std::is_same_v<T, DivisorDecl>) {
                if (n.degree) {
                    return "divisor " + n.name + " degree " + n.degree->str();
                }
                return "divisor " + n.name + " selfint " + n.self_int.str();
            } else {
                std::string s = "point " + n.name + " { ";
                for (std::size_t i = 0; i < n.germs.size(); ++i) {
                    s += (i ? ", " : "") + n.germs[i].owner;
                    if (n.germs[i].multseq) {
                        s += ": " + to_short_string(*n.germs[i].multseq);
                    }
                }
                if (!n.meets.empty()) {
                    s += "; meets ";
                    for (std::size_t i = 0; i < n.meets.size(); ++i) {
                        s += (i ? ", " : "") + std::string("(") + n.meets[i].a + ", " + n.meets[i].b
                             + ") = " + n.meets[i].value.str();
                    }
                }
                return s + " }";
            }
        },
        d);
}

inline std::string render(const StatementBody& st)
{
    return std::visit(
        [](const auto& n) -> std::string {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, BlowupStmt>) {
                return "blowup " + n.point + " -> " + n.divisor;
            } else if constexpr (std::is_same_v<T, NameStmt>) {
                return "name " + n.point + " = meet(" + n.a + ", " + n.b + ")";
            } else if constexpr (std::is_same_v<T, BlowdownStmt>) {
                return "blowdown " + n.divisor;
            } else if constexpr (std::is_same_v<T, AssertSelfint>) {
                return "assert selfint " + n.curve + " == " + n.value.str();
            } else if constexpr (std::is_same_v<T, AssertMultseq>) {
                return "assert multseq " + n.curve + " at " + n.point + " == " + to_short_string(n.value);
            } else if constexpr (std::is_same_v<T, AssertMeet>) {
                return "assert meet(" + n.a + ", " + n.b + ") at " + n.point + " == " + n.value.str();
            } else {
                std::string s = "finalize expect degree " + n.degree.str() + " cusps [";
                for (std::size_t i = 0; i < n.cusps.size(); ++i) {
                    s += (i ? ", " : "") + to_short_string(n.cusps[i]);
                }
                return s + "]";
            }
        },
        st);
}

/// Canonical text; parse_script(render(s)) == s.
inline std::string render(const Script& s)
{
    std::string out;
    auto comments = [&](const std::vector<std::string>& lines, const std::string& indent) {
        for (const auto& c : lines) {
            out += indent + "#" + c + "\n";
        }
    };
    comments(s.header, "");
    out += "config {\n";
    for (const auto& d : s.config) {
        comments(d.comments, "  ");
        out += "  " + render(d.node) + "\n";
    }
    out += "}\n";
    for (const auto& st : s.statements) {
        if (!st.comments.empty()) {
            out += "\n";
        }
        comments(st.comments, "");
        out += render(st.node) + "\n";
    }
    if (!s.footer.empty()) {
        out += "\n";
        comments(s.footer, "");
    }
    return out;
}

// -- execution ---------------------------------------------------------------

inline Configuration build_configuration(const Script& s)
{
    Configuration cfg;
    for (const auto& d : s.config) {
        try {
            std::visit(
                [&](const auto& n) {
                    using T = std::decay_t<decltype(n)>;
                    if constexpr (std::is_same_v<T, AmbientDecl>) {
                        cfg.set_projective_plane();
                    } else if constexpr (std::is_same_v<T, TrackedDecl>) {
                        cfg.set_tracked(n.name, n.self_int, n.k_dot);
                    } else if constexpr (std::is_same_v<T, DivisorDecl>) {
                        cfg.add_divisor(n.name, n.self_int);
                    } else {
                        std::map<std::string, MultiplicitySequence> germs;
                        for (const auto& g : n.germs) {
                            germs[g.owner] = g.multseq ? *g.multseq : MultiplicitySequence();
                        }
                        std::map<OwnerPair, Integer> meets;
                        for (const auto& m : n.meets) {
                            meets[owner_pair(m.a, m.b)] = m.value;
                        }
                        cfg.add_point(n.name, std::move(germs), meets);
                    }
                },
                d.node);
        } catch (const SurfaceError& e) {
            throw ScriptError(d.pos, e.what());
        }
    }
    return cfg;
}

enum class StepStatus { ok, failed, error };

inline std::string to_string(StepStatus s)
{
    switch (s) {
    case StepStatus::ok:
        return "ok";
    case StepStatus::failed:
        return "FAILED";
    case StepStatus::error:
        return "ERROR";
    }
    return "?";
}

struct StepRecord {
    std::size_t index = 0;
    SourcePos pos;
    std::string text;
    StepStatus status = StepStatus::ok;
    std::string message;
    std::optional<Integer> ledger;
    std::optional<CurveProfile> profile;
};

struct ExecutionReport {
    std::vector<StepRecord> steps;
    std::vector<std::string> initial_issues;
    /// Profiles produced by finalize statements, in order.
    std::vector<CurveProfile> finals;
    std::optional<Configuration> final_state;

    bool ok() const
    {
        if (!initial_issues.empty()) {
            return false;
        }
        for (const auto& s : steps) {
            if (s.status != StepStatus::ok) {
                return false;
            }
        }
        return true;
    }

    std::size_t failed_assertions() const
    {
        std::size_t n = 0;
        for (const auto& s : steps) {
            n += s.status == StepStatus::failed;
        }
        return n;
    }
};

/// Called with the configuration before and after each statement; the
/// initial configuration is reported with index 0 and no statement.
using StepObserver =
    std::function<void(const StepRecord& step, const Configuration& before, const Configuration& after)>;

namespace detail {

inline bool same_cusps(std::vector<MultiplicitySequence> a, std::vector<MultiplicitySequence> b)
{
    auto prune = [](std::vector<MultiplicitySequence>& v) {
        std::erase_if(v, [](const MultiplicitySequence& m) { return m.empty(); });
        std::sort(v.begin(), v.end());
    };
    prune(a);
    prune(b);
    return a == b;
}

inline std::string cusp_list(const std::vector<MultiplicitySequence>& v)
{
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
        s += (i ? ", " : "") + to_string(v[i]);
    }
    return s + "]";
}

} // namespace detail

/// Runs every statement. Failed assertions are recorded and execution goes
/// on; an engine error stops the run at the failing statement.
inline ExecutionReport execute(const Script& s, const StepObserver& observer = {})
{
    ExecutionReport rep;
    Configuration cfg = build_configuration(s);
    {
        auto v = validate_configuration(cfg);
        rep.initial_issues = v.issues;
        if (observer) {
            StepRecord init;
            init.text = "config";
            init.ledger = v.ledger;
            observer(init, cfg, cfg);
        }
        if (!v.ok()) {
            rep.final_state = cfg;
            return rep;
        }
    }
    for (std::size_t i = 0; i < s.statements.size(); ++i) {
        const auto& st = s.statements[i];
        StepRecord rec;
        rec.index = i + 1;
        rec.pos = st.pos;
        rec.text = render(st.node);
        Configuration before = cfg;
        try {
            std::visit(
                [&](const auto& n) {
                    using T = std::decay_t<decltype(n)>;
                    auto fail = [&](const std::string& msg) {
                        rec.status = StepStatus::failed;
                        rec.message = msg;
                    };
                    if constexpr (std::is_same_v<T, BlowupStmt>) {
                        cfg = blow_up(cfg, n.point, n.divisor);
                    } else if constexpr (std::is_same_v<T, NameStmt>) {
                        auto common = cfg.common_points(n.a, n.b);
                        if (common.size() != 1) {
                            throw SurfaceError(n.a + " and " + n.b + " meet at " + std::to_string(common.size())
                                               + " points, expected exactly one");
                        }
                        cfg.rename_point(common.front(), n.point);
                        rec.message = common.front() + " is now " + n.point;
                    } else if constexpr (std::is_same_v<T, BlowdownStmt>) {
                        cfg = blow_down(cfg, n.divisor);
                    } else if constexpr (std::is_same_v<T, AssertSelfint>) {
                        Integer got = cfg.self_int(n.curve);
                        if (got != n.value) {
                            fail("self-intersection of " + n.curve + " is " + got.str());
                        }
                    } else if constexpr (std::is_same_v<T, AssertMultseq>) {
                        const auto& pt = cfg.point(n.point);
                        if (!pt.has(n.curve)) {
                            fail(n.curve + " does not pass through " + n.point);
                        } else if (pt.germs.at(n.curve) != n.value) {
                            fail("multiplicity sequence is " + to_string(pt.germs.at(n.curve)));
                        }
                    } else if constexpr (std::is_same_v<T, AssertMeet>) {
                        const auto& pt = cfg.point(n.point);
                        if (!pt.has(n.a) || !pt.has(n.b)) {
                            fail(n.a + " and " + n.b + " do not both pass through " + n.point);
                        } else if (pt.meet(n.a, n.b) != n.value) {
                            fail("local intersection is " + pt.meet(n.a, n.b).str());
                        }
                    } else {
                        CurveProfile prof = finalize(cfg);
                        rec.profile = prof;
                        rep.finals.push_back(prof);
                        std::vector<MultiplicitySequence> got;
                        for (const auto& c : prof.cusps) {
                            got.push_back(c.multseq);
                        }
                        if (prof.degree != n.degree || !detail::same_cusps(got, n.cusps)) {
                            fail("got degree " + prof.degree.str() + " cusps " + detail::cusp_list(got));
                        } else {
                            rec.message = "degree " + prof.degree.str() + " cusps " + detail::cusp_list(got);
                        }
                    }
                },
                st.node);
        } catch (const Error& e) {
            rec.status = StepStatus::error;
            rec.message = e.what();
        }
        if (rec.status != StepStatus::error) {
            auto v = validate_configuration(cfg);
            rec.ledger = v.ledger;
            if (!v.ok()) {
                rec.status = StepStatus::error;
                std::string msg = "invalid configuration:";
                for (const auto& issue : v.issues) {
                    msg += " " + issue + ";";
                }
                msg.pop_back();
                rec.message = rec.message.empty() ? msg : rec.message + "; " + msg;
            }
        }
        if (observer) {
            observer(rec, before, cfg);
        }
        bool stop = rec.status == StepStatus::error;
        rep.steps.push_back(std::move(rec));
        if (stop) {
            break;
        }
    }
    rep.final_state = cfg;
    return rep;
}

inline std::string report_text(const ExecutionReport& rep)
{
    std::string out;
    for (const auto& issue : rep.initial_issues) {
        out += "config: " + issue + "\n";
    }
    for (const auto& st : rep.steps) {
        out += st.pos.str() + "  " + st.text + "  [" + to_string(st.status) + "]";
        if (st.ledger) {
            out += " ledger=" + st.ledger->str();
        }
        if (!st.message.empty()) {
            out += "  " + st.message;
        }
        out += "\n";
    }
    std::size_t failed = rep.failed_assertions();
    out += rep.ok() ? "result: ok (" + std::to_string(rep.steps.size()) + " statements)\n"
                    : "result: FAILED (" + std::to_string(failed) + " failed checks)\n";
    return out;
}

inline nlohmann::json to_json(const ExecutionReport& rep)
{
    nlohmann::json j;
    j["ok"] = rep.ok();
    j["initial_issues"] = rep.initial_issues;
    j["steps"] = nlohmann::json::array();
    for (const auto& st : rep.steps) {
        nlohmann::json sj{{"index", st.index},
                          {"line", st.pos.line},
                          {"column", st.pos.column},
                          {"statement", st.text},
                          {"status", to_string(st.status)},
                          {"message", st.message}};
        sj["ledger"] = st.ledger ? json_integer(*st.ledger) : nlohmann::json(nullptr);
        if (st.profile) {
            nlohmann::json cusps = nlohmann::json::array();
            for (const auto& c : st.profile->cusps) {
                cusps.push_back(to_json(c.multseq));
            }
            sj["profile"] = {{"degree", json_integer(st.profile->degree)}, {"cusps", cusps}};
        }
        j["steps"].push_back(std::move(sj));
    }
    return j;
}

} // namespace cuspforge
