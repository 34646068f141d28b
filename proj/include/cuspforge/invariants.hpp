#pragma once

// Topological invariants of unibranch plane curve singularities.
//
// A cusp type has three interchangeable encodings: Newton pairs,
// characteristic exponents (a; b_1, ..., b_r) and the multiplicity
// sequence [m_1, ..., m_s]. This header converts between them and provides
// the global identities used for projective curves (degree-genus and the
// self-intersection of the resolved strict transform).

#include "cuspforge/core.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cctype>
#include <compare>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cuspforge {

struct NewtonPair {
    Integer p;
    Integer q;

    friend bool operator==(const NewtonPair&, const NewtonPair&) = default;
};

/// Coprime pairs (p_i, q_i) of the nested fractional-power expansion.
/// Pairs with p_i = 1 are accepted and flagged as degenerate.
class NewtonPairs {
public:
    NewtonPairs() = default;

    static NewtonPairs validate(std::vector<NewtonPair> pairs)
    {
        if (pairs.empty()) {
            throw InvalidInput("Newton pairs: at least one pair is required");
        }
        for (std::size_t i = 0; i < pairs.size(); ++i) {
            const auto& [p, q] = pairs[i];
            if (p <= 0 || q <= 0) {
                throw InvalidInput("Newton pairs: entries must be positive, got (" + p.str() + ","
                                   + q.str() + ")");
            }
            if (gcd(p, q) != 1) {
                throw InvalidInput("Newton pairs: (" + p.str() + "," + q.str() + ") is not coprime");
            }
            if (i == 0 && p >= q && p > 1) {
                throw InvalidInput("Newton pairs: first pair needs p_1 < q_1, got (" + p.str() + ","
                                   + q.str() + ")");
            }
        }
        NewtonPairs out;
        out.pairs_ = std::move(pairs);
        return out;
    }

    /// The empty list, used only for smooth germs.
    static NewtonPairs smooth() { return NewtonPairs{}; }

    const std::vector<NewtonPair>& pairs() const { return pairs_; }
    bool empty() const { return pairs_.empty(); }

    bool degenerate() const
    {
        return std::any_of(pairs_.begin(), pairs_.end(), [](const NewtonPair& np) { return np.p == 1; });
    }

    friend bool operator==(const NewtonPairs&, const NewtonPairs&) = default;

private:
    std::vector<NewtonPair> pairs_;
};

/// Exponents of x = t^a, y = t^{b_1} + ... + t^{b_r}. The smooth germ is (1;).
class CharacteristicExponents {
public:
    CharacteristicExponents() = default;

    static CharacteristicExponents validate(Integer a, std::vector<Integer> b)
    {
        if (a < 1) {
            throw InvalidInput("characteristic exponents: multiplicity must be positive");
        }
        Integer g = a;
        Integer prev = a;
        for (const auto& bi : b) {
            if (bi <= prev) {
                throw InvalidInput("characteristic exponents: need a < b_1 < ... < b_r");
            }
            Integer next = gcd(g, bi);
            if (next >= g) {
                throw InvalidInput("characteristic exponents: gcd chain does not decrease at " + bi.str());
            }
            g = next;
            prev = bi;
        }
        if (g != 1) {
            throw InvalidInput("characteristic exponents: gcd chain ends at " + g.str() + ", not 1");
        }
        CharacteristicExponents out;
        out.a_ = std::move(a);
        out.b_ = std::move(b);
        return out;
    }

    const Integer& a() const { return a_; }
    const std::vector<Integer>& b() const { return b_; }
    bool smooth() const { return a_ == 1; }

    friend bool operator==(const CharacteristicExponents&, const CharacteristicExponents&) = default;

private:
    Integer a_{1};
    std::vector<Integer> b_;
};

/// Non-increasing list of multiplicities >= 2; empty for a smooth germ.
class MultiplicitySequence {
public:
    MultiplicitySequence() = default;

    static MultiplicitySequence validate(std::vector<Integer> entries)
    {
        for (std::size_t i = 0; i < entries.size(); ++i) {
            if (entries[i] < 2) {
                throw InvalidInput("multiplicity sequence: entries must be >= 2, got " + entries[i].str());
            }
            if (i > 0 && entries[i] > entries[i - 1]) {
                throw InvalidInput("multiplicity sequence: entries must be non-increasing");
            }
        }
        MultiplicitySequence out;
        out.entries_ = std::move(entries);
        return out;
    }

    /// Drops entries equal to 1 before validating.
    static MultiplicitySequence normalize(std::vector<Integer> entries)
    {
        for (const auto& e : entries) {
            if (e < 1) {
                throw InvalidInput("multiplicity sequence: entries must be positive, got " + e.str());
            }
        }
        std::erase_if(entries, [](const Integer& e) { return e == 1; });
        return validate(std::move(entries));
    }

    const std::vector<Integer>& entries() const { return entries_; }
    bool empty() const { return entries_.empty(); }
    std::size_t size() const { return entries_.size(); }

    /// Multiplicity of the germ: first entry, or 1 when smooth.
    Integer multiplicity() const { return entries_.empty() ? Integer(1) : entries_.front(); }

    MultiplicitySequence tail() const
    {
        MultiplicitySequence out;
        if (!entries_.empty()) {
            out.entries_.assign(entries_.begin() + 1, entries_.end());
        }
        return out;
    }

    MultiplicitySequence prepend(const Integer& m) const
    {
        std::vector<Integer> e;
        e.reserve(entries_.size() + 1);
        e.push_back(m);
        e.insert(e.end(), entries_.begin(), entries_.end());
        return validate(std::move(e));
    }

    friend bool operator==(const MultiplicitySequence&, const MultiplicitySequence&) = default;
    friend auto operator<=>(const MultiplicitySequence& a, const MultiplicitySequence& b)
    {
        return std::lexicographical_compare_three_way(a.entries_.begin(), a.entries_.end(),
                                                      b.entries_.begin(), b.entries_.end(),
                                                      [](const Integer& x, const Integer& y) {
                                                          return x.compare(y) <=> 0;
                                                      });
    }

private:
    std::vector<Integer> entries_;
};

// ---------------------------------------------------------------------------
// Conversions

inline CharacteristicExponents newton_to_char(const NewtonPairs& np)
{
    const auto& pairs = np.pairs();
    Integer a = 1;
    for (const auto& pr : pairs) {
        a *= pr.p;
    }
    // tail_product[i] = prod_{k > i} p_k
    std::vector<Integer> tail_product(pairs.size() + 1, Integer(1));
    for (std::size_t i = pairs.size(); i-- > 0;) {
        tail_product[i] = tail_product[i + 1] * pairs[i].p;
    }
    std::vector<Integer> b;
    Integer e = 0;
    Integer g = a;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        e += pairs[i].q * tail_product[i + 1];
        Integer next = gcd(g, e);
        if (next < g) {
            b.push_back(e);
            g = next;
        }
    }
    return CharacteristicExponents::validate(a, std::move(b));
}

inline NewtonPairs char_to_newton(const CharacteristicExponents& ce)
{
    if (ce.smooth()) {
        return NewtonPairs::smooth();
    }
    std::vector<NewtonPair> out;
    Integer g = ce.a();
    Integer prev_b = 0;
    for (const auto& bi : ce.b()) {
        Integer next = gcd(g, bi);
        out.push_back({g / next, (bi - prev_b) / next});
        g = next;
        prev_b = bi;
    }
    return NewtonPairs::validate(std::move(out));
}

namespace detail {

/// Euclid's algorithm on (x, y) emitting y repeated floor(x / y) times at
/// each step. Returns gcd(x, y).
inline Integer euclid_emit(Integer x, Integer y, std::vector<Integer>& out)
{
    while (y > 0) {
        if (y > 1) {
            Integer count = x / y;
            for (Integer i = 0; i < count; ++i) {
                out.push_back(y);
            }
        }
        Integer r = x % y;
        x = y;
        y = r;
    }
    return x;
}

} // namespace detail

inline MultiplicitySequence char_to_multseq(const CharacteristicExponents& ce)
{
    std::vector<Integer> out;
    Integer e = ce.a();
    Integer prev_b = 0;
    for (const auto& bi : ce.b()) {
        e = detail::euclid_emit(bi - prev_b, e, out);
        prev_b = bi;
    }
    return MultiplicitySequence::validate(std::move(out));
}

/// Inverse of char_to_multseq. Throws InvalidInput when the sequence is not
/// the multiplicity sequence of any unibranch germ.
inline CharacteristicExponents multseq_to_char(const MultiplicitySequence& ms)
{
    const auto& m = ms.entries();
    if (m.empty()) {
        return CharacteristicExponents{};
    }
    std::size_t pos = 0;
    // entries past the end are implicit 1s
    auto value_at = [&](std::size_t i) { return i < m.size() ? m[i] : Integer(1); };
    auto fail = [&]() -> InvalidInput {
        std::ostringstream os;
        os << "multiplicity sequence is not realizable by a unibranch germ (entry " << pos + 1 << ")";
        return InvalidInput(os.str());
    };

    Integer e = m.front();
    Integer b_prev = 0;
    std::vector<Integer> b;
    while (e > 1) {
        Integer h = 0;
        while (pos < m.size() && m[pos] == e) {
            ++h;
            ++pos;
        }
        if (b.empty() && h == 0) {
            throw fail();
        }
        Integer r = value_at(pos);
        if (r >= e) {
            throw fail();
        }
        Integer x = e;
        Integer y = r;
        while (y > 0) {
            Integer count = x / y;
            for (Integer i = 0; i < count; ++i) {
                if (pos < m.size()) {
                    if (m[pos] != y) {
                        throw fail();
                    }
                    ++pos;
                } else {
                    if (y != 1) {
                        throw fail();
                    }
                    break;
                }
            }
            Integer rem = x % y;
            x = y;
            y = rem;
        }
        b_prev += h * e + r;
        b.push_back(b_prev);
        e = x;
    }
    if (pos != m.size()) {
        throw fail();
    }
    auto ce = CharacteristicExponents::validate(m.front(), std::move(b));
    if (char_to_multseq(ce) != ms) {
        throw fail();
    }
    return ce;
}

inline Integer multseq_delta(const MultiplicitySequence& ms)
{
    Integer delta = 0;
    for (const auto& m : ms.entries()) {
        delta += m * (m - 1) / 2;
    }
    return delta;
}

/// One cusp in all three encodings.
struct CuspType {
    NewtonPairs newton;
    CharacteristicExponents chars;
    MultiplicitySequence multseq;

    static CuspType from_newton(const NewtonPairs& np)
    {
        auto ce = newton_to_char(np);
        return {char_to_newton(ce), ce, char_to_multseq(ce)};
    }

    static CuspType from_char(const CharacteristicExponents& ce)
    {
        return {char_to_newton(ce), ce, char_to_multseq(ce)};
    }

    static CuspType from_multseq(const MultiplicitySequence& ms)
    {
        auto ce = multseq_to_char(ms);
        return {char_to_newton(ce), ce, ms};
    }

    Integer delta() const { return multseq_delta(multseq); }

    friend bool operator==(const CuspType&, const CuspType&) = default;
};

struct CurveProfile {
    Integer degree;
    std::vector<CuspType> cusps;

    CurveProfile() = default;
    CurveProfile(Integer d, std::vector<CuspType> c) : degree(std::move(d)), cusps(std::move(c))
    {
        if (degree < 1) {
            throw InvalidInput("curve profile: degree must be positive");
        }
    }
};

struct GenusReport {
    bool ok = false;
    Integer arithmetic_genus; // (d-1)(d-2)/2
    Integer delta_sum;
};

inline GenusReport genus_check(const CurveProfile& cp)
{
    GenusReport r;
    r.arithmetic_genus = (cp.degree - 1) * (cp.degree - 2) / 2;
    for (const auto& c : cp.cusps) {
        r.delta_sum += c.delta();
    }
    r.ok = r.arithmetic_genus == r.delta_sum;
    return r;
}

/// Self-intersection of the strict transform under the minimal good
/// resolution: d^2 - sum of squared multiplicities - sum of last entries.
inline Integer cbar_squared(const CurveProfile& cp)
{
    Integer v = cp.degree * cp.degree;
    for (const auto& c : cp.cusps) {
        const auto& e = c.multseq.entries();
        for (const auto& m : e) {
            v -= m * m;
        }
        if (!e.empty()) {
            v -= e.back();
        }
    }
    return v;
}

// ---------------------------------------------------------------------------
// Text encodings

inline std::string to_string(const NewtonPairs& np)
{
    std::string s;
    for (const auto& pr : np.pairs()) {
        s += "(" + pr.p.str() + "," + pr.q.str() + ")";
    }
    return s.empty() ? "()" : s;
}

inline std::string to_string(const CharacteristicExponents& ce)
{
    std::string s = "(" + ce.a().str() + ";";
    for (std::size_t i = 0; i < ce.b().size(); ++i) {
        s += (i ? "," : "") + ce.b()[i].str();
    }
    return s + ")";
}

inline std::string to_string(const MultiplicitySequence& ms)
{
    std::string s = "[";
    for (std::size_t i = 0; i < ms.entries().size(); ++i) {
        s += (i ? "," : "") + ms.entries()[i].str();
    }
    return s + "]";
}

/// Display form with the n_k repetition shorthand, e.g. [4_2,2_3].
inline std::string to_short_string(const MultiplicitySequence& ms)
{
    const auto& e = ms.entries();
    std::string s = "[";
    for (std::size_t i = 0; i < e.size();) {
        std::size_t j = i;
        while (j < e.size() && e[j] == e[i]) {
            ++j;
        }
        s += (i ? "," : "") + e[i].str();
        if (j - i > 1) {
            s += "_" + std::to_string(j - i);
        }
        i = j;
    }
    return s + "]";
}

namespace detail {

class TextCursor {
public:
    explicit TextCursor(std::string_view text) : text_(text) {}

    void skip_ws()
    {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
    }

    bool at_end()
    {
        skip_ws();
        return pos_ >= text_.size();
    }

    bool peek(char c)
    {
        skip_ws();
        return pos_ < text_.size() && text_[pos_] == c;
    }

    bool accept(char c)
    {
        if (peek(c)) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c, std::string_view what)
    {
        if (!accept(c)) {
            fail(std::string("expected '") + c + "'", what);
        }
    }

    Integer integer(std::string_view what)
    {
        skip_ws();
        std::size_t start = pos_;
        if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+')) {
            ++pos_;
        }
        std::size_t digits = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
        if (pos_ == digits) {
            pos_ = start;
            fail("expected an integer", what);
        }
        return Integer(std::string(text_.substr(start, pos_ - start)));
    }

    [[noreturn]] void fail(const std::string& msg, std::string_view what) const
    {
        throw InvalidInput(std::string(what) + ": " + msg + " at offset " + std::to_string(pos_) + " in \""
                           + std::string(text_) + "\"");
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;
};

} // namespace detail

inline NewtonPairs parse_newton_pairs(std::string_view text)
{
    constexpr std::string_view what = "Newton pairs";
    detail::TextCursor c(text);
    std::vector<NewtonPair> pairs;
    while (!c.at_end()) {
        c.expect('(', what);
        Integer p = c.integer(what);
        c.expect(',', what);
        Integer q = c.integer(what);
        c.expect(')', what);
        pairs.push_back({p, q});
    }
    return NewtonPairs::validate(std::move(pairs));
}

inline CharacteristicExponents parse_characteristic_exponents(std::string_view text)
{
    constexpr std::string_view what = "characteristic exponents";
    detail::TextCursor c(text);
    c.expect('(', what);
    Integer a = c.integer(what);
    c.expect(';', what);
    std::vector<Integer> b;
    if (!c.peek(')')) {
        do {
            b.push_back(c.integer(what));
        } while (c.accept(','));
    }
    c.expect(')', what);
    if (!c.at_end()) {
        c.fail("trailing input", what);
    }
    return CharacteristicExponents::validate(a, std::move(b));
}

/// Expands (value, count) entries; count 0 yields nothing.
inline std::vector<Integer> expand_repetitions(const std::vector<std::pair<Integer, Integer>>& entries)
{
    std::vector<Integer> out;
    for (const auto& [value, count] : entries) {
        if (count < 0) {
            throw InvalidInput("multiplicity sequence: negative repetition count");
        }
        for (Integer i = 0; i < count; ++i) {
            out.push_back(value);
        }
    }
    return out;
}

/// Parses "[8,4,4,2,2]" or the shorthand "[4_2,2_3]"; 1-entries are dropped.
inline MultiplicitySequence parse_multseq(std::string_view text)
{
    constexpr std::string_view what = "multiplicity sequence";
    detail::TextCursor c(text);
    c.expect('[', what);
    std::vector<std::pair<Integer, Integer>> raw;
    if (!c.peek(']')) {
        do {
            Integer v = c.integer(what);
            Integer n = 1;
            if (c.accept('_')) {
                n = c.integer(what);
            }
            raw.emplace_back(v, n);
        } while (c.accept(','));
    }
    c.expect(']', what);
    if (!c.at_end()) {
        c.fail("trailing input", what);
    }
    return MultiplicitySequence::normalize(expand_repetitions(raw));
}

// ---------------------------------------------------------------------------
// JSON

/// Integers that fit in 64 bits become JSON numbers, larger ones strings.
inline nlohmann::json json_integer(const Integer& v)
{
    if (v >= Integer(INT64_MIN) && v <= Integer(INT64_MAX)) {
        return v.convert_to<std::int64_t>();
    }
    return v.str();
}

inline nlohmann::json to_json(const MultiplicitySequence& ms)
{
    auto arr = nlohmann::json::array();
    for (const auto& e : ms.entries()) {
        arr.push_back(json_integer(e));
    }
    return arr;
}

inline nlohmann::json to_json(const NewtonPairs& np)
{
    auto arr = nlohmann::json::array();
    for (const auto& pr : np.pairs()) {
        arr.push_back({json_integer(pr.p), json_integer(pr.q)});
    }
    return arr;
}

inline nlohmann::json to_json(const CharacteristicExponents& ce)
{
    auto b = nlohmann::json::array();
    for (const auto& e : ce.b()) {
        b.push_back(json_integer(e));
    }
    return {{"a", json_integer(ce.a())}, {"b", b}};
}

inline nlohmann::json to_json(const CuspType& c)
{
    return {{"newton", to_json(c.newton)},
            {"char", to_json(c.chars)},
            {"multseq", to_json(c.multseq)},
            {"delta", json_integer(c.delta())}};
}

} // namespace cuspforge
