#pragma once

// Test-side reference computations, written against plain machine integers
// and independent of the library's conversion code.

#include <cuspforge/cuspforge.hpp>

#include <algorithm>
#include <map>
#include <string>
#include <numeric>
#include <random>
#include <vector>

namespace oracle {

struct Chars {
    long a = 1;
    std::vector<long> b;
};

inline Chars to_chars(const cuspforge::CharacteristicExponents& ce)
{
    Chars c;
    c.a = ce.a().convert_to<long>();
    for (const auto& v : ce.b()) {
        c.b.push_back(v.convert_to<long>());
    }
    return c;
}

inline cuspforge::CharacteristicExponents from_chars(const Chars& c)
{
    std::vector<cuspforge::Integer> b(c.b.begin(), c.b.end());
    return cuspforge::CharacteristicExponents::validate(c.a, b);
}

inline std::vector<long> entries(const cuspforge::MultiplicitySequence& ms)
{
    std::vector<long> out;
    for (const auto& e : ms.entries()) {
        out.push_back(e.convert_to<long>());
    }
    return out;
}

// Exponents of y = x^{q1/p1} (1 + x^{q2/(p1 p2)} (1 + ...)) written in t with
// x = t^a; the characteristic ones are those that lower the running gcd.
inline Chars nested_expansion(const std::vector<std::pair<long, long>>& pairs)
{
    long a = 1;
    for (auto [p, q] : pairs) {
        a *= p;
    }
    Chars c;
    c.a = a;
    long num = 0; // exponent of x as num / den
    long den = 1;
    long g = a;
    for (auto [p, q] : pairs) {
        den *= p;
        num = num * p + q;
        long t_exp = num * (a / den);
        long ng = std::gcd(g, t_exp);
        if (ng < g) {
            c.b.push_back(t_exp);
            g = ng;
        }
    }
    return c;
}

// Multiplicity sequence by the Euclidean algorithm on consecutive
// characteristic differences.
inline std::vector<long> euclid_multseq(const Chars& c)
{
    std::vector<long> out;
    long e = c.a;
    long prev = 0;
    for (long bi : c.b) {
        long x = bi - prev;
        long y = e;
        while (y > 0) {
            for (long k = 0; k < x / y; ++k) {
                if (y > 1) {
                    out.push_back(y);
                }
            }
            long r = x % y;
            x = y;
            y = r;
        }
        e = x;
        prev = bi;
    }
    return out;
}

// Delta invariant as the number of gaps of the value semigroup, generated by
// a, b1 and bbar_{i+1} = n_i bbar_i - b_i + b_{i+1}.
inline long semigroup_delta(const Chars& c)
{
    if (c.b.empty()) {
        return 0;
    }
    std::vector<long> gens{c.a, c.b[0]};
    long e = std::gcd(c.a, c.b[0]);
    long prev_e = c.a;
    long bbar = c.b[0];
    for (std::size_t i = 1; i < c.b.size(); ++i) {
        long n = prev_e / e;
        bbar = n * bbar - c.b[i - 1] + c.b[i];
        gens.push_back(bbar);
        prev_e = e;
        e = std::gcd(e, c.b[i]);
    }
    long bound = 1;
    for (long g : gens) {
        bound += g;
    }
    bound *= c.a + 1;
    std::vector<char> in(static_cast<std::size_t>(bound), 0);
    in[0] = 1;
    for (long v = 1; v < bound; ++v) {
        for (long g : gens) {
            if (v >= g && in[static_cast<std::size_t>(v - g)]) {
                in[static_cast<std::size_t>(v)] = 1;
                break;
            }
        }
    }
    return std::count(in.begin(), in.end(), 0);
}

inline long delta_of(const std::vector<long>& ms)
{
    long d = 0;
    for (long m : ms) {
        d += m * (m - 1) / 2;
    }
    return d;
}

// Random valid characteristic exponents with a in [2, amax].
inline Chars random_chars(std::mt19937_64& rng, long amax)
{
    std::uniform_int_distribution<long> pick_a(2, amax);
    std::uniform_int_distribution<long> step(1, 2 * amax);
    Chars c;
    c.a = pick_a(rng);
    long g = c.a;
    long prev = c.a;
    while (g > 1) {
        long b = prev + step(rng);
        while (std::gcd(g, b) == g) {
            ++b;
        }
        c.b.push_back(b);
        g = std::gcd(g, b);
        prev = b;
    }
    return c;
}

// -- surface engine ----------------------------------------------------------

inline cuspforge::Integer mult_of(const cuspforge::MultiplicitySequence& ms)
{
    return ms.empty() ? cuspforge::Integer(1) : ms.entries().front();
}

// Residual and exceptional-divisor laws for `after = blow_up(before, p, e)`,
// re-derived from the raw point data.
inline std::vector<std::string> blowup_law_violations(const cuspforge::Configuration& before, const std::string& p,
                                                      const std::string& e, const cuspforge::Configuration& after)
{
    using cuspforge::Integer;
    std::vector<std::string> bad;
    const auto& old = before.point(p);
    if (after.self_int(e) != -1) {
        bad.push_back("new divisor " + e + " has self-intersection " + after.self_int(e).str());
    }
    if (after.has_point(p)) {
        bad.push_back("blown-up point " + p + " still present");
    }
    std::map<std::string, std::string> home;
    for (const auto& [name, pt] : after.points()) {
        if (!pt.has(e)) {
            continue;
        }
        for (const auto& [owner, ms] : pt.germs) {
            if (owner != e) {
                home[owner] = name;
            }
        }
    }
    for (const auto& [owner, ms] : old.germs) {
        Integer m = mult_of(ms);
        if (!home.count(owner)) {
            bad.push_back(owner + " does not meet " + e);
            continue;
        }
        const auto& np = after.point(home[owner]);
        if (np.meet(owner, e) != m) {
            bad.push_back("(" + owner + "." + e + ") = " + np.meet(owner, e).str() + ", expected " + m.str());
        }
        if (after.self_int(owner) != before.self_int(owner) - m * m) {
            bad.push_back("self-intersection of " + owner + " did not drop by " + Integer(m * m).str());
        }
        if (before.is_tracked(owner)) {
            auto expect = ms.tail();
            if (np.germs.at(owner) != expect) {
                bad.push_back("tracked germ did not lose its first multiplicity");
            }
        }
    }
    for (auto a = old.germs.begin(); a != old.germs.end(); ++a) {
        for (auto b = std::next(a); b != old.germs.end(); ++b) {
            Integer residual = old.meet(a->first, b->first) - mult_of(a->second) * mult_of(b->second);
            if (residual < 0) {
                bad.push_back("negative residual for " + a->first + "," + b->first);
            }
            if (!home.count(a->first) || !home.count(b->first)) {
                continue;
            }
            bool together = home[a->first] == home[b->first];
            Integer now = together ? after.point(home[a->first]).meet(a->first, b->first) : Integer(0);
            if (now != residual) {
                bad.push_back("(" + a->first + "." + b->first + ") after blow-up is " + now.str() + ", expected "
                              + residual.str());
            }
            if (together != (residual > 0)) {
                bad.push_back(a->first + "," + b->first + " placed wrongly on " + e);
            }
        }
    }
    return bad;
}

// Bezout in the plane: for every pair of curves the local intersections add
// up to the product of degrees. Returns nothing outside the plane.
inline std::vector<std::string> bezout_violations(const cuspforge::Configuration& cfg)
{
    using cuspforge::Integer;
    std::vector<std::string> bad;
    if (!cfg.is_projective_plane()) {
        return bad;
    }
    auto owners = cfg.owners();
    std::map<std::string, Integer> deg;
    for (const auto& o : owners) {
        Integer s = cfg.self_int(o);
        if (s <= 0 || boost::multiprecision::sqrt(s) * boost::multiprecision::sqrt(s) != s) {
            bad.push_back(o + " has no plane degree");
            return bad;
        }
        deg[o] = boost::multiprecision::sqrt(s);
    }
    for (std::size_t i = 0; i < owners.size(); ++i) {
        for (std::size_t j = i + 1; j < owners.size(); ++j) {
            Integer sum = 0;
            for (const auto& [name, pt] : cfg.points()) {
                if (pt.has(owners[i]) && pt.has(owners[j])) {
                    sum += pt.meet(owners[i], owners[j]);
                }
            }
            if (sum != deg[owners[i]] * deg[owners[j]]) {
                bad.push_back(owners[i] + "." + owners[j] + " = " + sum.str());
            }
        }
    }
    return bad;
}

// (C^2 + K.C)/2 + 1 - sum of deltas, computed from scratch.
inline cuspforge::Integer ledger(const cuspforge::Configuration& cfg)
{
    const auto& t = *cfg.tracked();
    cuspforge::Integer v = (t.self_int + t.k_dot) / 2 + 1;
    for (const auto& [name, pt] : cfg.points()) {
        auto it = pt.germs.find(t.name);
        if (it != pt.germs.end()) {
            v -= delta_of(entries(it->second));
        }
    }
    return v;
}

// A configuration off the plane with random germs and tangency data that
// is consistent (residual classes are transitive) and has ledger 0.
inline cuspforge::Configuration random_configuration(std::mt19937_64& rng)
{
    using namespace cuspforge;
    std::uniform_int_distribution<int> small(0, 1000);
    Configuration cfg;
    int ndiv = 2 + small(rng) % 4;
    std::vector<std::string> divs;
    for (int i = 0; i < ndiv; ++i) {
        divs.push_back("D" + std::to_string(i));
        cfg.add_divisor(divs.back(), -(small(rng) % 5));
    }
    std::vector<std::pair<std::string, std::map<std::string, MultiplicitySequence>>> pts;
    std::vector<std::map<OwnerPair, Integer>> meets;
    Integer delta = 0;
    int npts = 1 + small(rng) % 4;
    bool tracked_used = false;
    for (int i = 0; i < npts; ++i) {
        std::map<std::string, MultiplicitySequence> germs;
        if (!tracked_used && small(rng) % 3 != 0) {
            tracked_used = true;
            MultiplicitySequence m;
            if (small(rng) % 4 != 0) {
                m = char_to_multseq(from_chars(random_chars(rng, 6)));
            }
            germs["C"] = m;
            delta += multseq_delta(m);
        }
        for (const auto& d : divs) {
            if (small(rng) % 3 == 0) {
                germs[d] = MultiplicitySequence();
            }
        }
        // tangent classes: each germ picks one of two directions
        std::map<std::string, int> cls;
        for (const auto& [o, m] : germs) {
            cls[o] = small(rng) % 2;
        }
        std::map<OwnerPair, Integer> mt;
        for (auto a = germs.begin(); a != germs.end(); ++a) {
            for (auto b = std::next(a); b != germs.end(); ++b) {
                Integer prod = a->second.multiplicity() * b->second.multiplicity();
                Integer extra = 0;
                if (cls[a->first] == cls[b->first]) {
                    Integer next = std::max(a->second.tail().multiplicity(), b->second.tail().multiplicity());
                    extra = next + small(rng) % 3;
                    // two smooth divisors only meet transversally
                    if (a->first != "C" && b->first != "C") {
                        extra = 0;
                    }
                }
                mt[owner_pair(a->first, b->first)] = prod + extra;
            }
        }
        // keep tangency classes transitive once divisors are forced transverse
        bool consistent = true;
        for (const auto& [x, cx] : cls) {
            for (const auto& [y, cy] : cls) {
                for (const auto& [z, cz] : cls) {
                    if (x == y || y == z || x == z) {
                        continue;
                    }
                    auto r = [&](const std::string& u, const std::string& v) {
                        return mt[owner_pair(u, v)]
                               - germs[u].multiplicity() * germs[v].multiplicity() > 0;
                    };
                    if (r(x, y) && r(y, z) && !r(x, z)) {
                        consistent = false;
                    }
                }
            }
        }
        if (!consistent) {
            for (auto& [key, v] : mt) {
                if (key.first != "C" && key.second != "C") {
                    continue;
                }
                v = germs[key.first].multiplicity() * germs[key.second].multiplicity();
            }
        }
        pts.emplace_back("p" + std::to_string(i), germs);
        meets.push_back(mt);
    }
    Integer self = small(rng) % 20 - 5;
    cfg.set_tracked("C", self, 2 * delta - 2 - self);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        cfg.add_point(pts[i].first, pts[i].second, meets[i]);
    }
    return cfg;
}

} // namespace oracle
