#pragma once

// Combinatorial model of a blown-up projective plane: smooth rational
// divisors, one tracked cuspidal curve, and points carrying germs with
// pairwise local intersection multiplicities.

#include "cuspforge/invariants.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace cuspforge {

struct DivisorRecord {
    std::string name;
    Integer self_int;
    /// Point whose blow-up created this divisor.
    std::optional<std::string> origin;

    friend bool operator==(const DivisorRecord&, const DivisorRecord&) = default;
};

struct TrackedCurve {
    std::string name;
    Integer self_int;
    Integer k_dot;

    friend bool operator==(const TrackedCurve&, const TrackedCurve&) = default;
};

using OwnerPair = std::pair<std::string, std::string>;

inline OwnerPair owner_pair(const std::string& a, const std::string& b)
{
    return a < b ? OwnerPair{a, b} : OwnerPair{b, a};
}

struct PointRecord {
    std::string name;
    /// owner -> multiplicity sequence of its germ (empty when smooth)
    std::map<std::string, MultiplicitySequence> germs;
    std::map<OwnerPair, Integer> pairmult;

    Integer multiplicity(const std::string& owner) const { return germs.at(owner).multiplicity(); }

    bool has(const std::string& owner) const { return germs.count(owner) > 0; }

    Integer meet(const std::string& a, const std::string& b) const
    {
        auto it = pairmult.find(owner_pair(a, b));
        return it == pairmult.end() ? Integer(0) : it->second;
    }

    friend bool operator==(const PointRecord&, const PointRecord&) = default;
};

struct ValidationReport {
    std::vector<std::string> issues;
    bool projective_plane = false;
    bool bezout_checked = false;
    std::optional<Integer> ledger;

    bool ok() const { return issues.empty(); }
};

class Configuration {
public:
    Configuration() = default;

    // -- construction ------------------------------------------------------

    /// Declares the ambient surface to be the projective plane.
    void set_projective_plane() { excess_ = 0; }

    void add_divisor(const std::string& name, const Integer& self_int)
    {
        require_fresh_owner(name);
        divisors_.push_back({name, self_int, std::nullopt});
    }

    void set_tracked(const std::string& name, const Integer& self_int, const Integer& k_dot)
    {
        if (tracked_) {
            throw SurfaceError("configuration already has a tracked curve '" + tracked_->name + "'");
        }
        require_fresh_owner(name);
        tracked_ = TrackedCurve{name, self_int, k_dot};
    }

    /// Adds a point; pairs of germs without an explicit multiplicity meet
    /// with the product of their multiplicities.
    void add_point(const std::string& name, std::map<std::string, MultiplicitySequence> germs,
                   const std::map<OwnerPair, Integer>& meets = {})
    {
        if (points_.count(name)) {
            throw SurfaceError("duplicate point '" + name + "'");
        }
        PointRecord pt{name, std::move(germs), {}};
        for (const auto& [owner, ms] : pt.germs) {
            if (!has_owner(owner)) {
                throw SurfaceError("point '" + name + "' refers to unknown curve '" + owner + "'");
            }
            if (!is_tracked(owner) && !ms.empty()) {
                throw SurfaceError("divisor '" + owner + "' must be smooth at '" + name + "'");
            }
        }
        for (const auto& [key, value] : meets) {
            if (key.first == key.second || !pt.has(key.first) || !pt.has(key.second)) {
                throw SurfaceError("point '" + name + "': meet (" + key.first + "," + key.second
                                   + ") needs two distinct germs of the point");
            }
            pt.pairmult[owner_pair(key.first, key.second)] = value;
        }
        for (auto a = pt.germs.begin(); a != pt.germs.end(); ++a) {
            for (auto b = std::next(a); b != pt.germs.end(); ++b) {
                auto key = owner_pair(a->first, b->first);
                if (!pt.pairmult.count(key)) {
                    pt.pairmult[key] = a->second.multiplicity() * b->second.multiplicity();
                }
            }
        }
        points_.emplace(name, std::move(pt));
    }

    // -- queries -----------------------------------------------------------

    const std::vector<DivisorRecord>& divisors() const { return divisors_; }
    const std::optional<TrackedCurve>& tracked() const { return tracked_; }
    const std::map<std::string, PointRecord>& points() const { return points_; }

    /// Number of blow-ups minus blow-downs since the projective plane, if known.
    std::optional<int> excess() const { return excess_; }
    bool is_projective_plane() const { return excess_ == 0; }

    bool has_owner(const std::string& name) const { return is_tracked(name) || find_divisor(name) != nullptr; }
    bool is_tracked(const std::string& name) const { return tracked_ && tracked_->name == name; }

    const DivisorRecord* find_divisor(const std::string& name) const
    {
        for (const auto& d : divisors_) {
            if (d.name == name) {
                return &d;
            }
        }
        return nullptr;
    }

    const PointRecord& point(const std::string& name) const
    {
        auto it = points_.find(name);
        if (it == points_.end()) {
            throw SurfaceError("unknown point '" + name + "'");
        }
        return it->second;
    }

    bool has_point(const std::string& name) const { return points_.count(name) > 0; }

    Integer self_int(const std::string& owner) const
    {
        if (is_tracked(owner)) {
            return tracked_->self_int;
        }
        if (const auto* d = find_divisor(owner)) {
            return d->self_int;
        }
        throw SurfaceError("unknown curve '" + owner + "'");
    }

    /// Owners in rank order: tracked curve first, then divisors by creation.
    std::vector<std::string> owners() const
    {
        std::vector<std::string> out;
        if (tracked_) {
            out.push_back(tracked_->name);
        }
        for (const auto& d : divisors_) {
            out.push_back(d.name);
        }
        return out;
    }

    int owner_rank(const std::string& owner) const
    {
        auto all = owners();
        auto it = std::find(all.begin(), all.end(), owner);
        if (it == all.end()) {
            throw SurfaceError("unknown curve '" + owner + "'");
        }
        return static_cast<int>(it - all.begin());
    }

    /// Names of the points where both curves have a germ.
    std::vector<std::string> common_points(const std::string& a, const std::string& b) const
    {
        std::vector<std::string> out;
        for (const auto& [name, pt] : points_) {
            if (pt.has(a) && pt.has(b)) {
                out.push_back(name);
            }
        }
        return out;
    }

    /// Total recorded intersection of two distinct curves.
    Integer intersection(const std::string& a, const std::string& b) const
    {
        Integer sum = 0;
        for (const auto& name : common_points(a, b)) {
            sum += points_.at(name).meet(a, b);
        }
        return sum;
    }

    /// Degree in the plane (square root of the self-intersection).
    std::optional<Integer> plane_degree(const std::string& owner) const
    {
        if (!is_projective_plane()) {
            return std::nullopt;
        }
        return exact_sqrt(self_int(owner));
    }

    /// Tracked germs with a nonempty multiplicity sequence, by point name.
    std::vector<std::pair<std::string, MultiplicitySequence>> tracked_cusps() const
    {
        std::vector<std::pair<std::string, MultiplicitySequence>> out;
        if (!tracked_) {
            return out;
        }
        for (const auto& [name, pt] : points_) {
            auto it = pt.germs.find(tracked_->name);
            if (it != pt.germs.end() && !it->second.empty()) {
                out.emplace_back(name, it->second);
            }
        }
        return out;
    }

    /// (self + k_dot)/2 + 1 - sum of deltas: the geometric genus of the tracked curve.
    std::optional<Integer> adjunction_ledger() const
    {
        if (!tracked_) {
            return std::nullopt;
        }
        Integer delta = 0;
        for (const auto& [name, ms] : tracked_cusps()) {
            delta += multseq_delta(ms);
        }
        Integer twice = tracked_->self_int + tracked_->k_dot;
        if (twice % 2 != 0) {
            throw SurfaceError("tracked curve has odd C^2 + K.C");
        }
        return twice / 2 + 1 - delta;
    }

    // -- mutation (used by the free operations below) -----------------------

    void rename_point(const std::string& from, const std::string& to)
    {
        if (from == to) {
            return;
        }
        if (points_.count(to)) {
            throw SurfaceError("point name '" + to + "' is already in use");
        }
        auto node = points_.extract(from);
        if (node.empty()) {
            throw SurfaceError("unknown point '" + from + "'");
        }
        node.key() = to;
        node.mapped().name = to;
        points_.insert(std::move(node));
    }

    friend bool operator==(const Configuration&, const Configuration&) = default;

private:
    friend Configuration blow_up(const Configuration&, const std::string&, const std::string&);
    friend Configuration blow_down(const Configuration&, const std::string&);

    void require_fresh_owner(const std::string& name) const
    {
        if (name.empty()) {
            throw SurfaceError("empty curve name");
        }
        if (has_owner(name)) {
            throw SurfaceError("duplicate curve name '" + name + "'");
        }
    }

    DivisorRecord& divisor_ref(const std::string& name)
    {
        for (auto& d : divisors_) {
            if (d.name == name) {
                return d;
            }
        }
        throw SurfaceError("unknown divisor '" + name + "'");
    }

    void add_self(const std::string& owner, const Integer& delta)
    {
        if (is_tracked(owner)) {
            tracked_->self_int += delta;
        } else {
            divisor_ref(owner).self_int += delta;
        }
    }

    std::vector<DivisorRecord> divisors_;
    std::optional<TrackedCurve> tracked_;
    std::map<std::string, PointRecord> points_;
    std::optional<int> excess_;
};

/// Blows up point `p`, creating the exceptional divisor `e`. New points on
/// `e` are named "<e>@1", "<e>@2", ... by the lowest-ranked owner they carry.
inline Configuration blow_up(const Configuration& cfg, const std::string& p, const std::string& e)
{
    const PointRecord& pt = cfg.point(p);
    if (cfg.has_owner(e)) {
        throw SurfaceError("blowup " + p + " -> " + e + ": curve name '" + e + "' already in use");
    }
    Configuration out = cfg;
    out.points_.erase(p);
    out.divisors_.push_back({e, Integer(-1), p});
    std::map<std::string, Integer> mult;
    for (const auto& [owner, ms] : pt.germs) {
        Integer m = ms.multiplicity();
        mult[owner] = m;
        out.add_self(owner, -m * m);
        if (out.is_tracked(owner)) {
            out.tracked_->k_dot += m;
        }
    }
    std::map<OwnerPair, Integer> residual;
    for (const auto& [key, value] : pt.pairmult) {
        Integer r = value - mult.at(key.first) * mult.at(key.second);
        if (r < 0) {
            throw SurfaceError("blowup " + p + ": (" + key.first + "." + key.second + ") = " + value.str()
                               + " is below the product of multiplicities");
        }
        residual[key] = r;
    }
    // group germs that still meet after the blow-up
    std::vector<std::string> order;
    for (const auto& [owner, ms] : pt.germs) {
        order.push_back(owner);
    }
    std::sort(order.begin(), order.end(),
              [&](const std::string& a, const std::string& b) { return cfg.owner_rank(a) < cfg.owner_rank(b); });
    std::vector<std::vector<std::string>> groups;
    std::set<std::string> placed;
    for (const auto& owner : order) {
        if (placed.count(owner)) {
            continue;
        }
        std::vector<std::string> group{owner};
        placed.insert(owner);
        for (const auto& other : order) {
            if (!placed.count(other) && residual.at(owner_pair(owner, other)) > 0) {
                group.push_back(other);
                placed.insert(other);
            }
        }
        for (std::size_t i = 0; i < group.size(); ++i) {
            for (std::size_t j = i + 1; j < group.size(); ++j) {
                if (residual.at(owner_pair(group[i], group[j])) == 0) {
                    throw SurfaceError("blowup " + p + ": tangency data is not transitive (" + owner + " meets "
                                       + group[i] + " and " + group[j] + ", which separate)");
                }
            }
            for (const auto& rest : order) {
                if (!placed.count(rest) && residual.at(owner_pair(group[i], rest)) > 0) {
                    throw SurfaceError("blowup " + p + ": tangency data is not transitive (" + group[i]
                                       + " meets " + rest + ", which is separated from " + owner + ")");
                }
            }
        }
        groups.push_back(std::move(group));
    }
    int index = 0;
    for (const auto& group : groups) {
        PointRecord np;
        np.name = e + "@" + std::to_string(++index);
        if (out.points_.count(np.name)) {
            throw SurfaceError("blowup " + p + ": point name '" + np.name + "' already in use");
        }
        np.germs[e] = MultiplicitySequence();
        for (const auto& owner : group) {
            np.germs[owner] = pt.germs.at(owner).tail();
            np.pairmult[owner_pair(owner, e)] = mult.at(owner);
            for (const auto& other : group) {
                if (owner < other) {
                    np.pairmult[owner_pair(owner, other)] = residual.at(owner_pair(owner, other));
                }
            }
        }
        out.points_.emplace(np.name, std::move(np));
    }
    if (out.excess_) {
        ++*out.excess_;
    }
    return out;
}

/// Contracts the (-1)-divisor `e` to a point.
inline Configuration blow_down(const Configuration& cfg, const std::string& e)
{
    const DivisorRecord* div = cfg.find_divisor(e);
    if (div == nullptr) {
        throw SurfaceError("blowdown " + e + ": not a divisor");
    }
    if (div->self_int != -1) {
        throw SurfaceError("blowdown " + e + ": self-intersection is " + div->self_int.str() + ", not -1");
    }
    std::vector<std::string> on_e;
    std::map<std::string, std::string> where; // owner -> point on e
    std::map<std::string, Integer> dot;       // owner -> (X.e)
    for (const auto& [name, pt] : cfg.points()) {
        if (!pt.has(e)) {
            continue;
        }
        on_e.push_back(name);
        for (const auto& [owner, ms] : pt.germs) {
            if (owner == e) {
                continue;
            }
            if (where.count(owner)) {
                throw SurfaceError("blowdown " + e + ": " + owner + " meets it at both " + where[owner] + " and "
                                   + name + " (the contraction would create a node)");
            }
            where[owner] = name;
            dot[owner] = pt.meet(owner, e);
        }
    }
    Configuration out = cfg;
    PointRecord image;
    for (const auto& [owner, x] : dot) {
        const auto& ms = cfg.point(where[owner]).germs.at(owner);
        if (!cfg.is_tracked(owner)) {
            if (x > 1) {
                throw SurfaceError("blowdown " + e + ": divisor " + owner + " meets it with multiplicity " + x.str()
                                   + " and would become singular");
            }
            image.germs[owner] = MultiplicitySequence();
        } else if (x >= 2) {
            if (!ms.empty() && x < ms.multiplicity()) {
                throw SurfaceError("blowdown " + e + ": (" + owner + "." + e + ") = " + x.str()
                                   + " is below the next multiplicity " + ms.multiplicity().str());
            }
            image.germs[owner] = ms.prepend(x);
        } else {
            if (!ms.empty()) {
                throw SurfaceError("blowdown " + e + ": " + owner + " meets it transversally at a singular point");
            }
            image.germs[owner] = ms;
        }
        out.add_self(owner, x * x);
        if (out.is_tracked(owner)) {
            out.tracked_->k_dot -= x;
        }
    }
    for (auto a = dot.begin(); a != dot.end(); ++a) {
        for (auto b = std::next(a); b != dot.end(); ++b) {
            Integer pm = a->second * b->second;
            if (where[a->first] == where[b->first]) {
                pm += cfg.point(where[a->first]).meet(a->first, b->first);
            }
            image.pairmult[owner_pair(a->first, b->first)] = pm;
        }
    }
    for (const auto& name : on_e) {
        out.points_.erase(name);
    }
    out.divisors_.erase(std::find_if(out.divisors_.begin(), out.divisors_.end(),
                                     [&](const DivisorRecord& d) { return d.name == e; }));
    bool keep = false;
    if (div->origin && !out.points_.count(*div->origin)) {
        image.name = *div->origin;
        keep = true;
    } else {
        image.name = e;
        if (out.points_.count(e)) {
            throw SurfaceError("blowdown " + e + ": point name '" + e + "' already in use");
        }
        bool singular = false;
        for (const auto& [owner, ms] : image.germs) {
            singular = singular || !ms.empty();
        }
        keep = image.germs.size() >= 2 || singular;
    }
    if (keep) {
        out.points_.emplace(image.name, std::move(image));
    }
    if (out.excess_) {
        --*out.excess_;
    }
    return out;
}

/// Checks the structural invariants, Bezout in the plane and the adjunction ledger.
inline ValidationReport validate_configuration(const Configuration& cfg)
{
    ValidationReport r;
    r.projective_plane = cfg.is_projective_plane();
    std::set<std::string> names;
    for (const auto& owner : cfg.owners()) {
        if (!names.insert(owner).second) {
            r.issues.push_back("duplicate curve name '" + owner + "'");
        }
    }
    for (const auto& [name, pt] : cfg.points()) {
        for (const auto& [owner, ms] : pt.germs) {
            if (!cfg.has_owner(owner)) {
                r.issues.push_back("point " + name + ": unknown curve '" + owner + "'");
            } else if (!cfg.is_tracked(owner) && !ms.empty()) {
                r.issues.push_back("point " + name + ": divisor " + owner + " is singular");
            }
        }
        for (auto a = pt.germs.begin(); a != pt.germs.end(); ++a) {
            for (auto b = std::next(a); b != pt.germs.end(); ++b) {
                auto it = pt.pairmult.find(owner_pair(a->first, b->first));
                Integer need = a->second.multiplicity() * b->second.multiplicity();
                if (it == pt.pairmult.end()) {
                    r.issues.push_back("point " + name + ": missing (" + a->first + "." + b->first + ")");
                } else if (it->second < need) {
                    r.issues.push_back("point " + name + ": (" + a->first + "." + b->first + ") = " + it->second.str()
                                       + " < " + need.str() + " = product of multiplicities");
                }
            }
        }
        for (const auto& [key, value] : pt.pairmult) {
            if (!pt.has(key.first) || !pt.has(key.second)) {
                r.issues.push_back("point " + name + ": multiplicity recorded for absent germ");
            }
        }
    }
    if (r.projective_plane) {
        r.bezout_checked = true;
        auto owners = cfg.owners();
        std::map<std::string, Integer> deg;
        for (const auto& owner : owners) {
            auto d = cfg.plane_degree(owner);
            if (!d || *d == 0) {
                r.issues.push_back("plane curve " + owner + " has self-intersection " + cfg.self_int(owner).str()
                                   + ", not a positive square");
                r.bezout_checked = false;
            } else {
                deg[owner] = *d;
            }
        }
        if (cfg.tracked() && deg.count(cfg.tracked()->name)) {
            const auto& t = *cfg.tracked();
            if (t.k_dot != -3 * deg[t.name]) {
                r.issues.push_back("tracked curve " + t.name + ": K.C = " + t.k_dot.str() + ", expected "
                                   + Integer(-3 * deg[t.name]).str());
            }
        }
        for (std::size_t i = 0; i < owners.size(); ++i) {
            for (std::size_t j = i + 1; j < owners.size(); ++j) {
                const auto& a = owners[i];
                const auto& b = owners[j];
                if (!deg.count(a) || !deg.count(b)) {
                    continue;
                }
                Integer sum = cfg.intersection(a, b);
                if (sum != deg[a] * deg[b]) {
                    r.issues.push_back("Bezout fails for " + a + ", " + b + ": recorded " + sum.str() + ", expected "
                                       + Integer(deg[a] * deg[b]).str());
                }
            }
        }
    }
    try {
        r.ledger = cfg.adjunction_ledger();
        if (r.ledger && *r.ledger != 0) {
            r.issues.push_back("adjunction ledger is " + r.ledger->str() + ", expected 0");
        }
    } catch (const SurfaceError& err) {
        r.issues.push_back(err.what());
    }
    return r;
}

/// The tracked curve as a plane curve once every blow-up has been undone.
inline CurveProfile finalize(const Configuration& cfg)
{
    if (!cfg.is_projective_plane()) {
        throw SurfaceError("finalize: the surface is not the projective plane (blow-up excess "
                           + (cfg.excess() ? std::to_string(*cfg.excess()) : std::string("unknown")) + ")");
    }
    if (!cfg.tracked()) {
        throw SurfaceError("finalize: no tracked curve");
    }
    const auto& t = *cfg.tracked();
    auto d = exact_sqrt(t.self_int);
    if (!d || *d == 0) {
        throw SurfaceError("finalize: C^2 = " + t.self_int.str() + " is not a positive square");
    }
    if (t.k_dot != -3 * *d) {
        throw SurfaceError("finalize: K.C = " + t.k_dot.str() + " does not match degree " + d->str());
    }
    std::vector<CuspType> cusps;
    for (const auto& [name, ms] : cfg.tracked_cusps()) {
        cusps.push_back(CuspType::from_multseq(ms));
    }
    CurveProfile profile(*d, std::move(cusps));
    auto g = genus_check(profile);
    if (!g.ok) {
        throw SurfaceError("finalize: genus check fails: (d-1)(d-2)/2 = " + g.arithmetic_genus.str()
                           + " but the deltas sum to " + g.delta_sum.str());
    }
    return profile;
}

namespace detail {

inline std::string dot_quote(const std::string& s)
{
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') {
            out += '\\';
        }
        out += c;
    }
    return out + "\"";
}

} // namespace detail

/// Dual graph: nodes are curves labeled by self-intersection, edges are
/// shared points labeled by local intersection multiplicity.
inline std::string to_dot(const Configuration& cfg)
{
    std::string s = "graph configuration {\n";
    for (const auto& owner : cfg.owners()) {
        std::string label = owner + " (" + cfg.self_int(owner).str() + ")";
        s += "  " + detail::dot_quote(owner) + " [label=" + detail::dot_quote(label)
             + (cfg.is_tracked(owner) ? ", shape=box" : "") + "];\n";
    }
    for (const auto& [name, pt] : cfg.points()) {
        for (const auto& [key, value] : pt.pairmult) {
            std::string label = value.str() + " @" + name;
            s += "  " + detail::dot_quote(key.first) + " -- " + detail::dot_quote(key.second)
                 + " [label=" + detail::dot_quote(label) + "];\n";
        }
    }
    return s + "}\n";
}

inline nlohmann::json to_json(const Configuration& cfg)
{
    nlohmann::json j;
    j["ambient"] = cfg.is_projective_plane() ? "p2" : "blown-up";
    j["excess"] = cfg.excess() ? nlohmann::json(*cfg.excess()) : nlohmann::json(nullptr);
    if (cfg.tracked()) {
        const auto& t = *cfg.tracked();
        j["tracked"] = {{"name", t.name}, {"selfint", json_integer(t.self_int)}, {"kdot", json_integer(t.k_dot)}};
    } else {
        j["tracked"] = nullptr;
    }
    j["divisors"] = nlohmann::json::array();
    for (const auto& d : cfg.divisors()) {
        nlohmann::json dj = {{"name", d.name}, {"selfint", json_integer(d.self_int)}};
        dj["origin"] = d.origin ? nlohmann::json(*d.origin) : nlohmann::json(nullptr);
        j["divisors"].push_back(std::move(dj));
    }
    j["points"] = nlohmann::json::array();
    for (const auto& [name, pt] : cfg.points()) {
        nlohmann::json pj;
        pj["name"] = name;
        pj["germs"] = nlohmann::json::object();
        for (const auto& [owner, ms] : pt.germs) {
            pj["germs"][owner] = to_json(ms);
        }
        pj["meets"] = nlohmann::json::array();
        for (const auto& [key, value] : pt.pairmult) {
            pj["meets"].push_back({key.first, key.second, json_integer(value)});
        }
        j["points"].push_back(std::move(pj));
    }
    if (auto ledger = cfg.tracked() ? cfg.adjunction_ledger() : std::nullopt) {
        j["ledger"] = json_integer(*ledger);
    }
    return j;
}

} // namespace cuspforge
