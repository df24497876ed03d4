#pragma once

#include "afr/linear_system.hpp"
#include "afr/rational.hpp"

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace afr {

struct ModelError : std::runtime_error {
    explicit ModelError(const std::string& what, int interval = 0)
        : std::runtime_error(what), t(interval) {}
    int t;
};

// One storage-like resource: per-interval power and energy bounds over a
// horizon of T intervals. Interval-length dt is folded into the power bounds
// at ingestion and never appears here. Energy bounds are normalized so that
// e(0) = 0; the original initial energy is kept as e0_shift for reporting.
struct FlexResource {
    std::string id;
    int T = 0;
    std::vector<Rat> p_lo, p_hi;  // index t-1 holds interval t
    std::vector<Rat> e_lo, e_hi;
    Rat e0_shift;

    FlexResource() = default;
    FlexResource(std::string rid, std::vector<Rat> plo, std::vector<Rat> phi,
                 std::vector<Rat> elo, std::vector<Rat> ehi, Rat e0 = Rat(0))
        : id(std::move(rid)), T(static_cast<int>(plo.size())),
          p_lo(std::move(plo)), p_hi(std::move(phi)),
          e_lo(std::move(elo)), e_hi(std::move(ehi)), e0_shift(std::move(e0)) {
        if (T <= 0) throw ModelError("resource '" + id + "': horizon must be positive");
        if (static_cast<int>(p_hi.size()) != T || static_cast<int>(e_lo.size()) != T ||
            static_cast<int>(e_hi.size()) != T)
            throw ModelError("resource '" + id + "': bound vectors must all have length T");
        if (e0_shift != 0) {
            for (Rat& v : e_lo) v -= e0_shift;
            for (Rat& v : e_hi) v -= e0_shift;
        }
    }

    // 1-based interval accessors; energy accessors accept t = 0.
    const Rat& plo(int t) const { return p_lo[t - 1]; }
    const Rat& phi(int t) const { return p_hi[t - 1]; }
    Rat elo(int t) const { return t == 0 ? Rat(0) : e_lo[t - 1]; }
    Rat ehi(int t) const { return t == 0 ? Rat(0) : e_hi[t - 1]; }
};

struct Violation {
    int hypothesis;  // 1, 2 or 3
    int t;
    Rat lhs, rhs;    // the comparison that failed, as lhs <= rhs
    std::string detail;
};

using ValidationReport = std::vector<Violation>;

// Empty report iff Hypotheses 1-3 hold at every interval (t = 1 uses e(0) = 0).
inline ValidationReport validate_hypotheses(const FlexResource& r) {
    ValidationReport report;
    auto expect_le = [&](int hypo, int t, const Rat& lhs, const Rat& rhs, const char* what) {
        if (!(lhs <= rhs)) report.push_back({hypo, t, lhs, rhs, what});
    };
    for (int t = 1; t <= r.T; ++t) {
        expect_le(1, t, r.plo(t), r.phi(t), "p_lo <= p_hi");
        expect_le(1, t, r.elo(t), r.ehi(t), "e_lo <= e_hi");
        expect_le(2, t, r.plo(t), r.elo(t) - r.elo(t - 1), "p_lo <= e_lo(t)-e_lo(t-1)");
        expect_le(2, t, r.elo(t) - r.elo(t - 1), r.phi(t), "e_lo(t)-e_lo(t-1) <= p_hi");
        expect_le(2, t, r.plo(t), r.ehi(t) - r.ehi(t - 1), "p_lo <= e_hi(t)-e_hi(t-1)");
        expect_le(2, t, r.ehi(t) - r.ehi(t - 1), r.phi(t), "e_hi(t)-e_hi(t-1) <= p_hi");
        expect_le(3, t, r.elo(t - 1) + r.phi(t), r.ehi(t), "e_lo(t-1)+p_hi <= e_hi(t)");
        expect_le(3, t, r.elo(t), r.ehi(t - 1) + r.plo(t), "e_hi(t-1)+p_lo >= e_lo(t)");
    }
    return report;
}

inline bool hypotheses_hold(const FlexResource& r) { return validate_hypotheses(r).empty(); }

// Shrinks the energy envelopes to the reachable band and trims power bounds
// to the envelope gap. The feasible trajectory set is unchanged; the result
// satisfies Hypotheses 1-3. Throws when the trajectory set is empty.
inline FlexResource tighten_bounds(const FlexResource& r) {
    for (int t = 1; t <= r.T; ++t) {
        if (!(r.plo(t) <= r.phi(t)))
            throw ModelError("tighten_bounds: p_lo > p_hi at t=" + std::to_string(t), t);
        if (!(r.elo(t) <= r.ehi(t)))
            throw ModelError("tighten_bounds: e_lo > e_hi at t=" + std::to_string(t), t);
    }
    FlexResource out = r;
    auto lo = [&](int t) -> Rat& { return out.e_lo[t - 1]; };
    auto hi = [&](int t) -> Rat& { return out.e_hi[t - 1]; };
    auto lo_at = [&](int t) { return t == 0 ? Rat(0) : out.e_lo[t - 1]; };
    auto hi_at = [&](int t) { return t == 0 ? Rat(0) : out.e_hi[t - 1]; };

    bool changed = true;
    while (changed) {
        changed = false;
        for (int t = 1; t <= out.T; ++t) {  // reachability from the left
            Rat top = hi_at(t - 1) + out.phi(t);
            if (top < hi(t)) { hi(t) = top; changed = true; }
            Rat bot = lo_at(t - 1) + out.plo(t);
            if (bot > lo(t)) { lo(t) = bot; changed = true; }
        }
        for (int t = out.T; t >= 2; --t) {  // reachability toward the right
            Rat top = hi_at(t) - out.plo(t);
            if (top < hi(t - 1)) { hi(t - 1) = top; changed = true; }
            Rat bot = lo_at(t) - out.phi(t);
            if (bot > lo(t - 1)) { lo(t - 1) = bot; changed = true; }
        }
        for (int t = 1; t <= out.T; ++t)
            if (lo_at(t) > hi_at(t))
                throw ModelError("tighten_bounds: trajectory set empty at t=" + std::to_string(t), t);
    }
    // Power bounds wider than the envelope gap can never bind; trimming them
    // establishes Hypothesis 3 without touching the trajectory set.
    for (int t = 1; t <= out.T; ++t) {
        Rat pmax = hi_at(t) - lo_at(t - 1);
        if (pmax < out.p_hi[t - 1]) out.p_hi[t - 1] = pmax;
        Rat pmin = lo_at(t) - hi_at(t - 1);
        if (pmin > out.p_lo[t - 1]) out.p_lo[t - 1] = pmin;
    }
    return out;
}

// Generator-like resource: only power capacity. Energy bounds are the running
// power sums, so they never bind and Hypotheses 1-3 hold by construction.
inline FlexResource from_generator(const std::string& id, const std::vector<Rat>& p_lo,
                                   const std::vector<Rat>& p_hi) {
    if (p_lo.size() != p_hi.size() || p_lo.empty())
        throw ModelError("from_generator: power bound vectors must be nonempty and equal length");
    for (std::size_t t = 0; t < p_lo.size(); ++t)
        if (!(p_lo[t] <= p_hi[t]))
            throw ModelError("from_generator: p_lo > p_hi at t=" + std::to_string(t + 1),
                             static_cast<int>(t + 1));
    std::vector<Rat> e_lo(p_lo.size()), e_hi(p_hi.size());
    Rat lo = 0, hi = 0;
    for (std::size_t t = 0; t < p_lo.size(); ++t) {
        lo += p_lo[t];
        hi += p_hi[t];
        e_lo[t] = lo;
        e_hi[t] = hi;
    }
    return FlexResource(id, p_lo, p_hi, std::move(e_lo), std::move(e_hi));
}

inline std::string energy_var(const std::string& ns, int t) {
    return "e_" + ns + "_" + std::to_string(t);
}

// The 4T rows of the individual operating constraints over e_ns(1..T),
// with e(0) substituted by the constant 0. Duplicate rows are preserved.
inline LinearSystem individual_polytope(const FlexResource& r, const std::string& ns) {
    std::vector<std::string> vars;
    vars.reserve(r.T);
    for (int t = 1; t <= r.T; ++t) vars.push_back(energy_var(ns, t));
    LinearSystem sys(std::move(vars));
    for (int t = 1; t <= r.T; ++t) {
        std::map<std::string, Rat> power;
        power[energy_var(ns, t)] = 1;
        if (t > 1) power[energy_var(ns, t - 1)] = -1;
        sys.add(power, Rel::Ge, r.plo(t));
        sys.add(power, Rel::Le, r.phi(t));
        std::map<std::string, Rat> energy{{energy_var(ns, t), Rat(1)}};
        sys.add(energy, Rel::Ge, r.elo(t));
        sys.add(energy, Rel::Le, r.ehi(t));
    }
    return sys;
}

// Validated fleet sharing one horizon; the only way storage-like resources
// enter the aggregation pipeline.
class ResourceSet {
public:
    ResourceSet() = default;
    explicit ResourceSet(std::vector<FlexResource> members) : members_(std::move(members)) {
        std::set<std::string> ids;
        for (const FlexResource& r : members_) {
            if (!ids.insert(r.id).second)
                throw ModelError("duplicate resource id '" + r.id + "'");
            if (r.T != members_.front().T)
                throw ModelError("resource '" + r.id + "': horizon differs from fleet horizon");
            ValidationReport rep = validate_hypotheses(r);
            if (!rep.empty())
                throw ModelError("resource '" + r.id + "' violates Hypothesis " +
                                     std::to_string(rep.front().hypothesis) + " at t=" +
                                     std::to_string(rep.front().t) + " (" + rep.front().detail + ")",
                                 rep.front().t);
        }
    }

    int N() const { return static_cast<int>(members_.size()); }
    int T() const { return members_.empty() ? 0 : members_.front().T; }
    const std::vector<FlexResource>& members() const { return members_; }
    const FlexResource& operator[](std::size_t i) const { return members_[i]; }
    bool empty() const { return members_.empty(); }

    Rat total_e0_shift() const {
        Rat s = 0;
        for (const FlexResource& r : members_) s += r.e0_shift;
        return s;
    }

private:
    std::vector<FlexResource> members_;
};

}  // namespace afr
