#pragma once

#include "afr/direction.hpp"
#include "afr/fme.hpp"
#include "afr/flex_model.hpp"
#include "afr/support.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace afr {

struct ResourceContribution {
    Rat e0_shift;
    std::vector<Rat> lo, hi;  // aligned with the model's direction order
};

// Exact aggregated feasible region: one two-sided bound on the subset-power
// functional per nonempty interval subset, 2(2^T - 1) scalar inequalities.
// Bounds are additive over resources, which is what makes merge and
// incremental add exact.
struct AfrModel {
    int T = 0;
    std::vector<DirectionIndex> directions;  // Gray order from enumerate_directions
    std::vector<Rat> lo, hi;                 // aligned with directions
    std::vector<std::string> resource_ids;   // build order
    std::map<std::string, ResourceContribution> contributions;  // optional
    Rat e0_total;

    std::size_t direction_count() const { return directions.size(); }
    std::size_t inequality_count() const { return 2 * directions.size(); }
    bool has_contributions() const {
        return resource_ids.empty() || !contributions.empty();
    }
};

struct BuildOptions {
    unsigned threads = 1;
    bool keep_contributions = true;
};

namespace detail {

// Incremental evaluation state of one resource along the Gray sequence:
// saturating-sweep energies and accumulated objective for both bound sides,
// indexed by interval. A toggle at interval t invalidates the suffix from t.
struct SweepState {
    const FlexResource* r = nullptr;
    uint64_t mask = 0;
    std::vector<Rat> up_e, up_acc, dn_e, dn_acc;  // index 0..T

    void reset(const FlexResource& res) {
        r = &res;
        mask = 0;
        up_e.assign(res.T + 1, Rat(0));
        up_acc.assign(res.T + 1, Rat(0));
        dn_e.assign(res.T + 1, Rat(0));
        dn_acc.assign(res.T + 1, Rat(0));
        recompute_from(1);
    }

    void recompute_from(int t0) {
        for (int t = t0; t <= r->T; ++t) {
            if ((mask >> (t - 1)) & 1u) {
                up_e[t] = rat_min(up_e[t - 1] + r->phi(t), r->ehi(t));
                up_acc[t] = up_acc[t - 1] + up_e[t] - up_e[t - 1];
                dn_e[t] = rat_max(dn_e[t - 1] + r->plo(t), r->elo(t));
                dn_acc[t] = dn_acc[t - 1] + dn_e[t] - dn_e[t - 1];
            } else {
                up_e[t] = rat_max(up_e[t - 1] + r->plo(t), r->elo(t));
                up_acc[t] = up_acc[t - 1];
                dn_e[t] = rat_min(dn_e[t - 1] + r->phi(t), r->ehi(t));
                dn_acc[t] = dn_acc[t - 1];
            }
        }
    }

    void move_to(uint64_t target) {
        uint64_t diff = mask ^ target;
        if (!diff) return;
        int first = 64;
        for (int t = 1; first == 64; ++t)
            if ((diff >> (t - 1)) & 1u) first = t;
        mask = target;
        recompute_from(first);
    }

    const Rat& upper() const { return up_acc[r->T]; }
    const Rat& lower() const { return dn_acc[r->T]; }
};

inline void build_span(const ResourceSet& rs, const std::vector<DirectionIndex>& dirs,
                       std::size_t begin, std::size_t end, AfrModel& model,
                       const std::vector<ResourceContribution*>& slots) {
    std::vector<SweepState> states(rs.N());
    for (int i = 0; i < rs.N(); ++i) states[i].reset(rs[i]);
    for (std::size_t k = begin; k < end; ++k) {
        Rat lo = 0, hi = 0;
        for (int i = 0; i < rs.N(); ++i) {
            SweepState& st = states[i];
            st.move_to(dirs[k].mask);
            hi += st.upper();
            lo += st.lower();
            if (!slots.empty()) {
                slots[i]->hi[k] = st.upper();
                slots[i]->lo[k] = st.lower();
            }
        }
        model.hi[k] = std::move(hi);
        model.lo[k] = std::move(lo);
    }
}

}  // namespace detail

// Closed-form build: O(N 2^T) bound updates via suffix-sharing along the Gray
// direction order. The result is independent of the thread count.
inline AfrModel build_afr(const ResourceSet& rs, const BuildOptions& opts = {}) {
    AfrModel model;
    model.T = rs.T();
    model.e0_total = rs.total_e0_shift();
    if (rs.T() == 0) return model;
    model.directions = enumerate_directions(rs.T());
    const std::size_t count = model.directions.size();
    model.lo.assign(count, Rat(0));
    model.hi.assign(count, Rat(0));
    for (const FlexResource& r : rs.members()) model.resource_ids.push_back(r.id);
    std::vector<ResourceContribution*> slots;
    if (opts.keep_contributions) {
        for (const FlexResource& r : rs.members())
            model.contributions[r.id] = {r.e0_shift, std::vector<Rat>(count, Rat(0)),
                                         std::vector<Rat>(count, Rat(0))};
        for (const FlexResource& r : rs.members())
            slots.push_back(&model.contributions.at(r.id));
    }
    if (rs.N() == 0) return model;

    unsigned workers = opts.threads == 0 ? std::thread::hardware_concurrency() : opts.threads;
    if (workers <= 1 || count < 2 * workers) {
        detail::build_span(rs, model.directions, 0, count, model, slots);
        return model;
    }
    std::vector<std::thread> pool;
    std::size_t chunk = (count + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        std::size_t begin = w * chunk;
        std::size_t end = std::min(count, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back([&, begin, end] {
            detail::build_span(rs, model.directions, begin, end, model, slots);
        });
    }
    for (std::thread& th : pool) th.join();
    return model;
}

// Bounds add; resource sets must be disjoint and share the horizon.
inline AfrModel merge(const AfrModel& a, const AfrModel& b) {
    if (a.T != b.T) throw ModelError("merge: horizon mismatch");
    for (const std::string& id : b.resource_ids)
        for (const std::string& other : a.resource_ids)
            if (id == other) throw ModelError("merge: resource id collision '" + id + "'");
    AfrModel out = a;
    for (std::size_t k = 0; k < out.directions.size(); ++k) {
        out.lo[k] += b.lo[k];
        out.hi[k] += b.hi[k];
    }
    out.resource_ids.insert(out.resource_ids.end(), b.resource_ids.begin(), b.resource_ids.end());
    out.e0_total += b.e0_total;
    if (a.has_contributions() && b.has_contributions())
        for (const auto& [id, c] : b.contributions) out.contributions[id] = c;
    else
        out.contributions.clear();
    return out;
}

inline AfrModel build_singleton(const FlexResource& r, bool keep_contributions = true) {
    return build_afr(ResourceSet({r}), {1, keep_contributions});
}

// One more summand per direction; equal to a fresh build over the union.
inline AfrModel add_resource(const AfrModel& a, const FlexResource& r) {
    return merge(a, build_singleton(r, a.has_contributions()));
}

// Inverse of add_resource, possible because contributions are recorded.
inline AfrModel remove_resource(const AfrModel& a, const std::string& id) {
    auto it = a.contributions.find(id);
    if (it == a.contributions.end())
        throw ModelError("remove_resource: no contribution record for '" + id + "'");
    AfrModel out = a;
    for (std::size_t k = 0; k < out.directions.size(); ++k) {
        out.lo[k] -= it->second.lo[k];
        out.hi[k] -= it->second.hi[k];
    }
    out.e0_total -= it->second.e0_shift;
    out.contributions.erase(id);
    std::erase(out.resource_ids, id);
    return out;
}

struct MembershipViolation {
    std::size_t direction;  // index into model.directions
    bool upper;             // which side failed
    Rat bound, value;
};

struct MembershipVerdict {
    bool inside = true;
    std::vector<MembershipViolation> violations;
};

// Profile is in external units; the model's recorded initial-energy shift is
// removed before testing. Subset sums update incrementally along Gray order.
inline MembershipVerdict check_membership(const AfrModel& model, const std::vector<Rat>& profile) {
    if (static_cast<int>(profile.size()) != model.T)
        throw ModelError("check_membership: profile length != T");
    std::vector<Rat> increments(model.T + 1, Rat(0));  // P(t) = E(t) - E(t-1), internal units
    for (int t = 1; t <= model.T; ++t) {
        Rat internal_t = profile[t - 1] - model.e0_total;
        Rat internal_prev = t == 1 ? Rat(0) : profile[t - 2] - model.e0_total;
        increments[t] = internal_t - internal_prev;
    }
    MembershipVerdict verdict;
    Rat value = 0;
    uint64_t mask = 0;
    for (std::size_t k = 0; k < model.directions.size(); ++k) {
        uint64_t target = model.directions[k].mask;
        uint64_t diff = mask ^ target;
        for (int t = 1; t <= model.T; ++t) {
            if (!((diff >> (t - 1)) & 1u)) continue;
            if ((target >> (t - 1)) & 1u)
                value += increments[t];
            else
                value -= increments[t];
        }
        mask = target;
        if (value > model.hi[k]) {
            verdict.inside = false;
            verdict.violations.push_back({k, true, model.hi[k], value});
        }
        if (value < model.lo[k]) {
            verdict.inside = false;
            verdict.violations.push_back({k, false, model.lo[k], value});
        }
    }
    return verdict;
}

// H-representation over E(1..T): coefficient of E(tau) is [tau in S] - [tau+1 in S].
inline LinearSystem afr_as_system(const AfrModel& model) {
    std::vector<std::string> vars;
    for (int t = 1; t <= model.T; ++t) vars.push_back(aggregate_var(t));
    LinearSystem sys(vars);
    for (std::size_t k = 0; k < model.directions.size(); ++k) {
        const DirectionIndex& d = model.directions[k];
        std::map<std::string, Rat> coeffs;
        for (int tau : d.S) {
            coeffs[aggregate_var(tau)] += 1;
            if (tau > 1) coeffs[aggregate_var(tau - 1)] -= 1;
        }
        for (auto it = coeffs.begin(); it != coeffs.end();)
            it = it->second == 0 ? coeffs.erase(it) : std::next(it);
        sys.add(coeffs, Rel::Ge, model.lo[k]);
        sys.add(coeffs, Rel::Le, model.hi[k]);
    }
    return sys;
}

using Allocation = std::map<std::string, std::vector<Rat>>;

// Exact feasibility split of an aggregate profile across the fleet; succeeds
// whenever the profile passes check_membership (completeness of the model).
// Reported trajectories are shifted back to each resource's original e(0).
inline std::optional<Allocation> disaggregate(const ResourceSet& rs,
                                              const std::vector<Rat>& profile) {
    if (static_cast<int>(profile.size()) != rs.T())
        throw ModelError("disaggregate: profile length != T");
    std::vector<std::string> vars;
    for (const FlexResource& r : rs.members())
        for (int t = 1; t <= rs.T(); ++t) vars.push_back(energy_var(r.id, t));
    LinearSystem sys(vars);
    for (const FlexResource& r : rs.members()) {
        LinearSystem ind = individual_polytope(r, r.id);
        for (const LinearRow& row : ind.rows()) {
            std::map<std::string, Rat> coeffs;
            for (std::size_t j = 0; j < ind.var_count(); ++j)
                if (row.a[j] != 0) coeffs[ind.variables()[j]] = row.a[j];
            sys.add(coeffs, row.rel, row.rhs);
        }
    }
    Rat shift = rs.total_e0_shift();
    for (int t = 1; t <= rs.T(); ++t) {
        std::map<std::string, Rat> sum;
        for (const FlexResource& r : rs.members()) sum[energy_var(r.id, t)] = 1;
        sys.add(sum, Rel::Eq, profile[t - 1] - shift);
    }
    LpOutcome out = feasible(sys);
    if (out.status != LpStatus::Optimal) return std::nullopt;
    Allocation alloc;
    for (const FlexResource& r : rs.members()) {
        std::vector<Rat> traj(rs.T());
        for (int t = 1; t <= rs.T(); ++t)
            traj[t - 1] = out.witness.at(energy_var(r.id, t)) + r.e0_shift;
        alloc[r.id] = std::move(traj);
    }
    return alloc;
}

}  // namespace afr
