#pragma once

#include "afr/direction.hpp"
#include "afr/flex_model.hpp"
#include "afr/simplex.hpp"

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace afr {

namespace detail {

// Saturating forward trajectory: run maximum power on the selected intervals
// and minimum power elsewhere, clipping into the energy band each step. Under
// Hypotheses 1-3 the clip never leaves the band and the accumulated selected
// increments equal the exact maximum of sum_{tau in S} (e(tau)-e(tau-1)).
// The symmetric sweep with the roles of the bounds swapped yields the minimum.
template <bool Upper>
inline Rat saturating_sweep(const FlexResource& r, uint64_t mask, int last) {
    Rat e = 0, acc = 0;
    for (int t = 1; t <= last; ++t) {
        if ((mask >> (t - 1)) & 1u) {
            Rat next = Upper ? rat_min(e + r.phi(t), r.ehi(t))
                             : rat_max(e + r.plo(t), r.elo(t));
            acc += next - e;
            e = std::move(next);
        } else {
            e = Upper ? rat_max(e + r.plo(t), r.elo(t))
                      : rat_min(e + r.phi(t), r.ehi(t));
        }
    }
    return acc;
}

inline void require_hypotheses(const FlexResource& r) {
    ValidationReport rep = validate_hypotheses(r);
    if (!rep.empty())
        throw ModelError("support bounds need Hypotheses 1-3; resource '" + r.id +
                             "' violates Hypothesis " + std::to_string(rep.front().hypothesis) +
                             " at t=" + std::to_string(rep.front().t),
                         rep.front().t);
}

}  // namespace detail

inline Rat support_upper_closed(const FlexResource& r, const DirectionIndex& d) {
    detail::require_hypotheses(r);
    return detail::saturating_sweep<true>(r, d.mask, d.max_interval());
}

inline Rat support_lower_closed(const FlexResource& r, const DirectionIndex& d) {
    detail::require_hypotheses(r);
    return detail::saturating_sweep<false>(r, d.mask, d.max_interval());
}

// LP oracle used for calibration and acceptance: optimize the subset
// functional over the resource's own polytope.
inline std::map<std::string, Rat> subset_objective(const std::vector<int>& S, int T,
                                                   const std::string& ns) {
    std::map<std::string, Rat> obj;
    auto bump = [&](int t, int delta) {
        if (t < 1 || t > T) return;
        obj[energy_var(ns, t)] += delta;
    };
    for (int tau : S) {
        bump(tau, +1);
        bump(tau - 1, -1);
    }
    for (auto it = obj.begin(); it != obj.end();)
        it = it->second == 0 ? obj.erase(it) : std::next(it);
    return obj;
}

inline Rat support_lp(const FlexResource& r, const std::vector<int>& S, Sense sense) {
    if (S.empty()) throw std::invalid_argument("support_lp: empty interval subset");
    LinearSystem poly = individual_polytope(r, "r");
    LpOutcome out = optimize(poly, subset_objective(S, r.T, "r"), sense);
    if (out.status == LpStatus::Infeasible)
        throw ModelError("support_lp: resource polytope '" + r.id + "' is infeasible");
    if (out.status == LpStatus::Unbounded)
        throw ModelError("support_lp: unbounded functional on resource '" + r.id + "'");
    return out.value;
}

inline Rat support_upper_lp(const FlexResource& r, const std::vector<int>& S) {
    return support_lp(r, S, Sense::Max);
}
inline Rat support_lower_lp(const FlexResource& r, const std::vector<int>& S) {
    return support_lp(r, S, Sense::Min);
}

// ---------------------------------------------------------------------------
// Transcription calibration for the flat two-candidate bound formula.
//
// The formula reads, per resource, as the minimum of an energy-window
// candidate (upper energy bound at the path start, corrected by the minimum
// power of the skipped intervals and anchored below the window) and a power
// candidate (maximum power summed over the selected intervals, with the
// anchor energy bound replacing the first interval when the subset reaches
// interval 1). Its index conventions are ambiguous on four axes, enumerated
// here and settled against the LP oracle; see calibrate_reading().
// ---------------------------------------------------------------------------

struct ReadingVariant {
    bool s_plus_one = true;    // anchor the window at interval T-g+1 rather than T-g
    bool swap_parity = false;  // exchange the two indicator branches
    bool sliceA_to_q = false;  // extend the window-candidate slice through theta = q
    bool sliceB_to_q = false;  // extend the power-candidate slice through theta = q
};

// The variant selected by the calibration sweep (exact on every single-run
// direction; see tests). Multi-run directions need the saturating sweep, so
// support_*_closed above is the production evaluator.
inline constexpr ReadingVariant frozen_reading{true, false, false, false};

inline std::vector<ReadingVariant> all_reading_variants() {
    std::vector<ReadingVariant> out;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int c = 0; c < 2; ++c)
                for (int d = 0; d < 2; ++d)
                    out.push_back({a == 1, b == 1, c == 1, d == 1});
    return out;
}

namespace detail {

struct PaperCandidates {
    Rat window, power;
};

template <bool Upper>
inline PaperCandidates paper_candidates(const FlexResource& r, const DirectionIndex& d,
                                        const ReadingVariant& v) {
    const int T = d.T;
    const int t = T - d.q;
    auto interval_of = [&](int theta) { return T - theta + 1; };
    const int s_interval = v.s_plus_one ? T - d.g + 1 : T - d.g;
    const bool plus_branch = v.swap_parity ? d.indicator < 0 : d.indicator > 0;

    auto phi_of = [&](int tau) { return Upper ? r.phi(tau) : r.plo(tau); };
    auto plo_of = [&](int tau) { return Upper ? r.plo(tau) : r.phi(tau); };
    auto ehi_of = [&](int tau) { return Upper ? r.ehi(tau) : r.elo(tau); };
    auto elo_of = [&](int tau) { return Upper ? r.elo(tau) : r.ehi(tau); };

    const int endA = v.sliceA_to_q ? d.q : d.q - 1;
    const int endB = v.sliceB_to_q ? d.q : d.q - 1;
    Rat window = ehi_of(s_interval);
    for (int theta = d.g; theta <= endA; ++theta)
        if (!d.u[theta - 1]) window -= plo_of(interval_of(theta));
    Rat power = 0;
    for (int theta = d.g; theta <= endB; ++theta)
        if (d.u[theta - 1]) power += phi_of(interval_of(theta));
    if (plus_branch) {
        power += ehi_of(t + 1);
    } else {
        window -= elo_of(t + 1);
    }
    return {std::move(window), std::move(power)};
}

}  // namespace detail

// Printed-formula evaluation of the per-resource upper bound under a reading
// variant; the lower bound flips every role.
inline Rat paper_support_upper(const FlexResource& r, const DirectionIndex& d,
                               const ReadingVariant& v) {
    auto c = detail::paper_candidates<true>(r, d, v);
    return rat_min(c.window, c.power);
}

inline Rat paper_support_lower(const FlexResource& r, const DirectionIndex& d,
                               const ReadingVariant& v) {
    auto c = detail::paper_candidates<false>(r, d, v);
    return rat_max(c.window, c.power);
}

struct CalibrationResult {
    ReadingVariant variant;
    long mismatches = 0;       // against the LP oracle, over the whole sweep
    long single_run_mismatches = 0;
};

inline bool single_run(const DirectionIndex& d) {
    return d.max_interval() - d.min_interval() + 1 == static_cast<int>(d.S.size());
}

// Sweep every reading variant over (resource, direction) pairs and count
// exact disagreements with the LP oracle. The fallback saturating sweep is
// scored alongside as variant index -1.
inline std::vector<CalibrationResult> calibrate_reading(
    const std::vector<FlexResource>& resources) {
    std::vector<CalibrationResult> results;
    for (const ReadingVariant& v : all_reading_variants()) results.push_back({v, 0, 0});
    for (const FlexResource& r : resources) {
        for (const DirectionIndex& d : enumerate_directions(r.T)) {
            Rat up = support_upper_lp(r, d.S);
            Rat lo = support_lower_lp(r, d.S);
            for (CalibrationResult& res : results) {
                bool ok = paper_support_upper(r, d, res.variant) == up &&
                          paper_support_lower(r, d, res.variant) == lo;
                if (!ok) {
                    ++res.mismatches;
                    if (single_run(d)) ++res.single_run_mismatches;
                }
            }
        }
    }
    return results;
}

}  // namespace afr
