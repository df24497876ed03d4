#pragma once

#include "afr/afr_model.hpp"
#include "afr/direction.hpp"
#include "afr/fme.hpp"
#include "afr/flex_model.hpp"
#include "afr/simplex.hpp"

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace afr {

// Test-only fault injection: flips one bound sign inside the supplement
// operation so the theorem suites demonstrably catch a bad transcription.
inline bool& sa_bound_mutation() {
    static bool flag = false;
    return flag;
}

struct SymKey {
    bool aggregate = false;
    std::string id;  // empty when aggregate
    int t = 0;
    auto operator<=>(const SymKey&) const = default;
};

inline SymKey sym_e(const std::string& id, int t) { return {false, id, t}; }
inline SymKey sym_E(int t) { return {true, "", t}; }

// Two-sided inequality over the symbols {e_i(t), E(t)}; the shape every row
// takes during the elimination. Resource coefficients at any interval are
// uniformly +1 or uniformly -1.
struct SymbolicInequality {
    std::map<SymKey, Rat> coeffs;
    Rat lower, upper;

    void drop_zeros() {
        for (auto it = coeffs.begin(); it != coeffs.end();)
            it = it->second == 0 ? coeffs.erase(it) : std::next(it);
    }

    int live_sign(int t) const {
        int sign = 0;
        for (const auto& [k, c] : coeffs) {
            if (k.aggregate || k.t != t) continue;
            int s = c > 0 ? 1 : -1;
            if (sign == 0) sign = s;
            if (s != sign || (c != 1 && c != -1))
                throw ModelError("symbolic row breaks the uniform-sign pattern at t=" +
                                 std::to_string(t));
        }
        return sign;
    }

    std::set<std::string> live_set(int t) const {
        std::set<std::string> out;
        for (const auto& [k, c] : coeffs)
            if (!k.aggregate && k.t == t && c != 0) out.insert(k.id);
        return out;
    }

    // The canonical-chain invariant: at every interval the present resource
    // coefficients agree in sign. Partial operations may break it at the
    // previous interval; such rows are exactly the redundant ones.
    bool uniform_pattern(int T) const {
        for (int t = 0; t <= T; ++t)
            if (!uniform_at(t)) return false;
        return true;
    }

    bool uniform_at(int t) const {
        int sign = 0;
        for (const auto& [k, c] : coeffs) {
            if (k.aggregate || k.t != t) continue;
            if (c != 1 && c != -1) return false;
            int s = c > 0 ? 1 : -1;
            if (sign == 0) sign = s;
            if (s != sign) return false;
        }
        return true;
    }
};

using IdSet = std::set<std::string>;

namespace calc_detail {

inline const FlexResource& member(const ResourceSet& rs, const std::string& id) {
    for (const FlexResource& r : rs.members())
        if (r.id == id) return r;
    throw ModelError("unknown resource id '" + id + "'");
}

// f += sign * (e_i(t) - e_i(t-1)), bounded by the power band of interval t.
inline void add_power(SymbolicInequality& f, const ResourceSet& rs, const std::string& id, int t,
                      int sign) {
    const FlexResource& r = member(rs, id);
    f.coeffs[sym_e(id, t)] += sign;
    if (t - 1 >= 1) f.coeffs[sym_e(id, t - 1)] -= sign;
    Rat plo = r.plo(t), phi = r.phi(t);
    if (sa_bound_mutation()) std::swap(plo, phi);
    if (sign > 0) {
        f.lower += plo;
        f.upper += phi;
    } else {
        f.lower -= phi;
        f.upper -= plo;
    }
    f.drop_zeros();
}

// f += sign * e_i(t), bounded by the energy band of interval t.
inline void add_energy(SymbolicInequality& f, const ResourceSet& rs, const std::string& id, int t,
                       int sign) {
    if (t == 0) return;  // e(0) = 0 contributes nothing
    const FlexResource& r = member(rs, id);
    f.coeffs[sym_e(id, t)] += sign;
    if (sign > 0) {
        f.lower += r.elo(t);
        f.upper += r.ehi(t);
    } else {
        f.lower -= r.ehi(t);
        f.upper -= r.elo(t);
    }
    f.drop_zeros();
}

inline void substitute_aggregate(SymbolicInequality& f, const ResourceSet& rs, int t, int sign) {
    for (const FlexResource& r : rs.members()) {
        auto it = f.coeffs.find(sym_e(r.id, t));
        if (it == f.coeffs.end() || it->second != sign)
            throw ModelError("aggregate substitution needs every e_i(" + std::to_string(t) +
                             ") present with sign " + std::to_string(sign));
        f.coeffs.erase(it);
    }
    f.coeffs[sym_E(t)] += sign;
    f.drop_zeros();
}

inline IdSet difference(const IdSet& a, const IdSet& b) {
    IdSet out;
    for (const std::string& x : a)
        if (!b.count(x)) out.insert(x);
    return out;
}

inline IdSet fleet_ids(const ResourceSet& rs) {
    IdSet out;
    for (const FlexResource& r : rs.members()) out.insert(r.id);
    return out;
}

inline void require_live(const SymbolicInequality& f, const IdSet& X, int t) {
    if (f.live_set(t) != X)
        throw ModelError("operation precondition: interval-" + std::to_string(t) +
                         " symbols must be exactly the stated set");
}

}  // namespace calc_detail

// Seed row: sum of the interval-t energy bands over X, widened by the given
// slacks. The trivial row 0 <= 0 <= 0 arises from X = {} with zero slack.
inline SymbolicInequality seed_row(const ResourceSet& rs, const IdSet& X, int t,
                                   const Rat& slack_lo = Rat(0), const Rat& slack_hi = Rat(0)) {
    SymbolicInequality f;
    f.lower = -slack_lo;
    f.upper = slack_hi;
    for (const std::string& id : X) calc_detail::add_energy(f, rs, id, t, +1);
    return f;
}

// Supplement all: complete the interval-t symbols to the aggregate, using the
// power band for Y and the energy band for the rest; the aggregate symbol
// replaces the completed sum. Produces E(t) with the live sign and e_Y(t-1)
// with the opposite sign.
inline SymbolicInequality apply_SA(SymbolicInequality f, const IdSet& X, const IdSet& Y, int t,
                                   const ResourceSet& rs) {
    calc_detail::require_live(f, X, t);
    IdSet rest = calc_detail::difference(calc_detail::fleet_ids(rs), X);
    for (const std::string& id : Y)
        if (!rest.count(id)) throw ModelError("apply_SA: Y must avoid the live set");
    int sign = f.live_sign(t);
    if (sign == 0) sign = +1;
    for (const std::string& id : Y) calc_detail::add_power(f, rs, id, t, sign);
    for (const std::string& id : calc_detail::difference(rest, Y))
        calc_detail::add_energy(f, rs, id, t, sign);
    calc_detail::substitute_aggregate(f, rs, t, sign);
    return f;
}

// Remove all: cancel every interval-t symbol, via the power band for Y and
// the energy band for X - Y. No aggregate term appears; e_Y(t-1) keeps the
// live sign.
inline SymbolicInequality apply_RA(SymbolicInequality f, const IdSet& X, const IdSet& Y, int t,
                                   const ResourceSet& rs) {
    calc_detail::require_live(f, X, t);
    for (const std::string& id : Y)
        if (!X.count(id)) throw ModelError("apply_RA: Y must lie inside the live set");
    int sign = f.live_sign(t);
    if (sign == 0) return f;  // nothing to remove
    for (const std::string& id : Y) calc_detail::add_power(f, rs, id, t, -sign);
    for (const std::string& id : calc_detail::difference(X, Y))
        calc_detail::add_energy(f, rs, id, t, -sign);
    return f;
}

// Supplement part: extend the live set to a proper superset Yprime short of
// the whole fleet; Cp names the members completed through their power band.
inline SymbolicInequality apply_SP(SymbolicInequality f, const IdSet& X, const IdSet& Yprime,
                                   const IdSet& Cp, int t, const ResourceSet& rs) {
    IdSet all = calc_detail::fleet_ids(rs);
    if (Yprime == all) throw ModelError("apply_SP: target set is the fleet; that is SA");
    if (Yprime == X || !std::includes(Yprime.begin(), Yprime.end(), X.begin(), X.end()))
        throw ModelError("apply_SP: target must properly contain the live set");
    calc_detail::require_live(f, X, t);
    int sign = f.live_sign(t);
    if (sign == 0) sign = +1;
    IdSet added = calc_detail::difference(Yprime, X);
    for (const std::string& id : Cp)
        if (!added.count(id)) throw ModelError("apply_SP: Cp must lie inside the added set");
    for (const std::string& id : Cp) calc_detail::add_power(f, rs, id, t, sign);
    for (const std::string& id : calc_detail::difference(added, Cp))
        calc_detail::add_energy(f, rs, id, t, sign);
    return f;
}

// Remove part: shrink the live set to a nonempty proper subset Yprime; Cp
// names the removed members cancelled through their power band.
inline SymbolicInequality apply_RP(SymbolicInequality f, const IdSet& X, const IdSet& Yprime,
                                   const IdSet& Cp, int t, const ResourceSet& rs) {
    if (Yprime.empty()) throw ModelError("apply_RP: empty target; that is RA");
    if (Yprime == X || !std::includes(X.begin(), X.end(), Yprime.begin(), Yprime.end()))
        throw ModelError("apply_RP: target must be a proper subset of the live set");
    calc_detail::require_live(f, X, t);
    int sign = f.live_sign(t);
    IdSet removed = calc_detail::difference(X, Yprime);
    for (const std::string& id : Cp)
        if (!removed.count(id)) throw ModelError("apply_RP: Cp must lie inside the removed set");
    for (const std::string& id : Cp) calc_detail::add_power(f, rs, id, t, -sign);
    for (const std::string& id : calc_detail::difference(removed, Cp))
        calc_detail::add_energy(f, rs, id, t, -sign);
    return f;
}

// ---------------------------------------------------------------------------
// Closed-form stage bounds. A path at stage q (t = T - q still live) bounds
//   sum_{tau in S} P(tau) + sum_{i in X} e_i(t)
// where members of X contribute an energy window anchored at the path start
// and members outside X contribute selected-power sums.
// ---------------------------------------------------------------------------

inline std::pair<Rat, Rat> psi_bounds(const DirectionIndex& l, const IdSet& X,
                                      const ResourceSet& rs) {
    const int t = l.T - l.q;
    const int m = l.max_interval();
    Rat lo = 0, hi = 0;
    for (const FlexResource& r : rs.members()) {
        if (X.count(r.id)) {
            Rat up = r.ehi(m), dn = r.elo(m);
            for (int tau = t + 1; tau < m; ++tau) {
                if (l.contains(tau)) continue;
                up -= r.plo(tau);
                dn -= r.phi(tau);
            }
            hi += up;
            lo += dn;
        } else {
            for (int tau : l.S) {
                hi += r.phi(tau);
                lo += r.plo(tau);
            }
        }
    }
    return {std::move(lo), std::move(hi)};
}

// Final-row bounds: the stage row finalized through the anchor interval
// t + 1 (energy band when it exists, the pinned e(0) = 0 otherwise).
inline std::pair<Rat, Rat> phi_bounds(const DirectionIndex& l, const IdSet& X,
                                      const ResourceSet& rs) {
    const int m = l.max_interval();
    const int anchor = l.T - l.q + 1;  // = min(S) - 1, or 1 when 1 is in S
    Rat lo = 0, hi = 0;
    if (l.indicator > 0) {
        // Subsets reaching interval 1 close at q = T; outside members swap
        // the first power term for the interval-1 energy band.
        for (const FlexResource& r : rs.members()) {
            if (X.count(r.id)) {
                Rat up = r.ehi(m), dn = r.elo(m);
                for (int tau = 1; tau < m; ++tau) {
                    if (l.contains(tau)) continue;
                    up -= r.plo(tau);
                    dn -= r.phi(tau);
                }
                hi += up;
                lo += dn;
            } else {
                Rat up = r.ehi(1), dn = r.elo(1);
                for (int tau : l.S) {
                    if (tau == 1) continue;
                    up += r.phi(tau);
                    dn += r.plo(tau);
                }
                hi += up;
                lo += dn;
            }
        }
    } else {
        for (const FlexResource& r : rs.members()) {
            if (X.count(r.id)) {
                Rat up = r.ehi(m) - r.elo(anchor), dn = r.elo(m) - r.ehi(anchor);
                for (int tau = anchor + 1; tau < m; ++tau) {
                    if (l.contains(tau)) continue;
                    up -= r.plo(tau);
                    dn -= r.phi(tau);
                }
                hi += up;
                lo += dn;
            } else {
                for (int tau : l.S) {
                    hi += r.phi(tau);
                    lo += r.plo(tau);
                }
            }
        }
    }
    return {std::move(lo), std::move(hi)};
}

// The stage row as a symbolic inequality (aggregate increments expanded into
// E symbols, live set attached at interval t).
inline SymbolicInequality psi_row(const DirectionIndex& l, const IdSet& X, const ResourceSet& rs) {
    SymbolicInequality f;
    const int t = l.T - l.q;
    for (int tau : l.S) {
        f.coeffs[sym_E(tau)] += 1;
        if (tau - 1 >= 1) f.coeffs[sym_E(tau - 1)] -= 1;
    }
    if (t >= 1)
        for (const std::string& id : X) f.coeffs[sym_e(id, t)] += 1;
    auto [lo, hi] = psi_bounds(l, X, rs);
    f.lower = std::move(lo);
    f.upper = std::move(hi);
    f.drop_zeros();
    return f;
}

// ---------------------------------------------------------------------------
// Conversion to linear systems and implication plumbing for the checkers.
// ---------------------------------------------------------------------------

namespace calc_detail {

inline std::string sym_name(const SymKey& k) {
    return k.aggregate ? aggregate_var(k.t) : energy_var(k.id, k.t);
}

inline void collect_vars(const SymbolicInequality& f, std::set<std::string>& vars) {
    for (const auto& [k, c] : f.coeffs)
        if (c != 0) vars.insert(sym_name(k));
}

inline void add_two_sided(LinearSystem& sys, const SymbolicInequality& f) {
    std::map<std::string, Rat> coeffs;
    for (const auto& [k, c] : f.coeffs)
        if (c != 0) coeffs[sym_name(k)] = c;
    sys.add(coeffs, Rel::Ge, f.lower);
    sys.add(coeffs, Rel::Le, f.upper);
}

struct OneSided {
    std::map<std::string, Rat> coeffs;
    Rat rhs;  // coeffs . x <= rhs
};

// upper side of a minus lower side of b
inline OneSided combine_upper_lower(const SymbolicInequality& a, const SymbolicInequality& b) {
    OneSided out;
    for (const auto& [k, c] : a.coeffs) out.coeffs[sym_name(k)] += c;
    for (const auto& [k, c] : b.coeffs) out.coeffs[sym_name(k)] -= c;
    for (auto it = out.coeffs.begin(); it != out.coeffs.end();)
        it = it->second == 0 ? out.coeffs.erase(it) : std::next(it);
    out.rhs = a.upper - b.lower;
    return out;
}

}  // namespace calc_detail

// True iff `target` holds everywhere on the system assembled from `given`
// (plus nothing else). Rows and target may mention e and E symbols freely.
inline bool rows_imply(const std::vector<SymbolicInequality>& given,
                       const SymbolicInequality& target) {
    std::set<std::string> vars;
    for (const SymbolicInequality& f : given) calc_detail::collect_vars(f, vars);
    calc_detail::collect_vars(target, vars);
    LinearSystem sys(std::vector<std::string>(vars.begin(), vars.end()));
    for (const SymbolicInequality& f : given) calc_detail::add_two_sided(sys, f);
    std::map<std::string, Rat> coeffs;
    for (const auto& [k, c] : target.coeffs)
        if (c != 0) coeffs[calc_detail::sym_name(k)] = c;
    return implies(sys, coeffs, Rel::Ge, target.lower) &&
           implies(sys, coeffs, Rel::Le, target.upper);
}

// Instantiated validity: the row must hold on the fleet's joint polytope.
inline bool valid_on_instance(const SymbolicInequality& f, const ResourceSet& rs) {
    LinearSystem joint = joint_system(rs);
    std::map<std::string, Rat> coeffs;
    for (const auto& [k, c] : f.coeffs)
        if (c != 0) coeffs[calc_detail::sym_name(k)] = c;
    return implies(joint, coeffs, Rel::Ge, f.lower) && implies(joint, coeffs, Rel::Le, f.upper);
}

// ---------------------------------------------------------------------------
// Redundancy checkers. Each returns true when the claimed implication holds
// on the given instance; the suites drive them across seeded configurations.
// ---------------------------------------------------------------------------

// First-method combination at interval t: the power/energy combination rows
// are implied by the previous interval's energy bands.
inline bool check_method1_redundancy(const ResourceSet& rs, int t) {
    for (const FlexResource& r : rs.members()) {
        SymbolicInequality combined;  // e(t-1) in [e_lo(t) - p_hi(t), e_hi(t) - p_lo(t)]
        if (t - 1 >= 1) combined.coeffs[sym_e(r.id, t - 1)] = 1;
        combined.lower = r.elo(t) - r.phi(t);
        combined.upper = r.ehi(t) - r.plo(t);
        SymbolicInequality band;  // the energy band of interval t-1
        if (t - 1 >= 1) band.coeffs[sym_e(r.id, t - 1)] = 1;
        band.lower = r.elo(t - 1);
        band.upper = r.ehi(t - 1);
        if (!rows_imply({band}, combined)) return false;
    }
    return true;
}

struct Theorem1Config {
    IdSet X, Yprime;   // live set and supplement-part target
    IdSet Wp;          // power-completed members of Yprime - X
    IdSet Vp;          // power-removed members of Yprime in the final RA
    int t = 1;
};

// Supplement-part then remove-all is implied by the direct remove-all that
// uses the power band exactly on Vp minus the supplemented members, given
// the previous interval's energy bands.
inline bool check_theorem1(const ResourceSet& rs, const Theorem1Config& cfg,
                           const Rat& slack_lo = Rat(0), const Rat& slack_hi = Rat(0)) {
    SymbolicInequality seed = seed_row(rs, cfg.X, cfg.t, slack_lo, slack_hi);
    IdSet added = calc_detail::difference(cfg.Yprime, cfg.X);
    SymbolicInequality chained = apply_SP(seed, cfg.X, cfg.Yprime, cfg.Wp, cfg.t, rs);
    chained = apply_RA(chained, cfg.Yprime, cfg.Vp, cfg.t, rs);

    IdSet direct_p, direct_e;
    for (const std::string& id : cfg.X) {
        if (cfg.Vp.count(id))
            direct_p.insert(id);
        else
            direct_e.insert(id);
    }
    SymbolicInequality direct = apply_RA(seed_row(rs, cfg.X, cfg.t, slack_lo, slack_hi), cfg.X,
                                         direct_p, cfg.t, rs);

    std::vector<SymbolicInequality> given{direct};
    if (cfg.t - 1 >= 1) {
        for (const FlexResource& r : rs.members()) {
            SymbolicInequality band;
            band.coeffs[sym_e(r.id, cfg.t - 1)] = 1;
            band.lower = r.elo(cfg.t - 1);
            band.upper = r.ehi(cfg.t - 1);
            given.push_back(band);
        }
    }
    return rows_imply(given, chained);
}

struct Theorem2Config {
    char proposition = 'a';  // a, b, c or d
    IdSet X, Y, Z;
    int t = 2;  // the second operation acts at t - 1
};

inline bool check_theorem2(const ResourceSet& rs, const Theorem2Config& cfg,
                           const Rat& slack_lo = Rat(0), const Rat& slack_hi = Rat(0)) {
    const IdSet all = calc_detail::fleet_ids(rs);
    auto minus = calc_detail::difference;
    SymbolicInequality seed = seed_row(rs, cfg.X, cfg.t, slack_lo, slack_hi);
    SymbolicInequality chain1 = seed, chain2 = seed;
    switch (cfg.proposition) {
        case 'a': {
            chain1 = apply_SA(chain1, cfg.X, cfg.Y, cfg.t, rs);
            chain1 = apply_SA(chain1, cfg.Y, cfg.Z, cfg.t - 1, rs);
            IdSet first = minus(all, [&] {
                IdSet u = cfg.X;
                u.insert(cfg.Z.begin(), cfg.Z.end());
                return u;
            }());
            chain2 = apply_SA(chain2, cfg.X, first, cfg.t, rs);
            for (const std::string& id : minus(cfg.X, cfg.Z))
                calc_detail::add_energy(chain2, rs, id, cfg.t - 1, -1);
            chain2 = apply_SA(chain2, minus(all, cfg.Z), cfg.Z, cfg.t - 1, rs);
            break;
        }
        case 'b': {
            chain1 = apply_SA(chain1, cfg.X, cfg.Y, cfg.t, rs);
            chain1 = apply_RA(chain1, cfg.Y, cfg.Z, cfg.t - 1, rs);
            chain2 = apply_SA(chain2, cfg.X, cfg.Z, cfg.t, rs);
            chain2 = apply_RA(chain2, cfg.Z, cfg.Z, cfg.t - 1, rs);
            break;
        }
        case 'c': {
            chain1 = apply_RA(chain1, cfg.X, cfg.Y, cfg.t, rs);
            chain1 = apply_SA(chain1, cfg.Y, cfg.Z, cfg.t - 1, rs);
            IdSet keep_p;  // X cap (N - Z)
            for (const std::string& id : cfg.X)
                if (!cfg.Z.count(id)) keep_p.insert(id);
            chain2 = apply_RA(chain2, cfg.X, keep_p, cfg.t, rs);
            for (const std::string& id : minus(minus(all, cfg.X), cfg.Z))
                calc_detail::add_energy(chain2, rs, id, cfg.t - 1, +1);
            chain2 = apply_SA(chain2, minus(all, cfg.Z), cfg.Z, cfg.t - 1, rs);
            break;
        }
        case 'd': {
            chain1 = apply_RA(chain1, cfg.X, cfg.Y, cfg.t, rs);
            chain1 = apply_RA(chain1, cfg.Y, cfg.Z, cfg.t - 1, rs);
            chain2 = apply_RA(chain2, cfg.X, cfg.Z, cfg.t, rs);
            chain2 = apply_RA(chain2, cfg.Z, cfg.Z, cfg.t - 1, rs);
            break;
        }
        default:
            throw std::invalid_argument("check_theorem2: proposition must be a..d");
    }
    return rows_imply({chain2}, chain1);
}

struct Theorem3Config {
    DirectionIndex la, lb;  // same stage q
    IdSet Xa, Xb;           // overlapping live sets
};

// Third-method elimination between two stage rows is implied by the retained
// family: the final-row system plus the stage rows of the derived paths.
inline bool check_theorem3(const ResourceSet& rs, const Theorem3Config& cfg) {
    if (cfg.la.q != cfg.lb.q || cfg.la.T != cfg.lb.T)
        throw std::invalid_argument("check_theorem3: paths must share the stage");
    IdSet overlap;
    for (const std::string& id : cfg.Xa)
        if (cfg.Xb.count(id)) overlap.insert(id);
    if (overlap.empty())
        throw std::invalid_argument("check_theorem3: live sets must overlap");
    const int q = cfg.la.q;
    const int T = cfg.la.T;
    const int t = T - q;
    IdSet Y = calc_detail::difference(cfg.Xa, overlap);
    IdSet Z = calc_detail::difference(cfg.Xb, overlap);

    SymbolicInequality row_a = psi_row(cfg.la, cfg.Xa, rs);
    SymbolicInequality row_b = psi_row(cfg.lb, cfg.Xb, rs);

    // Derived paths: overlap, union and the stripped originals.
    std::vector<std::vector<uint8_t>> paths;
    auto push_path = [&](const std::vector<uint8_t>& u) {
        for (uint8_t b : u)
            if (b) { paths.push_back(u); return; }
    };
    std::vector<uint8_t> u0(q, 0), uS(q, 0), ua1(q, 0), ub1(q, 0);
    for (int i = 0; i < q; ++i) {
        u0[i] = cfg.la.u[i] & cfg.lb.u[i];
        uS[i] = cfg.la.u[i] | cfg.lb.u[i];
        ua1[i] = cfg.la.u[i] & ~u0[i];
        ub1[i] = cfg.lb.u[i] & ~u0[i];
    }
    push_path(u0);
    push_path(uS);
    push_path(ua1);
    push_path(ub1);

    std::vector<SymbolicInequality> given;
    const AfrModel model = build_afr(rs, {1, false});
    for (std::size_t k = 0; k < model.directions.size(); ++k) {
        SymbolicInequality f;
        for (int tau : model.directions[k].S) {
            f.coeffs[sym_E(tau)] += 1;
            if (tau - 1 >= 1) f.coeffs[sym_E(tau - 1)] -= 1;
        }
        f.lower = model.lo[k];
        f.upper = model.hi[k];
        f.drop_zeros();
        given.push_back(std::move(f));
    }
    if (t >= 1) {
        for (const FlexResource& r : rs.members()) {
            SymbolicInequality band;
            band.coeffs[sym_e(r.id, t)] = 1;
            band.lower = r.elo(t);
            band.upper = r.ehi(t);
            given.push_back(band);
        }
    }
    std::vector<IdSet> sets{IdSet{}, Y, Z, overlap};
    for (const auto& u : paths) {
        DirectionIndex path = DirectionIndex::from_path(T, u);
        for (const IdSet& V : sets) given.push_back(psi_row(path, V, rs));
    }

    auto implied = [&](const SymbolicInequality& hi_row, const SymbolicInequality& lo_row) {
        auto combined = calc_detail::combine_upper_lower(hi_row, lo_row);
        std::set<std::string> vars;
        for (const SymbolicInequality& f : given) calc_detail::collect_vars(f, vars);
        for (const auto& [name, c] : combined.coeffs) vars.insert(name);
        LinearSystem sys(std::vector<std::string>(vars.begin(), vars.end()));
        for (const SymbolicInequality& f : given) calc_detail::add_two_sided(sys, f);
        return implies(sys, combined.coeffs, Rel::Le, combined.rhs);
    };
    return implied(row_a, row_b) && implied(row_b, row_a);
}

}  // namespace afr
