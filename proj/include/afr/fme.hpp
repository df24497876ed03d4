#pragma once

#include "afr/flex_model.hpp"
#include "afr/simplex.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace afr {

struct FmeInfeasible : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct GuardError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct FmePartition {
    std::vector<int> neg, zero, pos;  // row indices by sign of the pivot coefficient
};

// Rows must already be in <= form.
inline FmePartition classify(const LinearSystem& s, const std::string& var) {
    int col = s.index_of(var);
    if (col < 0) throw std::invalid_argument("classify: unknown variable " + var);
    FmePartition part;
    for (std::size_t i = 0; i < s.rows().size(); ++i) {
        const LinearRow& r = s.rows()[i];
        if (r.rel != Rel::Le) throw std::invalid_argument("classify: rows must be normalized to <=");
        const Rat& c = r.a[col];
        if (c < 0)
            part.neg.push_back(static_cast<int>(i));
        else if (c > 0)
            part.pos.push_back(static_cast<int>(i));
        else
            part.zero.push_back(static_cast<int>(i));
    }
    return part;
}

// One elimination step: |neg| * |pos| combined rows plus the untouched ones,
// over the variables minus var. Constant-false combinations mean the system
// was infeasible and raise FmeInfeasible; constant-true rows are kept so the
// row-count contract |result| = |Z| + |N|*|P| holds (pruning is separate).
inline LinearSystem eliminate(const LinearSystem& input, const std::string& var) {
    LinearSystem s = input.normalized();
    int col = s.index_of(var);
    if (col < 0) throw std::invalid_argument("eliminate: unknown variable " + var);
    FmePartition part = classify(s, var);

    std::vector<std::string> kept_vars;
    for (const std::string& v : s.variables())
        if (v != var) kept_vars.push_back(v);
    LinearSystem out(kept_vars);

    auto strip = [&](const LinearRow& r) {
        std::vector<Rat> a;
        a.reserve(r.a.size() - 1);
        for (std::size_t j = 0; j < r.a.size(); ++j)
            if (static_cast<int>(j) != col) a.push_back(r.a[j]);
        return a;
    };

    for (int zi : part.zero) out.add_dense(strip(s.rows()[zi]), Rel::Le, s.rows()[zi].rhs);
    for (int ni : part.neg) {
        const LinearRow& lo = s.rows()[ni];
        for (int pi : part.pos) {
            const LinearRow& hi = s.rows()[pi];
            const Rat& an = lo.a[col];  // < 0
            const Rat& ap = hi.a[col];  // > 0
            std::vector<Rat> a(s.var_count(), Rat(0));
            for (std::size_t j = 0; j < s.var_count(); ++j)
                a[j] = hi.a[j] / ap - lo.a[j] / an;
            Rat rhs = hi.rhs / ap - lo.rhs / an;
            LinearRow combined{std::vector<Rat>(), Rel::Le, rhs};
            for (std::size_t j = 0; j < a.size(); ++j)
                if (static_cast<int>(j) != col) combined.a.push_back(a[j]);
            if (combined.is_constant() && !combined.constant_holds())
                throw FmeInfeasible("eliminate: infeasible (0 <= " + rat_str(rhs) + ")");
            out.add_row(std::move(combined));
        }
    }
    return out;
}

namespace detail {

// Scale each <= row so its leading nonzero coefficient has absolute value one;
// identical directions keep only the tightest rhs. Cheap pass before the LP
// pruning that does the real work.
inline LinearSystem syntactic_reduce(const LinearSystem& input) {
    LinearSystem s = input.normalized();
    LinearSystem out(s.variables());
    std::map<std::vector<Rat>, Rat> best;
    std::vector<std::vector<Rat>> order;
    for (const LinearRow& r : s.rows()) {
        if (r.is_constant()) continue;  // trivially true by construction
        int lead = -1;
        for (std::size_t j = 0; j < r.a.size(); ++j)
            if (r.a[j] != 0) { lead = static_cast<int>(j); break; }
        Rat scale = abs(r.a[lead]);
        std::vector<Rat> a(r.a.size());
        for (std::size_t j = 0; j < r.a.size(); ++j) a[j] = r.a[j] / scale;
        Rat rhs = r.rhs / scale;
        auto it = best.find(a);
        if (it == best.end()) {
            best.emplace(a, rhs);
            order.push_back(a);
        } else if (rhs < it->second) {
            it->second = rhs;
        }
    }
    for (const auto& a : order) out.add_dense(a, Rel::Le, best.at(a));
    return out;
}

}  // namespace detail

// Irredundant equivalent system: no surviving row is implied by the others.
inline LinearSystem prune_redundant(const LinearSystem& input) {
    LinearSystem s = detail::syntactic_reduce(input);
    std::vector<LinearRow> rows(s.rows().begin(), s.rows().end());
    std::vector<bool> alive(rows.size(), true);
    for (std::size_t k = 0; k < rows.size(); ++k) {
        LinearSystem rest(s.variables());
        for (std::size_t i = 0; i < rows.size(); ++i)
            if (alive[i] && i != k) rest.add_row(rows[i]);
        if (implies(rest, s, rows[k])) alive[k] = false;
    }
    LinearSystem out(s.variables());
    for (std::size_t i = 0; i < rows.size(); ++i)
        if (alive[i]) out.add_row(rows[i]);
    return out;
}

inline std::string aggregate_var(int t) { return "E_" + std::to_string(t); }

// Joint NT-variable system of a fleet: every individual constraint plus the
// defining equalities E(t) = sum_i e_i(t).
inline LinearSystem joint_system(const ResourceSet& rs) {
    const int T = rs.T();
    std::vector<std::string> vars;
    for (const FlexResource& r : rs.members())
        for (int t = 1; t <= T; ++t) vars.push_back(energy_var(r.id, t));
    for (int t = 1; t <= T; ++t) vars.push_back(aggregate_var(t));
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
    for (int t = 1; t <= T; ++t) {
        std::map<std::string, Rat> def{{aggregate_var(t), Rat(1)}};
        for (const FlexResource& r : rs.members()) def[energy_var(r.id, t)] = -1;
        sys.add(def, Rel::Eq, Rat(0));
    }
    return sys;
}

// Ground-truth aggregated region: project the joint polytope onto E(1..T) by
// eliminating every e_i(t), last interval first, pruning after each variable.
// Desk-scale only; the closed-form build is the production path.
inline LinearSystem aggregate_projection_oracle(const ResourceSet& rs, long guard_nt = 12) {
    const long nt = static_cast<long>(rs.N()) * rs.T();
    if (nt > guard_nt)
        throw GuardError("aggregate_projection_oracle: N*T = " + std::to_string(nt) +
                         " exceeds guard " + std::to_string(guard_nt));
    LinearSystem sys = joint_system(rs).normalized();
    for (int t = rs.T(); t >= 1; --t) {
        for (const FlexResource& r : rs.members()) {
            sys = eliminate(sys, energy_var(r.id, t));
            sys = prune_redundant(sys);
        }
    }
    return prune_redundant(sys);
}

}  // namespace afr
