#pragma once

#include "afr/linear_system.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace afr {

enum class LpStatus { Optimal, Infeasible, Unbounded };
enum class Sense { Max, Min };

struct LpOutcome {
    LpStatus status = LpStatus::Infeasible;
    Rat value;                           // optimum, when status == Optimal
    std::map<std::string, Rat> witness;  // satisfies every row, when status == Optimal
};

namespace detail {

// Dictionary simplex over exact rationals, Bland's entering rule in both
// phases so termination is unconditional. Free variables enter as x+ - x-.
class Simplex {
public:
    // max c.y  s.t.  A y <= b, y >= 0
    Simplex(std::vector<std::vector<Rat>> A, std::vector<Rat> b, std::vector<Rat> c)
        : m_(static_cast<int>(b.size())), n_(static_cast<int>(c.size())),
          basic_(m_), nonbasic_(n_ + 1),
          D_(m_ + 2, std::vector<Rat>(n_ + 2, Rat(0))) {
        for (int i = 0; i < m_; ++i)
            for (int j = 0; j < n_; ++j) D_[i][j] = A[i][j];
        for (int j = 0; j < n_; ++j) {
            nonbasic_[j] = j;
            D_[m_][j] = -c[j];
        }
        nonbasic_[n_] = -1;  // auxiliary column
        D_[m_ + 1][n_] = 1;
        for (int i = 0; i < m_; ++i) {
            basic_[i] = n_ + i;
            D_[i][n_] = -1;
            D_[i][n_ + 1] = b[i];
        }
    }

    LpStatus solve() {
        if (m_ > 0) {
            int r = 0;
            for (int i = 1; i < m_; ++i)
                if (D_[i][n_ + 1] < D_[r][n_ + 1]) r = i;
            if (D_[r][n_ + 1] < 0) {
                pivot(r, n_);
                if (!iterate(2) || D_[m_ + 1][n_ + 1] < 0) return LpStatus::Infeasible;
                for (int i = 0; i < m_; ++i) {
                    if (basic_[i] != -1) continue;
                    int s = -1;
                    for (int j = 0; j <= n_; ++j) {
                        if (D_[i][j] == 0) continue;
                        if (s == -1 || nonbasic_[j] < nonbasic_[s]) s = j;
                    }
                    if (s >= 0) pivot(i, s);
                }
            }
        }
        return iterate(1) ? LpStatus::Optimal : LpStatus::Unbounded;
    }

    Rat objective() const { return D_[m_][n_ + 1]; }

    std::vector<Rat> point() const {
        std::vector<Rat> y(n_, Rat(0));
        for (int i = 0; i < m_; ++i)
            if (basic_[i] >= 0 && basic_[i] < n_) y[basic_[i]] = D_[i][n_ + 1];
        return y;
    }

private:
    bool iterate(int phase) {
        const int obj = m_ + phase - 1;
        for (;;) {
            int s = -1;
            for (int j = 0; j <= n_; ++j) {
                if (nonbasic_[j] == -phase) continue;
                if (D_[obj][j] < 0 && (s == -1 || nonbasic_[j] < nonbasic_[s])) s = j;
            }
            if (s == -1) return true;
            int r = -1;
            for (int i = 0; i < m_; ++i) {
                if (D_[i][s] <= 0) continue;
                if (r == -1) {
                    r = i;
                    continue;
                }
                Rat lhs = D_[i][n_ + 1] * D_[r][s];
                Rat rhs = D_[r][n_ + 1] * D_[i][s];
                if (lhs < rhs || (lhs == rhs && basic_[i] < basic_[r])) r = i;
            }
            if (r == -1) return false;
            pivot(r, s);
        }
    }

    void pivot(int r, int s) {
        const Rat inv = Rat(1) / D_[r][s];
        for (int i = 0; i < m_ + 2; ++i) {
            if (i == r || D_[i][s] == 0) continue;
            const Rat factor = D_[i][s] * inv;
            for (int j = 0; j < n_ + 2; ++j)
                if (j != s) D_[i][j] -= D_[r][j] * factor;
            D_[i][s] = -factor;
        }
        for (int j = 0; j < n_ + 2; ++j)
            if (j != s) D_[r][j] *= inv;
        D_[r][s] = inv;
        std::swap(basic_[r], nonbasic_[s]);
    }

    int m_, n_;
    std::vector<int> basic_, nonbasic_;
    std::vector<std::vector<Rat>> D_;
};

struct StandardForm {
    std::vector<std::vector<Rat>> A;
    std::vector<Rat> b;
    std::size_t nvars;
};

// All rows to <=, each free variable split into a nonnegative pair.
inline StandardForm standard_form(const LinearSystem& s) {
    StandardForm out;
    out.nvars = s.var_count();
    LinearSystem norm = s.normalized();
    for (const LinearRow& r : norm.rows()) {
        std::vector<Rat> row;
        row.reserve(2 * out.nvars);
        for (const Rat& c : r.a) row.push_back(c);
        for (const Rat& c : r.a) row.push_back(-c);
        out.A.push_back(std::move(row));
        out.b.push_back(r.rhs);
    }
    return out;
}

inline std::map<std::string, Rat> recombine(const LinearSystem& s, const std::vector<Rat>& y) {
    std::map<std::string, Rat> point;
    const std::size_t n = s.var_count();
    for (std::size_t j = 0; j < n; ++j) point[s.variables()[j]] = y[j] - y[n + j];
    return point;
}

}  // namespace detail

inline LpOutcome optimize(const LinearSystem& s, const std::map<std::string, Rat>& objective,
                          Sense sense) {
    for (const auto& [name, c] : objective)
        if (s.index_of(name) < 0) throw std::invalid_argument("objective names unknown variable: " + name);
    auto sf = detail::standard_form(s);
    std::vector<Rat> c(2 * sf.nvars, Rat(0));
    for (const auto& [name, coeff] : objective) {
        int j = s.index_of(name);
        Rat signed_coeff = sense == Sense::Max ? coeff : Rat(-coeff);
        c[j] = signed_coeff;
        c[sf.nvars + j] = -signed_coeff;
    }
    detail::Simplex solver(std::move(sf.A), std::move(sf.b), std::move(c));
    LpOutcome out;
    out.status = solver.solve();
    if (out.status == LpStatus::Optimal) {
        out.value = sense == Sense::Max ? solver.objective() : Rat(-solver.objective());
        out.witness = detail::recombine(s, solver.point());
    }
    return out;
}

inline LpOutcome feasible(const LinearSystem& s) {
    LpOutcome out = optimize(s, {}, Sense::Max);
    if (out.status == LpStatus::Unbounded) out.status = LpStatus::Optimal;  // cannot happen; guard
    return out;
}

// True iff the row holds everywhere on s. An infeasible s implies everything.
inline bool implies(const LinearSystem& s, const std::map<std::string, Rat>& coeffs, Rel rel,
                    const Rat& rhs) {
    auto one_side = [&](Sense sense, const Rat& bound, bool upper) {
        LpOutcome r = optimize(s, coeffs, sense);
        if (r.status == LpStatus::Infeasible) return true;
        if (r.status == LpStatus::Unbounded) return false;
        return upper ? r.value <= bound : r.value >= bound;
    };
    switch (rel) {
        case Rel::Le: return one_side(Sense::Max, rhs, true);
        case Rel::Ge: return one_side(Sense::Min, rhs, false);
        default: return one_side(Sense::Max, rhs, true) && one_side(Sense::Min, rhs, false);
    }
}

inline bool implies(const LinearSystem& s, const LinearSystem& owner, const LinearRow& row) {
    std::map<std::string, Rat> coeffs;
    for (std::size_t j = 0; j < owner.var_count(); ++j)
        if (row.a[j] != 0) coeffs[owner.variables()[j]] = row.a[j];
    return implies(s, coeffs, row.rel, row.rhs);
}

// Mutual implication over identical variable sets.
inline bool system_equivalent(const LinearSystem& a, const LinearSystem& b) {
    std::vector<std::string> va = a.variables(), vb = b.variables();
    std::sort(va.begin(), va.end());
    std::sort(vb.begin(), vb.end());
    if (va != vb) throw std::invalid_argument("system_equivalent: variable sets differ");
    for (const LinearRow& r : a.rows())
        if (!implies(b, a, r)) return false;
    for (const LinearRow& r : b.rows())
        if (!implies(a, b, r)) return false;
    return true;
}

inline std::map<std::string, Rat> sample_vertex(const LinearSystem& s,
                                                const std::map<std::string, Rat>& objective) {
    LpOutcome r = optimize(s, objective, Sense::Max);
    if (r.status == LpStatus::Unbounded) throw std::domain_error("sample_vertex: unbounded direction");
    if (r.status == LpStatus::Infeasible) throw std::domain_error("sample_vertex: infeasible system");
    return r.witness;
}

}  // namespace afr
