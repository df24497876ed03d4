#pragma once

#include "afr/rational.hpp"

#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace afr {

enum class Rel { Le, Ge, Eq };

inline const char* rel_str(Rel r) {
    switch (r) {
        case Rel::Le: return "<=";
        case Rel::Ge: return ">=";
        default: return "==";
    }
}

struct LinearRow {
    std::vector<Rat> a;  // dense, aligned with the owning system's variable order
    Rel rel = Rel::Le;
    Rat rhs;

    bool is_constant() const {
        for (const Rat& c : a)
            if (c != 0) return false;
        return true;
    }
    bool constant_holds() const {
        switch (rel) {
            case Rel::Le: return 0 <= rhs;
            case Rel::Ge: return 0 >= rhs;
            default: return rhs == 0;
        }
    }
};

// Finite system of linear relations over named variables, exact coefficients.
class LinearSystem {
public:
    LinearSystem() = default;
    explicit LinearSystem(std::vector<std::string> vars) : vars_(std::move(vars)) {
        for (std::size_t i = 0; i < vars_.size(); ++i) {
            if (!index_.emplace(vars_[i], static_cast<int>(i)).second)
                throw std::invalid_argument("duplicate variable name: " + vars_[i]);
        }
    }

    const std::vector<std::string>& variables() const { return vars_; }
    std::size_t var_count() const { return vars_.size(); }
    const std::vector<LinearRow>& rows() const { return rows_; }
    std::size_t row_count() const { return rows_.size(); }

    int index_of(const std::string& name) const {
        auto it = index_.find(name);
        return it == index_.end() ? -1 : it->second;
    }

    void add(const std::map<std::string, Rat>& coeffs, Rel rel, const Rat& rhs) {
        LinearRow row;
        row.a.assign(vars_.size(), Rat(0));
        for (const auto& [name, c] : coeffs) {
            int idx = index_of(name);
            if (idx < 0) throw std::invalid_argument("unknown variable in row: " + name);
            row.a[idx] = c;
        }
        row.rel = rel;
        row.rhs = rhs;
        add_row(std::move(row));
    }

    void add_dense(std::vector<Rat> coeffs, Rel rel, Rat rhs) {
        if (coeffs.size() != vars_.size())
            throw std::invalid_argument("dense row width mismatch");
        add_row(LinearRow{std::move(coeffs), rel, std::move(rhs)});
    }

    void add_row(LinearRow row) {
        if (row.a.size() != vars_.size()) throw std::invalid_argument("row width mismatch");
        if (row.is_constant() && !row.constant_holds())
            throw std::invalid_argument("constant row is false: 0 " +
                                        std::string(rel_str(row.rel)) + " " + rat_str(row.rhs));
        rows_.push_back(std::move(row));
    }

    // Same solution set, every row in <= form (== splits in two, >= negates).
    LinearSystem normalized() const {
        LinearSystem out(vars_);
        for (const LinearRow& r : rows_) {
            switch (r.rel) {
                case Rel::Le:
                    out.add_row(r);
                    break;
                case Rel::Ge:
                    out.add_row(negated(r));
                    break;
                case Rel::Eq: {
                    LinearRow le = r;
                    le.rel = Rel::Le;
                    out.add_row(le);
                    out.add_row(negated(le));
                    break;
                }
            }
        }
        return out;
    }

    std::string row_str(const LinearRow& r) const {
        std::ostringstream os;
        bool first = true;
        for (std::size_t j = 0; j < vars_.size(); ++j) {
            if (r.a[j] == 0) continue;
            if (!first) os << " + ";
            os << rat_str(r.a[j]) << "*" << vars_[j];
            first = false;
        }
        if (first) os << "0";
        os << " " << rel_str(r.rel) << " " << rat_str(r.rhs);
        return os.str();
    }

    // One row per line; the CLI --dump-lp format.
    std::string dump() const {
        std::ostringstream os;
        for (const LinearRow& r : rows_) os << row_str(r) << "\n";
        return os.str();
    }

private:
    static LinearRow negated(const LinearRow& r) {
        LinearRow out;
        out.a.reserve(r.a.size());
        for (const Rat& c : r.a) out.a.push_back(Rat(-c));
        out.rel = Rel::Le;
        out.rhs = -r.rhs;
        return out;
    }

    std::vector<std::string> vars_;
    std::unordered_map<std::string, int> index_;
    std::vector<LinearRow> rows_;
};

}  // namespace afr
