#pragma once

#include "afr/flex_model.hpp"

#include <cstdint>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace afr {

// Seeded instance generation for tests, theorem sweeps and benchmarks.
// Everything is deterministic in the seed.
class Synth {
public:
    explicit Synth(uint64_t seed) : eng_(seed) {}

    std::mt19937_64& engine() { return eng_; }

    long integer(long lo, long hi) {
        return std::uniform_int_distribution<long>(lo, hi)(eng_);
    }

    // Rational with denominator at most max_den, value in [-2, 2].
    Rat small_rational(int max_den = 8) {
        long den = integer(1, max_den);
        long num = integer(-2 * den, 2 * den);
        return rat_of(num, den);
    }

    // Uniform grid point of [lo, hi] with grid steps of (hi-lo)/max_den.
    Rat between(const Rat& lo, const Rat& hi, int max_den = 8) {
        if (lo == hi) return lo;
        long k = integer(0, max_den);
        return lo + (hi - lo) * rat_of(k, max_den);
    }

    // Hypothesis-valid resource: random power band, energy band spanned by
    // two random admissible trajectories, then tightened. The band always
    // holds a feasible trajectory so tightening cannot come up empty.
    FlexResource resource(const std::string& id, int T, int max_den = 8) {
        std::vector<Rat> plo(T), phi(T);
        for (int t = 0; t < T; ++t) {
            Rat a = small_rational(max_den), b = small_rational(max_den);
            plo[t] = rat_min(a, b);
            phi[t] = rat_max(a, b);
        }
        std::vector<Rat> walk1(T), walk2(T), elo(T), ehi(T);
        Rat e1 = 0, e2 = 0;
        for (int t = 0; t < T; ++t) {
            e1 += between(plo[t], phi[t], max_den);
            e2 += between(plo[t], phi[t], max_den);
            walk1[t] = e1;
            walk2[t] = e2;
            elo[t] = rat_min(walk1[t], walk2[t]);
            ehi[t] = rat_max(walk1[t], walk2[t]);
        }
        return tighten_bounds(FlexResource(id, plo, phi, elo, ehi));
    }

    // Battery-style resource: symmetric power rating, flat capacity band.
    FlexResource battery(const std::string& id, int T, int max_den = 4) {
        Rat rating = rat_of(integer(1, 2 * max_den), max_den);
        Rat cap_lo = -rat_of(integer(0, 2 * max_den), max_den);
        Rat cap_hi = rat_of(integer(1, 3 * max_den), max_den);
        std::vector<Rat> plo(T, -rating), phi(T, rating), elo(T, cap_lo), ehi(T, cap_hi);
        return tighten_bounds(FlexResource(id, plo, phi, elo, ehi));
    }

    FlexResource generator(const std::string& id, int T, int max_den = 8) {
        std::vector<Rat> plo(T), phi(T);
        for (int t = 0; t < T; ++t) {
            Rat a = small_rational(max_den), b = small_rational(max_den);
            plo[t] = rat_min(a, b);
            phi[t] = rat_max(a, b);
        }
        return from_generator(id, plo, phi);
    }

    // Mixed fleet of the three resource styles.
    ResourceSet fleet(int N, int T, int max_den = 8) {
        std::vector<FlexResource> members;
        for (int i = 0; i < N; ++i) {
            std::string id = "r" + std::to_string(i);
            switch (integer(0, 2)) {
                case 0: members.push_back(battery(id, T, max_den)); break;
                case 1: members.push_back(generator(id, T, max_den)); break;
                default: members.push_back(resource(id, T, max_den)); break;
            }
        }
        return ResourceSet(std::move(members));
    }

    // Forward-sampled feasible trajectory of one resource (internal units,
    // e(0) = 0). The per-step increment window is nonempty under the
    // hypotheses, so no rejection is ever needed.
    std::vector<Rat> trajectory(const FlexResource& r, int max_den = 8) {
        std::vector<Rat> e(r.T);
        Rat cur = 0;
        for (int t = 1; t <= r.T; ++t) {
            Rat lo = rat_max(r.plo(t), r.elo(t) - cur);
            Rat hi = rat_min(r.phi(t), r.ehi(t) - cur);
            cur += between(lo, hi, max_den);
            e[t - 1] = cur;
        }
        return e;
    }

    // Random nonempty proper subset helpers for the theorem configurations.
    template <typename T>
    std::set<T> subset_of(const std::set<T>& base, bool allow_empty, bool allow_full) {
        std::set<T> out;
        if (base.empty()) return out;
        if (!allow_empty && !allow_full && base.size() <= 1)
            throw std::invalid_argument("subset_of: no nonempty proper subset exists");
        for (;;) {
            out.clear();
            for (const T& x : base)
                if (integer(0, 1)) out.insert(x);
            if (!allow_empty && out.empty()) continue;
            if (!allow_full && out.size() == base.size()) continue;
            return out;
        }
    }

private:
    std::mt19937_64 eng_;
};

}  // namespace afr
