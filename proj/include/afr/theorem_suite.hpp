#pragma once

#include "afr/calculus.hpp"
#include "afr/synth.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace afr {

struct CheckRecord {
    std::string check;
    uint64_t seed = 0;
    bool pass = false;
};

namespace suite_detail {

inline IdSet pick_subset(Synth& gen, const IdSet& base, bool allow_empty, bool allow_full) {
    return gen.subset_of(base, allow_empty, allow_full);
}

inline Theorem1Config sample_theorem1(Synth& gen, const ResourceSet& rs) {
    IdSet all = calc_detail::fleet_ids(rs);
    Theorem1Config cfg;
    cfg.t = 1 + static_cast<int>(gen.integer(0, rs.T() - 1));
    for (;;) {
        cfg.X = pick_subset(gen, all, true, false);
        if (cfg.X.size() + 2 <= all.size()) break;  // room for a proper superset
    }
    IdSet rest = calc_detail::difference(all, cfg.X);
    for (;;) {
        IdSet extra = pick_subset(gen, rest, false, false);
        cfg.Yprime = cfg.X;
        cfg.Yprime.insert(extra.begin(), extra.end());
        if (cfg.Yprime.size() < all.size()) break;
    }
    IdSet added = calc_detail::difference(cfg.Yprime, cfg.X);
    cfg.Wp = pick_subset(gen, added, true, true);
    cfg.Vp = pick_subset(gen, cfg.Yprime, true, true);
    return cfg;
}

inline Theorem2Config sample_theorem2(Synth& gen, const ResourceSet& rs, char proposition) {
    IdSet all = calc_detail::fleet_ids(rs);
    Theorem2Config cfg;
    cfg.proposition = proposition;
    cfg.t = 2 + static_cast<int>(gen.integer(0, rs.T() - 2));
    cfg.X = pick_subset(gen, all, false, false);
    if (proposition == 'a' || proposition == 'b') {
        cfg.Y = pick_subset(gen, calc_detail::difference(all, cfg.X), false, true);
        cfg.Z = proposition == 'a' ? pick_subset(gen, calc_detail::difference(all, cfg.Y), true, true)
                                   : pick_subset(gen, cfg.Y, true, true);
    } else {
        cfg.Y = pick_subset(gen, cfg.X, false, true);
        cfg.Z = proposition == 'c' ? pick_subset(gen, calc_detail::difference(all, cfg.Y), true, true)
                                   : pick_subset(gen, cfg.Y, true, true);
    }
    return cfg;
}

// Paths with the requested last entries so every indicator pairing occurs.
inline Theorem3Config sample_theorem3(Synth& gen, const ResourceSet& rs, bool last_a,
                                      bool last_b) {
    const int T = rs.T();
    Theorem3Config cfg;
    int q = 2 + static_cast<int>(gen.integer(0, T - 2));
    auto path = [&](bool last) {
        for (;;) {
            std::vector<uint8_t> u(q, 0);
            for (int i = 0; i + 1 < q; ++i) u[i] = static_cast<uint8_t>(gen.integer(0, 1));
            u[q - 1] = last ? 1 : 0;
            for (uint8_t b : u)
                if (b) return u;
        }
    };
    cfg.la = DirectionIndex::from_path(T, path(last_a));
    cfg.lb = DirectionIndex::from_path(T, path(last_b));
    IdSet all = calc_detail::fleet_ids(rs);
    for (;;) {
        cfg.Xa = pick_subset(gen, all, false, true);
        cfg.Xb = pick_subset(gen, all, false, true);
        for (const std::string& id : cfg.Xa)
            if (cfg.Xb.count(id)) return cfg;
    }
}

}  // namespace suite_detail

// One seeded pass of every checker; N >= 2 and T >= 2 keep all samplers
// admissible. Failures are data for the report, not exceptions.
inline std::vector<CheckRecord> run_theorem_suite(uint64_t seed, int N, int T) {
    std::vector<CheckRecord> records;
    Synth gen(seed * 0x9e3779b97f4a7c15ULL + 12345);
    ResourceSet rs = gen.fleet(N, T);

    {
        int t = 1 + static_cast<int>(gen.integer(0, T - 1));
        records.push_back({"method1_redundancy", seed, check_method1_redundancy(rs, t)});
    }
    {
        auto cfg = suite_detail::sample_theorem1(gen, rs);
        Rat s1 = gen.between(Rat(0), Rat(2), 4), s2 = gen.between(Rat(0), Rat(2), 4);
        records.push_back({"theorem1_sp_ra", seed, check_theorem1(rs, cfg, s1, s2)});
    }
    for (char proposition : {'a', 'b', 'c', 'd'}) {
        auto cfg = suite_detail::sample_theorem2(gen, rs, proposition);
        Rat s1 = gen.between(Rat(0), Rat(2), 4), s2 = gen.between(Rat(0), Rat(2), 4);
        records.push_back({std::string("theorem2_") + proposition, seed,
                           check_theorem2(rs, cfg, s1, s2)});
    }
    for (int pa = 0; pa < 2; ++pa)
        for (int pb = 0; pb < 2; ++pb) {
            auto cfg = suite_detail::sample_theorem3(gen, rs, pa == 1, pb == 1);
            std::string name = std::string("theorem3_") + (pa ? "p" : "n") + (pb ? "p" : "n");
            records.push_back({name, seed, check_theorem3(rs, cfg)});
        }
    return records;
}

}  // namespace afr
