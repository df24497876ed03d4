#pragma once

#include "afr/rational.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace afr {

// One constraint direction of the aggregated region: a nonempty interval
// subset S whose aggregate power increments sum_{tau in S} (E(tau)-E(tau-1))
// carries a two-sided bound. The path fields (q, u, v, g, s, indicator)
// express the same subset in the elimination-tree indexing: u has length q,
// entry theta corresponds to interval T-theta+1, and the canonical stage is
// the one right after the subset's earliest interval was processed, so
// indicator = +1 exactly when u(q) = 1 (that is, when 1 is in S).
struct DirectionIndex {
    int T = 0;
    int q = 0;
    std::vector<uint8_t> u;  // u[theta-1], theta = 1..q
    std::vector<int8_t> v;   // first difference of u
    int g = 0;               // first theta with u(theta) = 1, so g = T - max(S) + 1
    int s = 0;               // start interval of the path, T - g + 1 = max(S)
    int indicator = 0;       // +1 iff u(q) = 1
    std::vector<int> S;      // sorted 1-based intervals
    uint64_t mask = 0;       // bit tau-1 set iff tau in S

    int min_interval() const { return S.front(); }
    int max_interval() const { return S.back(); }
    bool contains(int tau) const { return (mask >> (tau - 1)) & 1u; }

    static DirectionIndex from_path(int T, std::vector<uint8_t> path) {
        if (path.empty()) throw std::invalid_argument("direction path is empty");
        DirectionIndex d;
        d.T = T;
        d.q = static_cast<int>(path.size());
        if (d.q > T) throw std::invalid_argument("direction path longer than horizon");
        d.u = std::move(path);
        d.g = 0;
        for (int theta = 1; theta <= d.q; ++theta) {
            if (d.u[theta - 1] > 1) throw std::invalid_argument("path entries must be 0/1");
            if (d.u[theta - 1] == 1) {
                if (d.g == 0) d.g = theta;
                int tau = T - theta + 1;
                d.mask |= uint64_t(1) << (tau - 1);
            }
        }
        if (d.g == 0) throw std::invalid_argument("direction path has no nonzero entry");
        for (int tau = 1; tau <= T; ++tau)
            if (d.contains(tau)) d.S.push_back(tau);
        d.s = T - d.g + 1;
        d.indicator = d.u[d.q - 1] == 1 ? +1 : -1;
        d.v.resize(d.q);
        d.v[0] = static_cast<int8_t>(d.u[0]);
        for (int theta = 2; theta <= d.q; ++theta)
            d.v[theta - 1] = static_cast<int8_t>(d.u[theta - 1] - d.u[theta - 2]);
        return d;
    }

    // Canonical form of a subset: the stage at which the subset's row leaves
    // the elimination, one past min(S); subsets containing interval 1 only
    // close at q = T where e(0) = 0 pins the anchor, hence indicator +1.
    static DirectionIndex from_mask(int T, uint64_t mask) {
        if (mask == 0) throw std::invalid_argument("direction subset is empty");
        int min_tau = 0;
        for (int tau = 1; tau <= T; ++tau)
            if ((mask >> (tau - 1)) & 1u) { min_tau = tau; break; }
        int q = min_tau == 1 ? T : T - min_tau + 2;
        std::vector<uint8_t> path(q, 0);
        for (int theta = 1; theta <= q; ++theta) {
            int tau = T - theta + 1;
            path[theta - 1] = static_cast<uint8_t>((mask >> (tau - 1)) & 1u);
        }
        return from_path(T, std::move(path));
    }

    std::string subset_str() const {
        std::string out = "{";
        for (std::size_t i = 0; i < S.size(); ++i) {
            if (i) out += ",";
            out += std::to_string(S[i]);
        }
        return out + "}";
    }
};

// The retained family: one direction per nonempty subset of {1..T}, emitted
// in reflected-Gray order so consecutive entries differ in exactly one
// interval. Bit 0 of the Gray counter toggles most often and is mapped to
// interval T, which keeps incremental re-evaluation suffixes short.
inline std::vector<DirectionIndex> enumerate_directions(int T) {
    if (T < 0 || T > 62) throw std::invalid_argument("horizon out of supported range");
    std::vector<DirectionIndex> out;
    if (T == 0) return out;
    const uint64_t total = uint64_t(1) << T;
    out.reserve(total - 1);
    for (uint64_t i = 1; i < total; ++i) {
        uint64_t gray = i ^ (i >> 1);
        uint64_t mask = 0;
        for (int bit = 0; bit < T; ++bit)
            if ((gray >> bit) & 1u) mask |= uint64_t(1) << (T - bit - 1);
        out.push_back(DirectionIndex::from_mask(T, mask));
    }
    return out;
}

}  // namespace afr
