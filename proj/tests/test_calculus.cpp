#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "afr/calculus.hpp"
#include "afr/theorem_suite.hpp"

using namespace afr;

namespace {

ResourceSet small_fleet(uint64_t seed, int N, int T) {
    Synth gen(seed);
    return gen.fleet(N, T);
}

Rat band_sum_lo(const ResourceSet& rs, int t) {
    Rat v = 0;
    for (const auto& r : rs.members()) v += r.elo(t);
    return v;
}

Rat band_sum_hi(const ResourceSet& rs, int t) {
    Rat v = 0;
    for (const auto& r : rs.members()) v += r.ehi(t);
    return v;
}

}  // namespace

TEST_CASE("SA from the trivial row builds the aggregated energy constraint") {
    ResourceSet rs = small_fleet(61, 2, 2);
    SymbolicInequality f = seed_row(rs, {}, 2);
    f = apply_SA(f, {}, {}, 2, rs);
    REQUIRE(f.coeffs.size() == 1);
    CHECK(f.coeffs.at(sym_E(2)) == 1);
    CHECK(f.lower == band_sum_lo(rs, 2));
    CHECK(f.upper == band_sum_hi(rs, 2));
    CHECK(valid_on_instance(f, rs));
}

TEST_CASE("all-power supplement then substitution gives the power constraint") {
    ResourceSet rs = small_fleet(62, 2, 2);
    IdSet all = calc_detail::fleet_ids(rs);
    SymbolicInequality f = seed_row(rs, {}, 2);
    f = apply_SA(f, {}, all, 2, rs);  // E(2) - sum e(1), power-completed
    CHECK(f.coeffs.at(sym_E(2)) == 1);
    for (const std::string& id : all) CHECK(f.coeffs.at(sym_e(id, 1)) == -1);
    f = apply_SA(f, all, {}, 1, rs);  // one more chaining: E(2) - E(1)
    REQUIRE(f.coeffs.size() == 2);
    CHECK(f.coeffs.at(sym_E(2)) == 1);
    CHECK(f.coeffs.at(sym_E(1)) == -1);
    Rat plo = 0, phi = 0;
    for (const auto& r : rs.members()) {
        plo += r.plo(2);
        phi += r.phi(2);
    }
    CHECK(f.lower == plo);
    CHECK(f.upper == phi);
    CHECK(valid_on_instance(f, rs));
}

TEST_CASE("SA/RA keep the sign pattern uniform") {
    ResourceSet rs = small_fleet(63, 3, 3);
    IdSet all = calc_detail::fleet_ids(rs);
    Synth gen(630);
    for (int trial = 0; trial < 10; ++trial) {
        IdSet X = gen.subset_of(all, false, false);
        SymbolicInequality f = seed_row(rs, X, 3);
        IdSet Y = gen.subset_of(calc_detail::difference(all, X), true, true);
        SymbolicInequality sa = apply_SA(f, X, Y, 3, rs);
        CHECK(sa.uniform_pattern(rs.T()));
        CHECK(valid_on_instance(sa, rs));
        IdSet Yr = gen.subset_of(X, true, true);
        SymbolicInequality ra = apply_RA(f, X, Yr, 3, rs);
        CHECK(ra.uniform_pattern(rs.T()));
        CHECK(valid_on_instance(ra, rs));
        // removal erases every interval-3 symbol
        CHECK(ra.live_set(3).empty());
        // supplements produce the aggregate with the live sign
        CHECK(sa.coeffs.at(sym_E(3)) == 1);
    }
}

TEST_CASE("definition boundaries: SP to the fleet and RP to nothing are rejected") {
    ResourceSet rs = small_fleet(64, 3, 2);
    IdSet all = calc_detail::fleet_ids(rs);
    IdSet x{*all.begin()};
    SymbolicInequality f = seed_row(rs, x, 2);
    CHECK_THROWS_AS(apply_SP(f, x, all, {}, 2, rs), ModelError);
    CHECK_THROWS_AS(apply_RP(f, x, {}, {}, 2, rs), ModelError);
    CHECK_THROWS_AS(apply_SP(f, x, x, {}, 2, rs), ModelError);
}

TEST_CASE("partial operations stay valid on the instance") {
    ResourceSet rs = small_fleet(65, 3, 3);
    IdSet all = calc_detail::fleet_ids(rs);
    Synth gen(650);
    for (int trial = 0; trial < 10; ++trial) {
        IdSet X = gen.subset_of(all, false, false);
        if (X.size() + 2 > all.size()) continue;
        IdSet extra = gen.subset_of(calc_detail::difference(all, X), false, false);
        IdSet Yp = X;
        Yp.insert(extra.begin(), extra.end());
        if (Yp.size() >= all.size()) continue;
        IdSet Cp = gen.subset_of(calc_detail::difference(Yp, X), true, true);
        SymbolicInequality f = seed_row(rs, X, 2);
        SymbolicInequality sp = apply_SP(f, X, Yp, Cp, 2, rs);
        CHECK(valid_on_instance(sp, rs));
        // round trip: removing the added members again keeps validity
        IdSet back = gen.subset_of(calc_detail::difference(Yp, X), true, true);
        SymbolicInequality rp = apply_RP(sp, Yp, X, back, 2, rs);
        CHECK(valid_on_instance(rp, rs));
    }
}

TEST_CASE("psi rows are implied by the joint polytope at every stage") {
    ResourceSet rs = small_fleet(66, 2, 3);
    IdSet all = calc_detail::fleet_ids(rs);
    Synth gen(660);
    for (int q = 1; q <= rs.T(); ++q) {
        for (int trial = 0; trial < 4; ++trial) {
            std::vector<uint8_t> u(q, 0);
            bool nonzero = false;
            for (int i = 0; i < q; ++i) {
                u[i] = static_cast<uint8_t>(gen.integer(0, 1));
                nonzero |= u[i] != 0;
            }
            if (!nonzero) u[gen.integer(0, q - 1)] = 1;
            DirectionIndex l = DirectionIndex::from_path(rs.T(), u);
            IdSet X = gen.subset_of(all, true, true);
            SymbolicInequality row = psi_row(l, X, rs);
            CHECK(valid_on_instance(row, rs));
        }
    }
}

TEST_CASE("phi at T=1 single resource reproduces the energy bound") {
    Synth gen(67);
    ResourceSet rs({gen.fleet(1, 1)[0]});
    DirectionIndex d = DirectionIndex::from_mask(1, 1);
    auto [lo_in, hi_in] = phi_bounds(d, {rs[0].id}, rs);
    auto [lo_out, hi_out] = phi_bounds(d, {}, rs);
    CHECK(rat_min(hi_in, hi_out) == rs[0].ehi(1));
    CHECK(rat_max(lo_in, lo_out) == rs[0].elo(1));
}

TEST_CASE("phi minimized over memberships reproduces single-run build bounds") {
    Synth gen(68);
    for (int trial = 0; trial < 5; ++trial) {
        int N = 1 + static_cast<int>(gen.integer(0, 2));
        int T = 1 + static_cast<int>(gen.integer(0, 2));
        ResourceSet rs = gen.fleet(N, T);
        AfrModel m = build_afr(rs);
        for (std::size_t k = 0; k < m.direction_count(); ++k) {
            const DirectionIndex& d = m.directions[k];
            if (!single_run(d)) continue;
            // per-resource minimum over the two membership roles
            Rat hi = 0, lo = 0;
            for (const auto& r : rs.members()) {
                ResourceSet solo({r});
                auto [l_in, h_in] = phi_bounds(d, {r.id}, solo);
                auto [l_out, h_out] = phi_bounds(d, {}, solo);
                hi += rat_min(h_in, h_out);
                lo += rat_max(l_in, l_out);
            }
            CHECK(hi == m.hi[k]);
            CHECK(lo == m.lo[k]);
        }
    }
}

TEST_CASE("phi bounds are valid outer bounds on every direction") {
    Synth gen(69);
    ResourceSet rs = gen.fleet(2, 3);
    AfrModel m = build_afr(rs);
    IdSet all = calc_detail::fleet_ids(rs);
    Synth pick(690);
    for (std::size_t k = 0; k < m.direction_count(); ++k) {
        for (int trial = 0; trial < 3; ++trial) {
            IdSet X = pick.subset_of(all, true, true);
            auto [lo, hi] = phi_bounds(m.directions[k], X, rs);
            CHECK(hi >= m.hi[k]);
            CHECK(lo <= m.lo[k]);
        }
    }
}

TEST_CASE("first-method rows are redundant against the previous energy band") {
    Synth gen(70);
    for (int trial = 0; trial < 5; ++trial) {
        ResourceSet rs = gen.fleet(1 + static_cast<int>(gen.integer(0, 2)),
                                   2 + static_cast<int>(gen.integer(0, 2)));
        for (int t = 1; t <= rs.T(); ++t) CHECK(check_method1_redundancy(rs, t));
    }
}

TEST_CASE("a hypothesis-2 violation can defeat the first-method redundancy") {
    // documented, not asserted for all instances: this one does fail
    FlexResource raw("w", {Rat(0), Rat(0)}, {Rat(1), Rat(1)}, {Rat(0), Rat(0)}, {Rat(1), Rat(3)});
    std::vector<FlexResource> members{raw};
    // bypass set validation by checking the member directly
    SymbolicInequality combined;
    combined.coeffs[sym_e("w", 1)] = 1;
    combined.lower = raw.elo(2) - raw.phi(2);  // 0 - 1
    combined.upper = raw.ehi(2) - raw.plo(2);  // 3 - 0
    SymbolicInequality band;
    band.coeffs[sym_e("w", 1)] = 1;
    band.lower = raw.elo(1);
    band.upper = raw.ehi(1);
    CHECK(rows_imply({band}, combined));  // upper side still fine here
    combined.upper = raw.ehi(2) - raw.phi(2) - 3;  // an artificially tight row fails
    CHECK_FALSE(rows_imply({band}, combined));
}

TEST_CASE("theorem 1 holds across seeded configurations") {
    for (uint64_t seed = 0; seed < 12; ++seed) {
        Synth gen(seed + 711);
        int N = 2 + static_cast<int>(gen.integer(0, 1));
        int T = 2 + static_cast<int>(gen.integer(0, 1));
        ResourceSet rs = gen.fleet(N, T);
        auto cfg = suite_detail::sample_theorem1(gen, rs);
        CAPTURE(seed);
        CHECK(check_theorem1(rs, cfg, gen.between(Rat(0), Rat(1)), gen.between(Rat(0), Rat(1))));
    }
}

TEST_CASE("loop chains collapse to a single removal") {
    // SP-RP-SP-RA implied by one direct RA for some power split
    Synth gen(72);
    ResourceSet rs = gen.fleet(3, 2);
    IdSet all = calc_detail::fleet_ids(rs);
    std::vector<std::string> ids(all.begin(), all.end());
    IdSet X{ids[0]};
    const int t = 2;
    SymbolicInequality f = seed_row(rs, X, t);
    f = apply_SP(f, X, {ids[0], ids[1]}, {ids[1]}, t, rs);
    f = apply_RP(f, {ids[0], ids[1]}, {ids[1]}, {ids[0]}, t, rs);
    f = apply_SP(f, {ids[1]}, {ids[1], ids[2]}, {}, t, rs);
    f = apply_RA(f, {ids[1], ids[2]}, {ids[1]}, t, rs);

    std::vector<SymbolicInequality> bands;
    for (const auto& r : rs.members()) {
        SymbolicInequality band;
        band.coeffs[sym_e(r.id, t - 1)] = 1;
        band.lower = r.elo(t - 1);
        band.upper = r.ehi(t - 1);
        bands.push_back(band);
    }
    bool implied_by_some = false;
    for (unsigned split = 0; split < 2 && !implied_by_some; ++split) {
        IdSet Cp = split ? X : IdSet{};
        SymbolicInequality direct = apply_RA(seed_row(rs, X, t), X, Cp, t, rs);
        std::vector<SymbolicInequality> given = bands;
        given.push_back(direct);
        implied_by_some = rows_imply(given, f);
    }
    CHECK(implied_by_some);
}

TEST_CASE("theorem 2 cases a-d hold across seeded configurations") {
    for (char proposition : {'a', 'b', 'c', 'd'}) {
        for (uint64_t seed = 0; seed < 8; ++seed) {
            Synth gen(seed * 4 + static_cast<uint64_t>(proposition));
            int N = 2 + static_cast<int>(gen.integer(0, 1));
            int T = 2 + static_cast<int>(gen.integer(0, 1));
            ResourceSet rs = gen.fleet(N, T);
            auto cfg = suite_detail::sample_theorem2(gen, rs, proposition);
            CAPTURE(proposition);
            CAPTURE(seed);
            CHECK(check_theorem2(rs, cfg, gen.between(Rat(0), Rat(1)), gen.between(Rat(0), Rat(1))));
        }
    }
}

TEST_CASE("theorem 2 case b with empty removal target is trivially implied") {
    Synth gen(73);
    ResourceSet rs = gen.fleet(2, 2);
    IdSet all = calc_detail::fleet_ids(rs);
    std::vector<std::string> ids(all.begin(), all.end());
    Theorem2Config cfg;
    cfg.proposition = 'b';
    cfg.X = {ids[0]};
    cfg.Y = {ids[1]};
    cfg.Z = {};
    cfg.t = 2;
    CHECK(check_theorem2(rs, cfg));
}

TEST_CASE("theorem 3 holds for every indicator pairing and self-combination") {
    for (uint64_t seed = 0; seed < 4; ++seed) {
        Synth gen(seed + 741);
        ResourceSet rs = gen.fleet(3, 3);
        for (int pa = 0; pa < 2; ++pa)
            for (int pb = 0; pb < 2; ++pb) {
                auto cfg = suite_detail::sample_theorem3(gen, rs, pa == 1, pb == 1);
                CAPTURE(seed);
                CAPTURE(pa);
                CAPTURE(pb);
                CHECK(check_theorem3(rs, cfg));
            }
        // self-combination
        auto cfg = suite_detail::sample_theorem3(gen, rs, true, true);
        cfg.lb = cfg.la;
        cfg.Xb = cfg.Xa;
        CHECK(check_theorem3(rs, cfg));
    }
}

TEST_CASE("theorem 3 rejects disjoint live sets") {
    Synth gen(75);
    ResourceSet rs = gen.fleet(2, 2);
    std::vector<std::string> ids;
    for (const auto& r : rs.members()) ids.push_back(r.id);
    Theorem3Config cfg;
    cfg.la = DirectionIndex::from_path(2, {1, 0});
    cfg.lb = DirectionIndex::from_path(2, {1, 1});
    cfg.Xa = {ids[0]};
    cfg.Xb = {ids[1]};
    CHECK_THROWS_AS(check_theorem3(rs, cfg), std::invalid_argument);
}

TEST_CASE("the injected transcription fault is caught by the suites") {
    sa_bound_mutation() = true;
    int failures = 0;
    for (uint64_t seed = 0; seed < 6; ++seed) {
        for (const CheckRecord& rec : run_theorem_suite(seed, 3, 3))
            if (!rec.pass) ++failures;
    }
    sa_bound_mutation() = false;
    CHECK(failures > 0);
    for (uint64_t seed = 0; seed < 6; ++seed)
        for (const CheckRecord& rec : run_theorem_suite(seed, 3, 3)) CHECK(rec.pass);
}
