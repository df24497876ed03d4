#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "afr/fme.hpp"
#include "afr/synth.hpp"

using namespace afr;

namespace {

LinearSystem two_var(std::vector<std::tuple<long, long, long>> rows_xy_le) {
    LinearSystem s({"x", "y"});
    for (auto [cx, cy, rhs] : rows_xy_le) {
        std::map<std::string, Rat> coeffs;
        if (cx) coeffs["x"] = Rat(cx);
        if (cy) coeffs["y"] = Rat(cy);
        s.add(coeffs, Rel::Le, Rat(rhs));
    }
    return s;
}

}  // namespace

TEST_CASE("classify splits rows by pivot sign") {
    // -y <= -x  and  y <= 1
    LinearSystem s = two_var({{1, -1, 0}, {0, 1, 1}});
    FmePartition part = classify(s, "y");
    CHECK(part.neg == std::vector<int>{0});
    CHECK(part.pos == std::vector<int>{1});
    CHECK(part.zero.empty());

    FmePartition byx = classify(s, "x");
    CHECK(byx.pos == std::vector<int>{0});
    CHECK(byx.zero == std::vector<int>{1});
}

TEST_CASE("classify wants normalized rows") {
    LinearSystem s({"y"});
    s.add({{"y", Rat(1)}}, Rel::Ge, Rat(0));
    CHECK_THROWS_AS(classify(s, "y"), std::invalid_argument);
}

TEST_CASE("classify the individual polytope at the last interval") {
    FlexResource r("r", {Rat(0), Rat(0)}, {Rat(1), Rat(1)}, {Rat(0), Rat(0)}, {Rat(1), Rat(2)});
    LinearSystem sys = individual_polytope(r, "r").normalized();
    FmePartition part = classify(sys, energy_var("r", 2));
    CHECK(part.neg.size() == 2);  // one power, one energy lower bound
    CHECK(part.pos.size() == 2);
}

TEST_CASE("eliminate merges lower and upper rows pairwise") {
    // y >= x, y <= 1  ->  x <= 1
    LinearSystem s = two_var({{1, -1, 0}, {0, 1, 1}});
    LinearSystem out = eliminate(s, "y");
    REQUIRE(out.row_count() == 1);
    CHECK(out.var_count() == 1);
    CHECK(implies(out, {{"x", Rat(1)}}, Rel::Le, Rat(1)));
    CHECK_FALSE(implies(out, {{"x", Rat(1)}}, Rel::Le, rat_of(9, 10)));
}

TEST_CASE("eliminate keeps the pairwise row count") {
    // y >= x, y <= 2 - x, y <= 3/2: |N| = 1, |P| = 2, Z = 0 -> 2 rows
    LinearSystem s({"x", "y"});
    s.add({{"x", Rat(1)}, {"y", Rat(-1)}}, Rel::Le, Rat(0));
    s.add({{"x", Rat(1)}, {"y", Rat(1)}}, Rel::Le, Rat(2));
    s.add({{"y", Rat(1)}}, Rel::Le, rat_of(3, 2));
    LinearSystem out = eliminate(s, "y");
    CHECK(out.row_count() == 2);
    // rows 2x <= 2 and x <= 3/2; only x <= 1 survives pruning
    LinearSystem pruned = prune_redundant(out);
    CHECK(pruned.row_count() == 1);
    CHECK(implies(pruned, {{"x", Rat(1)}}, Rel::Le, Rat(1)));
    CHECK_FALSE(implies(pruned, {{"x", Rat(1)}}, Rel::Le, rat_of(99, 100)));
}

TEST_CASE("row count contract holds including trivial combinations") {
    Synth gen(21);
    for (int trial = 0; trial < 15; ++trial) {
        FlexResource r = gen.resource("r", 2 + static_cast<int>(gen.integer(0, 2)));
        LinearSystem sys = individual_polytope(r, "r").normalized();
        std::string var = energy_var("r", r.T);
        FmePartition part = classify(sys, var);
        LinearSystem out = eliminate(sys, var);
        CHECK(out.row_count() == part.zero.size() + part.neg.size() * part.pos.size());
    }
}

TEST_CASE("eliminate flags infeasible systems") {
    LinearSystem s({"y"});
    s.add({{"y", Rat(1)}}, Rel::Le, Rat(0));
    s.add({{"y", Rat(-1)}}, Rel::Le, Rat(-1));  // y >= 1
    CHECK_THROWS_AS(eliminate(s, "y"), FmeInfeasible);
}

TEST_CASE("prune keeps irredundant squares intact") {
    LinearSystem square = two_var({{1, 0, 1}, {-1, 0, 0}, {0, 1, 1}, {0, -1, 0}});
    LinearSystem pruned = prune_redundant(square);
    CHECK(pruned.row_count() == 4);
    CHECK(system_equivalent(square, pruned));

    LinearSystem dup({"x"});
    dup.add({{"x", Rat(1)}}, Rel::Le, Rat(1));
    dup.add({{"x", Rat(1)}}, Rel::Le, rat_of(3, 2));
    LinearSystem p2 = prune_redundant(dup);
    CHECK(p2.row_count() == 1);
    CHECK(implies(p2, {{"x", Rat(1)}}, Rel::Le, Rat(1)));
}

TEST_CASE("no row of a pruned system is implied by the rest") {
    Synth gen(22);
    ResourceSet rs = gen.fleet(2, 2);
    LinearSystem proj = aggregate_projection_oracle(rs);
    for (std::size_t k = 0; k < proj.row_count(); ++k) {
        LinearSystem rest(proj.variables());
        for (std::size_t i = 0; i < proj.row_count(); ++i)
            if (i != k) rest.add_row(proj.rows()[i]);
        CHECK_FALSE(implies(rest, proj, proj.rows()[k]));
    }
}

TEST_CASE("oracle on one unit resource") {
    ResourceSet rs({FlexResource("u", {Rat(0)}, {Rat(1)}, {Rat(0)}, {Rat(1)})});
    LinearSystem proj = aggregate_projection_oracle(rs);
    CHECK(proj.var_count() == 1);
    LinearSystem expected({aggregate_var(1)});
    expected.add({{aggregate_var(1), Rat(1)}}, Rel::Ge, Rat(0));
    expected.add({{aggregate_var(1), Rat(1)}}, Rel::Le, Rat(1));
    CHECK(system_equivalent(proj, expected));
}

TEST_CASE("oracle adds opposite unit intervals into a symmetric segment") {
    ResourceSet rs({FlexResource("a", {Rat(0)}, {Rat(1)}, {Rat(0)}, {Rat(1)}),
                    FlexResource("b", {Rat(-1)}, {Rat(0)}, {Rat(-1)}, {Rat(0)})});
    LinearSystem proj = aggregate_projection_oracle(rs);
    LinearSystem expected({aggregate_var(1)});
    expected.add({{aggregate_var(1), Rat(1)}}, Rel::Ge, Rat(-1));
    expected.add({{aggregate_var(1), Rat(1)}}, Rel::Le, Rat(1));
    CHECK(system_equivalent(proj, expected));
}

TEST_CASE("oracle guard refuses oversized instances") {
    Synth gen(23);
    ResourceSet rs = gen.fleet(5, 3);
    CHECK_THROWS_AS(aggregate_projection_oracle(rs), GuardError);
    CHECK_NOTHROW(aggregate_projection_oracle(rs, 15));
}

TEST_CASE("elimination order does not change the projection") {
    Synth gen(24);
    for (int trial = 0; trial < 3; ++trial) {
        ResourceSet rs = gen.fleet(2, 2);
        LinearSystem forward = aggregate_projection_oracle(rs);
        // reversed resource order within each interval
        std::vector<FlexResource> rev(rs.members().rbegin(), rs.members().rend());
        ResourceSet flipped(rev);
        LinearSystem backward = aggregate_projection_oracle(flipped);
        CHECK(system_equivalent(forward, backward));
    }
}

TEST_CASE("sampled member trajectories aggregate into the projection") {
    Synth gen(25);
    for (int trial = 0; trial < 4; ++trial) {
        ResourceSet rs = gen.fleet(1 + static_cast<int>(gen.integer(0, 2)), 2);
        LinearSystem proj = aggregate_projection_oracle(rs);
        for (int sample = 0; sample < 25; ++sample) {
            std::vector<Rat> total(rs.T(), Rat(0));
            for (const FlexResource& r : rs.members()) {
                std::vector<Rat> e = gen.trajectory(r);
                for (int t = 0; t < rs.T(); ++t) total[t] += e[t];
            }
            std::map<std::string, Rat> point;
            for (int t = 1; t <= rs.T(); ++t) point[aggregate_var(t)] = total[t - 1];
            for (const LinearRow& row : proj.rows()) {
                Rat lhs = 0;
                for (std::size_t j = 0; j < proj.var_count(); ++j)
                    lhs += row.a[j] * point.at(proj.variables()[j]);
                CHECK(lhs <= row.rhs);
            }
        }
    }
}

TEST_CASE("projection preserves solution sets step by step") {
    // soundness on a small joint system: points inside stay extendable,
    // points outside stay excluded, across one elimination
    Synth gen(26);
    ResourceSet rs = gen.fleet(2, 1);
    LinearSystem joint = joint_system(rs).normalized();
    std::string victim = energy_var(rs[0].id, 1);
    LinearSystem after = eliminate(joint, victim);
    for (int sample = 0; sample < 100; ++sample) {
        std::map<std::string, Rat> point;
        for (const std::string& v : after.variables())
            point[v] = gen.small_rational(4);
        bool inside_after = true;
        for (const LinearRow& row : after.rows()) {
            Rat lhs = 0;
            for (std::size_t j = 0; j < after.var_count(); ++j)
                lhs += row.a[j] * point.at(after.variables()[j]);
            if (!(lhs <= row.rhs)) inside_after = false;
        }
        // extendability in the original system
        LinearSystem pinned(joint.variables());
        for (const LinearRow& row : joint.rows()) pinned.add_row(row);
        for (const auto& [name, val] : point)
            pinned.add({{name, Rat(1)}}, Rel::Eq, val);
        bool extendable = feasible(pinned).status == LpStatus::Optimal;
        CHECK(inside_after == extendable);
    }
}
