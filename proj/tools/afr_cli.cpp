// Batch front end: validation, region construction, merging, membership,
// disaggregation, oracle comparison, theorem suites and benchmarks.
//
// Exit codes: 0 success, 1 semantic failure, 2 input error, 3 guard refusal.

#include "afr/calculus.hpp"
#include "afr/io.hpp"
#include "afr/theorem_suite.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace afr;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitSemantic = 1;
constexpr int kExitInput = 2;
constexpr int kExitGuard = 3;

std::string read_all(const std::string& path) {
    if (path == "-") {
        std::ostringstream os;
        os << std::cin.rdbuf();
        return os.str();
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_all(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot open '" + path + "' for writing");
    out << text;
}

ResourceFormat detect_format(const std::string& path, const std::string& forced) {
    if (forced == "json") return ResourceFormat::Json;
    if (forced == "csv") return ResourceFormat::Csv;
    if (path.size() >= 4 && path.substr(path.size() - 4) == ".csv") return ResourceFormat::Csv;
    return ResourceFormat::Json;
}

double ms_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
        .count();
}

struct CliOptions {
    std::string input, output, profile_path, afr_path, resource_path;
    std::string in_format;            // "", "json", "csv"
    std::string out_format = "json";  // afr document format
    bool tighten = false;
    bool dump_lp = false;
    bool no_contributions = false;
    unsigned threads = 0;  // 0 = machine parallelism
    long max_nt = 12;
    int seeds = 100;
    int size_n = 3, size_t_ = 3;
    bool inject_mutation = false;
    std::vector<int> bench_n{100, 200, 400, 800};
    std::vector<int> bench_t{10};
    std::vector<std::string> merge_inputs;
};

int cmd_validate(const CliOptions& opt) {
    std::vector<FlexResource> raw =
        parse_resources_raw(read_all(opt.input), detect_format(opt.input, opt.in_format));
    bool all_ok = true;
    std::vector<FlexResource> repaired;
    for (FlexResource& r : raw) {
        ValidationReport rep = validate_hypotheses(r);
        if (rep.empty()) {
            std::cout << "resource " << r.id << ": ok\n";
            repaired.push_back(r);
            continue;
        }
        for (const Violation& v : rep)
            std::cout << "resource " << r.id << ": hypothesis " << v.hypothesis << " at t=" << v.t
                      << " (" << v.detail << ": " << rat_str(v.lhs) << " vs " << rat_str(v.rhs)
                      << ")\n";
        if (!opt.tighten) {
            all_ok = false;
            continue;
        }
        try {
            FlexResource fixed = tighten_bounds(r);
            std::cout << "resource " << r.id << ": tightened\n";
            repaired.push_back(std::move(fixed));
        } catch (const ModelError& e) {
            std::cout << "resource " << r.id << ": unrepairable (" << e.what() << ")\n";
            all_ok = false;
        }
    }
    if (!all_ok) return kExitSemantic;
    if (opt.tighten) {
        std::string out_path = opt.output.empty() ? opt.input + ".tightened.json" : opt.output;
        write_all(out_path, serialize_resources(repaired));
        std::cout << "wrote " << out_path << "\n";
    }
    return kExitOk;
}

int cmd_build(const CliOptions& opt) {
    ResourceSet rs = parse_resources(read_all(opt.input),
                                     detect_format(opt.input, opt.in_format), opt.tighten);
    auto start = std::chrono::steady_clock::now();
    BuildOptions bopt;
    bopt.threads = opt.threads;
    bopt.keep_contributions = !opt.no_contributions;
    AfrModel m = build_afr(rs, bopt);
    double elapsed = ms_since(start);
    Json stats;
    stats["constraints"] = m.inequality_count();
    stats["directions"] = m.direction_count();
    stats["resources"] = rs.N();
    stats["build_ms"] = elapsed;
    if (opt.out_format == "csv")
        write_all(opt.output, serialize_afr_csv(m));
    else
        write_all(opt.output, serialize_afr(m, stats));
    if (opt.dump_lp) std::cerr << afr_as_system(m).dump();
    return kExitOk;
}

int cmd_merge(const CliOptions& opt) {
    if (opt.merge_inputs.size() < 2) throw ParseError("merge needs at least two documents");
    AfrModel acc = parse_afr(read_all(opt.merge_inputs[0]));
    for (std::size_t i = 1; i < opt.merge_inputs.size(); ++i)
        acc = merge(acc, parse_afr(read_all(opt.merge_inputs[i])));
    Json stats;
    stats["constraints"] = acc.inequality_count();
    stats["merged_documents"] = opt.merge_inputs.size();
    write_all(opt.output, serialize_afr(acc, stats));
    return kExitOk;
}

int cmd_add(const CliOptions& opt) {
    AfrModel acc = parse_afr(read_all(opt.afr_path));
    ResourceSet extra = parse_resources(read_all(opt.resource_path),
                                        detect_format(opt.resource_path, opt.in_format));
    for (const FlexResource& r : extra.members()) acc = add_resource(acc, r);
    Json stats;
    stats["constraints"] = acc.inequality_count();
    stats["added_resources"] = extra.N();
    write_all(opt.output, serialize_afr(acc, stats));
    return kExitOk;
}

int cmd_check(const CliOptions& opt) {
    AfrModel m = parse_afr(read_all(opt.afr_path));
    std::vector<Rat> profile = parse_profile(read_all(opt.profile_path));
    MembershipVerdict verdict = check_membership(m, profile);
    if (verdict.inside) {
        std::cout << "inside (no violated constraints)\n";
        return kExitOk;
    }
    for (const MembershipViolation& v : verdict.violations)
        std::cout << "violated: S=" << m.directions[v.direction].subset_str()
                  << (v.upper ? " upper " : " lower ") << rat_str(v.bound) << " vs value "
                  << rat_str(v.value) << "\n";
    return kExitSemantic;
}

int cmd_disaggregate(const CliOptions& opt) {
    ResourceSet rs = parse_resources(read_all(opt.resource_path),
                                     detect_format(opt.resource_path, opt.in_format), opt.tighten);
    std::vector<Rat> profile = parse_profile(read_all(opt.profile_path));
    auto alloc = disaggregate(rs, profile);
    if (!alloc) {
        AfrModel m = build_afr(rs, {opt.threads, false});
        auto verdict = check_membership(m, profile);
        std::cout << "infeasible profile";
        if (!verdict.violations.empty())
            std::cout << "; first violated S=" << m.directions[verdict.violations[0].direction].subset_str();
        std::cout << "\n";
        return kExitSemantic;
    }
    write_all(opt.output, serialize_allocation(*alloc));
    return kExitOk;
}

int cmd_compare_oracle(const CliOptions& opt) {
    ResourceSet rs = parse_resources(read_all(opt.input),
                                     detect_format(opt.input, opt.in_format), opt.tighten);
    LinearSystem closed = opt.afr_path.empty()
                              ? afr_as_system(build_afr(rs, {opt.threads, false}))
                              : afr_as_system(parse_afr(read_all(opt.afr_path)));
    LinearSystem projected = aggregate_projection_oracle(rs, opt.max_nt);
    if (system_equivalent(closed, projected)) {
        std::cout << "equivalent: closed-form region matches the projection oracle\n";
        return kExitOk;
    }
    std::cout << "MISMATCH: closed-form region differs from the projection oracle\n";
    return kExitSemantic;
}

int cmd_theorems(const CliOptions& opt) {
    sa_bound_mutation() = opt.inject_mutation;
    Json report = Json::array();
    bool all_pass = true;
    for (int seed = 0; seed < opt.seeds; ++seed) {
        for (const CheckRecord& rec : run_theorem_suite(static_cast<uint64_t>(seed),
                                                        opt.size_n, opt.size_t_)) {
            Json item;
            item["check"] = rec.check;
            item["seed"] = rec.seed;
            item["pass"] = rec.pass;
            report.push_back(std::move(item));
            all_pass = all_pass && rec.pass;
        }
    }
    sa_bound_mutation() = false;
    write_all(opt.output, report.dump(2) + "\n");
    return all_pass ? kExitOk : kExitSemantic;
}

int cmd_bench(const CliOptions& opt) {
    std::cout << "N,T,rows,build_ms,per_direction_us\n";
    for (int T : opt.bench_t) {
        for (int N : opt.bench_n) {
            Synth gen(458901ULL + static_cast<uint64_t>(N) * 1000 + static_cast<uint64_t>(T));
            ResourceSet rs = gen.fleet(N, T, 4);
            auto start = std::chrono::steady_clock::now();
            AfrModel m = build_afr(rs, {opt.threads, false});
            double elapsed = ms_since(start);
            double per_dir = elapsed * 1000.0 / static_cast<double>(m.direction_count());
            std::cout << N << "," << T << "," << m.inequality_count() << "," << elapsed << ","
                      << per_dir << "\n";
        }
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact aggregated feasible regions of storage-like flexible resources"};
    app.require_subcommand(1);
    CliOptions opt;

    auto* validate = app.add_subcommand("validate", "check resource hypotheses");
    validate->add_option("input", opt.input)->required();
    validate->add_flag("--tighten", opt.tighten, "repair violations instead of rejecting");
    validate->add_option("--out", opt.output, "repaired resource file destination");
    validate->add_option("--in-format", opt.in_format)->check(CLI::IsMember({"json", "csv"}));

    auto* build = app.add_subcommand("build", "construct the exact aggregated region");
    build->add_option("input", opt.input)->required();
    build->add_option("--out", opt.output);
    build->add_option("--format", opt.out_format)->check(CLI::IsMember({"json", "csv"}));
    build->add_option("--in-format", opt.in_format)->check(CLI::IsMember({"json", "csv"}));
    build->add_option("--threads", opt.threads, "0 = machine parallelism");
    build->add_flag("--tighten", opt.tighten);
    build->add_flag("--no-contributions", opt.no_contributions);
    build->add_flag("--dump-lp", opt.dump_lp, "print the H-representation to stderr");

    auto* merge_cmd = app.add_subcommand("merge", "add region documents together");
    merge_cmd->add_option("inputs", opt.merge_inputs)->required()->expected(-2);
    merge_cmd->add_option("--out", opt.output);

    auto* add = app.add_subcommand("add", "incrementally add resources to a region");
    add->add_option("afr", opt.afr_path)->required();
    add->add_option("resources", opt.resource_path)->required();
    add->add_option("--out", opt.output);
    add->add_option("--in-format", opt.in_format)->check(CLI::IsMember({"json", "csv"}));

    auto* check = app.add_subcommand("check", "membership of an aggregate profile");
    check->add_option("afr", opt.afr_path)->required();
    check->add_option("profile", opt.profile_path)->required();

    auto* disagg = app.add_subcommand("disaggregate", "split a profile across the fleet");
    disagg->add_option("resources", opt.resource_path)->required();
    disagg->add_option("profile", opt.profile_path)->required();
    disagg->add_option("--out", opt.output);
    disagg->add_option("--in-format", opt.in_format)->check(CLI::IsMember({"json", "csv"}));
    disagg->add_flag("--tighten", opt.tighten);

    auto* compare = app.add_subcommand("compare-oracle", "closed form vs projection oracle");
    compare->add_option("input", opt.input)->required();
    compare->add_option("--afr", opt.afr_path, "compare a stored document instead of a build");
    compare->add_option("--max-nt", opt.max_nt, "guard on N*T for the oracle");
    compare->add_option("--in-format", opt.in_format)->check(CLI::IsMember({"json", "csv"}));
    compare->add_flag("--tighten", opt.tighten);

    auto* theorems = app.add_subcommand("theorems", "run the redundancy check suites");
    theorems->add_option("--seeds", opt.seeds);
    theorems->add_option("--N", opt.size_n)->check(CLI::Range(2, 4));
    theorems->add_option("--T", opt.size_t_)->check(CLI::Range(2, 5));
    theorems->add_option("--report", opt.output, "report destination (default stdout)");
    theorems->add_flag("--inject-b1-mutation", opt.inject_mutation)->group("");

    auto* bench = app.add_subcommand("bench", "build-time scaling table");
    bench->add_option("--N", opt.bench_n);
    bench->add_option("--T", opt.bench_t);
    bench->add_option("--threads", opt.threads);

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(validate)) return cmd_validate(opt);
        if (app.got_subcommand(build)) return cmd_build(opt);
        if (app.got_subcommand(merge_cmd)) return cmd_merge(opt);
        if (app.got_subcommand(add)) return cmd_add(opt);
        if (app.got_subcommand(check)) return cmd_check(opt);
        if (app.got_subcommand(disagg)) return cmd_disaggregate(opt);
        if (app.got_subcommand(compare)) return cmd_compare_oracle(opt);
        if (app.got_subcommand(theorems)) return cmd_theorems(opt);
        if (app.got_subcommand(bench)) return cmd_bench(opt);
    } catch (const GuardError& e) {
        std::cerr << "guard: " << e.what() << "\n";
        return kExitGuard;
    } catch (const ParseError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const ModelError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSemantic;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSemantic;
    }
    return kExitOk;
}
