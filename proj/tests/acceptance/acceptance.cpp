// One line per acceptance criterion; exit status 1 if any criterion fails.

#include "ctlab/cli.hpp"
#include "ctlab/coarse.hpp"
#include "ctlab/error.hpp"
#include "ctlab/kleinian.hpp"
#include "ctlab/ladder.hpp"
#include "ctlab/lamination.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <limits>
#include <random>
#include <sstream>

namespace fs = std::filesystem;
using namespace ctlab;
using coarse::Edge;
using coarse::MetricGraph;
using coarse::SubsetFamily;
using coarse::Vertex;
using words::ReducedWord;

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

struct Line {
    bool pass = true;
    std::ostringstream detail;
    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << " [failed: " << what << "]";
        }
    }
};

int failures = 0;

void criterion(int n, const std::string& name, const std::function<void(Line&)>& body) {
    Line line;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        body(line);
    } catch (const std::exception& e) {
        line.pass = false;
        line.detail << " [exception: " << e.what() << "]";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!line.pass) ++failures;
    std::cout << "criterion " << n << " " << (line.pass ? "PASS" : "FAIL") << "  " << name << ":" << line.detail.str()
              << " (" << std::fixed << std::setprecision(2) << secs << " s)" << std::defaultfloat
              << std::setprecision(6) << std::endl;
}

std::vector<std::vector<double>> floyd_warshall(std::size_t n, const std::vector<Edge>& edges) {
    std::vector<std::vector<double>> d(n, std::vector<double>(n, inf));
    for (std::size_t i = 0; i < n; ++i) d[i][i] = 0;
    for (const Edge& e : edges) {
        d[e.u][e.v] = std::min(d[e.u][e.v], e.weight);
        d[e.v][e.u] = std::min(d[e.v][e.u], e.weight);
    }
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
    return d;
}

std::vector<Edge> random_tree(std::size_t n, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> w(1, 4);
    std::vector<Edge> edges;
    for (std::size_t v = 1; v < n; ++v) edges.push_back({rng() % v, v, static_cast<double>(w(rng))});
    return edges;
}

std::vector<coarse::GraphFile> corpus() {
    std::vector<coarse::GraphFile> out;
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(CTLAB_TEST_DATA))
        if (entry.path().extension() == ".graph") files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    for (const auto& p : files) out.push_back(coarse::load_graph(p.string()));
    std::mt19937_64 rng(2024);
    for (int k = 0; k < 30; ++k) {
        const std::size_t n = 5 + rng() % 46;
        std::vector<Edge> edges = random_tree(n, rng);
        for (std::size_t e = 0; e < n / 2; ++e) {
            const Vertex u = rng() % n, v = rng() % n;
            if (u != v) edges.push_back({u, v, static_cast<double>(1 + rng() % 4)});
        }
        SubsetFamily f;
        for (std::size_t s = 0; s < 1 + rng() % 4; ++s) {
            std::vector<Vertex> h;
            for (Vertex v = 0; v < n; ++v)
                if (rng() % 5 == 0) h.push_back(v);
            if (h.empty()) h.push_back(rng() % n);
            f.subsets.push_back(h);
        }
        out.push_back({MetricGraph(n, edges), f});
    }
    return out;
}

// Tracking constant maximized over every ordered pair.
double max_tracking(const MetricGraph& g, const SubsetFamily& f) {
    double worst = 0.0;
    for (Vertex u = 0; u < g.size(); ++u)
        for (Vertex v = u + 1; v < g.size(); ++v) worst = std::max(worst, coarse::tracking_constant(g, f, u, v));
    return worst;
}

bool within_factor_two(const std::vector<double>& xs) {
    const auto [lo, hi] = std::minmax_element(xs.begin(), xs.end());
    if (!std::isfinite(*hi)) return false;
    if (*hi == 0.0) return true;
    return *lo > 0.0 && *hi <= 2.0 * *lo;
}

// Finite and never more than twice the value at the smallest scale.
bool does_not_grow(const std::vector<double>& xs) {
    for (const double x : xs)
        if (!std::isfinite(x) || x > 2.0 * xs.front() + 1e-12) return false;
    return true;
}

std::string list(const std::vector<double>& xs) {
    std::ostringstream s;
    s << "[";
    for (std::size_t i = 0; i < xs.size(); ++i) s << (i ? ", " : "") << xs[i];
    s << "]";
    return s.str();
}

ladder::SplitSpec identity_spec(std::size_t radius, std::size_t blocks) {
    ladder::SplitSpec s;
    s.blocks = blocks;
    s.radius = radius;
    s.kinds.assign(blocks, ladder::BlockKind::thick);
    s.use_monodromy = false;
    s.components = 0;
    s.seed = 7;
    return s;
}

ladder::SplitSpec monodromy_spec(std::size_t radius, std::size_t blocks) {
    ladder::SplitSpec s;
    s.blocks = blocks;
    s.radius = radius;
    s.kinds.assign(blocks, ladder::BlockKind::split);
    s.components = 1;
    s.component_radius = 1;
    s.tube_span_min = 1;
    s.tube_span_max = 2;
    s.n_max = 2;
    s.seed = 11;
    return s;
}

struct Stack {
    std::shared_ptr<const ladder::GraphMetricSpace> space;
    std::vector<ReducedWord> leaf;
    std::unique_ptr<ladder::Ladder> ladder;
};

// Ladder over the truncation of a stable-slope leaf, as built by ladder-audit.
Stack make_stack(const ladder::SplitSpec& spec) {
    Stack st;
    st.space = ladder::graph_metric(ladder::build_split_model(spec));
    const words::Monodromy mono(2, 1, 1, 1);
    const auto leaves = lamination::sample_leaves(lamination::stable_slope(mono), 1, spec.seed);
    const lamination::LeafPair e = lamination::leaf_endpoints(leaves[0], spec.radius);
    st.leaf = ladder::leaf_path(e.forward, e.backward, spec.radius);
    st.ladder = std::make_unique<ladder::Ladder>(ladder::build_ladder(st.space, st.leaf.front(), st.leaf.back()));
    return st;
}

struct CliRun {
    int code;
    std::string out;
};

CliRun invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "ctlab");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

int main() {
    const std::string data = CTLAB_TEST_DATA;

    nlohmann::json leaves_report;
    double leaves_seconds = 0.0;
    {
        const auto t0 = std::chrono::steady_clock::now();
        leaves_report = cli::verify_leaves_report(cli::LeafRunConfig{});
        leaves_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
    const auto& summary = leaves_report["summary"];

    criterion(1, "leaf endpoint images agree", [&](Line& l) {
        const double frac = summary["leaf_fraction_below_tol"].get<double>();
        const double shrink = summary["shrink_factor"].is_null() ? 0.0 : summary["shrink_factor"].get<double>();
        l.detail << " fraction below 1e-3 at depth 30 = " << frac
                 << ", median gap depth 10 = " << summary["leaf_median_gap_compare"]
                 << ", depth 30 = " << summary["leaf_median_gap"] << ", shrink = " << shrink
                 << ", runtime = " << leaves_seconds << " s";
        l.require(frac >= 0.95, "fraction >= 0.95");
        l.require(shrink >= 10.0, "shrink >= 10");
        l.require(leaves_seconds < 60.0, "runtime < 60 s");
    });

    criterion(2, "transverse controls separate", [&](Line& l) {
        const double frac = summary["control_fraction_above_ratio"].get<double>();
        l.detail << " controls = " << leaves_report["controls"].size() << ", fraction with gap > 10x median leaf gap = "
                 << frac << ", median control gap = " << summary["control_median_gap"]
                 << ", runtime = " << leaves_seconds << " s";
        l.require(leaves_report["controls"].size() == 50, "50 controls");
        l.require(frac >= 0.95, "fraction >= 0.95");
        l.require(leaves_seconds < 60.0, "runtime < 60 s");
    });

    criterion(3, "representation residuals", [&](Line& l) {
        const words::Monodromy mono(2, 1, 1, 1);
        const auto rep = kleinian::solve_fiber_representation(mono);
        const double conj = kleinian::verify_monodromy_conjugacy(rep, mono);
        l.detail << " |tr[A,B]+2| = " << rep.commutator_residual << ", conjugacy residual = " << conj;
        l.require(rep.commutator_residual < 1e-9, "commutator residual < 1e-9");
        l.require(conj < 1e-6, "conjugacy residual < 1e-6");
        bool rejected = false;
        try {
            kleinian::representation_from_traces({3.0, 3.0, 3.0});
        } catch (const FuchsianBranchError&) {
            rejected = true;
        }
        l.detail << ", (3,3,3) rejected = " << std::boolalpha << rejected;
        l.require(rejected, "(3,3,3) rejected as Fuchsian");
    });

    criterion(4, "electrocution matches oracle", [&](Line& l) {
        std::size_t graphs = 0, mismatches = 0;
        for (const auto& gf : corpus()) {
            const std::size_t n = gf.graph.size();
            if (n > 50) continue;
            ++graphs;
            std::vector<Edge> edges = gf.graph.edges();
            for (std::size_t i = 0; i < gf.family.subsets.size(); ++i)
                for (const Vertex v : gf.family.subsets[i]) edges.push_back({n + i, v, 0.5});
            const auto oracle = floyd_warshall(n + gf.family.subsets.size(), edges);
            const auto e = coarse::electrocute(gf.graph, gf.family);
            for (Vertex u = 0; u < n; ++u) {
                const auto d = coarse::distances_from(e.graph(), u);
                for (Vertex v = 0; v < n; ++v) mismatches += d[v] != oracle[u][v];
            }
        }
        const auto path = coarse::load_graph(data + "/path5_subset.graph");
        const double d04 = coarse::distance(coarse::electrocute(path.graph, path.family).graph(), 0, 4);
        l.detail << " graphs = " << graphs << ", mismatched pairs = " << mismatches << ", path example d(0,4) = " << d04;
        l.require(mismatches == 0, "exact agreement");
        l.require(d04 == 3.0, "path example = 3");
    });

    criterion(5, "four-point hyperbolicity", [&](Line& l) {
        std::mt19937_64 rng(5);
        double tree_max = 0.0;
        for (int k = 0; k < 20; ++k) {
            const std::size_t n = 4 + rng() % 37;
            tree_max = std::max(tree_max, coarse::four_point_delta(MetricGraph(n, random_tree(n, rng))).delta);
        }
        std::vector<Edge> cycle;
        for (Vertex v = 0; v < 12; ++v) cycle.push_back({v, (v + 1) % 12, 1.0});
        const MetricGraph c12(12, cycle);
        const double exhaustive = coarse::four_point_delta(c12).delta;
        bool sampled_below = true;
        for (const auto& gf : corpus()) {
            if (gf.graph.size() > 80) continue;
            const double ex = coarse::four_point_delta(gf.graph).delta;
            for (std::uint64_t seed = 1; seed <= 3; ++seed)
                sampled_below = sampled_below && coarse::four_point_delta(gf.graph, 200, seed).delta <= ex;
        }
        l.detail << " max delta on 20 trees = " << tree_max << ", 12-cycle delta = " << exhaustive
                 << ", sampled <= exhaustive = " << std::boolalpha << sampled_below;
        l.require(tree_max == 0.0, "trees have delta 0");
        l.require(exhaustive == 3.0, "12-cycle delta = 3");
        l.require(sampled_below, "sampled <= exhaustive");
    });

    criterion(6, "electro-ambient tracking", [&](Line& l) {
        std::mt19937_64 rng(6);
        double tree_worst = 0.0;
        for (int k = 0; k < 10; ++k) {
            const std::size_t n = 8 + rng() % 25;
            const MetricGraph t(n, random_tree(n, rng));
            tree_worst = std::max(tree_worst, max_tracking(t, {}));
            // Connected subtree: closed ball of radius 2 around a random vertex.
            const auto d = coarse::distances_from(t, static_cast<Vertex>(rng() % n));
            SubsetFamily f;
            f.subsets.emplace_back();
            for (Vertex v = 0; v < n; ++v)
                if (d[v] <= 2.0) f.subsets.back().push_back(v);
            tree_worst = std::max(tree_worst, max_tracking(t, f));
        }
        // Ladder graphs P_n x P_2 with two electrocuted squares; n doubles.
        std::vector<double> constants;
        for (const std::size_t rungs : {8u, 16u, 32u}) {
            std::vector<Edge> edges;
            for (Vertex i = 0; i < rungs; ++i) {
                edges.push_back({2 * i, 2 * i + 1, 1.0});
                if (i + 1 < rungs) {
                    edges.push_back({2 * i, 2 * i + 2, 1.0});
                    edges.push_back({2 * i + 1, 2 * i + 3, 1.0});
                }
            }
            const Vertex mid = 2 * (rungs / 2);
            SubsetFamily f{{{2, 3, 4, 5}, {mid, mid + 1, mid + 2, mid + 3}}};
            constants.push_back(max_tracking(MetricGraph(2 * rungs, edges), f));
        }
        l.detail << " max on trees (empty and single subtree) = " << tree_worst << ", ladder graphs 16/32/64 vertices = "
                 << list(constants);
        l.require(tree_worst == 0.0, "tracking 0 on trees");
        l.require(within_factor_two(constants), "stable within factor 2");
    });

    criterion(7, "ladder retraction Lipschitz", [&](Line& l) {
        const Stack id = make_stack(identity_spec(3, 2));
        const double c_id = ladder::lipschitz_audit(*id.ladder, 0, 1).constants["C"].get<double>();
        std::vector<double> by_radius, by_blocks;
        for (std::size_t r = 3; r <= 6; ++r) {
            const Stack st = make_stack(monodromy_spec(r, 2));
            by_radius.push_back(ladder::lipschitz_audit(*st.ladder, 500, 1).constants["C"].get<double>());
        }
        for (std::size_t b = 2; b <= 5; ++b) {
            const Stack st = make_stack(monodromy_spec(3, b));
            by_blocks.push_back(ladder::lipschitz_audit(*st.ladder, 500, 1).constants["C"].get<double>());
        }
        l.detail << " identity R=3 exhaustive C = " << c_id << ", monodromy R=3..6: " << list(by_radius)
                 << ", blocks 2..5: " << list(by_blocks);
        l.require(c_id <= 1.0 + 1e-9, "identity C <= 1");
        l.require(within_factor_two(by_radius), "stable in R");
        l.require(within_factor_two(by_blocks), "stable in blocks");
    });

    criterion(8, "coarse separation by the ray", [&](Line& l) {
        const auto c1 = [](const ladder::SplitSpec& spec, std::size_t samples) {
            const Stack st = make_stack(spec);
            const ladder::QiRay ray = ladder::qi_ray(*st.ladder, 0, ReducedWord{});
            ladder::SeparationOptions opt;
            opt.samples = samples;
            opt.seed = 1;
            return ladder::coarse_separation_audit(*st.ladder, ray, opt).constants["C1"].get<double>();
        };
        const double c_id = c1(identity_spec(3, 2), 0);
        std::vector<double> by_radius, by_blocks;
        for (std::size_t r = 3; r <= 6; ++r) by_radius.push_back(c1(monodromy_spec(r, 2), 500));
        for (std::size_t b = 2; b <= 5; ++b) by_blocks.push_back(c1(monodromy_spec(3, b), 500));
        l.detail << " identity R=3 exhaustive C1 = " << c_id << ", monodromy R=3..6: " << list(by_radius)
                 << ", blocks 2..5: " << list(by_blocks);
        l.require(c_id <= 1.0, "identity C1 <= 1");
        l.require(does_not_grow(by_radius), "finite and not growing in R");
        l.require(does_not_grow(by_blocks), "finite and not growing in blocks");
    });

    criterion(9, "leaf diameters grow, components stay bounded", [&](Line& l) {
        const Stack st = make_stack(monodromy_spec(6, 2));
        const auto rep = ladder::leaf_diameter_growth(*st.space, st.leaf, {3, 4, 5, 6}, 2.0);
        const auto diam = rep.constants["diameters"].get<std::vector<double>>();
        bool increasing = true;
        for (std::size_t i = 1; i < diam.size(); ++i) increasing = increasing && diam[i] > diam[i - 1];
        const ladder::SplitModel& m = st.space->model();
        double component = 0.0;
        for (const auto& c : m.components()) {
            for (const auto& [level, members] :
                 {std::pair{c.block, &c.lower}, std::pair{c.block + 1, &c.upper}}) {
                for (const ReducedWord& u : *members) {
                    const auto d = st.space->distances_from(m.vertex(level, u));
                    for (const ReducedWord& v : *members) component = std::max(component, d[m.vertex(level, v)]);
                }
            }
        }
        l.detail << " diameters over R=3..6 = " << list(diam) << ", largest d_G diameter inside a component = "
                 << component;
        l.require(increasing, "strictly increasing");
        l.require(component <= 1.0, "component diameter <= 1");
    });

    criterion(10, "midpoint escape profile", [&](Line& l) {
        for (const auto& [name, spec] :
             {std::pair{"identity", identity_spec(7, 2)}, std::pair{"monodromy", monodromy_spec(7, 2)}}) {
            const Stack st = make_stack(spec);
            const auto rep = ladder::midpoint_escape_audit(*st.ladder);
            std::vector<double> m;
            for (const auto& p : rep.constants["profile"]) m.push_back(p["M"].is_null() ? inf : p["M"].get<double>());
            l.detail << " " << name << " M(0,2,4,6) = " << list(m);
            l.require(rep.pass, std::string(name) + " non-decreasing");
        }
    });

    criterion(11, "pole witness and monotone partitions", [&](Line& l) {
        const CliRun r = invoke({"lam-poles", "--seed", "1", "--depth", "6"});
        const auto j = nlohmann::json::parse(r.out);
        l.detail << " first witness depth = " << j["first_witness_depth"] << ", monotone = " << j["monotone"];
        l.require(!j["first_witness_depth"].is_null() && j["first_witness_depth"].get<std::size_t>() <= 6,
                  "witness at depth <= 6");
        l.require(j["monotone"].get<bool>(), "monotone");
    });

    criterion(12, "CLI determinism", [&](Line& l) {
        const fs::path dir = fs::temp_directory_path() / "ctlab_acceptance";
        fs::remove_all(dir);
        fs::create_directories(dir / "a");
        fs::create_directories(dir / "b");
        const std::vector<std::vector<std::string>> runs = {
            {"ct-draw", "--samples", "300", "--seed", "3"},
            {"verify-leaves", "--leaves", "10", "--seed", "3"},
            {"lam-poles", "--seed", "3"},
            {"coarse", "delta", "--graph", data + "/cycle12.graph"},
            {"coarse", "delta", "--graph", data + "/tree15.graph", "--samples", "100", "--seed", "3"},
            {"coarse", "electrocute", "--graph", data + "/path5_subset.graph"},
            {"coarse", "track", "--graph", data + "/tree15.graph"},
            {"ladder-audit", "--spec", data + "/identity_r3.spec"},
            {"ladder-audit", "--spec", data + "/monodromy_r5.spec"},
        };
        std::size_t identical = 0;
        for (const auto& args : runs) {
            const CliRun first = invoke(args), second = invoke(args);
            identical += first.code == second.code && first.out == second.out && !first.out.empty();
        }
        bool files_equal = true;
        for (const char* side : {"a", "b"}) {
            invoke({"ladder-audit", "--spec", data + "/monodromy_r5.spec", "--out", (dir / side).string()});
            invoke({"ct-draw", "--samples", "200", "--seed", "9", "--out", (dir / side / "draw.csv").string(), "--svg",
                 (dir / side / "draw.svg").string()});
        }
        std::size_t files = 0;
        for (const auto& entry : fs::directory_iterator(dir / "a")) {
            ++files;
            files_equal = files_equal && slurp(entry.path()) == slurp(dir / "b" / entry.path().filename());
        }
        fs::remove_all(dir);
        l.detail << " identical stdout " << identical << "/" << runs.size() << ", identical files = " << std::boolalpha
                 << files_equal << " (" << files << " files)";
        l.require(identical == runs.size(), "stdout identical");
        l.require(files_equal && files > 2, "files identical");
    });

    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
    return failures == 0 ? 0 : 1;
}
