#include "ctlab/cli.hpp"

#include "ctlab/coarse.hpp"
#include "ctlab/error.hpp"
#include "ctlab/kleinian.hpp"
#include "ctlab/ladder.hpp"
#include "ctlab/lamination.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <random>
#include <sstream>

namespace ctlab::cli {

namespace fs = std::filesystem;
using nlohmann::json;
using words::ReducedWord;

namespace {

std::string fmt(double x) {
    std::ostringstream os;
    os << std::setprecision(17) << x;
    return os.str();
}

json finite_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

double median(std::vector<double> v) {
    if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

json complex_json(const hyp::Complex& z) { return {z.real(), z.imag()}; }

json representation_json(const kleinian::Representation& rep) {
    return {{"trace_a", complex_json(rep.traces.x)},
            {"trace_b", complex_json(rep.traces.y)},
            {"trace_ab", complex_json(rep.traces.z)},
            {"commutator_residual", rep.commutator_residual},
            {"conjugacy_residual", rep.conjugacy_residual}};
}

double gap_between(const kleinian::CTSample& u, const kleinian::CTSample& v) {
    return hyp::chordal_distance(u.image, v.image);
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace

void write_atomically(const std::string& path, const std::string& contents) {
    const fs::path target(path);
    if (target.has_parent_path() && !fs::exists(target.parent_path()))
        throw InputError("output directory '" + target.parent_path().string() + "' does not exist");
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw InputError("cannot write '" + tmp.string() + "'");
        out << contents;
        if (!out.flush()) throw InputError("cannot write '" + tmp.string() + "'");
    }
    fs::rename(tmp, target);
}

// ---------------------------------------------------------------------------

json verify_leaves_report(const LeafRunConfig& config) {
    if (config.depth < 1) throw InputError("--depth must be at least 1");
    if (config.compare_depth < 1 || config.compare_depth > config.depth)
        throw InputError("compare depth must lie in 1..depth");
    if (!(config.tol > 0) || !(config.ratio > 0)) throw InputError("--tol and --ratio must be positive");
    const words::Monodromy m = words::Monodromy::parse(config.monodromy);
    const kleinian::Representation rep = kleinian::solve_fiber_representation(m);
    const words::Slope s = lamination::stable_slope(m);

    std::size_t undecided = 0;
    const auto image = [&](const words::BoundaryWord& w, std::size_t depth) {
        kleinian::CTSample c = kleinian::ct_image(rep, w, depth, config.tol);
        undecided += c.status == kleinian::SampleStatus::undecided;
        return c;
    };

    json leaves = json::array();
    std::vector<double> gaps, gaps_compare;
    for (const lamination::Leaf& leaf : lamination::sample_leaves(s, config.leaves, config.seed)) {
        const words::BoundaryWord fw = leaf.forward_word(), bw = leaf.backward_word();
        const kleinian::CTSample f = image(fw, config.depth), b = image(bw, config.depth);
        const double gap = gap_between(f, b);
        const double gap_compare = gap_between(image(fw, config.compare_depth), image(bw, config.compare_depth));
        gaps.push_back(gap);
        gaps_compare.push_back(gap_compare);
        leaves.push_back({{"intercept", exact::to_string(leaf.intercept())},
                          {"forward", fw.prefix(config.depth).str()},
                          {"backward", bw.prefix(config.depth).str()},
                          {"gap", gap},
                          {"gap_compare", gap_compare},
                          {"status", {kleinian::to_string(f.status), kleinian::to_string(b.status)}}});
    }

    // Controls: chords cut out by rational lines, kept only when they cross
    // the lamination at the working depth.
    json controls = json::array();
    std::vector<double> control_gaps;
    std::mt19937_64 rng(config.seed + 1);
    std::uniform_int_distribution<long long> num(-6, 6), den(1, 6);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::size_t attempts = 0, rejected = 0;
    while (control_gaps.size() < config.leaves) {
        if (++attempts > 200 * config.leaves) throw NumericalError("could not find enough transverse control pairs");
        const long long p = num(rng), q = den(rng);
        if (p == 0) continue;
        const words::Slope cs = words::Slope::rational(p, q);
        const double sv = static_cast<double>(p) / static_cast<double>(q);
        const double lo = sv > 0 ? -sv : 0.0, hi = sv > 0 ? 1.0 : 1.0 - sv;
        const exact::Rational c(static_cast<long long>(std::ldexp(lo + (hi - lo) * unit(rng), 20)), 1LL << 20);
        if (!words::meets_base_tile(cs, c)) continue;
        ReducedWord u, v;
        try {
            u = words::cutting_sequence(cs, c, config.depth, 1);
            v = words::cutting_sequence(cs, c, config.depth, -1);
        } catch (const GridIncidenceError&) {
            continue;
        }
        if (lamination::crosses_lamination(u, v, s, config.depth) != lamination::Verdict::transverse) {
            ++rejected;
            continue;
        }
        const kleinian::CTSample f = image(words::BoundaryWord::stored(u), config.depth);
        const kleinian::CTSample b = image(words::BoundaryWord::stored(v), config.depth);
        const double gap = gap_between(f, b);
        control_gaps.push_back(gap);
        controls.push_back({{"slope", cs.str()},
                            {"intercept", exact::to_string(c)},
                            {"forward", u.str()},
                            {"backward", v.str()},
                            {"gap", gap},
                            {"status", {kleinian::to_string(f.status), kleinian::to_string(b.status)}}});
    }

    const double med = median(gaps), med_compare = median(gaps_compare);
    const auto fraction = [](const std::vector<double>& v, auto pred) {
        if (v.empty()) return 1.0;
        return static_cast<double>(std::count_if(v.begin(), v.end(), pred)) / static_cast<double>(v.size());
    };
    const double below = fraction(gaps, [&](double g) { return g < config.tol; });
    const double above = fraction(control_gaps, [&](double g) { return g > config.ratio * med; });
    const bool ok = config.leaves == 0 || (below >= 0.95 && above >= 0.95);

    json summary = {{"leaf_median_gap", finite_or_null(med)},
                    {"leaf_median_gap_compare", finite_or_null(med_compare)},
                    {"shrink_factor", finite_or_null(med_compare / med)},
                    {"leaf_fraction_below_tol", below},
                    {"control_fraction_above_ratio", above},
                    {"control_median_gap", finite_or_null(median(control_gaps))},
                    {"controls_rejected_not_transverse", rejected},
                    {"undecided_samples", undecided},
                    {"pass", ok}};
    return {{"command", "verify-leaves"},
            {"monodromy", m.str()},
            {"slope", s.str()},
            {"depth", config.depth},
            {"compare_depth", config.compare_depth},
            {"tol", config.tol},
            {"ratio", config.ratio},
            {"seed", config.seed},
            {"representation", representation_json(rep)},
            {"leaves", leaves},
            {"controls", controls},
            {"summary", summary}};
}

std::string ct_draw_csv(const words::Monodromy& m, std::size_t samples, std::size_t depth, double tol,
                        std::uint64_t seed, std::string* svg, double* fraction_below_tol) {
    if (depth < 1) throw InputError("--depth must be at least 1");
    const kleinian::Representation rep = kleinian::solve_fiber_representation(m);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::ostringstream csv;
    csv << "parameter,x,y,z,convergence,status\n";
    std::vector<std::pair<double, double>> plane;
    std::size_t below = 0;
    for (std::size_t k = 0; k < samples; ++k) {
        const double theta = (static_cast<double>(k) + unit(rng)) / static_cast<double>(samples);
        const ReducedWord w = words::word_at_parameter(theta, depth);
        const kleinian::CTSample c = kleinian::ct_image(rep, words::BoundaryWord::stored(w), depth, tol);
        const auto& v = c.image.coords();
        csv << fmt(theta) << ',' << fmt(v[0]) << ',' << fmt(v[1]) << ',' << fmt(v[2]) << ',' << fmt(c.convergence)
            << ',' << kleinian::to_string(c.status) << '\n';
        below += c.convergence < tol;
        if (1.0 - v[2] > 1e-6) plane.emplace_back(v[0] / (1.0 - v[2]), v[1] / (1.0 - v[2]));
    }
    if (fraction_below_tol) *fraction_below_tol = samples ? static_cast<double>(below) / samples : 1.0;
    if (svg) {
        double x0 = -1, x1 = 1, y0 = -1, y1 = 1;
        for (const auto& [x, y] : plane) {
            if (std::abs(x) > 20 || std::abs(y) > 20) continue;
            x0 = std::min(x0, x), x1 = std::max(x1, x), y0 = std::min(y0, y), y1 = std::max(y1, y);
        }
        std::ostringstream os;
        os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << fmt(x0) << ' ' << fmt(-y1) << ' '
           << fmt(x1 - x0) << ' ' << fmt(y1 - y0) << "\">\n<polyline fill=\"none\" stroke=\"black\" stroke-width=\""
           << fmt((x1 - x0) / 500) << "\" points=\"";
        bool first = true;
        for (const auto& [x, y] : plane) {
            if (std::abs(x) > 20 || std::abs(y) > 20) continue;
            os << (first ? "" : " ") << fmt(x) << ',' << fmt(-y);
            first = false;
        }
        os << "\"/>\n</svg>\n";
        *svg = os.str();
    }
    return csv.str();
}

namespace {

// ---------------------------------------------------------------------------
// ladder-audit

json ladder_bundle(const ladder::SplitSpec& spec) {
    using namespace ladder;
    const auto space = graph_metric(build_split_model(spec));
    const std::size_t R = spec.radius;
    const words::Monodromy mono(spec.monodromy.p, spec.monodromy.q, spec.monodromy.r, spec.monodromy.t);
    const words::Slope s = lamination::stable_slope(mono);
    const auto leaves = lamination::sample_leaves(s, 2, spec.seed);
    const auto leaf_words = [&](const lamination::Leaf& leaf) {
        const lamination::LeafPair e = lamination::leaf_endpoints(leaf, R);
        return leaf_path(e.forward, e.backward, R);
    };
    const std::vector<ReducedWord> base = leaf_words(leaves[0]);
    const std::vector<ReducedWord> other = leaf_words(leaves[1]);
    const Ladder l = build_ladder(space, base.front(), base.back());

    json audits = json::object();
    const auto add = [&](const AuditReport& r) { audits[r.audit] = r.to_json(); };

    add(lipschitz_audit(l, spec.samples, spec.seed, spec.lipschitz_bound));

    const QiRay ray = qi_ray(l, 0, ReducedWord{});
    AuditReport ray_report;
    ray_report.audit = "qi_ray";
    ray_report.params = {{"start_level", 0}, {"bound", spec.ray_bound}};
    std::vector<std::string> pts;
    for (const ReducedWord& w : ray.points) pts.push_back(w.str());
    ray_report.constants = {{"quality", ray.quality}, {"points", pts}};
    ray_report.samples = ray.points.size();
    ray_report.pass = ray.quality <= spec.ray_bound + 1e-9;
    add(ray_report);

    SeparationOptions sep;
    sep.samples = spec.samples;
    sep.seed = spec.seed;
    sep.c1_bound = spec.separation_bound;
    sep.k0 = spec.k0;
    sep.k1_bound = spec.k1_bound;
    add(coarse_separation_audit(l, ray, sep));

    try {
        const Ladder twin = build_ladder(space, other.front(), other.back());
        const QiRay tr = twin_ladder_ray(l, twin);
        AuditReport rep = ray_asymptoticity_audit(*space, ray, tr, spec.asymptotic_start);
        rep.constants["twin_quality"] = tr.quality;
        add(rep);
    } catch (const InputError& e) {
        AuditReport rep;
        rep.audit = "ray_asymptoticity";
        rep.params = {{"start", spec.asymptotic_start}};
        rep.constants = {{"error", e.what()}};
        add(rep);
    }

    std::vector<std::size_t> radii;
    for (const std::size_t r : spec.radii)
        if (r <= R) radii.push_back(r);
    const double bound = spec.component_bound.value_or(2.0 * static_cast<double>(spec.component_radius));
    add(leaf_diameter_growth(*space, base, radii, bound));

    EscapeOptions esc;
    esc.side = spec.escape_side;
    esc.distances.clear();
    for (const std::size_t n : spec.escape_n)
        if (n < R) esc.distances.push_back(n);
    add(midpoint_escape_audit(l, esc));

    add(ladder_quasiconvexity_audit(l, std::max<std::size_t>(spec.samples / 5, 1), spec.seed));

    json summary = {{"spec", spec.to_json()}, {"vertices", space->model().vertex_count()}};
    bool all = true;
    for (const auto& [name, doc] : audits.items()) {
        summary["audits"][name] = doc["pass"];
        all = all && doc["pass"].get<bool>();
    }
    summary["pass"] = all;
    return {{"audits", audits}, {"summary", summary}};
}

// ---------------------------------------------------------------------------
// lam-poles

json poles_report(const words::Slope& s, std::size_t leaves, std::size_t depth, std::uint64_t seed) {
    const auto sample = lamination::sample_leaves(s, leaves, seed);
    const lamination::Transversal t = lamination::Transversal::standard();
    json levels = json::array();
    std::vector<std::size_t> previous;
    bool monotone = true;
    std::optional<std::size_t> first_witness_depth;
    for (std::size_t d = 0; d <= depth; ++d) {
        const lamination::LeafClassPartition p = lamination::leaf_class_partition(sample, t, d);
        // Coarsening check: leaves together at d - 1 stay together at d.
        if (!previous.empty())
            for (std::size_t i = 0; i < sample.size(); ++i)
                for (std::size_t j = i + 1; j < sample.size(); ++j)
                    if (previous[i] == previous[j] && p.class_of[i] != p.class_of[j]) monotone = false;
        previous = p.class_of;
        json classes = json::array();
        for (const lamination::LeafClass& c : p.classes) {
            classes.push_back({{"members", c.members},
                               {"pole_witness", c.pole_witness ? json(c.pole_witness->str()) : json(nullptr)}});
            if (c.pole_witness && !first_witness_depth) first_witness_depth = d;
        }
        levels.push_back({{"depth", d}, {"classes", classes}, {"class_count", p.classes.size()}, {"status", p.status}});
    }
    return {{"command", "lam-poles"},
            {"slope", s.str()},
            {"leaves", leaves},
            {"seed", seed},
            {"partitions", levels},
            {"first_witness_depth", first_witness_depth ? json(*first_witness_depth) : json(nullptr)},
            {"monotone", monotone},
            {"pass", monotone}};
}

words::Slope parse_slope(const std::string& text) {
    // Preperiod and period of the continued fraction, e.g. "1|1" for the golden ratio.
    const auto bar = text.find('|');
    if (bar == std::string::npos) throw InputError("--slope must be 'a0,a1,...|b1,b2,...' (preperiod|period)");
    const auto ints = [](const std::string& part) {
        std::vector<long long> v;
        std::stringstream ss(part);
        for (std::string item; std::getline(ss, item, ',');) {
            if (item.empty()) continue;
            try {
                v.push_back(std::stoll(item));
            } catch (const std::exception&) {
                throw InputError("bad continued fraction entry '" + item + "'");
            }
        }
        return v;
    };
    return words::Slope::from_continued_fraction(ints(text.substr(0, bar)), ints(text.substr(bar + 1)));
}

// ---------------------------------------------------------------------------
// coarse

json coarse_report(const std::string& which, const coarse::GraphFile& file, std::optional<std::size_t> source,
                   std::optional<std::size_t> target, std::size_t samples, std::optional<std::uint64_t> seed) {
    const coarse::MetricGraph& g = file.graph;
    const std::size_t n = g.size();
    for (const auto v : {source, target})
        if (v && *v >= n) throw InputError("vertex " + std::to_string(*v) + " is not in the graph");
    if (source.has_value() != target.has_value()) throw InputError("--source and --target go together");
    json out = {{"command", "coarse " + which}, {"vertices", n}, {"edges", g.edges().size()},
                {"subsets", file.family.subsets.size()}};
    if (which == "delta") {
        coarse::HyperbolicityEstimate h;
        if (samples == 0) {
            h = coarse::four_point_delta(g);
        } else {
            if (!seed) throw InputError("--seed is required with --samples");
            h = coarse::four_point_delta(g, samples, *seed);
        }
        out["delta"] = h.delta;
        out["quadruples"] = h.quadruples;
        out["exhaustive"] = h.exhaustive;
    } else if (which == "electrocute") {
        const coarse::ElectricGraph e = coarse::electrocute(g, file.family);
        if (source) {
            const coarse::PathRecord p = coarse::shortest_path(e, *source, *target);
            out["distance"] = p.length;
            out["path"] = p.vertices;
        } else {
            if (n > 500) throw InputError("electric distance matrix is limited to 500 vertices; give --source/--target");
            json rows = json::array();
            for (std::size_t u = 0; u < n; ++u) {
                const std::vector<double> d = coarse::distances_from(e.graph(), u);
                rows.push_back(std::vector<double>(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(n)));
            }
            out["distances"] = rows;
        }
        out["family_separation"] = finite_or_null(coarse::family_separation(g, file.family));
    } else {
        double worst = 0.0;
        json pairs = json::array();
        const auto track = [&](std::size_t u, std::size_t v) {
            const double c = coarse::tracking_constant(g, file.family, u, v);
            worst = std::max(worst, c);
            return c;
        };
        if (source) {
            const coarse::PathRecord p = coarse::electro_ambient(g, file.family, *source, *target);
            out["electro_ambient_path"] = p.vertices;
            out["repairs"] = p.repairs;
            track(*source, *target);
        } else if (samples == 0) {
            if (n > 120) throw InputError("exhaustive tracking is limited to 120 vertices; use --samples");
            for (std::size_t u = 0; u < n; ++u)
                for (std::size_t v = u + 1; v < n; ++v) track(u, v);
            out["pairs"] = n * (n - 1) / 2;
        } else {
            if (!seed) throw InputError("--seed is required with --samples");
            std::mt19937_64 rng(*seed);
            std::uniform_int_distribution<std::size_t> pick(0, n - 1);
            for (std::size_t k = 0; k < samples; ++k) track(pick(rng), pick(rng));
            out["pairs"] = samples;
        }
        out["tracking_constant"] = worst;
    }
    return out;
}

void emit(const std::string& path, const std::string& text, std::ostream& out) {
    if (path.empty() || path == "-") out << text;
    else write_atomically(path, text);
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Cannon-Thurston and split-geometry laboratory", "ctlab"};
    app.require_subcommand(1);

    std::string monodromy = "2,1,1,1", out_path, svg_path, spec_path, graph_path, slope_text, pair_text;
    std::size_t draw_depth = 25, draw_samples = 2000, verify_depth = 30, poles_depth = 6, samples = 0, leaves = 50,
                compare_depth = 10;
    double tol = 1e-3, ratio = 10.0;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> source, target;

    auto* draw = app.add_subcommand("ct-draw", "Sample the boundary map and write a CSV curve");
    draw->add_option("--monodromy", monodromy, "Monodromy matrix p,q,r,t")->capture_default_str();
    draw->add_option("--depth", draw_depth, "Word depth")->capture_default_str();
    draw->add_option("--samples", draw_samples, "Number of boundary samples K")->capture_default_str();
    draw->add_option("--tol", tol, "Convergence tolerance")->capture_default_str();
    draw->add_option("--seed", seed, "Seed for the stratified parameters")->required();
    draw->add_option("--out", out_path, "CSV output (stdout when omitted)");
    draw->add_option("--svg", svg_path, "Optional SVG polyline output");

    auto* verify = app.add_subcommand("verify-leaves", "Compare boundary images of leaf endpoints and controls");
    verify->add_option("--monodromy", monodromy, "Monodromy matrix p,q,r,t")->capture_default_str();
    verify->add_option("--depth", verify_depth, "Word depth")->capture_default_str();
    verify->add_option("--leaves", leaves, "Number of leaves and of control pairs")->capture_default_str();
    verify->add_option("--compare-depth", compare_depth, "Second depth for the shrink factor")->capture_default_str();
    verify->add_option("--tol", tol, "Leaf gap tolerance")->capture_default_str();
    verify->add_option("--ratio", ratio, "Control gap ratio over the median leaf gap")->capture_default_str();
    verify->add_option("--seed", seed, "Sampling seed")->required();
    verify->add_option("--pair", pair_text, "Classify one pair U,V of endpoint words instead");
    verify->add_option("--out", out_path, "JSON output (stdout when omitted)");

    auto* coarse_cmd = app.add_subcommand("coarse", "Coarse-geometry computations on a graph file");
    coarse_cmd->require_subcommand(1);
    std::string coarse_which;
    for (const char* name : {"delta", "electrocute", "track"}) {
        auto* sub = coarse_cmd->add_subcommand(name);
        sub->add_option("--graph", graph_path, "Graph file")->required();
        sub->add_option("--samples", samples, "Sampled quadruples or pairs (0: exhaustive)");
        sub->add_option("--seed", seed, "Seed for sampling");
        sub->add_option("--source", source, "Source vertex");
        sub->add_option("--target", target, "Target vertex");
        sub->add_option("--out", out_path, "JSON output (stdout when omitted)");
        sub->callback([&coarse_which, name] { coarse_which = name; });
    }

    auto* audit = app.add_subcommand("ladder-audit", "Run the ladder audit suite on a split model");
    audit->add_option("--spec", spec_path, "split_spec file")->required();
    audit->add_option("--samples", samples, "Override the sample count from the model file");
    audit->add_option("--seed", seed, "Override the seed from the model file");
    audit->add_option("--out", out_path, "Directory for one JSON document per audit plus summary.json");

    auto* poles = app.add_subcommand("lam-poles", "Leaf classes along a transversal and their pole witnesses");
    poles->add_option("--monodromy", monodromy, "Monodromy whose stable slope is used")->capture_default_str();
    poles->add_option("--slope", slope_text, "Slope as a continued fraction 'a0,...|b1,...' instead");
    poles->add_option("--depth", poles_depth, "Largest search depth")->capture_default_str();
    poles->add_option("--leaves", leaves, "Number of sampled leaves")->capture_default_str();
    poles->add_option("--seed", seed, "Sampling seed")->required();
    poles->add_option("--out", out_path, "JSON output (stdout when omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? ExitCode::pass : ExitCode::input_error;
    }

    try {
        if (draw->parsed()) {
            std::string svg;
            double frac = 0.0;
            const std::string csv = ct_draw_csv(words::Monodromy::parse(monodromy), draw_samples, draw_depth, tol, *seed,
                                                svg_path.empty() ? nullptr : &svg, &frac);
            emit(out_path, csv, out);
            if (!svg_path.empty()) write_atomically(svg_path, svg);
            err << "fraction of samples below tol: " << fmt(frac) << "\n";
            bool finite = true;
            std::istringstream rows(csv);
            std::string row;
            std::getline(rows, row);
            while (std::getline(rows, row)) {
                const auto a = row.rfind(','), b = row.rfind(',', a - 1);
                finite = finite && std::isfinite(std::stod(row.substr(b + 1, a - b - 1)));
            }
            return finite ? ExitCode::pass : ExitCode::criteria_failed;
        }
        if (verify->parsed()) {
            if (!pair_text.empty()) {
                const auto comma = pair_text.find(',');
                if (comma == std::string::npos) throw InputError("--pair must be U,V");
                const ReducedWord u = ReducedWord::parse(pair_text.substr(0, comma));
                const ReducedWord v = ReducedWord::parse(pair_text.substr(comma + 1));
                const words::Monodromy m = words::Monodromy::parse(monodromy);
                const kleinian::Representation rep = kleinian::solve_fiber_representation(m);
                const std::size_t d = std::min({verify_depth, u.size(), v.size()});
                if (d == 0) throw InputError("--pair words must be nonempty");
                const double gap = gap_between(kleinian::ct_image(rep, words::BoundaryWord::stored(u), d, tol),
                                               kleinian::ct_image(rep, words::BoundaryWord::stored(v), d, tol));
                const json j = {{"command", "verify-leaves"},
                                {"pair", {u.str(), v.str()}},
                                {"depth", d},
                                {"gap", gap},
                                {"degenerate", u == v},
                                {"verdict", lamination::to_string(lamination::crosses_lamination(
                                                u, v, lamination::stable_slope(m), d))}};
                emit(out_path, dump(j), out);
                return ExitCode::pass;
            }
            LeafRunConfig c;
            c.monodromy = monodromy;
            c.leaves = leaves;
            c.depth = verify_depth;
            c.compare_depth = std::min(compare_depth, verify_depth);
            c.tol = tol;
            c.ratio = ratio;
            c.seed = *seed;
            const json report = verify_leaves_report(c);
            emit(out_path, dump(report), out);
            return report["summary"]["pass"].get<bool>() ? ExitCode::pass : ExitCode::criteria_failed;
        }
        if (coarse_cmd->parsed()) {
            const json report = coarse_report(coarse_which, coarse::load_graph(graph_path), source, target, samples, seed);
            emit(out_path, dump(report), out);
            return ExitCode::pass;
        }
        if (audit->parsed()) {
            ladder::SplitSpec spec = ladder::SplitSpec::load(spec_path);
            if (audit->count("--samples")) spec.samples = samples;
            if (seed) spec.seed = *seed;
            const json bundle = ladder_bundle(spec);
            if (!out_path.empty()) {
                if (!fs::is_directory(out_path)) throw InputError("--out must be an existing directory");
                for (const auto& [name, doc] : bundle["audits"].items())
                    write_atomically((fs::path(out_path) / (name + ".json")).string(), dump(doc));
                write_atomically((fs::path(out_path) / "summary.json").string(), dump(bundle["summary"]));
            }
            out << dump(bundle["summary"]);
            return bundle["summary"]["pass"].get<bool>() ? ExitCode::pass : ExitCode::criteria_failed;
        }
        if (poles->parsed()) {
            const words::Slope s = slope_text.empty() ? lamination::stable_slope(words::Monodromy::parse(monodromy))
                                                      : parse_slope(slope_text);
            const json report = poles_report(s, leaves, poles_depth, *seed);
            emit(out_path, dump(report), out);
            return report["pass"].get<bool>() ? ExitCode::pass : ExitCode::criteria_failed;
        }
    } catch (const InputError& e) {
        err << "error: " << e.what() << "\n";
        return ExitCode::input_error;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << "\n";
        return ExitCode::numerical_error;
    } catch (const fs::filesystem_error& e) {
        err << "error: " << e.what() << "\n";
        return ExitCode::input_error;
    }
    return ExitCode::input_error;
}

json ladder_audit_report(const ladder::SplitSpec& spec) { return ladder_bundle(spec); }

}  // namespace ctlab::cli
