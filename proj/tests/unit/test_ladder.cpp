#include "ctlab/error.hpp"
#include "ctlab/ladder.hpp"
#include "ctlab/lamination.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <queue>

using namespace ctlab;
using namespace ctlab::ladder;
using words::ReducedWord;

namespace {

ReducedWord W(const char* s) { return ReducedWord::parse(s); }

std::size_t tree_distance(const ReducedWord& x, const ReducedWord& y) {
    return (x.inverse() * y).size();
}

SplitSpec identity_spec(std::size_t blocks, std::size_t radius) {
    SplitSpec s;
    s.blocks = blocks;
    s.radius = radius;
    s.kinds.assign(blocks, BlockKind::thick);
    s.use_monodromy = false;
    return s;
}

SplitSpec monodromy_spec(std::size_t blocks, std::size_t radius, std::uint64_t seed = 1) {
    SplitSpec s;
    s.blocks = blocks;
    s.radius = radius;
    s.seed = seed;
    return s;
}

std::vector<ReducedWord> stable_leaf(std::size_t radius, std::uint64_t seed = 1) {
    const words::Monodromy m(2, 1, 1, 1);
    const auto leaf = lamination::sample_leaves(lamination::stable_slope(m), 1, seed).front();
    const auto e = lamination::leaf_endpoints(leaf, radius);
    return leaf_path(e.forward, e.backward, radius);
}

Ladder leaf_ladder(std::shared_ptr<const GraphMetricSpace> g, std::uint64_t seed = 1) {
    const auto p = stable_leaf(g->model().radius(), seed);
    return build_ladder(std::move(g), p.front(), p.back());
}

// Breadth-first distances in the sheets-plus-verticals graph, ignoring components.
std::vector<double> bfs_without_components(const SplitModel& m, Vertex source) {
    std::vector<double> d(m.vertex_count(), INFINITY);
    std::queue<Vertex> q;
    d[source] = 0;
    q.push(source);
    while (!q.empty()) {
        const Vertex v = q.front();
        q.pop();
        const std::size_t level = m.level_of(v);
        const ReducedWord& w = m.word_of(v);
        std::vector<Vertex> next;
        for (const char* l : {"a", "b", "A", "B"}) {
            const ReducedWord x = w * W(l);
            if (m.ball().contains(x)) next.push_back(m.vertex(level, x));
        }
        if (level + 1 < m.sheets()) {
            const ReducedWord up = m.gluing(level)(w);
            if (m.ball().contains(up)) next.push_back(m.vertex(level + 1, up));
        }
        if (level > 0) {
            for (std::size_t k = 0; k < m.ball().size(); ++k)
                if (m.gluing(level - 1)(m.ball().word(k)) == w) next.push_back(m.vertex(level - 1, m.ball().word(k)));
        }
        for (const Vertex u : next)
            if (std::isinf(d[u])) {
                d[u] = d[v] + 1;
                q.push(u);
            }
    }
    return d;
}

}  // namespace

TEST(Spec, ParseAndErrors) {
    const SplitSpec s = SplitSpec::parse_text(
        "# comment\nblocks = 3\nradius=4\nkinds = split, thick, split\ncomponents=2\nseed=9\nescape_n=0,1\n");
    EXPECT_EQ(s.blocks, 3u);
    EXPECT_EQ(s.kind(1), BlockKind::thick);
    EXPECT_EQ(s.components, 2u);
    EXPECT_EQ(s.escape_n, (std::vector<std::size_t>{0, 1}));
    EXPECT_THROW(SplitSpec::parse_text("blocks=2\nwhatever=1\n"), InputError);
    EXPECT_THROW(SplitSpec::parse_text("blocks=x\n"), InputError);
    EXPECT_THROW(SplitSpec::parse_text("radius=1\n"), InputError);
    EXPECT_THROW(SplitSpec::parse_text("tube_span_max=3\nn_max=2\n"), InputError);
    EXPECT_THROW(SplitSpec::parse_text("blocks=2\nkinds=split\n"), InputError);
    try {
        SplitSpec::parse_text("blocks=2\n\nnonsense\n");
        FAIL();
    } catch (const InputError& e) {
        EXPECT_EQ(std::string(e.what()).rfind("line 3", 0), 0u);
    }
    EXPECT_THROW(SplitSpec::load("/nonexistent.spec"), InputError);
}

TEST(Model, ThickIdentityPair) {
    const SplitModel m = build_split_model(identity_spec(1, 3));
    EXPECT_EQ(m.sheets(), 2u);
    EXPECT_TRUE(m.components().empty());
    const auto g = graph_metric(m);
    for (std::size_t k = 0; k < m.ball().size(); ++k) {
        const ReducedWord& w = m.ball().word(k);
        EXPECT_EQ(g->distance(m.vertex(0, w), m.vertex(1, w)), 1.0);
    }
    EXPECT_EQ(g->distance(m.vertex(0, W("aaa")), m.vertex(0, W("bbb"))), 6.0);
}

TEST(Model, InvariantsAndTubes) {
    SplitSpec s = monodromy_spec(3, 4, 5);
    s.tube_span_min = 2;
    s.tube_span_max = 2;
    s.components = 2;
    const SplitModel m = build_split_model(s);
    EXPECT_EQ(m.components().size(), 6u);
    for (std::size_t i = 0; i < m.blocks(); ++i) {
        bool tubed = false;
        for (const Tube& t : m.tubes()) tubed = tubed || (t.start <= i && i < t.end);
        EXPECT_TRUE(tubed);
    }
    for (const Tube& t : m.tubes()) {
        EXPECT_LE(t.span(), m.n_max());
        EXPECT_EQ(t.boundary.size(), t.span() + 1);
    }
    // Tubes run for the full span unless the pushed centre leaves the ball.
    for (const Tube& t : m.tubes()) {
        const std::size_t wanted = std::min<std::size_t>(2, m.blocks() - t.start);
        if (t.span() < wanted) {
            const ReducedWord next = m.gluing(t.end)(t.boundary.back().front());
            EXPECT_FALSE(m.ball().contains(next));
        }
        for (std::size_t k = 0; k + 1 < t.boundary.size(); ++k)
            EXPECT_EQ(m.gluing(t.start + k)(t.boundary[k].front()), t.boundary[k + 1].front());
    }
    // Components are connected in their sheet: tree balls around the centre.
    for (const SplitComponent& c : m.components()) {
        for (const ReducedWord& w : c.lower) EXPECT_LE(tree_distance(w, c.centre), 1u);
        EXPECT_EQ(c.lower.size(), 5u);
        EXPECT_EQ(c.upper.size(), 5u);
    }
}

TEST(Model, DeterministicUnderSeed) {
    const SplitModel a = build_split_model(monodromy_spec(3, 4, 17));
    const SplitModel b = build_split_model(monodromy_spec(3, 4, 17));
    ASSERT_EQ(a.components().size(), b.components().size());
    for (std::size_t i = 0; i < a.components().size(); ++i) EXPECT_EQ(a.components()[i].centre, b.components()[i].centre);
    EXPECT_EQ(graph_metric(a)->graph().edges().size(), graph_metric(b)->graph().edges().size());
}

TEST(Model, InfeasibleSpec) {
    SplitSpec s = monodromy_spec(1, 2);
    s.component_radius = 2;
    EXPECT_THROW(build_split_model(s), InputError);
    s.component_radius = 1;
    s.components = 0;
    EXPECT_THROW(build_split_model(s), InputError);
}

TEST(GraphMetric, ComponentConeBound) {
    const SplitModel m = build_split_model(monodromy_spec(2, 4, 3));
    const auto g = graph_metric(m);
    for (const SplitComponent& c : m.components()) {
        const Vertex x = m.vertex(c.block, c.lower.front());
        const Vertex y = m.vertex(c.block + 1, c.upper.back());
        EXPECT_LE(g->distance(x, y), 1.0);
    }
}

TEST(GraphMetric, NoComponentsMatchesBreadthFirst) {
    const SplitModel m = build_split_model(identity_spec(3, 3));
    const auto g = graph_metric(m);
    const auto d = g->distances_from(m.vertex(0, W("ab")));
    const auto oracle = bfs_without_components(m, m.vertex(0, W("ab")));
    for (Vertex v = 0; v < m.vertex_count(); ++v) ASSERT_EQ(d[v], oracle[v]);
    for (std::size_t k = 0; k < m.sheets(); ++k) EXPECT_GE(d[m.vertex(k, W("ab"))], static_cast<double>(k));
}

TEST(GraphMetric, SheetGapAtLeastLevelDifference) {
    const SplitModel m = build_split_model(monodromy_spec(3, 4, 2));
    const auto g = graph_metric(m);
    const auto d = g->distances_from(m.vertex(0, {}));
    for (Vertex v = 0; v < m.vertex_count(); ++v) EXPECT_GE(d[v] + 1e-12, static_cast<double>(m.level_of(v)) * 0.5);
}

TEST(Tree, MedianAndGeodesic) {
    EXPECT_EQ(tree_median(W("aab"), W("aaB"), W("b")), W("aa"));
    EXPECT_EQ(tree_median(W("ab"), W("b"), W("A")), W(""));
    EXPECT_EQ(tree_median(W("aab"), W("aaB"), W("aaa")), W("aa"));
    const auto path = tree_geodesic(W("ab"), W("aB"));
    ASSERT_EQ(path.size(), 3u);
    EXPECT_EQ(path[1], W("a"));
}

TEST(Ladder, IdentityCopies) {
    const auto g = graph_metric(build_split_model(identity_spec(3, 4)));
    const Ladder l = leaf_ladder(g);
    for (std::size_t i = 1; i < g->model().sheets(); ++i) EXPECT_EQ(l.level(i).path, l.level(0).path);
}

TEST(Ladder, EndpointsFollowGluing) {
    const auto g = graph_metric(build_split_model(monodromy_spec(3, 4)));
    const Ladder l = build_ladder(g, W("A"), W("a"));
    const auto& phi = g->model().gluing(0);
    for (std::size_t i = 0; i + 1 < g->model().sheets(); ++i) {
        EXPECT_EQ(l.level(i + 1).from, g->model().gluing(i)(l.level(i).from));
        EXPECT_EQ(l.level(i + 1).to, g->model().gluing(i)(l.level(i).to));
    }
    // The untruncated geodesic length grows like the automorphism's word growth.
    EXPECT_LT(tree_distance(l.level(0).from, l.level(0).to), tree_distance(l.level(2).from, l.level(2).to));
    EXPECT_EQ(tree_distance(l.level(1).from, l.level(1).to), (phi(W("A")).inverse() * phi(W("a"))).size());
    EXPECT_THROW(build_ladder(g, W("a"), W("a")), InputError);
}

TEST(Projection, MatchesBruteForceArgmin) {
    const auto g = graph_metric(build_split_model(monodromy_spec(2, 4)));
    const Ladder l = leaf_ladder(g);
    const SplitModel& m = g->model();
    for (std::size_t i = 0; i < m.sheets(); ++i) {
        const auto& path = l.level(i).path;
        for (std::size_t k = 0; k < m.ball().size(); ++k) {
            const ReducedWord& x = m.ball().word(k);
            const ReducedWord p = project(l, i, x);
            ASSERT_TRUE(l.contains(i, p));
            std::size_t best = SIZE_MAX;
            for (const ReducedWord& y : path) best = std::min(best, tree_distance(x, y));
            ASSERT_EQ(tree_distance(x, p), best);
            ASSERT_EQ(project(l, i, p), p);
        }
    }
}

TEST(Projection, CommutesWithStabilizer) {
    // For the axis of a, left multiplication by a preserves the bi-infinite
    // line; on the truncated segment it commutes away from the ends.
    const auto g = graph_metric(build_split_model(identity_spec(1, 6)));
    const Ladder l = build_ladder(g, W("AAAAAA"), W("aaaaaa"));
    for (const char* x : {"b", "ab", "Ab", "aB"}) {
        const ReducedWord w = W(x);
        EXPECT_EQ(project(l, 0, W("a") * w), W("a") * project(l, 0, w)) << x;
    }
}

TEST(Lipschitz, IdentityStackExhaustive) {
    const auto g = graph_metric(build_split_model(identity_spec(2, 3)));
    const Ladder l = leaf_ladder(g);
    const AuditReport r = lipschitz_audit(l, 0, 1);
    EXPECT_LE(r.constants["C"].get<double>(), 1.0 + 1e-9);
    EXPECT_TRUE(r.pass);
    EXPECT_EQ(r.to_json()["audit"], "lipschitz");
}

TEST(Lipschitz, MonodromyStableAcrossSeeds) {
    const auto g = graph_metric(build_split_model(monodromy_spec(3, 4)));
    const Ladder l = leaf_ladder(g);
    const double c1 = lipschitz_audit(l, 500, 1).constants["C"].get<double>();
    const double c2 = lipschitz_audit(l, 500, 2).constants["C"].get<double>();
    EXPECT_TRUE(std::isfinite(c1));
    EXPECT_LE(std::max(c1, c2), 2 * std::min(c1, c2));
    EXPECT_EQ(lipschitz_audit(l, 500, 1).to_json(), lipschitz_audit(l, 500, 1).to_json());
}

TEST(QiRay, IdentityColumn) {
    const auto g = graph_metric(build_split_model(identity_spec(3, 3)));
    const Ladder l = leaf_ladder(g);
    const QiRay r = qi_ray(l, 1, W(""));
    for (const ReducedWord& w : r.points) EXPECT_TRUE(w.empty());
    EXPECT_EQ(r.quality, 1.0);
    EXPECT_THROW(qi_ray(l, 0, W("bbb")), InputError);
}

TEST(QiRay, MonodromyOnLadder) {
    const auto g = graph_metric(build_split_model(monodromy_spec(3, 4)));
    const Ladder l = leaf_ladder(g);
    const QiRay r = qi_ray(l, 0, W(""));
    for (std::size_t i = 0; i < r.points.size(); ++i) EXPECT_TRUE(l.contains(i, r.points[i]));
    EXPECT_LE(r.quality, 4.0);
}

TEST(Separation, IdentityExhaustive) {
    const auto g = graph_metric(build_split_model(identity_spec(2, 3)));
    const Ladder l = leaf_ladder(g);
    SeparationOptions o;
    o.samples = 0;
    const AuditReport r = coarse_separation_audit(l, qi_ray(l, 0, W("")), o);
    EXPECT_LE(r.constants["C1"].get<double>(), 1.0);
    EXPECT_TRUE(r.pass);
}

TEST(Separation, RayOffLadderRejected) {
    const auto g = graph_metric(build_split_model(identity_spec(2, 3)));
    const Ladder l = leaf_ladder(g);
    QiRay bad;
    bad.points.assign(3, W("bbb"));
    EXPECT_THROW(coarse_separation_audit(l, bad), InputError);
}

TEST(Separation, TwoSidedAtRadiusFive) {
    const auto g = graph_metric(build_split_model(monodromy_spec(2, 5)));
    const Ladder l = leaf_ladder(g);
    const AuditReport r = coarse_separation_audit(l, qi_ray(l, 0, W("")));
    EXPECT_GT(r.constants["far_minus"].get<std::size_t>(), 0u);
    EXPECT_GT(r.constants["far_plus"].get<std::size_t>(), 0u);
}

TEST(Twin, SelfTwinTracesMidpoints) {
    const auto g = graph_metric(build_split_model(identity_spec(2, 3)));
    const Ladder l = leaf_ladder(g);
    const QiRay r = twin_ladder_ray(l, l);
    for (std::size_t i = 0; i < r.points.size(); ++i) {
        const auto& path = l.level(i).path;
        EXPECT_EQ(r.points[i], path[(path.size() - 1) / 2]);
    }
}

TEST(Twin, DisjointLevelsReported) {
    const auto g = graph_metric(build_split_model(identity_spec(1, 3)));
    const Ladder a = build_ladder(g, W("aaa"), W("aab"));
    const Ladder b = build_ladder(g, W("bbb"), W("bba"));
    try {
        twin_ladder_ray(a, b);
        FAIL();
    } catch (const InputError& e) {
        EXPECT_NE(std::string(e.what()).find("sheet 0"), std::string::npos);
    }
}

TEST(Asymptoticity, IdenticalAndParallelRays) {
    const auto g = graph_metric(build_split_model(identity_spec(3, 3)));
    const Ladder l = leaf_ladder(g);
    const QiRay r = qi_ray(l, 0, W(""));
    const AuditReport same = ray_asymptoticity_audit(*g, r, r, 0);
    for (const auto& a : same.constants["alpha"]) EXPECT_EQ(a.get<double>(), 0.0);
    EXPECT_TRUE(same.pass);
    QiRay other;
    other.points.assign(4, l.level(0).path.front());
    const double d0 = g->distance(g->model().vertex(0, {}), g->model().vertex(0, other.points[0]));
    const AuditReport parallel = ray_asymptoticity_audit(*g, r, other, 0);
    for (const auto& a : parallel.constants["alpha"]) EXPECT_EQ(a.get<double>(), d0);
}

TEST(LeafDiameter, GrowsAlongStableLeaf) {
    const auto g = graph_metric(build_split_model(monodromy_spec(2, 6)));
    const AuditReport r = leaf_diameter_growth(*g, stable_leaf(6), {3, 4, 5, 6}, 2.0);
    EXPECT_TRUE(r.pass) << r.to_json().dump();
    EXPECT_THROW(leaf_diameter_growth(*g, stable_leaf(6), {7}, 2.0), InputError);
}

TEST(LeafDiameter, PathInsideOneComponentIsFlat) {
    const SplitModel m = build_split_model(monodromy_spec(1, 4, 3));
    const auto g = graph_metric(m);
    const SplitComponent& c = m.components().front();
    std::vector<ReducedWord> inside;
    for (const ReducedWord& w : c.lower)
        if (w == c.centre || tree_distance(w, c.centre) == 1) inside.push_back(w);
    std::vector<ReducedWord> path{inside[1], c.centre, inside[2]};
    const AuditReport r = leaf_diameter_growth(*g, path, {3, 4}, 2.0);
    for (const auto& d : r.constants["diameters"]) EXPECT_LE(d.get<double>(), 1.0);
    EXPECT_FALSE(r.pass);
    EXPECT_EQ(leaf_diameter_growth(*g, {W("aaaa")}, {3}, 2.0).constants["diameters"][0], 0.0);
}

TEST(Escape, IdentityStackLinear) {
    const auto g = graph_metric(build_split_model(identity_spec(1, 7)));
    const Ladder l = leaf_ladder(g);
    const AuditReport r = midpoint_escape_audit(l);
    EXPECT_TRUE(r.pass);
    for (const auto& row : r.constants["profile"]) EXPECT_EQ(row["M"].get<double>(), row["N"].get<double>());
}

TEST(Escape, MonodromyNonDecreasing) {
    const auto g = graph_metric(build_split_model(monodromy_spec(2, 7)));
    const Ladder l = leaf_ladder(g);
    const AuditReport r = midpoint_escape_audit(l);
    EXPECT_TRUE(r.pass) << r.to_json().dump();
    EXPECT_EQ(r.constants["profile"][0]["M"].get<double>(), 0.0);
    EXPECT_THROW(midpoint_escape_audit(l, {{0}, "sideways"}), InputError);
}

TEST(Quasiconvexity, LadderIsQuasiconvex) {
    const auto g = graph_metric(build_split_model(monodromy_spec(3, 4)));
    const Ladder l = leaf_ladder(g);
    const AuditReport r = ladder_quasiconvexity_audit(l, 100, 1);
    EXPECT_TRUE(std::isfinite(r.constants["C"].get<double>()));
}

TEST(Hyperbolicity, GraphMetricStableInRadius) {
    std::vector<double> deltas;
    for (const std::size_t R : {3u, 6u}) {
        const auto g = graph_metric(build_split_model(monodromy_spec(2, R)));
        deltas.push_back(coarse::four_point_delta(g->graph(), 3000, 1).delta);
    }
    EXPECT_TRUE(std::isfinite(deltas[0]) && std::isfinite(deltas[1]));
    EXPECT_LE(deltas[1], 2 * std::max(deltas[0], 0.5));
}

TEST(LeafPath, ThroughIdentity) {
    const auto p = stable_leaf(3);
    ASSERT_EQ(p.size(), 7u);
    EXPECT_TRUE(p[3].empty());
    EXPECT_THROW(leaf_path(W("ab"), W("AB"), 3), InputError);
    EXPECT_THROW(leaf_path(W("ab"), W("ab"), 2), InputError);
}
