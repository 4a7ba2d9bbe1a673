#include "ctlab/coarse.hpp"

#include "ctlab/error.hpp"
#include "ctlab/exact.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <queue>
#include <random>
#include <sstream>

namespace ctlab::coarse {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

bool same_length(double x, double y) { return std::abs(x - y) <= length_tolerance * std::max(1.0, std::abs(x)); }

}  // namespace

MetricGraph::MetricGraph(std::size_t vertex_count, std::vector<Edge> edges, std::vector<std::string> labels)
    : adjacency_(vertex_count), edges_(std::move(edges)), labels_(std::move(labels)) {
    if (vertex_count == 0) throw InputError("graph must have at least one vertex");
    if (!labels_.empty() && labels_.size() != vertex_count) throw InputError("label count differs from vertex count");
    for (const Edge& e : edges_) {
        if (e.u >= vertex_count || e.v >= vertex_count) {
            std::ostringstream os;
            os << "edge " << e.u << "-" << e.v << " references a vertex outside 0.." << vertex_count - 1;
            throw InputError(os.str());
        }
        if (e.u == e.v) throw InputError("self-loop at vertex " + std::to_string(e.u));
        if (!(e.weight > 0.0) || !std::isfinite(e.weight))
            throw InputError("edge " + std::to_string(e.u) + "-" + std::to_string(e.v) + " has a nonpositive weight");
        adjacency_[e.u].push_back({e.v, e.weight});
        adjacency_[e.v].push_back({e.u, e.weight});
    }
    for (auto& arcs : adjacency_)
        std::sort(arcs.begin(), arcs.end(), [](const Arc& x, const Arc& y) {
            return x.to != y.to ? x.to < y.to : x.weight < y.weight;
        });

    std::vector<char> seen(vertex_count, 0);
    std::vector<Vertex> stack{0};
    seen[0] = 1;
    std::size_t reached = 1;
    while (!stack.empty()) {
        const Vertex x = stack.back();
        stack.pop_back();
        for (const Arc& a : adjacency_[x])
            if (!seen[a.to]) {
                seen[a.to] = 1;
                ++reached;
                stack.push_back(a.to);
            }
    }
    if (reached != vertex_count) throw InputError("graph is disconnected");
}

double MetricGraph::edge_weight(Vertex u, Vertex v) const {
    for (const Arc& a : adjacency_.at(u))
        if (a.to == v) return a.weight;
    throw InputError("no edge " + std::to_string(u) + "-" + std::to_string(v));
}

ElectricGraph::ElectricGraph(MetricGraph base, SubsetFamily family) : base_(std::move(base)), family_(std::move(family)) {
    std::vector<Edge> edges = base_.edges();
    for (std::size_t i = 0; i < family_.subsets.size(); ++i) {
        auto& h = family_.subsets[i];
        if (h.empty()) throw InputError("subset " + std::to_string(i) + " is empty");
        std::sort(h.begin(), h.end());
        h.erase(std::unique(h.begin(), h.end()), h.end());
        for (const Vertex x : h) {
            if (x >= base_.size())
                throw InputError("subset " + std::to_string(i) + " contains vertex " + std::to_string(x) +
                                 " outside the graph");
            edges.push_back({x, base_.size() + i, 0.5});
        }
    }
    graph_ = MetricGraph(base_.size() + family_.subsets.size(), std::move(edges));
}

ElectricGraph electrocute(const MetricGraph& g, const SubsetFamily& f) { return {g, f}; }

std::vector<double> distances_from(const MetricGraph& g, std::span<const Vertex> sources) {
    std::vector<double> dist(g.size(), inf);
    using Item = std::pair<double, Vertex>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
    for (const Vertex s : sources) {
        if (s >= g.size()) throw InputError("source vertex " + std::to_string(s) + " outside the graph");
        dist[s] = 0.0;
        queue.push({0.0, s});
    }
    while (!queue.empty()) {
        const auto [d, x] = queue.top();
        queue.pop();
        if (d > dist[x]) continue;
        for (const Arc& a : g.neighbors(x)) {
            const double nd = d + a.weight;
            if (nd < dist[a.to]) {
                dist[a.to] = nd;
                queue.push({nd, a.to});
            }
        }
    }
    return dist;
}

std::vector<double> distances_from(const MetricGraph& g, Vertex source) {
    const Vertex s[1] = {source};
    return distances_from(g, s);
}

std::vector<double> distances_within(const MetricGraph& g, Vertex source, double radius) {
    if (source >= g.size()) throw InputError("source vertex " + std::to_string(source) + " outside the graph");
    std::vector<double> dist(g.size(), inf);
    using Item = std::pair<double, Vertex>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
    dist[source] = 0.0;
    queue.push({0.0, source});
    while (!queue.empty()) {
        const auto [d, x] = queue.top();
        queue.pop();
        if (d > dist[x]) continue;
        for (const Arc& a : g.neighbors(x)) {
            const double nd = d + a.weight;
            if (nd < dist[a.to] && nd <= radius * (1.0 + length_tolerance)) {
                dist[a.to] = nd;
                queue.push({nd, a.to});
            }
        }
    }
    return dist;
}

double distance(const MetricGraph& g, Vertex u, Vertex v) {
    if (u >= g.size() || v >= g.size()) throw InputError("vertex outside the graph");
    std::vector<double> dist(g.size(), inf);
    using Item = std::pair<double, Vertex>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
    dist[u] = 0.0;
    queue.push({0.0, u});
    while (!queue.empty()) {
        const auto [d, x] = queue.top();
        queue.pop();
        if (x == v) return d;
        if (d > dist[x]) continue;
        for (const Arc& a : g.neighbors(x)) {
            const double nd = d + a.weight;
            if (nd < dist[a.to]) {
                dist[a.to] = nd;
                queue.push({nd, a.to});
            }
        }
    }
    return inf;
}

std::vector<std::vector<double>> all_pairs(const MetricGraph& g) {
    std::vector<std::vector<double>> out;
    out.reserve(g.size());
    for (Vertex v = 0; v < g.size(); ++v) out.push_back(distances_from(g, v));
    return out;
}

PathRecord shortest_path(const MetricGraph& g, Vertex u, Vertex v) {
    if (u >= g.size() || v >= g.size()) throw InputError("path endpoint outside the graph");
    const std::vector<double> to_target = distances_from(g, v);
    PathRecord p;
    p.vertices.push_back(u);
    Vertex x = u;
    while (x != v) {
        // Smallest neighbour that stays on some shortest path.
        const Arc* next = nullptr;
        for (const Arc& a : g.neighbors(x)) {
            if (same_length(a.weight + to_target[a.to], to_target[x])) {
                next = &a;
                break;
            }
        }
        if (next == nullptr) throw NumericalError("shortest path reconstruction failed");
        p.steps.push_back({x, next->to, next->weight, std::nullopt});
        p.length += next->weight;
        x = next->to;
        p.vertices.push_back(x);
    }
    return p;
}

PathRecord shortest_path(const ElectricGraph& g, Vertex u, Vertex v) {
    if (u >= g.base().size() || v >= g.base().size()) throw InputError("path endpoint outside the base graph");
    PathRecord p = shortest_path(g.graph(), u, v);
    for (PathStep& s : p.steps) {
        if (g.is_apex(s.to)) s.subset = g.subset_of_apex(s.to);
        if (g.is_apex(s.from)) s.subset = g.subset_of_apex(s.from);
    }
    return p;
}

namespace {

// First subset visited again after the path has left it: returns the
// subset with its first and last touching positions.
struct Backtrack {
    std::size_t subset, first, last;
};

std::optional<Backtrack> find_backtrack(const ElectricGraph& eg, const std::vector<Vertex>& vs) {
    const auto& subsets = eg.family().subsets;
    for (std::size_t h = 0; h < subsets.size(); ++h) {
        const auto touches = [&](Vertex x) {
            return x == eg.apex(h) || (!eg.is_apex(x) && std::binary_search(subsets[h].begin(), subsets[h].end(), x));
        };
        std::vector<std::size_t> hits;
        for (std::size_t i = 0; i < vs.size(); ++i)
            if (touches(vs[i])) hits.push_back(i);
        for (std::size_t k = 1; k < hits.size(); ++k)
            if (hits[k] != hits[k - 1] + 1) return Backtrack{h, hits.front(), hits.back()};
    }
    return std::nullopt;
}

}  // namespace

PathRecord electro_ambient(const MetricGraph& g, const SubsetFamily& f, Vertex u, Vertex v) {
    const ElectricGraph eg = electrocute(g, f);
    std::vector<Vertex> vs = shortest_path(eg, u, v).vertices;

    std::size_t repairs = 0;
    while (const auto bt = find_backtrack(eg, vs)) {
        if (++repairs > eg.graph().size()) throw NumericalError("backtracking repair did not settle");
        std::vector<Vertex> spliced(vs.begin(), vs.begin() + static_cast<std::ptrdiff_t>(bt->first) + 1);
        const Vertex apex = eg.apex(bt->subset);
        if (spliced.back() != vs[bt->last] && spliced.back() != apex && vs[bt->last] != apex) spliced.push_back(apex);
        spliced.insert(spliced.end(), vs.begin() + static_cast<std::ptrdiff_t>(bt->last) + (spliced.back() == vs[bt->last] ? 1 : 0), vs.end());
        vs = std::move(spliced);
    }

    // Replace each hop p -> apex -> q by a base geodesic.
    PathRecord out;
    out.repairs = repairs;
    out.vertices.push_back(vs.front());
    for (std::size_t i = 1; i < vs.size(); ++i) {
        if (eg.is_apex(vs[i])) continue;
        const Vertex from = out.vertices.back();
        if (!eg.is_apex(vs[i - 1])) {
            const double w = g.edge_weight(from, vs[i]);
            out.steps.push_back({from, vs[i], w, std::nullopt});
            out.length += w;
            out.vertices.push_back(vs[i]);
            continue;
        }
        const PathRecord seg = shortest_path(g, from, vs[i]);
        for (const PathStep& s : seg.steps) out.steps.push_back(s);
        out.vertices.insert(out.vertices.end(), seg.vertices.begin() + 1, seg.vertices.end());
        out.length += seg.length;
    }
    return out;
}

double tracking_constant(const MetricGraph& g, const SubsetFamily& f, Vertex u, Vertex v) {
    const PathRecord geodesic = shortest_path(g, u, v);
    const PathRecord ambient = electro_ambient(g, f, u, v);
    const std::vector<double> dist = distances_from(g, ambient.vertices);
    double worst = 0.0;
    for (const Vertex x : geodesic.vertices) worst = std::max(worst, dist[x]);
    return worst;
}

double four_point_defect(double xy, double zw, double xz, double yw, double xw, double yz) {
    std::array<double, 3> s{xy + zw, xz + yw, xw + yz};
    std::sort(s.begin(), s.end());
    return (s[2] - s[1]) / 2.0;
}

HyperbolicityEstimate four_point_delta(const MetricGraph& g) {
    if (g.size() > 80) throw InputError("exhaustive four-point scan is limited to 80 vertices");
    const auto d = all_pairs(g);
    HyperbolicityEstimate est;
    est.exhaustive = true;
    const std::size_t n = g.size();
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = x + 1; y < n; ++y)
            for (std::size_t z = y + 1; z < n; ++z)
                for (std::size_t w = z + 1; w < n; ++w) {
                    est.delta = std::max(est.delta,
                                         four_point_defect(d[x][y], d[z][w], d[x][z], d[y][w], d[x][w], d[y][z]));
                    ++est.quadruples;
                }
    return est;
}

HyperbolicityEstimate four_point_delta(const MetricGraph& g, std::size_t samples, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, g.size() - 1);
    std::map<Vertex, std::vector<double>> cache;
    const auto row = [&](Vertex s) -> const std::vector<double>& {
        auto it = cache.find(s);
        if (it == cache.end()) it = cache.emplace(s, distances_from(g, s)).first;
        return it->second;
    };
    HyperbolicityEstimate est;
    for (std::size_t k = 0; k < samples; ++k) {
        const Vertex x = pick(rng), y = pick(rng), z = pick(rng), w = pick(rng);
        const auto& dx = row(x);
        const auto& dy = row(y);
        est.delta = std::max(est.delta, four_point_defect(dx[y], row(z)[w], dx[z], dy[w], dx[w], dy[z]));
        ++est.quadruples;
    }
    return est;
}

double quasiconvexity_constant(const MetricGraph& g, std::span<const Vertex> subset) {
    if (subset.size() < 2) throw InputError("quasiconvexity needs at least two subset members");
    const std::vector<double> to_subset = distances_from(g, subset);
    double worst = 0.0;
    for (std::size_t i = 0; i < subset.size(); ++i)
        for (std::size_t j = i + 1; j < subset.size(); ++j)
            for (const Vertex x : shortest_path(g, subset[i], subset[j]).vertices)
                worst = std::max(worst, to_subset[x]);
    return worst;
}

double family_separation(const MetricGraph& g, const SubsetFamily& f) {
    double best = inf;
    for (std::size_t i = 0; i < f.subsets.size(); ++i) {
        const std::vector<double> d = distances_from(g, f.subsets[i]);
        for (std::size_t j = i + 1; j < f.subsets.size(); ++j)
            for (const Vertex x : f.subsets[j]) best = std::min(best, d.at(x));
    }
    return best;
}

namespace {

[[noreturn]] void parse_fail(std::size_t line, const std::string& what) {
    throw InputError("line " + std::to_string(line) + ": " + what);
}

std::size_t parse_vertex(const std::string& tok, std::size_t line) {
    if (tok.empty() || !std::all_of(tok.begin(), tok.end(), [](char c) { return c >= '0' && c <= '9'; }))
        parse_fail(line, "expected a vertex index, got '" + tok + "'");
    try {
        return static_cast<std::size_t>(std::stoull(tok));
    } catch (const std::exception&) {
        parse_fail(line, "vertex index out of range: '" + tok + "'");
    }
}

}  // namespace

GraphFile parse_graph(std::istream& in) {
    std::string text;
    std::size_t line_no = 0;
    std::vector<std::pair<std::size_t, std::vector<std::string>>> lines;
    while (std::getline(in, text)) {
        ++line_no;
        if (const auto hash = text.find('#'); hash != std::string::npos) text.erase(hash);
        std::istringstream ss(text);
        std::vector<std::string> toks;
        for (std::string t; ss >> t;) toks.push_back(t);
        if (!toks.empty()) lines.emplace_back(line_no, std::move(toks));
    }
    if (lines.empty()) throw InputError("line 1: empty graph file");

    const auto& [header_line, header] = lines.front();
    if (header.size() != 2) parse_fail(header_line, "header must be 'n m'");
    const std::size_t n = parse_vertex(header[0], header_line);
    const std::size_t m = parse_vertex(header[1], header_line);
    if (lines.size() < m + 1) parse_fail(lines.back().first, "expected " + std::to_string(m) + " edge lines");

    std::vector<Edge> edges;
    edges.reserve(m);
    for (std::size_t i = 1; i <= m; ++i) {
        const auto& [ln, toks] = lines[i];
        if (toks.size() != 3) parse_fail(ln, "edge line must be 'u v w'");
        const std::size_t u = parse_vertex(toks[0], ln), v = parse_vertex(toks[1], ln);
        if (u >= n || v >= n) parse_fail(ln, "edge endpoint outside 0.." + std::to_string(n == 0 ? 0 : n - 1));
        if (u == v) parse_fail(ln, "self-loop");
        exact::Rational w;
        try {
            w = exact::parse_rational(toks[2]);
        } catch (const InputError& e) {
            parse_fail(ln, e.what());
        }
        if (w <= 0) parse_fail(ln, "edge weight must be positive");
        edges.push_back({u, v, exact::to_double(w)});
    }

    SubsetFamily family;
    for (std::size_t i = m + 1; i < lines.size(); ++i) {
        const auto& [ln, toks] = lines[i];
        if (toks.front() != "H:") parse_fail(ln, "expected a subset line 'H: v1 v2 ...'");
        if (toks.size() < 2) parse_fail(ln, "empty subset");
        std::vector<Vertex> h;
        for (std::size_t k = 1; k < toks.size(); ++k) {
            const std::size_t x = parse_vertex(toks[k], ln);
            if (x >= n) parse_fail(ln, "subset member " + toks[k] + " outside the graph");
            h.push_back(x);
        }
        family.subsets.push_back(std::move(h));
    }
    try {
        return {MetricGraph(n, std::move(edges)), std::move(family)};
    } catch (const InputError& e) {
        parse_fail(header_line, e.what());
    }
}

GraphFile load_graph(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open graph file '" + path + "'");
    return parse_graph(in);
}

}  // namespace ctlab::coarse
