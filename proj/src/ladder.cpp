#include "ctlab/ladder.hpp"

#include "ctlab/error.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <set>
#include <sstream>

namespace ctlab::ladder {

using words::Letter;

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();
constexpr double tol = 1e-9;

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    for (std::string item; std::getline(ss, item, ',');) out.push_back(trim(item));
    return out;
}

std::size_t to_size(const std::string& v, const std::string& key) {
    if (v.empty() || !std::all_of(v.begin(), v.end(), [](char c) { return c >= '0' && c <= '9'; }))
        throw InputError(key + " must be a nonnegative integer, got '" + v + "'");
    return static_cast<std::size_t>(std::stoull(v));
}

double to_real(const std::string& v, const std::string& key) {
    try {
        std::size_t used = 0;
        const double x = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw InputError(key + " must be a number, got '" + v + "'");
    }
}

BlockKind to_kind(const std::string& v) {
    if (v == "thick") return BlockKind::thick;
    if (v == "split") return BlockKind::split;
    throw InputError("block kind must be thick or split, got '" + v + "'");
}

std::size_t tree_distance(const ReducedWord& x, const ReducedWord& y) {
    return x.size() + y.size() - 2 * words::common_prefix_length(x, y);
}

}  // namespace

const char* to_string(BlockKind k) { return k == BlockKind::thick ? "thick" : "split"; }

BlockKind SplitSpec::kind(std::size_t block) const {
    if (kinds.empty()) return BlockKind::split;
    return kinds.at(block);
}

SplitSpec SplitSpec::parse(std::istream& in) {
    SplitSpec spec;
    std::string line;
    std::size_t line_no = 0;
    std::optional<BlockKind> uniform;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw InputError("line " + std::to_string(line_no) + ": expected key=value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        try {
            if (key == "blocks") spec.blocks = to_size(value, key);
            else if (key == "radius") spec.radius = to_size(value, key);
            else if (key == "kinds") {
                spec.kinds.clear();
                for (const auto& k : split_list(value)) spec.kinds.push_back(to_kind(k));
            } else if (key == "kind") uniform = to_kind(value);
            else if (key == "components") spec.components = to_size(value, key);
            else if (key == "component_radius") spec.component_radius = to_size(value, key);
            else if (key == "tube_span_min") spec.tube_span_min = to_size(value, key);
            else if (key == "tube_span_max") spec.tube_span_max = to_size(value, key);
            else if (key == "n_max") spec.n_max = to_size(value, key);
            else if (key == "seed") spec.seed = to_size(value, key);
            else if (key == "automorphism") {
                if (value != "monodromy" && value != "identity")
                    throw InputError("automorphism must be monodromy or identity");
                spec.use_monodromy = value == "monodromy";
            } else if (key == "monodromy") spec.monodromy = words::Monodromy::parse(value).matrix();
            else if (key == "samples") spec.samples = to_size(value, key);
            else if (key == "lipschitz_bound") spec.lipschitz_bound = to_real(value, key);
            else if (key == "separation_bound") spec.separation_bound = to_real(value, key);
            else if (key == "k0") spec.k0 = to_real(value, key);
            else if (key == "k1_bound") spec.k1_bound = to_real(value, key);
            else if (key == "ray_bound") spec.ray_bound = to_real(value, key);
            else if (key == "component_bound") spec.component_bound = to_real(value, key);
            else if (key == "asymptotic_start") spec.asymptotic_start = to_size(value, key);
            else if (key == "escape_n") {
                spec.escape_n.clear();
                for (const auto& k : split_list(value)) spec.escape_n.push_back(to_size(k, key));
            } else if (key == "escape_side") {
                if (value != "same" && value != "opposite" && value != "all")
                    throw InputError("escape_side must be same, opposite or all");
                spec.escape_side = value;
            } else if (key == "radii") {
                spec.radii.clear();
                for (const auto& k : split_list(value)) spec.radii.push_back(to_size(k, key));
            } else throw InputError("unknown key '" + key + "'");
        } catch (const InputError& e) {
            const std::string msg = e.what();
            if (msg.rfind("line ", 0) == 0) throw;
            throw InputError("line " + std::to_string(line_no) + ": " + msg);
        }
    }
    if (uniform) spec.kinds.assign(spec.blocks, *uniform);
    spec.validate();
    return spec;
}

SplitSpec SplitSpec::parse_text(const std::string& text) {
    std::istringstream in(text);
    return parse(in);
}

SplitSpec SplitSpec::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open split spec '" + path + "'");
    return parse(in);
}

void SplitSpec::validate() const {
    if (blocks < 1) throw InputError("blocks must be >= 1");
    if (radius < 2) throw InputError("radius must be >= 2");
    if (radius > 9) throw InputError("radius above 9 makes sheets too large");
    if (!kinds.empty() && kinds.size() != blocks) throw InputError("kinds lists a different number of blocks");
    if (tube_span_min < 1 || tube_span_min > tube_span_max) throw InputError("need 1 <= tube_span_min <= tube_span_max");
    if (tube_span_max > n_max) throw InputError("tube_span_max exceeds n_max");
    if (component_radius >= radius) throw InputError("component_radius must be below radius");
    if (escape_side != "same" && escape_side != "opposite" && escape_side != "all")
        throw InputError("escape_side must be same, opposite or all");
    bool any_split = false;
    for (std::size_t i = 0; i < blocks; ++i) any_split = any_split || kind(i) == BlockKind::split;
    if (any_split && components < 1) throw InputError("split blocks need at least one component");
}

nlohmann::json SplitSpec::to_json() const {
    nlohmann::json j;
    j["blocks"] = blocks;
    j["radius"] = radius;
    std::vector<std::string> ks;
    for (std::size_t i = 0; i < blocks; ++i) ks.emplace_back(to_string(kind(i)));
    j["kinds"] = ks;
    j["components"] = components;
    j["component_radius"] = component_radius;
    j["tube_span_min"] = tube_span_min;
    j["tube_span_max"] = tube_span_max;
    j["n_max"] = n_max;
    j["seed"] = seed;
    j["automorphism"] = use_monodromy ? "monodromy" : "identity";
    j["monodromy"] = {monodromy.p, monodromy.q, monodromy.r, monodromy.t};
    j["samples"] = samples;
    return j;
}

// ---------------------------------------------------------------------------

CayleyBall::CayleyBall(std::size_t radius) : radius_(radius), words_(words::words_up_to(radius)) {
    for (std::size_t i = 0; i < words_.size(); ++i) index_.emplace(words_[i], i);
}

std::optional<std::size_t> CayleyBall::index(const ReducedWord& w) const {
    const auto it = index_.find(w);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

SplitModel::SplitModel(std::size_t radius, std::vector<BlockKind> kinds, std::vector<Automorphism> gluings,
                       std::vector<SplitComponent> components, std::vector<Tube> tubes, std::size_t n_max)
    : ball_(radius),
      kinds_(std::move(kinds)),
      gluings_(std::move(gluings)),
      components_(std::move(components)),
      tubes_(std::move(tubes)),
      n_max_(n_max) {
    if (kinds_.empty() || kinds_.size() != gluings_.size()) throw InputError("need one gluing per block");
    for (std::size_t i = 0; i < kinds_.size(); ++i) {
        if (kinds_[i] != BlockKind::split) continue;
        const bool tubed = std::any_of(tubes_.begin(), tubes_.end(), [&](const Tube& t) { return t.start <= i && i < t.end; });
        if (!tubed) throw InputError("split block " + std::to_string(i) + " has no splitting tube");
    }
    for (const Tube& t : tubes_) {
        if (t.span() < 1 || t.span() > n_max_) throw InputError("tube span outside 1..n_max");
        if (t.end > kinds_.size() || t.boundary.size() != t.span() + 1) throw InputError("malformed tube record");
    }
}

Vertex SplitModel::vertex(std::size_t level, const ReducedWord& w) const {
    if (level >= sheets()) throw InputError("sheet " + std::to_string(level) + " does not exist");
    const auto i = ball_.index(w);
    if (!i) throw InputError("word '" + w.str() + "' lies outside the sheet ball");
    return level * ball_.size() + *i;
}

namespace {

std::vector<ReducedWord> ball_around(const ReducedWord& c, std::size_t r) {
    std::vector<ReducedWord> out;
    for (const ReducedWord& g : words::words_up_to(r)) out.push_back(c * g);
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

SplitModel build_split_model(const Automorphism& phi, std::size_t blocks, std::size_t radius, const SplitSpec& spec,
                             std::uint64_t seed) {
    SplitSpec s = spec;
    s.blocks = blocks;
    s.radius = radius;
    if (!s.kinds.empty() && s.kinds.size() != blocks) s.kinds.assign(blocks, s.kinds.front());
    s.validate();

    std::mt19937_64 rng(seed);
    const CayleyBall ball(radius);
    const std::size_t r = s.component_radius;
    std::vector<BlockKind> kinds;
    std::vector<Automorphism> gluings;
    for (std::size_t i = 0; i < blocks; ++i) {
        kinds.push_back(s.kind(i));
        gluings.push_back(kinds.back() == BlockKind::split && s.use_monodromy ? phi : Automorphism());
    }

    std::vector<SplitComponent> components;
    std::vector<Tube> tubes;
    for (std::size_t i = 0; i < blocks; ++i) {
        if (kinds[i] != BlockKind::split) continue;
        std::vector<ReducedWord> candidates;
        for (std::size_t k = 0; k < ball.size(); ++k) {
            const ReducedWord& c = ball.word(k);
            if (c.size() + r <= radius && gluings[i](c).size() + r <= radius) candidates.push_back(c);
        }
        if (candidates.empty())
            throw InputError("split spec infeasible: no component of radius " + std::to_string(r) + " fits in block " +
                             std::to_string(i));
        std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
        for (std::size_t k = 0; k < s.components; ++k) {
            SplitComponent comp;
            comp.block = i;
            comp.centre = candidates[pick(rng)];
            comp.lower = ball_around(comp.centre, r);
            comp.upper = ball_around(gluings[i](comp.centre), r);
            components.push_back(std::move(comp));
        }

        const ReducedWord& centre = components[components.size() - s.components].centre;
        std::uniform_int_distribution<std::size_t> span_pick(s.tube_span_min, s.tube_span_max);
        const std::size_t wanted = std::min(span_pick(rng), blocks - i);
        Tube t;
        t.start = i;
        t.boundary.push_back({centre});
        ReducedWord w = centre;
        for (std::size_t level = i; level < i + wanted; ++level) {
            w = gluings[level](w);
            if (!ball.contains(w)) break;
            t.boundary.push_back({w});
        }
        t.end = i + t.boundary.size() - 1;
        tubes.push_back(std::move(t));
    }
    return {radius, std::move(kinds), std::move(gluings), std::move(components), std::move(tubes), s.n_max};
}

SplitModel build_split_model(const SplitSpec& spec) {
    const auto [p, q, r, t] = spec.monodromy;
    const Automorphism phi = spec.use_monodromy ? words::Monodromy(p, q, r, t).automorphism() : Automorphism();
    return build_split_model(phi, spec.blocks, spec.radius, spec, spec.seed);
}

// ---------------------------------------------------------------------------

namespace {

coarse::ElectricGraph build_electric(const SplitModel& m) {
    const CayleyBall& ball = m.ball();
    std::vector<coarse::Edge> edges;
    for (std::size_t level = 0; level < m.sheets(); ++level) {
        for (std::size_t k = 1; k < ball.size(); ++k) {
            const ReducedWord& w = ball.word(k);
            edges.push_back({m.vertex(level, w.prefix(w.size() - 1)), m.vertex(level, w), 1.0});
        }
    }
    for (std::size_t i = 0; i < m.blocks(); ++i) {
        for (std::size_t k = 0; k < ball.size(); ++k) {
            const ReducedWord img = m.gluing(i)(ball.word(k));
            if (ball.contains(img)) edges.push_back({m.vertex(i, ball.word(k)), m.vertex(i + 1, img), 1.0});
        }
    }
    coarse::SubsetFamily family;
    for (const SplitComponent& c : m.components()) {
        std::vector<Vertex> h;
        for (const ReducedWord& w : c.lower) h.push_back(m.vertex(c.block, w));
        for (const ReducedWord& w : c.upper) h.push_back(m.vertex(c.block + 1, w));
        family.subsets.push_back(std::move(h));
    }
    return coarse::electrocute(coarse::MetricGraph(m.vertex_count(), std::move(edges)), family);
}

}  // namespace

GraphMetricSpace::GraphMetricSpace(SplitModel model) : model_(std::move(model)), electric_(build_electric(model_)) {}

std::shared_ptr<const GraphMetricSpace> graph_metric(const SplitModel& m) {
    return std::make_shared<const GraphMetricSpace>(m);
}

ReducedWord tree_median(const ReducedWord& x, const ReducedWord& y, const ReducedWord& z) {
    const std::size_t xy = words::common_prefix_length(x, y);
    const std::size_t yz = words::common_prefix_length(y, z);
    const std::size_t xz = words::common_prefix_length(x, z);
    if (xy >= yz && xy >= xz) return x.prefix(xy);
    if (yz >= xz) return y.prefix(yz);
    return x.prefix(xz);
}

std::vector<ReducedWord> tree_geodesic(const ReducedWord& x, const ReducedWord& y) {
    const std::size_t k = words::common_prefix_length(x, y);
    std::vector<ReducedWord> out;
    for (std::size_t n = x.size(); n > k; --n) out.push_back(x.prefix(n));
    out.push_back(x.prefix(k));
    for (std::size_t n = k + 1; n <= y.size(); ++n) out.push_back(y.prefix(n));
    return out;
}

Ladder::Ladder(std::shared_ptr<const GraphMetricSpace> space, std::vector<LadderLevel> levels)
    : space_(std::move(space)), levels_(std::move(levels)) {
    if (!space_) throw InputError("ladder needs a graph metric space");
    if (levels_.size() != space_->model().sheets()) throw InputError("ladder needs one level per sheet");
}

bool Ladder::contains(std::size_t level, const ReducedWord& w) const {
    const auto& p = levels_.at(level).path;
    return std::find(p.begin(), p.end(), w) != p.end();
}

std::size_t Ladder::position(std::size_t level, const ReducedWord& w) const {
    const auto& p = levels_.at(level).path;
    const auto it = std::find(p.begin(), p.end(), w);
    if (it == p.end()) throw InputError("'" + w.str() + "' is not on ladder level " + std::to_string(level));
    return static_cast<std::size_t>(it - p.begin());
}

std::vector<Vertex> Ladder::vertices() const {
    std::vector<Vertex> out;
    for (std::size_t i = 0; i < levels_.size(); ++i)
        for (const ReducedWord& w : levels_[i].path) out.push_back(space_->model().vertex(i, w));
    return out;
}

Ladder build_ladder(std::shared_ptr<const GraphMetricSpace> space, const ReducedWord& p, const ReducedWord& q) {
    if (!space) throw InputError("ladder needs a graph metric space");
    if (p == q) throw InputError("ladder base geodesic needs distinct endpoints");
    const SplitModel& m = space->model();
    std::vector<LadderLevel> levels;
    ReducedWord from = p, to = q;
    for (std::size_t i = 0; i < m.sheets(); ++i) {
        if (i > 0) {
            from = m.gluing(i - 1)(from);
            to = m.gluing(i - 1)(to);
        }
        LadderLevel level{from, to, {}};
        for (ReducedWord& w : tree_geodesic(from, to))
            if (m.ball().contains(w)) level.path.push_back(std::move(w));
        if (level.path.empty()) throw InputError("ladder level " + std::to_string(i) + " misses the sheet ball");
        levels.push_back(std::move(level));
    }
    return {std::move(space), std::move(levels)};
}

ReducedWord project(const Ladder& l, std::size_t level, const ReducedWord& x) {
    const auto& path = l.level(level).path;
    return tree_median(x, path.front(), path.back());
}

Vertex project(const Ladder& l, Vertex x) {
    const SplitModel& m = l.space().model();
    if (x >= m.vertex_count()) throw InputError("projection is defined on sheet vertices only");
    const std::size_t level = m.level_of(x);
    return m.vertex(level, project(l, level, m.word_of(x)));
}

std::vector<Vertex> QiRay::vertices(const GraphMetricSpace& g) const {
    std::vector<Vertex> out;
    for (std::size_t i = 0; i < points.size(); ++i) out.push_back(g.model().vertex(i, points[i]));
    return out;
}

nlohmann::json AuditReport::to_json() const {
    return {{"audit", audit}, {"params", params}, {"constants", constants}, {"samples", samples}, {"pass", pass}};
}

namespace {

nlohmann::json finite_or_null(double x) { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr); }

}  // namespace

AuditReport lipschitz_audit(const Ladder& l, std::size_t samples, std::uint64_t seed, double bound) {
    const GraphMetricSpace& g = l.space();
    const std::size_t n = g.model().vertex_count();
    AuditReport rep;
    rep.audit = "lipschitz";
    rep.params = {{"samples", samples}, {"seed", seed}, {"bound", bound}, {"exhaustive", samples == 0}};
    double c = 0.0;
    std::size_t count = 0;
    if (samples == 0) {
        if (n > 4000) throw InputError("exhaustive Lipschitz audit is limited to 4000 vertices");
        std::vector<Vertex> proj(n);
        for (Vertex x = 0; x < n; ++x) proj[x] = project(l, x);
        std::map<Vertex, std::vector<double>> from_proj;
        for (Vertex x = 0; x < n; ++x) {
            const std::vector<double> dx = g.distances_from(x);
            auto it = from_proj.find(proj[x]);
            if (it == from_proj.end()) it = from_proj.emplace(proj[x], g.distances_from(proj[x])).first;
            for (Vertex y = x + 1; y < n; ++y) {
                c = std::max(c, it->second[proj[y]] / (dx[y] + 1.0));
                ++count;
            }
        }
    } else {
        std::mt19937_64 rng(seed);
        std::uniform_int_distribution<Vertex> pick(0, n - 1);
        for (std::size_t k = 0; k < samples; ++k) {
            const Vertex x = pick(rng), y = pick(rng);
            const double d = g.distance(x, y);
            const double dp = g.distance(project(l, x), project(l, y));
            c = std::max(c, dp / (d + 1.0));
            ++count;
        }
    }
    rep.samples = count;
    rep.constants = {{"C", c}};
    rep.pass = std::isfinite(c) && c <= bound + tol;
    return rep;
}

QiRay qi_ray(const Ladder& l, std::size_t level, const ReducedWord& start) {
    const GraphMetricSpace& g = l.space();
    const SplitModel& m = g.model();
    if (!l.contains(level, start)) throw InputError("ray start is not on ladder level " + std::to_string(level));
    QiRay ray;
    ray.points.assign(m.sheets(), ReducedWord{});
    ray.points[level] = start;
    const auto step = [&](std::size_t from, std::size_t to) {
        const std::vector<double> d = g.distances_from(m.vertex(from, ray.points[from]));
        const ReducedWord* best = nullptr;
        double best_d = inf;
        for (const ReducedWord& w : l.level(to).path) {
            const double dw = d[m.vertex(to, w)];
            if (dw < best_d - tol || (std::abs(dw - best_d) <= tol && best != nullptr && w < *best)) {
                best = &w;
                best_d = dw;
            }
        }
        ray.points[to] = *best;
        ray.quality = std::max(ray.quality, best_d);
    };
    for (std::size_t i = level + 1; i < m.sheets(); ++i) step(i - 1, i);
    for (std::size_t i = level; i-- > 0;) step(i + 1, i);
    return ray;
}

AuditReport coarse_separation_audit(const Ladder& l, const QiRay& r, const SeparationOptions& options) {
    const GraphMetricSpace& g = l.space();
    const SplitModel& m = g.model();
    if (r.points.size() != m.sheets()) throw InputError("ray does not have one point per sheet");
    std::vector<Vertex> minus, plus;
    for (std::size_t i = 0; i < m.sheets(); ++i) {
        if (!l.contains(i, r.points[i])) throw InputError("ray point on sheet " + std::to_string(i) + " is off the ladder");
        const std::size_t pos = l.position(i, r.points[i]);
        const auto& path = l.level(i).path;
        for (std::size_t k = 0; k < path.size(); ++k) {
            if (k < pos) minus.push_back(m.vertex(i, path[k]));
            if (k > pos) plus.push_back(m.vertex(i, path[k]));
        }
    }
    const std::vector<Vertex> ray_vertices = r.vertices(g);
    const std::vector<double> to_ray = g.distances_from(ray_vertices);

    AuditReport rep;
    rep.audit = "coarse_separation";
    rep.params = {{"samples", options.samples}, {"seed", options.seed}, {"c1_bound", options.c1_bound},
                  {"k0", options.k0}, {"k1_bound", options.k1_bound}, {"exhaustive", options.samples == 0}};

    std::vector<std::pair<Vertex, Vertex>> pairs;
    std::mt19937_64 rng(options.seed);
    if (!minus.empty() && !plus.empty()) {
        if (options.samples == 0) {
            for (const Vertex u : minus)
                for (const Vertex v : plus) pairs.emplace_back(u, v);
        } else {
            std::uniform_int_distribution<std::size_t> pm(0, minus.size() - 1), pp(0, plus.size() - 1);
            for (std::size_t k = 0; k < options.samples; ++k) pairs.emplace_back(minus[pm(rng)], plus[pp(rng)]);
        }
    }
    double c1 = 0.0;
    for (const auto& [u, v] : pairs) {
        double best = inf;
        for (const Vertex x : g.path(u, v).vertices) best = std::min(best, to_ray[x]);
        c1 = std::max(c1, best);
    }

    // K1 over cross pairs within k0 of each other.
    std::vector<std::vector<double>> from_ray;
    for (const Vertex z : ray_vertices) from_ray.push_back(g.distances_from(z));
    std::vector<Vertex> sources = minus;
    if (options.samples != 0 && sources.size() > options.samples) {
        std::shuffle(sources.begin(), sources.end(), rng);
        sources.resize(options.samples);
        std::sort(sources.begin(), sources.end());
    }
    const std::set<Vertex> plus_set(plus.begin(), plus.end());
    double k1 = 0.0;
    std::size_t close_pairs = 0;
    for (const Vertex p : sources) {
        const std::vector<double> near = coarse::distances_within(g.graph(), p, options.k0);
        for (const Vertex q : plus) {
            if (!(near[q] <= options.k0 + tol)) continue;
            ++close_pairs;
            double best = inf;
            for (const auto& dz : from_ray) best = std::min(best, std::max(dz[p], dz[q]));
            k1 = std::max(k1, best);
        }
    }

    // Two-sidedness: points of each side far from the other side.
    const std::vector<double> to_plus = plus.empty() ? std::vector<double>(g.graph().size(), inf) : g.distances_from(plus);
    const std::vector<double> to_minus = minus.empty() ? std::vector<double>(g.graph().size(), inf) : g.distances_from(minus);
    std::size_t far_minus = 0, far_plus = 0;
    for (const Vertex u : minus) far_minus += to_plus[u] >= 3.0 - tol;
    for (const Vertex v : plus) far_plus += to_minus[v] >= 3.0 - tol;

    rep.samples = pairs.size();
    rep.constants = {{"C1", c1},
                     {"K1", k1},
                     {"close_pairs", close_pairs},
                     {"minus_size", minus.size()},
                     {"plus_size", plus.size()},
                     {"far_minus", far_minus},
                     {"far_plus", far_plus}};
    rep.pass = !pairs.empty() && std::isfinite(c1) && std::isfinite(k1) && c1 <= options.c1_bound + tol &&
               k1 <= options.k1_bound + tol;
    return rep;
}

QiRay twin_ladder_ray(const Ladder& l1, const Ladder& l2) {
    if (&l1.space() != &l2.space()) throw InputError("twin ladders must live on the same model");
    const GraphMetricSpace& g = l1.space();
    const SplitModel& m = g.model();
    QiRay ray;
    for (std::size_t i = 0; i < m.sheets(); ++i) {
        std::vector<ReducedWord> common;
        for (const ReducedWord& w : l1.level(i).path)
            if (l2.contains(i, w)) common.push_back(w);
        if (common.empty()) throw InputError("twin ladders are disjoint on sheet " + std::to_string(i));
        ray.points.push_back(common[(common.size() - 1) / 2]);
    }
    for (std::size_t i = 0; i + 1 < ray.points.size(); ++i)
        ray.quality = std::max(ray.quality, g.distance(m.vertex(i, ray.points[i]), m.vertex(i + 1, ray.points[i + 1])));
    return ray;
}

AuditReport ray_asymptoticity_audit(const GraphMetricSpace& g, const QiRay& r1, const QiRay& r2, std::size_t start) {
    const std::size_t n = std::min(r1.points.size(), r2.points.size());
    std::vector<double> alpha;
    for (std::size_t i = 0; i < n; ++i)
        alpha.push_back(g.distance(g.model().vertex(i, r1.points[i]), g.model().vertex(i, r2.points[i])));
    bool monotone = true;
    double tail = 0.0;
    for (std::size_t i = start; i < n; ++i) {
        tail = std::max(tail, alpha[i]);
        if (i + 1 < n && alpha[i + 1] > alpha[i] + tol) monotone = false;
    }
    AuditReport rep;
    rep.audit = "ray_asymptoticity";
    rep.params = {{"start", start}};
    rep.constants = {{"alpha", alpha}, {"alpha_max_tail", tail}};
    rep.samples = n;
    rep.pass = monotone && n > 0;
    return rep;
}

AuditReport leaf_diameter_growth(const GraphMetricSpace& g, const std::vector<ReducedWord>& leaf,
                                 const std::vector<std::size_t>& radii, double component_bound) {
    const SplitModel& m = g.model();
    std::vector<double> diameters;
    for (const std::size_t R : radii) {
        if (R > m.radius()) throw InputError("radius " + std::to_string(R) + " exceeds the sheet radius");
        std::vector<Vertex> inside;
        for (const ReducedWord& w : leaf)
            if (w.size() <= R) inside.push_back(m.vertex(0, w));
        double diam = 0.0;
        for (std::size_t i = 0; i < inside.size(); ++i) {
            const std::vector<double> d = g.distances_from(inside[i]);
            for (std::size_t j = i + 1; j < inside.size(); ++j) diam = std::max(diam, d[inside[j]]);
        }
        diameters.push_back(diam);
    }
    double component_diameter = 0.0;
    for (const SplitComponent& c : m.components()) {
        if (c.block != 0) continue;
        std::vector<ReducedWord> hit;
        for (const ReducedWord& w : leaf)
            if (std::binary_search(c.lower.begin(), c.lower.end(), w)) hit.push_back(w);
        for (std::size_t i = 0; i < hit.size(); ++i)
            for (std::size_t j = i + 1; j < hit.size(); ++j)
                component_diameter = std::max(component_diameter, static_cast<double>(tree_distance(hit[i], hit[j])));
    }
    bool increasing = !diameters.empty();
    for (std::size_t i = 1; i < diameters.size(); ++i) increasing = increasing && diameters[i] > diameters[i - 1] + tol;

    AuditReport rep;
    rep.audit = "leaf_diameter_growth";
    rep.params = {{"radii", radii}, {"component_bound", component_bound}, {"leaf_length", leaf.size()}};
    rep.constants = {{"diameters", diameters}, {"component_diameter", component_diameter}};
    rep.samples = radii.size();
    rep.pass = increasing && component_diameter <= component_bound + tol;
    return rep;
}

AuditReport midpoint_escape_audit(const Ladder& l, const EscapeOptions& options) {
    if (options.side != "same" && options.side != "opposite" && options.side != "all")
        throw InputError("side must be same, opposite or all");
    const GraphMetricSpace& g = l.space();
    const SplitModel& m = g.model();
    const auto& path = l.level(0).path;
    const ReducedWord origin;
    const std::size_t centre = l.position(0, tree_median(origin, path.front(), path.back()));
    const Vertex o = m.vertex(0, origin);
    const std::vector<double> to_origin = g.distances_from(o);

    // Side of each path index relative to the projection of the origin; the
    // projection itself sits on both sides.
    const auto same_side = [&](std::size_t i, std::size_t j) {
        return (i <= centre && j <= centre) || (i >= centre && j >= centre);
    };
    const auto opposite_side = [&](std::size_t i, std::size_t j) {
        return (i <= centre && j >= centre) || (i >= centre && j <= centre);
    };

    std::map<std::pair<std::size_t, std::size_t>, double> cache;
    std::vector<nlohmann::json> profile;
    std::vector<double> values;
    bool defined = true;
    std::size_t pairs_total = 0;
    for (const std::size_t N : options.distances) {
        double best = inf;
        std::size_t count = 0;
        for (std::size_t i = 0; i < path.size(); ++i) {
            if (path[i].size() < N) continue;
            for (std::size_t j = i + 1; j < path.size(); ++j) {
                if (path[j].size() < N) continue;
                if (options.side == "same" && !same_side(i, j)) continue;
                if (options.side == "opposite" && !opposite_side(i, j)) continue;
                auto it = cache.find({i, j});
                if (it == cache.end()) {
                    double d = inf;
                    for (const Vertex x : g.path(m.vertex(0, path[i]), m.vertex(0, path[j])).vertices)
                        d = std::min(d, to_origin[x]);
                    it = cache.emplace(std::make_pair(i, j), d).first;
                }
                best = std::min(best, it->second);
                ++count;
            }
        }
        pairs_total += count;
        defined = defined && count > 0;
        values.push_back(best);
        profile.push_back({{"N", N}, {"M", finite_or_null(best)}, {"pairs", count}});
    }
    bool monotone = defined;
    for (std::size_t i = 1; i < values.size(); ++i) monotone = monotone && values[i] >= values[i - 1] - tol;

    AuditReport rep;
    rep.audit = "midpoint_escape";
    rep.params = {{"distances", options.distances}, {"side", options.side}};
    rep.constants = {{"profile", profile}};
    rep.samples = pairs_total;
    rep.pass = monotone;
    return rep;
}

AuditReport ladder_quasiconvexity_audit(const Ladder& l, std::size_t samples, std::uint64_t seed) {
    const GraphMetricSpace& g = l.space();
    const std::vector<Vertex> lv = l.vertices();
    const std::vector<double> to_ladder = g.distances_from(lv);
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, lv.size() - 1);
    double worst = 0.0;
    for (std::size_t k = 0; k < samples; ++k) {
        const Vertex u = lv[pick(rng)], v = lv[pick(rng)];
        for (const Vertex x : g.path(u, v).vertices) worst = std::max(worst, to_ladder[x]);
    }
    AuditReport rep;
    rep.audit = "ladder_quasiconvexity";
    rep.params = {{"samples", samples}, {"seed", seed}};
    rep.constants = {{"C", worst}};
    rep.samples = samples;
    rep.pass = std::isfinite(worst);
    return rep;
}

std::vector<ReducedWord> leaf_path(const ReducedWord& forward, const ReducedWord& backward, std::size_t radius) {
    if (forward.size() < radius || backward.size() < radius)
        throw InputError("leaf prefixes are shorter than the requested radius");
    if (radius > 0 && forward[0] == backward[0])
        throw InputError("leaf endpoint words must leave the identity along different edges");
    std::vector<ReducedWord> out;
    for (std::size_t k = radius; k >= 1; --k) out.push_back(backward.prefix(k));
    out.emplace_back();
    for (std::size_t k = 1; k <= radius; ++k) out.push_back(forward.prefix(k));
    return out;
}

}  // namespace ctlab::ladder
