#pragma once

#include "ctlab/coarse.hpp"
#include "ctlab/words.hpp"

#include "json.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace ctlab::ladder {

using coarse::Vertex;
using words::Automorphism;
using words::ReducedWord;

enum class BlockKind { thick, split };
const char* to_string(BlockKind k);

/// Model parameters and audit thresholds, read from key=value lines.
///
/// Recognized keys: blocks, radius, kinds (comma list) or kind (one value
/// for every block), components, component_radius, tube_span_min,
/// tube_span_max, n_max, seed, automorphism (monodromy | identity),
/// monodromy (p,q,r,t), samples, lipschitz_bound, separation_bound,
/// k0, k1_bound, ray_bound, component_bound, asymptotic_start, escape_n
/// (comma list), escape_side (same | opposite | all), radii (comma list).
struct SplitSpec {
    std::size_t blocks = 2;
    std::size_t radius = 3;
    std::vector<BlockKind> kinds;  // empty: every block split
    std::size_t components = 1;
    std::size_t component_radius = 1;
    std::size_t tube_span_min = 1;
    std::size_t tube_span_max = 2;
    std::size_t n_max = 2;
    std::uint64_t seed = 1;
    bool use_monodromy = true;
    words::SL2Z monodromy{2, 1, 1, 1};

    std::size_t samples = 500;
    double lipschitz_bound = 4.0;
    double separation_bound = 4.0;
    double k0 = 1.0;
    double k1_bound = 6.0;
    double ray_bound = 4.0;
    std::optional<double> component_bound;
    std::size_t asymptotic_start = 0;
    std::vector<std::size_t> escape_n{0, 2, 4, 6};
    std::string escape_side = "same";
    std::vector<std::size_t> radii{3, 4, 5, 6};

    BlockKind kind(std::size_t block) const;
    /// Throws InputError on unknown keys, malformed values or inconsistent
    /// settings.
    static SplitSpec parse(std::istream& in);
    static SplitSpec parse_text(const std::string& text);
    static SplitSpec load(const std::string& path);
    void validate() const;
    nlohmann::json to_json() const;
};

/// Ball of radius R around the identity in the Cayley tree of F(a, b),
/// vertices indexed in shortlex order.
class CayleyBall {
public:
    explicit CayleyBall(std::size_t radius);
    std::size_t radius() const { return radius_; }
    std::size_t size() const { return words_.size(); }
    const ReducedWord& word(std::size_t i) const { return words_[i]; }
    std::optional<std::size_t> index(const ReducedWord& w) const;
    bool contains(const ReducedWord& w) const { return w.size() <= radius_; }

private:
    std::size_t radius_;
    std::vector<ReducedWord> words_;
    std::map<ReducedWord, std::size_t> index_;
};

struct SplitComponent {
    std::size_t block = 0;
    ReducedWord centre;
    /// Members in sheet `block` and sheet `block + 1`.
    std::vector<ReducedWord> lower, upper;
};

struct Tube {
    std::size_t start = 0, end = 0;
    /// Boundary subset on each sheet start..end.
    std::vector<std::vector<ReducedWord>> boundary;
    std::size_t span() const { return end - start; }
};

/// Stack of sheets 0..N (Cayley balls) glued block by block.
class SplitModel {
public:
    SplitModel(std::size_t radius, std::vector<BlockKind> kinds, std::vector<Automorphism> gluings,
               std::vector<SplitComponent> components, std::vector<Tube> tubes, std::size_t n_max);

    std::size_t blocks() const { return kinds_.size(); }
    std::size_t sheets() const { return kinds_.size() + 1; }
    std::size_t radius() const { return ball_.radius(); }
    const CayleyBall& ball() const { return ball_; }
    BlockKind kind(std::size_t block) const { return kinds_.at(block); }
    const Automorphism& gluing(std::size_t block) const { return gluings_.at(block); }
    const std::vector<SplitComponent>& components() const { return components_; }
    const std::vector<Tube>& tubes() const { return tubes_; }
    std::size_t n_max() const { return n_max_; }

    /// Global vertex id of word w in sheet `level`; throws InputError outside the ball.
    Vertex vertex(std::size_t level, const ReducedWord& w) const;
    std::size_t level_of(Vertex v) const { return v / ball_.size(); }
    const ReducedWord& word_of(Vertex v) const { return ball_.word(v % ball_.size()); }
    std::size_t vertex_count() const { return sheets() * ball_.size(); }

private:
    CayleyBall ball_;
    std::vector<BlockKind> kinds_;
    std::vector<Automorphism> gluings_;
    std::vector<SplitComponent> components_;
    std::vector<Tube> tubes_;
    std::size_t n_max_;
};

/// Split blocks are glued by `phi`, thick blocks by the identity. Throws
/// InputError when the components cannot be placed inside the radius.
SplitModel build_split_model(const Automorphism& phi, std::size_t blocks, std::size_t radius, const SplitSpec& spec,
                             std::uint64_t seed);
/// Uses the blocks, radius, seed and gluing choice stored in `spec`.
SplitModel build_split_model(const SplitSpec& spec);

/// Sheets and unit vertical edges w -> phi_i(w), with every split component
/// electrocuted (spokes of weight 1/2).
class GraphMetricSpace {
public:
    explicit GraphMetricSpace(SplitModel model);

    const SplitModel& model() const { return model_; }
    const coarse::ElectricGraph& electric() const { return electric_; }
    const coarse::MetricGraph& graph() const { return electric_.graph(); }

    double distance(Vertex u, Vertex v) const { return coarse::distance(graph(), u, v); }
    std::vector<double> distances_from(Vertex u) const { return coarse::distances_from(graph(), u); }
    std::vector<double> distances_from(std::span<const Vertex> sources) const {
        return coarse::distances_from(graph(), sources);
    }
    coarse::PathRecord path(Vertex u, Vertex v) const { return coarse::shortest_path(electric_, u, v); }

private:
    SplitModel model_;
    coarse::ElectricGraph electric_;
};

std::shared_ptr<const GraphMetricSpace> graph_metric(const SplitModel& m);

/// Median of three vertices of the Cayley tree.
ReducedWord tree_median(const ReducedWord& x, const ReducedWord& y, const ReducedWord& z);
/// Vertices of the tree geodesic x -> y, in order.
std::vector<ReducedWord> tree_geodesic(const ReducedWord& x, const ReducedWord& y);

struct LadderLevel {
    /// Endpoints in the whole tree (images of the previous level's endpoints).
    ReducedWord from, to;
    /// Part of the tree geodesic from -> to inside the ball, in order.
    std::vector<ReducedWord> path;
};

class Ladder {
public:
    Ladder(std::shared_ptr<const GraphMetricSpace> space, std::vector<LadderLevel> levels);

    const GraphMetricSpace& space() const { return *space_; }
    const std::shared_ptr<const GraphMetricSpace>& space_ptr() const { return space_; }
    const std::vector<LadderLevel>& levels() const { return levels_; }
    const LadderLevel& level(std::size_t i) const { return levels_.at(i); }
    bool contains(std::size_t level, const ReducedWord& w) const;
    /// Position of w along level i's path; throws InputError when absent.
    std::size_t position(std::size_t level, const ReducedWord& w) const;
    /// Global ids of all ladder vertices.
    std::vector<Vertex> vertices() const;

private:
    std::shared_ptr<const GraphMetricSpace> space_;
    std::vector<LadderLevel> levels_;
};

/// Level 0 is the tree geodesic p -> q; level i+1 joins the images of level
/// i's endpoints under the gluing. Throws InputError when a level misses
/// the ball entirely.
Ladder build_ladder(std::shared_ptr<const GraphMetricSpace> space, const ReducedWord& p, const ReducedWord& q);

/// Tree nearest-point projection of x (in sheet `level`) onto that level's path.
ReducedWord project(const Ladder& l, std::size_t level, const ReducedWord& x);
Vertex project(const Ladder& l, Vertex x);

struct QiRay {
    /// r(i) on level i.
    std::vector<ReducedWord> points;
    /// max over i of d_G(r(i), r(i+1)).
    double quality = 0.0;
    std::vector<Vertex> vertices(const GraphMetricSpace& g) const;
};

struct AuditReport {
    std::string audit;
    nlohmann::json params = nlohmann::json::object();
    nlohmann::json constants = nlohmann::json::object();
    std::size_t samples = 0;
    bool pass = false;

    nlohmann::json to_json() const;
};

/// Minimal C with d_G(Px, Py) <= C d_G(x, y) + C over sampled pairs
/// (every pair when samples is 0).
AuditReport lipschitz_audit(const Ladder& l, std::size_t samples, std::uint64_t seed, double bound = 4.0);

/// Ray through `start` on level j, extended up and down by the d_G-nearest
/// vertex on the adjacent level (ties to the shortlex-smallest word).
QiRay qi_ray(const Ladder& l, std::size_t level, const ReducedWord& start);

struct SeparationOptions {
    std::size_t samples = 500;  // 0: every cross pair
    std::uint64_t seed = 1;
    double c1_bound = 4.0;
    double k0 = 1.0;
    double k1_bound = 6.0;
};

/// Splits each level at r(i); C1 = max over cross pairs of the distance from
/// the d_G path to r, K1 = max over cross pairs within k0 of
/// min over z in r of max(d(p, z), d(q, z)). Throws InputError when r is not
/// on the ladder.
AuditReport coarse_separation_audit(const Ladder& l, const QiRay& r, const SeparationOptions& options = {});

/// r(i) = midpoint of the common segment of both ladders' level-i paths.
/// Throws InputError naming the first level where they are disjoint.
QiRay twin_ladder_ray(const Ladder& l1, const Ladder& l2);

/// alpha(n) = d_G(r1(n), r2(n)); passes when alpha is non-increasing from
/// `start` on.
AuditReport ray_asymptoticity_audit(const GraphMetricSpace& g, const QiRay& r1, const QiRay& r2, std::size_t start);

/// d_G-diameter of the sheet-0 path |w| <= R for each R in radii, and the
/// largest tree diameter of the path inside a single split component.
/// `leaf` lists the path in order (it need not pass through the identity).
AuditReport leaf_diameter_growth(const GraphMetricSpace& g, const std::vector<ReducedWord>& leaf,
                                 const std::vector<std::size_t>& radii, double component_bound);

struct EscapeOptions {
    std::vector<std::size_t> distances{0, 2, 4, 6};
    /// same | opposite | all, relative to the projection of the origin.
    std::string side = "same";
};

/// M(N) = min over pairs a, b of level 0 with |a|, |b| >= N of the d_G
/// distance from the d_G path a -> b to the origin of sheet 0; passes when
/// non-decreasing in N.
AuditReport midpoint_escape_audit(const Ladder& l, const EscapeOptions& options = {});

/// Largest d_G distance to the ladder from the d_G path between sampled
/// ladder vertices.
AuditReport ladder_quasiconvexity_audit(const Ladder& l, std::size_t samples, std::uint64_t seed);

/// Sheet-0 path of a lamination leaf through the identity: backward prefixes
/// reversed, the identity, then forward prefixes, out to length R.
std::vector<ReducedWord> leaf_path(const ReducedWord& forward, const ReducedWord& backward, std::size_t radius);

}  // namespace ctlab::ladder
