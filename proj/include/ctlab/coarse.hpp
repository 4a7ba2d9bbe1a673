#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ctlab::coarse {

using Vertex = std::size_t;

struct Edge {
    Vertex u, v;
    double weight;
};

struct Arc {
    Vertex to;
    double weight;
};

/// Relative tolerance used when comparing path lengths.
inline constexpr double length_tolerance = 1e-9;

/// Connected undirected graph with positive edge weights.
class MetricGraph {
public:
    MetricGraph() = default;
    /// Throws InputError on out-of-range endpoints, self-loops, nonpositive
    /// weights or a disconnected result.
    MetricGraph(std::size_t vertex_count, std::vector<Edge> edges, std::vector<std::string> labels = {});

    std::size_t size() const { return adjacency_.size(); }
    std::span<const Arc> neighbors(Vertex v) const { return adjacency_[v]; }
    const std::vector<Edge>& edges() const { return edges_; }
    const std::vector<std::string>& labels() const { return labels_; }
    /// Smallest weight of an edge u-v; throws InputError if absent.
    double edge_weight(Vertex u, Vertex v) const;

private:
    std::vector<std::vector<Arc>> adjacency_;
    std::vector<Edge> edges_;
    std::vector<std::string> labels_;
};

struct SubsetFamily {
    std::vector<std::vector<Vertex>> subsets;
    /// Declared quasiconvexity and separation (audited, not trusted).
    double declared_c = 0.0;
    double declared_d = 0.0;
};

/// Base graph with one apex per subset joined to each member by a spoke of
/// weight 1/2. Apex of subset i is vertex base().size() + i.
class ElectricGraph {
public:
    ElectricGraph(MetricGraph base, SubsetFamily family);

    const MetricGraph& base() const { return base_; }
    const SubsetFamily& family() const { return family_; }
    const MetricGraph& graph() const { return graph_; }
    Vertex apex(std::size_t subset) const { return base_.size() + subset; }
    bool is_apex(Vertex v) const { return v >= base_.size(); }
    std::size_t subset_of_apex(Vertex v) const { return v - base_.size(); }

private:
    MetricGraph base_;
    SubsetFamily family_;
    MetricGraph graph_;
};

/// Throws InputError for an empty subset or a member outside the graph.
ElectricGraph electrocute(const MetricGraph& g, const SubsetFamily& f);

struct PathStep {
    Vertex from, to;
    double weight;
    /// Subset whose apex this edge touches; empty for base edges.
    std::optional<std::size_t> subset;
};

struct PathRecord {
    std::vector<Vertex> vertices;
    double length = 0.0;
    std::vector<PathStep> steps;
    /// Splices performed to remove backtracking (electro-ambient only).
    std::size_t repairs = 0;
};

/// Single- or multi-source shortest distances.
std::vector<double> distances_from(const MetricGraph& g, std::span<const Vertex> sources);
std::vector<double> distances_from(const MetricGraph& g, Vertex source);
/// Distances from source, left at infinity beyond `radius`.
std::vector<double> distances_within(const MetricGraph& g, Vertex source, double radius);
/// Point-to-point distance (stops once v is settled).
double distance(const MetricGraph& g, Vertex u, Vertex v);
/// All-pairs distances by repeated Dijkstra.
std::vector<std::vector<double>> all_pairs(const MetricGraph& g);

/// Shortest path with the lexicographically smallest vertex sequence among
/// all shortest paths (lengths compared with length_tolerance).
PathRecord shortest_path(const MetricGraph& g, Vertex u, Vertex v);
/// Same on the electrocuted graph; steps through apexes carry the subset id.
PathRecord shortest_path(const ElectricGraph& g, Vertex u, Vertex v);

/// Electric geodesic, repaired so it never re-enters a subset after leaving
/// it, with every apex hop p -> apex -> q replaced by a base geodesic p -> q.
/// Throws NumericalError when repair does not settle within |V| splices.
PathRecord electro_ambient(const MetricGraph& g, const SubsetFamily& f, Vertex u, Vertex v);

/// max over vertices x of the base geodesic u -> v of the base distance from
/// x to the electro-ambient path.
double tracking_constant(const MetricGraph& g, const SubsetFamily& f, Vertex u, Vertex v);

struct HyperbolicityEstimate {
    double delta = 0.0;
    std::size_t quadruples = 0;
    bool exhaustive = false;
};

/// Exhaustive four-point delta; throws InputError above 80 vertices.
HyperbolicityEstimate four_point_delta(const MetricGraph& g);
/// Max over k random quadruples drawn with the given seed.
HyperbolicityEstimate four_point_delta(const MetricGraph& g, std::size_t samples, std::uint64_t seed);
/// Four-point defect of one quadruple from a distance oracle.
double four_point_defect(double xy, double zw, double xz, double yw, double xw, double yz);

/// max over u, v in the subset of the distance to the subset from vertices
/// of the deterministic geodesic u -> v. Throws InputError for fewer than
/// two members.
double quasiconvexity_constant(const MetricGraph& g, std::span<const Vertex> subset);

/// Smallest base distance between members of two different subsets
/// (infinity for fewer than two subsets).
double family_separation(const MetricGraph& g, const SubsetFamily& f);

struct GraphFile {
    MetricGraph graph;
    SubsetFamily family;
};

/// Line 1 "n m", then m lines "u v w" (w an integer, fraction or decimal),
/// then optional "H: v1 v2 ..." lines. Blank lines and '#' comments are
/// skipped. Throws InputError("line k: ...") on malformed input.
GraphFile parse_graph(std::istream& in);
GraphFile load_graph(const std::string& path);

}  // namespace ctlab::coarse
