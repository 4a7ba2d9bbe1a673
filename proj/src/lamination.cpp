#include "ctlab/lamination.hpp"

#include "ctlab/error.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <numeric>
#include <random>
#include <set>

namespace ctlab::lamination {

using exact::Integer;
using exact::QuadraticNumber;
using words::Letter;

Slope stable_slope(const Monodromy& m) {
    const auto [p, q, r, t] = m.matrix();
    // q s^2 + (p - t) s - r = 0; q != 0 because |trace| > 2.
    const long long disc = (p + t) * (p + t) - 4;
    const Rational half(1, 2 * q);
    for (const int sign : {1, -1}) {
        const QuadraticNumber s(Rational(t - p) * half, Rational(sign) * half, disc);
        const QuadraticNumber eigen = QuadraticNumber(p) + QuadraticNumber(q) * s;
        if (eigen > QuadraticNumber(1) || eigen < QuadraticNumber(-1)) return Slope::from_value(s);
    }
    throw std::logic_error("no expanding eigendirection");
}

Leaf::Leaf(Slope s, Rational intercept) : slope_(std::move(s)), intercept_(std::move(intercept)) {
    if (slope_.is_rational()) throw InputError("lamination leaves need an irrational slope");
    if (!words::meets_base_tile(slope_, intercept_)) throw InputError("leaf misses the base tile");
}

BoundaryWord Leaf::forward_word() const { return BoundaryWord::cutting(slope_, intercept_, 1); }
BoundaryWord Leaf::backward_word() const { return BoundaryWord::cutting(slope_, intercept_, -1); }

namespace {

// Open interval of intercepts whose line meets the base tile.
std::pair<QuadraticNumber, QuadraticNumber> intercept_range(const Slope& s) {
    if (s.sign() > 0) return {-s.value(), QuadraticNumber(1)};
    return {QuadraticNumber(0), QuadraticNumber(1) - s.value()};
}

}  // namespace

std::vector<Leaf> sample_leaves(const Slope& s, std::size_t count, std::uint64_t seed) {
    if (s.is_rational()) throw InputError("sample_leaves needs an irrational slope");
    constexpr long long scale = 1LL << 20;
    const auto [lo, hi] = intercept_range(s);
    const long long m_lo = (lo * QuadraticNumber(scale)).floor().convert_to<long long>() + 1;
    const long long m_hi = (hi * QuadraticNumber(scale)).floor().convert_to<long long>();
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<long long> pick(m_lo, m_hi);
    std::set<long long> used;
    std::vector<Leaf> out;
    out.reserve(count);
    while (out.size() < count) {
        const long long m = pick(rng);
        // Integer intercepts put a lattice point on the line.
        if (m % scale == 0 || !used.insert(m).second) continue;
        const Rational c(m, scale);
        if (!words::meets_base_tile(s, c)) continue;
        out.emplace_back(s, c);
    }
    return out;
}

LeafPair leaf_endpoints(const Leaf& l, std::size_t depth) {
    if (depth == 0) throw InputError("leaf_endpoints needs depth >= 1");
    return {words::cutting_sequence(l.slope(), l.intercept(), depth, 1),
            words::cutting_sequence(l.slope(), l.intercept(), depth, -1)};
}

void Transversal::validate() const {
    if (!(x > 0 && x < 1)) throw InputError("transversal must sit strictly inside the base tile (0 < x < 1)");
    if (!(y_lo >= 0 && y_lo < y_hi && y_hi <= 1)) throw InputError("transversal needs 0 <= y_lo < y_hi <= 1");
}

namespace {

std::pair<long long, long long> tile_offset(const ReducedWord& g) {
    long long x = 0, y = 0;
    for (const Letter l : g.letters()) {
        switch (l) {
            case Letter::a: ++x; break;
            case Letter::A: --x; break;
            case Letter::b: ++y; break;
            case Letter::B: --y; break;
        }
    }
    return {x, y};
}

bool is_prefix(const ReducedWord& g, const ReducedWord& w) {
    return g.size() <= w.size() && words::common_prefix_length(g, w) == g.size();
}

struct UnionFind {
    std::vector<std::size_t> parent;
    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    std::size_t find(std::size_t i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    }
    void unite(std::size_t i, std::size_t j) {
        i = find(i);
        j = find(j);
        if (i != j) parent[std::max(i, j)] = std::min(i, j);
    }
};

}  // namespace

bool crosses_lift(const Leaf& l, const Transversal& t, const ReducedWord& g) {
    t.validate();
    if (!g.empty()) {
        const LeafPair e = leaf_endpoints(l, g.size());
        if (!is_prefix(g, e.forward) && !is_prefix(g, e.backward)) return false;
    }
    const auto [X, Y] = tile_offset(g);
    const QuadraticNumber y = l.slope().value() * QuadraticNumber(Rational(X) + t.x) + QuadraticNumber(l.intercept());
    return y > QuadraticNumber(Rational(Y) + t.y_lo) && y < QuadraticNumber(Rational(Y) + t.y_hi);
}

std::optional<ReducedWord> find_pole(const std::vector<ReducedWord>& endpoints, std::size_t depth) {
    if (depth == 0) return std::nullopt;
    const auto matches = [&](const BoundaryWord& ray) {
        const ReducedWord target = ray.prefix(depth);
        return std::any_of(endpoints.begin(), endpoints.end(), [&](const ReducedWord& e) {
            return e.size() >= depth && words::common_prefix_length(e, target) >= depth;
        });
    };
    for (const ReducedWord& g : words::words_up_to(depth)) {
        if (g.empty() || !g.is_cyclically_reduced()) continue;
        if (matches(BoundaryWord::periodic({}, g)) && matches(BoundaryWord::periodic({}, g.inverse()))) return g;
    }
    return std::nullopt;
}

LeafClassPartition leaf_class_partition(const std::vector<Leaf>& leaves, const Transversal& t, std::size_t depth) {
    if (leaves.size() < 2) throw InputError("leaf_class_partition needs at least two leaves");
    t.validate();

    UnionFind uf(leaves.size());
    if (depth > 0) {
        // Tiles visited by each leaf within the window, keyed by the tile word.
        std::map<ReducedWord, std::size_t> first_crossing;
        for (std::size_t i = 0; i < leaves.size(); ++i) {
            std::set<ReducedWord> tiles{ReducedWord{}};
            if (depth > 1) {
                const LeafPair e = leaf_endpoints(leaves[i], depth - 1);
                for (std::size_t k = 1; k < depth; ++k) {
                    tiles.insert(e.forward.prefix(k));
                    tiles.insert(e.backward.prefix(k));
                }
            }
            for (const ReducedWord& g : tiles) {
                if (!crosses_lift(leaves[i], t, g)) continue;
                const auto [it, fresh] = first_crossing.emplace(g, i);
                if (!fresh) uf.unite(it->second, i);
            }
        }
    }

    LeafClassPartition out;
    out.depth = depth;
    out.class_of.assign(leaves.size(), 0);
    std::map<std::size_t, std::size_t> root_to_class;
    for (std::size_t i = 0; i < leaves.size(); ++i) {
        const std::size_t r = uf.find(i);
        const auto [it, fresh] = root_to_class.emplace(r, out.classes.size());
        if (fresh) out.classes.emplace_back();
        out.classes[it->second].members.push_back(i);
        out.class_of[i] = it->second;
    }

    bool any = false;
    for (LeafClass& c : out.classes) {
        if (depth == 0) continue;
        std::vector<ReducedWord> ends;
        for (const std::size_t i : c.members) {
            const LeafPair e = leaf_endpoints(leaves[i], depth);
            ends.push_back(e.forward);
            ends.push_back(e.backward);
        }
        c.pole_witness = find_pole(ends, depth);
        any = any || c.pole_witness.has_value();
    }
    out.status = any ? "pole found" : "no pole found at this depth";
    return out;
}

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::leaf: return "leaf";
        case Verdict::transverse: return "transverse";
        case Verdict::undecided: return "undecided";
    }
    return "unknown";
}

namespace {

struct Cell {
    ReducedWord forward, backward;
};

// Leaves through the base tile, one per combinatorial type at the given
// depth, plus the breakpoint neighbours of each boundary between types.
std::vector<Cell> leaf_cells(const Slope& s, std::size_t depth) {
    const auto [lo, hi] = intercept_range(s);
    const long long reach = static_cast<long long>(depth) + 1;
    std::vector<QuadraticNumber> cuts;
    for (long long X = -reach; X <= reach; ++X) {
        const QuadraticNumber sx = s.value() * QuadraticNumber(X);
        // Lattice point (X, J) lies on the line with intercept J - sX.
        const long long j_lo = (lo + sx).floor().convert_to<long long>();
        const long long j_hi = (hi + sx).floor().convert_to<long long>() + 1;
        for (long long J = std::max(j_lo, -reach); J <= std::min(j_hi, reach); ++J) {
            const QuadraticNumber c = QuadraticNumber(J) - sx;
            if (c > lo && c < hi) cuts.push_back(c);
        }
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    std::vector<QuadraticNumber> bounds{lo};
    bounds.insert(bounds.end(), cuts.begin(), cuts.end());
    bounds.push_back(hi);
    std::vector<Cell> cells;
    cells.reserve(bounds.size() - 1);
    for (std::size_t i = 0; i + 1 < bounds.size(); ++i) {
        const Rational c = exact::rational_between(bounds[i], bounds[i + 1]);
        cells.push_back({words::cutting_sequence(s, c, depth, 1), words::cutting_sequence(s, c, depth, -1)});
    }
    return cells;
}

}  // namespace

Verdict crosses_lamination(const ReducedWord& u, const ReducedWord& v, const Slope& s, std::size_t depth) {
    if (s.is_rational()) throw InputError("crosses_lamination needs an irrational slope");
    if (u.size() < depth || v.size() < depth) throw InputError("endpoint words shorter than the requested depth");
    const std::size_t shared = words::common_prefix_length(u.prefix(depth), v.prefix(depth));
    if (shared >= depth) return Verdict::undecided;
    const std::size_t d = depth - shared;
    const ReducedWord uu = ReducedWord::reduce(u.letters().subspan(shared, d));
    const ReducedWord vv = ReducedWord::reduce(v.letters().subspan(shared, d));

    const std::vector<Cell> cells = leaf_cells(s, d);
    const auto same_pair = [&](const ReducedWord& x, const ReducedWord& y) {
        return (x == uu && y == vv) || (x == vv && y == uu);
    };
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (same_pair(cells[i].forward, cells[i].backward)) return Verdict::leaf;
        if (i + 1 < cells.size()) {
            // Vertices of the complementary region cut out at this breakpoint.
            const std::array<const ReducedWord*, 4> corners{&cells[i].forward, &cells[i].backward,
                                                           &cells[i + 1].forward, &cells[i + 1].backward};
            for (std::size_t p = 0; p < 4; ++p)
                for (std::size_t q = p + 1; q < 4; ++q)
                    if (*corners[p] != *corners[q] && same_pair(*corners[p], *corners[q])) return Verdict::leaf;
        }
    }
    for (const Cell& c : cells)
        if (words::chord_relation(uu, vv, c.forward, c.backward) == words::ChordRelation::crossing)
            return Verdict::transverse;
    return Verdict::undecided;
}

}  // namespace ctlab::lamination
