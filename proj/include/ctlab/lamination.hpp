#pragma once

#include "ctlab/words.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ctlab::lamination {

using words::BoundaryWord;
using words::Monodromy;
using words::Rational;
using words::ReducedWord;
using words::Slope;

/// Slope s of the expanding eigendirection (1, s) of the monodromy matrix,
/// held exactly in Q(sqrt(tr^2 - 4)).
Slope stable_slope(const Monodromy& m);

/// Ideal endpoints of a leaf, as prefixes read forward and backward from
/// the base tile.
struct LeafPair {
    ReducedWord forward;
    ReducedWord backward;
};

/// A line y = s x + c of irrational slope through the base tile.
class Leaf {
public:
    /// Throws InputError for rational slopes or lines missing the base tile.
    Leaf(Slope s, Rational intercept);

    const Slope& slope() const { return slope_; }
    const Rational& intercept() const { return intercept_; }
    BoundaryWord forward_word() const;
    BoundaryWord backward_word() const;

private:
    Slope slope_;
    Rational intercept_;
};

/// k leaves with distinct dyadic intercepts m / 2^20, reproducible from seed.
std::vector<Leaf> sample_leaves(const Slope& s, std::size_t count, std::uint64_t seed);

/// Throws InputError when depth is 0.
LeafPair leaf_endpoints(const Leaf& l, std::size_t depth);

/// Vertical segment {x} x (y_lo, y_hi) inside the base tile, lifted to
/// every tile of the universal cover.
struct Transversal {
    Rational x{1, 2};
    Rational y_lo{0};
    Rational y_hi{1};

    static Transversal standard() { return {}; }
    /// Throws InputError unless 0 < x < 1 and 0 <= y_lo < y_hi <= 1.
    void validate() const;
};

struct LeafClass {
    std::vector<std::size_t> members;
    /// Cyclically reduced g with both g^{+inf} and g^{-inf} matched by member
    /// endpoints on the first `depth` letters.
    std::optional<ReducedWord> pole_witness;
};

struct LeafClassPartition {
    std::size_t depth = 0;
    /// class_of[i] = index into classes.
    std::vector<std::size_t> class_of;
    std::vector<LeafClass> classes;
    /// "pole found" or "no pole found at this depth".
    std::string status;
};

/// True when the leaf meets the lift of t to tile g (g read from the base
/// tile along the leaf, so g must be a prefix of one of its endpoint words).
bool crosses_lift(const Leaf& l, const Transversal& t, const ReducedWord& g);

/// Two leaves are related when both cross the lift of t to one tile g with
/// |g| < depth; classes are the transitive closure. Throws InputError for
/// fewer than two leaves.
LeafClassPartition leaf_class_partition(const std::vector<Leaf>& leaves, const Transversal& t, std::size_t depth);

/// Shortlex-first cyclically reduced g with 1 <= |g| <= depth such that some
/// endpoint agrees with g^{+inf} and some endpoint with g^{-inf} on the
/// first `depth` letters.
std::optional<ReducedWord> find_pole(const std::vector<ReducedWord>& endpoints, std::size_t depth);

enum class Verdict { leaf, transverse, undecided };
const char* to_string(Verdict v);

/// Classifies the chord joining two boundary points given by prefixes of
/// length >= depth: "leaf" when it matches a leaf (or two vertices of one
/// complementary region) of the slope-s lamination to the available depth,
/// "transverse" when it provably crosses a leaf chord, otherwise "undecided".
Verdict crosses_lamination(const ReducedWord& u, const ReducedWord& v, const Slope& s, std::size_t depth);

}  // namespace ctlab::lamination
