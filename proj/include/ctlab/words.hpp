#pragma once

#include "ctlab/exact.hpp"

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ctlab::words {

using exact::QuadraticNumber;
using exact::Rational;

/// Generators of the rank-2 free group, A = a^-1 and B = b^-1.
///
/// The enumerator order a, b, A, B is also the counterclockwise order of the
/// four edges leaving a tile of the square torus (right, top, left, bottom),
/// so inverse(x) is two steps around the cycle.
enum class Letter : std::uint8_t { a = 0, b = 1, A = 2, B = 3 };

constexpr Letter inverse(Letter x) { return static_cast<Letter>((static_cast<int>(x) + 2) % 4); }
constexpr Letter cyclic_next(Letter x) { return static_cast<Letter>((static_cast<int>(x) + 1) % 4); }
constexpr int index(Letter x) { return static_cast<int>(x); }
char to_char(Letter x);
/// Throws InputError for characters outside {a, b, A, B}.
Letter letter_from_char(char c);

/// Freely reduced word: no letter is followed by its inverse.
class ReducedWord {
public:
    ReducedWord() = default;
    /// Free reduction of an arbitrary letter sequence.
    static ReducedWord reduce(std::span<const Letter> letters);
    /// Parses and reduces a string over {a, b, A, B}.
    static ReducedWord parse(std::string_view text);

    std::span<const Letter> letters() const { return letters_; }
    std::size_t size() const { return letters_.size(); }
    bool empty() const { return letters_.empty(); }
    Letter operator[](std::size_t i) const { return letters_[i]; }
    Letter back() const { return letters_.back(); }

    ReducedWord prefix(std::size_t n) const;
    ReducedWord inverse() const;
    bool is_cyclically_reduced() const;
    std::string str() const;

    /// Reduced product.
    friend ReducedWord operator*(const ReducedWord& u, const ReducedWord& v);
    friend bool operator==(const ReducedWord&, const ReducedWord&) = default;
    friend std::strong_ordering operator<=>(const ReducedWord& u, const ReducedWord& v);

private:
    std::vector<Letter> letters_;
};

ReducedWord reduce(std::span<const Letter> letters);

/// Length of the longest common prefix.
std::size_t common_prefix_length(const ReducedWord& u, const ReducedWord& v);

/// All reduced words of length <= n in shortlex order (identity first).
std::vector<ReducedWord> words_up_to(std::size_t n);

/// Slope of a straight line in the plane: a rational p/q in lowest terms
/// (q > 0) or a real quadratic irrational (p + q sqrt D)/r held exactly.
class Slope {
public:
    static Slope rational(long long p, long long q);
    static Slope quadratic(long long p, long long q, long long radicand, long long r);
    /// Value of [pre_0; pre_1, ..., pre_k, period, period, ...].
    static Slope from_continued_fraction(const std::vector<long long>& preperiod,
                                         const std::vector<long long>& period);
    static Slope from_value(QuadraticNumber value);

    bool is_rational() const { return value_.is_rational(); }
    const QuadraticNumber& value() const { return value_; }
    int sign() const { return value_.sign(); }
    double to_double() const { return value_.to_double(); }
    std::string str() const { return value_.str(); }

    friend bool operator==(const Slope& x, const Slope& y) { return x.value_ == y.value_; }

private:
    explicit Slope(QuadraticNumber v) : value_(std::move(v)) {}
    QuadraticNumber value_;
};

/// First k partial quotients (fewer for rationals whose expansion terminates).
std::vector<long long> continued_fraction(const Slope& s, std::size_t k);

/// True when the line y = s x + c meets the open unit square (the base tile).
bool meets_base_tile(const Slope& s, const Rational& intercept);

/// Crossing word of the line y = s x + c, read from inside the base tile
/// [0,1]^2 in direction `direction` * (1, s). Crossing x = k emits a moving
/// right and A moving left; crossing y = j emits b moving up and B moving down.
/// Throws GridIncidenceError if the line meets a lattice point within the
/// first `depth` crossings, InputError if it misses the base tile.
ReducedWord cutting_sequence(const Slope& s, const Rational& intercept, std::size_t depth, int direction);

/// Lower Christoffel word of p/q: q letters a and |p| letters b (B when p < 0).
ReducedWord christoffel_word(const Slope& s);

/// A point of the boundary of the free group, coded by an infinite reduced
/// word that is produced on demand, or a stored finite prefix.
class BoundaryWord {
public:
    static constexpr std::size_t unbounded = std::numeric_limits<std::size_t>::max();

    struct Periodic {
        ReducedWord head;
        ReducedWord period;  // cyclically reduced, nonempty
    };

    /// Finite prefix known up to its own length.
    static BoundaryWord stored(ReducedWord prefix);
    /// head * period^infinity, normalized so the infinite word is reduced.
    static BoundaryWord periodic(const ReducedWord& head, const ReducedWord& period);
    /// Cutting sequence of a line through the base tile.
    static BoundaryWord cutting(Slope s, Rational intercept, int direction);
    /// Arbitrary generator; `prefix_of(n)` must return a reduced word of length n
    /// that extends every shorter output.
    static BoundaryWord generated(std::function<ReducedWord(std::size_t)> prefix_of,
                                  std::size_t available = unbounded);

    std::size_t available_depth() const { return available_; }
    /// Throws InputError when n exceeds the available depth.
    ReducedWord prefix(std::size_t n) const;
    const std::optional<Periodic>& periodic_form() const { return periodic_; }

    /// g * xi (left translation with cancellation). The available depth of a
    /// finite word shrinks by the cancelled length.
    BoundaryWord translated(const ReducedWord& g) const;

private:
    std::function<ReducedWord(std::size_t)> prefix_of_;
    std::size_t available_ = 0;
    std::optional<Periodic> periodic_;
};

/// Comparison of two boundary points in the counterclockwise circular order
/// cut just before the sector of `a`. Returns nullopt when one word is a
/// prefix of the other (order undecided at this depth).
std::optional<std::strong_ordering> circular_compare(const ReducedWord& u, const ReducedWord& v);

/// Order-preserving coordinate in [0,1) of the boundary point coded by w.
double boundary_parameter(const ReducedWord& w);
/// Word of length `depth` whose boundary parameter interval contains theta.
ReducedWord word_at_parameter(double theta, std::size_t depth);

enum class ChordRelation { crossing, disjoint, undecided };
/// Whether the chords (x1,x2) and (y1,y2) of the boundary circle interleave.
ChordRelation chord_relation(const ReducedWord& x1, const ReducedWord& x2, const ReducedWord& y1,
                             const ReducedWord& y2);

/// Automorphism of F(a, b) given by the images of a and b.
class Automorphism {
public:
    Automorphism();
    Automorphism(ReducedWord image_a, ReducedWord image_b);

    const ReducedWord& image(Letter x) const;
    ReducedWord operator()(const ReducedWord& w) const;
    /// (f * g)(w) = f(g(w)).
    Automorphism operator*(const Automorphism& g) const;
    /// Abelianization, columns = images of a and b.
    std::array<long long, 4> abelianization() const;
    /// Image of a boundary point: the stable part of f(prefix) at growing depth.
    BoundaryWord operator()(const BoundaryWord& xi) const;

private:
    std::array<ReducedWord, 4> images_;
};

/// 2x2 integer matrix [[p, q], [r, t]] with determinant one.
struct SL2Z {
    long long p = 1, q = 0, r = 0, t = 1;
    long long trace() const { return p + t; }
};

/// An automorphism whose abelianization is m (positive whenever m has
/// entries of one sign).
Automorphism induced_automorphism(const SL2Z& m);

/// Monodromy of a once-punctured torus bundle: det 1 and |trace| > 2.
class Monodromy {
public:
    /// Throws InputError unless det = 1 and |trace| > 2.
    Monodromy(long long p, long long q, long long r, long long t);
    /// Parses "p,q,r,t".
    static Monodromy parse(const std::string& text);

    const SL2Z& matrix() const { return m_; }
    const Automorphism& automorphism() const { return phi_; }
    std::string str() const;

private:
    SL2Z m_;
    Automorphism phi_;
};

}  // namespace ctlab::words
