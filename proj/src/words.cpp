#include "ctlab/words.hpp"

#include "ctlab/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ctlab::words {

using exact::Integer;

char to_char(Letter x) {
    static constexpr std::array<char, 4> chars{'a', 'b', 'A', 'B'};
    return chars[index(x)];
}

Letter letter_from_char(char c) {
    switch (c) {
        case 'a': return Letter::a;
        case 'b': return Letter::b;
        case 'A': return Letter::A;
        case 'B': return Letter::B;
        default: throw InputError(std::string("not a generator letter: '") + c + "'");
    }
}

// ---------------------------------------------------------------------------
// Reduced words

ReducedWord ReducedWord::reduce(std::span<const Letter> letters) {
    ReducedWord w;
    w.letters_.reserve(letters.size());
    for (const Letter x : letters) {
        if (!w.letters_.empty() && w.letters_.back() == words::inverse(x))
            w.letters_.pop_back();
        else
            w.letters_.push_back(x);
    }
    return w;
}

ReducedWord ReducedWord::parse(std::string_view text) {
    std::vector<Letter> letters;
    letters.reserve(text.size());
    for (const char c : text) letters.push_back(letter_from_char(c));
    return reduce(letters);
}

ReducedWord ReducedWord::prefix(std::size_t n) const {
    ReducedWord w;
    n = std::min(n, letters_.size());
    w.letters_.assign(letters_.begin(), letters_.begin() + static_cast<std::ptrdiff_t>(n));
    return w;
}

ReducedWord ReducedWord::inverse() const {
    ReducedWord w;
    w.letters_.reserve(letters_.size());
    for (auto it = letters_.rbegin(); it != letters_.rend(); ++it) w.letters_.push_back(words::inverse(*it));
    return w;
}

bool ReducedWord::is_cyclically_reduced() const {
    return letters_.size() < 2 || letters_.front() != words::inverse(letters_.back());
}

std::string ReducedWord::str() const {
    std::string s;
    s.reserve(letters_.size());
    for (const Letter x : letters_) s.push_back(to_char(x));
    return s;
}

ReducedWord operator*(const ReducedWord& u, const ReducedWord& v) {
    std::size_t cancel = 0;
    while (cancel < u.size() && cancel < v.size() &&
           u.letters_[u.size() - 1 - cancel] == inverse(v.letters_[cancel]))
        ++cancel;
    ReducedWord w;
    w.letters_.reserve(u.size() + v.size() - 2 * cancel);
    w.letters_.insert(w.letters_.end(), u.letters_.begin(), u.letters_.end() - static_cast<std::ptrdiff_t>(cancel));
    w.letters_.insert(w.letters_.end(), v.letters_.begin() + static_cast<std::ptrdiff_t>(cancel), v.letters_.end());
    return w;
}

std::strong_ordering operator<=>(const ReducedWord& u, const ReducedWord& v) {
    if (u.size() != v.size()) return u.size() <=> v.size();
    return std::lexicographical_compare_three_way(u.letters_.begin(), u.letters_.end(), v.letters_.begin(),
                                                  v.letters_.end());
}

ReducedWord reduce(std::span<const Letter> letters) { return ReducedWord::reduce(letters); }

std::size_t common_prefix_length(const ReducedWord& u, const ReducedWord& v) {
    const auto lu = u.letters();
    const auto lv = v.letters();
    const auto [iu, iv] = std::mismatch(lu.begin(), lu.end(), lv.begin(), lv.end());
    return static_cast<std::size_t>(iu - lu.begin());
}

std::vector<ReducedWord> words_up_to(std::size_t n) {
    std::vector<ReducedWord> out{ReducedWord{}};
    std::size_t level_begin = 0;
    for (std::size_t len = 1; len <= n; ++len) {
        const std::size_t level_end = out.size();
        for (std::size_t i = level_begin; i < level_end; ++i) {
            for (int k = 0; k < 4; ++k) {
                const auto x = static_cast<Letter>(k);
                if (!out[i].empty() && out[i].back() == inverse(x)) continue;
                const std::array<Letter, 1> single{x};
                out.push_back(out[i] * ReducedWord::reduce(single));
            }
        }
        level_begin = level_end;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Slopes and continued fractions

Slope Slope::rational(long long p, long long q) {
    if (q == 0) throw InputError("slope denominator must be nonzero");
    return Slope(QuadraticNumber(Rational(p, q)));
}

Slope Slope::quadratic(long long p, long long q, long long radicand, long long r) {
    if (r == 0) throw InputError("slope denominator must be nonzero");
    if (q == 0 || radicand <= 0 || exact::is_perfect_square(radicand))
        throw InputError("quadratic slope needs q != 0 and a nonsquare radicand D > 0");
    return Slope(QuadraticNumber(Rational(p, r), Rational(q, r), radicand));
}

Slope Slope::from_value(QuadraticNumber value) { return Slope(std::move(value)); }

Slope Slope::from_continued_fraction(const std::vector<long long>& preperiod, const std::vector<long long>& period) {
    if (period.empty()) {
        if (preperiod.empty()) throw InputError("empty continued fraction");
        Rational x(preperiod.back());
        for (auto it = preperiod.rbegin() + 1; it != preperiod.rend(); ++it) {
            if (x == 0) throw InputError("zero partial quotient in continued fraction");
            x = Rational(*it) + 1 / x;
        }
        return Slope(QuadraticNumber(x));
    }
    for (const long long b : period)
        if (b < 1) throw InputError("periodic partial quotients must be positive");
    for (std::size_t i = 1; i < preperiod.size(); ++i)
        if (preperiod[i] < 1) throw InputError("partial quotients after the first must be positive");

    // Purely periodic part y = (P y + P') / (Q y + Q').
    Integer P = 1, P1 = 0, Q = 0, Q1 = 1;
    for (const long long b : period) {
        const Integer nP = P * b + P1, nQ = Q * b + Q1;
        P1 = P;
        Q1 = Q;
        P = nP;
        Q = nQ;
    }
    // Q y^2 + (Q' - P) y - P' = 0, positive root.
    const Integer disc = (Q1 - P) * (Q1 - P) + 4 * Q * P1;
    if (disc > std::numeric_limits<std::int64_t>::max()) throw InputError("continued fraction period too large");
    const auto d = static_cast<std::int64_t>(disc);
    if (exact::is_perfect_square(d)) throw InputError("periodic continued fraction did not yield an irrational");
    QuadraticNumber y(Rational(P - Q1, 2 * Q), Rational(1, 2 * Q) * 1, d);
    for (auto it = preperiod.rbegin(); it != preperiod.rend(); ++it) y = QuadraticNumber(Rational(*it)) + QuadraticNumber(1) / y;
    return Slope(std::move(y));
}

std::vector<long long> continued_fraction(const Slope& s, std::size_t k) {
    if (k == 0) throw InputError("continued_fraction needs k >= 1");
    std::vector<long long> out;
    QuadraticNumber x = s.value();
    while (out.size() < k) {
        const Integer a = x.floor();
        out.push_back(a.convert_to<long long>());
        x -= QuadraticNumber(Rational(a));
        if (x.sign() == 0) break;
        x = QuadraticNumber(1) / x;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Cutting sequences

bool meets_base_tile(const Slope& s, const Rational& c) {
    const QuadraticNumber ci(c);
    const QuadraticNumber end = ci + s.value();  // y at x = 1
    const QuadraticNumber lo = std::min(ci, end);
    const QuadraticNumber hi = std::max(ci, end);
    if (s.sign() == 0) return c > 0 && c < 1;
    return hi > QuadraticNumber(0) && lo < QuadraticNumber(1);
}

ReducedWord cutting_sequence(const Slope& s, const Rational& c, std::size_t depth, int direction) {
    if (direction != 1 && direction != -1) throw InputError("direction must be +1 or -1");
    if (!meets_base_tile(s, c)) throw InputError("line misses the base tile");

    const bool right = direction > 0;
    const int slope_sign = s.sign();
    const bool up = direction * slope_sign > 0;
    long long next_x = right ? 1 : 0;
    long long next_y = up ? 1 : 0;
    const Letter vertical = right ? Letter::a : Letter::A;
    const Letter horizontal = up ? Letter::b : Letter::B;
    const QuadraticNumber ci(c);

    std::vector<Letter> out;
    out.reserve(depth);
    while (out.size() < depth) {
        bool vertical_first = true;
        if (slope_sign != 0) {
            // sign(next_x - x_h) where x_h = (next_y - c)/s is the horizontal crossing.
            const QuadraticNumber lhs = s.value() * QuadraticNumber(next_x) - QuadraticNumber(next_y) + ci;
            const int diff = lhs.sign() * slope_sign;
            if (diff == 0) {
                std::ostringstream os;
                os << "line of slope " << s.str() << " through intercept " << exact::to_string(c)
                   << " meets lattice point (" << next_x << ", " << next_y << ")";
                throw GridIncidenceError(os.str());
            }
            vertical_first = right ? diff < 0 : diff > 0;
        }
        if (vertical_first) {
            out.push_back(vertical);
            next_x += right ? 1 : -1;
        } else {
            out.push_back(horizontal);
            next_y += up ? 1 : -1;
        }
    }
    return ReducedWord::reduce(out);
}

ReducedWord christoffel_word(const Slope& s) {
    if (!s.is_rational()) throw InputError("Christoffel words need a rational slope");
    const Rational v = s.value().rational_part();
    const Integer pn = numerator(v);
    const long long p = abs(pn).convert_to<long long>();
    const long long q = denominator(v).convert_to<long long>();
    const Letter up = pn < 0 ? Letter::B : Letter::b;
    const long long n = p + q;
    std::vector<Letter> out;
    out.reserve(static_cast<std::size_t>(n));
    for (long long i = 1; i <= n; ++i) out.push_back((i * p) % n >= ((i - 1) * p) % n ? Letter::a : up);
    return ReducedWord::reduce(out);
}

// ---------------------------------------------------------------------------
// Boundary words

BoundaryWord BoundaryWord::stored(ReducedWord prefix) {
    BoundaryWord xi;
    xi.available_ = prefix.size();
    xi.prefix_of_ = [w = std::move(prefix)](std::size_t n) { return w.prefix(n); };
    return xi;
}

BoundaryWord BoundaryWord::periodic(const ReducedWord& head, const ReducedWord& period) {
    if (period.empty()) throw InputError("period of a periodic boundary word must be nonempty");
    // Cyclically reduce: period = w v w^-1, so head period^inf = (head w) v^inf.
    std::size_t k = 0;
    const auto pl = period.letters();
    while (2 * (k + 1) <= pl.size() && pl[k] == inverse(pl[pl.size() - 1 - k])) ++k;
    const ReducedWord conj = period.prefix(k);
    std::vector<Letter> core(pl.begin() + static_cast<std::ptrdiff_t>(k), pl.end() - static_cast<std::ptrdiff_t>(k));
    ReducedWord h = head * conj;
    // Absorb cancellation between head and the periodic tail by rotating.
    while (!h.empty() && h.back() == inverse(core.front())) {
        h = h.prefix(h.size() - 1);
        std::rotate(core.begin(), core.begin() + 1, core.end());
    }
    Periodic form{h, ReducedWord::reduce(core)};
    BoundaryWord xi;
    xi.available_ = unbounded;
    xi.periodic_ = form;
    xi.prefix_of_ = [form](std::size_t n) {
        std::vector<Letter> out(form.head.letters().begin(), form.head.letters().end());
        while (out.size() < n)
            for (const Letter x : form.period.letters()) out.push_back(x);
        out.resize(n);
        return ReducedWord::reduce(out);
    };
    return xi;
}

BoundaryWord BoundaryWord::cutting(Slope s, Rational intercept, int direction) {
    if (!meets_base_tile(s, intercept)) throw InputError("line misses the base tile");
    if (direction != 1 && direction != -1) throw InputError("direction must be +1 or -1");
    BoundaryWord xi;
    xi.available_ = unbounded;
    xi.prefix_of_ = [s = std::move(s), c = std::move(intercept), direction](std::size_t n) {
        return cutting_sequence(s, c, n, direction);
    };
    return xi;
}

BoundaryWord BoundaryWord::generated(std::function<ReducedWord(std::size_t)> prefix_of, std::size_t available) {
    BoundaryWord xi;
    xi.available_ = available;
    xi.prefix_of_ = std::move(prefix_of);
    return xi;
}

ReducedWord BoundaryWord::prefix(std::size_t n) const {
    if (n > available_) {
        std::ostringstream os;
        os << "boundary word prefix of length " << n << " requested, only " << available_ << " available";
        throw InputError(os.str());
    }
    return prefix_of_(n);
}

BoundaryWord BoundaryWord::translated(const ReducedWord& g) const {
    if (periodic_) return periodic(g * periodic_->head, periodic_->period);
    if (available_ != unbounded) {
        const ReducedWord full = prefix(available_);
        const ReducedWord moved = g * full;
        // Letters of g cancelled against the prefix leave moved shorter than |g| + |full|.
        const std::size_t cancelled = (g.size() + full.size() - moved.size()) / 2;
        BoundaryWord xi = stored(moved);
        xi.available_ = cancelled >= full.size() ? 0 : moved.size();
        if (cancelled >= full.size()) xi.prefix_of_ = [moved](std::size_t n) { return moved.prefix(n); };
        return xi;
    }
    BoundaryWord xi;
    xi.available_ = unbounded;
    xi.prefix_of_ = [src = *this, g](std::size_t n) { return (g * src.prefix(n + g.size())).prefix(n); };
    return xi;
}

// ---------------------------------------------------------------------------
// Circular order

namespace {

// Rank of letter y among the edges leaving a vertex, counterclockwise from
// the edge after `back` (the edge pointing toward the root).
int rank_after(Letter back, Letter y) { return (index(y) - index(back) + 3) % 4; }

}  // namespace

std::optional<std::strong_ordering> circular_compare(const ReducedWord& u, const ReducedWord& v) {
    const std::size_t k = common_prefix_length(u, v);
    if (k == u.size() || k == v.size()) {
        return std::nullopt;
    }
    int ru, rv;
    if (k == 0) {
        ru = index(u[0]);
        rv = index(v[0]);
    } else {
        const Letter back = inverse(u[k - 1]);
        ru = rank_after(back, u[k]);
        rv = rank_after(back, v[k]);
    }
    return ru <=> rv;
}

double boundary_parameter(const ReducedWord& w) {
    double lo = 0.0, width = 1.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i == 0) {
            width /= 4.0;
            lo += width * index(w[0]);
        } else {
            width /= 3.0;
            lo += width * rank_after(inverse(w[i - 1]), w[i]);
        }
    }
    return lo;
}

ReducedWord word_at_parameter(double theta, std::size_t depth) {
    if (!(theta >= 0.0 && theta < 1.0)) throw InputError("boundary parameter must lie in [0,1)");
    std::vector<Letter> out;
    out.reserve(depth);
    double t = theta;
    for (std::size_t i = 0; i < depth; ++i) {
        if (i == 0) {
            const int digit = std::min(3, static_cast<int>(t * 4.0));
            out.push_back(static_cast<Letter>(digit));
            t = t * 4.0 - digit;
        } else {
            const int digit = std::min(2, static_cast<int>(t * 3.0));
            const Letter back = inverse(out.back());
            out.push_back(static_cast<Letter>((index(back) + 1 + digit) % 4));
            t = t * 3.0 - digit;
        }
        t = std::clamp(t, 0.0, std::nextafter(1.0, 0.0));
    }
    return ReducedWord::reduce(out);
}

ChordRelation chord_relation(const ReducedWord& x1, const ReducedWord& x2, const ReducedWord& y1,
                             const ReducedWord& y2) {
    const auto lt = [](const ReducedWord& p, const ReducedWord& q) -> std::optional<bool> {
        const auto c = circular_compare(p, q);
        if (!c) return std::nullopt;
        return *c < 0;
    };
    const auto a = lt(x1, x2);
    if (!a) return ChordRelation::undecided;
    const ReducedWord& lo = *a ? x1 : x2;
    const ReducedWord& hi = *a ? x2 : x1;
    const auto inside = [&](const ReducedWord& y) -> std::optional<bool> {
        const auto l = lt(lo, y);
        const auto h = lt(y, hi);
        if (!l || !h) return std::nullopt;
        return *l && *h;
    };
    const auto i1 = inside(y1);
    const auto i2 = inside(y2);
    if (!i1 || !i2) return ChordRelation::undecided;
    return *i1 != *i2 ? ChordRelation::crossing : ChordRelation::disjoint;
}

// ---------------------------------------------------------------------------
// Automorphisms

namespace {

ReducedWord letter_word(Letter x) {
    const std::array<Letter, 1> single{x};
    return ReducedWord::reduce(single);
}

}  // namespace

Automorphism::Automorphism() : Automorphism(letter_word(Letter::a), letter_word(Letter::b)) {}

Automorphism::Automorphism(ReducedWord image_a, ReducedWord image_b) {
    if (image_a.empty() || image_b.empty()) throw InputError("automorphism images must be nontrivial");
    images_[index(Letter::A)] = image_a.inverse();
    images_[index(Letter::B)] = image_b.inverse();
    images_[index(Letter::a)] = std::move(image_a);
    images_[index(Letter::b)] = std::move(image_b);
}

const ReducedWord& Automorphism::image(Letter x) const { return images_[index(x)]; }

ReducedWord Automorphism::operator()(const ReducedWord& w) const {
    std::vector<Letter> out;
    for (const Letter x : w.letters())
        for (const Letter y : images_[index(x)].letters()) out.push_back(y);
    return ReducedWord::reduce(out);
}

Automorphism Automorphism::operator*(const Automorphism& g) const {
    return {(*this)(g.image(Letter::a)), (*this)(g.image(Letter::b))};
}

std::array<long long, 4> Automorphism::abelianization() const {
    const auto count = [](const ReducedWord& w) {
        std::array<long long, 2> v{0, 0};
        for (const Letter x : w.letters()) {
            switch (x) {
                case Letter::a: ++v[0]; break;
                case Letter::A: --v[0]; break;
                case Letter::b: ++v[1]; break;
                case Letter::B: --v[1]; break;
            }
        }
        return v;
    };
    const auto ca = count(image(Letter::a));
    const auto cb = count(image(Letter::b));
    return {ca[0], cb[0], ca[1], cb[1]};
}

BoundaryWord Automorphism::operator()(const BoundaryWord& xi) const {
    if (xi.periodic_form()) {
        const auto& f = *xi.periodic_form();
        return BoundaryWord::periodic((*this)(f.head), (*this)(f.period));
    }
    if (xi.available_depth() != BoundaryWord::unbounded) {
        std::size_t longest = 0;
        for (const auto& w : images_) longest = std::max(longest, w.size());
        const ReducedWord full = (*this)(xi.prefix(xi.available_depth()));
        const std::size_t keep = full.size() > 2 * longest ? full.size() - 2 * longest : 0;
        return BoundaryWord::stored(full.prefix(keep));
    }
    // Grow the source prefix until doubling it no longer changes the first n letters.
    return BoundaryWord::generated([phi = *this, xi](std::size_t n) {
        std::size_t m = std::max<std::size_t>(n, 4);
        for (;;) {
            const ReducedWord short_img = phi(xi.prefix(m));
            const ReducedWord long_img = phi(xi.prefix(2 * m + 8));
            if (short_img.size() >= n && common_prefix_length(short_img, long_img) >= n) return short_img.prefix(n);
            if (m > 64 * (n + 16)) throw NumericalError("automorphism image of boundary word does not stabilize");
            m *= 2;
        }
    });
}

namespace {

// Elementary automorphisms and their abelianizations.
Automorphism elementary_upper() { return {ReducedWord::parse("a"), ReducedWord::parse("ab")}; }      // [[1,1],[0,1]]
Automorphism elementary_lower() { return {ReducedWord::parse("ab"), ReducedWord::parse("b")}; }      // [[1,0],[1,1]]
Automorphism elementary_upper_inv() { return {ReducedWord::parse("a"), ReducedWord::parse("Ab")}; }  // [[1,-1],[0,1]]
Automorphism elementary_lower_inv() { return {ReducedWord::parse("aB"), ReducedWord::parse("b")}; }  // [[1,0],[-1,1]]
Automorphism rotation_inv() { return {ReducedWord::parse("B"), ReducedWord::parse("a")}; }            // [[0,1],[-1,0]]
Automorphism negation() { return {ReducedWord::parse("A"), ReducedWord::parse("B")}; }               // -I

Automorphism power(const Automorphism& f, const Automorphism& f_inv, long long k) {
    Automorphism out;
    for (long long i = 0; i < std::abs(k); ++i) out = out * (k > 0 ? f : f_inv);
    return out;
}

bool nonnegative(const SL2Z& m) { return m.p >= 0 && m.q >= 0 && m.r >= 0 && m.t >= 0; }

}  // namespace

Automorphism induced_automorphism(const SL2Z& m) {
    if (m.p * m.t - m.q * m.r != 1) throw InputError("matrix must have determinant 1");

    if (nonnegative(m) || nonnegative({-m.p, -m.q, -m.r, -m.t})) {
        // Peel positive elementary factors off the right: one column dominates.
        SL2Z x = nonnegative(m) ? m : SL2Z{-m.p, -m.q, -m.r, -m.t};
        std::vector<Automorphism> right_factors;
        while (!(x.p == 1 && x.q == 0 && x.r == 0 && x.t == 1)) {
            if (x.p >= x.q && x.r >= x.t) {  // x = x' [[1,0],[1,1]]
                x = {x.p - x.q, x.q, x.r - x.t, x.t};
                right_factors.push_back(elementary_lower());
            } else {  // x = x' [[1,1],[0,1]]
                x = {x.p, x.q - x.p, x.r, x.t - x.r};
                right_factors.push_back(elementary_upper());
            }
        }
        Automorphism phi;
        for (auto it = right_factors.rbegin(); it != right_factors.rend(); ++it) phi = phi * *it;
        return nonnegative(m) ? phi : phi * negation();
    }

    // General case: Euclid on the first column by left row operations.
    SL2Z x = m;
    Automorphism undo;  // product of inverses of the applied left factors, in order
    while (x.r != 0) {
        if (x.p != 0 && std::abs(x.p) >= std::abs(x.r)) {
            const long long k = x.p / x.r;  // row1 -= k row2
            x = {x.p - k * x.r, x.q - k * x.t, x.r, x.t};
            undo = undo * power(elementary_upper(), elementary_upper_inv(), k);
        } else if (x.p != 0) {
            const long long k = x.r / x.p;  // row2 -= k row1
            x = {x.p, x.q, x.r - k * x.p, x.t - k * x.q};
            undo = undo * power(elementary_lower(), elementary_lower_inv(), k);
        } else {  // S x = [[-r, -t], [p, q]]
            x = {-x.r, -x.t, x.p, x.q};
            undo = undo * rotation_inv();
        }
    }
    if (x.p == -1) {
        x = {1, -x.q, 0, 1};
        undo = undo * negation();
    }
    return undo * power(elementary_upper(), elementary_upper_inv(), x.q);
}

Monodromy::Monodromy(long long p, long long q, long long r, long long t) : m_{p, q, r, t} {
    if (p * t - q * r != 1) throw InputError("monodromy must have determinant 1");
    if (std::abs(p + t) <= 2) throw InputError("monodromy must have |trace| > 2 (pseudo-Anosov)");
    phi_ = induced_automorphism(m_);
}

Monodromy Monodromy::parse(const std::string& text) {
    std::vector<long long> v;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            v.push_back(std::stoll(item, &used));
            while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
            if (used != item.size()) throw InputError("trailing characters");
        } catch (const std::exception&) {
            throw InputError("monodromy must be four comma-separated integers, got '" + text + "'");
        }
    }
    if (v.size() != 4) throw InputError("monodromy must be four comma-separated integers, got '" + text + "'");
    return {v[0], v[1], v[2], v[3]};
}

std::string Monodromy::str() const {
    std::ostringstream os;
    os << m_.p << ',' << m_.q << ',' << m_.r << ',' << m_.t;
    return os.str();
}

}  // namespace ctlab::words
