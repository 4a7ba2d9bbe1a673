#include "ctlab/exact.hpp"

#include "ctlab/error.hpp"

#include <cmath>
#include <sstream>
#include <string_view>

namespace ctlab::exact {

namespace {

// Decimal integer with optional sign; leading zeros are stripped so the
// backend never sees an octal or hex prefix.
Integer parse_integer(std::string_view text, const std::string& whole) {
    bool negative = false;
    if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
        negative = text.front() == '-';
        text.remove_prefix(1);
    }
    if (text.empty()) throw InputError("malformed number '" + whole + "'");
    for (const char ch : text)
        if (ch < '0' || ch > '9') throw InputError("malformed number '" + whole + "'");
    while (text.size() > 1 && text.front() == '0') text.remove_prefix(1);
    Integer value{std::string(text)};
    return negative ? Integer(-value) : value;
}

}  // namespace

Rational parse_rational(const std::string& text) {
    if (text.empty()) throw InputError("empty rational literal");
    if (const auto slash = text.find('/'); slash != std::string::npos) {
        const Integer num = parse_integer(std::string_view(text).substr(0, slash), text);
        const Integer den = parse_integer(std::string_view(text).substr(slash + 1), text);
        if (den == 0) throw InputError("zero denominator in '" + text + "'");
        return Rational(num, den);
    }
    const auto dot = text.find('.');
    if (dot == std::string::npos) return Rational(parse_integer(text, text));
    const std::string digits = text.substr(0, dot) + text.substr(dot + 1);
    if (dot + 1 == text.size()) throw InputError("malformed decimal '" + text + "'");
    Integer den = 1;
    for (std::size_t i = dot + 1; i < text.size(); ++i) den *= 10;
    return Rational(parse_integer(digits, text), den);
}

std::string to_string(const Rational& r) {
    std::ostringstream os;
    os << numerator(r);
    if (denominator(r) != 1) os << '/' << denominator(r);
    return os.str();
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

QuadraticNumber::QuadraticNumber(Rational p, Rational q, std::int64_t radicand)
    : p_(std::move(p)), q_(std::move(q)), d_(radicand) {
    if (d_ < 0) throw InputError("negative radicand");
    if (q_ != 0 && d_ == 0) throw InputError("radicand must be a positive integer");
    if (q_ != 0 && is_perfect_square(d_)) {
        p_ += q_ * Rational(static_cast<long long>(std::llround(std::sqrt(static_cast<double>(d_)))));
        q_ = 0;
    }
    if (q_ == 0) d_ = 0;
}

std::int64_t QuadraticNumber::merged_radicand(const QuadraticNumber& o) const {
    if (d_ == 0) return o.d_;
    if (o.d_ == 0 || o.d_ == d_) return d_;
    throw std::logic_error("mixing quadratic numbers from different fields");
}

int QuadraticNumber::sign() const {
    const int sp = p_.sign();
    const int sq = q_.sign();
    if (sq == 0) return sp;
    if (sp == 0 || sp == sq) return sq;
    // Opposite signs: compare p^2 with q^2 D.
    const Rational lhs = p_ * p_;
    const Rational rhs = q_ * q_ * d_;
    return lhs > rhs ? sp : sq;
}

double QuadraticNumber::to_double() const {
    return exact::to_double(p_) + exact::to_double(q_) * std::sqrt(static_cast<double>(d_));
}

Integer QuadraticNumber::floor() const {
    Integer f(static_cast<long long>(std::floor(to_double())));
    while (*this < QuadraticNumber(Rational(f))) --f;
    while (*this >= QuadraticNumber(Rational(f + 1))) ++f;
    return f;
}

QuadraticNumber QuadraticNumber::conjugate() const {
    QuadraticNumber r = *this;
    r.q_ = -r.q_;
    return r;
}

QuadraticNumber QuadraticNumber::operator-() const {
    QuadraticNumber r = *this;
    r.p_ = -r.p_;
    r.q_ = -r.q_;
    return r;
}

QuadraticNumber& QuadraticNumber::operator+=(const QuadraticNumber& o) {
    d_ = merged_radicand(o);
    p_ += o.p_;
    q_ += o.q_;
    if (q_ == 0) d_ = 0;
    return *this;
}

QuadraticNumber& QuadraticNumber::operator-=(const QuadraticNumber& o) { return *this += -o; }

QuadraticNumber& QuadraticNumber::operator*=(const QuadraticNumber& o) {
    const std::int64_t d = merged_radicand(o);
    Rational p = p_ * o.p_ + q_ * o.q_ * d;
    Rational q = p_ * o.q_ + q_ * o.p_;
    p_ = std::move(p);
    q_ = std::move(q);
    d_ = q_ == 0 ? 0 : d;
    return *this;
}

QuadraticNumber& QuadraticNumber::operator/=(const QuadraticNumber& o) {
    const std::int64_t d = merged_radicand(o);
    const Rational norm = o.p_ * o.p_ - o.q_ * o.q_ * d;
    if (norm == 0) throw InputError("division by zero in quadratic field");
    *this *= o.conjugate();
    p_ /= norm;
    q_ /= norm;
    return *this;
}

std::string QuadraticNumber::str() const {
    if (q_ == 0) return to_string(p_);
    std::ostringstream os;
    os << to_string(p_) << (q_ < 0 ? " - " : " + ") << to_string(q_ < 0 ? Rational(-q_) : q_) << "*sqrt(" << d_
       << ")";
    return os.str();
}

Rational rational_between(const QuadraticNumber& lo, const QuadraticNumber& hi) {
    if (!(lo < hi)) throw InputError("rational_between needs lo < hi");
    const double mid = 0.5 * (lo.to_double() + hi.to_double());
    if (std::isfinite(mid)) {
        const Rational guess(mid);
        if (lo < QuadraticNumber(guess) && QuadraticNumber(guess) < hi) return guess;
    }
    // Refine with rational approximations of sqrt(D) until the midpoint separates.
    const std::int64_t d = lo.radicand() != 0 ? lo.radicand() : hi.radicand();
    for (unsigned bits = 64;; bits *= 2) {
        const Integer scale = Integer(1) << bits;
        const Rational root(boost::multiprecision::sqrt(Integer(d) * scale * scale), scale);
        const Rational a = lo.rational_part() + lo.surd_part() * root;
        const Rational b = hi.rational_part() + hi.surd_part() * root;
        const Rational m = (a + b) / 2;
        if (lo < QuadraticNumber(m) && QuadraticNumber(m) < hi) return m;
        if (bits > 1u << 14) throw NumericalError("rational_between failed to separate");
    }
}

bool is_perfect_square(std::int64_t n) {
    if (n < 0) return false;
    auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(n)));
    while (r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r * r == n;
}

}  // namespace ctlab::exact
