#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <string>

namespace ctlab::exact {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Parses "p", "p/q" or a finite decimal such as "-0.375" into an exact rational.
Rational parse_rational(const std::string& text);
std::string to_string(const Rational& r);
double to_double(const Rational& r);

/// Element p + q*sqrt(D) of the real quadratic field Q(sqrt D).
///
/// D = 0 marks a plain rational (q is then zero). Mixing two numbers with
/// different nonzero radicands is a logic error.
class QuadraticNumber {
public:
    QuadraticNumber() = default;
    QuadraticNumber(Rational p) : p_(std::move(p)) {}
    QuadraticNumber(long long p) : p_(p) {}
    /// A perfect-square radicand folds q*sqrt(D) into the rational part.
    QuadraticNumber(Rational p, Rational q, std::int64_t radicand);

    const Rational& rational_part() const { return p_; }
    const Rational& surd_part() const { return q_; }
    std::int64_t radicand() const { return d_; }
    bool is_rational() const { return q_ == 0; }

    int sign() const;
    double to_double() const;
    /// Largest integer not exceeding the value, computed exactly.
    Integer floor() const;
    QuadraticNumber conjugate() const;

    QuadraticNumber operator-() const;
    QuadraticNumber& operator+=(const QuadraticNumber& o);
    QuadraticNumber& operator-=(const QuadraticNumber& o);
    QuadraticNumber& operator*=(const QuadraticNumber& o);
    /// Throws InputError on division by zero.
    QuadraticNumber& operator/=(const QuadraticNumber& o);

    friend QuadraticNumber operator+(QuadraticNumber a, const QuadraticNumber& b) { return a += b; }
    friend QuadraticNumber operator-(QuadraticNumber a, const QuadraticNumber& b) { return a -= b; }
    friend QuadraticNumber operator*(QuadraticNumber a, const QuadraticNumber& b) { return a *= b; }
    friend QuadraticNumber operator/(QuadraticNumber a, const QuadraticNumber& b) { return a /= b; }

    friend bool operator==(const QuadraticNumber& a, const QuadraticNumber& b) { return (a - b).sign() == 0; }
    friend std::strong_ordering operator<=>(const QuadraticNumber& a, const QuadraticNumber& b) {
        const int s = (a - b).sign();
        return s < 0 ? std::strong_ordering::less : s > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
    }

    std::string str() const;

private:
    std::int64_t merged_radicand(const QuadraticNumber& o) const;

    Rational p_ = 0;
    Rational q_ = 0;
    std::int64_t d_ = 0;
};

/// A rational strictly between lo < hi (dyadic when possible).
Rational rational_between(const QuadraticNumber& lo, const QuadraticNumber& hi);

bool is_perfect_square(std::int64_t n);

}  // namespace ctlab::exact
