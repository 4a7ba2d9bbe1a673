#include "ctlab/hyp.hpp"

#include "ctlab/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

namespace ctlab::hyp {

namespace {

// Stable stereographic image of (re, im, |w|^2) without forming |w|^2 for huge w.
std::array<double, 3> stereographic(Complex w) {
    const double r = std::abs(w);
    if (r <= 1.0) {
        const double r2 = r * r;
        return {2.0 * w.real() / (r2 + 1.0), 2.0 * w.imag() / (r2 + 1.0), (r2 - 1.0) / (r2 + 1.0)};
    }
    const double inv = 1.0 / r;
    const double inv2 = inv * inv;
    return {2.0 * (w.real() * inv) / (r + inv), 2.0 * (w.imag() * inv) / (r + inv),
            (1.0 - inv2) / (1.0 + inv2)};
}

}  // namespace

RiemannPoint RiemannPoint::infinity() {
    RiemannPoint p;
    p.infinite_ = true;
    return p;
}

SpherePoint::SpherePoint(std::array<double, 3> v) : v_(v) {
    const double n = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
    if (std::abs(n - 1.0) > 1e-12) throw InputError("sphere point is not a unit vector");
}

SpherePoint SpherePoint::normalized(std::array<double, 3> v) {
    const double n = std::hypot(v[0], v[1], v[2]);
    if (!(n > 0.0) || !std::isfinite(n)) throw NumericalError("cannot normalize a zero or non-finite vector");
    return SpherePoint({v[0] / n, v[1] / n, v[2] / n});
}

SpherePoint to_sphere(const RiemannPoint& p) {
    if (p.is_infinite()) return SpherePoint({0.0, 0.0, 1.0});
    return SpherePoint::normalized(stereographic(p.value()));
}

RiemannPoint from_sphere(const SpherePoint& s) {
    const double x = s[0], y = s[1], z = s[2];
    if (z > 0.0) {
        const Complex conj{x, -y};
        if (std::abs(conj) == 0.0) return RiemannPoint::infinity();
        return RiemannPoint((1.0 + z) / conj);
    }
    return RiemannPoint(Complex{x, y} / (1.0 - z));
}

double chordal_distance(const SpherePoint& p, const SpherePoint& q) {
    return std::hypot(p[0] - q[0], p[1] - q[1], p[2] - q[2]);
}

PlanePoint::PlanePoint(Complex z) : z_(z) {
    if (!(z.imag() > 0.0) || !std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw InputError("plane point must lie in the open upper half-plane");
}

std::array<double, 3> ball_coordinates(const SpacePoint& p) {
    const double x1 = p.z.real(), x2 = p.z.imag(), t = p.height;
    const double r = std::hypot(x1, x2, t);
    if (r <= 1.0) {
        const double r2 = r * r;
        const double den = r2 + 1.0 + 2.0 * t;
        return {2.0 * x1 / den, 2.0 * x2 / den, (r2 - 1.0) / den};
    }
    const double inv = 1.0 / r;
    const double den = 1.0 + inv * inv + 2.0 * t * inv * inv;
    return {2.0 * x1 * inv * inv / den, 2.0 * x2 * inv * inv / den, (1.0 - inv * inv) / den};
}

SpherePoint radial_projection(const SpacePoint& p) {
    return SpherePoint::normalized(ball_coordinates(p));
}

Geodesic2::Geodesic2(RiemannPoint from, RiemannPoint to, double tol) : from_(from), to_(to) {
    if (!from.is_real(tol) || !to.is_real(tol)) throw InputError("geodesic endpoints must lie on R u {inf}");
    if (from.is_infinite() && to.is_infinite()) throw InputError("geodesic endpoints must be distinct");
    if (!from.is_infinite() && !to.is_infinite() && std::abs(from.value() - to.value()) <= tol)
        throw InputError("geodesic endpoints must be distinct");
    if (!from_.is_infinite()) from_ = RiemannPoint(from_.value().real());
    if (!to_.is_infinite()) to_ = RiemannPoint(to_.value().real());
}

MobiusMap::MobiusMap(Complex a, Complex b, Complex c, Complex d) : m_{a, b, c, d} {
    const Complex det = a * d - b * c;
    const double scale = std::max({std::abs(a), std::abs(b), std::abs(c), std::abs(d)});
    if (!(scale > 0.0) || std::abs(det) <= 1e-14 * scale * scale)
        throw InputError("Mobius map has (near) zero determinant");
    const Complex root = std::sqrt(det);
    for (auto& e : m_) e /= root;

    bool flip = false;
    const double re_tr = (m_[0] + m_[3]).real();
    if (std::abs(re_tr) > 1e-12) {
        flip = re_tr < 0.0;
    } else {
        for (const auto& e : m_) {
            if (std::abs(e) > 1e-12) {
                const double arg = std::arg(e);
                flip = !(arg >= 0.0 && arg < std::numbers::pi);
                break;
            }
        }
    }
    if (flip)
        for (auto& e : m_) e = -e;
}

MobiusMap MobiusMap::inverse() const { return {m_[3], -m_[1], -m_[2], m_[0]}; }

MobiusMap MobiusMap::operator*(const MobiusMap& r) const {
    return {m_[0] * r.m_[0] + m_[1] * r.m_[2], m_[0] * r.m_[1] + m_[1] * r.m_[3],
            m_[2] * r.m_[0] + m_[3] * r.m_[2], m_[2] * r.m_[1] + m_[3] * r.m_[3]};
}

RiemannPoint MobiusMap::apply(const RiemannPoint& p) const {
    const auto [a, b, c, d] = m_;
    if (p.is_infinite()) {
        if (c == Complex{}) return RiemannPoint::infinity();
        return RiemannPoint(a / c);
    }
    const Complex den = c * p.value() + d;
    if (den == Complex{}) return RiemannPoint::infinity();
    return RiemannPoint((a * p.value() + b) / den);
}

SpherePoint MobiusMap::apply(const SpherePoint& p) const { return to_sphere(apply(from_sphere(p))); }

PlanePoint MobiusMap::apply(const PlanePoint& p) const {
    if (!is_real()) throw InputError("map with non-real entries does not preserve the upper half-plane");
    const auto [a, b, c, d] = m_;
    return PlanePoint((a * p.value() + b) / (c * p.value() + d));
}

SpacePoint MobiusMap::apply(const SpacePoint& p) const {
    const auto [a, b, c, d] = m_;
    const Complex cz_d = c * p.z + d;
    const double t2 = p.height * p.height;
    const double den = std::norm(cz_d) + std::norm(c) * t2;
    const Complex z = ((a * p.z + b) * std::conj(cz_d) + a * std::conj(c) * t2) / den;
    return {z, p.height / den};
}

bool MobiusMap::is_real(double tol) const {
    return std::all_of(m_.begin(), m_.end(), [&](Complex e) { return std::abs(e.imag()) <= tol; });
}

bool approx_equal(const MobiusMap& m, const MobiusMap& n, double tol) {
    const std::array<Complex, 4> x{m.a(), m.b(), m.c(), m.d()};
    const std::array<Complex, 4> y{n.a(), n.b(), n.c(), n.d()};
    double plus = 0.0, minus = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
        minus = std::max(minus, std::abs(x[i] - y[i]));
        plus = std::max(plus, std::abs(x[i] + y[i]));
    }
    return std::min(plus, minus) <= tol;
}

std::ostream& operator<<(std::ostream& os, const MobiusMap& m) {
    return os << "[[" << m.a() << ", " << m.b() << "], [" << m.c() << ", " << m.d() << "]]";
}

double distance(const PlanePoint& z, const PlanePoint& w) {
    const double num = std::abs(z.value() - w.value());
    const double den = 2.0 * std::sqrt(z.value().imag() * w.value().imag());
    return 2.0 * std::asinh(num / den);
}

namespace {

// Real isometry sending g.from() to 0 and g.to() to infinity.
MobiusMap normalize_geodesic(const Geodesic2& g) {
    const auto& e1 = g.from();
    const auto& e2 = g.to();
    if (e2.is_infinite()) return {1.0, -e1.value(), 0.0, 1.0};
    if (e1.is_infinite()) return {0.0, -1.0, 1.0, -e2.value()};
    const double x1 = e1.value().real(), x2 = e2.value().real();
    if (x1 > x2) return {1.0, -x1, 1.0, -x2};
    return {-1.0, x1, 1.0, -x2};
}

}  // namespace

PlanePoint nearest_point_projection(const PlanePoint& z, const Geodesic2& g) {
    const MobiusMap to_axis = normalize_geodesic(g);
    const PlanePoint w = to_axis.apply(z);
    return to_axis.inverse().apply(PlanePoint(Complex{0.0, std::abs(w.value())}));
}

bool lies_on(const PlanePoint& z, const Geodesic2& g, double tol) {
    const PlanePoint w = normalize_geodesic(g).apply(z);
    return std::abs(w.value().real()) <= tol * std::abs(w.value());
}

namespace {

// Fixed point of m for eigenvalue lambda, as a projective eigenvector ratio.
RiemannPoint eigen_fixed_point(const MobiusMap& m, Complex lambda) {
    const Complex u1 = m.b(), u2 = lambda - m.a();
    const Complex v1 = lambda - m.d(), v2 = m.c();
    const bool first = std::abs(u1) + std::abs(u2) >= std::abs(v1) + std::abs(v2);
    const Complex num = first ? u1 : v1;
    const Complex den = first ? u2 : v2;
    if (std::abs(den) <= 1e-15 * std::abs(num)) return RiemannPoint::infinity();
    return RiemannPoint(num / den);
}

}  // namespace

Classification classify(const MobiusMap& m, const Tolerances& tol) {
    const double off = std::max({std::abs(m.b()), std::abs(m.c()), std::abs(m.a() - m.d())});
    if (off <= tol.classification) throw IndeterminateError("map is indistinguishable from the identity");

    const Complex tr = m.trace();
    const Complex disc = tr * tr - 4.0;
    if (std::abs(disc) <= tol.classification)
        return {MapKind::parabolic, {eigen_fixed_point(m, tr / 2.0)}};

    const Complex root = std::sqrt(disc);
    Complex big = (tr + root) / 2.0;
    Complex small = (tr - root) / 2.0;
    if (std::abs(small) > std::abs(big)) std::swap(big, small);

    if (std::abs(tr.imag()) <= tol.classification && std::abs(tr.real()) < 2.0)
        return {MapKind::elliptic, {eigen_fixed_point(m, big), eigen_fixed_point(m, small)}};
    return {MapKind::loxodromic, {eigen_fixed_point(m, big), eigen_fixed_point(m, small)}};
}

const char* to_string(MapKind kind) {
    switch (kind) {
        case MapKind::elliptic: return "elliptic";
        case MapKind::parabolic: return "parabolic";
        case MapKind::loxodromic: return "loxodromic";
    }
    return "unknown";
}

}  // namespace ctlab::hyp
