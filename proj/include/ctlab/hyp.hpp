#pragma once

#include <array>
#include <complex>
#include <iosfwd>
#include <vector>

namespace ctlab::hyp {

using Complex = std::complex<double>;

/// Tolerances for geometric predicates. `geometric` is the global epsilon,
/// `classification` the margin on |tr^2 - 4| when classifying maps.
struct Tolerances {
    double geometric = 1e-9;
    double classification = 1e-6;
};

/// A point of the Riemann sphere C u {inf}.
class RiemannPoint {
public:
    RiemannPoint(Complex z = {}) : z_(z) {}
    static RiemannPoint infinity();

    bool is_infinite() const { return infinite_; }
    /// Finite coordinate; meaningless when `is_infinite()`.
    Complex value() const { return z_; }
    bool is_real(double tol) const { return infinite_ || std::abs(z_.imag()) <= tol; }

private:
    Complex z_;
    bool infinite_ = false;
};

/// Unit vector on S^2, the stereographic image of a Riemann point.
class SpherePoint {
public:
    /// Throws InputError unless |v| = 1 within 1e-12.
    explicit SpherePoint(std::array<double, 3> v);
    /// Normalizes a nonzero vector onto the sphere.
    static SpherePoint normalized(std::array<double, 3> v);

    const std::array<double, 3>& coords() const { return v_; }
    double operator[](std::size_t i) const { return v_[i]; }

private:
    std::array<double, 3> v_;
};

SpherePoint to_sphere(const RiemannPoint& p);
RiemannPoint from_sphere(const SpherePoint& s);
double chordal_distance(const SpherePoint& p, const SpherePoint& q);

/// Point of the upper half-plane; Im z > 0 strictly.
class PlanePoint {
public:
    explicit PlanePoint(Complex z);
    Complex value() const { return z_; }

private:
    Complex z_;
};

/// Point of upper half-space H^3 written z + t j with t > 0.
struct SpacePoint {
    Complex z;
    double height = 1.0;

    /// The point j, lift of i in H^2 = vertical half-plane over the real axis.
    static SpacePoint basepoint() { return {Complex{0.0, 0.0}, 1.0}; }
};

/// Coordinates in the Poincare ball, matched to the stereographic convention
/// of `to_sphere` (basepoint j goes to the origin).
std::array<double, 3> ball_coordinates(const SpacePoint& p);
/// Radial projection of an interior point to S^2 in the ball model.
SpherePoint radial_projection(const SpacePoint& p);

/// Geodesic of H^2 given by distinct ideal endpoints on R u {inf}.
class Geodesic2 {
public:
    Geodesic2(RiemannPoint from, RiemannPoint to, double tol = 1e-12);
    const RiemannPoint& from() const { return from_; }
    const RiemannPoint& to() const { return to_; }

private:
    RiemannPoint from_;
    RiemannPoint to_;
};

/// Element of PSL(2,C). Entries are scaled to determinant one and the sign is
/// fixed so that Re tr >= 0, with ties broken by the argument of the first
/// nonzero entry lying in [0, pi).
class MobiusMap {
public:
    MobiusMap() : MobiusMap(1.0, 0.0, 0.0, 1.0) {}
    MobiusMap(Complex a, Complex b, Complex c, Complex d);
    static MobiusMap identity() { return {}; }

    Complex a() const { return m_[0]; }
    Complex b() const { return m_[1]; }
    Complex c() const { return m_[2]; }
    Complex d() const { return m_[3]; }
    Complex trace() const { return m_[0] + m_[3]; }
    Complex determinant() const { return m_[0] * m_[3] - m_[1] * m_[2]; }

    MobiusMap inverse() const;
    MobiusMap operator*(const MobiusMap& rhs) const;

    RiemannPoint apply(const RiemannPoint& p) const;
    SpherePoint apply(const SpherePoint& p) const;
    /// Requires real entries (an isometry of H^2); throws InputError otherwise.
    PlanePoint apply(const PlanePoint& p) const;
    SpacePoint apply(const SpacePoint& p) const;

    bool is_real(double tol = 1e-12) const;

private:
    std::array<Complex, 4> m_;
};

/// Equality in PSL(2,C): min(|m - n|, |m + n|) over entries <= tol.
bool approx_equal(const MobiusMap& m, const MobiusMap& n, double tol = 1e-9);
std::ostream& operator<<(std::ostream& os, const MobiusMap& m);

double distance(const PlanePoint& z, const PlanePoint& w);
PlanePoint nearest_point_projection(const PlanePoint& z, const Geodesic2& g);
bool lies_on(const PlanePoint& z, const Geodesic2& g, double tol = 1e-9);

enum class MapKind { elliptic, parabolic, loxodromic };

struct Classification {
    MapKind kind;
    /// Loxodromic: {attracting, repelling}. Parabolic: {fixed}. Elliptic: both fixed points.
    std::vector<RiemannPoint> fixed_points;
};

/// Throws IndeterminateError for maps within the classification margin of
/// the identity.
Classification classify(const MobiusMap& m, const Tolerances& tol = {});

const char* to_string(MapKind kind);

}  // namespace ctlab::hyp
