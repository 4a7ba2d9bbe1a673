#include "ctlab/kleinian.hpp"

#include "ctlab/error.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <sstream>

namespace ctlab::kleinian {

using hyp::RiemannPoint;
using words::Letter;

namespace {

// SL(2,C) matrix with its sign kept, row major.
using Mat2 = std::array<Complex, 4>;

Mat2 mul(const Mat2& l, const Mat2& r) {
    return {l[0] * r[0] + l[1] * r[2], l[0] * r[1] + l[1] * r[3], l[2] * r[0] + l[3] * r[2],
            l[2] * r[1] + l[3] * r[3]};
}

Mat2 inv(const Mat2& m) { return {m[3], -m[1], -m[2], m[0]}; }

struct FrickePair {
    Mat2 a, b;
};

// a = [[x, 1], [-1, 0]], b = [[0, s], [-1/s, y]] with s + 1/s = -z, so that
// tr a = x, tr b = y, tr ab = z and tr[a,b] = x^2 + y^2 + z^2 - xyz - 2.
FrickePair fricke(const MarkovTriple& t) {
    const Complex disc = std::sqrt(t.z * t.z - 4.0);
    Complex s = (-t.z + disc) / 2.0;
    if (std::abs(s) < 1.0) s = (-t.z - disc) / 2.0;  // larger root, never zero
    return {{t.x, 1.0, -1.0, 0.0}, {0.0, s, -1.0 / s, t.y}};
}

Mat2 word_matrix(const FrickePair& g, const ReducedWord& w) {
    const Mat2 ai = inv(g.a), bi = inv(g.b);
    Mat2 out{1.0, 0.0, 0.0, 1.0};
    for (const Letter x : w.letters()) {
        switch (x) {
            case Letter::a: out = mul(out, g.a); break;
            case Letter::b: out = mul(out, g.b); break;
            case Letter::A: out = mul(out, ai); break;
            case Letter::B: out = mul(out, bi); break;
        }
    }
    return out;
}

Complex trace(const Mat2& m) { return m[0] + m[3]; }

using Vec3 = Eigen::Matrix<Complex, 3, 1>;
using Vec4 = Eigen::Matrix<Complex, 4, 1>;

struct TraceSystem {
    ReducedWord phi_a, phi_b, phi_ab;
    int eps_a, eps_b;

    Vec4 residual(const Vec3& v) const {
        const MarkovTriple t{v(0), v(1), v(2)};
        const FrickePair g = fricke(t);
        Vec4 r;
        r(0) = trace(word_matrix(g, phi_a)) - static_cast<double>(eps_a) * t.x;
        r(1) = trace(word_matrix(g, phi_b)) - static_cast<double>(eps_b) * t.y;
        r(2) = trace(word_matrix(g, phi_ab)) - static_cast<double>(eps_a * eps_b) * t.z;
        r(3) = t.markov_defect();
        return r;
    }
};

double max_abs(const Vec4& r) { return r.cwiseAbs().maxCoeff(); }

std::optional<Vec3> newton(const TraceSystem& sys, Vec3 v, const SolverOptions& opt) {
    Vec4 r = sys.residual(v);
    for (int it = 0; it < opt.max_iterations; ++it) {
        if (!std::isfinite(max_abs(r))) return std::nullopt;
        if (max_abs(r) <= opt.tolerance) return v;
        Eigen::Matrix<Complex, 4, 3> jac;
        for (int k = 0; k < 3; ++k) {
            const double h = 1e-7 * std::max(1.0, std::abs(v(k)));
            Vec3 w = v;
            w(k) += h;
            jac.col(k) = (sys.residual(w) - r) / h;
        }
        const Vec3 step = jac.colPivHouseholderQr().solve(-r);
        double lambda = 1.0;
        bool improved = false;
        for (int halvings = 0; halvings < 30; ++halvings, lambda /= 2.0) {
            const Vec3 trial = v + lambda * step;
            const Vec4 rt = sys.residual(trial);
            if (std::isfinite(max_abs(rt)) && rt.norm() < r.norm()) {
                v = trial;
                r = rt;
                improved = true;
                break;
            }
        }
        if (!improved) break;
    }
    return max_abs(r) <= 1e3 * opt.tolerance ? std::optional<Vec3>(v) : std::nullopt;
}

// Mobius matrix sending z1 to infinity, z2 to 0 and z3 to 1.
MobiusMap three_point_map(const RiemannPoint& z1, const RiemannPoint& z2, const RiemannPoint& z3) {
    if (z1.is_infinite()) return {1.0, -z2.value(), 0.0, z3.value() - z2.value()};
    if (z2.is_infinite()) return {0.0, z3.value() - z1.value(), 1.0, -z1.value()};
    if (z3.is_infinite()) return {1.0, -z2.value(), 1.0, -z1.value()};
    const Complex p = z1.value(), q = z2.value(), u = z3.value();
    return {u - p, -q * (u - p), u - q, -p * (u - q)};
}

double point_gap(const RiemannPoint& p, const RiemannPoint& q) {
    return hyp::chordal_distance(hyp::to_sphere(p), hyp::to_sphere(q));
}

}  // namespace

bool MarkovTriple::is_real(double tol) const {
    return std::abs(x.imag()) <= tol && std::abs(y.imag()) <= tol && std::abs(z.imag()) <= tol;
}

Representation representation_from_traces(const MarkovTriple& t) {
    if (std::abs(t.x) + std::abs(t.y) + std::abs(t.z) < 1e-6) throw InputError("degenerate trace triple (0, 0, 0)");
    if (t.is_real()) {
        std::ostringstream os;
        os << "fuchsian-branch: real trace triple (" << t.x.real() << ", " << t.y.real() << ", " << t.z.real() << ")";
        throw FuchsianBranchError(os.str());
    }
    const double defect = std::abs(t.markov_defect());
    if (defect > 1e-9 * std::max(1.0, std::abs(t.x * t.y * t.z)))
        throw InputError("trace triple is off the Markov surface; commutator is not parabolic");

    const FrickePair g = fricke(t);
    const auto to_map = [](const Mat2& m) { return MobiusMap(m[0], m[1], m[2], m[3]); };
    const MobiusMap a = to_map(g.a), b = to_map(g.b);
    const MobiusMap comm = a * b * a.inverse() * b.inverse();

    const hyp::Classification kc = hyp::classify(comm, {1e-9, 1e-6});
    if (kc.kind != hyp::MapKind::parabolic) throw InputError("commutator is not parabolic");
    const RiemannPoint cusp = kc.fixed_points.front();

    MobiusMap frame;
    const hyp::Classification ac = hyp::classify(a);
    if (ac.kind == hyp::MapKind::loxodromic) {
        frame = three_point_map(cusp, ac.fixed_points[1], ac.fixed_points[0]);
    } else {
        const RiemannPoint moved = a.apply(cusp);
        if (point_gap(moved, cusp) < 1e-9) throw InputError("a fixes the cusp; representation is reducible");
        frame = three_point_map(cusp, ac.fixed_points.front(), moved);
    }

    Representation rep;
    rep.a = frame * a * frame.inverse();
    rep.b = frame * b * frame.inverse();
    rep.traces = t;
    const MobiusMap nc = rep.a * rep.b * rep.a.inverse() * rep.b.inverse();
    rep.commutator_residual = std::min(std::abs(nc.trace() + 2.0), std::abs(nc.trace() - 2.0));
    return rep;
}

Representation solve_fiber_representation(const Monodromy& m, const SolverOptions& options) {
    const auto& phi = m.automorphism();
    const ReducedWord ab = ReducedWord::parse("ab");
    std::mt19937_64 rng(options.seed);
    std::uniform_real_distribution<double> coord(-4.0, 4.0);

    bool saw_real = false;
    double best_residual = std::numeric_limits<double>::infinity();
    constexpr std::array<std::array<int, 2>, 4> patterns{{{1, 1}, {1, -1}, {-1, 1}, {-1, -1}}};
    for (const auto& [ea, eb] : patterns) {
        const TraceSystem sys{phi(ReducedWord::parse("a")), phi(ReducedWord::parse("b")), phi(ab), ea, eb};
        std::vector<MarkovTriple> found;
        for (int trial = 0; trial < options.restarts; ++trial) {
            Vec3 seed;
            for (int k = 0; k < 3; ++k) seed(k) = Complex(coord(rng), coord(rng));
            const auto root = newton(sys, seed, options);
            if (!root) continue;
            best_residual = std::min(best_residual, max_abs(sys.residual(*root)));
            MarkovTriple t{(*root)(0), (*root)(1), (*root)(2)};
            if (std::abs(t.x) + std::abs(t.y) + std::abs(t.z) < 1e-6) continue;
            if (t.is_real(1e-8)) {
                saw_real = true;
                continue;
            }
            const double lead = std::abs(t.x.imag()) > 1e-8 ? t.x.imag() : std::abs(t.y.imag()) > 1e-8 ? t.y.imag() : t.z.imag();
            if (lead < 0.0) t = {std::conj(t.x), std::conj(t.y), std::conj(t.z)};
            found.push_back(t);
        }
        if (found.empty()) continue;
        // Deterministic pick among distinct roots: lexicographic on rounded coordinates.
        const auto key = [](const MarkovTriple& t) {
            const auto r = [](double v) { return std::round(v * 1e6) / 1e6; };
            return std::array<double, 6>{r(t.x.real()), r(t.x.imag()), r(t.y.real()), r(t.y.imag()), r(t.z.real()),
                                         r(t.z.imag())};
        };
        const auto best = std::min_element(found.begin(), found.end(),
                                           [&](const MarkovTriple& l, const MarkovTriple& r) { return key(l) < key(r); });
        // Polish the chosen root once more from itself.
        const auto polished = newton(sys, Vec3(best->x, best->y, best->z), options);
        MarkovTriple t = polished ? MarkovTriple{(*polished)(0), (*polished)(1), (*polished)(2)} : *best;
        Representation rep = representation_from_traces(t);
        rep.sign_a = ea;
        rep.sign_b = eb;
        rep.conjugacy_residual = verify_monodromy_conjugacy(rep, m);
        return rep;
    }
    if (saw_real) throw FuchsianBranchError("fuchsian-branch: trace solver found only real fixed triples");
    std::ostringstream os;
    os << "trace solver did not converge; best residual " << best_residual;
    throw NumericalError(os.str());
}

MobiusMap evaluate(const Representation& rep, const ReducedWord& w) {
    const MobiusMap ai = rep.a.inverse(), bi = rep.b.inverse();
    MobiusMap out;
    for (const Letter x : w.letters()) {
        switch (x) {
            case Letter::a: out = out * rep.a; break;
            case Letter::b: out = out * rep.b; break;
            case Letter::A: out = out * ai; break;
            case Letter::B: out = out * bi; break;
        }
    }
    return out;
}

double verify_monodromy_conjugacy(const Representation& rep, const Monodromy& m) {
    const auto& phi = m.automorphism();
    double worst = 0.0;
    for (const char* g : {"a", "b", "ab", "aB"}) {
        const ReducedWord w = ReducedWord::parse(g);
        const Complex lhs = evaluate(rep, phi(w)).trace();
        const Complex rhs = evaluate(rep, w).trace();
        worst = std::max(worst, std::min(std::abs(lhs - rhs), std::abs(lhs + rhs)));
    }
    return worst;
}

JorgensenCheck jorgensen_check(const Representation& rep) {
    const MobiusMap a = rep.a, b = rep.b, ab = a * b, aB = a * b.inverse();
    const std::array<std::pair<MobiusMap, MobiusMap>, 6> pairs{
        {{a, b}, {b, a}, {a, ab}, {ab, a}, {b, ab}, {aB, b}}};
    JorgensenCheck out;
    out.minimum = std::numeric_limits<double>::infinity();
    for (const auto& [g, h] : pairs) {
        const Complex tg = g.trace();
        const Complex tc = (g * h * g.inverse() * h.inverse()).trace();
        out.minimum = std::min(out.minimum, std::abs(tg * tg - 4.0) + std::abs(tc - 2.0));
    }
    out.satisfied = out.minimum >= 1.0 - 1e-9;
    return out;
}

const char* to_string(SampleStatus s) { return s == SampleStatus::converged ? "converged" : "undecided"; }

SpherePoint orbit_image(const Representation& rep, const ReducedWord& prefix) {
    if (prefix.empty()) throw InputError("orbit image of the empty word is the centre of the ball");
    const MobiusMap ai = rep.a.inverse(), bi = rep.b.inverse();
    hyp::SpacePoint p = hyp::SpacePoint::basepoint();
    const auto letters = prefix.letters();
    for (auto it = letters.rbegin(); it != letters.rend(); ++it) {
        switch (*it) {
            case Letter::a: p = rep.a.apply(p); break;
            case Letter::b: p = rep.b.apply(p); break;
            case Letter::A: p = ai.apply(p); break;
            case Letter::B: p = bi.apply(p); break;
        }
    }
    return hyp::radial_projection(p);
}

SpherePoint periodic_limit(const Representation& rep, const ReducedWord& head, const ReducedWord& period) {
    if (period.empty()) throw InputError("period must be nonempty");
    const hyp::Classification c = hyp::classify(evaluate(rep, period));
    if (c.kind == hyp::MapKind::elliptic) throw NumericalError("periodic word acts elliptically; no limit point");
    return hyp::to_sphere(evaluate(rep, head).apply(c.fixed_points.front()));
}

CTSample ct_image(const Representation& rep, const BoundaryWord& xi, std::size_t depth, double tol,
                  std::size_t stride) {
    if (depth == 0) throw InputError("ct_image needs depth >= 1");
    if (stride == 0) throw InputError("ct_image needs stride >= 1");
    const ReducedWord w = xi.prefix(depth);
    CTSample s;
    s.depth = depth;
    s.image = orbit_image(rep, w);
    if (depth > stride) {
        s.convergence = hyp::chordal_distance(s.image, orbit_image(rep, w.prefix(depth - stride)));
        s.status = s.convergence <= tol ? SampleStatus::converged : SampleStatus::undecided;
    } else {
        s.convergence = hyp::chordal_distance(s.image, orbit_image(rep, w.prefix(1)));
        s.status = SampleStatus::undecided;
    }
    if (const auto& form = xi.periodic_form()) {
        try {
            s.fixed_point_gap = hyp::chordal_distance(s.image, periodic_limit(rep, form->head, form->period));
        } catch (const NumericalError&) {
        }
    }
    return s;
}

}  // namespace ctlab::kleinian
