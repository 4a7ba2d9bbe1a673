#pragma once

#include "ctlab/hyp.hpp"
#include "ctlab/words.hpp"

#include <cstdint>
#include <optional>

namespace ctlab::kleinian {

using hyp::Complex;
using hyp::MobiusMap;
using hyp::SpherePoint;
using words::BoundaryWord;
using words::Monodromy;
using words::ReducedWord;

/// Traces x = tr a, y = tr b, z = tr ab of a punctured-torus representation.
struct MarkovTriple {
    Complex x, y, z;

    /// x^2 + y^2 + z^2 - xyz; zero exactly when the commutator has trace -2.
    Complex markov_defect() const { return x * x + y * y + z * z - x * y * z; }
    bool is_real(double tol = 1e-9) const;
};

struct Representation {
    MobiusMap a, b;
    MarkovTriple traces;
    /// |tr[a,b] + 2|
    double commutator_residual = 0.0;
    /// Filled in by the solver; see verify_monodromy_conjugacy.
    double conjugacy_residual = 0.0;
    /// Sign character of the trace fixed point (tr phi(a) = eps_a x, ...).
    int sign_a = 1, sign_b = 1;
};

struct SolverOptions {
    std::uint64_t seed = 20240601;
    int restarts = 200;
    int max_iterations = 100;
    /// Newton stops once every residual is below this.
    double tolerance = 1e-14;
};

/// Non-real fixed point of the trace action of m on the Markov surface,
/// lifted to matrices. The branch with Im tr(a) > 0 is returned.
/// Throws FuchsianBranchError if only real triples are found and
/// NumericalError if Newton never converges.
Representation solve_fiber_representation(const Monodromy& m, const SolverOptions& options = {});

/// Matrices realizing a triple, conjugated so the commutator fixes infinity
/// and a has its repelling fixed point at 0 and its attracting one at 1.
/// Throws FuchsianBranchError for real triples and InputError when the
/// commutator is not parabolic or the triple is degenerate.
Representation representation_from_traces(const MarkovTriple& t);

MobiusMap evaluate(const Representation& rep, const ReducedWord& w);

/// max over a, b, ab of |tr rho(phi g) - eps_g tr rho(g)|, minimized over the
/// four sign characters.
double verify_monodromy_conjugacy(const Representation& rep, const Monodromy& m);

/// Smallest |tr^2 g - 4| + |tr[g,h] - 2| over a few generating pairs; the
/// group fails to be discrete if this drops below 1.
struct JorgensenCheck {
    double minimum = 0.0;
    bool satisfied = false;
};
JorgensenCheck jorgensen_check(const Representation& rep);

enum class SampleStatus { converged, undecided };
const char* to_string(SampleStatus s);

struct CTSample {
    std::size_t depth = 0;
    SpherePoint image{{0.0, 0.0, 1.0}};
    /// Chordal distance between the images at depth and depth - stride.
    double convergence = 0.0;
    SampleStatus status = SampleStatus::undecided;
    /// For eventually periodic words: chordal distance to the fixed-point formula.
    std::optional<double> fixed_point_gap;
};

/// Orbit of the basepoint j under the depth-n prefix, projected radially
/// to the sphere at infinity. Throws InputError when depth is 0 or beyond
/// the available depth of xi.
CTSample ct_image(const Representation& rep, const BoundaryWord& xi, std::size_t depth, double tol,
                  std::size_t stride = 5);

/// Image of a finite prefix (no convergence bookkeeping).
SpherePoint orbit_image(const Representation& rep, const ReducedWord& prefix);

/// Limit point rho(u) * fix(rho(v)) of u v^infinity (attracting fixed point,
/// or the parabolic one).
SpherePoint periodic_limit(const Representation& rep, const ReducedWord& head, const ReducedWord& period);

}  // namespace ctlab::kleinian
