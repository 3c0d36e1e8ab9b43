#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "m3s/ambient.hpp"

namespace m3s {

// Finite-difference contract used everywhere a derivative is taken
// numerically: fourth-order central differences with base step `step`, plus
// one Richardson extrapolation (six evaluations at +-h/2, +-h, +-2h).
struct DiffParams {
    double step = 1e-4;
};

double derivative_at_zero(const std::function<double(double)>& f, double h);
Vec derivative_at_zero(const std::function<Vec(double)>& f, double h);

// A vector field given in ambient coordinates, defined on a neighborhood of
// the hypersurface (all fields the engine differentiates are of this kind).
using VectorField = std::function<Vec(const Vec&)>;
using ScalarField = std::function<double(const Vec&)>;

// Pseudo-orthonormal tangent frame: inner(e_i, e_j) = signs[i] * delta_ij.
struct Frame {
    std::vector<Vec> vectors;
    std::vector<double> signs;
};

// Level-set hypersurface M = f^-1(level) of a flat semi-Euclidean space with
// spacelike gradient.  Points and tangent vectors carry ambient coordinates
// throughout; the Levi-Civita connection is the tangential part of the flat
// ambient derivative.
class Hypersurface {
public:
    enum class Flavor { pseudo_sphere, generic };

    // unit level set of inner(x,x) in R^{4n+4} with index 2n+2
    static Hypersurface pseudo_sphere(int n);
    // generic level set; `grad` must be the metric gradient of f (the vector
    // dual of df), supplied in closed form
    static Hypersurface level_set(SemiEuclideanSpace space, ScalarField f, VectorField grad,
                                  double level);

    const SemiEuclideanSpace& space() const { return space_; }
    Flavor flavor() const { return flavor_; }
    double level() const { return level_; }
    int dim() const { return space_.dim - 1; }

    double f_value(const Vec& q) const { return f_(q); }
    Vec gradient(const Vec& q) const { return grad_(q); }
    bool on_surface(const Vec& p, double tol = 1e-12) const;
    double metric(const Vec& x, const Vec& y) const { return space_.inner(x, y); }

    // throws NullGradient unless inner(grad f, grad f) > 1e-8 (the spacelike
    // hypothesis; timelike and null gradients are both rejected)
    Vec unit_normal(const Vec& p) const;
    Vec project_tangent(const Vec& p, const Vec& v) const;

    // box sampler with rejection of near-null draws; pseudo-sphere only
    std::vector<Vec> sample_points(std::uint64_t seed, int count) const;

    // curve through p with velocity x used for all on-surface differentiation;
    // for the pseudo-sphere this is (p + t x)/sqrt(inner(p + t x, p + t x)),
    // which stays on the surface at every stencil offset
    Vec curve(const Vec& p, const Vec& x, double t) const;

    // canonical extension E_v(q) = v - (inner(v, G)/inner(G, G)) G, G = grad f(q):
    // tangent to every level set, equal to v at tangency points, and
    // nabla-parallel at the base point
    Vec extend_canonical_at(const Vec& v, const Vec& q) const;
    VectorField extend_canonical(const Vec& v) const;

    double directional_derivative(const ScalarField& s, const Vec& p, const Vec& x,
                                  const DiffParams& d = {}) const;
    // flat ambient derivative D_x Y along the curve (chain rule makes the
    // value curve-independent for fields defined off the surface)
    Vec ambient_derivative(const VectorField& y, const Vec& p, const Vec& x,
                           const DiffParams& d = {}) const;
    // Levi-Civita connection: tangential part of the ambient derivative
    Vec covariant_derivative(const VectorField& y, const Vec& p, const Vec& x,
                             const DiffParams& d = {}) const;
    // flat bracket D_X Y - D_Y X of ambient-defined fields
    Vec lie_bracket(const VectorField& a, const VectorField& b, const Vec& p,
                    const DiffParams& d = {}) const;

    // Weingarten map A x = -tangential(D_x N)
    Vec shape_operator(const Vec& p, const Vec& x, const DiffParams& d = {}) const;

    // Gauss-equation path: R(X,Y)Z = h(Y,Z) A X - h(X,Z) A Y with
    // h(X,Y) = inner(A X, Y); sign convention
    // R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z
    Vec curvature(const Vec& p, const Vec& x, const Vec& y, const Vec& z,
                  const DiffParams& d = {}) const;
    // independent cross-check path via nested differentiation of canonical
    // extensions (second-order differencing, so agreement is only ~1e-5)
    Vec curvature_via_derivatives(const Vec& p, const Vec& x, const Vec& y, const Vec& z,
                                  const DiffParams& d = {}) const;

    double ricci(const Frame& frame, const Vec& p, const Vec& x, const Vec& y,
                 const DiffParams& d = {}) const;
    double scalar_curvature(const Frame& frame, const Vec& p, const DiffParams& d = {}) const;
    // throws DegeneratePlane when |g(X,X)g(Y,Y) - g(X,Y)^2| <= 1e-8
    double sectional_curvature(const Vec& p, const Vec& x, const Vec& y,
                               const DiffParams& d = {}) const;

    // indefinite Gram-Schmidt with greedy pivoting on max |inner(w,w)|;
    // candidates are the projected coordinate basis plus seeded random draws
    Frame build_frame(const Vec& p, std::uint64_t seed) const;

    // closed-form unit-speed geodesic through p by causal type of inner(v,v);
    // returns (point, velocity); pseudo-sphere only
    std::pair<Vec, Vec> geodesic(const Vec& p, const Vec& v, double t) const;
    // analytic second derivative of the closed form (for the ODE residual)
    Vec geodesic_acceleration(const Vec& p, const Vec& v, double t) const;

private:
    Hypersurface() = default;

    SemiEuclideanSpace space_;
    Flavor flavor_ = Flavor::generic;
    double level_ = 0.0;
    ScalarField f_;
    VectorField grad_;
};

} // namespace m3s
