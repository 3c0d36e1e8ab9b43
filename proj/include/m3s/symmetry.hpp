#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "m3s/ambient.hpp"
#include "m3s/exterior.hpp"
#include "m3s/hypersurface.hpp"
#include "m3s/structures.hpp"

namespace m3s {

// Differential form on (a neighborhood of) the hypersurface, stored as a map
// from ambient points to ambient coefficient arrays.  Checks only ever
// evaluate these on tangent vectors, where the choice of ambient extension is
// immaterial.
struct FormField {
    int rank = 0;
    std::function<AlternatingForm(const Vec&)> at;
};

// eta_a as a 1-form field with coefficients linear in q (so its exterior
// derivative has constant coefficients)
FormField eta_field(const SphereMixedSystem& sys, int a);
// d eta_a exactly: constant 2-form with d eta_a(e_i, e_j) = 2 (D J_a)_{ij};
// equivalently d eta_a(X, Y) = -2 g(phi_a X, Y) on tangent vectors
AlternatingForm d_eta_matrix(const SphereMixedSystem& sys, int a);
FormField d_eta_field(const SphereMixedSystem& sys, int a);
AlternatingForm d_eta_power(const SphereMixedSystem& sys, int a, int k);
// omega_k = eta_a ^ (d eta_a)^k, rank 2k+1, defined for 0 <= k <= 2n+1
FormField ky_family_field(const SphereMixedSystem& sys, int a, int k);
FormField constant_form_field(AlternatingForm w);
// fundamental 2-form Omega_a(X,Y) = g(phi_a X, Y), antisymmetrized so the
// ambient coefficient matrix is alternating (the correction vanishes on
// tangent pairs)
FormField omega_field(const SphereMixedSystem& sys, int a);

double form_value(const FormField& w, const Vec& p, const std::vector<Vec>& args);

// (nabla_X w)(args) = X(w(E_1, ..., E_p)) with canonical extensions of the
// arguments (they are nabla-parallel at p, so no correction terms)
double covariant_derivative_form(const Hypersurface& m, const FormField& w, const Vec& p,
                                 const Vec& x, const std::vector<Vec>& args,
                                 const DiffParams& d = {});
// d w via the invariant formula on canonical extensions; the bracket terms
// vanish at p because canonical extensions commute there
double exterior_derivative_value(const Hypersurface& m, const FormField& w, const Vec& p,
                                 const std::vector<Vec>& args, const DiffParams& d = {});
// d* w = -sum_i eps_i iota_{e_i} nabla_{e_i} w over a pseudo-orthonormal frame
double codifferential_value(const Hypersurface& m, const Frame& frame, const FormField& w,
                            const Vec& p, const std::vector<Vec>& args, const DiffParams& d = {});
// (x_flat ^ d* w)(args) via the shuffle expansion of a 1-form wedge
double x_flat_wedge_codiff(const Hypersurface& m, const Frame& frame, const FormField& w,
                           const Vec& p, const Vec& x, const std::vector<Vec>& args,
                           const DiffParams& d = {});

// residual of the conformal Killing-Yano equation
//   nabla_X w = (1/(p+1)) iota_X dw - (1/(dim-p+1)) x_flat ^ d* w
// `exact_d` short-circuits the finite-difference exterior derivative when dw
// is known in closed form
double cky_residual(const Hypersurface& m, const Frame& frame, const FormField& w, const Vec& p,
                    const Vec& x, const std::vector<Vec>& args, const DiffParams& d = {},
                    const AlternatingForm* exact_d = nullptr);
// residual of the Killing-Yano equation nabla_X w = (1/(p+1)) iota_X dw
double ky_residual(const Hypersurface& m, const FormField& w, const Vec& p, const Vec& x,
                   const std::vector<Vec>& args, const DiffParams& d = {},
                   const AlternatingForm* exact_d = nullptr);

// g(nabla_Y X, Z) + g(Y, nabla_Z X)
double killing_residual(const Hypersurface& m, const VectorField& x, const Vec& p, const Vec& y,
                        const Vec& z, const DiffParams& d = {});
// |2 g(nabla_{xi_a} X, xi_a) - 2 g(nabla_X xi_a, xi_a)| = |(L_X g)(xi_a, xi_a)|
// up to the second term, which vanishes identically
double lie_metric_xi_check(const SphereMixedSystem& sys, const VectorField& x, const Vec& p, int a,
                           const DiffParams& d = {});

// symmetric 2-tensor field in ambient coordinates
struct SymmetricTensorField {
    std::function<double(const Vec&, const Vec&, const Vec&)> eval;
};

SymmetricTensorField metric_tensor_field(const Hypersurface& m);
SymmetricTensorField eta_squared_field(const SphereMixedSystem& sys, int a);
SymmetricTensorField constant_symmetric_field(Mat s);
// rho(X,Y) = (p-1)! sum over increasing frame (p-1)-tuples I of
// sign(I) w(X, e_I) w(Y, e_I); frame-independent, built per evaluation point
SymmetricTensorField associated_tensor(const Hypersurface& m, FormField w,
                                       std::uint64_t frame_seed);

double nabla_rho(const Hypersurface& m, const SymmetricTensorField& rho, const Vec& p,
                 const Vec& x, const Vec& y, const Vec& z, const DiffParams& d = {});
// max over frame triples i <= j <= k of the cyclic (fully symmetrized) sum
double killing_tensor_residual(const Hypersurface& m, const SymmetricTensorField& rho,
                               const Vec& p, const Frame& frame, const DiffParams& d = {});
// max_t |rho(c'(t), c'(t)) - rho(c'(0), c'(0))| along the geodesic from (p, v)
double geodesic_invariant_drift(const Hypersurface& m, const SymmetricTensorField& rho,
                                const Vec& p, const Vec& v, const std::vector<double>& times);

// [xi_a, xi_b] for the linear fields q -> -J q is exactly (J_b J_a - J_a J_b) q
IMat bracket_matrix(const SphereMixedSystem& sys, int a, int b);
struct BracketFit {
    int a = 0, b = 0;
    std::array<double, 3> c{};  // fitted span coefficients
    double residual = 0.0;      // Euclidean norm outside span{xi}
    Vec value;
};
std::vector<BracketFit> bracket_table(const SphereMixedSystem& sys, const Vec& p);
double involutivity_residual(const SphereMixedSystem& sys, const Vec& p);
// max over (a,b) of the component of nabla_{xi_a} xi_b outside span{xi}
double total_geodesy_residual(const SphereMixedSystem& sys, const Vec& p,
                              const DiffParams& d = {});
// max |K - 1| over sampled non-degenerate planes inside span{xi}
double leaf_curvature_deviation(const SphereMixedSystem& sys, const Vec& p, std::uint64_t seed,
                                int count);
// min over witnesses X (non-lightlike, orthogonal to all xi) of
// |(nabla_X phi_a) X| / |g(X,X)|; bounded away from 0 because the right-hand
// side of the structure equation degenerates only on the xi directions
double phi_not_ky_ratio_min(const SphereMixedSystem& sys, int a, const Vec& p, std::uint64_t seed,
                            int count, const DiffParams& d = {});

} // namespace m3s
