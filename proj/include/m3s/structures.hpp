#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "m3s/ambient.hpp"
#include "m3s/hypersurface.hpp"

namespace m3s {

// Mixed 3-structure with exact integer data on a flat space: three (phi, xi,
// eta) triples with xi_1 spacelike and xi_2, xi_3 timelike.  Matrices act on
// column vectors, eta entries are covector coefficients.
struct FlatMixedSystem {
    int dim = 0;
    std::array<IMat, 3> phi;
    std::array<IVec, 3> xi;
    std::array<IVec, 3> eta;
    static constexpr std::array<int, 3> eps{+1, -1, -1};
};

// the 3-dimensional system with non-trivial eta kernels
FlatMixedSystem example_r3();
// block extension to R^{4n+3}: the 3-dimensional system plus the canonical
// operator triple on R^{4n}; needs n >= 1
FlatMixedSystem example_flat(int n);

// every defining relation as an exact integer identity; residual 0 expected
std::vector<AlgebraCheck> check_definition1_flat(const FlatMixedSystem& sys);

// Structure induced on the pseudo-sphere S^{4n+3} c R^{4n+4} by the canonical
// operator triple: xi_a = -J_a p, eta_a = g(., xi_a), phi_a = tangential part
// of J_a.  All fields are given ambient extensions chosen so that xi_a is
// linear (exact brackets) and eta_a has linear coefficients (exact d eta).
class SphereMixedSystem {
public:
    explicit SphereMixedSystem(int n);

    const Hypersurface& surface() const { return m_; }
    const ParaHypercomplexTriple& ambient_triple() const { return triple_; }
    const Mat& j(int a) const { return jd_[static_cast<std::size_t>(a)]; }
    int n() const { return n_; }
    int eps(int a) const { return ParaHypercomplexTriple::eps[static_cast<std::size_t>(a)]; }

    Vec xi(int a, const Vec& q) const;
    VectorField xi_field(int a) const;
    double eta(int a, const Vec& q, const Vec& x) const;
    Vec phi(int a, const Vec& q, const Vec& x) const;
    VectorField phi_of(int a, VectorField w) const;

    // adds amount * dx^1 to eta_1 everywhere the 1-form is consulted (fault
    // injection for the reporting pipeline; phi and xi stay exact)
    void set_eta_fault(double amount) { eta_fault_ = amount; }
    double eta_fault() const { return eta_fault_; }

private:
    int n_;
    Hypersurface m_;
    ParaHypercomplexTriple triple_;
    std::array<Mat, 3> jd_;
    double eta_fault_ = 0.0;
};

// Defining relations evaluated at p on tangent probe vectors; returns
// (relation label, residual) pairs.
std::vector<std::pair<std::string, double>> definition1_residuals(const SphereMixedSystem& sys,
                                                                  const Vec& p,
                                                                  std::span<const Vec> probes);

// max of |g(phi_a X, phi_a Y) - eps_a g(X,Y) + eta_a(X) eta_a(Y)| and
// |g(X, xi_a) - eta_a(X)|
double metric_compat_residual(const SphereMixedSystem& sys, int a, const Vec& p, const Vec& x,
                              const Vec& y);

// (nabla_X phi_a) Y via the canonical extension of Y
Vec nabla_phi(const SphereMixedSystem& sys, int a, const Vec& p, const Vec& x, const Vec& y,
              const DiffParams& d = {});

// Residuals of (nabla_X phi_a) Y against the two candidate right-hand sides
//   plus:  g(X,Y) xi_a - eta_a(Y) X
//   minus: g(phi_a X, phi_a Y) xi_a + eta_a(Y) phi_a^2 X
// The two differ by the factor eps_a, so they coincide for a = 1.
std::pair<double, double> structure_equation_residuals(const SphereMixedSystem& sys, int a,
                                                       const Vec& p, const Vec& x, const Vec& y,
                                                       const DiffParams& d = {});

// N_phi(X,Y) = phi^2 [X,Y] + [phi X, phi Y] - phi [phi X, Y] - phi [X, phi Y]
// on canonical extensions
Vec nijenhuis(const SphereMixedSystem& sys, int a, const Vec& p, const Vec& x, const Vec& y,
              const DiffParams& d = {});

double fundamental_two_form(const SphereMixedSystem& sys, int a, const Vec& p, const Vec& x,
                            const Vec& y);

// frame adapted to the structure: n blocks {E_i, phi_1 E_i, phi_2 E_i,
// phi_3 E_i} followed by {xi_1, xi_2, xi_3}; for n = 0 exactly the xi triple
Frame build_structured_frame(const SphereMixedSystem& sys, const Vec& p, std::uint64_t seed);

} // namespace m3s
