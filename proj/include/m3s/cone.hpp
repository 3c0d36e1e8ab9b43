#pragma once

#include <vector>

#include "m3s/ambient.hpp"
#include "m3s/hypersurface.hpp"
#include "m3s/structures.hpp"

namespace m3s {

// Metric cone over the hypersurface: points (p, r) with r > 0 and metric
// dr^2 + r^2 g.  Tangent vectors split into a horizontal part (tangent to the
// slice at p) and a radial coefficient.
struct ConePoint {
    Vec p;
    double r = 1.0;
};

struct ConeVec {
    Vec h;
    double a = 0.0;
};

// Vector field on the cone built from finitely many separated terms
// c * r^k * Y(p) and c * r^k * s(p) * d_r.  Radial derivatives of such fields
// are taken exactly; only slice directions ever touch finite differences.
struct ConeField {
    struct HTerm {
        double c = 1.0;
        int rpow = 0;
        VectorField y;
    };
    struct RTerm {
        double c = 1.0;
        int rpow = 0;
        ScalarField s;
    };
    std::vector<HTerm> hterms;
    std::vector<RTerm> rterms;
};

ConeVec cone_eval(const ConeField& f, const ConePoint& cp);
double cone_metric(const Hypersurface& m, const ConePoint& cp, const ConeVec& u, const ConeVec& v);
double cone_vec_norm(const ConeVec& v);

ConeField lift_field(VectorField y);          // r^0 horizontal lift
ConeField radial_unit_field();                // d_r
ConeField euler_field();                      // Phi = r d_r

// Levi-Civita connection of the cone metric:
//   nabla_X Y    = nabla^M_X Y - r g(X,Y) d_r
//   nabla_{d_r} X = nabla_X d_r = X / r,  nabla_{d_r} d_r = 0
ConeVec cone_connection(const Hypersurface& m, const ConeVec& u, const ConeField& v,
                        const ConePoint& cp, const DiffParams& d = {});

// The two sign conventions for extending the sphere structure to the cone.
// `displayed` maps X -> phi X - eta(X) Phi, Phi -> xi: it satisfies the
// operator algebra and metric compatibility but is not parallel (it conjugates
// the constant ambient triple by reflection through the tangent space).
// `parallel` maps X -> phi X + eta(X) Phi, Phi -> -xi: under y = r p it is
// exactly the constant ambient operator, hence parallel and r-independent.
enum class ConeBranch { displayed, parallel };

ConeVec cone_apply(const SphereMixedSystem& sys, ConeBranch branch, int a, const ConePoint& cp,
                   const ConeVec& u);
ConeField cone_apply_field(const SphereMixedSystem& sys, ConeBranch branch, int a,
                           const ConeField& f);

// |nabla_U (J V) - J (nabla_U V)| at cp
double cone_parallel_residual(const SphereMixedSystem& sys, ConeBranch branch, int a,
                              const ConePoint& cp, const ConeVec& u, const ConeField& v,
                              const DiffParams& d = {});

} // namespace m3s
