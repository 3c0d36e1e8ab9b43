#include "m3s/cone.hpp"

#include <cmath>

namespace m3s {

namespace {

double rpow(double r, int k) { return std::pow(r, k); }

} // namespace

ConeVec cone_eval(const ConeField& f, const ConePoint& cp) {
    ConeVec out{Vec::Zero(cp.p.size()), 0.0};
    for (const auto& t : f.hterms) out.h += t.c * rpow(cp.r, t.rpow) * t.y(cp.p);
    for (const auto& t : f.rterms) out.a += t.c * rpow(cp.r, t.rpow) * t.s(cp.p);
    return out;
}

double cone_metric(const Hypersurface& m, const ConePoint& cp, const ConeVec& u,
                   const ConeVec& v) {
    return u.a * v.a + cp.r * cp.r * m.metric(u.h, v.h);
}

double cone_vec_norm(const ConeVec& v) { return std::sqrt(v.h.squaredNorm() + v.a * v.a); }

ConeField lift_field(VectorField y) {
    ConeField f;
    f.hterms.push_back({1.0, 0, std::move(y)});
    return f;
}

ConeField radial_unit_field() {
    ConeField f;
    f.rterms.push_back({1.0, 0, [](const Vec&) { return 1.0; }});
    return f;
}

ConeField euler_field() {
    ConeField f;
    f.rterms.push_back({1.0, 1, [](const Vec&) { return 1.0; }});
    return f;
}

ConeVec cone_connection(const Hypersurface& m, const ConeVec& u, const ConeField& v,
                        const ConePoint& cp, const DiffParams& d) {
    const double r = cp.r;
    ConeVec out{Vec::Zero(cp.p.size()), 0.0};
    for (const auto& t : v.hterms) {
        const Vec yp = t.y(cp.p);
        // radial direction: d_r(c r^k) Y + c r^k Y / r
        out.h += u.a * t.c * (t.rpow + 1) * rpow(r, t.rpow - 1) * yp;
        out.h += t.c * rpow(r, t.rpow) * m.covariant_derivative(t.y, cp.p, u.h, d);
        out.a -= t.c * rpow(r, t.rpow + 1) * m.metric(u.h, yp);
    }
    for (const auto& t : v.rterms) {
        const double sp = t.s(cp.p);
        out.a += u.a * t.c * t.rpow * rpow(r, t.rpow - 1) * sp;
        out.a += t.c * rpow(r, t.rpow) * m.directional_derivative(t.s, cp.p, u.h, d);
        out.h += t.c * rpow(r, t.rpow - 1) * sp * u.h;
    }
    return out;
}

ConeVec cone_apply(const SphereMixedSystem& sys, ConeBranch branch, int a, const ConePoint& cp,
                   const ConeVec& u) {
    const double sgn = branch == ConeBranch::displayed ? 1.0 : -1.0;
    ConeVec out;
    out.h = sys.phi(a, cp.p, u.h) + sgn * (u.a / cp.r) * sys.xi(a, cp.p);
    out.a = -sgn * cp.r * sys.eta(a, cp.p, u.h);
    return out;
}

ConeField cone_apply_field(const SphereMixedSystem& sys, ConeBranch branch, int a,
                           const ConeField& f) {
    const double sgn = branch == ConeBranch::displayed ? 1.0 : -1.0;
    ConeField out;
    for (const auto& t : f.hterms) {
        out.hterms.push_back({t.c, t.rpow, sys.phi_of(a, t.y)});
        out.rterms.push_back(
            {-sgn * t.c, t.rpow + 1,
             [&sys, a, y = t.y](const Vec& q) { return sys.eta(a, q, y(q)); }});
    }
    for (const auto& t : f.rterms) {
        out.hterms.push_back({sgn * t.c, t.rpow - 1, [&sys, a, s = t.s](const Vec& q) {
                                  return Vec(s(q) * sys.xi(a, q));
                              }});
    }
    return out;
}

double cone_parallel_residual(const SphereMixedSystem& sys, ConeBranch branch, int a,
                              const ConePoint& cp, const ConeVec& u, const ConeField& v,
                              const DiffParams& d) {
    const ConeVec lhs = cone_connection(sys.surface(), u, cone_apply_field(sys, branch, a, v), cp, d);
    const ConeVec rhs = cone_apply(sys, branch, a, cp, cone_connection(sys.surface(), u, v, cp, d));
    return cone_vec_norm({lhs.h - rhs.h, lhs.a - rhs.a});
}

} // namespace m3s
