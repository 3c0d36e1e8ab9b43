#include "m3s/structures.hpp"

#include <cmath>
#include <cstdlib>

#include "m3s/errors.hpp"
#include "m3s/rng.hpp"

namespace m3s {

namespace {

constexpr std::array<std::array<int, 3>, 3> k_even_perms{{{0, 1, 2}, {1, 2, 0}, {2, 0, 1}}};

int64_t max_abs(const IMat& m) { return m.size() == 0 ? 0 : m.cwiseAbs().maxCoeff(); }
int64_t max_abs(const IVec& v) { return v.size() == 0 ? 0 : v.cwiseAbs().maxCoeff(); }

std::string rel(int a) { return std::to_string(a + 1); }

} // namespace

FlatMixedSystem example_r3() {
    FlatMixedSystem s;
    s.dim = 3;
    for (auto& m : s.phi) m = IMat::Zero(3, 3);
    s.phi[0](0, 2) = 1;
    s.phi[0](2, 0) = -1;
    s.phi[1](1, 2) = 1;
    s.phi[1](2, 1) = 1;
    s.phi[2](0, 1) = -1;
    s.phi[2](1, 0) = -1;
    s.xi[0] = IVec::Zero(3);
    s.xi[0](1) = 1;
    s.xi[1] = IVec::Zero(3);
    s.xi[1](0) = 1;
    s.xi[2] = IVec::Zero(3);
    s.xi[2](2) = 1;
    s.eta[0] = IVec::Zero(3);
    s.eta[0](1) = 1;
    s.eta[1] = IVec::Zero(3);
    s.eta[1](0) = -1;
    s.eta[2] = IVec::Zero(3);
    s.eta[2](2) = -1;
    return s;
}

FlatMixedSystem example_flat(int n) {
    if (n < 1) throw ConfigError("example_flat: block extension needs n >= 1");
    const FlatMixedSystem base = example_r3();
    const ParaHypercomplexTriple j = canonical_para_hypercomplex(4 * n);
    FlatMixedSystem s;
    s.dim = 4 * n + 3;
    for (int a = 0; a < 3; ++a) {
        s.phi[a] = IMat::Zero(s.dim, s.dim);
        s.phi[a].topLeftCorner(3, 3) = base.phi[a];
        s.phi[a].bottomRightCorner(4 * n, 4 * n) = j.j[static_cast<std::size_t>(a)].matrix;
        s.xi[a] = IVec::Zero(s.dim);
        s.xi[a].head(3) = base.xi[a];
        s.eta[a] = IVec::Zero(s.dim);
        s.eta[a].head(3) = base.eta[a];
    }
    return s;
}

std::vector<AlgebraCheck> check_definition1_flat(const FlatMixedSystem& sys) {
    std::vector<AlgebraCheck> out;
    const auto& eps = FlatMixedSystem::eps;
    const IMat id = IMat::Identity(sys.dim, sys.dim);
    for (int a = 0; a < 3; ++a) {
        out.push_back({"eta" + rel(a) + "(xi" + rel(a) + ") - eps",
                       std::abs(sys.eta[a].dot(sys.xi[a]) - eps[a])});
        out.push_back({"phi" + rel(a) + "^2 + eps*id - xi@eta",
                       max_abs(IMat(sys.phi[a] * sys.phi[a] + eps[a] * id -
                                    sys.xi[a] * sys.eta[a].transpose()))});
    }
    for (const auto& perm : k_even_perms) {
        const int a = perm[0], b = perm[1], c = perm[2];
        out.push_back({"eta" + rel(a) + "(xi" + rel(b) + ")", std::abs(sys.eta[a].dot(sys.xi[b]))});
        out.push_back({"eta" + rel(b) + "(xi" + rel(a) + ")", std::abs(sys.eta[b].dot(sys.xi[a]))});
        out.push_back({"phi" + rel(a) + " xi" + rel(b) + " - eps xi" + rel(c),
                       max_abs(IVec(sys.phi[a] * sys.xi[b] - eps[c] * sys.xi[c]))});
        out.push_back({"phi" + rel(b) + " xi" + rel(a) + " + eps xi" + rel(c),
                       max_abs(IVec(sys.phi[b] * sys.xi[a] + eps[c] * sys.xi[c]))});
        out.push_back({"eta" + rel(a) + " phi" + rel(b) + " - eps eta" + rel(c),
                       max_abs(IVec(sys.phi[b].transpose() * sys.eta[a] - eps[c] * sys.eta[c]))});
        out.push_back({"eta" + rel(b) + " phi" + rel(a) + " + eps eta" + rel(c),
                       max_abs(IVec(sys.phi[a].transpose() * sys.eta[b] + eps[c] * sys.eta[c]))});
        out.push_back({"phi" + rel(a) + " phi" + rel(b) + " - xi@eta - eps phi" + rel(c),
                       max_abs(IMat(sys.phi[a] * sys.phi[b] - sys.xi[a] * sys.eta[b].transpose() -
                                    eps[c] * sys.phi[c]))});
        out.push_back({"-phi" + rel(b) + " phi" + rel(a) + " + xi@eta - eps phi" + rel(c),
                       max_abs(IMat(-(sys.phi[b] * sys.phi[a]) +
                                    sys.xi[b] * sys.eta[a].transpose() - eps[c] * sys.phi[c]))});
    }
    return out;
}

SphereMixedSystem::SphereMixedSystem(int n)
    : n_(n), m_(Hypersurface::pseudo_sphere(n)), triple_(canonical_para_hypercomplex(4 * n + 4)) {
    for (int a = 0; a < 3; ++a)
        jd_[static_cast<std::size_t>(a)] =
            triple_.j[static_cast<std::size_t>(a)].matrix.cast<double>();
}

Vec SphereMixedSystem::xi(int a, const Vec& q) const { return -(j(a) * q); }

VectorField SphereMixedSystem::xi_field(int a) const {
    return [this, a](const Vec& q) { return xi(a, q); };
}

double SphereMixedSystem::eta(int a, const Vec& q, const Vec& x) const {
    double v = m_.metric(x, xi(a, q));
    if (a == 0 && eta_fault_ != 0.0) v += eta_fault_ * x[0];
    return v;
}

Vec SphereMixedSystem::phi(int a, const Vec& q, const Vec& x) const {
    const Vec jx = j(a) * x;
    const double qq = m_.metric(q, q);
    return jx - (m_.metric(jx, q) / qq) * q;
}

VectorField SphereMixedSystem::phi_of(int a, VectorField w) const {
    return [this, a, w = std::move(w)](const Vec& q) { return phi(a, q, w(q)); };
}

std::vector<std::pair<std::string, double>> definition1_residuals(const SphereMixedSystem& sys,
                                                                  const Vec& p,
                                                                  std::span<const Vec> probes) {
    std::vector<std::pair<std::string, double>> out;
    std::array<Vec, 3> xi;
    for (int a = 0; a < 3; ++a) xi[static_cast<std::size_t>(a)] = sys.xi(a, p);
    const auto eps = [&](int a) { return static_cast<double>(sys.eps(a)); };
    const auto eta = [&](int a, const Vec& x) { return sys.eta(a, p, x); };
    const auto phi = [&](int a, const Vec& x) { return sys.phi(a, p, x); };

    for (int a = 0; a < 3; ++a) {
        out.emplace_back("eta" + rel(a) + "(xi" + rel(a) + ") - eps",
                         std::abs(eta(a, xi[static_cast<std::size_t>(a)]) - eps(a)));
        double worst = 0.0;
        for (const Vec& x : probes)
            worst = std::max(worst,
                             (phi(a, phi(a, x)) + eps(a) * x - eta(a, x) * xi[static_cast<std::size_t>(a)]).norm());
        out.emplace_back("phi" + rel(a) + "^2 + eps - eta@xi", worst);
    }
    for (const auto& perm : k_even_perms) {
        const int a = perm[0], b = perm[1], c = perm[2];
        const Vec &xa = xi[static_cast<std::size_t>(a)], &xb = xi[static_cast<std::size_t>(b)],
                  &xc = xi[static_cast<std::size_t>(c)];
        out.emplace_back("eta" + rel(a) + "(xi" + rel(b) + ")", std::abs(eta(a, xb)));
        out.emplace_back("eta" + rel(b) + "(xi" + rel(a) + ")", std::abs(eta(b, xa)));
        out.emplace_back("phi" + rel(a) + " xi" + rel(b) + " - eps xi" + rel(c),
                         (phi(a, xb) - eps(c) * xc).norm());
        out.emplace_back("phi" + rel(b) + " xi" + rel(a) + " + eps xi" + rel(c),
                         (phi(b, xa) + eps(c) * xc).norm());
        double r_eta_ab = 0.0, r_eta_ba = 0.0, r_phi_ab = 0.0, r_phi_ba = 0.0;
        for (const Vec& x : probes) {
            r_eta_ab = std::max(r_eta_ab, std::abs(eta(a, phi(b, x)) - eps(c) * eta(c, x)));
            r_eta_ba = std::max(r_eta_ba, std::abs(eta(b, phi(a, x)) + eps(c) * eta(c, x)));
            r_phi_ab = std::max(r_phi_ab,
                                (phi(a, phi(b, x)) - eta(b, x) * xa - eps(c) * phi(c, x)).norm());
            r_phi_ba = std::max(r_phi_ba,
                                (-phi(b, phi(a, x)) + eta(a, x) * xb - eps(c) * phi(c, x)).norm());
        }
        out.emplace_back("eta" + rel(a) + " o phi" + rel(b) + " - eps eta" + rel(c), r_eta_ab);
        out.emplace_back("eta" + rel(b) + " o phi" + rel(a) + " + eps eta" + rel(c), r_eta_ba);
        out.emplace_back("phi" + rel(a) + " phi" + rel(b) + " - eta@xi - eps phi" + rel(c), r_phi_ab);
        out.emplace_back("-phi" + rel(b) + " phi" + rel(a) + " + eta@xi - eps phi" + rel(c), r_phi_ba);
    }
    return out;
}

double metric_compat_residual(const SphereMixedSystem& sys, int a, const Vec& p, const Vec& x,
                              const Vec& y) {
    const Hypersurface& m = sys.surface();
    const double r1 = std::abs(m.metric(sys.phi(a, p, x), sys.phi(a, p, y)) -
                               sys.eps(a) * m.metric(x, y) +
                               sys.eta(a, p, x) * sys.eta(a, p, y));
    const double r2 = std::abs(m.metric(x, sys.xi(a, p)) - sys.eta(a, p, x));
    return std::max(r1, r2);
}

Vec nabla_phi(const SphereMixedSystem& sys, int a, const Vec& p, const Vec& x, const Vec& y,
              const DiffParams& d) {
    const Hypersurface& m = sys.surface();
    const VectorField ey = m.extend_canonical(y);
    const Vec t1 = m.covariant_derivative(sys.phi_of(a, ey), p, x, d);
    const Vec t2 = sys.phi(a, p, m.covariant_derivative(ey, p, x, d));
    return t1 - t2;
}

std::pair<double, double> structure_equation_residuals(const SphereMixedSystem& sys, int a,
                                                       const Vec& p, const Vec& x, const Vec& y,
                                                       const DiffParams& d) {
    const Hypersurface& m = sys.surface();
    const Vec lhs = nabla_phi(sys, a, p, x, y, d);
    const Vec xi = sys.xi(a, p);
    const Vec phix = sys.phi(a, p, x);
    const Vec plus = m.metric(x, y) * xi - sys.eta(a, p, y) * x;
    const Vec minus =
        m.metric(phix, sys.phi(a, p, y)) * xi + sys.eta(a, p, y) * sys.phi(a, p, phix);
    return {(lhs - plus).norm(), (lhs - minus).norm()};
}

Vec nijenhuis(const SphereMixedSystem& sys, int a, const Vec& p, const Vec& x, const Vec& y,
              const DiffParams& d) {
    const Hypersurface& m = sys.surface();
    const VectorField ex = m.extend_canonical(x);
    const VectorField ey = m.extend_canonical(y);
    const VectorField px = sys.phi_of(a, ex);
    const VectorField py = sys.phi_of(a, ey);
    const Vec b_xy = m.lie_bracket(ex, ey, p, d);
    const Vec b_pp = m.lie_bracket(px, py, p, d);
    const Vec b_px = m.lie_bracket(px, ey, p, d);
    const Vec b_xp = m.lie_bracket(ex, py, p, d);
    return sys.phi(a, p, sys.phi(a, p, b_xy)) + b_pp - sys.phi(a, p, b_px) - sys.phi(a, p, b_xp);
}

double fundamental_two_form(const SphereMixedSystem& sys, int a, const Vec& p, const Vec& x,
                            const Vec& y) {
    return sys.surface().metric(sys.phi(a, p, x), y);
}

Frame build_structured_frame(const SphereMixedSystem& sys, const Vec& p, std::uint64_t seed) {
    const Hypersurface& m = sys.surface();
    const int dim = m.space().dim;
    std::vector<Vec> placed;
    std::vector<double> placed_signs;
    for (int a = 0; a < 3; ++a) {
        placed.push_back(sys.xi(a, p));
        placed_signs.push_back(static_cast<double>(sys.eps(a)));
    }
    Frame frame;
    Rng rng(mix_seed(seed, "structured-frame"));
    for (int block = 0; block < sys.n(); ++block) {
        Vec e;
        bool found = false;
        for (int draw = 0; draw < 100 && !found; ++draw) {
            Vec w(dim);
            for (int i = 0; i < dim; ++i) w[i] = rng.sym();
            w = m.project_tangent(p, w);
            for (int pass = 0; pass < 2; ++pass)
                for (std::size_t j = 0; j < placed.size(); ++j)
                    w -= placed_signs[j] * m.metric(w, placed[j]) * placed[j];
            const double ww = m.metric(w, w);
            if (ww > 1e-8) {
                e = w / std::sqrt(ww);
                found = true;
            }
        }
        if (!found)
            throw FrameConstructionFailure("build_structured_frame: no spacelike seed vector");
        const std::array<Vec, 4> orbit{e, sys.phi(0, p, e), sys.phi(1, p, e), sys.phi(2, p, e)};
        const std::array<double, 4> orbit_signs{1.0, 1.0, -1.0, -1.0};
        for (int k = 0; k < 4; ++k) {
            frame.vectors.push_back(orbit[static_cast<std::size_t>(k)]);
            frame.signs.push_back(orbit_signs[static_cast<std::size_t>(k)]);
            placed.push_back(orbit[static_cast<std::size_t>(k)]);
            placed_signs.push_back(orbit_signs[static_cast<std::size_t>(k)]);
        }
    }
    for (int a = 0; a < 3; ++a) {
        frame.vectors.push_back(sys.xi(a, p));
        frame.signs.push_back(static_cast<double>(sys.eps(a)));
    }
    return frame;
}

} // namespace m3s
