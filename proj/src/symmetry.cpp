#include "m3s/symmetry.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>

#include "m3s/errors.hpp"
#include "m3s/rng.hpp"

namespace m3s {

namespace {

double factorial(int k) {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
}

std::vector<Vec> with_front(const Vec& x, const std::vector<Vec>& args) {
    std::vector<Vec> out;
    out.reserve(args.size() + 1);
    out.push_back(x);
    out.insert(out.end(), args.begin(), args.end());
    return out;
}

std::vector<Vec> without(const std::vector<Vec>& args, std::size_t skip) {
    std::vector<Vec> out;
    out.reserve(args.size() - 1);
    for (std::size_t i = 0; i < args.size(); ++i)
        if (i != skip) out.push_back(args[i]);
    return out;
}

} // namespace

FormField eta_field(const SphereMixedSystem& sys, int a) {
    const SemiEuclideanSpace space = sys.surface().space();
    const double fault = (a == 0) ? sys.eta_fault() : 0.0;
    return {1, [&sys, space, a, fault](const Vec& q) {
                AlternatingForm w = flat(space, sys.xi(a, q));
                if (fault != 0.0) w.raw(0) += fault;
                return w;
            }};
}

AlternatingForm d_eta_matrix(const SphereMixedSystem& sys, int a) {
    const SemiEuclideanSpace& space = sys.surface().space();
    const Mat& j = sys.j(a);
    AlternatingForm w(space.dim, 2);
    for (int i = 0; i < space.dim; ++i)
        for (int k = i + 1; k < space.dim; ++k) {
            const int idx[2] = {i, k};
            w.set_coeff(idx, 2.0 * space.sign(i) * j(i, k));
        }
    return w;
}

FormField d_eta_field(const SphereMixedSystem& sys, int a) {
    return constant_form_field(d_eta_matrix(sys, a));
}

AlternatingForm d_eta_power(const SphereMixedSystem& sys, int a, int k) {
    const int dim = sys.surface().space().dim;
    AlternatingForm acc(dim, 0);
    acc.raw(0) = 1.0;
    const AlternatingForm de = d_eta_matrix(sys, a);
    for (int i = 0; i < k; ++i) acc = acc.wedge(de);
    return acc;
}

FormField ky_family_field(const SphereMixedSystem& sys, int a, int k) {
    if (k < 0 || 2 * k + 1 > sys.surface().dim())
        throw ConfigError("ky_family_field: need 0 <= k <= 2n+1");
    const FormField eta = eta_field(sys, a);
    const AlternatingForm pow = d_eta_power(sys, a, k);
    return {2 * k + 1, [eta, pow](const Vec& q) { return eta.at(q).wedge(pow); }};
}

FormField constant_form_field(AlternatingForm w) {
    const int rank = w.rank();
    return {rank, [w = std::move(w)](const Vec&) { return w; }};
}

FormField omega_field(const SphereMixedSystem& sys, int a) {
    const SemiEuclideanSpace space = sys.surface().space();
    return {2, [&sys, space, a](const Vec& q) {
                const int m = space.dim;
                std::vector<Vec> phi_e(static_cast<std::size_t>(m));
                for (int i = 0; i < m; ++i) {
                    Vec e = Vec::Zero(m);
                    e[i] = 1.0;
                    phi_e[static_cast<std::size_t>(i)] = sys.phi(a, q, e);
                }
                AlternatingForm w(m, 2);
                for (int i = 0; i < m; ++i)
                    for (int k = i + 1; k < m; ++k) {
                        const double gik = space.sign(k) * phi_e[static_cast<std::size_t>(i)][k];
                        const double gki = space.sign(i) * phi_e[static_cast<std::size_t>(k)][i];
                        const int idx[2] = {i, k};
                        w.set_coeff(idx, 0.5 * (gik - gki));
                    }
                return w;
            }};
}

double form_value(const FormField& w, const Vec& p, const std::vector<Vec>& args) {
    return w.at(p).eval(args);
}

double covariant_derivative_form(const Hypersurface& m, const FormField& w, const Vec& p,
                                 const Vec& x, const std::vector<Vec>& args, const DiffParams& d) {
    std::vector<VectorField> ext;
    ext.reserve(args.size());
    for (const Vec& v : args) ext.push_back(m.extend_canonical(v));
    const ScalarField s = [&w, &ext](const Vec& q) {
        std::vector<Vec> at_q;
        at_q.reserve(ext.size());
        for (const auto& e : ext) at_q.push_back(e(q));
        return w.at(q).eval(at_q);
    };
    return m.directional_derivative(s, p, x, d);
}

double exterior_derivative_value(const Hypersurface& m, const FormField& w, const Vec& p,
                                 const std::vector<Vec>& args, const DiffParams& d) {
    if (static_cast<int>(args.size()) != w.rank + 1)
        throw DimensionMismatch("exterior_derivative_value: needs rank+1 arguments");
    double sum = 0.0;
    double sign = 1.0;
    for (std::size_t i = 0; i < args.size(); ++i) {
        sum += sign * covariant_derivative_form(m, w, p, args[i], without(args, i), d);
        sign = -sign;
    }
    return sum;
}

double codifferential_value(const Hypersurface& m, const Frame& frame, const FormField& w,
                            const Vec& p, const std::vector<Vec>& args, const DiffParams& d) {
    if (w.rank == 0) return 0.0;
    double sum = 0.0;
    for (std::size_t i = 0; i < frame.vectors.size(); ++i)
        sum -= frame.signs[i] * covariant_derivative_form(m, w, p, frame.vectors[i],
                                                          with_front(frame.vectors[i], args), d);
    return sum;
}

double x_flat_wedge_codiff(const Hypersurface& m, const Frame& frame, const FormField& w,
                           const Vec& p, const Vec& x, const std::vector<Vec>& args,
                           const DiffParams& d) {
    double sum = 0.0;
    double sign = 1.0;
    for (std::size_t j = 0; j < args.size(); ++j) {
        sum += sign * m.metric(x, args[j]) * codifferential_value(m, frame, w, p, without(args, j), d);
        sign = -sign;
    }
    return sum;
}

double cky_residual(const Hypersurface& m, const Frame& frame, const FormField& w, const Vec& p,
                    const Vec& x, const std::vector<Vec>& args, const DiffParams& d,
                    const AlternatingForm* exact_d) {
    const int p_rank = w.rank;
    const double lhs = covariant_derivative_form(m, w, p, x, args, d);
    const std::vector<Vec> dargs = with_front(x, args);
    const double dterm = exact_d ? exact_d->eval(dargs)
                                 : exterior_derivative_value(m, w, p, dargs, d);
    const double dsterm = x_flat_wedge_codiff(m, frame, w, p, x, args, d);
    return std::abs(lhs - dterm / (p_rank + 1) + dsterm / (m.dim() - p_rank + 1));
}

double ky_residual(const Hypersurface& m, const FormField& w, const Vec& p, const Vec& x,
                   const std::vector<Vec>& args, const DiffParams& d,
                   const AlternatingForm* exact_d) {
    const double lhs = covariant_derivative_form(m, w, p, x, args, d);
    const std::vector<Vec> dargs = with_front(x, args);
    const double dterm = exact_d ? exact_d->eval(dargs)
                                 : exterior_derivative_value(m, w, p, dargs, d);
    return std::abs(lhs - dterm / (w.rank + 1));
}

double killing_residual(const Hypersurface& m, const VectorField& x, const Vec& p, const Vec& y,
                        const Vec& z, const DiffParams& d) {
    return std::abs(m.metric(m.covariant_derivative(x, p, y, d), z) +
                    m.metric(y, m.covariant_derivative(x, p, z, d)));
}

double lie_metric_xi_check(const SphereMixedSystem& sys, const VectorField& x, const Vec& p, int a,
                           const DiffParams& d) {
    const Hypersurface& m = sys.surface();
    const Vec xi_p = sys.xi(a, p);
    const double t1 = m.metric(m.covariant_derivative(x, p, xi_p, d), xi_p);
    const double t2 = m.metric(m.covariant_derivative(sys.xi_field(a), p, x(p), d), xi_p);
    return std::abs(2.0 * t1 - 2.0 * t2);
}

SymmetricTensorField metric_tensor_field(const Hypersurface& m) {
    const SemiEuclideanSpace space = m.space();
    return {[space](const Vec&, const Vec& x, const Vec& y) { return space.inner(x, y); }};
}

SymmetricTensorField eta_squared_field(const SphereMixedSystem& sys, int a) {
    return {[&sys, a](const Vec& q, const Vec& x, const Vec& y) {
        return sys.eta(a, q, x) * sys.eta(a, q, y);
    }};
}

SymmetricTensorField constant_symmetric_field(Mat s) {
    return {[s = std::move(s)](const Vec&, const Vec& x, const Vec& y) {
        return x.dot(s * y);
    }};
}

SymmetricTensorField associated_tensor(const Hypersurface& m, FormField w,
                                       std::uint64_t frame_seed) {
    if (w.rank < 1) throw ConfigError("associated_tensor: form rank must be >= 1");
    return {[&m, w = std::move(w), frame_seed](const Vec& q, const Vec& x, const Vec& y) {
        const Frame frame = m.build_frame(q, frame_seed);
        const AlternatingForm at_q = w.at(q);
        const int t = w.rank - 1;
        const double scale = factorial(t);
        double sum = 0.0;
        std::vector<int> tuple(static_cast<std::size_t>(t));
        for (int i = 0; i < t; ++i) tuple[static_cast<std::size_t>(i)] = i;
        const int d = static_cast<int>(frame.vectors.size());
        if (t > d) return 0.0;
        bool more = true;
        while (more) {
            double eps_tuple = 1.0;
            std::vector<Vec> args_x, args_y;
            args_x.reserve(static_cast<std::size_t>(t) + 1);
            args_x.push_back(x);
            args_y.reserve(static_cast<std::size_t>(t) + 1);
            args_y.push_back(y);
            for (int i : tuple) {
                eps_tuple *= frame.signs[static_cast<std::size_t>(i)];
                args_x.push_back(frame.vectors[static_cast<std::size_t>(i)]);
                args_y.push_back(frame.vectors[static_cast<std::size_t>(i)]);
            }
            sum += scale * eps_tuple * at_q.eval(args_x) * at_q.eval(args_y);
            more = t > 0 && next_increasing_tuple(d, tuple);
        }
        return sum;
    }};
}

double nabla_rho(const Hypersurface& m, const SymmetricTensorField& rho, const Vec& p,
                 const Vec& x, const Vec& y, const Vec& z, const DiffParams& d) {
    const VectorField ey = m.extend_canonical(y);
    const VectorField ez = m.extend_canonical(z);
    const ScalarField s = [&rho, &ey, &ez](const Vec& q) { return rho.eval(q, ey(q), ez(q)); };
    return m.directional_derivative(s, p, x, d);
}

double killing_tensor_residual(const Hypersurface& m, const SymmetricTensorField& rho,
                               const Vec& p, const Frame& frame, const DiffParams& d) {
    double worst = 0.0;
    const int n = static_cast<int>(frame.vectors.size());
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
            for (int k = j; k < n; ++k) {
                const Vec &a = frame.vectors[static_cast<std::size_t>(i)],
                          &b = frame.vectors[static_cast<std::size_t>(j)],
                          &c = frame.vectors[static_cast<std::size_t>(k)];
                const double sym = nabla_rho(m, rho, p, a, b, c, d) +
                                   nabla_rho(m, rho, p, b, c, a, d) +
                                   nabla_rho(m, rho, p, c, a, b, d);
                worst = std::max(worst, std::abs(sym));
            }
    return worst;
}

double geodesic_invariant_drift(const Hypersurface& m, const SymmetricTensorField& rho,
                                const Vec& p, const Vec& v, const std::vector<double>& times) {
    const auto [p0, v0] = m.geodesic(p, v, 0.0);
    const double k0 = rho.eval(p0, v0, v0);
    double drift = 0.0;
    for (double t : times) {
        const auto [pt, vt] = m.geodesic(p, v, t);
        drift = std::max(drift, std::abs(rho.eval(pt, vt, vt) - k0));
    }
    return drift;
}

IMat bracket_matrix(const SphereMixedSystem& sys, int a, int b) {
    const IMat& ja = sys.ambient_triple().j[static_cast<std::size_t>(a)].matrix;
    const IMat& jb = sys.ambient_triple().j[static_cast<std::size_t>(b)].matrix;
    return jb * ja - ja * jb;
}

std::vector<BracketFit> bracket_table(const SphereMixedSystem& sys, const Vec& p) {
    const Hypersurface& m = sys.surface();
    std::vector<BracketFit> out;
    for (const auto& [a, b] : {std::pair{0, 1}, std::pair{1, 2}, std::pair{2, 0}}) {
        BracketFit fit;
        fit.a = a;
        fit.b = b;
        fit.value = bracket_matrix(sys, a, b).cast<double>() * p;
        Vec rem = fit.value;
        for (int c = 0; c < 3; ++c) {
            const Vec xc = sys.xi(c, p);
            fit.c[static_cast<std::size_t>(c)] = sys.eps(c) * m.metric(fit.value, xc);
            rem -= fit.c[static_cast<std::size_t>(c)] * xc;
        }
        fit.residual = rem.norm();
        out.push_back(std::move(fit));
    }
    return out;
}

double involutivity_residual(const SphereMixedSystem& sys, const Vec& p) {
    double worst = 0.0;
    for (const auto& fit : bracket_table(sys, p)) worst = std::max(worst, fit.residual);
    return worst;
}

double total_geodesy_residual(const SphereMixedSystem& sys, const Vec& p, const DiffParams& d) {
    const Hypersurface& m = sys.surface();
    double worst = 0.0;
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
            Vec w = m.covariant_derivative(sys.xi_field(b), p, sys.xi(a, p), d);
            for (int c = 0; c < 3; ++c) {
                const Vec xc = sys.xi(c, p);
                w -= sys.eps(c) * m.metric(w, xc) * xc;
            }
            worst = std::max(worst, w.norm());
        }
    return worst;
}

double leaf_curvature_deviation(const SphereMixedSystem& sys, const Vec& p, std::uint64_t seed,
                                int count) {
    const Hypersurface& m = sys.surface();
    Rng rng(mix_seed(seed, "leaf-planes"));
    double worst = 0.0;
    int done = 0;
    int attempts = 0;
    while (done < count) {
        if (++attempts > 100 * count)
            throw FrameConstructionFailure("leaf_curvature_deviation: too many degenerate draws");
        Vec x = Vec::Zero(p.size()), y = Vec::Zero(p.size());
        for (int c = 0; c < 3; ++c) {
            x += rng.sym() * sys.xi(c, p);
            y += rng.sym() * sys.xi(c, p);
        }
        try {
            worst = std::max(worst, std::abs(m.sectional_curvature(p, x, y) - 1.0));
        } catch (const DegeneratePlane&) {
            continue;
        }
        ++done;
    }
    return worst;
}

double phi_not_ky_ratio_min(const SphereMixedSystem& sys, int a, const Vec& p, std::uint64_t seed,
                            int count, const DiffParams& d) {
    const Hypersurface& m = sys.surface();
    Rng rng(mix_seed(seed, "phi-witness"));
    double best = std::numeric_limits<double>::infinity();
    int done = 0;
    int attempts = 0;
    while (done < count) {
        if (++attempts > 100 * count)
            throw SamplingExhausted("phi_not_ky_ratio_min: rejection cap reached");
        Vec w(p.size());
        for (int i = 0; i < static_cast<int>(p.size()); ++i) w[i] = rng.sym();
        Vec x = m.project_tangent(p, w);
        for (int c = 0; c < 3; ++c) {
            const Vec xc = sys.xi(c, p);
            x -= sys.eps(c) * m.metric(x, xc) * xc;
        }
        const double gxx = m.metric(x, x);
        if (std::abs(gxx) <= 0.1) continue;
        const Vec v = nabla_phi(sys, a, p, x, x, d);
        best = std::min(best, std::sqrt(std::abs(m.metric(v, v))) / std::abs(gxx));
        ++done;
    }
    return best;
}

} // namespace m3s
