#include "m3s/hypersurface.hpp"

#include <cmath>
#include <cstdlib>

#include "m3s/errors.hpp"
#include "m3s/rng.hpp"

namespace m3s {

namespace {

constexpr double k_null_gradient = 1e-8;
constexpr double k_degenerate_plane = 1e-8;
constexpr double k_sample_reject = 0.1;
constexpr int k_max_rejections = 100000;
constexpr int k_max_frame_draws = 100;
constexpr double k_null_speed = 1e-10;

double stencil(double m2, double m1, double p1, double p2, double h) {
    return (m2 - 8.0 * m1 + 8.0 * p1 - p2) / (12.0 * h);
}

} // namespace

double derivative_at_zero(const std::function<double(double)>& f, double h) {
    const double a2 = f(-2.0 * h), a1 = f(-h), b1 = f(h), b2 = f(2.0 * h);
    const double c1 = f(-0.5 * h), c2 = f(0.5 * h);
    const double dh = stencil(a2, a1, b1, b2, h);
    const double dh2 = stencil(a1, c1, c2, b1, 0.5 * h);
    return (16.0 * dh2 - dh) / 15.0;
}

Vec derivative_at_zero(const std::function<Vec(double)>& f, double h) {
    const Vec a2 = f(-2.0 * h), a1 = f(-h), b1 = f(h), b2 = f(2.0 * h);
    const Vec c1 = f(-0.5 * h), c2 = f(0.5 * h);
    const Vec dh = (a2 - 8.0 * a1 + 8.0 * b1 - b2) / (12.0 * h);
    const Vec dh2 = (a1 - 8.0 * c1 + 8.0 * c2 - b1) / (6.0 * h);
    return (16.0 * dh2 - dh) / 15.0;
}

Hypersurface Hypersurface::pseudo_sphere(int n) {
    if (n < 0) throw ConfigError("pseudo_sphere: n must be >= 0");
    Hypersurface m;
    m.space_ = SemiEuclideanSpace::make(4 * n + 4, 2 * n + 2);
    m.flavor_ = Flavor::pseudo_sphere;
    m.level_ = 1.0;
    const SemiEuclideanSpace sp = m.space_;
    m.f_ = [sp](const Vec& q) { return sp.inner(q, q); };
    // metric gradient (sharp of df), not the coordinate differential
    m.grad_ = [](const Vec& q) { return Vec(2.0 * q); };
    return m;
}

Hypersurface Hypersurface::level_set(SemiEuclideanSpace space, ScalarField f, VectorField grad,
                                     double level) {
    Hypersurface m;
    m.space_ = space;
    m.flavor_ = Flavor::generic;
    m.level_ = level;
    m.f_ = std::move(f);
    m.grad_ = std::move(grad);
    return m;
}

bool Hypersurface::on_surface(const Vec& p, double tol) const {
    return std::abs(f_(p) - level_) <= tol;
}

Vec Hypersurface::unit_normal(const Vec& p) const {
    const Vec g = grad_(p);
    const double gg = space_.inner(g, g);
    if (gg <= k_null_gradient)
        throw NullGradient("unit_normal: gradient is not spacelike at the given point");
    return g / std::sqrt(gg);
}

Vec Hypersurface::project_tangent(const Vec& p, const Vec& v) const {
    const Vec n = unit_normal(p);
    return v - space_.inner(v, n) * n;
}

std::vector<Vec> Hypersurface::sample_points(std::uint64_t seed, int count) const {
    if (flavor_ != Flavor::pseudo_sphere)
        throw Error("sample_points: generic level sets need a user-supplied sampler");
    Rng rng(seed);
    std::vector<Vec> out;
    out.reserve(static_cast<std::size_t>(count));
    int rejections = 0;
    while (static_cast<int>(out.size()) < count) {
        Vec x(space_.dim);
        for (int i = 0; i < space_.dim; ++i) x[i] = rng.sym();
        const double q = space_.inner(x, x);
        if (q <= k_sample_reject) {
            if (++rejections >= k_max_rejections)
                throw SamplingExhausted("sample_points: rejection cap reached");
            continue;
        }
        rejections = 0;
        out.push_back(x / std::sqrt(q));
    }
    return out;
}

Vec Hypersurface::curve(const Vec& p, const Vec& x, double t) const {
    if (flavor_ != Flavor::pseudo_sphere) return p + t * x;
    const Vec u = p + t * x;
    const double q = space_.inner(u, u);
    if (q <= k_null_gradient) throw ChartError("curve: left the chart of the pseudo-sphere");
    return u / std::sqrt(q);
}

Vec Hypersurface::extend_canonical_at(const Vec& v, const Vec& q) const {
    const Vec g = grad_(q);
    const double gg = space_.inner(g, g);
    if (std::abs(gg) <= k_null_gradient)
        throw NullGradient("extend_canonical: degenerate gradient");
    return v - (space_.inner(v, g) / gg) * g;
}

VectorField Hypersurface::extend_canonical(const Vec& v) const {
    return [this, v](const Vec& q) { return extend_canonical_at(v, q); };
}

double Hypersurface::directional_derivative(const ScalarField& s, const Vec& p, const Vec& x,
                                            const DiffParams& d) const {
    return derivative_at_zero(
        std::function<double(double)>([&](double t) { return s(curve(p, x, t)); }), d.step);
}

Vec Hypersurface::ambient_derivative(const VectorField& y, const Vec& p, const Vec& x,
                                     const DiffParams& d) const {
    return derivative_at_zero(
        std::function<Vec(double)>([&](double t) { return y(curve(p, x, t)); }), d.step);
}

Vec Hypersurface::covariant_derivative(const VectorField& y, const Vec& p, const Vec& x,
                                       const DiffParams& d) const {
    return project_tangent(p, ambient_derivative(y, p, x, d));
}

Vec Hypersurface::lie_bracket(const VectorField& a, const VectorField& b, const Vec& p,
                              const DiffParams& d) const {
    const Vec ap = a(p), bp = b(p);
    const Vec dab = derivative_at_zero(
        std::function<Vec(double)>([&](double t) { return b(p + t * ap); }), d.step);
    const Vec dba = derivative_at_zero(
        std::function<Vec(double)>([&](double t) { return a(p + t * bp); }), d.step);
    return dab - dba;
}

Vec Hypersurface::shape_operator(const Vec& p, const Vec& x, const DiffParams& d) const {
    const auto nf = [this](const Vec& q) { return unit_normal(q); };
    return -project_tangent(p, ambient_derivative(nf, p, x, d));
}

Vec Hypersurface::curvature(const Vec& p, const Vec& x, const Vec& y, const Vec& z,
                            const DiffParams& d) const {
    const Vec ax = shape_operator(p, x, d);
    const Vec ay = shape_operator(p, y, d);
    return space_.inner(ay, z) * ax - space_.inner(ax, z) * ay;
}

Vec Hypersurface::curvature_via_derivatives(const Vec& p, const Vec& x, const Vec& y, const Vec& z,
                                            const DiffParams& d) const {
    const VectorField ex = extend_canonical(x);
    const VectorField ey = extend_canonical(y);
    const VectorField ez = extend_canonical(z);
    // field q -> nabla_{dir(q)} f |_q, differentiated again along the curve
    const auto covd_field = [this, d](const VectorField& dir, const VectorField& f) {
        return VectorField([this, d, dir, f](const Vec& q) {
            const Vec v = dir(q);
            const Vec der = derivative_at_zero(
                std::function<Vec(double)>([&](double t) { return f(q + t * v); }), d.step);
            return project_tangent(q, der);
        });
    };
    const Vec t1 = covariant_derivative(covd_field(ey, ez), p, x, d);
    const Vec t2 = covariant_derivative(covd_field(ex, ez), p, y, d);
    const Vec br = project_tangent(p, lie_bracket(ex, ey, p, d));
    const Vec t3 = covariant_derivative(ez, p, br, d);
    return t1 - t2 - t3;
}

double Hypersurface::ricci(const Frame& frame, const Vec& p, const Vec& x, const Vec& y,
                           const DiffParams& d) const {
    const Vec ax = shape_operator(p, x, d);
    const double hxy = space_.inner(ax, y);
    double sum = 0.0;
    for (std::size_t i = 0; i < frame.vectors.size(); ++i) {
        const Vec& e = frame.vectors[i];
        const Vec ae = shape_operator(p, e, d);
        // inner(R(e_i, x) y, e_i) with R from the Gauss equation
        sum += frame.signs[i] * (hxy * space_.inner(ae, e) - space_.inner(ae, y) * space_.inner(ax, e));
    }
    return sum;
}

double Hypersurface::scalar_curvature(const Frame& frame, const Vec& p, const DiffParams& d) const {
    double sum = 0.0;
    for (std::size_t j = 0; j < frame.vectors.size(); ++j)
        sum += frame.signs[j] * ricci(frame, p, frame.vectors[j], frame.vectors[j], d);
    return sum;
}

double Hypersurface::sectional_curvature(const Vec& p, const Vec& x, const Vec& y,
                                         const DiffParams& d) const {
    const double gxx = space_.inner(x, x), gyy = space_.inner(y, y), gxy = space_.inner(x, y);
    const double denom = gxx * gyy - gxy * gxy;
    if (std::abs(denom) <= k_degenerate_plane)
        throw DegeneratePlane("sectional_curvature: plane is degenerate");
    return space_.inner(curvature(p, x, y, y, d), x) / denom;
}

Frame Hypersurface::build_frame(const Vec& p, std::uint64_t seed) const {
    std::vector<Vec> pool;
    for (int i = 0; i < space_.dim; ++i) {
        Vec e = Vec::Zero(space_.dim);
        e[i] = 1.0;
        pool.push_back(project_tangent(p, e));
    }
    Rng rng(mix_seed(seed, "frame-draws"));
    Frame frame;
    const auto orthogonalized = [&](Vec w) {
        for (int pass = 0; pass < 2; ++pass)
            for (std::size_t j = 0; j < frame.vectors.size(); ++j)
                w -= frame.signs[j] * space_.inner(w, frame.vectors[j]) * frame.vectors[j];
        return w;
    };
    while (static_cast<int>(frame.vectors.size()) < dim()) {
        int best = -1;
        double best_norm = k_null_gradient;
        Vec best_w;
        for (std::size_t c = 0; c < pool.size(); ++c) {
            const Vec w = orthogonalized(pool[c]);
            const double nn = std::abs(space_.inner(w, w));
            if (nn > best_norm) {
                best = static_cast<int>(c);
                best_norm = nn;
                best_w = w;
            }
        }
        if (best < 0) {
            int draws = 0;
            while (best < 0 && draws < k_max_frame_draws) {
                Vec x(space_.dim);
                for (int i = 0; i < space_.dim; ++i) x[i] = rng.sym();
                ++draws;
                const Vec w = orthogonalized(project_tangent(p, x));
                if (std::abs(space_.inner(w, w)) > k_null_gradient) {
                    best_w = w;
                    best = static_cast<int>(pool.size());
                    pool.push_back(x);
                }
            }
            if (best < 0)
                throw FrameConstructionFailure("build_frame: no usable candidate after 100 draws");
        }
        const double ww = space_.inner(best_w, best_w);
        frame.vectors.push_back(best_w / std::sqrt(std::abs(ww)));
        frame.signs.push_back(ww > 0.0 ? 1.0 : -1.0);
        pool.erase(pool.begin() + best);
    }
    return frame;
}

std::pair<Vec, Vec> Hypersurface::geodesic(const Vec& p, const Vec& v, double t) const {
    if (flavor_ != Flavor::pseudo_sphere)
        throw Error("geodesic: closed forms are only available for the pseudo-sphere");
    if (v.norm() == 0.0) throw Error("geodesic: zero initial velocity");
    const double sigma = space_.inner(v, v);
    if (std::abs(sigma) < k_null_speed) return {p + t * v, v};
    if (sigma > 0.0) {
        const Vec u = v / std::sqrt(sigma);
        return {std::cos(t) * p + std::sin(t) * u, -std::sin(t) * p + std::cos(t) * u};
    }
    const Vec u = v / std::sqrt(-sigma);
    return {std::cosh(t) * p + std::sinh(t) * u, std::sinh(t) * p + std::cosh(t) * u};
}

Vec Hypersurface::geodesic_acceleration(const Vec& p, const Vec& v, double t) const {
    if (v.norm() == 0.0) throw Error("geodesic: zero initial velocity");
    const double sigma = space_.inner(v, v);
    if (std::abs(sigma) < k_null_speed) return Vec::Zero(space_.dim);
    if (sigma > 0.0) {
        const Vec u = v / std::sqrt(sigma);
        return -std::cos(t) * p - std::sin(t) * u;
    }
    const Vec u = v / std::sqrt(-sigma);
    return std::cosh(t) * p + std::sinh(t) * u;
}

} // namespace m3s
