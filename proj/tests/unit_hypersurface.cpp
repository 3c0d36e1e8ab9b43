#include <doctest.h>

#include <cmath>
#include <utility>

#include "m3s/errors.hpp"
#include "m3s/hypersurface.hpp"
#include "m3s/rng.hpp"

using namespace m3s;

namespace {

Vec make_vec(std::initializer_list<double> v) {
    Vec x(static_cast<int>(v.size()));
    int i = 0;
    for (double e : v) x[i++] = e;
    return x;
}

Vec random_tangent(const Hypersurface& m, const Vec& p, Rng& rng) {
    Vec v(m.space().dim);
    for (int i = 0; i < m.space().dim; ++i) v[i] = rng.sym();
    return m.project_tangent(p, v);
}

// reference integrator for c'' = -<c', c'> c (constant speed along solutions)
std::pair<Vec, Vec> rk4_geodesic(const Hypersurface& m, Vec c, Vec v, double t, int steps) {
    const double h = t / steps;
    const auto acc = [&m](const Vec& pos, const Vec& vel) {
        return Vec(-m.metric(vel, vel) * pos);
    };
    for (int s = 0; s < steps; ++s) {
        const Vec k1p = v, k1v = acc(c, v);
        const Vec k2p = v + 0.5 * h * k1v, k2v = acc(c + 0.5 * h * k1p, v + 0.5 * h * k1v);
        const Vec k3p = v + 0.5 * h * k2v, k3v = acc(c + 0.5 * h * k2p, v + 0.5 * h * k2v);
        const Vec k4p = v + h * k3v, k4v = acc(c + h * k3p, v + h * k3v);
        c += h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
        v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    }
    return {c, v};
}

} // namespace

TEST_SUITE("hypersurface") {
    TEST_CASE("pseudo-sphere basics at n = 0") {
        const auto m = Hypersurface::pseudo_sphere(0);
        CHECK(m.space().dim == 4);
        CHECK(m.space().index == 2);
        CHECK(m.dim() == 3);
        const Vec p = make_vec({0, 0, 1, 0});
        CHECK(m.on_surface(p));
        CHECK(m.f_value(p) == 1.0);
        CHECK((m.unit_normal(p) - p).norm() == 0.0);
        // the metric gradient of <x,x> is 2x, not the sign-flipped differential
        CHECK((m.gradient(p) - 2.0 * p).norm() == 0.0);
        Rng rng(3);
        const Vec x = random_tangent(m, p, rng);
        CHECK(std::abs(m.metric(x, p)) < 1e-15);
        CHECK((m.project_tangent(p, x) - x).norm() < 1e-15);
    }

    TEST_CASE("sampling is deterministic, on-surface, and seed-sensitive") {
        const auto m = Hypersurface::pseudo_sphere(1);
        const auto a = m.sample_points(99, 7);
        const auto b = m.sample_points(99, 7);
        const auto c = m.sample_points(100, 7);
        REQUIRE(a.size() == 7);
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK((a[i] - b[i]).norm() == 0.0);
            CHECK(m.on_surface(a[i], 1e-12));
        }
        CHECK((a[0] - c[0]).norm() > 1e-3);
    }

    TEST_CASE("null gradient point is rejected") {
        const auto m = Hypersurface::pseudo_sphere(0);
        CHECK_THROWS_AS((void)m.unit_normal(make_vec({1, 0, 1, 0})), NullGradient);
    }

    TEST_CASE("curve chart rejects null rays") {
        const auto m = Hypersurface::pseudo_sphere(0);
        const Vec p = make_vec({0, 0, 1, 0});
        // p + 1.0 * e0 is exactly null
        CHECK_THROWS_AS((void)m.curve(p, make_vec({1, 0, 0, 0}), 1.0), ChartError);
    }

    TEST_CASE("sampling is only wired for the pseudo-sphere chart") {
        const auto sp = SemiEuclideanSpace::make(2, 2);
        const auto m = Hypersurface::level_set(
            sp, [sp](const Vec& q) { return sp.inner(q, q); },
            [](const Vec& q) { return Vec(2.0 * q); }, 1.0);
        CHECK_THROWS_AS((void)m.sample_points(1, 1), Error);
    }

    TEST_CASE("canonical extension is parallel at the base point") {
        const auto m = Hypersurface::pseudo_sphere(1);
        const Vec p = m.sample_points(5, 1).front();
        Rng rng(17);
        const Vec v = random_tangent(m, p, rng);
        const Vec x = random_tangent(m, p, rng);
        const auto field = m.extend_canonical(v);
        CHECK((field(p) - v).norm() < 1e-14);
        CHECK(m.covariant_derivative(field, p, x).norm() < 1e-9);
        // canonical extensions commute at the base point
        const Vec w = random_tangent(m, p, rng);
        CHECK(m.lie_bracket(field, m.extend_canonical(w), p).norm() < 1e-9);
    }

    TEST_CASE("bracket of linear fields matches the commutator") {
        const auto m = Hypersurface::pseudo_sphere(0);
        const Vec p = m.sample_points(8, 1).front();
        Mat a = Mat::Zero(4, 4), b = Mat::Zero(4, 4);
        a(0, 1) = 1;
        a(1, 0) = -1;
        a(2, 3) = 2;
        b(0, 2) = 1;
        b(2, 0) = 1;
        b(3, 1) = -1;
        const VectorField fa = [a](const Vec& q) { return Vec(a * q); };
        const VectorField fb = [b](const Vec& q) { return Vec(b * q); };
        const Vec want = (b * a - a * b) * p;
        CHECK((m.lie_bracket(fa, fb, p) - want).norm() < 1e-9);
    }

    TEST_CASE("shape operator of the unit pseudo-sphere is minus the identity") {
        const auto m = Hypersurface::pseudo_sphere(1);
        const Vec p = m.sample_points(23, 1).front();
        Rng rng(123);
        const Vec x = random_tangent(m, p, rng);
        CHECK((m.shape_operator(p, x) + x).norm() < 1e-9);
    }

    TEST_CASE("constant curvature one") {
        const auto m = Hypersurface::pseudo_sphere(1);
        const Vec p = m.sample_points(31, 1).front();
        Rng rng(131);
        const Vec x = random_tangent(m, p, rng), y = random_tangent(m, p, rng),
                  z = random_tangent(m, p, rng);
        const Vec want = m.metric(y, z) * x - m.metric(x, z) * y;
        CHECK((m.curvature(p, x, y, z) - want).norm() < 1e-8);
        CHECK((m.curvature_via_derivatives(p, x.normalized(), y.normalized(), z.normalized()) -
               (m.metric(y.normalized(), z.normalized()) * x.normalized() -
                m.metric(x.normalized(), z.normalized()) * y.normalized()))
                  .norm() < 1e-5);
    }

    TEST_CASE("generic level set: quadric of radius sqrt(2) has curvature 1/2") {
        const auto sp = SemiEuclideanSpace::make(4, 2);
        const auto m = Hypersurface::level_set(
            sp, [sp](const Vec& q) { return sp.inner(q, q); },
            [](const Vec& q) { return Vec(2.0 * q); }, 2.0);
        CHECK(m.flavor() == Hypersurface::Flavor::generic);
        const Vec p = make_vec({0, 0, std::sqrt(2.0), 0});
        CHECK(m.on_surface(p, 1e-12));
        // spacelike-timelike coordinate plane tangent at p
        CHECK(m.sectional_curvature(p, make_vec({0, 0, 0, 1}), make_vec({1, 0, 0, 0})) ==
              doctest::Approx(0.5).epsilon(1e-6));
        const auto f = m.build_frame(p, 77);
        CHECK(m.scalar_curvature(f, p) == doctest::Approx(0.5 * 3.0 * 2.0).epsilon(1e-5));
    }

    TEST_CASE("frame construction: pseudo-orthonormal with split signature") {
        for (int n : {0, 1}) {
            const auto m = Hypersurface::pseudo_sphere(n);
            const Vec p = m.sample_points(47 + static_cast<std::uint64_t>(n), 1).front();
            const auto f = m.build_frame(p, 13);
            REQUIRE(static_cast<int>(f.vectors.size()) == m.dim());
            int plus = 0, minus = 0;
            for (std::size_t i = 0; i < f.vectors.size(); ++i) {
                (f.signs[i] > 0 ? plus : minus) += 1;
                for (std::size_t j = 0; j < f.vectors.size(); ++j) {
                    const double want = i == j ? f.signs[i] : 0.0;
                    CHECK(std::abs(m.metric(f.vectors[i], f.vectors[j]) - want) < 1e-9);
                }
                CHECK(std::abs(m.metric(f.vectors[i], p)) < 1e-9);
            }
            CHECK(plus == 2 * n + 1);
            CHECK(minus == 2 * n + 2);
        }
    }

    TEST_CASE("sectional curvature rejects degenerate planes") {
        const auto m = Hypersurface::pseudo_sphere(0);
        const Vec p = make_vec({0, 0, 1, 0});
        // e0 + e3 is null and orthogonal to e1: the plane metric is singular
        CHECK_THROWS_AS((void)m.sectional_curvature(p, make_vec({1, 0, 0, 1}),
                                                    make_vec({0, 1, 0, 0})),
                        DegeneratePlane);
    }

    TEST_CASE("closed-form geodesics match a reference integrator") {
        const auto m = Hypersurface::pseudo_sphere(1);
        const Vec p = m.sample_points(61, 1).front();
        Rng rng(161);
        for (int trial = 0; trial < 6; ++trial) {
            const Vec v = random_tangent(m, p, rng);
            const double sig = m.metric(v, v);
            if (std::abs(sig) < 0.2) continue;
            // geodesic() reparametrizes to unit speed, so hand the integrator
            // the same normalized velocity
            const Vec u = v / std::sqrt(std::abs(sig));
            const auto [cp, cv] = m.geodesic(p, u, 0.7);
            const auto [rp, rv] = rk4_geodesic(m, p, u, 0.7, 4000);
            CHECK((cp - rp).norm() < 1e-8);
            CHECK((cv - rv).norm() < 1e-8);
        }
    }

    TEST_CASE("null geodesics are straight lines") {
        const auto m = Hypersurface::pseudo_sphere(0);
        const Vec p = make_vec({0, 0, 1, 0});
        const Vec v = make_vec({1, 0, 0, 1});  // null tangent at p
        REQUIRE(m.metric(v, v) == 0.0);
        const auto [cp, cv] = m.geodesic(p, v, 2.5);
        CHECK((cp - (p + 2.5 * v)).norm() == 0.0);
        CHECK((cv - v).norm() == 0.0);
        CHECK(m.on_surface(cp, 1e-12));
    }

    TEST_CASE("spacelike geodesics reach the antipode at pi") {
        const auto m = Hypersurface::pseudo_sphere(1);
        const Vec p = m.sample_points(71, 1).front();
        Rng rng(171);
        Vec v = random_tangent(m, p, rng);
        while (m.metric(v, v) < 0.1) v = random_tangent(m, p, rng);
        const auto [cp, cv] = m.geodesic(p, v, std::acos(-1.0));
        CHECK((cp + p).norm() < 1e-12);
        (void)cv;
    }

    TEST_CASE("zero velocity is rejected") {
        const auto m = Hypersurface::pseudo_sphere(0);
        const Vec p = make_vec({0, 0, 1, 0});
        CHECK_THROWS_AS((void)m.geodesic(p, Vec::Zero(4), 1.0), Error);
    }

    TEST_CASE("geodesic acceleration satisfies the defining equation") {
        const auto m = Hypersurface::pseudo_sphere(1);
        const Vec p = m.sample_points(83, 1).front();
        Rng rng(183);
        const Vec v = random_tangent(m, p, rng);
        for (double t : {0.0, 0.4, 1.1}) {
            const auto [cp, cv] = m.geodesic(p, v, t);
            CHECK((m.geodesic_acceleration(p, v, t) + m.metric(cv, cv) * cp).norm() < 1e-12);
        }
    }
}
