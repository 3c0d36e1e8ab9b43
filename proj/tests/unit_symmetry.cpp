#include <doctest.h>

#include <cmath>
#include <vector>

#include "m3s/rng.hpp"
#include "m3s/symmetry.hpp"

using namespace m3s;

namespace {

Vec basis_vec(int dim, int i) {
    Vec e = Vec::Zero(dim);
    e[i] = 1.0;
    return e;
}

Vec random_tangent(const Hypersurface& m, const Vec& p, Rng& rng) {
    Vec v(m.space().dim);
    for (int i = 0; i < m.space().dim; ++i) v[i] = rng.sym();
    return m.project_tangent(p, v);
}

} // namespace

TEST_SUITE("symmetry") {
    TEST_CASE("exact d eta coefficients") {
        const SphereMixedSystem sys(1);
        const auto de = d_eta_matrix(sys, 0);
        // d eta(e_i, e_k) = 2 s_i (J_1)_{ik}: block (4,5) is spacelike with
        // J_1(4,5) = -1
        const std::array<int, 2> t45{4, 5};
        CHECK(de.coeff(t45) == -2.0);
        const std::array<int, 2> t01{0, 1};
        CHECK(de.coeff(t01) == 2.0);  // timelike block flips the sign
        // matches the finite-difference exterior derivative of the eta field
        const auto& m = sys.surface();
        const Vec p = m.sample_points(3, 1).front();
        Rng rng(303);
        const Vec x = random_tangent(m, p, rng), y = random_tangent(m, p, rng);
        const std::vector<Vec> xy{x, y};
        CHECK(std::abs(exterior_derivative_value(m, eta_field(sys, 0), p, xy) -
                       de.eval(xy)) < 1e-10);
        // and the closed form -2 g(phi X, Y) on tangents
        CHECK(de.eval(xy) == doctest::Approx(-2.0 * m.metric(sys.phi(0, p, x), y))
                                 .epsilon(1e-12));
    }

    TEST_CASE("frozen wedge value of eta ^ d eta at a basis point") {
        const SphereMixedSystem sys(1);
        const Vec p = basis_vec(8, 4);
        const auto w = ky_family_field(sys, 0, 1);
        CHECK(w.rank == 3);
        const std::vector<Vec> args{sys.xi(0, p), basis_vec(8, 6), basis_vec(8, 7)};
        CHECK(form_value(w, p, args) == doctest::Approx(-2.0).epsilon(1e-13));
    }

    TEST_CASE("eta is co-closed and d* d eta = (8n+4) eta") {
        for (int n : {0, 1}) {
            const SphereMixedSystem sys(n);
            const auto& m = sys.surface();
            const Vec p = m.sample_points(5, 1).front();
            const Frame f = m.build_frame(p, 5);
            for (int a = 0; a < 3; ++a) {
                CHECK(std::abs(codifferential_value(m, f, eta_field(sys, a), p, {})) < 1e-9);
                for (const Vec& e : f.vectors) {
                    const double tau =
                        codifferential_value(m, f, d_eta_field(sys, a), p, {e});
                    const double want =
                        (8.0 * n + 4.0) * form_value(eta_field(sys, a), p, {e});
                    CHECK(std::abs(tau - want) < 1e-7);
                }
            }
        }
    }

    TEST_CASE("conformal Killing-Yano residuals with exact d") {
        const SphereMixedSystem sys(1);
        const auto& m = sys.surface();
        const Vec p = m.sample_points(7, 1).front();
        const Frame f = m.build_frame(p, 7);
        Rng rng(307);
        const Vec x = random_tangent(m, p, rng), y = random_tangent(m, p, rng),
                  z = random_tangent(m, p, rng);
        for (int a = 0; a < 3; ++a) {
            const auto de = d_eta_matrix(sys, a);
            CHECK(cky_residual(m, f, eta_field(sys, a), p, x, {y}, {}, &de) < 1e-8);
            const AlternatingForm zero3(8, 3);
            CHECK(cky_residual(m, f, d_eta_field(sys, a), p, x, {y, z}, {}, &zero3) < 1e-8);
        }
    }

    TEST_CASE("Killing-Yano residuals for the wedge family") {
        const SphereMixedSystem sys(1);
        const auto& m = sys.surface();
        const Vec p = m.sample_points(11, 1).front();
        Rng rng(311);
        for (int a = 0; a < 3; ++a)
            for (int k = 0; k <= 3; ++k) {
                const auto w = ky_family_field(sys, a, k);
                const auto dw = d_eta_power(sys, a, k + 1);
                std::vector<Vec> args;
                for (int i = 0; i < 2 * k + 1; ++i) args.push_back(random_tangent(m, p, rng));
                CHECK(ky_residual(m, w, p, random_tangent(m, p, rng), args, {}, &dw) < 1e-8);
            }
        CHECK_THROWS_AS((void)ky_family_field(sys, 0, 4), ConfigError);
        CHECK_THROWS_AS((void)ky_family_field(sys, 0, -1), ConfigError);
    }

    TEST_CASE("restriction of a constant form: derivative in closed form") {
        // (nabla_X w)(Y,Z) = -g(X,Y) w(p,Z) + g(X,Z) w(p,Y) for the pullback
        // of a parallel ambient 2-form; this is why constant forms are CKY on
        // the surface and unusable as negative controls
        const SphereMixedSystem sys(1);
        const auto& m = sys.surface();
        const Vec p = m.sample_points(13, 1).front();
        Rng rng(313);
        AlternatingForm cw(8, 2);
        for (int i = 0; i < cw.coefficient_count(); ++i) cw.raw(i) = rng.sym();
        const auto field = constant_form_field(cw);
        const Vec x = random_tangent(m, p, rng), y = random_tangent(m, p, rng),
                  z = random_tangent(m, p, rng);
        const std::vector<Vec> pz{p, z}, py{p, y};
        const double want = -m.metric(x, y) * cw.eval(pz) + m.metric(x, z) * cw.eval(py);
        CHECK(std::abs(covariant_derivative_form(m, field, p, x, {y, z}) - want) < 1e-9);
        // closed: the finite-difference d vanishes
        CHECK(std::abs(exterior_derivative_value(m, field, p, {x, y, z})) < 1e-9);
    }

    TEST_CASE("Killing residuals for the structure fields and a sharp non-example") {
        const SphereMixedSystem sys(1);
        const auto& m = sys.surface();
        const Vec p = m.sample_points(17, 1).front();
        Rng rng(317);
        const Vec y = random_tangent(m, p, rng), z = random_tangent(m, p, rng);
        for (int a = 0; a < 3; ++a)
            CHECK(killing_residual(m, sys.xi_field(a), p, y, z) < 1e-10);
        // canonical extension of the normal direction: residual 2|g(Y,Y)|
        const auto field = m.extend_canonical(p);
        const Frame f = m.build_frame(p, 17);
        const Vec u = f.vectors.front();  // unit
        CHECK(killing_residual(m, field, p, u, u) == doctest::Approx(2.0).epsilon(1e-6));
    }

    TEST_CASE("Lie derivative of the metric on the xi pair") {
        const SphereMixedSystem sys(1);
        const auto& m = sys.surface();
        const Vec p = m.sample_points(19, 1).front();
        Rng rng(319);
        const Vec v = random_tangent(m, p, rng);
        for (int a = 0; a < 3; ++a)
            CHECK(lie_metric_xi_check(sys, m.extend_canonical(v), p, a) < 1e-9);
        // non-tangent w: the value is -2 <w,p> eps_a up to sign
        Vec w = random_tangent(m, p, rng) + 0.35 * p;
        for (int a = 0; a < 3; ++a)
            CHECK(lie_metric_xi_check(sys, m.extend_canonical(w), p, a) ==
                  doctest::Approx(0.7).epsilon(1e-6));
    }

    TEST_CASE("associated tensor of a 1-form is its square") {
        const SphereMixedSystem sys(1);
        const auto& m = sys.surface();
        const Vec p = m.sample_points(23, 1).front();
        Rng rng(323);
        const Vec x = random_tangent(m, p, rng), y = random_tangent(m, p, rng);
        for (int a = 0; a < 3; ++a) {
            const auto rho = associated_tensor(m, eta_field(sys, a), 23);
            CHECK(rho.eval(p, x, y) ==
                  doctest::Approx(sys.eta(a, p, x) * sys.eta(a, p, y)).epsilon(1e-12));
            CHECK(eta_squared_field(sys, a).eval(p, x, y) ==
                  doctest::Approx(sys.eta(a, p, x) * sys.eta(a, p, y)).epsilon(1e-12));
        }
    }

    TEST_CASE("Killing tensor residuals") {
        const SphereMixedSystem sys(1);
        const auto& m = sys.surface();
        const Vec p = m.sample_points(29, 1).front();
        const Frame f = m.build_frame(p, 29);
        CHECK(killing_tensor_residual(m, metric_tensor_field(m), p, f) < 1e-9);
        for (int a = 0; a < 3; ++a)
            CHECK(killing_tensor_residual(m, eta_squared_field(sys, a), p, f) < 1e-8);
        // the ambient metric matrix restricts to g and is parallel
        Mat diag = Mat::Zero(8, 8);
        for (int i = 0; i < 8; ++i) diag(i, i) = m.space().sign(i);
        CHECK(killing_tensor_residual(m, constant_symmetric_field(diag), p, f) < 1e-9);
        // a generic constant tensor is not a Killing tensor
        Rng rng(329);
        Mat s(8, 8);
        for (int i = 0; i < 8; ++i)
            for (int j = 0; j <= i; ++j) s(i, j) = s(j, i) = rng.sym();
        CHECK(killing_tensor_residual(m, constant_symmetric_field(s), p, f) > 1e-2);
    }

    TEST_CASE("geodesic first integrals") {
        const SphereMixedSystem sys(1);
        const auto& m = sys.surface();
        const Vec p = m.sample_points(31, 1).front();
        Rng rng(331);
        Vec v = random_tangent(m, p, rng);
        const std::vector<double> times{0.25, 0.5, 0.75, 1.0};
        CHECK(geodesic_invariant_drift(m, metric_tensor_field(m), p, v, times) < 1e-12);
        for (int a = 0; a < 3; ++a)
            CHECK(geodesic_invariant_drift(m, eta_squared_field(sys, a), p, v, times) < 1e-12);
    }

    TEST_CASE("bracket table and foliation invariants") {
        const SphereMixedSystem sys(1);
        const auto& m = sys.surface();
        const Vec p = m.sample_points(37, 1).front();
        const auto table = bracket_table(sys, p);
        REQUIRE(table.size() == 3);
        // measured span constants: [xi_1,xi_2] = -2 xi_3, [xi_2,xi_3] = 2 xi_1,
        // [xi_3,xi_1] = -2 xi_2
        CHECK(table[0].c[2] == doctest::Approx(-2.0).epsilon(1e-12));
        CHECK(table[1].c[0] == doctest::Approx(2.0).epsilon(1e-12));
        CHECK(table[2].c[1] == doctest::Approx(-2.0).epsilon(1e-12));
        for (const auto& fit : table) CHECK(fit.residual < 1e-12);
        // exact matrix identity for the (2,3) pair
        CHECK((bracket_matrix(sys, 1, 2).cast<double>() * p - 2.0 * sys.xi(0, p)).norm() <
              1e-14);
        // cross-check one bracket against the finite-difference field bracket
        const Vec fd = m.lie_bracket(sys.xi_field(1), sys.xi_field(2), p);
        CHECK((fd - table[1].value).norm() < 1e-9);
        CHECK(involutivity_residual(sys, p) < 1e-12);
        CHECK(total_geodesy_residual(sys, p) < 1e-8);
        CHECK(leaf_curvature_deviation(sys, p, 37, 8) < 1e-8);
    }

    TEST_CASE("phi witness ratio is bounded away from zero") {
        const SphereMixedSystem sys(1);
        const auto& m = sys.surface();
        const Vec p = m.sample_points(41, 1).front();
        CHECK(phi_not_ky_ratio_min(sys, 0, p, 41, 8) > 0.5);
    }

    TEST_CASE("phi witness needs a horizontal direction") {
        // at n = 0 the xi's span the whole tangent space, so the horizontal
        // rejection sampler must give up instead of looping forever
        const SphereMixedSystem sys(0);
        const Vec p = sys.surface().sample_points(43, 1).front();
        CHECK_THROWS_AS((void)phi_not_ky_ratio_min(sys, 0, p, 43, 8), SamplingExhausted);
    }
}
