#include <doctest.h>

#include "m3s/ambient.hpp"

using namespace m3s;

namespace {

Vec basis_vec(int dim, int i) {
    Vec e = Vec::Zero(dim);
    e[i] = 1.0;
    return e;
}

Vec apply(const StructureOperator& op, const Vec& x) {
    return op.matrix.cast<double>() * x;
}

} // namespace

TEST_SUITE("ambient") {
    TEST_CASE("diagonal metric") {
        const auto sp = SemiEuclideanSpace::make(4, 2);
        CHECK(sp.sign(0) == -1.0);
        CHECK(sp.sign(1) == -1.0);
        CHECK(sp.sign(2) == 1.0);
        CHECK(sp.sign(3) == 1.0);
        Vec x(4), y(4);
        x << 1, 2, 3, 4;
        y << 1, 1, 1, 1;
        CHECK(sp.inner(x, y) == 4.0);  // -1 - 2 + 3 + 4
        CHECK(sp.inner(x, x) == 20.0); // -1 - 4 + 9 + 16
        CHECK(sp.signs().sum() == 0.0);
    }

    TEST_CASE("canonical operator columns, m = 4") {
        const auto t = canonical_para_hypercomplex(4);
        CHECK((apply(t.j[0], basis_vec(4, 0)) - basis_vec(4, 1)).norm() == 0.0);
        CHECK((apply(t.j[0], basis_vec(4, 1)) + basis_vec(4, 0)).norm() == 0.0);
        CHECK((apply(t.j[1], basis_vec(4, 0)) + basis_vec(4, 2)).norm() == 0.0);
        CHECK((apply(t.j[1], basis_vec(4, 1)) - basis_vec(4, 3)).norm() == 0.0);
        CHECK((apply(t.j[2], basis_vec(4, 0)) - basis_vec(4, 3)).norm() == 0.0);
        CHECK((apply(t.j[2], basis_vec(4, 3)) - basis_vec(4, 0)).norm() == 0.0);
        CHECK(t.j[0].kind == StructureOperator::Kind::complex_type);
        CHECK(t.j[1].kind == StructureOperator::Kind::product_type);
        CHECK(t.j[2].kind == StructureOperator::Kind::product_type);
    }

    TEST_CASE("canonical operator columns, m = 8") {
        const auto t = canonical_para_hypercomplex(8);
        CHECK((apply(t.j[1], basis_vec(8, 0)) + basis_vec(8, 6)).norm() == 0.0);
        CHECK((apply(t.j[2], basis_vec(8, 0)) - basis_vec(8, 7)).norm() == 0.0);
        CHECK((apply(t.j[0], basis_vec(8, 4)) - basis_vec(8, 5)).norm() == 0.0);
    }

    TEST_CASE("epsilon signature") {
        CHECK(ParaHypercomplexTriple::eps[0] == 1);
        CHECK(ParaHypercomplexTriple::eps[1] == -1);
        CHECK(ParaHypercomplexTriple::eps[2] == -1);
    }

    TEST_CASE("algebra relations are exactly zero for m in {4, 8, 12}") {
        for (int m : {4, 8, 12}) {
            const auto sp = SemiEuclideanSpace::make(m, m / 2);
            const auto checks = check_para_hypercomplex(sp, canonical_para_hypercomplex(m));
            CHECK(checks.size() > 5);
            for (const auto& c : checks) {
                INFO("m=", m, " relation ", c.relation);
                CHECK(c.residual == 0);
            }
        }
    }

    TEST_CASE("a perturbed operator is caught") {
        auto t = canonical_para_hypercomplex(4);
        t.j[2].matrix(0, 0) += 1;
        const auto checks =
            check_para_hypercomplex(SemiEuclideanSpace::make(4, 2), t);
        std::int64_t worst = 0;
        for (const auto& c : checks) worst = std::max(worst, c.residual);
        CHECK(worst > 0);
    }

    TEST_CASE("operators are anti-selfadjoint for the indefinite metric") {
        for (int m : {4, 8}) {
            const auto sp = SemiEuclideanSpace::make(m, m / 2);
            const auto t = canonical_para_hypercomplex(m);
            for (const auto& op : t.j)
                for (int i = 0; i < m; ++i)
                    for (int k = 0; k < m; ++k) {
                        const Vec ei = basis_vec(m, i), ek = basis_vec(m, k);
                        CHECK(sp.inner(apply(op, ei), ek) == -sp.inner(ei, apply(op, ek)));
                    }
        }
    }
}
