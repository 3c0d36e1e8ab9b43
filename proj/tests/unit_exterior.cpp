#include <doctest.h>

#include <array>
#include <vector>

#include "m3s/exterior.hpp"
#include "m3s/rng.hpp"

using namespace m3s;

namespace {

Vec make_vec(std::initializer_list<double> v) {
    Vec x(static_cast<int>(v.size()));
    int i = 0;
    for (double e : v) x[i++] = e;
    return x;
}

AlternatingForm random_form(int dim, int rank, std::uint64_t seed) {
    AlternatingForm w(dim, rank);
    Rng rng(seed);
    for (int i = 0; i < w.coefficient_count(); ++i) w.raw(i) = rng.sym();
    return w;
}

Vec random_vec(int dim, Rng& rng) {
    Vec v(dim);
    for (int i = 0; i < dim; ++i) v[i] = rng.sym();
    return v;
}

} // namespace

TEST_SUITE("exterior") {
    TEST_CASE("combinatorics") {
        CHECK(binomial(7, 3) == 35);
        CHECK(binomial(5, 0) == 1);
        CHECK(binomial(3, 3) == 1);
        // lexicographic tuple order in dim 4, rank 2
        const std::array<std::array<int, 2>, 6> order{
            {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};
        for (int r = 0; r < 6; ++r)
            CHECK(tuple_lex_rank(4, order[static_cast<std::size_t>(r)]) == r);
        std::array<int, 2> t{0, 1};
        int count = 1;
        while (next_increasing_tuple(4, t)) ++count;
        CHECK(count == 6);
        CHECK(t[0] == 2);
        CHECK(t[1] == 3);
    }

    TEST_CASE("basis forms and the determinant convention") {
        const auto w = AlternatingForm::basis(3, {0, 1, 2});
        const std::vector<Vec> vs{make_vec({2, 0, 1}), make_vec({-1, 3, 0}),
                                  make_vec({4, 1, 2})};
        // det [[2,-1,4],[0,3,1],[1,0,2]] computed by hand
        CHECK(w.eval(vs) == doctest::Approx(-1.0).epsilon(1e-14));

        const auto swapped = AlternatingForm::basis(4, {1, 0});
        const std::array<int, 2> t01{0, 1};
        CHECK(swapped.coeff(t01) == -1.0);
        CHECK(AlternatingForm::basis(4, {1, 1}).max_abs() == 0.0);
    }

    TEST_CASE("two-form evaluation") {
        auto w = AlternatingForm(4, 2);
        const std::array<int, 2> t{1, 3};
        w.set_coeff(t, 2.0);
        const std::vector<Vec> vs{make_vec({0, 1, 0, 0}), make_vec({0, 0, 0, 1})};
        CHECK(w.eval(vs) == 2.0);
        const std::vector<Vec> sw{vs[1], vs[0]};
        CHECK(w.eval(sw) == -2.0);
    }

    TEST_CASE("wedge grading") {
        Rng rng(11);
        const auto a = random_form(5, 1, 1);
        const auto b = random_form(5, 1, 2);
        const auto c = random_form(5, 2, 3);
        // 1-forms anticommute, 1-form and 2-form commute
        CHECK((a.wedge(b) + b.wedge(a)).max_abs() < 1e-15);
        CHECK((a.wedge(c) - c.wedge(a)).max_abs() < 1e-15);
        // associativity
        CHECK((a.wedge(b).wedge(c) - a.wedge(b.wedge(c))).max_abs() < 1e-13);
        // evaluation of a decomposable wedge matches the shuffle definition
        const Vec x = random_vec(5, rng), y = random_vec(5, rng);
        const std::vector<Vec> xy{x, y};
        const std::vector<Vec> xs{x}, ys{y};
        CHECK(a.wedge(b).eval(xy) ==
              doctest::Approx(a.eval(xs) * b.eval(ys) - a.eval(ys) * b.eval(xs))
                  .epsilon(1e-12));
    }

    TEST_CASE("interior product is an antiderivation") {
        Rng rng(21);
        const auto a = random_form(5, 1, 4);
        const auto b = random_form(5, 2, 5);
        const Vec x = random_vec(5, rng);
        const auto lhs = a.wedge(b).interior(x);
        const auto rhs = a.interior(x).raw(0) * b - a.wedge(b.interior(x));
        CHECK((lhs - rhs).max_abs() < 1e-13);
    }

    TEST_CASE("iterated interior equals evaluation") {
        Rng rng(31);
        const auto w = random_form(6, 3, 6);
        const Vec x = random_vec(6, rng), y = random_vec(6, rng), z = random_vec(6, rng);
        const std::vector<Vec> args{x, y, z};
        const auto it = w.interior(x).interior(y).interior(z);
        CHECK(it.rank() == 0);
        CHECK(it.raw(0) == doctest::Approx(w.eval(args)).epsilon(1e-12));
    }

    TEST_CASE("rank above dimension is the canonical zero object") {
        const AlternatingForm z(3, 4);
        CHECK(z.coefficient_count() == 0);
        const auto a = random_form(3, 2, 7);
        const auto b = random_form(3, 2, 8);
        CHECK(a.wedge(b).coefficient_count() == 0);
        Rng rng(41);
        const std::vector<Vec> args{random_vec(3, rng), random_vec(3, rng),
                                    random_vec(3, rng), random_vec(3, rng)};
        CHECK(z.eval(args) == 0.0);
    }

    TEST_CASE("flat and sharp against the indefinite metric") {
        const auto sp = SemiEuclideanSpace::make(4, 2);
        const auto f0 = flat(sp, make_vec({1, 0, 0, 0}));
        CHECK(f0.raw(0) == -1.0);
        Rng rng(51);
        const Vec x = random_vec(4, rng), y = random_vec(4, rng);
        const std::vector<Vec> ys{y};
        CHECK(flat(sp, x).eval(ys) == doctest::Approx(sp.inner(x, y)).epsilon(1e-14));
        CHECK((sharp(sp, flat(sp, x)) - x).norm() == 0.0);
    }
}
