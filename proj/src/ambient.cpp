#include "m3s/ambient.hpp"

namespace m3s {

SemiEuclideanSpace SemiEuclideanSpace::make(int m, int nu) {
    if (m <= 0 || nu < 0 || nu > m)
        throw DimensionMismatch("semi-euclidean space needs 0 <= index <= dim, dim > 0");
    return SemiEuclideanSpace{m, nu};
}

Vec SemiEuclideanSpace::signs() const {
    Vec s(dim);
    for (int i = 0; i < dim; ++i) s[i] = sign(i);
    return s;
}

double SemiEuclideanSpace::inner(const Vec& x, const Vec& y) const {
    if (x.size() != dim || y.size() != dim)
        throw DimensionMismatch("inner: vector dimension does not match space");
    double acc = 0.0;
    for (int i = 0; i < dim; ++i) acc += sign(i) * x[i] * y[i];
    return acc;
}

ParaHypercomplexTriple canonical_para_hypercomplex(int m) {
    if (m <= 0 || m % 4 != 0)
        throw DimensionMismatch("canonical triple needs dim divisible by 4");

    IMat j1 = IMat::Zero(m, m);
    IMat j2 = IMat::Zero(m, m);
    IMat j3 = IMat::Zero(m, m);

    // row = output component, column = input component (0-based)
    for (int k = 0; k < m / 2; ++k) {
        j1(2 * k, 2 * k + 1) = -1;
        j1(2 * k + 1, 2 * k) = +1;
    }
    for (int a = 0; a < m; ++a) {
        if (a % 2 == 0)
            j2(a, m - a - 2) = -1;
        else
            j2(a, m - a) = +1;
    }
    for (int a = 0; a < m; ++a) j3(a, m - 1 - a) = +1;

    ParaHypercomplexTriple t;
    t.j[0] = StructureOperator{j1, StructureOperator::Kind::complex_type};
    t.j[1] = StructureOperator{j2, StructureOperator::Kind::product_type};
    t.j[2] = StructureOperator{j3, StructureOperator::Kind::product_type};
    return t;
}

namespace {

std::int64_t max_abs(const IMat& m) {
    std::int64_t r = 0;
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index k = 0; k < m.cols(); ++k)
            r = std::max(r, std::abs(m(i, k)));
    return r;
}

} // namespace

std::vector<AlgebraCheck> check_para_hypercomplex(const SemiEuclideanSpace& space,
                                                  const ParaHypercomplexTriple& triple) {
    const int m = space.dim;
    for (const auto& op : triple.j)
        if (op.matrix.rows() != m || op.matrix.cols() != m)
            throw DimensionMismatch("check_para_hypercomplex: operator dimension mismatch");

    const IMat id = IMat::Identity(m, m);
    const IMat& j1 = triple.j[0].matrix;
    const IMat& j2 = triple.j[1].matrix;
    const IMat& j3 = triple.j[2].matrix;

    std::vector<AlgebraCheck> out;
    out.push_back({"j1^2 = -id", max_abs(IMat(j1 * j1 + id))});
    out.push_back({"j2^2 = +id", max_abs(IMat(j2 * j2 - id))});
    out.push_back({"j3^2 = +id", max_abs(IMat(j3 * j3 - id))});
    out.push_back({"j2 j1 = j3", max_abs(IMat(j2 * j1 - j3))});
    out.push_back({"j1 j2 = -j3", max_abs(IMat(j1 * j2 + j3))});
    out.push_back({"j1 j2 j3 = -id", max_abs(IMat(j1 * j2 * j3 + id))});

    // metric compatibility on all basis pairs: J^T D J = eps * D, with D the
    // sign matrix (integer-valued, so this stays exact)
    IMat d = IMat::Zero(m, m);
    for (int i = 0; i < m; ++i) d(i, i) = (i < space.index) ? -1 : 1;
    const std::array<const IMat*, 3> js{&j1, &j2, &j3};
    for (int a = 0; a < 3; ++a) {
        IMat defect = js[a]->transpose() * d * (*js[a]) - ParaHypercomplexTriple::eps[a] * d;
        out.push_back({"g(j" + std::to_string(a + 1) + " x, j" + std::to_string(a + 1) +
                           " y) = eps g(x,y)",
                       max_abs(defect)});
    }
    return out;
}

} // namespace m3s
