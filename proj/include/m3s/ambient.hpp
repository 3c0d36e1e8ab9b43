#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "m3s/errors.hpp"

namespace m3s {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using IMat = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;
using IVec = Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1>;

// R^m with the diagonal metric whose first `index` coordinates carry -1 and
// the rest +1.
struct SemiEuclideanSpace {
    int dim = 0;
    int index = 0;

    static SemiEuclideanSpace make(int m, int nu);

    double sign(int i) const { return i < index ? -1.0 : 1.0; }
    Vec signs() const;
    double inner(const Vec& x, const Vec& y) const;
};

// One structure operator of a para-hypercomplex triple.  `complex_type`
// squares to -I, `product_type` to +I.  Matrices are integer so the flat
// algebra checks are exact.
struct StructureOperator {
    enum class Kind { complex_type, product_type };
    IMat matrix;
    Kind kind = Kind::complex_type;
};

struct ParaHypercomplexTriple {
    std::array<StructureOperator, 3> j;
    // epsilon signature (+1, -1, -1)
    static constexpr std::array<int, 3> eps{+1, -1, -1};
};

// The standard triple on R^m, m divisible by 4:
//   J1: pairwise rotation (x1,x2,...) -> (-x2,x1,-x4,x3,...)
//   J2: reversed-pair involution      -> (-x_{m-1},x_m,...,-x_1,x_2)
//   J3: full index reversal           -> (x_m,...,x_1)
ParaHypercomplexTriple canonical_para_hypercomplex(int m);

// One exact relation check; residual is the max absolute entry of the
// defect matrix, and is exactly zero for the canonical triple.
struct AlgebraCheck {
    std::string relation;
    std::int64_t residual = 0;
};

// Verifies squares, anticommutators, the triple product J1 J2 J3 = -Id,
// J2 J1 = J3, and metric compatibility g(J_a X, J_a Y) = eps_a g(X,Y)
// on all basis pairs.  Integer arithmetic throughout.
std::vector<AlgebraCheck> check_para_hypercomplex(const SemiEuclideanSpace& space,
                                                  const ParaHypercomplexTriple& triple);

} // namespace m3s
