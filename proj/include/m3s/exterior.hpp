#pragma once

#include <initializer_list>
#include <span>
#include <vector>

#include "m3s/ambient.hpp"

namespace m3s {

// Alternating p-form on R^m under the determinant convention (no 1/p!
// factor): (a ^ b)(X,Y) = a(X)b(Y) - a(Y)b(X) for 1-forms, and evaluation on
// basis vectors picks out the coefficient of the corresponding increasing
// tuple.  Coefficients are stored on strictly increasing index tuples in
// lexicographic order; rank p > m is the canonical zero object (no
// coefficients, evaluates to 0, absorbs wedge).
class AlternatingForm {
public:
    AlternatingForm() = default;
    AlternatingForm(int dim, int rank);

    static AlternatingForm zero(int dim, int rank) { return AlternatingForm(dim, rank); }
    // e^{i1} ^ e^{i2} ^ ... for possibly unsorted, distinct indices (0-based);
    // repeated indices give the zero form.
    static AlternatingForm basis(int dim, std::initializer_list<int> idx);

    int dim() const { return dim_; }
    int rank() const { return rank_; }
    int coefficient_count() const { return static_cast<int>(c_.size()); }

    // access by strictly increasing tuple
    double coeff(std::span<const int> tuple) const;
    void set_coeff(std::span<const int> tuple, double value);

    double& raw(int lex_rank) { return c_[static_cast<std::size_t>(lex_rank)]; }
    double raw(int lex_rank) const { return c_[static_cast<std::size_t>(lex_rank)]; }

    double eval(std::span<const Vec> vectors) const;
    AlternatingForm interior(const Vec& x) const;
    AlternatingForm wedge(const AlternatingForm& other) const;

    AlternatingForm& operator+=(const AlternatingForm& other);
    AlternatingForm& operator-=(const AlternatingForm& other);
    AlternatingForm& operator*=(double s);
    friend AlternatingForm operator+(AlternatingForm a, const AlternatingForm& b) { return a += b; }
    friend AlternatingForm operator-(AlternatingForm a, const AlternatingForm& b) { return a -= b; }
    friend AlternatingForm operator*(double s, AlternatingForm a) { return a *= s; }

    // max absolute coefficient
    double max_abs() const;

private:
    int dim_ = 0;
    int rank_ = 0;
    std::vector<double> c_;
};

// binomial coefficient, exact for the small arguments used here
long long binomial(int n, int k);

// lexicographic rank of a strictly increasing tuple among all
// C(dim, tuple.size()) of them
int tuple_lex_rank(int dim, std::span<const int> tuple);

// in-place advance to the next increasing tuple; returns false after the last
bool next_increasing_tuple(int dim, std::span<int> tuple);

// index lowering/raising against the diagonal metric: flat(X)(Y) = <X, Y>
AlternatingForm flat(const SemiEuclideanSpace& space, const Vec& x);
Vec sharp(const SemiEuclideanSpace& space, const AlternatingForm& one_form);

} // namespace m3s
