#include "m3s/exterior.hpp"

#include <algorithm>
#include <cmath>

namespace m3s {

long long binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    long long r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

int tuple_lex_rank(int dim, std::span<const int> tuple) {
    const int p = static_cast<int>(tuple.size());
    long long rank = 0;
    int prev = -1;
    for (int j = 0; j < p; ++j) {
        for (int t = prev + 1; t < tuple[j]; ++t) rank += binomial(dim - 1 - t, p - 1 - j);
        prev = tuple[j];
    }
    return static_cast<int>(rank);
}

bool next_increasing_tuple(int dim, std::span<int> tuple) {
    const int p = static_cast<int>(tuple.size());
    for (int j = p - 1; j >= 0; --j) {
        if (tuple[j] < dim - (p - j)) {
            ++tuple[j];
            for (int t = j + 1; t < p; ++t) tuple[t] = tuple[t - 1] + 1;
            return true;
        }
    }
    return false;
}

AlternatingForm::AlternatingForm(int dim, int rank) : dim_(dim), rank_(rank) {
    if (dim <= 0 || rank < 0) throw DimensionMismatch("alternating form needs dim > 0, rank >= 0");
    c_.assign(static_cast<std::size_t>(binomial(dim, rank)), 0.0);
}

AlternatingForm AlternatingForm::basis(int dim, std::initializer_list<int> idx) {
    AlternatingForm f(dim, static_cast<int>(idx.size()));
    std::vector<int> t(idx);
    for (int i : t)
        if (i < 0 || i >= dim) throw DimensionMismatch("basis index out of range");
    // sort, tracking permutation parity; repeated index -> zero form
    double sign = 1.0;
    for (std::size_t a = 0; a < t.size(); ++a)
        for (std::size_t b = a + 1; b < t.size(); ++b) {
            if (t[a] == t[b]) return f;
            if (t[a] > t[b]) {
                std::swap(t[a], t[b]);
                sign = -sign;
            }
        }
    f.c_[static_cast<std::size_t>(tuple_lex_rank(dim, t))] = sign;
    return f;
}

double AlternatingForm::coeff(std::span<const int> tuple) const {
    if (static_cast<int>(tuple.size()) != rank_) throw DimensionMismatch("coeff: wrong tuple size");
    if (c_.empty()) return 0.0;
    return c_[static_cast<std::size_t>(tuple_lex_rank(dim_, tuple))];
}

void AlternatingForm::set_coeff(std::span<const int> tuple, double value) {
    if (static_cast<int>(tuple.size()) != rank_) throw DimensionMismatch("set_coeff: wrong tuple size");
    if (c_.empty()) throw DimensionMismatch("set_coeff on zero object (rank > dim)");
    c_[static_cast<std::size_t>(tuple_lex_rank(dim_, tuple))] = value;
}

AlternatingForm AlternatingForm::interior(const Vec& x) const {
    if (rank_ == 0) throw Error("interior product of a 0-form is undefined");
    if (x.size() != dim_) throw DimensionMismatch("interior: vector dimension mismatch");
    AlternatingForm out(dim_, rank_ - 1);
    if (c_.empty()) return out;

    std::vector<int> tuple(static_cast<std::size_t>(rank_));
    for (int j = 0; j < rank_; ++j) tuple[static_cast<std::size_t>(j)] = j;
    std::vector<int> sub(static_cast<std::size_t>(rank_ - 1));
    int r = 0;
    do {
        const double v = c_[static_cast<std::size_t>(r++)];
        if (v == 0.0) continue;
        for (int j = 0; j < rank_; ++j) {
            const double xv = x[tuple[static_cast<std::size_t>(j)]];
            if (xv == 0.0) continue;
            int s = 0;
            for (int t = 0; t < rank_; ++t)
                if (t != j) sub[static_cast<std::size_t>(s++)] = tuple[static_cast<std::size_t>(t)];
            const double sgn = (j % 2 == 0) ? 1.0 : -1.0;
            out.c_[static_cast<std::size_t>(tuple_lex_rank(dim_, sub))] += sgn * xv * v;
        }
    } while (next_increasing_tuple(dim_, tuple));
    return out;
}

double AlternatingForm::eval(std::span<const Vec> vectors) const {
    if (static_cast<int>(vectors.size()) != rank_)
        throw DimensionMismatch("eval: argument count must equal rank");
    if (c_.empty()) return 0.0;
    if (rank_ == 0) return c_[0];
    AlternatingForm cur = interior(vectors[0]);
    for (std::size_t i = 1; i < vectors.size(); ++i) cur = cur.interior(vectors[i]);
    return cur.c_[0];
}

AlternatingForm AlternatingForm::wedge(const AlternatingForm& other) const {
    if (dim_ != other.dim_) throw DimensionMismatch("wedge: forms live on different spaces");
    AlternatingForm out(dim_, rank_ + other.rank_);
    if (c_.empty() || other.c_.empty() || out.c_.empty()) return out;
    if (rank_ == 0) {
        out.c_ = other.c_;
        for (double& v : out.c_) v *= c_[0];
        return out;
    }
    if (other.rank_ == 0) {
        out.c_ = c_;
        for (double& v : out.c_) v *= other.c_[0];
        return out;
    }

    std::vector<int> ti(static_cast<std::size_t>(rank_));
    std::vector<int> tj(static_cast<std::size_t>(other.rank_));
    std::vector<int> merged(static_cast<std::size_t>(rank_ + other.rank_));

    for (int a = 0; a < rank_; ++a) ti[static_cast<std::size_t>(a)] = a;
    int ri = 0;
    do {
        const double va = c_[static_cast<std::size_t>(ri++)];
        if (va == 0.0) continue;
        for (int b = 0; b < other.rank_; ++b) tj[static_cast<std::size_t>(b)] = b;
        int rj = 0;
        do {
            const double vb = other.c_[static_cast<std::size_t>(rj++)];
            if (vb == 0.0) continue;
            // merge; sign = parity of inversions (pairs with j-index < i-index)
            int a = 0, b = 0, inv = 0, k = 0;
            bool clash = false;
            while (a < rank_ && b < other.rank_) {
                const int ia = ti[static_cast<std::size_t>(a)];
                const int jb = tj[static_cast<std::size_t>(b)];
                if (ia == jb) {
                    clash = true;
                    break;
                }
                if (ia < jb) {
                    merged[static_cast<std::size_t>(k++)] = ia;
                    ++a;
                } else {
                    merged[static_cast<std::size_t>(k++)] = jb;
                    ++b;
                    inv += rank_ - a;
                }
            }
            if (clash) continue;
            while (a < rank_) merged[static_cast<std::size_t>(k++)] = ti[static_cast<std::size_t>(a++)];
            while (b < other.rank_) merged[static_cast<std::size_t>(k++)] = tj[static_cast<std::size_t>(b++)];
            const double sgn = (inv % 2 == 0) ? 1.0 : -1.0;
            out.c_[static_cast<std::size_t>(tuple_lex_rank(dim_, merged))] += sgn * va * vb;
        } while (next_increasing_tuple(dim_, tj));
    } while (next_increasing_tuple(dim_, ti));
    return out;
}

AlternatingForm& AlternatingForm::operator+=(const AlternatingForm& other) {
    if (dim_ != other.dim_ || rank_ != other.rank_)
        throw DimensionMismatch("form addition: dim/rank mismatch");
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += other.c_[i];
    return *this;
}

AlternatingForm& AlternatingForm::operator-=(const AlternatingForm& other) {
    if (dim_ != other.dim_ || rank_ != other.rank_)
        throw DimensionMismatch("form subtraction: dim/rank mismatch");
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= other.c_[i];
    return *this;
}

AlternatingForm& AlternatingForm::operator*=(double s) {
    for (double& v : c_) v *= s;
    return *this;
}

double AlternatingForm::max_abs() const {
    double r = 0.0;
    for (double v : c_) r = std::max(r, std::abs(v));
    return r;
}

AlternatingForm flat(const SemiEuclideanSpace& space, const Vec& x) {
    if (x.size() != space.dim) throw DimensionMismatch("flat: vector dimension mismatch");
    AlternatingForm f(space.dim, 1);
    for (int i = 0; i < space.dim; ++i) f.raw(i) = space.sign(i) * x[i];
    return f;
}

Vec sharp(const SemiEuclideanSpace& space, const AlternatingForm& one_form) {
    if (one_form.dim() != space.dim || one_form.rank() != 1)
        throw DimensionMismatch("sharp: expected a 1-form on the space");
    Vec x(space.dim);
    for (int i = 0; i < space.dim; ++i) x[i] = space.sign(i) * one_form.raw(i);
    return x;
}

} // namespace m3s
