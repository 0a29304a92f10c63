#pragma once
#include <vector>

#include "iwff/intpoly.hpp"

namespace iwff {

// Dense matrix over Z/p^W (entries reduced to [0, p^W)), row-major.
struct Mat {
    int r = 0, c = 0;
    std::vector<i64> a;
    Mat() = default;
    Mat(int r_, int c_) : r(r_), c(c_), a((size_t)r_ * c_, 0) {}
    i64& at(int i, int j) { return a[(size_t)i * c + j]; }
    i64 at(int i, int j) const { return a[(size_t)i * c + j]; }
    bool operator==(const Mat&) const = default;
};

Mat mat_identity(int n);
Mat mat_mul(const Mat& A, const Mat& B, i64 M);
Mat mat_add(const Mat& A, const Mat& B, i64 M);
Mat mat_sub(const Mat& A, const Mat& B, i64 M);
Mat mat_scale(const Mat& A, i64 s, i64 M);
Mat mat_pow(Mat A, i64 k, i64 M);
Mat mat_transpose(const Mat& A);
std::vector<i64> mat_apply(const Mat& A, const std::vector<i64>& x, i64 M);
// columns of B appended to the right of A
Mat mat_hcat(const Mat& A, const Mat& B);

// Smith normal form over the local ring Z/p^W: A = U * D * V with U, V
// invertible and D diagonal with entries p^{exps[i]}, exps nondecreasing.
// exps has length min(r, c); exps[i] = W encodes a zero diagonal entry.
// Uinv and Vinv are maintained alongside so no inversion is ever needed.
struct SmithForm {
    i64 p = 0;
    int W = 0;
    i64 mod = 0;
    std::vector<int> exps;
    Mat U, Uinv, V, Vinv;
};
SmithForm smith_form(const Mat& A, i64 p, int W);

// generators (columns) of {x in (Z/p^W)^c : A x = 0}
Mat kernel_generators(const Mat& A, i64 p, int W);
// p-exponent of |coker(A : (Z/p^W)^c -> (Z/p^W)^r)|
i64 cokernel_exponent(const Mat& A, i64 p, int W);
// solve A x = b over Z/p^W; false when inconsistent
bool solve_mod(const Mat& A, const std::vector<i64>& b, i64 p, int W,
               std::vector<i64>& x);
// is v in the column span of G over Z/p^W
bool in_span(const Mat& G, const std::vector<i64>& v, i64 p, int W);
// column spans equal over Z/p^W
bool span_equal(const Mat& G1, const Mat& G2, i64 p, int W);

i64 ppow_i64(i64 p, int k);  // p^k, checked

}  // namespace iwff
