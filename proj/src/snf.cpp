#include "iwff/snf.hpp"

#include <algorithm>
#include <stdexcept>

#include "iwff/errors.hpp"

namespace iwff {

namespace {

i64 mulmod(i64 a, i64 b, i64 M) { return (i64)((i128)a * b % M); }

i64 addmod(i64 a, i64 b, i64 M) {
    i64 s = a + b;
    if (s >= M) s -= M;
    return s;
}

i64 submod(i64 a, i64 b, i64 M) {
    i64 s = a - b;
    if (s < 0) s += M;
    return s;
}

int vp_of(i64 x, i64 p, int W) {
    if (x == 0) return W;
    int v = 0;
    while (v < W && x % p == 0) {
        x /= p;
        ++v;
    }
    return v;
}

// inverse of a unit mod p^W by Newton lifting from mod p
i64 unit_inv(i64 u, i64 p, int W, i64 M) {
    i64 r = u % p;
    i64 x = 0;
    for (i64 c = 1; c < p; ++c)
        if (c * r % p == 1) {
            x = c;
            break;
        }
    if (x == 0) throw NotAUnit("inverse requested for a non-unit residue");
    i64 mod = p;
    while (mod < M) {
        mod = (mod > M / mod) ? M : mod * mod;
        if (mod > M) mod = M;
        x = (i64)((i128)x * submod(2, mulmod(u % mod, x % mod, mod), mod) % mod);
    }
    (void)W;
    return x % M;
}

}  // namespace

i64 ppow_i64(i64 p, int k) {
    if (k < 0) throw InvalidInput("negative power");
    i64 r = 1;
    for (int i = 0; i < k; ++i) {
        if (r > (i64)4e18 / p) throw InvalidInput("modulus overflows 64 bits");
        r *= p;
    }
    return r;
}

Mat mat_identity(int n) {
    Mat I(n, n);
    for (int i = 0; i < n; ++i) I.at(i, i) = 1;
    return I;
}

Mat mat_mul(const Mat& A, const Mat& B, i64 M) {
    if (A.c != B.r) throw InvalidInput("matrix dimension mismatch");
    Mat C(A.r, B.c);
    for (int i = 0; i < A.r; ++i)
        for (int k = 0; k < A.c; ++k) {
            i64 v = A.at(i, k);
            if (v == 0) continue;
            for (int j = 0; j < B.c; ++j)
                C.at(i, j) = addmod(C.at(i, j), mulmod(v, B.at(k, j), M), M);
        }
    return C;
}

Mat mat_add(const Mat& A, const Mat& B, i64 M) {
    if (A.r != B.r || A.c != B.c) throw InvalidInput("matrix dimension mismatch");
    Mat C(A.r, A.c);
    for (size_t i = 0; i < A.a.size(); ++i) C.a[i] = addmod(A.a[i], B.a[i], M);
    return C;
}

Mat mat_sub(const Mat& A, const Mat& B, i64 M) {
    if (A.r != B.r || A.c != B.c) throw InvalidInput("matrix dimension mismatch");
    Mat C(A.r, A.c);
    for (size_t i = 0; i < A.a.size(); ++i) C.a[i] = submod(A.a[i], B.a[i], M);
    return C;
}

Mat mat_scale(const Mat& A, i64 s, i64 M) {
    Mat C(A.r, A.c);
    s %= M;
    if (s < 0) s += M;
    for (size_t i = 0; i < A.a.size(); ++i) C.a[i] = mulmod(A.a[i], s, M);
    return C;
}

Mat mat_pow(Mat A, i64 k, i64 M) {
    if (A.r != A.c) throw InvalidInput("matrix power needs a square matrix");
    if (k < 0) throw InvalidInput("negative matrix power");
    Mat R = mat_identity(A.r);
    while (k > 0) {
        if (k & 1) R = mat_mul(R, A, M);
        A = mat_mul(A, A, M);
        k >>= 1;
    }
    return R;
}

Mat mat_transpose(const Mat& A) {
    Mat C(A.c, A.r);
    for (int i = 0; i < A.r; ++i)
        for (int j = 0; j < A.c; ++j) C.at(j, i) = A.at(i, j);
    return C;
}

std::vector<i64> mat_apply(const Mat& A, const std::vector<i64>& x, i64 M) {
    if ((int)x.size() != A.c) throw InvalidInput("vector dimension mismatch");
    std::vector<i64> y(A.r, 0);
    for (int i = 0; i < A.r; ++i) {
        i128 acc = 0;
        for (int j = 0; j < A.c; ++j) acc += (i128)A.at(i, j) * x[j] % M;
        y[i] = (i64)(acc % M);
        if (y[i] < 0) y[i] += M;
    }
    return y;
}

Mat mat_hcat(const Mat& A, const Mat& B) {
    if (A.r != B.r) throw InvalidInput("row count mismatch in hcat");
    Mat C(A.r, A.c + B.c);
    for (int i = 0; i < A.r; ++i) {
        for (int j = 0; j < A.c; ++j) C.at(i, j) = A.at(i, j);
        for (int j = 0; j < B.c; ++j) C.at(i, A.c + j) = B.at(i, j);
    }
    return C;
}

SmithForm smith_form(const Mat& A, i64 p, int W) {
    if (p < 2 || W < 1) throw InvalidInput("smith_form needs p >= 2, W >= 1");
    SmithForm S;
    S.p = p;
    S.W = W;
    S.mod = ppow_i64(p, W);
    const i64 M = S.mod;
    Mat D = A;
    for (auto& v : D.a) {
        v %= M;
        if (v < 0) v += M;
    }
    S.U = mat_identity(A.r);
    S.Uinv = mat_identity(A.r);
    S.V = mat_identity(A.c);
    S.Vinv = mat_identity(A.c);
    const int rk = std::min(A.r, A.c);
    S.exps.assign(rk, W);

    // row op: row_i -= f * row_t  applied to D and Uinv; U gets the inverse
    // column op (col_t += f * col_i)
    auto row_sub = [&](int i, int t, i64 f) {
        if (f == 0) return;
        for (int j = 0; j < D.c; ++j)
            D.at(i, j) = submod(D.at(i, j), mulmod(f, D.at(t, j), M), M);
        for (int j = 0; j < S.Uinv.c; ++j)
            S.Uinv.at(i, j) = submod(S.Uinv.at(i, j), mulmod(f, S.Uinv.at(t, j), M), M);
        for (int j = 0; j < S.U.r; ++j)
            S.U.at(j, t) = addmod(S.U.at(j, t), mulmod(f, S.U.at(j, i), M), M);
    };
    // column op: col_j -= f * col_t  applied to D and Vinv's columns; V gets
    // the inverse row op (row_t += f * row_j)
    auto col_sub = [&](int j, int t, i64 f) {
        if (f == 0) return;
        for (int i = 0; i < D.r; ++i)
            D.at(i, j) = submod(D.at(i, j), mulmod(f, D.at(i, t), M), M);
        for (int i = 0; i < S.Vinv.r; ++i)
            S.Vinv.at(i, j) = submod(S.Vinv.at(i, j), mulmod(f, S.Vinv.at(i, t), M), M);
        for (int i = 0; i < S.V.c; ++i)
            S.V.at(t, i) = addmod(S.V.at(t, i), mulmod(f, S.V.at(j, i), M), M);
    };
    auto row_swap = [&](int i, int t) {
        if (i == t) return;
        for (int j = 0; j < D.c; ++j) std::swap(D.at(i, j), D.at(t, j));
        for (int j = 0; j < S.Uinv.c; ++j) std::swap(S.Uinv.at(i, j), S.Uinv.at(t, j));
        for (int j = 0; j < S.U.r; ++j) std::swap(S.U.at(j, i), S.U.at(j, t));
    };
    auto col_swap = [&](int j, int t) {
        if (j == t) return;
        for (int i = 0; i < D.r; ++i) std::swap(D.at(i, j), D.at(i, t));
        for (int i = 0; i < S.Vinv.r; ++i) std::swap(S.Vinv.at(i, j), S.Vinv.at(i, t));
        for (int i = 0; i < S.V.c; ++i) std::swap(S.V.at(j, i), S.V.at(t, i));
    };
    // row t *= u (u a unit); Uinv row t *= u; U column t *= u^{-1}
    auto row_scale_unit = [&](int t, i64 u) {
        if (u == 1) return;
        i64 w = unit_inv(u, p, W, M);
        for (int j = 0; j < D.c; ++j) D.at(t, j) = mulmod(D.at(t, j), u, M);
        for (int j = 0; j < S.Uinv.c; ++j) S.Uinv.at(t, j) = mulmod(S.Uinv.at(t, j), u, M);
        for (int j = 0; j < S.U.r; ++j) S.U.at(j, t) = mulmod(S.U.at(j, t), w, M);
    };

    for (int t = 0; t < rk; ++t) {
        int bi = -1, bj = -1, bv = W;
        for (int i = t; i < D.r; ++i)
            for (int j = t; j < D.c; ++j) {
                int v = vp_of(D.at(i, j), p, W);
                if (v < bv) {
                    bv = v;
                    bi = i;
                    bj = j;
                }
            }
        if (bi < 0) break;  // all remaining entries are 0 mod p^W
        row_swap(bi, t);
        col_swap(bj, t);
        const i64 pe = ppow_i64(p, bv);
        row_scale_unit(t, unit_inv(D.at(t, t) / pe, p, W, M));
        // pivot is now exactly p^bv; clear the rest of column t and row t
        for (int i = t + 1; i < D.r; ++i) row_sub(i, t, D.at(i, t) / pe);
        for (int j = t + 1; j < D.c; ++j) col_sub(j, t, D.at(t, j) / pe);
        S.exps[t] = bv;
    }
    return S;
}

Mat kernel_generators(const Mat& A, i64 p, int W) {
    SmithForm S = smith_form(A, p, W);
    const i64 M = S.mod;
    std::vector<int> cols;
    std::vector<i64> scales;
    for (int i = 0; i < (int)S.exps.size(); ++i) {
        if (S.exps[i] == 0) continue;  // unit pivot: no kernel contribution
        cols.push_back(i);
        scales.push_back(ppow_i64(p, W - S.exps[i]));
    }
    for (int i = (int)S.exps.size(); i < A.c; ++i) {
        cols.push_back(i);
        scales.push_back(1);
    }
    Mat G(A.c, (int)cols.size());
    for (int k = 0; k < (int)cols.size(); ++k)
        for (int i = 0; i < A.c; ++i)
            G.at(i, k) = (i64)((i128)S.Vinv.at(i, cols[k]) * scales[k] % M);
    return G;
}

i64 cokernel_exponent(const Mat& A, i64 p, int W) {
    SmithForm S = smith_form(A, p, W);
    i64 e = 0;
    for (int v : S.exps) e += v;
    e += (i64)W * std::max(0, A.r - (int)S.exps.size());
    return e;
}

bool solve_mod(const Mat& A, const std::vector<i64>& b, i64 p, int W,
               std::vector<i64>& x) {
    if ((int)b.size() != A.r) throw InvalidInput("rhs dimension mismatch");
    SmithForm S = smith_form(A, p, W);
    const i64 M = S.mod;
    std::vector<i64> c = mat_apply(S.Uinv, b, M);
    std::vector<i64> y(A.c, 0);
    for (int i = 0; i < A.r; ++i) {
        if (i < (int)S.exps.size()) {
            int e = S.exps[i];
            i64 pe = ppow_i64(p, e);
            if (c[i] % pe != 0) return false;
            y[i] = c[i] / pe;  // any lift works; precision p^{W-e}
        } else if (c[i] % M != 0) {
            return false;
        }
    }
    x = mat_apply(S.Vinv, y, M);
    return true;
}

bool in_span(const Mat& G, const std::vector<i64>& v, i64 p, int W) {
    std::vector<i64> x;
    return solve_mod(G, v, p, W, x);
}

bool span_equal(const Mat& G1, const Mat& G2, i64 p, int W) {
    std::vector<i64> v(G1.r);
    for (int j = 0; j < G2.c; ++j) {
        for (int i = 0; i < G1.r; ++i) v[i] = G2.at(i, j);
        if (!in_span(G1, v, p, W)) return false;
    }
    for (int j = 0; j < G1.c; ++j) {
        for (int i = 0; i < G1.r; ++i) v[i] = G1.at(i, j);
        if (!in_span(G2, v, p, W)) return false;
    }
    return true;
}

}  // namespace iwff
