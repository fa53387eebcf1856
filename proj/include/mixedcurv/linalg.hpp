#pragma once

// Fixed-capacity dense vectors/matrices over an arbitrary scalar carrier
// (double or nested jets). Dimensions are tiny (chart dimension <= kMaxDim),
// so everything is stack-allocated and loops run to the runtime size.

#include <array>
#include <stdexcept>
#include <cmath>

#include "mixedcurv/jet.hpp"

namespace mixedcurv {

struct DegenerateMetricError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

template <class T>
struct Vec {
    std::array<T, kMaxDim> e{};
    int n = 0;

    Vec() = default;
    explicit Vec(int dim) : n(dim) {}

    T& operator[](int i) { return e[i]; }
    const T& operator[](int i) const { return e[i]; }

    Vec& operator+=(const Vec& r) {
        for (int i = 0; i < n; ++i) e[i] += r.e[i];
        return *this;
    }
    Vec& operator-=(const Vec& r) {
        for (int i = 0; i < n; ++i) e[i] -= r.e[i];
        return *this;
    }
    friend Vec operator+(Vec a, const Vec& b) { return a += b; }
    friend Vec operator-(Vec a, const Vec& b) { return a -= b; }
    friend Vec operator-(const Vec& a) {
        Vec r(a.n);
        for (int i = 0; i < a.n; ++i) r.e[i] = -a.e[i];
        return r;
    }
    friend Vec operator*(const T& s, const Vec& a) {
        Vec r(a.n);
        for (int i = 0; i < a.n; ++i) r.e[i] = s * a.e[i];
        return r;
    }
};

template <class T>
struct Mat {
    std::array<std::array<T, kMaxDim>, kMaxDim> e{};
    int n = 0;

    Mat() = default;
    explicit Mat(int dim) : n(dim) {}

    T& operator()(int i, int j) { return e[i][j]; }
    const T& operator()(int i, int j) const { return e[i][j]; }
};

// Rank-3 / rank-4 component holders, all slots of equal (chart) dimension.
template <class T>
struct Ten3 {
    std::array<std::array<std::array<T, kMaxDim>, kMaxDim>, kMaxDim> e{};
    int n = 0;
    Ten3() = default;
    explicit Ten3(int dim) : n(dim) {}
    T& operator()(int a, int b, int c) { return e[a][b][c]; }
    const T& operator()(int a, int b, int c) const { return e[a][b][c]; }
};

template <class T>
struct Ten4 {
    std::array<std::array<std::array<std::array<T, kMaxDim>, kMaxDim>, kMaxDim>, kMaxDim> e{};
    int n = 0;
    Ten4() = default;
    explicit Ten4(int dim) : n(dim) {}
    T& operator()(int a, int b, int c, int d) { return e[a][b][c][d]; }
    const T& operator()(int a, int b, int c, int d) const { return e[a][b][c][d]; }
};

template <class T>
Vec<T> mat_vec(const Mat<T>& m, const Vec<T>& v) {
    Vec<T> r(m.n);
    for (int i = 0; i < m.n; ++i) {
        T s(0.0);
        for (int j = 0; j < m.n; ++j) s += m(i, j) * v[j];
        r[i] = s;
    }
    return r;
}

template <class T>
T dot(const Mat<T>& g, const Vec<T>& a, const Vec<T>& b) {
    T s(0.0);
    for (int i = 0; i < g.n; ++i)
        for (int j = 0; j < g.n; ++j) s += g(i, j) * a[i] * b[j];
    return s;
}

// Gaussian elimination with partial pivoting on jet magnitudes.
template <class T>
Mat<T> inverse(const Mat<T>& m) {
    const int n = m.n;
    Mat<T> a = m;
    Mat<T> inv(n);
    for (int i = 0; i < n; ++i) inv(i, i) = T(1.0);
    for (int c = 0; c < n; ++c) {
        int piv = c;
        double best = std::abs(scalar_value(a(c, c)));
        for (int r = c + 1; r < n; ++r) {
            double m_ = std::abs(scalar_value(a(r, c)));
            if (m_ > best) {
                best = m_;
                piv = r;
            }
        }
        if (best < 1e-300) throw DegenerateMetricError("singular matrix in inverse()");
        if (piv != c) {
            std::swap(a.e[piv], a.e[c]);
            std::swap(inv.e[piv], inv.e[c]);
        }
        T d = T(1.0) / a(c, c);
        for (int j = 0; j < n; ++j) {
            a(c, j) = a(c, j) * d;
            inv(c, j) = inv(c, j) * d;
        }
        for (int r = 0; r < n; ++r) {
            if (r == c) continue;
            T f = a(r, c);
            if (scalar_value(f) == 0.0 && f.n == 0) continue;
            for (int j = 0; j < n; ++j) {
                a(r, j) -= f * a(c, j);
                inv(r, j) -= f * inv(c, j);
            }
        }
    }
    return inv;
}

template <>
inline Mat<double> inverse(const Mat<double>& m) {
    const int n = m.n;
    Mat<double> a = m;
    Mat<double> inv(n);
    for (int i = 0; i < n; ++i) inv(i, i) = 1.0;
    for (int c = 0; c < n; ++c) {
        int piv = c;
        double best = std::abs(a(c, c));
        for (int r = c + 1; r < n; ++r)
            if (std::abs(a(r, c)) > best) { best = std::abs(a(r, c)); piv = r; }
        if (best < 1e-300) throw DegenerateMetricError("singular matrix in inverse()");
        if (piv != c) {
            std::swap(a.e[piv], a.e[c]);
            std::swap(inv.e[piv], inv.e[c]);
        }
        double d = 1.0 / a(c, c);
        for (int j = 0; j < n; ++j) { a(c, j) *= d; inv(c, j) *= d; }
        for (int r = 0; r < n; ++r) {
            if (r == c) continue;
            double f = a(r, c);
            for (int j = 0; j < n; ++j) { a(r, j) -= f * a(c, j); inv(r, j) -= f * inv(c, j); }
        }
    }
    return inv;
}

template <class T>
T determinant(const Mat<T>& m) {
    const int n = m.n;
    Mat<T> a = m;
    T det(1.0);
    for (int c = 0; c < n; ++c) {
        int piv = c;
        double best = std::abs(scalar_value(a(c, c)));
        for (int r = c + 1; r < n; ++r) {
            double m_ = std::abs(scalar_value(a(r, c)));
            if (m_ > best) { best = m_; piv = r; }
        }
        if (best < 1e-300) return T(0.0);
        if (piv != c) {
            std::swap(a.e[piv], a.e[c]);
            det = -det;
        }
        det = det * a(c, c);
        T d = T(1.0) / a(c, c);
        for (int r = c + 1; r < n; ++r) {
            T f = a(r, c) * d;
            for (int j = c; j < n; ++j) a(r, j) -= f * a(c, j);
        }
    }
    return det;
}

// Eigenvalues of a symmetric double matrix (cyclic Jacobi); used only for
// signature verification.
inline std::array<double, kMaxDim> symmetric_eigenvalues(Mat<double> a) {
    const int n = a.n;
    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
        if (off < 1e-26) break;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) {
                if (std::abs(a(p, q)) < 1e-300) continue;
                double theta = 0.5 * std::atan2(2.0 * a(p, q), a(q, q) - a(p, p));
                double c = std::cos(theta), s = std::sin(theta);
                for (int k = 0; k < n; ++k) {
                    double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
            }
    }
    std::array<double, kMaxDim> ev{};
    for (int i = 0; i < n; ++i) ev[i] = a(i, i);
    return ev;
}

// Deterministic pairwise reduction for reproducible sums.
inline double pairwise_sum(const double* x, std::size_t n) {
    if (n == 0) return 0.0;
    if (n <= 8) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += x[i];
        return s;
    }
    std::size_t half = n / 2;
    return pairwise_sum(x, half) + pairwise_sum(x + half, n - half);
}

}  // namespace mixedcurv
