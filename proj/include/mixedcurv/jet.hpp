#pragma once

// Forward-mode jets: value plus partial derivatives w.r.t. up to kMaxDim
// chart coordinates. Nesting Jet<Jet<double>> yields exact second
// derivatives; one more level is used when differentiating quantities that
// themselves need Christoffel symbols.

#include <array>
#include <cmath>
#include <cstdint>
#include <algorithm>

namespace mixedcurv {

inline constexpr int kMaxDim = 6;

template <class T>
struct Jet {
    T v{};
    std::array<T, kMaxDim> d{};
    std::uint8_t n = 0;  // number of active partials

    Jet() = default;
    Jet(double s) : v(s) {}  // NOLINT: implicit promotion of constants
    Jet(const T& value, int dim) : v(value), n(static_cast<std::uint8_t>(dim)) {}

    static Jet variable(const T& value, int index, int dim) {
        Jet j(value, dim);
        j.d[index] = T(1.0);
        return j;
    }

    Jet& operator+=(const Jet& r) {
        n = std::max(n, r.n);
        v += r.v;
        for (int k = 0; k < n; ++k) d[k] += r.d[k];
        return *this;
    }
    Jet& operator-=(const Jet& r) {
        n = std::max(n, r.n);
        v -= r.v;
        for (int k = 0; k < n; ++k) d[k] -= r.d[k];
        return *this;
    }

    friend Jet operator+(const Jet& a, const Jet& b) {
        Jet r(a.v + b.v, std::max(a.n, b.n));
        for (int k = 0; k < r.n; ++k) r.d[k] = a.d[k] + b.d[k];
        return r;
    }
    friend Jet operator-(const Jet& a, const Jet& b) {
        Jet r(a.v - b.v, std::max(a.n, b.n));
        for (int k = 0; k < r.n; ++k) r.d[k] = a.d[k] - b.d[k];
        return r;
    }
    friend Jet operator-(const Jet& a) {
        Jet r(-a.v, a.n);
        for (int k = 0; k < r.n; ++k) r.d[k] = -a.d[k];
        return r;
    }
    friend Jet operator*(const Jet& a, const Jet& b) {
        Jet r(a.v * b.v, std::max(a.n, b.n));
        for (int k = 0; k < r.n; ++k) r.d[k] = a.d[k] * b.v + a.v * b.d[k];
        return r;
    }
    friend Jet operator/(const Jet& a, const Jet& b) {
        T inv = T(1.0) / b.v;
        Jet r(a.v * inv, std::max(a.n, b.n));
        for (int k = 0; k < r.n; ++k)
            r.d[k] = (a.d[k] - r.v * b.d[k]) * inv;
        return r;
    }

    friend bool operator<(const Jet& a, const Jet& b) { return scalar_value(a) < scalar_value(b); }
    friend bool operator>(const Jet& a, const Jet& b) { return scalar_value(a) > scalar_value(b); }
};

inline double scalar_value(double x) { return x; }
template <class T>
double scalar_value(const Jet<T>& j) { return scalar_value(j.v); }

// Chain rule helper: f(a) with outer derivative df evaluated at a.v.
template <class T>
Jet<T> jet_chain(const Jet<T>& a, const T& f, const T& df) {
    Jet<T> r(f, a.n);
    for (int k = 0; k < r.n; ++k) r.d[k] = df * a.d[k];
    return r;
}

using std::cos;
using std::cosh;
using std::exp;
using std::log;
using std::pow;
using std::sin;
using std::sinh;
using std::sqrt;
using std::tan;
using std::tanh;
using std::abs;

template <class T> Jet<T> sin(const Jet<T>& a) { return jet_chain(a, sin(a.v), cos(a.v)); }
template <class T> Jet<T> cos(const Jet<T>& a) { return jet_chain(a, cos(a.v), -sin(a.v)); }
template <class T> Jet<T> tan(const Jet<T>& a) {
    T t = tan(a.v);
    return jet_chain(a, t, T(1.0) + t * t);
}
template <class T> Jet<T> exp(const Jet<T>& a) {
    T e = exp(a.v);
    return jet_chain(a, e, e);
}
template <class T> Jet<T> log(const Jet<T>& a) { return jet_chain(a, log(a.v), T(1.0) / a.v); }
template <class T> Jet<T> sqrt(const Jet<T>& a) {
    T s = sqrt(a.v);
    return jet_chain(a, s, T(0.5) / s);
}
template <class T> Jet<T> sinh(const Jet<T>& a) { return jet_chain(a, sinh(a.v), cosh(a.v)); }
template <class T> Jet<T> cosh(const Jet<T>& a) { return jet_chain(a, cosh(a.v), sinh(a.v)); }
template <class T> Jet<T> tanh(const Jet<T>& a) {
    T t = tanh(a.v);
    return jet_chain(a, t, T(1.0) - t * t);
}
template <class T> Jet<T> abs(const Jet<T>& a) { return scalar_value(a) >= 0.0 ? a : -a; }

template <class T>
Jet<T> pow(const Jet<T>& a, const Jet<T>& b) {
    // General a^b = exp(b log a); integer constant exponents handled by
    // repeated squaring so negative bases keep working.
    double bv = scalar_value(b);
    bool b_const = true;
    for (int k = 0; k < b.n; ++k)
        if (scalar_value(b.d[k]) != 0.0) b_const = false;
    if (b_const && bv == std::floor(bv) && std::abs(bv) <= 64.0) {
        long e = static_cast<long>(bv);
        Jet<T> base = a;
        if (e < 0) {
            base = Jet<T>(1.0) / a;
            e = -e;
        }
        Jet<T> r(1.0);
        while (e > 0) {
            if (e & 1) r = r * base;
            base = base * base;
            e >>= 1;
        }
        return r;
    }
    return exp(b * log(a));
}

// Promote a double point to jet variables (one derivative level).
template <class T, std::size_t N>
std::array<Jet<T>, N> seed_variables(const std::array<T, N>& x, int dim) {
    std::array<Jet<T>, N> out{};
    for (int k = 0; k < dim; ++k) out[k] = Jet<T>::variable(x[k], k, dim);
    return out;
}

}  // namespace mixedcurv
