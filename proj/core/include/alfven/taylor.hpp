#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>

namespace alfven {

// Truncated Taylor series a[0] + a[1] h + ... + a[N] h^N around a point.
// a[k] = f^(k)(x0) / k!.
template <class T, std::size_t N>
struct Taylor {
    std::array<T, N + 1> a{};

    Taylor() = default;
    Taylor(const T& v) { a[0] = v; }  // NOLINT: constants promote implicitly

    static Taylor variable(const T& x0) {
        Taylor t(x0);
        if constexpr (N >= 1) t.a[1] = T(1);
        return t;
    }

    T value() const { return a[0]; }

    T derivative(std::size_t k) const {
        T f = a[k];
        for (std::size_t j = 2; j <= k; ++j) f *= static_cast<double>(j);
        return f;
    }

    Taylor& operator+=(const Taylor& o) {
        for (std::size_t k = 0; k <= N; ++k) a[k] += o.a[k];
        return *this;
    }
    Taylor& operator-=(const Taylor& o) {
        for (std::size_t k = 0; k <= N; ++k) a[k] -= o.a[k];
        return *this;
    }
    Taylor& operator*=(const Taylor& o) { return *this = *this * o; }
    Taylor& operator/=(const Taylor& o) { return *this = *this / o; }

    friend Taylor operator+(Taylor x, const Taylor& y) { return x += y; }
    friend Taylor operator-(Taylor x, const Taylor& y) { return x -= y; }
    friend Taylor operator-(const Taylor& x) {
        Taylor r;
        for (std::size_t k = 0; k <= N; ++k) r.a[k] = -x.a[k];
        return r;
    }
    friend Taylor operator*(const Taylor& x, const Taylor& y) {
        Taylor r;
        for (std::size_t k = 0; k <= N; ++k) {
            T s{};
            for (std::size_t j = 0; j <= k; ++j) s += x.a[j] * y.a[k - j];
            r.a[k] = s;
        }
        return r;
    }
    friend Taylor operator/(const Taylor& x, const Taylor& y) {
        Taylor r;
        for (std::size_t k = 0; k <= N; ++k) {
            T s = x.a[k];
            for (std::size_t j = 1; j <= k; ++j) s -= y.a[j] * r.a[k - j];
            r.a[k] = s / y.a[0];
        }
        return r;
    }
};

template <class T, std::size_t N>
Taylor<T, N> exp(const Taylor<T, N>& x) {
    using std::exp;
    // r' = x' r, solved coefficient by coefficient
    Taylor<T, N> r;
    r.a[0] = exp(x.a[0]);
    for (std::size_t k = 1; k <= N; ++k) {
        T s{};
        for (std::size_t j = 1; j <= k; ++j) s += static_cast<double>(j) * x.a[j] * r.a[k - j];
        r.a[k] = s / static_cast<double>(k);
    }
    return r;
}

template <class T, std::size_t N>
Taylor<std::complex<T>, N> to_complex(const Taylor<T, N>& x) {
    Taylor<std::complex<T>, N> r;
    for (std::size_t k = 0; k <= N; ++k) r.a[k] = x.a[k];
    return r;
}

}  // namespace alfven
