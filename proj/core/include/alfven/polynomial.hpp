#pragma once

#include <algorithm>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <vector>

namespace alfven {

using cplx = std::complex<double>;

// Dense polynomial with ascending coefficients, p(y) = sum c[k] y^k.
template <class T>
class Polynomial {
public:
    Polynomial() = default;
    Polynomial(std::initializer_list<T> c) : c_(c) {}
    explicit Polynomial(std::vector<T> c) : c_(std::move(c)) {}

    const std::vector<T>& coeffs() const { return c_; }
    std::size_t size() const { return c_.size(); }
    bool empty() const { return c_.empty(); }
    int degree() const { return static_cast<int>(c_.size()) - 1; }

    T coeff(std::size_t k) const { return k < c_.size() ? c_[k] : T{}; }

    // Horner; the argument type may be a jet or a complex number.
    template <class X>
    auto operator()(const X& x) const {
        using R = decltype(T{} * x);
        R acc = R(T{});
        for (std::size_t k = c_.size(); k-- > 0;) acc = acc * x + c_[k];
        return acc;
    }

    Polynomial derivative(int order = 1) const {
        std::vector<T> d = c_;
        for (int o = 0; o < order; ++o) {
            if (d.size() <= 1) return Polynomial{T{}};
            std::vector<T> next(d.size() - 1);
            for (std::size_t k = 1; k < d.size(); ++k)
                next[k - 1] = d[k] * static_cast<double>(k);
            d = std::move(next);
        }
        return Polynomial(std::move(d));
    }

    // Divide by y^k; the k lowest coefficients are dropped and must be zero.
    Polynomial shift_down(std::size_t k) const {
        if (k == 0) return *this;
        if (c_.size() <= k) return Polynomial{T{}};
        return Polynomial(std::vector<T>(c_.begin() + static_cast<long>(k), c_.end()));
    }

    template <class U>
    Polynomial<U> cast() const {
        std::vector<U> out(c_.begin(), c_.end());
        return Polynomial<U>(std::move(out));
    }

    friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
        std::vector<T> r(std::max(a.size(), b.size()), T{});
        for (std::size_t k = 0; k < a.size(); ++k) r[k] += a.c_[k];
        for (std::size_t k = 0; k < b.size(); ++k) r[k] += b.c_[k];
        return Polynomial(std::move(r));
    }
    friend Polynomial operator-(const Polynomial& a, const Polynomial& b) {
        std::vector<T> r(std::max(a.size(), b.size()), T{});
        for (std::size_t k = 0; k < a.size(); ++k) r[k] += a.c_[k];
        for (std::size_t k = 0; k < b.size(); ++k) r[k] -= b.c_[k];
        return Polynomial(std::move(r));
    }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        if (a.empty() || b.empty()) return Polynomial{T{}};
        std::vector<T> r(a.size() + b.size() - 1, T{});
        for (std::size_t i = 0; i < a.size(); ++i)
            for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
        return Polynomial(std::move(r));
    }
    friend Polynomial operator*(const T& s, const Polynomial& a) {
        std::vector<T> r = a.c_;
        for (auto& v : r) v *= s;
        return Polynomial(std::move(r));
    }
    friend Polynomial operator-(const Polynomial& a) { return T(-1) * a; }

    T& operator[](std::size_t k) { return c_[k]; }
    const T& operator[](std::size_t k) const { return c_[k]; }

private:
    std::vector<T> c_;
};

using RealPoly = Polynomial<double>;
using ComplexPoly = Polynomial<cplx>;

}  // namespace alfven
