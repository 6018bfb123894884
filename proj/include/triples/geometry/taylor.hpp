#pragma once

// Univariate truncated Taylor expansions, f(t0 + tau) = sum_i c[i] tau^i, used to
// differentiate radial profiles exactly.

#include <array>
#include <cmath>

namespace triples::geometry {

constexpr int kTaylorOrder = 10;

class Taylor {
public:
    static constexpr int order = kTaylorOrder;

    Taylor() { c_.fill(0.0); }
    explicit Taylor(double value) {
        c_.fill(0.0);
        c_[0] = value;
    }
    /// The independent variable t0 + tau.
    static Taylor variable(double t0) {
        Taylor t(t0);
        t.c_[1] = 1.0;
        return t;
    }

    double operator[](int i) const { return c_[static_cast<std::size_t>(i)]; }
    double& operator[](int i) { return c_[static_cast<std::size_t>(i)]; }
    double value() const { return c_[0]; }
    /// i-th derivative at t0.
    double derivative_value(int i) const;

    Taylor derivative() const;

    Taylor& operator+=(const Taylor& o);
    Taylor& operator-=(const Taylor& o);
    Taylor& operator*=(double s);
    Taylor& operator+=(double s) {
        c_[0] += s;
        return *this;
    }

    friend Taylor operator+(Taylor a, const Taylor& b) { return a += b; }
    friend Taylor operator-(Taylor a, const Taylor& b) { return a -= b; }
    friend Taylor operator-(Taylor a) { return a *= -1.0; }
    friend Taylor operator*(Taylor a, double s) { return a *= s; }
    friend Taylor operator*(double s, Taylor a) { return a *= s; }
    friend Taylor operator+(Taylor a, double s) { return a += s; }
    friend Taylor operator*(const Taylor& a, const Taylor& b);
    friend Taylor operator/(const Taylor& a, const Taylor& b);

private:
    std::array<double, kTaylorOrder + 1> c_;
};

Taylor exp(const Taylor& a);
Taylor log(const Taylor& a);
/// log(1 + w) with the constant term computed by std::log1p.
Taylor log1p(const Taylor& w);

}  // namespace triples::geometry
