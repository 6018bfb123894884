#pragma once

// Radial profiles f(t), t = log|z|^2, written as linear combinations of a few
// analytic building blocks so that every derivative is exact.

#include <vector>

#include "triples/geometry/taylor.hpp"

namespace triples::geometry {

/// mult * log(1 + e^t).
struct Softplus {
    double mult = 1.0;
};

/// amp * exp(-u^2) with u = (s - center)/width in the moment coordinate
/// s = e^t / (1 + e^t) in (0, 1). Smooth on P^1 because it is smooth in s.
struct Bump {
    double center = 0.5;
    double width = 0.2;
    double amp = 0.0;
};

/// scale * log sum_j exp(j t + log_weights[j]).
struct LogSumExp {
    std::vector<double> log_weights;
    double scale = 1.0;
};

class Profile {
public:
    Profile() = default;

    static Profile softplus(double mult);
    static Profile log_sum_exp(std::vector<double> log_weights, double scale);

    Profile& add(const Softplus& s, double coef = 1.0);
    Profile& add(const Bump& b, double coef = 1.0);
    Profile& add(const LogSumExp& l, double coef = 1.0);
    Profile& add_constant(double c) {
        constant_ += c;
        return *this;
    }

    /// coef_a * a + coef_b * b; terms below `prune` in coefficient are dropped.
    static Profile combine(const Profile& a, double coef_a, const Profile& b, double coef_b,
                           double prune = 0.0);

    /// Taylor expansion of f around t0.
    Taylor taylor(double t0) const;
    double value(double t0) const;

    /// Asymptotic slope f'(+inf) - f'(-inf); equals the degree of the class.
    double slope_range() const;

    std::size_t term_count() const {
        return softplus_.size() + bumps_.size() + lse_.size();
    }
    double constant() const { return constant_; }

private:
    double constant_ = 0.0;
    std::vector<std::pair<double, Softplus>> softplus_;
    std::vector<std::pair<double, Bump>> bumps_;
    std::vector<std::pair<double, LogSumExp>> lse_;
};

Taylor softplus_taylor(double t0);
/// The moment coordinate s(t) = e^t / (1 + e^t).
Taylor moment_taylor(double t0);
Taylor bump_taylor(const Bump& b, double t0);
Taylor log_sum_exp_taylor(const LogSumExp& l, double t0);

}  // namespace triples::geometry
