#include "triples/geometry/profile.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace triples::geometry {

Taylor softplus_taylor(double t0) {
    const Taylor t = Taylor::variable(t0);
    // Expand in the decaying exponential on each side to keep derivatives accurate.
    if (t0 >= 0.0) return t + log1p(exp(-t));
    return log1p(exp(t));
}

Taylor moment_taylor(double t0) {
    // s = 1 / (1 + e^{-t}), expanded in the decaying exponential.
    if (t0 >= 0.0) return Taylor(1.0) / (Taylor(1.0) + exp(-Taylor::variable(t0)));
    const Taylor e = exp(Taylor::variable(t0));
    return e / (Taylor(1.0) + e);
}

Taylor bump_taylor(const Bump& b, double t0) {
    const Taylor u = (moment_taylor(t0) + (-b.center)) * (1.0 / b.width);
    return exp(-(u * u)) * b.amp;
}

Taylor log_sum_exp_taylor(const LogSumExp& l, double t0) {
    const std::size_t m = l.log_weights.size();
    std::vector<double> a(m);
    double top = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < m; ++j) {
        a[j] = static_cast<double>(j) * t0 + l.log_weights[j];
        top = std::max(top, a[j]);
    }
    std::vector<double> p(m);
    double z = 0.0;
    for (std::size_t j = 0; j < m; ++j) z += (p[j] = std::exp(a[j] - top));
    double mu = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        p[j] /= z;
        mu += p[j] * static_cast<double>(j);
    }
    // sum_j p_j e^{(j - mu) tau} = 1 + sum_{i >= 2} m_i tau^i / i!.
    Taylor v;
    for (std::size_t j = 0; j < m; ++j) {
        const double d = static_cast<double>(j) - mu;
        double pw = p[j] * d;
        double fact = 1.0;
        for (int i = 2; i <= Taylor::order; ++i) {
            pw *= d;
            fact *= i;
            v[i] += pw / fact;
        }
    }
    Taylor out = log1p(v);
    out[0] += top + std::log(z);
    out[1] += mu;
    return out * l.scale;
}

Profile Profile::softplus(double mult) {
    Profile p;
    p.add(Softplus{mult});
    return p;
}

Profile Profile::log_sum_exp(std::vector<double> log_weights, double scale) {
    Profile p;
    p.add(LogSumExp{std::move(log_weights), scale});
    return p;
}

Profile& Profile::add(const Softplus& s, double coef) {
    if (softplus_.empty()) softplus_.push_back({1.0, Softplus{0.0}});
    softplus_.front().second.mult += coef * s.mult;
    return *this;
}

Profile& Profile::add(const Bump& b, double coef) {
    bumps_.push_back({coef, b});
    return *this;
}

Profile& Profile::add(const LogSumExp& l, double coef) {
    lse_.push_back({coef, l});
    return *this;
}

Profile Profile::combine(const Profile& a, double coef_a, const Profile& b, double coef_b,
                         double prune) {
    Profile out;
    out.constant_ = coef_a * a.constant_ + coef_b * b.constant_;
    for (const auto* src : {&a, &b}) {
        const double coef = (src == &a) ? coef_a : coef_b;
        for (const auto& [c, s] : src->softplus_) out.add(s, c * coef);
        for (const auto& [c, bump] : src->bumps_)
            if (std::abs(c * coef) > prune) out.bumps_.push_back({c * coef, bump});
        for (const auto& [c, l] : src->lse_) {
            // Identical terms are merged so repeated mixing does not grow the profile.
            auto same = std::find_if(out.lse_.begin(), out.lse_.end(), [&](const auto& e) {
                return e.second.scale == l.scale && e.second.log_weights == l.log_weights;
            });
            if (same != out.lse_.end()) {
                same->first += c * coef;
            } else {
                out.lse_.push_back({c * coef, l});
            }
        }
    }
    std::erase_if(out.lse_, [&](const auto& e) { return !(std::abs(e.first) > prune); });
    return out;
}

Taylor Profile::taylor(double t0) const {
    Taylor f(constant_);
    for (const auto& [c, s] : softplus_)
        if (s.mult != 0.0) f += softplus_taylor(t0) * (c * s.mult);
    for (const auto& [c, b] : bumps_) f += bump_taylor(b, t0) * c;
    for (const auto& [c, l] : lse_) f += log_sum_exp_taylor(l, t0) * c;
    return f;
}

double Profile::value(double t0) const { return taylor(t0).value(); }

double Profile::slope_range() const {
    double s = 0.0;
    for (const auto& [c, sp] : softplus_) s += c * sp.mult;
    for (const auto& [c, l] : lse_) {
        long lo = -1, hi = -1;
        for (std::size_t j = 0; j < l.log_weights.size(); ++j) {
            if (std::isfinite(l.log_weights[j])) {
                if (lo < 0) lo = static_cast<long>(j);
                hi = static_cast<long>(j);
            }
        }
        if (lo >= 0) s += c * l.scale * static_cast<double>(hi - lo);
    }
    return s;
}

}  // namespace triples::geometry
