#include "triples/geometry/taylor.hpp"

namespace triples::geometry {

double Taylor::derivative_value(int i) const {
    double f = 1.0;
    for (int k = 2; k <= i; ++k) f *= k;
    return c_[static_cast<std::size_t>(i)] * f;
}

Taylor Taylor::derivative() const {
    Taylor d;
    for (int k = 0; k < order; ++k) d.c_[k] = (k + 1) * c_[k + 1];
    return d;
}

Taylor& Taylor::operator+=(const Taylor& o) {
    for (int k = 0; k <= order; ++k) c_[k] += o.c_[k];
    return *this;
}

Taylor& Taylor::operator-=(const Taylor& o) {
    for (int k = 0; k <= order; ++k) c_[k] -= o.c_[k];
    return *this;
}

Taylor& Taylor::operator*=(double s) {
    for (auto& v : c_) v *= s;
    return *this;
}

Taylor operator*(const Taylor& a, const Taylor& b) {
    Taylor p;
    for (int i = 0; i <= Taylor::order; ++i) {
        if (a.c_[i] == 0.0) continue;
        for (int j = 0; i + j <= Taylor::order; ++j) p.c_[i + j] += a.c_[i] * b.c_[j];
    }
    return p;
}

Taylor operator/(const Taylor& a, const Taylor& b) {
    Taylor q;
    for (int k = 0; k <= Taylor::order; ++k) {
        double acc = a.c_[k];
        for (int j = 1; j <= k; ++j) acc -= b.c_[j] * q.c_[k - j];
        q.c_[k] = acc / b.c_[0];
    }
    return q;
}

Taylor exp(const Taylor& a) {
    Taylor b(std::exp(a[0]));
    for (int k = 1; k <= Taylor::order; ++k) {
        double acc = 0.0;
        for (int j = 1; j <= k; ++j) acc += j * a[j] * b[k - j];
        b[k] = acc / k;
    }
    return b;
}

namespace {

// Higher coefficients of log(a) given a[0] and the already-set constant.
void log_tail(const Taylor& a, Taylor& b) {
    for (int k = 1; k <= Taylor::order; ++k) {
        double acc = a[k];
        for (int j = 1; j < k; ++j) acc -= (static_cast<double>(j) / k) * b[j] * a[k - j];
        b[k] = acc / a[0];
    }
}

}  // namespace

Taylor log(const Taylor& a) {
    Taylor b(std::log(a[0]));
    log_tail(a, b);
    return b;
}

Taylor log1p(const Taylor& w) {
    Taylor a = w;
    a[0] += 1.0;
    Taylor b(std::log1p(w[0]));
    log_tail(a, b);
    return b;
}

}  // namespace triples::geometry
