#include "triples/jet/local_model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "triples/error.hpp"

namespace triples::jet {

namespace {

// Exponent with the x and x̄ halves exchanged.
std::vector<int> swapped(std::span<const int> e, int n) {
    std::vector<int> s(e.begin(), e.end());
    for (int j = 0; j < n; ++j) std::swap(s[j], s[n + j]);
    return s;
}

double pair_defect(const MultiSeries& a, const MultiSeries& b, int n) {
    const auto& t = a.table();
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const auto s = swapped(t.exponent(i), n);
        d = std::max(d, std::abs(a.coeffs()[i] - std::conj(b.coeff(s))));
    }
    return d;
}

void require_layout(int num_vars, int n) {
    if (num_vars != 2 * n) {
        throw Error(ErrorKind::Shape, "jet must have 2n variables, got " + std::to_string(num_vars));
    }
}

}  // namespace

double hermitian_defect(const MultiSeries& jet, int n) {
    require_layout(jet.num_vars(), n);
    return pair_defect(jet, jet, n);
}

double hermitian_defect(const MatrixSeries& jet, int n) {
    require_layout(jet.num_vars(), n);
    double d = 0.0;
    for (int i = 0; i < jet.rows(); ++i)
        for (int j = 0; j < jet.cols(); ++j) d = std::max(d, pair_defect(jet(i, j), jet(j, i), n));
    return d;
}

void check_normalized(const LocalModel& model, double tol) {
    const int n = model.n;
    require_layout(model.phi_jet.num_vars(), n);
    if (model.degree_cap < 6 || model.phi_jet.degree_cap() != model.degree_cap ||
        model.H_jet.degree_cap() != model.degree_cap) {
        throw Error(ErrorKind::Capacity, "local model needs a shared degree cap of at least 6");
    }
    if (model.H_jet.rows() != model.r || model.H_jet.cols() != model.r ||
        model.H_jet.num_vars() != 2 * n) {
        throw Error(ErrorKind::Shape, "fiber metric jet has the wrong shape");
    }
    const auto& t = model.phi_jet.table();
    for (std::size_t i = 0; i < t.size() && t.degree(i) <= 3; ++i) {
        auto e = t.exponent(i);
        int hol = 0;
        for (int j = 0; j < n; ++j) hol += e[j];
        const int antihol = t.degree(i) - hol;
        Complex expected = 0.0;
        if (t.degree(i) == 2 && hol == 1) {
            bool diag = false;
            for (int j = 0; j < n; ++j) diag = diag || (e[j] == 1 && e[n + j] == 1);
            expected = diag ? 1.0 : 0.0;
        }
        const bool constrained = t.degree(i) <= 2 || (hol > 0 && antihol > 0);
        if (constrained && std::abs(model.phi_jet.coeffs()[i] - expected) > tol) {
            throw Error(ErrorKind::Shape, "potential jet violates the normalization at the origin",
                        std::nullopt, "phi_jet");
        }
    }
    const auto& th = model.H_jet(0, 0).table();
    for (std::size_t i = 0; i < th.size() && th.degree(i) <= 1; ++i) {
        Eigen::MatrixXcd c = model.H_jet.coeff(th.exponent(i));
        if (i == 0) c -= Eigen::MatrixXcd::Identity(model.r, model.r);
        if (c.cwiseAbs().maxCoeff() > tol) {
            throw Error(ErrorKind::Shape, "fiber metric jet violates the normalization at the origin",
                        std::nullopt, "H_jet");
        }
    }
    if (hermitian_defect(model.phi_jet, n) > tol || hermitian_defect(model.H_jet, n) > tol) {
        throw Error(ErrorKind::Shape, "model jets are not hermitian symmetric");
    }
}

MultiSeries polarize(const MultiSeries& jet, int n, double tol) {
    if (hermitian_defect(jet, n) > tol * std::max(1.0, jet.max_abs())) {
        throw Error(ErrorKind::Shape, "polarize: jet is not hermitian symmetric");
    }
    return jet;
}

MatrixSeries polarize(const MatrixSeries& jet, int n, double tol) {
    if (hermitian_defect(jet, n) > tol * std::max(1.0, jet.max_abs())) {
        throw Error(ErrorKind::Shape, "polarize: matrix jet is not hermitian symmetric");
    }
    return jet;
}

MultiSeries restrict_to_diagonal(const MultiSeries& psi, int n) {
    require_layout(psi.num_vars(), n);
    return psi;
}

std::vector<MultiSeries> build_theta(const MultiSeries& psi, int n) {
    require_layout(psi.num_vars(), n);
    const int cap = psi.degree_cap();
    std::vector<MultiSeries> theta;
    std::vector<double> fact(static_cast<std::size_t>(cap) + 2, 1.0);
    for (std::size_t k = 1; k < fact.size(); ++k) fact[k] = fact[k - 1] * static_cast<double>(k);
    auto binom = [&](int a, int b) { return fact[a] / (fact[b] * fact[a - b]); };

    for (int j = 0; j < n; ++j) {
        const MultiSeries d = psi.derivative(j);
        const auto& t = d.table();
        MultiSeries out(3 * n, cap);
        std::vector<int> c(static_cast<std::size_t>(n));
        std::vector<int> e(static_cast<std::size_t>(3 * n));
        for (std::size_t i = 0; i < d.size(); ++i) {
            const Complex coef = d.coeffs()[i];
            if (coef == Complex{}) continue;
            auto a = t.exponent(i);
            int total = 0;
            for (int v = 0; v < n; ++v) total += a[v];
            // Split w^a into x^c y^(a-c); the t-integral is a beta function.
            std::fill(c.begin(), c.end(), 0);
            while (true) {
                int cx = 0;
                double weight = 1.0;
                for (int v = 0; v < n; ++v) {
                    cx += c[v];
                    weight *= binom(a[v], c[v]);
                }
                weight *= fact[cx] * fact[total - cx] / fact[total + 1];
                for (int v = 0; v < n; ++v) {
                    e[v] = c[v];
                    e[n + v] = a[v] - c[v];
                    e[2 * n + v] = a[n + v];
                }
                const long idx = out.table().index_of(e);
                if (idx >= 0) out.coeffs()[idx] += weight * coef;
                int v = 0;
                while (v < n && c[v] == a[v]) c[v++] = 0;
                if (v == n) break;
                ++c[v];
            }
        }
        theta.push_back(std::move(out));
    }
    return theta;
}

std::vector<MultiSeries> invert_map(const std::vector<MultiSeries>& theta, int num_params) {
    const int n = static_cast<int>(theta.size());
    if (n == 0) throw Error(ErrorKind::Shape, "invert_map: empty map");
    const int nv = theta[0].num_vars();
    const int cap = theta[0].degree_cap();
    if (nv != num_params + n) {
        throw Error(ErrorKind::Shape, "invert_map: variable count must be num_params + map size");
    }
    for (const auto& th : theta) {
        if (!th.same_space(theta[0])) throw Error(ErrorKind::Shape, "invert_map: mixed spaces");
        if (std::abs(th.constant_term()) > 1e-14) {
            throw Error(ErrorKind::Inversion, "invert_map: map does not vanish at the origin");
        }
    }
    Eigen::MatrixXcd jac(n, n);
    std::vector<int> e(static_cast<std::size_t>(nv), 0);
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            e[num_params + b] = 1;
            jac(a, b) = theta[a].coeff(e);
            e[num_params + b] = 0;
        }
    }
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(jac);
    lu.setThreshold(1e-13);
    if (!lu.isInvertible()) {
        throw Error(ErrorKind::Inversion, "invert_map: z-Jacobian at the origin is singular");
    }
    const Eigen::MatrixXcd jinv = lu.inverse();

    // theta = J z + N(p, z); iterate z <- J^{-1}(theta - N(p, z)).
    std::vector<MultiSeries> nonlin = theta;
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            e[num_params + b] = 1;
            const long idx = nonlin[a].table().index_of(e);
            nonlin[a].coeffs()[idx] = 0.0;
            e[num_params + b] = 0;
        }
    }
    std::vector<MultiSeries> subst;
    for (int v = 0; v < nv; ++v) subst.push_back(MultiSeries::variable(nv, cap, v));
    std::vector<MultiSeries> z(subst.begin() + num_params, subst.end());
    for (int a = 0; a < n; ++a) {
        z[a] = MultiSeries(nv, cap);
        for (int b = 0; b < n; ++b) z[a] += subst[num_params + b] * jinv(a, b);
    }
    for (int iter = 0; iter < cap; ++iter) {
        for (int a = 0; a < n; ++a) subst[num_params + a] = z[a];
        std::vector<MultiSeries> rhs;
        for (int a = 0; a < n; ++a) {
            MultiSeries th_var = MultiSeries::variable(nv, cap, num_params + a);
            rhs.push_back(th_var - series_compose(nonlin[a], subst));
        }
        for (int a = 0; a < n; ++a) {
            z[a] = MultiSeries(nv, cap);
            for (int b = 0; b < n; ++b) z[a] += rhs[b] * jinv(a, b);
        }
    }
    return z;
}

}  // namespace triples::jet
