#include "triples/local/bergman_local.hpp"

#include <string>

#include "triples/error.hpp"

namespace triples::local {

using jet::Complex;

namespace {

constexpr int kMinCap = 6;

void require_cap(const LocalModel& model, const char* what) {
    if (model.degree_cap < kMinCap) {
        throw Error(ErrorKind::Capacity, std::string(what) + " needs a degree cap of at least 6, got " +
                                             std::to_string(model.degree_cap));
    }
}

std::vector<int> mixed_pair(int n, int j) {
    std::vector<int> e(static_cast<std::size_t>(2 * n), 0);
    e[j] = 1;
    e[n + j] = 1;
    return e;
}

MultiSeries var(int nv, int cap, int v) { return MultiSeries::variable(nv, cap, v); }

std::vector<int> range_vars(int from, int to) {
    std::vector<int> v;
    for (int i = from; i < to; ++i) v.push_back(i);
    return v;
}

MatrixSeries drop_vars(const MatrixSeries& m, std::span<const int> vars) {
    MatrixSeries out = m;
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) out(i, j) = jet::drop_vars(m(i, j), vars);
    return out;
}

// Conjugate transpose of a jet in (x, x̄): coefficient c_{ab}[e] -> conj(c_{ba}[swap e]).
MatrixSeries adjoint(const MatrixSeries& m, int n) {
    MatrixSeries out(m.cols(), m.rows(), m.num_vars(), m.degree_cap());
    const auto& t = m(0, 0).table();
    std::vector<int> s(static_cast<std::size_t>(2 * n));
    for (int a = 0; a < m.rows(); ++a) {
        for (int b = 0; b < m.cols(); ++b) {
            for (std::size_t i = 0; i < t.size(); ++i) {
                auto e = t.exponent(i);
                for (int j = 0; j < n; ++j) {
                    s[j] = e[n + j];
                    s[n + j] = e[j];
                }
                out(b, a).coeffs()[static_cast<std::size_t>(t.index_of(s))] = std::conj(m(a, b).coeffs()[i]);
            }
        }
    }
    return out;
}

struct SliceContext {
    int n;
    int cap;
    MultiSeries psi;
    MatrixSeries G;
    std::vector<MultiSeries> theta;
    std::vector<MultiSeries> theta_slice;
    std::vector<MultiSeries> z;
    // Substitution (y, z) -> (y, z(y, theta)).
    std::vector<MultiSeries> subst;
    MatrixSeries Psi;
};

SliceContext make_slice(const LocalModel& model) {
    const int n = model.n;
    const int cap = model.degree_cap;
    const int nv = 2 * n;
    SliceContext c{n, cap, jet::polarize(model.phi_jet, n), jet::polarize(model.H_jet, n), {}, {}, {}, {},
                   MatrixSeries(n, n, nv, cap)};
    c.theta = jet::build_theta(c.psi, n);
    std::vector<int> xs = range_vars(0, n);
    std::vector<int> to_slice(static_cast<std::size_t>(3 * n), 0);
    for (int j = 0; j < n; ++j) {
        to_slice[n + j] = j;
        to_slice[2 * n + j] = n + j;
    }
    for (int j = 0; j < n; ++j) {
        c.theta_slice.push_back(
            jet::remap_vars(jet::drop_vars(c.theta[j], xs), nv, cap, to_slice));
    }
    c.z = jet::invert_map(c.theta_slice, n);
    for (int j = 0; j < n; ++j) c.subst.push_back(var(nv, cap, j));
    for (int j = 0; j < n; ++j) c.subst.push_back(c.z[j]);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) c.Psi(a, b) = c.psi.derivative(n + a).derivative(b);
    return c;
}

MultiSeries to_ytheta(const SliceContext& c, const MultiSeries& f) {
    return jet::series_compose(f, c.subst);
}

MatrixSeries to_ytheta(const SliceContext& c, const MatrixSeries& f) {
    return jet::matrix_series_compose(f, c.subst);
}

Eigen::MatrixXcd scalar(Complex v) {
    Eigen::MatrixXcd m(1, 1);
    m(0, 0) = v;
    return m;
}

}  // namespace

CurvatureData curvature_data(const LocalModel& model) {
    require_cap(model, "curvature data");
    jet::check_normalized(model);
    const int n = model.n;
    const int r = model.r;
    const int nv = 2 * n;
    const int cap = model.degree_cap;
    const MultiSeries& phi = model.phi_jet;
    const MatrixSeries& H = model.H_jet;

    MatrixSeries g(n, n, nv, cap);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) g(j, k) = phi.derivative(j).derivative(n + k);
    const MatrixSeries ginv = jet::matrix_series_inverse(g);
    const MatrixSeries Psi = g.transpose();
    const MatrixSeries Psi_inv = jet::matrix_series_inverse(Psi);
    const MultiSeries logdet = jet::log_series(jet::matrix_series_det(g));
    const MatrixSeries Hinv = jet::matrix_series_inverse(H);

    CurvatureData d;
    d.n = n;
    d.r = r;
    MultiSeries S(nv, cap);
    MatrixSeries iLF(r, r, nv, cap);
    for (int j = 0; j < n; ++j) {
        const MatrixSeries eta = Psi_inv * Psi.derivative(j);
        const MatrixSeries theta = Hinv * H.derivative(j);
        for (int k = 0; k < n; ++k) {
            d.R.push_back(eta.derivative(n + k).constant_term() * Complex(-1.0));
            const MatrixSeries Fjk = theta.derivative(n + k) * Complex(-1.0);
            d.F.push_back(Fjk.constant_term());
            const MultiSeries trR = logdet.derivative(j).derivative(n + k) * Complex(-1.0);
            S += ginv(k, j) * trR;
            iLF += ginv(k, j) * Fjk;
        }
    }
    d.S = S.constant_term().real();
    d.lapS = 0.0;
    d.lapF = Eigen::MatrixXcd::Zero(r, r);
    for (int j = 0; j < n; ++j) {
        const auto e = mixed_pair(n, j);
        d.lapS += -2.0 * S.coeff(e).real();
        d.lapF -= iLF.coeff(e);
    }
    return d;
}

CurvatureInvariants curvature_invariants(const LocalModel& model) {
    return invariants_from(curvature_data(model));
}

MultiSeries dd(const MultiSeries& f, int n) {
    MultiSeries out(f.num_vars(), f.degree_cap());
    for (int j = 0; j < n; ++j) out += f.derivative(j).derivative(n + j);
    return out;
}

MatrixSeries dd(const MatrixSeries& f, int n) {
    MatrixSeries out(f.rows(), f.cols(), f.num_vars(), f.degree_cap());
    for (int j = 0; j < n; ++j) out += f.derivative(j).derivative(n + j);
    return out;
}

LocalDeltas build_deltas(const LocalModel& model) {
    require_cap(model, "build_deltas");
    jet::check_normalized(model);
    const SliceContext c = make_slice(model);
    const int n = c.n;
    const int nv = 2 * n;

    MatrixSeries dzt(n, n, nv, c.cap);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) dzt(a, b) = c.theta_slice[a].derivative(n + b);
    const MultiSeries delta0_yz =
        jet::matrix_series_det(c.Psi) * jet::reciprocal(jet::matrix_series_det(dzt));

    const std::vector<int> ys = range_vars(0, n);
    const MatrixSeries G0 = drop_vars(c.G, ys);
    const MatrixSeries dgp_yz = jet::matrix_series_inverse(G0) * c.G;

    return LocalDeltas{c.theta, c.z, to_ytheta(c, delta0_yz), to_ytheta(c, dgp_yz)};
}

CoefficientSet bbs_coefficients(const LocalModel& model, BbsDiagnostics* diag) {
    require_cap(model, "bbs_coefficients");
    const LocalDeltas deltas = build_deltas(model);
    const SliceContext c = make_slice(model);
    const int n = model.n;
    const int r = model.r;
    const std::vector<int> ys = range_vars(0, n);

    const MatrixSeries DG = deltas.Delta0 * deltas.DeltaGprime;
    // beta(theta) = B1(0, z(0, 0, theta)).
    const MatrixSeries beta = drop_vars(dd(DG, n) * Complex(-1.0), ys);
    // theta(0, 0, z) turns beta into B1 as a function of z.
    std::vector<MultiSeries> theta0;
    for (int j = 0; j < n; ++j) theta0.push_back(var(2 * n, c.cap, j));
    for (int j = 0; j < n; ++j) theta0.push_back(jet::drop_vars(c.theta_slice[j], ys));
    const MatrixSeries B1z = jet::matrix_series_compose(beta, theta0);
    const MatrixSeries B1 = to_ytheta(c, B1z);

    const MatrixSeries dd1 = dd(B1 * DG, n);
    const MatrixSeries dd2 = dd(dd(DG, n), n);
    CoefficientSet out;
    out.B0 = Eigen::MatrixXcd::Identity(r, r);
    out.B1 = beta.constant_term();
    out.B2 = -(dd1.constant_term() + 0.5 * dd2.constant_term());
    if (diag) {
        diag->dd_B1 = dd(B1, n).constant_term();
        diag->B1_of_z = B1z;
    }
    return out;
}

CoefficientSet closed_form_coefficients(const CurvatureInvariants& inv) {
    const int r = inv.r;
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(r, r);
    CoefficientSet out;
    out.B0 = id;
    out.B1 = inv.iLambdaF + 0.5 * inv.S * id;
    out.B2 = -0.5 * inv.lapF - 0.5 * inv.LFLF - 0.5 * inv.FF + 0.5 * inv.S * inv.iLambdaF -
             0.5 * inv.FtrR - (inv.lapS / 6.0) * id +
             ((inv.normR2 - 4.0 * inv.normTrR2 + 3.0 * inv.S * inv.S) / 24.0) * id;
    return out;
}

std::vector<AppendixTerm> appendix_terms(const LocalModel& model) {
    require_cap(model, "appendix_terms");
    const CurvatureData cd = curvature_data(model);
    const CurvatureInvariants inv = invariants_from(cd);
    const LocalDeltas deltas = build_deltas(model);
    const SliceContext c = make_slice(model);
    const int n = model.n;
    const int r = model.r;
    const int nv = 2 * n;
    const int cap = c.cap;
    const std::vector<int> ys = range_vars(0, n);

    const MatrixSeries Psi_inv = jet::matrix_series_inverse(c.Psi);
    const MatrixSeries G_inv = jet::matrix_series_inverse(c.G);
    std::vector<MatrixSeries> P, Q;
    for (int k = 0; k < n; ++k) {
        P.push_back(Psi_inv * c.Psi.derivative(k));
        Q.push_back(G_inv * c.G.derivative(k));
    }
    auto at_base = [&](const MultiSeries& f) { return to_ytheta(c, jet::drop_vars(f, ys)); };
    auto at_base_m = [&](const MatrixSeries& f) { return to_ytheta(c, drop_vars(f, ys)); };

    MultiSeries c1(nv, cap), c2(nv, cap), c3(nv, cap), c4(nv, cap);
    MatrixSeries d1(r, r, nv, cap), d2(r, r, nv, cap), d3(r, r, nv, cap);
    for (int k = 0; k < n; ++k) {
        const MultiSeries yk = var(nv, cap, k);
        c1 += at_base(P[k].trace()) * yk * Complex(0.5);
        d1 += yk * at_base_m(Q[k]);
        for (int m = 0; m < n; ++m) {
            const MultiSeries ykm = yk * var(nv, cap, m);
            c2 += at_base(P[m].derivative(k).trace()) * ykm * Complex(1.0 / 3.0);
            c3 += at_base(P[k].trace() * P[m].trace()) * ykm * Complex(1.0 / 8.0);
            c4 += at_base((P[k] * P[m]).trace()) * ykm * Complex(-1.0 / 24.0);
            d2 += ykm * at_base_m(Q[m].derivative(k)) * Complex(0.5);
            d3 += ykm * at_base_m(Q[k] * Q[m]) * Complex(0.5);
        }
    }
    auto dd2s = [&](const MultiSeries& f) { return scalar(dd(dd(f, n), n).constant_term()); };
    auto dd2m = [&](const MatrixSeries& f) { return dd(dd(f, n), n).constant_term(); };

    const double S = inv.S, T = inv.normTrR2, R2 = inv.normR2;
    Eigen::MatrixXcd sumR = Eigen::MatrixXcd::Zero(n, n);
    for (int k = 0; k < n; ++k) sumR += cd.R_at(k, k);
    Eigen::MatrixXcd d1_rhs = Eigen::MatrixXcd::Zero(r, r);
    Eigen::MatrixXcd d2_rhs = inv.lapF;
    for (int j = 0; j < n; ++j) {
        for (int l = 0; l < n; ++l) {
            d1_rhs -= cd.F_at(j, l) * sumR(j, l);
            d2_rhs += sumR(l, j) * cd.F_at(l, j);
        }
    }

    std::vector<AppendixTerm> out;
    out.push_back({"DD_Delta0", scalar(dd(deltas.Delta0, n).constant_term()), scalar(-0.5 * S)});
    out.push_back({"DD_DeltaGprime", dd(deltas.DeltaGprime, n).constant_term(), -inv.iLambdaF});
    out.push_back({"c1", dd2s(c1), scalar(-0.5 * T)});
    out.push_back({"c2", dd2s(c2), scalar(inv.lapS / 3.0 + 2.0 * T / 3.0)});
    out.push_back({"c3", dd2s(c3), scalar(0.25 * S * S + 0.25 * T)});
    out.push_back({"c4", dd2s(c4), scalar(-T / 12.0 - R2 / 12.0)});
    out.push_back({"d1", dd2m(d1), d1_rhs});
    out.push_back({"d2", dd2m(d2), d2_rhs});
    out.push_back({"d3", dd2m(d3), -inv.LFLF + inv.FF});
    out.push_back({"DD2_Delta0", dd2s(deltas.Delta0),
                   scalar(inv.lapS / 3.0 - (R2 - 4.0 * T - 3.0 * S * S) / 12.0)});
    out.push_back({"DD2_DeltaGprime", dd2m(deltas.DeltaGprime), inv.lapF - inv.LFLF + inv.FF});
    return out;
}

LocalModel flat_model(int n, int r, int cap) {
    LocalModel m{n, r, cap, MultiSeries(2 * n, cap), MatrixSeries::identity(r, 2 * n, cap)};
    for (int j = 0; j < n; ++j) m.phi_jet += var(2 * n, cap, j) * var(2 * n, cap, n + j);
    return m;
}

LocalModel fs_model(int n, const std::vector<int>& degrees, int cap) {
    const int r = static_cast<int>(degrees.size());
    if (r < 1) throw Error(ErrorKind::Shape, "fs_model needs at least one summand");
    LocalModel m = flat_model(n, r, cap);
    m.phi_jet = MultiSeries(2 * n, cap);
    for (int j = 0; j < n; ++j) {
        MultiSeries q = var(2 * n, cap, j) * var(2 * n, cap, n + j);
        q.add_constant(1.0);
        m.phi_jet += jet::log_series(q);
    }
    m.H_jet = MatrixSeries(r, r, 2 * n, cap);
    for (int a = 0; a < r; ++a) m.H_jet(a, a) = jet::exp_series(m.phi_jet * Complex(-degrees[a]));
    return m;
}

LocalModel random_model(std::mt19937_64& rng, int n, int r, double amplitude, int cap) {
    std::uniform_real_distribution<double> u(-amplitude, amplitude);
    const int nv = 2 * n;
    LocalModel m = flat_model(n, r, cap);

    MatrixSeries p(1, 1, nv, cap);
    const auto& t = p(0, 0).table();
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (t.degree(i) >= 4) p(0, 0).coeffs()[i] = Complex(u(rng), u(rng));
    }
    const MatrixSeries p_sym = (p + adjoint(p, n)) * Complex(0.5);
    m.phi_jet += p_sym(0, 0);

    MatrixSeries h(r, r, nv, cap);
    for (int a = 0; a < r; ++a) {
        for (int b = 0; b < r; ++b) {
            for (std::size_t i = 0; i < t.size(); ++i) {
                if (t.degree(i) >= 2 && t.degree(i) <= 4) h(a, b).coeffs()[i] = Complex(u(rng), u(rng));
            }
        }
    }
    m.H_jet += (h + adjoint(h, n)) * Complex(0.5);
    return m;
}

}  // namespace triples::local
