#include "triples/local/curvature.hpp"

#include <algorithm>

namespace triples::local {

CurvatureInvariants invariants_from(const CurvatureData& d) {
    const int n = d.n;
    const int r = d.r;
    CurvatureInvariants inv;
    inv.r = r;
    inv.S = d.S;
    inv.lapS = d.lapS;
    inv.lapF = d.lapF;
    inv.iLambdaF = Eigen::MatrixXcd::Zero(r, r);
    inv.FF = Eigen::MatrixXcd::Zero(r, r);
    inv.FtrR = Eigen::MatrixXcd::Zero(r, r);
    std::complex<double> normR2 = 0.0, normTrR2 = 0.0;
    for (int j = 0; j < n; ++j) {
        inv.iLambdaF += d.F_at(j, j);
        for (int k = 0; k < n; ++k) {
            inv.FF += d.F_at(j, k) * d.F_at(k, j);
            inv.FtrR += d.F_at(j, k) * d.trR(k, j);
            normR2 += (d.R_at(j, k) * d.R_at(k, j)).trace();
            normTrR2 += d.trR(j, k) * d.trR(k, j);
        }
    }
    inv.normR2 = normR2.real();
    inv.normTrR2 = normTrR2.real();
    inv.LFLF = -inv.iLambdaF * inv.iLambdaF;
    return inv;
}

Eigen::MatrixXcd lambda2(int n, const std::vector<Eigen::MatrixXcd>& a,
                         const std::vector<Eigen::MatrixXcd>& b) {
    // A 1 x 1 side is a scalar form and acts as a multiple of the identity.
    const Eigen::Index r = std::max(a[0].rows(), b[0].rows());
    const auto at = [n, r](const std::vector<Eigen::MatrixXcd>& v, int j, int k) -> Eigen::MatrixXcd {
        const Eigen::MatrixXcd& m = v[static_cast<std::size_t>(j * n + k)];
        return m.rows() == r ? m : Eigen::MatrixXcd(m(0, 0) * Eigen::MatrixXcd::Identity(r, r));
    };
    Eigen::MatrixXcd contraction = Eigen::MatrixXcd::Zero(r, r);
    Eigen::MatrixXcd ta = contraction, tb = contraction;
    for (int j = 0; j < n; ++j) {
        ta += at(a, j, j);
        tb += at(b, j, j);
        for (int k = 0; k < n; ++k) contraction += at(a, j, k) * at(b, k, j);
    }
    // Lambda a = -i sum_j a_{jj̄}, so Lambda a Lambda b = -(sum a_{jj̄})(sum b_{jj̄}).
    return 2.0 * (contraction - ta * tb);
}

std::vector<Eigen::MatrixXcd> ricci_form(const CurvatureData& data) {
    std::vector<Eigen::MatrixXcd> out;
    for (int j = 0; j < data.n; ++j)
        for (int k = 0; k < data.n; ++k) out.push_back(Eigen::MatrixXcd::Constant(1, 1, data.trR(j, k)));
    return out;
}

std::vector<Eigen::MatrixXcd> trace_form(const CurvatureData& data) {
    std::vector<Eigen::MatrixXcd> out;
    for (const auto& f : data.F) out.push_back(Eigen::MatrixXcd::Constant(1, 1, f.trace()));
    return out;
}

CurvatureData flat_curvature(int n, int r) {
    CurvatureData d;
    d.n = n;
    d.r = r;
    d.F.assign(static_cast<std::size_t>(n * n), Eigen::MatrixXcd::Zero(r, r));
    d.R.assign(static_cast<std::size_t>(n * n), Eigen::MatrixXcd::Zero(n, n));
    d.lapF = Eigen::MatrixXcd::Zero(r, r);
    return d;
}

}  // namespace triples::local
