#include "triples/sections/sections.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "triples/error.hpp"

namespace triples::sections {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Node weights times density as an N1 x N2 matrix (N2 = 1 on curves).
Eigen::MatrixXd weight_matrix(const Geometry& geom, std::span<const double> density) {
    const long total = geom.num_nodes();
    if (!density.empty() && static_cast<long>(density.size()) != total) {
        throw Error(ErrorKind::Shape, "volume density has " + std::to_string(density.size()) +
                                          " values for " + std::to_string(total) + " nodes");
    }
    const int n1 = geom.nodes_per_factor();
    const int n2 = geom.n() == 2 ? geom.nodes_per_factor() : 1;
    Eigen::MatrixXd V(n1, n2);
    for (long node = 0; node < total; ++node) {
        const double d = density.empty() ? 1.0 : density[static_cast<std::size_t>(node)];
        if (!(d > 0.0) || !std::isfinite(d)) {
            throw Error(ErrorKind::NonPositiveVolume,
                        "volume density " + std::to_string(d) + " at node " + std::to_string(node),
                        node, "volume");
        }
        V(node / n2, node % n2) = geom.volume_weight(node) * d;
    }
    return V;
}

const Eigen::MatrixXd& unit_table() {
    static const Eigen::MatrixXd one = Eigen::MatrixXd::Ones(1, 1);
    return one;
}

const Eigen::MatrixXd& second_table(const NormTables& t, int i) {
    const auto& row = t.tables[static_cast<std::size_t>(i)];
    return row.size() > 1 ? row[1] : unit_table();
}

void check_gram_block(const Eigen::MatrixXd& G, int block) {
    for (Eigen::Index a = 0; a < G.rows(); ++a) {
        for (Eigen::Index c = 0; c < G.cols(); ++c) {
            const double v = G(a, c);
            if (!(v > 0.0) || !std::isfinite(v)) {
                throw Error(ErrorKind::DegenerateGram,
                            "Gram entry " + std::to_string(v) + " for block " + std::to_string(block),
                            std::nullopt, "gram[" + std::to_string(block) + "]");
            }
        }
    }
}

}  // namespace

long SectionBasis::dim(Family family, int i) const {
    long d = 1;
    for (int t : block_top(family, i)) d *= t + 1;
    return d;
}

std::vector<int> SectionBasis::block_top(Family family, int i) const {
    if (family == Family::Line) return std::vector<int>(static_cast<std::size_t>(n), k);
    return top[static_cast<std::size_t>(i)];
}

SectionBasis basis(const Geometry& geom, int k) {
    if (k < 0) throw Error(ErrorKind::Config, "twist level k must be non-negative");
    SectionBasis b;
    b.n = geom.n();
    b.k = k;
    b.r = geom.rank();
    b.N_k = 1;
    for (int a = 0; a < b.n; ++a) b.N_k *= k + 1;
    for (int i = 0; i < b.r; ++i) {
        std::vector<int> tops;
        long d = 1;
        for (int a = 0; a < b.n; ++a) {
            const int m = geom.factor(a).degrees[static_cast<std::size_t>(geom.summand_index(i, a))];
            if (k + m < 0) {
                throw Error(ErrorKind::EmptySections, "summand " + std::to_string(i) + " has degree " +
                                                          std::to_string(k + m) + " < 0 at k = " +
                                                          std::to_string(k));
            }
            tops.push_back(k + m);
            d *= k + m + 1;
        }
        b.top.push_back(std::move(tops));
        b.M_k += d;
    }
    return b;
}

NormTables norm_tables(const Geometry& geom, const SectionBasis& b, Family family) {
    NormTables out;
    const int npf = geom.nodes_per_factor();
    for (int i = 0; i < b.blocks(family); ++i) {
        const std::vector<int> tops = b.block_top(family, i);
        std::vector<Eigen::MatrixXd> row;
        for (int a = 0; a < b.n; ++a) {
            const geometry::FactorNodes& fn = geom.nodes(a);
            const int q = geom.summand_index(i, a);
            Eigen::MatrixXd T(tops[static_cast<std::size_t>(a)] + 1, npf);
            for (int node = 0; node < npf; ++node) {
                const auto ns = static_cast<std::size_t>(node);
                double base = -b.k * fn.phi[ns].value();
                if (family == Family::Bundle) base -= fn.psi[static_cast<std::size_t>(q)][ns].value();
                for (Eigen::Index j = 0; j < T.rows(); ++j) {
                    T(j, node) = std::exp(static_cast<double>(j) * fn.t[ns] + base);
                }
            }
            row.push_back(std::move(T));
        }
        out.tables.push_back(std::move(row));
    }
    return out;
}

Eigen::MatrixXd gram_kernel(const Eigen::MatrixXd& T1, const Eigen::MatrixXd& V,
                            const Eigen::MatrixXd& T2, Exec exec) {
    const Eigen::Index J1 = T1.rows(), J2 = T2.rows(), N1 = V.rows(), N2 = V.cols();
    Eigen::MatrixXd W(N1, J2);
    Eigen::MatrixXd G(J1, J2);
    if (exec == Exec::Serial) {
        for (Eigen::Index a = 0; a < N1; ++a)
            for (Eigen::Index j = 0; j < J2; ++j) {
                double s = 0.0;
                for (Eigen::Index c = 0; c < N2; ++c) s += V(a, c) * T2(j, c);
                W(a, j) = s;
            }
        for (Eigen::Index i = 0; i < J1; ++i)
            for (Eigen::Index j = 0; j < J2; ++j) {
                double s = 0.0;
                for (Eigen::Index a = 0; a < N1; ++a) s += T1(i, a) * W(a, j);
                G(i, j) = s;
            }
        return G;
    }
#pragma omp parallel for schedule(static)
    for (Eigen::Index a = 0; a < N1; ++a) {
        for (Eigen::Index j = 0; j < J2; ++j) {
            double s = 0.0;
            for (Eigen::Index c = 0; c < N2; ++c) s += V(a, c) * T2(j, c);
            W(a, j) = s;
        }
    }
#pragma omp parallel for schedule(static)
    for (Eigen::Index i = 0; i < J1; ++i) {
        for (Eigen::Index j = 0; j < J2; ++j) {
            double s = 0.0;
            for (Eigen::Index a = 0; a < N1; ++a) s += T1(i, a) * W(a, j);
            G(i, j) = s;
        }
    }
    return G;
}

Eigen::MatrixXd bergman_kernel(const Eigen::MatrixXd& T1, const Eigen::MatrixXd& Q,
                               const Eigen::MatrixXd& T2, Exec exec) {
    const Eigen::Index J1 = T1.rows(), J2 = T2.rows(), N1 = T1.cols(), N2 = T2.cols();
    Eigen::MatrixXd P(J1, N2);
    Eigen::MatrixXd B(N1, N2);
    if (exec == Exec::Serial) {
        for (Eigen::Index i = 0; i < J1; ++i)
            for (Eigen::Index c = 0; c < N2; ++c) {
                double s = 0.0;
                for (Eigen::Index j = 0; j < J2; ++j) s += Q(i, j) * T2(j, c);
                P(i, c) = s;
            }
        for (Eigen::Index a = 0; a < N1; ++a)
            for (Eigen::Index c = 0; c < N2; ++c) {
                double s = 0.0;
                for (Eigen::Index i = 0; i < J1; ++i) s += T1(i, a) * P(i, c);
                B(a, c) = s;
            }
        return B;
    }
#pragma omp parallel for schedule(static)
    for (Eigen::Index i = 0; i < J1; ++i) {
        for (Eigen::Index c = 0; c < N2; ++c) {
            double s = 0.0;
            for (Eigen::Index j = 0; j < J2; ++j) s += Q(i, j) * T2(j, c);
            P(i, c) = s;
        }
    }
#pragma omp parallel for schedule(static)
    for (Eigen::Index a = 0; a < N1; ++a) {
        for (Eigen::Index c = 0; c < N2; ++c) {
            double s = 0.0;
            for (Eigen::Index i = 0; i < J1; ++i) s += T1(i, a) * P(i, c);
            B(a, c) = s;
        }
    }
    return B;
}

Gram gram(const Geometry& geom, const SectionBasis& b, Family family, std::span<const double> density,
          Exec exec, std::string volume_label) {
    const Eigen::MatrixXd V = weight_matrix(geom, density);
    const NormTables t = norm_tables(geom, b, family);
    Gram g;
    g.family = family;
    g.volume_label = std::move(volume_label);
    for (int i = 0; i < b.blocks(family); ++i) {
        g.blocks.push_back(gram_kernel(t.tables[static_cast<std::size_t>(i)][0], V, second_table(t, i), exec));
    }
    return g;
}

Eigen::MatrixXcd BergmanField::matrix(long node) const {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(r, r);
    for (int i = 0; i < r; ++i) m(i, i) = at(node, i);
    return m;
}

BergmanField bergman(const Geometry& geom, const SectionBasis& b, const Gram& g, Exec exec) {
    const NormTables t = norm_tables(geom, b, g.family);
    BergmanField f;
    f.nodes = geom.num_nodes();
    f.r = b.blocks(g.family);
    f.values.assign(static_cast<std::size_t>(f.nodes * f.r), 0.0);
    for (int i = 0; i < f.r; ++i) {
        const Eigen::MatrixXd& G = g.blocks[static_cast<std::size_t>(i)];
        check_gram_block(G, i);
        const Eigen::MatrixXd Q = G.cwiseInverse();
        const Eigen::MatrixXd B = bergman_kernel(t.tables[static_cast<std::size_t>(i)][0], Q, second_table(t, i), exec);
        for (Eigen::Index a = 0; a < B.rows(); ++a)
            for (Eigen::Index c = 0; c < B.cols(); ++c)
                f.values[static_cast<std::size_t>((a * B.cols() + c) * f.r + i)] = B(a, c);
    }
    return f;
}

std::vector<double> normalized_density(const Geometry& geom, std::span<const double> density) {
    std::vector<double> d(static_cast<std::size_t>(geom.num_nodes()), 1.0);
    if (!density.empty()) d.assign(density.begin(), density.end());
    (void)weight_matrix(geom, d);
    const double total = geometry::integrate(geom, d);
    for (auto& v : d) v /= total;
    return d;
}

BergmanPair bergman_fields(const Geometry& geom, int k, std::span<const double> density1,
                           std::span<const double> density2, Exec exec) {
    const SectionBasis b = basis(geom, k);
    const std::vector<double> d1 = normalized_density(geom, density1);
    const std::vector<double> d2 = normalized_density(geom, density2);
    BergmanPair out;
    out.rho = bergman(geom, b, gram(geom, b, Family::Line, d1, exec, "dV1"), exec);
    out.B = bergman(geom, b, gram(geom, b, Family::Bundle, d2, exec, "dV2"), exec);
    return out;
}

BergmanField bergman_theorem_setting(const Geometry& geom, int k, Exec exec) {
    const SectionBasis b = basis(geom, k);
    return bergman(geom, b, gram(geom, b, Family::Bundle, {}, exec), exec);
}

RiemannRoch riemann_roch(const Geometry& geom, int k, Exec exec) {
    const SectionBasis b = basis(geom, k);
    const BergmanField B = bergman(geom, b, gram(geom, b, Family::Bundle, {}, exec), exec);
    std::vector<double> tr(static_cast<std::size_t>(B.nodes), 0.0);
    for (long node = 0; node < B.nodes; ++node)
        for (int i = 0; i < B.r; ++i) tr[static_cast<std::size_t>(node)] += B.at(node, i);
    return {geometry::integrate(geom, tr), b.M_k};
}

DenseResult dense_bergman(const Geometry& geom, const SectionBasis& b, Family family,
                          std::span<const double> density, const Eigen::MatrixXcd* change, int angles) {
    const int n = b.n;
    const int comps = b.blocks(family);
    struct Mono {
        int block;
        int j[2];
    };
    std::vector<Mono> monos;
    int max_top = 0;
    for (int i = 0; i < comps; ++i) {
        const std::vector<int> tops = b.block_top(family, i);
        for (int t : tops) max_top = std::max(max_top, t);
        const int t2 = n == 2 ? tops[1] : 0;
        for (int j1 = 0; j1 <= tops[0]; ++j1)
            for (int j2 = 0; j2 <= t2; ++j2) monos.push_back({i, {j1, j2}});
    }
    const auto D = static_cast<Eigen::Index>(monos.size());
    if (angles <= 0) angles = max_top + 2;
    Eigen::MatrixXcd A = Eigen::MatrixXcd::Identity(D, D);
    if (change != nullptr) {
        if (change->rows() != D || change->cols() != D) {
            throw Error(ErrorKind::Shape, "basis change must be " + std::to_string(D) + " x " + std::to_string(D));
        }
        A = *change;
    }
    const Eigen::MatrixXd V = weight_matrix(geom, density);
    const NormTables t = norm_tables(geom, b, family);
    const int npf = geom.nodes_per_factor();
    const long total = geom.num_nodes();
    const int n2 = n == 2 ? npf : 1;
    const int angle_points = n == 2 ? angles * angles : angles;
    const double angle_weight = n == 2 ? 1.0 / (angles * angles) : 1.0 / angles;

    auto sample = [&](long node, int p) {
        const int a1 = static_cast<int>(node / n2), a2 = static_cast<int>(node % n2);
        const double th1 = kTwoPi * (p % angles) / angles;
        const double th2 = n == 2 ? kTwoPi * (p / angles) / angles : 0.0;
        Eigen::MatrixXcd S = Eigen::MatrixXcd::Zero(D, comps);
        for (Eigen::Index q = 0; q < D; ++q) {
            const Mono& mo = monos[static_cast<std::size_t>(q)];
            const auto& row = t.tables[static_cast<std::size_t>(mo.block)];
            double mod2 = row[0](mo.j[0], a1);
            if (n == 2) mod2 *= row[1](mo.j[1], a2);
            S(q, mo.block) = std::polar(std::sqrt(mod2), mo.j[0] * th1 + mo.j[1] * th2);
        }
        return Eigen::MatrixXcd(A * S);
    };

    DenseResult out;
    out.gram = Eigen::MatrixXcd::Zero(D, D);
    for (long node = 0; node < total; ++node) {
        const double w = V(node / n2, node % n2) * angle_weight;
        for (int p = 0; p < angle_points; ++p) {
            const Eigen::MatrixXcd S = sample(node, p);
            out.gram.noalias() += w * S * S.adjoint();
        }
    }
    Eigen::LLT<Eigen::MatrixXcd> llt(out.gram);
    const double scale = out.gram.diagonal().real().cwiseAbs().maxCoeff();
    if (llt.info() != Eigen::Success) {
        throw Error(ErrorKind::DegenerateGram, "Cholesky factorization of the Gram matrix failed",
                    std::nullopt, "gram");
    }
    const Eigen::MatrixXcd L = llt.matrixL();
    for (Eigen::Index q = 0; q < D; ++q) {
        if (std::norm(L(q, q)) <= 1e-13 * scale) {
            throw Error(ErrorKind::DegenerateGram, "Cholesky pivot " + std::to_string(q) + " below tolerance",
                        std::nullopt, "gram");
        }
    }
    out.B.reserve(static_cast<std::size_t>(total));
    for (long node = 0; node < total; ++node) {
        const Eigen::MatrixXcd S = llt.matrixL().solve(sample(node, 0));
        out.B.push_back(S.transpose() * S.conjugate());
    }
    return out;
}

FitResult fit_coefficients(const Geometry& geom, const std::vector<int>& ks, Exec exec) {
    std::vector<int> sorted = ks;
    std::sort(sorted.begin(), sorted.end());
    if (std::unique(sorted.begin(), sorted.end()) - sorted.begin() < 4) {
        throw Error(ErrorKind::Config, "coefficient fit needs at least four distinct k values");
    }
    const int n = geom.n();
    const auto K = static_cast<Eigen::Index>(ks.size());
    Eigen::MatrixXd A(K, 3);
    for (Eigen::Index row = 0; row < K; ++row) {
        const double k = ks[static_cast<std::size_t>(row)];
        for (int c = 0; c < 3; ++c) A(row, c) = std::pow(k, n - 1 - c);
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    FitResult res;
    res.ks = ks;
    res.condition = sv(0) / sv(sv.size() - 1);
    if (res.condition > 1e8) {
        res.warning = "FitConditioning: condition number " + std::to_string(res.condition);
    }
    const double scale = std::pow(kTwoPi, n);
    std::vector<BergmanField> fields;
    for (int k : ks) fields.push_back(bergman_theorem_setting(geom, k, exec));
    res.nodes = fields.front().nodes;
    res.r = fields.front().r;
    const std::size_t count = static_cast<std::size_t>(res.nodes * res.r);
    res.B1.resize(count);
    res.B2.resize(count);
    res.residual.resize(count);
    Eigen::VectorXd y(K);
    for (std::size_t idx = 0; idx < count; ++idx) {
        for (Eigen::Index row = 0; row < K; ++row) {
            const double k = ks[static_cast<std::size_t>(row)];
            y(row) = scale * fields[static_cast<std::size_t>(row)].values[idx] - std::pow(k, n);
        }
        const Eigen::VectorXd c = svd.solve(y);
        res.B1[idx] = c(0);
        res.B2[idx] = c(1);
        res.residual[idx] = (A * c - y).cwiseAbs().maxCoeff();
    }
    return res;
}

}  // namespace triples::sections
