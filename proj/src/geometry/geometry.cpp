#include "triples/geometry/geometry.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "triples/error.hpp"
#include "triples/geometry/quadrature.hpp"

namespace triples::geometry {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

FactorNodes build_nodes(const CurveFactor& f, const QuadratureRule& rule) {
    FactorNodes fn;
    const std::size_t m = rule.nodes.size();
    fn.s = rule.nodes;
    fn.gl_weight = rule.weights;
    fn.t.resize(m);
    fn.measure.resize(m);
    fn.phi.resize(m);
    fn.psi.assign(f.psi.size(), std::vector<Taylor>(m));
    for (std::size_t i = 0; i < m; ++i) {
        const double s = fn.s[i];
        const double sc = 1.0 - s;
        fn.t[i] = std::log(s) - std::log(sc);
        fn.phi[i] = f.phi.taylor(fn.t[i]);
        fn.measure[i] = kTwoPi * fn.gl_weight[i] * fn.phi[i].derivative_value(2) / (s * sc);
        for (std::size_t q = 0; q < f.psi.size(); ++q) fn.psi[q][i] = f.psi[q].taylor(fn.t[i]);
    }
    return fn;
}

struct CurvePoint {
    double t;
    double ddphi;
    double S;
    double lapS;
    std::vector<double> F;
    std::vector<double> lapF;
};

CurvePoint curve_point(const FactorNodes& fn, int i) {
    CurvePoint cp;
    cp.t = fn.t[static_cast<std::size_t>(i)];
    const Taylor& phi = fn.phi[static_cast<std::size_t>(i)];
    const Taylor ddphi = phi.derivative().derivative();
    cp.ddphi = ddphi.value();
    const Taylor S = -(log(ddphi).derivative().derivative() / ddphi);
    cp.S = S.value();
    cp.lapS = -2.0 * S.derivative_value(2) / cp.ddphi;
    for (const auto& psi_nodes : fn.psi) {
        const Taylor F = psi_nodes[static_cast<std::size_t>(i)].derivative().derivative() / ddphi;
        cp.F.push_back(F.value());
        cp.lapF.push_back(-F.derivative_value(2) / cp.ddphi);
    }
    return cp;
}

}  // namespace

Geometry::Geometry(std::vector<CurveFactor> factors, int nodes_per_factor)
    : factors_(std::move(factors)), nodes_per_factor_(nodes_per_factor) {
    if (factors_.empty() || factors_.size() > 2) {
        throw Error(ErrorKind::Config, "geometry needs one or two curve factors");
    }
    if (nodes_per_factor < 2) throw Error(ErrorKind::Config, "geometry needs at least two nodes per factor");
    for (const auto& f : factors_) {
        if (f.degrees.empty() || f.degrees.size() != f.psi.size()) {
            throw Error(ErrorKind::Config, "each factor needs one weight profile per summand degree");
        }
    }
    const QuadratureRule rule = gauss_legendre_unit(nodes_per_factor);
    auto cache = std::make_shared<std::vector<FactorNodes>>();
    for (const auto& f : factors_) cache->push_back(build_nodes(f, rule));
    cache_ = std::move(cache);
    const PositivityReport pos = kahler_positivity(*this);
    if (!(pos.min_ddphi > 0.0)) {
        throw Error(ErrorKind::KahlerPositivity,
                    "phi'' = " + std::to_string(pos.min_ddphi) + " <= 0 in factor " +
                        std::to_string(pos.factor) + " at node " + std::to_string(pos.node),
                    pos.node, "phi");
    }
}

long Geometry::num_nodes() const noexcept {
    long total = 1;
    for (std::size_t a = 0; a < factors_.size(); ++a) total *= nodes_per_factor_;
    return total;
}

int Geometry::factor_node(long node, int a) const {
    if (n() == 1) return static_cast<int>(node);
    return a == 0 ? static_cast<int>(node / nodes_per_factor_) : static_cast<int>(node % nodes_per_factor_);
}

double Geometry::volume_weight(long node) const {
    double w = 1.0;
    for (int a = 0; a < n(); ++a) w *= nodes(a).measure[static_cast<std::size_t>(factor_node(node, a))];
    return w;
}

int Geometry::rank() const noexcept {
    int r = 1;
    for (const auto& f : factors_) r *= static_cast<int>(f.degrees.size());
    return r;
}

int Geometry::summand_index(int i, int a) const {
    if (n() == 1) return i;
    const int rb = static_cast<int>(factors_[1].degrees.size());
    return a == 0 ? i / rb : i % rb;
}

Geometry fs_geometry(int n, const std::vector<int>& degrees, int nodes) {
    if (n == 1) {
        CurveFactor f{Profile::softplus(1.0), degrees, {}};
        for (int m : degrees) f.psi.push_back(Profile::softplus(m));
        return Geometry({f}, nodes);
    }
    if (n == 2) {
        if (degrees.size() != 2) throw Error(ErrorKind::Config, "n = 2 expects a bidegree (m1, m2)");
        return fs_product({degrees[0]}, {degrees[1]}, nodes);
    }
    throw Error(ErrorKind::Config, "dimension must be 1 or 2");
}

Geometry fs_product(const std::vector<int>& degrees_a, const std::vector<int>& degrees_b, int nodes) {
    std::vector<CurveFactor> fs;
    for (const auto* deg : {&degrees_a, &degrees_b}) {
        CurveFactor f{Profile::softplus(1.0), *deg, {}};
        for (int m : *deg) f.psi.push_back(Profile::softplus(m));
        fs.push_back(std::move(f));
    }
    return Geometry(std::move(fs), nodes);
}

Geometry perturb(const Geometry& geom, double eps, const PerturbSpec& spec) {
    if (spec.factor < 0 || spec.factor >= geom.n()) throw Error(ErrorKind::Config, "perturbation factor out of range");
    if (!(spec.bump.width > 0.0)) throw Error(ErrorKind::Config, "bump width must be positive");
    std::vector<CurveFactor> fs = geom.factors();
    CurveFactor& f = fs[static_cast<std::size_t>(spec.factor)];
    if (eps == 0.0) return geom;
    if (spec.target < 0) {
        f.phi.add(spec.bump, eps);
    } else {
        if (spec.target >= static_cast<int>(f.psi.size())) {
            throw Error(ErrorKind::Config, "perturbation summand out of range");
        }
        f.psi[static_cast<std::size_t>(spec.target)].add(spec.bump, eps);
    }
    return Geometry(std::move(fs), geom.nodes_per_factor());
}

Geometry with_nodes(const Geometry& geom, int nodes_per_factor) {
    return Geometry(geom.factors(), nodes_per_factor);
}

PointData point_data(const Geometry& geom, long node) {
    const int n = geom.n();
    const int r = geom.rank();
    PointData pd;
    pd.node = node;
    std::vector<CurvePoint> cps;
    for (int a = 0; a < n; ++a) cps.push_back(curve_point(geom.nodes(a), geom.factor_node(node, a)));

    local::CurvatureData& cd = pd.curvature;
    cd.n = n;
    cd.r = r;
    cd.F.assign(static_cast<std::size_t>(n * n), Eigen::MatrixXcd::Zero(r, r));
    cd.R.assign(static_cast<std::size_t>(n * n), Eigen::MatrixXcd::Zero(n, n));
    cd.lapF = Eigen::MatrixXcd::Zero(r, r);
    for (int a = 0; a < n; ++a) {
        const CurvePoint& cp = cps[static_cast<std::size_t>(a)];
        pd.t.push_back(cp.t);
        pd.g.push_back(cp.ddphi * std::exp(-cp.t));
        pd.g_inv.push_back(std::exp(cp.t) / cp.ddphi);
        pd.trR.push_back(cp.S);
        pd.S += cp.S;
        pd.lapS += cp.lapS;
        pd.normR2 += cp.S * cp.S;
        cd.R[static_cast<std::size_t>(a * n + a)](a, a) = cp.S;
    }
    pd.normTrR2 = pd.normR2;
    pd.F.assign(static_cast<std::size_t>(r), 0.0);
    for (int i = 0; i < r; ++i) {
        double lap = 0.0;
        for (int a = 0; a < n; ++a) {
            const int q = geom.summand_index(i, a);
            const double Fa = cps[static_cast<std::size_t>(a)].F[static_cast<std::size_t>(q)];
            pd.F[static_cast<std::size_t>(i)] += Fa;
            cd.F[static_cast<std::size_t>(a * n + a)](i, i) = Fa;
            lap += cps[static_cast<std::size_t>(a)].lapF[static_cast<std::size_t>(q)];
        }
        cd.lapF(i, i) = lap;
        pd.iLambdaTrF += pd.F[static_cast<std::size_t>(i)];
    }
    pd.iLambdaF = Eigen::MatrixXcd::Zero(r, r);
    for (int i = 0; i < r; ++i) pd.iLambdaF(i, i) = pd.F[static_cast<std::size_t>(i)];
    pd.lapF = cd.lapF;
    cd.S = pd.S;
    cd.lapS = pd.lapS;
    return pd;
}

std::vector<double> laplacian(const Geometry& geom, const RadialField& field) {
    const long total = geom.num_nodes();
    const int n = geom.n();
    std::vector<double> out(static_cast<std::size_t>(total), 0.0);
    std::vector<Taylor> args(static_cast<std::size_t>(n));
    for (long node = 0; node < total; ++node) {
        double lap = 0.0;
        for (int a = 0; a < n; ++a) {
            for (int b = 0; b < n; ++b) {
                const double tb = geom.nodes(b).t[static_cast<std::size_t>(geom.factor_node(node, b))];
                args[static_cast<std::size_t>(b)] = (a == b) ? Taylor::variable(tb) : Taylor(tb);
            }
            const Taylor f = field(args);
            const int ia = geom.factor_node(node, a);
            const double ddphi = geom.nodes(a).phi[static_cast<std::size_t>(ia)].derivative_value(2);
            lap += -2.0 * f.derivative_value(2) / ddphi;
        }
        out[static_cast<std::size_t>(node)] = lap;
    }
    return out;
}

double integrate(const Geometry& geom, std::span<const double> values) {
    if (static_cast<long>(values.size()) != geom.num_nodes()) {
        throw Error(ErrorKind::Shape, "integrand has the wrong number of nodes");
    }
    double sum = 0.0;
    for (long node = 0; node < geom.num_nodes(); ++node) {
        sum += values[static_cast<std::size_t>(node)] * geom.volume_weight(node);
    }
    return sum;
}

PositivityReport kahler_positivity(const Geometry& geom) {
    PositivityReport rep{std::numeric_limits<double>::infinity(), 0, 0};
    for (int a = 0; a < geom.n(); ++a) {
        const FactorNodes& fn = geom.nodes(a);
        for (std::size_t i = 0; i < fn.phi.size(); ++i) {
            const double d = fn.phi[i].derivative_value(2);
            if (!(d > rep.min_ddphi)) {
                if (d < rep.min_ddphi || std::isnan(d)) rep = {d, a, static_cast<int>(i)};
            }
        }
    }
    return rep;
}

}  // namespace triples::geometry
