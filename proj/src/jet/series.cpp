#include "triples/jet/series.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <string>

#include "triples/error.hpp"

namespace triples::jet {

namespace {

void enumerate_degree(int num_vars, int degree, int var, std::vector<int>& cur,
                      std::vector<int>& out) {
    if (var == num_vars - 1) {
        cur[var] = degree;
        out.insert(out.end(), cur.begin(), cur.end());
        return;
    }
    for (int e = degree; e >= 0; --e) {
        cur[var] = e;
        enumerate_degree(num_vars, degree - e, var + 1, cur, out);
    }
    cur[var] = 0;
}

void require_same_space(const MultiSeries& a, const MultiSeries& b, const char* what) {
    if (!a.same_space(b)) {
        throw Error(ErrorKind::Shape,
                    std::string(what) + ": series live in different spaces (" +
                        std::to_string(a.num_vars()) + "," + std::to_string(a.degree_cap()) +
                        ") vs (" + std::to_string(b.num_vars()) + "," +
                        std::to_string(b.degree_cap()) + ")");
    }
}

}  // namespace

MonomialTable::MonomialTable(int num_vars, int cap) : num_vars_(num_vars), cap_(cap) {
    if (num_vars < 1 || cap < 0) {
        throw Error(ErrorKind::Shape, "monomial table needs num_vars >= 1 and cap >= 0");
    }
    std::vector<int> cur(static_cast<std::size_t>(num_vars), 0);
    count_up_to_.resize(static_cast<std::size_t>(cap) + 1);
    for (int d = 0; d <= cap; ++d) {
        enumerate_degree(num_vars, d, 0, cur, exponents_);
        count_up_to_[d] = exponents_.size() / static_cast<std::size_t>(num_vars);
    }
    const std::size_t n_mono = count_up_to_.back();
    degrees_.resize(n_mono);
    for (std::size_t i = 0; i < n_mono; ++i) {
        int d = 0;
        for (int v = 0; v < num_vars; ++v) d += exponents_[i * num_vars + v];
        degrees_[i] = d;
    }

    std::size_t dense = 1;
    for (int v = 0; v < num_vars; ++v) dense *= static_cast<std::size_t>(cap + 1);
    dense_index_.assign(dense, -1);
    for (std::size_t i = 0; i < n_mono; ++i) {
        std::size_t key = 0;
        for (int v = 0; v < num_vars; ++v) key = key * (cap + 1) + exponents_[i * num_vars + v];
        dense_index_[key] = static_cast<long>(i);
    }

    product_offset_.resize(n_mono + 1);
    std::size_t total = 0;
    for (std::size_t i = 0; i < n_mono; ++i) {
        product_offset_[i] = total;
        total += count_up_to_[cap - degrees_[i]];
    }
    product_offset_[n_mono] = total;
    product_.resize(total);
    std::vector<int> sum(static_cast<std::size_t>(num_vars));
    for (std::size_t i = 0; i < n_mono; ++i) {
        const std::size_t lim = count_up_to_[cap - degrees_[i]];
        for (std::size_t j = 0; j < lim; ++j) {
            for (int v = 0; v < num_vars; ++v) {
                sum[v] = exponents_[i * num_vars + v] + exponents_[j * num_vars + v];
            }
            product_[product_offset_[i] + j] = static_cast<std::uint32_t>(index_of(sum));
        }
    }

    lowered_.assign(n_mono * static_cast<std::size_t>(num_vars), -1);
    for (std::size_t i = 0; i < n_mono; ++i) {
        for (int v = 0; v < num_vars; ++v) {
            if (exponents_[i * num_vars + v] == 0) continue;
            sum.assign(exponents_.begin() + static_cast<long>(i * num_vars),
                       exponents_.begin() + static_cast<long>((i + 1) * num_vars));
            --sum[v];
            lowered_[i * num_vars + v] = index_of(sum);
        }
    }
}

std::shared_ptr<const MonomialTable> MonomialTable::get(int num_vars, int cap) {
    static std::mutex mu;
    static std::map<std::pair<int, int>, std::shared_ptr<const MonomialTable>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[{num_vars, cap}];
    if (!slot) slot = std::shared_ptr<const MonomialTable>(new MonomialTable(num_vars, cap));
    return slot;
}

std::size_t MonomialTable::count_up_to(int d) const noexcept {
    if (d < 0) return 0;
    if (d > cap_) d = cap_;
    return count_up_to_[d];
}

long MonomialTable::index_of(std::span<const int> e) const {
    if (static_cast<int>(e.size()) != num_vars_) {
        throw Error(ErrorKind::Shape, "exponent length does not match variable count");
    }
    int d = 0;
    std::size_t key = 0;
    for (int v = 0; v < num_vars_; ++v) {
        if (e[v] < 0) throw Error(ErrorKind::Shape, "negative exponent");
        d += e[v];
        if (d > cap_) return -1;
        key = key * (cap_ + 1) + e[v];
    }
    return dense_index_[key];
}

MultiSeries::MultiSeries(int num_vars, int degree_cap)
    : table_(MonomialTable::get(num_vars, degree_cap)), coeffs_(table_->size()) {}

MultiSeries MultiSeries::constant(int num_vars, int degree_cap, Complex c) {
    MultiSeries s(num_vars, degree_cap);
    s.coeffs_[0] = c;
    return s;
}

MultiSeries MultiSeries::variable(int num_vars, int degree_cap, int v) {
    if (v < 0 || v >= num_vars) throw Error(ErrorKind::Shape, "variable index out of range");
    MultiSeries s(num_vars, degree_cap);
    if (degree_cap >= 1) {
        std::vector<int> e(static_cast<std::size_t>(num_vars), 0);
        e[v] = 1;
        s.coeffs_[s.table_->index_of(e)] = 1.0;
    }
    return s;
}

MultiSeries MultiSeries::monomial(int num_vars, int degree_cap, std::span<const int> e,
                                  Complex c) {
    MultiSeries s(num_vars, degree_cap);
    const long idx = s.table_->index_of(e);
    if (idx >= 0) s.coeffs_[idx] = c;
    return s;
}

Complex MultiSeries::coeff(std::span<const int> e) const {
    const long idx = table_->index_of(e);
    return idx < 0 ? Complex{} : coeffs_[idx];
}

void MultiSeries::set_coeff(std::span<const int> e, Complex c) {
    const long idx = table_->index_of(e);
    if (idx < 0) throw Error(ErrorKind::Capacity, "exponent exceeds the degree cap");
    coeffs_[idx] = c;
}

MultiSeries& MultiSeries::operator+=(const MultiSeries& o) {
    require_same_space(*this, o, "series add");
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
    return *this;
}

MultiSeries& MultiSeries::operator-=(const MultiSeries& o) {
    require_same_space(*this, o, "series subtract");
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
    return *this;
}

MultiSeries& MultiSeries::operator*=(Complex s) {
    for (auto& c : coeffs_) c *= s;
    return *this;
}

MultiSeries& MultiSeries::operator*=(const MultiSeries& o) {
    *this = series_mul(*this, o);
    return *this;
}

MultiSeries operator*(const MultiSeries& a, const MultiSeries& b) { return series_mul(a, b); }

MultiSeries MultiSeries::derivative(int v) const {
    if (v < 0 || v >= num_vars()) throw Error(ErrorKind::Shape, "variable index out of range");
    MultiSeries out(num_vars(), degree_cap());
    const auto& t = *table_;
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        if (coeffs_[i] == Complex{}) continue;
        const long lo = t.lowered(i, v);
        if (lo < 0) continue;
        out.coeffs_[lo] += static_cast<double>(t.exponent(i)[v]) * coeffs_[i];
    }
    return out;
}

Complex MultiSeries::evaluate(std::span<const Complex> point) const {
    if (static_cast<int>(point.size()) != num_vars()) {
        throw Error(ErrorKind::Shape, "evaluation point has wrong length");
    }
    const auto& t = *table_;
    std::vector<Complex> mono(coeffs_.size());
    mono[0] = 1.0;
    Complex sum = coeffs_[0];
    for (std::size_t i = 1; i < coeffs_.size(); ++i) {
        int v = 0;
        while (t.exponent(i)[v] == 0) ++v;
        mono[i] = mono[t.lowered(i, v)] * point[v];
        sum += coeffs_[i] * mono[i];
    }
    return sum;
}

double MultiSeries::max_abs() const noexcept {
    double m = 0.0;
    for (const auto& c : coeffs_) m = std::max(m, std::abs(c));
    return m;
}

int MultiSeries::order_max() const noexcept {
    int d = -1;
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        if (coeffs_[i] != Complex{}) d = std::max(d, table_->degree(i));
    }
    return d;
}

MultiSeries series_mul(const MultiSeries& a, const MultiSeries& b) {
    require_same_space(a, b, "series_mul");
    const auto& t = a.table();
    MultiSeries out(a.num_vars(), a.degree_cap());
    auto ca = a.coeffs();
    auto cb = b.coeffs();
    auto co = out.coeffs();
    const int cap = t.cap();
    for (std::size_t i = 0; i < ca.size(); ++i) {
        const Complex ai = ca[i];
        if (ai == Complex{}) continue;
        const std::size_t lim = t.count_up_to(cap - t.degree(i));
        for (std::size_t j = 0; j < lim; ++j) {
            if (cb[j] == Complex{}) continue;
            co[t.product_index(i, j)] += ai * cb[j];
        }
    }
    return out;
}

MultiSeries series_compose(const MultiSeries& f, std::span<const MultiSeries> subst) {
    if (static_cast<int>(subst.size()) != f.num_vars()) {
        throw Error(ErrorKind::Shape, "series_compose: substitution count differs from variable count");
    }
    if (subst.empty()) throw Error(ErrorKind::Shape, "series_compose: empty substitution");
    for (std::size_t v = 0; v < subst.size(); ++v) {
        require_same_space(subst[0], subst[v], "series_compose");
        if (std::abs(subst[v].constant_term()) != 0.0) {
            throw Error(ErrorKind::Composition,
                        "series_compose: substitution " + std::to_string(v) +
                            " has a nonzero constant term");
        }
    }
    const int nv = subst[0].num_vars();
    const int cap = subst[0].degree_cap();
    const auto& tf = f.table();
    auto cf = f.coeffs();
    const int top = std::min(f.order_max(), cap);
    MultiSeries out = MultiSeries::constant(nv, cap, top >= 0 ? cf[0] : Complex{});
    if (top <= 0) return out;

    const std::size_t limit = tf.count_up_to(top);
    std::vector<MultiSeries> mono;
    mono.reserve(limit);
    mono.push_back(MultiSeries::constant(nv, cap, 1.0));
    for (std::size_t i = 1; i < limit; ++i) {
        int v = 0;
        while (tf.exponent(i)[v] == 0) ++v;
        mono.push_back(series_mul(mono[tf.lowered(i, v)], subst[v]));
        if (cf[i] != Complex{}) {
            auto co = out.coeffs();
            auto cm = mono.back().coeffs();
            for (std::size_t j = 0; j < co.size(); ++j) co[j] += cf[i] * cm[j];
        }
    }
    return out;
}

namespace {

// Returns (a0, u) with a = a0 (1 + u) and u(0) = 0.
std::pair<Complex, MultiSeries> split_constant(const MultiSeries& a, const char* what) {
    const Complex a0 = a.constant_term();
    if (std::abs(a0) == 0.0) {
        throw Error(ErrorKind::Singularity, std::string(what) + ": zero constant term");
    }
    MultiSeries u = a * (1.0 / a0);
    u.coeffs()[0] = 0.0;
    return {a0, std::move(u)};
}

// Sum_{k=0}^{cap} c_k u^k by Horner, with u(0) = 0.
MultiSeries horner(const MultiSeries& u, const std::vector<Complex>& c) {
    MultiSeries r = MultiSeries::constant(u.num_vars(), u.degree_cap(), c.back());
    for (int k = static_cast<int>(c.size()) - 2; k >= 0; --k) {
        r = series_mul(r, u);
        r.add_constant(c[k]);
    }
    return r;
}

}  // namespace

MultiSeries reciprocal(const MultiSeries& a) {
    auto [a0, u] = split_constant(a, "reciprocal");
    std::vector<Complex> c(static_cast<std::size_t>(a.degree_cap()) + 1);
    for (std::size_t k = 0; k < c.size(); ++k) c[k] = (k % 2 == 0) ? 1.0 : -1.0;
    return horner(u, c) * (1.0 / a0);
}

MultiSeries log_series(const MultiSeries& a) {
    auto [a0, u] = split_constant(a, "log_series");
    std::vector<Complex> c(static_cast<std::size_t>(a.degree_cap()) + 1);
    c[0] = std::log(a0);
    for (std::size_t k = 1; k < c.size(); ++k) c[k] = ((k % 2 == 1) ? 1.0 : -1.0) / static_cast<double>(k);
    return horner(u, c);
}

MultiSeries exp_series(const MultiSeries& a) {
    const Complex a0 = a.constant_term();
    MultiSeries u = a;
    u.coeffs()[0] = 0.0;
    std::vector<Complex> c(static_cast<std::size_t>(a.degree_cap()) + 1);
    double fact = 1.0;
    for (std::size_t k = 0; k < c.size(); ++k) {
        if (k > 0) fact *= static_cast<double>(k);
        c[k] = 1.0 / fact;
    }
    return horner(u, c) * std::exp(a0);
}

MultiSeries pow_series(const MultiSeries& a, double p) {
    auto [a0, u] = split_constant(a, "pow_series");
    std::vector<Complex> c(static_cast<std::size_t>(a.degree_cap()) + 1);
    double binom = 1.0;
    for (std::size_t k = 0; k < c.size(); ++k) {
        c[k] = binom;
        binom *= (p - static_cast<double>(k)) / static_cast<double>(k + 1);
    }
    return horner(u, c) * std::pow(a0, p);
}

MultiSeries drop_vars(const MultiSeries& f, std::span<const int> vars) {
    MultiSeries out = f;
    const auto& t = f.table();
    auto co = out.coeffs();
    for (std::size_t i = 0; i < co.size(); ++i) {
        for (int v : vars) {
            if (t.exponent(i)[v] != 0) {
                co[i] = 0.0;
                break;
            }
        }
    }
    return out;
}

MultiSeries remap_vars(const MultiSeries& f, int num_vars, int degree_cap,
                       std::span<const int> var_map) {
    if (static_cast<int>(var_map.size()) != f.num_vars()) {
        throw Error(ErrorKind::Shape, "remap_vars: map length differs from variable count");
    }
    MultiSeries out(num_vars, degree_cap);
    const auto& t = f.table();
    auto cf = f.coeffs();
    std::vector<int> e(static_cast<std::size_t>(num_vars));
    for (std::size_t i = 0; i < cf.size(); ++i) {
        if (cf[i] == Complex{}) continue;
        std::fill(e.begin(), e.end(), 0);
        auto ex = t.exponent(i);
        for (int v = 0; v < f.num_vars(); ++v) {
            if (ex[v] == 0) continue;
            if (var_map[v] < 0 || var_map[v] >= num_vars) {
                throw Error(ErrorKind::Shape, "remap_vars: target of a used variable out of range");
            }
            e[var_map[v]] += ex[v];
        }
        const long idx = out.table().index_of(e);
        if (idx >= 0) out.coeffs()[idx] += cf[i];
    }
    return out;
}

double max_abs_diff(const MultiSeries& a, const MultiSeries& b) {
    require_same_space(a, b, "max_abs_diff");
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.coeffs()[i] - b.coeffs()[i]));
    return m;
}

}  // namespace triples::jet
