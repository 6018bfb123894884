#pragma once

// Truncated multivariate power series with complex coefficients.
//
// A series lives in a fixed (num_vars, degree_cap) space. Coefficients are
// stored densely in graded-lexicographic monomial order; every operation
// discards terms of total degree above the cap, so arithmetic is exact
// modulo that ideal.

#include <complex>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace triples::jet {

using Complex = std::complex<double>;
using Exponent = std::vector<int>;

/// Shared monomial enumeration and product table for one (num_vars, cap).
class MonomialTable {
public:
    /// Cached, thread-safe lookup. Tables are immutable once built.
    static std::shared_ptr<const MonomialTable> get(int num_vars, int cap);

    int num_vars() const noexcept { return num_vars_; }
    int cap() const noexcept { return cap_; }
    std::size_t size() const noexcept { return degrees_.size(); }

    std::span<const int> exponent(std::size_t idx) const {
        return {exponents_.data() + idx * static_cast<std::size_t>(num_vars_),
                static_cast<std::size_t>(num_vars_)};
    }
    int degree(std::size_t idx) const noexcept { return degrees_[idx]; }

    /// Number of monomials of total degree <= d.
    std::size_t count_up_to(int d) const noexcept;

    /// Index of the monomial, or -1 when the degree exceeds the cap.
    long index_of(std::span<const int> e) const;

    /// Index of e_i + e_j; only valid for j < count_up_to(cap - degree(i)).
    std::uint32_t product_index(std::size_t i, std::size_t j) const {
        return product_[product_offset_[i] + j];
    }

    /// Index of e_i - unit(v), or -1 when the exponent of v is zero.
    long lowered(std::size_t i, int v) const { return lowered_[i * num_vars_ + v]; }

private:
    MonomialTable(int num_vars, int cap);

    int num_vars_;
    int cap_;
    std::vector<int> exponents_;
    std::vector<int> degrees_;
    std::vector<std::size_t> count_up_to_;
    std::vector<long> dense_index_;
    std::vector<std::size_t> product_offset_;
    std::vector<std::uint32_t> product_;
    std::vector<long> lowered_;
};

class MultiSeries {
public:
    MultiSeries(int num_vars, int degree_cap);

    static MultiSeries constant(int num_vars, int degree_cap, Complex c);
    static MultiSeries variable(int num_vars, int degree_cap, int v);
    /// c * prod x_i^{e_i}; terms above the cap are dropped.
    static MultiSeries monomial(int num_vars, int degree_cap, std::span<const int> e, Complex c);

    int num_vars() const noexcept { return table_->num_vars(); }
    int degree_cap() const noexcept { return table_->cap(); }
    const MonomialTable& table() const noexcept { return *table_; }
    std::size_t size() const noexcept { return coeffs_.size(); }

    Complex coeff(std::span<const int> e) const;
    void set_coeff(std::span<const int> e, Complex c);
    Complex constant_term() const noexcept { return coeffs_[0]; }

    std::span<const Complex> coeffs() const noexcept { return coeffs_; }
    std::span<Complex> coeffs() noexcept { return coeffs_; }

    MultiSeries& operator+=(const MultiSeries& o);
    MultiSeries& operator-=(const MultiSeries& o);
    MultiSeries& operator*=(Complex s);
    MultiSeries& operator*=(const MultiSeries& o);

    friend MultiSeries operator+(MultiSeries a, const MultiSeries& b) { return a += b; }
    friend MultiSeries operator-(MultiSeries a, const MultiSeries& b) { return a -= b; }
    friend MultiSeries operator*(MultiSeries a, Complex s) { return a *= s; }
    friend MultiSeries operator*(Complex s, MultiSeries a) { return a *= s; }
    friend MultiSeries operator-(MultiSeries a) { return a *= Complex(-1.0); }
    friend MultiSeries operator*(const MultiSeries& a, const MultiSeries& b);

    /// Adds c to the constant term.
    MultiSeries& add_constant(Complex c) {
        coeffs_[0] += c;
        return *this;
    }

    /// Partial derivative; the top-degree slice becomes zero.
    MultiSeries derivative(int v) const;

    Complex evaluate(std::span<const Complex> point) const;

    /// Largest absolute coefficient.
    double max_abs() const noexcept;
    /// Highest degree with a nonzero coefficient, -1 for the zero series.
    int order_max() const noexcept;

    bool same_space(const MultiSeries& o) const noexcept {
        return table_ == o.table_;
    }

private:
    std::shared_ptr<const MonomialTable> table_;
    std::vector<Complex> coeffs_;
};

/// Coefficient-wise truncated product. Throws ShapeError on mismatched spaces.
MultiSeries series_mul(const MultiSeries& a, const MultiSeries& b);

/// Substitutes subst[i] for variable i of f. The substitutions must share one
/// target space and have zero constant term, so truncation stays graded.
MultiSeries series_compose(const MultiSeries& f, std::span<const MultiSeries> subst);

/// 1/a for a series with nonzero constant term.
MultiSeries reciprocal(const MultiSeries& a);

/// Power series of log(a), exp(a) and a^p for a with suitable constant term.
MultiSeries log_series(const MultiSeries& a);
MultiSeries exp_series(const MultiSeries& a);
MultiSeries pow_series(const MultiSeries& a, double p);

/// Sets every monomial that involves one of `vars` to zero.
MultiSeries drop_vars(const MultiSeries& f, std::span<const int> vars);

/// Re-expresses f in a space with `num_vars` variables: old variable i
/// becomes new variable var_map[i]. The cap may change; terms above the
/// new cap are dropped.
MultiSeries remap_vars(const MultiSeries& f, int num_vars, int degree_cap,
                       std::span<const int> var_map);

/// Max coefficient distance between two series in the same space.
double max_abs_diff(const MultiSeries& a, const MultiSeries& b);

}  // namespace triples::jet
