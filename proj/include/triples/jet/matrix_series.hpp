#pragma once

// Matrices whose entries are truncated power series in a common space.

#include <Eigen/Dense>

#include <span>
#include <vector>

#include "triples/jet/series.hpp"

namespace triples::jet {

class MatrixSeries {
public:
    MatrixSeries(int rows, int cols, int num_vars, int degree_cap);

    static MatrixSeries identity(int size, int num_vars, int degree_cap);
    /// Constant matrix lifted into the series space.
    static MatrixSeries constant(const Eigen::MatrixXcd& m, int num_vars, int degree_cap);

    int rows() const noexcept { return rows_; }
    int cols() const noexcept { return cols_; }
    int num_vars() const noexcept { return entries_.front().num_vars(); }
    int degree_cap() const noexcept { return entries_.front().degree_cap(); }

    MultiSeries& operator()(int i, int j) { return entries_[static_cast<std::size_t>(i * cols_ + j)]; }
    const MultiSeries& operator()(int i, int j) const {
        return entries_[static_cast<std::size_t>(i * cols_ + j)];
    }

    /// Matrix of constant terms.
    Eigen::MatrixXcd constant_term() const;
    /// Matrix of the coefficients of one monomial.
    Eigen::MatrixXcd coeff(std::span<const int> e) const;
    Eigen::MatrixXcd evaluate(std::span<const Complex> point) const;

    MatrixSeries& operator+=(const MatrixSeries& o);
    MatrixSeries& operator-=(const MatrixSeries& o);
    MatrixSeries& operator*=(Complex s);

    friend MatrixSeries operator+(MatrixSeries a, const MatrixSeries& b) { return a += b; }
    friend MatrixSeries operator-(MatrixSeries a, const MatrixSeries& b) { return a -= b; }
    friend MatrixSeries operator*(MatrixSeries a, Complex s) { return a *= s; }
    friend MatrixSeries operator*(Complex s, MatrixSeries a) { return a *= s; }
    friend MatrixSeries operator*(const MatrixSeries& a, const MatrixSeries& b);
    /// Entrywise scaling by a scalar series.
    friend MatrixSeries operator*(const MultiSeries& s, const MatrixSeries& a);

    MatrixSeries derivative(int v) const;
    MatrixSeries transpose() const;
    MultiSeries trace() const;

    /// Largest coefficient magnitude over all entries.
    double max_abs() const noexcept;

private:
    int rows_;
    int cols_;
    std::vector<MultiSeries> entries_;
};

/// Graded inverse around the constant term. Throws SingularityError when the
/// constant-term matrix is not invertible.
MatrixSeries matrix_series_inverse(const MatrixSeries& m);

/// Determinant by cofactor expansion.
MultiSeries matrix_series_det(const MatrixSeries& m);

/// Entrywise composition, see series_compose.
MatrixSeries matrix_series_compose(const MatrixSeries& m, std::span<const MultiSeries> subst);

/// Entrywise remap_vars.
MatrixSeries matrix_remap_vars(const MatrixSeries& m, int num_vars, int degree_cap,
                               std::span<const int> var_map);

double max_abs_diff(const MatrixSeries& a, const MatrixSeries& b);

}  // namespace triples::jet
