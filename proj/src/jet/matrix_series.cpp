#include "triples/jet/matrix_series.hpp"

#include <algorithm>
#include <string>

#include "triples/error.hpp"

namespace triples::jet {

namespace {

void require_same_shape(const MatrixSeries& a, const MatrixSeries& b, const char* what) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw Error(ErrorKind::Shape, std::string(what) + ": matrix shapes differ");
    }
}

}  // namespace

MatrixSeries::MatrixSeries(int rows, int cols, int num_vars, int degree_cap)
    : rows_(rows), cols_(cols) {
    if (rows < 1 || cols < 1) throw Error(ErrorKind::Shape, "matrix series needs positive shape");
    entries_.assign(static_cast<std::size_t>(rows * cols), MultiSeries(num_vars, degree_cap));
}

MatrixSeries MatrixSeries::identity(int size, int num_vars, int degree_cap) {
    MatrixSeries m(size, size, num_vars, degree_cap);
    for (int i = 0; i < size; ++i) m(i, i).add_constant(1.0);
    return m;
}

MatrixSeries MatrixSeries::constant(const Eigen::MatrixXcd& c, int num_vars, int degree_cap) {
    MatrixSeries m(static_cast<int>(c.rows()), static_cast<int>(c.cols()), num_vars, degree_cap);
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) m(i, j).add_constant(c(i, j));
    return m;
}

Eigen::MatrixXcd MatrixSeries::constant_term() const {
    Eigen::MatrixXcd c(rows_, cols_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) c(i, j) = (*this)(i, j).constant_term();
    return c;
}

Eigen::MatrixXcd MatrixSeries::coeff(std::span<const int> e) const {
    Eigen::MatrixXcd c(rows_, cols_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) c(i, j) = (*this)(i, j).coeff(e);
    return c;
}

Eigen::MatrixXcd MatrixSeries::evaluate(std::span<const Complex> point) const {
    Eigen::MatrixXcd c(rows_, cols_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) c(i, j) = (*this)(i, j).evaluate(point);
    return c;
}

MatrixSeries& MatrixSeries::operator+=(const MatrixSeries& o) {
    require_same_shape(*this, o, "matrix add");
    for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] += o.entries_[k];
    return *this;
}

MatrixSeries& MatrixSeries::operator-=(const MatrixSeries& o) {
    require_same_shape(*this, o, "matrix subtract");
    for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] -= o.entries_[k];
    return *this;
}

MatrixSeries& MatrixSeries::operator*=(Complex s) {
    for (auto& e : entries_) e *= s;
    return *this;
}

MatrixSeries operator*(const MatrixSeries& a, const MatrixSeries& b) {
    if (a.cols() != b.rows()) throw Error(ErrorKind::Shape, "matrix product: inner sizes differ");
    MatrixSeries out(a.rows(), b.cols(), a.num_vars(), a.degree_cap());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < b.cols(); ++j)
            for (int k = 0; k < a.cols(); ++k) out(i, j) += series_mul(a(i, k), b(k, j));
    return out;
}

MatrixSeries operator*(const MultiSeries& s, const MatrixSeries& a) {
    MatrixSeries out = a;
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) out(i, j) = series_mul(s, a(i, j));
    return out;
}

MatrixSeries MatrixSeries::derivative(int v) const {
    MatrixSeries out = *this;
    for (auto& e : out.entries_) e = e.derivative(v);
    return out;
}

MatrixSeries MatrixSeries::transpose() const {
    MatrixSeries out(cols_, rows_, num_vars(), degree_cap());
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
    return out;
}

MultiSeries MatrixSeries::trace() const {
    if (rows_ != cols_) throw Error(ErrorKind::Shape, "trace of a non-square matrix");
    MultiSeries t(num_vars(), degree_cap());
    for (int i = 0; i < rows_; ++i) t += (*this)(i, i);
    return t;
}

double MatrixSeries::max_abs() const noexcept {
    double m = 0.0;
    for (const auto& e : entries_) m = std::max(m, e.max_abs());
    return m;
}

MatrixSeries matrix_series_inverse(const MatrixSeries& m) {
    if (m.rows() != m.cols()) throw Error(ErrorKind::Shape, "inverse of a non-square matrix");
    const Eigen::MatrixXcd m0 = m.constant_term();
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(m0);
    lu.setThreshold(1e-13);
    if (!lu.isInvertible()) {
        throw Error(ErrorKind::Singularity, "matrix series has a singular constant term");
    }
    const Eigen::MatrixXcd m0inv = lu.inverse();
    const int nv = m.num_vars();
    const int cap = m.degree_cap();
    const MatrixSeries inv0 = MatrixSeries::constant(m0inv, nv, cap);
    // m = m0 (Id + N), N without constant term.
    MatrixSeries n = inv0 * m;
    for (int i = 0; i < n.rows(); ++i) n(i, i).add_constant(-1.0);
    for (int i = 0; i < n.rows(); ++i)
        for (int j = 0; j < n.cols(); ++j) n(i, j).coeffs()[0] = 0.0;
    // (Id + N)^{-1} = Id - N (Id - N (Id - ...)), exact after cap steps.
    MatrixSeries acc = MatrixSeries::identity(m.rows(), nv, cap);
    for (int k = 0; k < cap; ++k) {
        acc = MatrixSeries::identity(m.rows(), nv, cap) - n * acc;
    }
    return acc * inv0;
}

namespace {

MultiSeries det_rec(const MatrixSeries& m, std::vector<int>& rows_left, int col) {
    const int size = m.rows();
    if (col == size - 1) return m(rows_left.front(), col);
    MultiSeries sum(m.num_vars(), m.degree_cap());
    for (std::size_t k = 0; k < rows_left.size(); ++k) {
        const int row = rows_left[k];
        std::vector<int> rest;
        rest.reserve(rows_left.size() - 1);
        for (std::size_t q = 0; q < rows_left.size(); ++q)
            if (q != k) rest.push_back(rows_left[q]);
        MultiSeries minor = det_rec(m, rest, col + 1);
        MultiSeries term = series_mul(m(row, col), minor);
        if (k % 2 == 0) sum += term;
        else sum -= term;
    }
    return sum;
}

}  // namespace

MultiSeries matrix_series_det(const MatrixSeries& m) {
    if (m.rows() != m.cols()) throw Error(ErrorKind::Shape, "determinant of a non-square matrix");
    std::vector<int> rows(static_cast<std::size_t>(m.rows()));
    for (int i = 0; i < m.rows(); ++i) rows[i] = i;
    return det_rec(m, rows, 0);
}

MatrixSeries matrix_series_compose(const MatrixSeries& m, std::span<const MultiSeries> subst) {
    if (subst.empty()) throw Error(ErrorKind::Shape, "matrix compose: empty substitution");
    MatrixSeries out(m.rows(), m.cols(), subst[0].num_vars(), subst[0].degree_cap());
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) out(i, j) = series_compose(m(i, j), subst);
    return out;
}

MatrixSeries matrix_remap_vars(const MatrixSeries& m, int num_vars, int degree_cap,
                               std::span<const int> var_map) {
    MatrixSeries out(m.rows(), m.cols(), num_vars, degree_cap);
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j)
            out(i, j) = remap_vars(m(i, j), num_vars, degree_cap, var_map);
    return out;
}

double max_abs_diff(const MatrixSeries& a, const MatrixSeries& b) {
    require_same_shape(a, b, "max_abs_diff");
    double d = 0.0;
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) d = std::max(d, max_abs_diff(a(i, j), b(i, j)));
    return d;
}

}  // namespace triples::jet
