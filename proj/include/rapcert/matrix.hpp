#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <vector>

#include "rapcert/common.hpp"

namespace rapcert {

using Vec = std::vector<double>;

// Dense row-major matrix. Everything in this artifact is small (n <= 64), so
// no blocking or sparsity; value semantics throughout.
class Matrix {
  public:
    Matrix() = default;
    Matrix(int rows, int cols, double fill = 0.0)
        : rows_(rows), cols_(cols), a_(static_cast<std::size_t>(rows) * cols, fill) {
        if (rows < 0 || cols < 0) throw StructuralError("Matrix: negative dimension");
    }
    Matrix(std::initializer_list<std::initializer_list<double>> rows) {
        rows_ = static_cast<int>(rows.size());
        cols_ = rows_ == 0 ? 0 : static_cast<int>(rows.begin()->size());
        a_.reserve(static_cast<std::size_t>(rows_) * cols_);
        for (const auto& r : rows) {
            if (static_cast<int>(r.size()) != cols_) throw StructuralError("Matrix: ragged initializer");
            a_.insert(a_.end(), r.begin(), r.end());
        }
    }

    static Matrix identity(int n) {
        Matrix m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }
    static Matrix diagonal(const Vec& d) {
        Matrix m(static_cast<int>(d.size()), static_cast<int>(d.size()));
        for (int i = 0; i < m.rows_; ++i) m(i, i) = d[static_cast<std::size_t>(i)];
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }

    double& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * cols_ + j]; }
    double operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * cols_ + j]; }

    Matrix& operator+=(const Matrix& o) {
        check_same_shape(o);
        for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
        return *this;
    }
    Matrix& operator-=(const Matrix& o) {
        check_same_shape(o);
        for (std::size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
        return *this;
    }
    Matrix& operator*=(double s) {
        for (double& v : a_) v *= s;
        return *this;
    }

    friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
    friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
    friend Matrix operator*(Matrix a, double s) { return a *= s; }
    friend Matrix operator*(double s, Matrix a) { return a *= s; }

    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        if (a.cols_ != b.rows_) throw StructuralError("Matrix multiply: inner dimensions differ");
        Matrix r(a.rows_, b.cols_);
        for (int i = 0; i < a.rows_; ++i)
            for (int k = 0; k < a.cols_; ++k) {
                const double aik = a(i, k);
                if (aik == 0.0) continue;
                for (int j = 0; j < b.cols_; ++j) r(i, j) += aik * b(k, j);
            }
        return r;
    }

    double one_norm() const {  // max column sum
        double best = 0;
        for (int j = 0; j < cols_; ++j) {
            double s = 0;
            for (int i = 0; i < rows_; ++i) s += std::abs((*this)(i, j));
            best = std::max(best, s);
        }
        return best;
    }
    double inf_norm() const {  // max row sum
        double best = 0;
        for (int i = 0; i < rows_; ++i) {
            double s = 0;
            for (int j = 0; j < cols_; ++j) s += std::abs((*this)(i, j));
            best = std::max(best, s);
        }
        return best;
    }
    double frobenius_norm() const {
        double s = 0;
        for (double v : a_) s += v * v;
        return std::sqrt(s);
    }
    double max_abs() const {
        double best = 0;
        for (double v : a_) best = std::max(best, std::abs(v));
        return best;
    }
    bool all_finite() const {
        return std::all_of(a_.begin(), a_.end(), [](double v) { return std::isfinite(v); });
    }
    bool is_diagonal() const {
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j)
                if (i != j && (*this)(i, j) != 0.0) return false;
        return true;
    }

  private:
    void check_same_shape(const Matrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) throw StructuralError("Matrix: shape mismatch");
    }

    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> a_;
};

inline Vec ones(int n) { return Vec(static_cast<std::size_t>(n), 1.0); }

inline double vec_sum(const Vec& v) {
    double s = 0;
    for (double x : v) s += x;
    return s;
}

inline double dot(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw StructuralError("dot: length mismatch");
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

// row vector * matrix
inline Vec operator*(const Vec& row, const Matrix& m) {
    if (static_cast<int>(row.size()) != m.rows()) throw StructuralError("row*M: length mismatch");
    Vec r(static_cast<std::size_t>(m.cols()), 0.0);
    for (int i = 0; i < m.rows(); ++i) {
        const double ri = row[static_cast<std::size_t>(i)];
        if (ri == 0.0) continue;
        for (int j = 0; j < m.cols(); ++j) r[static_cast<std::size_t>(j)] += ri * m(i, j);
    }
    return r;
}

inline Vec matvec(const Matrix& m, const Vec& x) {
    if (static_cast<int>(x.size()) != m.cols()) throw StructuralError("M*x: length mismatch");
    Vec r(static_cast<std::size_t>(m.rows()), 0.0);
    for (int i = 0; i < m.rows(); ++i) {
        double s = 0;
        for (int j = 0; j < m.cols(); ++j) s += m(i, j) * x[static_cast<std::size_t>(j)];
        r[static_cast<std::size_t>(i)] = s;
    }
    return r;
}

// Row sums of m, i.e. m*1.
inline Vec row_sums(const Matrix& m) { return matvec(m, ones(m.cols())); }

// LU factorisation with partial pivoting; enough for the Pade solves and for
// determinants in tests.
struct Lu {
    Matrix lu;
    std::vector<int> piv;
    double parity = 1.0;
    bool singular = false;

    static Lu factor(Matrix a) {
        if (!a.square()) throw StructuralError("Lu: matrix not square");
        const int n = a.rows();
        Lu f;
        f.piv.resize(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) f.piv[static_cast<std::size_t>(i)] = i;
        for (int k = 0; k < n; ++k) {
            int p = k;
            double best = std::abs(a(k, k));
            for (int i = k + 1; i < n; ++i)
                if (std::abs(a(i, k)) > best) {
                    best = std::abs(a(i, k));
                    p = i;
                }
            if (best == 0.0) {
                f.singular = true;
                continue;
            }
            if (p != k) {
                for (int j = 0; j < n; ++j) std::swap(a(p, j), a(k, j));
                std::swap(f.piv[static_cast<std::size_t>(p)], f.piv[static_cast<std::size_t>(k)]);
                f.parity = -f.parity;
            }
            for (int i = k + 1; i < n; ++i) {
                a(i, k) /= a(k, k);
                const double lik = a(i, k);
                if (lik == 0.0) continue;
                for (int j = k + 1; j < n; ++j) a(i, j) -= lik * a(k, j);
            }
        }
        f.lu = std::move(a);
        return f;
    }

    Vec solve(const Vec& b) const {
        if (singular) throw NumericError("Lu::solve: singular matrix");
        const int n = lu.rows();
        Vec x(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) x[static_cast<std::size_t>(i)] = b[static_cast<std::size_t>(piv[static_cast<std::size_t>(i)])];
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < i; ++j) x[static_cast<std::size_t>(i)] -= lu(i, j) * x[static_cast<std::size_t>(j)];
        for (int i = n - 1; i >= 0; --i) {
            for (int j = i + 1; j < n; ++j) x[static_cast<std::size_t>(i)] -= lu(i, j) * x[static_cast<std::size_t>(j)];
            x[static_cast<std::size_t>(i)] /= lu(i, i);
        }
        return x;
    }

    Matrix solve(const Matrix& b) const {
        if (b.rows() != lu.rows()) throw StructuralError("Lu::solve: shape mismatch");
        Matrix r(b.rows(), b.cols());
        Vec col(static_cast<std::size_t>(b.rows()));
        for (int j = 0; j < b.cols(); ++j) {
            for (int i = 0; i < b.rows(); ++i) col[static_cast<std::size_t>(i)] = b(i, j);
            Vec x = solve(col);
            for (int i = 0; i < b.rows(); ++i) r(i, j) = x[static_cast<std::size_t>(i)];
        }
        return r;
    }

    double determinant() const {
        if (singular) return 0.0;
        double d = parity;
        for (int i = 0; i < lu.rows(); ++i) d *= lu(i, i);
        return d;
    }
};

inline double determinant(const Matrix& a) { return Lu::factor(a).determinant(); }

}  // namespace rapcert
