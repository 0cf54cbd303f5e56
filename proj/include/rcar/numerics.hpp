#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <string_view>
#include <vector>

namespace rcar {

using Vector = std::vector<double>;

/**
 * @brief Dense row-major matrix with at most 8 rows and 8 columns.
 *
 * Storage is inline, so copies are cheap and there is no allocation.
 */
class SmallMatrix {
public:
    static constexpr std::size_t kMaxDim = 8;

    SmallMatrix() = default;
    SmallMatrix(std::size_t rows, std::size_t cols);
    SmallMatrix(std::initializer_list<std::initializer_list<double>> rows);

    static SmallMatrix identity(std::size_t n);
    static SmallMatrix from_columns(const std::vector<Vector>& columns);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool square() const noexcept { return rows_ == cols_; }

    double& operator()(std::size_t i, std::size_t j) noexcept { return a_[i * kMaxDim + j]; }
    double operator()(std::size_t i, std::size_t j) const noexcept { return a_[i * kMaxDim + j]; }

    Vector row(std::size_t i) const;
    Vector column(std::size_t j) const;
    void set_column(std::size_t j, const Vector& v);
    SmallMatrix transpose() const;
    bool all_finite() const noexcept;
    double max_abs() const noexcept;

    friend bool operator==(const SmallMatrix& a, const SmallMatrix& b) noexcept;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::array<double, kMaxDim * kMaxDim> a_{};
};

SmallMatrix operator+(const SmallMatrix& a, const SmallMatrix& b);
SmallMatrix operator-(const SmallMatrix& a, const SmallMatrix& b);
SmallMatrix operator*(const SmallMatrix& a, const SmallMatrix& b);
SmallMatrix operator*(double s, const SmallMatrix& a);
Vector operator*(const SmallMatrix& a, const Vector& x);

Vector operator+(const Vector& a, const Vector& b);
Vector operator*(double s, const Vector& a);
double dot(const Vector& a, const Vector& b);

/// Solves A x = b by Gaussian elimination with partial pivoting.
/// Throws a numeric error naming `label` when a pivot falls below 1e-12.
Vector solve(const SmallMatrix& a, const Vector& b, std::string_view label = "solve");

/// Characteristic polynomial det(lambda I - A) via Faddeev-LeVerrier.
/// Returns coefficients c[0..n] of c[0] + c[1] lambda + ... + c[n] lambda^n, with c[n] = 1.
std::vector<double> characteristic_polynomial(const SmallMatrix& a);

/// All roots of the characteristic polynomial (Durand-Kerner).
std::vector<std::complex<double>> eigenvalues(const SmallMatrix& a);

double spectral_radius(const SmallMatrix& a);

/// P(chi2_1 > s).
double chisq1_tail(double s);

SmallMatrix hadamard(const SmallMatrix& a, const SmallMatrix& b);
SmallMatrix mat_power(const SmallMatrix& a, unsigned k);

}  // namespace rcar
