#include "rcar/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "rcar/error.hpp"

namespace rcar {

namespace {

void check_dims(std::size_t rows, std::size_t cols) {
    if (rows > SmallMatrix::kMaxDim || cols > SmallMatrix::kMaxDim)
        fail(ErrorKind::Domain, "SmallMatrix dimensions exceed 8x8");
}

void require_same_shape(const SmallMatrix& a, const SmallMatrix& b, const char* op) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        fail(ErrorKind::Domain, std::string(op) + ": shape mismatch");
}

using cplx = std::complex<double>;

cplx horner(const std::vector<double>& c, cplx z) {
    cplx p = 0.0;
    for (std::size_t k = c.size(); k-- > 0;) p = p * z + c[k];
    return p;
}

double abs_horner(const std::vector<double>& c, double r) {
    double p = 0.0;
    for (std::size_t k = c.size(); k-- > 0;) p = p * r + std::abs(c[k]);
    return p;
}

std::vector<double> derivative(const std::vector<double>& c, std::size_t times) {
    std::vector<double> d = c;
    for (std::size_t t = 0; t < times && d.size() > 1; ++t) {
        std::vector<double> e(d.size() - 1);
        for (std::size_t k = 1; k < d.size(); ++k) e[k - 1] = double(k) * d[k];
        d = std::move(e);
    }
    return d;
}

// A root of multiplicity m is a simple root of p^(m-1); Newton on it from the
// cluster centroid. Kept only if it stays inside the cluster.
cplx refine_multiple(const std::vector<double>& c, cplx z0, std::size_t m, double radius) {
    const auto d = derivative(c, m - 1);
    const auto dd = derivative(d, 1);
    cplx z = z0;
    for (int it = 0; it < 50; ++it) {
        const cplx den = horner(dd, z);
        if (den == cplx(0.0, 0.0)) break;
        const cplx step = horner(d, z) / den;
        z -= step;
        if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(z))) break;
    }
    return std::abs(z - z0) <= radius ? z : z0;
}

// Root clusters left by Durand-Kerner around a root of multiplicity m have
// radius of order eps^(1/m).
void merge_clusters(std::vector<cplx>& z, const std::vector<double>& coeffs) {
    const std::size_t n = z.size();
    double scale = 0.0;
    for (const auto& r : z) scale = std::max(scale, std::abs(r));
    if (scale == 0.0 || n < 2) return;
    auto tol = [&](std::size_t m) { return 10.0 * std::pow(1e-15, 1.0 / double(m)) * scale; };

    std::vector<std::size_t> parent(n);
    for (std::size_t i = 0; i < n; ++i) parent[i] = i;
    auto find = [&](std::size_t i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    };
    const double link = tol(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (std::abs(z[i] - z[j]) <= link) parent[find(i)] = find(j);

    std::vector<std::vector<std::size_t>> work;
    for (std::size_t i = 0; i < n; ++i) {
        if (find(i) != i) continue;
        std::vector<std::size_t> comp;
        for (std::size_t j = 0; j < n; ++j)
            if (find(j) == i) comp.push_back(j);
        if (comp.size() > 1) work.push_back(std::move(comp));
    }
    while (!work.empty()) {
        auto comp = std::move(work.back());
        work.pop_back();
        std::vector<std::size_t> dropped;
        while (comp.size() > 1) {
            cplx c = 0.0;
            for (auto k : comp) c += z[k];
            c /= double(comp.size());
            std::size_t far = 0;
            double spread = -1.0;
            for (std::size_t k = 0; k < comp.size(); ++k) {
                double d = std::abs(z[comp[k]] - c);
                if (d > spread) spread = d, far = k;
            }
            if (spread <= tol(comp.size())) {
                c = refine_multiple(coeffs, c, comp.size(), tol(comp.size()));
                for (auto k : comp) z[k] = c;
                break;
            }
            dropped.push_back(comp[far]);
            comp.erase(comp.begin() + long(far));
        }
        if (dropped.size() > 1) work.push_back(std::move(dropped));
    }
}

}  // namespace

SmallMatrix::SmallMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {
    check_dims(rows, cols);
}

SmallMatrix::SmallMatrix(std::initializer_list<std::initializer_list<double>> rows) {
    rows_ = rows.size();
    cols_ = rows_ ? rows.begin()->size() : 0;
    check_dims(rows_, cols_);
    std::size_t i = 0;
    for (const auto& r : rows) {
        if (r.size() != cols_) fail(ErrorKind::Domain, "SmallMatrix: ragged initializer");
        std::size_t j = 0;
        for (double v : r) (*this)(i, j++) = v;
        ++i;
    }
}

SmallMatrix SmallMatrix::identity(std::size_t n) {
    SmallMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

SmallMatrix SmallMatrix::from_columns(const std::vector<Vector>& columns) {
    const std::size_t r = columns.empty() ? 0 : columns.front().size();
    SmallMatrix m(r, columns.size());
    for (std::size_t j = 0; j < columns.size(); ++j) m.set_column(j, columns[j]);
    return m;
}

Vector SmallMatrix::row(std::size_t i) const {
    Vector v(cols_);
    for (std::size_t j = 0; j < cols_; ++j) v[j] = (*this)(i, j);
    return v;
}

Vector SmallMatrix::column(std::size_t j) const {
    Vector v(rows_);
    for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
    return v;
}

void SmallMatrix::set_column(std::size_t j, const Vector& v) {
    if (v.size() != rows_ || j >= cols_) fail(ErrorKind::Domain, "set_column: shape mismatch");
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
}

SmallMatrix SmallMatrix::transpose() const {
    SmallMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

bool SmallMatrix::all_finite() const noexcept {
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            if (!std::isfinite((*this)(i, j))) return false;
    return true;
}

double SmallMatrix::max_abs() const noexcept {
    double m = 0.0;
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) m = std::max(m, std::abs((*this)(i, j)));
    return m;
}

bool operator==(const SmallMatrix& a, const SmallMatrix& b) noexcept {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) return false;
    for (std::size_t i = 0; i < a.rows_; ++i)
        for (std::size_t j = 0; j < a.cols_; ++j)
            if (a(i, j) != b(i, j)) return false;
    return true;
}

SmallMatrix operator+(const SmallMatrix& a, const SmallMatrix& b) {
    require_same_shape(a, b, "matrix add");
    SmallMatrix c(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) + b(i, j);
    return c;
}

SmallMatrix operator-(const SmallMatrix& a, const SmallMatrix& b) {
    require_same_shape(a, b, "matrix subtract");
    SmallMatrix c(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) - b(i, j);
    return c;
}

SmallMatrix operator*(const SmallMatrix& a, const SmallMatrix& b) {
    if (a.cols() != b.rows()) fail(ErrorKind::Domain, "matrix multiply: shape mismatch");
    SmallMatrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

SmallMatrix operator*(double s, const SmallMatrix& a) {
    SmallMatrix c(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = s * a(i, j);
    return c;
}

Vector operator*(const SmallMatrix& a, const Vector& x) {
    if (a.cols() != x.size()) fail(ErrorKind::Domain, "matrix-vector multiply: shape mismatch");
    Vector y(a.rows(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) y[i] += a(i, j) * x[j];
    return y;
}

Vector operator+(const Vector& a, const Vector& b) {
    if (a.size() != b.size()) fail(ErrorKind::Domain, "vector add: size mismatch");
    Vector c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] + b[i];
    return c;
}

Vector operator*(double s, const Vector& a) {
    Vector c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) c[i] = s * a[i];
    return c;
}

double dot(const Vector& a, const Vector& b) {
    if (a.size() != b.size()) fail(ErrorKind::Domain, "dot: size mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

Vector solve(const SmallMatrix& a, const Vector& b, std::string_view label) {
    const std::size_t n = a.rows();
    if (!a.square() || b.size() != n)
        fail(ErrorKind::Domain, std::string(label) + ": shape mismatch");
    if (!a.all_finite()) fail(ErrorKind::Numeric, std::string(label) + ": non-finite matrix entries");
    SmallMatrix m = a;
    Vector x = b;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(m(i, k)) > std::abs(m(piv, k))) piv = i;
        if (std::abs(m(piv, k)) <= 1e-12)
            fail(ErrorKind::Numeric, std::string(label) + ": singular matrix (pivot below 1e-12)");
        if (piv != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(m(k, j), m(piv, j));
            std::swap(x[k], x[piv]);
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            const double f = m(i, k) / m(k, k);
            if (f == 0.0) continue;
            for (std::size_t j = k; j < n; ++j) m(i, j) -= f * m(k, j);
            x[i] -= f * x[k];
        }
    }
    for (std::size_t k = n; k-- > 0;) {
        double s = x[k];
        for (std::size_t j = k + 1; j < n; ++j) s -= m(k, j) * x[j];
        x[k] = s / m(k, k);
    }
    return x;
}

std::vector<double> characteristic_polynomial(const SmallMatrix& a) {
    if (!a.square()) fail(ErrorKind::Domain, "characteristic_polynomial: matrix not square");
    const std::size_t n = a.rows();
    std::vector<double> c(n + 1, 0.0);
    c[n] = 1.0;
    SmallMatrix mk(n, n);
    const SmallMatrix id = SmallMatrix::identity(n);
    for (std::size_t k = 1; k <= n; ++k) {
        mk = a * mk + c[n - k + 1] * id;
        const SmallMatrix am = a * mk;
        double tr = 0.0;
        for (std::size_t i = 0; i < n; ++i) tr += am(i, i);
        c[n - k] = -tr / double(k);
    }
    return c;
}

std::vector<std::complex<double>> eigenvalues(const SmallMatrix& a) {
    const std::vector<double> c = characteristic_polynomial(a);
    const std::size_t n = c.size() - 1;
    if (n == 0) return {};
    if (n == 1) return {cplx(-c[0], 0.0)};

    // Fujiwara bound on root moduli.
    double bound = 0.0;
    for (std::size_t k = 1; k <= n; ++k) {
        double v = std::abs(c[n - k]);
        if (k == n) v /= 2.0;
        bound = std::max(bound, std::pow(v, 1.0 / double(k)));
    }
    bound *= 2.0;
    if (bound == 0.0) return std::vector<cplx>(n, cplx(0.0, 0.0));

    std::vector<cplx> z(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double ang = 2.0 * std::numbers::pi * double(k) / double(n) + 0.4;
        z[k] = 0.9 * bound * cplx(std::cos(ang), std::sin(ang));
    }
    const double pscale = abs_horner(c, bound);

    auto sweep = [&]() {
        double max_step = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            cplx den = 1.0;
            for (std::size_t j = 0; j < n; ++j)
                if (j != i) den *= (z[i] - z[j]);
            if (den == cplx(0.0, 0.0)) den = cplx(1e-300, 0.0);
            const cplx step = horner(c, z[i]) / den;
            z[i] -= step;
            max_step = std::max(max_step, std::abs(step));
        }
        return max_step;
    };
    auto converged = [&]() {
        for (const auto& r : z)
            if (!(std::abs(horner(c, r)) <= 1e-12 * pscale)) return false;
        return true;
    };

    int sweeps = 0;
    for (; sweeps < 1000; ++sweeps) {
        sweep();
        if (converged()) break;
    }
    if (sweeps == 1000)
        fail(ErrorKind::Numeric, "spectral_radius: Durand-Kerner did not converge in 1000 sweeps");

    // Polish while the corrections keep shrinking.
    double last = sweep();
    for (int extra = 0; extra < 200 && last > 1e-17 * bound; ++extra) {
        const double step = sweep();
        if (!(step < last)) break;
        last = step;
    }
    merge_clusters(z, c);
    return z;
}

double spectral_radius(const SmallMatrix& a) {
    if (!a.square()) fail(ErrorKind::Domain, "spectral_radius: matrix not square");
    if (!a.all_finite()) fail(ErrorKind::Numeric, "spectral_radius: non-finite matrix entries");
    double r = 0.0;
    for (const auto& z : eigenvalues(a)) r = std::max(r, std::abs(z));
    return r;
}

double chisq1_tail(double s) {
    if (!(s >= 0.0)) fail(ErrorKind::Domain, "chisq1_tail: argument must be non-negative");
    return std::erfc(std::sqrt(s / 2.0));
}

SmallMatrix hadamard(const SmallMatrix& a, const SmallMatrix& b) {
    require_same_shape(a, b, "hadamard");
    SmallMatrix c(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) * b(i, j);
    return c;
}

SmallMatrix mat_power(const SmallMatrix& a, unsigned k) {
    if (!a.square()) fail(ErrorKind::Domain, "mat_power: matrix not square");
    SmallMatrix result = SmallMatrix::identity(a.rows());
    SmallMatrix base = a;
    while (k > 0) {
        if (k & 1u) result = result * base;
        k >>= 1u;
        if (k > 0) base = base * base;
    }
    return result;
}

}  // namespace rcar
