#include "ellspin/dense.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace ellspin {

namespace {

double hypot2(double a, double b) { return std::sqrt(a * a + b * b); }

// Householder reduction to tridiagonal form; z holds the accumulated
// orthogonal transform on exit, d the diagonal, e the subdiagonal (e[0]=0).
void tridiagonalize(Matrix& z, std::vector<double>& d,
                    std::vector<double>& e) {
    const int n = z.rows();
    for (int i = n - 1; i > 0; --i) {
        const int l = i - 1;
        double h = 0.0, scale = 0.0;
        if (l > 0) {
            for (int k = 0; k <= l; ++k) scale += std::abs(z(i, k));
            if (scale == 0.0) {
                e[i] = z(i, l);
            } else {
                for (int k = 0; k <= l; ++k) {
                    z(i, k) /= scale;
                    h += z(i, k) * z(i, k);
                }
                double f = z(i, l);
                double g = (f >= 0.0) ? -std::sqrt(h) : std::sqrt(h);
                e[i] = scale * g;
                h -= f * g;
                z(i, l) = f - g;
                f = 0.0;
                for (int j = 0; j <= l; ++j) {
                    z(j, i) = z(i, j) / h;
                    g = 0.0;
                    for (int k = 0; k <= j; ++k) g += z(j, k) * z(i, k);
                    for (int k = j + 1; k <= l; ++k) g += z(k, j) * z(i, k);
                    e[j] = g / h;
                    f += e[j] * z(i, j);
                }
                const double hh = f / (h + h);
                for (int j = 0; j <= l; ++j) {
                    f = z(i, j);
                    e[j] = g = e[j] - hh * f;
                    for (int k = 0; k <= j; ++k)
                        z(j, k) -= f * e[k] + g * z(i, k);
                }
            }
        } else {
            e[i] = z(i, l);
        }
        d[i] = h;
    }
    d[0] = 0.0;
    e[0] = 0.0;
    for (int i = 0; i < n; ++i) {
        const int l = i - 1;
        if (d[i] != 0.0) {
            for (int j = 0; j <= l; ++j) {
                double g = 0.0;
                for (int k = 0; k <= l; ++k) g += z(i, k) * z(k, j);
                for (int k = 0; k <= l; ++k) z(k, j) -= g * z(k, i);
            }
        }
        d[i] = z(i, i);
        z(i, i) = 1.0;
        for (int j = 0; j <= l; ++j) z(j, i) = z(i, j) = 0.0;
    }
}

// Implicit-shift QL on the tridiagonal (d, e), rotating the columns of z.
void ql_implicit(std::vector<double>& d, std::vector<double>& e, Matrix& z) {
    const int n = static_cast<int>(d.size());
    for (int i = 1; i < n; ++i) e[i - 1] = e[i];
    e[n - 1] = 0.0;
    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int mm;
        do {
            for (mm = l; mm < n - 1; ++mm) {
                const double dd = std::abs(d[mm]) + std::abs(d[mm + 1]);
                if (std::abs(e[mm]) <= 1e-300 + 2.3e-16 * dd) break;
            }
            if (mm != l) {
                if (++iter == 60)
                    throw std::runtime_error("sym_eigen: QL did not converge");
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = hypot2(g, 1.0);
                g = d[mm] - d[l] +
                    e[l] / (g + (g >= 0.0 ? std::abs(r) : -std::abs(r)));
                double s = 1.0, c = 1.0, p = 0.0;
                for (int i = mm - 1; i >= l; --i) {
                    double f = s * e[i];
                    const double b = c * e[i];
                    r = hypot2(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[mm] = 0.0;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                    for (int k = 0; k < n; ++k) {
                        f = z(k, i + 1);
                        z(k, i + 1) = s * z(k, i) + c * f;
                        z(k, i) = c * z(k, i) - s * f;
                    }
                }
                if (r == 0.0 && mm - 1 >= l) continue;
                d[l] -= p;
                e[l] = g;
                e[mm] = 0.0;
            }
        } while (mm != l);
    }
}

}  // namespace

SymEigenResult sym_eigen(const Matrix& a) {
    if (a.rows() != a.cols())
        throw std::invalid_argument("sym_eigen: matrix must be square");
    const int n = a.rows();
    SymEigenResult res;
    res.values.assign(static_cast<size_t>(n), 0.0);
    res.vectors = a;
    if (n == 0) return res;
    if (n == 1) {
        res.values[0] = a(0, 0);
        res.vectors(0, 0) = 1.0;
        return res;
    }
    std::vector<double> e(static_cast<size_t>(n), 0.0);
    tridiagonalize(res.vectors, res.values, e);
    ql_implicit(res.values, e, res.vectors);

    // Sort ascending, carrying columns along.
    std::vector<int> order(static_cast<size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int i, int j) {
        return res.values[static_cast<size_t>(i)] <
               res.values[static_cast<size_t>(j)];
    });
    std::vector<double> dv(static_cast<size_t>(n));
    Matrix zv(n, n);
    for (int j = 0; j < n; ++j) {
        dv[static_cast<size_t>(j)] = res.values[static_cast<size_t>(order[j])];
        for (int i = 0; i < n; ++i) zv(i, j) = res.vectors(i, order[j]);
    }
    res.values = std::move(dv);
    res.vectors = std::move(zv);
    return res;
}

std::vector<std::complex<double>> lu_solve(
    std::vector<std::complex<double>> a,
    std::vector<std::complex<double>> b) {
    const size_t n = b.size();
    if (a.size() != n * n)
        throw std::invalid_argument("lu_solve: size mismatch");
    std::vector<size_t> piv(n);
    std::iota(piv.begin(), piv.end(), size_t{0});
    for (size_t k = 0; k < n; ++k) {
        size_t best = k;
        double bm = std::abs(a[piv[k] * n + k]);
        for (size_t i = k + 1; i < n; ++i) {
            const double v = std::abs(a[piv[i] * n + k]);
            if (v > bm) {
                bm = v;
                best = i;
            }
        }
        if (bm == 0.0)
            throw std::runtime_error("lu_solve: singular matrix");
        std::swap(piv[k], piv[best]);
        const std::complex<double> pivval = a[piv[k] * n + k];
        for (size_t i = k + 1; i < n; ++i) {
            const std::complex<double> f = a[piv[i] * n + k] / pivval;
            a[piv[i] * n + k] = f;
            for (size_t j = k + 1; j < n; ++j)
                a[piv[i] * n + j] -= f * a[piv[k] * n + j];
        }
    }
    // forward substitution
    std::vector<std::complex<double>> y(n);
    for (size_t i = 0; i < n; ++i) {
        std::complex<double> s = b[piv[i]];
        for (size_t j = 0; j < i; ++j) s -= a[piv[i] * n + j] * y[j];
        y[i] = s;
    }
    // back substitution
    std::vector<std::complex<double>> x(n);
    for (size_t ii = n; ii-- > 0;) {
        std::complex<double> s = y[ii];
        for (size_t j = ii + 1; j < n; ++j) s -= a[piv[ii] * n + j] * x[j];
        x[ii] = s / a[piv[ii] * n + ii];
    }
    return x;
}

}  // namespace ellspin
