#include "wldp/eigen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "wldp/rng.hpp"

namespace wldp::mc {

double SymMat::trace() const {
    double t = 0.0;
    for (int i = 0; i < n_; ++i) t += at(i, i);
    return t;
}

double SymMat::frobenius_sq() const {
    double s = 0.0;
    for (double v : a_) s += v * v;
    return s;
}

double SymMat::norm_1() const {
    double best = 0.0;
    for (int j = 0; j < n_; ++j) {
        double col = 0.0;
        for (int i = 0; i < n_; ++i) col += std::abs(at(i, j));
        best = std::max(best, col);
    }
    return best;
}

std::vector<double> SymMat::multiply(const std::vector<double>& v) const {
    std::vector<double> out(n_, 0.0);
    for (int i = 0; i < n_; ++i) {
        const double* row = a_.data() + static_cast<std::size_t>(i) * n_;
        double s = 0.0;
        for (int j = 0; j < n_; ++j) s += row[j] * v[j];
        out[i] = s;
    }
    return out;
}

namespace {

double hypot2(double a, double b) {
    return std::sqrt(a * a + b * b);
}

// Householder reduction to tridiagonal form; q accumulates the transform
// when eigenvectors are wanted.
void tridiagonalize(std::vector<std::vector<double>>& q, std::vector<double>& d,
                    std::vector<double>& e, bool want_vectors) {
    const int n = static_cast<int>(d.size());
    for (int i = n - 1; i > 0; --i) {
        const int l = i - 1;
        double h = 0.0;
        double scale = 0.0;
        if (l > 0) {
            for (int k = 0; k <= l; ++k) scale += std::abs(q[i][k]);
            if (scale == 0.0) {
                e[i] = q[i][l];
            } else {
                for (int k = 0; k <= l; ++k) {
                    q[i][k] /= scale;
                    h += q[i][k] * q[i][k];
                }
                double f = q[i][l];
                double g = f >= 0.0 ? -std::sqrt(h) : std::sqrt(h);
                e[i] = scale * g;
                h -= f * g;
                q[i][l] = f - g;
                f = 0.0;
                for (int j = 0; j <= l; ++j) {
                    if (want_vectors) q[j][i] = q[i][j] / h;
                    g = 0.0;
                    for (int k = 0; k <= j; ++k) g += q[j][k] * q[i][k];
                    for (int k = j + 1; k <= l; ++k) g += q[k][j] * q[i][k];
                    e[j] = g / h;
                    f += e[j] * q[i][j];
                }
                const double hh = f / (h + h);
                for (int j = 0; j <= l; ++j) {
                    f = q[i][j];
                    e[j] = g = e[j] - hh * f;
                    for (int k = 0; k <= j; ++k) {
                        q[j][k] -= f * e[k] + g * q[i][k];
                    }
                }
            }
        } else {
            e[i] = q[i][l];
        }
        d[i] = h;
    }
    if (want_vectors) d[0] = 0.0;
    e[0] = 0.0;
    for (int i = 0; i < n; ++i) {
        if (want_vectors) {
            const int l = i - 1;
            if (d[i] != 0.0) {
                for (int j = 0; j <= l; ++j) {
                    double g = 0.0;
                    for (int k = 0; k <= l; ++k) g += q[i][k] * q[k][j];
                    for (int k = 0; k <= l; ++k) q[k][j] -= g * q[k][i];
                }
            }
            d[i] = q[i][i];
            q[i][i] = 1.0;
            for (int j = 0; j <= l; ++j) q[j][i] = q[i][j] = 0.0;
        } else {
            d[i] = q[i][i];
        }
    }
}

// Implicit-shift QL on the tridiagonal (d, e); 30 sweeps per eigenvalue.
void ql_implicit(std::vector<double>& d, std::vector<double>& e,
                 std::vector<std::vector<double>>* q) {
    const int n = static_cast<int>(d.size());
    constexpr double eps = 2.220446049250313e-16;
    for (int i = 1; i < n; ++i) e[i - 1] = e[i];
    e[n - 1] = 0.0;

    double f = 0.0;
    double tst1 = 0.0;
    for (int l = 0; l < n; ++l) {
        tst1 = std::max(tst1, std::abs(d[l]) + std::abs(e[l]));
        int m = l;
        while (m < n - 1 && std::abs(e[m]) > eps * tst1) ++m;
        if (m > l) {
            int iter = 0;
            do {
                if (++iter > 30) throw NoConvergence("eig_full: QL sweep cap reached");

                double g = d[l];
                double p = (d[l + 1] - g) / (2.0 * e[l]);
                double r = hypot2(p, 1.0);
                if (p < 0.0) r = -r;
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                const double dl1 = d[l + 1];
                double h = g - d[l];
                for (int i = l + 2; i < n; ++i) d[i] -= h;
                f += h;

                p = d[m];
                double c = 1.0;
                double c2 = c;
                double c3 = c;
                const double el1 = e[l + 1];
                double s = 0.0;
                double s2 = 0.0;
                for (int i = m - 1; i >= l; --i) {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = hypot2(p, e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    if (q) {
                        for (auto& row : *q) {
                            h = row[i + 1];
                            row[i + 1] = s * row[i] + c * h;
                            row[i] = c * row[i] - s * h;
                        }
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
            } while (std::abs(e[l]) > eps * tst1);
        }
        d[l] += f;
        e[l] = 0.0;
    }
}

} // namespace

EigResult eig_full(const SymMat& m, bool want_vectors) {
    const int n = m.n();
    std::vector<std::vector<double>> q(n, std::vector<double>(n));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) q[i][j] = m.at(i, j);
    }
    std::vector<double> d(n, 0.0);
    std::vector<double> e(n, 0.0);
    if (n == 1) {
        EigResult r;
        r.values = {m.at(0, 0)};
        if (want_vectors) r.vectors = {{1.0}};
        return r;
    }
    tridiagonalize(q, d, e, want_vectors);
    ql_implicit(d, e, want_vectors ? &q : nullptr);

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return d[a] < d[b]; });

    EigResult r;
    r.values.resize(n);
    for (int k = 0; k < n; ++k) r.values[k] = d[order[k]];
    if (want_vectors) {
        r.vectors.assign(n, std::vector<double>(n));
        for (int k = 0; k < n; ++k) {
            for (int i = 0; i < n; ++i) r.vectors[k][i] = q[i][order[k]];
        }
    }
    return r;
}

TopEig eig_top(const SymMat& m, unsigned seed) {
    const int n = m.n();
    const double scale = std::max(m.norm_1(), 1e-300);
    const double target = 1e-8 * scale;

    num::RngStream rng(seed, 0x7a6cu);
    std::vector<double> start(n);
    for (auto& v : start) v = rng.normal();

    auto normalize = [](std::vector<double>& v) {
        double s = 0.0;
        for (double x : v) s += x * x;
        s = std::sqrt(s);
        for (double& x : v) x /= s;
        return s;
    };
    normalize(start);

    const int krylov = std::min(n, 80);
    TopEig best;
    double last_residual = std::numeric_limits<double>::infinity();

    for (int restart = 0; restart < 12; ++restart) {
        std::vector<std::vector<double>> basis;
        basis.reserve(krylov);
        std::vector<double> alpha;
        std::vector<double> beta;
        std::vector<double> v = start;

        for (int j = 0; j < krylov; ++j) {
            basis.push_back(v);
            std::vector<double> w = m.multiply(v);
            double a = 0.0;
            for (int i = 0; i < n; ++i) a += w[i] * v[i];
            alpha.push_back(a);
            for (int i = 0; i < n; ++i) w[i] -= a * v[i];
            if (j > 0) {
                for (int i = 0; i < n; ++i) w[i] -= beta[j - 1] * basis[j - 1][i];
            }
            // Full reorthogonalization, twice for safety.
            for (int pass = 0; pass < 2; ++pass) {
                for (const auto& u : basis) {
                    double dot = 0.0;
                    for (int i = 0; i < n; ++i) dot += w[i] * u[i];
                    for (int i = 0; i < n; ++i) w[i] -= dot * u[i];
                }
            }
            double b = 0.0;
            for (double x : w) b += x * x;
            b = std::sqrt(b);
            if (b < 1e-14 * scale || j == krylov - 1) break;
            beta.push_back(b);
            for (int i = 0; i < n; ++i) v[i] = w[i] / b;
        }

        const int k = static_cast<int>(alpha.size());
        std::vector<std::vector<double>> tq(k, std::vector<double>(k, 0.0));
        for (int i = 0; i < k; ++i) tq[i][i] = 1.0;
        std::vector<double> td = alpha;
        std::vector<double> te(k, 0.0);
        for (int i = 1; i < k; ++i) te[i] = beta[i - 1];
        {
            // QL on the small tridiagonal Ritz problem.
            std::vector<double> d2 = td;
            std::vector<double> e2 = te;
            ql_implicit(d2, e2, &tq);
            td = d2;
        }
        int top = 0;
        for (int i = 1; i < k; ++i) {
            if (td[i] > td[top]) top = i;
        }

        std::vector<double> ritz(n, 0.0);
        for (int j = 0; j < k; ++j) {
            for (int i = 0; i < n; ++i) ritz[i] += tq[j][top] * basis[j][i];
        }
        normalize(ritz);
        std::vector<double> mr = m.multiply(ritz);
        double lambda = 0.0;
        for (int i = 0; i < n; ++i) lambda += mr[i] * ritz[i];
        double resid = 0.0;
        for (int i = 0; i < n; ++i) {
            const double r = mr[i] - lambda * ritz[i];
            resid += r * r;
        }
        resid = std::sqrt(resid);

        if (resid < best.residual || restart == 0) {
            best.value = lambda;
            best.vector = ritz;
            best.residual = resid;
        }
        if (best.residual <= target) return best;
        if (resid > 0.5 * last_residual && restart > 2) break; // stagnating
        last_residual = resid;
        start = ritz;
    }
    if (best.residual > target) throw NoConvergence("eig_top: Lanczos residual stagnated");
    return best;
}

} // namespace wldp::mc
