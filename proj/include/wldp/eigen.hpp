#pragma once
#include <vector>

#include "wldp/errors.hpp"

namespace wldp::mc {

// Dense symmetric matrix, row-major, both triangles stored.
class SymMat {
public:
    SymMat() = default;
    explicit SymMat(int n) : n_(n), a_(static_cast<std::size_t>(n) * n, 0.0) {}

    int n() const { return n_; }
    double& at(int i, int j) { return a_[static_cast<std::size_t>(i) * n_ + j]; }
    double at(int i, int j) const { return a_[static_cast<std::size_t>(i) * n_ + j]; }
    const std::vector<double>& data() const { return a_; }

    double trace() const;
    double frobenius_sq() const;
    double norm_1() const; // max column absolute sum
    std::vector<double> multiply(const std::vector<double>& v) const;

private:
    int n_ = 0;
    std::vector<double> a_;
};

struct EigResult {
    std::vector<double> values;          // ascending
    std::vector<std::vector<double>> vectors; // vectors[k] pairs with values[k]
};

// Householder tridiagonalization followed by implicit-shift QL; 30 sweeps
// per eigenvalue before giving up. Eigenvectors orthonormal when requested.
EigResult eig_full(const SymMat& m, bool want_vectors);

struct TopEig {
    double value = 0.0;
    std::vector<double> vector;
    double residual = 0.0;
};

// Lanczos with full reorthogonalization targeting the largest eigenvalue;
// restarts from the best Ritz vector until the residual passes
// 1e-8 * ||m||_1.
TopEig eig_top(const SymMat& m, unsigned seed = 12345);

} // namespace wldp::mc
