// expmv.hpp — Action of the exponential of a sparse generator on a vector
// (adaptive Krylov/Arnoldi stepping with local error control)

#pragma once

#include "catq/types.hpp"

namespace catq {

struct ExpmvOptions {
    double tol = 1e-10;   // local error per unit time
    int krylov_dim = 30;
    int max_rejections = 10;
};

struct ExpmvStats {
    int steps = 0;
    int matvecs = 0;
    double error_estimate = 0.0;
};

// exp(t A) v for t >= 0.
Vector expmv(const SparseMatrix& a, double t, const Vector& v, const ExpmvOptions& opt = {}, ExpmvStats* stats = nullptr);

} // namespace catq
