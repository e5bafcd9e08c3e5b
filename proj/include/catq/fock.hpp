// fock.hpp — Truncated Fock space: ladder/parity operators, coherent and cat states

#pragma once

#include "catq/types.hpp"

namespace catq {

class FockSpace {
public:
    explicit FockSpace(int cutoff);
    int cutoff() const noexcept { return n_; }
    bool operator==(const FockSpace&) const = default;

private:
    int n_;
};

// Dense operator tagged with the cutoff it lives on. Arithmetic between
// operators on different cutoffs throws DimensionMismatch.
class OperatorMatrix {
public:
    OperatorMatrix(Matrix data, int cutoff);

    const Matrix& data() const noexcept { return data_; }
    int cutoff() const noexcept { return cutoff_; }

    OperatorMatrix adjoint() const { return {data_.adjoint(), cutoff_}; }
    // Per-entry check against A† to the given absolute tolerance.
    bool is_hermitian(double tol = 1e-12) const;

    OperatorMatrix operator+(const OperatorMatrix& o) const;
    OperatorMatrix operator-(const OperatorMatrix& o) const;
    OperatorMatrix operator*(const OperatorMatrix& o) const;
    OperatorMatrix operator*(cplx s) const { return {data_ * s, cutoff_}; }
    friend OperatorMatrix operator*(cplx s, const OperatorMatrix& o) { return o * s; }

private:
    void require_same(const OperatorMatrix& o) const;

    Matrix data_;
    int cutoff_;
};

struct PureState {
    Vector amplitudes;

    explicit PureState(Vector amps);
    int cutoff() const { return static_cast<int>(amplitudes.size()); }
    Matrix projector() const { return amplitudes * amplitudes.adjoint(); }
};

OperatorMatrix annihilation(const FockSpace& space);
OperatorMatrix creation(const FockSpace& space);
OperatorMatrix number(const FockSpace& space);
OperatorMatrix parity(const FockSpace& space);
OperatorMatrix identity(const FockSpace& space);

PureState fock_ket(int n, const FockSpace& space);
PureState coherent_state(cplx alpha, const FockSpace& space);

enum class CatSign { Even, Odd };
PureState cat_state(cplx alpha, CatSign sign, const FockSpace& space);

// Smallest cutoff for which |alpha> is represented with negligible tail weight.
int guard_cutoff(cplx alpha);

// Poisson weight of |alpha> beyond the first n levels.
double coherent_tail_weight(cplx alpha, int n);

} // namespace catq
