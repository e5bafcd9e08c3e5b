#include "catq/fock.hpp"

#include <cmath>
#include <string>

namespace catq {

namespace {

constexpr double kTailLimit = 1e-10;

} // namespace

FockSpace::FockSpace(int cutoff) : n_(cutoff)
{
    if (cutoff < 2) throw Error(ErrorKind::InvalidArgument, "Fock cutoff must be >= 2");
}

OperatorMatrix::OperatorMatrix(Matrix data, int cutoff) : data_(std::move(data)), cutoff_(cutoff)
{
    if (data_.rows() != cutoff || data_.cols() != cutoff)
        throw Error(ErrorKind::DimensionMismatch, "operator shape does not match cutoff " + std::to_string(cutoff));
}

bool OperatorMatrix::is_hermitian(double tol) const
{
    return ((data_ - data_.adjoint()).cwiseAbs().maxCoeff()) <= tol;
}

void OperatorMatrix::require_same(const OperatorMatrix& o) const
{
    if (o.cutoff_ != cutoff_)
        throw Error(ErrorKind::DimensionMismatch,
                    "mixed-cutoff arithmetic: " + std::to_string(cutoff_) + " vs " + std::to_string(o.cutoff_));
}

OperatorMatrix OperatorMatrix::operator+(const OperatorMatrix& o) const
{
    require_same(o);
    return {data_ + o.data_, cutoff_};
}

OperatorMatrix OperatorMatrix::operator-(const OperatorMatrix& o) const
{
    require_same(o);
    return {data_ - o.data_, cutoff_};
}

OperatorMatrix OperatorMatrix::operator*(const OperatorMatrix& o) const
{
    require_same(o);
    return {data_ * o.data_, cutoff_};
}

PureState::PureState(Vector amps) : amplitudes(std::move(amps))
{
    if (std::abs(amplitudes.norm() - 1.0) > 1e-12)
        throw Error(ErrorKind::InvalidArgument, "pure state must have unit norm");
}

OperatorMatrix annihilation(const FockSpace& space)
{
    const int n = space.cutoff();
    Matrix a = Matrix::Zero(n, n);
    for (int k = 1; k < n; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
    return {a, n};
}

OperatorMatrix creation(const FockSpace& space) { return annihilation(space).adjoint(); }

OperatorMatrix number(const FockSpace& space)
{
    const int n = space.cutoff();
    Matrix m = Matrix::Zero(n, n);
    for (int k = 0; k < n; ++k) m(k, k) = static_cast<double>(k);
    return {m, n};
}

OperatorMatrix parity(const FockSpace& space)
{
    const int n = space.cutoff();
    Matrix p = Matrix::Zero(n, n);
    for (int k = 0; k < n; ++k) p(k, k) = (k % 2 == 0) ? 1.0 : -1.0;
    return {p, n};
}

OperatorMatrix identity(const FockSpace& space)
{
    return {Matrix::Identity(space.cutoff(), space.cutoff()), space.cutoff()};
}

PureState fock_ket(int n, const FockSpace& space)
{
    if (n < 0 || n >= space.cutoff()) throw Error(ErrorKind::InvalidArgument, "Fock level outside cutoff");
    Vector v = Vector::Zero(space.cutoff());
    v(n) = 1.0;
    return PureState(v);
}

double coherent_tail_weight(cplx alpha, int n)
{
    // 1 - sum_{k<n} Poisson(k; |alpha|^2), summed in log space for stability.
    const double x = std::norm(alpha);
    if (x == 0.0) return 0.0;
    double head = 0.0;
    for (int k = 0; k < n; ++k) head += std::exp(-x + k * std::log(x) - std::lgamma(k + 1.0));
    // Past the mode the direct tail sum is more accurate than 1 - head.
    if (n > x) {
        double tail = 0.0;
        for (int k = n; k < n + 400; ++k) {
            const double t = std::exp(-x + k * std::log(x) - std::lgamma(k + 1.0));
            tail += t;
            if (t < 1e-300) break;
        }
        return tail;
    }
    return std::max(0.0, 1.0 - head);
}

int guard_cutoff(cplx alpha)
{
    const double x = std::norm(alpha);
    return static_cast<int>(std::ceil(4.0 * x + 5.0 * std::sqrt(x) + 10.0));
}

PureState coherent_state(cplx alpha, const FockSpace& space)
{
    const int n = space.cutoff();
    const double tail = coherent_tail_weight(alpha, n);
    if (tail > kTailLimit)
        throw Error(ErrorKind::Truncation, "coherent state tail weight " + std::to_string(tail) +
                                               " exceeds 1e-10 at cutoff " + std::to_string(n));
    Vector v(n);
    v(0) = std::exp(-std::norm(alpha) / 2.0);
    for (int k = 1; k < n; ++k) v(k) = v(k - 1) * alpha / std::sqrt(static_cast<double>(k));
    v /= v.norm();
    return PureState(v);
}

PureState cat_state(cplx alpha, CatSign sign, const FockSpace& space)
{
    if (alpha == cplx(0.0) && sign == CatSign::Odd)
        throw Error(ErrorKind::DegenerateCat, "odd cat state is undefined at alpha = 0");
    const Vector plus = coherent_state(alpha, space).amplitudes;
    // |-alpha> differs from |alpha> only by the sign of odd amplitudes, so the
    // superposition is an exact parity projection.
    Vector v = Vector::Zero(space.cutoff());
    const int keep = (sign == CatSign::Even) ? 0 : 1;
    for (int k = keep; k < space.cutoff(); k += 2) v(k) = plus(k);
    v /= v.norm();
    return PureState(v);
}

} // namespace catq
