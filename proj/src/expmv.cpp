#include "catq/expmv.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

namespace catq {

namespace {

// Round a step to two significant digits (keeps step sequences tidy).
double round_step(double x)
{
    const double s = std::pow(10.0, std::floor(std::log10(x)) - 1.0);
    return std::ceil(x / s) * s;
}

} // namespace

Vector expmv(const SparseMatrix& a, double t, const Vector& v, const ExpmvOptions& opt, ExpmvStats* stats)
{
    if (t < 0) throw Error(ErrorKind::InvalidArgument, "expmv needs t >= 0");
    if (a.rows() != a.cols() || a.cols() != v.size()) throw Error(ErrorKind::DimensionMismatch, "expmv operand shapes differ");
    const Eigen::Index n = v.size();
    ExpmvStats st;
    if (t == 0.0 || v.norm() == 0.0) {
        if (stats) *stats = st;
        return v;
    }

    const int m = static_cast<int>(std::min<Eigen::Index>(opt.krylov_dim, n));
    const double tol = opt.tol;
    const double gamma = 0.9, delta = 1.2;

    double anorm = 0.0;
    {
        Eigen::VectorXd rows = Eigen::VectorXd::Zero(n);
        for (Eigen::Index k = 0; k < a.outerSize(); ++k)
            for (SparseMatrix::InnerIterator it(a, k); it; ++it) rows(it.row()) += std::abs(it.value());
        anorm = rows.maxCoeff();
    }
    if (anorm == 0.0) {
        if (stats) *stats = st;
        return v;
    }
    // Only a genuine (round-off level) breakdown ends the Arnoldi process early;
    // a looser absolute threshold leaks an error of order btol * t.
    const double btol = 64.0 * std::numeric_limits<double>::epsilon() * anorm;

    Vector w = v;
    double beta = w.norm();
    double t_now = 0.0;
    const double fact = std::pow((m + 1) / std::exp(1.0), m + 1) * std::sqrt(2.0 * M_PI * (m + 1));
    double t_new = (1.0 / anorm) * std::pow((fact * tol) / (4.0 * beta * anorm), 1.0 / m);
    t_new = round_step(t_new);
    const double rndoff = anorm * std::numeric_limits<double>::epsilon();

    Matrix vb(n, m + 1);
    Matrix h(m + 2, m + 2);
    while (t_now < t) {
        double t_step = std::min(t - t_now, t_new);
        vb.setZero();
        h.setZero();
        vb.col(0) = w / beta;
        int mb = m;
        int k1 = 2;
        for (int j = 0; j < m; ++j) {
            Vector p = a * vb.col(j);
            ++st.matvecs;
            // Classical Gram-Schmidt with one reorthogonalisation pass.
            for (int pass = 0; pass < 2; ++pass) {
                const Vector c = vb.leftCols(j + 1).adjoint() * p;
                h.col(j).head(j + 1) += c;
                p.noalias() -= vb.leftCols(j + 1) * c;
            }
            const double s = p.norm();
            if (s < btol) {
                k1 = 0;
                mb = j + 1;
                t_step = t - t_now;
                break;
            }
            h(j + 1, j) = s;
            vb.col(j + 1) = p / s;
        }
        double avnorm = 0.0;
        if (k1 != 0) {
            h(m + 1, m) = 1.0;
            avnorm = (a * vb.col(m)).norm();
            ++st.matvecs;
        }

        Matrix f;
        double err_loc = 0.0;
        double xm = 1.0 / m;
        int reject = 0;
        while (true) {
            const int mx = mb + k1;
            f = (t_step * h.topLeftCorner(mx, mx)).exp();
            if (k1 == 0) {
                err_loc = 0.0;
                break;
            }
            const double phi1 = std::abs(beta * f(m, 0));
            const double phi2 = std::abs(beta * f(m + 1, 0) * avnorm);
            if (phi1 > 10.0 * phi2) {
                err_loc = phi2;
                xm = 1.0 / m;
            } else if (phi1 > phi2) {
                err_loc = (phi1 * phi2) / (phi1 - phi2);
                xm = 1.0 / m;
            } else {
                err_loc = phi1;
                xm = 1.0 / (m - 1);
            }
            if (err_loc <= delta * t_step * tol) break;
            if (reject == opt.max_rejections) {
                std::ostringstream os;
                os << "Krylov step rejected " << reject << " times (local error " << err_loc << ")";
                throw Error(ErrorKind::ToleranceNotMet, os.str());
            }
            t_step = round_step(gamma * t_step * std::pow(t_step * tol / err_loc, xm));
            ++reject;
        }
        const int mx = mb + std::max(0, k1 - 1);
        w = vb.leftCols(mx) * (beta * f.col(0).head(mx));
        beta = w.norm();
        t_now += t_step;
        ++st.steps;
        if (k1 != 0) t_new = round_step(gamma * t_step * std::pow(t_step * tol / std::max(err_loc, 1e-300), xm));
        else t_new = t - t_now;
        st.error_estimate += std::max(err_loc, rndoff);
        if (beta == 0.0) break;
    }
    if (stats) *stats = st;
    return w;
}

} // namespace catq
