// spectral.hpp — Sector eigendecompositions, steady states/coherences, gaps,
// conserved quantities and noiseless-subsystem diagnostics

#pragma once

#include <array>
#include <optional>
#include <vector>

#include "catq/liouvillian.hpp"
#include "catq/model.hpp"
#include "catq/types.hpp"

namespace catq {

struct SolveOptions {
    bool vectors = true;
    // Number of slowest eigenpairs to keep as operators (-1: all). A kept set
    // is extended to cover a whole near-degenerate cluster.
    int keep = -1;
};

struct SpectralResult {
    Sector sector = Sector::PP;
    int cutoff = 0;
    double scale = 0.0;              // infinity norm of the block
    std::vector<cplx> eigenvalues;   // slowest first; ties by |Im| then Im
    std::vector<Matrix> right_ops;   // unit Frobenius norm
    std::vector<Matrix> left_ops;    // Tr(J_m^dag rho_n) = delta_mn

    bool has_vectors() const { return !right_ops.empty(); }
};

// Raw eigen-decomposition of a general complex matrix (values sorted as above).
struct EigenDecomposition {
    std::vector<cplx> values;
    Matrix right;  // columns, unit norm
    Matrix left;   // columns, left^H right = I within each kept cluster
};

EigenDecomposition eigen_decompose(const Matrix& a, bool vectors, int keep = -1);

SpectralResult eigensolve_block(const Matrix& block, Sector sector, int cutoff, const SolveOptions& opt = {});
SpectralResult eigensolve_block(const BlockDecomposition& blocks, Sector sector, const SolveOptions& opt = {});

// Eigenvalues of a full (small) superoperator, sorted like the blocks.
std::vector<cplx> full_spectrum(const SuperOperator& s);

using SectorResults = std::array<std::optional<SpectralResult>, 4>;

// Solves the requested sectors of a single-mode Liouvillian.
SectorResults solve_sectors(const SuperOperator& s, const std::vector<Sector>& sectors, const SolveOptions& opt = {});

struct Manifold {
    int cutoff = 0;
    std::array<Matrix, 4> rho;     // rho_0^{mu nu}
    std::array<Matrix, 4> j;       // J_0^{mu nu}
    std::array<cplx, 4> lambda0{}; // slowest eigenvalue per sector

    const Matrix& rho0(Sector s) const { return rho[static_cast<int>(s)]; }
    const Matrix& j0(Sector s) const { return j[static_cast<int>(s)]; }
};

// Needs ++, -- and +- results with vectors; -+ is derived by adjoint symmetry.
Manifold steady_and_coherences(const SectorResults& results);

struct Gaps {
    double pp = 0.0;
    double mm = 0.0;
    double pm = 0.0;  // equals the -+ gap
};

Gaps gaps(const SectorResults& results);

// The four J_0^{mu nu}; identical to Manifold::j.
std::array<Matrix, 4> conserved_quantities(const SectorResults& results);

struct NSDiagnostic {
    std::array<Matrix, 4> z;  // transformed corner blocks, order ++, +-, -+, --
    double d_pp_mm = 0.0;
    double d_pp_pm = 0.0;
};

NSDiagnostic ns_diagnostic(const Manifold& m);

double trace_distance_fro(const Matrix& a, const Matrix& b);

enum class PhotonState { EvenSteady, OddSteady, Mixture };
double photon_number(const Manifold& m, PhotonState which = PhotonState::EvenSteady);

// Convenience: build + decompose + solve + steady manifold for one point.
struct PointAnalysis {
    EffectiveParams params;
    SectorResults results;
    Manifold manifold;
    Gaps gaps;
};

PointAnalysis analyze_point(const EffectiveParams& p, int keep = 2);

} // namespace catq
