// liouvillian.hpp — Lindblad superoperators (column-stacking vectorization) and
// their Z2 parity-sector decomposition

#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "catq/fock.hpp"
#include "catq/model.hpp"
#include "catq/types.hpp"

namespace catq {

// Acts on vec(rho) with vec stacking columns: vec(A X B) = (B^T (x) A) vec(X).
// Storage is sparse; the sector blocks are densified only for eigensolves.
struct SuperOperator {
    SparseMatrix matrix;
    std::vector<int> cutoffs;  // one entry per mode; tensor order as listed

    int hilbert_dim() const;
    Eigen::Index dim() const { return matrix.rows(); }

    Vector apply(const Vector& v) const { return matrix * v; }
    Matrix apply(const Matrix& rho) const;
};

Vector vec(const Matrix& rho);
Matrix unvec(const Vector& v, int d);

SuperOperator hamiltonian_superop(const OperatorMatrix& h);
SuperOperator dissipator(const OperatorMatrix& l);
SuperOperator add_hamiltonian(const SuperOperator& s, const OperatorMatrix& h);
SuperOperator operator+(const SuperOperator& a, const SuperOperator& b);
SuperOperator operator*(double s, const SuperOperator& a);

// H = Delta n + G*/2 a^2 + G/2 a+^2 - U/2 a+^2 a^2
OperatorMatrix single_mode_hamiltonian(const EffectiveParams& p, const FockSpace& space);

// -i[H, .] + eta D[a^2] + kappa D[a] + kappaphi D[n]. A cutoff of 0 resolves to the
// guard value; a cutoff below the guard is accepted with a warning.
SuperOperator build_single_mode(const EffectiveParams& p);

enum class Sector : int { PP = 0, PM = 1, MP = 2, MM = 3 };

const char* sector_name(Sector s);
inline int sector_mu(Sector s) { return (static_cast<int>(s) & 2) ? -1 : 1; }
inline int sector_nu(Sector s) { return (static_cast<int>(s) & 1) ? -1 : 1; }
Sector sector_of(int m, int n);

struct BlockDecomposition {
    int cutoff = 0;
    // permutation[k] is the full vec index of permuted position k; sectors are
    // contiguous in the order ++, +-, -+, --.
    std::vector<int> permutation;
    std::array<SparseMatrix, 4> blocks;
    double off_block_norm = 0.0;  // Frobenius norm of all inter-sector couplings
    double pp_mm_coupling = 0.0;  // couplings between ++ and --
    double pm_mp_coupling = 0.0;  // couplings between +- and -+

    const SparseMatrix& block(Sector s) const { return blocks[static_cast<int>(s)]; }
};

// Within a sector, position i + j*N/2 holds |m><n| with m = 2i + (mu == -1),
// n = 2j + (nu == -1). Requires an even cutoff.
BlockDecomposition parity_blocks(const SuperOperator& s, bool require_exact = true);

// Sector vector <-> full N x N operator.
Matrix sector_to_operator(const Vector& v, Sector s, int cutoff);
Vector operator_to_sector(const Matrix& rho, Sector s);

enum class GateKind { XDrive, XXHop };

struct GateHamiltonian {
    GateKind kind = GateKind::XXHop;
    double amplitude = 0.0;  // F or J
    int mode_a = 0;
    int mode_b = 1;
};

// Largest vectorized dimension the two-mode builder accepts.
std::int64_t memory_ceiling();
void set_memory_ceiling(std::int64_t max_vectorized_dim);

OperatorMatrix x_drive_hamiltonian(double f, const FockSpace& space);

// Tensor order (mode 1) (x) (mode 2).
SuperOperator build_two_mode(const EffectiveParams& p1, const EffectiveParams& p2, const GateHamiltonian& hop);

// Generic builder for two modes from a joint Hamiltonian and weighted jumps.
struct Jump {
    double rate;
    Matrix op;
};
SuperOperator lindbladian(const Matrix& h, const std::vector<Jump>& jumps, std::vector<int> cutoffs);

// Invariant checks.
double trace_preservation_residual(const SuperOperator& s);
double hermiticity_preservation_residual(const SuperOperator& s, int trials, std::uint64_t seed);
double parity_commutator_norm(const SuperOperator& s);

// Debug dump: 16-byte header (magic u32, d u64, flags u32) then row-major
// complex128 little-endian entries.
inline constexpr std::uint32_t kDumpMagic = 0x51544143;  // "CATQ"
void dump_superoperator(const SuperOperator& s, const std::string& path, std::uint32_t flags = 0);
Matrix load_superoperator_dump(const std::string& path, std::uint32_t* flags = nullptr);

} // namespace catq
