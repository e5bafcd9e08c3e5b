#include "catq/liouvillian.hpp"

#include <atomic>
#include <bit>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include <unsupported/Eigen/KroneckerProduct>

namespace catq {

namespace {

std::atomic<std::int64_t> g_memory_ceiling{1 << 16};

SparseMatrix sparse(const Matrix& m)
{
    SparseMatrix s = m.sparseView(cplx(0.0), 0.0);
    s.makeCompressed();
    return s;
}

SparseMatrix sparse_identity(int d)
{
    SparseMatrix s(d, d);
    s.setIdentity();
    return s;
}

SparseMatrix kron(const SparseMatrix& a, const SparseMatrix& b)
{
    SparseMatrix out = Eigen::kroneckerProduct(a, b).eval();
    out.makeCompressed();
    return out;
}

SparseMatrix commutator_matrix(const Matrix& h)
{
    const int d = static_cast<int>(h.rows());
    const SparseMatrix id = sparse_identity(d);
    const SparseMatrix hs = sparse(h);
    const SparseMatrix ht = sparse(h.transpose());
    SparseMatrix out = (kron(id, hs) - kron(ht, id)) * cplx(0.0, -1.0);
    out.prune(cplx(0.0), 0.0);
    return out;
}

SparseMatrix dissipator_matrix(const Matrix& l)
{
    const int d = static_cast<int>(l.rows());
    const SparseMatrix id = sparse_identity(d);
    const Matrix ldl = l.adjoint() * l;
    SparseMatrix out = kron(sparse(l.conjugate()), sparse(l)) - 0.5 * kron(id, sparse(ldl)) -
                       0.5 * kron(sparse(ldl.transpose()), id);
    out.prune(cplx(0.0), 0.0);
    return out;
}

int product(const std::vector<int>& c)
{
    int d = 1;
    for (int x : c) d *= x;
    return d;
}

} // namespace

int SuperOperator::hilbert_dim() const { return product(cutoffs); }

Matrix SuperOperator::apply(const Matrix& rho) const
{
    return unvec(matrix * vec(rho), hilbert_dim());
}

Vector vec(const Matrix& rho) { return Eigen::Map<const Vector>(rho.data(), rho.size()); }

Matrix unvec(const Vector& v, int d)
{
    if (v.size() != static_cast<Eigen::Index>(d) * d)
        throw Error(ErrorKind::DimensionMismatch, "vector length is not d^2");
    return Eigen::Map<const Matrix>(v.data(), d, d);
}

SuperOperator hamiltonian_superop(const OperatorMatrix& h)
{
    return {commutator_matrix(h.data()), {h.cutoff()}};
}

SuperOperator dissipator(const OperatorMatrix& l)
{
    return {dissipator_matrix(l.data()), {l.cutoff()}};
}

SuperOperator add_hamiltonian(const SuperOperator& s, const OperatorMatrix& h)
{
    if (h.cutoff() != s.hilbert_dim())
        throw Error(ErrorKind::DimensionMismatch, "Hamiltonian dimension does not match superoperator");
    SparseMatrix m = s.matrix + commutator_matrix(h.data());
    m.prune(cplx(0.0), 0.0);
    return {m, s.cutoffs};
}

SuperOperator operator+(const SuperOperator& a, const SuperOperator& b)
{
    if (a.cutoffs != b.cutoffs) throw Error(ErrorKind::DimensionMismatch, "superoperators act on different spaces");
    return {a.matrix + b.matrix, a.cutoffs};
}

SuperOperator operator*(double s, const SuperOperator& a) { return {a.matrix * cplx(s), a.cutoffs}; }

OperatorMatrix single_mode_hamiltonian(const EffectiveParams& p, const FockSpace& space)
{
    const Matrix a = annihilation(space).data();
    const Matrix ad = a.adjoint();
    const Matrix a2 = a * a;
    const Matrix ad2 = ad * ad;
    Matrix h = p.delta * (ad * a) + std::conj(p.g2drive) / 2.0 * a2 + p.g2drive / 2.0 * ad2 - p.kerr / 2.0 * (ad2 * a2);
    return {h, space.cutoff()};
}

SuperOperator build_single_mode(const EffectiveParams& p)
{
    p.validate();
    EffectiveParams q = p;
    if (q.cutoff == 0) q = resolve_cutoff(q, 2, false);
    const FockSpace space(q.cutoff);
    if ((q.eta2ph > 0 || q.kerr > 0)) {
        EffectiveParams r = q;
        r.delta = 0.0;
        const int guard = guard_cutoff(alpha_steady(r));
        if (q.cutoff < guard) {
            std::ostringstream os;
            os << "cutoff " << q.cutoff << " is below the guard value " << guard << " for |alpha|^2 = " << std::norm(alpha_steady(r));
            warn("truncation", os.str());
        }
    }
    const Matrix a = annihilation(space).data();
    const Matrix n = number(space).data();
    SparseMatrix m = commutator_matrix(single_mode_hamiltonian(q, space).data());
    if (q.eta2ph > 0) m += q.eta2ph * dissipator_matrix(a * a);
    if (q.kappa1 > 0) m += q.kappa1 * dissipator_matrix(a);
    if (q.kappaphi > 0) m += q.kappaphi * dissipator_matrix(n);
    m.prune(cplx(0.0), 0.0);
    m.makeCompressed();
    return {m, {q.cutoff}};
}

const char* sector_name(Sector s)
{
    switch (s) {
    case Sector::PP: return "++";
    case Sector::PM: return "+-";
    case Sector::MP: return "-+";
    case Sector::MM: return "--";
    }
    return "?";
}

Sector sector_of(int m, int n) { return static_cast<Sector>(((m & 1) << 1) | (n & 1)); }

namespace {

// Position of |m><n| inside its sector block.
int local_index(int m, int n, int half) { return (m >> 1) + (n >> 1) * half; }

} // namespace

BlockDecomposition parity_blocks(const SuperOperator& s, bool require_exact)
{
    if (s.cutoffs.size() != 1) throw Error(ErrorKind::InvalidArgument, "parity blocks need a single-mode superoperator");
    const int n = s.cutoffs[0];
    if (n % 2 != 0) throw Error(ErrorKind::CutoffParity, "parity-block work requires an even cutoff, got " + std::to_string(n));
    const int half = n / 2;
    const int bdim = half * half;

    BlockDecomposition out;
    out.cutoff = n;
    out.permutation.resize(static_cast<std::size_t>(n) * n);
    for (int col = 0; col < n; ++col)
        for (int row = 0; row < n; ++row) {
            const int sec = static_cast<int>(sector_of(row, col));
            out.permutation[static_cast<std::size_t>(sec) * bdim + local_index(row, col, half)] = row + col * n;
        }

    std::array<std::vector<Eigen::Triplet<cplx>>, 4> trip;
    double off = 0.0, ppmm = 0.0, pmmp = 0.0;
    for (int k = 0; k < s.matrix.outerSize(); ++k) {
        for (SparseMatrix::InnerIterator it(s.matrix, k); it; ++it) {
            const int r = static_cast<int>(it.row()), c = static_cast<int>(it.col());
            const int rm = r % n, rn = r / n, cm = c % n, cn = c / n;
            const Sector sr = sector_of(rm, rn), sc = sector_of(cm, cn);
            if (sr == sc) {
                trip[static_cast<int>(sr)].emplace_back(local_index(rm, rn, half), local_index(cm, cn, half), it.value());
            } else {
                const double w = std::norm(it.value());
                off += w;
                const bool diag_pair = (sr == Sector::PP || sr == Sector::MM) && (sc == Sector::PP || sc == Sector::MM);
                const bool off_pair = (sr == Sector::PM || sr == Sector::MP) && (sc == Sector::PM || sc == Sector::MP);
                if (diag_pair) ppmm += w;
                if (off_pair) pmmp += w;
            }
        }
    }
    out.off_block_norm = std::sqrt(off);
    out.pp_mm_coupling = std::sqrt(ppmm);
    out.pm_mp_coupling = std::sqrt(pmmp);
    if (require_exact && out.off_block_norm > 1e-14 * std::max(1.0, s.matrix.norm()))
        throw Error(ErrorKind::SymmetryBroken, "Liouvillian does not have the four-block parity structure (inter-sector norm " +
                                                   std::to_string(out.off_block_norm) + ")");
    for (int b = 0; b < 4; ++b) {
        out.blocks[b].resize(bdim, bdim);
        out.blocks[b].setFromTriplets(trip[b].begin(), trip[b].end());
        out.blocks[b].makeCompressed();
    }
    return out;
}

Matrix sector_to_operator(const Vector& v, Sector s, int cutoff)
{
    const int half = cutoff / 2;
    if (cutoff % 2 != 0 || v.size() != static_cast<Eigen::Index>(half) * half)
        throw Error(ErrorKind::DimensionMismatch, "sector vector does not match cutoff");
    const int mo = sector_mu(s) < 0 ? 1 : 0, no = sector_nu(s) < 0 ? 1 : 0;
    Matrix rho = Matrix::Zero(cutoff, cutoff);
    for (int j = 0; j < half; ++j)
        for (int i = 0; i < half; ++i) rho(2 * i + mo, 2 * j + no) = v(i + j * half);
    return rho;
}

Vector operator_to_sector(const Matrix& rho, Sector s)
{
    const int cutoff = static_cast<int>(rho.rows());
    if (cutoff % 2 != 0) throw Error(ErrorKind::CutoffParity, "even cutoff required");
    const int half = cutoff / 2;
    const int mo = sector_mu(s) < 0 ? 1 : 0, no = sector_nu(s) < 0 ? 1 : 0;
    Vector v(half * half);
    for (int j = 0; j < half; ++j)
        for (int i = 0; i < half; ++i) v(i + j * half) = rho(2 * i + mo, 2 * j + no);
    return v;
}

std::int64_t memory_ceiling() { return g_memory_ceiling.load(); }

void set_memory_ceiling(std::int64_t max_vectorized_dim) { g_memory_ceiling.store(max_vectorized_dim); }

OperatorMatrix x_drive_hamiltonian(double f, const FockSpace& space)
{
    const Matrix a = annihilation(space).data();
    return {f * (a + a.adjoint()), space.cutoff()};
}

SuperOperator lindbladian(const Matrix& h, const std::vector<Jump>& jumps, std::vector<int> cutoffs)
{
    const int d = product(cutoffs);
    if (h.rows() != d || h.cols() != d) throw Error(ErrorKind::DimensionMismatch, "Hamiltonian does not match cutoffs");
    const std::int64_t vd = static_cast<std::int64_t>(d) * d;
    if (vd > memory_ceiling())
        throw Error(ErrorKind::MemoryCeiling, "vectorized dimension " + std::to_string(vd) + " exceeds the ceiling " +
                                                  std::to_string(memory_ceiling()));
    SparseMatrix m = commutator_matrix(h);
    for (const auto& j : jumps) {
        if (j.op.rows() != d) throw Error(ErrorKind::DimensionMismatch, "jump operator does not match cutoffs");
        if (j.rate > 0) m += j.rate * dissipator_matrix(j.op);
    }
    m.prune(cplx(0.0), 0.0);
    m.makeCompressed();
    return {m, std::move(cutoffs)};
}

SuperOperator build_two_mode(const EffectiveParams& p1, const EffectiveParams& p2, const GateHamiltonian& hop)
{
    if (hop.kind != GateKind::XXHop) throw Error(ErrorKind::InvalidArgument, "two-mode builder expects an XX hop");
    if (hop.amplitude < 0) throw Error(ErrorKind::InvalidArgument, "hop amplitude must be non-negative");
    p1.validate();
    p2.validate();
    const EffectiveParams q1 = p1.cutoff ? p1 : resolve_cutoff(p1, 2, false);
    const EffectiveParams q2 = p2.cutoff ? p2 : resolve_cutoff(p2, 2, false);
    const int n1 = q1.cutoff, n2 = q2.cutoff;
    const std::int64_t vd = static_cast<std::int64_t>(n1) * n2 * n1 * n2;
    if (vd > memory_ceiling())
        throw Error(ErrorKind::MemoryCeiling, "vectorized dimension " + std::to_string(vd) + " exceeds the ceiling " +
                                                  std::to_string(memory_ceiling()));
    const FockSpace s1(n1), s2(n2);
    const Matrix i1 = Matrix::Identity(n1, n1), i2 = Matrix::Identity(n2, n2);
    const Matrix a1 = Eigen::kroneckerProduct(annihilation(s1).data(), i2).eval();
    const Matrix a2 = Eigen::kroneckerProduct(i1, annihilation(s2).data()).eval();
    const Matrix h = Eigen::kroneckerProduct(single_mode_hamiltonian(q1, s1).data(), i2).eval() +
                     Eigen::kroneckerProduct(i1, single_mode_hamiltonian(q2, s2).data()).eval() +
                     hop.amplitude * (a1 * a2.adjoint() + a1.adjoint() * a2);
    std::vector<Jump> jumps{
        {q1.eta2ph, a1 * a1}, {q1.kappa1, a1}, {q1.kappaphi, a1.adjoint() * a1},
        {q2.eta2ph, a2 * a2}, {q2.kappa1, a2}, {q2.kappaphi, a2.adjoint() * a2},
    };
    return lindbladian(h, jumps, {n1, n2});
}

double trace_preservation_residual(const SuperOperator& s)
{
    const int d = s.hilbert_dim();
    const Vector id = vec(Matrix::Identity(d, d));
    const Vector row = s.matrix.adjoint() * id;  // conj of vec(I)^T L
    const double scale = s.matrix.norm();
    return scale > 0 ? row.norm() / scale : row.norm();
}

double hermiticity_preservation_residual(const SuperOperator& s, int trials, std::uint64_t seed)
{
    const int d = s.hilbert_dim();
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    double worst = 0.0;
    for (int t = 0; t < trials; ++t) {
        Matrix x(d, d);
        for (int j = 0; j < d; ++j)
            for (int i = 0; i < d; ++i) x(i, j) = cplx(nd(rng), nd(rng));
        const Matrix herm = (x + x.adjoint()) / 2.0;
        const Matrix out = s.apply(herm);
        const double scale = std::max(1.0, out.norm());
        worst = std::max(worst, (out - out.adjoint()).norm() / scale);
        // Also L(X^dag) = L(X)^dag for a non-Hermitian input.
        const Matrix lx = s.apply(x), lxd = s.apply(Matrix(x.adjoint()));
        worst = std::max(worst, (lxd - lx.adjoint()).norm() / std::max(1.0, lx.norm()));
    }
    return worst;
}

double parity_commutator_norm(const SuperOperator& s)
{
    Vector diag(s.dim());
    const int d = s.hilbert_dim();
    // P: rho -> Pi rho Pi is diagonal in the Fock-product basis.
    std::vector<int> par(d, 1);
    for (int k = 0; k < d; ++k) {
        int rem = k, sum = 0;
        for (auto it = s.cutoffs.rbegin(); it != s.cutoffs.rend(); ++it) {
            sum += rem % *it;
            rem /= *it;
        }
        par[k] = (sum % 2 == 0) ? 1 : -1;
    }
    double acc = 0.0;
    for (int k = 0; k < s.matrix.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(s.matrix, k); it; ++it) {
            const int r = static_cast<int>(it.row()), c = static_cast<int>(it.col());
            const int pr = par[r % d] * par[r / d], pc = par[c % d] * par[c / d];
            if (pr != pc) acc += 4.0 * std::norm(it.value());
        }
    return std::sqrt(acc);
}

void dump_superoperator(const SuperOperator& s, const std::string& path, std::uint32_t flags)
{
    static_assert(std::endian::native == std::endian::little, "dump format assumes a little-endian host");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::Io, "cannot open " + path);
    const std::uint32_t magic = kDumpMagic;
    const std::uint64_t d = static_cast<std::uint64_t>(s.dim());
    out.write(reinterpret_cast<const char*>(&magic), 4);
    out.write(reinterpret_cast<const char*>(&d), 8);
    out.write(reinterpret_cast<const char*>(&flags), 4);
    // The sparse storage is row-major already; emit one dense row at a time.
    std::vector<cplx> row(d);
    for (Eigen::Index r = 0; r < s.matrix.outerSize(); ++r) {
        std::fill(row.begin(), row.end(), cplx(0.0));
        for (SparseMatrix::InnerIterator it(s.matrix, r); it; ++it) row[it.col()] = it.value();
        out.write(reinterpret_cast<const char*>(row.data()), static_cast<std::streamsize>(d * sizeof(cplx)));
    }
    if (!out) throw Error(ErrorKind::Io, "write failed for " + path);
}

Matrix load_superoperator_dump(const std::string& path, std::uint32_t* flags)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot open " + path);
    std::uint32_t magic = 0, fl = 0;
    std::uint64_t d = 0;
    in.read(reinterpret_cast<char*>(&magic), 4);
    in.read(reinterpret_cast<char*>(&d), 8);
    in.read(reinterpret_cast<char*>(&fl), 4);
    if (!in || magic != kDumpMagic) throw Error(ErrorKind::Io, "not a superoperator dump: " + path);
    Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> m(d, d);
    in.read(reinterpret_cast<char*>(m.data()), static_cast<std::streamsize>(d * d * sizeof(cplx)));
    if (!in) throw Error(ErrorKind::Io, "truncated dump: " + path);
    if (flags) *flags = fl;
    return m;
}

} // namespace catq
