// types.hpp — Common numeric aliases, the library error type and the warning sink

#pragma once

#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace catq {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using SparseMatrix = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;

inline constexpr cplx I{0.0, 1.0};

enum class ErrorKind {
    InvalidArgument,
    DimensionMismatch,
    Truncation,
    DegenerateCat,
    ZeroStabilization,
    SymmetryBroken,
    CutoffParity,
    PairingFailure,
    NonPositiveSteadyState,
    FlatLandscape,
    NoTransition,
    NoExponentialWindow,
    ToleranceNotMet,
    NonPhysicalEmbedding,
    MemoryCeiling,
    Io,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

// Non-fatal diagnostics (truncation, ill-conditioning, adiabaticity) are
// routed through a process-wide sink. The default sink writes to stderr.
using WarningSink = std::function<void(const std::string& category, const std::string& message)>;

void set_warning_sink(WarningSink sink);
void warn(const std::string& category, const std::string& message);

// RAII capture of warnings, mostly for tests and the CLI metadata.
class WarningCapture {
public:
    WarningCapture();
    ~WarningCapture();
    WarningCapture(const WarningCapture&) = delete;
    WarningCapture& operator=(const WarningCapture&) = delete;

    const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }
    bool contains(const std::string& category) const;
    void push(const std::string& category, const std::string& message) { entries_.emplace_back(category, message); }

private:
    std::vector<std::pair<std::string, std::string>> entries_;
    WarningCapture* previous_;
};

} // namespace catq
