#include "catq/types.hpp"
#include "catq/parallel.hpp"

#include <iostream>
#include <mutex>
#include <vector>

namespace catq {

const char* to_string(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::Truncation: return "TruncationError";
    case ErrorKind::DegenerateCat: return "DegenerateCat";
    case ErrorKind::ZeroStabilization: return "ZeroStabilization";
    case ErrorKind::SymmetryBroken: return "SymmetryBroken";
    case ErrorKind::CutoffParity: return "CutoffParity";
    case ErrorKind::PairingFailure: return "PairingFailure";
    case ErrorKind::NonPositiveSteadyState: return "NonPositiveSteadyState";
    case ErrorKind::FlatLandscape: return "FlatLandscape";
    case ErrorKind::NoTransition: return "NoTransition";
    case ErrorKind::NoExponentialWindow: return "NoExponentialWindow";
    case ErrorKind::ToleranceNotMet: return "ToleranceNotMet";
    case ErrorKind::NonPhysicalEmbedding: return "NonPhysicalEmbedding";
    case ErrorKind::MemoryCeiling: return "MemoryCeiling";
    case ErrorKind::Io: return "IoError";
    }
    return "Unknown";
}

namespace {

std::mutex g_sink_mutex;
WarningSink g_sink;
thread_local WarningCapture* t_capture = nullptr;

} // namespace

void set_warning_sink(WarningSink sink)
{
    std::lock_guard lock(g_sink_mutex);
    g_sink = std::move(sink);
}

void warn(const std::string& category, const std::string& message)
{
    if (t_capture != nullptr) {
        // Captures are per thread; worker threads fall through to the sink.
        t_capture->push(category, message);
        return;
    }
    std::lock_guard lock(g_sink_mutex);
    if (g_sink) {
        g_sink(category, message);
    } else {
        std::cerr << "warning [" << category << "]: " << message << "\n";
    }
}

WarningCapture::WarningCapture() : previous_(t_capture) { t_capture = this; }

WarningCapture::~WarningCapture() { t_capture = previous_; }

bool WarningCapture::contains(const std::string& category) const
{
    for (const auto& [cat, msg] : entries_) {
        if (cat == category) return true;
    }
    return false;
}

namespace {
std::atomic<int> g_workers{0};
} // namespace

int default_workers()
{
    const int w = g_workers.load();
    if (w > 0) return w;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

void set_default_workers(int workers) { g_workers = std::max(workers, 0); }

} // namespace catq
