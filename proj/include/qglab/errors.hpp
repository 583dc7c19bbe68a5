#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace qglab {

/// Base class of every error raised by the library. Each subclass names one
/// failure mode so callers (and the CLI exit-code logic) can discriminate.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define QGLAB_DEFINE_ERROR(Name)                 \
    class Name : public Error {                  \
    public:                                      \
        using Error::Error;                      \
    }

QGLAB_DEFINE_ERROR(InvalidParameter);
QGLAB_DEFINE_ERROR(ShiftTooSmall);
QGLAB_DEFINE_ERROR(Incompatible);
QGLAB_DEFINE_ERROR(NotInH1);
QGLAB_DEFINE_ERROR(MissingDerivative);
QGLAB_DEFINE_ERROR(UndefinedRatio);
QGLAB_DEFINE_ERROR(ResolventSingular);
QGLAB_DEFINE_ERROR(EdgeSingular);
QGLAB_DEFINE_ERROR(ConsistencyFailure);
QGLAB_DEFINE_ERROR(InvalidInterval);
QGLAB_DEFINE_ERROR(BoundaryCollision);
QGLAB_DEFINE_ERROR(EmptySet);
QGLAB_DEFINE_ERROR(ShiftViolation);
QGLAB_DEFINE_ERROR(InsufficientResolution);
QGLAB_DEFINE_ERROR(ParseError);
QGLAB_DEFINE_ERROR(IoError);

#undef QGLAB_DEFINE_ERROR

/// Power iteration did not settle; carries the final Rayleigh estimate.
class EstimationFailure : public Error {
public:
    EstimationFailure(const std::string& what, double last_estimate)
        : Error(what), last_estimate_(last_estimate) {}
    double last_estimate() const noexcept { return last_estimate_; }

private:
    double last_estimate_;
};

/// Secular fixed-point iteration did not converge; keeps the iterate history.
class Nonconvergence : public Error {
public:
    Nonconvergence(const std::string& what, std::vector<double> history)
        : Error(what), history_(std::move(history)) {}
    const std::vector<double>& history() const noexcept { return history_; }

private:
    std::vector<double> history_;
};

} // namespace qglab
