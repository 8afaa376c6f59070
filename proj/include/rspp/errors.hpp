#pragma once

#include <stdexcept>
#include <string>

namespace rspp {

/// Base class for every error thrown by this library.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Input data failed schema or domain validation (bad CSV/JSON, bad flag value).
struct ValidationError : Error {
    using Error::Error;
};

/// A file could not be parsed (malformed CSV/JSON, wrong header, bad field).
struct ParseError : ValidationError {
    using ValidationError::ValidationError;
};

// -- geodesy ------------------------------------------------------------

/// ECEF point too close to the geocenter for a geodetic conversion.
struct DegeneratePosition : Error {
    using Error::Error;
};

// -- measurement model --------------------------------------------------

/// State lacks a clock bias for a constellation present in the epoch.
struct MissingClockBias : Error {
    using Error::Error;
};

/// Fewer observations than unknowns (+1) in an epoch.
struct InsufficientObservations : Error {
    using Error::Error;
};

/// A satellite (numerically) coincides with the linearization point.
struct DegenerateGeometry : Error {
    using Error::Error;
};

// -- error models / sampling --------------------------------------------

/// Inverse-CDF sampling asked to invert u outside (0, 1).
struct InvalidUniform : Error {
    using Error::Error;
};

/// A sample value is NaN or infinite.
struct NonFiniteSample : Error {
    using Error::Error;
};

// -- solver ---------------------------------------------------------------

/// Normal matrix H^T W H is singular or condition number > 1e12.
struct SingularNormalMatrix : Error {
    using Error::Error;
};

/// Iterates left the sanity envelope around the Earth-surface shell.
struct DivergedSolution : Error {
    using Error::Error;
};

// -- distribution fitting -------------------------------------------------

/// Too few samples for the requested fit.
struct InsufficientSamples : Error {
    using Error::Error;
};

/// Samples carry no spread (all identical), no scale is identifiable.
struct DegenerateSample : Error {
    using Error::Error;
};

/// Iterative fit hit its iteration cap without meeting its tolerance.
struct NoConvergence : Error {
    using Error::Error;
};

/// A mixture component's variance collapsed toward a point mass.
struct ComponentCollapse : Error {
    using Error::Error;
};

// -- evaluation -------------------------------------------------------------

/// An error series too short for the requested statistic.
struct InsufficientSeries : Error {
    using Error::Error;
};

}  // namespace rspp
