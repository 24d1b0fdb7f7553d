#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace smasim {

/// Base class for every exception thrown by the library.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A parameter violated its domain. The message names the offending field.
class parameter_error : public error {
public:
    using error::error;
};

/// A waveform carried the wrong physical unit for the requested operation.
class unit_error : public error {
public:
    using error::error;
};

/// A window selection left no samples.
class empty_window_error : public error {
public:
    using error::error;
};

/// The regressor cannot support the requested fit, even after regularization.
class identifiability_error : public error {
public:
    using error::error;
};

/// An identified (or constructed) IIR denominator has roots on or outside the
/// unit circle. Carries the offending root radii.
class instability_error : public error {
public:
    instability_error(const std::string& msg, std::vector<double> radii)
        : error(msg), radii_(std::move(radii)) {}

    const std::vector<double>& root_radii() const noexcept { return radii_; }

private:
    std::vector<double> radii_;
};

/// Numeric degeneracy (singular step matrix and the like).
class numeric_error : public error {
public:
    using error::error;
};

/// Filesystem / serialization failure. The message carries the path.
class io_error : public error {
public:
    using error::error;
};

/// Malformed or inconsistent configuration document.
class config_error : public error {
public:
    using error::error;
};

}
