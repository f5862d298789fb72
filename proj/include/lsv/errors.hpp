#pragma once

#include <stdexcept>
#include <string>

namespace lsv {

/// Zero denominator in a fraction, or inverse of zero.
struct DivisionByZeroError : std::domain_error {
    using std::domain_error::domain_error;
};

/// A rational function was evaluated at a point where its denominator vanishes.
struct PoleError : std::domain_error {
    using std::domain_error::domain_error;
};

/// An odd index whose parity does not match the sector.
struct SectorError : std::domain_error {
    using std::domain_error::domain_error;
};

/// A table-backed lookup outside the stored window.
struct OutOfWindowError : std::out_of_range {
    using std::out_of_range::out_of_range;
};

/// An operation that requires the other centerless/central mode.
struct ModeError : std::logic_error {
    using std::logic_error::logic_error;
};

/// A graded operation applied to a non-homogeneous element.
struct ParityError : std::domain_error {
    using std::domain_error::domain_error;
};

/// Text that does not match the expected grammar; carries the offset.
struct ParseError : std::runtime_error {
    std::size_t position;
    ParseError(const std::string& what, std::size_t pos)
        : std::runtime_error(what + " (at position " + std::to_string(pos) + ")"),
          position(pos) {}
};

/// Two derivation steps forced different values for the same table entry.
struct InconsistencyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// The derivation window is too small for the propagation chain to run.
struct WindowTooSmallError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace lsv
