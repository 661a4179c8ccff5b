#pragma once

#include <stdexcept>
#include <string>

namespace qdcost {

// Base class for all library errors.
class error : public std::runtime_error {
public:
    explicit error(const std::string& what) : std::runtime_error(what) {}
};

// A matrix had the wrong dimensions for the requested operation.
class invalid_dimension_error : public error {
public:
    using error::error;
};

// A numeric parameter was outside its admissible range.
class parameter_range_error : public error {
public:
    using error::error;
};

// Which density-matrix property failed validation.
enum class state_violation { non_hermitian, trace, negativity };

// Parameters or a raw matrix do not describe a physical state.
class invalid_state_error : public error {
public:
    invalid_state_error(state_violation kind, const std::string& what)
        : error(what), kind_(kind) {}
    state_violation kind() const noexcept { return kind_; }

private:
    state_violation kind_;
};

// A Hermitian-PSD precondition failed (eigenvalue below tolerance).
class not_psd_error : public error {
public:
    using error::error;
};

// An internal numeric contract was violated (e.g. non-Hermitian input
// to the Hermitian eigensolver, fidelity above 1 beyond tolerance).
class contract_violation_error : public error {
public:
    using error::error;
};

// A measurement outcome has vanishing probability; the conditional
// state is undefined.
class degenerate_outcome_error : public error {
public:
    using error::error;
};

// A CLI state/sweep specification failed to parse. Carries the byte
// offset of the failure within the input string.
class parse_error : public error {
public:
    parse_error(std::size_t position, const std::string& what)
        : error(what + " (at offset " + std::to_string(position) + ")"),
          position_(position) {}
    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

} // namespace qdcost
