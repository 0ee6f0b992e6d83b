#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dcb {

// Base of every error thrown by the library.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid argument outside a function's domain (cr >= 1, negative impedance, ...).
class domain_error : public error {
public:
    using error::error;
};

// Numerical failure: singular matrices, degenerate eigenproblems, undefined conversions.
class numerical_error : public error {
public:
    using error::error;
};

class singular_matrix_error : public numerical_error {
public:
    using numerical_error::numerical_error;
};

// Through-Line calibration cannot separate the line eigenvalues.
class calibration_degenerate_error : public numerical_error {
public:
    calibration_degenerate_error(const std::string& what, double freq_hz)
        : numerical_error(what), freq_hz_(freq_hz) {}
    double freq_hz() const noexcept { return freq_hz_; }

private:
    double freq_hz_;
};

// Frequencies of two data sets do not line up.
class alignment_error : public error {
public:
    using error::error;
};

// Malformed text input. line() is 1-based; 0 when not tied to a line.
class parse_error : public error {
public:
    parse_error(const std::string& msg, std::size_t line)
        : error(line ? "line " + std::to_string(line) + ": " + msg : msg), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

// Design configuration problem tied to a named key.
class config_error : public error {
public:
    config_error(const std::string& key, const std::string& msg)
        : error("'" + key + "': " + msg), key_(key) {}
    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

} // namespace dcb
