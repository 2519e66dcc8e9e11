#pragma once

#include <stdexcept>
#include <string>

namespace lcs {

// Invalid parameter values, length/dimension mismatches, unknown config keys.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Malformed runtime inputs (out-of-range action, out-of-domain point, ...).
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

// Roulette selection over an empty or all-zero weight vector.
class SelectionError : public std::runtime_error {
public:
    explicit SelectionError(const std::string& what) : std::runtime_error(what) {}
};

// Population/dataset file parse failures; carries the offending line number (1-based, 0 = n/a).
class LoadError : public std::runtime_error {
public:
    LoadError(const std::string& what, std::size_t line)
        : std::runtime_error(line > 0 ? what + " (line " + std::to_string(line) + ")" : what),
          line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

} // namespace lcs
