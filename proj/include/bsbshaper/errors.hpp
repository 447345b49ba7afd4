#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace bsb {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Wavelength or frequency outside a dispersion model's validity window.
class RangeError : public Error {
public:
    using Error::Error;
};

/// Invalid user input; may carry several aggregated messages.
class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& message)
        : Error(message), messages_{message} {}

    explicit ValidationError(std::vector<std::string> messages)
        : Error(join(messages)), messages_(std::move(messages)) {}

    const std::vector<std::string>& messages() const noexcept { return messages_; }

private:
    static std::string join(const std::vector<std::string>& messages) {
        std::string out;
        for (const auto& m : messages) {
            if (!out.empty()) out += "; ";
            out += m;
        }
        return out;
    }

    std::vector<std::string> messages_;
};

/// A solve or ratio has no well-conditioned answer (singular system, zero derivative).
class DegeneracyError : public Error {
public:
    using Error::Error;
};

class GridMismatchError : public Error {
public:
    using Error::Error;
};

/// Field energy leaks past the grid edges above the configured fraction.
class SupportLeakError : public Error {
public:
    using Error::Error;
};

class UndersampledFringeError : public Error {
public:
    using Error::Error;
};

/// The retrieval window picks up baseband energy.
class SidebandOverlapError : public Error {
public:
    using Error::Error;
};

/// Not enough valid samples to form an estimate.
class InsufficientDataError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

}  // namespace bsb
