#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fanoscan {

enum class Errc {
    invalid_modulus,
    invalid_index,
    out_of_range,
    invalid_config,
    invalid_context,
    invalid_input,
    invalid_point,
    parse_error,
    internal,
};

inline std::string_view to_string(Errc code) {
    switch (code) {
    case Errc::invalid_modulus: return "invalid-modulus";
    case Errc::invalid_index: return "invalid-index";
    case Errc::out_of_range: return "out-of-range";
    case Errc::invalid_config: return "invalid-config";
    case Errc::invalid_context: return "invalid-context";
    case Errc::invalid_input: return "invalid-input";
    case Errc::invalid_point: return "invalid-point";
    case Errc::parse_error: return "parse-error";
    case Errc::internal: return "internal";
    }
    return "unknown";
}

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

} // namespace fanoscan
