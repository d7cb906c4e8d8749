#pragma once

#include <stdexcept>
#include <string>

namespace blockavg {

/// Reason codes for blockavg::error; the CLI maps these onto exit codes.
enum class errc {
    invalid_exponent,
    invalid_base,
    invalid_ratio,
    invalid_partition,
    invalid_weights,
    invalid_norming,
    invalid_params,
    invalid_sequence,
    block_out_of_range,
    tail_not_boundable,
    diverged_constant,
    unsupported_exponent,
    bad_config,
};

class error : public std::runtime_error {
public:
    error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}

    errc code() const noexcept { return code_; }

private:
    errc code_;
};

} // namespace blockavg
