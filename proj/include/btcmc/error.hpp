#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace btcmc {

/// Machine-readable failure category carried by every library error.
enum class ErrorCode {
    domain,            // argument outside the operation's domain
    undefined_price,   // model price requested with zero block reward
    parse,             // malformed input text
    validation,        // well-formed input violating a record invariant
    insufficient_data, // too few observations for the requested estimator
    singular,          // ill-conditioned or singular linear system
    io,                // filesystem failure
    fetch,             // remote retrieval failure
    config,            // bad command-line or config-file value
};

std::string_view to_string(ErrorCode code) noexcept;

/// Process exit status used by the CLI for each category (never 0).
int exit_status(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace btcmc
