#include "btcmc/error.hpp"

namespace btcmc {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::domain: return "domain";
        case ErrorCode::undefined_price: return "undefined_price";
        case ErrorCode::parse: return "parse";
        case ErrorCode::validation: return "validation";
        case ErrorCode::insufficient_data: return "insufficient_data";
        case ErrorCode::singular: return "singular";
        case ErrorCode::io: return "io";
        case ErrorCode::fetch: return "fetch";
        case ErrorCode::config: return "config";
    }
    return "unknown";
}

int exit_status(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::config: return 2;
        case ErrorCode::domain: return 3;
        case ErrorCode::undefined_price: return 4;
        case ErrorCode::parse: return 5;
        case ErrorCode::validation: return 6;
        case ErrorCode::insufficient_data: return 7;
        case ErrorCode::singular: return 8;
        case ErrorCode::io: return 9;
        case ErrorCode::fetch: return 10;
    }
    return 1;
}

} // namespace btcmc
