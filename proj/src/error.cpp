#include "rcar/error.hpp"

namespace rcar {

const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::Config: return "configuration error";
        case ErrorKind::Numeric: return "numeric error";
        case ErrorKind::Domain: return "domain error";
        case ErrorKind::Hypothesis: return "hypothesis violation";
        case ErrorKind::Pathological: return "pathological parameter set";
        case ErrorKind::Degenerate: return "degenerate data";
        case ErrorKind::Parse: return "parse error";
        case ErrorKind::Explosion: return "trajectory explosion";
    }
    return "error";
}

}  // namespace rcar
