// Exception hierarchy shared by all latticedmt modules.
#pragma once

#include <stdexcept>
#include <string>

namespace ldmt {

struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct DimensionMismatch : Error {
    using Error::Error;
};
struct DimensionTooLarge : Error {
    using Error::Error;
};
struct ConstellationTooLarge : Error {
    using Error::Error;
};
struct EmptyConstellation : Error {
    using Error::Error;
};
struct EmptyPairSet : Error {
    using Error::Error;
};
struct SingularBasis : Error {
    using Error::Error;
};
struct SingularSystem : Error {
    using Error::Error;
};
struct NonConvergence : Error {
    using Error::Error;
};
struct OutOfRange : Error {
    using Error::Error;
};
struct NoData : Error {
    using Error::Error;
};
struct InsufficientData : Error {
    using Error::Error;
};
struct PrematureOutage : Error {
    using Error::Error;
};
struct BudgetExceeded : Error {
    using Error::Error;
};
struct ConfigError : Error {
    explicit ConfigError(const std::string& field, const std::string& what)
        : Error("config field '" + field + "': " + what), field(field) {}
    std::string field;
};

}  // namespace ldmt
