#pragma once

#include <stdexcept>
#include <string>

namespace wtpolar {

// Exit-code categories used by the CLI. Library code throws typed
// exceptions; the CLI maps them to these codes.
enum class ErrorCode {
    validation = 2,
    infeasible = 3,
    state_space = 4,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, std::string type, const std::string& what)
        : std::runtime_error(what), code_(code), type_(std::move(type)) {}
    ErrorCode code() const { return code_; }
    const std::string& type() const { return type_; }

private:
    ErrorCode code_;
    std::string type_;
};

struct NegativeProbability : Error {
    explicit NegativeProbability(const std::string& w)
        : Error(ErrorCode::validation, "NegativeProbability", w) {}
};

struct RowSumError : Error {
    explicit RowSumError(const std::string& w)
        : Error(ErrorCode::validation, "RowSumError", w) {}
};

struct NonDeterministicX : Error {
    explicit NonDeterministicX(const std::string& w)
        : Error(ErrorCode::validation, "NonDeterministicX", w) {}
};

struct ValidationError : Error {
    explicit ValidationError(const std::string& w)
        : Error(ErrorCode::validation, "ValidationError", w) {}
};

struct LengthNotPowerOfTwo : Error {
    explicit LengthNotPowerOfTwo(const std::string& w)
        : Error(ErrorCode::validation, "LengthNotPowerOfTwo", w) {}
};

// The conditioning event has probability zero; inputs are inconsistent.
struct ZeroEvidence : Error {
    explicit ZeroEvidence(const std::string& w)
        : Error(ErrorCode::validation, "ZeroEvidence", w) {}
};

struct StateSpaceTooLarge : Error {
    explicit StateSpaceTooLarge(const std::string& w)
        : Error(ErrorCode::state_space, "StateSpaceTooLarge", w) {}
};

struct InfeasiblePlan : Error {
    explicit InfeasiblePlan(const std::string& w)
        : Error(ErrorCode::infeasible, "InfeasiblePlan", w) {}
};

struct InadmissibleCombination : Error {
    explicit InadmissibleCombination(const std::string& w)
        : Error(ErrorCode::infeasible, "InadmissibleCombination", w) {}
};

struct PlanMismatch : Error {
    explicit PlanMismatch(const std::string& w)
        : Error(ErrorCode::validation, "PlanMismatch", w) {}
};

}  // namespace wtpolar
