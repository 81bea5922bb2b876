#ifndef SIMORTH_ERROR_HPP
#define SIMORTH_ERROR_HPP

#include <stdexcept>
#include <string>

namespace simorth {

/**
 * Error codes for precondition violations and unsupported requests.
 * Operations with expected negative outcomes (no solution, not found,
 * not diagonalizable) return result types instead of throwing.
 */
enum class ErrorCode {
    FieldMismatch,
    DivisionByZero,
    ParseError,
    InvalidArgument,
    NotSymmetric,
    NotInRadical,
    RadicalNotContained,
    UnsupportedField,
    NoCanonicalEmbedding,
    UnboundedFamily,
    CertificateNotConstant,
    ImplicationViolated,
    InternalDisagreement,
    OutOfBudget
};

inline const char* error_code_name(ErrorCode c)
{
    switch (c) {
        case ErrorCode::FieldMismatch:          return "FieldMismatch";
        case ErrorCode::DivisionByZero:         return "DivisionByZero";
        case ErrorCode::ParseError:             return "ParseError";
        case ErrorCode::InvalidArgument:        return "InvalidArgument";
        case ErrorCode::NotSymmetric:           return "NotSymmetric";
        case ErrorCode::NotInRadical:           return "NotInRadical";
        case ErrorCode::RadicalNotContained:    return "RadicalNotContained";
        case ErrorCode::UnsupportedField:       return "UnsupportedField";
        case ErrorCode::NoCanonicalEmbedding:   return "NoCanonicalEmbedding";
        case ErrorCode::UnboundedFamily:        return "UnboundedFamily";
        case ErrorCode::CertificateNotConstant: return "CertificateNotConstant";
        case ErrorCode::ImplicationViolated:    return "ImplicationViolated";
        case ErrorCode::InternalDisagreement:   return "InternalDisagreement";
        case ErrorCode::OutOfBudget:            return "OutOfBudget";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + what),
          code_(code)
    {
    }

    ErrorCode code() const noexcept { return code_; }

  private:
    ErrorCode code_;
};

}  // namespace simorth

#endif
