#pragma once

#include <stdexcept>
#include <string>

namespace hsprop {

// Every failure carries a short machine-readable code; the CLI emits it in JSON.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& what)
        : std::runtime_error(what), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

#define HSPROP_DEFINE_ERROR(Name, Code)                                          \
    class Name : public Error {                                                  \
    public:                                                                      \
        explicit Name(const std::string& what) : Error(Code, what) {}            \
    };

HSPROP_DEFINE_ERROR(DimensionError, "dimension")
HSPROP_DEFINE_ERROR(SizeError, "size")
HSPROP_DEFINE_ERROR(ContainmentError, "containment")
HSPROP_DEFINE_ERROR(NormalityError, "normality")
HSPROP_DEFINE_ERROR(PreconditionError, "precondition")
HSPROP_DEFINE_ERROR(UnsupportedError, "unsupported")
HSPROP_DEFINE_ERROR(ParameterMismatch, "parameter_mismatch")
HSPROP_DEFINE_ERROR(SubstitutionError, "substitution")
HSPROP_DEFINE_ERROR(FormatError, "format")
HSPROP_DEFINE_ERROR(PrecisionError, "precision")
HSPROP_DEFINE_ERROR(NoContractionError, "no_contraction")
HSPROP_DEFINE_ERROR(IdentityViolation, "identity_violation")
HSPROP_DEFINE_ERROR(ConsistencyError, "consistency")
HSPROP_DEFINE_ERROR(ConstructionError, "construction")
HSPROP_DEFINE_ERROR(SchemaError, "schema")

#undef HSPROP_DEFINE_ERROR

} // namespace hsprop
