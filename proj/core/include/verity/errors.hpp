#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace verity {

// Shared error taxonomy. Every failure the library raises on purpose carries a
// stable machine-readable code; the CLI prints it on stderr and exits 1.
class VerityError : public std::runtime_error {
public:
    VerityError(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

#define VERITY_ERROR_TYPE(Name)                                        \
    struct Name : VerityError {                                        \
        explicit Name(const std::string& message)                      \
            : VerityError(#Name, message) {}                           \
    }

VERITY_ERROR_TYPE(ConversionFailure);   // question/choice cannot be turned into a statement
VERITY_ERROR_TYPE(InsufficientPool);    // not enough distinct subjects or names to sample from
VERITY_ERROR_TYPE(UnknownRelation);     // knowledge triple relation has no template
VERITY_ERROR_TYPE(CapTooSmall);         // per-group cap cannot keep every correct statement
VERITY_ERROR_TYPE(NonFiniteLoss);       // loss input or result is NaN or infinite
VERITY_ERROR_TYPE(ZeroVector);          // representation with zero norm reached cosine similarity
VERITY_ERROR_TYPE(MissingEOS);          // token sequence does not end with the EOS id
VERITY_ERROR_TYPE(EmptyInput);          // operation requires at least one element
VERITY_ERROR_TYPE(DegenerateLabels);    // metric needs both classes but got only one
VERITY_ERROR_TYPE(WrongKind);           // metric applied to the wrong group kind
VERITY_ERROR_TYPE(MissingMetric);       // macro average over benchmarks lacking the metric
VERITY_ERROR_TYPE(InvalidGroup);        // statement group violates a structural invariant
VERITY_ERROR_TYPE(InvalidArgument);     // caller broke a documented precondition
VERITY_ERROR_TYPE(IoFailure);           // file could not be read, parsed, or written

#undef VERITY_ERROR_TYPE

} // namespace verity
