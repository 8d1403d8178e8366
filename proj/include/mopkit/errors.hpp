#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mopkit {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define MOPKIT_ERROR(Name)                                   \
    class Name : public Error {                              \
    public:                                                  \
        explicit Name(const std::string& what) : Error(what) {} \
    };

MOPKIT_ERROR(DimensionMismatch)
MOPKIT_ERROR(SingularSystem)
MOPKIT_ERROR(InvalidTransform)
MOPKIT_ERROR(MomentUnavailable)
MOPKIT_ERROR(InvalidRecurrence)
MOPKIT_ERROR(NonHermitianInput)
MOPKIT_ERROR(NoGeneratorFound)
MOPKIT_ERROR(TildeBlocked)
MOPKIT_ERROR(HermiticityRequired)
MOPKIT_ERROR(HypothesisViolated)
MOPKIT_ERROR(PreconditionViolated)
MOPKIT_ERROR(InvalidParameter)
MOPKIT_ERROR(UnknownExample)
MOPKIT_ERROR(ParseError)

#undef MOPKIT_ERROR

// Errors that carry the index where a ladder or recurrence broke down.
class IndexedError : public Error {
public:
    IndexedError(const std::string& what, std::size_t index) : Error(what), index_(index) {}
    std::size_t index() const { return index_; }

private:
    std::size_t index_;
};

#define MOPKIT_INDEXED_ERROR(Name)                                              \
    class Name : public IndexedError {                                          \
    public:                                                                     \
        Name(const std::string& what, std::size_t k) : IndexedError(what, k) {} \
    };

MOPKIT_INDEXED_ERROR(RecurrenceBlocked)
MOPKIT_INDEXED_ERROR(DerivativeNotOrthogonal)
MOPKIT_INDEXED_ERROR(LadderBlocked)
MOPKIT_INDEXED_ERROR(ChainBroken)
MOPKIT_INDEXED_ERROR(ClosedFormBlocked)
MOPKIT_INDEXED_ERROR(OdeSolveBlocked)

#undef MOPKIT_INDEXED_ERROR

}  // namespace mopkit
