#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ctxforge {

// Base of every error raised by the library. The CLI maps these onto exit
// codes > 2; callers that only care about success can catch this one type.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SyntaxError : public Error {
public:
    SyntaxError(std::size_t position, const std::string& what)
        : Error("syntax error at position " + std::to_string(position) + ": " + what),
          position_(position) {}
    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

#define CTXFORGE_DEFINE_ERROR(Name)        \
    class Name : public Error {            \
    public:                                \
        using Error::Error;                \
    };

CTXFORGE_DEFINE_ERROR(DivisionByZero)
CTXFORGE_DEFINE_ERROR(NonFiniteValue)
CTXFORGE_DEFINE_ERROR(DimensionMismatch)
CTXFORGE_DEFINE_ERROR(NotNormalized)
CTXFORGE_DEFINE_ERROR(NotHermitian)
CTXFORGE_DEFINE_ERROR(NotDensityMatrix)
CTXFORGE_DEFINE_ERROR(ZeroProbabilityBranch)
CTXFORGE_DEFINE_ERROR(AmbiguousOverlap)
CTXFORGE_DEFINE_ERROR(IndexOutOfRange)
CTXFORGE_DEFINE_ERROR(TooLarge)
CTXFORGE_DEFINE_ERROR(OutputBudgetExceeded)
CTXFORGE_DEFINE_ERROR(ConvergenceFailure)
CTXFORGE_DEFINE_ERROR(AdjacentEndpoints)
CTXFORGE_DEFINE_ERROR(OutOfRange)
CTXFORGE_DEFINE_ERROR(EndpointsParallelOrOrthogonal)
CTXFORGE_DEFINE_ERROR(BudgetExceeded)
CTXFORGE_DEFINE_ERROR(Uncoverable)
CTXFORGE_DEFINE_ERROR(NotSDC)
CTXFORGE_DEFINE_ERROR(ConstructionFailed)
CTXFORGE_DEFINE_ERROR(UnsupportedDimension)
CTXFORGE_DEFINE_ERROR(WeightArityMismatch)
CTXFORGE_DEFINE_ERROR(UnknownDataset)
CTXFORGE_DEFINE_ERROR(SchemaError)

#undef CTXFORGE_DEFINE_ERROR

}  // namespace ctxforge
