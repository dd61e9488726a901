#ifndef BVFT_ERRORS_HPP
#define BVFT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace bvft
{

/// Base of every error raised by the library.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

#define BVFT_DEFINE_ERROR(Name)                 \
    class Name : public Error                   \
    {                                           \
    public:                                     \
        using Error::Error;                     \
    }

// Function model
BVFT_DEFINE_ERROR(DomainError);
BVFT_DEFINE_ERROR(NotBVError);
BVFT_DEFINE_ERROR(ClassificationError);
BVFT_DEFINE_ERROR(ValidationError);

// Stieltjes engine
BVFT_DEFINE_ERROR(DivergentIntegralError);
BVFT_DEFINE_ERROR(HypothesisError);
BVFT_DEFINE_ERROR(CommonDiscontinuityError);
BVFT_DEFINE_ERROR(NotACError);
BVFT_DEFINE_ERROR(DepthError);
BVFT_DEFINE_ERROR(NotFineError);

// Transforms
BVFT_DEFINE_ERROR(SingularityError);
BVFT_DEFINE_ERROR(NotOddError);
BVFT_DEFINE_ERROR(WeightedIntegrabilityError);
BVFT_DEFINE_ERROR(ZeroFrequencyError);

// Inversion
BVFT_DEFINE_ERROR(NonConvergenceError);

#undef BVFT_DEFINE_ERROR

/// Grammar error with the 1-based position of the offending token.
class ParseError : public Error
{
public:
    ParseError(const std::string& what, int line, int column)
        : Error(what + " at line " + std::to_string(line) + ", column " + std::to_string(column)),
          line_(line), column_(column)
    {
    }

    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    int line_;
    int column_;
};

} // namespace bvft

#endif // BVFT_ERRORS_HPP
