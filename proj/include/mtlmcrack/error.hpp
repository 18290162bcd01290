#ifndef MTLMCRACK_ERROR_HPP
#define MTLMCRACK_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mtlmcrack {

/// Base class for every error raised by the library
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

#define MTLMCRACK_DEFINE_ERROR(Name)      \
    class Name : public Error             \
    {                                     \
    public:                               \
        using Error::Error;               \
    }

/// A chaotic recurrence produced a non-finite value
MTLMCRACK_DEFINE_ERROR(ChaosNumericError);
/// Secret key component out of its legal range
MTLMCRACK_DEFINE_ERROR(KeyError);
/// Permutation parameters do not yield a bijection for the image dimensions
MTLMCRACK_DEFINE_ERROR(KeyDimensionIncompatible);
/// Sequence lengths or image dimensions disagree
MTLMCRACK_DEFINE_ERROR(ShapeError);
/// Recovered streams disagree across colour channels
MTLMCRACK_DEFINE_ERROR(CrossCheckMismatch);
/// More than one inequivalent permutation parameter survives
MTLMCRACK_DEFINE_ERROR(AmbiguousParameter);
/// Marker pixels could not be located after stripping diffusion
MTLMCRACK_DEFINE_ERROR(MarkerNotFound);
/// Known plaintexts do not differ enough to verify candidates
MTLMCRACK_DEFINE_ERROR(InsufficientContrast);
/// Every candidate was rejected
MTLMCRACK_DEFINE_ERROR(NoCandidate);
/// Bit sequence too short for the requested statistical test
MTLMCRACK_DEFINE_ERROR(TooShort);
/// Malformed image or key file
MTLMCRACK_DEFINE_ERROR(FormatError);
/// An encryption oracle was queried beyond its budget
MTLMCRACK_DEFINE_ERROR(QueryBudgetExceeded);

#undef MTLMCRACK_DEFINE_ERROR

/// No value satisfies the add-XOR constraints at a sequence position
class EmptyCandidate : public Error
{
public:
    EmptyCandidate(std::size_t position, const std::string& what)
        : Error(what), position_(position)
    {
    }

    /// 0-based sequence position where the candidate set became empty
    std::size_t position() const { return position_; }

private:
    std::size_t position_;
};

} // namespace mtlmcrack

#endif // MTLMCRACK_ERROR_HPP
