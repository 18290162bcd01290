#ifndef MTLMCRACK_RANDOMNESS_HPP
#define MTLMCRACK_RANDOMNESS_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mtlmcrack/mtlm.hpp"

namespace mtlmcrack {

/// One bit per element, values 0 or 1
using BitSequence = std::vector<std::uint8_t>;

inline constexpr double significance_level = 0.01;
/// 256 * 256 * 3 bits, i.e. 8192 interleaved XYZ iterations
inline constexpr std::size_t battery_bits = 196608;

struct TestReport
{
    std::string name;
    double p_value = 0.0;
    bool passed = false;
};

/// Most significant bit first
BitSequence bytes_to_bits(std::span<const std::uint8_t> bytes);

// Statistical tests after NIST SP 800-22. Each throws TooShort below 100 bits or the
// test's own minimum.
TestReport frequency_test(const BitSequence& bits);
TestReport block_frequency_test(const BitSequence& bits, std::size_t block = 128);
TestReport runs_test(const BitSequence& bits);

enum class CusumMode
{
    Forward,
    Reverse,
};
TestReport cumulative_sums_test(const BitSequence& bits, CusumMode mode);

/// Requires n >= 10 * 2^m
TestReport approximate_entropy_test(const BitSequence& bits, std::size_t m = 10);

/// Both serial p-values must reach the level; the report carries the smaller one
TestReport serial_test(const BitSequence& bits, std::size_t m = 16);
/// The two serial p-values (del psi^2, del^2 psi^2)
std::pair<double, double> serial_p_values(const BitSequence& bits, std::size_t m = 16);

/// Upper regularized incomplete gamma Q(a, x)
double igamc(double a, double x);

enum class StreamLayout
{
    InterleavedXyz,
    XOnly,
};

/// Iterations needed so that `layout` yields at least `bits` bits
std::size_t iterations_for_bits(StreamLayout layout, std::size_t bits);

/// Keystream bytes in the given layout, expanded MSB first and truncated to `bits`
BitSequence keystream_bits(const Keystream& ks, StreamLayout layout, std::size_t bits = battery_bits);

/// Deterministic ChaCha20 byte stream from a 64-bit seed; the calibration control
std::vector<std::uint8_t> control_stream(std::uint64_t seed, std::size_t bytes);

struct BatteryReport
{
    std::size_t sequences = 0;
    std::vector<std::string> tests;
    std::vector<std::size_t> passes;

    /// Passes for a test name; throws std::out_of_range if absent
    std::size_t passes_for(const std::string& test) const;

    /// Two-column text table: test name, passed sequences
    std::string table() const;
};

/// Run every implemented test on each sequence
BatteryReport battery(std::span<const BitSequence> sequences);

/// `count` keystreams from keys drawn with the given seed
std::vector<BitSequence> mtlm_sequences(std::size_t count, std::uint64_t seed,
                                        StreamLayout layout = StreamLayout::InterleavedXyz,
                                        std::size_t bits = battery_bits);

std::vector<BitSequence> control_sequences(std::size_t count, std::uint64_t seed, std::size_t bits = battery_bits);

} // namespace mtlmcrack

#endif // MTLMCRACK_RANDOMNESS_HPP
