#ifndef MTLMCRACK_MTLM_HPP
#define MTLMCRACK_MTLM_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

namespace mtlmcrack {

using ByteSeq = std::vector<std::uint8_t>;

/// Point of the three-dimensional chaotic orbit, each coordinate in [0,1)
class ChaoticState
{
public:
    ChaoticState() = default;

    /// Throws KeyError unless every coordinate lies in [0,1)
    ChaoticState(double x, double y, double z);

    double x() const { return x_; }
    double y() const { return y_; }
    double z() const { return z_; }

    friend bool operator==(const ChaoticState&, const ChaoticState&) = default;

private:
    double x_ = 0.0, y_ = 0.0, z_ = 0.0;
};

/// Control parameters of the mixed transformed Logistic maps.
/// Magnitudes must exceed 37.7, 39.7 and 37.2 respectively; the sign is free.
class ControlParams
{
public:
    static constexpr double k1_bound = 37.7;
    static constexpr double k2_bound = 39.7;
    static constexpr double k3_bound = 37.2;

    ControlParams() = default;

    /// Throws KeyError when a magnitude bound is violated or a value is not finite
    ControlParams(double k1, double k2, double k3);

    double k1() const { return k1_; }
    double k2() const { return k2_; }
    double k3() const { return k3_; }

    friend bool operator==(const ControlParams&, const ControlParams&) = default;

private:
    double k1_ = 38.0, k2_ = 40.0, k3_ = 38.0;
};

/// Byte streams X, Y, Z quantized from the orbit; all three have the same length
struct Keystream
{
    ByteSeq x, y, z;

    std::size_t size() const { return x.size(); }

    friend bool operator==(const Keystream&, const Keystream&) = default;
};

/// v - floor(v), clamped below 1 so that tiny negative inputs stay in [0,1)
double frac(double v);

/// One step of the recurrence. x' is computed first, y' uses x', z' uses x' and y'.
/// Throws ChaosNumericError if any intermediate value is not finite.
ChaoticState mtlm_step(const ChaoticState& s, const ControlParams& k);

/// floor(256 * v) for v in [0,1)
std::uint8_t quantize(double v);

/// Iterate `length` times from `init`; element i is quantized from the state after step i+1.
/// Throws std::invalid_argument when length is zero.
Keystream generate_keystream(const ControlParams& k, const ChaoticState& init, std::size_t length);

/// Interleave as X1,Y1,Z1,X2,Y2,Z2,...
ByteSeq interleave(const Keystream& ks);

} // namespace mtlmcrack

#endif // MTLMCRACK_MTLM_HPP
