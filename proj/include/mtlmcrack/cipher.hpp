#ifndef MTLMCRACK_CIPHER_HPP
#define MTLMCRACK_CIPHER_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "mtlmcrack/image.hpp"
#include "mtlmcrack/mtlm.hpp"

namespace mtlmcrack {

/// The six odd permutation integers r1..r6.
/// r1, r3, r5 drive the row offsets of R, G, B; r2, r4, r6 the column offsets.
class PermutationParams
{
public:
    PermutationParams() = default;

    /// Throws KeyError unless every value is odd
    explicit PermutationParams(const std::array<std::uint8_t, 6>& r);

    /// 1-based accessor matching the usual r1..r6 naming
    std::uint8_t r(std::size_t u) const { return r_.at(u - 1); }
    std::uint8_t row_param(std::size_t channel) const { return r_[2 * channel]; }
    std::uint8_t col_param(std::size_t channel) const { return r_[2 * channel + 1]; }
    const std::array<std::uint8_t, 6>& values() const { return r_; }

    friend bool operator==(const PermutationParams&, const PermutationParams&) = default;

private:
    std::array<std::uint8_t, 6> r_{1, 1, 1, 1, 1, 1};
};

struct SecretKey
{
    PermutationParams r;
    ControlParams k;
    ChaoticState init;

    friend bool operator==(const SecretKey&, const SecretKey&) = default;
};

/// Offset (31 * index * r) mod extent; `index` is the 1-based row or column.
inline std::size_t permutation_offset(std::size_t index, std::uint8_t r, std::size_t extent)
{
    return (31 * index * r) % extent;
}

/// True if the offset map for (r, extent) is a bijection, i.e. gcd(31 r, extent) = 1
bool offset_is_bijective(std::uint8_t r, std::size_t extent);

bool permutation_is_bijective(const PermutationParams& r, std::size_t height, std::size_t width);

/// Throws KeyDimensionIncompatible when permutation_is_bijective fails
void require_bijective(const PermutationParams& r, std::size_t height, std::size_t width);

/// Source raster index feeding output raster index `out` (0-based) of one channel
std::size_t permutation_source(std::size_t out, std::uint8_t row_r, std::uint8_t col_r, std::size_t height,
                               std::size_t width);

/// Swap the high and low nibble: 16 * (a mod 16) + a / 16. An involution.
constexpr std::uint8_t rotate_nibbles(std::uint8_t a)
{
    return static_cast<std::uint8_t>(((a & 0x0F) << 4) | (a >> 4));
}

/// Anti-diagonal scan of an H x W raster.
///
/// Diagonals s = i + j (1-based) run from 2 to H + W. On even s the scan goes up-right
/// (row decreasing), on odd s down-left (row increasing), clipped to the rectangle.
/// On 8 x 8 this is the JPEG zigzag. Positions and indices are 0-based.
class ZigzagMap
{
public:
    ZigzagMap(std::size_t height, std::size_t width);

    std::size_t height() const { return height_; }
    std::size_t width() const { return width_; }
    std::size_t size() const { return to_raster_.size(); }

    /// Raster index visited at sequence position p
    std::size_t to_raster(std::size_t p) const { return to_raster_[p]; }
    /// Sequence position at which raster index k is visited
    std::size_t from_raster(std::size_t k) const { return from_raster_[k]; }

private:
    std::size_t height_, width_;
    std::vector<std::size_t> to_raster_, from_raster_;
};

ZigzagMap build_zigzag(std::size_t height, std::size_t width);

/// Initial permutation. Throws KeyDimensionIncompatible when it would not be bijective.
RgbImage permute(const RgbImage& img, const PermutationParams& r);
RgbImage inverse_permute(const RgbImage& img, const PermutationParams& r);

/// ((rotate_nibbles(a) + x) mod 256) xor y
constexpr std::uint8_t diffuse_byte(std::uint8_t a, std::uint8_t x, std::uint8_t y)
{
    return static_cast<std::uint8_t>(static_cast<std::uint8_t>(rotate_nibbles(a) + x) ^ y);
}

/// rotate_nibbles(((c xor y) - x) mod 256)
constexpr std::uint8_t undiffuse_byte(std::uint8_t c, std::uint8_t x, std::uint8_t y)
{
    return rotate_nibbles(static_cast<std::uint8_t>((c ^ y) - x));
}

/// Per-pixel nonlinear diffusion with X and Y indexed by raster position.
/// Throws ShapeError when stream lengths differ from the pixel count.
RgbImage nonlinear_diffuse(const RgbImage& img, std::span<const std::uint8_t> x, std::span<const std::uint8_t> y);
RgbImage nonlinear_undiffuse(const RgbImage& img, std::span<const std::uint8_t> x, std::span<const std::uint8_t> y);

/// Reorder into zigzag sequence, then C'(p) = C(p) xor C'(p-1) xor Z(p) with C'(-1) = 0.
/// The result stays in sequence order; that order is the ciphertext raster.
RgbImage zigzag_diffuse(const RgbImage& img, std::span<const std::uint8_t> z, const ZigzagMap& zz);
RgbImage zigzag_undiffuse(const RgbImage& img, std::span<const std::uint8_t> z, const ZigzagMap& zz);

/// C'(p) xor C'(p-1) for one ciphertext channel, with C'(-1) = 0
std::vector<std::uint8_t> chain_differences(std::span<const std::uint8_t> cipher_channel);

RgbImage encrypt(const RgbImage& img, const SecretKey& key);
RgbImage decrypt(const RgbImage& img, const SecretKey& key);

/// Random key valid for the given dimensions. Control parameters are drawn within 20 above
/// their bounds, the initial state uniformly in [0,1).
SecretKey random_key(std::mt19937_64& rng, std::size_t height, std::size_t width);

/// Key used in the published known-plaintext experiment
SecretKey reference_key();

} // namespace mtlmcrack

#endif // MTLMCRACK_CIPHER_HPP
