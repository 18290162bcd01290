#ifndef MTLMCRACK_EQUIVALENT_KEY_HPP
#define MTLMCRACK_EQUIVALENT_KEY_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "mtlmcrack/cipher.hpp"

namespace mtlmcrack {

/// Material sufficient to decrypt without the chaotic parameters.
///
/// Both streams are indexed by zigzag sequence position p. x_tilde[p] is X at raster index
/// to_raster(p) with bit 7 cleared; w[p] is Y at that raster index xor Z[p], flipped in bit 7
/// wherever the true X had bit 7 set. The pair (x, w) and (x xor 128, w xor 128) encrypt
/// identically, so this canonical form loses nothing.
struct EquivalentKey
{
    std::size_t height = 0;
    std::size_t width = 0;
    std::optional<PermutationParams> r;
    std::vector<std::uint8_t> x_tilde;
    std::vector<std::uint8_t> w;
    /// Positions where x_tilde was not pinned down modulo 128
    std::vector<bool> ambiguous;

    std::size_t size() const { return x_tilde.size(); }

    friend bool operator==(const EquivalentKey&, const EquivalentKey&) = default;
};

/// Canonical equivalent key derived directly from a secret key
EquivalentKey true_equivalent_key(const SecretKey& key, std::size_t height, std::size_t width);

/// Undo zigzag and nonlinear diffusion, leaving the permuted image.
/// Throws ShapeError when the key does not match the ciphertext dimensions.
RgbImage strip_diffusion(const RgbImage& cipher, const EquivalentKey& ek);

/// Full decryption with recovered material; requires ek.r
RgbImage decrypt_with_equivalent_key(const RgbImage& cipher, const EquivalentKey& ek);

/// Same permutation on the given dimensions, even if the integers differ
bool equivalent_permutation(const PermutationParams& a, const PermutationParams& b, std::size_t height,
                            std::size_t width);

/// Fraction of pixel positions where all three channel bytes match. Throws ShapeError.
double pixel_accuracy(const RgbImage& a, const RgbImage& b);

} // namespace mtlmcrack

#endif // MTLMCRACK_EQUIVALENT_KEY_HPP
