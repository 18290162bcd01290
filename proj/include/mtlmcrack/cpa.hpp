#ifndef MTLMCRACK_CPA_HPP
#define MTLMCRACK_CPA_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "mtlmcrack/equivalent_key.hpp"

namespace mtlmcrack {

/// Encrypts chosen images under a hidden key and counts the queries
class EncryptionOracle
{
public:
    using Function = std::function<RgbImage(const RgbImage&)>;

    explicit EncryptionOracle(Function fn, std::size_t budget = std::numeric_limits<std::size_t>::max());

    /// Oracle backed by the cipher under `key`
    static EncryptionOracle from_key(const SecretKey& key,
                                     std::size_t budget = std::numeric_limits<std::size_t>::max());

    /// Throws QueryBudgetExceeded once the budget is spent
    RgbImage query(const RgbImage& plain);

    std::size_t queries() const { return queries_; }

private:
    Function fn_;
    std::size_t budget_;
    std::size_t queries_ = 0;
};

/// Channel backgrounds of the uniform query. All three are fixed points of rotate_nibbles.
inline constexpr std::array<std::uint8_t, 3> uniform_query_values{0, 170, 85};
inline constexpr std::array<std::uint8_t, 3> marker_values{17, 34, 51};

struct PixelPosition
{
    std::size_t row;
    std::size_t col;

    friend bool operator==(const PixelPosition&, const PixelPosition&) = default;
};

/// R = 0, G = 170, B = 85 everywhere
RgbImage build_uniform_query(std::size_t height, std::size_t width);

/// Where the three markers go (0-based). With at least 6 rows the markers sit on distinct even
/// 1-based rows spread over the image, likewise for columns; smaller extents fall back to rows
/// 1, 2, 3 cyclically.
std::array<PixelPosition, 3> marker_positions(std::size_t height, std::size_t width);

/// Uniform query plus markers 17, 34, 51 in every channel. Needs height, width >= 2.
RgbImage build_marker_query(std::size_t height, std::size_t width);

/// X stream modulo 128 from the ciphertext of the uniform query.
/// Throws EmptyCandidate if some position admits no solution.
std::vector<std::uint8_t> recover_x_stream(const RgbImage& cipher);

/// Y xor Z stream from the uniform-query ciphertext, checked across all three channels.
/// Throws CrossCheckMismatch when the channels disagree.
std::vector<std::uint8_t> recover_w_stream(const RgbImage& cipher, std::span<const std::uint8_t> x_tilde);

/// Permutation integers from the ciphertext of a marker image, given broken diffusion.
/// Among odd r that explain every marker, the least is returned if all of them induce the same
/// permutation; otherwise AmbiguousParameter. MarkerNotFound / NoCandidate on inconsistent input.
PermutationParams recover_permutation_params(const RgbImage& marker_cipher, std::span<const std::uint8_t> x_tilde,
                                             std::span<const std::uint8_t> w, const RgbImage& marker_plain);

/// Two-query chosen-plaintext attack
EquivalentKey cpa_attack(EncryptionOracle& oracle, std::size_t height, std::size_t width);

/// Same attack, consuming pre-computed ciphertexts of build_uniform_query and build_marker_query
EquivalentKey cpa_from_pairs(const RgbImage& uniform_cipher, const RgbImage& marker_plain,
                             const RgbImage& marker_cipher);

/// Number of packed uniform-value queries used by the multi-image baseline
inline constexpr std::size_t baseline_value_queries = 86;

/// Plain values of baseline query q: channel c holds 3q + c, or 0 past 255
std::array<std::uint8_t, 3> baseline_query_values(std::size_t q);

/// Multi-image baseline: 86 packed uniform images cover all 256 values, then one marker image
EquivalentKey zhang_baseline_attack(EncryptionOracle& oracle, std::size_t height, std::size_t width);

} // namespace mtlmcrack

#endif // MTLMCRACK_CPA_HPP
