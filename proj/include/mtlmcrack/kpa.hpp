#ifndef MTLMCRACK_KPA_HPP
#define MTLMCRACK_KPA_HPP

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "mtlmcrack/addxor.hpp"
#include "mtlmcrack/equivalent_key.hpp"

namespace mtlmcrack {

struct KnownPair
{
    RgbImage plain;
    RgbImage cipher;
};

enum class VerifyMode
{
    /// Stop once a single candidate is left and it has passed three discriminative anchors
    Default,
    /// Run through every anchor before deciding
    Strict,
};

struct ParamSearchStats
{
    std::uint64_t evaluations = 0; ///< core_map calls
    std::size_t anchors_visited = 0;
    std::size_t candidates = 0; ///< inequivalent candidates enumerated
};

/// Recover r_u (u = 1..6) from two known pairs.
///
/// Row parameters are verified at the last column of every row but the last, column parameters
/// at the last row of every column but the last; there the other offset collapses to zero.
/// Candidates that induce the same permutation are enumerated once (least odd integer).
/// Throws InsufficientContrast, AmbiguousParameter or NoCandidate.
std::uint8_t recover_permutation_param(std::size_t u, const KnownPair& first, const KnownPair& second,
                                       VerifyMode mode = VerifyMode::Default, ParamSearchStats* stats = nullptr);

PermutationParams recover_all_permutation_params(const KnownPair& first, const KnownPair& second,
                                                 VerifyMode mode = VerifyMode::Default,
                                                 ParamSearchStats* stats = nullptr);

/// Per sequence position, the X values consistent with every pair of known bytes
/// (3 per known image, so 3 constraints for one image and 15 for two).
/// Throws EmptyCandidate on inconsistent input, ShapeError on mismatched dimensions.
std::vector<CandidateSet> confirm_x_candidates(std::span<const KnownPair> pairs, const PermutationParams& r);

/// W per position by majority vote over every known channel, given chosen X representatives
std::vector<std::uint8_t> derive_w_stream(std::span<const KnownPair> pairs, const PermutationParams& r,
                                          std::span<const std::uint8_t> x_choice);

struct KpaResult
{
    EquivalentKey key;
    /// candidate-set size -> number of positions
    std::map<std::size_t, std::size_t> set_sizes;
    ParamSearchStats search;
};

/// Known-plaintext attack. With two pairs the permutation is recovered; with one pair it must be
/// supplied (InsufficientContrast otherwise).
KpaResult kpa_attack(std::span<const KnownPair> pairs, std::optional<PermutationParams> known_r = std::nullopt,
                     VerifyMode mode = VerifyMode::Default);

} // namespace mtlmcrack

#endif // MTLMCRACK_KPA_HPP
