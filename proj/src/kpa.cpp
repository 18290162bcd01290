#include "mtlmcrack/kpa.hpp"

#include <algorithm>
#include <string>

#include "mtlmcrack/error.hpp"

namespace mtlmcrack {

namespace {

void require_pair_shapes(std::span<const KnownPair> pairs)
{
    if (pairs.empty())
        throw std::invalid_argument("at least one known pair is required");
    for (const auto& kp : pairs)
    {
        require_same_shape(kp.plain, kp.cipher);
        require_same_shape(kp.plain, pairs.front().plain);
    }
}

/// One representative odd r per distinct offset map on `extent`, restricted to bijective maps
std::vector<std::uint8_t> offset_classes(std::size_t extent)
{
    std::vector<std::uint8_t> reps;
    std::vector<bool> seen(extent, false);
    for (unsigned r = 1; r < 256; r += 2)
    {
        const auto rb = static_cast<std::uint8_t>(r);
        if (!offset_is_bijective(rb, extent))
            continue;
        // the whole map is determined by the offset at index 1
        const std::size_t key = permutation_offset(1, rb, extent);
        if (seen[key])
            continue;
        seen[key] = true;
        reps.push_back(rb);
    }
    return reps;
}

} // namespace

std::uint8_t recover_permutation_param(std::size_t u, const KnownPair& first, const KnownPair& second,
                                       VerifyMode mode, ParamSearchStats* stats)
{
    if (u < 1 || u > 6)
        throw std::out_of_range("permutation parameter index must be in 1..6");
    require_same_shape(first.plain, first.cipher);
    require_same_shape(second.plain, second.cipher);
    require_same_shape(first.plain, second.plain);

    const std::size_t h = first.plain.height(), w = first.plain.width();
    const std::size_t c = (u - 1) / 2;
    const bool row_param = u % 2 == 1;
    const std::size_t extent = row_param ? h : w;

    const std::vector<std::uint8_t> classes = offset_classes(extent);
    if (classes.empty())
        throw NoCandidate("no odd r" + std::to_string(u) + " gives a bijective map on extent " +
                          std::to_string(extent));
    if (stats)
        stats->candidates += classes.size();
    if (classes.size() == 1)
        return classes.front();

    const ZigzagMap zz(h, w);
    const auto d1 = chain_differences(first.cipher.channel(c));
    const auto d2 = chain_differences(second.cipher.channel(c));
    const auto p1 = first.plain.channel(c);
    const auto p2 = second.plain.channel(c);

    // Anchor `index` (1-based along the extent). For a row parameter the anchor is the last
    // column of row `index`, whose source column offset is zero; symmetric for columns.
    // The corner (H, W) is excluded from both scans.
    auto anchor_raster = [&](std::size_t index) { return row_param ? index * w - 1 : (h - 1) * w + (index - 1); };
    auto source_raster = [&](std::size_t index, std::uint8_t r) {
        const std::size_t offset = permutation_offset(index, r, extent);
        return row_param ? offset * w : offset;
    };

    std::vector<std::size_t> passes(classes.size(), 0);
    std::vector<std::size_t> alive_idx(classes.size());
    for (std::size_t i = 0; i < alive_idx.size(); ++i)
        alive_idx[i] = i;

    std::uint64_t evaluations = 0;
    std::size_t anchors = 0;
    for (std::size_t index = 1; index < extent; ++index)
    {
        ++anchors;
        const std::size_t q = zz.from_raster(anchor_raster(index));
        const auto d = static_cast<std::uint8_t>(d1[q] ^ d2[q]);

        std::vector<std::size_t> next;
        next.reserve(alive_idx.size());
        for (std::size_t ci : alive_idx)
        {
            const std::size_t src = source_raster(index, classes[ci]);
            const std::uint8_t a1 = rotate_nibbles(p1[src]);
            const std::uint8_t a2 = rotate_nibbles(p2[src]);
            if (a1 == a2)
            {
                next.push_back(ci);
                continue;
            }
            if (verify_exists(d, a1, a2, evaluations))
            {
                ++passes[ci];
                next.push_back(ci);
            }
        }
        alive_idx = std::move(next);

        if (alive_idx.empty())
            break;
        if (mode == VerifyMode::Default && alive_idx.size() == 1 && passes[alive_idx.front()] >= 3)
            break;
    }

    if (stats)
    {
        stats->evaluations += evaluations;
        stats->anchors_visited += anchors;
    }

    if (alive_idx.empty())
        throw NoCandidate("every candidate for r" + std::to_string(u) + " failed verification");

    const std::size_t best = *std::max_element(alive_idx.begin(), alive_idx.end(),
                                               [&](std::size_t a, std::size_t b) { return passes[a] < passes[b]; });
    if (passes[best] < 3)
        throw InsufficientContrast("fewer than 3 discriminative anchors for r" + std::to_string(u));
    if (alive_idx.size() > 1)
        throw AmbiguousParameter("r" + std::to_string(u) + " has " + std::to_string(alive_idx.size()) +
                                 " surviving candidates");
    return classes[alive_idx.front()];
}

PermutationParams recover_all_permutation_params(const KnownPair& first, const KnownPair& second, VerifyMode mode,
                                                 ParamSearchStats* stats)
{
    std::array<std::uint8_t, 6> r{};
    for (std::size_t u = 1; u <= 6; ++u)
        r[u - 1] = recover_permutation_param(u, first, second, mode, stats);
    return PermutationParams(r);
}

namespace {

/// Known rotated bytes and chain differences of every channel of every pair, in sequence order
struct Observations
{
    std::vector<std::vector<std::uint8_t>> alpha; // rotate_nibbles of the permuted plain byte
    std::vector<std::vector<std::uint8_t>> d;     // cipher chain differences
};

Observations observe(std::span<const KnownPair> pairs, const PermutationParams& r)
{
    const std::size_t h = pairs.front().plain.height(), w = pairs.front().plain.width();
    const ZigzagMap zz(h, w);
    Observations obs;
    for (const auto& kp : pairs)
    {
        const RgbImage permuted = permute(kp.plain, r);
        for (std::size_t c = 0; c < channel_count; ++c)
        {
            std::vector<std::uint8_t> a(permuted.size());
            for (std::size_t p = 0; p < a.size(); ++p)
                a[p] = rotate_nibbles(permuted.at(c, zz.to_raster(p)));
            obs.alpha.push_back(std::move(a));
            obs.d.push_back(chain_differences(kp.cipher.channel(c)));
        }
    }
    return obs;
}

} // namespace

std::vector<CandidateSet> confirm_x_candidates(std::span<const KnownPair> pairs, const PermutationParams& r)
{
    require_pair_shapes(pairs);
    const Observations obs = observe(pairs, r);
    const std::size_t n = pairs.front().plain.size();
    const std::size_t m = obs.d.size();

    std::vector<CandidateSet> sets(n);
    std::vector<Constraint> constraints;
    constraints.reserve(m * (m - 1) / 2);
    for (std::size_t p = 0; p < n; ++p)
    {
        constraints.clear();
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = i + 1; j < m; ++j)
                constraints.push_back(
                    {static_cast<std::uint8_t>(obs.d[i][p] ^ obs.d[j][p]), obs.alpha[i][p], obs.alpha[j][p]});
        sets[p] = candidates(constraints);
        if (sets[p].empty())
            throw EmptyCandidate(p, "known pairs are inconsistent at sequence position " + std::to_string(p));
    }
    return sets;
}

std::vector<std::uint8_t> derive_w_stream(std::span<const KnownPair> pairs, const PermutationParams& r,
                                          std::span<const std::uint8_t> x_choice)
{
    require_pair_shapes(pairs);
    if (x_choice.size() != pairs.front().plain.size())
        throw ShapeError("X choice length differs from the image");
    const Observations obs = observe(pairs, r);

    std::vector<std::uint8_t> w(x_choice.size());
    std::vector<std::uint8_t> votes(obs.d.size());
    for (std::size_t p = 0; p < w.size(); ++p)
    {
        for (std::size_t i = 0; i < votes.size(); ++i)
            votes[i] = static_cast<std::uint8_t>(obs.d[i][p] ^ static_cast<std::uint8_t>(obs.alpha[i][p] + x_choice[p]));
        // majority; ties go to the earliest observation
        std::size_t best = 0, best_count = 0;
        for (std::size_t i = 0; i < votes.size(); ++i)
        {
            const auto count = static_cast<std::size_t>(std::count(votes.begin(), votes.end(), votes[i]));
            if (count > best_count)
            {
                best = i;
                best_count = count;
            }
        }
        w[p] = votes[best];
    }
    return w;
}

KpaResult kpa_attack(std::span<const KnownPair> pairs, std::optional<PermutationParams> known_r, VerifyMode mode)
{
    require_pair_shapes(pairs);
    KpaResult result;
    if (!known_r)
    {
        if (pairs.size() < 2)
            throw InsufficientContrast("permutation recovery needs two known pairs");
        known_r = recover_all_permutation_params(pairs[0], pairs[1], mode, &result.search);
    }

    const auto sets = confirm_x_candidates(pairs, *known_r);
    EquivalentKey& ek = result.key;
    ek.height = pairs.front().plain.height();
    ek.width = pairs.front().plain.width();
    ek.r = known_r;
    ek.x_tilde.resize(sets.size());
    ek.ambiguous.resize(sets.size());
    for (std::size_t p = 0; p < sets.size(); ++p)
    {
        ek.x_tilde[p] = sets[p].least();
        ek.ambiguous[p] = sets[p].size() > 2;
        ++result.set_sizes[sets[p].size()];
    }
    ek.w = derive_w_stream(pairs, *known_r, ek.x_tilde);
    return result;
}

} // namespace mtlmcrack
