#include "mtlmcrack/cpa.hpp"

#include <algorithm>
#include <map>
#include <string>

#include "mtlmcrack/addxor.hpp"
#include "mtlmcrack/error.hpp"
#include "mtlmcrack/imgio.hpp"

namespace mtlmcrack {

EncryptionOracle::EncryptionOracle(Function fn, std::size_t budget) : fn_(std::move(fn)), budget_(budget) {}

EncryptionOracle EncryptionOracle::from_key(const SecretKey& key, std::size_t budget)
{
    return EncryptionOracle([key](const RgbImage& img) { return encrypt(img, key); }, budget);
}

RgbImage EncryptionOracle::query(const RgbImage& plain)
{
    if (queries_ >= budget_)
        throw QueryBudgetExceeded("oracle budget of " + std::to_string(budget_) + " queries exhausted");
    ++queries_;
    return fn_(plain);
}

RgbImage build_uniform_query(std::size_t height, std::size_t width)
{
    return synth_uniform(height, width, uniform_query_values[0], uniform_query_values[1], uniform_query_values[2]);
}

namespace {

/// Three 0-based indices along an extent of size n
std::array<std::size_t, 3> spread(std::size_t n)
{
    const std::size_t evens = n / 2;
    if (evens >= 3)
    {
        std::array<std::size_t, 3> out{};
        for (std::size_t m = 0; m < 3; ++m)
            out[m] = 2 * (1 + m * evens / 3) - 1; // 1-based even index 2 (1 + floor(m E / 3))
        return out;
    }
    return {0 % n, 1 % n, 2 % n};
}

} // namespace

std::array<PixelPosition, 3> marker_positions(std::size_t height, std::size_t width)
{
    if (height < 2 || width < 2)
        throw ShapeError("marker query needs at least 2 rows and 2 columns");
    const auto rows = spread(height);
    const auto cols = spread(width);
    std::array<PixelPosition, 3> pos{};
    for (std::size_t m = 0; m < 3; ++m)
        pos[m] = {rows[m], cols[m]};
    if (pos[2] == pos[0])
        pos[2].col = (pos[0].col + 1) % width;
    return pos;
}

RgbImage build_marker_query(std::size_t height, std::size_t width)
{
    RgbImage img = build_uniform_query(height, width);
    const auto pos = marker_positions(height, width);
    for (std::size_t c = 0; c < channel_count; ++c)
        for (std::size_t m = 0; m < 3; ++m)
            img.at(c, pos[m].row * width + pos[m].col) = marker_values[m];
    return img;
}

namespace {

/// Solution sets of core_map(x, alpha, beta) = y for every y, indexed by y
std::array<CandidateSet, 256> solution_table(std::uint8_t alpha, std::uint8_t beta)
{
    std::array<CandidateSet, 256> table{};
    for (unsigned x = 0; x < 256; ++x)
        table[core_map(static_cast<std::uint8_t>(x), alpha, beta)].insert(static_cast<std::uint8_t>(x));
    return table;
}

std::array<std::vector<std::uint8_t>, 3> all_chain_differences(const RgbImage& cipher)
{
    return {chain_differences(cipher.channel(0)), chain_differences(cipher.channel(1)),
            chain_differences(cipher.channel(2))};
}

} // namespace

std::vector<std::uint8_t> recover_x_stream(const RgbImage& cipher)
{
    const auto [v0, v1, v2] = uniform_query_values;
    const auto rg = solution_table(v0, v1);
    const auto gb = solution_table(v1, v2);
    const auto d = all_chain_differences(cipher);

    std::vector<std::uint8_t> x(cipher.size());
    for (std::size_t p = 0; p < x.size(); ++p)
    {
        CandidateSet s = rg[d[0][p] ^ d[1][p]];
        s &= gb[d[1][p] ^ d[2][p]];
        if (s.empty())
            throw EmptyCandidate(p, "no X value explains the uniform-query ciphertext at position " +
                                        std::to_string(p));
        x[p] = s.canonical();
    }
    return x;
}

std::vector<std::uint8_t> recover_w_stream(const RgbImage& cipher, std::span<const std::uint8_t> x_tilde)
{
    if (x_tilde.size() != cipher.size())
        throw ShapeError("X stream length differs from the ciphertext");
    const auto d = all_chain_differences(cipher);

    std::vector<std::uint8_t> w(cipher.size());
    for (std::size_t p = 0; p < w.size(); ++p)
    {
        std::array<std::uint8_t, 3> votes{};
        for (std::size_t c = 0; c < channel_count; ++c)
            votes[c] = static_cast<std::uint8_t>(d[c][p] ^ static_cast<std::uint8_t>(uniform_query_values[c] + x_tilde[p]));
        if (votes[0] != votes[1] || votes[1] != votes[2])
            throw CrossCheckMismatch("channels disagree on Y xor Z at position " + std::to_string(p));
        w[p] = votes[0];
    }
    return w;
}

namespace {

struct MarkerObservation
{
    PixelPosition plain;
    PixelPosition landed;
};

/// Pixels whose value is unique within the plain channel, and where that value lands
std::vector<MarkerObservation> locate_markers(const RgbImage& plain, const RgbImage& permuted, std::size_t c)
{
    const std::size_t w = plain.width();
    std::array<std::size_t, 256> plain_count{}, permuted_count{};
    std::array<std::size_t, 256> permuted_at{};
    for (std::size_t k = 0; k < plain.size(); ++k)
    {
        ++plain_count[plain.at(c, k)];
        ++permuted_count[permuted.at(c, k)];
        permuted_at[permuted.at(c, k)] = k;
    }

    std::vector<MarkerObservation> obs;
    for (std::size_t k = 0; k < plain.size(); ++k)
    {
        const std::uint8_t v = plain.at(c, k);
        if (plain_count[v] != 1)
            continue;
        if (permuted_count[v] != 1)
            throw MarkerNotFound("marker value " + std::to_string(v) + " in channel " + std::to_string(c) +
                                 " does not appear exactly once after stripping diffusion");
        const std::size_t landed = permuted_at[v];
        obs.push_back({{k / w, k % w}, {landed / w, landed % w}});
    }
    if (obs.empty())
        throw MarkerNotFound("channel " + std::to_string(c) + " of the marker image holds no unique pixel value");
    return obs;
}

/// Odd r in [1,255] with 31 * landed * r = plain (mod extent) for every observation,
/// reduced to one representative if all survivors act identically on the extent
std::uint8_t solve_offset_param(const std::vector<std::pair<std::size_t, std::size_t>>& landed_to_plain,
                                std::size_t extent, std::size_t u)
{
    std::vector<std::uint8_t> survivors;
    for (unsigned r = 1; r < 256; r += 2)
    {
        const auto rb = static_cast<std::uint8_t>(r);
        if (!offset_is_bijective(rb, extent))
            continue;
        const bool ok = std::all_of(landed_to_plain.begin(), landed_to_plain.end(), [&](const auto& lp) {
            return permutation_offset(lp.first + 1, rb, extent) == lp.second;
        });
        if (ok)
            survivors.push_back(rb);
    }
    if (survivors.empty())
        throw NoCandidate("no odd r" + std::to_string(u) + " explains the marker positions");

    for (std::size_t s = 1; s < survivors.size(); ++s)
        for (std::size_t i = 1; i <= extent; ++i)
            if (permutation_offset(i, survivors[s], extent) != permutation_offset(i, survivors[0], extent))
                throw AmbiguousParameter("r" + std::to_string(u) + " has " + std::to_string(survivors.size()) +
                                         " inequivalent candidates");
    return survivors.front();
}

} // namespace

PermutationParams recover_permutation_params(const RgbImage& marker_cipher, std::span<const std::uint8_t> x_tilde,
                                             std::span<const std::uint8_t> w, const RgbImage& marker_plain)
{
    require_same_shape(marker_cipher, marker_plain);
    EquivalentKey ek;
    ek.height = marker_cipher.height();
    ek.width = marker_cipher.width();
    ek.x_tilde.assign(x_tilde.begin(), x_tilde.end());
    ek.w.assign(w.begin(), w.end());
    const RgbImage permuted = strip_diffusion(marker_cipher, ek);

    std::array<std::uint8_t, 6> r{};
    for (std::size_t c = 0; c < channel_count; ++c)
    {
        const auto obs = locate_markers(marker_plain, permuted, c);
        std::vector<std::pair<std::size_t, std::size_t>> rows, cols;
        for (const auto& o : obs)
        {
            rows.emplace_back(o.landed.row, o.plain.row);
            cols.emplace_back(o.landed.col, o.plain.col);
        }
        r[2 * c] = solve_offset_param(rows, ek.height, 2 * c + 1);
        r[2 * c + 1] = solve_offset_param(cols, ek.width, 2 * c + 2);
    }
    return PermutationParams(r);
}

EquivalentKey cpa_from_pairs(const RgbImage& uniform_cipher, const RgbImage& marker_plain,
                             const RgbImage& marker_cipher)
{
    require_same_shape(uniform_cipher, marker_cipher);
    EquivalentKey ek;
    ek.height = uniform_cipher.height();
    ek.width = uniform_cipher.width();
    ek.x_tilde = recover_x_stream(uniform_cipher);
    ek.w = recover_w_stream(uniform_cipher, ek.x_tilde);
    ek.ambiguous.assign(ek.x_tilde.size(), false);
    ek.r = recover_permutation_params(marker_cipher, ek.x_tilde, ek.w, marker_plain);
    return ek;
}

EquivalentKey cpa_attack(EncryptionOracle& oracle, std::size_t height, std::size_t width)
{
    const RgbImage uniform_cipher = oracle.query(build_uniform_query(height, width));
    const RgbImage marker_plain = build_marker_query(height, width);
    const RgbImage marker_cipher = oracle.query(marker_plain);
    return cpa_from_pairs(uniform_cipher, marker_plain, marker_cipher);
}

std::array<std::uint8_t, 3> baseline_query_values(std::size_t q)
{
    std::array<std::uint8_t, 3> v{};
    for (std::size_t c = 0; c < channel_count; ++c)
    {
        const std::size_t value = 3 * q + c;
        v[c] = value < 256 ? static_cast<std::uint8_t>(value) : 0;
    }
    return v;
}

EquivalentKey zhang_baseline_attack(EncryptionOracle& oracle, std::size_t height, std::size_t width)
{
    const std::size_t n = height * width;

    // Every channel of every packed image is one observation (plain value, chain differences)
    struct Observation
    {
        std::uint8_t alpha;
        std::vector<std::uint8_t> d;
    };
    std::vector<Observation> obs;
    std::vector<bool> seen(256, false);
    for (std::size_t q = 0; q < baseline_value_queries; ++q)
    {
        const auto v = baseline_query_values(q);
        const RgbImage cipher = oracle.query(synth_uniform(height, width, v[0], v[1], v[2]));
        for (std::size_t c = 0; c < channel_count; ++c)
        {
            if (seen[v[c]])
                continue;
            seen[v[c]] = true;
            obs.push_back({rotate_nibbles(v[c]), chain_differences(cipher.channel(c))});
        }
    }

    // The value-0 observation is the reference; each other value gives
    // d_ref ^ d_v = (0 + X) ^ (rot(v) + X), the beta = 0 form of the core map
    const Observation& ref = obs.front();
    EquivalentKey ek;
    ek.height = height;
    ek.width = width;
    ek.x_tilde.resize(n);
    ek.w.resize(n);
    ek.ambiguous.assign(n, false);

    std::vector<Constraint> constraints(obs.size() - 1);
    for (std::size_t p = 0; p < n; ++p)
    {
        for (std::size_t i = 1; i < obs.size(); ++i)
            constraints[i - 1] = {static_cast<std::uint8_t>(ref.d[p] ^ obs[i].d[p]), ref.alpha, obs[i].alpha};
        const CandidateSet s = candidates(constraints);
        if (s.empty())
            throw EmptyCandidate(p, "baseline constraints are inconsistent at position " + std::to_string(p));
        if (s.size() != 2)
            throw AmbiguousParameter("baseline left " + std::to_string(s.size()) + " X candidates at position " +
                                     std::to_string(p));
        ek.x_tilde[p] = s.canonical();
        ek.w[p] = static_cast<std::uint8_t>(ref.d[p] ^ static_cast<std::uint8_t>(ref.alpha + ek.x_tilde[p]));
    }

    const RgbImage marker_plain = build_marker_query(height, width);
    const RgbImage marker_cipher = oracle.query(marker_plain);
    ek.r = recover_permutation_params(marker_cipher, ek.x_tilde, ek.w, marker_plain);
    return ek;
}

} // namespace mtlmcrack
