#include "mtlmcrack/addxor.hpp"

#include <random>
#include <stdexcept>

namespace mtlmcrack {

CandidateSet CandidateSet::full()
{
    CandidateSet s;
    s.bits_.set();
    return s;
}

CandidateSet CandidateSet::of(std::initializer_list<std::uint8_t> values)
{
    CandidateSet s;
    for (auto v : values)
        s.insert(v);
    return s;
}

std::uint8_t CandidateSet::least() const
{
    for (unsigned x = 0; x < 256; ++x)
        if (bits_.test(x))
            return static_cast<std::uint8_t>(x);
    throw std::logic_error("least() of an empty candidate set");
}

std::vector<std::uint8_t> CandidateSet::members() const
{
    std::vector<std::uint8_t> out;
    out.reserve(size());
    for (unsigned x = 0; x < 256; ++x)
        if (bits_.test(x))
            out.push_back(static_cast<std::uint8_t>(x));
    return out;
}

bool CandidateSet::closed_under_msb() const
{
    for (unsigned x = 0; x < 128; ++x)
        if (bits_.test(x) != bits_.test(x ^ 128))
            return false;
    return true;
}

bool CandidateSet::bit_confirmed(unsigned bit) const
{
    bool seen0 = false, seen1 = false;
    for (unsigned x = 0; x < 256; ++x)
        if (bits_.test(x))
            ((x >> bit) & 1 ? seen1 : seen0) = true;
    return !(seen0 && seen1);
}

CandidateSet candidates(const Constraint& c)
{
    CandidateSet s;
    for (unsigned x = 0; x < 256; ++x)
        if (core_map(static_cast<std::uint8_t>(x), c.alpha, c.beta) == c.y)
            s.insert(static_cast<std::uint8_t>(x));
    return s;
}

void refine(CandidateSet& set, const Constraint& c)
{
    for (unsigned x = 0; x < 256; ++x)
        if (set.contains(static_cast<std::uint8_t>(x)) && core_map(static_cast<std::uint8_t>(x), c.alpha, c.beta) != c.y)
            set.erase(static_cast<std::uint8_t>(x));
}

CandidateSet candidates(std::span<const Constraint> constraints)
{
    if (constraints.empty())
        return CandidateSet::full();
    CandidateSet s = candidates(constraints.front());
    for (std::size_t i = 1; i < constraints.size() && !s.empty(); ++i)
        refine(s, constraints[i]);
    return s;
}

bool verify_exists(std::uint8_t y, std::uint8_t alpha, std::uint8_t beta, std::uint64_t& evaluations)
{
    for (unsigned x = 0; x < 128; ++x)
    {
        ++evaluations;
        if (core_map(static_cast<std::uint8_t>(x), alpha, beta) == y)
            return true;
    }
    return false;
}

bool verify_exists(std::uint8_t y, std::uint8_t alpha, std::uint8_t beta)
{
    std::uint64_t unused = 0;
    return verify_exists(y, alpha, beta, unused);
}

double pass_probability(std::uint8_t y)
{
    std::size_t passing = 0;
    for (unsigned a = 0; a < 256; ++a)
        for (unsigned b = 0; b < 256; ++b)
            if (verify_exists(y, static_cast<std::uint8_t>(a), static_cast<std::uint8_t>(b)))
                ++passing;
    return static_cast<double>(passing) / 65536.0;
}

std::array<double, 256> pass_probability_curve()
{
    std::array<std::size_t, 256> passing{};
    for (unsigned a = 0; a < 256; ++a)
        for (unsigned b = 0; b < 256; ++b)
        {
            std::bitset<256> reachable;
            for (unsigned x = 0; x < 128; ++x)
                reachable.set(core_map(static_cast<std::uint8_t>(x), static_cast<std::uint8_t>(a),
                                       static_cast<std::uint8_t>(b)));
            for (unsigned y = 0; y < 256; ++y)
                passing[y] += reachable.test(y);
        }
    std::array<double, 256> curve{};
    for (unsigned y = 0; y < 256; ++y)
        curve[y] = static_cast<double>(passing[y]) / 65536.0;
    return curve;
}

double bit_confirm_probability(unsigned bit, std::size_t trials, std::uint64_t seed)
{
    if (bit > 7)
        throw std::out_of_range("bit index must be in 0..7");
    if (trials == 0)
        throw std::invalid_argument("trials must be positive");

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> byte(0, 255);
    std::size_t confirmed = 0;
    for (std::size_t t = 0; t < trials; ++t)
    {
        const auto x = static_cast<std::uint8_t>(byte(rng));
        const auto a = static_cast<std::uint8_t>(byte(rng));
        const auto b = static_cast<std::uint8_t>(byte(rng));
        if (candidates(Constraint{core_map(x, a, b), a, b}).bit_confirmed(bit))
            ++confirmed;
    }
    return static_cast<double>(confirmed) / static_cast<double>(trials);
}

double bit_confirm_probability_exact(unsigned bit)
{
    if (bit > 7)
        throw std::out_of_range("bit index must be in 0..7");

    // For fixed (alpha, beta), every x mapping to y shares the candidate set of y
    std::uint64_t confirmed = 0;
    for (unsigned a = 0; a < 256; ++a)
        for (unsigned b = 0; b < 256; ++b)
        {
            std::array<unsigned, 256> and_mask, or_mask, count{};
            and_mask.fill(0xFF);
            or_mask.fill(0);
            for (unsigned x = 0; x < 256; ++x)
            {
                const auto y = core_map(static_cast<std::uint8_t>(x), static_cast<std::uint8_t>(a),
                                        static_cast<std::uint8_t>(b));
                and_mask[y] &= x;
                or_mask[y] |= x;
                ++count[y];
            }
            for (unsigned y = 0; y < 256; ++y)
                if (count[y] && ((and_mask[y] ^ or_mask[y]) >> bit & 1) == 0)
                    confirmed += count[y];
        }
    return static_cast<double>(confirmed) / 16777216.0;
}

} // namespace mtlmcrack
