#include "mtlmcrack/randomness.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <random>
#include <sstream>
#include <stdexcept>

#include <boost/math/special_functions/gamma.hpp>
#include <sodium.h>

#include "mtlmcrack/cipher.hpp"
#include "mtlmcrack/error.hpp"

namespace mtlmcrack {

namespace {

constexpr std::size_t minimum_bits = 100;

void require_length(const BitSequence& bits, std::size_t needed, const char* test)
{
    if (bits.size() < std::max(needed, minimum_bits))
        throw TooShort(std::string(test) + " needs at least " + std::to_string(std::max(needed, minimum_bits)) +
                       " bits, got " + std::to_string(bits.size()));
}

TestReport make_report(std::string name, double p)
{
    p = std::clamp(p, 0.0, 1.0);
    return {std::move(name), p, p >= significance_level};
}

double normal_cdf(double x)
{
    return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

/// Overlapping m-bit pattern counts with wrap-around
std::vector<std::size_t> pattern_counts(const BitSequence& bits, std::size_t m)
{
    std::vector<std::size_t> counts(std::size_t{1} << m, 0);
    if (m == 0)
    {
        counts[0] = bits.size();
        return counts;
    }
    const std::size_t n = bits.size();
    const std::size_t mask = (std::size_t{1} << m) - 1;
    std::size_t window = 0;
    for (std::size_t i = 0; i < m - 1; ++i)
        window = (window << 1) | bits[i];
    for (std::size_t i = 0; i < n; ++i)
    {
        window = ((window << 1) | bits[(i + m - 1) % n]) & mask;
        ++counts[window];
    }
    return counts;
}

} // namespace

BitSequence bytes_to_bits(std::span<const std::uint8_t> bytes)
{
    BitSequence bits;
    bits.reserve(8 * bytes.size());
    for (std::uint8_t b : bytes)
        for (int k = 7; k >= 0; --k)
            bits.push_back(static_cast<std::uint8_t>((b >> k) & 1));
    return bits;
}

double igamc(double a, double x)
{
    if (x <= 0.0)
        return 1.0;
    return boost::math::gamma_q(a, x);
}

TestReport frequency_test(const BitSequence& bits)
{
    require_length(bits, 0, "frequency test");
    long long sum = 0;
    for (auto b : bits)
        sum += b ? 1 : -1;
    const double s = std::abs(static_cast<double>(sum)) / std::sqrt(static_cast<double>(bits.size()));
    return make_report("Frequency", std::erfc(s / std::sqrt(2.0)));
}

TestReport block_frequency_test(const BitSequence& bits, std::size_t block)
{
    if (block == 0)
        throw std::invalid_argument("block length must be positive");
    require_length(bits, block, "block frequency test");
    const std::size_t blocks = bits.size() / block;
    double chi2 = 0.0;
    for (std::size_t i = 0; i < blocks; ++i)
    {
        std::size_t ones = 0;
        for (std::size_t j = 0; j < block; ++j)
            ones += bits[i * block + j];
        const double pi = static_cast<double>(ones) / static_cast<double>(block) - 0.5;
        chi2 += pi * pi;
    }
    chi2 *= 4.0 * static_cast<double>(block);
    return make_report("Block Frequency (m = " + std::to_string(block) + ")",
                       igamc(static_cast<double>(blocks) / 2.0, chi2 / 2.0));
}

TestReport runs_test(const BitSequence& bits)
{
    require_length(bits, 0, "runs test");
    const double n = static_cast<double>(bits.size());
    const double pi = static_cast<double>(std::count(bits.begin(), bits.end(), 1)) / n;
    // frequency prerequisite
    if (std::abs(pi - 0.5) >= 2.0 / std::sqrt(n))
        return make_report("Runs", 0.0);

    double runs = 1.0;
    for (std::size_t k = 0; k + 1 < bits.size(); ++k)
        runs += bits[k] != bits[k + 1];
    const double expected = 2.0 * n * pi * (1.0 - pi);
    const double p = std::erfc(std::abs(runs - expected) / (2.0 * std::sqrt(2.0 * n) * pi * (1.0 - pi)));
    return make_report("Runs", p);
}

TestReport cumulative_sums_test(const BitSequence& bits, CusumMode mode)
{
    require_length(bits, 0, "cumulative sums test");
    const long long n = static_cast<long long>(bits.size());

    long long s = 0, z = 0;
    for (long long i = 0; i < n; ++i)
    {
        const auto b = bits[static_cast<std::size_t>(mode == CusumMode::Forward ? i : n - 1 - i)];
        s += b ? 1 : -1;
        z = std::max(z, std::abs(s));
    }

    const std::string name = mode == CusumMode::Forward ? "Cumulative Sums (Forward)" : "Cumulative Sums (Reverse)";
    if (z == 0)
        return make_report(name, 1.0);

    const double sqrt_n = std::sqrt(static_cast<double>(n));
    const double zd = static_cast<double>(z);
    double sum1 = 0.0, sum2 = 0.0;
    // integer bounds truncate toward zero, as in the reference implementation
    for (long long k = (-n / z + 1) / 4; k <= (n / z - 1) / 4; ++k)
        sum1 += normal_cdf((4.0 * k + 1.0) * zd / sqrt_n) - normal_cdf((4.0 * k - 1.0) * zd / sqrt_n);
    for (long long k = (-n / z - 3) / 4; k <= (n / z - 1) / 4; ++k)
        sum2 += normal_cdf((4.0 * k + 3.0) * zd / sqrt_n) - normal_cdf((4.0 * k + 1.0) * zd / sqrt_n);
    return make_report(name, 1.0 - sum1 + sum2);
}

TestReport approximate_entropy_test(const BitSequence& bits, std::size_t m)
{
    if (m == 0 || m > 24)
        throw std::invalid_argument("approximate entropy block length must be in 1..24");
    require_length(bits, (std::size_t{1} << m) * 10, "approximate entropy test");
    const double n = static_cast<double>(bits.size());

    auto phi = [&](std::size_t len) {
        double sum = 0.0;
        for (std::size_t c : pattern_counts(bits, len))
            if (c)
            {
                const double pi = static_cast<double>(c) / n;
                sum += pi * std::log(pi);
            }
        return sum;
    };

    const double apen = phi(m) - phi(m + 1);
    const double chi2 = 2.0 * n * (std::log(2.0) - apen);
    return make_report("Approximate Entropy (m = " + std::to_string(m) + ")",
                       igamc(std::ldexp(1.0, static_cast<int>(m) - 1), chi2 / 2.0));
}

std::pair<double, double> serial_p_values(const BitSequence& bits, std::size_t m)
{
    if (m < 3 || m > 24)
        throw std::invalid_argument("serial block length must be in 3..24");
    require_length(bits, std::size_t{1} << m, "serial test");
    const double n = static_cast<double>(bits.size());

    auto psi2 = [&](std::size_t len) {
        double sum = 0.0;
        for (std::size_t c : pattern_counts(bits, len))
            sum += static_cast<double>(c) * static_cast<double>(c);
        return std::ldexp(sum, static_cast<int>(len)) / n - n;
    };

    const double pm = psi2(m), pm1 = psi2(m - 1), pm2 = psi2(m - 2);
    const double del1 = pm - pm1;
    const double del2 = pm - 2.0 * pm1 + pm2;
    const double p1 = igamc(std::ldexp(1.0, static_cast<int>(m) - 2), del1 / 2.0);
    const double p2 = igamc(std::ldexp(1.0, static_cast<int>(m) - 3), del2 / 2.0);
    return {std::clamp(p1, 0.0, 1.0), std::clamp(p2, 0.0, 1.0)};
}

TestReport serial_test(const BitSequence& bits, std::size_t m)
{
    const auto [p1, p2] = serial_p_values(bits, m);
    return make_report("Serial (m = " + std::to_string(m) + ")", std::min(p1, p2));
}

std::size_t iterations_for_bits(StreamLayout layout, std::size_t bits)
{
    const std::size_t per_iteration = layout == StreamLayout::InterleavedXyz ? 24 : 8;
    return (bits + per_iteration - 1) / per_iteration;
}

BitSequence keystream_bits(const Keystream& ks, StreamLayout layout, std::size_t bits)
{
    BitSequence out = layout == StreamLayout::InterleavedXyz ? bytes_to_bits(interleave(ks)) : bytes_to_bits(ks.x);
    if (out.size() < bits)
        throw TooShort("keystream yields " + std::to_string(out.size()) + " bits, " + std::to_string(bits) +
                       " requested");
    out.resize(bits);
    return out;
}

std::vector<std::uint8_t> control_stream(std::uint64_t seed, std::size_t bytes)
{
    if (sodium_init() < 0)
        throw std::runtime_error("libsodium initialisation failed");
    unsigned char key[randombytes_SEEDBYTES] = {};
    for (std::size_t i = 0; i < 8; ++i)
        key[i] = static_cast<unsigned char>(seed >> (8 * i));
    std::vector<std::uint8_t> out(bytes);
    randombytes_buf_deterministic(out.data(), out.size(), key);
    return out;
}

std::size_t BatteryReport::passes_for(const std::string& test) const
{
    for (std::size_t i = 0; i < tests.size(); ++i)
        if (tests[i] == test)
            return passes[i];
    throw std::out_of_range("no test named " + test);
}

std::string BatteryReport::table() const
{
    std::size_t width = 12;
    for (const auto& t : tests)
        width = std::max(width, t.size());
    std::ostringstream os;
    os << std::left << std::setw(static_cast<int>(width)) << "Name of Test" << " | Number of Passed Sequences\n";
    os << std::string(width, '-') << "-+-" << std::string(26, '-') << '\n';
    for (std::size_t i = 0; i < tests.size(); ++i)
        os << std::left << std::setw(static_cast<int>(width)) << tests[i] << " | " << passes[i] << " / " << sequences
           << '\n';
    return os.str();
}

BatteryReport battery(std::span<const BitSequence> sequences)
{
    BatteryReport report;
    report.sequences = sequences.size();
    for (const auto& bits : sequences)
    {
        const TestReport results[] = {
            approximate_entropy_test(bits, 10),
            block_frequency_test(bits, 128),
            cumulative_sums_test(bits, CusumMode::Forward),
            cumulative_sums_test(bits, CusumMode::Reverse),
            frequency_test(bits),
            runs_test(bits),
            serial_test(bits, 16),
        };
        if (report.tests.empty())
        {
            for (const auto& r : results)
                report.tests.push_back(r.name);
            report.passes.assign(report.tests.size(), 0);
        }
        for (std::size_t i = 0; i < report.tests.size(); ++i)
            report.passes[i] += results[i].passed;
    }
    return report;
}

std::vector<BitSequence> mtlm_sequences(std::size_t count, std::uint64_t seed, StreamLayout layout, std::size_t bits)
{
    std::mt19937_64 rng(seed);
    std::vector<BitSequence> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i)
    {
        const SecretKey key = random_key(rng, 1, 1);
        const Keystream ks = generate_keystream(key.k, key.init, iterations_for_bits(layout, bits));
        out.push_back(keystream_bits(ks, layout, bits));
    }
    return out;
}

std::vector<BitSequence> control_sequences(std::size_t count, std::uint64_t seed, std::size_t bits)
{
    std::vector<BitSequence> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i)
    {
        BitSequence b = bytes_to_bits(control_stream(seed + i, (bits + 7) / 8));
        b.resize(bits);
        out.push_back(std::move(b));
    }
    return out;
}

} // namespace mtlmcrack
