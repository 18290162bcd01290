#include "mtlmcrack/mtlm.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "mtlmcrack/error.hpp"

namespace mtlmcrack {

namespace {

bool in_unit_interval(double v)
{
    return v >= 0.0 && v < 1.0;
}

double checked(double v, const char* what)
{
    if (!std::isfinite(v))
        throw ChaosNumericError(std::string("non-finite value while computing ") + what);
    return v;
}

} // namespace

ChaoticState::ChaoticState(double x, double y, double z) : x_(x), y_(y), z_(z)
{
    if (!in_unit_interval(x) || !in_unit_interval(y) || !in_unit_interval(z))
        throw KeyError("initial state coordinates must lie in [0,1)");
}

ControlParams::ControlParams(double k1, double k2, double k3) : k1_(k1), k2_(k2), k3_(k3)
{
    if (!std::isfinite(k1) || !std::isfinite(k2) || !std::isfinite(k3))
        throw KeyError("control parameters must be finite");
    if (std::abs(k1) <= k1_bound)
        throw KeyError("|k1| must exceed 37.7");
    if (std::abs(k2) <= k2_bound)
        throw KeyError("|k2| must exceed 39.7");
    if (std::abs(k3) <= k3_bound)
        throw KeyError("|k3| must exceed 37.2");
}

double frac(double v)
{
    double f = v - std::floor(v);
    // clamp below 1
    if (f >= 1.0)
        f = std::nextafter(1.0, 0.0);
    return f;
}

ChaoticState mtlm_step(const ChaoticState& s, const ControlParams& k)
{
    const double x = s.x(), y = s.y(), z = s.z();

    const double x1 = frac(checked(3.735 * k.k1() * ((1 + x) * (1 + x)) * std::sin(1 / (1 + y * y)), "x"));
    const double y1 = frac(checked(3.536 * k.k2() * x1 * std::sin(x1 * y) * (1 + z * z), "y"));
    const double z1 = frac(checked(3.838 * k.k3() * x1 * (1 + y1 * z), "z"));

    return {x1, y1, z1};
}

std::uint8_t quantize(double v)
{
    const double q = std::floor(256.0 * v);
    if (q < 0.0)
        return 0;
    if (q > 255.0)
        return 255;
    return static_cast<std::uint8_t>(q);
}

Keystream generate_keystream(const ControlParams& k, const ChaoticState& init, std::size_t length)
{
    if (length == 0)
        throw std::invalid_argument("keystream length must be positive");

    Keystream ks;
    ks.x.resize(length);
    ks.y.resize(length);
    ks.z.resize(length);

    ChaoticState s = init;
    for (std::size_t i = 0; i < length; ++i)
    {
        s = mtlm_step(s, k);
        ks.x[i] = quantize(s.x());
        ks.y[i] = quantize(s.y());
        ks.z[i] = quantize(s.z());
    }
    return ks;
}

ByteSeq interleave(const Keystream& ks)
{
    ByteSeq out;
    out.reserve(3 * ks.size());
    for (std::size_t i = 0; i < ks.size(); ++i)
    {
        out.push_back(ks.x[i]);
        out.push_back(ks.y[i]);
        out.push_back(ks.z[i]);
    }
    return out;
}

} // namespace mtlmcrack
