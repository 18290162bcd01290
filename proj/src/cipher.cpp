#include "mtlmcrack/cipher.hpp"

#include <numeric>
#include <stdexcept>
#include <string>

#include "mtlmcrack/error.hpp"

namespace mtlmcrack {

PermutationParams::PermutationParams(const std::array<std::uint8_t, 6>& r) : r_(r)
{
    for (std::size_t u = 0; u < r.size(); ++u)
        if (r[u] % 2 == 0)
            throw KeyError("r" + std::to_string(u + 1) + " = " + std::to_string(r[u]) + " is not odd");
}

bool offset_is_bijective(std::uint8_t r, std::size_t extent)
{
    return std::gcd(31 * static_cast<std::size_t>(r), extent) == 1;
}

bool permutation_is_bijective(const PermutationParams& r, std::size_t height, std::size_t width)
{
    for (std::size_t c = 0; c < channel_count; ++c)
        if (!offset_is_bijective(r.row_param(c), height) || !offset_is_bijective(r.col_param(c), width))
            return false;
    return true;
}

void require_bijective(const PermutationParams& r, std::size_t height, std::size_t width)
{
    for (std::size_t u = 1; u <= 6; ++u)
    {
        const bool row = u % 2 == 1;
        const std::size_t extent = row ? height : width;
        if (!offset_is_bijective(r.r(u), extent))
            throw KeyDimensionIncompatible("gcd(31 * r" + std::to_string(u) + ", " + (row ? "H" : "W") + " = " +
                                           std::to_string(extent) + ") != 1 for r" + std::to_string(u) + " = " +
                                           std::to_string(r.r(u)));
    }
}

std::size_t permutation_source(std::size_t out, std::uint8_t row_r, std::uint8_t col_r, std::size_t height,
                               std::size_t width)
{
    const std::size_t i = out / width + 1;
    const std::size_t j = out % width + 1;
    return permutation_offset(i, row_r, height) * width + permutation_offset(j, col_r, width);
}

ZigzagMap::ZigzagMap(std::size_t height, std::size_t width) : height_(height), width_(width)
{
    if (height == 0 || width == 0)
        throw ShapeError("zigzag dimensions must be positive");

    const std::size_t n = height * width;
    to_raster_.reserve(n);
    // 1-based diagonal s = i + j; up-right on even s, down-left on odd s
    for (std::size_t s = 2; s <= height + width; ++s)
    {
        const std::size_t row_lo = s > width ? s - width : 1;
        const std::size_t row_hi = std::min(height, s - 1);
        if (s % 2 == 0)
            for (std::size_t i = row_hi + 1; i-- > row_lo;)
                to_raster_.push_back((i - 1) * width + (s - i - 1));
        else
            for (std::size_t i = row_lo; i <= row_hi; ++i)
                to_raster_.push_back((i - 1) * width + (s - i - 1));
    }

    from_raster_.assign(n, n);
    for (std::size_t p = 0; p < n; ++p)
    {
        const std::size_t k = to_raster_[p];
        if (k >= n || from_raster_[k] != n)
            throw std::logic_error("zigzag scan is not a bijection");
        from_raster_[k] = p;
    }
    if (to_raster_.size() != n)
        throw std::logic_error("zigzag scan is not a bijection");
}

ZigzagMap build_zigzag(std::size_t height, std::size_t width)
{
    return ZigzagMap(height, width);
}

RgbImage permute(const RgbImage& img, const PermutationParams& r)
{
    const std::size_t h = img.height(), w = img.width();
    require_bijective(r, h, w);

    RgbImage out(h, w);
    for (std::size_t c = 0; c < channel_count; ++c)
    {
        auto src = img.channel(c);
        auto dst = out.channel(c);
        for (std::size_t k = 0; k < img.size(); ++k)
            dst[k] = src[permutation_source(k, r.row_param(c), r.col_param(c), h, w)];
    }
    return out;
}

RgbImage inverse_permute(const RgbImage& img, const PermutationParams& r)
{
    const std::size_t h = img.height(), w = img.width();
    require_bijective(r, h, w);

    RgbImage out(h, w);
    for (std::size_t c = 0; c < channel_count; ++c)
    {
        auto src = img.channel(c);
        auto dst = out.channel(c);
        for (std::size_t k = 0; k < img.size(); ++k)
            dst[permutation_source(k, r.row_param(c), r.col_param(c), h, w)] = src[k];
    }
    return out;
}

namespace {

void require_length(const RgbImage& img, std::span<const std::uint8_t> s, const char* name)
{
    if (s.size() != img.size())
        throw ShapeError(std::string("keystream ") + name + " has length " + std::to_string(s.size()) +
                         ", image has " + std::to_string(img.size()) + " pixels");
}

void require_zigzag(const RgbImage& img, const ZigzagMap& zz)
{
    if (zz.height() != img.height() || zz.width() != img.width())
        throw ShapeError("zigzag map dimensions differ from the image");
}

} // namespace

RgbImage nonlinear_diffuse(const RgbImage& img, std::span<const std::uint8_t> x, std::span<const std::uint8_t> y)
{
    require_length(img, x, "X");
    require_length(img, y, "Y");
    RgbImage out = img;
    for (std::size_t c = 0; c < channel_count; ++c)
    {
        auto ch = out.channel(c);
        for (std::size_t i = 0; i < ch.size(); ++i)
            ch[i] = diffuse_byte(ch[i], x[i], y[i]);
    }
    return out;
}

RgbImage nonlinear_undiffuse(const RgbImage& img, std::span<const std::uint8_t> x, std::span<const std::uint8_t> y)
{
    require_length(img, x, "X");
    require_length(img, y, "Y");
    RgbImage out = img;
    for (std::size_t c = 0; c < channel_count; ++c)
    {
        auto ch = out.channel(c);
        for (std::size_t i = 0; i < ch.size(); ++i)
            ch[i] = undiffuse_byte(ch[i], x[i], y[i]);
    }
    return out;
}

RgbImage zigzag_diffuse(const RgbImage& img, std::span<const std::uint8_t> z, const ZigzagMap& zz)
{
    require_length(img, z, "Z");
    require_zigzag(img, zz);
    RgbImage out(img.height(), img.width());
    for (std::size_t c = 0; c < channel_count; ++c)
    {
        auto src = img.channel(c);
        auto dst = out.channel(c);
        std::uint8_t prev = 0;
        for (std::size_t p = 0; p < dst.size(); ++p)
        {
            prev = static_cast<std::uint8_t>(src[zz.to_raster(p)] ^ prev ^ z[p]);
            dst[p] = prev;
        }
    }
    return out;
}

RgbImage zigzag_undiffuse(const RgbImage& img, std::span<const std::uint8_t> z, const ZigzagMap& zz)
{
    require_length(img, z, "Z");
    require_zigzag(img, zz);
    RgbImage out(img.height(), img.width());
    for (std::size_t c = 0; c < channel_count; ++c)
    {
        auto src = img.channel(c);
        auto dst = out.channel(c);
        std::uint8_t prev = 0;
        for (std::size_t p = 0; p < src.size(); ++p)
        {
            dst[zz.to_raster(p)] = static_cast<std::uint8_t>(src[p] ^ prev ^ z[p]);
            prev = src[p];
        }
    }
    return out;
}

std::vector<std::uint8_t> chain_differences(std::span<const std::uint8_t> cipher_channel)
{
    std::vector<std::uint8_t> d(cipher_channel.size());
    std::uint8_t prev = 0;
    for (std::size_t p = 0; p < d.size(); ++p)
    {
        d[p] = static_cast<std::uint8_t>(cipher_channel[p] ^ prev);
        prev = cipher_channel[p];
    }
    return d;
}

RgbImage encrypt(const RgbImage& img, const SecretKey& key)
{
    require_bijective(key.r, img.height(), img.width());
    const Keystream ks = generate_keystream(key.k, key.init, img.size());
    const ZigzagMap zz(img.height(), img.width());
    return zigzag_diffuse(nonlinear_diffuse(permute(img, key.r), ks.x, ks.y), ks.z, zz);
}

RgbImage decrypt(const RgbImage& img, const SecretKey& key)
{
    require_bijective(key.r, img.height(), img.width());
    const Keystream ks = generate_keystream(key.k, key.init, img.size());
    const ZigzagMap zz(img.height(), img.width());
    return inverse_permute(nonlinear_undiffuse(zigzag_undiffuse(img, ks.z, zz), ks.x, ks.y), key.r);
}

SecretKey random_key(std::mt19937_64& rng, std::size_t height, std::size_t width)
{
    std::uniform_int_distribution<int> half(0, 127);
    std::array<std::uint8_t, 6> r{};
    for (std::size_t u = 0; u < 6; ++u)
    {
        const std::size_t extent = u % 2 == 0 ? height : width;
        std::uint8_t v;
        int attempts = 0;
        do
        {
            v = static_cast<std::uint8_t>(2 * half(rng) + 1);
            if (++attempts > 10000)
                throw KeyDimensionIncompatible("no odd r in [1,255] is coprime to " + std::to_string(extent) +
                                               " after 31x scaling");
        } while (!offset_is_bijective(v, extent));
        r[u] = v;
    }

    std::uniform_real_distribution<double> over(0.0, 20.0);
    const double k1 = ControlParams::k1_bound + 1e-6 + over(rng);
    const double k2 = ControlParams::k2_bound + 1e-6 + over(rng);
    const double k3 = ControlParams::k3_bound + 1e-6 + over(rng);

    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double x0 = unit(rng), y0 = unit(rng), z0 = unit(rng);

    return {PermutationParams(r), ControlParams(k1, k2, k3), ChaoticState(x0, y0, z0)};
}

SecretKey reference_key()
{
    return {PermutationParams({123, 57, 67, 89, 253, 221}), ControlParams(38.583, 41.135, 39.846),
            ChaoticState(0.485, 0.913, 0.751)};
}

} // namespace mtlmcrack
