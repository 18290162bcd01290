#include "mtlmcrack/equivalent_key.hpp"

#include <stdexcept>

#include "mtlmcrack/error.hpp"

namespace mtlmcrack {

EquivalentKey true_equivalent_key(const SecretKey& key, std::size_t height, std::size_t width)
{
    const std::size_t n = height * width;
    const Keystream ks = generate_keystream(key.k, key.init, n);
    const ZigzagMap zz(height, width);

    EquivalentKey ek;
    ek.height = height;
    ek.width = width;
    ek.r = key.r;
    ek.x_tilde.resize(n);
    ek.w.resize(n);
    ek.ambiguous.assign(n, false);
    for (std::size_t p = 0; p < n; ++p)
    {
        const std::size_t k = zz.to_raster(p);
        const std::uint8_t msb = ks.x[k] & 0x80;
        ek.x_tilde[p] = ks.x[k] & 0x7F;
        ek.w[p] = static_cast<std::uint8_t>(ks.y[k] ^ ks.z[p] ^ msb);
    }
    return ek;
}

RgbImage strip_diffusion(const RgbImage& cipher, const EquivalentKey& ek)
{
    if (cipher.height() != ek.height || cipher.width() != ek.width || ek.x_tilde.size() != cipher.size() ||
        ek.w.size() != cipher.size())
        throw ShapeError("equivalent key does not match ciphertext dimensions");

    const ZigzagMap zz(cipher.height(), cipher.width());
    RgbImage out(cipher.height(), cipher.width());
    for (std::size_t c = 0; c < channel_count; ++c)
    {
        auto src = cipher.channel(c);
        auto dst = out.channel(c);
        std::uint8_t prev = 0;
        for (std::size_t p = 0; p < src.size(); ++p)
        {
            // C'(p) ^ C'(p-1) ^ W(p) = (rot(a) + X) mod 256, with Y folded into W
            const auto sum = static_cast<std::uint8_t>(src[p] ^ prev ^ ek.w[p]);
            dst[zz.to_raster(p)] = rotate_nibbles(static_cast<std::uint8_t>(sum - ek.x_tilde[p]));
            prev = src[p];
        }
    }
    return out;
}

RgbImage decrypt_with_equivalent_key(const RgbImage& cipher, const EquivalentKey& ek)
{
    if (!ek.r)
        throw std::invalid_argument("equivalent key lacks permutation parameters");
    return inverse_permute(strip_diffusion(cipher, ek), *ek.r);
}

bool equivalent_permutation(const PermutationParams& a, const PermutationParams& b, std::size_t height,
                            std::size_t width)
{
    for (std::size_t c = 0; c < channel_count; ++c)
    {
        for (std::size_t i = 1; i <= height; ++i)
            if (permutation_offset(i, a.row_param(c), height) != permutation_offset(i, b.row_param(c), height))
                return false;
        for (std::size_t j = 1; j <= width; ++j)
            if (permutation_offset(j, a.col_param(c), width) != permutation_offset(j, b.col_param(c), width))
                return false;
    }
    return true;
}

double pixel_accuracy(const RgbImage& a, const RgbImage& b)
{
    require_same_shape(a, b);
    std::size_t correct = 0;
    for (std::size_t k = 0; k < a.size(); ++k)
    {
        bool all = true;
        for (std::size_t c = 0; c < channel_count; ++c)
            all = all && a.at(c, k) == b.at(c, k);
        correct += all;
    }
    return static_cast<double>(correct) / static_cast<double>(a.size());
}

} // namespace mtlmcrack
