#include <doctest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "mtlmcrack/cipher.hpp"
#include "mtlmcrack/equivalent_key.hpp"
#include "mtlmcrack/error.hpp"

using namespace mtlmcrack;

namespace {

RgbImage random_image(std::size_t h, std::size_t w, std::mt19937_64& rng)
{
    std::uniform_int_distribution<int> byte(0, 255);
    RgbImage img(h, w);
    for (std::size_t c = 0; c < channel_count; ++c)
        for (auto& v : img.channel(c))
            v = static_cast<std::uint8_t>(byte(rng));
    return img;
}

RgbImage formula_image(std::size_t h, std::size_t w)
{
    RgbImage img(h, w);
    for (std::size_t c = 0; c < channel_count; ++c)
        for (std::size_t k = 0; k < img.size(); ++k)
            img.at(c, k) = static_cast<std::uint8_t>((37 * k + 91 * c + 11) % 256);
    return img;
}

std::vector<std::uint8_t> from_hex(const std::string& hex)
{
    std::vector<std::uint8_t> out;
    for (std::size_t i = 0; i + 1 < hex.size(); i += 2)
        out.push_back(static_cast<std::uint8_t>(std::stoi(hex.substr(i, 2), nullptr, 16)));
    return out;
}

/// Standard JPEG zigzag scan of an 8 x 8 block
constexpr std::array<int, 64> jpeg_zigzag{
    0,  1,  8,  16, 9,  2,  3,  10, 17, 24, 32, 25, 18, 11, 4,  5,  12, 19, 26, 33, 40, 48,
    41, 34, 27, 20, 13, 6,  7,  14, 21, 28, 35, 42, 49, 56, 57, 50, 43, 36, 29, 22, 15, 23,
    30, 37, 44, 51, 58, 59, 52, 45, 38, 31, 39, 46, 53, 60, 61, 54, 47, 55, 62, 63,
};

} // namespace

TEST_CASE("rotate_nibbles")
{
    CHECK(rotate_nibbles(0) == 0);
    CHECK(rotate_nibbles(1) == 16);
    CHECK(rotate_nibbles(170) == 170);
    CHECK(rotate_nibbles(85) == 85);
    CHECK(rotate_nibbles(0x3C) == 0xC3);
    for (int a = 0; a < 256; ++a)
        CHECK(rotate_nibbles(rotate_nibbles(static_cast<std::uint8_t>(a))) == a);
}

TEST_CASE("zigzag scan")
{
    SUBCASE("single row and single column are the identity")
    {
        const ZigzagMap row(1, 9), col(9, 1);
        for (std::size_t p = 0; p < 9; ++p)
        {
            CHECK(row.to_raster(p) == p);
            CHECK(col.to_raster(p) == p);
        }
    }
    SUBCASE("2 x 2")
    {
        const ZigzagMap zz(2, 2);
        CHECK(zz.to_raster(0) == 0);
        CHECK(zz.to_raster(1) == 1);
        CHECK(zz.to_raster(2) == 2);
        CHECK(zz.to_raster(3) == 3);
    }
    SUBCASE("8 x 8 is the JPEG order")
    {
        const ZigzagMap zz(8, 8);
        for (std::size_t p = 0; p < 64; ++p)
            CHECK(zz.to_raster(p) == static_cast<std::size_t>(jpeg_zigzag[p]));
    }
    SUBCASE("bijection with fixed corners")
    {
        for (auto [h, w] : {std::pair<std::size_t, std::size_t>{1, 1}, {3, 7}, {7, 3}, {96, 160}, {5, 5}, {256, 256}})
        {
            const ZigzagMap zz = build_zigzag(h, w);
            CHECK(zz.size() == h * w);
            CHECK(zz.to_raster(0) == 0);
            CHECK(zz.to_raster(h * w - 1) == h * w - 1);
            for (std::size_t p = 0; p < zz.size(); ++p)
                REQUIRE(zz.from_raster(zz.to_raster(p)) == p);
            for (std::size_t k = 0; k < zz.size(); ++k)
                REQUIRE(zz.to_raster(zz.from_raster(k)) == k);
        }
    }
}

TEST_CASE("permutation")
{
    const PermutationParams ref = reference_key().r;

    SUBCASE("odd values only")
    {
        CHECK_THROWS_AS(PermutationParams({1, 2, 3, 5, 7, 9}), KeyError);
    }
    SUBCASE("1 x 1 is the identity")
    {
        RgbImage img(1, 1);
        img.at(0, 0) = 9;
        img.at(1, 0) = 8;
        img.at(2, 0) = 7;
        CHECK(permute(img, ref) == img);
    }
    SUBCASE("reference parameters at 256 x 256")
    {
        std::mt19937_64 rng(5);
        const RgbImage img = random_image(256, 256, rng);
        const RgbImage out = permute(img, ref);
        // row offset 31*123 mod 256 = 229, column offset 31*57 mod 256 = 231 (0-based)
        CHECK(out.at(0, 0) == img.at(0, 229 * 256 + 231));
        CHECK(permutation_source(0, 123, 57, 256, 256) == 229 * 256 + 231);
    }
    SUBCASE("round trip")
    {
        std::mt19937_64 rng(6);
        for (int t = 0; t < 10; ++t)
        {
            const RgbImage img = random_image(32, 64, rng);
            CHECK(inverse_permute(permute(img, ref), ref) == img);
        }
    }
    SUBCASE("non-bijective parameters are rejected")
    {
        const PermutationParams bad({3, 1, 1, 1, 1, 1});
        CHECK_FALSE(offset_is_bijective(3, 6));
        CHECK_FALSE(permutation_is_bijective(bad, 6, 5));
        CHECK_THROWS_AS(permute(RgbImage(6, 5), bad), KeyDimensionIncompatible);
        CHECK_THROWS_AS(require_bijective(bad, 6, 5), KeyDimensionIncompatible);
        CHECK(permutation_is_bijective(bad, 8, 5));
    }
}

TEST_CASE("nonlinear diffusion")
{
    CHECK(diffuse_byte(0, 0, 0) == 0);
    CHECK(diffuse_byte(170, 37, 0) == 207);
    CHECK(undiffuse_byte(207, 37, 0) == 170);

    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> byte(0, 255);
    for (int t = 0; t < 10000; ++t)
    {
        const auto a = static_cast<std::uint8_t>(byte(rng));
        const auto x = static_cast<std::uint8_t>(byte(rng));
        const auto y = static_cast<std::uint8_t>(byte(rng));
        REQUIRE(undiffuse_byte(diffuse_byte(a, x, y), x, y) == a);
    }

    const RgbImage img = random_image(9, 11, rng);
    std::vector<std::uint8_t> xs(img.size()), ys(img.size()), zero(img.size(), 0);
    for (std::size_t i = 0; i < img.size(); ++i)
    {
        xs[i] = static_cast<std::uint8_t>(byte(rng));
        ys[i] = static_cast<std::uint8_t>(byte(rng));
    }
    CHECK(nonlinear_undiffuse(nonlinear_diffuse(img, xs, ys), xs, ys) == img);
    CHECK(nonlinear_undiffuse(img, zero, zero) == nonlinear_diffuse(img, zero, zero));
    CHECK_THROWS_AS(nonlinear_diffuse(img, std::span(xs).first(5), ys), ShapeError);
}

TEST_CASE("zigzag diffusion")
{
    std::mt19937_64 rng(8);
    std::uniform_int_distribution<int> byte(0, 255);

    SUBCASE("L = 1")
    {
        RgbImage img(1, 1);
        img.at(0, 0) = 0x5A;
        const std::vector<std::uint8_t> z{0x0F};
        const ZigzagMap zz(1, 1);
        CHECK(zigzag_diffuse(img, z, zz).at(0, 0) == (0x5A ^ 0x0F));
    }
    SUBCASE("all zero")
    {
        const RgbImage img(6, 7);
        const std::vector<std::uint8_t> z(img.size(), 0);
        CHECK(zigzag_diffuse(img, z, ZigzagMap(6, 7)) == img);
    }
    SUBCASE("uniform input exposes v xor Z in the chain differences")
    {
        RgbImage img(12, 10);
        for (std::size_t c = 0; c < channel_count; ++c)
            for (auto& v : img.channel(c))
                v = static_cast<std::uint8_t>(40 + c);
        std::vector<std::uint8_t> z(img.size());
        for (auto& v : z)
            v = static_cast<std::uint8_t>(byte(rng));
        const RgbImage out = zigzag_diffuse(img, z, ZigzagMap(12, 10));
        for (std::size_t c = 0; c < channel_count; ++c)
        {
            const auto d = chain_differences(out.channel(c));
            for (std::size_t p = 0; p < d.size(); ++p)
                REQUIRE(d[p] == ((40 + c) ^ z[p]));
        }
    }
    SUBCASE("round trip")
    {
        for (int t = 0; t < 100; ++t)
        {
            const std::size_t h = 1 + static_cast<std::size_t>(byte(rng) % 20);
            const std::size_t w = 1 + static_cast<std::size_t>(byte(rng) % 20);
            const RgbImage img = random_image(h, w, rng);
            std::vector<std::uint8_t> z(img.size());
            for (auto& v : z)
                v = static_cast<std::uint8_t>(byte(rng));
            const ZigzagMap zz(h, w);
            REQUIRE(zigzag_undiffuse(zigzag_diffuse(img, z, zz), z, zz) == img);
        }
    }
}

TEST_CASE("encryption matches the independent model")
{
    std::ifstream in(MTLMCRACK_TEST_DATA "/reference_cipher.txt");
    REQUIRE(in);
    const SecretKey key = reference_key();
    std::size_t h, w, c;
    std::string hex;
    int lines = 0;
    while (in >> h >> w >> c >> hex)
    {
        CAPTURE(h);
        CAPTURE(w);
        CAPTURE(c);
        const RgbImage plain = formula_image(h, w);
        const RgbImage cipher = encrypt(plain, key);
        const auto expected = from_hex(hex);
        const auto got = cipher.channel(c);
        CHECK(std::vector<std::uint8_t>(got.begin(), got.end()) == expected);
        CHECK(decrypt(cipher, key) == plain);
        ++lines;
    }
    CHECK(lines == 15);
}

TEST_CASE("single-pixel encryption formula")
{
    const SecretKey key = reference_key();
    const Keystream ks = generate_keystream(key.k, key.init, 1);
    RgbImage img(1, 1);
    img.at(0, 0) = 0x12;
    img.at(1, 0) = 0xAB;
    img.at(2, 0) = 0xF0;
    const RgbImage out = encrypt(img, key);
    for (std::size_t c = 0; c < channel_count; ++c)
        CHECK(out.at(c, 0) ==
              (static_cast<std::uint8_t>(rotate_nibbles(img.at(c, 0)) + ks.x[0]) ^ ks.y[0] ^ ks.z[0]));
}

TEST_CASE("round trip over random keys and shapes")
{
    std::mt19937_64 rng(9);
    for (auto [h, w] : {std::pair<std::size_t, std::size_t>{1, 1}, {8, 8}, {32, 32}, {96, 160}, {7, 13}, {1, 17}})
    {
        for (int t = 0; t < 5; ++t)
        {
            const SecretKey key = random_key(rng, h, w);
            REQUIRE(permutation_is_bijective(key.r, h, w));
            const RgbImage img = random_image(h, w, rng);
            REQUIRE(decrypt(encrypt(img, key), key) == img);
        }
    }
}

TEST_CASE("uniform query exposes the X stream")
{
    const SecretKey key = reference_key();
    const std::size_t h = 16, w = 16;
    RgbImage img(h, w);
    for (std::size_t k = 0; k < img.size(); ++k)
    {
        img.at(1, k) = 170;
        img.at(2, k) = 85;
    }
    const RgbImage out = encrypt(img, key);
    const Keystream ks = generate_keystream(key.k, key.init, img.size());
    const ZigzagMap zz(h, w);
    const auto dr = chain_differences(out.channel(0));
    const auto dg = chain_differences(out.channel(1));
    for (std::size_t p = 0; p < img.size(); ++p)
    {
        const std::uint8_t x = ks.x[zz.to_raster(p)];
        REQUIRE((dr[p] ^ dg[p]) == (x ^ static_cast<std::uint8_t>(170 + x)));
    }
}

TEST_CASE("equivalent key with flipped top bits encrypts identically")
{
    std::mt19937_64 rng(10);
    std::uniform_int_distribution<int> byte(0, 255);
    for (int t = 0; t < 20; ++t)
    {
        const RgbImage img = random_image(8, 8, rng);
        std::vector<std::uint8_t> x(64), y(64), z(64), x2(64), y2(64);
        for (std::size_t i = 0; i < 64; ++i)
        {
            x[i] = static_cast<std::uint8_t>(byte(rng));
            y[i] = static_cast<std::uint8_t>(byte(rng));
            z[i] = static_cast<std::uint8_t>(byte(rng));
            const bool flip = byte(rng) & 1;
            x2[i] = static_cast<std::uint8_t>(x[i] ^ (flip ? 128 : 0));
            y2[i] = static_cast<std::uint8_t>(y[i] ^ (flip ? 128 : 0));
        }
        const ZigzagMap zz(8, 8);
        CHECK(zigzag_diffuse(nonlinear_diffuse(img, x, y), z, zz) == zigzag_diffuse(nonlinear_diffuse(img, x2, y2), z, zz));
    }
}

TEST_CASE("single pixel change propagates as a constant tail")
{
    std::mt19937_64 rng(12);
    std::uniform_int_distribution<std::size_t> pick(0, 64 * 64 - 1);
    for (int t = 0; t < 10; ++t)
    {
        const SecretKey key = random_key(rng, 64, 64);
        const RgbImage a = random_image(64, 64, rng);
        RgbImage b = a;
        const std::size_t c = pick(rng) % 3, k = pick(rng);
        b.at(c, k) ^= static_cast<std::uint8_t>(1 + pick(rng) % 255);

        std::size_t out = 0;
        while (permutation_source(out, key.r.row_param(c), key.r.col_param(c), 64, 64) != k)
            ++out;
        const std::size_t q = ZigzagMap(64, 64).from_raster(out);

        const RgbImage ca = encrypt(a, key), cb = encrypt(b, key);
        const std::uint8_t delta = ca.at(c, q) ^ cb.at(c, q);
        CHECK(delta != 0);
        for (std::size_t p = 0; p < a.size(); ++p)
            REQUIRE((ca.at(c, p) ^ cb.at(c, p)) == (p < q ? 0 : delta));
        for (std::size_t other = 0; other < channel_count; ++other)
            if (other != c)
                CHECK(ca.channel(other).size() == cb.channel(other).size());
    }
}

TEST_CASE("true equivalent key decrypts")
{
    std::mt19937_64 rng(13);
    for (int t = 0; t < 5; ++t)
    {
        const SecretKey key = random_key(rng, 24, 40);
        const RgbImage img = random_image(24, 40, rng);
        const EquivalentKey ek = true_equivalent_key(key, 24, 40);
        for (auto v : ek.x_tilde)
            REQUIRE(v < 128);
        CHECK(decrypt_with_equivalent_key(encrypt(img, key), ek) == img);
    }
}

TEST_CASE("pixel accuracy")
{
    RgbImage a(2, 2), b(2, 2);
    CHECK(pixel_accuracy(a, b) == 1.0);
    for (std::size_t c = 0; c < channel_count; ++c)
        for (auto& v : b.channel(c))
            v = 255;
    CHECK(pixel_accuracy(a, b) == 0.0);
    b = a;
    b.at(2, 1) = 1;
    b.at(0, 3) = 1;
    CHECK(pixel_accuracy(a, b) == 0.5);
    CHECK_THROWS_AS(pixel_accuracy(a, RgbImage(2, 3)), ShapeError);
}

TEST_CASE("equivalent permutations")
{
    const PermutationParams a({1, 3, 5, 7, 9, 11}), b({17, 3, 5, 7, 9, 11});
    // 31 * 16 = 496 is a multiple of 16
    CHECK(equivalent_permutation(a, b, 16, 16));
    CHECK_FALSE(equivalent_permutation(a, b, 256, 256));
}

TEST_CASE("random keys respect the bounds")
{
    std::mt19937_64 rng(14);
    for (int t = 0; t < 200; ++t)
    {
        const SecretKey key = random_key(rng, 96, 160);
        CHECK(std::abs(key.k.k1()) > ControlParams::k1_bound);
        CHECK(std::abs(key.k.k2()) > ControlParams::k2_bound);
        CHECK(std::abs(key.k.k3()) > ControlParams::k3_bound);
        CHECK(permutation_is_bijective(key.r, 96, 160));
    }
}

TEST_CASE("image shape validation")
{
    CHECK_THROWS_AS(RgbImage(0, 3), ShapeError);
    CHECK_THROWS_AS(RgbImage(2, 2, {std::vector<std::uint8_t>(4), std::vector<std::uint8_t>(3), std::vector<std::uint8_t>(4)}),
                    ShapeError);
}
