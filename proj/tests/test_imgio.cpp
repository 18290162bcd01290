#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "mtlmcrack/error.hpp"
#include "mtlmcrack/imgio.hpp"
#include "mtlmcrack/keyfile.hpp"

using namespace mtlmcrack;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name)
{
    const fs::path dir = fs::temp_directory_path() / "mtlmcrack_test_imgio";
    fs::create_directories(dir);
    return dir / name;
}

} // namespace

TEST_CASE("reading fixtures")
{
    const RgbImage white = read_ppm(MTLMCRACK_TEST_DATA "/white1x1.ppm");
    CHECK(white.height() == 1);
    CHECK(white.width() == 1);
    CHECK(white.at(0, 0) == 255);
    CHECK(white.at(1, 0) == 255);
    CHECK(white.at(2, 0) == 255);

    const RgbImage commented = read_ppm(MTLMCRACK_TEST_DATA "/commented.ppm");
    CHECK(commented.height() == 1);
    CHECK(commented.width() == 2);
    CHECK(commented.at(0, 0) == 1);
    CHECK(commented.at(1, 0) == 2);
    CHECK(commented.at(2, 0) == 3);
    CHECK(commented.at(0, 1) == 250);
    CHECK(commented.at(2, 1) == 252);
}

TEST_CASE("write then read is the identity")
{
    std::mt19937_64 rng(51);
    for (auto [h, w] : {std::pair<std::size_t, std::size_t>{1, 1}, {3, 17}, {64, 64}, {96, 160}})
    {
        const RgbImage img = synth_random(h, w, rng());
        CHECK(parse_ppm(format_ppm(img)) == img);
        const fs::path p = scratch("roundtrip.ppm");
        write_ppm(img, p);
        CHECK(read_ppm(p) == img);
        CHECK(fs::file_size(p) == format_ppm(img).size());
    }
}

TEST_CASE("malformed files")
{
    const std::string pixels(3, '\0');
    CHECK_THROWS_AS(parse_ppm("P3 1 1 255\n" + pixels), FormatError);
    CHECK_THROWS_AS(parse_ppm("P6 1 1 65535\n" + pixels + pixels), FormatError);
    CHECK_THROWS_AS(parse_ppm("P6 1 1 100\n" + pixels), FormatError);
    CHECK_THROWS_AS(parse_ppm("P6 2 1 255\n" + pixels), FormatError);
    CHECK_THROWS_AS(parse_ppm("P6 0 1 255\n"), FormatError);
    CHECK_THROWS_AS(parse_ppm("P6 1 1"), FormatError);
    CHECK_THROWS_AS(parse_ppm(""), FormatError);
    CHECK_THROWS_AS(read_ppm(scratch("does_not_exist.ppm")), FormatError);
}

TEST_CASE("synthetic images")
{
    const RgbImage u = synth_uniform(4, 5, 1, 2, 3);
    for (std::size_t k = 0; k < u.size(); ++k)
    {
        CHECK(u.at(0, k) == 1);
        CHECK(u.at(1, k) == 2);
        CHECK(u.at(2, k) == 3);
    }
    CHECK(synth_uniform(1, 1, 9, 9, 9).size() == 1);

    CHECK(synth_random(32, 32, 5) == synth_random(32, 32, 5));
    CHECK(synth_random(32, 32, 5) != synth_random(32, 32, 6));

    // chi-square over 256 bins, 255 degrees of freedom; 99.9% quantile is about 330.5
    const RgbImage r = synth_random(256, 256, 7);
    for (std::size_t c = 0; c < channel_count; ++c)
    {
        std::array<double, 256> hist{};
        for (auto v : r.channel(c))
            ++hist[v];
        const double expected = static_cast<double>(r.size()) / 256.0;
        double chi2 = 0.0;
        for (double h : hist)
            chi2 += (h - expected) * (h - expected) / expected;
        CHECK(chi2 < 330.5);
    }
}

TEST_CASE("key files")
{
    const SecretKey ref = read_key_file(MTLMCRACK_TEST_DATA "/reference.key");
    CHECK(ref == reference_key());
    CHECK(ref.r.values() == std::array<std::uint8_t, 6>{123, 57, 67, 89, 253, 221});

    std::mt19937_64 rng(52);
    for (int t = 0; t < 50; ++t)
    {
        const SecretKey key = random_key(rng, 256, 256);
        CHECK(parse_key(format_key(key)) == key);
    }
    const fs::path p = scratch("k.key");
    write_key_file(ref, p);
    CHECK(read_key_file(p) == ref);

    const std::string good = format_key(ref);
    auto replace = [&](const std::string& from, const std::string& to) {
        std::string s = good;
        s.replace(s.find(from), from.size(), to);
        return s;
    };
    CHECK_THROWS_AS(parse_key(replace("k1 = 38.583", "k1 = 37.5")), KeyError);
    CHECK_THROWS_AS(parse_key(replace("r2 = 57", "r2 = 58")), KeyError);
    CHECK_THROWS_AS(parse_key(replace("r2 = 57", "r2 = 257")), KeyError);
    CHECK_THROWS_AS(parse_key(replace("x0 = 0.485", "x0 = 1.5")), KeyError);
    CHECK_THROWS_AS(parse_key(replace("r2 = 57", "r2 = fifty")), FormatError);
    CHECK_THROWS_AS(parse_key(replace("r2 = 57\n", "")), FormatError);
    CHECK_THROWS_AS(parse_key(good + "r2 = 57\n"), FormatError);
    CHECK_THROWS_AS(parse_key(good + "q = 1\n"), FormatError);
    CHECK_THROWS_AS(parse_key(good + "just words\n"), FormatError);
    CHECK(parse_key("  # leading comment\n\n" + good + "   \n") == ref);
    CHECK_THROWS_AS(read_key_file(scratch("missing.key")), FormatError);
}
