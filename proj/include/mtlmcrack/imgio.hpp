#ifndef MTLMCRACK_IMGIO_HPP
#define MTLMCRACK_IMGIO_HPP

#include <cstdint>
#include <filesystem>
#include <string>

#include "mtlmcrack/image.hpp"

namespace mtlmcrack {

/// Binary PPM (P6, maxval 255). Header tokens are whitespace separated, '#' starts a comment
/// running to end of line, and exactly one whitespace byte precedes the raster.
RgbImage parse_ppm(const std::string& bytes);
std::string format_ppm(const RgbImage& img);

/// Throws FormatError on malformed input or I/O failure
RgbImage read_ppm(const std::filesystem::path& path);
void write_ppm(const RgbImage& img, const std::filesystem::path& path);

RgbImage synth_uniform(std::size_t height, std::size_t width, std::uint8_t r, std::uint8_t g, std::uint8_t b);

/// Uniform random bytes from std::mt19937_64 seeded with `seed`, filled R, G, B channel by channel
RgbImage synth_random(std::size_t height, std::size_t width, std::uint64_t seed);

} // namespace mtlmcrack

#endif // MTLMCRACK_IMGIO_HPP
