#ifndef MTLMCRACK_IMAGE_HPP
#define MTLMCRACK_IMAGE_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace mtlmcrack {

inline constexpr std::size_t channel_count = 3;

/// H x W 8-bit RGB raster. Each channel is stored row-major; index (i, j) is i * W + j (0-based).
class RgbImage
{
public:
    RgbImage() = default;

    /// Zero-filled image; throws ShapeError if either dimension is zero
    RgbImage(std::size_t height, std::size_t width);

    /// Throws ShapeError unless every channel holds height * width bytes
    RgbImage(std::size_t height, std::size_t width, std::array<std::vector<std::uint8_t>, 3> channels);

    std::size_t height() const { return height_; }
    std::size_t width() const { return width_; }
    std::size_t size() const { return height_ * width_; }

    std::span<std::uint8_t> channel(std::size_t c) { return channels_.at(c); }
    std::span<const std::uint8_t> channel(std::size_t c) const { return channels_.at(c); }

    std::uint8_t& at(std::size_t c, std::size_t index) { return channels_[c][index]; }
    std::uint8_t at(std::size_t c, std::size_t index) const { return channels_[c][index]; }

    bool same_shape(const RgbImage& other) const
    {
        return height_ == other.height_ && width_ == other.width_;
    }

    friend bool operator==(const RgbImage&, const RgbImage&) = default;

private:
    std::size_t height_ = 0, width_ = 0;
    std::array<std::vector<std::uint8_t>, 3> channels_;
};

/// Throws ShapeError when the images differ in dimensions
void require_same_shape(const RgbImage& a, const RgbImage& b);

} // namespace mtlmcrack

#endif // MTLMCRACK_IMAGE_HPP
