#include "mtlmcrack/image.hpp"

#include <string>

#include "mtlmcrack/error.hpp"

namespace mtlmcrack {

RgbImage::RgbImage(std::size_t height, std::size_t width) : height_(height), width_(width)
{
    if (height == 0 || width == 0)
        throw ShapeError("image dimensions must be positive");
    for (auto& c : channels_)
        c.assign(height * width, 0);
}

RgbImage::RgbImage(std::size_t height, std::size_t width, std::array<std::vector<std::uint8_t>, 3> channels)
    : height_(height), width_(width), channels_(std::move(channels))
{
    if (height == 0 || width == 0)
        throw ShapeError("image dimensions must be positive");
    for (const auto& c : channels_)
        if (c.size() != height * width)
            throw ShapeError("channel length " + std::to_string(c.size()) + " does not match " +
                             std::to_string(height) + "x" + std::to_string(width));
}

void require_same_shape(const RgbImage& a, const RgbImage& b)
{
    if (!a.same_shape(b))
        throw ShapeError("image dimensions differ: " + std::to_string(a.height()) + "x" + std::to_string(a.width()) +
                         " vs " + std::to_string(b.height()) + "x" + std::to_string(b.width()));
}

} // namespace mtlmcrack
