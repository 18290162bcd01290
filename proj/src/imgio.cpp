#include "mtlmcrack/imgio.hpp"

#include <cctype>
#include <fstream>
#include <iterator>
#include <random>
#include <sstream>

#include "mtlmcrack/error.hpp"

namespace mtlmcrack {

namespace {

bool is_ppm_space(char c)
{
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
}

class HeaderReader
{
public:
    explicit HeaderReader(const std::string& bytes) : bytes_(bytes) {}

    /// Skip whitespace and comments, then read one token of non-space bytes
    std::string token()
    {
        for (;;)
        {
            while (pos_ < bytes_.size() && is_ppm_space(bytes_[pos_]))
                ++pos_;
            if (pos_ < bytes_.size() && bytes_[pos_] == '#')
            {
                while (pos_ < bytes_.size() && bytes_[pos_] != '\n' && bytes_[pos_] != '\r')
                    ++pos_;
                continue;
            }
            break;
        }
        const std::size_t start = pos_;
        while (pos_ < bytes_.size() && !is_ppm_space(bytes_[pos_]) && bytes_[pos_] != '#')
            ++pos_;
        if (start == pos_)
            throw FormatError("truncated PPM header");
        return bytes_.substr(start, pos_ - start);
    }

    std::size_t number(const char* what)
    {
        const std::string t = token();
        std::size_t value = 0;
        for (char c : t)
        {
            if (!std::isdigit(static_cast<unsigned char>(c)))
                throw FormatError(std::string("PPM ") + what + " is not a decimal number: " + t);
            value = value * 10 + static_cast<std::size_t>(c - '0');
            if (value > (std::size_t{1} << 32))
                throw FormatError(std::string("PPM ") + what + " is too large");
        }
        return value;
    }

    /// The single whitespace byte that ends the header
    void end_of_header()
    {
        if (pos_ >= bytes_.size() || !is_ppm_space(bytes_[pos_]))
            throw FormatError("PPM header must end with one whitespace byte");
        ++pos_;
    }

    std::size_t position() const { return pos_; }

private:
    const std::string& bytes_;
    std::size_t pos_ = 0;
};

} // namespace

RgbImage parse_ppm(const std::string& bytes)
{
    HeaderReader hdr(bytes);
    if (hdr.token() != "P6")
        throw FormatError("not a binary PPM (magic P6 expected)");
    const std::size_t width = hdr.number("width");
    const std::size_t height = hdr.number("height");
    const std::size_t maxval = hdr.number("maxval");
    if (width == 0 || height == 0)
        throw FormatError("PPM dimensions must be positive");
    if (maxval != 255)
        throw FormatError("unsupported PPM maxval " + std::to_string(maxval) + " (only 255)");
    hdr.end_of_header();

    const std::size_t n = width * height;
    const std::size_t start = hdr.position();
    if (bytes.size() - start < 3 * n)
        throw FormatError("PPM raster truncated: expected " + std::to_string(3 * n) + " bytes");

    std::array<std::vector<std::uint8_t>, 3> ch;
    for (auto& c : ch)
        c.resize(n);
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t c = 0; c < 3; ++c)
            ch[c][k] = static_cast<std::uint8_t>(bytes[start + 3 * k + c]);
    return RgbImage(height, width, std::move(ch));
}

std::string format_ppm(const RgbImage& img)
{
    std::string out = "P6\n" + std::to_string(img.width()) + " " + std::to_string(img.height()) + "\n255\n";
    const std::size_t header = out.size();
    out.resize(header + 3 * img.size());
    for (std::size_t k = 0; k < img.size(); ++k)
        for (std::size_t c = 0; c < 3; ++c)
            out[header + 3 * k + c] = static_cast<char>(img.at(c, k));
    return out;
}

RgbImage read_ppm(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw FormatError("cannot open " + path.string());
    const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    try
    {
        return parse_ppm(bytes);
    }
    catch (const FormatError& e)
    {
        throw FormatError(path.string() + ": " + e.what());
    }
}

void write_ppm(const RgbImage& img, const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::binary);
    const std::string bytes = format_ppm(img);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out)
        throw FormatError("cannot write " + path.string());
}

RgbImage synth_uniform(std::size_t height, std::size_t width, std::uint8_t r, std::uint8_t g, std::uint8_t b)
{
    const std::size_t n = height * width;
    return RgbImage(height, width, {std::vector<std::uint8_t>(n, r), std::vector<std::uint8_t>(n, g),
                                    std::vector<std::uint8_t>(n, b)});
}

RgbImage synth_random(std::size_t height, std::size_t width, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> byte(0, 255);
    RgbImage img(height, width);
    for (std::size_t c = 0; c < 3; ++c)
        for (auto& v : img.channel(c))
            v = static_cast<std::uint8_t>(byte(rng));
    return img;
}

} // namespace mtlmcrack
