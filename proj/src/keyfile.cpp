#include "mtlmcrack/keyfile.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <iterator>
#include <map>
#include <optional>
#include <sstream>

#include "mtlmcrack/error.hpp"

namespace mtlmcrack {

namespace {

constexpr std::array<const char*, 12> field_names{"r1", "r2", "r3", "r4", "r5", "r6",
                                                  "k1", "k2", "k3", "x0", "y0", "z0"};

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string shortest(double v)
{
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

} // namespace

SecretKey parse_key(const std::string& text)
{
    std::map<std::string, std::string> values;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line))
    {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw FormatError("key file line " + std::to_string(lineno) + ": expected 'name = value'");
        const std::string name = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (std::find_if(field_names.begin(), field_names.end(), [&](const char* f) { return name == f; }) ==
            field_names.end())
            throw FormatError("key file line " + std::to_string(lineno) + ": unknown field '" + name + "'");
        if (value.empty())
            throw FormatError("key file line " + std::to_string(lineno) + ": missing value for " + name);
        if (!values.emplace(name, value).second)
            throw FormatError("key file line " + std::to_string(lineno) + ": duplicate field " + name);
    }
    for (const char* f : field_names)
        if (!values.count(f))
            throw FormatError(std::string("key file is missing field ") + f);

    auto real = [&](const char* f) {
        const std::string& s = values.at(f);
        double v = 0.0;
        const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
        if (res.ec != std::errc() || res.ptr != s.data() + s.size())
            throw FormatError(std::string("key field ") + f + " is not a decimal number: " + s);
        return v;
    };

    std::array<std::uint8_t, 6> r{};
    for (std::size_t u = 0; u < 6; ++u)
    {
        const std::string& s = values.at(field_names[u]);
        int v = 0;
        const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
        if (res.ec != std::errc() || res.ptr != s.data() + s.size())
            throw FormatError(std::string("key field ") + field_names[u] + " is not an integer: " + s);
        if (v < 1 || v > 255)
            throw KeyError(std::string("key field ") + field_names[u] + " must be in [1,255]");
        r[u] = static_cast<std::uint8_t>(v);
    }

    return {PermutationParams(r), ControlParams(real("k1"), real("k2"), real("k3")),
            ChaoticState(real("x0"), real("y0"), real("z0"))};
}

std::string format_key(const SecretKey& key)
{
    std::ostringstream os;
    os << "# MTLM image cipher secret key\n";
    for (std::size_t u = 1; u <= 6; ++u)
        os << "r" << u << " = " << static_cast<int>(key.r.r(u)) << '\n';
    os << "k1 = " << shortest(key.k.k1()) << '\n';
    os << "k2 = " << shortest(key.k.k2()) << '\n';
    os << "k3 = " << shortest(key.k.k3()) << '\n';
    os << "x0 = " << shortest(key.init.x()) << '\n';
    os << "y0 = " << shortest(key.init.y()) << '\n';
    os << "z0 = " << shortest(key.init.z()) << '\n';
    return os.str();
}

SecretKey read_key_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw FormatError("cannot open key file " + path.string());
    const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_key(text);
}

void write_key_file(const SecretKey& key, const std::filesystem::path& path)
{
    std::ofstream out(path);
    out << format_key(key);
    if (!out)
        throw FormatError("cannot write key file " + path.string());
}

} // namespace mtlmcrack
