#ifndef MTLMCRACK_KEYFILE_HPP
#define MTLMCRACK_KEYFILE_HPP

#include <filesystem>
#include <string>

#include "mtlmcrack/cipher.hpp"

namespace mtlmcrack {

// Key file grammar:
//
//   file    := { line }
//   line    := ws [ field ws "=" ws number ws ] [ "#" comment ] newline
//   field   := "r1" | ... | "r6" | "k1" | "k2" | "k3" | "x0" | "y0" | "z0"
//
// Every field appears exactly once, in any order. r values are decimal integers,
// the rest decimal floating point. Blank lines and comments are ignored.

/// Throws FormatError on syntax errors and KeyError on out-of-range values
SecretKey parse_key(const std::string& text);

/// Doubles are written in shortest round-trip form
std::string format_key(const SecretKey& key);

SecretKey read_key_file(const std::filesystem::path& path);
void write_key_file(const SecretKey& key, const std::filesystem::path& path);

} // namespace mtlmcrack

#endif // MTLMCRACK_KEYFILE_HPP
