#ifndef MTLMCRACK_CLI_HPP
#define MTLMCRACK_CLI_HPP

#include <ostream>
#include <string>
#include <vector>

namespace mtlmcrack {

/// Run the command-line front end. args[0] is the program name.
/// Returns 0 on success, 1 when a library error was raised, 2 on usage errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace mtlmcrack

#endif // MTLMCRACK_CLI_HPP
