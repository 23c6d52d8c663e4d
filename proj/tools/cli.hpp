#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace ncs::cli {

enum ExitCode { exit_ok = 0, exit_domain = 1, exit_usage = 2, exit_verification = 3 };

struct CommandInfo {
    std::string name;
    std::string summary;
    std::vector<std::string> operations;  // library entry points the command reaches
    std::vector<std::string> example;     // arguments after the command name
};

const std::vector<CommandInfo>& command_table();

// argv[0] is the program name. JSON or CSV goes to out, diagnostics to err.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ncs::cli
