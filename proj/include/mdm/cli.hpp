#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mdm::cli {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitIo = 3;
inline constexpr int kExitEmpty = 4;
inline constexpr int kExitAlignment = 5;

inline constexpr const char* kToolVersion = "1.0.0";

/// Runs one subcommand; args excludes the program name.
int Run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run(int argc, char** argv);

}  // namespace mdm::cli
