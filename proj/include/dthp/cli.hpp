#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

namespace dthp::cli {

inline constexpr const char* kToolVersion = "0.1.0";

// Environment variable naming the default output directory.
inline constexpr const char* kOutDirEnv = "DTHP_OUT_DIR";

enum ExitCode : int {
    kExitOk = 0,
    kExitValidationFailure = 1,
    kExitBudgetExceeded = 2,
    kExitUsage = 64,
    kExitInternal = 70,
};

// Parse argv (argv[0] is the program name), run the subcommand, write its
// artifacts and manifest, and return the exit code.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Run a subcommand from an already resolved configuration. Used by dispatch
// and by manifest replay.
int run(const std::string& subcommand, const nlohmann::json& config,
        const std::filesystem::path& out_dir, std::ostream& out, std::ostream& err);

// Default output directory: $DTHP_OUT_DIR or the current directory.
std::filesystem::path default_out_dir();

} // namespace dthp::cli
