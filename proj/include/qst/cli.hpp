// Command implementations behind the qst tool: config parsing, experiment
// orchestration and report emission. Each command is a pure function of
// (config, seed) at the byte level of its outputs.
//
// Exit-code contract: 0 success, 2 config error, 3 numerical failure.

#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "qst/analysis.hpp"
#include "qst/fermion_engine.hpp"

namespace qst::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitNumericalError = 3;

// Raised for invalid or unknown configuration content.
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Applies a dotted-path override ("chain.n_sites=6") onto a config document.
// Values parse as JSON when possible, else as strings.
void apply_override(nlohmann::json& config, const std::string& assignment);

// Default output directory: config "output.dir", else $QST_OUTPUT_DIR, else ".".
std::filesystem::path output_dir(const nlohmann::json& config);

// Writes text to path atomically (temp file then rename).
void atomic_write(const std::filesystem::path& path, const std::string& text);

std::string format_double(double v);  // 17 significant digits, locale-free

int cmd_verify_identities(const nlohmann::json& config);
int cmd_run(const nlohmann::json& config);
int cmd_sweep_medium(const nlohmann::json& config);
int cmd_p00_sweep(const nlohmann::json& config);
int cmd_homogeneous(const nlohmann::json& config);
int cmd_entangle(const nlohmann::json& config);
int cmd_triplet_check(const nlohmann::json& config);

// Dispatch by command name; maps exceptions onto the exit-code contract.
int run_command(const std::string& command, const nlohmann::json& config);

}  // namespace qst::cli
