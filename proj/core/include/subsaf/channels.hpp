#pragma once

#include <string>
#include <vector>

namespace subsaf {

/// Names of the bundled synthetic echo channels.
std::vector<std::string> builtin_channel_names();

/// Bundled impulse response by name ("sparse128", "dispersive128",
/// "sparse512", "dispersive512"), unit energy, deterministic.
/// Measured channel data is supplied through a float-per-line file instead.
std::vector<double> builtin_channel(const std::string& name);

/// Builtin name or float-per-line file path; result truncated or zero-padded
/// to filter_len, which must be >= 1.
std::vector<double> load_channel(const std::string& name_or_path, int filter_len);

}  // namespace subsaf
