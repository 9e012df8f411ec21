#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "tinygan/integrator.hpp"

namespace tinygan {

/// Shortest decimal text that parses back to the identical double.
std::string format_double(double v);

/// Strict full-string double parse; throws DomainError on trailing garbage.
double parse_double(std::string_view text);

/// Renders `t,theta,psi,alpha` rows with round-trip formatting.
std::string trajectory_to_csv(const Trajectory& traj);

/// Writes the CSV; parent directories must exist.
void write_trajectory_csv(const Trajectory& traj, const std::filesystem::path& path);

/// Reads samples back; header must match exactly.
std::vector<State> read_trajectory_csv(const std::filesystem::path& path);
std::vector<State> parse_trajectory_csv(std::string_view text, std::string_view source_name);

}  // namespace tinygan
