#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "tinygan/integrator.hpp"

namespace tinygan {

struct SweepRow {
  double time_constant = 0.0;
  double measured_amplitude = 0.0;
  double predicted_amplitude = 0.0;
  double relative_error = 0.0;
  bool diverged = false;
};

struct SweepTable {
  std::vector<SweepRow> rows;
};

/// Self-contained SVG of the state components against time: one polyline per
/// component (theta, psi, alpha), a dashed horizontal reference line at the
/// data target alpha_r, axes, ticks, and a legend. Deterministic output.
std::string render_trajectory_svg(const Trajectory& traj, double reference_alpha_r);

/// Measured and predicted amplitude against T: two polylines with point
/// markers. Diverged rows are skipped in the measured series.
std::string render_sweep_svg(const SweepTable& table);

void write_text_file(const std::string& text, const std::filesystem::path& path);

}  // namespace tinygan
