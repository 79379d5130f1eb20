#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ldao {

enum class AlphaMode { uniform, adaptive };

// Pipeline configuration. Defaults follow the documented search ranges:
// k in [2,6], multiplier in [1.0,3.0], bandwidth scale in [0.1,2.0].
// Values outside those ranges are accepted; range_warnings() flags them.
struct RunConfig {
    int k_min = 2;
    int k_max = 6;
    double elbow_threshold = 0.10;  // delta below which adding a cluster stops paying
    AlphaMode alpha_mode = AlphaMode::uniform;
    double alpha = 2.0;       // uniform growth multiplier
    double alpha_max = 3.0;   // adaptive mode cap
    double gamma = 0.5;       // adaptive mode size-ratio exponent
    double bandwidth_scale = 1.0;
    std::uint64_t seed = 42;
    int restarts = 10;
    int max_iterations = 300;
    double tolerance = 1e-6;  // centroid displacement, standardized units
    bool clip_to_range = false;  // clamp synthetic columns to observed [min,max]
};

// Throws ValidationError on structurally invalid values (k_max < k_min,
// alpha < 1, non-positive tolerance, ...).
void validate(const RunConfig& config);

// Human-readable flags for values outside the documented search ranges.
// Out-of-range values still run; the warnings surface in run reports.
std::vector<std::string> range_warnings(const RunConfig& config);

std::string to_string(AlphaMode mode);
AlphaMode alpha_mode_from_string(const std::string& text);

} // namespace ldao
