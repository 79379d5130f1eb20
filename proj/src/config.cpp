#include "ldao/config.hpp"

#include "ldao/errors.hpp"

#include <sstream>

namespace ldao {

void validate(const RunConfig& config) {
    if (config.k_min < 1) throw ValidationError("k_min must be >= 1");
    if (config.k_max < config.k_min) throw ValidationError("k_max must be >= k_min");
    if (!(config.elbow_threshold > 0.0 && config.elbow_threshold < 1.0))
        throw ValidationError("elbow threshold must lie in (0,1)");
    if (config.alpha < 1.0) throw ValidationError("alpha must be >= 1");
    if (config.alpha_max < 1.0) throw ValidationError("alpha_max must be >= 1");
    if (config.gamma < 0.0) throw ValidationError("gamma must be >= 0");
    if (!(config.bandwidth_scale > 0.0)) throw ValidationError("bandwidth scale must be > 0");
    if (config.restarts < 1) throw ValidationError("restarts must be >= 1");
    if (config.max_iterations < 1) throw ValidationError("max_iterations must be >= 1");
    if (!(config.tolerance > 0.0)) throw ValidationError("tolerance must be > 0");
}

std::vector<std::string> range_warnings(const RunConfig& config) {
    std::vector<std::string> warnings;
    auto flag = [&warnings](const std::string& what) {
        warnings.push_back("outside documented range: " + what);
    };
    if (config.k_min < 2 || config.k_max > 6) {
        std::ostringstream oss;
        oss << "k range [" << config.k_min << "," << config.k_max << "] (documented [2,6])";
        flag(oss.str());
    }
    if (config.alpha_mode == AlphaMode::uniform) {
        if (config.alpha > 3.0) {
            std::ostringstream oss;
            oss << "alpha " << config.alpha << " (documented [1.0,3.0])";
            flag(oss.str());
        }
    } else if (config.alpha_max > 3.0) {
        std::ostringstream oss;
        oss << "alpha_max " << config.alpha_max << " (documented [1.0,3.0])";
        flag(oss.str());
    }
    if (config.bandwidth_scale < 0.1 || config.bandwidth_scale > 2.0) {
        std::ostringstream oss;
        oss << "bandwidth scale " << config.bandwidth_scale << " (documented [0.1,2.0])";
        flag(oss.str());
    }
    return warnings;
}

std::string to_string(AlphaMode mode) {
    return mode == AlphaMode::uniform ? "uniform" : "adaptive";
}

AlphaMode alpha_mode_from_string(const std::string& text) {
    if (text == "uniform") return AlphaMode::uniform;
    if (text == "adaptive") return AlphaMode::adaptive;
    throw ValidationError("unknown alpha mode \"" + text + "\" (expected uniform or adaptive)");
}

} // namespace ldao
