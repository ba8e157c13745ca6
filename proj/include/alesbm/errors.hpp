#pragma once

#include <stdexcept>
#include <string>

namespace alesbm {

/// Runtime failure carrying solver context: the pipeline stage that failed,
/// the time step index and the cell/face/vertex id involved (-1 if n/a).
class SolverError : public std::runtime_error {
public:
    SolverError(std::string stage, const std::string& what, long step = -1, long entity = -1)
        : std::runtime_error(format(stage, what, step, entity)),
          stage_(std::move(stage)),
          step_(step),
          entity_(entity) {}

    const std::string& stage() const noexcept { return stage_; }
    long step() const noexcept { return step_; }
    long entity() const noexcept { return entity_; }

private:
    static std::string format(const std::string& stage, const std::string& what, long step, long entity) {
        std::string msg = "[" + stage + "] " + what;
        if (step >= 0) msg += " (step " + std::to_string(step) + ")";
        if (entity >= 0) msg += " (id " + std::to_string(entity) + ")";
        return msg;
    }

    std::string stage_;
    long step_;
    long entity_;
};

} // namespace alesbm
