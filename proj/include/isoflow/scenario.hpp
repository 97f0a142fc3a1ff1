#ifndef ISOFLOW_SCENARIO_HPP
#define ISOFLOW_SCENARIO_HPP

#include <string>
#include <vector>

#include "isoflow/config.hpp"

namespace isoflow {

struct Verdict {
    std::string name;  // module invariant being checked
    double value = 0.0;
    double threshold = 0.0;
    bool pass = false;
};

struct ScenarioResult {
    std::vector<Verdict> verdicts;
    bool all_pass() const {
        for (const auto& v : verdicts)
            if (!v.pass) return false;
        return true;
    }
};

// Executes the scenario, writing diagnostics.csv, frame files, a summary
// file with pass/fail verdicts and a run_meta.json sidecar into cfg.output.
// Returns the verdicts; module errors propagate as exceptions.
ScenarioResult run_scenario(const ScenarioConfig& cfg);

// Exit status contract: 0 all verdicts pass, 1 verdict failure,
// 2 configuration error, 3 numerical failure.
int run_scenario_exit_code(const ScenarioConfig& cfg);

}  // namespace isoflow

#endif
