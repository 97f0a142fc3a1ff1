// Scenario runner: isoflow <scenario> --config <path> [--out <dir>]
//
// Exit codes: 0 all verdicts pass, 1 verdict failure, 2 configuration
// error, 3 numerical failure.
#include <cstring>
#include <iostream>
#include <string>

#include "isoflow/config.hpp"
#include "isoflow/errors.hpp"
#include "isoflow/scenario.hpp"

namespace {

void usage(std::ostream& os) {
    os << "usage: isoflow <scenario> --config <path> [--out <dir>]\n"
          "scenarios: tau-study | gaussian-oracle | rescaled-run | fokker-planck |"
          " isentropic-contrast\n";
}

}  // namespace

int main(int argc, char** argv) {
    using namespace isoflow;
    if (argc < 2) {
        usage(std::cerr);
        return 2;
    }
    const std::string sub = argv[1];
    if (sub == "-h" || sub == "--help") {
        usage(std::cout);
        return 0;
    }
    const auto kind = scenario_from_string(sub);
    if (!kind) {
        std::cerr << "error: unknown scenario '" << sub << "'\n";
        usage(std::cerr);
        return 2;
    }
    std::string config_path, out_dir;
    for (int i = 2; i < argc; ++i) {
        if (std::strcmp(argv[i], "--config") == 0 && i + 1 < argc) {
            config_path = argv[++i];
        } else if (std::strcmp(argv[i], "--out") == 0 && i + 1 < argc) {
            out_dir = argv[++i];
        } else {
            std::cerr << "error: unknown argument '" << argv[i] << "'\n";
            usage(std::cerr);
            return 2;
        }
    }
    if (config_path.empty()) {
        std::cerr << "error: --config is required\n";
        return 2;
    }

    try {
        ScenarioConfig cfg = parse_config(config_path, kind);
        if (!out_dir.empty()) cfg.output = out_dir;
        const ScenarioResult res = run_scenario(cfg);
        for (const auto& v : res.verdicts)
            std::cout << (v.pass ? "[pass] " : "[FAIL] ") << v.name << "  value=" << v.value
                      << " threshold=" << v.threshold << '\n';
        return res.all_pass() ? 0 : 1;
    } catch (const ParseError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return 2;
    } catch (const ValidationError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return 2;
    } catch (const Error& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "failure: " << e.what() << '\n';
        return 3;
    }
}
