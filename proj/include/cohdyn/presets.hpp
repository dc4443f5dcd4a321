// presets.hpp: named parameter sets reproducing the published figure
// panels: fig2/fig3 sweep the four pure states (local/common environment),
// fig4/fig5 sweep the three mixed families at p = 0.1, 0.5, 0.9.
#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "cohdyn/config.hpp"
#include "cohdyn/errors.hpp"

namespace cohdyn {

inline const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> list;
        for (char panel : {'a', 'b', 'c', 'd'}) {
            list.push_back(std::string("fig2") + panel);
            list.push_back(std::string("fig3") + panel);
        }
        for (char panel = 'a'; panel <= 'i'; ++panel) {
            list.push_back(std::string("fig4") + panel);
            list.push_back(std::string("fig5") + panel);
        }
        return list;
    }();
    return names;
}

inline RunConfig figure_preset(std::string_view name) {
    RunConfig config;
    config.kT = {0.1, 0.2, 0.5, 2.0, 10.0};

    const auto fail = [&] {
        std::string valid;
        for (const auto& n : preset_names()) {
            if (!valid.empty()) valid += ", ";
            valid += n;
        }
        throw ParameterError("unknown preset '" + std::string(name) +
                             "' (valid: " + valid + ")");
    };

    if (name.size() != 5 || name.substr(0, 3) != "fig") fail();
    const char figure = name[3];
    const char panel = name[4];

    if (figure == '2' || figure == '3') {
        config.environment = figure == '2' ? EnvironmentKind::Local
                                           : EnvironmentKind::Common;
        switch (panel) {
            case 'a': config.state.family = StateFamily::Ghz; break;
            case 'b': config.state.family = StateFamily::Star; break;
            case 'c': config.state.family = StateFamily::W; break;
            case 'd': config.state.family = StateFamily::WbarW; break;
            default: fail();
        }
        return config;
    }

    if (figure == '4' || figure == '5') {
        config.environment = figure == '4' ? EnvironmentKind::Local
                                           : EnvironmentKind::Common;
        if (panel < 'a' || panel > 'i') fail();
        const int cell = panel - 'a';
        static constexpr std::array<StateFamily, 3> rows = {
            StateFamily::MixGhzW, StateFamily::WernerGhz, StateFamily::WernerW};
        static constexpr std::array<double, 3> columns = {0.1, 0.5, 0.9};
        config.state.family = rows[cell / 3];
        config.state.p = columns[cell % 3];
        return config;
    }

    fail();
    return config; // unreachable
}

} // namespace cohdyn
