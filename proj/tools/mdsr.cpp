// Command-line front end: sweeps a probe susceptibility spectrum from a config
// file and/or a figure preset and writes it as CSV or JSON.
//
// Exit codes: 0 success, 1 config error, 2 solver error, 3 I/O error.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "mdsr/config.hpp"
#include "mdsr/run.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Probe susceptibility spectra of the driven 87Rb D1 Zeeman system"};

    std::string config_path, preset, out_path, format, grid, population_model;
    app.add_option("--config", config_path, "key-value config file");
    app.add_option("--preset", preset,
                   "parameter preset (fig2, fig3b1..fig3b4, fig4a, fig4b); overrides the "
                   "config file");
    app.add_option("--out", out_path, "output file path");
    app.add_option("--format", format, "output format: csv or json");
    app.add_option("--grid", grid, "probe detuning grid start:stop:points in MHz");
    app.add_option("--population-model", population_model,
                   "population model: fixed (equal F=1 linear response) or full "
                   "(pumped steady state)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    mdsr::RunConfig config;
    try {
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) {
                std::cerr << "i/o error: cannot read config file '" << config_path << "'\n";
                return 3;
            }
            std::ostringstream text;
            text << in.rdbuf();
            config = mdsr::parse_config(text.str());
        }
        if (!preset.empty()) {
            // Preset replaces the physics parameters; output settings survive.
            mdsr::RunConfig p = mdsr::preset_config(preset);
            p.output_path = config.output_path;
            p.output_format = config.output_format;
            config = p;
        }
        if (!out_path.empty()) config.output_path = out_path;
        if (!format.empty()) {
            if (format == "csv")
                config.output_format = mdsr::OutputFormat::Csv;
            else if (format == "json")
                config.output_format = mdsr::OutputFormat::Json;
            else
                throw mdsr::ConfigError("--format must be csv or json");
        }
        if (!grid.empty()) config.grid = mdsr::detail::parse_grid(grid, 0);
        if (!population_model.empty()) {
            if (population_model == "fixed")
                config.params.population_model = mdsr::PopulationModel::FixedEqualF1;
            else if (population_model == "full")
                config.params.population_model = mdsr::PopulationModel::FullPumping;
            else
                throw mdsr::ConfigError("--population-model must be fixed or full");
        }
        config.validate();
    } catch (const mdsr::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    }

    try {
        return mdsr::run(config, std::cout);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
