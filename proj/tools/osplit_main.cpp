#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "osplit/errors.hpp"
#include "osplit/lab.hpp"

namespace {

std::vector<std::string> split_csv_list(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    std::string tok;
    while (std::getline(in, tok, ',')) out.push_back(tok);
    return out;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw osplit::ConfigError("cannot open output file '" + path + "'");
    out << content;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"osplit: splitting schemes with boundary corrections for "
                 "diffusion-reaction problems"};
    app.require_subcommand(1);

    auto* study = app.add_subcommand("study", "run a convergence study on a preset");
    std::string preset_name;
    std::string schemes_arg = "lie,lie-mod,strang,strang-mod";
    std::string correction_arg;
    std::string tau_arg;
    std::string out_path;
    int nx = 0;
    int jacobi_iters = 5;
    double jacobi_weight = 2.0 / 3.0;
    bool check = false;
    study->add_option("--preset", preset_name, "preset name")->required();
    study->add_option("--schemes", schemes_arg,
                      "comma list of lie,lie-mod,strang,strang-mod,strang-dir");
    study->add_option("--nx", nx, "override nodes per axis");
    study->add_option("--tau-list", tau_arg, "comma list of step sizes");
    study->add_option("--correction", correction_arg,
                      "analytic|harmonic|algorithm1|custom:<c0>,<c1>[,sin:<k>]");
    study->add_option("--jacobi-iters", jacobi_iters, "algorithm1 smoothing sweeps");
    study->add_option("--jacobi-weight", jacobi_weight, "algorithm1 relaxation weight");
    study->add_option("--out", out_path, "write CSV to this file");
    study->add_flag("--check", check, "check observed orders against expectations");
    study->set_config("--config");

    auto* smooth = app.add_subcommand("smoothness", "run the correction-smoothness study");
    std::string smooth_out;
    int smooth_nx = 0;
    smooth->add_option("--out", smooth_out, "write CSV to this file");
    smooth->add_option("--nx", smooth_nx, "override nodes");
    smooth->set_config("--config");

    try {
        app.parse(argc, argv);

        if (study->parsed()) {
            osplit::Preset preset = osplit::make_preset(preset_name, nx);
            std::vector<osplit::SchemeId> schemes;
            for (const auto& name : split_csv_list(schemes_arg)) {
                auto s = osplit::scheme_from_name(name);
                if (!s) throw osplit::ConfigError("unknown scheme '" + name + "'");
                schemes.push_back(*s);
            }
            osplit::StudyOptions options;
            if (!correction_arg.empty())
                options.strategy =
                    osplit::parse_strategy(correction_arg, jacobi_iters, jacobi_weight);
            if (!tau_arg.empty()) {
                std::vector<double> taus;
                for (const auto& t : split_csv_list(tau_arg)) taus.push_back(std::stod(t));
                options.taus = taus;
            }

            auto report = osplit::run_convergence_study(preset, schemes, options);
            int rc = 0;
            if (check) {
                auto summary = osplit::check_expectations(report, preset.expectation);
                for (const auto& msg : summary.messages) std::cout << msg << "\n";
                if (!summary.ok()) rc = 1;
            }
            std::cout << osplit::emit_table(report);
            if (!out_path.empty()) write_file(out_path, osplit::emit_csv(report));
            return rc;
        }

        auto report = osplit::run_smoothness_study(smooth_nx);
        std::cout << osplit::emit_table(report);
        if (!smooth_out.empty()) write_file(smooth_out, osplit::emit_csv(report));
        return 0;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const osplit::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
