#include <iostream>

#include <CLI11.hpp>

#include "fracstef/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Space-fractional Stefan problem solver"};
    std::string mode;
    std::string config;
    std::string out;
    app.add_option("mode", mode, "solve-stefan | solve-mbp | convergence | monotonicity | opcheck")->required();
    app.add_option("--config", config, "key = value configuration file")->required();
    app.add_option("--out", out, "output directory");
    CLI11_PARSE(app, argc, argv);

    fracstef::RunConfig cfg;
    try {
        cfg = fracstef::load_config(config);
        const fracstef::Mode m = fracstef::parse_mode(mode);
        if (cfg.mode && *cfg.mode != m) {
            std::cerr << "warning: config mode " << fracstef::mode_name(*cfg.mode) << " overridden by command line\n";
        }
        cfg.mode = m;
    } catch (const fracstef::Error& e) {
        std::cerr << e.kind() << ": " << e.what() << '\n';
        return 2;
    }

    std::optional<std::filesystem::path> out_dir;
    if (!out.empty()) out_dir = out;
    const fracstef::RunReport r = fracstef::run(cfg, out_dir);
    for (const auto& f : r.flags)
        std::cout << (f.pass ? "PASS " : "FAIL ") << f.name << " margin=" << fracstef::fmt_double(f.margin) << '\n';
    for (const auto& [k, v] : r.values) std::cout << k << " = " << fracstef::fmt_double(v) << '\n';
    if (!r.error_class.empty()) std::cerr << r.error_class << ": " << r.error_message << '\n';
    return r.exit_code;
}
