#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "nlsc/config.hpp"
#include "nlsc/runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{"radial focusing NLS with an inverse-square potential"};
    std::string sub, config_path, out_dir;
    int d = 0, n = 0;
    double alpha = 0, c = 0, rmax = 0, tend = 0;
    app.add_option("subcommand", sub,
                   "one of: ground evolve virial-check classify sweep verify")
        ->required();
    app.add_option("--config", config_path, "configuration file (sectioned key = value)");
    auto* od = app.add_option("--d", d, "space dimension");
    auto* oa = app.add_option("--alpha", alpha, "nonlinearity exponent");
    auto* oc = app.add_option("--c", c, "inverse-square coupling");
    auto* orm = app.add_option("--rmax", rmax, "domain radius");
    auto* on = app.add_option("--n", n, "grid intervals");
    auto* ot = app.add_option("--tend", tend, "evolution horizon");
    auto* oo = app.add_option("--out", out_dir, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        nlsc::RunConfig cfg =
            config_path.empty() ? nlsc::RunConfig{} : nlsc::load_config(config_path);
        cfg.subcommand = sub;
        if (od->count()) cfg.d = d;
        if (oa->count()) cfg.alpha = alpha;
        if (oc->count()) cfg.c = c;
        if (orm->count()) cfg.grid.r_max = rmax;
        if (on->count()) cfg.grid.n = n;
        if (ot->count()) cfg.controls.t_end = tend;
        if (oo->count()) cfg.io.out_dir = out_dir;

        bool known = false;
        for (const auto& s : nlsc::known_subcommands()) known = known || s == cfg.subcommand;
        if (!known) {
            std::cerr << "error: unknown subcommand '" << cfg.subcommand << "'\n";
            return 2;
        }
        cfg.model();  // reject bad model parameters before any work
        return nlsc::run(cfg);
    } catch (const nlsc::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
