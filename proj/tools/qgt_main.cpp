#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "qgt/cli.hpp"

namespace {

struct RawFlags {
    std::string config, model, at, to, grid, curve, patch, scheme, output, format, suite;
    double beta = 1.0, omega = 1.0, fd_step = 1e-5;
    long ncut = 40, seed = 0, dim = 3, nparams = 2, steps = 512, threads = 0, draws = 500;
};

void add_flags(CLI::App* sub, RawFlags& raw) {
    sub->add_option("--config", raw.config, "config file (flags override it)");
    sub->add_option("--model", raw.model, "model name (see `qgt models`)");
    sub->add_option("--beta", raw.beta, "inverse temperature");
    sub->add_option("--omega", raw.omega, "oscillator / level-splitting frequency");
    sub->add_option("--ncut", raw.ncut, "Fock truncation for bosonic-coherent");
    sub->add_option("--seed", raw.seed, "seed (random model, verify suite)");
    sub->add_option("--dim", raw.dim, "dimension of the random model");
    sub->add_option("--nparams", raw.nparams, "parameter count of the random model");
    sub->add_option("--at", raw.at, "parameter point, comma separated");
    sub->add_option("--to", raw.to, "second point for distances");
    sub->add_option("--grid", raw.grid, "sweep grid, name:start:stop:count per axis");
    sub->add_option("--curve", raw.curve, "circle:cx,cy,r | rect:u0,v0,u1,v1 | points:...");
    sub->add_option("--patch", raw.patch, "patch, u0:u1:nu,v0:v1:nv");
    sub->add_option("--steps", raw.steps, "curve sample count");
    sub->add_option("--fd-step", raw.fd_step, "finite-difference base step");
    sub->add_option("--fd-scheme", raw.scheme, "central2 | central4 | richardson");
    sub->add_option("--threads", raw.threads, "worker threads (QGT_THREADS as fallback)");
    sub->add_option("--output", raw.output, "output path (stdout when omitted)");
    sub->add_option("--format", raw.format, "csv | json");
    sub->add_option("--draws", raw.draws, "verify suite draw count");
    sub->add_option("--suite", raw.suite, "verify suite name");
}

void apply_flags(const CLI::App* sub, const RawFlags& raw, qgt::cli::RunConfig& cfg) {
    using qgt::cli::OutputFormat;
    auto set = [&](const char* flag) { return sub->count(flag) > 0; };
    if (set("--model")) cfg.model = raw.model;
    if (set("--beta")) cfg.mc.beta = raw.beta;
    if (set("--omega")) cfg.mc.omega = raw.omega;
    if (set("--ncut")) cfg.mc.n_cut = static_cast<int>(raw.ncut);
    if (set("--seed")) {
        cfg.mc.seed = static_cast<std::uint64_t>(raw.seed);
        cfg.suite_seed = static_cast<std::uint64_t>(raw.seed);
    }
    if (set("--dim")) cfg.dim = static_cast<int>(raw.dim);
    if (set("--nparams")) cfg.n_params = static_cast<int>(raw.nparams);
    if (set("--at")) cfg.at = qgt::cli::parse_point_arg(raw.at);
    if (set("--to")) cfg.to = qgt::cli::parse_point_arg(raw.to);
    if (set("--grid")) cfg.grid = qgt::cli::parse_grid_arg(raw.grid);
    if (set("--curve")) cfg.curve_spec = raw.curve;
    if (set("--patch")) cfg.patch_spec = raw.patch;
    if (set("--steps")) cfg.curve_steps = static_cast<int>(raw.steps);
    if (set("--fd-step")) cfg.fd.h = raw.fd_step;
    if (set("--fd-scheme")) {
        if (raw.scheme == "central2")
            cfg.fd.scheme = qgt::FdScheme::central2;
        else if (raw.scheme == "central4")
            cfg.fd.scheme = qgt::FdScheme::central4;
        else if (raw.scheme == "richardson")
            cfg.fd.scheme = qgt::FdScheme::richardson;
        else
            throw qgt::ValidationError("unknown fd scheme '" + raw.scheme + "'");
    }
    if (set("--threads")) cfg.threads = static_cast<int>(raw.threads);
    if (set("--output")) cfg.output_path = raw.output;
    if (set("--format")) {
        if (raw.format == "csv")
            cfg.format = OutputFormat::csv;
        else if (raw.format == "json")
            cfg.format = OutputFormat::json;
        else
            throw qgt::ValidationError("unknown format '" + raw.format + "'");
    }
    if (set("--draws")) cfg.draws = static_cast<int>(raw.draws);
    if (set("--suite")) cfg.suite = raw.suite;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"qgt - quantum geometric tensors, transport and distance checks"};
    app.require_subcommand(1);

    RawFlags raw;
    const char* names[] = {"tensor",  "sweep",  "transport", "theta-g",
                           "volume",  "verify", "distance",  "models"};
    for (const char* name : names) add_flags(app.add_subcommand(name), raw);

    CLI11_PARSE(app, argc, argv);

    const CLI::App* sub = app.get_subcommands().front();
    try {
        qgt::cli::RunConfig cfg;
        if (sub->count("--config")) {
            std::ifstream in(raw.config);
            if (!in) {
                std::cerr << "error: cannot read config file " << raw.config << "\n";
                return 2;
            }
            std::ostringstream text;
            text << in.rdbuf();
            cfg = qgt::cli::parse_config(text.str());
        }
        cfg.task = qgt::cli::task_from_name(sub->get_name());
        apply_flags(sub, raw, cfg);
        return qgt::cli::run(cfg);
    } catch (const qgt::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const qgt::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
