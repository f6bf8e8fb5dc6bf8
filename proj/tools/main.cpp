#include "CLI11.hpp"

#include <cstdint>
#include <iostream>
#include <string>

#include "grushin/pipeline.hpp"

namespace {

struct CommonOpts {
    std::string config_path;
    std::string preset;
    std::string out_dir;
    std::int64_t seed = -1;
    bool force_csv = false;
    bool no_csv = false;
};

void attach_common(CLI::App* sub, CommonOpts& opts) {
    auto* config = sub->add_option("-c,--config", opts.config_path, "path to a JSON run document")
                       ->check(CLI::ExistingFile);
    auto* preset =
        sub->add_option("-p,--preset", opts.preset, "name of a built-in document (see `presets`)");
    config->excludes(preset);
    preset->excludes(config);
    sub->add_option("-o,--out", opts.out_dir, "override the document's output directory");
    sub->add_option("--seed", opts.seed, "override the document's random seed");
    auto* csv = sub->add_flag("--csv", opts.force_csv, "force CSV artifacts on");
    auto* nocsv = sub->add_flag("--no-csv", opts.no_csv, "skip CSV artifacts");
    csv->excludes(nocsv);
    nocsv->excludes(csv);
}

grushin::RunConfig resolve(const CommonOpts& opts) {
    grushin::RunConfig config;
    if (!opts.preset.empty())
        config = grushin::parse_config(grushin::preset_document(opts.preset));
    else if (!opts.config_path.empty())
        config = grushin::load_config_file(opts.config_path);
    else
        grushin::fail(grushin::errc::validation_error, "pass --config FILE or --preset NAME");
    if (!opts.out_dir.empty()) config.output_dir = opts.out_dir;
    if (opts.seed >= 0) config.seed = static_cast<std::uint64_t>(opts.seed);
    if (opts.no_csv) config.write_csv = false;
    if (opts.force_csv) config.write_csv = true;
    return config;
}

// -1: mode matches; otherwise the exit code to return.
int require_mode(const grushin::RunConfig& config, grushin::RunMode mode) {
    if (config.mode == mode) return -1;
    std::cerr << "error: document mode is " << grushin::run_mode_name(config.mode)
              << ", expected " << grushin::run_mode_name(mode) << "\n";
    return grushin::exit_code::config_error;
}

int map_error(const grushin::Error& e) {
    using grushin::errc;
    switch (e.code()) {
        case errc::schema_error:
        case errc::validation_error:
        case errc::io_error:
        case errc::invalid_initial_data:
        case errc::domain_split:
        case errc::bad_extent:
        case errc::bad_dimension:
        case errc::bad_gamma:
        case errc::param_violation:
            return grushin::exit_code::config_error;
        default:
            return grushin::exit_code::internal_error;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"finite-difference laboratory for degenerate diffusion with superlinear sources"};
    app.require_subcommand(1);

    CommonOpts eigen_opts;
    std::string dump_matrix;
    CLI::App* eigen = app.add_subcommand(
        "eigen", "smallest Dirichlet eigenvalue, Poincare sampling, optional gamma sweep");
    attach_common(eigen, eigen_opts);
    eigen->add_option("--dump-matrix", dump_matrix,
                      "write the assembled operator as coordinate triplets");

    CommonOpts cond_opts;
    CLI::App* cond =
        app.add_subcommand("check-conditions", "hypothesis report for the document's mode");
    attach_common(cond, cond_opts);

    CommonOpts sim_opts;
    std::string final_field;
    CLI::App* sim = app.add_subcommand("simulate", "time integration without certification");
    attach_common(sim, sim_opts);
    sim->add_option("--final-field", final_field, "write the last state as CSV");

    CommonOpts blow_opts;
    CLI::App* blow = app.add_subcommand(
        "certify-blowup", "hypothesis gate + run + finite-time-singularity certificate");
    attach_common(blow, blow_opts);

    CommonOpts glob_opts;
    CLI::App* glob = app.add_subcommand(
        "certify-global", "hypothesis gate + run + global-existence certificate");
    attach_common(glob, glob_opts);

    CommonOpts conv_opts;
    CLI::App* conv = app.add_subcommand(
        "convergence", "eigenvalue refinement study over the document's node list");
    attach_common(conv, conv_opts);

    app.add_subcommand("presets", "list built-in documents");

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand("presets")) return grushin::list_presets(std::cout);
        if (app.got_subcommand("eigen"))
            return grushin::run_eigen(resolve(eigen_opts), std::cout, dump_matrix);
        if (app.got_subcommand("check-conditions"))
            return grushin::run_check_conditions(resolve(cond_opts), std::cout);
        if (app.got_subcommand("simulate"))
            return grushin::run_simulate(resolve(sim_opts), std::cout, final_field);
        if (app.got_subcommand("certify-blowup")) {
            grushin::RunConfig config = resolve(blow_opts);
            if (int rc = require_mode(config, grushin::RunMode::BlowUp); rc >= 0) return rc;
            return grushin::run_certify(config, std::cout);
        }
        if (app.got_subcommand("certify-global")) {
            grushin::RunConfig config = resolve(glob_opts);
            if (int rc = require_mode(config, grushin::RunMode::Global); rc >= 0) return rc;
            return grushin::run_certify(config, std::cout);
        }
        if (app.got_subcommand("convergence"))
            return grushin::run_convergence(resolve(conv_opts), std::cout);
    } catch (const grushin::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return map_error(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return grushin::exit_code::internal_error;
    }
    return grushin::exit_code::internal_error;
}
