#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#ifdef _OPENMP
#include <omp.h>
#endif

#include "alesbm/cases.hpp"
#include "alesbm/errors.hpp"
#include "alesbm/runner.hpp"

namespace {

void apply_threads(int threads) {
#ifdef _OPENMP
    if (threads <= 0) {
        if (const char* env = std::getenv("ALESBM_THREADS")) threads = std::atoi(env);
    }
    if (threads > 0) omp_set_num_threads(threads);
#else
    (void)threads;
#endif
}

int run_command(const std::string& config_path) {
    const alesbm::RunConfig cfg = alesbm::parse_config_file(config_path);
    apply_threads(cfg.threads);
    const alesbm::RunReport rep = alesbm::run_from_config(cfg);
    std::cout << rep.to_text();
    return 0;
}

int sweep_command(const std::string& config_path) {
    const alesbm::RunConfig cfg = alesbm::parse_config_file(config_path);
    apply_threads(cfg.threads);
    const auto rows = alesbm::sweep_from_config(cfg);
    const std::string csv = alesbm::sweep_csv(rows);
    std::cout << csv;
    if (!cfg.output_dir.empty()) {
        std::filesystem::create_directories(cfg.output_dir);
        std::ofstream out(cfg.output_dir + "/" + cfg.case_name + "_sweep.csv");
        out << csv;
    }
    return 0;
}

int verify_command() {
    int failures = 0;
    auto check = [&failures](const char* name, bool ok, double value) {
        std::cout << (ok ? "[ ok ] " : "[FAIL] ") << name << " (" << value << ")\n";
        if (!ok) ++failures;
    };

    const double resid = alesbm::manufactured2d_residual();
    check("manufactured residual (finite differences)", resid <= 1e-8, resid);

    const alesbm::KidderSolution kd;
    const double tau = kd.tau();
    check("kidder focalisation time", std::abs(tau - 0.21794494717703372) < 1e-12, tau);
    const double tf = 0.5 * std::sqrt(3.0) * tau;
    check("kidder h(t_f) = 1/2", std::abs(kd.h(tf) - 0.5) < 1e-12, kd.h(tf));

    double entropy_dev = 0.0, consistency_dev = 0.0;
    for (int i = 0; i <= 20; ++i)
        for (int j = 0; j <= 20; ++j) {
            const double r0 = kd.r_i0 + (kd.r_e0 - kd.r_i0) * i / 20.0;
            const double t = 0.95 * tf * j / 20.0;
            const double R = r0 * kd.h(t);
            const auto f = kd.exact(R, t);
            entropy_dev = std::max(entropy_dev,
                                   std::abs(f.p / std::pow(f.rho, kd.gamma) - kd.s0));
            consistency_dev = std::max(
                consistency_dev,
                std::abs(f.rho * std::pow(kd.h(t), 2.0 / (kd.gamma - 1.0)) - kd.rho0(r0)));
        }
    check("kidder isentropy S = 1", entropy_dev <= 1e-12, entropy_dev);
    check("kidder self-similar density identity", consistency_dev <= 1e-12, consistency_dev);

    std::cout << (failures == 0 ? "verify: all checks passed\n" : "verify: FAILURES\n");
    return failures == 0 ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"2D moving-mesh finite volume solver for the compressible Euler equations "
                 "with shifted-boundary corrected curved boundaries"};
    app.require_subcommand(1);

    std::string run_config, sweep_config;
    CLI::App* run = app.add_subcommand("run", "run one case from a config file");
    run->add_option("config", run_config, "config file")->required()->check(CLI::ExistingFile);
    CLI::App* sweep = app.add_subcommand("sweep", "convergence sweep over the config mesh list");
    sweep->add_option("config", sweep_config, "config file")
        ->required()
        ->check(CLI::ExistingFile);
    app.add_subcommand("verify", "run the analytic self-checks");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return run_command(run_config);
        if (sweep->parsed()) return sweep_command(sweep_config);
        return verify_command();
    } catch (const alesbm::SolverError& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 2;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 3;
    }
}
