// Command-line front end: Monte-Carlo sweeps, transfer charts, operation
// counts and the built-in selftest.
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "fdlink/harness/complexity.hpp"
#include "fdlink/harness/config.hpp"
#include "fdlink/harness/exit_chart.hpp"
#include "fdlink/harness/selftest.hpp"
#include "fdlink/harness/simulate.hpp"
#include "fdlink/kernels.hpp"
#include "fdlink/types.hpp"

namespace {

void apply_kernel_choice(const std::string& kernels) {
    if (kernels.empty()) return;
    if (kernels == "scalar") {
        fdlink::kernels::set_backend(fdlink::kernels::Backend::Scalar);
    } else if (kernels == "avx2") {
        fdlink::kernels::set_backend(fdlink::kernels::Backend::Avx2);
    } else {
        throw std::invalid_argument("unknown kernel backend '" + kernels + "'");
    }
}

std::ofstream open_out(const std::string& path) {
    std::ofstream ofs(path);
    if (!ofs) throw std::ios_base::failure("cannot open output file '" + path + "'");
    return ofs;
}

double esn0_db(double ebn0, int j) {
    return ebn0 + 10.0 * std::log10(0.5 * std::log2(static_cast<double>(j)));
}

struct SimulateOpts {
    std::string config_path;
    std::string out_path;
    std::string kernels;
    std::vector<double> ebn0;
    uint64_t seed = 0;
    bool seed_set = false;
    int threads = 0;
};

int run_simulate(const SimulateOpts& o) {
    apply_kernel_choice(o.kernels);
    fdlink::LinkConfig cfg = fdlink::parse_config_file(o.config_path);
    if (!o.ebn0.empty()) cfg.ebn0_db = o.ebn0;
    if (o.seed_set) cfg.seed = o.seed;
    if (o.threads > 0) cfg.threads = o.threads;
    if (cfg.ebn0_db.empty())
        throw std::invalid_argument("no Eb/N0 grid: set 'ebn0' in the config or pass --ebn0");

    const fdlink::LinkRuntime rt(cfg);
    std::printf("# %s / %s  n=%zu q=%zu j=%d  kernels=%s\n",
                fdlink::to_string(cfg.precoder), fdlink::to_string(cfg.detector),
                cfg.n, cfg.q, cfg.j, fdlink::kernels::api().name);
    std::vector<fdlink::FerRecord> records;
    records.reserve(cfg.ebn0_db.size());
    for (double point : cfg.ebn0_db) {
        const fdlink::FerRecord rec = fdlink::run_fer_point(rt, point);
        std::printf(
            "ebn0=%6.2f dB  esn0=%6.2f dB  frames=%8zu  errors=%6zu  "
            "fer=%.4e  ber=%.4e  ti=%.2f\n",
            rec.ebn0_db, esn0_db(rec.ebn0_db, rec.j), rec.frames, rec.frame_errors,
            rec.fer(), rec.ber(), rec.mean_turbo);
        std::fflush(stdout);
        records.push_back(rec);
    }
    if (!o.out_path.empty()) {
        std::ofstream ofs = open_out(o.out_path);
        fdlink::write_fer_csv(ofs, records);
    }
    return 0;
}

struct ExitOpts {
    std::string config_path;
    std::string out_path;
    std::string decoder_out_path;
    std::string kernels;
    double ebn0 = 0.0;
    bool ebn0_set = false;
    std::size_t frames = 200;
    std::size_t decoder_frames = 100;
    uint64_t seed = 0;
    bool seed_set = false;
};

int run_exit(const ExitOpts& o) {
    apply_kernel_choice(o.kernels);
    fdlink::LinkConfig cfg = fdlink::parse_config_file(o.config_path);
    if (o.seed_set) cfg.seed = o.seed;
    if (cfg.ebn0_db.empty()) cfg.ebn0_db = {6.0};
    const fdlink::LinkRuntime rt(cfg);

    const double point = o.ebn0_set ? o.ebn0 : fdlink::pick_exit_ebn0(rt);
    std::printf("# trajectory at ebn0=%.2f dB over %zu frames\n", point, o.frames);
    const std::vector<fdlink::ExitPoint> traj =
        fdlink::exit_trajectory(rt, point, o.frames);
    for (const auto& p : traj)
        std::printf("pass=%2d  ia_det=%.4f ie_det=%.4f  ia_dec=%.4f ie_dec=%.4f\n",
                    p.ti, p.ia_det, p.ie_det, p.ia_dec, p.ie_dec);
    if (!o.out_path.empty()) {
        std::ofstream ofs = open_out(o.out_path);
        fdlink::write_exit_csv(ofs, traj);
    }
    if (!o.decoder_out_path.empty()) {
        std::vector<double> grid;
        for (int i = 0; i <= 20; ++i) grid.push_back(i / 20.0);
        const auto curve = fdlink::decoder_exit_curve(rt.info_bits(), grid,
                                                      o.decoder_frames, cfg.seed);
        std::ofstream ofs = open_out(o.decoder_out_path);
        fdlink::write_decoder_curve_csv(ofs, curve);
    }
    return 0;
}

struct ComplexityOpts {
    std::string out_path;
    std::string kernels;
    std::size_t n = 256;
    bool no_measure = false;
};

int run_complexity(const ComplexityOpts& o) {
    apply_kernel_choice(o.kernels);
    const auto rows = fdlink::complexity_preset(o.n, !o.no_measure);
    std::printf("%-6s %-11s %4s %3s %3s %14s %12s %14s %12s\n", "scheme", "detector",
                "q", "j", "ns", "adds", "mults", "adds_meas", "mults_meas");
    for (const auto& r : rows) {
        char am[24] = "-", mm[24] = "-";
        if (r.measured_ok) {
            std::snprintf(am, sizeof am, "%llu",
                          static_cast<unsigned long long>(r.measured.adds));
            std::snprintf(mm, sizeof mm, "%llu",
                          static_cast<unsigned long long>(r.measured.mults));
        }
        std::printf("%-6s %-11s %4zu %3d %3d %14llu %12llu %14s %12s\n",
                    fdlink::to_string(r.precoder), fdlink::to_string(r.detector), r.q,
                    r.j, r.n_self, static_cast<unsigned long long>(r.analytic.adds),
                    static_cast<unsigned long long>(r.analytic.mults), am, mm);
    }
    if (!o.out_path.empty()) {
        std::ofstream ofs = open_out(o.out_path);
        fdlink::write_complexity_csv(ofs, rows);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Frequency-domain precoded link simulator"};
    app.require_subcommand(1);

    SimulateOpts sim;
    CLI::App* sub_sim = app.add_subcommand("simulate", "Monte-Carlo FER/BER sweep");
    sub_sim->add_option("--config", sim.config_path, "link configuration file")
        ->required();
    sub_sim->add_option("--ebn0", sim.ebn0, "Eb/N0 grid in dB (overrides config)");
    sub_sim->add_option("--seed", sim.seed, "base RNG seed (overrides config)")
        ->each([&](const std::string&) { sim.seed_set = true; });
    sub_sim->add_option("--threads", sim.threads, "worker thread count");
    sub_sim->add_option("--out", sim.out_path, "FER results CSV path");
    sub_sim->add_option("--kernels", sim.kernels, "compute backend: scalar|avx2");

    ExitOpts exo;
    CLI::App* sub_exit = app.add_subcommand("exit", "Detector/decoder transfer chart");
    sub_exit->add_option("--config", exo.config_path, "link configuration file")
        ->required();
    sub_exit->add_option("--ebn0", exo.ebn0, "operating point in dB (default: probed)")
        ->each([&](const std::string&) { exo.ebn0_set = true; });
    sub_exit->add_option("--frames", exo.frames, "frames per trajectory");
    sub_exit->add_option("--seed", exo.seed, "base RNG seed (overrides config)")
        ->each([&](const std::string&) { exo.seed_set = true; });
    sub_exit->add_option("--out", exo.out_path, "trajectory CSV path");
    sub_exit->add_option("--decoder-out", exo.decoder_out_path,
                         "decoder transfer curve CSV path");
    sub_exit->add_option("--decoder-frames", exo.decoder_frames,
                         "frames per decoder curve point");
    sub_exit->add_option("--kernels", exo.kernels, "compute backend: scalar|avx2");

    ComplexityOpts cxo;
    CLI::App* sub_cx = app.add_subcommand("complexity", "Per-symbol operation counts");
    sub_cx->add_option("--n", cxo.n, "block length for the EP equalizer rows");
    sub_cx->add_flag("--no-measure", cxo.no_measure, "skip instrumented runs");
    sub_cx->add_option("--out", cxo.out_path, "complexity table CSV path");
    sub_cx->add_option("--kernels", cxo.kernels, "compute backend: scalar|avx2");

    std::string self_kernels;
    CLI::App* sub_self = app.add_subcommand("selftest", "Built-in verification");
    sub_self->add_option("--kernels", self_kernels, "compute backend: scalar|avx2");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (sub_sim->parsed()) return run_simulate(sim);
        if (sub_exit->parsed()) return run_exit(exo);
        if (sub_cx->parsed()) return run_complexity(cxo);
        apply_kernel_choice(self_kernels);
        std::printf("kernels: %s\n", fdlink::kernels::api().name);
        return fdlink::run_selftest(std::cout);
    } catch (const fdlink::CapabilityError& e) {
        std::cerr << "capability error: " << e.what() << '\n';
        return 3;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
