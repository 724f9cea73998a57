// covsim command-line front end.
//
// Subcommands: run, fidelity, overlap, purity, wigner, sample.
// Exit codes: 0 success, 2 validation error (bad arguments or files),
// 1 runtime error.

#include "covsim/covsim.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace {

using namespace covsim;

// Shortest round-trip decimal form of a double, matching the JSON dumps.
std::string format_double(double value) {
    char buffer[64];
    const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
    return std::string(buffer, ptr);
}

std::string format_fixed12(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.12f", value);
    return buffer;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::invalid_argument("cannot open file: " + path.string());
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

struct RunOptions {
    std::string circuit_path;
    std::uint64_t seed = 0;
    std::string out_path;
};

int cmd_run(const RunOptions& opt) {
    const CircuitSpec spec = parse_circuit(read_file(opt.circuit_path));
    const RunResult result = run_circuit(spec, opt.seed);
    for (const MeasurementLogEntry& entry : result.log) {
        std::cout << "measurement " << entry.record_index << ": mode=" << entry.mode
                  << " phi=" << format_double(entry.phi)
                  << " outcome=" << format_double(entry.outcome)
                  << " dist_mean=" << format_double(entry.dist_mean)
                  << " dist_var=" << format_double(entry.dist_var);
        if (entry.sampled) {
            std::cout << " seed=" << entry.seed;
        } else {
            std::cout << " fixed";
        }
        std::cout << "\n";
    }
    const StateDump dump{result.state, make_metadata(opt.seed)};
    if (opt.out_path.empty()) {
        std::cout << serialize_state_dump(dump);
    } else {
        write_state_dump(opt.out_path, dump);
    }
    return 0;
}

struct PairOptions {
    std::string path_a;
    std::string path_b;
};

int cmd_fidelity(const PairOptions& opt) {
    const StateDump a = read_state_dump(opt.path_a);
    const StateDump b = read_state_dump(opt.path_b);
    const FidelityResult result = fidelity_detailed(a.state, b.state);
    std::cout << format_fixed12(result.value) << "\n";
    std::cout << "formula: " << to_string(result.formula) << "\n";
    return 0;
}

int cmd_overlap(const PairOptions& opt) {
    const StateDump a = read_state_dump(opt.path_a);
    const StateDump b = read_state_dump(opt.path_b);
    std::cout << format_fixed12(overlap(a.state, b.state)) << "\n";
    return 0;
}

int cmd_purity(const std::string& path) {
    const StateDump dump = read_state_dump(path);
    std::cout << format_fixed12(purity(dump.state)) << "\n";
    return 0;
}

struct WignerOptions {
    std::string state_path;
    int mode = 0;
    double range = 5.0;
    int points = 101;
    std::string out_path;
};

int cmd_wigner(const WignerOptions& opt) {
    const StateDump dump = read_state_dump(opt.state_path);
    if (opt.points < 2) {
        throw std::invalid_argument("wigner: --points must be >= 2");
    }
    if (!(opt.range > 0.0)) {
        throw std::invalid_argument("wigner: --range must be > 0");
    }
    if (opt.mode < 0 || opt.mode >= dump.state.n_modes()) {
        throw std::invalid_argument("wigner: --mode out of range for a " +
                                    std::to_string(dump.state.n_modes()) + "-mode state");
    }
    const GaussianState reduced =
        dump.state.n_modes() == 1
            ? dump.state
            : partial_trace(dump.state, {{opt.mode}, dump.state.n_modes()});
    std::ostringstream csv;
    csv << "x,p,W\n";
    const double step = 2.0 * opt.range / (opt.points - 1);
    PhasePoint point(2);
    for (int i = 0; i < opt.points; ++i) {
        const double x = -opt.range + step * i;
        for (int j = 0; j < opt.points; ++j) {
            const double p = -opt.range + step * j;
            point << x, p;
            csv << format_double(x) << ',' << format_double(p) << ','
                << format_double(wigner(reduced, point)) << "\n";
        }
    }
    if (opt.out_path.empty()) {
        std::cout << csv.str();
    } else {
        std::ofstream out(opt.out_path, std::ios::binary);
        if (!out) {
            throw std::runtime_error("cannot open for writing: " + opt.out_path);
        }
        out << csv.str();
    }
    return 0;
}

struct SampleOptions {
    std::string state_path;
    int mode = 0;
    double phi = 0.0;
    int count = 1;
    std::uint64_t seed = 0;
};

int cmd_sample(const SampleOptions& opt) {
    const StateDump dump = read_state_dump(opt.state_path);
    if (opt.count < 1) {
        throw std::invalid_argument("sample: --count must be >= 1");
    }
    const QuadratureDistribution dist = homodyne_distribution(dump.state, opt.mode, opt.phi);
    if (dist.variance < kDegenerateVarTol) {
        throw std::runtime_error("sample: measured quadrature variance is degenerate");
    }
    NormalSampler sampler(opt.seed);
    const double stddev = std::sqrt(dist.variance);
    std::ostringstream lines;
    for (int i = 0; i < opt.count; ++i) {
        lines << format_double(sampler.normal(dist.mean, stddev)) << "\n";
    }
    std::cout << lines.str();
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Phase-space simulator for Gaussian quantum states"};
    app.require_subcommand(1);

    RunOptions run_opt;
    CLI::App* run = app.add_subcommand("run", "Run a circuit file and dump the final state");
    run->add_option("circuit", run_opt.circuit_path, "Circuit description file (JSON)")
        ->required();
    run->add_option("--seed", run_opt.seed, "Master seed for sampled measurements");
    run->add_option("--out", run_opt.out_path, "Output state file (default: stdout)");

    PairOptions fid_opt;
    CLI::App* fid = app.add_subcommand("fidelity", "Fidelity between two state files");
    fid->add_option("state-a", fid_opt.path_a, "First state file")->required();
    fid->add_option("state-b", fid_opt.path_b, "Second state file")->required();

    PairOptions ovl_opt;
    CLI::App* ovl = app.add_subcommand("overlap", "Overlap Tr[rho1 rho2] of two state files");
    ovl->add_option("state-a", ovl_opt.path_a, "First state file")->required();
    ovl->add_option("state-b", ovl_opt.path_b, "Second state file")->required();

    std::string purity_path;
    CLI::App* pur = app.add_subcommand("purity", "Purity Tr[rho^2] of a state file");
    pur->add_option("state", purity_path, "State file")->required();

    WignerOptions wig_opt;
    CLI::App* wig = app.add_subcommand("wigner", "Wigner function grid for one mode (CSV)");
    wig->add_option("state", wig_opt.state_path, "State file")->required();
    wig->add_option("--mode", wig_opt.mode, "Mode to keep (others are traced out)");
    wig->add_option("--range", wig_opt.range, "Grid extent: [-range, range] on both axes");
    wig->add_option("--points", wig_opt.points, "Grid points per axis");
    wig->add_option("--out", wig_opt.out_path, "Output CSV file (default: stdout)");

    SampleOptions smp_opt;
    CLI::App* smp = app.add_subcommand("sample", "Draw homodyne outcomes, one per line");
    smp->add_option("state", smp_opt.state_path, "State file")->required();
    smp->add_option("--mode", smp_opt.mode, "Measured mode");
    smp->add_option("--phi", smp_opt.phi, "Quadrature angle");
    smp->add_option("--count", smp_opt.count, "Number of samples");
    smp->add_option("--seed", smp_opt.seed, "Generator seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (run->parsed()) return cmd_run(run_opt);
        if (fid->parsed()) return cmd_fidelity(fid_opt);
        if (ovl->parsed()) return cmd_overlap(ovl_opt);
        if (pur->parsed()) return cmd_purity(purity_path);
        if (wig->parsed()) return cmd_wigner(wig_opt);
        if (smp->parsed()) return cmd_sample(smp_opt);
    } catch (const std::invalid_argument& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 2;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 1;
    }
    return 0;
}
