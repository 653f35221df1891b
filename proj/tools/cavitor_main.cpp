// Command-line driver: forward simulation, gradual time reversal, T-sweeps,
// mode tables, the Bessel-zero verification suite, and the modal error
// predictor. Every run writes a provenance.cfg that `cavitor rerun` replays.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <iostream>

#include "CLI11.hpp"

#include "cavitor/analysis.hpp"
#include "cavitor/errors.hpp"
#include "cavitor/io.hpp"
#include "cavitor/reconstruct.hpp"
#include "cavitor/spectral.hpp"

namespace fs = std::filesystem;
using namespace cavitor;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::function<void(double, double, double&, double&)> phantom_gradient(const PhantomSpec& spec) {
    if (spec.kind != PhantomSpec::Kind::BumpSum) return {};
    return [spec](double x, double y, double& gx, double& gy) {
        gx = gy = 0.0;
        for (const auto& b : spec.bumps) {
            const double r2 = b.radius * b.radius;
            const double d2 = ((x - b.cx) * (x - b.cx) + (y - b.cy) * (y - b.cy)) / r2;
            if (d2 < 1.0) {
                const double p = b.smoothness;
                const double f = -2.0 * p * b.amplitude * std::pow(1.0 - d2, p - 1.0) / r2;
                gx += f * (x - b.cx);
                gy += f * (y - b.cy);
            }
        }
    };
}

double resolve_cap(const Config& cfg, const PhantomSpec& spec, const Geometry& geom) {
    const std::string cap = cfg.get_or("cap", "auto");
    if (cap != "auto") return std::stod(cap);
    if (spec.kind == PhantomSpec::Kind::Eigenmode) {
        const double lam = std::hypot(spec.mode_i1 * M_PI / geom.A, spec.mode_i2 * M_PI / geom.B);
        return lam + 1e-9;
    }
    auto f = [&spec](double x, double y) { return eval_phantom(spec, x, y); };
    return choose_cap_for_tail(f, phantom_gradient(spec), geom,
                               cfg.get_double_or("tail_frac", 1e-6), 30.0,
                               cfg.get_double_or("cap_limit", 250.0));
}

int run_forward(const Config& cfg_in) {
    const auto t0 = Clock::now();
    Config cfg = cfg_in;
    const Geometry geom = parse_geometry(cfg.get("geometry"));
    const PhantomSpec spec = parse_phantom(cfg.get("phantom"), geom);
    const DetectorLayout layout = parse_detectors(
        cfg.get_or("detectors", geom.is_disk() ? "full:1024" : "full:256"));
    const double T = cfg.get_double("T");
    const std::string backend = cfg.get_or("backend", "spectral");
    const std::string out = cfg.get("out");
    fs::create_directories(fs::path(out).parent_path().empty()
                               ? "."
                               : fs::path(out).parent_path().string());
    BoundaryRecording rec;
    if (backend == "spectral") {
        const double cap = resolve_cap(cfg, spec, geom);
        cfg.set_double("cap", cap);
        auto basis = std::make_shared<const ModeSet>(enumerate_modes(geom, BcKind::Neumann, cap));
        auto f = [&spec](double x, double y) { return eval_phantom(spec, x, y); };
        ModalState state = project_initial(f, basis, phantom_gradient(spec));
        const double dt = cfg.get_double_or("dt", (M_PI / 8.0) / cap);
        cfg.set_double("dt", dt);
        rec = record_boundary(state, layout, dt, T);
    } else if (backend == "fdtd" || backend == "cart-fdtd" || backend == "polar-fdtd") {
        const GridSpec gs = parse_grid(cfg.get("grid"), geom);
        Grid2D grid = geom.is_disk() ? Grid2D::polar(gs.n1 - 1, gs.n2)
                                     : Grid2D::cartesian(geom, gs.n1, gs.n2);
        const ScalarField2D f = render(spec, grid.spec);
        const double dt = cfg.get_double_or("dt", grid.max_stable_dt());
        cfg.set_double("dt", dt);
        rec = forward_run(grid, f, dt, T, layout);
    } else {
        throw ConfigError("unknown forward backend: " + backend);
    }
    if (const double sigma = cfg.get_double_or("noise.sigma", 0.0); sigma > 0.0)
        add_gaussian_noise(rec, sigma, static_cast<std::uint64_t>(cfg.get_int_or("noise.seed", 1)));
    write_recording(rec, out);
    if (cfg.get_or("csv", "") == "1") write_recording_csv(rec, out + ".csv");
    write_provenance(cfg, fs::path(out).parent_path().string().empty()
                              ? "."
                              : fs::path(out).parent_path().string(),
                     seconds_since(t0));
    std::cout << "wrote " << out << " (" << rec.n_detectors() << " detectors, " << rec.n_samples
              << " samples)\n";
    return 0;
}

Grid2D make_backend(const Config& cfg, const Geometry& geom) {
    const GridSpec gs = parse_grid(cfg.get("grid"), geom);
    const std::string backend = cfg.get_or("backend", geom.is_disk() ? "polar-fdtd" : "cart-fdtd");
    if (geom.is_disk() && backend != "polar-fdtd")
        throw ConfigError("disk reconstructions use --backend polar-fdtd");
    if (!geom.is_disk() && backend != "cart-fdtd")
        throw ConfigError("rectangle reconstructions use --backend cart-fdtd");
    return geom.is_disk() ? Grid2D::polar(gs.n1 - 1, gs.n2)
                          : Grid2D::cartesian(geom, gs.n1, gs.n2);
}

void write_report_artifacts(const ReconstructionReport& rep, const std::string& dir,
                            const std::string& tag) {
    write_field(rep.recon, dir + "/recon" + tag + ".bin");
    write_pgm16(rep.recon, dir + "/recon" + tag + ".pgm");
    if (rep.residual) {
        write_field(*rep.residual, dir + "/residual" + tag + ".bin");
        write_pgm16(*rep.residual, dir + "/residual" + tag + ".pgm");
    }
}

int run_reconstruct(const Config& cfg_in, bool sweep) {
    const auto t0 = Clock::now();
    Config cfg = cfg_in;
    const BoundaryRecording rec = read_recording(cfg.get("data"));
    const Geometry geom = rec.geom;
    cfg.set("geometry", geom.describe());
    const CutoffProfile cutoff = parse_cutoff(cfg.get_or("cutoff", "bump:0.5"));
    const Grid2D grid = make_backend(cfg, geom);
    std::optional<PhantomSpec> phantom;
    if (cfg.has("phantom")) phantom = parse_phantom(cfg.get("phantom"), geom);
    std::vector<double> T_list;
    for (const auto& t : cfg.get_all("T")) {
        std::istringstream is(t);
        std::string item;
        while (std::getline(is, item, ',')) T_list.push_back(std::stod(item));
    }
    if (T_list.empty()) throw ConfigError("reconstruct needs --T");
    std::sort(T_list.begin(), T_list.end());
    if (!sweep && T_list.size() != 1) throw ConfigError("reconstruct takes a single T; use sweep");
    const std::string dir = cfg.get("out");
    fs::create_directories(dir);

    const auto reports = sweep_T(rec, cutoff, T_list, grid, phantom);
    std::vector<std::vector<double>> rows;
    for (const auto& rep : reports) {
        std::ostringstream tag;
        if (sweep) tag << "_T" << rep.T;
        write_report_artifacts(rep, dir, tag.str());
        rows.push_back({rep.T, rep.l2w_rel, rep.h1_rel, rep.energy_res});
        std::cout << "T=" << rep.T << "  l2w_rel=" << rep.l2w_rel << "  h1_rel=" << rep.h1_rel
                  << "\n";
    }
    write_csv(dir + "/metrics.csv", {"T", "l2w_rel", "h1_rel", "energy_res"}, rows);
    if (const int nm = cfg.get_int_or("decompose", 0); nm > 0 && reports.back().residual) {
        const BcKind bc = rec.layout.full_boundary ? BcKind::Dirichlet
                                                   : BcKind::MixedRightDirichlet;
        const double cap = cfg.get_double_or("decompose_cap", 40.0);
        const ModeSet rev = enumerate_modes(geom, bc, cap);
        const auto table = decompose_residual(*reports.back().residual, rev, nm);
        std::vector<std::vector<double>> trows;
        for (const auto& e : table)
            trows.push_back({static_cast<double>(e.mode.i1), static_cast<double>(e.mode.i2),
                             e.mode.eigenvalue, e.coeff, e.share});
        write_csv(dir + "/residual_modes.csv", {"i1", "i2", "eigenvalue", "coeff", "share"}, trows);
    }
    write_provenance(cfg, dir, seconds_since(t0));
    return 0;
}

int run_modes(const Config& cfg_in) {
    const auto t0 = Clock::now();
    Config cfg = cfg_in;
    const Geometry geom = parse_geometry(cfg.get("geometry"));
    const ModeSet set = enumerate_modes(geom, parse_bc(cfg.get_or("bc", "neumann")),
                                        cfg.get_double("cap"));
    std::vector<std::vector<double>> rows;
    for (const auto& m : set.modes)
        rows.push_back({static_cast<double>(m.i1), static_cast<double>(m.i2),
                        static_cast<double>(m.parity), m.eigenvalue, m.norm_const});
    const std::string out = cfg.get("out");
    write_csv(out, {"i1", "i2", "parity", "eigenvalue", "norm_const"}, rows);
    if (cfg.has("coincide")) {
        const ModeSet other = enumerate_modes(geom, parse_bc(cfg.get("coincide")),
                                              cfg.get_double("cap"));
        const auto recs = detect_coincidences(set, other, cfg.get_double_or("tol", 1e-9));
        std::vector<std::vector<double>> crows;
        for (const auto& r : recs)
            crows.push_back({static_cast<double>(r.neumann.i1), static_cast<double>(r.neumann.i2),
                             static_cast<double>(r.reversal.i1), static_cast<double>(r.reversal.i2),
                             r.shared_eigenvalue, r.coupling});
        write_csv(cfg.get_or("coincidence_out", out + ".coincidences.csv"),
                  {"nIdx", "lIdx", "kIdx", "mIdx", "eigenvalue", "coupling"}, crows);
        std::cout << recs.size() << " coinciding pairs\n";
    }
    write_provenance(cfg, fs::path(out).parent_path().string().empty()
                              ? "."
                              : fs::path(out).parent_path().string(),
                     seconds_since(t0));
    std::cout << set.size() << " modes\n";
    return 0;
}

int run_bessel_verify(const Config& cfg_in) {
    const auto t0 = Clock::now();
    Config cfg = cfg_in;
    const int m_max = cfg.get_int_or("m_max", 50);
    const int k_max = cfg.get_int_or("k_max", 100);
    const auto rep = specfun::verify_zero_gaps(m_max, k_max);
    std::vector<std::string> header = {"m", "k", "l", "quantity", "bound", "value", "pass"};
    std::ofstream os(cfg.get("out"));
    if (!os) throw ConfigError("cannot open " + cfg.get("out"));
    os.precision(17);
    os << "m,k,l,quantity,bound,value,pass\n";
    for (const auto& v : rep.violations)
        os << v.m << "," << v.k << "," << v.l << "," << v.quantity << "," << v.bound << ","
           << v.value << ",0\n";
    for (const auto& b : rep.minima)
        os << b.m << "," << b.k << "," << b.l << "," << b.quantity << "," << b.bound << ","
           << b.value << "," << (b.value >= b.bound ? 1 : 0) << "\n";
    os << "0,0,0,m0-constant,0," << rep.m0_constant << ",1\n";
    std::cout << rep.checks << " checks, " << rep.violations.size()
              << " violations, max residual " << rep.max_residual << ", m0 constant "
              << rep.m0_constant << "\n";
    write_provenance(cfg, fs::path(cfg.get("out")).parent_path().string().empty()
                              ? "."
                              : fs::path(cfg.get("out")).parent_path().string(),
                     seconds_since(t0));
    return rep.violations.empty() ? 0 : 1;
}

int run_predict(const Config& cfg_in) {
    const auto t0 = Clock::now();
    Config cfg = cfg_in;
    const Geometry geom = parse_geometry(cfg.get("geometry"));
    const PhantomSpec spec = parse_phantom(cfg.get("phantom"), geom);
    const double caps = cfg.get_double_or("caps", 40.0);
    const double eps = cfg.get_double("eps");
    const CutoffProfile cutoff = parse_cutoff(cfg.get_or("cutoff", "bump:0.5"));
    auto neumann = std::make_shared<const ModeSet>(enumerate_modes(geom, BcKind::Neumann, caps));
    const BcKind rev_bc = cfg.get_or("bc", "dirichlet") == "mixed-right-dirichlet"
                              ? BcKind::MixedRightDirichlet
                              : BcKind::Dirichlet;
    auto reversal = std::make_shared<const ModeSet>(enumerate_modes(geom, rev_bc, caps));
    auto f = [&spec](double x, double y) { return eval_phantom(spec, x, y); };
    const ModalState state = project_initial(f, neumann, phantom_gradient(spec));
    const auto pred = predict_residual(state.u0, neumann, reversal, cutoff, eps);
    std::vector<std::vector<double>> rows;
    for (int k = 0; k < reversal->size(); ++k) {
        const auto& m = reversal->modes[k];
        rows.push_back({static_cast<double>(m.i1), static_cast<double>(m.i2), m.eigenvalue,
                        pred.nu_wk0[k], pred.wk0p[k], pred.persistent_coeff[k]});
    }
    write_csv(cfg.get("out"), {"k", "m", "nu", "nu_wk0", "wk0_prime", "persistent"}, rows);
    std::cout << "persistent |Err|_H1 = " << pred.persistent_h1() << "\n";
    write_provenance(cfg, fs::path(cfg.get("out")).parent_path().string().empty()
                              ? "."
                              : fs::path(cfg.get("out")).parent_path().string(),
                     seconds_since(t0));
    return 0;
}

int run_render(const Config& cfg_in) {
    const auto t0 = Clock::now();
    Config cfg = cfg_in;
    const Geometry geom = parse_geometry(cfg.get("geometry"));
    const PhantomSpec spec = parse_phantom(cfg.get("phantom"), geom);
    const GridSpec gs = parse_grid(cfg.get("grid"), geom);
    const ScalarField2D f = render(spec, gs);
    write_field(f, cfg.get("out"));
    write_pgm16(f, cfg.get("out") + ".pgm");
    write_provenance(cfg, fs::path(cfg.get("out")).parent_path().string().empty()
                              ? "."
                              : fs::path(cfg.get("out")).parent_path().string(),
                     seconds_since(t0));
    return 0;
}

int run_config(const Config& cfg) {
    const std::string cmd = cfg.get("command");
    if (cmd == "forward") return run_forward(cfg);
    if (cmd == "reconstruct") return run_reconstruct(cfg, false);
    if (cmd == "sweep") return run_reconstruct(cfg, true);
    if (cmd == "modes") return run_modes(cfg);
    if (cmd == "bessel-verify") return run_bessel_verify(cfg);
    if (cmd == "predict") return run_predict(cfg);
    if (cmd == "render-phantom") return run_render(cfg);
    throw ConfigError("unknown command: " + cmd);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"cavitor: resonant-cavity photoacoustics, forward simulation and gradual "
                 "time reversal"};
    app.require_subcommand(1);
    Config cfg;

    auto add_str = [&cfg](CLI::App* sub, const std::string& flag, const std::string& key,
                          const std::string& desc, bool required = false) {
        auto opt = sub->add_option_function<std::string>(
            flag, [&cfg, key](const std::string& v) { cfg.set(key, v); }, desc);
        if (required) opt->required();
        return opt;
    };

    auto* fwd = app.add_subcommand("forward", "simulate boundary data from a phantom");
    add_str(fwd, "--geometry", "geometry", "disk | square | rect A B", true);
    add_str(fwd, "--phantom", "phantom", "three-bump | eigen:N,L | file", true);
    add_str(fwd, "--T", "T", "recording duration", true);
    add_str(fwd, "--out", "out", "output recording path", true);
    add_str(fwd, "--detectors", "detectors", "full:N | right:N | ...");
    add_str(fwd, "--backend", "backend", "spectral (default) | fdtd");
    add_str(fwd, "--grid", "grid", "fdtd grid, e.g. 256x256");
    add_str(fwd, "--dt", "dt", "sample interval");
    add_str(fwd, "--cap", "cap", "eigenvalue cap or 'auto'");
    add_str(fwd, "--noise-sigma", "noise.sigma", "additive Gaussian noise level");
    add_str(fwd, "--seed", "noise.seed", "noise RNG seed");

    auto* rc = app.add_subcommand("reconstruct", "gradual time reversal from a recording");
    add_str(rc, "--data", "data", "input recording", true);
    add_str(rc, "--T", "T", "reversal horizon", true);
    add_str(rc, "--grid", "grid", "solver grid, e.g. 128x256", true);
    add_str(rc, "--out", "out", "output directory", true);
    add_str(rc, "--cutoff", "cutoff", "bump:0.5 | poly5:0.5");
    add_str(rc, "--backend", "backend", "polar-fdtd | cart-fdtd");
    add_str(rc, "--phantom", "phantom", "reference phantom for metrics");
    add_str(rc, "--decompose", "decompose", "decompose residual into N modes");
    add_str(rc, "--decompose-cap", "decompose_cap", "eigenvalue cap for the decomposition");

    auto* sw = app.add_subcommand("sweep", "reconstructions for a list of T values");
    add_str(sw, "--data", "data", "input recording", true);
    add_str(sw, "--T", "T", "comma-separated T list", true);
    add_str(sw, "--grid", "grid", "solver grid", true);
    add_str(sw, "--out", "out", "output directory", true);
    add_str(sw, "--cutoff", "cutoff", "bump:0.5 | poly5:0.5");
    add_str(sw, "--backend", "backend", "polar-fdtd | cart-fdtd");
    add_str(sw, "--phantom", "phantom", "reference phantom for metrics");

    auto* md = app.add_subcommand("modes", "eigenmode table (optionally coincidences)");
    add_str(md, "--geometry", "geometry", "disk | square | rect A B", true);
    add_str(md, "--bc", "bc", "neumann | dirichlet | mixed-right-dirichlet");
    add_str(md, "--cap", "cap", "eigenvalue cap", true);
    add_str(md, "--out", "out", "output CSV", true);
    add_str(md, "--coincide", "coincide", "second basis to compare against");
    add_str(md, "--coincidence-out", "coincidence_out", "coincidence CSV path");
    add_str(md, "--tol", "tol", "coincidence tolerance");

    auto* bv = app.add_subcommand("bessel-verify", "Bessel zero spacing verification suite");
    add_str(bv, "--m-max", "m_max", "max order (default 50)");
    add_str(bv, "--k-max", "k_max", "max zero index (default 100)");
    add_str(bv, "--out", "out", "report CSV", true);

    auto* pr = app.add_subcommand("predict", "modal error-prediction oracle");
    add_str(pr, "--geometry", "geometry", "square | rect A B", true);
    add_str(pr, "--phantom", "phantom", "eigen:N,L | three-bump | file", true);
    add_str(pr, "--eps", "eps", "epsilon = 1/T", true);
    add_str(pr, "--caps", "caps", "eigenvalue cap for both bases");
    add_str(pr, "--bc", "bc", "reversal bc: dirichlet | mixed-right-dirichlet");
    add_str(pr, "--cutoff", "cutoff", "bump:0.5 | poly5:0.5");
    add_str(pr, "--out", "out", "prediction CSV", true);

    auto* rp = app.add_subcommand("render-phantom", "sample a phantom to a field file");
    add_str(rp, "--geometry", "geometry", "disk | square | rect A B", true);
    add_str(rp, "--phantom", "phantom", "phantom spec", true);
    add_str(rp, "--grid", "grid", "grid, e.g. 256x256", true);
    add_str(rp, "--out", "out", "output field path", true);

    auto* rr = app.add_subcommand("rerun", "replay a provenance file");
    std::string prov_path;
    rr->add_option("provenance", prov_path, "provenance.cfg path")->required();

    CLI11_PARSE(app, argc, argv);
    try {
        if (rr->parsed()) {
            Config stored = Config::parse_file(prov_path);
            return run_config(stored);
        }
        for (auto* sub : {fwd, rc, sw, md, bv, pr, rp})
            if (sub->parsed()) {
                cfg.set("command", sub->get_name());
                return run_config(cfg);
            }
        throw ConfigError("no subcommand");
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
