#include "app.hpp"

#include <algorithm>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "commands.hpp"
#include "ddae/errors.hpp"

namespace ddae::cli {

namespace {

void add_output_flags(CLI::App* cmd, RunContext& ctx) {
    cmd->add_option("--out", ctx.out_dir, "Output directory")->capture_default_str();
    cmd->add_option("--threads", ctx.threads, "Worker threads (0 = default, capped by DDAE_THREADS)");
}

void add_model_flags(CLI::App* cmd, ModelFlags& m) {
    cmd->add_option("--model", m.model, "Built-in model name or path to a model JSON file")->capture_default_str();
    cmd->add_option("--param", m.params, "Built-in parameter override key=value (repeatable)");
    cmd->add_option("--a", m.a, "Shortcut for --param a=<value>");
    cmd->add_option("--b", m.b, "Shortcut for --param b=<value>");
    cmd->add_option("--tau", m.tau, "Shortcut for --param tau=<value>");
    cmd->add_option("--beta", m.beta, "Shortcut for --param beta=<value>");
}

}  // namespace

int exit_code(const std::exception_ptr& ep) {
    try {
        std::rethrow_exception(ep);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFlags;
    } catch (const DimensionError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFlags;
    } catch (const PoleError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFlags;
    } catch (const NoConvergence& e) {
        std::cerr << "Newton failure";
        if (e.step()) {
            std::cerr << " at step " << *e.step();
        }
        std::cerr << ": " << e.what() << " (residual " << e.residual() << ")\n";
        return kExitNewton;
    } catch (const SingularIteration& e) {
        std::cerr << "Newton failure";
        if (e.step()) {
            std::cerr << " at step " << *e.step();
        }
        std::cerr << ": " << e.what() << '\n';
        return kExitNewton;
    } catch (const SingularJacobian& e) {
        std::cerr << "Newton failure: " << e.what() << '\n';
        return kExitNewton;
    } catch (const EigensolveError& e) {
        std::cerr << "eigensolver failure: " << e.what() << '\n';
        return kExitEigensolve;
    } catch (const NoSignChange& e) {
        std::cerr << "matching failure: " << e.what() << " (phi(lo) = " << e.phi_lo() << ", phi(hi) = " << e.phi_hi()
                  << ")\n";
        return kExitMatching;
    } catch (const TrackingLost& e) {
        std::cerr << "matching failure: " << e.what() << '\n';
        return kExitMatching;
    } catch (const ConvergenceError& e) {
        std::cerr << "matching failure: " << e.what() << '\n';
        return kExitMatching;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFailure;
    }
}

int run(const std::vector<std::string>& args) {
    CLI::App app{"Theta-method stability and deformation analysis for delay DAEs", "ddae-theta"};
    app.set_help_flag("--help", "Print this help message and exit");
    app.require_subcommand(1);
    app.set_version_flag("--version", DDAE_VERSION);

    RunContext ctx;
    ctx.argv = strip_out_flag(args);

    RegionOptions region;
    auto* c_region = app.add_subcommand("region", "Stability region of the scalar test equation");
    c_region->add_option("--theta", region.theta, "Theta in [0, 1]")->check(CLI::Range(0.0, 1.0))->capture_default_str();
    auto* preset = c_region->add_option("--preset", region.preset, "b-eq-0, a-eq-0, b-eq-a, a-eq-1.1b, b-eq-0.15a, a-eq-0.85b");
    c_region->add_option("--rule", region.rule, "Linear scan rule, e.g. b=0.15a or a=0.85b")->excludes(preset);
    c_region->add_option("--re-min", region.re_min)->capture_default_str();
    c_region->add_option("--re-max", region.re_max)->capture_default_str();
    c_region->add_option("--im-min", region.im_min)->capture_default_str();
    c_region->add_option("--im-max", region.im_max)->capture_default_str();
    c_region->add_option("--nx", region.nx, "Columns")->check(CLI::Range(2, 100000))->capture_default_str();
    c_region->add_option("--ny", region.ny, "Rows")->check(CLI::Range(2, 100000))->capture_default_str();
    c_region->add_option("--delay-steps", region.delay_steps, "Delay in steps (tau = k h)")
        ->check(CLI::Range(1, 10000))
        ->capture_default_str();
    add_output_flags(c_region, ctx);

    SimulateOptions sim;
    auto* c_sim = app.add_subcommand("simulate", "Fixed-step Theta integration");
    add_model_flags(c_sim, sim.model);
    c_sim->add_option("--theta", sim.theta)->check(CLI::Range(0.0, 1.0))->capture_default_str();
    c_sim->add_option("--h", sim.h, "Step size (s)")->check(CLI::PositiveNumber)->capture_default_str();
    c_sim->add_option("--t-end", sim.t_end, "Final time (s)")->check(CLI::PositiveNumber)->capture_default_str();
    c_sim->add_option("--event", sim.events, "t=<time>,kick=<dx1> or x<i>=/y<i>= offsets (repeatable)");
    c_sim->add_option("--tail", sim.tail, "Trajectory fraction used for the growth-rate fit")
        ->check(CLI::Range(0.01, 1.0))
        ->capture_default_str();
    add_output_flags(c_sim, ctx);

    PencilOptions pen;
    auto* c_pen = app.add_subcommand("pencil", "Exact and Theta-deformed spectra");
    add_model_flags(c_pen, pen.model);
    c_pen->add_option("--theta", pen.theta)->check(CLI::Range(0.0, 1.0))->capture_default_str();
    c_pen->add_option("--h", pen.h, "Step size (s)")->check(CLI::PositiveNumber)->capture_default_str();
    c_pen->add_option("--N", pen.N, "Collocation degree")->check(CLI::Range(5, 400))->capture_default_str();
    c_pen->add_option("--sigma-min", pen.sigma_min, "Left edge of the exact-root window");
    c_pen->add_option("--h-ref", pen.h_ref, "Grid step for the exact spectrum")->check(CLI::PositiveNumber);
    c_pen->add_option("--radius", pen.radius, "Relative matching radius")->check(CLI::PositiveNumber)->capture_default_str();
    c_pen->add_option("--h-sweep", pen.h_sweep, "lo:hi:logN or lo:hi:linN");
    add_output_flags(c_pen, ctx);

    ThetaMatchOptionsCli tm;
    auto* c_tm = app.add_subcommand("theta-match", "Theta that restores the exact damping ratio");
    add_model_flags(c_tm, tm.model);
    c_tm->add_option("--h-list", tm.h_list, "Comma-separated step sizes")->capture_default_str();
    c_tm->add_option("--target", tm.target, "rightmost or re,im")->capture_default_str();
    c_tm->add_option("--lo", tm.lo)->check(CLI::Range(0.0, 1.0))->capture_default_str();
    c_tm->add_option("--hi", tm.hi)->check(CLI::Range(0.0, 1.0))->capture_default_str();
    c_tm->add_option("--step", tm.step, "Continuation step in theta")->check(CLI::PositiveNumber)->capture_default_str();
    c_tm->add_option("--N", tm.N, "Collocation degree")->check(CLI::Range(5, 400))->capture_default_str();
    c_tm->add_option("--h-ref", tm.h_ref, "Grid step for the exact spectrum")->check(CLI::PositiveNumber);
    add_output_flags(c_tm, ctx);

    std::string manifest_path;
    std::optional<std::string> replay_out;
    auto* c_replay = app.add_subcommand("replay", "Re-run a manifest and compare outputs");
    c_replay->add_option("manifest", manifest_path, "manifest.json of an earlier run")->required();
    c_replay->add_option("--out", replay_out, "Output directory (default: the manifest's directory)");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitFlags;
    }

    try {
        if (*c_region) {
            return cmd_region(region, ctx);
        }
        if (*c_sim) {
            return cmd_simulate(sim, ctx);
        }
        if (*c_pen) {
            return cmd_pencil(pen, ctx);
        }
        if (*c_tm) {
            return cmd_theta_match(tm, ctx);
        }
        std::optional<std::filesystem::path> out;
        if (replay_out) {
            out = *replay_out;
        }
        return cmd_replay(manifest_path, out);
    } catch (...) {
        return exit_code(std::current_exception());
    }
}

}  // namespace ddae::cli
