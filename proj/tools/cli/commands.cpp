#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>

#include "app.hpp"
#include "ddae/csv.hpp"
#include "ddae/errors.hpp"
#include "ddae/parallel.hpp"
#include "ddae/raster_io.hpp"
#include "ddae/spectrum.hpp"
#include "ddae/theta_match.hpp"

namespace ddae::cli {

namespace {

using nlohmann::json;

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json complex_json(Complex s) { return json::array({number_or_null(s.real()), number_or_null(s.imag())}); }

void write_json(const json& j, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw Error("cannot write " + path.string());
    }
    out << j.dump(2) << '\n';
}

void prepare(const RunContext& ctx) { std::filesystem::create_directories(ctx.out_dir); }

void finish(RunContext& ctx, const std::string& command, json params, const std::string& model_hash,
            std::vector<std::string> outputs) {
    RunManifest m;
    m.command = command;
    m.argv = ctx.argv;
    m.params = std::move(params);
    m.model_hash = model_hash;
    m.version = DDAE_VERSION;
    m.wall_time = ctx.clock.seconds();
    m.outputs = std::move(outputs);
    write_manifest(std::move(m), ctx.out_dir);
}

json model_json(const ModelSource& src) {
    return {{"name", src.name()}, {"hash", src.hash_hex()}, {"definition", json::parse(src.canonical_json())}};
}

double max_re(const EigenSpectrum& spec) {
    return spec.empty() ? -std::numeric_limits<double>::infinity() : spec.roots.front().real();
}

int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

// Rightmost root in the closed upper half plane.
std::optional<Complex> rightmost_upper(const EigenSpectrum& spec) {
    std::optional<Complex> best;
    for (const auto& s : spec.roots) {
        if (s.imag() >= 0.0 && (!best || s.real() > best->real())) {
            best = s;
        }
    }
    return best;
}

Complex nearest(const EigenSpectrum& spec, Complex to) {
    Complex best = spec.roots.front();
    for (const auto& s : spec.roots) {
        if (std::abs(s - to) < std::abs(best - to)) {
            best = s;
        }
    }
    return best;
}

EigenSpectrum exact_for(const ModelSource& src, double h_ref, int N, std::optional<double> sigma_min) {
    ExactSpectrumOptions o;
    o.N = N;
    o.sigma_min = sigma_min;
    return exact_spectrum(src.linear_model(h_ref), o);
}

}  // namespace

// ---------------------------------------------------------------------------

int cmd_region(const RegionOptions& opt, RunContext& ctx) {
    if (!opt.preset.empty() && !opt.rule.empty()) {
        throw ConfigError("give either --preset or --rule, not both");
    }
    const ScanRule scan = !opt.rule.empty() ? ScanRule::parse(opt.rule)
                                            : ScanRule::preset(opt.preset.empty() ? "b-eq-0" : opt.preset);
    RasterBounds bounds{opt.re_min, opt.re_max, opt.im_min, opt.im_max, opt.nx, opt.ny};
    const StabilityRaster raster = stability_raster(bounds, opt.theta, scan, opt.delay_steps, ctx.threads);

    prepare(ctx);
    write_raster_csv(raster, ctx.out_dir / "region.csv");
    write_raster_pgm(raster, ctx.out_dir / "region.pgm");

    const auto stable = std::count(raster.stable_mask.begin(), raster.stable_mask.end(), 1);
    std::cout << "region " << scan.name << " theta=" << format_real(opt.theta) << ": " << stable << " of "
              << raster.values.size() << " cells stable\n";

    const json params = {{"theta", opt.theta},   {"scan", scan.name},   {"re_min", opt.re_min},
                         {"re_max", opt.re_max}, {"im_min", opt.im_min}, {"im_max", opt.im_max},
                         {"nx", opt.nx},         {"ny", opt.ny},         {"delay_steps", opt.delay_steps}};
    finish(ctx, "region", params, "", {"region.csv", "region.pgm"});
    return kExitOk;
}

// ---------------------------------------------------------------------------

int cmd_simulate(const SimulateOptions& opt, RunContext& ctx) {
    const ModelSource src = opt.model.load();
    const DdaeSystem sys = src.system();
    const ThetaParams p(opt.theta, opt.h);

    SimulationOptions so;
    for (const auto& e : opt.events) {
        so.events.push_back(parse_event(e, sys.nu(), sys.mu()));
    }
    const SimulationResult res = simulate(sys, p, opt.t_end, so);

    prepare(ctx);
    write_trajectory_csv(res, ctx.out_dir / "trajectory.csv");

    long long total = 0;
    int most = 0;
    for (int it : res.newton_iters) {
        total += it;
        most = std::max(most, it);
    }
    json growth = nullptr;
    try {
        growth = growth_rate(res, opt.tail);
    } catch (const ConfigError&) {
    }
    const bool diverged = res.status == SimulationStatus::Diverged;
    json run = {
        {"model", model_json(src)},
        {"theta", opt.theta},
        {"h", opt.h},
        {"t_end", opt.t_end},
        {"steps", res.newton_iters.size()},
        {"status", diverged ? "diverged" : "completed"},
        {"diverged_step", diverged ? json(*res.diverged_step) : json(nullptr)},
        {"newton", {{"total_iterations", total},
                    {"max_iterations", most},
                    {"mean_iterations", res.newton_iters.empty() ? 0.0 : double(total) / res.newton_iters.size()}}},
        {"max_g_residual", res.max_g_residual},
        {"growth_rate", growth},
        {"events", opt.events},
    };
    write_json(run, ctx.out_dir / "run.json");

    std::cout << "simulate " << src.name() << ": " << (diverged ? "diverged" : "completed") << " after "
              << res.newton_iters.size() << " steps";
    if (growth.is_number()) {
        std::cout << ", growth rate " << format_real(growth.get<double>()) << " 1/s";
    }
    std::cout << '\n';

    const json params = {{"model", model_json(src)}, {"theta", opt.theta}, {"h", opt.h},
                         {"t_end", opt.t_end},       {"events", opt.events}, {"tail", opt.tail}};
    finish(ctx, "simulate", params, src.hash_hex(), {"trajectory.csv", "run.json"});
    return kExitOk;
}

// ---------------------------------------------------------------------------

int cmd_pencil(const PencilOptions& opt, RunContext& ctx) {
    const ModelSource src = opt.model.load();
    const double h_ref = opt.h_ref ? *opt.h_ref : reference_step(src, opt.h);
    const EigenSpectrum exact = exact_for(src, h_ref, opt.N, opt.sigma_min);
    (void)ThetaParams(opt.theta, opt.h);

    json params = {{"model", model_json(src)}, {"theta", opt.theta}, {"h", opt.h}, {"h_ref", h_ref},
                   {"N", opt.N},               {"radius", opt.radius}};
    params["sigma_min"] = opt.sigma_min ? json(*opt.sigma_min) : json(nullptr);

    json exact_summary = {{"count", exact.size()},
                          {"max_re", number_or_null(max_re(exact))},
                          {"rightmost", exact.empty() ? json(nullptr) : complex_json(exact.roots.front())},
                          {"unrefined", exact.unrefined.size()}};
    try {
        exact_summary["stiffness_ratio"] = stiffness_ratio(exact);
    } catch (const DegenerateSpectrum&) {
        exact_summary["stiffness_ratio"] = nullptr;
    }

    prepare(ctx);
    write_spectrum_csv(exact, ctx.out_dir / "exact.csv");

    if (!opt.h_sweep.empty()) {
        const std::vector<double> hs = parse_sweep(opt.h_sweep);
        const auto target = rightmost_upper(exact);
        struct Row {
            Complex rightmost;
            Complex tracked;
            bool has_tracked = false;
        };
        std::vector<Row> rows(hs.size());
        parallel_for(hs.size(), ctx.threads, [&](std::size_t i) {
            const DiscretePencil dp = build_discrete_pencil(src.linear_model(hs[i]), ThetaParams(opt.theta, hs[i]));
            const EigenSpectrum d = deformed_spectrum(dp);
            if (d.empty()) {
                return;
            }
            rows[i].rightmost = d.roots.front();
            if (target) {
                rows[i].tracked = nearest(d, *target);
                rows[i].has_tracked = true;
            }
        });

        CsvWriter csv(ctx.out_dir / "sweep.csv", {"h", "re_max_deformed", "im_max_deformed", "re_max_exact",
                                                  "re_tracked", "im_tracked", "zeta", "zeta_hat", "sign_agree"});
        int disagreements = 0;
        for (std::size_t i = 0; i < hs.size(); ++i) {
            const bool agree = sign_of(rows[i].rightmost.real()) == sign_of(max_re(exact));
            disagreements += agree ? 0 : 1;
            csv.field(hs[i]).field(rows[i].rightmost.real()).field(rows[i].rightmost.imag()).field(max_re(exact));
            if (rows[i].has_tracked) {
                csv.field(rows[i].tracked.real()).field(rows[i].tracked.imag());
                csv.field(damping_ratio(*target)).field(damping_ratio(rows[i].tracked));
            } else {
                csv.field("").field("").field("").field("");
            }
            csv.field(static_cast<long long>(agree ? 1 : 0));
            csv.end_row();
        }
        csv.close();
        const json summary = {{"model", model_json(src)},
                              {"theta", opt.theta},
                              {"h_sweep", opt.h_sweep},
                              {"h_ref", h_ref},
                              {"exact", exact_summary},
                              {"sign_disagreements", disagreements}};
        write_json(summary, ctx.out_dir / "summary.json");
        std::cout << "pencil sweep over " << hs.size() << " steps: " << disagreements
                  << " step(s) where the rightmost real part changes sign\n";
        params["h_sweep"] = opt.h_sweep;
        finish(ctx, "pencil", params, src.hash_hex(), {"exact.csv", "sweep.csv", "summary.json"});
        return kExitOk;
    }

    const DiscretePencil dp = build_discrete_pencil(src.linear_model(opt.h), ThetaParams(opt.theta, opt.h));
    const EigenSpectrum deformed = deformed_spectrum(dp);
    const DeformationReport report = deformation_report(exact, deformed, opt.radius);
    write_spectrum_csv(deformed, ctx.out_dir / "deformed.csv");
    write_report_csv(report, ctx.out_dir / "report.csv");

    const double re_exact = max_re(exact);
    const double re_deformed = max_re(deformed);
    const json summary = {
        {"model", model_json(src)},
        {"theta", opt.theta},
        {"h", opt.h},
        {"h_ref", h_ref},
        {"exact", exact_summary},
        {"deformed",
         {{"count", deformed.size()},
          {"max_re", number_or_null(re_deformed)},
          {"rightmost", deformed.empty() ? json(nullptr) : complex_json(deformed.roots.front())}}},
        {"sign_max_re_exact", sign_of(re_exact)},
        {"sign_max_re_deformed", sign_of(re_deformed)},
        {"report", json::parse(report_summary_json(report))},
    };
    write_json(summary, ctx.out_dir / "summary.json");

    std::cout << "pencil " << src.name() << ": max Re s = " << format_real(re_exact)
              << ", max Re s_hat = " << format_real(re_deformed) << '\n';
    finish(ctx, "pencil", params, src.hash_hex(), {"exact.csv", "deformed.csv", "report.csv", "summary.json"});
    return kExitOk;
}

// ---------------------------------------------------------------------------

int cmd_theta_match(const ThetaMatchOptionsCli& opt, RunContext& ctx) {
    const ModelSource src = opt.model.load();
    const std::vector<double> hs = parse_list(opt.h_list);
    const TargetSelector sel = parse_target(opt.target);
    const double h_ref = opt.h_ref ? *opt.h_ref : reference_step(src, hs.front());
    const EigenSpectrum exact = exact_for(src, h_ref, opt.N, std::nullopt);
    if (exact.empty()) {
        throw EigensolveError("no exact roots found in the window");
    }
    const Complex target = sel.rightmost ? rightmost_upper(exact).value_or(exact.roots.front())
                                         : nearest(exact, sel.point);

    ThetaMatchOptions tmo;
    tmo.lo = opt.lo;
    tmo.hi = opt.hi;
    tmo.continuation_step = opt.step;
    if (!(tmo.lo >= 0.0 && tmo.hi <= 1.0 && tmo.lo < tmo.hi)) {
        throw ConfigError("theta range must satisfy 0 <= lo < hi <= 1");
    }

    struct Row {
        std::string status = "ok";
        std::string message;
        ThetaMatchResult result;
        double phi_lo = std::numeric_limits<double>::quiet_NaN();
        double phi_hi = std::numeric_limits<double>::quiet_NaN();
    };
    std::vector<Row> rows(hs.size());
    parallel_for(hs.size(), ctx.threads, [&](std::size_t i) {
        try {
            rows[i].result = theta_match(src.linear_model(hs[i]), target, hs[i], tmo);
        } catch (const NoSignChange& e) {
            rows[i].status = "no_sign_change";
            rows[i].message = e.what();
            rows[i].phi_lo = e.phi_lo();
            rows[i].phi_hi = e.phi_hi();
        } catch (const TrackingLost& e) {
            rows[i].status = "tracking_lost";
            rows[i].message = e.what();
        } catch (const ConvergenceError& e) {
            rows[i].status = "no_convergence";
            rows[i].message = e.what();
        }
    });

    prepare(ctx);
    CsvWriter csv(ctx.out_dir / "theta_match.csv",
                  {"h", "status", "theta_zeta", "zeta", "zeta_hat", "phi", "re_exact", "im_exact", "re_deformed",
                   "im_deformed", "bisections", "phi_lo", "phi_hi"});
    bool failed = false;
    for (std::size_t i = 0; i < hs.size(); ++i) {
        const Row& r = rows[i];
        csv.field(hs[i]).field(r.status);
        if (r.status == "ok") {
            const auto& m = r.result;
            csv.field(m.theta).field(m.zeta).field(m.zeta_hat).field(m.phi);
            csv.field(m.exact.real()).field(m.exact.imag()).field(m.deformed.real()).field(m.deformed.imag());
            csv.field(static_cast<long long>(m.bisections)).field("").field("");
            std::cout << "h=" << format_real(hs[i]) << " theta_zeta=" << format_real(m.theta) << '\n';
        } else {
            failed = true;
            csv.field("").field(damping_ratio(target)).field("").field("");
            csv.field(target.real()).field(target.imag()).field("").field("").field("");
            csv.field(r.phi_lo).field(r.phi_hi);
            std::cerr << "h=" << format_real(hs[i]) << ": " << r.message;
            if (r.status == "no_sign_change") {
                std::cerr << " (phi(lo) = " << format_real(r.phi_lo) << ", phi(hi) = " << format_real(r.phi_hi)
                          << ")";
            }
            std::cerr << '\n';
        }
        csv.end_row();
    }
    csv.close();

    const json params = {{"model", model_json(src)}, {"h_list", opt.h_list}, {"target", opt.target},
                         {"lo", opt.lo},             {"hi", opt.hi},         {"step", opt.step},
                         {"N", opt.N},               {"h_ref", h_ref}};
    finish(ctx, "theta-match", params, src.hash_hex(), {"theta_match.csv"});
    return failed ? kExitMatching : kExitOk;
}

// ---------------------------------------------------------------------------

int cmd_replay(const std::filesystem::path& manifest_path, const std::optional<std::filesystem::path>& out_dir) {
    const RunManifest m = read_manifest(manifest_path);
    const std::filesystem::path dir = out_dir ? *out_dir : manifest_path.parent_path();
    std::vector<std::string> args = m.argv;
    args.push_back("--out");
    args.push_back(dir.empty() ? "." : dir.string());
    const int code = run(args);
    if (code != kExitOk && code != kExitMatching) {
        return code;
    }
    int mismatches = 0;
    for (std::size_t i = 0; i < m.outputs.size(); ++i) {
        const std::string now = file_hash(dir / m.outputs[i]);
        if (now != m.output_hashes[i]) {
            std::cerr << "replay mismatch: " << m.outputs[i] << '\n';
            ++mismatches;
        }
    }
    if (mismatches > 0) {
        return kExitFailure;
    }
    std::cout << "replay identical: " << m.outputs.size() << " file(s)\n";
    return code;
}

}  // namespace ddae::cli
