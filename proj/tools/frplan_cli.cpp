// frplan: plan passive-reflector placements and rotations, evaluate the
// resulting coverage, and emit plot-ready CSV tables.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "frplan/frplan.hpp"

namespace {

constexpr const char* kToolVersion = "1.0.0";

using namespace frplan;

struct CliOptions {
    std::string scenario_path;
    std::string out_path;
    std::optional<double> grid_step;
    std::optional<double> search_step;
    std::uint64_t seed = 0;
    unsigned threads = 0;
    std::string format = "csv";
    std::string scheme = "plan-mr"; // gain-map source
};

struct RunContext {
    Scenario scenario;
    std::uint64_t scenario_hash = 0;
    CliOptions opts;

    double grid_step() const { return scenario.options.grid_step_m; }
    double search_step() const { return scenario.options.search_step_m; }
    unsigned threads() const {
        if (opts.threads > 0) return opts.threads;
        const unsigned hw = std::thread::hardware_concurrency();
        return hw > 0 ? hw : 1;
    }
};

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string fmt_full(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt_deg(double rad) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f", rad * 180.0 / M_PI);
    return buf;
}

class TableWriter {
  public:
    TableWriter(const RunContext& ctx, const std::string& subcommand) {
        if (!ctx.opts.out_path.empty()) {
            file_.open(ctx.opts.out_path);
            if (!file_)
                throw Error(Errc::invalid_parameter, "cannot open output file: " + ctx.opts.out_path);
        }
        char meta[160];
        std::snprintf(meta, sizeof meta, "# frplan %s subcommand=%s scenario=%016llx seed=%llu",
                      kToolVersion, subcommand.c_str(),
                      static_cast<unsigned long long>(ctx.scenario_hash),
                      static_cast<unsigned long long>(ctx.opts.seed));
        out() << meta << "\n";
    }

    std::ostream& out() { return file_.is_open() ? file_ : std::cout; }

    void comment(const std::string& line) { out() << "# " << line << "\n"; }
    void header(const std::string& columns) { out() << columns << "\n"; }
    void row(const std::vector<std::string>& cells) {
        auto& o = out();
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) o << ',';
            o << cells[i];
        }
        o << "\n";
    }

  private:
    std::ofstream file_;
};

const PlanarPoint& require_point(const RunContext& ctx) {
    if (!ctx.scenario.point)
        throw Error(Errc::invalid_parameter, "this subcommand needs a point target scenario");
    return *ctx.scenario.point;
}

const TargetArea& require_area(const RunContext& ctx) {
    if (!ctx.scenario.area)
        throw Error(Errc::invalid_parameter, "this subcommand needs an area target scenario");
    return *ctx.scenario.area;
}

Interval area_corridor(const Scenario& s, const TargetArea& area) {
    return {specular_placement(s.tx, area.lower_left()),
            specular_placement(s.tx, area.upper_right())};
}

double poses_power_dbm(const RunContext& ctx, const std::vector<ReflectorPose>& poses,
                       PlanarPoint r) {
    return dbm_presentation(receive_power_w(ctx.scenario.link_budget(), poses, r));
}

void write_pose_table(TableWriter& w, const std::vector<ReflectorPose>& poses,
                      const std::vector<LobePair>& lobes) {
    w.header("index,x_m,omega_rad,omega_deg,lobe_left_x,lobe_left_y,lobe_right_x,lobe_right_y");
    for (std::size_t i = 0; i < poses.size(); ++i) {
        const LobePair anchors = i < lobes.size() ? lobes[i] : LobePair{};
        w.row({std::to_string(i + 1), fmt(poses[i].x), fmt_full(poses[i].omega),
               fmt_deg(poses[i].omega), fmt(anchors.left.x), fmt(anchors.left.y),
               fmt(anchors.right.x), fmt(anchors.right.y)});
    }
}

// --- subcommands ----------------------------------------------------------

void run_sweep(const RunContext& ctx, bool rotatable) {
    const PlanarPoint r = require_point(ctx);
    const Scenario& s = ctx.scenario;
    TableWriter w(ctx, rotatable ? "sweep-fr" : "sweep-mr");
    w.header(rotatable ? "x_m,omega_rad,omega_deg,receive_power_dbm" : "x_m,receive_power_dbm");
    const Interval span = default_fr_search_interval(s.tx, r);
    for (double x : scan_grid(span.lo, span.hi, ctx.search_step())) {
        if (rotatable) {
            const double omega = optimal_rotation(s.tx, x, r);
            w.row({fmt(x), fmt_full(omega), fmt_deg(omega),
                   fmt(poses_power_dbm(ctx, {{x, omega}}, r))});
        } else {
            w.row({fmt(x), fmt(poses_power_dbm(ctx, {{x, 0.0}}, r))});
        }
    }
}

void run_single_target(const RunContext& ctx) {
    const PlanarPoint r = require_point(ctx);
    const Scenario& s = ctx.scenario;
    const ReflectorDims dims = s.dims();
    TableWriter w(ctx, "single-target");
    // receive_power_dbm is the combined power of the design's full pose set,
    // repeated on member rows
    w.header("design,index,x_m,omega_rad,omega_deg,receive_power_dbm");

    auto emit = [&](const std::string& design, const std::vector<ReflectorPose>& poses) {
        const double dbm = poses_power_dbm(ctx, poses, r);
        for (std::size_t i = 0; i < poses.size(); ++i)
            w.row({design, std::to_string(i + 1), fmt(poses[i].x), fmt_full(poses[i].omega),
                   fmt_deg(poses[i].omega), fmt(dbm)});
    };

    emit("specular_mr", {{specular_placement(s.tx, r), 0.0}});
    emit("small_mr", {{small_reflector_placement(s.tx, r), 0.0}});
    emit("fr", {fr_single_target(s.tx, r, default_fr_search_interval(s.tx, r), ctx.search_step())});

    const PlacementSolution multi_mr =
        multi_mr_single_target(s.tx, r, dims, s.options.max_reflectors);
    emit("multi_mr", multi_mr.poses);
    const FrPlan multi_fr = multi_fr_single_target(
        s.tx, r, dims, static_cast<int>(multi_mr.poses.size()), ctx.search_step());
    emit("multi_fr", multi_fr.poses);
}

void run_area_single(const RunContext& ctx, bool rotatable) {
    const TargetArea& area = require_area(ctx);
    const Scenario& s = ctx.scenario;
    const ReflectorDims dims = s.dims();

    ReflectorPose pose;
    if (rotatable) {
        pose = single_fr_area(s.tx, area, dims, area_corridor(s, area), ctx.search_step(), 0.5);
    } else {
        pose = single_mr_area_placement(s.tx, area, dims, ctx.search_step(), 0.5).poses[0];
    }
    const DeltaExtrema ext = delta_extrema_area(pose.x, pose.omega, s.tx, area, 0.5);
    const double wc = min_sinc2_over_interval(ext.min_delta, ext.max_delta, dims.l1_norm());
    const double min_dbm = dbm_presentation(
        min_area_power_single_pose(s.link_budget(), pose, area, ctx.grid_step()));

    TableWriter w(ctx, rotatable ? "area-fr" : "area-mr");
    w.header("x_m,omega_rad,omega_deg,worst_case_array_factor,min_receive_power_dbm");
    w.row({fmt(pose.x), fmt_full(pose.omega), fmt_deg(pose.omega), fmt(wc), fmt(min_dbm)});
}

void run_plan(const RunContext& ctx, bool rotatable) {
    const TargetArea& area = require_area(ctx);
    const Scenario& s = ctx.scenario;
    const ReflectorDims dims = s.dims();

    std::vector<ReflectorPose> poses;
    std::vector<LobePair> lobes;
    double worst_gain = 0.0;
    if (rotatable) {
        const FrPlan plan = sequential_fr_area(s.tx, area, dims, {ctx.search_step()});
        poses = plan.poses;
        lobes = plan.lobe_anchors;
        const CoverageField field =
            evaluate_field(s.link_budget(), poses, area, ctx.grid_step(), ctx.threads());
        worst_gain = 1e300;
        for (const PowerSample& sample : field.samples)
            worst_gain = std::min(worst_gain, sample.gain);
    } else {
        const PlacementSolution sol = sequential_mr_area_placement(s.tx, area, dims, {ctx.grid_step()});
        poses = sol.poses;
        lobes = sol.lobes;
        worst_gain = sol.worst_case_metric;
    }

    TableWriter w(ctx, rotatable ? "plan-fr" : "plan-mr");
    w.comment("reflectors=" + std::to_string(poses.size()) + " worst_case_gain=" + fmt(worst_gain));
    write_pose_table(w, poses, lobes);
}

void run_gain_map(const RunContext& ctx) {
    const TargetArea& area = require_area(ctx);
    const Scenario& s = ctx.scenario;
    const ReflectorDims dims = s.dims();
    ScenarioContext bench = s.context();

    std::vector<ReflectorPose> poses;
    if (ctx.opts.scheme == "plan-mr") {
        poses = sequential_mr_area_placement(s.tx, area, dims, {ctx.grid_step()}).poses;
    } else if (ctx.opts.scheme == "plan-fr") {
        poses = sequential_fr_area(s.tx, area, dims, {ctx.search_step()}).poses;
    } else if (ctx.opts.scheme == "equal-mr") {
        const auto count = sequential_mr_area_placement(s.tx, area, dims, {ctx.grid_step()}).poses.size();
        poses = benchmark_poses(
            {SchemeKind::equal_spacing_mr, {}, 0.0, static_cast<int>(count)}, bench);
    } else if (ctx.opts.scheme == "equal-fr") {
        const auto count = sequential_fr_area(s.tx, area, dims, {ctx.search_step()}).poses.size();
        poses = benchmark_poses(
            {SchemeKind::equal_spacing_fr, {}, 0.0, static_cast<int>(count)}, bench);
    } else {
        throw Error(Errc::invalid_parameter, "unknown gain-map scheme: " + ctx.opts.scheme);
    }

    const CoverageField field =
        evaluate_field(s.link_budget(), poses, area, ctx.grid_step(), ctx.threads());
    TableWriter w(ctx, "gain-map");
    w.comment("scheme=" + ctx.opts.scheme + " reflectors=" + std::to_string(poses.size()));
    w.header("x_m,y_m,reflection_gain,receive_power_w,receive_power_dbm");
    for (const PowerSample& sample : field.samples)
        w.row({fmt(sample.location.x), fmt(sample.location.y), fmt(sample.gain),
               fmt_full(sample.power_w), fmt(dbm_presentation(sample.power_w))});
}

void run_cdf(const RunContext& ctx) {
    const TargetArea& area = require_area(ctx);
    const Scenario& s = ctx.scenario;
    const ReflectorDims dims = s.dims();
    ScenarioContext bench = s.context();

    const PlacementSolution mr = sequential_mr_area_placement(s.tx, area, dims, {ctx.grid_step()});
    const FrPlan fr = sequential_fr_area(s.tx, area, dims, {ctx.search_step()});
    const auto eq_mr = benchmark_poses(
        {SchemeKind::equal_spacing_mr, {}, 0.0, static_cast<int>(mr.poses.size())}, bench);
    const auto eq_fr = benchmark_poses(
        {SchemeKind::equal_spacing_fr, {}, 0.0, static_cast<int>(fr.poses.size())}, bench);

    TableWriter w(ctx, "cdf");
    w.comment("probability convention: i/N over the sampled grid");
    w.header("scheme,receive_power_dbm,probability");
    const std::pair<std::string, const std::vector<ReflectorPose>*> runs[] = {
        {"plan_mr", &mr.poses}, {"plan_fr", &fr.poses}, {"equal_mr", &eq_mr}, {"equal_fr", &eq_fr}};
    for (const auto& [name, poses] : runs) {
        const CoverageField field =
            evaluate_field(s.link_budget(), *poses, area, ctx.grid_step(), ctx.threads());
        for (const auto& [dbm, prob] : empirical_cdf(field))
            w.row({name, fmt(dbm), fmt(prob)});
    }
}

void run_region_sweep(const RunContext& ctx) {
    const PlanarPoint r = require_point(ctx);
    const Scenario& s = ctx.scenario;
    ScenarioContext bench = s.context();

    TableWriter w(ctx, "region-sweep");
    w.comment("movable region centered on the Tx x-coordinate");
    w.header("region_size_m,fpr_dbm,fprr_dbm,mr_dbm,fr_dbm");
    const double fpr = poses_power_dbm(ctx, benchmark_poses({SchemeKind::fpr}, bench), r);
    const double fprr = poses_power_dbm(ctx, benchmark_poses({SchemeKind::fprr}, bench), r);
    for (double size = 0.0; size <= s.options.region_size_m + 1e-9; size += 10.0) {
        const double mr = poses_power_dbm(
            ctx, benchmark_poses({SchemeKind::movable_region_mr, {}, size}, bench), r);
        const double fr = poses_power_dbm(
            ctx, benchmark_poses({SchemeKind::movable_region_fr, {}, size}, bench), r);
        w.row({fmt(size), fmt(fpr), fmt(fprr), fmt(mr), fmt(fr)});
    }
}

void run_benchmarks(const RunContext& ctx) {
    const Scenario& s = ctx.scenario;
    ScenarioContext bench = s.context();
    TableWriter w(ctx, "benchmarks");

    if (s.point) {
        const PlanarPoint r = *s.point;
        w.header("scheme,x_m,omega_rad,omega_deg,receive_power_dbm");
        const double region = s.options.region_size_m;
        const std::pair<std::string, BenchmarkScheme> schemes[] = {
            {"fpr", {SchemeKind::fpr}},
            {"fprr", {SchemeKind::fprr}},
            {"mr", {SchemeKind::movable_region_mr, {}, region}},
            {"fr", {SchemeKind::movable_region_fr, {}, region}},
        };
        for (const auto& [name, scheme] : schemes) {
            const auto poses = benchmark_poses(scheme, bench);
            w.row({name, fmt(poses[0].x), fmt_full(poses[0].omega), fmt_deg(poses[0].omega),
                   fmt(poses_power_dbm(ctx, poses, r))});
        }
        return;
    }

    const TargetArea& area = *s.area;
    const ReflectorDims dims = s.dims();
    const LinkBudgetConfig cfg = s.link_budget();
    w.header("scheme,reflectors,min_receive_power_dbm,median_receive_power_dbm");

    auto emit_multi = [&](const std::string& name, const std::vector<ReflectorPose>& poses) {
        const CoverageField field =
            evaluate_field(cfg, poses, area, ctx.grid_step(), ctx.threads());
        w.row({name, std::to_string(poses.size()),
               fmt(dbm_presentation(min_power(field).power_w)),
               fmt(dbm_presentation(median_power_w(field)))});
    };
    auto emit_single = [&](const std::string& name, ReflectorPose pose) {
        const ReflectorPose poses[1] = {pose};
        const CoverageField field =
            evaluate_field(cfg, poses, area, ctx.grid_step(), ctx.threads());
        w.row({name, "1",
               fmt(dbm_presentation(min_area_power_single_pose(cfg, pose, area, ctx.grid_step()))),
               fmt(dbm_presentation(median_power_w(field)))});
    };

    emit_single("fpr", benchmark_poses({SchemeKind::fpr}, bench)[0]);
    emit_single("fprr", benchmark_poses({SchemeKind::fprr}, bench)[0]);
    emit_single("mr_single",
                single_mr_area_placement(s.tx, area, dims, ctx.search_step(), 0.5).poses[0]);
    emit_single("fr_single",
                single_fr_area(s.tx, area, dims, area_corridor(s, area), ctx.search_step(), 0.5));

    const PlacementSolution plan_mr = sequential_mr_area_placement(s.tx, area, dims, {ctx.grid_step()});
    const FrPlan plan_fr = sequential_fr_area(s.tx, area, dims, {ctx.search_step()});
    emit_multi("plan_mr", plan_mr.poses);
    emit_multi("plan_fr", plan_fr.poses);
    emit_multi("equal_mr",
               benchmark_poses({SchemeKind::equal_spacing_mr, {}, 0.0,
                                static_cast<int>(plan_mr.poses.size())}, bench));
    emit_multi("equal_fr",
               benchmark_poses({SchemeKind::equal_spacing_fr, {}, 0.0,
                                static_cast<int>(plan_fr.poses.size())}, bench));
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"passive-reflector placement and rotation planner"};
    app.require_subcommand(1);

    CliOptions opts;
    std::string pending;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--scenario", opts.scenario_path, "scenario file (JSON)")
            ->required()
            ->check(CLI::ExistingFile);
        sub->add_option("--out", opts.out_path, "output CSV path (default: stdout)");
        sub->add_option("--grid-step", opts.grid_step, "field grid step [m]");
        sub->add_option("--search-step", opts.search_step, "1D search step [m]");
        sub->add_option("--seed", opts.seed, "seed for randomized diagnostics");
        sub->add_option("--threads", opts.threads, "worker threads (0: all cores)");
        sub->add_option("--format", opts.format, "output format")->check(CLI::IsMember({"csv"}));
        return sub;
    };

    const char* names[] = {"sweep-mr",  "sweep-fr", "single-target", "area-mr",
                           "area-fr",   "plan-mr",  "plan-fr",       "gain-map",
                           "cdf",       "region-sweep", "benchmarks"};
    const char* descs[] = {
        "receive power vs placement, rotation fixed at zero",
        "receive power vs placement at the per-placement optimal rotation",
        "closed-form and searched single-target designs",
        "single-plate area placement (worst-case array factor)",
        "single-plate joint placement and rotation for an area",
        "sequential multi-plate placement plan",
        "sequential multi-plate placement and rotation plan",
        "per-location reflection gain and receive power",
        "empirical receive-power distribution, plans vs benchmarks",
        "receive power vs movable-region size against fixed benchmarks",
        "side-by-side scheme comparison",
    };
    for (std::size_t i = 0; i < std::size(names); ++i) {
        auto* sub = add_common(app.add_subcommand(names[i], descs[i]));
        if (std::string(names[i]) == "gain-map")
            sub->add_option("--scheme", opts.scheme,
                            "pose source: plan-mr, plan-fr, equal-mr, equal-fr");
        sub->callback([&, name = std::string(names[i])] { pending = name; });
    }

    CLI11_PARSE(app, argc, argv);

    try {
        RunContext ctx;
        const std::string raw = slurp_file(opts.scenario_path);
        ctx.scenario_hash = fnv1a64(raw);
        ctx.scenario = parse_scenario(opts.scenario_path);
        if (opts.grid_step) ctx.scenario.options.grid_step_m = *opts.grid_step;
        if (opts.search_step) ctx.scenario.options.search_step_m = *opts.search_step;
        ctx.opts = opts;

        if (pending == "sweep-mr") run_sweep(ctx, false);
        else if (pending == "sweep-fr") run_sweep(ctx, true);
        else if (pending == "single-target") run_single_target(ctx);
        else if (pending == "area-mr") run_area_single(ctx, false);
        else if (pending == "area-fr") run_area_single(ctx, true);
        else if (pending == "plan-mr") run_plan(ctx, false);
        else if (pending == "plan-fr") run_plan(ctx, true);
        else if (pending == "gain-map") run_gain_map(ctx);
        else if (pending == "cdf") run_cdf(ctx);
        else if (pending == "region-sweep") run_region_sweep(ctx);
        else if (pending == "benchmarks") run_benchmarks(ctx);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: internal: " << e.what() << "\n";
        return 4;
    }
    return 0;
}
