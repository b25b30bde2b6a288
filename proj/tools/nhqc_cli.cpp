// nhqc: run the built-in passages and print their checks.
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "nhqc/nhqc.hpp"

namespace {

struct Overrides {
    std::string config_path;
    std::optional<std::string> scenario;
    std::optional<std::string> direction;
    std::optional<int> loops;
    std::optional<double> T;
    std::optional<double> dt;
    std::optional<double> tolerance;
    std::optional<double> gamma_scale;
    std::optional<double> omega_scale;
    std::optional<std::string> csv;
    std::optional<std::string> svg;
};

void add_common(CLI::App* app, Overrides& o) {
    app->add_option("--config", o.config_path, "key = value file; flags override it");
    app->add_option("--T", o.T, "stage half-length T");
    app->add_option("--dt", o.dt, "integrator step (default T/2000)");
    app->add_option("--tolerance", o.tolerance, "population tolerance of the checks");
    app->add_option("--gamma-scale", o.gamma_scale, "multiplier on the gain/loss rates");
    app->add_option("--omega-scale", o.omega_scale, "multiplier on the synthesized drive");
    app->add_option("--csv", o.csv, "write the trajectory as CSV");
    app->add_option("--svg", o.svg, "write a population plot as SVG");
}

nhqc::ScenarioConfig resolve(const Overrides& o, nhqc::ScenarioId fallback) {
    nhqc::ScenarioConfig c;
    c.id = fallback;
    if (!o.config_path.empty()) c = nhqc::load_config(o.config_path, c);
    if (o.scenario) nhqc::apply_config_value(c, "scenario", *o.scenario);
    if (o.direction) nhqc::apply_config_value(c, "direction", *o.direction);
    if (o.loops) c.loops = *o.loops;
    if (o.T) c.T = *o.T;
    if (o.dt) c.dt = *o.dt;
    if (o.tolerance) c.tolerance = *o.tolerance;
    if (o.gamma_scale) c.gamma_scale = *o.gamma_scale;
    if (o.omega_scale) c.omega_scale = *o.omega_scale;
    if (o.csv) c.csv_path = *o.csv;
    if (o.svg) c.svg_path = *o.svg;
    return c;
}

void print_report(const nhqc::RunReport& r) {
    std::printf("scenario %s  T=%g  dt=%g", nhqc::to_string(r.config.id), r.config.T, r.trajectory.grid.dt());
    if (nhqc::is_cyclic(r.config.id)) std::printf("  loops=%d", r.config.loops);
    std::printf("\n");
    for (const auto& cp : r.checkpoints) {
        std::printf("  t/T=%-6g", cp.t / r.config.T);
        for (std::size_t n = 0; n < cp.populations.size(); ++n)
            std::printf("  %s=%.9f", r.level_names[n].c_str(), cp.populations[n]);
        std::printf("  total=%.9f\n", cp.total);
    }
    for (const auto& c : r.checks) {
        if (c.relation == "~")
            std::printf("[%s] %-34s %.3e  (target %g +- %g)\n", c.passed ? "PASS" : "FAIL", c.name.c_str(), c.value,
                        c.threshold, c.band);
        else
            std::printf("[%s] %-34s %.3e  (%s %g)\n", c.passed ? "PASS" : "FAIL", c.name.c_str(), c.value,
                        c.relation.c_str(), c.threshold);
    }
    std::printf("%s\n", r.passed() ? "all checks passed" : "some checks FAILED");
}

int finish(const nhqc::RunReport& r) {
    if (!r.config.csv_path.empty()) nhqc::export_csv(r, r.config.csv_path);
    if (!r.config.svg_path.empty()) nhqc::export_svg(r, r.config.svg_path);
    print_report(r);
    return r.passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Non-Hermitian passage simulator"};
    app.require_subcommand(1);

    Overrides two, cyc, ver;
    auto* two_cmd = app.add_subcommand("two-level", "two-level transfer (scenario a, b, c or d)");
    add_common(two_cmd, two);
    two_cmd->add_option("--scenario", two.scenario, "a|b|c|d")
        ->check(CLI::IsMember({"a", "b", "c", "d", "custom"}));

    auto* cyc_cmd = app.add_subcommand("cyclic", "cyclic three-level transfer");
    add_common(cyc_cmd, cyc);
    cyc_cmd->add_option("--direction", cyc.direction, "cw|ccw")->check(CLI::IsMember({"cw", "ccw"}));
    cyc_cmd->add_option("--loops", cyc.loops, "number of loops")->check(CLI::PositiveNumber);

    auto* ver_cmd = app.add_subcommand("verify", "full residual suite on one scenario");
    add_common(ver_cmd, ver);
    ver_cmd->add_option("--scenario", ver.scenario, "a|b|c|d|cw|ccw");
    ver_cmd->add_option("--direction", ver.direction, "cw|ccw")->check(CLI::IsMember({"cw", "ccw"}));
    ver_cmd->add_option("--loops", ver.loops, "number of loops")->check(CLI::PositiveNumber);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*two_cmd) {
            const auto c = resolve(two, nhqc::ScenarioId::two_level_a);
            return finish(nhqc::run_two_level(c));
        }
        if (*cyc_cmd) {
            const auto c = resolve(cyc, nhqc::ScenarioId::cyclic_cw);
            return finish(nhqc::run_cyclic(c));
        }
        const auto c = resolve(ver, nhqc::ScenarioId::two_level_a);
        return finish(nhqc::verify(c));
    } catch (const nhqc::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
