// Command-line front end: computes, transforms, audits, and benchmarks
// tournament schedules. Exit codes: 0 satisfiable / criteria hold,
// 1 infeasible / criteria violated, 2 solver timeout, 3 usage or I/O errors.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "fightsched/fightsched.hpp"

namespace {

using namespace fightsched;

int log_level() {
    static int level = [] {
        const char* env = std::getenv("FIGHT_SCHEDULER_LOG");
        return env ? std::atoi(env) : 0;
    }();
    return level;
}

void log_info(const std::string& msg) {
    if (log_level() >= 1) std::cerr << "[fight-scheduler] " << msg << "\n";
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

struct CriteriaFlags {
    bool fair = false, weak = false, strong = false, no_fairness = false;
    bool non_coop = false, allow_coop = false, order_fair = false;

    // default target: fair and non-cooperative
    FairnessCriteria resolve() const {
        FairnessCriteria c;
        c.level = FairnessLevel::fair;
        if (weak) c.level = FairnessLevel::weak;
        if (strong) c.level = FairnessLevel::strong;
        if (no_fairness) c.level = FairnessLevel::none;
        c.non_cooperative = !allow_coop;
        c.order_fair = order_fair;
        return c;
    }

    void attach(CLI::App* cmd) {
        cmd->add_flag("--fair", fair, "require fairness in all 3 rounds (default)");
        cmd->add_flag("--weak", weak, "require fairness in rounds 1-2 only");
        cmd->add_flag("--strong", strong, "require every problem met at most once");
        cmd->add_flag("--no-fairness", no_fairness, "feasibility only");
        cmd->add_flag("--non-coop", non_coop, "forbid same-school Fights (default)");
        cmd->add_flag("--allow-coop", allow_coop, "permit same-school Fights");
        cmd->add_flag("--order-fair", order_fair, "require three distinct stages per team");
    }
};

Instance load_instance(const std::string& path, const std::string& rooms_arg,
                       const std::string& policy_arg) {
    Instance inst = parse_instance(read_file(path));
    if (!rooms_arg.empty()) {
        inst.room_plan = detail::parse_int_list(rooms_arg, "room size");
        inst.check();
    } else if (!policy_arg.empty()) {
        auto policy = room_policy_from_name(policy_arg);
        if (!policy) throw std::runtime_error("unknown policy '" + policy_arg + "'");
        inst.room_plan = room_plan_for(inst.team_count(), *policy);
        inst.check();
    }
    if (inst.room_plan.empty())
        throw std::runtime_error("instance has no room plan; pass --rooms or --policy");
    return inst;
}

int exit_code_for(SolveStatus status) {
    switch (status) {
        case SolveStatus::satisfiable: return 0;
        case SolveStatus::infeasible: return 1;
        case SolveStatus::timeout: return 2;
    }
    return 3;
}

void print_report(const Instance& inst, const ValidationReport& report, const std::string& format) {
    if (format == "json") {
        std::cout << report_json(inst, report).dump(2) << "\n";
    } else {
        for (const auto& line : report_lines(inst, report)) std::cout << line << "\n";
    }
}

void emit_schedule(const Instance& inst, const Schedule& sched, const std::string& format,
                   const std::string& out_path, const ValidationReport* report) {
    ScheduleFormat fmt = ScheduleFormat::machine;
    if (auto f = schedule_format_from_name(format)) fmt = *f;
    std::vector<std::string> footer;
    if (report) footer = report_lines(inst, *report);
    std::string text = render_schedule(inst, sched, fmt, report ? &footer : nullptr);
    if (out_path.empty()) std::cout << text;
    else write_file(out_path, text);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fair schedules for 3-round problem-portfolio tournaments"};
    app.require_subcommand(1);

    std::string instance_path, schedule_path, out_path, rooms_arg, policy_arg = "";
    std::string format = "machine";
    std::string region_arg = "bratislava";
    double time_limit = 300.0;
    std::uint64_t seed = 0;
    int count = 50, jobs = 1;
    bool best_effort = false, use_simple = false, resample = false, dump_graph = false;
    CriteriaFlags crit;

    auto add_common = [&](CLI::App* cmd, bool with_solver) {
        cmd->add_option("-o,--output", out_path, "output file (default stdout)");
        cmd->add_option("--format", format, "table|machine|json")->default_str("machine");
        if (with_solver) {
            cmd->add_option("--time-limit", time_limit, "seconds before giving up")->default_val(300.0);
            cmd->add_option("--seed", seed, "search-order seed");
        }
    };

    auto* cmd_schedule = app.add_subcommand("schedule", "compute a schedule for an instance");
    cmd_schedule->add_option("instance", instance_path)->required();
    cmd_schedule->add_option("--rooms", rooms_arg, "explicit room sizes, e.g. 4,4,4,3");
    cmd_schedule->add_option("--policy", policy_arg, "international|min-rooms");
    cmd_schedule->add_flag("--best-effort", best_effort, "try strong, then fair, then weak");
    cmd_schedule->add_flag("--simple", use_simple, "constructive fixed-rooms schedule");
    crit.attach(cmd_schedule);
    add_common(cmd_schedule, true);

    auto* cmd_validate = app.add_subcommand("validate", "audit a schedule against an instance");
    cmd_validate->add_option("instance", instance_path)->required();
    cmd_validate->add_option("schedule", schedule_path)->required();
    crit.attach(cmd_validate);
    cmd_validate->add_option("--format", format, "text|json")->default_str("text");

    auto* cmd_order_fair = app.add_subcommand("order-fair", "rewrite stages to be order fair");
    cmd_order_fair->add_option("instance", instance_path)->required();
    cmd_order_fair->add_option("schedule", schedule_path)->required();
    add_common(cmd_order_fair, false);

    auto* cmd_simple = app.add_subcommand("simple", "constructive fixed-rooms schedule");
    cmd_simple->add_option("instance", instance_path)->required();
    cmd_simple->add_flag("--dump-graph", dump_graph, "print the team-problem graph edges to stderr");
    add_common(cmd_simple, false);

    auto* cmd_export = app.add_subcommand("export-lp", "write the constraint model in LP format");
    cmd_export->add_option("instance", instance_path)->required();
    cmd_export->add_option("--rooms", rooms_arg, "explicit room sizes");
    cmd_export->add_option("--policy", policy_arg, "international|min-rooms");
    crit.attach(cmd_export);
    cmd_export->add_option("-o,--output", out_path, "output .lp file (default stdout)");

    auto* cmd_generate = app.add_subcommand("generate", "sample a random instance");
    cmd_generate->add_option("--region", region_arg, "bratislava|kosice|<profile file>");
    cmd_generate->add_option("--policy", policy_arg, "international|min-rooms")->default_str("international");
    cmd_generate->add_option("--seed", seed, "generator seed");
    cmd_generate->add_flag("--resample", resample, "redraw when the team count has no room plan");
    cmd_generate->add_option("-o,--output", out_path, "output instance file (default stdout)");
    cmd_generate->add_option("--format", format, "text|json")->default_str("text");

    auto* cmd_bench = app.add_subcommand("bench", "generate, solve and summarize many instances");
    cmd_bench->add_option("--region", region_arg, "bratislava|kosice|<profile file>");
    cmd_bench->add_option("--count", count, "number of instances")->default_val(50);
    cmd_bench->add_option("--policy", policy_arg, "international|min-rooms")->default_str("international");
    cmd_bench->add_option("--jobs", jobs, "concurrent solves")->default_val(1);
    cmd_bench->add_flag("--resample", resample, "redraw unconstructible team counts");
    crit.attach(cmd_bench);
    cmd_bench->add_option("--time-limit", time_limit, "seconds per instance")->default_val(300.0);
    cmd_bench->add_option("--seed", seed, "batch seed");
    cmd_bench->add_option("-o,--output", out_path, "CSV output path (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_schedule->parsed()) {
            Instance inst = load_instance(instance_path, rooms_arg, policy_arg);
            FairnessCriteria criteria = crit.resolve();

            if (use_simple) {
                auto result = simple_schedule(inst);
                if (!result.schedule) {
                    std::cerr << "no simple schedule: " << simple_schedule_reason_name(result.reason)
                              << "\n";
                    return result.reason == SimpleScheduleReason::unsupported_plan ? 3 : 1;
                }
                Schedule sched = *result.schedule;
                if (criteria.order_fair) sched = assign_order_fair(inst, sched);
                auto report = validate(inst, sched, criteria);
                emit_schedule(inst, sched, format, out_path, &report);
                return report.requested_pass() ? 0 : 1;
            }

            std::vector<FairnessLevel> ladder{criteria.level};
            if (best_effort) ladder = {FairnessLevel::strong, FairnessLevel::fair, FairnessLevel::weak};
            SolveOutcome outcome;
            outcome.status = SolveStatus::infeasible;
            for (FairnessLevel level : ladder) {
                FairnessCriteria attempt = criteria;
                attempt.level = level;
                attempt.order_fair = false;  // handled post hoc
                auto model = build_model(inst, attempt);
                log_info("solving at level '" + fairness_level_name(level) + "', " +
                         std::to_string(model.var_count()) + " vars, " +
                         std::to_string(model.constraints.size()) + " constraints");
                outcome = solve(model, time_limit, seed);
                log_info("status " + std::string(solve_status_name(outcome.status)) + " after " +
                         std::to_string(outcome.stats.nodes) + " nodes, " +
                         std::to_string(outcome.stats.wall_seconds) + " s");
                if (outcome.status == SolveStatus::satisfiable) {
                    criteria.level = level;
                    break;
                }
            }
            if (outcome.status != SolveStatus::satisfiable) return exit_code_for(outcome.status);

            Schedule sched = *outcome.schedule;
            if (criteria.order_fair) sched = assign_order_fair(inst, sched);
            auto report = validate(inst, sched, criteria);
            emit_schedule(inst, sched, format, out_path, &report);
            if (out_path.empty()) std::cout << "\n";
            for (const auto& line : report_lines(inst, report)) std::cerr << line << "\n";
            return report.requested_pass() ? 0 : 1;
        }

        if (cmd_validate->parsed()) {
            Instance inst = parse_instance(read_file(instance_path));
            Schedule sched = parse_schedule(read_file(schedule_path), inst);
            FairnessCriteria criteria = crit.resolve();
            auto report = validate(inst, sched, criteria);
            print_report(inst, report, format);
            return report.requested_pass() ? 0 : 1;
        }

        if (cmd_order_fair->parsed()) {
            Instance inst = parse_instance(read_file(instance_path));
            Schedule sched = parse_schedule(read_file(schedule_path), inst);
            Schedule out = assign_order_fair(inst, sched);
            FairnessCriteria criteria;
            criteria.order_fair = true;
            auto report = validate(inst, out, criteria);
            emit_schedule(inst, out, format, out_path, &report);
            return report.requested_pass() ? 0 : 1;
        }

        if (cmd_simple->parsed()) {
            Instance inst = parse_instance(read_file(instance_path));
            if (dump_graph) std::cerr << dump_edges(portfolio_graph(inst).graph);
            auto result = simple_schedule(inst);
            if (!result.schedule) {
                std::cerr << "no simple schedule: " << simple_schedule_reason_name(result.reason) << "\n";
                return result.reason == SimpleScheduleReason::unsupported_plan ? 3 : 1;
            }
            auto report = validate(inst, *result.schedule, {});
            emit_schedule(inst, *result.schedule, format, out_path, &report);
            return 0;
        }

        if (cmd_export->parsed()) {
            Instance inst = load_instance(instance_path, rooms_arg, policy_arg);
            auto model = build_model(inst, crit.resolve());
            std::string lp = export_lp(model);
            if (out_path.empty()) std::cout << lp;
            else write_file(out_path, lp);
            return 0;
        }

        if (cmd_generate->parsed()) {
            RegionProfile profile;
            if (region_arg == "bratislava" || region_arg == "kosice")
                profile = region_profile_by_name(region_arg);
            else
                profile = parse_region_profile(read_file(region_arg));
            auto policy = room_policy_from_name(policy_arg.empty() ? "international" : policy_arg);
            if (!policy) throw std::runtime_error("unknown policy '" + policy_arg + "'");
            std::uint64_t draw_seed = seed;
            Instance inst;
            for (int attempt = 0;; ++attempt) {
                inst = generate_instance(profile, draw_seed);
                try {
                    inst.room_plan = room_plan_for(inst.team_count(), *policy);
                    inst.check();
                    break;
                } catch (const std::invalid_argument& e) {
                    if (!resample || attempt > 1000)
                        throw std::runtime_error(std::string(e.what()) + " (use --resample to redraw)");
                    draw_seed = splitmix64(draw_seed + 1);
                }
            }
            std::string text = serialize_instance(
                inst, format == "json" ? TextFormat::json : TextFormat::text);
            if (out_path.empty()) std::cout << text;
            else write_file(out_path, text);
            return 0;
        }

        if (cmd_bench->parsed()) {
            RegionProfile profile;
            if (region_arg == "bratislava" || region_arg == "kosice")
                profile = region_profile_by_name(region_arg);
            else
                profile = parse_region_profile(read_file(region_arg));
            auto policy = room_policy_from_name(policy_arg.empty() ? "international" : policy_arg);
            if (!policy) throw std::runtime_error("unknown policy '" + policy_arg + "'");
            BatchOptions options;
            options.count = count;
            options.criteria = crit.resolve();
            options.policy = *policy;
            options.time_limit_seconds = time_limit;
            options.seed = seed;
            options.jobs = jobs;
            options.resample = resample;
            auto report = run_batch(profile, options);
            std::string csv = batch_csv(report);
            if (out_path.empty()) std::cout << csv;
            else write_file(out_path, csv);
            std::cout << batch_table(report);
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 3;
}
