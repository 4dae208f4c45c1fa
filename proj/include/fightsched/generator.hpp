#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iomanip>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "fightsched/solver.hpp"

namespace fightsched {

/// Region model for random instances: school counts, the team-count
/// distribution per school kind, and the three problem-popularity classes
/// with relative selection weights 1 : 2 : 4. Class sizes partition the
/// problem universe in id order (low popularity first).
struct RegionProfile {
    std::string name = "custom";
    int big_schools = 0;
    int small_schools = 0;
    std::array<double, 3> big_team_probs{0.5, 0.3, 0.2};     // 2, 3, 4 teams
    std::array<double, 2> small_team_probs{0.75, 0.25};      // 1, 2 teams
    std::array<int, 3> popularity_counts{8, 6, 3};           // low, medium, high
    int problem_count = 17;

    void check() const {
        if (big_schools < 0 || small_schools < 0 || big_schools + small_schools == 0)
            throw std::invalid_argument("profile needs at least one school");
        auto sums_to_one = [](const auto& probs) {
            double sum = 0;
            for (double p : probs) {
                if (p < 0) return false;
                sum += p;
            }
            return std::abs(sum - 1.0) < 1e-9;
        };
        if (!sums_to_one(big_team_probs) || !sums_to_one(small_team_probs))
            throw std::invalid_argument("team-count probabilities must sum to 1");
        if (popularity_counts[0] + popularity_counts[1] + popularity_counts[2] != problem_count)
            throw std::invalid_argument("popularity class sizes must sum to the problem count");
    }

    /// Selection weight of a problem id (1, 2 or 4).
    int weight(int problem) const {
        if (problem <= popularity_counts[0]) return 1;
        if (problem <= popularity_counts[0] + popularity_counts[1]) return 2;
        return 4;
    }

    static RegionProfile bratislava() {
        RegionProfile p;
        p.name = "bratislava";
        p.big_schools = 3;
        p.small_schools = 3;
        return p;
    }

    static RegionProfile kosice() {
        RegionProfile p;
        p.name = "kosice";
        p.big_schools = 2;
        p.small_schools = 6;
        return p;
    }
};

namespace detail {

/// Uniform double in [0,1) derived from the top 53 bits of the engine
/// output; avoids std::uniform_real_distribution, whose results are not
/// pinned by the standard, so seeds reproduce bit-for-bit everywhere.
inline double next_unit(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline int sample_index(std::mt19937_64& rng, const double* probs, int count) {
    double u = next_unit(rng);
    double cum = 0;
    for (int i = 0; i < count; ++i) {
        cum += probs[i];
        if (u < cum) return i;
    }
    return count - 1;
}

}  // namespace detail

/// Draws one problem by popularity weight from the ids not yet taken.
/// Exposed for the frequency tests.
inline int sample_weighted_problem(const RegionProfile& profile, std::mt19937_64& rng,
                                   const std::vector<bool>& taken) {
    long total = 0;
    for (int p = 1; p <= profile.problem_count; ++p)
        if (!taken[p]) total += profile.weight(p);
    if (total == 0) throw std::logic_error("no problems left to draw");
    long r = static_cast<long>(rng() % static_cast<std::uint64_t>(total));
    for (int p = 1; p <= profile.problem_count; ++p) {
        if (taken[p]) continue;
        r -= profile.weight(p);
        if (r < 0) return p;
    }
    return profile.problem_count;
}

/// Samples team counts per school and a 3-problem portfolio per team
/// (weighted draws without replacement). Deterministic per seed. The result
/// carries no room plan; attach one via room_plan_for, which reports
/// unconstructible team counts.
inline Instance generate_instance(const RegionProfile& profile, std::uint64_t seed) {
    profile.check();
    std::mt19937_64 rng(seed);
    Instance inst;
    inst.problem_count = profile.problem_count;

    auto add_school = [&](const std::string& school, int teams) {
        for (int t = 1; t <= teams; ++t) {
            inst.teams.push_back(school + "-" + std::to_string(t));
            inst.schools.push_back(school);
            std::vector<bool> taken(profile.problem_count + 1, false);
            std::array<int, 3> portfolio{};
            for (int q = 0; q < 3; ++q) {
                portfolio[q] = sample_weighted_problem(profile, rng, taken);
                taken[portfolio[q]] = true;
            }
            inst.portfolios.push_back(portfolio);
        }
    };
    for (int b = 1; b <= profile.big_schools; ++b) {
        int teams = 2 + detail::sample_index(rng, profile.big_team_probs.data(), 3);
        add_school("B" + std::to_string(b), teams);
    }
    for (int s = 1; s <= profile.small_schools; ++s) {
        int teams = 1 + detail::sample_index(rng, profile.small_team_probs.data(), 2);
        add_school("S" + std::to_string(s), teams);
    }
    return inst;
}

/// generate_instance plus a room plan under `policy`; propagates the
/// room_plan_for error when the sampled team count is unconstructible.
inline Instance generate_instance(const RegionProfile& profile, std::uint64_t seed, RoomPolicy policy) {
    Instance inst = generate_instance(profile, seed);
    inst.room_plan = room_plan_for(inst.team_count(), policy);
    inst.check();
    return inst;
}

/// Region profile config format: key=value tokens, same lexical rules as the
/// instance header. Recognised keys: region, big_schools, small_schools,
/// big_team_probs, small_team_probs, popularity, problems.
inline RegionProfile parse_region_profile(std::string_view text) {
    RegionProfile profile;
    bool saw_any = false;
    size_t start = 0;
    while (start <= text.size()) {
        size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = detail::strip_comment(text.substr(start, end - start));
        start = end + 1;
        if (line.empty()) continue;
        for (auto tok : detail::split_ws(line)) {
            auto eq = tok.find('=');
            if (eq == std::string_view::npos)
                throw ParseError("profile expects key=value tokens, got '" + std::string(tok) + "'");
            auto key = tok.substr(0, eq);
            std::string value(tok.substr(eq + 1));
            saw_any = true;
            if (key == "region") profile.name = value;
            else if (key == "big_schools") profile.big_schools = detail::parse_int(value, "big_schools");
            else if (key == "small_schools") profile.small_schools = detail::parse_int(value, "small_schools");
            else if (key == "problems") profile.problem_count = detail::parse_int(value, "problems");
            else if (key == "popularity") {
                auto counts = detail::parse_int_list(value, "popularity class size");
                if (counts.size() != 3) throw ParseError("popularity expects 3 class sizes");
                profile.popularity_counts = {counts[0], counts[1], counts[2]};
            } else if (key == "big_team_probs" || key == "small_team_probs") {
                std::vector<double> probs;
                std::stringstream ss(value);
                std::string item;
                while (std::getline(ss, item, ',')) probs.push_back(std::stod(item));
                if (key == "big_team_probs") {
                    if (probs.size() != 3) throw ParseError("big_team_probs expects 3 values");
                    profile.big_team_probs = {probs[0], probs[1], probs[2]};
                } else {
                    if (probs.size() != 2) throw ParseError("small_team_probs expects 2 values");
                    profile.small_team_probs = {probs[0], probs[1]};
                }
            } else {
                throw ParseError("unknown profile key '" + std::string(key) + "'");
            }
        }
    }
    if (!saw_any) throw ParseError("empty region profile");
    profile.check();
    return profile;
}

inline RegionProfile region_profile_by_name(std::string_view name) {
    if (name == "bratislava") return RegionProfile::bratislava();
    if (name == "kosice") return RegionProfile::kosice();
    throw std::invalid_argument("unknown region '" + std::string(name) +
                                "' (builtins: bratislava, kosice)");
}

struct BatchOptions {
    int count = 50;
    FairnessCriteria criteria;
    RoomPolicy policy = RoomPolicy::international;
    double time_limit_seconds = 300.0;
    std::uint64_t seed = 1;
    int jobs = 1;
    bool resample = false;  // redraw instances whose n has no room plan
};

struct BatchRun {
    std::uint64_t seed = 0;
    int team_count = 0;
    SolveStatus status = SolveStatus::timeout;
    double seconds = 0.0;
};

struct BatchReport {
    std::string region;
    std::string criterion_label;
    BatchOptions options;
    std::vector<BatchRun> runs;

    int count_with(SolveStatus s) const {
        int c = 0;
        for (const auto& r : runs)
            if (r.status == s) ++c;
        return c;
    }
    int feasible() const { return count_with(SolveStatus::satisfiable); }
    int infeasible() const { return count_with(SolveStatus::infeasible); }
    int undecided() const { return count_with(SolveStatus::timeout); }

    std::vector<double> times_with(SolveStatus s) const {
        std::vector<double> out;
        for (const auto& r : runs)
            if (r.status == s) out.push_back(r.seconds);
        std::sort(out.begin(), out.end());
        return out;
    }
};

namespace detail {

inline double median_of_sorted(const std::vector<double>& v) {
    if (v.empty()) return std::nan("");
    size_t mid = v.size() / 2;
    return v.size() % 2 ? v[mid] : (v[mid - 1] + v[mid]) / 2;
}

inline std::string time_cell(double value) {
    if (std::isnan(value)) return "n.a.";
    std::ostringstream out;
    out << std::fixed << std::setprecision(2) << value;
    return out.str();
}

}  // namespace detail

/// Generates `options.count` instances from the profile, solves each under
/// the requested criteria and time limit, and aggregates statuses and solve
/// times. Instances may be solved concurrently (`jobs`); per-instance seeds
/// come from a splitmix stream over options.seed, so the statuses are
/// reproducible regardless of the thread count.
inline BatchReport run_batch(const RegionProfile& profile, const BatchOptions& options) {
    if (options.count < 1) throw std::invalid_argument("batch count must be >= 1");
    profile.check();

    BatchReport report;
    report.region = profile.name;
    report.criterion_label = criteria_label(options.criteria);
    report.options = options;
    report.runs.resize(options.count);

    std::atomic<int> next{0};
    std::exception_ptr failure;
    std::mutex failure_mu;
    auto worker = [&] {
        try {
            while (true) {
                int idx = next.fetch_add(1);
                if (idx >= options.count) break;
                std::uint64_t inst_seed = splitmix64(options.seed + static_cast<std::uint64_t>(idx));
                Instance inst;
                for (int attempt = 0;; ++attempt) {
                    inst = generate_instance(profile, inst_seed);
                    try {
                        inst.room_plan = room_plan_for(inst.team_count(), options.policy);
                        inst.check();
                        break;
                    } catch (const std::invalid_argument&) {
                        if (!options.resample || attempt > 1000) throw;
                        inst_seed = splitmix64(inst_seed + 1);
                    }
                }
                auto model = build_model(inst, options.criteria);
                auto outcome = solve(model, options.time_limit_seconds, inst_seed);
                report.runs[idx] = {inst_seed, inst.team_count(), outcome.status,
                                    outcome.stats.wall_seconds};
            }
        } catch (...) {
            std::lock_guard<std::mutex> lock(failure_mu);
            if (!failure) failure = std::current_exception();
            next.store(options.count);  // stop remaining work
        }
    };
    int jobs = std::max(1, options.jobs);
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);
    return report;
}

/// Summary CSV, one row per batch (the column layout of the random-data
/// result tables: status counts and ratios, then solve-time median/maximum
/// split by feasible vs infeasible).
inline std::string batch_csv(const BatchReport& report) {
    std::ostringstream out;
    out << "region,criterion,count,infeasible,infeasible_ratio,undecided,undecided_ratio,"
           "feasible,feasible_ratio,feasible_median_s,feasible_max_s,"
           "infeasible_median_s,infeasible_max_s\n";
    const int count = static_cast<int>(report.runs.size());
    auto ratio = [&](int c) {
        std::ostringstream r;
        r << std::fixed << std::setprecision(2) << (count ? static_cast<double>(c) / count : 0.0);
        return r.str();
    };
    auto feas_times = report.times_with(SolveStatus::satisfiable);
    auto infeas_times = report.times_with(SolveStatus::infeasible);
    out << report.region << ',' << report.criterion_label << ',' << count << ','
        << report.infeasible() << ',' << ratio(report.infeasible()) << ','
        << report.undecided() << ',' << ratio(report.undecided()) << ','
        << report.feasible() << ',' << ratio(report.feasible()) << ','
        << detail::time_cell(detail::median_of_sorted(feas_times)) << ','
        << detail::time_cell(feas_times.empty() ? std::nan("") : feas_times.back()) << ','
        << detail::time_cell(detail::median_of_sorted(infeas_times)) << ','
        << detail::time_cell(infeas_times.empty() ? std::nan("") : infeas_times.back()) << "\n";
    return out.str();
}

/// Rendered text table matching the CSV summary.
inline std::string batch_table(const BatchReport& report) {
    const int count = static_cast<int>(report.runs.size());
    auto cell = [&](int c) {
        std::ostringstream out;
        out << c << " (" << (count ? 100 * c / count : 0) << "%)";
        return out.str();
    };
    auto feas_times = report.times_with(SolveStatus::satisfiable);
    auto infeas_times = report.times_with(SolveStatus::infeasible);
    std::ostringstream out;
    out << "region: " << report.region << ", instances: " << count << "\n";
    out << std::left << std::setw(24) << "Criterion" << std::setw(14) << "infeasible"
        << std::setw(14) << "undecided" << std::setw(14) << "feasible"
        << std::setw(12) << "med feas" << std::setw(12) << "max feas"
        << std::setw(12) << "med infeas" << std::setw(12) << "max infeas" << "\n";
    out << std::left << std::setw(24) << report.criterion_label
        << std::setw(14) << cell(report.infeasible())
        << std::setw(14) << cell(report.undecided())
        << std::setw(14) << cell(report.feasible())
        << std::setw(12) << detail::time_cell(detail::median_of_sorted(feas_times))
        << std::setw(12) << detail::time_cell(feas_times.empty() ? std::nan("") : feas_times.back())
        << std::setw(12) << detail::time_cell(detail::median_of_sorted(infeas_times))
        << std::setw(12) << detail::time_cell(infeas_times.empty() ? std::nan("") : infeas_times.back())
        << "\n";
    return out.str();
}

}  // namespace fightsched
