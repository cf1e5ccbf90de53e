// hoeffmc: spectral summaries, concentration bounds against exact oracles, sample-size
// planning and seeded experiment suites for finite Markov chains.
//
// Exit codes: 0 success, 2 malformed input, 3 a theorem's hypothesis does not hold.

#include "hoeffmc/hoeffmc.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace hoeffmc;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitPrecondition = 3;

std::uint64_t default_seed() {
    if (const char* env = std::getenv("HOEFFMC_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            fail(ErrorKind::InvalidInput, std::string("HOEFFMC_SEED is not an unsigned integer: ") + env);
        }
    }
    return 1;
}

/// "start:stop:step" (inclusive) or a comma-separated list.
std::vector<double> parse_grid(const std::string& spec) {
    std::vector<double> out;
    if (spec.empty()) return out;
    auto number = [&](const std::string& s) {
        try {
            std::size_t used = 0;
            const double v = std::stod(s, &used);
            if (used != s.size()) throw std::invalid_argument(s);
            return v;
        } catch (const std::exception&) {
            fail(ErrorKind::ParseError, "bad number '" + s + "' in grid '" + spec + "'");
        }
    };
    if (spec.find(':') != std::string::npos) {
        std::vector<std::string> parts;
        std::stringstream ss(spec);
        for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
        if (parts.size() != 3) fail(ErrorKind::ParseError, "grid '" + spec + "' must be start:stop:step");
        const double lo = number(parts[0]), hi = number(parts[1]), step = number(parts[2]);
        if (!(step > 0.0) || hi < lo) fail(ErrorKind::ParseError, "grid '" + spec + "' needs step > 0 and stop >= start");
        const auto count = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
        if (count > 1000000) fail(ErrorKind::ParseError, "grid '" + spec + "' is too large");
        for (long i = 0; i <= count; ++i) out.push_back(lo + static_cast<double>(i) * step);
        return out;
    }
    std::stringstream ss(spec);
    for (std::string p; std::getline(ss, p, ',');) out.push_back(number(p));
    return out;
}

double parse_p(const std::string& s) {
    if (s == "inf" || s == "infinity") return std::numeric_limits<double>::infinity();
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used == s.size()) return v;
    } catch (const std::exception&) {
    }
    fail(ErrorKind::InvalidP, "norm order '" + s + "' is neither a number nor inf");
}

/// Writes to a file when a path is given, else to stdout.
class Sink {
public:
    explicit Sink(const std::string& path) : path_(path) {
        if (!path.empty()) {
            file_ = std::make_unique<std::ofstream>(path);
            if (!*file_) fail(ErrorKind::InvalidInput, "cannot write " + path);
        }
    }
    std::ostream& stream() { return file_ ? *file_ : std::cout; }
    std::vector<std::string> artifacts() const {
        return path_.empty() ? std::vector<std::string>{} : std::vector<std::string>{path_};
    }

private:
    std::string path_;
    std::unique_ptr<std::ofstream> file_;
};

std::string command_line(int argc, char** argv) {
    std::string s;
    for (int i = 0; i < argc; ++i) {
        if (i) s += ' ';
        s += i == 0 ? std::string("hoeffmc") : std::string(argv[i]);
    }
    return s;
}

Json p_json(double p) { return std::isinf(p) ? Json("inf") : Json(p); }

std::vector<Range> ranges_of(const std::vector<StepFunction>& steps) {
    std::vector<Range> r;
    for (const auto& f : steps) r.push_back({f.a(), f.b()});
    return r;
}

bool all_identical(const std::vector<StepFunction>& steps) {
    for (const auto& f : steps) {
        if (f.values() != steps.front().values() || f.a() != steps.front().a() || f.b() != steps.front().b()) return false;
    }
    return true;
}

MeasurePair measure_for(const FiniteChain& chain, const std::string& nu_file, double p) {
    if (nu_file.empty()) return MeasurePair::stationary(chain.pi(), p);
    Vector nu = load_measure(nu_file);
    if (nu.size() != chain.d()) fail(ErrorKind::InvalidInput, "nu length differs from the state count");
    return MeasurePair(std::move(nu), chain.pi(), p);
}

// ---------------------------------------------------------------- gap

struct GapArgs {
    std::string chain;
    int k_max = 30;
    std::string kseq_csv;
};

int run_gap(const GapArgs& a, const std::string& cmd) {
    const FiniteChain chain = load_chain(a.chain);
    const SpectralSummary s = summarize(chain, a.k_max);
    Json out = summary_to_json(s);
    out["d"] = chain.d();
    out["pi"] = to_std(chain.pi());
    if (!chain.labels().empty()) out["labels"] = chain.labels();
    std::cout << out.dump(2) << '\n';
    if (!a.kseq_csv.empty()) {
        Sink sink(a.kseq_csv);
        RunManifest m{cmd, {{"chain", a.chain}, {"k_max", a.k_max}}, 0, sink.artifacts()};
        CsvWriter csv(sink.stream(), m, {"k", "lambda_k"});
        for (std::size_t i = 0; i < s.k_sequence.size(); ++i) csv.write({cell(static_cast<long>(i + 1)), cell(s.k_sequence[i])});
    }
    return 0;
}

// ---------------------------------------------------------------- bound

struct BoundArgs {
    std::string chain;
    std::string functions;
    std::string theorem = "t21";
    std::string t_grid = "-2:2:0.5";
    std::string eps_grid;
    std::string nu_file;
    std::string p = "inf";
    long n0 = 0;
    int k = 0;
    long reps = 2000;
    std::uint64_t seed = 0;
    std::string out;
    std::string tail_out;
};

int run_bound(const BoundArgs& a, const std::string& cmd) {
    const FiniteChain chain = load_chain(a.chain);
    const FunctionSpec spec = load_functions(a.functions);
    const auto& steps = spec.steps;
    for (const auto& f : steps) {
        if (f.size() != chain.d()) fail(ErrorKind::InvalidInput, "function length differs from the state count");
    }
    const Theorem th = parse_theorem(a.theorem);
    const std::vector<double> ts = parse_grid(a.t_grid);
    const std::vector<double> epss = parse_grid(a.eps_grid);
    const std::vector<Range> ranges = ranges_of(steps);
    const long n = static_cast<long>(steps.size());
    const double p = parse_p(a.p);
    if (a.n0 < 0) fail(ErrorKind::InvalidInput, "n0 must be non-negative");

    Vector start = chain.pi();
    std::optional<MeasurePair> mp;
    if (th == Theorem::T2_3 || th == Theorem::T6_2) {
        mp.emplace(measure_for(chain, a.nu_file, p));
        start = th == Theorem::T2_3 ? mp->nu() : propagate(chain, mp->nu(), static_cast<int>(a.n0));
    } else if (!a.nu_file.empty()) {
        fail(ErrorKind::InvalidInput, "--nu-file applies only to t23 and t62");
    }
    if ((th == Theorem::T2_2 || th == Theorem::T6_2) && !all_identical(steps)) {
        fail(ErrorKind::InvalidInput, std::string(theorem_name(th)) + " needs the same function at every step");
    }

    int k = a.k;
    double lam_k = 0.0;
    if (th == Theorem::TA_1) {
        if (k < 1) {
            for (int j = 1; j <= 30 && k < 1; ++j) {
                if (grouped_lambda(chain, j) < 1.0 - 1e-9) k = j;
            }
            if (k < 1) fail(ErrorKind::GapExhausted, "no k <= 30 with lambda_k < 1");
        }
        lam_k = grouped_lambda(chain, k);
    }

    std::optional<double> lam, lam_r;
    auto get_lam = [&] { return lam ? *lam : *(lam = absolute_lambda(chain)); };
    auto get_lam_r = [&] { return lam_r ? *lam_r : *(lam_r = right_lambda(chain)); };

    // eps is on the sum scale except for t62, where it is the mean-scale deviation
    auto report = [&](double t, double eps) -> BoundReport {
        switch (th) {
            case Theorem::Classical: return classical_hoeffding(ranges, t, eps);
            case Theorem::T2_1: return bound_t21(get_lam(), ranges, t, eps);
            case Theorem::T2_2: return bound_t22(get_lam_r(), ranges.front(), n, t, eps);
            case Theorem::T2_3: return bound_t23(get_lam(), *mp, ranges, t, eps);
            case Theorem::T6_2: return bound_t62(get_lam(), get_lam_r(), *mp, a.n0, ranges.front(), n, t, eps);
            case Theorem::TA_1: return bound_ta1(lam_k, k, ranges, t, eps);
            case Theorem::Inhomog: break;
        }
        fail(ErrorKind::InvalidInput, "inhomog needs one kernel per step and is not available from a single chain file");
    };

    // Evaluate everything before writing so that a failing theorem leaves no partial file.
    std::vector<std::vector<std::string>> mgf_rows, tail_rows;
    for (double t : ts) {
        const double log_exact = centered_exact_log_mgf(chain, start, steps, t);
        const BoundReport r = report(t, 0.0);
        mgf_rows.push_back({cell(t), cell(std::exp(log_exact)), cell(r.mgf_bound), cell(std::exp(log_exact - r.log_mgf_bound)),
                            cell(log_exact), cell(r.log_mgf_bound)});
    }
    for (std::size_t i = 0; i < epss.size(); ++i) {
        const double eps = epss[i];
        const BoundReport r = report(0.0, eps);
        const auto est = empirical_tail(chain, start, steps, r.eps, a.reps, replicate_stream(a.seed, i)());
        tail_rows.push_back({cell(eps), cell(est.phat), cell(r.tail_bound), cell(est.wilson_halfwidth), cell(r.log_tail_bound),
                             cell(r.vacuous)});
    }

    Json inputs = {{"chain", a.chain},   {"functions", a.functions}, {"theorem", a.theorem}, {"t_grid", a.t_grid},
                   {"eps_grid", a.eps_grid}, {"reps", a.reps},           {"n", n}};
    if (mp) {
        inputs["nu_file"] = a.nu_file;
        inputs["p"] = p_json(p);
        inputs["n0"] = a.n0;
    }
    if (th == Theorem::TA_1) {
        inputs["k"] = k;
        inputs["lambda_k"] = lam_k;
    }
    if (lam) inputs["lambda"] = *lam;
    if (lam_r) inputs["lambda_right"] = *lam_r;

    Sink sink(a.out);
    std::unique_ptr<Sink> tail_sink;
    if (!tail_rows.empty() && !a.tail_out.empty()) tail_sink = std::make_unique<Sink>(a.tail_out);
    std::vector<std::string> artifacts = sink.artifacts();
    if (tail_sink) artifacts.push_back(a.tail_out);
    const RunManifest m{cmd, inputs, a.seed, artifacts};
    {
        CsvWriter csv(sink.stream(), m, {"t", "exact_mgf", "bound", "ratio", "log_exact_mgf", "log_bound"});
        for (const auto& r : mgf_rows) csv.write(r);
    }
    if (!tail_rows.empty()) {
        // without --tail-out the tail table follows the mgf table, with its own header
        CsvWriter csv(tail_sink ? tail_sink->stream() : sink.stream(), m,
                      {"eps", "empirical_tail", "tail_bound", "wilson_halfwidth", "log_tail_bound", "vacuous"});
        for (const auto& r : tail_rows) csv.write(r);
    }
    return 0;
}

// ---------------------------------------------------------------- plan

struct PlanArgs {
    std::string chain;
    double eps = 0.0;
    double delta = 0.0;
    std::string nu_file;
    std::string p = "inf";
    long n0 = 0;
    std::vector<double> range{0.0, 1.0};
    std::string functions;
};

int run_plan(const PlanArgs& a, const std::string& cmd) {
    const FiniteChain chain = load_chain(a.chain);
    const double p = parse_p(a.p);
    const MeasurePair mp = measure_for(chain, a.nu_file, p);
    Range range{a.range.at(0), a.range.at(1)};
    if (!a.functions.empty()) {
        const auto spec = load_functions(a.functions);
        range = {spec.steps.front().a(), spec.steps.front().b()};
    }
    if (!(range.a <= range.b)) fail(ErrorKind::InvalidInput, "range has a > b");
    const double lam = absolute_lambda(chain), lam_r = right_lambda(chain);
    const McmcPlan plan = mcmc_plan(lam, lam_r, mp, a.n0, range, a.eps, a.delta);
    Json out = plan_to_json(plan);
    out["lambda"] = lam;
    out["lambda_right"] = lam_r;
    out["eps"] = a.eps;
    out["delta"] = a.delta;
    out["range"] = range;
    RunManifest m{cmd, {{"chain", a.chain}, {"nu_file", a.nu_file}, {"p", p_json(p)}, {"n0", a.n0}}, 0, {}};
    out["manifest"] = m.to_json();
    out["manifest_hash"] = m.hash();
    std::cout << out.dump(2) << '\n';
    return 0;
}

// ---------------------------------------------------------------- theta

struct ThetaArgs {
    double lam = 0.0;
    double mu = 0.5;
    double a = 0.0;
    double b = 1.0;
    std::string t_grid = "-3:3:0.25";
    std::string out;
};

int run_theta(const ThetaArgs& a, const std::string& cmd) {
    const TwoStateSystem ts(a.lam, a.mu, a.a, a.b);
    Sink sink(a.out);
    RunManifest m{cmd, {{"lam", a.lam}, {"mu", a.mu}, {"a", a.a}, {"b", a.b}, {"t_grid", a.t_grid}}, 0, sink.artifacts()};
    const auto grid = parse_grid(a.t_grid);
    CsvWriter csv(sink.stream(), m, {"t", "theta", "theta_tilde", "theta_sq_floor"});
    for (double t : grid) {
        csv.write({cell(t), cell(theta(ts, t)), cell(theta_tilde(ts, t)), cell(a.lam * std::exp(t * (a.a + a.b)))});
    }
    return 0;
}

// ---------------------------------------------------------------- experiment

struct ExperimentArgs {
    std::string config;
    std::string suite;
    int jobs = 1;
    std::uint64_t seed = 0;
    std::string out;
};

struct RunRow {
    double metric = std::numeric_limits<double>::quiet_NaN();
    double bound = std::numeric_limits<double>::quiet_NaN();
    bool pass = false;
    double aux = std::numeric_limits<double>::quiet_NaN();
    std::string error;
};

std::vector<RunRow> run_pool(int runs, int jobs, const std::function<RunRow(int)>& task) {
    std::vector<RunRow> rows;
    for (auto& slot : run_indexed<RunRow>(runs, jobs, task)) {
        if (!slot.error.empty()) slot.row = RunRow{.error = slot.error};
        rows.push_back(std::move(slot.row));
    }
    return rows;
}

std::uint64_t run_seed(std::uint64_t base, int r) { return replicate_stream(base, static_cast<std::uint64_t>(r))(); }

class Config {
public:
    explicit Config(const std::string& path) : json_(read_json_file(path)), dir_(fs::path(path).parent_path()) {
        if (!json_.is_object()) fail(ErrorKind::ParseError, "experiment config must be a JSON object");
    }

    const Json& json() const { return json_; }

    template <class T>
    T get(const std::string& key) const {
        if (!json_.contains(key)) fail(ErrorKind::ParseError, "config is missing \"" + key + "\"");
        return as<T>(json_.at(key), key);
    }

    template <class T>
    T get(const std::string& key, T fallback) const {
        return json_.contains(key) ? as<T>(json_.at(key), key) : fallback;
    }

    std::string resolve(const std::string& p) const {
        const fs::path path(p);
        return path.is_absolute() ? p : (dir_ / path).string();
    }

    FiniteChain chain(const Json& j) const {
        if (j.is_string()) return load_chain(resolve(j.get<std::string>()));
        return chain_from_json(j);
    }

    FiniteChain chain() const {
        if (!json_.contains("chain")) fail(ErrorKind::ParseError, "config is missing \"chain\"");
        return chain(json_.at("chain"));
    }

    FeatureMap features(const Vector& pi) const {
        const Json f = json_.value("features", Json::object());
        const std::string kind = f.value("kind", "random");
        const long d = f.value("d", 3L);
        if (kind == "banded") {
            if (pi.size() != d + 1) fail(ErrorKind::InvalidInput, "banded features need d + 1 states");
            return banded_feature_map(d);
        }
        if (kind == "random") return random_feature_map(pi, d, f.value("seed", 1ULL), f.value("centered", false));
        fail(ErrorKind::ParseError, "unknown feature kind '" + kind + "'");
    }

private:
    template <class T>
    static T as(const Json& j, const std::string& key) {
        try {
            return j.get<T>();
        } catch (const Json::exception&) {
            fail(ErrorKind::ParseError, "config field \"" + key + "\" has the wrong type");
        }
    }

    Json json_;
    fs::path dir_;
};

struct SuiteResult {
    std::vector<RunRow> rows;
    std::vector<std::uint64_t> seeds;
    RunRow summary;
    Json resolved;
};

double coverage_of(const std::vector<RunRow>& rows) {
    long ok = 0;
    for (const auto& r : rows) ok += r.pass ? 1 : 0;
    return rows.empty() ? 0.0 : static_cast<double>(ok) / static_cast<double>(rows.size());
}

/// Coverage row: metric = observed fraction, bound = target level, pass when within
/// three binomial standard errors of the level or above.
RunRow coverage_summary(const std::vector<RunRow>& rows, double level) {
    RunRow s;
    s.metric = coverage_of(rows);
    s.bound = level;
    const double lv = std::clamp(level, 0.0, 1.0);
    s.aux = std::sqrt(lv * (1.0 - lv) / static_cast<double>(std::max<std::size_t>(rows.size(), 1)));
    s.pass = s.metric >= level - 3.0 * s.aux;
    return s;
}

SuiteResult suite_ols(const Config& cfg, int runs, int jobs, std::uint64_t base) {
    const FiniteChain chain = cfg.chain();
    const FeatureMap fmap = cfg.features(chain.pi());
    const double sigma = cfg.get<double>("sigma", 1.0), delta = cfg.get<double>("delta", 0.05);
    const double eta = cfg.get<double>("eta", 0.5);
    const auto beta_std = cfg.get<std::vector<double>>("beta", std::vector<double>(static_cast<std::size_t>(fmap.dim()), 1.0));
    const Vector beta = to_vector(beta_std);
    const double inv = detail::inverse_norm(fmap.sigma(chain.pi()));
    const double a = alpha_right(right_lambda(chain));
    const long n_min = ols_min_samples(a, fmap.dim(), inv, delta, eta);
    const long n = cfg.get<long>("n", n_min);
    if (n < n_min) fail(ErrorKind::SampleTooSmall, "n = " + std::to_string(n) + " is below n_min = " + std::to_string(n_min));
    SuiteResult out;
    out.resolved = {{"n", n}, {"n_min", n_min}, {"alpha", a}, {"sigma_inv_norm", inv}, {"delta", delta}, {"eta", eta}};
    out.rows = run_pool(runs, jobs, [&](int r) {
        const auto res = ols_experiment(chain, fmap, beta, sigma, n, delta, run_seed(base, r), eta);
        return RunRow{res.err, res.bound, res.pass, res.eps_n, ""};
    });
    out.summary = coverage_summary(out.rows, 1.0 - 4.0 * delta);
    return out;
}

SuiteResult suite_lasso(const Config& cfg, int runs, int jobs, std::uint64_t base) {
    const FiniteChain chain = cfg.chain();
    const FeatureMap fmap = cfg.features(chain.pi());
    const int s = cfg.get<int>("s", 1);
    const double delta = cfg.get<double>("delta", 0.5);
    const long n = cfg.get<long>("n");
    const LassoCheck check = lasso_re_check(chain, fmap, s, delta, n);
    const Matrix sig = fmap.sigma(chain.pi());
    SuiteResult out;
    out.resolved = {{"kappa", check.kappa},        {"feasible", check.feasible}, {"lambda_min", check.lambda_min},
                    {"eps_level", check.eps_level}, {"alpha", check.alpha},       {"n", n}};
    out.rows = run_pool(runs, jobs, [&](int r) {
        const auto counts = detail::visit_counts(chain, n, run_seed(base, r), 0);
        const double e = epsilon_n(fmap.empirical_sigma(counts, n), sig);
        return RunRow{e, check.eps_level, e <= check.eps_level, check.kappa, ""};
    });
    out.summary = coverage_summary(out.rows, 1.0 - 2.0 * std::pow(static_cast<double>(fmap.dim()), -delta));
    return out;
}

SuiteResult suite_cov(const Config& cfg, int runs, int jobs, std::uint64_t base) {
    const FiniteChain chain = cfg.chain();
    const FeatureMap fmap = cfg.features(chain.pi());
    const int s = cfg.get<int>("s");
    const double m = cfg.get<double>("m", 1.0), delta = cfg.get<double>("delta", 1.0);
    const long n = cfg.get<long>("n");
    std::optional<double> t;
    if (cfg.json().contains("t")) t = cfg.get<double>("t");
    // surfaces ModelViolation and BracketEmpty once, before the runs
    const CovResult probe = sparse_cov_experiment(chain, fmap, s, m, delta, n, base, t);
    SuiteResult out;
    out.resolved = {{"t", probe.t},
                    {"bracket_lower", probe.bracket.lower},
                    {"bracket_upper", probe.bracket.upper},
                    {"bracket_nonempty", probe.bracket.nonempty()},
                    {"n", n}};
    out.rows = run_pool(runs, jobs, [&](int r) {
        const auto res = sparse_cov_experiment(chain, fmap, s, m, delta, n, run_seed(base, r), t);
        return RunRow{res.err_1norm, res.bound, res.pass, res.eps_n, ""};
    });
    out.summary = coverage_summary(out.rows, 1.0 - 2.0 * std::pow(static_cast<double>(fmap.dim()), -delta));
    return out;
}

SuiteResult suite_rds(const Config& cfg, int runs, int jobs, std::uint64_t base) {
    const Graph g = load_edge_list(cfg.resolve(cfg.get<std::string>("graph")));
    std::vector<double> infected(static_cast<std::size_t>(std::max(g.n_nodes, 0)), 0.0);
    if (cfg.json().contains("infected")) {
        infected = cfg.get<std::vector<double>>("infected");
    } else {
        for (int v : cfg.get<std::vector<int>>("infected_nodes")) {
            if (v < 0 || v >= g.n_nodes) fail(ErrorKind::InvalidInput, "infected node out of range");
            infected[static_cast<std::size_t>(v)] = 1.0;
        }
    }
    const long n = cfg.get<long>("n");
    const double eps = cfg.get<double>("eps", 0.05);
    const RdsResult probe = rds_estimate(g, infected, n, base, eps);
    SuiteResult out;
    out.resolved = {{"truth", probe.truth}, {"lambda_right", probe.lam_r}, {"alpha", probe.alpha},
                    {"tail_at_eps", probe.tail_at_eps}, {"vacuous", probe.vacuous}, {"n", n}};
    out.rows = run_pool(runs, jobs, [&](int r) {
        const auto res = rds_estimate(g, infected, n, run_seed(base, r), eps);
        const double dev = std::max(std::abs(res.numerator_mean - res.numerator_limit),
                                    std::abs(res.denominator_mean - res.denominator_limit));
        return RunRow{dev, eps, dev < eps, res.prevalence_hat, ""};
    });
    // union of the two averages' tails
    out.summary = coverage_summary(out.rows, std::max(0.0, 1.0 - 2.0 * probe.tail_at_eps));
    return out;
}

SuiteResult suite_bandit(const Config& cfg, int runs, int jobs, std::uint64_t base) {
    const Json arms_json = cfg.json().value("arms", Json::array());
    if (!arms_json.is_array() || arms_json.size() < 2) fail(ErrorKind::ParseError, "bandit config needs at least two arms");
    std::vector<BanditArm> arms;
    for (const auto& a : arms_json) {
        if (!a.contains("chain") || !a.contains("reward")) fail(ErrorKind::ParseError, "each arm needs chain and reward");
        FiniteChain chain = cfg.chain(a.at("chain"));
        Vector f = detail::json_vector(a.at("reward"), "reward");
        arms.emplace_back(std::move(chain), StepFunction(std::move(f), 0.0, 1.0));
    }
    const double c = cfg.get<double>("c");
    const long T = cfg.get<long>("T");
    const double bound = ucb_bound(arms, c, T);  // CTooSmall before any run
    SuiteResult out;
    std::vector<double> lam_rs;
    for (const auto& a : arms) lam_rs.push_back(a.lam_r);
    out.resolved = {{"bound", bound}, {"gaps", arm_gaps(arms)}, {"lambda_right", lam_rs}, {"c", c}, {"T", T}};
    const auto gaps = arm_gaps(arms);
    const auto best = static_cast<std::size_t>(std::min_element(gaps.begin(), gaps.end()) - gaps.begin());
    out.rows = run_pool(runs, jobs, [&](int r) {
        const auto tr = ucb_run(arms, c, T, run_seed(base, r));
        return RunRow{tr.pseudo_regret, bound, tr.pseudo_regret <= bound, static_cast<double>(tr.pulls[best]), ""};
    });
    std::vector<double> regrets;
    for (const auto& r : out.rows) {
        if (r.error.empty()) regrets.push_back(r.metric);
    }
    RunRow s;
    s.bound = bound;
    if (!regrets.empty()) {
        const double k = static_cast<double>(regrets.size());
        s.metric = pairwise_sum(regrets) / k;
        double ss = 0.0;
        for (double v : regrets) ss += (v - s.metric) * (v - s.metric);
        s.aux = regrets.size() > 1 ? std::sqrt(ss / (k - 1.0) / k) : 0.0;
        s.pass = s.metric <= bound;
    }
    out.summary = s;
    return out;
}

int run_counterexample(const Config& cfg, const ExperimentArgs& a, const std::string& cmd) {
    const double lam = cfg.get<double>("lam", 0.5), t = cfg.get<double>("t", 1.0);
    const auto grid = cfg.get<std::vector<int>>("n_grid", std::vector<int>{10, 20, 30, 40, 50});
    const NoProxyWitness w = no_proxy_witness(lam, t, grid);
    Sink sink(a.out);
    RunManifest m{cmd, {{"suite", a.suite}, {"config", cfg.json()}, {"increasing_from", w.increasing_from}}, a.seed,
                  sink.artifacts()};
    CsvWriter csv(sink.stream(), m,
                  {"n", "log_mgf", "log_mgf_per_n", "implied_alpha", "implied_alpha_lower", "lower_bound_ok", "increasing"});
    for (std::size_t i = 0; i < w.rows.size(); ++i) {
        const auto& r = w.rows[i];
        const double lower = lam > 0.0 ? r.n * std::log(lam) + 0.5 * t * t * r.n * r.n : -std::numeric_limits<double>::infinity();
        csv.write({cell(r.n), cell(r.log_mgf), cell(r.log_mgf_per_n), cell(r.implied_alpha), cell(r.implied_alpha_lower),
                   cell(r.log_mgf >= lower), cell(i >= w.increasing_from)});
    }
    return 0;
}

int run_experiment(const ExperimentArgs& a, const std::string& cmd) {
    const Config cfg(a.config);
    if (a.suite == "counterexample") return run_counterexample(cfg, a, cmd);
    if (a.jobs < 1) fail(ErrorKind::InvalidInput, "--jobs must be at least 1");
    const int runs = cfg.get<int>("runs", 100);
    if (runs < 1) fail(ErrorKind::InvalidInput, "runs must be at least 1");

    SuiteResult res;
    if (a.suite == "ols") {
        res = suite_ols(cfg, runs, a.jobs, a.seed);
    } else if (a.suite == "lasso") {
        res = suite_lasso(cfg, runs, a.jobs, a.seed);
    } else if (a.suite == "cov") {
        res = suite_cov(cfg, runs, a.jobs, a.seed);
    } else if (a.suite == "rds") {
        res = suite_rds(cfg, runs, a.jobs, a.seed);
    } else if (a.suite == "bandit") {
        res = suite_bandit(cfg, runs, a.jobs, a.seed);
    } else {
        fail(ErrorKind::InvalidInput, "unknown suite '" + a.suite + "'");
    }

    Sink sink(a.out);
    RunManifest m{cmd, {{"suite", a.suite}, {"config", cfg.json()}, {"resolved", res.resolved}, {"runs", runs}}, a.seed,
                  sink.artifacts()};
    CsvWriter csv(sink.stream(), m, {"run_id", "seed", "metric", "bound", "pass", "aux", "error"});
    for (std::size_t r = 0; r < res.rows.size(); ++r) {
        const auto& row = res.rows[r];
        csv.write({cell(static_cast<long>(r)), cell(run_seed(a.seed, static_cast<int>(r))), cell(row.metric), cell(row.bound),
                   cell(row.pass), cell(row.aux), row.error});
    }
    csv.write({"summary", cell(a.seed), cell(res.summary.metric), cell(res.summary.bound), cell(res.summary.pass),
               cell(res.summary.aux), ""});
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hoeffding-type bounds for finite Markov chains"};
    app.set_version_flag("--version", std::string(kToolVersion));
    app.require_subcommand(1);

    std::uint64_t seed = 0;
    bool seed_given = false;

    GapArgs gap;
    auto* gap_cmd = app.add_subcommand("gap", "spectral summary of a chain (JSON on stdout)");
    gap_cmd->add_option("chain", gap.chain, "chain JSON file")->required();
    gap_cmd->add_option("--k-max", gap.k_max, "largest k for lambda_k")->check(CLI::Range(1, 10000));
    gap_cmd->add_option("--kseq-csv", gap.kseq_csv, "write the lambda_k sequence to this CSV");

    BoundArgs bound;
    auto* bound_cmd = app.add_subcommand("bound", "mgf and tail bounds against exact and simulated values (CSV)");
    bound_cmd->add_option("chain", bound.chain, "chain JSON file")->required();
    bound_cmd->add_option("functions", bound.functions, "function JSON file")->required();
    bound_cmd->add_option("--theorem", bound.theorem, "classical, t21, t22, t23, t62 or ta1");
    bound_cmd->add_option("--t-grid", bound.t_grid, "start:stop:step or comma list");
    bound_cmd->add_option("--eps-grid", bound.eps_grid, "deviations for the tail table (mean scale for t62)");
    bound_cmd->add_option("--nu-file", bound.nu_file, "initial law for t23 and t62");
    bound_cmd->add_option("--p", bound.p, "norm order in (1, inf]");
    bound_cmd->add_option("--n0", bound.n0, "burn-in steps for t62");
    bound_cmd->add_option("--k", bound.k, "stride for ta1 (default: smallest k with lambda_k < 1)");
    bound_cmd->add_option("--reps", bound.reps, "Monte Carlo replicates per tail row");
    bound_cmd->add_option("--seed", seed, "RNG seed")->each([&](const std::string&) { seed_given = true; });
    bound_cmd->add_option("--out", bound.out, "mgf table CSV path (default stdout)");
    bound_cmd->add_option("--tail-out", bound.tail_out, "tail table CSV path (default: after the mgf table)");

    PlanArgs plan;
    auto* plan_cmd = app.add_subcommand("plan", "smallest n meeting a burn-in tail target (JSON on stdout)");
    plan_cmd->add_option("chain", plan.chain, "chain JSON file")->required();
    plan_cmd->add_option("--eps", plan.eps, "deviation of the average")->required();
    plan_cmd->add_option("--delta", plan.delta, "target tail probability")->required();
    plan_cmd->add_option("--nu-file", plan.nu_file, "initial law (default: stationary)");
    plan_cmd->add_option("--p", plan.p, "norm order in (1, inf]");
    plan_cmd->add_option("--n0", plan.n0, "burn-in steps");
    plan_cmd->add_option("--range", plan.range, "range a b of the function")->expected(2);
    plan_cmd->add_option("--functions", plan.functions, "take the range from a function JSON file");

    ThetaArgs th;
    auto* theta_cmd = app.add_subcommand("theta", "two-state extremal eigenvalue table (CSV)");
    theta_cmd->add_option("--lam", th.lam, "lambda in [0,1)");
    theta_cmd->add_option("--mu", th.mu, "stationary mass of b in (0,1)");
    theta_cmd->add_option("--a", th.a, "lower value");
    theta_cmd->add_option("--b", th.b, "upper value");
    theta_cmd->add_option("--t-grid", th.t_grid, "start:stop:step or comma list");
    theta_cmd->add_option("--out", th.out, "CSV path (default stdout)");

    ExperimentArgs ex;
    auto* ex_cmd = app.add_subcommand("experiment", "seeded experiment suite (CSV)");
    ex_cmd->add_option("config", ex.config, "suite config JSON")->required();
    ex_cmd->add_option("--suite", ex.suite, "ols, lasso, cov, rds, bandit or counterexample")
        ->required()
        ->check(CLI::IsMember({"ols", "lasso", "cov", "rds", "bandit", "counterexample"}));
    ex_cmd->add_option("--jobs", ex.jobs, "worker threads");
    ex_cmd->add_option("--seed", seed, "RNG seed")->each([&](const std::string&) { seed_given = true; });
    ex_cmd->add_option("--out", ex.out, "CSV path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitValidation;
    }

    const std::string cmd = command_line(argc, argv);
    try {
        if (!seed_given) seed = default_seed();
        if (*gap_cmd) return run_gap(gap, cmd);
        if (*bound_cmd) {
            bound.seed = seed;
            return run_bound(bound, cmd);
        }
        if (*plan_cmd) return run_plan(plan, cmd);
        if (*theta_cmd) return run_theta(th, cmd);
        if (*ex_cmd) {
            ex.seed = seed;
            return run_experiment(ex, cmd);
        }
    } catch (const Error& e) {
        std::cerr << "hoeffmc: " << e.what() << '\n';
        return is_precondition_failure(e.kind()) ? kExitPrecondition : kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "hoeffmc: " << e.what() << '\n';
        return kExitValidation;
    }
    return kExitValidation;
}
