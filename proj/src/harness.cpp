#include "ojas/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

namespace ojas {

std::string to_string(Algo a) {
    switch (a) {
        case Algo::oja: return "oja";
        case Algo::grid: return "grid";
        case Algo::fd: return "fd";
        case Algo::oracle: return "oracle";
    }
    return "unknown";
}

Algo parse_algo(const std::string& name) {
    if (name == "oja") return Algo::oja;
    if (name == "grid") return Algo::grid;
    if (name == "fd") return Algo::fd;
    if (name == "oracle") return Algo::oracle;
    throw UsageError("unknown algo: " + name);
}

std::size_t thread_cap(std::size_t requested) {
    std::size_t n = requested ? requested : std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("OJA_THREADS")) {
        char* end = nullptr;
        const long cap = std::strtol(env, &end, 10);
        if (end != env && cap >= 1) n = std::min(n, static_cast<std::size_t>(cap));
    }
    return n;
}

double auto_eta(const SpectralSummary& s, std::size_t d) {
    return 2.0 * default_growth_threshold(std::max<std::size_t>(d, 2)) / s.lambda1;
}

OracleDigest run_oracle(const StreamMatrix& X) {
    OracleDigest o;
    try {
        o.summary = top_two_eigs(X);
    } catch (const std::exception& e) {
        o.error = e.what();
    }
    return o;
}

namespace {

RunReport run_with_oracle(const StreamMatrix& X, const RunConfig& cfg, OracleDigest oracle, bool sigmas) {
    RunReport r;
    r.algo = cfg.algo;
    r.n = X.rows();
    r.d = X.dim();
    r.seed = cfg.seed;
    r.mantissa_bits = cfg.mantissa_bits;
    r.oracle = std::move(oracle);
    const auto start = std::chrono::steady_clock::now();

    switch (cfg.algo) {
        case Algo::oja: {
            double eta = 0.0;
            if (cfg.eta) {
                eta = *cfg.eta;
                r.eta_source = "given";
            } else {
                if (!r.oracle.summary) throw std::runtime_error("--eta auto needs the oracle: " + r.oracle.error);
                eta = auto_eta(*r.oracle.summary, X.dim());
                r.eta_source = "oracle-assisted";
            }
            Prng rng(cfg.seed);
            OjaRun run = oja_run(X, {eta, cfg.mantissa_bits, false, std::nullopt}, rng);
            if (run.result.has_answer()) r.answer = run.result.value();
            r.eta_chosen = eta;
            r.space_bytes_peak = run.state.space_reals() * sizeof(double);
            break;
        }
        case Algo::grid: {
            GridRunOptions opts;
            opts.b = cfg.b;
            opts.mantissa_bits = cfg.mantissa_bits;
            opts.threads = std::max<std::size_t>(1, cfg.threads);
            GridRun run = grid_run(X, opts, Prng(cfg.seed));
            if (run.result.has_answer()) r.answer = run.result.value();
            const auto& diag = run.diagnostics;
            r.b = diag.b;
            r.grid_size = diag.states.size();
            r.space_bytes_peak = diag.space_reals_peak * sizeof(double);
            r.branch = diag.branch == GridBranch::none ? "none" : diag.branch == GridBranch::oja ? "oja" : "heavy_row";
            if (diag.i_star) {
                r.i_star_exponent = diag.states[*diag.i_star].exponent;
                r.eta_chosen = diag.states[*diag.i_star].eta;
                r.eta_source = "grid";
            }
            break;
        }
        case Algo::fd: {
            FdSketch sk(X.dim(), cfg.ell);
            for (std::size_t i = 0; i < X.rows(); ++i) sk.update(X.row(i));
            try {
                r.answer = sk.top_direction();
            } catch (const ZeroSketch&) {
            }
            r.ell = cfg.ell;
            r.space_bytes_peak = sk.space_reals() * sizeof(double);
            break;
        }
        case Algo::oracle: {
            if (r.oracle.summary) r.answer = r.oracle.summary->vstar;
            const std::size_t m = std::min(X.rows(), X.dim());
            r.space_bytes_peak = m * m * sizeof(double);
            break;
        }
    }
    r.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

    if (r.oracle.summary) {
        if (r.answer) r.answer_sin2 = sin2_error(*r.answer, r.oracle.summary->vstar);
        if (sigmas && r.eta_chosen) {
            const SigmaPair sp = sigma_pair(X, *r.eta_chosen, *r.oracle.summary);
            r.sigma1 = sp.sigma1;
            r.sigma2 = sp.sigma2;
        }
    }
    return r;
}

template <class T>
Json opt(const std::optional<T>& v) {
    return v ? Json(*v) : Json(nullptr);
}

}  // namespace

RunReport run_algorithm(const StreamMatrix& X, const RunConfig& cfg) {
    return run_with_oracle(X, cfg, run_oracle(X), true);
}

Json to_json(const RunReport& r, const Json& spec_echo, bool timing) {
    Json j;
    j["algo"] = to_string(r.algo);
    j["spec"] = spec_echo;
    j["n"] = r.n;
    j["d"] = r.d;
    j["seed"] = r.seed;
    j["result"] = {{"bottom", r.bottom()}, {"answer_sin2", opt(r.answer_sin2)}};

    Json oracle;
    if (r.oracle.summary) {
        const auto& s = *r.oracle.summary;
        oracle["lambda1"] = s.lambda1;
        oracle["lambda2"] = s.lambda2;
        oracle["ratio"] = std::isfinite(s.ratio) ? Json(s.ratio) : Json(nullptr);
    } else {
        oracle["error"] = r.oracle.error;
    }
    j["oracle"] = oracle;
    j["sigma1"] = opt(r.sigma1);
    j["sigma2"] = opt(r.sigma2);
    j["eta_chosen"] = opt(r.eta_chosen);
    j["eta_source"] = r.eta_source.empty() ? Json(nullptr) : Json(r.eta_source);
    j["space_bytes_peak"] = r.space_bytes_peak;
    j["mantissa_bits"] = r.mantissa_bits;
    if (r.algo == Algo::grid) {
        j["grid"] = {{"b", opt(r.b)},
                     {"size", r.grid_size},
                     {"i_star_exponent", opt(r.i_star_exponent)},
                     {"branch", r.branch}};
    }
    if (r.algo == Algo::fd) j["ell"] = opt(r.ell);
    if (timing) j["wall_ms"] = r.wall_ms;
    return j;
}

// ---------------------------------------------------------------------------

SweepConfig parse_sweep_config(const Json& j) {
    if (!j.is_object()) throw UsageError("sweep config must be a JSON object");
    SweepConfig c;
    auto count = [&](const char* key, std::size_t& out) {
        if (!j.contains(key)) return;
        if (!j[key].is_number_unsigned() || j[key].get<std::size_t>() == 0) {
            throw UsageError(std::string("sweep config: '") + key + "' must be a positive integer");
        }
        out = j[key].get<std::size_t>();
    };
    try {
        count("d", c.d);
        count("n", c.n);
        count("trials", c.trials);
        count("ell", c.ell);
        count("threads", c.threads);
        if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
        if (j.contains("lambda2")) c.lambda2 = j["lambda2"].get<double>();
        if (j.contains("b")) c.b = j["b"].get<int>();
        if (j.contains("mantissa_bits")) c.mantissa_bits = j["mantissa_bits"].get<int>();
        if (!j.contains("R") || !j["R"].is_array()) throw UsageError("sweep config: 'R' must be a list");
        for (const auto& r : j["R"]) {
            if (!r.is_number() || !(r.get<double>() > 1.0)) throw UsageError("sweep config: every R must be a number > 1");
            c.ratios.push_back(r.get<double>());
        }
        if (j.contains("algos")) {
            if (!j["algos"].is_array()) throw UsageError("sweep config: 'algos' must be a list");
            c.algos.clear();
            for (const auto& a : j["algos"]) c.algos.push_back(parse_algo(a.get<std::string>()));
        }
    } catch (const nlohmann::json::exception& e) {
        throw UsageError(std::string("sweep config: ") + e.what());
    }
    if (c.ratios.empty()) throw UsageError("sweep config: 'R' is empty");
    if (c.algos.empty()) throw UsageError("sweep config: 'algos' is empty");
    if (!(c.lambda2 > 0.0)) throw UsageError("sweep config: lambda2 must be positive");
    if (c.mantissa_bits < 1 || c.mantissa_bits > kFullPrecisionBits) throw UsageError("sweep config: mantissa_bits must be in [1, 52]");
    return c;
}

namespace {

double median(std::vector<double> v) {
    if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

// Runs fn(i) for i in [0, count) on up to `threads` workers and rethrows the
// first exception.
template <class Fn>
void parallel_for(std::size_t count, std::size_t threads, Fn fn) {
    const std::size_t workers = std::max<std::size_t>(1, std::min(threads, count));
    if (workers == 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mu;
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(error_mu);
                    if (!error) error = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace

std::vector<SweepRow> run_sweep(const SweepConfig& cfg) {
    const std::size_t cells = cfg.ratios.size() * cfg.trials;
    std::vector<std::vector<RunReport>> results(cells);
    const Prng base(cfg.seed);

    parallel_for(cells, thread_cap(cfg.threads), [&](std::size_t cell) {
        const std::size_t ri = cell / cfg.trials;
        const std::size_t t = cell % cfg.trials;
        const std::uint64_t stream_seed = base.derive(ri).derive(t).next_u64();
        Generated g = gen_spiked(cfg.d, cfg.n, cfg.ratios[ri] * cfg.lambda2, cfg.lambda2, stream_seed);
        const OracleDigest oracle = run_oracle(g.X);
        for (Algo a : cfg.algos) {
            RunConfig rc;
            rc.algo = a;
            rc.b = cfg.b;
            rc.mantissa_bits = cfg.mantissa_bits;
            rc.ell = cfg.ell;
            rc.seed = stream_seed + 1;
            results[cell].push_back(run_with_oracle(g.X, rc, oracle, false));
        }
    });

    std::vector<SweepRow> rows;
    for (std::size_t ri = 0; ri < cfg.ratios.size(); ++ri) {
        for (std::size_t ai = 0; ai < cfg.algos.size(); ++ai) {
            SweepRow row;
            row.R = cfg.ratios[ri];
            row.algo = cfg.algos[ai];
            row.trials = cfg.trials;
            std::size_t bottoms = 0;
            for (std::size_t t = 0; t < cfg.trials; ++t) {
                const RunReport& r = results[ri * cfg.trials + t][ai];
                row.space_bytes = std::max(row.space_bytes, r.space_bytes_peak);
                if (r.answer_sin2) {
                    row.sin2.push_back(*r.answer_sin2);
                } else if (r.bottom()) {
                    ++bottoms;
                }
            }
            row.median_sin2 = median(row.sin2);
            row.abstention_rate = static_cast<double>(bottoms) / static_cast<double>(cfg.trials);
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::ostringstream os;
    os << kSweepCsvHeader << '\n';
    for (const auto& r : rows) {
        os << format_real(r.R) << ',' << to_string(r.algo) << ',' << r.trials << ',' << format_real(r.median_sin2) << ','
           << format_real(r.abstention_rate) << ',' << r.space_bytes << '\n';
    }
    return os.str();
}

// ---------------------------------------------------------------------------

std::vector<SoundnessCase> soundness_corpus(std::size_t count, std::uint64_t seed) {
    std::vector<SoundnessCase> out;
    out.reserve(count);
    const Prng base(seed);
    for (std::size_t i = 0; i < count; ++i) {
        Prng rng = base.derive(i);
        const std::uint64_t s = rng.next_u64();
        auto pick = [&rng](std::initializer_list<double> xs) { return *(xs.begin() + rng.uniform_index(xs.size())); };
        switch (i % 3) {
            case 0: {
                const auto d = static_cast<std::size_t>(pick({8, 16, 32, 64}));
                const auto n = static_cast<std::size_t>(pick({256, 512, 1024, 2048, 4096}));
                const double ratio = pick({3, 10, 30, 100, 1000});
                const double c = pick({2, 10, 20, 40, 80});
                Generated g = gen_spiked(d, n, ratio, 1.0, s);
                const double eta = std::min(1.0 / g.X.max_row_norm2(),
                                            c * std::log(static_cast<double>(d)) / (static_cast<double>(n) * ratio));
                out.push_back({"spiked", std::move(g.X), eta, s});
                break;
            }
            case 1: {
                const auto d = static_cast<std::size_t>(pick({4, 8, 16, 32}));
                std::vector<std::size_t> counts(d);
                for (auto& k : counts) k = 1 + rng.uniform_index(300);
                *std::max_element(counts.begin(), counts.end()) += 5;
                const double c = pick({2, 10, 20, 40, 80});
                const double top = static_cast<double>(*std::max_element(counts.begin(), counts.end()));
                const double eta = std::min(1.0, c * std::log(static_cast<double>(d)) / top);
                out.push_back({"commutative", gen_commutative(d, counts), eta, s});
                break;
            }
            default: {
                const auto d = static_cast<std::size_t>(pick({4, 8, 16}));
                const double eta = pick({0.005, 0.01, 0.02, 0.05});
                const double sigma2 = pick({0.01, 0.04, 0.1, 0.2});
                const auto bulk = static_cast<std::size_t>(pick({500, 1000, 2000, 4000}));
                Generated g = gen_end_rotation(d, bulk, eta, sigma2, s);
                out.push_back({"end_rotation", std::move(g.X), eta, s});
                break;
            }
        }
    }
    return out;
}

int precision_bits(std::size_t n, std::size_t d) {
    const double bits = std::ceil(4.0 * std::log2(static_cast<double>(n) * static_cast<double>(d)));
    return static_cast<int>(std::min<double>(kFullPrecisionBits, bits));
}

SoundnessReport abstention_soundness(const std::vector<SoundnessCase>& corpus, int mantissa_bits, double slack) {
    SoundnessReport rep;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        const auto& c = corpus[i];
        ++rep.streams;
        const SpectralSummary s = top_two_eigs(c.X);
        Prng rng(c.seed ^ 0x0a11ce5eedULL);
        const int bits = mantissa_bits ? mantissa_bits : precision_bits(c.X.rows(), c.X.dim());
        OjaRun run = oja_run(c.X, {c.eta, bits, false, std::nullopt}, rng);
        if (!run.result.has_answer()) continue;
        ++rep.answers;
        const double err = std::sqrt(sin2_error(run.result.value(), s.vstar));
        const double sigma2 = sigma_pair(c.X, c.eta, s).sigma2;
        const double bound = std::sqrt(sigma2) + slack + std::pow(static_cast<double>(c.X.dim()), -9.0);
        rep.worst_slack = std::min(rep.worst_slack, bound - err);
        if (err > bound) {
            ++rep.violations;
            rep.failures.push_back("case " + std::to_string(i) + " (" + c.label + "): error " + format_real(err) +
                                   " > bound " + format_real(bound));
        }
    }
    return rep;
}

namespace {

struct MonitorStream {
    StreamMatrix X;
    SpectralSummary oracle;
    double eta;
    double sigma1;
    double sigma2;
};

MonitorStream monitor_stream(std::size_t d, std::size_t n, std::uint64_t seed, std::size_t t) {
    Prng rng = Prng(seed).derive(t);
    const double ratios[] = {10, 30, 100, 300};
    const double cs[] = {5, 10, 20, 40};
    const double ratio = ratios[rng.uniform_index(4)];
    const double c = cs[rng.uniform_index(4)];
    Generated g = gen_spiked(d, n, ratio, 1.0, rng.next_u64());
    SpectralSummary s = top_two_eigs(g.X);
    const double eta = std::min(1.0 / g.X.max_row_norm2(), c * std::log(static_cast<double>(d)) / s.lambda1);
    const SigmaPair sp = sigma_pair(g.X, eta, s);
    return {std::move(g.X), std::move(s), eta, sp.sigma1, sp.sigma2};
}

void tally(MonitorSuiteReport& rep, const MonitorReport& m) {
    ++rep.streams;
    rep.checks += m.n_checks;
    rep.max_violation = std::max(rep.max_violation, m.max_violation);
    switch (m.status) {
        case MonitorStatus::pass: ++rep.passed; break;
        case MonitorStatus::fail: ++rep.failed; break;
        case MonitorStatus::inapplicable: ++rep.inapplicable; break;
    }
}

}  // namespace

MonitorSuiteReport growth_suite(std::size_t streams, std::size_t d, std::size_t n, std::uint64_t seed, double tol) {
    MonitorSuiteReport rep;
    const double log_n = std::log(static_cast<double>(n));
    for (std::size_t t = 0; t < streams; ++t) {
        MonitorStream ms = monitor_stream(d, n, seed, t);
        MonitorContext ctx{&ms.X, ms.eta, ms.oracle.vstar, ms.sigma2, tol};

        Prng rng = Prng(seed).derive(t).derive(1);
        OjaRun run = oja_run(ms.X, {ms.eta, kFullPrecisionBits, true, std::nullopt}, rng);
        const double pv0 = perp_norm(run.trace->directions[0], ms.oracle.vstar);
        tally(rep, monitor_growth_correctness(*run.trace, ctx, pv0));

        // Growth from v*: log‖v_n‖ ≥ σ₁ / (16 (1 + σ₂² ln² n)).
        OjaRun from_star = oja_run_from(ms.X, ms.oracle.vstar, {ms.eta, kFullPrecisionBits, false, std::nullopt});
        const double need = ms.sigma1 / (16.0 * (1.0 + ms.sigma2 * ms.sigma2 * log_n * log_n));
        if (from_star.state.log_norm() < need - tol) ++rep.growth_shortfalls;
    }
    return rep;
}

MonitorSuiteReport movement_suite(std::size_t streams, std::size_t d, std::size_t n, std::uint64_t seed, double tol) {
    MonitorSuiteReport rep;
    for (std::size_t t = 0; t < streams; ++t) {
        MonitorStream ms = monitor_stream(d, n, seed, t);
        MonitorContext ctx{&ms.X, ms.eta, ms.oracle.vstar, ms.sigma2, tol};
        OjaRun run = oja_run_from(ms.X, ms.oracle.vstar, {ms.eta, kFullPrecisionBits, true, std::nullopt});
        Prng rng = Prng(seed).derive(t).derive(2);
        tally(rep, monitor_movement(*run.trace, ctx, 200, rng));
    }
    return rep;
}

AttackReport end_rotation_attack(std::size_t trials, double eta, double sigma2, std::uint64_t seed) {
    AttackReport rep;
    rep.trials = trials;
    rep.lo = 0.5 * std::sqrt(sigma2);
    rep.hi = 2.0 * std::sqrt(sigma2);
    const UnitVec e1 = UnitVec::basis(8, 0);
    for (std::size_t t = 0; t < trials; ++t) {
        Generated g = gen_end_rotation(8, 10000, eta, sigma2, seed + t);
        Prng rng = Prng(seed + t).derive(1);
        OjaRun run = oja_run(g.X, {eta, kFullPrecisionBits, false, std::nullopt}, rng);
        const double dev = perp_norm(run.state.vhat(), e1);
        rep.deviations.push_back(dev);
        if (dev >= rep.lo && dev <= rep.hi) ++rep.in_band;
    }
    return rep;
}

// ---------------------------------------------------------------------------

namespace {

Json fuzz_json(const FuzzReport& f) {
    return {{"cases", f.cases}, {"failures", f.failures}, {"min_slack", f.min_slack}, {"pass", f.passed()}};
}

Json suite_json(const MonitorSuiteReport& r) {
    return {{"streams", r.streams},
            {"passed", r.passed},
            {"failed", r.failed},
            {"inapplicable", r.inapplicable},
            {"checks", r.checks},
            {"max_violation", r.max_violation},
            {"growth_shortfalls", r.growth_shortfalls},
            {"pass", r.ok()}};
}

Json band_json(const BandReport& b) {
    return {{"trials", b.trials}, {"successes", b.successes}, {"required", b.required}, {"primary", b.primary},
            {"secondary", b.secondary}, {"pass", b.passed()}};
}

std::size_t or_default(std::size_t v, std::size_t fallback) { return v ? v : fallback; }

}  // namespace

CheckOutcome run_check(const CheckRequest& req) {
    CheckOutcome out;
    Json& j = out.report;
    j["lemma"] = req.lemma;
    j["seed"] = req.seed;
    Prng rng(req.seed);

    if (req.lemma == "prodab") {
        const FuzzReport f = fuzz_prodab(req.fuzz, rng);
        j["fuzz"] = fuzz_json(f);
        out.passed = f.passed();
    } else if (req.lemma == "maxa") {
        const FuzzReport f = fuzz_maxa(req.fuzz, rng);
        const double a2 = check_maxa(1.0, 1.0, 1.0, 0.0).equality_point;
        const MaxaSides eq = check_maxa(1.0, 1.0, std::sqrt(a2), std::sqrt(1.0 - a2));
        j["fuzz"] = fuzz_json(f);
        j["equality"] = {{"lhs", eq.lhs}, {"rhs", eq.rhs}, {"equality_point", eq.equality_point}};
        out.passed = f.passed() && std::abs(eq.lhs - eq.rhs) <= 1e-9;
    } else if (req.lemma == "matsample") {
        if (req.tight) {
            const std::size_t n = or_default(req.n, 256);
            Eigen::MatrixXd A;
            try {
                A = gen_matsample_tight(n);
            } catch (const std::invalid_argument& e) {
                throw UsageError(e.what());
            }
            const Sides s = check_matsample(A);
            const double B = max_subsequence_energy(A);
            const double target = 0.05 * std::log(static_cast<double>(n)) * std::log(static_cast<double>(n));
            j["n"] = n;
            j["lhs"] = s.lhs;
            j["rhs"] = s.rhs;
            j["max_subsequence"] = B;
            j["lhs_over_B"] = s.lhs / B;
            j["lhs_over_B_target"] = target;
            j["rhs_over_lhs"] = s.rhs / s.lhs;
            out.passed = s.holds(1e-9 * s.rhs) && s.lhs / B >= target && s.rhs / s.lhs >= 1.0 && s.rhs / s.lhs <= 30.0;
        } else {
            const FuzzReport f = fuzz_matsample(or_default(req.trials, 100), rng, or_default(req.n, 256), or_default(req.d, 64));
            j["fuzz"] = fuzz_json(f);
            out.passed = f.passed();
        }
    } else if (req.lemma == "growth" || req.lemma == "movement") {
        const std::size_t streams = or_default(req.trials, 100);
        const std::size_t d = or_default(req.d, 32);
        const std::size_t n = or_default(req.n, 1024);
        const MonitorSuiteReport r =
            req.lemma == "growth" ? growth_suite(streams, d, n, req.seed) : movement_suite(streams, d, n, req.seed);
        j["d"] = d;
        j["n"] = n;
        j["suite"] = suite_json(r);
        out.passed = r.ok();
    } else if (req.lemma == "stat") {
        StatClaim claim;
        try {
            claim = parse_stat_claim(req.claim);
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
        StatParams p;
        p.delta = req.delta;
        if (req.n) p.n = req.n;
        if (claim == StatClaim::rudelson_opnorm) p.d = req.d;  // 0 keeps the matrix square
        else if (req.d) p.d = req.d;
        const std::size_t trials = or_default(req.trials, claim == StatClaim::gaussianvecnorm ? 10000 : 200);
        if (trials < 100) throw UsageError("stat check needs at least 100 trials");
        const StatReport r = stat_check(claim, p, trials, rng);
        j["claim"] = to_string(claim);
        j["trials"] = r.trials;
        j["failures"] = r.failures;
        j["rate"] = r.rate();
        j["claimed"] = r.claimed;
        out.passed = r.passed();
    } else if (req.lemma == "dp") {
        const std::size_t d = or_default(req.d, 512);
        if (req.p < 2 || d % req.p != 0) throw UsageError("dp check needs p >= 2 dividing d");
        const BandReport b = dp_band(d, req.p, or_default(req.trials, 50), req.seed);
        j["d"] = d;
        j["p"] = req.p;
        j["band"] = band_json(b);
        out.passed = b.passed();
    } else if (req.lemma == "pdup") {
        const std::size_t d = or_default(req.d, 4096);
        if (d % 2 != 0 || req.k < 1) throw UsageError("pdup check needs even d and k >= 1");
        const BandReport b = pdup_band(d, req.k, or_default(req.trials, 50), req.seed);
        j["d"] = d;
        j["k"] = req.k;
        j["band"] = band_json(b);
        out.passed = b.passed();
    } else {
        throw UsageError("unknown lemma: " + req.lemma);
    }
    j["pass"] = out.passed;
    return out;
}

}  // namespace ojas
