// Acceptance suite: one line per criterion, exit status 0 iff every selected
// criterion passes. `--only N` runs a single criterion.

#include "ojas/harness.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>

using namespace ojas;

namespace {

struct Verdict {
    bool pass = false;
    std::string detail;
};

std::string fmt(double x, int digits = 4) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, x);
    return buf;
}

double ln(double x) { return std::log(x); }

Verdict abstention_soundness_full() {
    const auto corpus = soundness_corpus(200, 2024);
    const SoundnessReport r = abstention_soundness(corpus, kFullPrecisionBits, 1e-6);
    std::ostringstream os;
    os << r.streams << " streams, " << r.answers << " answers, " << (r.streams - r.answers) << " bottom, "
       << r.violations << " violations, worst slack " << fmt(r.worst_slack);
    for (const auto& f : r.failures) os << "; " << f;
    return {r.passed() && r.answers > 0 && r.answers < r.streams, os.str()};
}

Verdict growth_success() {
    const std::size_t d = 64, n = 4096;
    const double R = 40.0 * ln(n) * ln(d);
    const double bound = 10.0 * ln(d) / R;
    std::size_t good = 0, answers = 0;
    double worst = 0.0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        Generated g = gen_spiked(d, n, R, 1.0, 7000 + seed);
        const SpectralSummary s = top_two_eigs(g.X);
        GridRunOptions opts;
        opts.threads = thread_cap();
        GridRun run = grid_run(g.X, opts, Prng(9000 + seed));
        if (!run.result.has_answer()) continue;
        ++answers;
        const double e = sin2_error(run.result.value(), s.vstar);
        worst = std::max(worst, e);
        if (e <= bound) ++good;
    }
    return {good >= 45, std::to_string(good) + "/50 answered with sin2 <= " + fmt(bound) + " (answers " +
                            std::to_string(answers) + ", worst sin2 " + fmt(worst) + ", R " + fmt(R) + ")"};
}

Verdict figure1_attack() {
    const AttackReport r = end_rotation_attack(20, 0.01, 0.04, 31);
    double lo = 1.0, hi = 0.0;
    for (double v : r.deviations) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    return {r.in_band >= 18, std::to_string(r.in_band) + "/20 deviations in [" + fmt(r.lo) + ", " + fmt(r.hi) +
                                 "], observed range [" + fmt(lo) + ", " + fmt(hi) + "]"};
}

Verdict lemma_monitors() {
    const MonitorSuiteReport g = growth_suite(100, 32, 1024, 11);
    const MonitorSuiteReport m = movement_suite(100, 32, 1024, 12);
    std::ostringstream os;
    os << "growth: " << g.passed << "/" << g.streams << " pass, " << g.failed << " fail, " << g.inapplicable
       << " inapplicable, " << g.growth_shortfalls << " growth shortfalls, max violation " << fmt(g.max_violation)
       << "; movement: " << m.passed << "/" << m.streams << " pass, " << m.failed << " fail, " << m.inapplicable
       << " inapplicable, max violation " << fmt(m.max_violation);
    return {g.ok() && m.ok() && g.streams == 100 && m.streams == 100, os.str()};
}

Verdict combinatorial() {
    Prng rng(5);
    const FuzzReport p = fuzz_prodab(1000, rng);
    const FuzzReport a = fuzz_maxa(1000, rng);
    const FuzzReport m = fuzz_matsample(100, rng, 256, 64);
    bool ok = p.passed() && a.passed() && m.passed();
    std::ostringstream os;
    os << "prodab " << p.failures << "/1000 fail, maxa " << a.failures << "/1000 fail, matsample " << m.failures
       << "/100 fail";
    double prev = 0.0;
    for (std::size_t n : {256u, 1024u}) {
        const Eigen::MatrixXd A = gen_matsample_tight(n);
        const Sides s = check_matsample(A);
        const double ratio = s.lhs / max_subsequence_energy(A);
        const double target = 0.05 * ln(n) * ln(n);
        ok = ok && s.holds(1e-9 * s.rhs) && ratio >= target && ratio > prev;
        os << "; tight n=" << n << " lhs/B " << fmt(ratio) << " (>= " << fmt(target) << "), rhs/lhs "
           << fmt(s.rhs / s.lhs);
        prev = ratio;
    }
    return {ok, os.str()};
}

Verdict lower_bound_spectra() {
    const BandReport pd = pdup_band(4096, 20, 50, 100);
    const BandReport dp = dp_band(512, 16, 50, 200);
    return {pd.passed() && dp.passed(), "partial_duplicate " + std::to_string(pd.successes) + "/50 (need 45), D_p " +
                                            std::to_string(dp.successes) + "/50 (need 45)"};
}

Verdict baseline_separation() {
    SweepConfig cfg;
    cfg.d = 128;
    cfg.n = 4096;
    const double r_grid = 40.0 * ln(cfg.n) * ln(cfg.d);
    cfg.ratios = {16.0, r_grid};
    cfg.trials = 20;
    cfg.algos = {Algo::fd, Algo::grid};
    cfg.ell = 16;
    cfg.seed = 77;
    const auto rows = run_sweep(cfg);
    double fd_median = 0.0, grid_median = 1.0;
    for (const auto& r : rows) {
        if (r.R == 16.0 && r.algo == Algo::fd) fd_median = r.median_sin2;
        if (r.R == r_grid && r.algo == Algo::grid) grid_median = r.median_sin2;
    }
    const bool ok = fd_median >= 0.1 && grid_median <= 0.05;
    return {ok, "fd (ell 16) median sin2 at R=16: " + fmt(fd_median) + " (need >= 0.1); grid median sin2 at R=" +
                    fmt(r_grid) + ": " + fmt(grid_median) + " (need <= 0.05)"};
}

Verdict precision() {
    const auto corpus = soundness_corpus(200, 2024);
    const SoundnessReport r = abstention_soundness(corpus, 0, 1e-3);
    std::ostringstream os;
    os << "mantissa bits ceil(4 log2(nd)) capped at 52: " << r.answers << " answers over " << r.streams
       << " streams, " << r.violations << " violations, worst slack " << fmt(r.worst_slack);
    for (const auto& f : r.failures) os << "; " << f;
    return {r.passed(), os.str()};
}

Verdict space_accounting() {
    const std::size_t d = 64;
    const int b = 24;
    Generated g = gen_partial_duplicate(d, 40, 8, 3);
    const std::size_t n = g.X.rows();
    GridRunOptions opts;
    opts.b = b;
    const GridRun run = grid_run(g.X, opts, Prng(1));
    const std::size_t G = grid_size(d, n, b);
    const std::size_t expected_reals = G * (d + 2) + (d + 1);
    const std::size_t bytes = run.diagnostics.space_reals_peak * sizeof(double);
    const std::size_t budget = 8 * (2 * static_cast<std::size_t>(grid_half_width(d, n, b)) + 1) * (d + 2) * 8;

    // Same count when the grid is driven row by row.
    RateGridState state = RateGridState::init(d, n, b, kFullPrecisionBits, Prng(1));
    std::size_t peak = 0;
    for (std::size_t i = 0; i < n; ++i) {
        state.step(g.X.row(i));
        peak = std::max(peak, state.space_reals());
    }

    Prng rng(2);
    const OjaRun oja = oja_run(g.X, {0.01, kFullPrecisionBits, false, std::nullopt}, rng);
    const std::size_t oja_bytes = oja.state.space_reals() * sizeof(double);

    const bool ok = run.diagnostics.space_reals_peak == expected_reals && peak == expected_reals && bytes <= budget &&
                    oja_bytes <= 8 * (d + 4);
    return {ok, "grid " + std::to_string(bytes) + " bytes (" + std::to_string(G) + " rates, budget " +
                    std::to_string(budget) + "), oja " + std::to_string(oja_bytes) + " bytes (budget " +
                    std::to_string(8 * (d + 4)) + ")"};
}

Verdict oracle_equivalence() {
    Prng rng(10);
    std::size_t good = 0;
    double worst_val = 0.0, worst_vec = 0.0;
    for (int t = 0; t < 100; ++t) {
        const std::size_t d = 2 + rng.uniform_index(31);
        const std::size_t n = 1 + rng.uniform_index(64);
        RowMatrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = rng.normal();
        const StreamMatrix X(m);
        const SpectralSummary s = top_two_eigs(X);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(X.matrix().transpose() * X.matrix());
        const Vec& ev = es.eigenvalues();
        const double l1 = ev[ev.size() - 1];
        const double l2 = std::max(0.0, ev[ev.size() - 2]);
        const double e1 = std::abs(s.lambda1 - l1) / l1;
        const double e2 = std::abs(s.lambda2 - l2) / l1;
        const double c = std::abs(s.vstar.vec().dot(es.eigenvectors().col(ev.size() - 1)));
        const double ev_err = 1.0 - c;
        worst_val = std::max({worst_val, e1, e2});
        worst_vec = std::max(worst_vec, ev_err);
        if (e1 <= 1e-8 && e2 <= 1e-8 && ev_err <= 1e-8) ++good;
    }
    return {good == 100, std::to_string(good) + "/100 within 1e-8 (worst eigenvalue error " + fmt(worst_val) +
                             " relative to lambda1, worst 1-|<v,v_dense>| " + fmt(worst_vec) + ")"};
}

struct Criterion {
    const char* name;
    std::function<Verdict()> run;
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Acceptance criteria"};
    int only = 0;
    app.add_option("--only", only, "Run a single criterion (1-10)");
    CLI11_PARSE(app, argc, argv);

    const std::vector<Criterion> criteria{
        {"abstention_soundness", abstention_soundness_full},
        {"growth_success", growth_success},
        {"figure1_attack", figure1_attack},
        {"lemma_monitors", lemma_monitors},
        {"combinatorial", combinatorial},
        {"lower_bound_spectra", lower_bound_spectra},
        {"baseline_separation", baseline_separation},
        {"precision", precision},
        {"space_accounting", space_accounting},
        {"oracle_equivalence", oracle_equivalence},
    };

    bool all = true;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        if (only != 0 && static_cast<std::size_t>(only) != i + 1) continue;
        const auto start = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = criteria[i].run();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("[%s] %zu %s: %s (%.1fs)\n", v.pass ? "PASS" : "FAIL", i + 1, criteria[i].name, v.detail.c_str(), secs);
        std::fflush(stdout);
        all = all && v.pass;
    }
    return all ? 0 : 1;
}
