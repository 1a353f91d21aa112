// ojas: generate streams, run the streaming PCA algorithms, check lemmas,
// sweep parameters.

#include "ojas/harness.hpp"
#include "ojas/stream_io.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitCheck = 4;

using ojas::Json;

Json vec_json(const ojas::Vec& v) {
    Json a = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
    return a;
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(out_path, std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write " + out_path);
    f << text;
}

struct GenFlags {
    std::string kind, out;
    std::size_t d = 0, n = 0, k = 1, p = 2;
    double ratio = 0.0, lambda2 = 1.0, eta = 0.01, sigma2 = 0.04;
    std::vector<std::size_t> counts;
    std::uint64_t seed = 0;
    bool shuffle = false;
};

int cmd_gen(const GenFlags& f, CLI::App* sub) {
    ojas::StreamSpec spec;
    try {
        spec.kind = ojas::parse_stream_kind(f.kind);
    } catch (const std::invalid_argument& e) {
        throw ojas::UsageError(e.what());
    }
    if (spec.kind != ojas::StreamKind::matsample_tight && sub->count("--d") == 0) throw ojas::UsageError("--d is required");
    spec.d = f.d;
    spec.n = f.n;
    spec.seed = f.seed;
    spec.ratio = f.ratio;
    spec.lambda2 = f.lambda2;
    spec.counts = f.counts;
    spec.eta = f.eta;
    spec.sigma2 = f.sigma2;
    spec.k = f.k;
    spec.p = f.p;
    spec.shuffle = f.shuffle;
    if (spec.kind == ojas::StreamKind::partial_duplicate && sub->count("--n") == 0) {
        spec.n = ojas::default_partial_duplicate_rows(f.d, f.k);
    }

    ojas::Generated g = [&] {
        try {
            return ojas::generate(spec);
        } catch (const std::invalid_argument& e) {
            throw ojas::UsageError(e.what());
        }
    }();
    ojas::write_stream(f.out, g.X);

    Json echo;
    echo["kind"] = ojas::to_string(spec.kind);
    echo["d"] = g.X.dim();
    echo["n"] = g.X.rows();
    echo["seed"] = spec.seed;
    switch (spec.kind) {
        case ojas::StreamKind::spiked: echo["ratio"] = spec.ratio; echo["lambda2"] = spec.lambda2; break;
        case ojas::StreamKind::commutative: echo["counts"] = spec.counts; break;
        case ojas::StreamKind::end_rotation: echo["n_bulk"] = spec.n; echo["eta"] = spec.eta; echo["sigma2"] = spec.sigma2; break;
        case ojas::StreamKind::partial_duplicate: echo["k"] = spec.k; echo["random_rows"] = spec.n; echo["shuffle"] = spec.shuffle; break;
        case ojas::StreamKind::mergeable_hard: echo["p"] = spec.p; break;
        case ojas::StreamKind::matsample_tight: echo["size"] = spec.n; break;
    }

    Json truth;
    truth["spec"] = echo;
    truth["planted"] = g.truth.planted ? vec_json(g.truth.planted->vec()) : Json(nullptr);
    if (g.truth.x) truth["x"] = vec_json(*g.truth.x);
    if (g.truth.y) truth["y"] = vec_json(*g.truth.y);
    if (!g.truth.j_star.empty()) {
        truth["j_star"] = g.truth.j_star;
        truth["block_rows"] = g.truth.block_rows;
    }
    if (g.truth.tail_rows) truth["tail_rows"] = g.truth.tail_rows;
    emit(ojas::dump_json(truth) + "\n", ojas::sidecar_path(f.out));

    Json summary{{"out", f.out}, {"truth", ojas::sidecar_path(f.out)}, {"n", g.X.rows()}, {"d", g.X.dim()}};
    std::cout << ojas::dump_json(summary) << "\n";
    return 0;
}

struct RunFlags {
    std::string in, algo, eta = "auto", out;
    int b = 0, bits = ojas::kFullPrecisionBits;
    std::size_t ell = 16, threads = 0;
    std::uint64_t seed = 0;
    bool timing = false;
};

int cmd_run(const RunFlags& f) {
    ojas::RunConfig cfg;
    cfg.algo = ojas::parse_algo(f.algo);
    if (f.eta != "auto") {
        try {
            std::size_t used = 0;
            cfg.eta = std::stod(f.eta, &used);
            if (used != f.eta.size() || !(*cfg.eta > 0.0)) throw std::invalid_argument("eta");
        } catch (const std::exception&) {
            throw ojas::UsageError("--eta must be a positive number or 'auto'");
        }
    }
    if (f.bits < 1 || f.bits > ojas::kFullPrecisionBits) throw ojas::UsageError("--bits must be in [1, 52]");
    if (f.ell < 1) throw ojas::UsageError("--ell must be >= 1");
    cfg.b = f.b;
    cfg.mantissa_bits = f.bits;
    cfg.ell = f.ell;
    cfg.seed = f.seed;
    cfg.threads = ojas::thread_cap(f.threads);

    const ojas::StreamMatrix X = ojas::read_stream(f.in);
    const ojas::RunReport r = ojas::run_algorithm(X, cfg);

    Json echo{{"input", std::filesystem::path(f.in).filename().string()},
              {"eta", f.eta},
              {"b", f.b},
              {"bits", f.bits},
              {"ell", f.ell}};
    const std::string truth = ojas::sidecar_path(f.in);
    if (std::filesystem::exists(truth)) {
        std::ifstream tf(truth);
        const Json t = Json::parse(tf, nullptr, false);
        if (!t.is_discarded() && t.contains("spec")) echo["stream"] = t["spec"];
    }
    emit(ojas::dump_json(ojas::to_json(r, echo, f.timing)) + "\n", f.out);
    return 0;
}

int cmd_check(const ojas::CheckRequest& req, const std::string& out) {
    const ojas::CheckOutcome c = ojas::run_check(req);
    emit(ojas::dump_json(c.report) + "\n", out);
    return c.passed ? 0 : kExitCheck;
}

int cmd_sweep(const std::string& config, const std::string& out, std::size_t threads) {
    std::ifstream f(config);
    if (!f) throw ojas::UsageError("cannot read config " + config);
    const Json j = Json::parse(f, nullptr, false);
    if (j.is_discarded()) throw ojas::UsageError("config is not valid JSON: " + config);
    ojas::SweepConfig cfg = ojas::parse_sweep_config(j);
    if (threads) cfg.threads = threads;
    emit(ojas::sweep_csv(ojas::run_sweep(cfg)), out);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Streaming top-eigenvector estimation with abstention"};
    app.require_subcommand(1);

    GenFlags gen;
    auto* g = app.add_subcommand("gen", "Generate a stream file and its .truth.json sidecar");
    g->add_option("--kind", gen.kind, "spiked | commutative | end_rotation | pdup | dp | matsample")->required();
    g->add_option("--d", gen.d, "Dimension");
    g->add_option("--n", gen.n, "Rows (spiked), bulk rows (end_rotation), random rows (pdup), size (matsample)");
    g->add_option("--ratio", gen.ratio, "Spiked: lambda1 per sample");
    g->add_option("--lambda2", gen.lambda2, "Spiked: lambda2 per sample");
    g->add_option("--counts", gen.counts, "Commutative: multiplicity of each basis vector")->delimiter(',');
    g->add_option("--eta", gen.eta, "End rotation: learning rate");
    g->add_option("--sigma2", gen.sigma2, "End rotation: target sigma2");
    g->add_option("--k", gen.k, "Partial duplicate: copies of x");
    g->add_option("--p", gen.p, "Mergeable hard: number of blocks");
    g->add_flag("--shuffle", gen.shuffle, "Partial duplicate: permute rows");
    g->add_option("--seed", gen.seed, "Seed");
    g->add_option("--out", gen.out, "Output stream file")->required();

    RunFlags run;
    auto* r = app.add_subcommand("run", "Run an algorithm on a stream file and report against the oracle");
    r->add_option("--in", run.in, "Input stream file")->required();
    r->add_option("--algo", run.algo, "oja | grid | fd | oracle")->required();
    r->add_option("--eta", run.eta, "Oja learning rate, or 'auto' (oracle-assisted)");
    r->add_option("--b", run.b, "Grid bit scale; 0 prescans the stream");
    r->add_option("--bits", run.bits, "Mantissa bits kept in the algorithm state");
    r->add_option("--ell", run.ell, "FrequentDirections rows");
    r->add_option("--seed", run.seed, "Seed for the initial directions");
    r->add_option("--threads", run.threads, "Worker threads (capped by OJA_THREADS)");
    r->add_option("--out", run.out, "Write the JSON report here instead of stdout");
    r->add_flag("--timing", run.timing, "Include wall_ms in the report");

    ojas::CheckRequest chk;
    std::string chk_out;
    auto* c = app.add_subcommand("check", "Run a lemma checker; exit 0 iff it passes");
    c->add_option("--lemma", chk.lemma, "growth | movement | matsample | prodab | maxa | stat | dp | pdup")->required();
    c->add_option("--n", chk.n, "Size parameter n");
    c->add_option("--d", chk.d, "Dimension");
    c->add_option("--p", chk.p, "dp: blocks");
    c->add_option("--k", chk.k, "pdup: duplicates");
    c->add_option("--trials", chk.trials, "Monte-Carlo trials / streams");
    c->add_option("--fuzz", chk.fuzz, "Fuzz cases for prodab and maxa");
    c->add_option("--seed", chk.seed, "Seed");
    c->add_flag("--tight", chk.tight, "matsample: use the tight example");
    c->add_option("--claim", chk.claim, "stat: gaussianvecnorm | subgamma_sum | rudelson_opnorm");
    c->add_option("--delta", chk.delta, "stat: claimed failure probability");
    c->add_option("--out", chk_out, "Write the JSON report here instead of stdout");

    std::string sweep_config, sweep_out;
    std::size_t sweep_threads = 0;
    auto* s = app.add_subcommand("sweep", "Sweep spectral ratios and write a CSV table");
    s->add_option("--config", sweep_config, "JSON sweep configuration")->required();
    s->add_option("--out", sweep_out, "CSV output path (stdout when omitted)");
    s->add_option("--threads", sweep_threads, "Worker threads (capped by OJA_THREADS)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*g) return cmd_gen(gen, g);
        if (*r) return cmd_run(run);
        if (*c) return cmd_check(chk, chk_out);
        if (*s) return cmd_sweep(sweep_config, sweep_out, sweep_threads);
    } catch (const ojas::UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ojas::StreamFormatError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::out_of_range& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }
    return kExitUsage;
}
