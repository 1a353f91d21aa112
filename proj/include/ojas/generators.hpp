#pragma once

// Seeded stream constructions with ground-truth metadata. Every generator is
// a pure function of its arguments.

#include "ojas/la_core.hpp"

#include <optional>
#include <string>
#include <vector>

namespace ojas {

enum class StreamKind { spiked, commutative, end_rotation, partial_duplicate, mergeable_hard, matsample_tight };

std::string to_string(StreamKind kind);
/// Accepts the enum names plus the short forms "pdup", "dp", "matsample".
StreamKind parse_stream_kind(const std::string& name);

struct GroundTruth {
    std::optional<UnitVec> planted;
    // partial_duplicate: the raw ±1 half-supported rows
    std::optional<Vec> x;
    std::optional<Vec> y;
    // mergeable_hard: planted row inside each block (0-based) and the block length k
    std::vector<std::size_t> j_star;
    std::size_t block_rows = 0;
    // end_rotation: number of tilted tail rows
    std::size_t tail_rows = 0;
};

struct Generated {
    StreamMatrix X;
    GroundTruth truth;
};

/// Rows iid N(0, λ1'·v*v*ᵀ + λ2'·(I − v*v*ᵀ)) for a random unit v*.
/// Requires lambda1_over_n > lambda2_over_n ≥ 0.
Generated gen_spiked(std::size_t d, std::size_t n, double lambda1_over_n, double lambda2_over_n, std::uint64_t seed);

/// Basis vectors e_j repeated counts[j] times, interleaved round-robin.
StreamMatrix gen_commutative(std::size_t d, const std::vector<std::size_t>& counts);

/// n_bulk copies of e₁, then ⌈1/η⌉ copies of e₁ + √σ₂·v′ for a seeded unit v′ ⊥ e₁.
/// `planted` is the exact top eigenvector of the result.
Generated gen_end_rotation(std::size_t d, std::size_t n_bulk, double eta, double sigma2_target, std::uint64_t seed);

/// Row x + y, then k copies of x, then n uniform ±1 rows. `planted` is x̂.
/// With `shuffle` the rows are permuted (the covariance is unchanged).
Generated gen_partial_duplicate(std::size_t d, std::size_t n, std::size_t k, std::uint64_t seed, bool shuffle = false);
/// n = ⌊d/(9k)⌋.
std::size_t default_partial_duplicate_rows(std::size_t d, std::size_t k);

/// p blocks of k = d/p Gaussian rows, each with v* ~ N(0, I) planted at a
/// uniform position. `planted` is v*/‖v*‖.
Generated gen_mergeable_hard(std::size_t d, std::size_t p, std::uint64_t seed);

/// A_{ij} = ln(n/(1+|i−j|)) for 1 ≤ i, j ≤ n, with a zero column prepended (n × (n+1)).
Eigen::MatrixXd gen_matsample_tight(std::size_t n);

struct StreamSpec {
    StreamKind kind = StreamKind::spiked;
    std::size_t d = 0;
    std::size_t n = 0;  // rows for spiked, bulk rows for end_rotation, random rows for partial_duplicate
    std::uint64_t seed = 0;

    double ratio = 0.0;  // spiked λ1'
    double lambda2 = 1.0;  // spiked λ2'
    std::vector<std::size_t> counts;
    double eta = 0.01;
    double sigma2 = 0.04;
    std::size_t k = 1;
    std::size_t p = 2;
    bool shuffle = false;
};

/// Dispatches on spec.kind; matsample_tight uses n as the matrix size.
Generated generate(const StreamSpec& spec);

}  // namespace ojas
