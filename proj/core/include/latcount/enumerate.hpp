#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "latcount/cartan.hpp"
#include "latcount/int_mat.hpp"

// Exact, exhaustive enumeration of SL2(Z) (and small SL3(Z)) in norm balls,
// hyperbolic balls, sectors and bisectors, with optional congruence filters.
//
// The SL2 engine iterates coprime bottom rows (c, d) with c^2 + d^2 <= R and
// solves a*d - b*c = 1 by extended gcd; the solution line (a0 + t*c, b0 + t*d)
// meets the ball in an integer interval of t obtained from a quadratic
// inequality, so counting is O(R polylog) and listing streams in O(1) memory.

namespace latcount {

struct CountRecord {
    double param = 0;           // T or t
    uint64_t count = 0;         // lattice points (ball kinds include singular ones)
    uint64_t singular_count = 0;
    double volume = 0;
    double covolume = 0;
    double relative_error = 0;  // count * covolume / volume - 1
};

enum class EnumerationMode { CountOnly, List };

struct EnumerationTask {
    DomainSpec domain;
    std::optional<CongruenceSpec> congruence;
    EnumerationMode mode = EnumerationMode::CountOnly;
    // angular partition (bins over arc1 x bins over arc2) for histograms
    int bins1 = 1, bins2 = 1;
    bool want_bins = false;
    int workers = 1;
};

struct DomainCountResult {
    CountRecord record;
    int bins1 = 1, bins2 = 1;
    std::vector<uint64_t> bins;  // row-major bins1 x bins2, regular points only
};

// |{g in SL2(Z): ||g||_F^2 <= R}|; exact; R <= 2^60.
uint64_t norm_ball_count(int64_t R, int workers = 1);

// Streams every element once, ordered by bottom row (c, d) then by t.
void norm_ball_list(int64_t R, const std::function<void(const IntMat&)>& emit);

// Exhaustive |{g in SL3(Z): ||g||_F^2 <= R}| by integer lattice backtracking;
// order 0 solves the third row from the first two, order 1 solves the first
// row from the last two (an independent traversal for cross-checking).
uint64_t sl3_ball_count(int64_t R, int order = 0);

DomainCountResult enumerate_domain(const EnumerationTask& task);

// Convenience: congruence-filtered count record for coset * Gamma(N).
CountRecord congruence_count(const DomainSpec& domain, const CongruenceSpec& congruence);

}  // namespace latcount
