#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

// Exact unimodular integer matrices (2x2 and 3x3), congruence reduction, and
// the mod-N group order by breadth-first closure.  Everything here is exact:
// products are accumulated in __int128 and any result that would leave the
// admissible range raises OverflowError instead of wrapping.

namespace latcount {

using i128 = __int128_t;

struct OverflowError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Frobenius-norm-squared cap on admissible matrices.  With entries below
// 2^31 any 2x2 or 3x3 product entry fits comfortably in int64, so a single
// construction-time check keeps all downstream arithmetic exact.
inline constexpr int64_t kFrobSqCap = int64_t{1} << 62;

class IntMat {
public:
    // Entries row-major, n*n of them used; det must be exactly 1.
    IntMat(int n, std::span<const int64_t> entries);

    static IntMat identity(int n);
    static IntMat sl2(int64_t a, int64_t b, int64_t c, int64_t d);

    int n() const { return n_; }
    int64_t at(int i, int j) const { return e_[static_cast<size_t>(i) * n_ + j]; }
    std::span<const int64_t> entries() const { return {e_.data(), static_cast<size_t>(n_) * n_}; }

    bool operator==(const IntMat& o) const { return n_ == o.n_ && e_ == o.e_; }
    bool operator!=(const IntMat& o) const { return !(*this == o); }

    std::string to_string() const;

private:
    friend IntMat reduce_mod(const IntMat&, int64_t);
    struct Unchecked {};
    IntMat(int n, const std::array<int64_t, 9>& e, Unchecked) : n_(n), e_(e) {}

    int n_;
    std::array<int64_t, 9> e_{};
};

i128 det(const IntMat& a);

IntMat multiply(const IntMat& a, const IntMat& b);

// Adjugate; exact and integral because det = 1.
IntMat inverse(const IntMat& a);

int64_t frobenius_sq(const IntMat& a);

// Entries reduced into [0, N).  reduce_mod(a*b, N) == reduce_mod of the
// mod-N product, so congruence membership is a plain equality test.
IntMat reduce_mod(const IntMat& a, int64_t N);

// A coset gamma0 * Gamma(N): gamma lies in it iff gamma == coset mod N.
struct CongruenceSpec {
    int64_t modulus;
    std::array<int64_t, 4> coset;  // entries reduced into [0, N); det == 1 mod N

    CongruenceSpec(int64_t N, std::span<const int64_t> rep);
    CongruenceSpec(int64_t N, const IntMat& rep);
    static CongruenceSpec principal(int64_t N);

    bool contains(const IntMat& g) const;
};

// Elements of the subgroup of SL2(Z/N) generated by the images of
// `generators` (defaults to the standard generators of SL2(Z)), by hash-set
// closure.  Closure larger than `cap` aborts with OverflowError.
std::vector<std::array<int64_t, 4>> group_elements_mod(int64_t N,
                                                       std::span<const IntMat> generators = {},
                                                       uint64_t cap = 100'000'000);

uint64_t group_order_mod(int64_t N, std::span<const IntMat> generators = {},
                         uint64_t cap = 100'000'000);

std::vector<IntMat> default_sl2_generators();

}  // namespace latcount
