#include "latcount/int_mat.hpp"

#include <queue>
#include <sstream>
#include <unordered_set>

namespace latcount {

namespace {

i128 det2(const std::array<int64_t, 9>& e) {
    return (i128)e[0] * e[3] - (i128)e[1] * e[2];
}

i128 det3(const std::array<int64_t, 9>& e) {
    return (i128)e[0] * ((i128)e[4] * e[8] - (i128)e[5] * e[7])
         - (i128)e[1] * ((i128)e[3] * e[8] - (i128)e[5] * e[6])
         + (i128)e[2] * ((i128)e[3] * e[7] - (i128)e[4] * e[6]);
}

i128 frob_sq_wide(int n, const std::array<int64_t, 9>& e) {
    i128 s = 0;
    for (int i = 0; i < n * n; ++i) s += (i128)e[i] * e[i];
    return s;
}

int64_t narrow(i128 x) {
    if (x > INT64_MAX || x < INT64_MIN) throw OverflowError("integer matrix entry overflow");
    return static_cast<int64_t>(x);
}

}  // namespace

IntMat::IntMat(int n, std::span<const int64_t> entries) : n_(n) {
    if (n != 2 && n != 3) throw std::invalid_argument("IntMat: n must be 2 or 3");
    if (entries.size() != static_cast<size_t>(n) * n)
        throw std::invalid_argument("IntMat: wrong number of entries");
    for (size_t i = 0; i < entries.size(); ++i) e_[i] = entries[i];
    if (frob_sq_wide(n_, e_) > kFrobSqCap)
        throw OverflowError("IntMat: Frobenius norm^2 exceeds 2^62");
    if (det(*this) != 1) throw std::invalid_argument("IntMat: det must be 1");
}

IntMat IntMat::identity(int n) {
    if (n != 2 && n != 3) throw std::invalid_argument("IntMat: n must be 2 or 3");
    std::array<int64_t, 9> e{};
    for (int i = 0; i < n; ++i) e[static_cast<size_t>(i) * n + i] = 1;
    return IntMat(n, e, Unchecked{});
}

IntMat IntMat::sl2(int64_t a, int64_t b, int64_t c, int64_t d) {
    const int64_t e[4] = {a, b, c, d};
    return IntMat(2, e);
}

std::string IntMat::to_string() const {
    std::ostringstream os;
    os << "[";
    for (int i = 0; i < n_; ++i) {
        os << "[";
        for (int j = 0; j < n_; ++j) os << at(i, j) << (j + 1 < n_ ? "," : "");
        os << "]";
    }
    os << "]";
    return os.str();
}

i128 det(const IntMat& a) { return a.n() == 2 ? det2({a.at(0,0), a.at(0,1), a.at(1,0), a.at(1,1)})
                                              : det3({a.at(0,0), a.at(0,1), a.at(0,2),
                                                      a.at(1,0), a.at(1,1), a.at(1,2),
                                                      a.at(2,0), a.at(2,1), a.at(2,2)}); }

IntMat multiply(const IntMat& a, const IntMat& b) {
    if (a.n() != b.n()) throw std::invalid_argument("multiply: dimension mismatch");
    const int n = a.n();
    std::array<int64_t, 9> out{};
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            i128 s = 0;
            for (int k = 0; k < n; ++k) s += (i128)a.at(i, k) * b.at(k, j);
            out[static_cast<size_t>(i) * n + j] = narrow(s);
        }
    return IntMat(n, std::span<const int64_t>(out.data(), static_cast<size_t>(n) * n));
}

IntMat inverse(const IntMat& a) {
    if (a.n() == 2) return IntMat::sl2(a.at(1,1), -a.at(0,1), -a.at(1,0), a.at(0,0));
    // 3x3 adjugate (= inverse since det = 1); cofactors stay within range.
    std::array<int64_t, 9> c{};
    auto cof = [&](int i, int j) {
        int r0 = (i + 1) % 3, r1 = (i + 2) % 3, c0 = (j + 1) % 3, c1 = (j + 2) % 3;
        i128 v = (i128)a.at(r0, c0) * a.at(r1, c1) - (i128)a.at(r0, c1) * a.at(r1, c0);
        return narrow(v);
    };
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) c[static_cast<size_t>(j) * 3 + i] = cof(i, j);  // transpose
    return IntMat(3, std::span<const int64_t>(c.data(), 9));
}

int64_t frobenius_sq(const IntMat& a) {
    i128 s = 0;
    for (int i = 0; i < a.n(); ++i)
        for (int j = 0; j < a.n(); ++j) s += (i128)a.at(i, j) * a.at(i, j);
    return narrow(s);
}

IntMat reduce_mod(const IntMat& a, int64_t N) {
    if (N < 1) throw std::invalid_argument("reduce_mod: N must be >= 1");
    std::array<int64_t, 9> e{};
    for (int i = 0; i < a.n() * a.n(); ++i) {
        int64_t v = a.entries()[static_cast<size_t>(i)] % N;
        if (v < 0) v += N;
        e[static_cast<size_t>(i)] = v;
    }
    return IntMat(a.n(), e, IntMat::Unchecked{});
}

CongruenceSpec::CongruenceSpec(int64_t N, std::span<const int64_t> rep) : modulus(N) {
    if (N < 1) throw std::invalid_argument("CongruenceSpec: modulus must be >= 1");
    if (rep.size() != 4) throw std::invalid_argument("CongruenceSpec: coset needs 4 entries");
    for (int i = 0; i < 4; ++i) {
        int64_t v = rep[static_cast<size_t>(i)] % N;
        if (v < 0) v += N;
        coset[static_cast<size_t>(i)] = v;
    }
    i128 d = ((i128)coset[0] * coset[3] - (i128)coset[1] * coset[2]) % N;
    if (d < 0) d += N;
    if (d != 1 % N) throw std::invalid_argument("CongruenceSpec: det(coset) != 1 mod N");
}

CongruenceSpec::CongruenceSpec(int64_t N, const IntMat& rep)
    : CongruenceSpec(N, rep.entries()) {
    if (rep.n() != 2) throw std::invalid_argument("CongruenceSpec: coset must be 2x2");
}

CongruenceSpec CongruenceSpec::principal(int64_t N) {
    const int64_t id[4] = {1, 0, 0, 1};
    return CongruenceSpec(N, id);
}

bool CongruenceSpec::contains(const IntMat& g) const {
    for (int i = 0; i < 4; ++i) {
        int64_t v = g.entries()[static_cast<size_t>(i)] % modulus;
        if (v < 0) v += modulus;
        if (v != coset[static_cast<size_t>(i)]) return false;
    }
    return true;
}

std::vector<IntMat> default_sl2_generators() {
    return {IntMat::sl2(1, 1, 0, 1), IntMat::sl2(0, -1, 1, 0)};
}

std::vector<std::array<int64_t, 4>> group_elements_mod(int64_t N,
                                                       std::span<const IntMat> generators,
                                                       uint64_t cap) {
    if (N < 1) throw std::invalid_argument("group_elements_mod: N must be >= 1");
    if (N == 1) return {{1 % N, 0, 0, 1 % N}};
    if (N > 65535) throw std::invalid_argument("group_elements_mod: N too large to pack states");
    std::vector<IntMat> gens(generators.begin(), generators.end());
    if (gens.empty()) gens = default_sl2_generators();

    const uint64_t n = static_cast<uint64_t>(N);
    auto pack = [n](const std::array<uint64_t, 4>& m) {
        return ((m[0] * n + m[1]) * n + m[2]) * n + m[3];
    };
    std::vector<std::array<uint64_t, 4>> gmods;
    for (const IntMat& g : gens) {
        if (g.n() != 2) throw std::invalid_argument("group_elements_mod: generators must be 2x2");
        IntMat r = reduce_mod(g, N);
        gmods.push_back({(uint64_t)r.at(0,0), (uint64_t)r.at(0,1), (uint64_t)r.at(1,0), (uint64_t)r.at(1,1)});
    }

    // Finite group, so closing under the generator monoid closes the group.
    std::unordered_set<uint64_t> seen;
    std::vector<std::array<uint64_t, 4>> order;
    std::queue<std::array<uint64_t, 4>> queue;
    seen.insert(pack({1, 0, 0, 1}));
    order.push_back({1, 0, 0, 1});
    queue.push({1, 0, 0, 1});
    while (!queue.empty()) {
        auto m = queue.front();
        queue.pop();
        for (const auto& g : gmods) {
            std::array<uint64_t, 4> p = {(m[0] * g[0] + m[1] * g[2]) % n,
                                         (m[0] * g[1] + m[1] * g[3]) % n,
                                         (m[2] * g[0] + m[3] * g[2]) % n,
                                         (m[2] * g[1] + m[3] * g[3]) % n};
            if (seen.insert(pack(p)).second) {
                if (seen.size() > cap)
                    throw OverflowError("group_elements_mod: closure cap exceeded");
                order.push_back(p);
                queue.push(p);
            }
        }
    }
    std::vector<std::array<int64_t, 4>> out;
    out.reserve(order.size());
    for (const auto& m : order)
        out.push_back({(int64_t)m[0], (int64_t)m[1], (int64_t)m[2], (int64_t)m[3]});
    return out;
}

uint64_t group_order_mod(int64_t N, std::span<const IntMat> generators, uint64_t cap) {
    return group_elements_mod(N, generators, cap).size();
}

}  // namespace latcount
