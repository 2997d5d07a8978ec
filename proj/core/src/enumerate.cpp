#include "latcount/enumerate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <thread>

#include "latcount/haar.hpp"

namespace latcount {

namespace {

constexpr int64_t kMaxR = int64_t{1} << 60;

// g = gcd(a, b) >= 0 with x*a + y*b = g
int64_t ext_gcd(int64_t a, int64_t b, int64_t& x, int64_t& y) {
    if (b == 0) {
        x = a >= 0 ? 1 : -1;
        y = 0;
        return a >= 0 ? a : -a;
    }
    int64_t x1, y1;
    int64_t g = ext_gcd(b, a % b, x1, y1);
    x = y1;
    y = x1 - (a / b) * y1;
    return g;
}

int64_t gcd64(int64_t a, int64_t b) {
    a = a < 0 ? -a : a;
    b = b < 0 ? -b : b;
    while (b) {
        int64_t t = a % b;
        a = b;
        b = t;
    }
    return a;
}

// Integer interval [t_lo, t_hi] of solutions of A t^2 + B t + C <= 0 (A > 0);
// false if empty.  Boundaries come from a double sqrt and are then corrected
// with exact i128 evaluation.
bool quadratic_interval(i128 A, i128 B, i128 C, int64_t& t_lo, int64_t& t_hi) {
    i128 disc = B * B - 4 * A * C;
    if (disc < 0) return false;
    double sq = std::sqrt(static_cast<double>(disc));
    double a2 = 2.0 * static_cast<double>(A);
    auto eval = [&](i128 t) { return (A * t + B) * t + C; };
    int64_t lo = static_cast<int64_t>(std::ceil((-static_cast<double>(B) - sq) / a2)) - 2;
    int64_t hi = static_cast<int64_t>(std::floor((-static_cast<double>(B) + sq) / a2)) + 2;
    while (lo <= hi && eval(lo) > 0) ++lo;
    while (lo <= hi && eval(hi) > 0) --hi;
    if (lo > hi) return false;
    // the double guesses bracket the true roots to within the padding, but
    // walk outward anyway; A > 0 guarantees termination
    while (eval(lo - 1) <= 0) --lo;
    while (eval(hi + 1) <= 0) ++hi;
    t_lo = lo;
    t_hi = hi;
    return true;
}

// Visit every bottom row (c, d) in [c_from, c_to] and, per row, report the
// particular solution and the t-interval.
template <typename F>
void for_each_row(int64_t R, int64_t c_from, int64_t c_to, F&& visit) {
    for (int64_t c = c_from; c <= c_to; ++c) {
        int64_t c2 = c * c;
        if (c2 > R) continue;
        int64_t dmax = static_cast<int64_t>(std::sqrt(static_cast<double>(R - c2)));
        while (dmax * dmax > R - c2) --dmax;
        while ((dmax + 1) * (dmax + 1) <= R - c2) ++dmax;
        for (int64_t d = -dmax; d <= dmax; ++d) {
            if (c == 0 && d == 0) continue;
            if (gcd64(c, d) != 1) continue;
            // a*d - b*c = 1  <=>  a*d + b*(-c) = 1
            int64_t x, y;
            int64_t g = ext_gcd(d, -c, x, y);
            if (g != 1) continue;  // unreachable for coprime rows
            int64_t a0 = x, b0 = y;
            i128 A = (i128)c * c + (i128)d * d;
            i128 B = 2 * ((i128)a0 * c + (i128)b0 * d);
            i128 C = (i128)a0 * a0 + (i128)b0 * b0 - (R - c2 - d * d);
            int64_t t_lo, t_hi;
            if (!quadratic_interval(A, B, C, t_lo, t_hi)) continue;
            visit(c, d, a0, b0, t_lo, t_hi);
        }
    }
}

void check_radius(int64_t R) {
    if (R < 2) throw std::invalid_argument("norm ball: R must be >= 2");
    if (R > kMaxR) throw OverflowError("norm ball: R exceeds 2^60");
}

}  // namespace

uint64_t norm_ball_count(int64_t R, int workers) {
    check_radius(R);
    int64_t cmax = static_cast<int64_t>(std::sqrt(static_cast<double>(R))) + 1;
    if (workers < 1) workers = 1;

    auto count_range = [R](int64_t from, int64_t to) {
        uint64_t n = 0;
        for_each_row(R, from, to,
                     [&n](int64_t, int64_t, int64_t, int64_t, int64_t t_lo, int64_t t_hi) {
                         n += static_cast<uint64_t>(t_hi - t_lo + 1);
                     });
        return n;
    };

    if (workers == 1) return count_range(-cmax, cmax);

    // disjoint contiguous c-ranges; the merge is addition in range order
    std::vector<uint64_t> partial(static_cast<size_t>(workers), 0);
    std::vector<std::thread> pool;
    int64_t total = 2 * cmax + 1;
    for (int w = 0; w < workers; ++w) {
        int64_t from = -cmax + total * w / workers;
        int64_t to = -cmax + total * (w + 1) / workers - 1;
        pool.emplace_back([&partial, w, from, to, &count_range] { partial[static_cast<size_t>(w)] = count_range(from, to); });
    }
    for (auto& th : pool) th.join();
    return std::accumulate(partial.begin(), partial.end(), uint64_t{0});
}

void norm_ball_list(int64_t R, const std::function<void(const IntMat&)>& emit) {
    check_radius(R);
    int64_t cmax = static_cast<int64_t>(std::sqrt(static_cast<double>(R))) + 1;
    for_each_row(R, -cmax, cmax,
                 [&emit](int64_t c, int64_t d, int64_t a0, int64_t b0, int64_t t_lo, int64_t t_hi) {
                     for (int64_t t = t_lo; t <= t_hi; ++t)
                         emit(IntMat::sl2(a0 + t * c, b0 + t * d, c, d));
                 });
}

namespace {

struct Vec3 {
    int64_t x, y, z;
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 scaled(int64_t k) const { return {k * x, k * y, k * z}; }
    i128 dot(const Vec3& o) const { return (i128)x * o.x + (i128)y * o.y + (i128)z * o.z; }
    i128 norm_sq() const { return dot(*this); }
};

Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

// Count integer r3 with r3 . n == 1 and |r3|^2 <= Q (n primitive).
uint64_t count_plane_points(const Vec3& n, int64_t Q) {
    if (Q < 0) return 0;
    Vec3 p, b1, b2;
    if (n.x == 0 && n.y == 0) {
        if (n.z != 1 && n.z != -1) return 0;
        p = {0, 0, n.z};
        b1 = {1, 0, 0};
        b2 = {0, 1, 0};
    } else {
        int64_t u, v;
        int64_t g12 = ext_gcd(n.x, n.y, u, v);
        int64_t w, k;
        int64_t g = ext_gcd(g12, n.z, w, k);
        if (g != 1) return 0;
        p = {u * w, v * w, k};
        b1 = {-n.y / g12, n.x / g12, 0};
        b2 = {-u * n.z, -v * n.z, g12};
    }

    // Lagrange-reduce (b1, b2) so the quadratic form is well-conditioned.
    for (int it = 0; it < 64; ++it) {
        if (b2.norm_sq() < b1.norm_sq()) std::swap(b1, b2);
        i128 n1 = b1.norm_sq();
        if (n1 == 0) return 0;
        double mu = static_cast<double>(b1.dot(b2)) / static_cast<double>(n1);
        int64_t r = llround(mu);
        if (r == 0) break;
        b2 = b2 - b1.scaled(r);
    }
    // Babai-round p toward the plane's origin to keep coefficients small.
    for (int it = 0; it < 2; ++it) {
        for (Vec3* b : {&b2, &b1}) {
            double mu = static_cast<double>(p.dot(*b)) / static_cast<double>(b->norm_sq());
            p = p - b->scaled(llround(mu));
        }
    }

    i128 A = b1.norm_sq(), B = b1.dot(b2), C = b2.norm_sq();
    i128 D = p.dot(b1), E = p.dot(b2), F = p.norm_sq() - Q;
    // |p + x b1 + y b2|^2 <= Q: for fixed y a quadratic in x with A > 0; the
    // y-range comes from requiring its discriminant to be nonnegative.
    // discY(y) = (A C - B^2) y^2 + 2 (A E - B D) y + (A F - D^2) <= 0
    i128 qa = A * C - B * B;
    i128 qb = A * E - B * D;
    i128 qc = A * F - D * D;
    int64_t y_lo, y_hi;
    if (!quadratic_interval(qa, 2 * qb, qc, y_lo, y_hi)) return 0;
    uint64_t total = 0;
    for (int64_t y = y_lo; y <= y_hi; ++y) {
        int64_t x_lo, x_hi;
        i128 lb = 2 * (B * y + D);
        i128 cc = C * y * y + 2 * E * y + F;
        if (!quadratic_interval(A, lb, cc, x_lo, x_hi)) continue;
        total += static_cast<uint64_t>(x_hi - x_lo + 1);
    }
    return total;
}

}  // namespace

uint64_t sl3_ball_count(int64_t R, int order) {
    if (R < 3) throw std::invalid_argument("sl3_ball_count: R must be >= 3");
    if (R > 200) throw std::invalid_argument("sl3_ball_count: R capped at 200");

    int64_t m = static_cast<int64_t>(std::sqrt(static_cast<double>(R)));
    uint64_t total = 0;
    Vec3 r1, r2;
    for (r1.x = -m; r1.x <= m; ++r1.x)
        for (r1.y = -m; r1.y <= m; ++r1.y)
            for (r1.z = -m; r1.z <= m; ++r1.z) {
                i128 n1 = r1.norm_sq();
                if (n1 == 0 || n1 > R - 2) continue;
                for (r2.x = -m; r2.x <= m; ++r2.x)
                    for (r2.y = -m; r2.y <= m; ++r2.y)
                        for (r2.z = -m; r2.z <= m; ++r2.z) {
                            i128 n2 = r2.norm_sq();
                            if (n2 == 0 || n1 + n2 > R - 1) continue;
                            // order 0: loop vars are rows (1,2), row 3 solves
                            //   det = r3.(r1 x r2) = 1.
                            // order 1: loop vars are rows (1,3), row 2 solves
                            //   det = r2.(r3 x r1) = 1 -- an independent
                            //   pairing of the same set of matrices.
                            Vec3 n = order == 0 ? cross(r1, r2) : cross(r2, r1);
                            if (n.x == 0 && n.y == 0 && n.z == 0) continue;
                            total += count_plane_points(n, static_cast<int64_t>(R - n1 - n2));
                        }
            }
    return total;
}

namespace {

// Largest integer Frobenius norm^2 with Cartan radial coordinate < delta,
// i.e. strictly below 2 cosh(delta); 0 when no lattice point can be singular.
// F = 2 (the rotations, s = 0) is singular for every positive delta even when
// 2 cosh(delta) rounds to 2.
int64_t singular_frob_bound(double delta) {
    if (delta <= 0) return 0;
    int64_t r = static_cast<int64_t>(std::floor(2.0 * std::cosh(delta) - 1e-12));
    return std::max<int64_t>(r, 2);
}

}  // namespace

DomainCountResult enumerate_domain(const EnumerationTask& task) {
    const DomainSpec& dom = task.domain;
    int64_t R = static_cast<int64_t>(std::floor(dom.frobenius_sq_bound() + 1e-9));
    if (R < 2) throw std::invalid_argument("enumerate_domain: domain contains no lattice points");

    DomainCountResult out;
    out.record.param = dom.radius;
    out.record.volume = haar::volume(dom);
    double index = 1.0;
    if (task.congruence)
        index = static_cast<double>(group_order_mod(task.congruence->modulus));
    out.record.covolume = haar::sl2z_covolume() * index;

    const bool ball_kind = dom.kind == DomainSpec::Kind::NormBall ||
                           dom.kind == DomainSpec::Kind::HyperbolicBall;

    if (task.mode == EnumerationMode::CountOnly && !task.congruence && ball_kind &&
        !task.want_bins) {
        out.record.count = norm_ball_count(R, task.workers);
        int64_t rs = std::min(R, singular_frob_bound(dom.delta));
        out.record.singular_count = rs >= 2 ? norm_ball_count(rs) : 0;
    } else {
        out.bins1 = task.want_bins ? task.bins1 : 1;
        out.bins2 = task.want_bins ? task.bins2 : 1;
        out.bins.assign(static_cast<size_t>(out.bins1) * out.bins2, 0);
        const AngleInterval a1 = dom.has_arc1() ? dom.arc1 : AngleInterval{0, kPi};
        const AngleInterval a2 = dom.has_arc2() ? dom.arc2 : AngleInterval{0, kTwoPi};
        uint64_t inside = 0, singular = 0;
        norm_ball_list(R, [&](const IntMat& g) {
            if (task.congruence && !task.congruence->contains(g)) return;
            Classification cl = classify(g, dom);
            if (cl == Classification::Outside) return;
            if (cl == Classification::Singular) {
                ++singular;
                return;
            }
            ++inside;
            if (task.want_bins) {
                CartanCoords c = cartan_decompose(Mat2::from(g));
                int i1 = std::min(out.bins1 - 1,
                                  static_cast<int>((c.phi - a1.lo) / a1.length() * out.bins1));
                int i2 = std::min(out.bins2 - 1,
                                  static_cast<int>((c.psi - a2.lo) / a2.length() * out.bins2));
                if (i1 >= 0 && i2 >= 0)
                    ++out.bins[static_cast<size_t>(i1) * out.bins2 + static_cast<size_t>(i2)];
            }
        });
        out.record.singular_count = singular;
        out.record.count = ball_kind ? inside + singular : inside;
    }

    out.record.relative_error =
        static_cast<double>(out.record.count) * out.record.covolume / out.record.volume - 1.0;
    return out;
}

CountRecord congruence_count(const DomainSpec& domain, const CongruenceSpec& congruence) {
    EnumerationTask task;
    task.domain = domain;
    task.congruence = congruence;
    task.mode = EnumerationMode::List;
    return enumerate_domain(task).record;
}

}  // namespace latcount
