#include "k3lat/qform.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cstddef>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace k3lat {

namespace {

// Value of x mod m with result in [0, m), for rationals.
Rat rat_mod(const Rat& x, int m) {
    Int num = numerator(x), den = denominator(x);
    Int modn = Int(m) * den;
    Int r = num % modn;
    if (r < 0) r += modn;
    return Rat(r, den);
}

Int pow_int(const Int& p, unsigned k) {
    Int r = 1;
    for (unsigned i = 0; i < k; ++i) r *= p;
    return r;
}

// Exponent of p in the denominator of x.
unsigned den_val(const Rat& x, const Int& p) {
    Int d = denominator(x);
    unsigned v = 0;
    while (d % p == 0) {
        d /= p;
        ++v;
    }
    return v;
}

Int rat_int(const Rat& x) {
    if (denominator(x) != 1) throw std::logic_error("expected an integral value");
    return numerator(x);
}

Int smallest_prime_factor(const Int& n) {
    if (n % 2 == 0) return 2;
    for (Int d = 3; d * d <= n; d += 2)
        if (n % d == 0) return d;
    return n;
}

struct PrimePower {
    Int p;
    unsigned k;
};

std::vector<PrimePower> factor_prime_powers(Int n) {
    std::vector<PrimePower> out;
    while (n > 1) {
        Int p = smallest_prime_factor(n);
        unsigned k = 0;
        while (n % p == 0) {
            n /= p;
            ++k;
        }
        out.push_back({p, k});
    }
    return out;
}

// Inverse of a mod m (gcd(a, m) = 1), in [0, m).
Int inv_mod(Int a, const Int& m) {
    a %= m;
    if (a < 0) a += m;
    Int r0 = a, r1 = m, s0 = 1, s1 = 0;
    while (r1 != 0) {
        Int q = r0 / r1;
        r0 -= q * r1;
        std::swap(r0, r1);
        s0 -= q * s1;
        std::swap(s0, s1);
    }
    s0 %= m;
    if (s0 < 0) s0 += m;
    return s0;
}

// Character of an odd unit mod 8: +1 on {1, 7}, -1 on {3, 5}.
int chi8(const Int& u) {
    Int r = u % 8;
    if (r < 0) r += 8;
    return (r == 1 || r == 7) ? +1 : -1;
}

int legendre(const Int& a, const Int& p) {
    Int base = a % p;
    if (base < 0) base += p;
    Int r = boost::multiprecision::powm(base, Int((p - 1) / 2), p);
    return r == 1 ? +1 : -1;
}

// (sign, oddity) pairs realizable by n diagonal units from {1,3,5,7};
// bit index (sign < 0) * 8 + oddity.
std::array<bool, 16> legal_pairs(unsigned n) {
    static std::vector<std::array<bool, 16>> cache{[] {
        std::array<bool, 16> none{};
        none[0] = true;
        return none;
    }()};
    while (cache.size() <= n) {
        const auto prev = cache.back();
        std::array<bool, 16> next{};
        for (unsigned idx = 0; idx < 16; ++idx) {
            if (!prev[idx]) continue;
            const unsigned e = idx / 8, t = idx % 8;
            for (unsigned u : {1u, 3u, 5u, 7u}) {
                const unsigned e2 = e ^ ((u == 3 || u == 5) ? 1u : 0u);
                next[e2 * 8 + (t + u) % 8] = true;
            }
        }
        cache.push_back(next);
    }
    return cache[n];
}

// Bitmask over Z/8 of the oddities n units can reach with the given sign.
unsigned legal_mask(unsigned n, int epsbit) {
    const auto tbl = legal_pairs(n);
    unsigned m = 0;
    for (unsigned t = 0; t < 8; ++t)
        if (tbl[unsigned(epsbit) * 8 + t]) m |= 1u << t;
    return m;
}

// Minkowski sum mod 8 of two oddity masks.
unsigned fold_mask(unsigned acc, unsigned allowed) {
    unsigned out = 0;
    for (unsigned t = 0; t < 8; ++t)
        if (allowed >> t & 1u) out |= ((acc << t) | (acc >> (8 - t))) & 0xffu;
    return out;
}

// Lexicographically smallest tuple of n units from {1,3,5,7} with the given
// sign character and oddity sum; empty when impossible.
std::vector<unsigned> unit_tuple(unsigned n, int epsbit, unsigned t) {
    std::vector<unsigned> out;
    unsigned e = unsigned(epsbit), rem = t % 8;
    for (unsigned left = n; left > 0; --left) {
        bool found = false;
        for (unsigned u : {1u, 3u, 5u, 7u}) {
            const unsigned e2 = e ^ ((u == 3 || u == 5) ? 1u : 0u);
            const unsigned r2 = (rem + 8 - u) % 8;
            if (legal_pairs(left - 1)[e2 * 8 + r2]) {
                out.push_back(u);
                e = e2;
                rem = r2;
                found = true;
                break;
            }
        }
        if (!found) return {};
    }
    return out;
}

// Generators of one primary component during Jordan splitting.
struct PartGens {
    std::vector<Rat> q;                // values mod 2
    std::vector<std::vector<Rat>> b;   // values mod 1
    std::size_t size() const { return q.size(); }
};

void part_erase(PartGens& g, const std::set<std::size_t>& kill) {
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < g.size(); ++i)
        if (!kill.count(i)) keep.push_back(i);
    PartGens out;
    for (std::size_t i : keep) {
        out.q.push_back(g.q[i]);
        std::vector<Rat> row;
        for (std::size_t j : keep) row.push_back(g.b[i][j]);
        out.b.push_back(std::move(row));
    }
    g = std::move(out);
}

void part_drop_trivial(PartGens& g) {
    std::set<std::size_t> kill;
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (g.q[i] != 0) continue;
        bool zero = true;
        for (std::size_t j = 0; zero && j < g.size(); ++j)
            if (g.b[i][j] != 0) zero = false;
        if (zero) kill.insert(i);
    }
    if (!kill.empty()) part_erase(g, kill);
}

// Splits off the rank-one summand spanned by generator piv, whose self
// pairing is a unit over m = p^k, and removes it.
void split_rank_one(PartGens& g, std::size_t piv, const Int& m) {
    const std::size_t n = g.size();
    std::vector<Int> lam(n, 0);
    for (std::size_t h = 0; h < n; ++h) {
        if (h == piv) continue;
        const Rat ratio = g.b[h][piv] / g.b[piv][piv];
        Int num = numerator(ratio) % m;
        if (num < 0) num += m;
        lam[h] = num * inv_mod(denominator(ratio), m) % m;
    }
    PartGens out;
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < n; ++i)
        if (i != piv) keep.push_back(i);
    for (std::size_t h : keep) {
        const Rat lh(lam[h]);
        out.q.push_back(
            rat_mod(g.q[h] + lh * lh * g.q[piv] - Rat(2) * lh * g.b[h][piv], 2));
    }
    for (std::size_t h : keep) {
        const Rat lh(lam[h]);
        std::vector<Rat> row;
        for (std::size_t x : keep) {
            const Rat lx(lam[x]);
            row.push_back(rat_mod(g.b[h][x] - lx * g.b[h][piv] -
                                      lh * g.b[piv][x] + lh * lx * g.b[piv][piv],
                                  1));
        }
        out.b.push_back(std::move(row));
    }
    g = std::move(out);
}

// Splits off the block spanned by generators gi < gj, whose mutual pairing
// is a unit over m = 2^k while both self pairings are non-units, and
// removes both.
void split_block(PartGens& g, std::size_t gi, std::size_t gj, const Int& m) {
    Int A = rat_int(g.b[gi][gi] * Rat(m)) % m;
    Int B = rat_int(g.b[gi][gj] * Rat(m)) % m;
    Int C = rat_int(g.b[gj][gj] * Rat(m)) % m;
    Int det = (A * C - B * B) % m;
    if (det < 0) det += m;
    const Int dinv = inv_mod(det, m);
    const std::size_t n = g.size();
    std::vector<Int> lam(n, 0), mu(n, 0);
    for (std::size_t x = 0; x < n; ++x) {
        if (x == gi || x == gj) continue;
        const Int r = rat_int(g.b[x][gi] * Rat(m)) % m;
        const Int s = rat_int(g.b[x][gj] * Rat(m)) % m;
        lam[x] = ((C * r - B * s) % m * dinv % m + m) % m;
        mu[x] = ((A * s - B * r) % m * dinv % m + m) % m;
    }
    PartGens out;
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < n; ++i)
        if (i != gi && i != gj) keep.push_back(i);
    for (std::size_t x : keep) {
        const Rat lx(lam[x]), mx(mu[x]);
        out.q.push_back(rat_mod(g.q[x] + lx * lx * g.q[gi] + mx * mx * g.q[gj] +
                                    Rat(2) * lx * mx * g.b[gi][gj] -
                                    Rat(2) * lx * g.b[x][gi] -
                                    Rat(2) * mx * g.b[x][gj],
                                2));
    }
    for (std::size_t x : keep) {
        const Rat lx(lam[x]), mx(mu[x]);
        std::vector<Rat> row;
        for (std::size_t y : keep) {
            const Rat ly(lam[y]), my(mu[y]);
            row.push_back(rat_mod(g.b[x][y] - ly * g.b[x][gi] - my * g.b[x][gj] -
                                      lx * g.b[gi][y] - mx * g.b[gj][y] +
                                      lx * ly * g.b[gi][gi] +
                                      (lx * my + mx * ly) * g.b[gi][gj] +
                                      mx * my * g.b[gj][gj],
                                  1));
        }
        out.b.push_back(std::move(row));
    }
    g = std::move(out);
}

struct Accum {
    unsigned rank = 0;
    int sign = +1;
    unsigned oddity = 0;
    bool odd_type = false;
};
using AccumMap = std::map<std::pair<Int, unsigned>, Accum>;

void split_odd_part(const Int& p, PartGens g, AccumMap& acc) {
    for (;;) {
        part_drop_trivial(g);
        const std::size_t n = g.size();
        if (n == 0) return;
        unsigned k = 0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i; j < n; ++j)
                k = std::max(k, den_val(g.b[i][j], p));
        if (k == 0) throw std::runtime_error("degenerate quadratic form");
        std::size_t piv = n;
        for (std::size_t i = 0; i < n && piv == n; ++i)
            if (den_val(g.b[i][i], p) == k) piv = i;
        if (piv == n) {
            // no unit self pairing at the top scale: transport one onto the
            // diagonal from the first unit mutual pairing (2 is invertible)
            std::size_t gi = n, gj = n;
            for (std::size_t i = 0; i < n && gi == n; ++i)
                for (std::size_t j = i + 1; j < n && gi == n; ++j)
                    if (den_val(g.b[i][j], p) == k) {
                        gi = i;
                        gj = j;
                    }
            g.q[gi] = rat_mod(g.q[gi] + g.q[gj] + Rat(2) * g.b[gi][gj], 2);
            for (std::size_t t = 0; t < n; ++t)
                g.b[gi][t] = rat_mod(g.b[gi][t] + g.b[gj][t], 1);
            for (std::size_t t = 0; t < n; ++t)
                g.b[t][gi] = rat_mod(g.b[t][gi] + g.b[t][gj], 1);
            piv = gi;
        }
        Accum& a = acc[{p, k}];
        a.rank += 1;
        a.sign *= legendre(numerator(g.q[piv]), p);
        split_rank_one(g, piv, pow_int(p, k));
    }
}

void split_two_part(PartGens g, AccumMap& acc) {
    const Int two = 2;
    for (;;) {
        part_drop_trivial(g);
        const std::size_t n = g.size();
        if (n == 0) return;
        unsigned k = 0;
        for (std::size_t i = 0; i < n; ++i) {
            k = std::max(k, den_val(g.q[i], two));
            for (std::size_t j = i; j < n; ++j)
                k = std::max(k, den_val(g.b[i][j], two));
        }
        if (k == 0) throw std::runtime_error("degenerate quadratic form");
        const Int m = pow_int(two, k);
        std::size_t piv = n;
        for (std::size_t i = 0; i < n && piv == n; ++i)
            if (den_val(g.q[i], two) == k) piv = i;
        if (piv < n) {
            // odd unit on the diagonal; at scale 2 the value only determines
            // the unit mod 4, which the canonical flip move accounts for
            const Int a = numerator(g.q[piv]);
            const Int unit = k == 1 ? a : a % 8;
            Accum& ac = acc[{two, k}];
            ac.rank += 1;
            ac.odd_type = true;
            ac.oddity = (ac.oddity + static_cast<unsigned>(unit)) % 8;
            ac.sign *= chi8(unit);
            split_rank_one(g, piv, m);
            continue;
        }
        // the top scale is carried by a mutual pairing: split off the pair
        std::size_t gi = n, gj = n;
        for (std::size_t i = 0; i < n && gi == n; ++i)
            for (std::size_t j = i + 1; j < n && gi == n; ++j)
                if (den_val(g.b[i][j], two) == k) {
                    gi = i;
                    gj = j;
                }
        if (gi == n) throw std::logic_error("missing pairing at top scale");
        const Int qi = rat_int(g.q[gi] * Rat(m)) / 2;
        const Int qj = rat_int(g.q[gj] * Rat(m)) / 2;
        Accum& ac = acc[{two, k}];
        ac.rank += 2;
        ac.sign *= (qi % 2 != 0 && qj % 2 != 0) ? -1 : +1;
        split_block(g, gi, gj, m);
    }
}

struct ConstituentKeyLess {
    bool operator()(const Constituent& a, const Constituent& b) const {
        return a.p < b.p || (a.p == b.p && a.k < b.k);
    }
};

}  // namespace

FiniteQuadraticForm::FiniteQuadraticForm(std::vector<Int> orders,
                                         std::vector<Rat> q,
                                         std::vector<std::vector<Rat>> b) {
    const std::size_t n = orders.size();
    if (q.size() != n || b.size() != n)
        throw std::invalid_argument("generator data sizes disagree");
    for (const auto& row : b)
        if (row.size() != n)
            throw std::invalid_argument("bilinear matrix must be square");
    for (std::size_t i = 0; i < n; ++i)
        if (orders[i] < 2)
            throw std::invalid_argument("generator order must exceed 1");
    for (std::size_t i = 0; i < n; ++i) q[i] = rat_mod(q[i], 2);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) b[i][j] = rat_mod(b[i][j], 1);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (b[i][j] != b[j][i])
                throw std::invalid_argument("bilinear matrix must be symmetric");
    for (std::size_t i = 0; i < n; ++i) {
        const Rat qq = q[i] * Rat(orders[i] * orders[i]);
        if (denominator(qq) != 1 || numerator(qq) % 2 != 0)
            throw std::invalid_argument(
                "quadratic value incompatible with generator order");
        if (denominator(Rat(q[i] - b[i][i])) != 1)
            throw std::invalid_argument("quadratic and bilinear values disagree");
        for (std::size_t j = 0; j < n; ++j)
            if (denominator(b[i][j] * Rat(orders[i])) != 1)
                throw std::invalid_argument(
                    "bilinear value incompatible with generator order");
    }
    // primary decomposition: a composite-order generator splits into one
    // generator per prime, scaled by the complementary cofactor; mutual
    // pairings between distinct primes vanish identically
    struct Part {
        Int p;
        unsigned k;
        Int order;
        Int coeff;
        std::size_t src;
    };
    std::vector<Part> parts;
    for (std::size_t i = 0; i < n; ++i)
        for (const PrimePower& pp : factor_prime_powers(orders[i])) {
            const Int o = pow_int(pp.p, pp.k);
            parts.push_back({pp.p, pp.k, o, orders[i] / o, i});
        }
    std::stable_sort(parts.begin(), parts.end(),
                     [](const Part& x, const Part& y) {
                         return x.p < y.p || (x.p == y.p && x.k < y.k);
                     });
    const std::size_t np = parts.size();
    orders_.resize(np);
    q_.resize(np);
    b_.assign(np, std::vector<Rat>(np));
    for (std::size_t a = 0; a < np; ++a) {
        orders_[a] = parts[a].order;
        q_[a] = rat_mod(q[parts[a].src] * Rat(parts[a].coeff * parts[a].coeff), 2);
        for (std::size_t c = 0; c < np; ++c)
            b_[a][c] = rat_mod(
                b[parts[a].src][parts[c].src] * Rat(parts[a].coeff * parts[c].coeff),
                1);
    }
}

FiniteQuadraticForm FiniteQuadraticForm::trivial() {
    return FiniteQuadraticForm();
}

Int FiniteQuadraticForm::group_order() const {
    Int g = 1;
    for (const Int& d : orders_) g *= d;
    return g;
}

Rat FiniteQuadraticForm::q_of(const std::vector<Int>& coeffs) const {
    if (coeffs.size() != orders_.size())
        throw std::invalid_argument("coefficient count mismatch");
    Rat acc = 0;
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        acc += q_[i] * Rat(coeffs[i] * coeffs[i]);
        for (std::size_t j = i + 1; j < coeffs.size(); ++j)
            acc += Rat(2) * Rat(coeffs[i] * coeffs[j]) * b_[i][j];
    }
    return rat_mod(acc, 2);
}

Rat FiniteQuadraticForm::b_of(const std::vector<Int>& c1,
                              const std::vector<Int>& c2) const {
    if (c1.size() != orders_.size() || c2.size() != orders_.size())
        throw std::invalid_argument("coefficient count mismatch");
    Rat acc = 0;
    for (std::size_t i = 0; i < c1.size(); ++i)
        for (std::size_t j = 0; j < c2.size(); ++j)
            acc += Rat(c1[i] * c2[j]) * b_[i][j];
    return rat_mod(acc, 1);
}

FiniteQuadraticForm fqf_from_lattice(const Lattice& l) {
    if (!l.is_even()) throw std::runtime_error("lattice not even");
    if (l.rank() == 0) return FiniteQuadraticForm::trivial();
    const DiscriminantGroup d = discriminant_group(l);
    if (d.orders.empty()) return FiniteQuadraticForm::trivial();
    return FiniteQuadraticForm(d.orders, d.q, d.b);
}

FiniteQuadraticForm fqf_direct_sum(const FiniteQuadraticForm& a,
                                   const FiniteQuadraticForm& b) {
    std::vector<Int> orders = a.orders();
    orders.insert(orders.end(), b.orders().begin(), b.orders().end());
    if (orders.empty()) return FiniteQuadraticForm::trivial();
    std::vector<Rat> q = a.q();
    q.insert(q.end(), b.q().begin(), b.q().end());
    const std::size_t na = a.generators(), n = orders.size();
    std::vector<std::vector<Rat>> bm(n, std::vector<Rat>(n, Rat(0)));
    for (std::size_t i = 0; i < na; ++i)
        for (std::size_t j = 0; j < na; ++j) bm[i][j] = a.b()[i][j];
    for (std::size_t i = na; i < n; ++i)
        for (std::size_t j = na; j < n; ++j) bm[i][j] = b.b()[i - na][j - na];
    return FiniteQuadraticForm(std::move(orders), std::move(q), std::move(bm));
}

FiniteQuadraticForm fqf_negate(const FiniteQuadraticForm& f) {
    if (f.generators() == 0) return FiniteQuadraticForm::trivial();
    std::vector<Rat> q;
    for (const Rat& v : f.q()) q.push_back(rat_mod(-v, 2));
    std::vector<std::vector<Rat>> b;
    for (const auto& row : f.b()) {
        std::vector<Rat> r;
        for (const Rat& v : row) r.push_back(rat_mod(-v, 1));
        b.push_back(std::move(r));
    }
    return FiniteQuadraticForm(f.orders(), std::move(q), std::move(b));
}

Int Constituent::scale() const { return pow_int(p, k); }

Int GenusSymbol::group_order() const {
    Int g = 1;
    for (const Constituent& c : constituents)
        for (unsigned i = 0; i < c.rank; ++i) g *= c.scale();
    return g;
}

GenusSymbol parse_symbol(const std::string& text) {
    // strip whitespace, remembering original offsets for error reports
    std::string s;
    std::vector<std::size_t> pos;
    for (std::size_t i = 0; i < text.size(); ++i)
        if (!std::isspace(static_cast<unsigned char>(text[i]))) {
            s += text[i];
            pos.push_back(i);
        }
    pos.push_back(text.size());
    const auto fail = [&](std::size_t i, const std::string& msg) {
        std::ostringstream os;
        os << "symbol parse error at offset " << pos[std::min(i, pos.size() - 1)]
           << ": " << msg;
        throw std::invalid_argument(os.str());
    };
    const auto digit = [&](std::size_t i) {
        return i < s.size() && s[i] >= '0' && s[i] <= '9';
    };

    GenusSymbol out;
    if (s.empty()) return out;
    std::size_t i = 0;
    for (;;) {
        const std::size_t at = i;
        if (!digit(i)) fail(i, "expected a scale");
        Int scale = 0;
        while (digit(i)) {
            scale = scale * 10 + (s[i] - '0');
            ++i;
        }
        if (scale < 2) fail(at, "scale must be at least 2");
        const Int p = smallest_prime_factor(scale);
        Int rest = scale;
        unsigned k = 0;
        while (rest % p == 0) {
            rest /= p;
            ++k;
        }
        if (rest != 1) fail(at, "scale is not a prime power");
        Constituent c;
        c.p = p;
        c.k = k;
        if (i < s.size() && s[i] == '_') {
            if (p != 2) fail(i, "subscript on an odd prime");
            ++i;
            if (i + 1 < s.size() && s[i] == 'I' && s[i + 1] == 'I') {
                c.odd_type = false;
                i += 2;
            } else if (i < s.size() && s[i] >= '0' && s[i] <= '7') {
                c.odd_type = true;
                c.oddity = unsigned(s[i] - '0');
                ++i;
            } else {
                fail(i, "subscript must be II or a digit 0-7");
            }
        } else if (p == 2) {
            fail(i, "dyadic constituent needs a subscript");
        }
        if (i >= s.size() || s[i] != '^') fail(i, "expected '^'");
        ++i;
        if (i >= s.size() || (s[i] != '+' && s[i] != '-')) fail(i, "expected a sign");
        c.sign = s[i] == '+' ? +1 : -1;
        ++i;
        const std::size_t rat = i;
        if (!digit(i)) fail(i, "expected a rank");
        unsigned long rank = 0;
        while (digit(i)) {
            rank = rank * 10 + unsigned(s[i] - '0');
            if (rank > 1000000) fail(rat, "rank out of range");
            ++i;
        }
        if (rank == 0) fail(rat, "rank must be positive");
        c.rank = unsigned(rank);
        if (c.p == 2 && !c.odd_type && c.rank % 2 != 0)
            fail(at, "type II rank must be even");
        for (const Constituent& prev : out.constituents)
            if (prev.p == c.p && prev.k == c.k) fail(at, "duplicate scale");
        out.constituents.push_back(c);
        if (i >= s.size()) break;
        if (s[i] != ',') fail(i, "expected ','");
        ++i;
    }
    std::sort(out.constituents.begin(), out.constituents.end(),
              ConstituentKeyLess{});
    return out;
}

std::string symbol_to_string(const GenusSymbol& s) {
    std::ostringstream os;
    bool first = true;
    for (const Constituent& c : s.constituents) {
        if (!first) os << ',';
        first = false;
        os << c.scale();
        if (c.p == 2) {
            os << '_';
            if (c.odd_type)
                os << c.oddity;
            else
                os << "II";
        }
        os << '^' << (c.sign > 0 ? '+' : '-') << c.rank;
    }
    return os.str();
}

GenusSymbol symbol_sum(const GenusSymbol& a, const GenusSymbol& b) {
    std::map<std::pair<Int, unsigned>, Constituent> acc;
    for (const GenusSymbol* src : {&a, &b})
        for (const Constituent& c : src->constituents) {
            const auto key = std::make_pair(c.p, c.k);
            const auto it = acc.find(key);
            if (it == acc.end()) {
                acc.emplace(key, c);
                continue;
            }
            Constituent& t = it->second;
            t.rank += c.rank;
            t.sign *= c.sign;
            t.odd_type = t.odd_type || c.odd_type;
            t.oddity = (t.oddity + c.oddity) % 8;
        }
    GenusSymbol out;
    for (const auto& [key, c] : acc) out.constituents.push_back(c);
    return out;
}

GenusSymbol canonical_symbol(const GenusSymbol& s) {
    std::vector<Constituent> odd;
    std::map<unsigned, Constituent> two;
    std::set<std::pair<Int, unsigned>> keys;
    for (Constituent c : s.constituents) {
        if (c.rank == 0) continue;
        if (!keys.insert({c.p, c.k}).second)
            throw std::invalid_argument("duplicate scale in symbol");
        if (c.p == 2) {
            if (!c.odd_type) {
                if (c.rank % 2 != 0)
                    throw std::invalid_argument("type II rank must be even");
                c.oddity = 0;
            }
            two[c.k] = c;
        } else {
            c.odd_type = false;
            c.oddity = 0;
            odd.push_back(c);
        }
    }
    std::sort(odd.begin(), odd.end(), ConstituentKeyLess{});

    GenusSymbol out;
    if (!two.empty()) {
        std::vector<unsigned> ks;
        for (const auto& [k, c] : two) ks.push_back(k);
        const std::size_t ns = ks.size();
        std::map<unsigned, std::size_t> pos;
        for (std::size_t i = 0; i < ns; ++i) pos[ks[i]] = i;

        // compartments: maximal runs of consecutive type-I scales; only the
        // total oddity of a compartment is an invariant (oddity fusion)
        std::vector<std::vector<unsigned>> comps;
        for (const unsigned k : ks) {
            if (!two.at(k).odd_type) continue;
            if (!comps.empty() && comps.back().back() + 1 == k)
                comps.back().push_back(k);
            else
                comps.push_back({k});
        }
        std::map<unsigned, std::size_t> comp_of;
        for (std::size_t ci = 0; ci < comps.size(); ++ci)
            for (const unsigned k : comps[ci]) comp_of[k] = ci;

        // trains: adjacent present scales chain when the gap is one with a
        // type-I endpoint or two with both endpoints type I
        std::vector<std::vector<unsigned>> trains{{ks[0]}};
        for (std::size_t i = 1; i < ns; ++i) {
            const unsigned ka = ks[i - 1], kb = ks[i];
            bool joined = false;
            if (kb - ka == 1)
                joined = two.at(ka).odd_type || two.at(kb).odd_type;
            else if (kb - ka == 2)
                joined = two.at(ka).odd_type && two.at(kb).odd_type;
            if (joined)
                trains.back().push_back(kb);
            else
                trains.push_back({kb});
        }

        // state: one sign bit per scale (0 is +) and one total per compartment
        using State = std::pair<std::vector<int>, std::vector<int>>;
        State start;
        start.first.resize(ns);
        for (std::size_t i = 0; i < ns; ++i)
            start.first[i] = two.at(ks[i]).sign < 0 ? 1 : 0;
        start.second.resize(comps.size());
        for (std::size_t ci = 0; ci < comps.size(); ++ci) {
            unsigned t = 0;
            for (const unsigned k : comps[ci]) t = (t + two.at(k).oddity) % 8;
            start.second[ci] = int(t);
        }

        const auto realizable = [&](const State& st) {
            for (std::size_t ci = 0; ci < comps.size(); ++ci) {
                unsigned mask = 1;
                for (const unsigned k : comps[ci])
                    mask = fold_mask(mask,
                                     legal_mask(two.at(k).rank, st.first[pos.at(k)]));
                if (!(mask >> unsigned(st.second[ci]) & 1u)) return false;
            }
            return true;
        };

        if (!realizable(start))
            throw std::invalid_argument("symbol not realizable");
        std::set<State> seen{start};
        std::vector<State> frontier{start};
        while (!frontier.empty()) {
            std::vector<State> next;
            for (const State& st : frontier) {
                std::vector<State> cands;
                // sign walk between any two scales of one train: both signs
                // flip and every compartment holding an endpoint gains 4
                for (const auto& tr : trains)
                    for (std::size_t x = 0; x < tr.size(); ++x)
                        for (std::size_t y = x + 1; y < tr.size(); ++y) {
                            State c = st;
                            c.first[pos.at(tr[x])] ^= 1;
                            c.first[pos.at(tr[y])] ^= 1;
                            std::set<std::size_t> touched;
                            if (comp_of.count(tr[x]))
                                touched.insert(comp_of.at(tr[x]));
                            if (comp_of.count(tr[y]))
                                touched.insert(comp_of.at(tr[y]));
                            for (const std::size_t ci : touched)
                                c.second[ci] = int((unsigned(c.second[ci]) + 4) % 8);
                            cands.push_back(std::move(c));
                        }
                // at scale 2 the unit is only determined mod 4, so its sign
                // flips freely at the cost of 4 on its compartment
                if (two.count(1) && two.at(1).odd_type) {
                    State c = st;
                    c.first[pos.at(1)] ^= 1;
                    const std::size_t ci = comp_of.at(1);
                    c.second[ci] = int((unsigned(c.second[ci]) + 4) % 8);
                    cands.push_back(std::move(c));
                }
                for (State& c : cands)
                    if (!seen.count(c) && realizable(c)) {
                        next.push_back(c);
                        seen.insert(std::move(c));
                    }
            }
            frontier = std::move(next);
        }
        const State& best = *seen.begin();

        // distribute each compartment total back to scales, smallest first
        std::map<unsigned, unsigned> oddity_of;
        for (std::size_t ci = 0; ci < comps.size(); ++ci) {
            const auto& members = comps[ci];
            const std::size_t mc = members.size();
            std::vector<unsigned> suffix(mc + 1);
            suffix[mc] = 1;
            for (std::size_t i = mc; i-- > 0;)
                suffix[i] = fold_mask(
                    suffix[i + 1],
                    legal_mask(two.at(members[i]).rank, best.first[pos.at(members[i])]));
            unsigned rem = unsigned(best.second[ci]);
            for (std::size_t i = 0; i < mc; ++i) {
                const unsigned allowed = legal_mask(two.at(members[i]).rank,
                                                    best.first[pos.at(members[i])]);
                bool done = false;
                for (unsigned t = 0; t < 8 && !done; ++t) {
                    if (!(allowed >> t & 1u)) continue;
                    const unsigned r2 = (rem + 8 - t) % 8;
                    if (suffix[i + 1] >> r2 & 1u) {
                        oddity_of[members[i]] = t;
                        rem = r2;
                        done = true;
                    }
                }
                if (!done) throw std::logic_error("compartment distribution failed");
            }
        }

        for (std::size_t i = 0; i < ns; ++i) {
            Constituent c = two.at(ks[i]);
            c.sign = best.first[i] ? -1 : +1;
            if (c.odd_type) c.oddity = oddity_of.at(ks[i]);
            out.constituents.push_back(c);
        }
    }
    out.constituents.insert(out.constituents.end(), odd.begin(), odd.end());
    return out;
}

bool symbols_equivalent(const GenusSymbol& a, const GenusSymbol& b) {
    return canonical_symbol(a) == canonical_symbol(b);
}

int signature_mod8(const GenusSymbol& s) {
    Int acc = 0;
    for (const Constituent& c : s.constituents) {
        if (c.p == 2)
            acc += c.odd_type ? Int(c.oddity) : Int(0);
        else
            acc += (Int(1) - c.scale()) * c.rank;
        if (c.sign < 0 && c.k % 2 == 1) acc += 4;
    }
    Int r = acc % 8;
    if (r < 0) r += 8;
    return static_cast<int>(r);
}

GenusSymbol jordan_normal_form(const FiniteQuadraticForm& f) {
    std::map<Int, std::vector<std::size_t>> primary;
    for (std::size_t i = 0; i < f.generators(); ++i)
        primary[smallest_prime_factor(f.orders()[i])].push_back(i);
    AccumMap acc;
    for (const auto& [p, idx] : primary) {
        PartGens g;
        for (const std::size_t a : idx) {
            g.q.push_back(f.q()[a]);
            std::vector<Rat> row;
            for (const std::size_t c : idx) row.push_back(f.b()[a][c]);
            g.b.push_back(std::move(row));
        }
        if (p == 2)
            split_two_part(std::move(g), acc);
        else
            split_odd_part(p, std::move(g), acc);
    }
    GenusSymbol sym;
    for (const auto& [key, a] : acc) {
        if (a.rank == 0) continue;
        Constituent c;
        c.p = key.first;
        c.k = key.second;
        c.rank = a.rank;
        c.sign = a.sign;
        if (c.p == 2) {
            c.odd_type = a.odd_type;
            c.oddity = a.odd_type ? a.oddity % 8 : 0;
        }
        sym.constituents.push_back(c);
    }
    return canonical_symbol(sym);
}

FiniteQuadraticForm fqf_from_symbol(const GenusSymbol& s) {
    const GenusSymbol cs = canonical_symbol(s);
    std::vector<Int> orders;
    std::vector<Rat> q;
    std::vector<std::tuple<std::size_t, std::size_t, Rat>> pairs;
    for (const Constituent& c : cs.constituents) {
        const Int m = c.scale();
        if (c.p != 2) {
            // even numerators over p^k, the last adjusted to hit the sign
            int prod = 1;
            const int l2 = legendre(2, c.p);
            for (unsigned i = 0; i < c.rank; ++i) prod *= l2;
            std::vector<Int> units(c.rank, 2);
            if (prod != c.sign) {
                Int nr = 2;
                while (legendre(nr, c.p) != -1) ++nr;
                units.back() = 2 * nr;
            }
            for (const Int& u : units) {
                orders.push_back(m);
                q.push_back(rat_mod(Rat(u, m), 2));
            }
        } else if (!c.odd_type) {
            // even blocks: one with doubled diagonal when the sign is -,
            // hyperbolic ones for the rest
            const Rat vq = rat_mod(Rat(Int(2), m), 2);
            for (unsigned blk = 0; blk < c.rank / 2; ++blk) {
                const bool vblock = c.sign < 0 && blk == 0;
                const std::size_t base = orders.size();
                for (int t = 0; t < 2; ++t) {
                    orders.push_back(m);
                    q.push_back(vblock ? vq : Rat(0));
                }
                pairs.emplace_back(base, base + 1, Rat(Int(1), m));
            }
        } else {
            const auto units = unit_tuple(c.rank, c.sign < 0 ? 1 : 0, c.oddity);
            if (units.empty())
                throw std::invalid_argument("symbol not realizable");
            for (const unsigned u : units) {
                orders.push_back(m);
                q.push_back(rat_mod(Rat(Int(u), m), 2));
            }
        }
    }
    if (orders.empty()) return FiniteQuadraticForm::trivial();
    const std::size_t n = orders.size();
    std::vector<std::vector<Rat>> b(n, std::vector<Rat>(n, Rat(0)));
    for (std::size_t i = 0; i < n; ++i) b[i][i] = rat_mod(q[i], 1);
    for (const auto& [i, j, v] : pairs) {
        b[i][j] = v;
        b[j][i] = v;
    }
    return FiniteQuadraticForm(std::move(orders), std::move(q), std::move(b));
}

namespace {

struct ElementTable {
    std::vector<std::vector<Int>> coeff;
    std::vector<Int> order;
    std::vector<Rat> qv;
    std::vector<unsigned long long> stride;
    std::vector<unsigned long long> radix;
};

ElementTable enumerate_elements(const FiniteQuadraticForm& f) {
    const std::size_t g = f.generators();
    ElementTable t;
    t.stride.resize(g);
    t.radix.resize(g);
    unsigned long long total = 1;
    for (std::size_t i = 0; i < g; ++i) {
        t.stride[i] = total;
        t.radix[i] = f.orders()[i].convert_to<unsigned long long>();
        total *= t.radix[i];
    }
    for (unsigned long long e = 0; e < total; ++e) {
        std::vector<Int> c(g);
        unsigned long long r = e;
        Int ord = 1;
        for (std::size_t i = 0; i < g; ++i) {
            c[i] = Int(r % t.radix[i]);
            r /= t.radix[i];
            const Int d = f.orders()[i];
            ord = lcm(ord, Int(d / gcd(d, c[i])));
        }
        t.coeff.push_back(std::move(c));
        t.order.push_back(ord);
        t.qv.push_back(f.q_of(t.coeff.back()));
    }
    return t;
}

}  // namespace

bool brute_force_isomorphic(const FiniteQuadraticForm& a,
                            const FiniteQuadraticForm& b, const Int& bound) {
    if (a.group_order() != b.group_order()) return false;
    if (a.group_order() > bound || a.group_order() > (Int(1) << 24))
        throw std::runtime_error("oracle bound exceeded");
    const ElementTable ta = enumerate_elements(a);
    const ElementTable tb = enumerate_elements(b);

    // the (element order, q) multiset is an isomorphism invariant
    const auto key_multiset = [](const ElementTable& t) {
        std::vector<std::pair<Int, Rat>> keys;
        for (std::size_t e = 0; e < t.coeff.size(); ++e)
            keys.emplace_back(t.order[e], t.qv[e]);
        std::sort(keys.begin(), keys.end());
        return keys;
    };
    if (key_multiset(ta) != key_multiset(tb)) return false;

    std::map<std::pair<Int, Rat>, std::vector<std::size_t>> bucket;
    for (std::size_t e = 0; e < tb.coeff.size(); ++e)
        bucket[{tb.order[e], tb.qv[e]}].push_back(e);

    const std::size_t g = a.generators();
    const auto add_idx = [&tb](unsigned long long x, unsigned long long y) {
        unsigned long long out = 0;
        for (std::size_t i = 0; i < tb.radix.size(); ++i) {
            const unsigned long long xi = x / tb.stride[i] % tb.radix[i];
            const unsigned long long yi = y / tb.stride[i] % tb.radix[i];
            out += (xi + yi) % tb.radix[i] * tb.stride[i];
        }
        return out;
    };

    std::vector<std::size_t> img(g);
    // complete backtracking over generator images with matching order and
    // q; pairings against earlier images must agree and each image must be
    // independent of the span so far
    const auto rec = [&](const auto& self, std::size_t i,
                         const std::set<unsigned long long>& span) -> bool {
        if (i == g) return true;
        const auto it = bucket.find({a.orders()[i], a.q()[i]});
        if (it == bucket.end()) return false;
        const unsigned long long d = a.orders()[i].convert_to<unsigned long long>();
        for (const std::size_t cand : it->second) {
            bool ok = true;
            for (std::size_t j = 0; ok && j < i; ++j)
                if (b.b_of(tb.coeff[cand], tb.coeff[img[j]]) != a.b()[i][j])
                    ok = false;
            if (!ok) continue;
            std::set<unsigned long long> grown(span);
            unsigned long long cur = 0;
            for (unsigned long long mlt = 1; mlt < d; ++mlt) {
                cur = add_idx(cur, cand);
                for (const unsigned long long sp : span) grown.insert(add_idx(sp, cur));
            }
            if (grown.size() != span.size() * d) continue;
            img[i] = cand;
            if (self(self, i + 1, grown)) return true;
        }
        return false;
    };
    return rec(rec, 0, std::set<unsigned long long>{0});
}

}  // namespace k3lat
