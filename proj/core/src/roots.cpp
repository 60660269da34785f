#include "k3lat/roots.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace k3lat {

namespace {

const char* component_error(char family, unsigned rank) {
    switch (family) {
    case 'A':
        return rank >= 1 ? nullptr : "A rank must be at least 1";
    case 'D':
        return rank >= 4 ? nullptr : "D rank must be at least 4";
    case 'E':
        return rank == 6 || rank == 7 || rank == 8
                   ? nullptr
                   : "E rank must be 6, 7, or 8";
    default:
        return "root system family must be A, D, or E";
    }
}

std::vector<AdeComponent> sorted_components(const RootSystemType& t) {
    std::vector<AdeComponent> cs = t.components;
    std::sort(cs.begin(), cs.end());
    return cs;
}

// Floor division, b > 0.
Int fdiv(const Int& a, const Int& b) {
    Int q = a / b;
    if (a % b != 0 && a < 0) --q;
    return q;
}

// Integer interval [lo, hi] of x with (x + c)^2 <= rho; empty is lo > hi.
// With c = cn/cd the condition reads |x*cd + cn| <= sqrt(rho*cd^2), and
// the floor square root of the rational radicand equals the integer
// square root of its floor (no perfect square fits strictly between).
void shell_bounds(const Rat& c, const Rat& rho, Int& lo, Int& hi) {
    if (rho < 0) {
        lo = 1;
        hi = 0;
        return;
    }
    const Int cn = numerator(c);
    const Int cd = denominator(c);
    const Int radicand = Int(numerator(rho) * cd * cd / denominator(rho));
    const Int r = sqrt(radicand);
    hi = fdiv(Int(r - cn), cd);
    lo = -fdiv(Int(r + cn), cd);
}

}  // namespace

unsigned RootSystemType::rank() const {
    unsigned total = 0;
    for (const AdeComponent& c : components) total += c.rank;
    return total;
}

Lattice ade_lattice(char family, unsigned rank) {
    if (const char* err = component_error(family, rank))
        throw std::invalid_argument(err);
    IntMatrix g(rank, rank);
    const auto link = [&](std::size_t i, std::size_t j) {
        g.at(i, j) = 1;
        g.at(j, i) = 1;
    };
    for (std::size_t i = 0; i < rank; ++i) g.at(i, i) = -2;
    for (std::size_t i = 0; i + 1 < rank; ++i)
        if (family == 'A' || i + 2 < rank) link(i, i + 1);
    if (family == 'D') link(rank - 3, rank - 1);
    if (family == 'E') link(2, rank - 1);
    std::ostringstream name;
    name << family << rank;
    return Lattice(std::move(g), name.str());
}

Lattice root_lattice(const RootSystemType& t) {
    const std::vector<AdeComponent> cs = sorted_components(t);
    std::size_t total = 0;
    for (const AdeComponent& c : cs) total += c.rank;
    IntMatrix g(total, total);
    std::size_t off = 0;
    for (const AdeComponent& c : cs) {
        const Lattice block = ade_lattice(c.family, c.rank);
        for (std::size_t i = 0; i < c.rank; ++i)
            for (std::size_t j = 0; j < c.rank; ++j)
                g.at(off + i, off + j) = block.gram().at(i, j);
        off += c.rank;
    }
    return Lattice(std::move(g), root_system_to_string(t));
}

std::string root_system_to_string(const RootSystemType& t) {
    const std::vector<AdeComponent> cs = sorted_components(t);
    if (cs.empty()) return "0";
    std::ostringstream os;
    for (std::size_t i = 0; i < cs.size();) {
        std::size_t j = i;
        while (j < cs.size() && cs[j] == cs[i]) ++j;
        if (i > 0) os << '+';
        if (j - i > 1) os << j - i;
        os << cs[i].family << cs[i].rank;
        i = j;
    }
    return os.str();
}

RootSystemType parse_root_system(const std::string& text) {
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
        os << "root system parse error at offset "
           << pos[std::min(i, pos.size() - 1)] << ": " << msg;
        throw std::invalid_argument(os.str());
    };
    const auto digit = [&](std::size_t i) {
        return i < s.size() && s[i] >= '0' && s[i] <= '9';
    };

    RootSystemType out;
    if (s.empty()) fail(0, "expected a root system");
    if (s == "0") return out;
    std::size_t i = 0;
    for (;;) {
        unsigned count = 1;
        if (digit(i)) {
            const std::size_t at = i;
            count = 0;
            while (digit(i)) {
                count = count * 10 + unsigned(s[i] - '0');
                if (count > 1000) fail(at, "multiplicity out of range");
                ++i;
            }
            if (count == 0) fail(at, "multiplicity must be positive");
        }
        if (i >= s.size() || (s[i] != 'A' && s[i] != 'D' && s[i] != 'E'))
            fail(i, "expected a family letter");
        const char family = s[i];
        ++i;
        if (!digit(i)) fail(i, "expected a rank");
        const std::size_t at = i;
        unsigned rank = 0;
        while (digit(i)) {
            rank = rank * 10 + unsigned(s[i] - '0');
            if (rank > 1000) fail(at, "rank out of range");
            ++i;
        }
        if (const char* err = component_error(family, rank)) fail(at, err);
        out.components.insert(out.components.end(), count,
                              AdeComponent{family, rank});
        if (i == s.size()) break;
        if (s[i] != '+') fail(i, "expected '+'");
        ++i;
    }
    std::sort(out.components.begin(), out.components.end());
    return out;
}

std::vector<std::vector<Int>> enumerate_roots(const Lattice& l) {
    const std::size_t n = l.rank();
    std::vector<std::vector<Int>> roots;
    if (n == 0) return roots;

    // LDL^T of -G; positive pivots are exactly Sylvester's criterion.
    std::vector<std::vector<Rat>> a(n, std::vector<Rat>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) a[i][j] = Rat(-l.gram().at(i, j));
    std::vector<Rat> d(n);
    std::vector<std::vector<Rat>> u(n, std::vector<Rat>(n));
    for (std::size_t i = 0; i < n; ++i) {
        d[i] = a[i][i];
        if (d[i] <= 0)
            throw std::runtime_error("lattice not negative definite");
        for (std::size_t j = i + 1; j < n; ++j) u[i][j] = Rat(a[i][j] / d[i]);
        for (std::size_t j = i + 1; j < n; ++j)
            for (std::size_t k = j; k < n; ++k)
                a[j][k] = Rat(a[j][k] - u[i][j] * a[i][k]);
    }

    // -G(x) = sum_i d_i (x_i + sum_{j>i} u_ij x_j)^2, walked from the
    // outermost coordinate with the exact remainder at each level
    std::vector<Int> x(n);
    const auto descend = [&](auto&& self, std::size_t lvl,
                             const Rat& rem) -> void {
        Rat c(0);
        for (std::size_t j = lvl + 1; j < n; ++j)
            if (x[j] != 0) c = Rat(c + u[lvl][j] * x[j]);
        Int lo, hi;
        shell_bounds(c, Rat(rem / d[lvl]), lo, hi);
        for (Int t = lo; t <= hi; ++t) {
            x[lvl] = t;
            const Rat off = Rat(Rat(t) + c);
            const Rat rest = Rat(rem - d[lvl] * off * off);
            if (lvl == 0) {
                if (rest == 0) roots.push_back(x);
            } else {
                self(self, lvl - 1, rest);
            }
        }
        x[lvl] = 0;
    };
    descend(descend, n - 1, Rat(2));
    std::sort(roots.begin(), roots.end());
    return roots;
}

RootClassification classify_root_system(const Lattice& l) {
    const std::vector<std::vector<Int>> roots = enumerate_roots(l);
    RootClassification out;
    if (roots.empty()) return out;
    const std::size_t n = l.rank();

    Int width = 0;
    for (const std::vector<Int>& r : roots)
        for (const Int& v : r) width = std::max(width, Int(abs(v)));
    // weights 1, N, N^2, ... with N past twice the coefficient range:
    // distinct roots get distinct heights and no root lands on zero
    const Int big = Int(2 * width + 1);
    const auto height = [&](const std::vector<Int>& v) {
        Int h = 0;
        for (std::size_t i = n; i-- > 0;) h = Int(h * big + v[i]);
        return h;
    };

    std::vector<std::vector<Int>> pos;
    for (const std::vector<Int>& r : roots)
        if (height(r) > 0) pos.push_back(r);
    const auto positive = [&](const std::vector<Int>& v) {
        return std::binary_search(pos.begin(), pos.end(), v);
    };

    // simple roots: positive roots with no splitting into two positives
    std::vector<std::vector<Int>> simples;
    std::vector<Int> diff(n);
    for (const std::vector<Int>& v : pos) {
        bool splits = false;
        for (const std::vector<Int>& w : pos) {
            for (std::size_t k = 0; k < n; ++k) diff[k] = v[k] - w[k];
            if (positive(diff)) {
                splits = true;
                break;
            }
        }
        if (!splits) simples.push_back(v);
    }

    const std::size_t m = simples.size();
    const auto pairing = [&](const std::vector<Int>& a,
                             const std::vector<Int>& b) {
        Int s = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (a[i] == 0) continue;
            Int row = 0;
            for (std::size_t j = 0; j < n; ++j)
                row += l.gram().at(i, j) * b[j];
            s += a[i] * row;
        }
        return s;
    };
    std::vector<std::vector<char>> adj(m, std::vector<char>(m, 0));
    std::vector<std::size_t> deg(m, 0);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j) {
            const Int p = pairing(simples[i], simples[j]);
            if (p != 0 && p != 1)
                throw std::logic_error("not a simply-laced root system");
            if (p == 1) {
                adj[i][j] = adj[j][i] = 1;
                ++deg[i];
                ++deg[j];
            }
        }

    std::vector<int> comp_of(m, -1);
    std::vector<std::vector<std::size_t>> comps;
    for (std::size_t i = 0; i < m; ++i) {
        if (comp_of[i] >= 0) continue;
        std::vector<std::size_t> verts{i};
        comp_of[i] = int(comps.size());
        for (std::size_t head = 0; head < verts.size(); ++head)
            for (std::size_t j = 0; j < m; ++j)
                if (adj[verts[head]][j] && comp_of[j] < 0) {
                    comp_of[j] = int(comps.size());
                    verts.push_back(j);
                }
        comps.push_back(std::move(verts));
    }

    const auto not_ade = [] {
        return std::logic_error("root diagram is not of ADE type");
    };
    const auto walk_arm = [&](std::size_t from, std::size_t first) {
        std::vector<std::size_t> arm{first};
        std::size_t prev = from, cur = first;
        for (;;) {
            std::size_t next = m;
            for (std::size_t j = 0; j < m; ++j)
                if (adj[cur][j] && j != prev) next = j;
            if (next == m) break;
            arm.push_back(next);
            prev = cur;
            cur = next;
        }
        return arm;
    };
    const auto arm_seq = [&](const std::vector<std::size_t>& arm) {
        std::vector<std::vector<Int>> seq;
        for (std::size_t v : arm) seq.push_back(simples[v]);
        return seq;
    };

    struct Piece {
        AdeComponent type;
        std::vector<std::size_t> order;
    };
    std::vector<Piece> pieces;
    for (const std::vector<std::size_t>& verts : comps) {
        const std::size_t sz = verts.size();
        std::size_t edges = 0;
        std::vector<std::size_t> branch;
        for (std::size_t v : verts) {
            edges += deg[v];
            if (deg[v] > 3) throw not_ade();
            if (deg[v] == 3) branch.push_back(v);
        }
        if (edges != 2 * (sz - 1) || branch.size() > 1) throw not_ade();

        Piece pc;
        if (branch.empty()) {
            // path
            pc.type = {'A', unsigned(sz)};
            if (sz == 1) {
                pc.order = {verts[0]};
            } else {
                std::vector<std::size_t> ends;
                for (std::size_t v : verts)
                    if (deg[v] == 1) ends.push_back(v);
                const std::size_t start =
                    simples[ends[0]] <= simples[ends[1]] ? ends[0] : ends[1];
                std::size_t nb = m;
                for (std::size_t j = 0; j < m; ++j)
                    if (adj[start][j]) nb = j;
                pc.order = {start};
                for (std::size_t v : walk_arm(start, nb))
                    pc.order.push_back(v);
            }
        } else {
            const std::size_t b = branch[0];
            std::vector<std::vector<std::size_t>> arms;
            for (std::size_t j = 0; j < m; ++j)
                if (adj[b][j]) arms.push_back(walk_arm(b, j));
            std::sort(arms.begin(), arms.end(),
                      [&](const std::vector<std::size_t>& x,
                          const std::vector<std::size_t>& y) {
                          if (x.size() != y.size()) return x.size() > y.size();
                          return arm_seq(x) < arm_seq(y);
                      });
            if (arms[1].size() == 1 && arms[2].size() == 1) {
                // one long arm, branch point, the two leaves
                pc.type = {'D', unsigned(sz)};
                pc.order.assign(arms[0].rbegin(), arms[0].rend());
                pc.order.push_back(b);
                pc.order.push_back(arms[1][0]);
                pc.order.push_back(arms[2][0]);
            } else if (arms[0].size() >= 2 && arms[0].size() <= 4 &&
                       arms[1].size() == 2 && arms[2].size() == 1) {
                // two-vertex arm, branch point, long arm, then the leaf
                pc.type = {'E', unsigned(sz)};
                pc.order.assign(arms[1].rbegin(), arms[1].rend());
                pc.order.push_back(b);
                for (std::size_t v : arms[0]) pc.order.push_back(v);
                pc.order.push_back(arms[2][0]);
            } else {
                throw not_ade();
            }
        }
        pieces.push_back(std::move(pc));
    }

    std::sort(pieces.begin(), pieces.end(),
              [&](const Piece& x, const Piece& y) {
                  if (x.type != y.type) return x.type < y.type;
                  return arm_seq(x.order) < arm_seq(y.order);
              });
    for (const Piece& pc : pieces) {
        out.type.components.push_back(pc.type);
        for (std::size_t v : pc.order) out.simple_roots.push_back(simples[v]);
    }
    return out;
}

}  // namespace k3lat
