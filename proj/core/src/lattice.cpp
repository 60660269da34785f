#include "k3lat/lattice.hpp"

#include <json.hpp>

#include <stdexcept>
#include <utility>

namespace k3lat {

namespace {

// Value of x mod m with result in [0, m), for rationals.
Rat rat_mod(const Rat& x, int m) {
    Int num = numerator(x), den = denominator(x);  // den > 0 canonical
    Int modn = Int(m) * den;
    Int r = num % modn;
    if (r < 0) r += modn;
    return Rat(r, den);
}

}  // namespace

Lattice::Lattice(IntMatrix gram, std::string name)
    : gram_(std::move(gram)), name_(std::move(name)) {
    if (!gram_.is_symmetric())
        throw std::invalid_argument("gram matrix must be symmetric");
}

Int Lattice::determinant() const {
    return rank() == 0 ? Int(1) : det(gram_);
}

bool Lattice::is_even() const {
    for (std::size_t i = 0; i < rank(); ++i)
        if (gram_.at(i, i) % 2 != 0) return false;
    return true;
}

Lattice direct_sum(const Lattice& l1, const Lattice& l2) {
    const std::size_t n1 = l1.rank(), n2 = l2.rank();
    IntMatrix g(n1 + n2, n1 + n2);
    for (std::size_t i = 0; i < n1; ++i)
        for (std::size_t j = 0; j < n1; ++j) g.at(i, j) = l1.gram().at(i, j);
    for (std::size_t i = 0; i < n2; ++i)
        for (std::size_t j = 0; j < n2; ++j)
            g.at(n1 + i, n1 + j) = l2.gram().at(i, j);
    std::string name;
    if (!l1.name().empty() && !l2.name().empty())
        name = l1.name() + "+" + l2.name();
    return Lattice(std::move(g), std::move(name));
}

Lattice repeated_sum(const Lattice& l, std::size_t k) {
    if (k == 0) return Lattice(IntMatrix(0, 0));
    Lattice acc = l;
    for (std::size_t i = 1; i < k; ++i) acc = direct_sum(acc, l);
    return acc;
}

Signature signature(const Lattice& l) {
    const std::size_t n = l.rank();
    std::vector<std::vector<Rat>> m(n, std::vector<Rat>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m[i][j] = Rat(l.gram().at(i, j));
    std::vector<bool> done(n, false);
    Signature sig;
    for (std::size_t step = 0; step < n; ++step) {
        // Pivot rule: first unprocessed index with nonzero diagonal, else
        // fold the first nonzero off-diagonal pair into a diagonal.
        std::size_t p = n;
        for (std::size_t k = 0; k < n; ++k)
            if (!done[k] && m[k][k] != 0) {
                p = k;
                break;
            }
        if (p == n) {
            std::size_t oi = n, oj = n;
            for (std::size_t i = 0; i < n && oi == n; ++i) {
                if (done[i]) continue;
                for (std::size_t j = i + 1; j < n; ++j) {
                    if (done[j]) continue;
                    if (m[i][j] != 0) {
                        oi = i;
                        oj = j;
                        break;
                    }
                }
            }
            if (oi == n) throw std::runtime_error("degenerate lattice");
            // e_i += e_j: diagonal becomes 2*m[i][j] since both diagonals
            // vanish in this branch.
            for (std::size_t k = 0; k < n; ++k) m[oi][k] += m[oj][k];
            for (std::size_t k = 0; k < n; ++k) m[k][oi] += m[k][oj];
            p = oi;
        }
        const Rat pivot = m[p][p];
        if (pivot > 0)
            ++sig.n_plus;
        else
            ++sig.n_minus;
        done[p] = true;
        for (std::size_t i = 0; i < n; ++i) {
            if (done[i] || m[i][p] == 0) continue;
            const Rat c = m[i][p] / pivot;
            for (std::size_t k = 0; k < n; ++k) m[i][k] -= c * m[p][k];
            for (std::size_t k = 0; k < n; ++k) m[k][i] -= c * m[k][p];
        }
    }
    return sig;
}

Int DiscriminantGroup::group_order() const {
    Int n = 1;
    for (const Int& d : orders) n *= d;
    return n;
}

DiscriminantGroup discriminant_group(const Lattice& l) {
    // L*/L is the cokernel Z^n / (G Z^n) via m -> G^{-1} m: with
    // u G v = d the class of the i-th invariant factor is generated by
    // the dual vector (column i of v) / d_i in lattice coordinates.
    const std::size_t n = l.rank();
    if (n > 0 && l.determinant() == 0)
        throw std::runtime_error("degenerate lattice");
    SnfResult s = smith_normal_form(l.gram());
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < n; ++i)
        if (s.d.at(i, i) > 1) idx.push_back(i);

    DiscriminantGroup ag;
    for (std::size_t i : idx) ag.orders.push_back(s.d.at(i, i));

    // Pairings of the rational generators x_i = v_i / d_i: the integer
    // matrix of v-column pairings divided by the orders.
    const std::size_t k = idx.size();
    ag.q.resize(k);
    ag.b.assign(k, std::vector<Rat>(k));
    for (std::size_t a = 0; a < k; ++a) {
        for (std::size_t c = a; c < k; ++c) {
            Int pair = 0;
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    pair += s.v.at(i, idx[a]) * l.gram().at(i, j) *
                            s.v.at(j, idx[c]);
            Rat val(pair, ag.orders[a] * ag.orders[c]);
            if (a == c) ag.q[a] = rat_mod(val, 2);
            ag.b[a][c] = ag.b[c][a] = rat_mod(val, 1);
        }
    }
    return ag;
}

Sublattice::Sublattice(Lattice ambient_lattice, IntMatrix basis_rows)
    : ambient(std::move(ambient_lattice)), basis(std::move(basis_rows)) {
    if (basis.cols() != ambient.rank())
        throw std::invalid_argument("basis column count != ambient rank");
    if (k3lat::rank(basis) != basis.rows())
        throw std::invalid_argument("basis rows must be independent");
}

IntMatrix Sublattice::induced_gram() const {
    return basis * ambient.gram() * basis.transpose();
}

Lattice Sublattice::as_lattice(std::string name) const {
    IntMatrix g = induced_gram();
    if (g.rows() > 0 && det(g) == 0)
        throw std::runtime_error("degenerate sublattice");
    return Lattice(std::move(g), std::move(name));
}

Sublattice primitive_closure(const Sublattice& s) {
    return Sublattice(s.ambient, saturate(s.basis));
}

Sublattice orthogonal_complement(const Lattice& ambient,
                                 const Sublattice& s) {
    if (s.ambient.gram() != ambient.gram())
        throw std::invalid_argument("sublattice has a different ambient");
    // x pairs to zero with every basis row iff x * (G B^T) = 0; an
    // integer kernel is automatically saturated, hence primitive.
    IntMatrix pairing = ambient.gram() * s.basis.transpose();
    return Sublattice(ambient, kernel_basis(pairing));
}

std::string lattice_to_json(const Lattice& l) {
    nlohmann::json j;
    j["name"] = l.name();
    j["rank"] = l.rank();
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i < l.rank(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (std::size_t k = 0; k < l.rank(); ++k)
            row.push_back(l.gram().at(i, k).str());
        rows.push_back(std::move(row));
    }
    j["gram"] = std::move(rows);
    return j.dump(2);
}

Lattice lattice_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    if (!j.contains("gram") || !j["gram"].is_array())
        throw std::invalid_argument("lattice record needs a gram array");
    const auto& rows = j["gram"];
    IntMatrix g(rows.size(), rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (!rows[i].is_array() || rows[i].size() != rows.size())
            throw std::invalid_argument("gram must be a square array");
        for (std::size_t k = 0; k < rows.size(); ++k) {
            const auto& cell = rows[i][k];
            if (cell.is_string())
                g.at(i, k) = Int(cell.get<std::string>());
            else
                g.at(i, k) = Int(cell.get<long long>());
        }
    }
    std::string name = j.value("name", std::string());
    if (j.contains("rank") && j["rank"].get<std::size_t>() != g.rows())
        throw std::invalid_argument("rank field disagrees with gram size");
    return Lattice(std::move(g), std::move(name));
}

}  // namespace k3lat
