#pragma once

#include "k3lat/lattice.hpp"

#include <string>
#include <vector>

namespace k3lat {

// One irreducible ADE factor. Valid pairs: A with rank >= 1, D with
// rank >= 4, E with rank in {6, 7, 8}.
struct AdeComponent {
    char family = 'A';
    unsigned rank = 1;

    friend auto operator<=>(const AdeComponent&, const AdeComponent&) = default;
};

// Multiset of irreducible components, kept sorted by (family, rank).
struct RootSystemType {
    std::vector<AdeComponent> components;

    unsigned rank() const;
    bool operator==(const RootSystemType&) const = default;
};

// Dynkin Gram matrix, negative definite: -2 on the diagonal, +1 exactly
// on adjacent vertex pairs. Vertex order: A_n is the path 0..n-1; D_n is
// the path 0..n-2 with vertex n-1 attached to n-3; E_n is the path
// 0..n-2 with vertex n-1 attached to 2. Invalid (family, rank) throws
// std::invalid_argument.
Lattice ade_lattice(char family, unsigned rank);

// Orthogonal sum of ade_lattice over the components, in sorted order.
Lattice root_lattice(const RootSystemType& t);

// Text form: multiplicities merged, components sorted, terms joined by
// '+', e.g. "2A1+A3"; the empty root system prints as "0".
std::string root_system_to_string(const RootSystemType& t);

// Inverse of root_system_to_string; also accepts unsorted or repeated
// terms and normalizes them. Throws std::invalid_argument
// "root system parse error at offset N: ...".
RootSystemType parse_root_system(const std::string& text);

// All vectors of square -2, in increasing lexicographic coordinate
// order (hence closed under negation and duplicate free). Exact
// branch-and-bound on the positive definite form -G with rational
// Cholesky bounds; throws std::runtime_error
// "lattice not negative definite" otherwise.
std::vector<std::vector<Int>> enumerate_roots(const Lattice& l);

// Root system of a negative definite lattice. The simple roots (rows,
// ambient coordinates) are a basis of the sublattice generated by all
// roots, which may span less than the full rank; their Gram matrix
// equals root_lattice(type).gram() entry for entry, components sorted
// and each listed in the ade_lattice vertex order.
struct RootClassification {
    RootSystemType type;
    std::vector<std::vector<Int>> simple_roots;
};

RootClassification classify_root_system(const Lattice& l);

}  // namespace k3lat
