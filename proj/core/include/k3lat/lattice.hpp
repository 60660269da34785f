#pragma once

#include "k3lat/int_matrix.hpp"

#include <string>
#include <vector>

namespace k3lat {

// Integral symmetric bilinear form given by a Gram matrix. Evenness and
// nondegeneracy are not forced at construction so that arbitrary user
// files can be inspected; operations that require them check and say so.
class Lattice {
public:
    Lattice(IntMatrix gram, std::string name = "");

    const IntMatrix& gram() const { return gram_; }
    const std::string& name() const { return name_; }
    std::size_t rank() const { return gram_.rows(); }
    Int determinant() const;
    bool is_even() const;

private:
    IntMatrix gram_;
    std::string name_;
};

Lattice direct_sum(const Lattice& l1, const Lattice& l2);

// Orthogonal sum of k copies.
Lattice repeated_sum(const Lattice& l, std::size_t k);

struct Signature {
    std::size_t n_plus = 0;
    std::size_t n_minus = 0;
};

// Exact rational congruence diagonalization; throws std::runtime_error
// "degenerate lattice" if the form is singular.
Signature signature(const Lattice& l);

// Presentation of A_L = L*/L: cyclic generators with orders (the SNF
// invariant factors > 1), the induced quadratic form q with values in
// Q/2Z (represented in [0,2)) and bilinear form b in Q/Z ([0,1)).
struct DiscriminantGroup {
    std::vector<Int> orders;
    std::vector<Rat> q;
    std::vector<std::vector<Rat>> b;
    Int group_order() const;
};

DiscriminantGroup discriminant_group(const Lattice& l);

// Sublattice presented by basis rows in ambient coordinates.
struct Sublattice {
    Lattice ambient;
    IntMatrix basis;

    Sublattice(Lattice ambient_lattice, IntMatrix basis_rows);
    std::size_t rank() const { return basis.rows(); }
    IntMatrix induced_gram() const;
    // The induced form as a standalone lattice; throws "degenerate
    // sublattice" if the induced form is singular.
    Lattice as_lattice(std::string name = "") const;
};

// Saturation of S inside its ambient lattice.
Sublattice primitive_closure(const Sublattice& s);

// {x in ambient : x.s = 0 for all s in S}; always primitive.
Sublattice orthogonal_complement(const Lattice& ambient,
                                 const Sublattice& s);

// Structured text (JSON) record {name, rank, gram}; exact round-trip.
std::string lattice_to_json(const Lattice& l);
Lattice lattice_from_json(const std::string& text);

}  // namespace k3lat
