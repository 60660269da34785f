#pragma once

#include "k3lat/lattice.hpp"

#include <string>
#include <vector>

namespace k3lat {

// Finite abelian group with a Q/2Z-valued quadratic form and the induced
// Q/Z-valued bilinear form, given on independent generators. Construction
// normalizes the presentation so every generator has prime-power order
// (splitting composite-order generators along their primary parts); the
// generator list is the orthogonal union of the p-groups.
class FiniteQuadraticForm {
public:
    // orders: > 1 each, exact (the group is the direct sum of the cyclic
    // subgroups the generators span); q in Q/2Z, b in Q/Z.
    FiniteQuadraticForm(std::vector<Int> orders, std::vector<Rat> q,
                        std::vector<std::vector<Rat>> b);
    static FiniteQuadraticForm trivial();

    std::size_t generators() const { return orders_.size(); }
    const std::vector<Int>& orders() const { return orders_; }
    const std::vector<Rat>& q() const { return q_; }
    const std::vector<std::vector<Rat>>& b() const { return b_; }
    Int group_order() const;

    // Values on the element with the given generator coefficients.
    Rat q_of(const std::vector<Int>& coeffs) const;
    Rat b_of(const std::vector<Int>& c1, const std::vector<Int>& c2) const;

    bool operator==(const FiniteQuadraticForm& rhs) const = default;

private:
    FiniteQuadraticForm() = default;
    std::vector<Int> orders_;           // prime powers, sorted by (p, k)
    std::vector<Rat> q_;                // values in [0, 2)
    std::vector<std::vector<Rat>> b_;   // values in [0, 1)
};

// Discriminant form A_L = L*/L of an even lattice; throws
// std::runtime_error "lattice not even" on an odd lattice.
FiniteQuadraticForm fqf_from_lattice(const Lattice& l);

FiniteQuadraticForm fqf_direct_sum(const FiniteQuadraticForm& a,
                                   const FiniteQuadraticForm& b);
FiniteQuadraticForm fqf_negate(const FiniteQuadraticForm& f);

// One Jordan constituent: the scale-p^k homogeneous piece of a p-adic
// Jordan splitting. For p = 2 a constituent is either even (type II,
// printed with subscript II) or odd (type I, printed with its oddity
// subscript); odd primes carry only (rank, sign).
struct Constituent {
    Int p = 2;
    unsigned k = 1;        // scale = p^k
    unsigned rank = 0;
    int sign = +1;         // +1 or -1
    bool odd_type = false; // p == 2 only
    unsigned oddity = 0;   // mod 8, meaningful when odd_type

    Int scale() const;
    bool operator==(const Constituent& rhs) const = default;
};

// Jordan symbol: at most one constituent per (p, k), sorted by (p, k).
struct GenusSymbol {
    std::vector<Constituent> constituents;

    bool empty() const { return constituents.empty(); }
    // Group order of any form with this symbol.
    Int group_order() const;
    bool operator==(const GenusSymbol& rhs) const = default;
};

// ASCII grammar:
//   symbol := "" | atom ("," atom)*
//   atom   := SCALE ("_" SUB)? "^" SIGN RANK
//   SCALE  := prime power >= 2; SUB := "II" | digit 0-7 (p = 2 only,
//            mandatory there); SIGN := "+" | "-"; RANK := positive decimal
// Whitespace is ignored. Malformed input raises std::invalid_argument
// with the offending offset; so do duplicate (p, k) atoms, subscripts on
// odd primes, missing subscripts on p = 2, and odd-rank II constituents.
GenusSymbol parse_symbol(const std::string& text);
std::string symbol_to_string(const GenusSymbol& s);

// Constituent-wise orthogonal sum: ranks add, signs multiply, oddities
// add mod 8, and a scale stays type II only if both summands are. The
// result is not move-normalized, so it prints the way hand computation
// writes it.
GenusSymbol symbol_sum(const GenusSymbol& a, const GenusSymbol& b);

// Canonical representative of the symbol's equivalence class: the 2-adic
// chain is normalized by oddity fusion inside compartments and sign
// walking along trains; equal forms yield byte-identical symbols.
// Throws std::invalid_argument "symbol not realizable" when a constituent
// or compartment admits no form.
GenusSymbol canonical_symbol(const GenusSymbol& s);

// True iff the symbols denote isomorphic forms (canonical forms equal).
bool symbols_equivalent(const GenusSymbol& a, const GenusSymbol& b);

// Signature mod 8 of any even lattice with this discriminant form.
int signature_mod8(const GenusSymbol& s);

// Jordan decomposition of a form, canonically normalized.
GenusSymbol jordan_normal_form(const FiniteQuadraticForm& f);

// A concrete form realizing the symbol; throws "symbol not realizable".
FiniteQuadraticForm fqf_from_symbol(const GenusSymbol& s);

// Exhaustive-isomorphism oracle, independent of the symbol machinery:
// compares (element order, q) multisets, then searches for an explicit
// generator-image isomorphism by complete backtracking. Throws
// std::runtime_error "oracle bound exceeded" when a group order exceeds
// the bound.
bool brute_force_isomorphic(const FiniteQuadraticForm& a,
                            const FiniteQuadraticForm& b,
                            const Int& bound = Int(4096));

}  // namespace k3lat
