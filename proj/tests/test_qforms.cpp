#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <k3lat/lattice.hpp>
#include <k3lat/qform.hpp>

#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

using k3lat::brute_force_isomorphic;
using k3lat::canonical_symbol;
using k3lat::Constituent;
using k3lat::direct_sum;
using k3lat::FiniteQuadraticForm;
using k3lat::fqf_direct_sum;
using k3lat::fqf_from_lattice;
using k3lat::fqf_from_symbol;
using k3lat::fqf_negate;
using k3lat::GenusSymbol;
using k3lat::Int;
using k3lat::IntMatrix;
using k3lat::jordan_normal_form;
using k3lat::Lattice;
using k3lat::parse_symbol;
using k3lat::Rat;
using k3lat::signature_mod8;
using k3lat::symbol_sum;
using k3lat::symbol_to_string;
using k3lat::symbols_equivalent;

namespace {

// Negated simply-laced Cartan matrices built from edge lists, kept local
// so the checks here do not depend on the root-system module.
IntMatrix graph_gram(std::size_t n,
                     const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
    IntMatrix g(n, n);
    for (std::size_t i = 0; i < n; ++i) g.at(i, i) = -2;
    for (auto [a, b] : edges) {
        g.at(a, b) = 1;
        g.at(b, a) = 1;
    }
    return g;
}

IntMatrix gram_a(std::size_t n) {
    std::vector<std::pair<std::size_t, std::size_t>> e;
    for (std::size_t i = 0; i + 1 < n; ++i) e.push_back({i, i + 1});
    return graph_gram(n, e);
}

IntMatrix gram_d(std::size_t n) {
    std::vector<std::pair<std::size_t, std::size_t>> e;
    for (std::size_t i = 0; i + 2 < n; ++i) e.push_back({i, i + 1});
    e.push_back({n - 3, n - 1});
    return graph_gram(n, e);
}

IntMatrix gram_e(std::size_t n) {
    std::vector<std::pair<std::size_t, std::size_t>> e;
    for (std::size_t i = 0; i + 2 < n; ++i) e.push_back({i, i + 1});
    e.push_back({2, n - 1});
    return graph_gram(n, e);
}

Rat rat(long long num, long long den) { return Rat(num, den); }

std::vector<std::pair<std::string, Lattice>> ade_list() {
    std::vector<std::pair<std::string, Lattice>> out;
    for (std::size_t n = 1; n <= 5; ++n)
        out.emplace_back("A" + std::to_string(n), Lattice(gram_a(n)));
    for (std::size_t n = 4; n <= 8; ++n)
        out.emplace_back("D" + std::to_string(n), Lattice(gram_d(n)));
    for (std::size_t n = 6; n <= 8; ++n)
        out.emplace_back("E" + std::to_string(n), Lattice(gram_e(n)));
    return out;
}

// Lines of a data file split on '|', comments and blanks skipped.
std::vector<std::vector<std::string>> oracle_rows(const std::string& file) {
    std::ifstream in(std::string(K3LAT_TEST_DATA_DIR) + "/" + file);
    REQUIRE_MESSAGE(in.good(), "missing data file ", file);
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> fields;
        std::size_t from = 0;
        for (;;) {
            const std::size_t bar = line.find('|', from);
            if (bar == std::string::npos) {
                fields.push_back(line.substr(from));
                break;
            }
            fields.push_back(line.substr(from, bar - from));
            from = bar + 1;
        }
        rows.push_back(std::move(fields));
    }
    return rows;
}

std::string canon_str(const std::string& symbol) {
    return symbol_to_string(canonical_symbol(parse_symbol(symbol)));
}

}  // namespace

TEST_CASE("discriminant forms of definite lattices") {
    const FiniteQuadraticForm a1 = fqf_from_lattice(Lattice(gram_a(1)));
    REQUIRE(a1.generators() == 1);
    CHECK(a1.orders()[0] == 2);
    CHECK(a1.q()[0] == rat(3, 2));
    CHECK(a1.b()[0][0] == rat(1, 2));
    CHECK(a1.group_order() == 2);

    const FiniteQuadraticForm a3 = fqf_from_lattice(Lattice(gram_a(3)));
    REQUIRE(a3.generators() == 1);
    CHECK(a3.orders()[0] == 4);
    CHECK(a3.q()[0] == rat(5, 4));

    CHECK(fqf_from_lattice(Lattice(gram_e(8))).generators() == 0);
    CHECK(fqf_from_lattice(Lattice(IntMatrix(0, 0))).generators() == 0);

    CHECK_THROWS_WITH_AS(fqf_from_lattice(Lattice({{1}})), "lattice not even",
                         std::runtime_error);

    // element evaluation on the generators
    CHECK(a1.q_of({Int(1)}) == rat(3, 2));
    CHECK(a1.q_of({Int(0)}) == 0);
    CHECK(a1.b_of({Int(1)}, {Int(1)}) == rat(1, 2));
}

TEST_CASE("construction validates and splits composite orders") {
    using Orders = std::vector<Int>;
    using Q = std::vector<Rat>;
    using B = std::vector<std::vector<Rat>>;

    // Z/6 with q = 7/6 splits into a Z/2 and a Z/3 part
    const FiniteQuadraticForm f(Orders{6}, Q{rat(7, 6)}, B{{rat(1, 6)}});
    REQUIRE(f.generators() == 2);
    CHECK(f.orders() == Orders{2, 3});
    CHECK(f.q()[0] == rat(1, 2));
    CHECK(f.q()[1] == rat(2, 3));
    CHECK(f.b()[0][1] == 0);
    CHECK(f.group_order() == 6);

    CHECK_THROWS_WITH_AS(
        FiniteQuadraticForm(Orders{1}, Q{Rat(0)}, B{{Rat(0)}}),
        "generator order must exceed 1", std::invalid_argument);
    CHECK_THROWS_WITH_AS(
        FiniteQuadraticForm(Orders{2}, Q{rat(1, 3)}, B{{rat(1, 3)}}),
        "quadratic value incompatible with generator order",
        std::invalid_argument);
    CHECK_THROWS_WITH_AS(
        FiniteQuadraticForm(Orders{2}, Q{rat(1, 2)}, B{{Rat(0)}}),
        "quadratic and bilinear values disagree", std::invalid_argument);
    CHECK_THROWS_WITH_AS(
        FiniteQuadraticForm(Orders{2, 2}, Q{rat(1, 2), rat(1, 2)},
                            B{{rat(1, 2), rat(1, 2)}, {Rat(0), rat(1, 2)}}),
        "bilinear matrix must be symmetric", std::invalid_argument);
}

TEST_CASE("direct sum and negation") {
    const FiniteQuadraticForm a1 = fqf_from_lattice(Lattice(gram_a(1)));
    const FiniteQuadraticForm a2 = fqf_from_lattice(Lattice(gram_a(2)));
    const FiniteQuadraticForm s = fqf_direct_sum(a1, a2);
    CHECK(s.group_order() == 6);
    CHECK(fqf_negate(fqf_negate(s)) == s);
    CHECK(fqf_direct_sum(s, FiniteQuadraticForm::trivial()) == s);
    CHECK(fqf_negate(FiniteQuadraticForm::trivial()).generators() == 0);
    // -q(A_2) has generator value 2 - 4/3 = 2/3
    CHECK(fqf_negate(a2).q()[0] == rat(2, 3));
}

TEST_CASE("jordan normal form of standard discriminant forms") {
    const auto sym = [](const IntMatrix& g) {
        return symbol_to_string(jordan_normal_form(fqf_from_lattice(Lattice(g))));
    };
    CHECK(sym(gram_a(1)) == "2_7^+1");
    CHECK(sym(gram_a(2)) == "3^+1");
    CHECK(sym(gram_a(3)) == "4_5^-1");
    CHECK(sym(gram_d(4)) == "2_II^-2");
    CHECK(sym(gram_d(8)) == "2_II^+2");
    CHECK(sym(gram_e(6)) == "3^-1");
    CHECK(sym(gram_e(7)) == "2_1^+1");
    CHECK(sym(gram_e(8)) == "");
    CHECK(symbol_to_string(jordan_normal_form(FiniteQuadraticForm::trivial())) ==
          "");

    // a mixed-prime example: A_2 + A_3 + D_4
    const Lattice mix =
        direct_sum(direct_sum(Lattice(gram_a(2)), Lattice(gram_a(3))),
                   Lattice(gram_d(4)));
    const GenusSymbol j = jordan_normal_form(fqf_from_lattice(mix));
    CHECK(symbol_to_string(j) ==
          canon_str("2_II^-2,4_5^-1,3^+1"));
}

TEST_CASE("symbol parsing") {
    const GenusSymbol s = parse_symbol("2_7^+1");
    REQUIRE(s.constituents.size() == 1);
    CHECK(s.constituents[0].p == 2);
    CHECK(s.constituents[0].k == 1);
    CHECK(s.constituents[0].rank == 1);
    CHECK(s.constituents[0].sign == +1);
    CHECK(s.constituents[0].odd_type);
    CHECK(s.constituents[0].oddity == 7);
    CHECK(s.group_order() == 2);

    const GenusSymbol t = parse_symbol("2_II^-2,3^+5");
    REQUIRE(t.constituents.size() == 2);
    CHECK_FALSE(t.constituents[0].odd_type);
    CHECK(t.constituents[0].sign == -1);
    CHECK(t.constituents[1].p == 3);
    CHECK(t.constituents[1].rank == 5);
    CHECK(t.group_order() == 4 * 243);

    const GenusSymbol u = parse_symbol("16_5^-1");
    REQUIRE(u.constituents.size() == 1);
    CHECK(u.constituents[0].p == 2);
    CHECK(u.constituents[0].k == 4);
    CHECK(u.constituents[0].scale() == 16);

    CHECK(parse_symbol("").empty());
    CHECK(parse_symbol("  ").empty());
    CHECK(symbol_to_string(parse_symbol(" 2_7^+1 , 3^+5 ")) == "2_7^+1,3^+5");
    // constituents print sorted by prime and scale
    CHECK(symbol_to_string(parse_symbol("3^+5,2_II^-2")) == "2_II^-2,3^+5");
    CHECK(symbol_to_string(parse_symbol("9^-2,3^+1")) == "3^+1,9^-2");
    CHECK(symbol_to_string(GenusSymbol{}) == "");
}

TEST_CASE("symbol parse errors carry offsets") {
    const auto err = [](const std::string& text) {
        try {
            parse_symbol(text);
        } catch (const std::invalid_argument& e) {
            return std::string(e.what());
        }
        return std::string("no error");
    };
    CHECK(err("6^+1") == "symbol parse error at offset 0: scale is not a prime power");
    CHECK(err("1^+1") == "symbol parse error at offset 0: scale must be at least 2");
    CHECK(err("3_II^+2") == "symbol parse error at offset 1: subscript on an odd prime");
    CHECK(err("2^+2") == "symbol parse error at offset 1: dyadic constituent needs a subscript");
    CHECK(err("2_8^+1") == "symbol parse error at offset 2: subscript must be II or a digit 0-7");
    CHECK(err("2_7+1") == "symbol parse error at offset 3: expected '^'");
    CHECK(err("2_7^1") == "symbol parse error at offset 4: expected a sign");
    CHECK(err("2_7^+0") == "symbol parse error at offset 5: rank must be positive");
    CHECK(err("2_II^-3") == "symbol parse error at offset 0: type II rank must be even");
    CHECK(err("2_7^+1,2_3^+1") == "symbol parse error at offset 7: duplicate scale");
    CHECK(err("2_7^+1,") == "symbol parse error at offset 7: expected a scale");
    CHECK(err("x") == "symbol parse error at offset 0: expected a scale");
    CHECK(err(" 6^+1") == "symbol parse error at offset 1: scale is not a prime power");
    CHECK(err("3^+5;") == "symbol parse error at offset 4: expected ','");
}

TEST_CASE("symbol sums print the plain merge") {
    const auto sum = [](const std::string& a, const std::string& b) {
        return symbol_to_string(symbol_sum(parse_symbol(a), parse_symbol(b)));
    };
    CHECK(sum("2_7^+1", "2_II^-2,3^+5") == "2_7^-3,3^+5");
    CHECK(sum("2_7^+1", "2_II^+8") == "2_7^+9");
    CHECK(sum("2_7^+1", "") == "2_7^+1");
    CHECK(sum("", "") == "");
    CHECK(sum("2_7^+1", "2_1^+1") == "2_0^+2");
    CHECK(sum("3^+1", "5^-2") == "3^+1,5^-2");
    // associative on a mixed example
    const GenusSymbol a = parse_symbol("2_7^+1");
    const GenusSymbol b = parse_symbol("2_II^-2,3^+5");
    const GenusSymbol c = parse_symbol("4_1^-1");
    CHECK(symbol_sum(symbol_sum(a, b), c) == symbol_sum(a, symbol_sum(b, c)));
}

TEST_CASE("canonicalization fixes a class representative") {
    CHECK(canon_str("2_7^+1") == "2_7^+1");
    CHECK(canon_str("2_3^-1") == "2_7^+1");
    CHECK(canon_str("2_1^+1") == "2_1^+1");
    CHECK(canon_str("2_5^-1") == "2_1^+1");
    CHECK(canon_str("4_5^-1") == "4_5^-1");
    CHECK(canon_str("2_II^-2,3^+5") == "2_II^-2,3^+5");

    CHECK(symbols_equivalent(parse_symbol("2_7^+1"), parse_symbol("2_7^+1")));
    CHECK(symbols_equivalent(parse_symbol("2_7^+1"), parse_symbol("2_3^-1")));
    CHECK_FALSE(symbols_equivalent(parse_symbol("2_7^+1"), parse_symbol("2_1^+1")));
    CHECK_FALSE(symbols_equivalent(parse_symbol("3^+1"), parse_symbol("3^-1")));

    CHECK_THROWS_WITH_AS(canonical_symbol(parse_symbol("2_0^+1")),
                         "symbol not realizable", std::invalid_argument);
    CHECK_THROWS_WITH_AS(canonical_symbol(parse_symbol("2_5^+1")),
                         "symbol not realizable", std::invalid_argument);
    CHECK_THROWS_WITH_AS(canonical_symbol(parse_symbol("2_1^-1")),
                         "symbol not realizable", std::invalid_argument);
}

TEST_CASE("signature mod 8 closed form") {
    CHECK(signature_mod8(parse_symbol("")) == 0);
    CHECK(signature_mod8(parse_symbol("2_II^-2,3^+5")) == 2);
    CHECK(signature_mod8(parse_symbol("2_7^-3,3^+5")) == 1);
    CHECK(signature_mod8(parse_symbol("2_7^+1")) == 7);
}

TEST_CASE("frozen signature oracle") {
    const auto rows = oracle_rows("qform_sigma_oracle.txt");
    REQUIRE(rows.size() >= 200);
    for (const auto& row : rows) {
        REQUIRE(row.size() == 3);
        REQUIRE(row[0] == "sigma");
        INFO("symbol ", row[1]);
        CHECK(signature_mod8(parse_symbol(row[1])) == std::stoi(row[2]));
    }
}

TEST_CASE("frozen isomorphism oracle") {
    const auto rows = oracle_rows("qform_iso_oracle.txt");
    REQUIRE(rows.size() >= 300);
    for (const auto& row : rows) {
        REQUIRE(row.size() == 3);
        const bool expect = row[0] == "iso";
        REQUIRE((expect || row[0] == "noniso"));
        INFO(row[0], " ", row[1], " vs ", row[2]);
        const GenusSymbol a = parse_symbol(row[1]);
        const GenusSymbol b = parse_symbol(row[2]);
        CHECK(symbols_equivalent(a, b) == expect);
        // canonicalization is idempotent and round-trips through text
        const GenusSymbol ca = canonical_symbol(a);
        CHECK(canonical_symbol(ca) == ca);
        CHECK(parse_symbol(symbol_to_string(ca)) == ca);
    }
}

TEST_CASE("realized symbols match the exhaustive oracle") {
    const auto rows = oracle_rows("qform_iso_oracle.txt");
    for (const auto& row : rows) {
        const bool expect = row[0] == "iso";
        INFO(row[0], " ", row[1], " vs ", row[2]);
        const GenusSymbol a = parse_symbol(row[1]);
        const GenusSymbol b = parse_symbol(row[2]);
        if (a.group_order() > 4096 || b.group_order() > 4096) continue;
        const FiniteQuadraticForm fa = fqf_from_symbol(a);
        const FiniteQuadraticForm fb = fqf_from_symbol(b);
        CHECK(brute_force_isomorphic(fa, fb) == expect);
        // extraction recovers the class of what was realized
        CHECK(jordan_normal_form(fa) == canonical_symbol(a));
        CHECK(jordan_normal_form(fb) == canonical_symbol(b));
    }
}

TEST_CASE("exhaustive oracle basics") {
    CHECK(brute_force_isomorphic(FiniteQuadraticForm::trivial(),
                                 FiniteQuadraticForm::trivial()));
    const FiniteQuadraticForm a2 = fqf_from_lattice(Lattice(gram_a(2)));
    const FiniteQuadraticForm e6 = fqf_from_lattice(Lattice(gram_e(6)));
    CHECK(brute_force_isomorphic(a2, a2));
    CHECK_FALSE(brute_force_isomorphic(a2, e6));
    CHECK_FALSE(brute_force_isomorphic(a2, fqf_from_lattice(Lattice(gram_a(1)))));

    // 3/2 + 1/2 on (Z/2)^2 is odd, unlike either even block
    const FiniteQuadraticForm odd2 = fqf_direct_sum(
        fqf_from_lattice(Lattice(gram_a(1))),
        fqf_negate(fqf_from_lattice(Lattice(gram_a(1)))));
    CHECK_FALSE(brute_force_isomorphic(odd2, fqf_from_symbol(parse_symbol("2_II^+2"))));
    CHECK_FALSE(brute_force_isomorphic(odd2, fqf_from_symbol(parse_symbol("2_II^-2"))));
    CHECK(brute_force_isomorphic(odd2, fqf_from_symbol(parse_symbol("2_4^-2"))));

    const FiniteQuadraticForm big = fqf_from_symbol(parse_symbol("3^+8"));
    CHECK_THROWS_WITH_AS(brute_force_isomorphic(big, big),
                         "oracle bound exceeded", std::runtime_error);
    CHECK(brute_force_isomorphic(big, big, Int(7000)));
}

TEST_CASE("lattice sums agree with form sums") {
    const auto ade = ade_list();
    for (const auto& [n1, l1] : ade)
        for (const auto& [n2, l2] : ade) {
            INFO(n1, " + ", n2);
            const FiniteQuadraticForm whole =
                fqf_from_lattice(direct_sum(l1, l2));
            const FiniteQuadraticForm parts =
                fqf_direct_sum(fqf_from_lattice(l1), fqf_from_lattice(l2));
            CHECK(brute_force_isomorphic(whole, parts));
            CHECK(jordan_normal_form(whole) == jordan_normal_form(parts));
        }
}

TEST_CASE("signature of the discriminant form matches the lattice") {
    // all the listed lattices are negative definite, so the signature is
    // minus the rank
    const auto ade = ade_list();
    std::vector<std::pair<std::string, Lattice>> sums;
    for (const auto& [n1, l1] : ade) {
        sums.emplace_back(n1, l1);
        for (const auto& [n2, l2] : ade) {
            if (l1.rank() + l2.rank() > 12) continue;
            sums.emplace_back(n1 + "+" + n2, direct_sum(l1, l2));
        }
    }
    for (const auto& [name, l] : sums) {
        INFO(name);
        const int expect = int((16 - l.rank() % 8) % 8);
        CHECK(signature_mod8(jordan_normal_form(fqf_from_lattice(l))) == expect);
    }
}

TEST_CASE("symbol equivalence agrees with the exhaustive oracle on lattices") {
    const auto ade = ade_list();
    for (const auto& [n1, l1] : ade)
        for (const auto& [n2, l2] : ade) {
            INFO(n1, " vs ", n2);
            const FiniteQuadraticForm f1 = fqf_from_lattice(l1);
            const FiniteQuadraticForm f2 = fqf_from_lattice(l2);
            CHECK(symbols_equivalent(jordan_normal_form(f1),
                                     jordan_normal_form(f2)) ==
                  brute_force_isomorphic(f1, f2));
        }
}
