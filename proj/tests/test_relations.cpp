#include <doctest.h>

#include <set>
#include <tuple>

#include "ncsphere/error.hpp"
#include "ncsphere/models.hpp"
#include "ncsphere/relations.hpp"

using namespace ncs;

namespace {

const Regime real{Field::real, false};
const Regime real_tw{Field::real, true};
const Regime complex{Field::complex, false};
const Regime complex_tw{Field::complex, true};
const std::vector<Regime> regimes = {real, real_tw, complex, complex_tw};

Permutation perm(const char* w) { return parse_permutation(w); }

// All label functions [0,k) -> [0,k).
std::vector<std::vector<int>> all_kernels(int k) {
    std::vector<std::vector<int>> out;
    std::vector<int> t(k, 0);
    while (true) {
        out.push_back(t);
        int i = k - 1;
        while (i >= 0 && ++t[i] == k) t[i--] = 0;
        if (i < 0) break;
    }
    return out;
}

// Clifford oracle for the twisted sign: with anticommuting gammas g_i,
// g_{i_1}...g_{i_k} = sign * g_{i_sigma(1)}...g_{i_sigma(k)}.
int clifford_sign(const Permutation& sigma, const std::vector<int>& kernel) {
    MatrixModel ones;
    ones.field = Field::real;
    ones.z.assign(kernel.size(), CMatrix::Identity(1, 1));
    const auto g = clifford_twist(ones);
    CMatrix a = CMatrix::Identity(g.d(), g.d()), b = a;
    for (std::size_t p = 0; p < kernel.size(); ++p) {
        a = a * g.z[kernel[p]];
        b = b * g.z[kernel[sigma[p]]];
    }
    if ((a - b).norm() < 1e-12) return 1;
    if ((a + b).norm() < 1e-12) return -1;
    return 0;
}

// Both words over one variable table.
std::pair<Word, Word> words(const std::string& u, const std::string& v) {
    const Word both = parse_word(u + v);
    const Word a(both.begin(), both.begin() + static_cast<long>(parse_word(u).size()));
    return {a, Word(both.begin() + static_cast<long>(a.size()), both.end())};
}

bool equivalent(const Saturation& s, const std::string& u, const std::string& v) {
    const auto [a, b] = words(u, v);
    return s.equivalent(a, b);
}

Level expected_level(const Permutation& sigma) {
    if (sigma == identity_permutation(static_cast<int>(sigma.size()))) return Level::free;
    return halfcommuting_membership(sigma) ? Level::half : Level::classical;
}

}  // namespace

TEST_CASE("words and kernels") {
    const Word w = parse_word("ab*ca");
    REQUIRE(w.size() == 4);
    CHECK(w[1].var == 1);
    CHECK(w[1].star);
    CHECK(word_to_string(w) == "ab*ca");
    CHECK(word_to_string({}) == "1");
    CHECK(word_kernel(parse_word("caac")) == std::vector<int>{0, 1, 1, 0});
    auto [u, v] = words("abc", "cab");
    CHECK(matching_permutation(u, v) == Permutation{2, 0, 1});
    std::tie(u, v) = words("aab", "baa");
    CHECK(matching_permutation(u, v) == Permutation{2, 0, 1});
    std::tie(u, v) = words("aab", "aba");
    CHECK(matching_permutation(u, v) == Permutation{0, 2, 1});
    CHECK_FALSE(matching_permutation(parse_word("ab"), parse_word("ab*")).has_value());
    CHECK_THROWS_AS(parse_word("*a"), ParseError);
    CHECK_THROWS_AS(parse_word("aB"), ParseError);
}

TEST_CASE("forced signs") {
    CHECK(relation_sign(perm("21"), {0, 1}, true) == -1);
    CHECK(relation_sign(perm("21"), {0, 0}, true) == 1);
    CHECK(relation_sign(perm("321"), {0, 1, 2}, true) == -1);
    CHECK(relation_sign(perm("321"), {0, 1, 0}, true) == 1);
    CHECK(relation_sign(perm("312"), {0, 1, 2}, true) == 1);
    CHECK(relation_sign(perm("3412"), {0, 1, 2, 3}, true) == 1);
    auto [u, v] = words("ab", "ba");
    CHECK(word_sign(u, v, true) == -1);
    std::tie(u, v) = words("ab*", "b*a");
    CHECK(word_sign(u, v, true) == -1);
    std::tie(u, v) = words("aab", "baa");
    CHECK(word_sign(u, v, true) == 1);
    CHECK_THROWS_AS(relation_sign(perm("21"), {0}, true), FrameError);
    CHECK_THROWS_AS(word_sign(parse_word("ab"), parse_word("bb"), true), DomainError);

    for (int k = 1; k <= 4; ++k)
        for (const auto& kernel : all_kernels(k))
            for (const auto& sigma : all_permutations(k)) {
                CHECK(relation_sign(sigma, kernel, false) == 1);
                CHECK(relation_sign(sigma, kernel, true) == clifford_sign(sigma, kernel));
                // cocycle: rearranging by sigma, then tau, is rearranging by sigma o tau
                std::vector<int> moved(k);
                for (int p = 0; p < k; ++p) moved[p] = kernel[sigma[p]];
                for (const auto& tau : all_permutations(k))
                    CHECK(relation_sign(compose(sigma, tau), kernel, true) ==
                          relation_sign(sigma, kernel, true) * relation_sign(tau, moved, true));
            }
}

TEST_CASE("relation literals") {
    auto s = parse_relation("abc=+cab", real_tw);
    CHECK(s.sigma == Permutation{2, 0, 1});
    CHECK(s.kernel == std::vector<int>{0, 1, 2});
    CHECK(s.sign == 1);
    CHECK_FALSE(s.restricted);
    CHECK(to_string(s) == "abc=+cab");
    CHECK(parse_relation("abc=cab", real) == parse_relation("abc=+cab", real));

    s = parse_relation("ab=-ba[a≠b]", real_tw);
    CHECK(s.restricted);
    CHECK(s.sign == -1);
    CHECK(to_string(s) == "ab=-ba[a≠b]");
    CHECK(parse_relation("ab=-ba[a!=b]", real_tw) == s);
    CHECK(to_string(parse_relation("abc=-cba[a≠b≠c]", real_tw)) == "abc=-cba[a≠b≠c]");

    s = parse_relation("ab*=b*a", complex);
    CHECK(s.exps == ColorWord{LegColor::white, LegColor::black});
    CHECK(to_string(s) == "ab*=+b*a");
    CHECK(to_string(parse_relation("aab=-aba", real_tw)) == "aab=-aba");

    CHECK_THROWS_AS(parse_relation("abc=-cab", real_tw), DomainError);
    CHECK_THROWS_AS(parse_relation("ab=ba", real_tw), DomainError);
    CHECK_THROWS_AS(parse_relation("ab=-ba", real), DomainError);
    CHECK_THROWS_AS(parse_relation("ab*=b*a", real), ParseError);
    CHECK_THROWS_AS(parse_relation("ab=ac", real), ParseError);
    CHECK_THROWS_AS(parse_relation("ab", real), ParseError);
    CHECK_THROWS_AS(parse_relation("=", real), ParseError);
    CHECK_THROWS_AS(parse_relation("ab=ba[a≠c]", real), ParseError);
    CHECK_THROWS_AS(parse_relation("ab=ba[a≠b", real), ParseError);
    CHECK_THROWS_AS(parse_relation("ab=ba[a≠a≠b]", real), ParseError);
}

TEST_CASE("restricted axioms must survive coarsening") {
    RelationSystem sys = monomial_system({}, real_tw);
    sys.schemas.push_back(parse_relation("abc=-cba[a≠b≠c]", real_tw));
    CHECK_THROWS_AS(Saturation{sys}, DomainError);
    sys.schemas = {parse_relation("ab=-ba[a≠b]", real_tw)};
    CHECK_NOTHROW(Saturation{sys});
    sys.schemas = {parse_relation("abc=+bca[a≠b≠c]", real_tw)};
    CHECK_THROWS_AS(Saturation{sys}, DomainError);
}

TEST_CASE("presets") {
    for (const Spec& s : all_specs()) {
        const auto sys = sphere_relations(s);
        CHECK(sys.field == s.field);
        CHECK(sys.twisted() == s.twisted);
        CHECK(sys.selfadjoint == (s.field == Field::real));
        CHECK(sys.quadratic);
        CHECK_FALSE(sys.group);
        const auto lines = describe(sys);
        CHECK(lines.front() == (s.field == Field::real ? "x_i self-adjoint" : "sum z_i z_i* = sum z_i* z_i = 1"));
        if (s.field == Field::complex && s.level != Level::free) CHECK(lines.back() == "every letter may be conjugated");
        const auto g = group_relations(s);
        CHECK(g.group);
        CHECK(g.twisted() == s.twisted);
    }
    CHECK(describe(sphere_relations(Spec(Field::real, Level::classical))) ==
          std::vector<std::string>{"x_i self-adjoint", "sum x_i^2 = 1", "ab=+ba"});
    CHECK(describe(sphere_relations(Spec(Field::real, Level::half, true)))[2] == "abc=-cba[a≠b≠c]");
    CHECK(sphere_relations(Spec(Field::real, Level::free)).schemas.empty());
    CHECK(describe(group_relations(Spec(Field::real, Level::classical, true)))[2] ==
          "ab=-ba for distinct generators on the same row or column, ab=ba otherwise");
    CHECK_THROWS_AS(monomial_system({{0, 0}}, real), DomainError);
}

TEST_CASE("reductions") {
    const auto free = sphere_relations(Spec(Field::real, Level::free));
    CHECK(to_string(reduce(parse_combination("ab-ba"), free).result) == "ab-ba");
    CHECK(to_string(parse_combination("(ab-ba)^2")) == "abab-abba-baab+baba");
    CHECK(to_string(normalize(parse_combination("ab-ab+2ba"))) == "2ba");
    CHECK(parse_combination("1-aa").terms.size() == 2);
    CHECK_THROWS_AS(parse_combination("(ab"), ParseError);
    CHECK_THROWS_AS(parse_combination("ab+"), ParseError);

    const auto r = reduce(parse_combination("(ab-ba)^2"), monomial_system({perm("312")}, real));
    CHECK(r.result.is_zero());
    CHECK_FALSE(r.trace.steps.empty());
    CHECK(r.trace.steps.front().rule == "axiom");
    CHECK(r.trace.steps.front().fact == "abc=+cab");
    const auto t = reduce(parse_combination("(ab+ba)^2"), monomial_system({perm("312")}, real_tw));
    CHECK(t.result.is_zero());
    for (const auto& step : t.trace.steps)
        for (int p : step.premises) CHECK(p < step.id);

    CHECK(reduce(parse_combination("abc-cba"), sphere_relations(Spec(Field::real, Level::half))).result.is_zero());
    CHECK(reduce(parse_combination("ab+ba"), sphere_relations(Spec(Field::real, Level::classical, true))).result.is_zero());
    CHECK_FALSE(reduce(parse_combination("ab-ba"), sphere_relations(Spec(Field::real, Level::half))).result.is_zero());

    auto e = parse_combination("ab*ba*");
    e.summed = {1};
    const auto c = reduce(e, sphere_relations(Spec(Field::complex, Level::classical)));
    CHECK(to_string(c.result) == "aa*");
    bool contraction = false;
    for (const auto& step : c.trace.steps) contraction |= step.rule == "contraction summing b";
    CHECK(contraction);
    CHECK(c.trace.steps.back().fact == "sum_b ab*ba*=aa*");
}

TEST_CASE("saturation derives the known consequences") {
    Saturation cyc(monomial_system({perm("312")}, real));
    CHECK(equivalent(cyc, "ab", "ba"));
    CHECK(cyc.representative(words("ab", "ba").second) == parse_word("ab"));

    Saturation tw(monomial_system({perm("312")}, real_tw));
    CHECK(equivalent(tw, "ab", "ba"));
    const auto ex = tw.explain({words("ab", "ba")});
    REQUIRE(ex.roots.size() == 1);
    CHECK(ex.steps[ex.roots[0]].fact == "ab=-ba");

    Saturation four(monomial_system({perm("3412")}, real));
    CHECK(equivalent(four, "abc", "cba"));
    CHECK_FALSE(equivalent(four, "ab", "ba"));

    Saturation classical(sphere_relations(Spec(Field::real, Level::classical, true)));
    CHECK(equivalent(classical, "abc", "cba"));
    std::set<std::string> facts;
    for (const auto& s : classical.derived(3)) facts.insert(to_string(s));
    CHECK(facts.count("ab=-ba[a≠b]"));
    CHECK(facts.count("abc=-cba[a≠b≠c]"));
    CHECK(facts.count("aab=+baa[a≠b]"));

    Saturation half(sphere_relations(Spec(Field::real, Level::half)));
    CHECK_FALSE(equivalent(half, "ab", "ba"));
    CHECK(equivalent(half, "abcd", "cbad"));
    CHECK(equivalent(half, "abcd", "adcb"));
    CHECK_FALSE(equivalent(half, "abcd", "bacd"));

    Saturation free(sphere_relations(Spec(Field::complex, Level::free)));
    CHECK_FALSE(equivalent(free, "ab", "ba"));
    CHECK(free.derived(3).empty());
    CHECK_THROWS_AS(free.explain({words("ab", "ba")}), DomainError);

    CHECK_THROWS_AS(Saturation(sphere_relations(Spec(Field::real, Level::free)), Bounds{13, 4}), SizeError);
    CHECK_THROWS_AS(Saturation(group_relations(Spec(Field::real, Level::classical))), DomainError);
    CHECK_THROWS_AS(equivalent(cyc, "abcdefg", "abcdefg"), SizeError);
}

TEST_CASE("goals stop the saturation early") {
    const auto [ab, ba] = words("ab", "ba");
    Saturation sat(monomial_system({perm("312")}, real), {}, {{ab, ba}});
    CHECK(sat.equivalent(ab, ba));
    CHECK(sat.stopped_early());
    Saturation full(monomial_system({perm("312")}, real));
    CHECK_FALSE(full.stopped_early());
    CHECK(sat.fact_count() <= full.fact_count());
}

TEST_CASE("classification of single monomial relations") {
    for (const auto& r : regimes)
        for (int k = 3; k <= 4; ++k)
            for (const auto& sigma : all_permutations(k)) {
                const auto c = classify_monomial_sphere({sigma}, r);
                REQUIRE_MESSAGE(c.sphere.has_value(), regime_name(r), " ", permutation_to_string(sigma));
                const Level l = expected_level(sigma);
                CHECK_MESSAGE(*c.sphere == Spec(r.field, l, r.twisted), regime_name(r), " ",
                              permutation_to_string(sigma));
                if (l != Level::free) CHECK_FALSE(c.certificate.steps.empty());
            }
}

TEST_CASE("classification is idempotent on the presets") {
    for (const Spec& s : all_specs()) {
        std::vector<Permutation> E;
        if (s.level == Level::classical) E = {perm("21")};
        if (s.level == Level::half) E = {perm("321")};
        const auto c = classify_monomial_sphere(E, Regime{s.field, s.twisted});
        REQUIRE(c.sphere.has_value());
        CHECK(*c.sphere == s);
    }
    const auto both = classify_monomial_sphere({perm("321"), perm("2143")}, real);
    REQUIRE(both.sphere.has_value());
    CHECK(both.sphere->level == Level::classical);
}

TEST_CASE("relation groups") {
    for (const Spec& s : all_specs())
        for (int k = 1; k <= 4; ++k) {
            const auto g = relation_group(sphere_relations(s), k);
            CHECK(g.closed);
            std::size_t expected = 1;
            for (const auto& sigma : all_permutations(k))
                if (s.level == Level::classical || (s.level == Level::half && halfcommuting_membership(sigma)))
                    expected += sigma != identity_permutation(k);
            CHECK_MESSAGE(g.elements.size() == expected, sphere_name(s), " k=", k);
        }
    CHECK(relation_group(sphere_relations(Spec(Field::real, Level::free)), 3).elements ==
          std::vector<Permutation>{identity_permutation(3)});
    CHECK(relation_group(sphere_relations(Spec(Field::real, Level::classical)), 3).elements.size() == 6);
    CHECK(relation_group(sphere_relations(Spec(Field::real, Level::half)), 3).elements.size() == 2);
    CHECK(relation_group(sphere_relations(Spec(Field::real, Level::half)), 5).elements.size() == 12);
    CHECK_THROWS_AS(relation_group(sphere_relations(Spec(Field::real, Level::half)), 0), DomainError);
}

TEST_CASE("span sign table") {
    const SignTable t = span_sign_table();
    CHECK(t == SignTable{{{1, 1, -1}, {1, 1, -1}, {-1, -1, 1}}});
    const Spec bar_o_star(Field::real, Level::half, true);
    const Spec bar_u_star(Field::complex, Level::half, true);
    CHECK(comult_sign_check(bar_o_star));
    CHECK(comult_sign_check(bar_u_star));
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) {
            SignTable bad = t;
            bad[r][c] = -bad[r][c];
            CHECK_FALSE(comult_sign_check(bar_o_star, bad));
            CHECK_FALSE(comult_sign_check(bar_u_star, bad));
        }
    CHECK_THROWS_AS(comult_sign_check(Spec(Field::real, Level::half)), DomainError);
    CHECK_THROWS_AS(comult_sign_check(Spec(Field::real, Level::classical, true)), DomainError);
}

TEST_CASE("group relation signs vanish on the classical versions") {
    // H_3 is commutative: a relation x = -x forces the product to vanish on
    // every signed permutation matrix.
    const auto h3 = enumerate_signed_permutations(3);
    for (const Spec& g : {Spec(Field::real, Level::classical, true), Spec(Field::real, Level::half, true)}) {
        const auto sys = group_relations(g);
        const int k = g.level == Level::classical ? 2 : 3;
        const Permutation sigma = g.level == Level::classical ? perm("21") : perm("321");
        int negative = 0;
        for (const auto& rows : all_kernels(k))
            for (const auto& cols : all_kernels(k)) {
                IndexTuple rs(rows.begin(), rows.end()), cs(cols.begin(), cols.end());
                bool in_range = true;
                for (int p = 0; p < k; ++p) in_range = in_range && rs[p] < 3 && cs[p] < 3;
                if (!in_range) continue;
                if (group_relation_sign(sys, sigma, rs, cs) > 0) continue;
                ++negative;
                for (const auto& e : h3) {
                    const CMatrix m = e.matrix();
                    cplx prod = 1;
                    for (int p = 0; p < k; ++p) prod *= m(rs[p], cs[p]);
                    CHECK(std::abs(prod) == 0);
                }
            }
        CHECK(negative > 0);
    }
    const auto plain = group_relations(Spec(Field::real, Level::classical));
    CHECK(group_relation_sign(plain, perm("21"), {0, 0}, {0, 1}) == 1);
    const auto tw = group_relations(Spec(Field::real, Level::classical, true));
    CHECK(group_relation_sign(tw, perm("21"), {0, 0}, {0, 1}) == -1);
    CHECK(group_relation_sign(tw, perm("21"), {0, 1}, {0, 1}) == 1);
    CHECK(group_relation_sign(tw, perm("21"), {0, 0}, {1, 1}) == 1);
    CHECK_THROWS_AS(group_relation_sign(tw, perm("21"), {0}, {0, 1}), FrameError);
    const auto span = group_relations(Spec(Field::real, Level::half, true));
    CHECK(group_relation_sign(span, perm("321"), {0, 1, 2}, {0, 1, 2}) == 1);
    CHECK(group_relation_sign(span, perm("321"), {0, 1, 2}, {0, 0, 1}) == -1);
    CHECK_THROWS_AS(group_relation_sign(span, perm("21"), {0, 1}, {0, 1}), DomainError);
}
