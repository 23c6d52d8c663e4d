#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "ncsphere/error.hpp"
#include "ncsphere/partition.hpp"
#include "support.hpp"

using namespace ncs;

namespace {

std::set<std::string> literals(const std::vector<Partition>& ps) {
    std::set<std::string> out;
    for (const auto& p : ps) out.insert(p.to_string());
    return out;
}

long long double_factorial(int n) { return n <= 1 ? 1 : n * double_factorial(n - 2); }
long long catalan(int m) {
    long long c = 1;
    for (int i = 0; i < m; ++i) c = c * 2 * (2 * i + 1) / (i + 2);
    return c;
}

// Legs per block in each row, as a multiset.
std::multiset<std::pair<int, int>> row_profile(const Partition& p) {
    std::multiset<std::pair<int, int>> out;
    for (const auto& b : p.blocks()) {
        int up = 0;
        for (int leg : b) up += p.is_upper(leg);
        out.emplace(up, static_cast<int>(b.size()) - up);
    }
    return out;
}

}  // namespace

TEST_CASE("literals round-trip through canonical form") {
    CHECK(Partition::parse("|abab").to_string() == "|baba");
    CHECK(Partition::parse("ab|ba").to_string() == "ab|ba");
    CHECK(Partition::parse("|xxyy:oo**").to_string() == "|bbaa:oo**");
    CHECK(Partition::parse("|") == Partition(0, 0, {}));
    CHECK(Partition::parse("|abab") == Partition::parse("|cdcd"));
    CHECK_THROWS_AS(Partition::parse("abab"), ParseError);
    CHECK_THROWS_AS(Partition::parse("|ab:o"), ParseError);
}

TEST_CASE("enumerate examples") {
    const auto p2 = enumerate(PartitionClass::P2, 0, 4);
    CHECK(p2.size() == 3);
    CHECK(literals(p2) == literals({Partition::parse("|aabb"), Partition::parse("|abab"),
                                    Partition::parse("|abba")}));
    CHECK(enumerate(PartitionClass::NC2, 0, 6).size() == 5);
    CHECK(enumerate(PartitionClass::P2_star, 3, 3).size() == 6);

    const auto colored = enumerate(PartitionClass::P2, {}, parse_colors("11**"));
    CHECK(literals(colored) == literals({Partition::parse("|abba:oo**"), Partition::parse("|abab:oo**")}));

    CHECK(enumerate(PartitionClass::P2, 0, 5).empty());
    CHECK_THROWS_AS(enumerate(PartitionClass::P, 7, 6), SizeError);
    CHECK(enumerate(PartitionClass::P, 0, 4).size() == 15);
    CHECK(enumerate(PartitionClass::Perm, 3, 3).size() == 6);
}

TEST_CASE("enumeration is duplicate-free and matches the membership predicate") {
    const PartitionClass classes[] = {PartitionClass::P,      PartitionClass::P_even,
                                      PartitionClass::P2,     PartitionClass::NC,
                                      PartitionClass::NC_even, PartitionClass::NC2,
                                      PartitionClass::P2_star, PartitionClass::Perm};
    for (int n = 0; n <= 7; ++n)
        for (int k = 0; k <= n; ++k) {
            const auto all = enumerate(PartitionClass::P, k, n - k);
            for (auto c : classes) {
                const auto members = enumerate(c, k, n - k);
                CHECK(literals(members).size() == members.size());
                std::size_t expected = 0;
                for (const auto& p : all) expected += is_member(p, c);
                CHECK(members.size() == expected);
                for (const auto& p : members) CHECK(is_member(p, c));
            }
        }
}

TEST_CASE("colored enumeration agrees with filtering") {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 40; ++trial) {
        const int k = rng() % 4, l = rng() % 4;
        ColorWord up(k), down(l);
        for (auto& c : up) c = rng() % 2 ? LegColor::white : LegColor::black;
        for (auto& c : down) c = rng() % 2 ? LegColor::white : LegColor::black;
        ColorWord all = up;
        all.insert(all.end(), down.begin(), down.end());
        for (auto c : {PartitionClass::P2, PartitionClass::NC2, PartitionClass::P2_star, PartitionClass::P_even}) {
            std::size_t expected = 0;
            for (const auto& p : enumerate(PartitionClass::P, k, l))
                expected += is_member(Partition(k, l, p.labels(), all), c);
            CHECK(enumerate(c, up, down).size() == expected);
        }
    }
}

TEST_CASE("membership examples") {
    CHECK_FALSE(is_member(Partition::parse("|abab"), PartitionClass::NC2));
    CHECK(is_member(Partition::parse("|abba"), PartitionClass::NC2));
    CHECK(is_member(Partition::from_permutation(parse_permutation("321")), PartitionClass::P2_star));
    CHECK_FALSE(is_member(Partition::from_permutation(parse_permutation("213")), PartitionClass::P2_star));
    // identity diagram is noncrossing in the clockwise order
    CHECK(is_member(Partition::parse("ab|ab"), PartitionClass::NC2));
    CHECK_FALSE(is_member(Partition::parse("ab|ba"), PartitionClass::NC2));
    CHECK_FALSE(is_member(Partition::parse("|aa:oo"), PartitionClass::P2));
    CHECK(is_member(Partition::parse("|aa:o*"), PartitionClass::P2));
    CHECK(is_member(Partition::parse("a|a:oo"), PartitionClass::P2));
    CHECK_FALSE(is_member(Partition::parse("a|a:o*"), PartitionClass::P2));
}

TEST_CASE("subset chain, exhaustive up to 8 legs") {
    for (int n = 0; n <= 8; ++n)
        for (int k = 0; k <= n; ++k)
            for (const auto& p : enumerate(PartitionClass::P, k, n - k)) {
                if (is_member(p, PartitionClass::NC2)) {
                    CHECK(is_member(p, PartitionClass::NC_even));
                    CHECK(is_member(p, PartitionClass::P2));
                }
                if (is_member(p, PartitionClass::NC_even)) CHECK(is_member(p, PartitionClass::NC));
                if (is_member(p, PartitionClass::P2)) CHECK(is_member(p, PartitionClass::P_even));
                if (is_member(p, PartitionClass::P2_star)) CHECK(is_member(p, PartitionClass::P2));
            }
}

TEST_CASE("enumeration counts") {
    for (int m = 1; m <= 4; ++m) {
        CHECK(enumerate(PartitionClass::P2, 0, 2 * m).size() == static_cast<std::size_t>(double_factorial(2 * m - 1)));
        CHECK(enumerate(PartitionClass::NC2, 0, 2 * m).size() == static_cast<std::size_t>(catalan(m)));
    }
    CHECK(enumerate(PartitionClass::P2_star, 0, 6).size() == 6);
    CHECK(enumerate(PartitionClass::P, 0, 10).size() == 115975);
}

TEST_CASE("join examples and kernel") {
    auto j = join(Partition::parse("|aabb"), Partition::parse("|abba"));
    CHECK(j.block_count == 1);
    CHECK(j.partition == Partition::parse("|aaaa"));
    CHECK(join(Partition::parse("|abab"), Partition::parse("|aabb")).block_count == 1);
    const auto p = Partition::parse("ab|cab");
    CHECK(join(p, p).partition == p);
    CHECK_THROWS_AS(join(Partition::parse("|aa"), Partition::parse("a|a")), FrameError);

    CHECK(kernel({1, 2, 2, 1}) == Partition::parse("abba|"));
    CHECK(kernel({5, 5, 5}).block_count() == 1);
    CHECK(kernel({1, 2, 3}).block_count() == 3);
    CHECK(is_constant_on_blocks(Partition::parse("|aabb"), {7, 7, 2, 2}));
    CHECK_FALSE(is_constant_on_blocks(Partition::parse("|aabb"), {1, 2, 2, 1}));
    CHECK(is_constant_on_blocks(Partition::parse("|abab"), {3, 3, 3, 3}));
    CHECK_THROWS_AS(is_constant_on_blocks(Partition::parse("|aabb"), {1, 2}), FrameError);
}

TEST_CASE("join is a semilattice operation") {
    std::mt19937 rng(11);
    for (int trial = 0; trial < 1000; ++trial) {
        const int k = rng() % 4, l = rng() % 5;
        auto p = test::random_partition(rng, k, l);
        auto q = test::random_partition(rng, k, l);
        auto r = test::random_partition(rng, k, l);
        const auto pq = join(p, q);
        CHECK(pq.partition == join(q, p).partition);
        CHECK(join(pq.partition, r).partition == join(p, join(q, r).partition).partition);
        CHECK(join(p, p).partition == p);
        CHECK(pq.block_count <= std::min(p.block_count(), q.block_count()));
        CHECK(pq.block_count == pq.partition.block_count());
    }
}

TEST_CASE("standard form examples") {
    const auto nc = Partition::parse("ab|ba");
    CHECK_FALSE(is_noncrossing(nc));
    const auto semis = Partition::parse("aab|bcc");
    CHECK(standard_form(semis).partition == semis);
    CHECK(standard_form(semis).switch_count == 0);

    const auto cross = standard_form(Partition::parse("|abab"));
    CHECK(cross.switch_count % 2 == 1);
    CHECK(is_noncrossing(cross.partition));

    // Block 1 moves left with two switches, block 3 with one.
    const auto pictured = standard_form(Partition::parse("abba|bcbc"));
    CHECK(pictured.switch_count == 3);
    CHECK(pictured.partition == Partition::parse("aabb|bbcc"));
    CHECK_THROWS_AS(standard_form(Partition::parse("|aab")), ClassError);
}

TEST_CASE("signature examples") {
    CHECK(signature(Partition::parse("|abab")) == -1);
    CHECK(signature(Partition::parse("|aabb")) == 1);
    for (const auto& sigma : all_permutations(4))
        CHECK(signature(Partition::from_permutation(sigma)) == permutation_sign(sigma));
    CHECK_THROWS_AS(signature(Partition::parse("a|")), ClassError);
}

TEST_CASE("standard forms are noncrossing with the same block contents") {
    for (int n = 0; n <= 8; n += 2)
        for (int k = 0; k <= n; ++k)
            for (const auto& p : enumerate(PartitionClass::P_even, k, n - k)) {
                const auto sf = standard_form(p);
                CHECK(is_noncrossing(sf.partition));
                CHECK(row_profile(sf.partition) == row_profile(p));
                if (is_noncrossing(p)) CHECK(signature(p) == 1);
            }
}

TEST_CASE("signature parity is independent of the switch sequence") {
    std::mt19937 rng(2024);
    for (int trial = 0; trial < 1000; ++trial) {
        const auto p = test::random_even_partition(rng, 10);
        const int expected = signature(p);
        for (int walk = 0; walk < 10; ++walk) {
            auto q = p;
            int steps = 0;
            while (!is_noncrossing(q)) {
                q = apply_switch(q, test::biased_switch(rng, q));
                ++steps;
                REQUIRE(steps < 10000);
            }
            CHECK((steps % 2 ? -1 : 1) == expected);
        }
    }
}

TEST_CASE("pairing signature is the crossing parity") {
    CHECK(crossing_count(Partition::parse("|aabb")) == 0);
    CHECK(crossing_count(Partition::parse("|abab")) == 1);
    CHECK(crossing_count(Partition::parse("|abcabc")) == 3);
    CHECK_THROWS_AS(crossing_count(Partition::parse("|aaaa")), ClassError);
    for (int n = 0; n <= 8; n += 2)
        for (int k = 0; k <= n; ++k)
            for (const auto& p : enumerate(PartitionClass::P2, k, n - k))
                CHECK(signature(p) == (crossing_count(p) % 2 ? -1 : 1));
}

TEST_CASE("merging blocks of a noncrossing even partition keeps signature 1") {
    for (int n = 2; n <= 6; n += 2)
        for (int k = 0; k <= n; ++k)
            for (const auto& p : enumerate(PartitionClass::NC_even, k, n - k))
                for (const auto& q : enumerate(PartitionClass::P, k, n - k))
                    if (q.block_count() <= 3) CHECK(signature(join(p, q).partition) == 1);
}

TEST_CASE("signature is a homomorphism on permutations") {
    for (int k = 1; k <= 5; ++k) {
        const auto perms = all_permutations(k);
        for (const auto& a : perms) {
            const int sa = signature(Partition::from_permutation(a));
            CHECK(sa == permutation_sign(a));
            for (const auto& b : perms) {
                const int sb = signature(Partition::from_permutation(b));
                CHECK(signature(Partition::from_permutation(compose(a, b))) == sa * sb);
            }
        }
    }
}

TEST_CASE("half-commuting permutations form the parity-preserving subgroup") {
    auto count = [](int k) {
        int c = 0;
        for (const auto& s : all_permutations(k)) c += halfcommuting_membership(s);
        return c;
    };
    CHECK(count(3) == 2);
    CHECK(count(4) == 4);
    for (int k = 1; k <= 8; ++k) CHECK(halfcommuting_membership(identity_permutation(k)));
    long long fact[5] = {1, 1, 2, 6, 24};
    for (int n = 1; n <= 3; ++n) {
        CHECK(count(2 * n) == fact[n] * fact[n]);
        if (2 * n + 1 <= 6) CHECK(count(2 * n + 1) == fact[n] * fact[n + 1]);
    }
    for (int k = 1; k <= 6; ++k) {
        std::vector<Permutation> members;
        for (const auto& s : all_permutations(k))
            if (halfcommuting_membership(s)) members.push_back(s);
        for (const auto& a : members) {
            CHECK(halfcommuting_membership(inverse(a)));
            for (const auto& b : members) CHECK(halfcommuting_membership(compose(a, b)));
        }
    }
    const std::set<std::string> s3 = {"123", "321"};
    std::set<std::string> got;
    for (const auto& s : all_permutations(3))
        if (halfcommuting_membership(s)) got.insert(permutation_to_string(s));
    CHECK(got == s3);
}

TEST_CASE("permutation diagrams") {
    const auto sigma = parse_permutation("312");
    const auto p = Partition::from_permutation(sigma);
    CHECK(to_permutation(p) == sigma);
    CHECK(is_member(p, PartitionClass::Perm));
    CHECK_THROWS_AS(to_permutation(Partition::parse("|aa")), ClassError);
    CHECK_THROWS_AS(parse_permutation("113"), ParseError);
    CHECK(permutation_to_string(parse_permutation("10,9,8,7,6,5,4,3,2,1")) == "10,9,8,7,6,5,4,3,2,1");
}
