#pragma once

#include <array>
#include <compare>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ncsphere/partition.hpp"
#include "ncsphere/spec.hpp"

namespace ncs {

// A letter of an abstract monomial: a variable standing for a coordinate
// index, possibly conjugated. When a sign is attached to a word, distinct
// variables stand for distinct indices.
struct Letter {
    int var = 0;
    bool star = false;
    auto operator<=>(const Letter&) const = default;
};
using Word = std::vector<Letter>;

// "ab*ca" -> variables numbered by first appearance.
Word parse_word(std::string_view s);
std::string word_to_string(const Word& w);
// Canonical block label of each position (positions with equal variables
// share a block).
std::vector<int> word_kernel(const Word& w);
// v = u permuted: v[p] = u[sigma[p]], stable on repeated letters. Nullopt when
// v is not a rearrangement of u.
std::optional<Permutation> matching_permutation(const Word& u, const Word& v);

// Sign of x_{i_1}...x_{i_k} -> x_{i_sigma(1)}...x_{i_sigma(k)} over the
// twisted sphere: parity of the inversions of sigma between positions in
// different kernel blocks. Always +1 when untwisted.
int relation_sign(const Permutation& sigma, const std::vector<int>& kernel, bool twisted);
int relation_sign(const Permutation& sigma, const std::vector<int>& kernel, const SphereSpec& s);
// Forced sign of u = +-v, with distinct variables taken as distinct indices.
int word_sign(const Word& u, const Word& v, bool twisted);

// lhs word (variables from kernel, exponents from exps) equals sign times the
// word rearranged by sigma. Unrestricted schemas hold on every coarsening of
// the kernel too, with their own forced signs.
struct RelationSchema {
    Permutation sigma;
    std::vector<int> kernel;
    ColorWord exps;  // empty for real systems
    bool restricted = false;
    int sign = 1;

    Word lhs() const;
    Word rhs() const;
    bool operator==(const RelationSchema&) const = default;
};

enum class SignRule {
    plain,       // untwisted
    distinct,    // twisted spheres: distinct coordinates anticommute
    row_column,  // twisted classical groups: same row or column
    span,        // twisted half-liberated groups: span table
};

struct RelationSystem {
    Field field = Field::real;
    SignRule sign_rule = SignRule::plain;
    bool quadratic = true;
    bool selfadjoint = true;
    bool group = false;  // generators u_ij instead of z_i
    std::vector<RelationSchema> schemas;

    bool twisted() const { return sign_rule != SignRule::plain; }
};

// Literal "abc=+cab", "ab*=-b*a", optional kernel suffix "[a≠b≠c]" (or
// "[a!=b!=c]") restricting the schema to that kernel. The sign must be the
// forced one for the regime.
RelationSchema parse_relation(std::string_view literal, const Regime& r);
std::string to_string(const RelationSchema& s);
// One line per schema, with the sign rule spelled out for group systems.
std::vector<std::string> describe(const RelationSystem& sys);

RelationSystem sphere_relations(const SphereSpec& s);
RelationSystem group_relations(const GroupSpec& g);
// x_1...x_k = +-x_sigma(1)...x_sigma(k) for every sigma in E, all kernels.
RelationSystem monomial_system(const std::vector<Permutation>& E, const Regime& r);

// Sign of the group relation for concrete generators u_{rows[p] cols[p]}.
int group_relation_sign(const RelationSystem& sys, const Permutation& sigma, const IndexTuple& rows,
                        const IndexTuple& cols);

using SignTable = std::array<std::array<int, 3>, 3>;  // [rows-1][cols-1]
SignTable span_sign_table();
// Counit (diagonal +), antipode (symmetry) and comultiplication (product
// of the two middle signs, brute force over all spans at N=3).
bool comult_sign_check(const GroupSpec& g, const SignTable& table = span_sign_table());

struct Bounds {
    int max_degree = 6;
    int max_indices = 4;
};

struct TraceStep {
    int id = 0;
    std::string fact;
    std::string rule;
    std::vector<int> premises;
};

struct Explanation {
    std::vector<TraceStep> steps;
    std::vector<int> roots;  // step proving each requested fact
};

// Closure of a relation system over words of bounded degree in a bounded
// number of variables. Facts are equalities of words up to their forced sign;
// they are closed under renaming variables, conjugating one variable,
// the involution, merging variables, multiplication by a letter, contraction
// of an adjacent summed conjugate pair (quadratic relation), transitivity and
// positivity (X*X = 0 implies X = 0 for X a difference of two words).
class Saturation {
public:
    Saturation(const RelationSystem& sys, Bounds bounds = {},
               const std::vector<std::pair<Word, Word>>& goals = {});

    const Bounds& bounds() const;
    // A multiplication was skipped at the degree bound.
    bool truncated() const;
    // All goals were reached before the fixed point.
    bool stopped_early() const;
    std::size_t fact_count() const;

    bool equivalent(const Word& u, const Word& v) const;
    Word representative(const Word& w) const;
    // Word obtained by summing var over an adjacent conjugate pair, from some
    // word of w's class.
    std::optional<Word> contraction(const Word& w, int var) const;
    // The word of w's class that contraction(w, var) sums.
    std::optional<Word> contraction_source(const Word& w, int var) const;
    // Relations rep = +-w, degree at most max_degree, for the classes whose
    // representative has its variables in order.
    std::vector<RelationSchema> derived(int max_degree) const;
    Explanation explain(const std::vector<std::pair<Word, Word>>& facts) const;

    struct Impl;

private:
    std::shared_ptr<Impl> impl_;
};

std::vector<RelationSchema> saturate(const RelationSystem& sys, Bounds bounds = {}, int report_degree = 3);

struct Term {
    long long coeff = 0;
    Word word;
    bool operator==(const Term&) const = default;
};

// Integer combination of words; terms sorted by degree, variables, exponents.
struct NCCombination {
    std::vector<Term> terms;
    std::vector<int> summed;  // variables summed over 1..N

    bool is_zero() const { return terms.empty(); }
    bool operator==(const NCCombination&) const = default;
};

// "(ab-ba)^2", "2ab*+ba*", "1-aa*"; letters numbered by first appearance.
NCCombination parse_combination(std::string_view s);
std::string to_string(const NCCombination& e);
NCCombination normalize(NCCombination e);

struct Reduction {
    NCCombination result;
    bool truncated = false;
    Explanation trace;
};

Reduction reduce(const NCCombination& e, const RelationSystem& sys, Bounds bounds = {});

struct Classification {
    std::optional<SphereSpec> sphere;  // nullopt: undetermined within bounds
    bool truncated = false;
    Explanation certificate;
};

// Checks, from the closure of E, the classical, half-liberated and free
// levels in turn, certifying both inclusions.
Classification classify_monomial_sphere(const std::vector<Permutation>& E, const Regime& r,
                                        Bounds bounds = {});

struct RelationGroup {
    std::vector<Permutation> elements;
    bool closed = false;
    bool truncated = false;
};

// Permutations of S_k whose monomial relation follows from sys. Bounds are
// raised to at least k.
RelationGroup relation_group(const RelationSystem& sys, int k, Bounds bounds = {});

}  // namespace ncs
