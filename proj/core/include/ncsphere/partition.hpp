#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ncs {

enum class LegColor : std::uint8_t { uncolored, white, black };

using ColorWord = std::vector<LegColor>;
using Permutation = std::vector<int>;  // one-line notation, 0-based
using IndexTuple = std::vector<int>;

enum class PartitionClass { P, P_even, P2, NC, NC_even, NC2, P2_star, Perm };

// Two-row set partition. Legs are addressed positionally: upper row legs
// 0..k-1 left to right, then lower row legs k..k+l-1 left to right.
// Block labels are canonical: numbered by first appearance in the clockwise
// order (upper row left to right, then lower row right to left).
class Partition {
public:
    Partition() = default;
    Partition(int upper, int lower, std::vector<int> labels, ColorWord colors = {});

    // "ab|ba", "|abab:oo**"; colors cover upper then lower legs.
    static Partition parse(std::string_view literal);
    static Partition from_blocks(int upper, int lower, const std::vector<std::vector<int>>& blocks,
                                 ColorWord colors = {});
    // Lower leg p joined to upper leg sigma(p).
    static Partition from_permutation(const Permutation& sigma);

    int upper() const { return k_; }
    int lower() const { return l_; }
    int legs() const { return k_ + l_; }
    int block_count() const { return blocks_; }
    int label(int leg) const { return labels_[leg]; }
    const std::vector<int>& labels() const { return labels_; }
    const ColorWord& colors() const { return colors_; }
    LegColor color(int leg) const { return colors_[leg]; }
    bool colored() const;
    bool is_upper(int leg) const { return leg < k_; }

    // Position of a leg in the clockwise linear order, and its inverse.
    int clockwise_position(int leg) const { return leg < k_ ? leg : k_ + (k_ + l_ - 1 - leg); }
    int leg_at(int position) const {
        return position < k_ ? position : k_ + (k_ + l_ - 1 - position);
    }

    std::vector<std::vector<int>> blocks() const;
    std::vector<int> block_sizes() const;
    std::string to_string() const;

    bool operator==(const Partition&) const = default;
    auto operator<=>(const Partition&) const = default;

private:
    int k_ = 0;
    int l_ = 0;
    int blocks_ = 0;
    std::vector<int> labels_;
    ColorWord colors_;
};

struct JoinResult {
    Partition partition;
    int block_count;
};

struct StandardForm {
    Partition partition;
    int switch_count;
};

inline constexpr int default_max_legs = 12;

std::string to_string(PartitionClass c);
PartitionClass parse_partition_class(std::string_view name);
ColorWord parse_colors(std::string_view word);
std::string colors_to_string(const ColorWord& colors);
Permutation parse_permutation(std::string_view word);
std::string permutation_to_string(const Permutation& sigma);
bool is_permutation(const Permutation& sigma);

std::vector<Partition> enumerate(PartitionClass c, const ColorWord& upper_colors,
                                 const ColorWord& lower_colors, int max_legs = default_max_legs);
std::vector<Partition> enumerate(PartitionClass c, int upper, int lower,
                                 int max_legs = default_max_legs);

bool is_noncrossing(const Partition& p);
bool is_member(const Partition& p, PartitionClass c);
// Colored through-strings join equal colors, same-row strings opposite colors.
bool colors_compatible(const Partition& p);

JoinResult join(const Partition& p, const Partition& q);
Partition kernel(const IndexTuple& t);
Partition kernel(const IndexTuple& t, int upper, int lower);
bool is_constant_on_blocks(const Partition& p, const IndexTuple& t);

StandardForm standard_form(const Partition& t);
int signature(const Partition& t);
int crossing_count(const Partition& p);

// Adjacent legs of one row lying in different blocks; switches exchange them.
std::vector<int> legal_switches(const Partition& p);
Partition apply_switch(const Partition& p, int leg);

bool halfcommuting_membership(const Permutation& sigma);

// Through-pairing as a permutation; class error unless p is in Perm.
Permutation to_permutation(const Partition& p);
// (compose(a, b))(x) = a(b(x))
Permutation compose(const Permutation& a, const Permutation& b);
Permutation inverse(const Permutation& sigma);
Permutation identity_permutation(int k);
int permutation_sign(const Permutation& sigma);
std::vector<Permutation> all_permutations(int k);

}  // namespace ncs
