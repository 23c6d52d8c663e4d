#pragma once

#include <gmpxx.h>

#include <vector>

#include "ncsphere/exact_matrix.hpp"
#include "ncsphere/partition.hpp"
#include "ncsphere/spec.hpp"

namespace ncs {

// Uncolored word of length k, used for the real groups.
ColorWord real_word(int k);

// Pairings on k lower legs spanning the Hom-space of the group; complex
// groups color the legs by alpha. Twisting changes only the Kronecker signs.
std::vector<Partition> category_pairings(const GroupSpec& g, const ColorWord& alpha);

ExactMatrix gram(const GroupSpec& g, const ColorWord& alpha, int N);
// Throws SingularError when the Gram matrix is not invertible.
ExactMatrix weingarten_matrix(const GroupSpec& g, const ColorWord& alpha, int N);

// Pairings and Weingarten matrix computed once, for repeated integrals.
class WeingartenTable {
public:
    WeingartenTable(const GroupSpec& g, const ColorWord& alpha, int N);

    const std::vector<Partition>& pairings() const { return pairings_; }
    const ExactMatrix& gram() const { return gram_; }
    const ExactMatrix& weingarten() const { return w_; }

    // delta_pi(t) for every pairing pi, twisted iff the group is.
    std::vector<int> deltas(const IndexTuple& t) const;
    // Integral of u_{i1 j1}^{a1} ... u_{ik jk}^{ak} over the group.
    mpq_class moment(const IndexTuple& i, const IndexTuple& j) const;

private:
    GroupSpec g_;
    ColorWord alpha_;
    int n_;
    std::vector<Partition> pairings_;
    ExactMatrix gram_;
    ExactMatrix w_;
};

mpq_class moment(const GroupSpec& g, int N, const IndexTuple& i, const IndexTuple& j,
                 const ColorWord& alpha);
// tr(z_{i1}^{a1} ... z_{ik}^{ak}) through the model z_i -> u_{1i}.
mpq_class sphere_trace(const SphereSpec& s, int N, const IndexTuple& i, const ColorWord& alpha);

// Rank of the Gram matrix of the N^2 degree-two products z_i z_j
// (conjugated: z_i z_j^*) under the sphere trace.
int gram_rank_products(const SphereSpec& s, int N, bool conjugated = true);

}  // namespace ncs
