#pragma once

#include <algorithm>
#include <random>
#include <vector>

#include "ncsphere/partition.hpp"

namespace test {

inline ncs::Partition random_partition(std::mt19937& rng, int k, int l) {
    const int n = k + l;
    std::vector<int> labels(n);
    for (int i = 0; i < n; ++i) labels[i] = static_cast<int>(rng() % (i + 1));
    return ncs::Partition(k, l, labels);
}

// Random partition with even blocks on at most max_legs legs.
inline ncs::Partition random_even_partition(std::mt19937& rng, int max_legs) {
    const int n = 2 * (1 + static_cast<int>(rng() % (max_legs / 2)));
    const int k = static_cast<int>(rng() % (n + 1));
    std::vector<int> legs(n);
    for (int i = 0; i < n; ++i) legs[i] = i;
    std::shuffle(legs.begin(), legs.end(), rng);
    std::vector<int> labels(n);
    int pos = 0, block = 0;
    while (pos < n) {
        int size = 2 * (1 + static_cast<int>(rng() % 2));
        size = std::min(size, n - pos);
        for (int i = 0; i < size; ++i) labels[legs[pos + i]] = block;
        pos += size;
        ++block;
    }
    return ncs::Partition(k, n - k, labels);
}

// A legal switch, usually one that brings the partition closer to its
// standard form.
inline int biased_switch(std::mt19937& rng, const ncs::Partition& p) {
    const auto moves = ncs::legal_switches(p);
    if (rng() % 10 < 3) return moves[rng() % moves.size()];
    int best = moves.front();
    int best_count = 1 << 30;
    for (int m : moves) {
        const int c = ncs::standard_form(ncs::apply_switch(p, m)).switch_count;
        if (c < best_count) {
            best_count = c;
            best = m;
        }
    }
    return best;
}

}  // namespace test
