#include "oracles/brute_force.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace oracle {

namespace {

std::vector<std::vector<int>> orderings(int n) {
    std::vector<int> v(static_cast<std::size_t>(n));
    std::iota(v.begin(), v.end(), 1);
    std::vector<std::vector<int>> out;
    do out.push_back(v);
    while (std::next_permutation(v.begin(), v.end()));
    return out;
}

// The subsequence of `seq` made of entries in [lo, hi], shifted by -lo+1.
std::vector<int> restrict_to(const std::vector<int>& seq, int lo, int hi) {
    std::vector<int> out;
    for (int v : seq)
        if (v >= lo && v <= hi) out.push_back(v - lo + 1);
    return out;
}

}  // namespace

std::vector<Permutation> brute_shuffles(const Permutation& sigma, const Permutation& tau) {
    const int m = sigma.size(), n = tau.size();
    std::vector<Permutation> out;
    for (const auto& seq : orderings(m + n))
        if (restrict_to(seq, 1, m) == sigma.images() && restrict_to(seq, m + 1, m + n) == tau.images())
            out.emplace_back(seq);
    return out;
}

std::vector<MonomialClass> semantic_product(const MonomialClass& a, const MonomialClass& b) {
    const int m = a.degree(), n = b.degree();
    membrane::Word word = a.word;
    word.insert(word.end(), b.word.begin(), b.word.end());
    // a's points are 1..m, b's are m+1..m+n; x-orders are identities
    const std::vector<int> ax = Permutation::identity(m).images(), bx = Permutation::identity(n).images();
    const auto& ay = a.sigma2.images();
    const auto& by = b.sigma2.images();
    const auto all = orderings(m + n);
    std::vector<MonomialClass> out;
    for (const auto& xs : all) {
        if (restrict_to(xs, 1, m) != ax || restrict_to(xs, m + 1, m + n) != bx) continue;
        for (const auto& ys : all) {
            if (restrict_to(ys, 1, m) != ay || restrict_to(ys, m + 1, m + n) != by) continue;
            out.push_back(membrane::canonicalize(word, Permutation(xs), Permutation(ys)));
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

double theta_box(double a, double b, double c, double t, int B) {
    double s = 0;
    for (int p = -B; p <= B; ++p)
        for (int q = -B; q <= B; ++q) {
            if (p == 0 && q == 0) continue;
            s += std::exp(-std::numbers::pi * t * (a * p * p + 2 * b * p * q + c * q * q));
        }
    return s;
}

}  // namespace oracle
