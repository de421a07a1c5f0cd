#include "membrane/perms.hpp"

#include <algorithm>
#include <numeric>

#include <json.hpp>

#include "membrane/errors.hpp"

namespace membrane {

Permutation::Permutation(std::vector<int> images) : images_(std::move(images)) {
    const int n = size();
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    for (int v : images_) {
        if (v < 1 || v > n || seen[static_cast<std::size_t>(v - 1)])
            throw InvalidInput("not a permutation of {1.." + std::to_string(n) + "}: " + str());
        seen[static_cast<std::size_t>(v - 1)] = true;
    }
}

Permutation Permutation::identity(int n) {
    if (n < 0) throw InvalidInput("negative permutation size");
    std::vector<int> im(static_cast<std::size_t>(n));
    std::iota(im.begin(), im.end(), 1);
    return Permutation(std::move(im));
}

Permutation Permutation::parse(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception&) {
        throw InvalidInput("cannot parse permutation '" + text + "'");
    }
    if (!j.is_array()) throw InvalidInput("permutation must be a JSON array: '" + text + "'");
    std::vector<int> im;
    for (const auto& v : j) {
        if (!v.is_number_integer()) throw InvalidInput("permutation entries must be integers");
        im.push_back(v.get<int>());
    }
    return Permutation(std::move(im));
}

bool Permutation::is_identity() const {
    for (int k = 0; k < size(); ++k)
        if (images_[static_cast<std::size_t>(k)] != k + 1) return false;
    return true;
}

Permutation Permutation::inverse() const {
    std::vector<int> inv(images_.size());
    for (int k = 1; k <= size(); ++k) inv[static_cast<std::size_t>((*this)(k) - 1)] = k;
    return Permutation(std::move(inv));
}

std::string Permutation::str() const {
    std::string s = "[";
    for (std::size_t k = 0; k < images_.size(); ++k) {
        if (k) s += ',';
        s += std::to_string(images_[k]);
    }
    return s + "]";
}

Permutation compose(const Permutation& a, const Permutation& b) {
    if (a.size() != b.size()) throw InvalidInput("compose: size mismatch");
    std::vector<int> im(static_cast<std::size_t>(a.size()));
    for (int k = 1; k <= a.size(); ++k) im[static_cast<std::size_t>(k - 1)] = a(b(k));
    return Permutation(std::move(im));
}

std::vector<Permutation> all_permutations(int n) {
    std::vector<int> im(static_cast<std::size_t>(std::max(n, 0)));
    std::iota(im.begin(), im.end(), 1);
    std::vector<Permutation> out;
    do {
        out.emplace_back(im);
    } while (std::next_permutation(im.begin(), im.end()));
    return out;
}

namespace {

void check_ground_sets(const Permutation& sigma, GroundSet s, const Permutation& tau, GroundSet t) {
    if (s.n != sigma.size() || t.n != tau.size())
        throw InvalidInput("ground set size does not match permutation size");
    if (s.offset != 0 || t.offset != s.n)
        throw InvalidInput("ground sets must be {1..m} and {m+1..m+n}");
}

// Interleaves a and b (already carrying their final labels) in every way,
// appending each result to prefix.
void interleave(const std::vector<int>& a, std::size_t ia, const std::vector<int>& b,
                std::size_t ib, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
    if (ia == a.size() && ib == b.size()) {
        out.push_back(cur);
        return;
    }
    if (ia < a.size()) {
        cur.push_back(a[ia]);
        interleave(a, ia + 1, b, ib, cur, out);
        cur.pop_back();
    }
    if (ib < b.size()) {
        cur.push_back(b[ib]);
        interleave(a, ia, b, ib + 1, cur, out);
        cur.pop_back();
    }
}

std::vector<std::vector<int>> interleavings(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    cur.reserve(a.size() + b.size());
    interleave(a, 0, b, 0, cur, out);
    return out;
}

std::vector<int> shifted(const Permutation& p, int by, int from = 0, int to = -1) {
    if (to < 0) to = p.size();
    std::vector<int> v;
    for (int k = from; k < to; ++k) v.push_back(p.images()[static_cast<std::size_t>(k)] + by);
    return v;
}

std::vector<Permutation> finish(std::vector<std::vector<int>> seqs) {
    std::sort(seqs.begin(), seqs.end());
    seqs.erase(std::unique(seqs.begin(), seqs.end()), seqs.end());
    std::vector<Permutation> out;
    out.reserve(seqs.size());
    for (auto& s : seqs) out.emplace_back(std::move(s));
    return out;
}

}  // namespace

std::vector<Permutation> shuffles(const Permutation& sigma, const Permutation& tau) {
    return finish(interleavings(shifted(sigma, 0), shifted(tau, sigma.size())));
}

std::vector<Permutation> shuffles(const Permutation& sigma, GroundSet sigma_set,
                                  const Permutation& tau, GroundSet tau_set) {
    check_ground_sets(sigma, sigma_set, tau, tau_set);
    return shuffles(sigma, tau);
}

bool is_shuffle(const Permutation& rho, const Permutation& sigma, const Permutation& tau) {
    const int m = sigma.size();
    if (rho.size() != m + tau.size()) return false;
    std::vector<int> first, second;
    for (int v : rho.images()) (v <= m ? first : second).push_back(v);
    return first == shifted(sigma, 0) && second == shifted(tau, m);
}

bool is_shuffle(const Permutation& rho, const Permutation& sigma, GroundSet sigma_set,
                const Permutation& tau, GroundSet tau_set) {
    check_ground_sets(sigma, sigma_set, tau, tau_set);
    return is_shuffle(rho, sigma, tau);
}

Permutation concat_perm(const Permutation& sigma, const Permutation& tau) {
    std::vector<int> im = shifted(sigma, 0);
    for (int v : shifted(tau, sigma.size())) im.push_back(v);
    return Permutation(std::move(im));
}

std::vector<Permutation> restricted_shuffles(const Permutation& sigma, const Permutation& tau,
                                             int i, int j) {
    const int m = sigma.size(), n = tau.size();
    if (i < 0 || i > m || j < 0 || j > n)
        throw InvalidInput("restricted_shuffles: cut (" + std::to_string(i) + "," +
                           std::to_string(j) + ") out of range");
    auto left = interleavings(shifted(sigma, 0, 0, i), shifted(tau, m, 0, j));
    auto right = interleavings(shifted(sigma, 0, i, m), shifted(tau, m, j, n));
    std::vector<std::vector<int>> seqs;
    seqs.reserve(left.size() * right.size());
    for (const auto& l : left)
        for (const auto& r : right) {
            auto s = l;
            s.insert(s.end(), r.begin(), r.end());
            seqs.push_back(std::move(s));
        }
    return finish(std::move(seqs));
}

std::vector<Permutation> triple_shuffles(const Permutation& sigma, const Permutation& tau,
                                         const Permutation& zeta) {
    std::vector<std::vector<int>> seqs;
    for (const auto& st : shuffles(sigma, tau))
        for (const auto& r : shuffles(st, zeta)) seqs.push_back(r.images());
    return finish(std::move(seqs));
}

unsigned long long binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    unsigned long long r = 1;
    for (int i = 1; i <= k; ++i) r = r * static_cast<unsigned long long>(n - k + i) / i;
    return r;
}

}  // namespace membrane
