// =========================
// source_model.hpp
//
// Finite joint distributions of (S1, S2, S3), exact Shannon entropies in
// bits, and seeded random instance generation. Entropies come from subset
// marginalizations of the joint tensor, so chain identities hold exactly.
// =========================
#pragma once

#include <array>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "trinet/capacity.hpp"

namespace trinet {

// -------------------------
// Seeded deterministic RNG (splittable)
// -------------------------

struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// uniform in (0,1), strictly inside
    double next_unit() { return (double(next() >> 11) + 0.5) * 0x1.0p-53; }

    /// independent child stream; deterministic function of (state, stream)
    SplitMix64 fork(std::uint64_t stream) const {
        SplitMix64 child(state ^ (0x9e3779b97f4a7c15ULL * (stream + 1)));
        child.next();
        return child;
    }
};

// -------------------------
// Joint pmf
// -------------------------

using VarSet = unsigned; // bit i-1 set when S_i belongs to the subset

inline VarSet var_set(std::initializer_list<int> vars) {
    VarSet m = 0;
    for (int v : vars) {
        if (v < 1 || v > 3) throw std::invalid_argument("var_set: variable index must be 1..3");
        m |= 1u << (v - 1);
    }
    return m;
}

struct JointPmf {
    std::array<int, 3> sizes{1, 1, 1};
    std::vector<double> p; // s1-major: index = (s1*n2 + s2)*n3 + s3

    static constexpr int kMaxAlphabet = 8;

    JointPmf() : p(1, 1.0) {}
    JointPmf(int n1, int n2, int n3, std::vector<double> probs) : sizes{n1, n2, n3}, p(std::move(probs)) {
        validate();
    }

    void validate() const {
        for (int n : sizes)
            if (n < 1 || n > kMaxAlphabet)
                throw std::domain_error("JointPmf: alphabet sizes must be in 1..8");
        if (p.size() != std::size_t(sizes[0]) * sizes[1] * sizes[2])
            throw std::domain_error("JointPmf: tensor size mismatch");
        double sum = 0.0;
        for (double v : p) {
            if (!(v >= 0.0)) throw std::domain_error("JointPmf: negative entry");
            sum += v;
        }
        if (std::abs(sum - 1.0) > 1e-12) throw std::domain_error("JointPmf: entries must sum to 1");
    }

    double at(int s1, int s2, int s3) const {
        return p[std::size_t(s1 * sizes[1] + s2) * sizes[2] + s3];
    }

    /// Exact joint entropy H(subset) in bits; 0 log 0 = 0.
    double subset_entropy(VarSet vars) const {
        if (vars == 0) return 0.0;
        int stride[3] = {1, 1, 1};
        int dim = 1;
        for (int i = 0; i < 3; ++i)
            if (vars & (1u << i)) {
                stride[i] = dim;
                dim *= sizes[i];
            }
        std::vector<double> marg(dim, 0.0);
        std::size_t idx = 0;
        for (int s1 = 0; s1 < sizes[0]; ++s1)
            for (int s2 = 0; s2 < sizes[1]; ++s2)
                for (int s3 = 0; s3 < sizes[2]; ++s3, ++idx) {
                    int cell = 0;
                    if (vars & 1u) cell += stride[0] * s1;
                    if (vars & 2u) cell += stride[1] * s2;
                    if (vars & 4u) cell += stride[2] * s3;
                    marg[cell] += p[idx];
                }
        double h = 0.0;
        for (double q : marg)
            if (q > 0.0) h -= q * std::log2(q);
        return h;
    }
};

/// Exact H(target | given) in bits. target and given must be disjoint,
/// target nonempty.
inline double cond_entropy(const JointPmf& pmf, VarSet target, VarSet given) {
    if (target == 0) throw std::invalid_argument("cond_entropy: empty target");
    if (target & given) throw std::invalid_argument("cond_entropy: target and given must be disjoint");
    return pmf.subset_entropy(target | given) - pmf.subset_entropy(given);
}

// -------------------------
// Entropy bundle
// -------------------------

/// All subset entropies of (S1,S2,S3); every conditional entropy used by the
/// side-information and conference formulas derives from these seven numbers,
/// which makes the chain identities hold by construction. Values may also be
/// injected directly (realizability is then the caller's concern).
struct EntropyBundle {
    // indexed by VarSet (1..7); slot 0 unused (= 0)
    std::array<double, 8> joint{};

    double joint_entropy(VarSet vars) const { return joint[vars & 7u]; }

    /// H(S_i | S_vars), vars not containing i
    double cond(int i, VarSet given) const {
        VarSet ti = 1u << (i - 1);
        if (ti & given) throw std::invalid_argument("EntropyBundle::cond: i conditioned on itself");
        return joint[(ti | given) & 7u] - joint[given & 7u];
    }

    /// H(S_j, S_k | S_i) with {j,k} the complement of {i}
    double pair_given(int i) const {
        VarSet ti = 1u << (i - 1);
        return joint[7u] - joint[ti];
    }

    static EntropyBundle from_joint_entropies(double h1, double h2, double h3, double h12,
                                              double h13, double h23, double h123) {
        EntropyBundle b;
        b.joint = {0.0, h1, h2, h12, h3, h13, h23, h123};
        for (int m = 1; m < 8; ++m)
            if (!(b.joint[m] >= 0.0))
                throw std::domain_error("EntropyBundle: joint entropies must be nonnegative");
        return b;
    }
};

inline EntropyBundle bundle(const JointPmf& pmf) {
    EntropyBundle b;
    for (VarSet m = 1; m < 8; ++m) b.joint[m] = pmf.subset_entropy(m);
    return b;
}

// -------------------------
// Random instances
// -------------------------

/// Symmetric-Dirichlet(1) joint pmf: normalized Exp(1) weights from a seeded
/// splittable generator. Deterministic in the seed; entries strictly positive.
inline JointPmf random_pmf(std::uint64_t seed, int n1, int n2, int n3) {
    SplitMix64 rng = SplitMix64(seed).fork(0x706d66); // pmf stream tag
    std::size_t n = std::size_t(n1) * n2 * n3;
    std::vector<double> w(n);
    double sum = 0.0;
    for (auto& v : w) {
        v = -std::log(rng.next_unit());
        sum += v;
    }
    for (auto& v : w) v /= sum;
    return JointPmf(n1, n2, n3, std::move(w));
}

// -------------------------
// Text format: header "n1 n2 n3", then n1*n2*n3 probabilities, s1-major
// -------------------------

inline JointPmf read_pmf(std::istream& in) {
    int n1, n2, n3;
    if (!(in >> n1 >> n2 >> n3)) throw std::runtime_error("pmf: malformed header");
    if (n1 < 1 || n2 < 1 || n3 < 1 || n1 > JointPmf::kMaxAlphabet || n2 > JointPmf::kMaxAlphabet ||
        n3 > JointPmf::kMaxAlphabet)
        throw std::runtime_error("pmf: alphabet sizes out of range");
    std::vector<double> probs(std::size_t(n1) * n2 * n3);
    for (auto& v : probs)
        if (!(in >> v)) throw std::runtime_error("pmf: truncated probability list");
    return JointPmf(n1, n2, n3, std::move(probs));
}

inline void write_pmf(std::ostream& out, const JointPmf& pmf) {
    out << pmf.sizes[0] << ' ' << pmf.sizes[1] << ' ' << pmf.sizes[2] << '\n';
    char buf[32];
    for (std::size_t i = 0; i < pmf.p.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", pmf.p[i]);
        out << buf << (((i + 1) % std::size_t(pmf.sizes[2]) == 0) ? '\n' : ' ');
    }
}

} // namespace trinet
