#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <sstream>

#include "trinet/source_model.hpp"

using namespace trinet;

namespace {

// Independent marginalization oracle: H(target | given) computed from the
// conditional decomposition sum_g p(g) H(target | G = g), never through
// joint-entropy differences.
double cond_entropy_oracle(const JointPmf& pmf, VarSet target, VarSet given) {
    auto key = [&](int s1, int s2, int s3, VarSet vars) {
        int k = 0;
        if (vars & 1u) k = k * 9 + s1 + 1;
        if (vars & 2u) k = k * 9 + s2 + 1;
        if (vars & 4u) k = k * 9 + s3 + 1;
        return k;
    };
    std::map<int, double> pg;                     // p(given)
    std::map<std::pair<int, int>, double> ptg;    // p(target, given)
    for (int s1 = 0; s1 < pmf.sizes[0]; ++s1)
        for (int s2 = 0; s2 < pmf.sizes[1]; ++s2)
            for (int s3 = 0; s3 < pmf.sizes[2]; ++s3) {
                double v = pmf.at(s1, s2, s3);
                pg[key(s1, s2, s3, given)] += v;
                ptg[{key(s1, s2, s3, given), key(s1, s2, s3, target)}] += v;
            }
    double h = 0.0;
    for (const auto& [k, joint] : ptg) {
        if (joint <= 0.0) continue;
        double cond = joint / pg.at(k.first);
        h -= joint * std::log2(cond);
    }
    return h;
}

JointPmf uniform_independent_bits() {
    return JointPmf(2, 2, 2, std::vector<double>(8, 0.125));
}

JointPmf all_equal_bits() {
    std::vector<double> p(8, 0.0);
    p[0] = 0.5; // (0,0,0)
    p[7] = 0.5; // (1,1,1)
    return JointPmf(2, 2, 2, p);
}

} // namespace

TEST_CASE("conditional entropy basics") {
    JointPmf ind = uniform_independent_bits();
    CHECK(cond_entropy(ind, var_set({1}), var_set({2})) == Catch::Approx(1.0).margin(1e-12));

    JointPmf eq = all_equal_bits();
    CHECK(cond_entropy(eq, var_set({1}), var_set({2})) == Catch::Approx(0.0).margin(1e-12));

    // doubly symmetric binary pair with flip probability 0.1 (S3 independent)
    std::vector<double> p(8);
    for (int s1 = 0; s1 < 2; ++s1)
        for (int s2 = 0; s2 < 2; ++s2)
            for (int s3 = 0; s3 < 2; ++s3)
                p[(s1 * 2 + s2) * 2 + s3] = (s1 == s2 ? 0.45 : 0.05) * 0.5;
    JointPmf dsbs(2, 2, 2, p);
    CHECK(cond_entropy(dsbs, var_set({1}), var_set({2})) ==
          Catch::Approx(0.4689955935892812).margin(1e-12));

    CHECK_THROWS_AS(cond_entropy(ind, var_set({1}), var_set({1, 2})), std::invalid_argument);
    CHECK_THROWS_AS(cond_entropy(ind, 0u, var_set({2})), std::invalid_argument);
}

TEST_CASE("entropy bundle from pmfs") {
    EntropyBundle ind = bundle(uniform_independent_bits());
    for (int i = 1; i <= 3; ++i) {
        int j = i == 1 ? 2 : 1, k = i == 3 ? 2 : 3;
        CHECK(ind.cond(i, var_set({j})) == Catch::Approx(1.0).margin(1e-12));
        CHECK(ind.cond(i, var_set({j, k})) == Catch::Approx(1.0).margin(1e-12));
        CHECK(ind.pair_given(i) == Catch::Approx(2.0).margin(1e-12));
    }
    EntropyBundle eq = bundle(all_equal_bits());
    for (int i = 1; i <= 3; ++i) {
        int j = i == 1 ? 2 : 1;
        CHECK(eq.cond(i, var_set({j})) == Catch::Approx(0.0).margin(1e-12));
        CHECK(eq.pair_given(i) == Catch::Approx(0.0).margin(1e-12));
    }
}

TEST_CASE("cond_entropy agrees with the marginalization oracle") {
    for (std::uint64_t seed = 1; seed <= 60; ++seed) {
        JointPmf pmf = random_pmf(seed, 1 + int(seed % 4), 2 + int(seed % 3), 2 + int(seed % 5));
        const VarSet subsets[] = {var_set({1}), var_set({2}), var_set({3}),
                                  var_set({1, 2}), var_set({1, 3}), var_set({2, 3})};
        for (VarSet t : {var_set({1}), var_set({2}), var_set({3})})
            for (VarSet g : subsets) {
                if (t & g) continue;
                CHECK(cond_entropy(pmf, t, g) ==
                      Catch::Approx(cond_entropy_oracle(pmf, t, g)).margin(1e-12));
            }
    }
}

TEST_CASE("chain rule and conditioning-reduces-entropy") {
    for (std::uint64_t seed = 100; seed < 140; ++seed) {
        JointPmf pmf = random_pmf(seed, 3, 2, 4);
        EntropyBundle b = bundle(pmf);
        for (int i = 1; i <= 3; ++i) {
            int j = i == 1 ? 2 : 1, k = i == 3 ? 2 : 3;
            // H(Sj,Sk|Si) = H(Sj|Si) + H(Sk|Si,Sj)
            double lhs = b.pair_given(i);
            double rhs = b.cond(j, var_set({i})) + b.cond(k, var_set({i, j}));
            CHECK(lhs == Catch::Approx(rhs).margin(1e-9));
            // conditioning reduces entropy
            CHECK(b.cond(i, var_set({j, k})) <= b.cond(i, var_set({j})) + 1e-12);
            // exact joint decomposition H(Si|Sj,Sk) + H(Sj,Sk) = H(S1,S2,S3)
            CHECK(b.cond(i, var_set({j, k})) + b.joint_entropy(var_set({j, k})) ==
                  Catch::Approx(b.joint_entropy(7u)).margin(1e-9));
        }
    }
}

TEST_CASE("random pmf determinism and validity") {
    JointPmf a = random_pmf(42, 2, 2, 2);
    JointPmf b = random_pmf(42, 2, 2, 2);
    CHECK(a.p == b.p);
    JointPmf c = random_pmf(43, 2, 2, 2);
    CHECK(a.p != c.p);
    for (double v : a.p) CHECK(v > 0.0);
    a.validate();

    // sampled entropies stay strictly inside (0,1) for binary alphabets
    double mean = 0.0;
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        JointPmf p = random_pmf(seed, 2, 2, 2);
        double h = cond_entropy(p, var_set({1}), var_set({2}));
        CHECK(h > 0.0);
        CHECK(h < 1.0);
        mean += h;
    }
    mean /= 1000;
    CHECK(mean > 0.0);
    CHECK(mean < 1.0);
}

TEST_CASE("splittable generator streams are independent and stable") {
    SplitMix64 root(7);
    CHECK(root.fork(0).next() == SplitMix64(7).fork(0).next());
    CHECK(root.fork(0).next() != root.fork(1).next());
    double u = SplitMix64(1).next_unit();
    CHECK(u > 0.0);
    CHECK(u < 1.0);
}

TEST_CASE("pmf text format round trip") {
    JointPmf p = random_pmf(5, 3, 2, 4);
    std::stringstream ss;
    write_pmf(ss, p);
    JointPmf q = read_pmf(ss);
    CHECK(q.sizes == p.sizes);
    REQUIRE(q.p.size() == p.p.size());
    for (std::size_t i = 0; i < p.p.size(); ++i)
        CHECK(q.p[i] == Catch::Approx(p.p[i]).margin(1e-15));

    std::stringstream bad("2 2\n0.5 0.5");
    CHECK_THROWS(read_pmf(bad));
    std::stringstream bad2("2 2 2\n0.5 0.5 0.1");
    CHECK_THROWS(read_pmf(bad2));
}

TEST_CASE("pmf validation") {
    CHECK_THROWS_AS(JointPmf(9, 2, 2, std::vector<double>(36, 1.0 / 36)), std::domain_error);
    CHECK_THROWS_AS(JointPmf(2, 2, 2, std::vector<double>(8, 0.2)), std::domain_error);
    std::vector<double> neg(8, 0.25);
    neg[0] = -0.25;
    neg[1] = 0.5;
    CHECK_THROWS_AS(JointPmf(2, 2, 2, neg), std::domain_error);
}
