#include <gtest/gtest.h>

#include "support.hpp"

using namespace qcluster;
using qtest::qe;

namespace {

std::string fmt(const Seed& s, const Label& l) { return format_element(s.frame(l), s.ambient_r(), s.params()); }

// x_i x_j = r_ij^2 x_j x_i for every pair of current frame variables.
void expect_frame_quasi_commutes(const Seed& s) {
    for (const auto& i : s.vars()) {
        for (const auto& j : s.vars()) {
            if (!(i < j)) continue;
            const auto lhs = torus_mul(s.ambient_r(), s.frame(i), s.frame(j));
            const auto rhs = torus_mul(s.ambient_r(), s.frame(j), s.frame(i))
                                 .scaled(CoeffPoly::monomial(1, s.r().exps(i, j).scaled(2)));
            EXPECT_EQ(lhs, rhs) << "pair " << i.str() << ", " << j.str();
        }
    }
}

} // namespace

TEST(Seed, ExampleValidates) {
    const auto rep = validate_seed(qtest::example_sigma());
    EXPECT_TRUE(rep.ok()) << rep.str();
    EXPECT_TRUE(validate_seed(qtest::example_sigma_prime()).ok());
}

TEST(Seed, ExampleEF) {
    const Seed s = qtest::example_sigma();
    const auto [e, f] = build_ef(s, Label{2});
    const auto v = s.vars();
    const auto b = qtest::dense(s.b(), v);
    // Written out by hand from the definitions.
    const qtest::DenseMatrix e_want{{1, 0, 0}, {0, -1, 0}, {0, 0, 1}};
    const qtest::DenseMatrix f_want{{1, 0, 0}, {0, -1, 0}, {0, 0, 1}};
    EXPECT_EQ(qtest::dense(e, v), e_want);
    EXPECT_EQ(qtest::dense(f, v), f_want);
    EXPECT_EQ(qtest::dense(e * s.b() * f, v), qtest::dense_ebf(b, 1));
}

TEST(Seed, NonTrivialEF) {
    // b_12 = -2, b_21 = 1: E picks up max(0,-b_12) = 2, F picks up nothing in row 2.
    std::vector<Label> v{{1}, {2}};
    ExchangeMatrix b;
    b.set({1}, {2}, -2);
    b.set({2}, {1}, 1);
    const auto [e, f] = build_ef(b, v, {Label{2}}, Label{2});
    EXPECT_EQ(e.get({1}, {2}), 2);
    EXPECT_EQ(f.get({2}, {1}), 1);
    EXPECT_EQ(qtest::dense(e * b * f, v), qtest::dense_ebf(qtest::dense(b, v), 1));
}

TEST(Seed, GradingFailureIsReported) {
    const Seed s = qtest::example_sigma();
    GradingMatrix g(1);
    g.set_row({1}, {1});
    g.set_row({2}, {1});
    g.set_row({3}, {0});
    const auto rep = validate_seed(s.with_g(g));
    EXPECT_FALSE(rep.ok());
    EXPECT_FALSE(rep.passed("grading"));
    EXPECT_TRUE(rep.passed("compatibility"));
}

TEST(Seed, CompatibilityFailureIsReported) {
    const Seed s = qtest::example_sigma();
    SkewExpMatrix r = s.r();
    r.set({1}, {3}, qe(2));
    const auto rep = validate_seed(s.with_r(r));
    EXPECT_FALSE(rep.passed("compatibility"));
}

TEST(Seed, SignSkewSymmetryAndSymmetrizer) {
    std::vector<Label> v{{1}, {2}};
    GradingMatrix g(1);
    g.set_row({1}, {0});
    g.set_row({2}, {0});
    ExchangeMatrix b;
    b.set({1}, {2}, 1);
    b.set({2}, {1}, -2);
    const Seed s = Seed::initial(ParamSet{}, v, {Label{1}, Label{2}}, {}, SkewExpMatrix(v), b, g);
    const auto rep = validate_seed(s);
    EXPECT_TRUE(rep.passed("sign_skew_symmetry"));
    EXPECT_TRUE(rep.passed("skew_symmetrizable"));
    const auto d = detail::find_symmetrizer(b, s.ex(), 64);
    ASSERT_TRUE(d.has_value());
    // d_1 b_12 = -d_2 b_21
    EXPECT_EQ(d->at(Label{1}) * 1, d->at(Label{2}) * 2);

    ExchangeMatrix bad;
    bad.set({1}, {2}, 1);
    bad.set({2}, {1}, 1);
    EXPECT_FALSE(validate_seed(s.with_b(bad)).passed("sign_skew_symmetry"));
}

TEST(Seed, MutatedGradingRow) {
    const Seed m = mutate_seed(qtest::example_sigma(), Label{2});
    EXPECT_EQ(m.g().row({1}), std::vector<long long>{0});
    EXPECT_EQ(m.g().row({2}), std::vector<long long>{-1});
    EXPECT_EQ(m.g().row({3}), std::vector<long long>{0});
}

TEST(Seed, ExampleMutation) {
    const Seed s = qtest::example_sigma();
    const Seed m = mutate_seed(s, Label{2});
    EXPECT_EQ(fmt(m, {2}), "q*x1*x2^-1*x3 + x2^-1");
    EXPECT_EQ(fmt(m, {1}), "x1");
    EXPECT_TRUE(validate_seed(m).ok()) << validate_seed(m).str();
    // x2 x2' = Omega(e2, e1+e3) x1 x3 + 1 = q^-1 x1 x3 + 1.
    const auto prod = torus_mul(s.r(), s.frame({2}), m.frame({2}));
    EXPECT_EQ(format_element(prod, s.r(), s.params()), "q^-1*x1*x3 + 1");
    expect_frame_quasi_commutes(m);
    EXPECT_EQ(mutate_seed(m, Label{2}), s);
    EXPECT_THROW(mutate_seed(s, Label{1}), PreconditionError);
}

TEST(Seed, MatrixMutationAgreesWithDenseProduct) {
    std::mt19937 rng(99);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 2 + trial % 5;
        std::vector<Label> v;
        for (int i = 0; i < n; ++i) v.push_back(Label{i});
        const ExchangeMatrix b = qtest::random_skew(rng, v);
        const std::set<Label> ex(v.begin(), v.end());
        const std::size_t k = static_cast<std::size_t>(trial) % v.size();
        const ExchangeMatrix m = mutate_exchange(b, ex, v[k]);
        EXPECT_EQ(qtest::dense(m, v), qtest::dense_ebf(qtest::dense(b, v), k));
        EXPECT_EQ(m, mutate_exchange_ebf(b, v, ex, v[k]));
        EXPECT_EQ(mutate_exchange(m, ex, v[k]), b);
    }
}

TEST(Seed, MutationIsAnInvolutionOnGrassmannianSeeds) {
    const Seed s = build_gr_seed(3, 7);
    for (const auto& k : s.ex()) {
        const Seed m = mutate_seed(s, k);
        EXPECT_EQ(mutate_seed(m, k), s) << k.str();
    }
}

TEST(Seed, MutationPreservesValidityAndHomogeneity) {
    const Seed s = build_gr_seed(2, 6);
    for_each_mutation(s, 3, [&](const std::vector<Label>& seq, const Seed& m) {
        const auto rep = validate_seed(m);
        EXPECT_TRUE(rep.ok()) << rep.str();
        expect_frame_quasi_commutes(m);
        for (const auto& l : m.vars()) {
            const auto deg = qtest::homogeneous_degree(m.frame(l), s.g());
            ASSERT_TRUE(deg.has_value()) << "inhomogeneous after " << seq.size() << " steps";
            EXPECT_EQ(*deg, m.g().row(l));
        }
    });
}

TEST(Seed, EnumerateAdmissibleCounts) {
    EXPECT_EQ(enumerate_admissible(qtest::example_sigma(), 3).size(), 4u);
    const Seed g25 = build_gr_seed(2, 5);
    ASSERT_EQ(g25.ex().size(), 2u);
    EXPECT_EQ(enumerate_admissible(g25, 2).size(), 7u);
    EXPECT_EQ(enumerate_admissible(g25, 0).size(), 1u);
    std::size_t visited = 0;
    for_each_mutation(g25, 2, [&](const auto&, const auto&) { ++visited; });
    EXPECT_EQ(visited, 7u);
}

TEST(Seed, ClosureMatchesCommutativeOracle) {
    for (auto [k, n] : std::vector<std::pair<int, int>>{{2, 4}, {2, 5}, {2, 6}}) {
        const Seed s = build_gr_seed(k, n);
        const auto rep = mutation_closure(s, 10000);
        ASSERT_TRUE(rep.complete);
        EXPECT_EQ(static_cast<long long>(rep.variables.size()), qtest::numeric_closure_count(s, 10000))
            << "Gr(" << k << "," << n << ")";
        const auto classical_rep = mutation_closure(qtest::classical(s), 10000);
        EXPECT_EQ(classical_rep.variables.size(), rep.variables.size());
    }
    EXPECT_EQ(mutation_closure(build_gr_seed(2, 4), 100).variables.size(), 6u);
    EXPECT_EQ(mutation_closure(build_gr_seed(2, 5), 100).variables.size(), 10u);
}

TEST(Seed, ClosureBoundIsReported) {
    const auto rep = mutation_closure(build_gr_seed(2, 6), 3);
    EXPECT_FALSE(rep.complete);
    EXPECT_LE(rep.seeds, 3u);
}

TEST(Seed, ClassicalSeedSkipsCompatibility) {
    const Seed s = qtest::classical(qtest::example_sigma());
    const auto rep = validate_seed(s);
    EXPECT_TRUE(rep.ok());
    const Seed m = mutate_seed(s, Label{2});
    EXPECT_EQ(fmt(m, {2}), "x1*x2^-1*x3 + x2^-1");
}

TEST(Seed, RootedForgetsHistory) {
    const Seed m = mutate_seed(qtest::example_sigma(), Label{2});
    EXPECT_FALSE(m.is_initial());
    const Seed r = m.rooted();
    EXPECT_TRUE(r.is_initial());
    EXPECT_EQ(r.b(), m.b());
    EXPECT_EQ(r.r(), m.r());
}
