#include <gtest/gtest.h>

#include "support.hpp"

using namespace qcluster;
using qtest::qe;

namespace {

// Evaluates a torus element with nonnegative exponents in O_q(M_{k,n}) by
// x_l -> Delta_{I_l}, Y^(a) = S_r(a) x^a with x^a ordered by label.
QMatrixWord evaluate(QMatrixAlgebra& alg, int k, const Seed& s, const TorusElement& t) {
    QMatrixWord out;
    for (const auto& [a, c] : t.terms()) {
        QMatrixWord w;
        w.add("", c.times(s_norm(s.r(), a)));
        for (const auto& [l, v] : a.entries()) {
            EXPECT_GE(v, 0);
            for (int i = 0; i < v; ++i) w = alg.multiply(w, alg.plucker(plucker_index(k, l)));
        }
        out += w;
    }
    return out;
}

std::vector<PluckerLabel> subsets(int k, int n) {
    std::vector<PluckerLabel> out;
    std::vector<int> cur;
    std::function<void(int)> rec = [&](int start) {
        if (static_cast<int>(cur.size()) == k) {
            out.push_back(cur);
            return;
        }
        for (int x = start; x <= n; ++x) {
            cur.push_back(x);
            rec(x + 1);
            cur.pop_back();
        }
    };
    rec(1);
    return out;
}

// Coefficients at q = 4, so that q^(1/2) = 2 stays rational.
using Vec = std::map<std::string, qtest::Rational>;

Vec at_q4(const QMatrixWord& w) {
    Vec out;
    for (const auto& [word, c] : w.terms()) {
        qtest::Rational v = 0;
        for (const auto& [e, n] : c.terms()) {
            qtest::Rational p = 1;
            const int d = e[0];
            for (int i = 0; i < (d < 0 ? -d : d); ++i) p *= 2;
            v += d < 0 ? qtest::Rational(n) / p : qtest::Rational(n) * p;
        }
        if (v != 0) out[word] = v;
    }
    return out;
}

// Whether `target` lies in the rational span of `basis` (Gaussian elimination).
bool in_span(std::vector<Vec> basis, Vec target) {
    std::vector<std::pair<std::string, Vec>> pivots;
    auto reduce = [&](Vec& v) {
        for (const auto& [key, row] : pivots) {
            auto it = v.find(key);
            if (it == v.end()) continue;
            const qtest::Rational f = it->second / row.at(key);
            for (const auto& [k2, x] : row) {
                v[k2] -= f * x;
                if (v[k2] == 0) v.erase(k2);
            }
        }
    };
    for (auto& b : basis) {
        reduce(b);
        if (!b.empty()) pivots.emplace_back(b.begin()->first, b);
    }
    reduce(target);
    return target.empty();
}

int degree(const Seed& s, const Label& l) {
    int d = 0;
    for (const auto& v : s.vars()) d += s.b().get(v, l) != 0;
    return d;
}

} // namespace

TEST(Grassmannian, PluckerIndices) {
    EXPECT_EQ(plucker_index(3, 0, 0), (PluckerLabel{1, 2, 3}));
    EXPECT_EQ(plucker_index(3, 1, 1), (PluckerLabel{1, 2, 4}));
    EXPECT_EQ(plucker_index(3, 3, 4), (PluckerLabel{5, 6, 7}));
    EXPECT_EQ(plucker_index(2, 2, 2), (PluckerLabel{3, 4}));
    EXPECT_THROW(plucker_index(3, 4, 1), IndexError);
    EXPECT_THROW(plucker_index(3, 1, 0), IndexError);
}

TEST(Grassmannian, SeedShapes) {
    struct Shape {
        int k, n;
        std::size_t vars, ex;
    };
    for (const auto& sh : std::vector<Shape>{{2, 4, 5, 1}, {2, 5, 7, 2}, {3, 6, 10, 4}, {3, 7, 13, 6}, {3, 8, 16, 8},
                                             {4, 8, 17, 9}}) {
        const Seed s = build_gr_seed(sh.k, sh.n);
        EXPECT_EQ(s.rank(), sh.vars) << sh.k << "," << sh.n;
        EXPECT_EQ(s.ex().size(), sh.ex);
        EXPECT_EQ(s.rank() - s.ex().size(), static_cast<std::size_t>(sh.n));
        const auto rep = validate_seed(s);
        EXPECT_TRUE(rep.ok()) << rep.str();
        std::set<PluckerLabel> seen;
        for (const auto& l : s.vars()) seen.insert(plucker_index(sh.k, l));
        EXPECT_EQ(seen.size(), s.rank());
    }
    EXPECT_THROW(build_gr_seed(4, 4), PreconditionError);
}

TEST(Grassmannian, QuiverArrows) {
    const ExchangeMatrix b = gr_exchange_matrix(2, 4);
    EXPECT_EQ(b.get({0, 0}, {1, 1}), 1);
    EXPECT_EQ(b.get({1, 1}, {2, 1}), 1);
    EXPECT_EQ(b.get({1, 1}, {1, 2}), 1);
    EXPECT_EQ(b.get({2, 2}, {1, 1}), 1);
    EXPECT_EQ(b.get({1, 1}, {0, 0}), -1);
    // No diagonal arrow into the corner.
    EXPECT_EQ(b.get({1, 1}, {0, 0}) + b.get({0, 0}, {1, 1}), 0);
    for (const auto& [ij, x] : b.entries()) EXPECT_EQ(b.get(ij.second, ij.first), -x);
}

TEST(Grassmannian, MutationAtCorner) {
    const Seed s = build_gr_seed(2, 4);
    const Seed m = mutate_seed(s, Label{1, 1});
    EXPECT_EQ(m.format(m.frame({1, 1})), "x(0,0)*x(1,1)^-1*x(2,2) + q*x(1,1)^-1*x(1,2)*x(2,1)");
}

TEST(Grassmannian, ExchangeRelationsHoldInQuantumMatrices) {
    // x_k x_k' = N, evaluated on Plucker coordinates, must equal
    // Delta_{I_k} Delta_J for exactly one k-subset J at four-valent vertices.
    for (auto [k, n] : std::vector<std::pair<int, int>>{{2, 4}, {2, 5}, {2, 6}, {3, 6}}) {
        const Seed s = build_gr_seed(k, n);
        QMatrixAlgebra& alg = qmatrix_oracle(k, n);
        for (const auto& l : s.ex()) {
            if (degree(s, l) != 4) continue;
            const QMatrixWord rhs = evaluate(alg, k, s, exchange_numerator(s, l));
            const QMatrixWord dk = alg.plucker(plucker_index(k, l));
            int matches = 0;
            for (const auto& j : subsets(k, n)) {
                if (alg.multiply(dk, alg.plucker(j)) == rhs) ++matches;
            }
            EXPECT_EQ(matches, 1) << "Gr(" << k << "," << n << ") at " << l.str();
        }
    }
}

TEST(Grassmannian, SixValentExchangeLeavesPluckerCoordinates) {
    // In Gr(3,6) the vertex (2,2) has six neighbours; its new variable has
    // degree two, so N must lie in Delta_145 times the span of products
    // Delta_P Delta_Q, and not in Delta_145 times a single coordinate.
    const int k = 3, n = 6;
    const Seed s = build_gr_seed(k, n);
    const Label l{2, 2};
    ASSERT_EQ(degree(s, l), 6);
    QMatrixAlgebra& alg = qmatrix_oracle(k, n);
    const QMatrixWord dk = alg.plucker(plucker_index(k, l));
    const Vec rhs = at_q4(evaluate(alg, k, s, exchange_numerator(s, l)));
    const auto subs = subsets(k, n);
    std::vector<Vec> basis;
    for (std::size_t a = 0; a < subs.size(); ++a) {
        const QMatrixWord da = alg.multiply(dk, alg.plucker(subs[a]));
        for (std::size_t b = a; b < subs.size(); ++b) basis.push_back(at_q4(alg.multiply(da, alg.plucker(subs[b]))));
    }
    EXPECT_TRUE(in_span(basis, rhs));
    // Changing the relative q-power of the two terms breaks membership.
    const TorusElement num = exchange_numerator(s, l);
    TorusElement skewed;
    bool first = true;
    for (const auto& [a, c] : num.terms()) {
        skewed += TorusElement::monomial(a, first ? c.times(ScalarMonomial::power(qe(2))) : c);
        first = false;
    }
    EXPECT_FALSE(in_span(basis, at_q4(evaluate(alg, k, s, skewed))));
}

TEST(Grassmannian, FrameCommutationMatchesOracle) {
    const int k = 3, n = 6;
    const Seed s = build_gr_seed(k, n);
    QMatrixAlgebra& alg = qmatrix_oracle(k, n);
    for (const auto& a : s.vars()) {
        for (const auto& b : s.vars()) {
            if (!(a < b)) continue;
            const auto da = alg.plucker(plucker_index(k, a));
            const auto db = alg.plucker(plucker_index(k, b));
            const CoeffPoly r2 = CoeffPoly::monomial(1, s.r().exps(a, b).scaled(2));
            EXPECT_EQ(alg.multiply(da, db), alg.multiply(db, da).scaled(r2)) << a.str() << " " << b.str();
        }
    }
}

TEST(Grassmannian, EmbeddingAddsThreeLabels) {
    const MorphismSpec iota = build_iota(3, 7);
    std::set<Label> image;
    for (const auto& [l, im] : iota.var_map()) image.insert(*im.label);
    std::set<PluckerLabel> fresh;
    for (const auto& l : iota.target().vars()) {
        if (!image.count(l)) fresh.insert(plucker_index(3, l));
    }
    EXPECT_EQ(fresh, (std::set<PluckerLabel>{{1, 2, 8}, {1, 7, 8}, {6, 7, 8}}));
    EXPECT_TRUE(check_structural(iota).passed()) << check_structural(iota).str();
    const auto cm3 = verify_cm3(iota, 2);
    EXPECT_TRUE(cm3.passed()) << cm3.str();
}

TEST(Grassmannian, GeneratorRestrictionIsTheFiniteSeed) {
    const SeedGenerator g = gr_infinity_generator(3);
    for (int n : {6, 7, 8}) {
        std::set<Label> vars;
        for (const auto& l : gr_labels(3, n)) vars.insert(l);
        const Seed r = g.restrict_closed(vars);
        const Seed s = build_gr_seed(3, n);
        EXPECT_EQ(r, s) << n;
        EXPECT_EQ(r.names(), s.names());
    }
    // The enumeration walks the corner first, then columns.
    EXPECT_EQ(g.label_at(0), Label({0, 0}));
    EXPECT_EQ(g.label_at(1), Label({1, 1}));
    EXPECT_EQ(g.label_at(4), Label({1, 2}));
}

TEST(Grassmannian, InfiniteFiltration) {
    const Filtration f = build_filtration(gr_infinity_generator(3), Label{0, 0}, 5);
    ASSERT_EQ(f.stages.size(), 5u);
    for (std::size_t i = 0; i + 1 < f.stages.size(); ++i) {
        EXPECT_LT(f.stages[i].rank(), f.stages[i + 1].rank());
    }
    const auto res = verify_colimit_consistency(f, 2);
    EXPECT_TRUE(res.passed()) << res.str();
}
