#pragma once

// Fixtures and independent oracles shared by the unit and acceptance tests.
// The oracles below deliberately avoid the library's own arithmetic.

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "qcluster/qcluster.hpp"

namespace qtest {

using namespace qcluster;

inline ParamSet q_params() { return ParamSet({"q"}); }

/// q^(doubled/2) exponent vector.
inline ParamExps qe(int doubled) { return ParamExps::unit(0, doubled); }

/// The worked example: var {1,2,3}, ex {2}, r_12 = q,
/// B = [[0,1,0],[-1,0,-1],[0,1,0]], G = (0,1,0).
inline Seed example_sigma() {
    std::vector<Label> v{{1}, {2}, {3}};
    SkewExpMatrix r(v);
    r.set({1}, {2}, qe(2));
    ExchangeMatrix b;
    b.set({1}, {2}, 1);
    b.set({2}, {1}, -1);
    b.set({2}, {3}, -1);
    b.set({3}, {2}, 1);
    GradingMatrix g(1);
    g.set_row({1}, {0});
    g.set_row({2}, {1});
    g.set_row({3}, {0});
    return Seed::initial(q_params(), v, {Label{2}}, {}, r, b, g);
}

/// Target of the example morphism: var {0,1,2}, ex {1,2}, r_12 = q,
/// B = [[0,1,0],[-1,0,1],[0,-1,0]], G = (1,0,1).
inline Seed example_sigma_prime() {
    std::vector<Label> v{{0}, {1}, {2}};
    SkewExpMatrix r(v);
    r.set({1}, {2}, qe(2));
    ExchangeMatrix b;
    b.set({0}, {1}, 1);
    b.set({1}, {0}, -1);
    b.set({1}, {2}, 1);
    b.set({2}, {1}, -1);
    GradingMatrix g(1);
    g.set_row({0}, {1});
    g.set_row({1}, {0});
    g.set_row({2}, {1});
    return Seed::initial(q_params(), v, {Label{1}, Label{2}}, {}, r, b, g);
}

/// x1 -> y1, x2 -> y2, x3 -> 1.
inline MorphismSpec example_f() {
    std::map<Label, VarImage> m;
    m.emplace(Label{1}, VarImage::to_label({1}));
    m.emplace(Label{2}, VarImage::to_label({2}));
    m.emplace(Label{3}, VarImage::to_scalar(CoeffPoly(1)));
    return MorphismSpec(example_sigma(), example_sigma_prime(), std::move(m));
}

/// A single frozen variable of degree `deg`.
inline Seed frozen_point(int label, long long deg, const ParamSet& params = q_params()) {
    std::vector<Label> v{{label}};
    GradingMatrix g(1);
    g.set_row({label}, {deg});
    return Seed::initial(params, v, {}, {}, SkewExpMatrix(v), ExchangeMatrix{}, g);
}

/// The same seed with every r entry trivial (classical mode).
inline Seed classical(const Seed& s) {
    return Seed::initial(s.params(), s.vars(), s.ex(), s.inv(), SkewExpMatrix(s.vars()), s.b(), s.g());
}

// ---------------------------------------------------------------------------
// Dense oracles

using DenseMatrix = std::vector<std::vector<long long>>;

inline DenseMatrix dense(const IntMatrix& m, const std::vector<Label>& labels) {
    DenseMatrix d(labels.size(), std::vector<long long>(labels.size(), 0));
    for (std::size_t i = 0; i < labels.size(); ++i) {
        for (std::size_t j = 0; j < labels.size(); ++j) d[i][j] = m.get(labels[i], labels[j]);
    }
    return d;
}

inline DenseMatrix dense_mul(const DenseMatrix& a, const DenseMatrix& b) {
    const std::size_t n = a.size();
    DenseMatrix c(n, std::vector<long long>(n, 0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < n; ++k) {
            for (std::size_t j = 0; j < n; ++j) c[i][j] += a[i][k] * b[k][j];
        }
    }
    return c;
}

/// E B F with E, F written out from their definitions.
inline DenseMatrix dense_ebf(const DenseMatrix& b, std::size_t k) {
    const std::size_t n = b.size();
    DenseMatrix e(n, std::vector<long long>(n, 0)), f = e;
    for (std::size_t i = 0; i < n; ++i) e[i][i] = f[i][i] = 1;
    e[k][k] = f[k][k] = -1;
    for (std::size_t i = 0; i < n; ++i) {
        if (i == k) continue;
        e[i][k] = std::max(0LL, -b[i][k]);
        f[k][i] = std::max(0LL, b[k][i]);
    }
    return dense_mul(dense_mul(e, b), f);
}

/// Omega_r(a, b) by the double sum over all label pairs, as doubled
/// exponents of the single parameter.
inline int brute_omega(const SkewExpMatrix& r, const ExponentVector& a, const ExponentVector& b) {
    int e = 0;
    for (const auto& k : r.labels()) {
        for (const auto& j : r.labels()) e += r.exps(k, j)[0] * a.get(k) * b.get(j);
    }
    return e;
}

// ---------------------------------------------------------------------------
// Commutative closure oracle: classical mutation evaluated at two generic
// rational points.  Distinct cluster variables are distinct value pairs.

using Rational = boost::multiprecision::cpp_rational;

struct NumericSeed {
    std::vector<Label> vars;
    std::set<Label> ex;
    std::map<std::pair<Label, Label>, int> b;
    std::map<Label, std::pair<Rational, Rational>> value;

    int get(const Label& i, const Label& j) const {
        auto it = b.find({i, j});
        return it == b.end() ? 0 : it->second;
    }

    std::string key() const {
        std::string s;
        for (const auto& l : vars) s += value.at(l).first.str() + "/" + value.at(l).second.str() + ";";
        for (const auto& [ij, x] : b) s += ij.first.str() + ij.second.str() + std::to_string(x) + ";";
        return s;
    }
};

inline Rational rpow(const Rational& x, int n) {
    Rational out = 1;
    for (int i = 0; i < n; ++i) out *= x;
    return out;
}

inline NumericSeed numeric_mutate(const NumericSeed& s, const Label& k) {
    NumericSeed t = s;
    Rational p1 = 1, p2 = 1, m1 = 1, m2 = 1;
    for (const auto& i : s.vars) {
        const int bik = s.get(i, k);
        if (bik > 0) {
            p1 *= rpow(s.value.at(i).first, bik);
            p2 *= rpow(s.value.at(i).second, bik);
        } else if (bik < 0) {
            m1 *= rpow(s.value.at(i).first, -bik);
            m2 *= rpow(s.value.at(i).second, -bik);
        }
    }
    t.value[k] = {(p1 + m1) / s.value.at(k).first, (p2 + m2) / s.value.at(k).second};
    t.b.clear();
    for (const auto& i : s.vars) {
        for (const auto& j : s.vars) {
            int v;
            if (i == k || j == k) {
                v = -s.get(i, j);
            } else {
                const int bik = s.get(i, k), bkj = s.get(k, j);
                v = s.get(i, j) + (std::abs(bik) * bkj + bik * std::abs(bkj)) / 2;
            }
            if (v != 0) t.b[{i, j}] = v;
        }
    }
    return t;
}

/// Number of distinct cluster variables reachable (frozen included), or -1
/// when more than `max_seeds` seeds are met.
inline long long numeric_closure_count(const Seed& s, std::size_t max_seeds) {
    NumericSeed n;
    n.vars = s.vars();
    n.ex = s.ex();
    for (const auto& [ij, x] : s.b().entries()) n.b[ij] = x;
    // Distinct primes, and their reciprocals shifted, as the two points.
    const int primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71};
    for (std::size_t i = 0; i < n.vars.size(); ++i) {
        n.value[n.vars[i]] = {Rational(primes[i % 20] + 20 * static_cast<int>(i / 20)),
                              Rational(1, primes[(i + 7) % 20]) + Rational(static_cast<int>(i))};
    }
    std::set<std::string> seen{n.key()};
    std::set<std::pair<Rational, Rational>> values;
    std::vector<NumericSeed> queue{n};
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const NumericSeed cur = queue[head];
        for (const auto& [l, v] : cur.value) values.insert(v);
        for (const auto& k : cur.ex) {
            NumericSeed next = numeric_mutate(cur, k);
            if (seen.insert(next.key()).second) {
                if (seen.size() > max_seeds) return -1;
                queue.push_back(std::move(next));
            }
        }
    }
    return static_cast<long long>(values.size());
}

// ---------------------------------------------------------------------------
// Random helpers (fixed seeds for reproducibility)

inline ExponentVector random_exponent(std::mt19937& rng, const std::vector<Label>& labels, int lo, int hi) {
    std::uniform_int_distribution<int> d(lo, hi);
    ExponentVector a;
    for (const auto& l : labels) a.add(l, d(rng));
    return a;
}

inline TorusElement random_element(std::mt19937& rng, const std::vector<Label>& labels, int terms) {
    std::uniform_int_distribution<int> c(-3, 3), e(-2, 2);
    TorusElement t;
    for (int i = 0; i < terms; ++i) {
        const int coeff = c(rng);
        t.add_term(random_exponent(rng, labels, -2, 2), CoeffPoly::monomial(coeff == 0 ? 1 : coeff, qe(e(rng))));
    }
    return t;
}

/// Random sign-skew-symmetric (skew-symmetric) matrix over `labels`.
inline ExchangeMatrix random_skew(std::mt19937& rng, const std::vector<Label>& labels) {
    std::uniform_int_distribution<int> d(-2, 2);
    ExchangeMatrix b;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        for (std::size_t j = i + 1; j < labels.size(); ++j) {
            const int x = d(rng);
            b.set(labels[i], labels[j], x);
            b.set(labels[j], labels[i], -x);
        }
    }
    return b;
}

/// Degree of every term of t under the initial grading g0, or nullopt when
/// the terms disagree.
inline std::optional<std::vector<long long>> homogeneous_degree(const TorusElement& t, const GradingMatrix& g0) {
    std::optional<std::vector<long long>> deg;
    for (const auto& [a, c] : t.terms()) {
        const auto d = g0.degree(a);
        if (deg && *deg != d) return std::nullopt;
        deg = d;
    }
    return deg;
}

} // namespace qtest
