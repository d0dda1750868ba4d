#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "qcluster/errors.hpp"
#include "qcluster/label.hpp"
#include "qcluster/morphism.hpp"
#include "qcluster/qmatrix.hpp"
#include "qcluster/seed.hpp"
#include "qcluster/structure.hpp"

namespace qcluster {

/// I_ij = [1, k-i] + [k+j-i+1, k+j].  (0,0) gives [1,k].
inline PluckerLabel plucker_index(int k, int i, int j) {
    const bool corner = i == 0 && j == 0;
    if (!corner && (i < 1 || i > k || j < 1)) {
        throw IndexError("(" + std::to_string(i) + "," + std::to_string(j) + ") is not a grid index for k = " +
                         std::to_string(k));
    }
    PluckerLabel out;
    for (int x = 1; x <= k - i; ++x) out.push_back(x);
    for (int x = k + j - i + 1; x <= k + j; ++x) out.push_back(x);
    return out;
}

inline PluckerLabel plucker_index(int k, const Label& l) { return plucker_index(k, l[0], l[1]); }

inline bool gr_in_grid(int k, int cols, int i, int j) {
    return (i == 0 && j == 0) || (i >= 1 && i <= k && j >= 1 && j <= cols);
}

/// Quiver arrows out of (i,j) on the grid [1,k] x [1,cols] plus (0,0):
/// (0,0) -> (1,1), (i,j) -> (i+1,j), (i,j) -> (i,j+1), (i,j) -> (i-1,j-1).
/// Arrows with an endpoint outside the grid are dropped, and the last rule
/// never points at the corner (0,0).  cols < 0 means unbounded.
inline std::vector<Label> gr_arrows_from(int k, int cols, const Label& l) {
    const int i = l[0], j = l[1];
    auto in = [&](int a, int b) {
        if (a == 0 && b == 0) return true;
        return a >= 1 && a <= k && b >= 1 && (cols < 0 || b <= cols);
    };
    std::vector<Label> out;
    if (i == 0 && j == 0) {
        if (in(1, 1)) out.push_back(Label{1, 1});
        return out;
    }
    if (in(i + 1, j)) out.push_back(Label{i + 1, j});
    if (in(i, j + 1)) out.push_back(Label{i, j + 1});
    if (i - 1 >= 1 && j - 1 >= 1) out.push_back(Label{i - 1, j - 1});
    return out;
}

/// Row l of the exchange matrix: +1 towards heads of arrows out of l, -1
/// towards tails of arrows into l.
inline std::vector<std::pair<Label, int>> gr_row(int k, int cols, const Label& l) {
    std::map<Label, int> row;
    for (const auto& h : gr_arrows_from(k, cols, l)) row[h] += 1;
    const int i = l[0], j = l[1];
    std::vector<Label> tails;
    if (i == 1 && j == 1) tails.push_back(Label{0, 0});
    if (!(i == 0 && j == 0)) {
        tails.push_back(Label{i - 1, j});
        tails.push_back(Label{i, j - 1});
        tails.push_back(Label{i + 1, j + 1});
    }
    for (const auto& t : tails) {
        if (t == Label{0, 0} && !(i == 1 && j == 1)) continue;
        if (!(t == Label{0, 0}) && (t[0] < 1 || t[1] < 1 || t[0] > k || (cols >= 0 && t[1] > cols))) continue;
        for (const auto& h : gr_arrows_from(k, cols, t)) {
            if (h == l) row[t] -= 1;
        }
    }
    std::vector<std::pair<Label, int>> out;
    for (const auto& [m, v] : row) {
        if (v != 0) out.emplace_back(m, v);
    }
    return out;
}

inline std::vector<Label> gr_labels(int k, int n) {
    std::vector<Label> v{Label{0, 0}};
    for (int i = 1; i <= k; ++i) {
        for (int j = 1; j <= n - k; ++j) v.push_back(Label{i, j});
    }
    std::sort(v.begin(), v.end());
    return v;
}

inline std::set<Label> gr_ex(int k, int n) {
    std::set<Label> ex;
    for (int i = 1; i <= k - 1; ++i) {
        for (int j = 1; j <= n - k - 1; ++j) ex.insert(Label{i, j});
    }
    return ex;
}

inline void check_kn(int k, int n) {
    if (k < 1 || k >= n) {
        throw PreconditionError("need 1 <= k < n, got k = " + std::to_string(k) + ", n = " + std::to_string(n));
    }
}

inline ExchangeMatrix gr_exchange_matrix(int k, int n) {
    check_kn(k, n);
    ExchangeMatrix b;
    for (const auto& l : gr_labels(k, n)) {
        for (const auto& [m, v] : gr_row(k, n - k, l)) b.set(l, m, v);
    }
    return b;
}

/// Initial seed of O_q(Gr(k,n)): grid labels, r from the Scott oracle, G = 1.
inline Seed build_gr_seed(int k, int n) {
    check_kn(k, n);
    const std::vector<Label> vars = gr_labels(k, n);
    SkewExpMatrix r(vars);
    for (std::size_t a = 0; a < vars.size(); ++a) {
        for (std::size_t c = a + 1; c < vars.size(); ++c) {
            const PluckerLabel pa = plucker_index(k, vars[a]);
            const PluckerLabel pc = plucker_index(k, vars[c]);
            const ScottExponent e = scott_exponent(pa, pc);
            if (!e.quasi_commuting) {
                throw StructuralError("initial Plucker coordinates " + plucker_str(pa) + " and " + plucker_str(pc) +
                                      " do not quasi-commute");
            }
            // Delta_a Delta_b = q^c Delta_b Delta_a and x_i x_j = r_ij^2 x_j x_i,
            // so r_ij = q^(c/2), whose doubled exponent is c itself.
            r.set(vars[a], vars[c], ParamExps::unit(0, e.doubled / 2));
        }
    }
    GradingMatrix g(1);
    std::map<Label, std::string> names;
    for (const auto& l : vars) {
        g.set_row(l, {1});
        names.emplace(l, plucker_str(plucker_index(k, l)));
    }
    return Seed::initial(ParamSet({qmatrix::kParamName}), vars, gr_ex(k, n), {}, r, gr_exchange_matrix(k, n), g)
        .with_names(std::move(names));
}

/// The embedding Gr(k,n) -> Gr(k,n+1) matching equal Plucker labels.
inline MorphismSpec build_iota(int k, int n) {
    const Seed src = build_gr_seed(k, n);
    const Seed tgt = build_gr_seed(k, n + 1);
    std::map<PluckerLabel, Label> by_plucker;
    for (const auto& l : tgt.vars()) by_plucker.emplace(plucker_index(k, l), l);
    std::map<Label, VarImage> vm;
    for (const auto& l : src.vars()) {
        auto it = by_plucker.find(plucker_index(k, l));
        if (it == by_plucker.end()) throw StructuralError("no matching Plucker coordinate for " + l.str());
        vm.emplace(l, VarImage::to_label(it->second));
    }
    return MorphismSpec(src, tgt, std::move(vm));
}

/// Lazy seed of O_q(Gr(k, infinity)) on ([1,k] x positive integers) + (0,0).
inline SeedGenerator gr_infinity_generator(int k) {
    if (k < 1) throw PreconditionError("k must be positive");
    SeedGenerator g;
    g.params = ParamSet({qmatrix::kParamName});
    g.grading_dim = 1;
    g.label_at = [k](std::size_t n) {
        if (n == 0) return Label{0, 0};
        const int m = static_cast<int>(n - 1);
        return Label{m % k + 1, m / k + 1};
    };
    g.contains = [k](const Label& l) { return l.size() == 2 && gr_in_grid(k, 1 << 20, l[0], l[1]); };
    g.neighbors = [k](const Label& l) { return gr_row(k, -1, l); };
    g.r_of = [k](const Label& a, const Label& b) {
        const ScottExponent e = scott_exponent(plucker_index(k, a), plucker_index(k, b));
        if (!e.quasi_commuting) throw StructuralError("Plucker coordinates do not quasi-commute");
        return ParamExps::unit(0, e.doubled / 2);
    };
    g.g_of = [](const Label&) { return std::vector<long long>{1}; };
    g.ex_test = [k](const Label& l) { return l[0] >= 1 && l[0] <= k - 1 && l[1] >= 1; };
    g.inv_test = [](const Label&) { return false; };
    g.name_of = [k](const Label& l) { return plucker_str(plucker_index(k, l)); };
    return g;
}

} // namespace qcluster
