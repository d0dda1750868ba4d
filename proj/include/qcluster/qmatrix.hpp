#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <string>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

#include "qcluster/errors.hpp"
#include "qcluster/qmatrix_conventions.hpp"
#include "qcluster/scalar.hpp"

namespace qcluster {

/// Sorted k-subset of positive integers naming a quantum Plucker coordinate.
using PluckerLabel = std::vector<int>;

inline std::string plucker_str(const PluckerLabel& p) {
    const bool small = std::all_of(p.begin(), p.end(), [](int x) { return x >= 0 && x < 10; });
    std::string s;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (i && !small) s += ',';
        s += std::to_string(p[i]);
    }
    return s;
}

/// Element of O_q(M_{k,n}) in normal form: ordered words (one byte per
/// generator, index (a-1)*n + (b-1)) with coefficients.
class QMatrixWord {
public:
    using Terms = std::map<std::string, CoeffPoly>;

    const Terms& terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }

    void add(const std::string& w, const CoeffPoly& c) {
        if (c.is_zero()) return;
        auto it = terms_.find(w);
        if (it == terms_.end()) {
            terms_.emplace(w, c);
        } else {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    QMatrixWord& operator+=(const QMatrixWord& o) {
        for (const auto& [w, c] : o.terms_) add(w, c);
        return *this;
    }
    QMatrixWord scaled(const CoeffPoly& s) const {
        QMatrixWord r;
        for (const auto& [w, c] : terms_) r.add(w, c * s);
        return r;
    }

    friend bool operator==(const QMatrixWord& a, const QMatrixWord& b) { return a.terms_ == b.terms_; }

private:
    Terms terms_;
};

/// The quantized coordinate ring of k x n matrices, by normal-form rewriting.
class QMatrixAlgebra {
public:
    QMatrixAlgebra(int k, int n) : k_(k), n_(n) {
        if (k < 1 || n < 1 || k * n > 255) throw PreconditionError("unsupported quantum matrix size");
    }

    int rows() const noexcept { return k_; }
    int cols() const noexcept { return n_; }

    char gen(int a, int b) const {
        if (a < 1 || a > k_ || b < 1 || b > n_) throw IndexError("generator outside the grid");
        return static_cast<char>((a - 1) * n_ + (b - 1));
    }

    /// The generator x_{ab} as an element.
    QMatrixWord generator(int a, int b) const {
        QMatrixWord w;
        w.add(std::string(1, gen(a, b)), CoeffPoly(1));
        return w;
    }

    /// Normal form of a word given as a sequence of (row, column) pairs.
    QMatrixWord normal_form(const std::vector<std::pair<int, int>>& word) {
        std::string w;
        for (const auto& [a, b] : word) w += gen(a, b);
        return normal_form(w);
    }

    QMatrixWord normal_form(const std::string& w) {
        {
            std::lock_guard<std::mutex> lock(mu_);
            auto it = cache_.find(w);
            if (it != cache_.end()) return it->second;
        }
        QMatrixWord out = compute(w);
        std::lock_guard<std::mutex> lock(mu_);
        cache_.emplace(w, out);
        return out;
    }

    QMatrixWord multiply(const QMatrixWord& x, const QMatrixWord& y) {
        QMatrixWord out;
        for (const auto& [u, cu] : x.terms()) {
            for (const auto& [v, cv] : y.terms()) out += normal_form(u + v).scaled(cu * cv);
        }
        return out;
    }

    /// Quantum minor on the given rows and columns, both sorted.
    QMatrixWord quantum_minor(const std::vector<int>& rows, const std::vector<int>& cols) {
        if (rows.size() != cols.size()) throw PreconditionError("quantum minor needs as many rows as columns");
        std::vector<std::size_t> perm(cols.size());
        std::iota(perm.begin(), perm.end(), 0);
        QMatrixWord out;
        do {
            int inversions = 0;
            for (std::size_t i = 0; i < perm.size(); ++i) {
                for (std::size_t j = i + 1; j < perm.size(); ++j) {
                    if (perm[i] > perm[j]) ++inversions;
                }
            }
            std::vector<std::pair<int, int>> word;
            for (std::size_t i = 0; i < perm.size(); ++i) word.emplace_back(rows[i], cols[perm[i]]);
            const int sign = inversions % 2 == 0 ? 1 : qmatrix::kMinorSign;
            out += normal_form(word).scaled(
                CoeffPoly::monomial(sign, ParamExps::unit(0, qmatrix::kMinorQPower * inversions)));
        } while (std::next_permutation(perm.begin(), perm.end()));
        return out;
    }

    /// Maximal minor on rows [1,k].
    QMatrixWord plucker(const PluckerLabel& cols) {
        std::vector<int> rows(cols.size());
        std::iota(rows.begin(), rows.end(), 1);
        return quantum_minor(rows, cols);
    }

    std::string str(const QMatrixWord& x) const {
        if (x.is_zero()) return "0";
        std::string out;
        bool first = true;
        for (auto it = x.terms().begin(); it != x.terms().end(); ++it) {
            std::string mono;
            for (char g : it->first) {
                const int idx = static_cast<unsigned char>(g);
                if (!mono.empty()) mono += '*';
                mono += "x" + std::to_string(idx / n_ + 1) + std::to_string(idx % n_ + 1);
            }
            const CoeffPoly& c = it->second;
            std::string coef = c.is_monomial() ? ScalarMonomial(c.leading()).str(ParamSet({qmatrix::kParamName}))
                                               : "(" + c.str(ParamSet({qmatrix::kParamName})) + ")";
            bool neg = false;
            if (c.is_monomial() && c.leading().coeff < 0) {
                neg = true;
                coef = coef.substr(1);
            }
            std::string term = coef == "1" ? (mono.empty() ? "1" : mono) : (mono.empty() ? coef : coef + "*" + mono);
            out += first ? (neg ? "-" : "") + term : (neg ? " - " : " + ") + term;
            first = false;
        }
        return out;
    }

private:
    std::pair<int, int> pos(char g) const {
        const int idx = static_cast<unsigned char>(g);
        return {idx / n_ + 1, idx % n_ + 1};
    }

    QMatrixWord compute(const std::string& w) {
        std::size_t i = 0;
        while (i + 1 < w.size() && static_cast<unsigned char>(w[i]) <= static_cast<unsigned char>(w[i + 1])) ++i;
        QMatrixWord out;
        if (i + 1 >= w.size()) {
            out.add(w, CoeffPoly(1));
            return out;
        }
        const std::string left = w.substr(0, i);
        const std::string right = w.substr(i + 2);
        // w[i] = x_u > w[i+1] = x_v; v = (a, b), u = (c, d) with (a,b) < (c,d).
        const auto [a, b] = pos(w[i + 1]);
        const auto [c, d] = pos(w[i]);
        const std::string swapped = std::string(1, w[i + 1]) + w[i];
        auto q_pow = [](int doubled) { return CoeffPoly::monomial(1, ParamExps::unit(0, doubled)); };
        if (a == c) {
            out += normal_form(left + swapped + right).scaled(q_pow(qmatrix::kSameRowFactor));
        } else if (b == d) {
            out += normal_form(left + swapped + right).scaled(q_pow(qmatrix::kSameColumnFactor));
        } else if (b > d) {
            out += normal_form(left + swapped + right).scaled(q_pow(qmatrix::kAntiDiagonalFactor));
        } else {
            out += normal_form(left + swapped + right);
            const std::string cross = std::string(1, gen(a, d)) + gen(c, b);
            const CoeffPoly qq = q_pow(qmatrix::kQ) - q_pow(-qmatrix::kQ);
            out += normal_form(left + cross + right).scaled(-qq);
        }
        return out;
    }

    int k_;
    int n_;
    std::mutex mu_;
    std::unordered_map<std::string, QMatrixWord> cache_;
};

/// Shared oracle instance for a grid size.
inline QMatrixAlgebra& qmatrix_oracle(int k, int n) {
    static std::mutex mu;
    static std::map<std::pair<int, int>, std::unique_ptr<QMatrixAlgebra>> algebras;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = algebras[{k, n}];
    if (!slot) slot = std::make_unique<QMatrixAlgebra>(k, n);
    return *slot;
}

/// c with Delta_a Delta_b = q^c Delta_b Delta_a, c stored doubled, or the
/// NotQuasiCommuting value.
struct ScottExponent {
    bool quasi_commuting = true;
    int doubled = 0;

    static ScottExponent not_quasi_commuting() { return {false, 0}; }
    friend bool operator==(const ScottExponent&, const ScottExponent&) = default;
};

inline ScottExponent scott_exponent_in(QMatrixAlgebra& alg, const PluckerLabel& a, const PluckerLabel& b) {
    if (a == b) return {};
    const QMatrixWord da = alg.plucker(a);
    const QMatrixWord db = alg.plucker(b);
    const QMatrixWord ab = alg.multiply(da, db);
    const QMatrixWord ba = alg.multiply(db, da);
    if (ba.is_zero() || ab.terms().size() != ba.terms().size()) return ScottExponent::not_quasi_commuting();
    const auto& [w, c] = *ba.terms().rbegin();
    auto it = ab.terms().find(w);
    if (it == ab.terms().end()) return ScottExponent::not_quasi_commuting();
    CoeffPoly ratio;
    try {
        ratio = it->second.exact_divide(c);
    } catch (const NotLeftDivisible&) {
        return ScottExponent::not_quasi_commuting();
    }
    if (!ratio.is_monomial() || ratio.leading().coeff != 1) return ScottExponent::not_quasi_commuting();
    const ParamExps e = ratio.leading().exps;
    if (e.length() > 1) return ScottExponent::not_quasi_commuting();
    if (!(ab == ba.scaled(ratio))) return ScottExponent::not_quasi_commuting();
    return {true, e[0]};
}

/// Scott exponent computed in O_q(M_{k,n}) with n the largest column used.
/// Memoized.
inline ScottExponent scott_exponent(const PluckerLabel& a, const PluckerLabel& b) {
    if (a.size() != b.size() || a.empty()) throw PreconditionError("Plucker labels of different sizes");
    if (!std::is_sorted(a.begin(), a.end()) || !std::is_sorted(b.begin(), b.end()) || a.front() < 1 ||
        b.front() < 1) {
        throw PreconditionError("Plucker labels must be sorted subsets of positive integers");
    }
    using Key = std::pair<PluckerLabel, PluckerLabel>;
    static std::mutex mu;
    static std::map<Key, ScottExponent> cache;
    const Key key{a, b};
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    const int n = std::max(a.back(), b.back());
    const ScottExponent out = scott_exponent_in(qmatrix_oracle(static_cast<int>(a.size()), n), a, b);
    std::lock_guard<std::mutex> lock(mu);
    cache.emplace(key, out);
    return out;
}

} // namespace qcluster
