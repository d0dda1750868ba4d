#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <boost/container/small_vector.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include "qcluster/errors.hpp"

namespace qcluster {

using Integer = boost::multiprecision::cpp_int;

/// Ordered names of the formal quantum parameters (e.g. {"q"}).
class ParamSet {
public:
    ParamSet() = default;
    explicit ParamSet(std::vector<std::string> names) : names_(std::move(names)) {
        for (std::size_t i = 0; i < names_.size(); ++i) {
            if (names_[i].empty()) throw StructuralError("empty parameter name");
            if (names_[i][0] == 'x') throw StructuralError("parameter names may not start with 'x'");
            for (std::size_t j = 0; j < i; ++j) {
                if (names_[i] == names_[j]) throw StructuralError("duplicate parameter name " + names_[i]);
            }
        }
    }

    std::size_t size() const noexcept { return names_.size(); }
    const std::vector<std::string>& names() const noexcept { return names_; }

    /// Display name of parameter `i`, falling back to p<i> past the end.
    std::string name(std::size_t i) const { return i < names_.size() ? names_[i] : "p" + std::to_string(i); }

    int index_of(const std::string& n) const {
        for (std::size_t i = 0; i < names_.size(); ++i) {
            if (names_[i] == n) return static_cast<int>(i);
        }
        return -1;
    }

    friend bool operator==(const ParamSet&, const ParamSet&) = default;

private:
    std::vector<std::string> names_;
};

/// Exponents over the parameters, doubled so q^(1/2) is stored as 1.
/// Trailing zeros are trimmed, which makes the value independent of how
/// many parameters the surrounding ParamSet has.
class ParamExps {
public:
    using Storage = boost::container::small_vector<int, 2>;

    ParamExps() = default;
    explicit ParamExps(std::initializer_list<int> doubled) : v_(doubled.begin(), doubled.end()) { trim(); }
    explicit ParamExps(const std::vector<int>& doubled) : v_(doubled.begin(), doubled.end()) { trim(); }

    /// Single-parameter convenience: q^(doubled/2) for parameter `index`.
    static ParamExps unit(std::size_t index, int doubled) {
        ParamExps e;
        e.v_.assign(index + 1, 0);
        e.v_[index] = doubled;
        e.trim();
        return e;
    }

    bool is_zero() const noexcept { return v_.empty(); }
    std::size_t length() const noexcept { return v_.size(); }
    int operator[](std::size_t i) const noexcept { return i < v_.size() ? v_[i] : 0; }

    std::vector<int> to_vector() const { return {v_.begin(), v_.end()}; }

    ParamExps& operator+=(const ParamExps& o) {
        if (o.v_.size() > v_.size()) v_.resize(o.v_.size(), 0);
        for (std::size_t i = 0; i < o.v_.size(); ++i) v_[i] += o.v_[i];
        trim();
        return *this;
    }
    ParamExps& operator-=(const ParamExps& o) {
        if (o.v_.size() > v_.size()) v_.resize(o.v_.size(), 0);
        for (std::size_t i = 0; i < o.v_.size(); ++i) v_[i] -= o.v_[i];
        trim();
        return *this;
    }
    friend ParamExps operator+(ParamExps a, const ParamExps& b) { return a += b; }
    friend ParamExps operator-(ParamExps a, const ParamExps& b) { return a -= b; }
    ParamExps operator-() const {
        ParamExps r = *this;
        for (auto& x : r.v_) x = -x;
        return r;
    }
    /// Scale by an integer (used for bicharacter exponents a_k * b_j).
    ParamExps scaled(long long m) const {
        if (m == 0) return {};
        ParamExps r = *this;
        for (auto& x : r.v_) x = static_cast<int>(x * m);
        return r;
    }

    /// Sum of entries (grading for the grlex order).
    long long total() const noexcept {
        long long s = 0;
        for (int x : v_) s += x;
        return s;
    }

    friend bool operator==(const ParamExps& a, const ParamExps& b) { return a.v_ == b.v_; }

    /// Plain lexicographic order with implicit zero padding.
    friend bool operator<(const ParamExps& a, const ParamExps& b) {
        const std::size_t n = std::max(a.v_.size(), b.v_.size());
        for (std::size_t i = 0; i < n; ++i) {
            if (a[i] != b[i]) return a[i] < b[i];
        }
        return false;
    }

private:
    void trim() {
        while (!v_.empty() && v_.back() == 0) v_.pop_back();
    }

    Storage v_;
};

/// Graded lexicographic comparison on parameter exponents.
struct ParamGrlexLess {
    bool operator()(const ParamExps& a, const ParamExps& b) const {
        const long long ta = a.total(), tb = b.total();
        if (ta != tb) return ta < tb;
        return a < b;
    }
};

/// Writes a single doubled exponent the way it is parsed back: 1, 3, (1/2), (-3/2).
inline std::string format_half(int doubled) {
    if (doubled % 2 == 0) return std::to_string(doubled / 2);
    return "(" + std::to_string(doubled) + "/2)";
}

/// "q^2*t^(1/2)" or "" for the zero vector.
inline std::string format_param_monomial(const ParamExps& e, const ParamSet& params) {
    std::string out;
    for (std::size_t i = 0; i < e.length(); ++i) {
        if (e[i] == 0) continue;
        if (!out.empty()) out += '*';
        out += params.name(i);
        if (e[i] != 2) out += "^" + format_half(e[i]);
    }
    return out;
}

/// An element of K^*: an integer times a Laurent monomial in the parameters.
struct ScalarMonomial {
    Integer coeff = 1;
    ParamExps exps;

    ScalarMonomial() = default;
    ScalarMonomial(Integer c, ParamExps e) : coeff(std::move(c)), exps(std::move(e)) {
        if (coeff == 0) exps = ParamExps{};
    }

    static ScalarMonomial one() { return {}; }
    static ScalarMonomial power(ParamExps e) { return {1, std::move(e)}; }

    bool is_one() const { return coeff == 1 && exps.is_zero(); }

    friend ScalarMonomial operator*(const ScalarMonomial& a, const ScalarMonomial& b) {
        return {a.coeff * b.coeff, a.exps + b.exps};
    }

    friend bool operator==(const ScalarMonomial& a, const ScalarMonomial& b) {
        return a.coeff == b.coeff && a.exps == b.exps;
    }

    std::string str(const ParamSet& params) const {
        const std::string m = format_param_monomial(exps, params);
        if (m.empty()) return coeff.str();
        if (coeff == 1) return m;
        if (coeff == -1) return "-" + m;
        return coeff.str() + "*" + m;
    }
};

/// Finite sum of ScalarMonomials with pairwise distinct exponents: the
/// coefficient ring Z[p_1^(+-1/2), ...].
class CoeffPoly {
public:
    using Terms = std::map<ParamExps, Integer, ParamGrlexLess>;

    CoeffPoly() = default;
    CoeffPoly(long long c) {  // NOLINT(google-explicit-constructor)
        if (c != 0) terms_.emplace(ParamExps{}, Integer(c));
    }
    CoeffPoly(const ScalarMonomial& m) {  // NOLINT(google-explicit-constructor)
        if (m.coeff != 0) terms_.emplace(m.exps, m.coeff);
    }

    static CoeffPoly monomial(Integer c, ParamExps e) { return CoeffPoly(ScalarMonomial(std::move(c), std::move(e))); }

    const Terms& terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }
    std::size_t size() const noexcept { return terms_.size(); }
    bool is_one() const { return terms_.size() == 1 && terms_.begin()->first.is_zero() && terms_.begin()->second == 1; }
    bool is_monomial() const { return terms_.size() == 1; }

    /// A single term with coefficient +-1, i.e. a unit of the coefficient ring.
    bool is_unit() const {
        return terms_.size() == 1 && (terms_.begin()->second == 1 || terms_.begin()->second == -1);
    }

    ScalarMonomial leading() const {
        if (terms_.empty()) throw DivisionByZero("leading term of zero");
        const auto& [e, c] = *terms_.rbegin();
        return {c, e};
    }

    /// Inverse of a unit.
    CoeffPoly inverse() const {
        if (!is_unit()) throw NotDefined("coefficient " + str(ParamSet{}) + " is not invertible");
        const auto& [e, c] = *terms_.begin();
        return monomial(c, -e);
    }

    void add_term(const ParamExps& e, const Integer& c) {
        if (c == 0) return;
        auto it = terms_.find(e);
        if (it == terms_.end()) {
            terms_.emplace(e, c);
        } else {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    CoeffPoly& operator+=(const CoeffPoly& o) {
        for (const auto& [e, c] : o.terms_) add_term(e, c);
        return *this;
    }
    CoeffPoly& operator-=(const CoeffPoly& o) {
        for (const auto& [e, c] : o.terms_) add_term(e, -c);
        return *this;
    }
    friend CoeffPoly operator+(CoeffPoly a, const CoeffPoly& b) { return a += b; }
    friend CoeffPoly operator-(CoeffPoly a, const CoeffPoly& b) { return a -= b; }
    CoeffPoly operator-() const {
        CoeffPoly r;
        for (const auto& [e, c] : terms_) r.terms_.emplace(e, -c);
        return r;
    }

    friend CoeffPoly operator*(const CoeffPoly& a, const CoeffPoly& b) {
        CoeffPoly r;
        for (const auto& [ea, ca] : a.terms_) {
            for (const auto& [eb, cb] : b.terms_) r.add_term(ea + eb, ca * cb);
        }
        return r;
    }

    CoeffPoly times(const ScalarMonomial& m) const {
        CoeffPoly r;
        if (m.coeff == 0) return r;
        for (const auto& [e, c] : terms_) r.terms_.emplace(e + m.exps, c * m.coeff);
        return r;
    }

    /// Exact quotient `*this / d` by leading-term elimination.
    CoeffPoly exact_divide(const CoeffPoly& d) const {
        if (d.is_zero()) throw DivisionByZero("coefficient division by zero");
        if (d.is_monomial()) {
            const auto& [de, dc] = *d.terms_.begin();
            CoeffPoly r;
            for (const auto& [e, c] : terms_) {
                if (c % dc != 0) throw NotLeftDivisible("coefficient is not divisible");
                r.terms_.emplace(e - de, c / dc);
            }
            return r;
        }
        CoeffPoly rem = *this;
        CoeffPoly quot;
        const ScalarMonomial lead = d.leading();
        const std::size_t bound = (terms_.size() + 1) * d.size() + 4096;
        for (std::size_t iter = 0; !rem.is_zero(); ++iter) {
            if (iter > bound) throw NotLeftDivisible("coefficient division did not terminate");
            const ScalarMonomial lr = rem.leading();
            if (lr.coeff % lead.coeff != 0) throw NotLeftDivisible("coefficient is not divisible");
            const ScalarMonomial t{lr.coeff / lead.coeff, lr.exps - lead.exps};
            quot.add_term(t.exps, t.coeff);
            rem -= d.times(t);
        }
        return quot;
    }

    friend bool operator==(const CoeffPoly& a, const CoeffPoly& b) { return a.terms_ == b.terms_; }

    friend bool operator<(const CoeffPoly& a, const CoeffPoly& b) {
        return std::lexicographical_compare(
            a.terms_.begin(), a.terms_.end(), b.terms_.begin(), b.terms_.end(), [](const auto& x, const auto& y) {
                if (!(x.first == y.first)) return ParamGrlexLess{}(x.first, y.first);
                return x.second < y.second;
            });
    }

    /// Terms in descending order: "q^2 + 2 - q^(-1/2)".
    std::string str(const ParamSet& params) const {
        if (terms_.empty()) return "0";
        std::string out;
        bool first = true;
        for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
            ScalarMonomial m{it->second, it->first};
            std::string s;
            if (m.coeff < 0) {
                m.coeff = -m.coeff;
                s = first ? "-" : " - ";
            } else if (!first) {
                s = " + ";
            }
            out += s + m.str(params);
            first = false;
        }
        return out;
    }

private:
    Terms terms_;
};

} // namespace qcluster
