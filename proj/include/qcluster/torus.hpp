#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <boost/container/small_vector.hpp>

#include "qcluster/errors.hpp"
#include "qcluster/label.hpp"
#include "qcluster/scalar.hpp"

namespace qcluster {

/// Finite-support integer vector indexed by labels (an element of Z^var).
class ExponentVector {
public:
    using Entry = std::pair<Label, int>;
    using Storage = boost::container::small_vector<Entry, 6>;

    ExponentVector() = default;
    ExponentVector(std::initializer_list<Entry> entries) {
        for (const auto& [l, v] : entries) add(l, v);
    }

    static ExponentVector unit(const Label& l, int v = 1) {
        ExponentVector e;
        e.add(l, v);
        return e;
    }

    const Storage& entries() const& noexcept { return e_; }
    // Temporaries such as b.column(k) hand their storage over, so a range-for
    // over b.column(k).entries() does not dangle.
    Storage entries() && noexcept { return std::move(e_); }
    bool is_zero() const noexcept { return e_.empty(); }
    std::size_t support_size() const noexcept { return e_.size(); }

    int get(const Label& l) const {
        auto it = std::lower_bound(e_.begin(), e_.end(), l, [](const Entry& x, const Label& y) { return x.first < y; });
        return (it != e_.end() && it->first == l) ? it->second : 0;
    }

    /// Adds `v` to the entry at `l`, dropping it if it becomes zero.
    void add(const Label& l, int v) {
        if (v == 0) return;
        auto it = std::lower_bound(e_.begin(), e_.end(), l, [](const Entry& x, const Label& y) { return x.first < y; });
        if (it != e_.end() && it->first == l) {
            it->second += v;
            if (it->second == 0) e_.erase(it);
        } else {
            e_.insert(it, Entry{l, v});
        }
    }

    void set(const Label& l, int v) { add(l, v - get(l)); }

    friend ExponentVector operator+(const ExponentVector& a, const ExponentVector& b) {
        ExponentVector r;
        r.e_.reserve(a.e_.size() + b.e_.size());
        auto i = a.e_.begin();
        auto j = b.e_.begin();
        while (i != a.e_.end() || j != b.e_.end()) {
            if (j == b.e_.end() || (i != a.e_.end() && i->first < j->first)) {
                r.e_.push_back(*i++);
            } else if (i == a.e_.end() || j->first < i->first) {
                r.e_.push_back(*j++);
            } else {
                const int s = i->second + j->second;
                if (s != 0) r.e_.push_back(Entry{i->first, s});
                ++i;
                ++j;
            }
        }
        return r;
    }
    ExponentVector operator-() const {
        ExponentVector r = *this;
        for (auto& [l, v] : r.e_) v = -v;
        return r;
    }
    friend ExponentVector operator-(const ExponentVector& a, const ExponentVector& b) { return a + (-b); }
    ExponentVector scaled(int m) const {
        if (m == 0) return {};
        ExponentVector r = *this;
        for (auto& [l, v] : r.e_) v *= m;
        return r;
    }

    long long total_degree() const noexcept {
        long long s = 0;
        for (const auto& [l, v] : e_) s += v;
        return s;
    }

    /// Entries restricted to labels accepted by `keep`.
    ExponentVector filtered(const std::function<bool(const Label&)>& keep) const {
        ExponentVector r;
        for (const auto& e : e_) {
            if (keep(e.first)) r.e_.push_back(e);
        }
        return r;
    }

    /// Relabels every entry; `f` must preserve distinctness.
    ExponentVector relabeled(const std::function<Label(const Label&)>& f) const {
        ExponentVector r;
        for (const auto& [l, v] : e_) r.add(f(l), v);
        return r;
    }

    friend bool operator==(const ExponentVector& a, const ExponentVector& b) { return a.e_ == b.e_; }

    std::string str() const {
        std::string s = "{";
        bool first = true;
        for (const auto& [l, v] : e_) {
            if (!first) s += ", ";
            s += l.str() + ":" + std::to_string(v);
            first = false;
        }
        return s + "}";
    }

private:
    Storage e_;
};

/// Graded lexicographic term order on exponent vectors under the label order.
/// It is a group order on Z^var, so leading terms multiply.
struct GrlexLess {
    bool operator()(const ExponentVector& a, const ExponentVector& b) const {
        const long long ta = a.total_degree(), tb = b.total_degree();
        if (ta != tb) return ta < tb;
        auto i = a.entries().begin();
        auto j = b.entries().begin();
        const auto ie = a.entries().end();
        const auto je = b.entries().end();
        while (i != ie || j != je) {
            if (j == je || (i != ie && i->first < j->first)) {
                return i->second < 0;
            }
            if (i == ie || j->first < i->first) {
                return j->second > 0;
            }
            if (i->second != j->second) return i->second < j->second;
            ++i;
            ++j;
        }
        return false;
    }
};

/// Multiplicatively skew-symmetric matrix r over a finite label set, stored as
/// doubled parameter exponents: r_kj = prod_p p^(table[k][j][p] / 2).  Every
/// entry has coefficient 1; r_kk = 1 and r_jk = r_kj^(-1) hold by construction.
class SkewExpMatrix {
public:
    SkewExpMatrix() = default;
    explicit SkewExpMatrix(std::vector<Label> labels) : labels_(std::move(labels)) {
        std::sort(labels_.begin(), labels_.end());
        if (std::adjacent_find(labels_.begin(), labels_.end()) != labels_.end()) {
            throw StructuralError("duplicate label in r-matrix index set");
        }
        table_.assign(labels_.size() * labels_.size(), ParamExps{});
    }

    const std::vector<Label>& labels() const noexcept { return labels_; }
    std::size_t size() const noexcept { return labels_.size(); }

    bool contains(const Label& l) const { return std::binary_search(labels_.begin(), labels_.end(), l); }

    std::size_t index(const Label& l) const {
        auto it = std::lower_bound(labels_.begin(), labels_.end(), l);
        if (it == labels_.end() || *it != l) throw IndexError("label " + l.str() + " outside the r-matrix index set");
        return static_cast<std::size_t>(it - labels_.begin());
    }

    /// Doubled exponents of r_kj.
    const ParamExps& exps(const Label& k, const Label& j) const { return at(index(k), index(j)); }
    const ParamExps& at(std::size_t k, std::size_t j) const { return table_[k * labels_.size() + j]; }

    ScalarMonomial entry(const Label& k, const Label& j) const { return ScalarMonomial::power(exps(k, j)); }

    /// Sets r_kj and, implicitly, r_jk = r_kj^(-1).
    void set(const Label& k, const Label& j, const ParamExps& e) {
        const std::size_t a = index(k), b = index(j);
        if (a == b) {
            if (!e.is_zero()) throw StructuralError("diagonal entry r_" + k.str() + k.str() + " must be 1");
            return;
        }
        table_[a * labels_.size() + b] = e;
        table_[b * labels_.size() + a] = -e;
    }

    /// The classical case: every entry is 1.
    bool is_trivial() const {
        return std::all_of(table_.begin(), table_.end(), [](const ParamExps& e) { return e.is_zero(); });
    }

    /// Restriction to a subset of the labels.
    SkewExpMatrix restricted(const std::vector<Label>& subset) const {
        SkewExpMatrix r(subset);
        for (std::size_t a = 0; a < r.labels_.size(); ++a) {
            for (std::size_t b = a + 1; b < r.labels_.size(); ++b) {
                r.set(r.labels_[a], r.labels_[b], exps(r.labels_[a], r.labels_[b]));
            }
        }
        return r;
    }

    friend bool operator==(const SkewExpMatrix& a, const SkewExpMatrix& b) {
        return a.labels_ == b.labels_ && a.table_ == b.table_;
    }

private:
    std::vector<Label> labels_;
    std::vector<ParamExps> table_;
};

/// Bicharacter Omega_r(a, b) = prod_{k,j} r_kj^(a_k b_j).
inline ScalarMonomial omega(const SkewExpMatrix& r, const ExponentVector& a, const ExponentVector& b) {
    ParamExps e;
    for (const auto& [k, ak] : a.entries()) {
        const std::size_t ik = r.index(k);
        for (const auto& [j, bj] : b.entries()) {
            const ParamExps& x = r.at(ik, r.index(j));
            if (!x.is_zero()) e += x.scaled(static_cast<long long>(ak) * bj);
        }
    }
    return ScalarMonomial::power(e);
}

/// Normalization S_r(a) = prod_{j<k} r_jk^(-a_j a_k), with j<k in label order.
inline ScalarMonomial s_norm(const SkewExpMatrix& r, const ExponentVector& a) {
    ParamExps e;
    const auto& ent = a.entries();
    std::vector<std::size_t> idx;
    idx.reserve(ent.size());
    for (const auto& [l, v] : ent) idx.push_back(r.index(l));
    for (std::size_t x = 0; x < ent.size(); ++x) {
        for (std::size_t y = x + 1; y < ent.size(); ++y) {
            const ParamExps& rj = r.at(idx[x], idx[y]);
            if (!rj.is_zero()) e += rj.scaled(-static_cast<long long>(ent[x].second) * ent[y].second);
        }
    }
    return ScalarMonomial::power(e);
}

/// Element of the based quantum torus: a finite combination of the
/// normalized basis elements Y^(a) with coefficients in CoeffPoly.
class TorusElement {
public:
    using Terms = std::map<ExponentVector, CoeffPoly, GrlexLess>;

    TorusElement() = default;

    static TorusElement one() { return constant(CoeffPoly(1)); }
    static TorusElement constant(const CoeffPoly& c) { return monomial(ExponentVector{}, c); }
    /// The initial cluster variable Y^(e_l).
    static TorusElement variable(const Label& l) { return monomial(ExponentVector::unit(l), CoeffPoly(1)); }
    static TorusElement monomial(const ExponentVector& a, const CoeffPoly& c) {
        TorusElement t;
        t.add_term(a, c);
        return t;
    }

    const Terms& terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }
    std::size_t size() const noexcept { return terms_.size(); }

    /// True for a constant (an element of the coefficient ring).
    bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_zero()); }
    CoeffPoly constant_value() const {
        if (terms_.empty()) return {};
        if (!is_constant()) throw StructuralError("element is not a constant");
        return terms_.begin()->second;
    }

    const Terms::value_type& leading() const {
        if (terms_.empty()) throw DivisionByZero("leading term of zero");
        return *terms_.rbegin();
    }

    void add_term(const ExponentVector& a, const CoeffPoly& c) {
        if (c.is_zero()) return;
        auto it = terms_.find(a);
        if (it == terms_.end()) {
            terms_.emplace(a, c);
        } else {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    TorusElement& operator+=(const TorusElement& o) {
        for (const auto& [a, c] : o.terms_) add_term(a, c);
        return *this;
    }
    TorusElement& operator-=(const TorusElement& o) {
        for (const auto& [a, c] : o.terms_) add_term(a, -c);
        return *this;
    }
    friend TorusElement operator+(TorusElement a, const TorusElement& b) { return a += b; }
    friend TorusElement operator-(TorusElement a, const TorusElement& b) { return a -= b; }
    TorusElement operator-() const {
        TorusElement r;
        for (const auto& [a, c] : terms_) r.terms_.emplace(a, -c);
        return r;
    }

    /// Multiplication by a central scalar.
    TorusElement scaled(const CoeffPoly& s) const {
        TorusElement r;
        if (s.is_zero()) return r;
        for (const auto& [a, c] : terms_) r.add_term(a, c * s);
        return r;
    }

    /// Every exponent vector in the support.
    std::set<Label> support_labels() const {
        std::set<Label> s;
        for (const auto& [a, c] : terms_) {
            for (const auto& [l, v] : a.entries()) s.insert(l);
        }
        return s;
    }

    TorusElement relabeled(const std::function<Label(const Label&)>& f) const {
        TorusElement r;
        for (const auto& [a, c] : terms_) r.add_term(a.relabeled(f), c);
        return r;
    }

    friend bool operator==(const TorusElement& a, const TorusElement& b) { return a.terms_ == b.terms_; }

    friend bool operator<(const TorusElement& a, const TorusElement& b) {
        return std::lexicographical_compare(
            a.terms_.begin(), a.terms_.end(), b.terms_.begin(), b.terms_.end(), [](const auto& x, const auto& y) {
                if (!(x.first == y.first)) return GrlexLess{}(x.first, y.first);
                return x.second < y.second;
            });
    }

private:
    Terms terms_;
};

/// Product in the based torus: Y^(a) Y^(b) = Omega_r(a,b) Y^(a+b), extended bilinearly.
inline TorusElement torus_mul(const SkewExpMatrix& r, const TorusElement& p, const TorusElement& s) {
    TorusElement out;
    if (p.is_zero() || s.is_zero()) return out;
    // Row of Omega for each left exponent: w[j] = sum_k a_k r_kj.
    for (const auto& [a, ca] : p.terms()) {
        std::vector<ParamExps> w(r.size());
        for (const auto& [k, ak] : a.entries()) {
            const std::size_t ik = r.index(k);
            for (std::size_t j = 0; j < r.size(); ++j) {
                const ParamExps& x = r.at(ik, j);
                if (!x.is_zero()) w[j] += x.scaled(ak);
            }
        }
        for (const auto& [b, cb] : s.terms()) {
            ParamExps e;
            for (const auto& [j, bj] : b.entries()) {
                const ParamExps& x = w[r.index(j)];
                if (!x.is_zero()) e += x.scaled(bj);
            }
            CoeffPoly c = ca * cb;
            if (!e.is_zero()) c = c.times(ScalarMonomial::power(e));
            out.add_term(a + b, c);
        }
    }
    return out;
}

/// The exact left quotient q with d * q = p, by leading-term elimination in
/// the graded-lex order.  Throws NotLeftDivisible when no such q exists.
inline TorusElement torus_left_divide(const SkewExpMatrix& r, const TorusElement& d, const TorusElement& p,
                                      std::size_t extra_iterations = 100000) {
    if (d.is_zero()) throw DivisionByZero("left division by zero");
    TorusElement quot;
    TorusElement rem = p;
    const auto& [lead_a, lead_c] = d.leading();
    const ExponentVector lead_exp = lead_a;
    const CoeffPoly lead_coeff = lead_c;
    const std::size_t bound = p.size() * d.size() + extra_iterations;
    for (std::size_t iter = 0; !rem.is_zero(); ++iter) {
        if (iter > bound) throw NotLeftDivisible("left division exceeded its iteration bound");
        const auto& [ra, rc] = rem.leading();
        const ExponentVector qa = ra - lead_exp;
        // d * (c Y^(qa)) leads with lead_coeff * c * Omega(lead_exp, qa) Y^(ra).
        const ScalarMonomial w = omega(r, lead_exp, qa);
        CoeffPoly c;
        try {
            c = rc.times(ScalarMonomial(1, -w.exps)).exact_divide(lead_coeff);
        } catch (const NotLeftDivisible&) {
            throw NotLeftDivisible("leading coefficient does not divide at exponent " + ra.str());
        }
        const TorusElement step = TorusElement::monomial(qa, c);
        quot += step;
        rem -= torus_mul(r, d, step);
    }
    return quot;
}

/// Prints an element as ordered monomials x^a = S_r(a)^(-1) Y^(a), terms in
/// descending term order: "q*x1*x2^-1*x3 + x2^-1".
inline std::string format_element(const TorusElement& t, const SkewExpMatrix& r, const ParamSet& params) {
    if (t.is_zero()) return "0";
    std::string out;
    bool first = true;
    for (auto it = t.terms().rbegin(); it != t.terms().rend(); ++it) {
        const ExponentVector& a = it->first;
        CoeffPoly c = it->second.times(s_norm(r, a));
        std::string mono;
        for (const auto& [l, v] : a.entries()) {
            if (!mono.empty()) mono += '*';
            mono += l.var_name();
            if (v != 1) mono += "^" + std::to_string(v);
        }
        std::string coef;
        bool negative = false;
        if (c.is_monomial()) {
            ScalarMonomial m = c.leading();
            if (m.coeff < 0) {
                negative = true;
                m.coeff = -m.coeff;
            }
            coef = m.str(params);
        } else {
            coef = "(" + c.str(params) + ")";
        }
        std::string term;
        if (mono.empty()) {
            term = coef;
        } else if (coef == "1") {
            term = mono;
        } else {
            term = coef + "*" + mono;
        }
        if (first) {
            out += negative ? "-" + term : term;
        } else {
            out += negative ? " - " + term : " + " + term;
        }
        first = false;
    }
    return out;
}

} // namespace qcluster
