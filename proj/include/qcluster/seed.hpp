#pragma once

#include <algorithm>
#include <cstddef>
#include <deque>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <boost/rational.hpp>

#include "qcluster/errors.hpp"
#include "qcluster/label.hpp"
#include "qcluster/scalar.hpp"
#include "qcluster/torus.hpp"

namespace qcluster {

/// Sparse integer matrix indexed by (Label, Label).  Used for exchange
/// matrices and for the E/F mutation matrices.
class IntMatrix {
public:
    using Key = std::pair<Label, Label>;

    IntMatrix() = default;

    static IntMatrix identity(const std::vector<Label>& labels) {
        IntMatrix m;
        for (const auto& l : labels) m.set(l, l, 1);
        return m;
    }

    int get(const Label& i, const Label& j) const {
        auto it = entries_.find({i, j});
        return it == entries_.end() ? 0 : it->second;
    }

    void set(const Label& i, const Label& j, int v) {
        if (v == 0) {
            entries_.erase({i, j});
        } else {
            entries_[{i, j}] = v;
        }
    }

    void add(const Label& i, const Label& j, int v) { set(i, j, get(i, j) + v); }

    const std::map<Key, int>& entries() const noexcept { return entries_; }
    bool is_zero() const noexcept { return entries_.empty(); }

    /// Column k as an exponent vector (B~^k).
    ExponentVector column(const Label& k) const {
        ExponentVector v;
        for (const auto& [ij, x] : entries_) {
            if (ij.second == k) v.add(ij.first, x);
        }
        return v;
    }

    ExponentVector row(const Label& k) const {
        ExponentVector v;
        for (const auto& [ij, x] : entries_) {
            if (ij.first == k) v.add(ij.second, x);
        }
        return v;
    }

    /// Labels l with b_kl != 0 or b_lk != 0.
    std::set<Label> neighbors(const Label& k) const {
        std::set<Label> out;
        for (const auto& [ij, x] : entries_) {
            if (ij.first == k && ij.second != k) out.insert(ij.second);
            if (ij.second == k && ij.first != k) out.insert(ij.first);
        }
        return out;
    }

    IntMatrix restricted(const std::set<Label>& rows, const std::set<Label>& cols) const {
        IntMatrix m;
        for (const auto& [ij, x] : entries_) {
            if (rows.count(ij.first) && cols.count(ij.second)) m.entries_.emplace(ij, x);
        }
        return m;
    }

    IntMatrix relabeled(const std::function<Label(const Label&)>& f) const {
        IntMatrix m;
        for (const auto& [ij, x] : entries_) m.set(f(ij.first), f(ij.second), x);
        return m;
    }

    IntMatrix transposed() const {
        IntMatrix m;
        for (const auto& [ij, x] : entries_) m.entries_.emplace(Key{ij.second, ij.first}, x);
        return m;
    }

    friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
        std::map<Label, std::vector<std::pair<Label, int>>> brows;
        for (const auto& [ij, x] : b.entries_) brows[ij.first].emplace_back(ij.second, x);
        IntMatrix m;
        for (const auto& [ik, x] : a.entries_) {
            auto it = brows.find(ik.second);
            if (it == brows.end()) continue;
            for (const auto& [j, y] : it->second) m.add(ik.first, j, x * y);
        }
        return m;
    }

    friend bool operator==(const IntMatrix& a, const IntMatrix& b) { return a.entries_ == b.entries_; }

private:
    std::map<Key, int> entries_;
};

using ExchangeMatrix = IntMatrix;

/// Rows of a Z^I-grading: one integer vector per label, all of length dim().
class GradingMatrix {
public:
    GradingMatrix() = default;
    explicit GradingMatrix(std::size_t dim) : dim_(dim) {}

    std::size_t dim() const noexcept { return dim_; }

    const std::vector<long long>& row(const Label& l) const {
        auto it = rows_.find(l);
        if (it == rows_.end()) throw IndexError("no grading row for label " + l.str());
        return it->second;
    }
    bool has_row(const Label& l) const { return rows_.count(l) != 0; }

    void set_row(const Label& l, std::vector<long long> v) {
        if (v.size() != dim_) throw StructuralError("grading row for " + l.str() + " has the wrong length");
        rows_[l] = std::move(v);
    }

    const std::map<Label, std::vector<long long>>& rows() const noexcept { return rows_; }

    /// Degree of a monomial: sum_l a_l G_l.
    std::vector<long long> degree(const ExponentVector& a) const {
        std::vector<long long> d(dim_, 0);
        for (const auto& [l, v] : a.entries()) {
            const auto& g = row(l);
            for (std::size_t i = 0; i < dim_; ++i) d[i] += v * g[i];
        }
        return d;
    }

    GradingMatrix restricted(const std::set<Label>& keep) const {
        GradingMatrix g(dim_);
        for (const auto& [l, v] : rows_) {
            if (keep.count(l)) g.rows_.emplace(l, v);
        }
        return g;
    }

    friend bool operator==(const GradingMatrix& a, const GradingMatrix& b) {
        return a.dim_ == b.dim_ && a.rows_ == b.rows_;
    }

private:
    std::size_t dim_ = 0;
    std::map<Label, std::vector<long long>> rows_;
};

/// A graded quantum seed (M, B~, G, var, ex, inv).  The toric frame M is
/// stored as the expansion of each cluster variable in the based torus of
/// the initial seed of its mutation class (`ambient_r`).  Seeds are values:
/// mutation returns a new seed.
class Seed {
public:
    Seed() = default;

    /// An initial seed: frame(l) = Y^(e_l) and ambient_r = r.
    static Seed initial(ParamSet params, std::vector<Label> vars, std::set<Label> ex, std::set<Label> inv,
                        SkewExpMatrix r, ExchangeMatrix b, GradingMatrix g) {
        Seed s;
        s.params_ = std::move(params);
        std::sort(vars.begin(), vars.end());
        s.vars_ = std::move(vars);
        s.ex_ = std::move(ex);
        s.inv_ = std::move(inv);
        if (r.labels() != s.vars_) throw StructuralError("r-matrix index set differs from var");
        s.ambient_r_ = r;
        s.r_ = std::move(r);
        s.b_ = std::move(b);
        s.g_ = std::move(g);
        for (const auto& l : s.vars_) s.frame_.emplace(l, TorusElement::variable(l));
        return s;
    }

    const ParamSet& params() const noexcept { return params_; }
    const std::vector<Label>& vars() const noexcept { return vars_; }
    const std::set<Label>& ex() const noexcept { return ex_; }
    const std::set<Label>& inv() const noexcept { return inv_; }
    const SkewExpMatrix& r() const noexcept { return r_; }
    const ExchangeMatrix& b() const noexcept { return b_; }
    const GradingMatrix& g() const noexcept { return g_; }
    const std::map<Label, TorusElement>& frame() const noexcept { return frame_; }
    const TorusElement& frame(const Label& l) const {
        auto it = frame_.find(l);
        if (it == frame_.end()) throw IndexError("label " + l.str() + " is not in var");
        return it->second;
    }
    const SkewExpMatrix& ambient_r() const noexcept { return ambient_r_; }
    const std::map<Label, std::string>& names() const noexcept { return names_; }

    std::size_t rank() const noexcept { return vars_.size(); }
    bool has(const Label& l) const { return std::binary_search(vars_.begin(), vars_.end(), l); }
    bool is_exchangeable(const Label& l) const { return ex_.count(l) != 0; }
    std::set<Label> var_set() const { return {vars_.begin(), vars_.end()}; }

    /// True when every frame entry is the bare initial variable.
    bool is_initial() const {
        if (!(ambient_r_ == r_)) return false;
        return std::all_of(frame_.begin(), frame_.end(),
                           [](const auto& kv) { return kv.second == TorusElement::variable(kv.first); });
    }

    /// This seed regarded as the root of its own rooted cluster algebra.
    Seed rooted() const {
        Seed s = *this;
        s.ambient_r_ = r_;
        for (auto& [l, t] : s.frame_) t = TorusElement::variable(l);
        return s;
    }

    /// Display name of a variable: the names table, else the variable token.
    std::string display_name(const Label& l) const {
        auto it = names_.find(l);
        return it == names_.end() ? l.var_name() : it->second;
    }

    std::string format(const TorusElement& t) const { return format_element(t, ambient_r_, params_); }

    // Copies with one component replaced; the result is not re-validated.
    Seed with_r(SkewExpMatrix r) const {
        Seed s = *this;
        s.r_ = std::move(r);
        return s;
    }
    Seed with_b(ExchangeMatrix b) const {
        Seed s = *this;
        s.b_ = std::move(b);
        return s;
    }
    Seed with_g(GradingMatrix g) const {
        Seed s = *this;
        s.g_ = std::move(g);
        return s;
    }
    Seed with_names(std::map<Label, std::string> names) const {
        Seed s = *this;
        s.names_ = std::move(names);
        return s;
    }
    Seed with_frame(std::map<Label, TorusElement> frame, SkewExpMatrix ambient_r) const {
        Seed s = *this;
        s.frame_ = std::move(frame);
        s.ambient_r_ = std::move(ambient_r);
        return s;
    }

    friend bool operator==(const Seed& a, const Seed& b) {
        return a.vars_ == b.vars_ && a.ex_ == b.ex_ && a.inv_ == b.inv_ && a.r_ == b.r_ && a.b_ == b.b_ &&
               a.g_ == b.g_ && a.frame_ == b.frame_ && a.ambient_r_ == b.ambient_r_;
    }

private:
    friend Seed mutate_seed(const Seed& s, const Label& k);

    ParamSet params_;
    std::vector<Label> vars_;
    std::set<Label> ex_;
    std::set<Label> inv_;
    SkewExpMatrix r_;
    ExchangeMatrix b_;
    GradingMatrix g_;
    std::map<Label, TorusElement> frame_;
    SkewExpMatrix ambient_r_;
    std::map<Label, std::string> names_;
};

/// Pass/fail per named check.
struct ValidationReport {
    struct Check {
        std::string name;
        bool passed = true;
        std::string detail;
    };
    std::vector<Check> checks;

    bool ok() const {
        return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
    }

    const Check* find(const std::string& name) const {
        for (const auto& c : checks) {
            if (c.name == name) return &c;
        }
        return nullptr;
    }

    bool passed(const std::string& name) const {
        const Check* c = find(name);
        return c != nullptr && c->passed;
    }

    void add(std::string name, bool passed, std::string detail = {}) {
        checks.push_back({std::move(name), passed, std::move(detail)});
    }

    std::string str() const {
        std::string out;
        for (const auto& c : checks) {
            out += (c.passed ? "PASS " : "FAIL ") + c.name;
            if (!c.detail.empty()) out += ": " + c.detail;
            out += '\n';
        }
        return out;
    }
};

namespace detail {

inline std::string pair_str(const Label& a, const Label& b) { return "(" + a.str() + ", " + b.str() + ")"; }

/// t_kj = Omega_r(B~^k, e_j) as doubled exponents, for every j.
inline std::vector<ParamExps> compatibility_row(const SkewExpMatrix& r, const ExchangeMatrix& b, const Label& k) {
    std::vector<ParamExps> t(r.size());
    for (const auto& [s, bsk] : b.column(k).entries()) {
        const std::size_t is = r.index(s);
        for (std::size_t j = 0; j < r.size(); ++j) {
            const ParamExps& x = r.at(is, j);
            if (!x.is_zero()) t[j] += x.scaled(bsk);
        }
    }
    return t;
}

/// Positive integer symmetrizer search for the principal part; empty result
/// when none exists within `bound`.
inline std::optional<std::map<Label, long long>> find_symmetrizer(const ExchangeMatrix& b,
                                                                   const std::set<Label>& ex, long long bound) {
    using Q = boost::rational<long long>;
    std::map<Label, Q> d;
    std::map<Label, long long> out;
    for (const auto& start : ex) {
        if (d.count(start)) continue;
        std::vector<Label> comp;
        std::deque<Label> queue{start};
        d[start] = Q(1);
        while (!queue.empty()) {
            const Label i = queue.front();
            queue.pop_front();
            comp.push_back(i);
            for (const auto& j : ex) {
                const int bij = b.get(i, j), bji = b.get(j, i);
                if (i == j || (bij == 0 && bji == 0)) continue;
                if (bij == 0 || bji == 0) return std::nullopt;
                // d_i b_ij = -d_j b_ji
                const Q dj = d[i] * Q(bij) / Q(-bji);
                if (dj <= 0) return std::nullopt;
                auto it = d.find(j);
                if (it == d.end()) {
                    d[j] = dj;
                    queue.push_back(j);
                } else if (it->second != dj) {
                    return std::nullopt;
                }
            }
        }
        long long lcm = 1;
        for (const auto& l : comp) lcm = std::lcm(lcm, d[l].denominator());
        long long g = 0;
        for (const auto& l : comp) g = std::gcd(g, (d[l] * lcm).numerator());
        for (const auto& l : comp) {
            const long long v = (d[l] * lcm).numerator() / g;
            if (v > bound) return std::nullopt;
            out[l] = v;
        }
    }
    return out;
}

} // namespace detail

/// Runs every seed check and reports each one by name.
inline ValidationReport validate_seed(const Seed& s, long long symmetrizer_bound = 64) {
    ValidationReport rep;
    const std::set<Label> vars = s.var_set();

    {
        std::string why;
        for (const auto& l : s.ex()) {
            if (!vars.count(l)) why = "ex label " + l.str() + " not in var";
        }
        for (const auto& l : s.inv()) {
            if (!vars.count(l) || s.ex().count(l)) why = "inv label " + l.str() + " not in var \\ ex";
        }
        if (s.r().labels() != s.vars()) why = "r-matrix index set differs from var";
        for (const auto& [ij, x] : s.b().entries()) {
            if (!vars.count(ij.first) || !vars.count(ij.second)) {
                why = "exchange entry " + detail::pair_str(ij.first, ij.second) + " outside var";
            }
        }
        for (const auto& l : s.vars()) {
            if (!s.g().has_row(l)) why = "no grading row for " + l.str();
            if (!s.frame().count(l)) why = "no frame entry for " + l.str();
        }
        rep.add("index_sets", why.empty(), why);
    }

    // Finite matrices are locally finite; kept as a named check for reports.
    rep.add("local_finiteness", true);

    {
        std::string why;
        for (const auto& [ij, x] : s.b().entries()) {
            const int y = s.b().get(ij.second, ij.first);
            if (ij.first == ij.second) {
                why = "diagonal entry at " + ij.first.str() + " is nonzero";
            } else if (static_cast<long long>(x) * y >= 0) {
                why = "b" + detail::pair_str(ij.first, ij.second) + " = " + std::to_string(x) + " but b" +
                      detail::pair_str(ij.second, ij.first) + " = " + std::to_string(y);
            }
            if (!why.empty()) break;
        }
        rep.add("sign_skew_symmetry", why.empty(), why);
    }

    {
        bool skew = true;
        for (const auto& i : s.ex()) {
            for (const auto& j : s.ex()) {
                if (s.b().get(i, j) != -s.b().get(j, i)) skew = false;
            }
        }
        const bool ok = skew || detail::find_symmetrizer(s.b(), s.ex(), symmetrizer_bound).has_value();
        rep.add("skew_symmetrizable", ok, ok ? "" : "no positive diagonal symmetrizer within bound");
    }

    if (rep.passed("index_sets")) {
        if (s.r().is_trivial()) {
            rep.add("compatibility", true, "classical seed (trivial r): not applicable");
        } else {
            std::string why;
            for (const auto& k : s.ex()) {
                const auto t = detail::compatibility_row(s.r(), s.b(), k);
                for (std::size_t j = 0; j < s.vars().size(); ++j) {
                    const Label& lj = s.vars()[j];
                    if (lj == k && t[j].is_zero()) {
                        why = "t" + detail::pair_str(k, k) + " is trivial";
                    } else if (lj != k && !t[j].is_zero()) {
                        why = "t" + detail::pair_str(k, lj) + " = " +
                              ScalarMonomial::power(t[j]).str(s.params()) + " is not 1";
                    }
                    if (!why.empty()) break;
                }
                if (!why.empty()) break;
            }
            rep.add("compatibility", why.empty(), why);
        }

        std::string why;
        for (const auto& k : s.ex()) {
            std::vector<long long> sum(s.g().dim(), 0);
            for (const auto& [j, bjk] : s.b().column(k).entries()) {
                const auto& gj = s.g().row(j);
                for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += bjk * gj[i];
            }
            if (std::any_of(sum.begin(), sum.end(), [](long long v) { return v != 0; })) {
                why = "column " + k.str() + " of B~^T G is nonzero";
                break;
            }
        }
        rep.add("grading", why.empty(), why);

        why.clear();
        for (std::size_t a = 0; a < s.vars().size() && why.empty(); ++a) {
            for (std::size_t c = a + 1; c < s.vars().size(); ++c) {
                const Label& i = s.vars()[a];
                const Label& j = s.vars()[c];
                const TorusElement lhs = torus_mul(s.ambient_r(), s.frame(i), s.frame(j));
                const TorusElement rhs = torus_mul(s.ambient_r(), s.frame(j), s.frame(i))
                                             .scaled(ScalarMonomial::power(s.r().exps(i, j).scaled(2)));
                if (!(lhs == rhs)) {
                    why = "frame variables " + detail::pair_str(i, j) + " violate x_i x_j = r_ij^2 x_j x_i";
                    break;
                }
            }
        }
        rep.add("frame_quasi_commutation", why.empty(), why);
    }
    return rep;
}

/// E = E_+ and F = F_+ for mutation at k, over the labels `vars`.
inline std::pair<IntMatrix, IntMatrix> build_ef(const ExchangeMatrix& b, const std::vector<Label>& vars,
                                                const std::set<Label>& ex, const Label& k) {
    if (!ex.count(k)) throw PreconditionError("label " + k.str() + " is not exchangeable");
    IntMatrix e = IntMatrix::identity(vars);
    IntMatrix f = IntMatrix::identity(vars);
    e.set(k, k, -1);
    f.set(k, k, -1);
    for (const auto& i : vars) {
        if (i == k) continue;
        e.set(i, k, std::max(0, -b.get(i, k)));
        f.set(k, i, std::max(0, b.get(k, i)));
    }
    return {e, f};
}

inline std::pair<IntMatrix, IntMatrix> build_ef(const Seed& s, const Label& k) {
    return build_ef(s.b(), s.vars(), s.ex(), k);
}

/// Matrix mutation by the entrywise rule:
/// b'_ij = -b_ij if k in {i,j}, else b_ij + (|b_ik| b_kj + b_ik |b_kj|) / 2.
inline ExchangeMatrix mutate_exchange(const ExchangeMatrix& b, const std::set<Label>& ex, const Label& k) {
    if (!ex.count(k)) throw PreconditionError("label " + k.str() + " is not exchangeable");
    ExchangeMatrix out = b;
    const ExponentVector col = b.column(k);
    const ExponentVector row = b.row(k);
    for (const auto& [i, bik] : col.entries()) {
        for (const auto& [j, bkj] : row.entries()) {
            if (i == k || j == k) continue;
            const int delta = (std::abs(bik) * bkj + bik * std::abs(bkj)) / 2;
            if (delta != 0) out.add(i, j, delta);
        }
    }
    for (const auto& [i, bik] : col.entries()) out.set(i, k, -bik);
    for (const auto& [j, bkj] : row.entries()) out.set(k, j, -bkj);
    return out;
}

/// Matrix mutation as the product E B~ F.
inline ExchangeMatrix mutate_exchange_ebf(const ExchangeMatrix& b, const std::vector<Label>& vars,
                                          const std::set<Label>& ex, const Label& k) {
    const auto [e, f] = build_ef(b, vars, ex, k);
    return e * b * f;
}

namespace detail {

/// Column k of E: -e_k + sum_i max(0, -b_ik) e_i.
inline ExponentVector e_column(const ExchangeMatrix& b, const Label& k) {
    ExponentVector v = ExponentVector::unit(k, -1);
    for (const auto& [i, bik] : b.column(k).entries()) {
        if (i != k && bik < 0) v.add(i, -bik);
    }
    return v;
}

} // namespace detail

/// mu_k(r)_ij = prod_{s,t} r_st^(E_si E_tj), i.e. Omega_r(E^i, E^j).
inline SkewExpMatrix mutate_r(const SkewExpMatrix& r, const ExchangeMatrix& b, const std::set<Label>& ex,
                              const Label& k) {
    if (!ex.count(k)) throw PreconditionError("label " + k.str() + " is not exchangeable");
    const ExponentVector ek = detail::e_column(b, k);
    SkewExpMatrix out = r;
    for (const auto& j : r.labels()) {
        if (j == k) continue;
        out.set(k, j, omega(r, ek, ExponentVector::unit(j)).exps);
    }
    return out;
}

/// mu_k(G) = E^T G: only row k changes.
inline GradingMatrix mutate_grading(const GradingMatrix& g, const ExchangeMatrix& b, const std::set<Label>& ex,
                                    const Label& k) {
    if (!ex.count(k)) throw PreconditionError("label " + k.str() + " is not exchangeable");
    GradingMatrix out = g;
    out.set_row(k, g.degree(detail::e_column(b, k)));
    return out;
}

namespace detail {

/// M(a) for a >= 0 in the current frame: S_r(a) times the ordered product.
inline TorusElement frame_monomial(const Seed& s, const ExponentVector& a) {
    TorusElement acc = TorusElement::one();
    for (const auto& [l, v] : a.entries()) {
        if (v < 0) throw PreconditionError("frame_monomial needs a nonnegative exponent");
        for (int i = 0; i < v; ++i) acc = torus_mul(s.ambient_r(), acc, s.frame(l));
    }
    return acc.scaled(s_norm(s.r(), a));
}

} // namespace detail

/// The two exponent vectors -e_k + [b^k]_+ and -e_k + [b^k]_- of the exchange
/// relation, with [b^k]_- = sum_{b_ik<0} |b_ik| e_i.
inline std::pair<ExponentVector, ExponentVector> exchange_exponents(const ExchangeMatrix& b, const Label& k) {
    ExponentVector plus = ExponentVector::unit(k, -1);
    ExponentVector minus = ExponentVector::unit(k, -1);
    for (const auto& [i, bik] : b.column(k).entries()) {
        if (bik > 0) plus.add(i, bik);
        if (bik < 0) minus.add(i, -bik);
    }
    return {plus, minus};
}

/// Right-hand side N of x_k * x_k' = N for mutation at k, in the ambient torus.
inline TorusElement exchange_numerator(const Seed& s, const Label& k) {
    ExponentVector plus, minus;
    for (const auto& [i, bik] : s.b().column(k).entries()) {
        if (bik > 0) plus.add(i, bik);
        if (bik < 0) minus.add(i, -bik);
    }
    // M(-e_k + a) = Omega_r(e_k, a) x_k^(-1) M(a)
    const ExponentVector ek = ExponentVector::unit(k);
    TorusElement n = detail::frame_monomial(s, plus).scaled(omega(s.r(), ek, plus));
    n += detail::frame_monomial(s, minus).scaled(omega(s.r(), ek, minus));
    return n;
}

/// Mutation of every seed component at exchangeable index k.
inline Seed mutate_seed(const Seed& s, const Label& k) {
    if (!s.is_exchangeable(k)) throw PreconditionError("label " + k.str() + " is not exchangeable");
    Seed out = s;
    const TorusElement numerator = exchange_numerator(s, k);
    try {
        out.frame_[k] = torus_left_divide(s.ambient_r(), s.frame(k), numerator);
    } catch (const NotLeftDivisible& e) {
        throw NotLeftDivisible(std::string("internal inconsistency: exchange relation at ") + k.str() +
                               " is not divisible (" + e.what() + ")");
    }
    out.b_ = mutate_exchange(s.b(), s.ex(), k);
    out.r_ = mutate_r(s.r(), s.b(), s.ex(), k);
    out.g_ = mutate_grading(s.g(), s.b(), s.ex(), k);
    return out;
}

inline Seed mutate_along(Seed s, const std::vector<Label>& seq) {
    for (const auto& k : seq) s = mutate_seed(s, k);
    return s;
}

/// Every sequence of exchangeable labels of length <= depth, shortest first,
/// lexicographic within a length.  Includes the empty sequence.
inline std::vector<std::vector<Label>> enumerate_admissible(const Seed& s, std::size_t depth) {
    std::vector<std::vector<Label>> out{{}};
    std::size_t begin = 0;
    for (std::size_t len = 1; len <= depth; ++len) {
        const std::size_t end = out.size();
        for (std::size_t i = begin; i < end; ++i) {
            for (const auto& k : s.ex()) {
                auto seq = out[i];
                seq.push_back(k);
                out.push_back(std::move(seq));
            }
        }
        begin = end;
    }
    return out;
}

/// Depth-first walk over all admissible sequences of length <= depth,
/// sharing prefix mutations.  The visitor sees (sequence, mutated seed).
inline void for_each_mutation(const Seed& s, std::size_t depth,
                              const std::function<void(const std::vector<Label>&, const Seed&)>& visit) {
    std::vector<Label> seq;
    std::function<void(const Seed&)> rec = [&](const Seed& cur) {
        visit(seq, cur);
        if (seq.size() == depth) return;
        for (const auto& k : cur.ex()) {
            seq.push_back(k);
            rec(mutate_seed(cur, k));
            seq.pop_back();
        }
    };
    rec(s);
}

/// Canonical string key for exact (labelled) seed equality.
inline std::string seed_key(const Seed& s) {
    std::ostringstream os;
    for (const auto& [l, t] : s.frame()) {
        os << l.str() << '=';
        for (const auto& [a, c] : t.terms()) {
            os << a.str() << '[';
            for (const auto& [e, n] : c.terms()) {
                os << n << '@';
                for (int x : e.to_vector()) os << x << ',';
                os << ';';
            }
            os << ']';
        }
        os << '|';
    }
    os << "B";
    for (const auto& [ij, x] : s.b().entries()) os << ij.first.str() << ij.second.str() << x << ';';
    os << "r";
    for (std::size_t i = 0; i < s.r().size(); ++i) {
        for (std::size_t j = i + 1; j < s.r().size(); ++j) {
            for (int x : s.r().at(i, j).to_vector()) os << x << ',';
            os << ';';
        }
    }
    os << "G";
    for (const auto& [l, row] : s.g().rows()) {
        for (long long x : row) os << x << ',';
        os << ';';
    }
    return os.str();
}

struct ClosureReport {
    bool complete = false;
    std::size_t seeds = 0;
    /// Distinct quantum cluster variables, frozen ones included.
    std::vector<TorusElement> variables;
};

/// Breadth-first closure of the mutation class, stopping after `max_seeds`
/// distinct (labelled) seeds.
inline ClosureReport mutation_closure(const Seed& s, std::size_t max_seeds) {
    ClosureReport rep;
    std::set<std::string> seen;
    std::set<TorusElement> vars;
    std::deque<Seed> queue;
    seen.insert(seed_key(s));
    queue.push_back(s);
    rep.complete = true;
    while (!queue.empty()) {
        const Seed cur = std::move(queue.front());
        queue.pop_front();
        ++rep.seeds;
        for (const auto& [l, t] : cur.frame()) vars.insert(t);
        for (const auto& k : cur.ex()) {
            Seed next = mutate_seed(cur, k);
            std::string key = seed_key(next);
            if (seen.count(key)) continue;
            if (seen.size() >= max_seeds) {
                rep.complete = false;
                continue;
            }
            seen.insert(std::move(key));
            queue.push_back(std::move(next));
        }
    }
    rep.variables.assign(vars.begin(), vars.end());
    return rep;
}

} // namespace qcluster
