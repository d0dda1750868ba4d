#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "qcluster/errors.hpp"
#include "qcluster/label.hpp"
#include "qcluster/scalar.hpp"
#include "qcluster/seed.hpp"
#include "qcluster/torus.hpp"

namespace qcluster {

/// Image of one source variable: a target label or a scalar.
struct VarImage {
    std::optional<Label> label;
    CoeffPoly scalar;

    static VarImage to_label(const Label& l) { return {l, {}}; }
    static VarImage to_scalar(CoeffPoly c) { return {std::nullopt, std::move(c)}; }

    bool is_scalar() const noexcept { return !label.has_value(); }

    friend bool operator==(const VarImage& a, const VarImage& b) {
        return a.label == b.label && (a.label.has_value() || a.scalar == b.scalar);
    }
};

/// An assignment of every source initial variable to a target variable or a
/// scalar.  Degrees are compared through `degree_map` (row s = image of the
/// s-th unit vector of the source grading group); when absent the two
/// gradings must have the same dimension and are compared directly.
class MorphismSpec {
public:
    MorphismSpec() = default;
    MorphismSpec(Seed source, Seed target, std::map<Label, VarImage> var_map,
                 std::optional<std::vector<std::vector<long long>>> degree_map = std::nullopt)
        : source_(std::move(source)), target_(std::move(target)), var_map_(std::move(var_map)),
          degree_map_(std::move(degree_map)) {}

    const Seed& source() const noexcept { return source_; }
    const Seed& target() const noexcept { return target_; }
    const std::map<Label, VarImage>& var_map() const noexcept { return var_map_; }
    const std::optional<std::vector<std::vector<long long>>>& degree_map() const noexcept { return degree_map_; }

    const VarImage& image(const Label& l) const {
        auto it = var_map_.find(l);
        if (it == var_map_.end()) throw IndexError("source label " + l.str() + " is not mapped");
        return it->second;
    }

    /// f-bar(l), or nullopt for the infinity fiber.
    std::optional<Label> index_image(const Label& l) const { return image(l).label; }

    std::vector<long long> map_degree(const std::vector<long long>& d) const {
        if (!degree_map_) return d;
        const auto& m = *degree_map_;
        if (m.size() != d.size()) throw StructuralError("degree map does not match the source grading");
        std::vector<long long> out(target_.g().dim(), 0);
        for (std::size_t s = 0; s < d.size(); ++s) {
            if (m[s].size() != out.size()) throw StructuralError("degree map does not match the target grading");
            for (std::size_t t = 0; t < out.size(); ++t) out[t] += d[s] * m[s][t];
        }
        return out;
    }

    Seed& mutable_target() noexcept { return target_; }
    Seed& mutable_source() noexcept { return source_; }

private:
    Seed source_;
    Seed target_;
    std::map<Label, VarImage> var_map_;
    std::optional<std::vector<std::vector<long long>>> degree_map_;
};

struct VerificationResult {
    struct Failure {
        std::string check;
        std::vector<Label> witness;
        std::string details;
    };

    std::size_t depth_checked = 0;
    std::size_t sequences_checked = 0;
    std::vector<Failure> failures;

    bool passed() const noexcept { return failures.empty(); }

    void fail(std::string check, std::vector<Label> witness, std::string details) {
        failures.push_back({std::move(check), std::move(witness), std::move(details)});
    }

    void merge(const VerificationResult& o) {
        failures.insert(failures.end(), o.failures.begin(), o.failures.end());
        depth_checked = std::max(depth_checked, o.depth_checked);
        sequences_checked += o.sequences_checked;
    }

    std::string str() const {
        if (passed()) return "PASS";
        std::string out;
        for (const auto& f : failures) {
            out += "FAIL " + f.check;
            if (!f.witness.empty()) {
                out += " [";
                for (std::size_t i = 0; i < f.witness.size(); ++i) out += (i ? " " : "") + f.witness[i].str();
                out += "]";
            }
            out += ": " + f.details + "\n";
        }
        return out;
    }
};

inline MorphismSpec identity_morphism(const Seed& s) {
    std::map<Label, VarImage> m;
    for (const auto& l : s.vars()) m.emplace(l, VarImage::to_label(l));
    return MorphismSpec(s, s, std::move(m));
}

/// A label whose r-entries against every label are trivial.
inline bool is_r_central(const Seed& s, const Label& l) {
    const std::size_t i = s.r().index(l);
    for (std::size_t j = 0; j < s.r().size(); ++j) {
        if (!s.r().at(i, j).is_zero()) return false;
    }
    return true;
}

namespace detail {

inline std::string degree_str(const std::vector<long long>& d) {
    std::string s = "(";
    for (std::size_t i = 0; i < d.size(); ++i) s += (i ? "," : "") + std::to_string(d[i]);
    return s + ")";
}

} // namespace detail

/// CM1 / CM2' shape, degree preservation, r-pullback and the conditions on
/// the infinity fiber.
inline VerificationResult check_structural(const MorphismSpec& m) {
    VerificationResult res;
    const Seed& src = m.source();
    const Seed& tgt = m.target();

    for (const auto& l : src.vars()) {
        auto it = m.var_map().find(l);
        if (it == m.var_map().end()) {
            res.fail("CM1", {l}, "source label " + l.str() + " is not mapped");
            continue;
        }
        const VarImage& im = it->second;
        if (!im.is_scalar() && !tgt.has(*im.label)) {
            res.fail("CM1", {l}, "image " + im.label->str() + " is not a target variable");
        }
    }
    for (const auto& [l, im] : m.var_map()) {
        if (!src.has(l)) res.fail("CM1", {l}, "mapped label " + l.str() + " is not a source variable");
    }
    if (!res.passed()) return res;

    for (const auto& l : src.ex()) {
        const VarImage& im = m.image(l);
        if (im.is_scalar() || !tgt.is_exchangeable(*im.label)) {
            res.fail("CM2'", {l}, "exchangeable " + l.str() + " does not map to an exchangeable variable");
        }
    }

    for (const auto& l : src.vars()) {
        const VarImage& im = m.image(l);
        std::vector<long long> d;
        try {
            d = m.map_degree(src.g().row(l));
        } catch (const Error& e) {
            res.fail("degree", {l}, e.what());
            continue;
        }
        if (im.is_scalar()) {
            if (std::any_of(d.begin(), d.end(), [](long long v) { return v != 0; })) {
                res.fail("degree", {l}, l.str() + " maps to a scalar but has degree " + detail::degree_str(d));
            }
            if (src.inv().count(l) && !im.scalar.is_unit()) {
                res.fail("inv", {l}, "invertible " + l.str() + " maps to a non-invertible scalar");
            }
        } else if (tgt.g().row(*im.label) != d) {
            res.fail("degree", {l},
                     "deg " + l.str() + " = " + detail::degree_str(d) + " but deg " + im.label->str() + " = " +
                         detail::degree_str(tgt.g().row(*im.label)));
        }
    }

    for (std::size_t a = 0; a < src.vars().size(); ++a) {
        const Label& i = src.vars()[a];
        const VarImage& fi = m.image(i);
        if (fi.is_scalar()) {
            if (src.is_exchangeable(i)) {
                res.fail("centrality", {i}, "exchangeable " + i.str() + " is in the infinity fiber");
            }
            if (!is_r_central(src, i)) {
                res.fail("centrality", {i}, i.str() + " maps to a scalar but is not r-central");
            }
            continue;
        }
        for (std::size_t c = a + 1; c < src.vars().size(); ++c) {
            const Label& j = src.vars()[c];
            const VarImage& fj = m.image(j);
            if (fj.is_scalar()) continue;
            if (!(src.r().exps(i, j) == tgt.r().exps(*fi.label, *fj.label))) {
                res.fail("r-pullback", {i, j},
                         "r" + detail::pair_str(i, j) + " = " + src.r().entry(i, j).str(src.params()) + " but r'" +
                             detail::pair_str(*fi.label, *fj.label) + " = " +
                             tgt.r().entry(*fi.label, *fj.label).str(tgt.params()));
            }
        }
    }
    return res;
}

namespace detail {

/// c^n for a scalar, with negative n allowed only for units.
inline CoeffPoly scalar_power(const CoeffPoly& c, int n) {
    CoeffPoly base = c;
    if (n < 0) {
        if (!c.is_unit()) throw NotDefined("negative power of the non-invertible scalar " + c.str(ParamSet{}));
        base = c.inverse();
        n = -n;
    }
    CoeffPoly out(1);
    for (int i = 0; i < n; ++i) out = out * base;
    return out;
}

/// t^n in the torus for n possibly negative; negative powers need t to be a
/// monomial with unit coefficient.
inline TorusElement torus_power(const SkewExpMatrix& r, const TorusElement& t, int n) {
    TorusElement base = t;
    if (n < 0) {
        if (t.size() != 1 || !t.terms().begin()->second.is_unit()) {
            throw NotDefined("negative power of a non-monomial image");
        }
        const auto& [a, c] = *t.terms().begin();
        // (c Y^(a))^(-1) = c^(-1) Y^(-a), since Omega_r(a,-a) = 1.
        base = TorusElement::monomial(-a, c.inverse());
        n = -n;
    }
    TorusElement out = TorusElement::one();
    for (int i = 0; i < n; ++i) out = torus_mul(r, out, base);
    return out;
}

} // namespace detail

/// Extends the variable assignment to an algebra map on the source torus:
/// Y^(a) = S_r(a) x^a goes to S_r(a) times the ordered product of images.
inline TorusElement apply_hom(const MorphismSpec& m, const TorusElement& p) {
    const Seed& src = m.source();
    const Seed& tgt = m.target();
    const SkewExpMatrix& rs = src.ambient_r();
    const SkewExpMatrix& rt = tgt.ambient_r();
    TorusElement out;
    for (const auto& [a, c] : p.terms()) {
        TorusElement term = TorusElement::constant(c.times(s_norm(rs, a)));
        for (const auto& [l, v] : a.entries()) {
            const VarImage& im = m.image(l);
            if (im.is_scalar()) {
                term = term.scaled(detail::scalar_power(im.scalar, v));
            } else {
                term = torus_mul(rt, term, detail::torus_power(rt, tgt.frame(*im.label), v));
            }
        }
        out += term;
    }
    return out;
}

/// CM3 along every biadmissible sequence of length <= depth: each source
/// variable with a cluster-valued image must map to the corresponding
/// mutated target variable.
inline VerificationResult verify_cm3(const MorphismSpec& m, std::size_t depth) {
    VerificationResult res;
    res.depth_checked = depth;
    std::vector<Label> seq;
    std::function<void(const Seed&, const Seed&)> rec = [&](const Seed& s, const Seed& t) {
        ++res.sequences_checked;
        for (const auto& l : s.vars()) {
            const VarImage& im = m.image(l);
            if (im.is_scalar()) continue;
            TorusElement lhs;
            try {
                lhs = apply_hom(m, s.frame(l));
            } catch (const NotDefined& e) {
                res.fail("CM3", seq, "image of " + l.str() + " is not defined: " + e.what());
                continue;
            }
            if (!(lhs == t.frame(*im.label))) {
                res.fail("CM3", seq,
                         "f(" + l.var_name() + ") = " + t.format(lhs) + " but the mutated target has " +
                             t.format(t.frame(*im.label)));
            }
        }
        if (seq.size() == depth) return;
        for (const auto& k : s.ex()) {
            const VarImage& im = m.image(k);
            if (im.is_scalar() || !t.is_exchangeable(*im.label)) continue;
            seq.push_back(k);
            rec(mutate_seed(s, k), mutate_seed(t, *im.label));
            seq.pop_back();
        }
    };
    rec(m.source(), m.target());
    return res;
}

/// The composite g . f, with f: A -> B and g: B -> C.
inline MorphismSpec compose(const MorphismSpec& g, const MorphismSpec& f) {
    std::map<Label, VarImage> out;
    for (const auto& [l, im] : f.var_map()) {
        out.emplace(l, im.is_scalar() ? im : g.image(*im.label));
    }
    std::optional<std::vector<std::vector<long long>>> dm;
    if (f.degree_map() || g.degree_map()) {
        std::vector<std::vector<long long>> rows;
        const std::size_t dim = f.source().g().dim();
        for (std::size_t s = 0; s < dim; ++s) {
            std::vector<long long> e(dim, 0);
            e[s] = 1;
            rows.push_back(g.map_degree(f.map_degree(e)));
        }
        dm = std::move(rows);
    }
    return MorphismSpec(f.source(), g.target(), std::move(out), std::move(dm));
}

/// Specialization at a frozen, r-central, degree-zero subset z: the
/// restricted seed and the morphism sending x_i to 1 for i in z.
inline std::pair<Seed, MorphismSpec> specialize(const Seed& s, const std::set<Label>& z) {
    for (const auto& l : z) {
        if (!s.has(l)) throw PreconditionError(l.str() + " is not a variable");
        if (s.is_exchangeable(l)) throw PreconditionError(l.str() + " is exchangeable");
        if (!is_r_central(s, l)) throw PreconditionError(l.str() + " is not r-central");
        const auto& g = s.g().row(l);
        if (std::any_of(g.begin(), g.end(), [](long long v) { return v != 0; })) {
            throw PreconditionError(l.str() + " does not have degree zero");
        }
    }
    if (!s.is_initial()) throw PreconditionError("specialization is defined on a rooted (initial) seed");
    std::vector<Label> keep;
    for (const auto& l : s.vars()) {
        if (!z.count(l)) keep.push_back(l);
    }
    const std::set<Label> keep_set(keep.begin(), keep.end());
    std::set<Label> inv;
    for (const auto& l : s.inv()) {
        if (!z.count(l)) inv.insert(l);
    }
    Seed t = Seed::initial(s.params(), keep, s.ex(), inv, s.r().restricted(keep),
                           s.b().restricted(keep_set, keep_set), s.g().restricted(keep_set));
    std::map<Label, std::string> names;
    for (const auto& [l, n] : s.names()) {
        if (keep_set.count(l)) names.emplace(l, n);
    }
    t = t.with_names(std::move(names));
    std::map<Label, VarImage> vm;
    for (const auto& l : s.vars()) {
        vm.emplace(l, z.count(l) ? VarImage::to_scalar(CoeffPoly(1)) : VarImage::to_label(l));
    }
    return {t, MorphismSpec(s, t, std::move(vm))};
}

} // namespace qcluster
