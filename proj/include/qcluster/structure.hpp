#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "qcluster/errors.hpp"
#include "qcluster/label.hpp"
#include "qcluster/morphism.hpp"
#include "qcluster/seed.hpp"
#include "qcluster/torus.hpp"

namespace qcluster {

struct CheckResult {
    std::vector<std::string> failures;
    std::vector<Label> witness;

    bool passed() const noexcept { return failures.empty(); }

    void fail(std::string msg, std::vector<Label> w = {}) {
        if (failures.empty()) witness = std::move(w);
        failures.push_back(std::move(msg));
    }

    void merge(const CheckResult& o, const std::string& prefix = {}) {
        for (const auto& f : o.failures) fail(prefix + f, o.witness);
    }

    std::string str() const {
        if (passed()) return "PASS";
        std::string out;
        for (const auto& f : failures) out += "FAIL " + f + "\n";
        return out;
    }
};

/// Result of the full-subseed test; the coefficient condition is reported
/// separately from the five subseed conditions.
struct SubseedReport {
    CheckResult full;
    bool connected_only_by_coefficients = false;
    std::string coefficients_detail;

    bool passed() const { return full.passed() && connected_only_by_coefficients; }
};

namespace detail {

inline Seed relabel_seed(const Seed& s, const std::function<Label(const Label&)>& f) {
    std::vector<Label> vars;
    std::set<Label> ex, inv;
    for (const auto& l : s.vars()) vars.push_back(f(l));
    for (const auto& l : s.ex()) ex.insert(f(l));
    for (const auto& l : s.inv()) inv.insert(f(l));
    auto relabel_r = [&](const SkewExpMatrix& r) {
        SkewExpMatrix out(vars);
        for (std::size_t a = 0; a < r.size(); ++a) {
            for (std::size_t b = a + 1; b < r.size(); ++b) out.set(f(r.labels()[a]), f(r.labels()[b]), r.at(a, b));
        }
        return out;
    };
    GradingMatrix g(s.g().dim());
    for (const auto& [l, row] : s.g().rows()) g.set_row(f(l), row);
    Seed out = Seed::initial(s.params(), vars, ex, inv, relabel_r(s.r()), s.b().relabeled(f), g);
    std::map<Label, TorusElement> frame;
    for (const auto& [l, t] : s.frame()) frame.emplace(f(l), t.relabeled(f));
    std::map<Label, std::string> names;
    for (const auto& [l, n] : s.names()) names.emplace(f(l), n);
    return out.with_frame(std::move(frame), relabel_r(s.ambient_r())).with_names(std::move(names));
}

} // namespace detail

/// Disjoint union of seeds: block exchange and r matrices (trivial r across
/// blocks) and a block-diagonal grading.  Labels are tagged with the 1-based
/// block index only when two blocks share a label.  Returns the coproduct and
/// the canonical inclusion of each block.
inline std::pair<Seed, std::vector<MorphismSpec>> coproduct(const std::vector<Seed>& seeds) {
    if (seeds.empty()) throw PreconditionError("coproduct of an empty family");
    if (seeds.size() == 1) return {seeds[0], {identity_morphism(seeds[0])}};

    bool collide = false;
    {
        std::set<Label> seen;
        for (const auto& s : seeds) {
            for (const auto& l : s.vars()) {
                if (!seen.insert(l).second) collide = true;
            }
        }
    }
    ParamSet params;
    for (const auto& s : seeds) {
        if (s.params().size() == 0) continue;
        if (params.size() == 0) {
            params = s.params();
        } else if (!(params == s.params())) {
            throw StructuralError("coproduct blocks use different parameter sets");
        }
    }

    std::vector<Seed> blocks;
    std::vector<std::function<Label(const Label&)>> maps;
    std::size_t dim = 0;
    std::vector<std::size_t> offsets;
    for (std::size_t i = 0; i < seeds.size(); ++i) {
        const int tag = static_cast<int>(i + 1);
        std::function<Label(const Label&)> f = [collide, tag](const Label& l) { return collide ? l.tagged(tag) : l; };
        blocks.push_back(detail::relabel_seed(seeds[i], f));
        maps.push_back(f);
        offsets.push_back(dim);
        dim += seeds[i].g().dim();
    }

    std::vector<Label> vars;
    std::set<Label> ex, inv;
    ExchangeMatrix b;
    for (const auto& s : blocks) {
        vars.insert(vars.end(), s.vars().begin(), s.vars().end());
        ex.insert(s.ex().begin(), s.ex().end());
        inv.insert(s.inv().begin(), s.inv().end());
        for (const auto& [ij, x] : s.b().entries()) b.set(ij.first, ij.second, x);
    }
    SkewExpMatrix r(vars), ambient(vars);
    GradingMatrix g(dim);
    std::map<Label, TorusElement> frame;
    std::map<Label, std::string> names;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        const Seed& s = blocks[i];
        for (std::size_t a = 0; a < s.vars().size(); ++a) {
            for (std::size_t c = a + 1; c < s.vars().size(); ++c) {
                r.set(s.vars()[a], s.vars()[c], s.r().at(a, c));
                ambient.set(s.vars()[a], s.vars()[c], s.ambient_r().at(a, c));
            }
        }
        for (const auto& [l, row] : s.g().rows()) {
            std::vector<long long> full(dim, 0);
            std::copy(row.begin(), row.end(), full.begin() + static_cast<std::ptrdiff_t>(offsets[i]));
            g.set_row(l, std::move(full));
        }
        frame.insert(s.frame().begin(), s.frame().end());
        names.insert(s.names().begin(), s.names().end());
    }
    Seed out = Seed::initial(params, vars, ex, inv, r, b, g).with_frame(std::move(frame), ambient);
    out = out.with_names(std::move(names));

    std::vector<MorphismSpec> incl;
    for (std::size_t i = 0; i < seeds.size(); ++i) {
        std::map<Label, VarImage> vm;
        for (const auto& l : seeds[i].vars()) vm.emplace(l, VarImage::to_label(maps[i](l)));
        std::vector<std::vector<long long>> dm;
        for (std::size_t s = 0; s < seeds[i].g().dim(); ++s) {
            std::vector<long long> e(dim, 0);
            e[offsets[i] + s] = 1;
            dm.push_back(std::move(e));
        }
        incl.emplace_back(seeds[i], out, std::move(vm), std::move(dm));
    }
    return {out, incl};
}

/// Connected components of the support graph of the exchange matrix, each
/// sorted, ordered by least label.
inline std::vector<std::set<Label>> components(const Seed& s) {
    std::map<Label, Label> parent;
    for (const auto& l : s.vars()) parent[l] = l;
    std::function<Label(const Label&)> find = [&](const Label& l) -> Label {
        Label& p = parent.at(l);
        if (p == l) return l;
        p = find(p);
        return p;
    };
    for (const auto& [ij, x] : s.b().entries()) {
        const Label a = find(ij.first), c = find(ij.second);
        if (a != c) parent[std::max(a, c)] = std::min(a, c);
    }
    std::map<Label, std::set<Label>> groups;
    for (const auto& l : s.vars()) groups[find(l)].insert(l);
    std::vector<std::set<Label>> out;
    for (auto& [root, g] : groups) out.push_back(std::move(g));
    return out;
}

/// Full-subseed conditions (index sets, exchange matrix, frame, grading,
/// r) plus the connected-only-by-coefficients flag.
inline SubseedReport is_full_subseed(const Seed& sub, const Seed& sup) {
    SubseedReport rep;
    CheckResult& c = rep.full;
    for (const auto& l : sub.vars()) {
        if (!sup.has(l)) c.fail("var: " + l.str() + " is not a variable of the larger seed", {l});
    }
    for (const auto& l : sub.ex()) {
        if (!sup.is_exchangeable(l)) c.fail("ex: " + l.str() + " is not exchangeable in the larger seed", {l});
    }
    for (const auto& l : sub.inv()) {
        if (!sup.inv().count(l)) c.fail("inv: " + l.str() + " is not invertible in the larger seed", {l});
    }
    if (!(sub.params() == sup.params()) && sub.params().size() != 0) {
        c.fail("parameter sets differ");
    }
    if (!c.passed()) return rep;

    const std::set<Label> vs = sub.var_set();
    if (!(sup.b().restricted(vs, vs) == sub.b())) {
        for (const auto& i : sub.vars()) {
            for (const auto& j : sub.vars()) {
                if (sub.b().get(i, j) != sup.b().get(i, j)) {
                    c.fail("exchange matrix differs at " + detail::pair_str(i, j), {i, j});
                }
            }
        }
    }
    if (!(sup.r().restricted(sub.vars()) == sub.r()) ||
        !(sup.ambient_r().restricted(sub.vars()) == sub.ambient_r())) {
        for (std::size_t a = 0; a < sub.vars().size(); ++a) {
            for (std::size_t b = a + 1; b < sub.vars().size(); ++b) {
                const Label& i = sub.vars()[a];
                const Label& j = sub.vars()[b];
                if (!(sub.r().exps(i, j) == sup.r().exps(i, j)) ||
                    !(sub.ambient_r().exps(i, j) == sup.ambient_r().exps(i, j))) {
                    c.fail("r differs at " + detail::pair_str(i, j), {i, j});
                }
            }
        }
    }
    // Frame values on the sublattice are determined by the frame
    // variables and r on var.
    for (const auto& l : sub.vars()) {
        if (!(sub.frame(l) == sup.frame(l))) c.fail("frame differs at " + l.str(), {l});
    }
    if (sub.g().dim() != sup.g().dim()) {
        c.fail("gradings have different index sets");
    } else {
        for (const auto& l : sub.vars()) {
            if (sub.g().row(l) != sup.g().row(l)) c.fail("grading differs at " + l.str(), {l});
        }
    }

    rep.connected_only_by_coefficients = true;
    for (const auto& i : sub.ex()) {
        for (const auto& j : sup.b().row(i).entries()) {
            if (!vs.count(j.first)) {
                rep.connected_only_by_coefficients = false;
                rep.coefficients_detail = "exchangeable " + i.str() + " is connected to " + j.first.str();
                break;
            }
        }
        if (!rep.connected_only_by_coefficients) break;
    }
    return rep;
}

/// Mutates both seeds along `seq` and checks the mutated pair is still a
/// full subseed connected only by coefficients.
inline CheckResult check_mutation_commutes(const Seed& sub, const Seed& sup, const std::vector<Label>& seq) {
    for (const auto& k : seq) {
        if (!sub.is_exchangeable(k)) throw PreconditionError("sequence is not admissible: " + k.str());
    }
    CheckResult res;
    Seed a = sub, b = sup;
    std::vector<Label> prefix;
    for (const auto& k : seq) {
        a = mutate_seed(a, k);
        b = mutate_seed(b, k);
        prefix.push_back(k);
    }
    const SubseedReport rep = is_full_subseed(a, b);
    for (const auto& f : rep.full.failures) res.fail(f, prefix);
    if (!rep.connected_only_by_coefficients) res.fail(rep.coefficients_detail, prefix);
    return res;
}

/// A possibly infinite seed given lazily.  Only finite restrictions are ever
/// materialized.
struct SeedGenerator {
    ParamSet params;
    std::size_t grading_dim = 1;
    /// n-th label of a fixed enumeration of var.
    std::function<Label(std::size_t)> label_at;
    std::function<bool(const Label&)> contains;
    /// Nonzero entries b_lm of row l.
    std::function<std::vector<std::pair<Label, int>>(const Label&)> neighbors;
    /// Doubled exponents of r_lm.
    std::function<ParamExps(const Label&, const Label&)> r_of;
    std::function<std::vector<long long>(const Label&)> g_of;
    std::function<bool(const Label&)> ex_test;
    std::function<bool(const Label&)> inv_test;
    std::function<std::string(const Label&)> name_of;

    /// The initial seed on `vars` with the given exchangeable set.
    Seed restrict(const std::set<Label>& vars, const std::set<Label>& ex) const {
        std::vector<Label> v(vars.begin(), vars.end());
        SkewExpMatrix r(v);
        for (std::size_t a = 0; a < v.size(); ++a) {
            for (std::size_t b = a + 1; b < v.size(); ++b) r.set(v[a], v[b], r_of(v[a], v[b]));
        }
        ExchangeMatrix bm;
        for (const auto& l : v) {
            for (const auto& [m, x] : neighbors(l)) {
                if (vars.count(m)) bm.set(l, m, x);
            }
        }
        GradingMatrix g(grading_dim);
        std::set<Label> inv;
        std::map<Label, std::string> names;
        for (const auto& l : v) {
            g.set_row(l, g_of(l));
            if (inv_test && inv_test(l) && !ex.count(l)) inv.insert(l);
            if (name_of) names.emplace(l, name_of(l));
        }
        return Seed::initial(params, v, ex, inv, r, bm, g).with_names(std::move(names));
    }

    /// Restriction where a label is exchangeable when the generator says so
    /// and all of its neighbors lie in `vars`.
    Seed restrict_closed(const std::set<Label>& vars) const {
        std::set<Label> ex;
        for (const auto& l : vars) {
            if (!ex_test(l)) continue;
            bool closed = true;
            for (const auto& [m, x] : neighbors(l)) {
                if (!vars.count(m)) closed = false;
            }
            if (closed) ex.insert(l);
        }
        return restrict(vars, ex);
    }
};

struct Filtration {
    std::vector<Seed> stages;
    /// inclusions[i]: stage i -> stage i+1.
    std::vector<MorphismSpec> inclusions;
};

inline MorphismSpec inclusion_morphism(const Seed& sub, const Seed& sup) {
    std::map<Label, VarImage> vm;
    for (const auto& l : sub.vars()) vm.emplace(l, VarImage::to_label(l));
    return MorphismSpec(sub, sup, std::move(vm));
}

/// Nested finite seeds grown from a frozen label by neighbor closure:
/// var_{i+1} = var_i + neighbors, ex_{i+1} = var_i & ex, inv_{i+1} = var_i & inv.
inline Filtration build_filtration(const SeedGenerator& gen, const Label& seed_label, std::size_t stages) {
    if (!gen.contains(seed_label)) throw PreconditionError(seed_label.str() + " is not a label of the generator");
    if (gen.ex_test(seed_label)) {
        throw PreconditionError("filtration must start at a frozen label; " + seed_label.str() + " is exchangeable");
    }
    Filtration f;
    if (stages == 0) return f;
    std::set<Label> vars{seed_label};
    f.stages.push_back(gen.restrict(vars, {}));
    while (f.stages.size() < stages) {
        std::set<Label> next = vars;
        std::set<Label> ex;
        for (const auto& l : vars) {
            for (const auto& [m, x] : gen.neighbors(l)) next.insert(m);
            if (gen.ex_test(l)) ex.insert(l);
        }
        Seed s = gen.restrict(next, ex);
        f.inclusions.push_back(inclusion_morphism(f.stages.back(), s));
        f.stages.push_back(std::move(s));
        vars = std::move(next);
    }
    return f;
}

/// Filtration invariants, stagewise seed validity, inclusion morphisms, and
/// stabilization: every variable reached in stage i along a sequence of
/// length <= depth is reached identically in every later stage.
inline CheckResult verify_colimit_consistency(const Filtration& f, std::size_t depth) {
    CheckResult res;
    const std::size_t n = f.stages.size();
    if (f.inclusions.size() + 1 != n && n != 0) res.fail("filtration has the wrong number of inclusions");
    for (std::size_t i = 0; i < n; ++i) {
        const Seed& s = f.stages[i];
        const ValidationReport v = validate_seed(s);
        if (!v.ok()) res.fail("stage " + std::to_string(i) + " is not a valid seed:\n" + v.str());
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const Seed& a = f.stages[i];
        const Seed& b = f.stages[i + 1];
        const std::string tag = "stage " + std::to_string(i) + " -> " + std::to_string(i + 1) + ": ";
        if (!std::includes(b.ex().begin(), b.ex().end(), a.ex().begin(), a.ex().end()) ||
            !std::includes(b.inv().begin(), b.inv().end(), a.inv().begin(), a.inv().end())) {
            res.fail(tag + "index sets are not monotone");
        }
        const SubseedReport sr = is_full_subseed(a, b);
        res.merge(sr.full, tag);
        if (!sr.connected_only_by_coefficients) res.fail(tag + sr.coefficients_detail);
        if (i < f.inclusions.size()) {
            const VerificationResult st = check_structural(f.inclusions[i]);
            if (!st.passed()) res.fail(tag + "inclusion is not a morphism:\n" + st.str());
        }
    }
    // Composites of consecutive inclusions agree with direct inclusions.
    for (std::size_t i = 0; i + 2 < n && i + 1 < f.inclusions.size(); ++i) {
        const MorphismSpec c = compose(f.inclusions[i + 1], f.inclusions[i]);
        const MorphismSpec d = inclusion_morphism(f.stages[i], f.stages[i + 2]);
        if (c.var_map() != d.var_map()) res.fail("composite inclusion " + std::to_string(i) + " differs");
    }
    if (!res.passed()) return res;

    // Stabilization, checked along shared prefixes.
    for (std::size_t i = 0; i + 1 < n; ++i) {
        std::vector<Seed> later(f.stages.begin() + static_cast<std::ptrdiff_t>(i) + 1, f.stages.end());
        std::vector<Label> seq;
        std::function<void(const Seed&, std::vector<Seed>&)> rec = [&](const Seed& cur, std::vector<Seed>& up) {
            for (std::size_t j = 0; j < up.size(); ++j) {
                for (const auto& l : cur.vars()) {
                    if (!(cur.frame(l) == up[j].frame(l))) {
                        res.fail("stage " + std::to_string(i) + " and stage " + std::to_string(i + 1 + j) +
                                     " disagree on " + l.str(),
                                 seq);
                        return;
                    }
                }
                for (const auto& k : cur.ex()) {
                    const auto [p, m] = exchange_exponents(cur.b(), k);
                    const auto [pu, mu] = exchange_exponents(up[j].b(), k);
                    if (!(p == pu) || !(m == mu)) {
                        res.fail("exchange relation at " + k.str() + " differs between stages " + std::to_string(i) +
                                     " and " + std::to_string(i + 1 + j),
                                 seq);
                        return;
                    }
                }
            }
            if (seq.size() == depth) return;
            for (const auto& k : cur.ex()) {
                std::vector<Seed> next;
                next.reserve(up.size());
                for (const auto& u : up) next.push_back(mutate_seed(u, k));
                seq.push_back(k);
                rec(mutate_seed(cur, k), next);
                seq.pop_back();
                if (!res.passed()) return;
            }
        };
        rec(f.stages[i], later);
        if (!res.passed()) break;
    }
    return res;
}

/// Doubly infinite path ... - (-1) - 0 - 1 - ..., classical (r = 1, G = 0),
/// with 0 frozen and every other label exchangeable.
inline SeedGenerator path_generator() {
    SeedGenerator g;
    g.grading_dim = 1;
    g.label_at = [](std::size_t n) {
        const int h = static_cast<int>((n + 1) / 2);
        return Label{n % 2 == 1 ? h : -h};
    };
    g.contains = [](const Label& l) { return l.size() == 1; };
    g.neighbors = [](const Label& l) {
        return std::vector<std::pair<Label, int>>{{Label{l[0] - 1}, -1}, {Label{l[0] + 1}, 1}};
    };
    g.r_of = [](const Label&, const Label&) { return ParamExps{}; };
    g.g_of = [](const Label&) { return std::vector<long long>{0}; };
    g.ex_test = [](const Label& l) { return l[0] != 0; };
    g.inv_test = [](const Label&) { return false; };
    return g;
}

/// A single frozen label with no arrows.
inline SeedGenerator point_generator() {
    SeedGenerator g;
    g.grading_dim = 1;
    g.label_at = [](std::size_t) { return Label{0}; };
    g.contains = [](const Label& l) { return l == Label{0}; };
    g.neighbors = [](const Label&) { return std::vector<std::pair<Label, int>>{}; };
    g.r_of = [](const Label&, const Label&) { return ParamExps{}; };
    g.g_of = [](const Label&) { return std::vector<long long>{1}; };
    g.ex_test = [](const Label&) { return false; };
    g.inv_test = [](const Label&) { return false; };
    return g;
}

} // namespace qcluster
