#pragma once

#include <cctype>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qcluster/errors.hpp"
#include "qcluster/label.hpp"
#include "qcluster/morphism.hpp"
#include "qcluster/scalar.hpp"
#include "qcluster/seed.hpp"
#include "qcluster/torus.hpp"

namespace qcluster {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

// ---------------------------------------------------------------------------
// Laurent expressions: "q*x1*x2^-1*x3 + x2^-1", "(q + q^-1)*x(1,2)", "q^(1/2)"
// Products are evaluated in the based torus in the order written, so an
// ordered monomial x1*x2^-1*x3 reads back exactly as it was printed.

namespace detail {

class ExprParser {
public:
    ExprParser(const std::string& text, const SkewExpMatrix& r, const ParamSet& params)
        : s_(text), r_(r), params_(params) {}

    TorusElement parse() {
        TorusElement t = expr();
        skip();
        if (pos_ != s_.size()) error("unexpected '" + std::string(1, s_[pos_]) + "'");
        return t;
    }

private:
    [[noreturn]] void error(const std::string& what) const {
        throw ParseError("expression '" + s_ + "' at position " + std::to_string(pos_) + ": " + what);
    }

    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool peek(char c) {
        skip();
        return pos_ < s_.size() && s_[pos_] == c;
    }
    bool eat(char c) {
        if (!peek(c)) return false;
        ++pos_;
        return true;
    }

    long long integer() {
        skip();
        const std::size_t start = pos_;
        if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) ++pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        const std::string tok = s_.substr(start, pos_ - start);
        if (tok.empty() || tok == "-" || tok == "+") error("expected an integer");
        return std::stoll(tok);
    }

    /// Exponent after '^', returned doubled.  Half-integers only in parens.
    int exponent(bool allow_half) {
        if (eat('(')) {
            const long long num = integer();
            long long doubled = 2 * num;
            if (eat('/')) {
                const long long den = integer();
                if (den == 1) {
                    doubled = 2 * num;
                } else if (den == 2 && allow_half) {
                    doubled = num;
                } else {
                    error("only integer or half-integer exponents are supported");
                }
            }
            if (!eat(')')) error("expected ')'");
            return static_cast<int>(doubled);
        }
        return static_cast<int>(2 * integer());
    }

    TorusElement expr() {
        TorusElement acc;
        bool negate = false;
        if (eat('-')) {
            negate = true;
        } else {
            eat('+');
        }
        TorusElement t = term();
        acc += negate ? -t : t;
        while (true) {
            if (eat('+')) {
                acc += term();
            } else if (eat('-')) {
                acc -= term();
            } else {
                break;
            }
        }
        return acc;
    }

    TorusElement term() {
        TorusElement t = factor();
        while (eat('*')) t = torus_mul(r_, t, factor());
        return t;
    }

    TorusElement factor() {
        skip();
        if (pos_ >= s_.size()) error("unexpected end");
        const char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            TorusElement inner = expr();
            if (!eat(')')) error("expected ')'");
            if (eat('^')) {
                const int d = exponent(false);
                return power(inner, d / 2);
            }
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            const std::size_t start = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            return TorusElement::constant(CoeffPoly::monomial(Integer(s_.substr(start, pos_ - start)), {}));
        }
        if (c == 'x') {
            ++pos_;
            Label l;
            if (pos_ < s_.size() && s_[pos_] == '(') {
                const std::size_t close = s_.find(')', pos_);
                if (close == std::string::npos) error("unterminated variable label");
                l = parse_label(s_.substr(pos_, close - pos_ + 1));
                pos_ = close + 1;
            } else {
                const std::size_t start = pos_;
                while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
                if (start == pos_) error("expected a variable index after 'x'");
                l = Label{std::stoi(s_.substr(start, pos_ - start))};
            }
            if (!r_.contains(l)) error("unknown variable " + l.var_name());
            TorusElement v = TorusElement::variable(l);
            if (eat('^')) {
                const int d = exponent(false);
                return power(v, d / 2);
            }
            return v;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            const std::size_t start = pos_;
            while (pos_ < s_.size() &&
                   (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) {
                ++pos_;
            }
            const std::string name = s_.substr(start, pos_ - start);
            const int idx = params_.index_of(name);
            if (idx < 0) error("unknown parameter '" + name + "'");
            int d = 2;
            if (eat('^')) d = exponent(true);
            return TorusElement::constant(CoeffPoly::monomial(1, ParamExps::unit(static_cast<std::size_t>(idx), d)));
        }
        error("unexpected '" + std::string(1, c) + "'");
    }

    TorusElement power(const TorusElement& t, int n) {
        if (n < 0) return detail::torus_power(r_, t, n);
        TorusElement out = TorusElement::one();
        for (int i = 0; i < n; ++i) out = torus_mul(r_, out, t);
        return out;
    }

    std::string s_;
    const SkewExpMatrix& r_;
    const ParamSet& params_;
    std::size_t pos_ = 0;
};

} // namespace detail

inline TorusElement parse_element(const std::string& text, const SkewExpMatrix& r, const ParamSet& params) {
    return detail::ExprParser(text, r, params).parse();
}

/// A scalar written in the same syntax, e.g. "1", "q^-1", "q + q^-1".
inline CoeffPoly parse_scalar(const std::string& text, const ParamSet& params) {
    const TorusElement t = parse_element(text, SkewExpMatrix{}, params);
    if (!t.is_constant()) throw ParseError("'" + text + "' is not a scalar");
    return t.constant_value();
}

// ---------------------------------------------------------------------------
// Seed files

inline Label label_from_json(const json& j) {
    if (j.is_number_integer()) return Label{j.get<int>()};
    if (j.is_array()) {
        std::vector<int> parts;
        for (const auto& x : j) {
            if (!x.is_number_integer()) throw ParseError("label parts must be integers");
            parts.push_back(x.get<int>());
        }
        return Label(std::span<const int>(parts));
    }
    if (j.is_string()) return parse_label(j.get<std::string>());
    throw ParseError("a label must be an integer or an array of integers");
}

inline json label_to_json(const Label& l) {
    if (l.size() == 1) return l[0];
    return json(l.parts());
}

/// Result of reading a seed file: the seed (when the raw data is coherent
/// enough to build one) and the validation report.
struct LoadResult {
    std::optional<Seed> seed;
    ValidationReport report;
    bool ok() const { return seed.has_value() && report.ok(); }
};

namespace detail {

template <class T>
T get_field(const json& j, const char* key) {
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ParseError(std::string("field '") + key + "': " + e.what());
    }
}

inline ParamExps exps_from_json(const json& j) {
    if (!j.is_array()) throw ParseError("exponents must be an array of integers");
    std::vector<int> v;
    for (const auto& x : j) {
        if (!x.is_number_integer()) throw ParseError("exponents must be integers");
        v.push_back(x.get<int>());
    }
    return ParamExps(v);
}

/// Reads r entries [i, j, coeff, [doubled exps]] into `r`, reporting values
/// that are not group elements and pairs that break r_ij r_ji = 1.
inline void read_r(const json& entries, SkewExpMatrix& r, ValidationReport& rep, const std::string& what) {
    std::map<std::pair<Label, Label>, ParamExps> seen;
    std::string coeff_err, skew_err, index_err;
    if (!entries.is_array()) throw ParseError(what + " must be an array");
    for (const auto& e : entries) {
        if (!e.is_array() || e.size() != 4) throw ParseError(what + " entries must be [i, j, coeff, [exps]]");
        const Label i = label_from_json(e[0]);
        const Label j = label_from_json(e[1]);
        if (!e[2].is_number_integer()) throw ParseError(what + " coefficient must be an integer");
        const long long coeff = e[2].get<long long>();
        const ParamExps x = exps_from_json(e[3]);
        if (!r.contains(i) || !r.contains(j)) {
            index_err = "entry " + pair_str(i, j) + " outside the labels";
            continue;
        }
        if (coeff != 1) coeff_err = "entry " + pair_str(i, j) + " has coefficient " + std::to_string(coeff);
        if (i == j && !x.is_zero()) {
            skew_err = "r" + pair_str(i, i) + " is not 1";
            continue;
        }
        auto back = seen.find({j, i});
        if (back != seen.end() && !(back->second == -x)) {
            skew_err = "r" + pair_str(i, j) + " * r" + pair_str(j, i) + " != 1";
        }
        auto same = seen.find({i, j});
        if (same != seen.end() && !(same->second == x)) skew_err = "r" + pair_str(i, j) + " is given twice";
        seen[{i, j}] = x;
        if (i != j) r.set(i, j, x);
    }
    rep.add(what + "_labels", index_err.empty(), index_err);
    rep.add(what + "_values", coeff_err.empty(), coeff_err);
    rep.add(what + "_skew_symmetry", skew_err.empty(), skew_err);
}

} // namespace detail

inline LoadResult seed_from_json(const json& j) {
    if (!j.is_object()) throw ParseError("seed file must hold a JSON object");
    if (j.contains("schema_version") && j.at("schema_version") != kSchemaVersion) {
        throw ParseError("unsupported schema_version " + j.at("schema_version").dump());
    }
    LoadResult res;
    ValidationReport pre;

    std::vector<std::string> pnames;
    if (j.contains("params")) pnames = detail::get_field<std::vector<std::string>>(j, "params");
    ParamSet params;
    try {
        params = ParamSet(pnames);
    } catch (const StructuralError& e) {
        throw ParseError(e.what());
    }

    std::vector<Label> labels;
    if (j.contains("labels")) {
        if (!j.at("labels").is_array()) throw ParseError("labels must be an array");
        for (const auto& x : j.at("labels")) labels.push_back(label_from_json(x));
    }
    {
        std::set<Label> uniq(labels.begin(), labels.end());
        if (uniq.size() != labels.size()) throw ParseError("duplicate label");
    }
    const std::set<Label> label_set(labels.begin(), labels.end());

    auto read_set = [&](const char* key) {
        std::set<Label> out;
        if (!j.contains(key)) return out;
        if (!j.at(key).is_array()) throw ParseError(std::string(key) + " must be an array");
        for (const auto& x : j.at(key)) out.insert(label_from_json(x));
        return out;
    };
    const std::set<Label> ex = read_set("ex");
    const std::set<Label> inv = read_set("inv");

    SkewExpMatrix r(labels);
    detail::read_r(j.contains("r") ? j.at("r") : json::array(), r, pre, "r");

    ExchangeMatrix b;
    {
        std::string why;
        const json bj = j.contains("B") ? j.at("B") : json::array();
        if (!bj.is_array()) throw ParseError("B must be an array");
        for (const auto& e : bj) {
            if (!e.is_array() || e.size() != 3 || !e[2].is_number_integer()) {
                throw ParseError("B entries must be [i, j, integer]");
            }
            const Label i = label_from_json(e[0]);
            const Label k = label_from_json(e[1]);
            if (!label_set.count(i) || !label_set.count(k)) {
                why = "entry " + detail::pair_str(i, k) + " outside the labels";
                continue;
            }
            b.set(i, k, e[2].get<int>());
        }
        pre.add("B_labels", why.empty(), why);
    }

    std::size_t dim = 0;
    GradingMatrix g;
    {
        const json gj = j.contains("G") ? j.at("G") : json::array();
        if (!gj.is_array()) throw ParseError("G must be an array of rows");
        if (gj.size() != labels.size()) {
            throw ParseError("G has " + std::to_string(gj.size()) + " rows for " + std::to_string(labels.size()) +
                             " labels");
        }
        dim = gj.empty() ? 1 : gj[0].size();
        g = GradingMatrix(dim);
        for (std::size_t i = 0; i < labels.size(); ++i) {
            std::vector<long long> row;
            try {
                row = gj[i].get<std::vector<long long>>();
            } catch (const json::exception& e) {
                throw ParseError(std::string("G row: ") + e.what());
            }
            if (row.size() != dim) throw ParseError("G rows have different lengths");
            g.set_row(labels[i], row);
        }
    }

    Seed s = Seed::initial(params, labels, ex, inv, r, b, g);

    if (j.contains("ambient_r") || j.contains("frame")) {
        SkewExpMatrix ambient = r;
        if (j.contains("ambient_r")) {
            ambient = SkewExpMatrix(labels);
            detail::read_r(j.at("ambient_r"), ambient, pre, "ambient_r");
        }
        std::map<Label, TorusElement> frame = s.frame();
        if (j.contains("frame")) {
            if (!j.at("frame").is_object()) throw ParseError("frame must be an object");
            for (const auto& [key, val] : j.at("frame").items()) {
                const Label l = parse_label(key);
                if (!label_set.count(l)) throw ParseError("frame entry for unknown label " + key);
                if (!val.is_string()) throw ParseError("frame entries must be expression strings");
                frame[l] = parse_element(val.get<std::string>(), ambient, params);
            }
        }
        s = s.with_frame(std::move(frame), ambient);
    }
    if (j.contains("names")) {
        std::map<Label, std::string> names;
        if (!j.at("names").is_object()) throw ParseError("names must be an object");
        for (const auto& [key, val] : j.at("names").items()) names[parse_label(key)] = val.get<std::string>();
        s = s.with_names(std::move(names));
    }

    const ValidationReport v = validate_seed(s);
    res.report = pre;
    for (const auto& c : v.checks) res.report.checks.push_back(c);
    res.seed = std::move(s);
    return res;
}

namespace detail {

inline json r_to_json(const SkewExpMatrix& r) {
    json out = json::array();
    for (std::size_t a = 0; a < r.size(); ++a) {
        for (std::size_t c = a + 1; c < r.size(); ++c) {
            if (r.at(a, c).is_zero()) continue;
            out.push_back({label_to_json(r.labels()[a]), label_to_json(r.labels()[c]), 1, r.at(a, c).to_vector()});
        }
    }
    return out;
}

} // namespace detail

/// Canonical JSON form: sorted labels, r above the diagonal, B triplets in
/// label order, frame only when it is not the initial one.
inline json seed_to_json(const Seed& s) {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["params"] = s.params().names();
    json labels = json::array();
    for (const auto& l : s.vars()) labels.push_back(label_to_json(l));
    j["labels"] = labels;
    json ex = json::array(), inv = json::array();
    for (const auto& l : s.ex()) ex.push_back(label_to_json(l));
    for (const auto& l : s.inv()) inv.push_back(label_to_json(l));
    j["ex"] = ex;
    j["inv"] = inv;
    j["r"] = detail::r_to_json(s.r());
    json b = json::array();
    for (const auto& [ij, x] : s.b().entries()) b.push_back({label_to_json(ij.first), label_to_json(ij.second), x});
    j["B"] = b;
    json g = json::array();
    for (const auto& l : s.vars()) g.push_back(s.g().row(l));
    j["G"] = g;
    if (!s.names().empty()) {
        json names = json::object();
        for (const auto& [l, n] : s.names()) names[l.str()] = n;
        j["names"] = names;
    }
    if (!s.is_initial()) {
        j["ambient_r"] = detail::r_to_json(s.ambient_r());
        json frame = json::object();
        for (const auto& [l, t] : s.frame()) {
            if (!(t == TorusElement::variable(l))) frame[l.str()] = s.format(t);
        }
        j["frame"] = frame;
    }
    return j;
}

inline std::string seed_to_string(const Seed& s) { return seed_to_json(s).dump(2) + "\n"; }

inline json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError(path + ": " + e.what());
    }
}

inline LoadResult load_seed(const std::string& path) { return seed_from_json(read_json_file(path)); }

inline void save_seed(const Seed& s, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write " + path);
    out << seed_to_string(s);
}

// ---------------------------------------------------------------------------
// Morphism map files:
// {"map": [{"from": 1, "to": 1}, {"from": 3, "scalar": "1"}], "degree_map": [[1]]}

inline MorphismSpec morphism_from_json(const json& j, const Seed& src, const Seed& tgt) {
    const json& entries = j.is_array() ? j : j.at("map");
    if (!entries.is_array()) throw ParseError("map must be an array");
    std::map<Label, VarImage> vm;
    for (const auto& e : entries) {
        if (!e.is_object() || !e.contains("from")) throw ParseError("map entries need a 'from' field");
        const Label from = label_from_json(e.at("from"));
        if (e.contains("to")) {
            vm[from] = VarImage::to_label(label_from_json(e.at("to")));
        } else if (e.contains("scalar")) {
            const json& sc = e.at("scalar");
            const std::string text = sc.is_string() ? sc.get<std::string>() : sc.dump();
            vm[from] = VarImage::to_scalar(parse_scalar(text, tgt.params()));
        } else {
            throw ParseError("map entry for " + from.str() + " needs 'to' or 'scalar'");
        }
    }
    std::optional<std::vector<std::vector<long long>>> dm;
    if (j.is_object() && j.contains("degree_map")) dm = j.at("degree_map").get<std::vector<std::vector<long long>>>();
    return MorphismSpec(src, tgt, std::move(vm), std::move(dm));
}

// ---------------------------------------------------------------------------
// DOT export: frozen vertices boxed, degrees as external labels.

inline std::string seed_to_dot(const Seed& s, const std::string& graph_name = "seed") {
    std::ostringstream os;
    auto id = [](const Label& l) { return "\"" + l.str() + "\""; };
    os << "digraph " << graph_name << " {\n";
    for (const auto& l : s.vars()) {
        auto it = s.names().find(l);
        const std::string text = it != s.names().end() ? it->second : l.str();
        std::string deg;
        const auto& row = s.g().row(l);
        for (std::size_t i = 0; i < row.size(); ++i) deg += (i ? "," : "") + std::to_string(row[i]);
        os << "  " << id(l) << " [label=\"" << text << "\"";
        if (!s.is_exchangeable(l)) os << ", shape=box";
        os << ", xlabel=\"" << deg << "\"];\n";
    }
    for (const auto& [ij, x] : s.b().entries()) {
        if (x <= 0) continue;
        os << "  " << id(ij.first) << " -> " << id(ij.second);
        if (x > 1) os << " [label=\"" << x << "\"]";
        os << ";\n";
    }
    os << "}\n";
    return os.str();
}

} // namespace qcluster
