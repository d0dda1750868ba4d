#pragma once

#include <algorithm>
#include <cstddef>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qcluster/errors.hpp"
#include "qcluster/grassmannian.hpp"
#include "qcluster/io.hpp"
#include "qcluster/morphism.hpp"
#include "qcluster/seed.hpp"
#include "qcluster/structure.hpp"

namespace qcluster::cli {

// Exit codes.
inline constexpr int kPass = 0;
inline constexpr int kCheckFailed = 1;
inline constexpr int kUsage = 2;

namespace detail {

/// Loads a seed and fails with the per-check report when it is invalid.
inline Seed load_valid(const std::string& path, std::ostream& err, bool& ok) {
    LoadResult lr = load_seed(path);
    ok = lr.ok();
    if (!ok) err << path << ": invalid seed\n" << lr.report.str();
    return *lr.seed;
}

inline void print_variables(const Seed& s, std::ostream& out) {
    for (const auto& l : s.vars()) {
        out << l.var_name() << " = " << s.format(s.frame(l)) << "\n";
    }
}

inline std::vector<Label> parse_sequence(const std::vector<std::string>& tokens) {
    std::vector<Label> seq;
    for (const auto& t : tokens) {
        // Allow "2,3" as well as separate tokens; grid labels keep their parens.
        if (t.find('(') == std::string::npos && t.find('[') == std::string::npos && t.find(',') != std::string::npos) {
            std::stringstream ss(t);
            std::string part;
            while (std::getline(ss, part, ',')) {
                if (!part.empty()) seq.push_back(parse_label(part));
            }
        } else {
            seq.push_back(parse_label(t));
        }
    }
    return seq;
}

inline void write_or_print(const std::string& text, const std::string& path, std::ostream& out) {
    if (path.empty()) {
        out << text;
        return;
    }
    std::ofstream f(path);
    if (!f) throw ParseError("cannot write " + path);
    f << text;
}

inline std::string seq_str(const std::vector<Label>& seq) {
    std::string s;
    for (std::size_t i = 0; i < seq.size(); ++i) s += (i ? " " : "") + seq[i].str();
    return s.empty() ? "(empty)" : s;
}

/// "gr:3", "path" or "point", with the label the filtration starts from.
inline std::pair<SeedGenerator, Label> generator_from_spec(const std::string& spec) {
    if (spec == "path") return {path_generator(), Label{0}};
    if (spec == "point") return {point_generator(), Label{0}};
    if (spec.rfind("gr:", 0) == 0) {
        const int k = std::stoi(spec.substr(3));
        return {gr_infinity_generator(k), Label{0, 0}};
    }
    throw ParseError("unknown generator '" + spec + "' (expected gr:K, path or point)");
}

inline int report_filtration(const Filtration& f, std::size_t depth, std::ostream& out) {
    for (std::size_t i = 0; i < f.stages.size(); ++i) {
        const Seed& s = f.stages[i];
        out << "stage " << i << ": " << s.vars().size() << " variables, " << s.ex().size() << " exchangeable\n";
    }
    const CheckResult c = verify_colimit_consistency(f, depth);
    out << "colimit consistency (depth " << depth << "): " << c.str() << (c.passed() ? "\n" : "");
    return c.passed() ? kPass : kCheckFailed;
}

} // namespace detail

inline int cmd_check(const std::string& path, std::ostream& out) {
    const LoadResult lr = load_seed(path);
    out << lr.report.str();
    return lr.ok() ? kPass : kCheckFailed;
}

inline int cmd_mutate(const std::string& path, const std::vector<std::string>& tokens, const std::string& out_path,
                      std::ostream& out, std::ostream& err) {
    bool ok = false;
    Seed s = detail::load_valid(path, err, ok);
    if (!ok) return kCheckFailed;
    const std::vector<Label> seq = detail::parse_sequence(tokens);
    for (const auto& k : seq) {
        if (!s.is_exchangeable(k)) throw PreconditionError("cannot mutate at " + k.str() + ": not exchangeable");
        s = mutate_seed(s, k);
    }
    out << "sequence: " << detail::seq_str(seq) << "\n";
    detail::print_variables(s, out);
    const ValidationReport v = validate_seed(s);
    if (!out_path.empty()) save_seed(s, out_path);
    if (!v.ok()) {
        err << v.str();
        return kCheckFailed;
    }
    return kPass;
}

inline int cmd_closure(const std::string& path, std::size_t max_seeds, std::ostream& out, std::ostream& err) {
    bool ok = false;
    const Seed s = detail::load_valid(path, err, ok);
    if (!ok) return kCheckFailed;
    const ClosureReport c = mutation_closure(s, max_seeds);
    out << "seeds: " << c.seeds << "\n";
    out << "complete: " << (c.complete ? "yes" : "no") << "\n";
    out << "cluster variables: " << c.variables.size() << "\n";
    for (const auto& v : c.variables) out << "  " << s.format(v) << "\n";
    return c.complete ? kPass : kCheckFailed;
}

inline int cmd_morphism(const std::string& src_path, const std::string& tgt_path, const std::string& map_path,
                        std::size_t depth, std::ostream& out, std::ostream& err) {
    bool ok_s = false, ok_t = false;
    const Seed src = detail::load_valid(src_path, err, ok_s);
    const Seed tgt = detail::load_valid(tgt_path, err, ok_t);
    if (!ok_s || !ok_t) return kCheckFailed;
    if (!src.is_initial() || !tgt.is_initial()) {
        throw PreconditionError("morphisms are checked between rooted (initial) seeds");
    }
    const MorphismSpec m = morphism_from_json(read_json_file(map_path), src, tgt);
    const VerificationResult st = check_structural(m);
    out << "structural: " << st.str() << (st.passed() ? "\n" : "");
    if (!st.passed()) return kCheckFailed;
    const VerificationResult cm3 = verify_cm3(m, depth);
    out << "CM3 (depth " << cm3.depth_checked << ", " << cm3.sequences_checked << " sequences): " << cm3.str()
        << (cm3.passed() ? "\n" : "");
    return cm3.passed() ? kPass : kCheckFailed;
}

inline int cmd_grassmannian(int k, const std::string& n_text, std::size_t stages, std::size_t depth,
                            const std::string& out_path, std::ostream& out) {
    if (n_text == "inf") {
        const Filtration f = build_filtration(gr_infinity_generator(k), Label{0, 0}, stages);
        out << "Gr(" << k << ",inf) filtration from (0,0)\n";
        return detail::report_filtration(f, depth, out);
    }
    int n = 0;
    try {
        n = std::stoi(n_text);
    } catch (const std::exception&) {
        throw ParseError("n must be an integer or 'inf'");
    }
    const Seed s = build_gr_seed(k, n);
    const ValidationReport v = validate_seed(s);
    if (!out_path.empty()) {
        save_seed(s, out_path);
    } else {
        out << "Gr(" << k << "," << n << "): " << s.vars().size() << " variables, " << s.ex().size()
            << " exchangeable, " << s.vars().size() - s.ex().size() << " frozen\n";
        for (const auto& l : s.vars()) {
            out << "  " << l.str() << " " << s.display_name(l) << (s.is_exchangeable(l) ? "" : " (frozen)") << "\n";
        }
        out << v.str();
    }
    return v.ok() ? kPass : kCheckFailed;
}

inline int cmd_filtration(const std::string& spec, std::size_t stages, std::size_t depth, std::ostream& out) {
    const auto [gen, start] = detail::generator_from_spec(spec);
    const Filtration f = build_filtration(gen, start, stages);
    out << spec << " filtration from " << start.str() << "\n";
    return detail::report_filtration(f, depth, out);
}

inline int cmd_dot(const std::string& source, const std::string& out_path, std::ostream& out, std::ostream& err) {
    Seed s;
    if (source.rfind("gr:", 0) == 0) {
        const auto colon = source.find(':', 3);
        if (colon == std::string::npos) throw ParseError("expected gr:K:N");
        s = build_gr_seed(std::stoi(source.substr(3, colon - 3)), std::stoi(source.substr(colon + 1)));
    } else {
        bool ok = false;
        s = detail::load_valid(source, err, ok);
        if (!ok) return kCheckFailed;
    }
    detail::write_or_print(seed_to_dot(s), out_path, out);
    return kPass;
}

inline int cmd_repl(const std::string& path, std::istream& in, std::ostream& out, std::ostream& err) {
    bool ok = false;
    Seed cur = detail::load_valid(path, err, ok);
    if (!ok) return kCheckFailed;
    std::vector<std::pair<Label, Seed>> history;
    std::string line;
    out << "> " << std::flush;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string cmd;
        ls >> cmd;
        std::string arg;
        std::getline(ls, arg);
        arg.erase(0, arg.find_first_not_of(' '));
        try {
            if (cmd.empty()) {
            } else if (cmd == "quit" || cmd == "exit") {
                break;
            } else if (cmd == "help") {
                out << "mutate K | show [LABEL] | undo | export [PATH] | seed | quit\n";
            } else if (cmd == "mutate") {
                const Label k = parse_label(arg);
                if (!cur.is_exchangeable(k)) throw PreconditionError(k.str() + " is not exchangeable");
                Seed next = mutate_seed(cur, k);
                history.emplace_back(k, cur);
                cur = std::move(next);
                out << k.var_name() << " = " << cur.format(cur.frame(k)) << "\n";
            } else if (cmd == "show") {
                if (arg.empty()) {
                    detail::print_variables(cur, out);
                } else {
                    const Label l = parse_label(arg);
                    out << l.var_name() << " = " << cur.format(cur.frame(l)) << "\n";
                }
            } else if (cmd == "undo") {
                if (history.empty()) {
                    out << "nothing to undo\n";
                } else {
                    // Mutation is an involution: mutating again at k restores
                    // the previous seed; the stored copy double-checks it.
                    auto [k, prev] = std::move(history.back());
                    history.pop_back();
                    Seed back = mutate_seed(cur, k);
                    if (!(back == prev)) err << "warning: involution mismatch at " << k.str() << "\n";
                    cur = std::move(prev);
                    out << "undid mutation at " << k.str() << "\n";
                }
            } else if (cmd == "export") {
                detail::write_or_print(seed_to_string(cur), arg, out);
            } else if (cmd == "seed") {
                out << "exchangeable:";
                for (const auto& l : cur.ex()) out << " " << l.str();
                out << "\n";
                for (const auto& [ij, x] : cur.b().entries()) {
                    out << "  b" << qcluster::detail::pair_str(ij.first, ij.second) << " = " << x << "\n";
                }
            } else {
                out << "unknown command '" << cmd << "' (try help)\n";
            }
        } catch (const Error& e) {
            out << "error: " << e.what() << "\n";
        }
        out << "> " << std::flush;
    }
    out << "\n";
    return kPass;
}

/// Runs the command line `args` (without the program name).
inline int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
    CLI::App app{"Graded quantum cluster algebra toolkit", "qcluster"};
    app.require_subcommand(1);
    std::size_t depth = 4, max_seeds = 10000, stages = 4;
    std::string out_path;
    std::string seed_path;
    std::vector<std::string> files;
    std::vector<std::string> sequence;
    int k = 0;
    std::string n_text, spec;

    auto* check = app.add_subcommand("check", "validate a seed file");
    check->add_option("seed", seed_path, "seed file")->required();

    auto* mutate = app.add_subcommand("mutate", "mutate a seed along a sequence");
    mutate->add_option("seed", seed_path, "seed file")->required();
    mutate->add_option("sequence", sequence, "labels to mutate at, in order");
    mutate->add_option("--out", out_path, "write the mutated seed here");

    auto* closure = app.add_subcommand("closure", "breadth-first mutation closure");
    closure->add_option("seed", seed_path, "seed file")->required();
    closure->add_option("--max-seeds", max_seeds, "bound on distinct seeds");

    auto* morphism = app.add_subcommand("morphism", "verify a rooted cluster morphism");
    morphism->add_option("files", files, "source seed, target seed, map file")->required()->expected(3);
    morphism->add_option("--depth", depth, "CM3 depth");

    auto* grass = app.add_subcommand("grassmannian", "build the Gr(k,n) seed, or the Gr(k,inf) filtration");
    grass->add_option("k", k)->required();
    grass->add_option("n", n_text, "n, or inf")->required();
    grass->add_option("--stages", stages, "filtration stages for n = inf");
    grass->add_option("--depth", depth, "consistency depth for n = inf");
    grass->add_option("--out", out_path, "write the seed here");

    auto* filt = app.add_subcommand("filtration", "build and verify a filtration (gr:K, path, point)");
    filt->add_option("generator", spec)->required();
    filt->add_option("--stages", stages, "number of stages");
    filt->add_option("--depth", depth, "consistency depth");

    auto* dot = app.add_subcommand("dot", "export the quiver as DOT (seed file or gr:K:N)");
    dot->add_option("seed", seed_path, "seed file or gr:K:N")->required();
    dot->add_option("--out", out_path, "write here instead of stdout");

    auto* repl = app.add_subcommand("repl", "interactive mutation");
    repl->add_option("seed", seed_path, "seed file")->required();

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kPass : kUsage;
    }

    try {
        if (check->parsed()) return cmd_check(seed_path, out);
        if (mutate->parsed()) return cmd_mutate(seed_path, sequence, out_path, out, err);
        if (closure->parsed()) return cmd_closure(seed_path, max_seeds, out, err);
        if (morphism->parsed()) return cmd_morphism(files[0], files[1], files[2], depth, out, err);
        if (grass->parsed()) return cmd_grassmannian(k, n_text, stages, depth, out_path, out);
        if (filt->parsed()) return cmd_filtration(spec, stages, depth, out);
        if (dot->parsed()) return cmd_dot(seed_path, out_path, out, err);
        if (repl->parsed()) return cmd_repl(seed_path, in, out, err);
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const PreconditionError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const IndexError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kCheckFailed;
    } catch (const std::logic_error& e) {
        // std::stoi on a malformed number in gr:K or gr:K:N
        err << "error: bad number (" << e.what() << ")\n";
        return kUsage;
    }
    return kUsage;
}

} // namespace qcluster::cli
