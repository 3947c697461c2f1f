#ifndef CHAINORDER_CLI_HPP
#define CHAINORDER_CLI_HPP

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "face_lattice.hpp"
#include "io.hpp"
#include "normal_form.hpp"
#include "polytope.hpp"
#include "poset.hpp"

namespace chainorder::cli {

enum ExitCode : int { ok = 0, verification_failed = 1, invalid_config = 2 };

class ConfigError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

class VerificationFailure : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Flags shared by the polytope commands, after parsing.
struct RunConfig {
    std::string command;
    std::string tau_text;
    std::optional<int> k;
    std::string poset_file;
    std::string polytope;
    std::string method = "geometric";
    std::string format = "csv";
    std::string output;
    std::string export_lattice;
    std::uint64_t budget_faces = 50'000'000;
    std::uint64_t budget_points = std::uint64_t{1} << 26;
    bool check_vertices = false;
};

/// Partitions of n with at least three parts and second part at least 2, in lexicographic order.
inline std::vector<Tau> table_shapes(int n) {
    std::vector<Tau> out;
    std::vector<int> cur;
    std::function<void(int, int)> rec = [&](int rest, int cap) {
        if (rest == 0) {
            if (cur.size() >= 3 && cur[1] >= 2) out.push_back(Tau{cur});
            return;
        }
        for (int p = std::min(rest, cap); p >= 1; --p) {
            cur.push_back(p);
            rec(rest - p, p);
            cur.pop_back();
        }
    };
    rec(n, n);
    std::sort(out.begin(), out.end(), [](const Tau& a, const Tau& b) { return a.parts < b.parts; });
    return out;
}

struct TauTarget {
    Tau tau;
    int k;
};

inline TauTarget resolve_tau_target(const RunConfig& cfg) {
    Tau tau = Tau::parse(cfg.tau_text);
    tau.validate();
    std::optional<int> k = cfg.k;
    if (!cfg.polytope.empty()) {
        int implied = -1;
        if (cfg.polytope == "order") implied = 0;
        else if (cfg.polytope == "chain") implied = tau.length();
        else if (cfg.polytope != "chain-order") throw ConfigError("unknown polytope " + cfg.polytope);
        if (implied >= 0) {
            if (k && *k != implied)
                throw ConfigError("--k " + std::to_string(*k) + " contradicts --polytope " + cfg.polytope);
            k = implied;
        }
    }
    if (!k) throw ConfigError("--tau needs --k (or --polytope order|chain)");
    if (*k < 0 || *k > tau.length())
        throw ConfigError("--k " + std::to_string(*k) + " outside [0, " + std::to_string(tau.length()) + "]");
    return {tau, *k};
}

inline void check_tau_xor_poset(const RunConfig& cfg) {
    if (cfg.tau_text.empty() == cfg.poset_file.empty()) throw ConfigError("give exactly one of --tau and --poset");
    if (!cfg.poset_file.empty() && cfg.k) throw ConfigError("--k applies only to chain-order targets given by --tau");
}

// Vertices of the chain-order polytope; with check_vertices the 0/1 assumption is verified exactly.
inline VRep tau_vertices(const HRep& h, const RunConfig& cfg) {
    VRep v = zero_one_vertices(h, cfg.budget_points);
    if (cfg.check_vertices) {
        VRep exact;
        for (const auto& p : vertex_enum_exact(h)) {
            if (!p.integral()) throw VerificationFailure("fractional vertex found; the 0/1 vertex assumption fails");
            exact.vertices.push_back(p.num);
        }
        exact.canonicalize();
        if (!(exact == v)) throw VerificationFailure("0/1 vertices differ from exact vertex enumeration");
    }
    return v;
}

inline std::vector<std::uint64_t> geometric_for(const DoubleDescription& dd, const RunConfig& cfg) {
    auto fl = enumerate_faces(incidence_matrix(dd.vrep, dd.hrep), cfg.budget_faces);
    if (!cfg.export_lattice.empty()) {
        std::ofstream f(cfg.export_lattice);
        if (!f) throw ConfigError("cannot write " + cfg.export_lattice);
        f << to_json(fl).dump() << '\n';
    }
    auto fv = f_vector(fl);
    if (fl.dimension() > 0 && !euler_relation_holds(fv)) throw VerificationFailure("Euler relation fails for the computed lattice");
    return fv;
}

inline void emit(const RunConfig& cfg, std::ostream& out, const std::string& text) {
    if (cfg.output.empty()) {
        out << text;
        return;
    }
    std::ofstream f(cfg.output);
    if (!f) throw ConfigError("cannot write " + cfg.output);
    f << text;
}

inline std::string render_fvector(const RunConfig& cfg, const std::string& label, const std::string& k,
                                  const std::string& polytope, const std::vector<std::uint64_t>& f) {
    if (cfg.format == "json") {
        Json j{{"tau", label}, {"k", k.empty() ? Json(nullptr) : Json(std::stoi(k))}, {"polytope", polytope},
               {"method", cfg.method}, {"f_vector", f}};
        return j.dump() + "\n";
    }
    return csv_row(label, k, polytope, f) + "\n";
}

inline int cmd_fvector(const RunConfig& cfg, std::ostream& out) {
    check_tau_xor_poset(cfg);
    if (!cfg.poset_file.empty()) {
        if (cfg.polytope != "order" && cfg.polytope != "chain")
            throw ConfigError("--poset needs --polytope order|chain");
        if (cfg.method != "geometric") throw ConfigError("the normal form applies only to --tau input");
        Poset p = poset_from_json(read_json_file(cfg.poset_file));
        auto dd = cfg.polytope == "order" ? order_polytope_dd(p) : chain_polytope_dd(p);
        emit(cfg, out, render_fvector(cfg, cfg.poset_file, "", cfg.polytope, geometric_for(dd, cfg)));
        return ok;
    }
    auto [tau, k] = resolve_tau_target(cfg);
    if (cfg.method == "normalform" && !cfg.export_lattice.empty())
        throw ConfigError("--export-lattice needs the geometric method");
    std::vector<std::uint64_t> f;
    if (cfg.method != "normalform") {
        DoubleDescription dd;
        dd.hrep = chain_order_hrep(tau, k);
        dd.vrep = tau_vertices(dd.hrep, cfg);
        f = geometric_for(dd, cfg);
    }
    if (cfg.method != "geometric") {
        auto g = f_vector_normal_form(tau, k);
        if (cfg.method == "both" && g != f) {
            std::ostringstream os;
            os << "pipelines disagree for tau=" << tau.to_string() << " k=" << k << ": geometric "
               << csv_row("", "", "", f) << " vs normal form " << csv_row("", "", "", g);
            throw VerificationFailure(os.str());
        }
        f = std::move(g);
    }
    emit(cfg, out, render_fvector(cfg, tau.to_string(), std::to_string(k), polytope_name(tau, k), f));
    return ok;
}

inline int cmd_dd(const RunConfig& cfg, std::ostream& out) {
    check_tau_xor_poset(cfg);
    if (cfg.polytope.empty()) throw ConfigError("dd needs --polytope order|chain|chain-order");
    DoubleDescription dd;
    if (!cfg.poset_file.empty()) {
        if (cfg.polytope == "chain-order") throw ConfigError("chain-order polytopes need --tau and --k");
        Poset p = poset_from_json(read_json_file(cfg.poset_file));
        if (cfg.polytope == "order") dd = order_polytope_dd(p);
        else if (cfg.polytope == "chain") dd = chain_polytope_dd(p);
        else throw ConfigError("unknown polytope " + cfg.polytope);
    } else {
        auto [tau, k] = resolve_tau_target(cfg);
        dd.hrep = chain_order_hrep(tau, k);
        dd.vrep = tau_vertices(dd.hrep, cfg);
    }
    Json j{{"polytope", cfg.polytope}, {"hrep", to_json(dd.hrep)}, {"vrep", to_json(dd.vrep)}};
    emit(cfg, out, j.dump(2) + "\n");
    return ok;
}

inline int cmd_gen(const RunConfig& cfg, std::ostream& out, int random_n, double density, std::uint64_t seed) {
    if (cfg.tau_text.empty() == (random_n < 0)) throw ConfigError("gen needs exactly one of --tau and --random");
    Poset p = random_n >= 0 ? random_poset(random_n, density, seed) : make_maximal_ranked(Tau::parse(cfg.tau_text));
    emit(cfg, out, to_json(p).dump(2) + "\n");
    return ok;
}

inline std::string join(const std::vector<std::uint64_t>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s;
}

inline int cmd_verify(const RunConfig& cfg, const std::string& what, std::ostream& out) {
    if (cfg.tau_text.empty()) throw ConfigError("verify needs --tau");
    Tau tau = Tau::parse(cfg.tau_text);
    tau.validate();
    std::ostringstream text;
    Json json;
    bool passed = true;
    if (what == "injectivity") {
        std::vector<int> ks;
        if (cfg.k) {
            if (*cfg.k < 0 || *cfg.k >= tau.length())
                throw ConfigError("verify injectivity needs 0 <= k < " + std::to_string(tau.length()));
            ks.push_back(*cfg.k);
        } else {
            for (int k = 0; k < tau.length(); ++k) ks.push_back(k);
        }
        json = Json::array();
        for (int k : ks) {
            auto r = verify_injection(tau, k);
            passed = passed && r.passed();
            text << "tau=" << tau.to_string() << " k=" << k << " -> " << k + 1 << ": "
                 << (r.passed() ? "PASS" : "FAIL") << "\n"
                 << "  faces at k    by codim: " << join(r.source_counts) << "\n"
                 << "  images of psi by codim: " << join(r.image_counts) << "\n"
                 << "  faces at k+1  by codim: " << join(r.target_counts) << "\n"
                 << "  injective=" << r.injective << " codim_preserved=" << r.codim_preserved
                 << " images_valid=" << r.images_valid << " inverse_ok=" << r.inverse_ok << "\n";
            for (const auto& f : r.failures) text << "  ! " << f << "\n";
            json.push_back(to_json(r));
        }
    } else if (what == "monotone") {
        if (cfg.k) throw ConfigError("verify monotone runs every k; drop --k");
        auto r = verify_monotone(tau);
        passed = r.monotone;
        for (std::size_t k = 0; k < r.f.size(); ++k) text << "k=" << k << ": " << join(r.f[k]) << "\n";
        text << "monotone in k: " << (r.monotone ? "PASS" : "FAIL") << "\n";
        for (const auto& f : r.failures) text << "  ! " << f << "\n";
        json = to_json(r);
    } else {
        throw ConfigError("verify expects injectivity or monotone");
    }
    emit(cfg, out, cfg.format == "json" ? json.dump(2) + "\n" : text.str());
    return passed ? ok : verification_failed;
}

struct TableRow {
    Tau tau;
    std::vector<std::uint64_t> order, chain;
    std::string error;
};

inline std::vector<std::uint64_t> table_fvector(const Tau& tau, int k, const RunConfig& cfg) {
    std::vector<std::uint64_t> g, c;
    if (cfg.method != "normalform") {
        DoubleDescription dd;
        dd.hrep = chain_order_hrep(tau, k);
        dd.vrep = tau_vertices(dd.hrep, cfg);
        RunConfig quiet = cfg;
        quiet.export_lattice.clear();
        g = geometric_for(dd, quiet);
    }
    if (cfg.method != "geometric") c = f_vector_normal_form(tau, k);
    if (cfg.method == "both" && g != c)
        throw VerificationFailure("pipelines disagree for tau=" + tau.to_string() + " k=" + std::to_string(k));
    return cfg.method == "normalform" ? c : g;
}

/// Reads "tau",k,polytope,f... rows; the header line is skipped.
inline std::map<std::pair<std::string, std::string>, std::vector<std::uint64_t>> read_golden(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path);
    std::map<std::pair<std::string, std::string>, std::vector<std::uint64_t>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] != '"') continue;
        auto close = line.find('"', 1);
        if (close == std::string::npos) throw FormatError("golden: unterminated tau in " + line);
        std::string tau = line.substr(1, close - 1);
        std::stringstream rest(line.substr(close + 2));
        std::string k, polytope, cell;
        std::getline(rest, k, ',');
        std::getline(rest, polytope, ',');
        std::vector<std::uint64_t> f;
        while (std::getline(rest, cell, ',')) f.push_back(std::stoull(cell));
        rows[{tau, polytope}] = f;
    }
    return rows;
}

inline int cmd_table(const RunConfig& cfg, int n, int jobs, const std::string& golden, std::ostream& out,
                     std::ostream& err) {
    if (n < 1) throw ConfigError("--n must be positive");
    auto shapes = table_shapes(n);
    std::vector<TableRow> rows(shapes.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < shapes.size(); i = next++) {
            rows[i].tau = shapes[i];
            try {
                rows[i].order = table_fvector(shapes[i], 0, cfg);
                rows[i].chain = table_fvector(shapes[i], shapes[i].length(), cfg);
            } catch (const std::exception& e) {
                rows[i].error = e.what();
            }
        }
    };
    std::vector<std::thread> pool;
    const int workers = std::max(1, std::min<int>(jobs, static_cast<int>(shapes.size())));
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    bool passed = true;
    for (const auto& r : rows)
        if (!r.error.empty()) {
            err << "tau=" << r.tau.to_string() << ": " << r.error << "\n";
            passed = false;
        }
    if (!golden.empty()) {
        auto expect = read_golden(golden);
        for (const auto& r : rows) {
            for (auto [name, f] : {std::pair{"order", &r.order}, std::pair{"chain", &r.chain}}) {
                auto it = expect.find({r.tau.to_string(), name});
                if (it == expect.end() || it->second != *f) {
                    err << "golden mismatch: tau=" << r.tau.to_string() << " " << name << "\n";
                    passed = false;
                }
            }
        }
        if (expect.size() != 2 * rows.size()) {
            err << "golden file has " << expect.size() << " rows, table has " << 2 * rows.size() << "\n";
            passed = false;
        }
    }

    std::string text;
    if (cfg.format == "json") {
        Json j = Json::array();
        for (const auto& r : rows)
            j.push_back(Json{{"tau", r.tau.parts}, {"order", r.order}, {"chain", r.chain}});
        text = j.dump(2) + "\n";
    } else {
        text = "tau,k,polytope";
        for (int i = 0; i < n; ++i) text += ",f_" + std::to_string(i);
        text += "\n";
        for (const auto& r : rows) {
            text += csv_row(r.tau.to_string(), "0", "order", r.order) + "\n";
            text += csv_row(r.tau.to_string(), std::to_string(r.tau.length()), "chain", r.chain) + "\n";
        }
    }
    emit(cfg, out, text);
    return passed ? ok : verification_failed;
}

/// Entry point; args exclude the program name. Returns the process exit code.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Order, chain and chain-order polytopes of posets: face lattices and f-vectors", "chainorder"};
    app.require_subcommand(1);
    RunConfig cfg;
    const std::vector<std::string> formats{"csv", "json"};
    const std::vector<std::string> methods{"geometric", "normalform", "both"};
    const std::vector<std::string> polytopes{"order", "chain", "chain-order"};

    auto add_target = [&](CLI::App* sub) {
        sub->add_option("--tau", cfg.tau_text, "rank sizes, e.g. 5,2,1,4,2,3");
        sub->add_option("--k", cfg.k, "split rank: ranks 1..k form the chain part");
    };
    auto add_output = [&](CLI::App* sub) {
        sub->add_option("--output,-o", cfg.output, "write to this file instead of stdout");
    };
    auto add_budgets = [&](CLI::App* sub) {
        sub->add_option("--budget-faces", cfg.budget_faces, "maximum number of faces to enumerate");
        sub->add_option("--budget-points", cfg.budget_points, "maximum number of 0/1 points to scan");
        sub->add_flag("--check-vertices", cfg.check_vertices, "confirm 0/1 vertices by exact vertex enumeration");
    };

    int random_n = -1;
    double density = 0.3;
    std::uint64_t seed = 1;
    auto* gen = app.add_subcommand("gen", "print a poset as JSON");
    gen->add_option("--tau", cfg.tau_text, "maximal ranked poset P_tau");
    gen->add_option("--random", random_n, "random poset with this many elements");
    gen->add_option("--density", density, "relation probability for --random")->check(CLI::Range(0.0, 1.0));
    gen->add_option("--seed", seed, "seed for --random");
    add_output(gen);

    auto* dd = app.add_subcommand("dd", "double description of a polytope");
    add_target(dd);
    dd->add_option("--poset", cfg.poset_file, "poset JSON file");
    dd->add_option("--polytope", cfg.polytope)->check(CLI::IsMember(polytopes));
    add_budgets(dd);
    add_output(dd);

    auto* fv = app.add_subcommand("fvector", "f-vector of a polytope");
    add_target(fv);
    fv->add_option("--poset", cfg.poset_file, "poset JSON file");
    fv->add_option("--polytope", cfg.polytope)->check(CLI::IsMember(polytopes));
    fv->add_option("--method", cfg.method)->check(CLI::IsMember(methods));
    fv->add_option("--format", cfg.format)->check(CLI::IsMember(formats));
    fv->add_option("--export-lattice", cfg.export_lattice, "write faces and covers as JSON");
    add_budgets(fv);
    add_output(fv);

    std::string what;
    auto* ver = app.add_subcommand("verify", "check the injection psi or monotonicity in k");
    ver->add_option("what", what)->required()->check(CLI::IsMember({"injectivity", "monotone"}));
    add_target(ver);
    ver->add_option("--format", cfg.format)->check(CLI::IsMember({"text", "json"}));
    add_output(ver);

    int n = 10;
    int jobs = static_cast<int>(std::max(1U, std::thread::hardware_concurrency()));
    std::string golden;
    auto* tab = app.add_subcommand("table", "order and chain f-vectors of every nontrivial P_tau with |tau| = n");
    tab->add_option("--n", n);
    tab->add_option("--method", cfg.method)->check(CLI::IsMember(methods));
    tab->add_option("--format", cfg.format)->check(CLI::IsMember(formats));
    tab->add_option("--jobs", jobs)->check(CLI::PositiveNumber);
    tab->add_option("--check", golden, "compare against a golden CSV");
    add_budgets(tab);
    add_output(tab);

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::CallForHelp& e) {
        app.exit(e, out, err);
        return ok;
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return invalid_config;
    }

    try {
        if (*gen) return cmd_gen(cfg, out, random_n, density, seed);
        if (*dd) return cmd_dd(cfg, out);
        if (*fv) return cmd_fvector(cfg, out);
        if (*ver) {
            if (cfg.format == "csv") cfg.format = "text";
            return cmd_verify(cfg, what, out);
        }
        if (*tab) {
            if (cfg.method == "geometric" && tab->count("--method") == 0) cfg.method = "both";
            return cmd_table(cfg, n, jobs, golden, out, err);
        }
    } catch (const VerificationFailure& e) {
        err << "verification failed: " << e.what() << "\n";
        return verification_failed;
    } catch (const NotGraded& e) {
        err << "verification failed: " << e.what() << "\n";
        return verification_failed;
    } catch (const BudgetExceeded& e) {
        err << "budget exceeded: " << e.what() << " (raise --budget-faces or --budget-points)\n";
        return invalid_config;
    } catch (const std::length_error& e) {
        err << "invalid configuration: " << e.what() << "\n";
        return invalid_config;
    } catch (const std::invalid_argument& e) {
        err << "invalid configuration: " << e.what() << "\n";
        return invalid_config;
    } catch (const FormatError& e) {
        err << "invalid input: " << e.what() << "\n";
        return invalid_config;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return verification_failed;
    }
    return invalid_config;
}

}  // namespace chainorder::cli

#endif  // CHAINORDER_CLI_HPP
