// Command-line front end: loads a JSON model and prints pairings, the
// splitting, local heights or the invariant suite.

#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "padicheights/io.hpp"
#include "padicheights/selfcheck.hpp"

using namespace padicheights;
using io::json;

namespace {

constexpr int kExitInvariant = 1;
constexpr int kExitInput = 2;

struct Flags {
    std::optional<unsigned> p;
    std::optional<int> precision;
    std::optional<int> truncation;
    std::optional<std::string> log_branch;
    std::optional<std::string> t;
    std::uint64_t seed = 1;
    bool json_output = false;
    std::string file;
    bool lengths = false;
    int trials = 10;
};

json literal_flag(const std::string& text, const std::string& flag) {
    try {
        return json::parse(text);
    } catch (const json::parse_error&) {
        throw SchemaError("--" + flag + ": expected an integer or a p-adic literal such as {\"val\": 0, \"digits\": [1]}");
    }
}

io::Overrides overrides(const Flags& fl) {
    io::Overrides ov;
    ov.p = fl.p;
    ov.precision = fl.precision;
    ov.truncation = fl.truncation;
    if (fl.log_branch) ov.log_branch = literal_flag(*fl.log_branch, "log-branch");
    if (fl.t) ov.t = literal_flag(*fl.t, "t");
    return ov;
}

void print_warnings(const std::vector<std::string>& warnings) {
    for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
}

io::CurveFile load(const Flags& fl) {
    std::vector<std::string> warnings;
    auto file = io::parse_curve_file(fl.file, overrides(fl), &warnings);
    print_warnings(warnings);
    return file;
}

json header(const std::string& command, const semistable::CurveModel& x) {
    return json{{"command", command},
                {"p", x.field().p},
                {"precision", x.field().cap},
                {"truncation", x.window()},
                {"log_branch", io::to_json(x.log_branch())}};
}

void print_matrix(std::ostream& os, const padic::PadicMatrix& m, const std::vector<std::string>& labels) {
    for (std::size_t r = 0; r < m.rows(); ++r) {
        os << "  " << (r < labels.size() ? labels[r] : std::to_string(r)) << ":";
        for (std::size_t c = 0; c < m.cols(); ++c) os << (c ? " | " : " ") << padic::to_string(m(r, c));
        os << "\n";
    }
}

void print_cochain(std::ostream& os, const std::string& name, const std::vector<padic::PadicNumber>& values) {
    os << name << ":\n";
    for (std::size_t i = 0; i < values.size(); ++i) os << "  [" << i << "] " << padic::to_string(values[i]) << "\n";
}

int cmd_index(const Flags& fl) {
    std::vector<std::string> warnings;
    auto file = io::parse_index_file(fl.file, overrides(fl), &warnings);
    print_warnings(warnings);
    const auto value = laurent::double_index(file.f, file.g, file.annulus);
    if (fl.json_output) {
        json out{{"command", "index"}, {"p", file.context.field.p}, {"precision", file.context.field.cap},
                 {"orientation", file.annulus.orientation}, {"index", io::to_json(value)}};
        std::cout << out.dump(2) << "\n";
    } else {
        std::cout << "double index <F, G> (orientation " << file.annulus.orientation << "): " << padic::to_string(value)
                  << "\n";
    }
    return 0;
}

int cmd_harmonic(const Flags& fl) {
    auto file = load(fl);
    const auto& x = file.model;
    if (!file.graph_cochain) throw SchemaError(fl.file + ": the harmonic command needs \"graph_cochain\"");
    std::span<const long long> lengths;
    if (fl.lengths) lengths = x.lengths();
    auto dec = graphs::harmonic_project(x.graph(), *file.graph_cochain, lengths);
    if (fl.json_output) {
        json out = header("harmonic", x);
        out["edge_lengths"] = fl.lengths;
        out["cochain"] = io::to_json(*file.graph_cochain);
        out["harmonic"] = io::to_json(dec.harmonic);
        out["potential"] = io::to_json(dec.potential);
        std::cout << out.dump(2) << "\n";
        return 0;
    }
    std::cout << "c = h + df with " << (fl.lengths ? "d*(h / v(q_e)) = 0" : "d*h = 0") << "\n";
    print_cochain(std::cout, "harmonic h (per edge)", dec.harmonic.values);
    print_cochain(std::cout, "potential f (per vertex, f(0) = 0)", dec.potential.values);
    return 0;
}

int cmd_cohomology(const Flags& fl) {
    auto file = load(fl);
    const auto& x = file.model;
    auto basis = semistable::h1_basis(x);
    const std::size_t g = x.genus();
    const std::size_t nz = x.puncture_count();
    json classes = json::array();
    for (std::size_t i = 0; i < basis.dimension(); ++i) {
        const auto& c = basis.classes[i];
        classes.push_back(json{{"label", basis.labels[i]},
                               {"monodromy", io::to_json(semistable::monodromy(c, x))},
                               {"z_residues", io::to_json(graphs::Cochain1{semistable::z_residues(c, x)})}});
    }
    if (fl.json_output) {
        json out = header("cohomology", x);
        out["genus"] = g;
        out["punctures"] = nz;
        out["dimension"] = basis.dimension();
        out["h1x"] = basis.h1x;
        out["classes"] = classes;
        std::cout << out.dump(2) << "\n";
        return 0;
    }
    std::cout << "genus g = " << g << ", #Z = " << nz << "\n";
    std::cout << "dim H1_dR(X - Z) = " << basis.dimension() << "\n";
    std::cout << "H1_dR(X) sub-basis:";
    for (auto i : basis.h1x) std::cout << " " << basis.labels[i];
    std::cout << "\n";
    for (std::size_t i = 0; i < basis.dimension(); ++i) {
        std::cout << basis.labels[i] << ":\n";
        print_cochain(std::cout, "  N", semistable::monodromy(basis.classes[i], x).values);
        print_cochain(std::cout, "  residues at Z", semistable::z_residues(basis.classes[i], x));
    }
    return 0;
}

int cmd_pair(const Flags& fl) {
    auto file = load(fl);
    const auto& x = file.model;
    auto basis = semistable::h1_basis(x);
    auto gram = semistable::hybrid_gram(basis.classes, x);
    if (fl.json_output) {
        json out = header("pair", x);
        out["labels"] = basis.labels;
        out["gram"] = io::to_json(gram);
        std::cout << out.dump(2) << "\n";
        return 0;
    }
    std::cout << "Gram matrix of the hybrid pairing (" << gram.rows() << " x " << gram.cols() << "):\n";
    print_matrix(std::cout, gram, basis.labels);
    return 0;
}

int cmd_psi(const Flags& fl) {
    auto file = load(fl);
    const auto& x = file.model;
    auto basis = semistable::h1_basis(x);
    std::vector<std::string> rows;
    for (auto i : basis.h1x) rows.push_back(basis.labels[i]);
    if (basis.h1x.empty()) {
        if (fl.json_output) {
            json out = header("psi", x);
            out["columns"] = basis.labels;
            out["rows"] = json::array();
            out["psi"] = json::array();
            std::cout << out.dump(2) << "\n";
        } else {
            std::cout << "H1_dR(X) = 0: Psi is the zero map\n";
        }
        return 0;
    }
    auto psi = semistable::psi_matrix(basis, x);
    if (fl.json_output) {
        json out = header("psi", x);
        out["columns"] = basis.labels;
        out["rows"] = rows;
        out["psi"] = io::to_json(psi);
        std::cout << out.dump(2) << "\n";
        return 0;
    }
    std::cout << "Psi: column j = coordinates of Psi(class j) in the H1_dR(X) sub-basis\n";
    std::cout << "columns:";
    for (const auto& l : basis.labels) std::cout << " " << l;
    std::cout << "\n";
    print_matrix(std::cout, psi, rows);
    return 0;
}

int cmd_height(const Flags& fl) {
    auto file = load(fl);
    const auto& x = file.model;
    if (!file.y || !file.z) throw SchemaError(fl.file + ": the height command needs \"divisors\" with \"y\" and \"z\"");
    auto h = semistable::local_height(*file.y, *file.z, file.height_data(), x);
    if (fl.json_output) {
        json out = header("height", x);
        out["t"] = io::to_json(file.t);
        out["y"] = io::to_json(*file.y);
        out["z"] = io::to_json(*file.z);
        out["height"] = io::to_json(h);
        std::cout << out.dump(2) << "\n";
        return 0;
    }
    std::cout << "local height h(y, z) = " << padic::to_string(h) << "\n";
    return 0;
}

int cmd_selfcheck(const Flags& fl) {
    auto file = load(fl);
    const auto& x = file.model;
    std::optional<selfcheck::HeightInput> height;
    if (file.y && file.z) height = selfcheck::HeightInput{*file.y, *file.z, file.height_data()};
    selfcheck::Options opts;
    opts.seed = fl.seed;
    opts.trials = fl.trials;
    auto results = selfcheck::run(x, height, opts);
    bool ok = true;
    for (const auto& r : results) ok = ok && r.passed;
    if (fl.json_output) {
        json out = header("selfcheck", x);
        out["seed"] = fl.seed;
        json checks = json::array();
        for (const auto& r : results) checks.push_back(json{{"name", r.name}, {"passed", r.passed}, {"detail", r.detail}});
        out["checks"] = checks;
        out["passed"] = ok;
        std::cout << out.dump(2) << "\n";
    } else {
        for (const auto& r : results) {
            std::cout << (r.passed ? "PASS " : "FAIL ") << r.name;
            if (!r.detail.empty()) std::cout << " (" << r.detail << ")";
            std::cout << "\n";
        }
        std::cout << (ok ? "all checks passed" : "some checks failed") << "\n";
    }
    return ok ? 0 : kExitInvariant;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"p-adic double indices, pairings, the splitting Psi and local heights on semi-stable models"};
    app.require_subcommand(1);
    Flags fl;
    auto* p_opt = app.add_option("--p", fl.p, "prime p (overrides the file)");
    p_opt->check(CLI::PositiveNumber);
    app.add_option("--precision", fl.precision, "absolute precision N in digits (overrides the file)");
    app.add_option("--truncation", fl.truncation, "Laurent truncation M (overrides the file)");
    app.add_option("--log-branch", fl.log_branch, "value of log p, as an integer or p-adic literal");
    app.add_option("--t", fl.t, "trace multiplier t, as an integer or p-adic literal");
    app.add_option("--seed", fl.seed, "seed for randomized self-checks");
    app.add_flag("--json", fl.json_output, "machine-readable output");

    struct Command {
        const char* name;
        const char* help;
        int (*run)(const Flags&);
    };
    const Command commands[] = {
        {"index", "double index of two Laurent-plus-log functions on an annulus", cmd_index},
        {"harmonic", "harmonic representative of the file's graph cochain", cmd_harmonic},
        {"cohomology", "basis and dimension of H1_dR(X - Z)", cmd_cohomology},
        {"pair", "Gram matrix of the hybrid pairing on the basis", cmd_pair},
        {"psi", "matrix of the splitting Psi", cmd_psi},
        {"height", "local height of the file's divisors y and z", cmd_height},
        {"selfcheck", "run the invariant suite; exit 1 on failure", cmd_selfcheck},
    };
    std::vector<std::pair<CLI::App*, const Command*>> subs;
    for (const auto& c : commands) {
        auto* sub = app.add_subcommand(c.name, c.help);
        sub->fallthrough();
        sub->add_option("file", fl.file, "JSON input file")->required();
        if (std::string(c.name) == "harmonic") sub->add_flag("--lengths", fl.lengths, "weight edges by v(q_e)");
        if (std::string(c.name) == "selfcheck") sub->add_option("--trials", fl.trials, "random samples per check");
        subs.emplace_back(sub, &c);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInput;
    }

    try {
        for (const auto& [sub, cmd] : subs) {
            if (sub->parsed()) return cmd->run(fl);
        }
    } catch (const InvariantViolation& e) {
        std::cerr << "invariant violation: " << e.what() << "\n";
        return kExitInvariant;
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvariant;
    }
    return kExitInput;
}
