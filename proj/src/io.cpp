#include "padicheights/io.hpp"

#include <fstream>
#include <limits>
#include <set>

namespace padicheights::io {

using laurent::LogLaurent;
using padic::Field;
using padic::PadicContext;
using padic::PadicMatrix;
using padic::PadicNumber;
using semistable::CechCochain;
using semistable::CurveModel;
using semistable::Divisor;
using semistable::EdgeGluing;
using wideopen::Point;
using wideopen::RationalOneForm;

namespace {

[[noreturn]] void schema_fail(const std::string& where, const std::string& what) {
    throw SchemaError(where + ": " + what);
}

std::string at_index(const std::string& where, std::size_t i) { return where + "[" + std::to_string(i) + "]"; }
std::string at_key(const std::string& where, const std::string& key) { return where + "." + key; }

const json& require(const json& obj, const std::string& key, const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end()) schema_fail(where, "missing key \"" + key + "\"");
    return *it;
}

void require_object(const json& j, const std::string& where) {
    if (!j.is_object()) schema_fail(where, "expected an object");
}

void require_array(const json& j, const std::string& where) {
    if (!j.is_array()) schema_fail(where, "expected an array");
}

void allow_keys(const json& obj, std::initializer_list<const char*> keys, const std::string& where) {
    std::set<std::string> allowed(keys.begin(), keys.end());
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!allowed.count(it.key())) schema_fail(where, "unknown key \"" + it.key() + "\"");
    }
}

long long get_integer(const json& j, const std::string& where) {
    if (!j.is_number_integer()) schema_fail(where, "expected an integer");
    return j.get<long long>();
}

long long get_integer_in(const json& j, long long lo, long long hi, const std::string& where) {
    long long v = get_integer(j, where);
    if (v < lo || v > hi) {
        schema_fail(where, "value " + std::to_string(v) + " outside [" + std::to_string(lo) + ", " +
                               std::to_string(hi) + "]");
    }
    return v;
}

/// Runs `body`, turning library input errors into errors that name the location.
template <class F>
auto located(const std::string& where, F&& body) -> decltype(body()) {
    try {
        return body();
    } catch (const SchemaError&) {
        throw;
    } catch (const InvariantViolation& e) {
        throw InvariantViolation(where + ": " + e.what());
    } catch (const InputError& e) {
        throw SchemaError(where + ": " + e.what());
    }
}

void note(std::vector<std::string>* warnings, const std::string& text) {
    if (warnings) warnings->push_back(text);
}

/// The flag value if given (warning when the file also sets the key), else the file value.
template <class T>
std::optional<T> pick(const json& doc, const char* key, const std::optional<T>& flag, const std::string& flag_name,
                      std::vector<std::string>* warnings) {
    if (flag) {
        if (doc.contains(key)) note(warnings, "--" + flag_name + " overrides \"" + key + "\" from the file");
        return flag;
    }
    return std::nullopt;
}

struct Settings {
    PadicContext ctx;
    int window = laurent::kDefaultWindow;
};

void check_version(const json& doc) {
    require_object(doc, "$");
    const json& v = require(doc, "schema_version", "$");
    if (get_integer(v, "$.schema_version") != kSchemaVersion) {
        schema_fail("$.schema_version", "unsupported version " + v.dump() + " (expected " +
                                            std::to_string(kSchemaVersion) + ")");
    }
}

Settings read_settings(const json& doc, const Overrides& ov, std::vector<std::string>* warnings) {
    unsigned p = 0;
    if (auto f = pick(doc, "p", ov.p, "p", warnings)) {
        p = *f;
    } else {
        p = static_cast<unsigned>(get_integer_in(require(doc, "p", "$"), 3, std::numeric_limits<int>::max(), "$.p"));
    }
    int precision = 0;
    if (auto f = pick(doc, "precision", ov.precision, "precision", warnings)) {
        precision = *f;
    } else {
        precision = static_cast<int>(
            get_integer_in(require(doc, "precision", "$"), 1, std::numeric_limits<int>::max(), "$.precision"));
    }
    int window = laurent::kDefaultWindow;
    if (auto f = pick(doc, "truncation", ov.truncation, "truncation", warnings)) {
        window = *f;
    } else if (doc.contains("truncation")) {
        window = static_cast<int>(get_integer_in(doc["truncation"], 1, 100000, "$.truncation"));
    }
    if (window < 1) schema_fail("$.truncation", "must be positive");
    if (!padic::is_prime(p) || p == 2) schema_fail("$.p", "p must be an odd prime");

    // PrecisionExhausted from a too small precision is not an input error; let it through.
    PadicContext ctx = PadicContext::make(p, precision);
    if (auto f = pick(doc, "log_branch", ov.log_branch, "log-branch", warnings)) {
        ctx = ctx.with_branch(padic_from_json(ctx.field, *f, "--log-branch"));
    } else if (doc.contains("log_branch")) {
        ctx = ctx.with_branch(padic_from_json(ctx.field, doc["log_branch"], "$.log_branch"));
    }
    return Settings{ctx, window};
}

}  // namespace

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError(path + ": cannot open file");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw SchemaError(path + ": malformed JSON: " + e.what());
    }
}

json to_json(const PadicNumber& x) {
    if (x.is_zero()) return json{{"val", x.precision()}, {"digits", json::array()}, {"prec", x.precision()}};
    return json{{"val", x.valuation()}, {"digits", x.digits()}, {"prec", x.precision()}};
}

PadicNumber padic_from_json(Field f, const json& j, const std::string& where) {
    if (j.is_number_integer()) return PadicNumber::integer(f, j.get<long long>());
    require_object(j, where);
    if (j.contains("num")) {
        allow_keys(j, {"num", "den"}, where);
        const long long num = get_integer(require(j, "num", where), at_key(where, "num"));
        const long long den = j.contains("den") ? get_integer(j["den"], at_key(where, "den")) : 1;
        if (den == 0) schema_fail(at_key(where, "den"), "zero denominator");
        return PadicNumber::rational(f, mpz_class(static_cast<long>(num)), mpz_class(static_cast<long>(den)));
    }
    allow_keys(j, {"val", "digits", "prec"}, where);
    const long long val = get_integer_in(require(j, "val", where), -1000000, 1000000, at_key(where, "val"));
    const json& ds = require(j, "digits", where);
    require_array(ds, at_key(where, "digits"));
    std::optional<int> prec;
    if (j.contains("prec")) {
        prec = static_cast<int>(get_integer_in(j["prec"], -1000000, 1000000, at_key(where, "prec")));
        if (*prec < val) schema_fail(at_key(where, "prec"), "precision below the valuation");
        if (static_cast<long long>(ds.size()) > *prec - val) {
            schema_fail(at_key(where, "digits"), "more digits than the stated precision allows");
        }
    }
    std::vector<unsigned> digits;
    digits.reserve(ds.size());
    for (std::size_t i = 0; i < ds.size(); ++i) {
        const std::string w = at_index(at_key(where, "digits"), i);
        digits.push_back(static_cast<unsigned>(get_integer_in(ds[i], 0, f.p - 1, w)));
    }
    return PadicNumber::from_digits(f, static_cast<int>(val), digits, prec);
}

json to_json(const Point& a) { return a.infinite ? json("inf") : to_json(a.x); }

Point point_from_json(Field f, const json& j, const std::string& where) {
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "inf" || s == "infinity") return Point::infinity();
        schema_fail(where, "unknown point \"" + s + "\"");
    }
    return Point::at(padic_from_json(f, j, where));
}

json to_json(const LogLaurent& f) {
    json terms = json::array();
    for (int n = -f.window(); n <= f.window(); ++n) {
        const PadicNumber c = f.coeff(n);
        if (laurent::is_exact_zero(c)) continue;
        terms.push_back(json{{"n", n}, {"c", to_json(c)}});
    }
    return json{{"log", to_json(f.log_coefficient())}, {"terms", terms}};
}

LogLaurent log_laurent_from_json(Field f, int window, const json& j, const std::string& where) {
    require_object(j, where);
    allow_keys(j, {"log", "terms"}, where);
    LogLaurent out(f, window);
    if (j.contains("log")) out.set_log_coefficient(padic_from_json(f, j["log"], at_key(where, "log")));
    if (j.contains("terms")) {
        const json& terms = j["terms"];
        require_array(terms, at_key(where, "terms"));
        for (std::size_t i = 0; i < terms.size(); ++i) {
            const std::string w = at_index(at_key(where, "terms"), i);
            require_object(terms[i], w);
            allow_keys(terms[i], {"n", "c"}, w);
            const int n = static_cast<int>(get_integer_in(require(terms[i], "n", w), -window, window, at_key(w, "n")));
            out.add_to_coeff(n, padic_from_json(f, require(terms[i], "c", w), at_key(w, "c")));
        }
    }
    return out;
}

json to_json(const RationalOneForm& w) {
    json poles = json::array();
    for (const auto& part : w.poles()) {
        json coeffs = json::array();
        for (const auto& c : part.coeffs) coeffs.push_back(to_json(c));
        poles.push_back(json{{"at", to_json(part.pole)}, {"coeffs", coeffs}});
    }
    return json{{"poles", poles}};
}

RationalOneForm form_from_json(Field f, const json& j, const std::string& where) {
    require_object(j, where);
    allow_keys(j, {"poles"}, where);
    RationalOneForm out(f);
    const json& poles = require(j, "poles", where);
    require_array(poles, at_key(where, "poles"));
    std::optional<std::pair<std::string, PadicNumber>> stated_infinite_residue;
    for (std::size_t i = 0; i < poles.size(); ++i) {
        const std::string w = at_index(at_key(where, "poles"), i);
        require_object(poles[i], w);
        allow_keys(poles[i], {"at", "coeffs"}, w);
        const Point a = point_from_json(f, require(poles[i], "at", w), at_key(w, "at"));
        const json& coeffs = require(poles[i], "coeffs", w);
        require_array(coeffs, at_key(w, "coeffs"));
        for (std::size_t k = 1; k <= coeffs.size(); ++k) {
            const std::string wc = at_index(at_key(w, "coeffs"), k - 1);
            const PadicNumber c = padic_from_json(f, coeffs[k - 1], wc);
            if (!a.infinite) {
                out = out + RationalOneForm::pole_term(f, a.x, static_cast<int>(k), c);
            } else if (k == 1) {
                stated_infinite_residue = std::make_pair(wc, c);
            } else {
                // x^m dx = -z^-(m+2) dz with z = 1/x.
                out = out + RationalOneForm::polynomial_term(f, static_cast<int>(k) - 2, -c);
            }
        }
    }
    if (stated_infinite_residue) {
        const PadicNumber implied = out.residue_at(Point::infinity());
        if (!(stated_infinite_residue->second - implied).is_zero()) {
            throw InvariantViolation(stated_infinite_residue->first +
                                     ": residue at infinity contradicts the residue theorem");
        }
    }
    return out;
}

json to_json(const Divisor& d) {
    json terms = json::array();
    for (const auto& t : d.terms) {
        terms.push_back(json{{"vertex", t.vertex}, {"point", to_json(t.point)}, {"mult", t.multiplicity}});
    }
    return terms;
}

Divisor divisor_from_json(Field f, std::size_t vertex_count, const json& j, const std::string& where) {
    require_array(j, where);
    Divisor d;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::string w = at_index(where, i);
        require_object(j[i], w);
        allow_keys(j[i], {"vertex", "point", "mult"}, w);
        Divisor::Term t;
        t.vertex = static_cast<std::size_t>(
            get_integer_in(require(j[i], "vertex", w), 0, static_cast<long long>(vertex_count) - 1, at_key(w, "vertex")));
        t.point = point_from_json(f, require(j[i], "point", w), at_key(w, "point"));
        t.multiplicity = j[i].contains("mult") ? get_integer(j[i]["mult"], at_key(w, "mult")) : 1;
        d.terms.push_back(std::move(t));
    }
    return d;
}

json to_json(const CechCochain& c) {
    json omega = json::array();
    for (const auto& w : c.omega) omega.push_back(to_json(w));
    json fs = json::array();
    for (const auto& g : c.f) fs.push_back(to_json(g));
    return json{{"omega", omega}, {"f", fs}};
}

CechCochain cochain_from_json(const CurveModel& x, const json& j, const std::string& where) {
    require_object(j, where);
    allow_keys(j, {"omega", "f"}, where);
    CechCochain c = CechCochain::zero(x);
    if (j.contains("omega")) {
        const json& omega = j["omega"];
        require_array(omega, at_key(where, "omega"));
        if (omega.size() != x.vertex_count()) schema_fail(at_key(where, "omega"), "one form per vertex is required");
        for (std::size_t v = 0; v < omega.size(); ++v) {
            const std::string w = at_index(at_key(where, "omega"), v);
            c.omega[v] = form_from_json(x.field(), omega[v], w);
            located(w, [&] {
                wideopen::require_poles_marked(c.omega[v], x.component(v));
                return 0;
            });
        }
    }
    if (j.contains("f")) {
        const json& fs = j["f"];
        require_array(fs, at_key(where, "f"));
        if (fs.size() != x.edge_count()) schema_fail(at_key(where, "f"), "one function per edge is required");
        for (std::size_t e = 0; e < fs.size(); ++e) {
            c.f[e] = log_laurent_from_json(x.field(), x.window(), fs[e], at_index(at_key(where, "f"), e));
        }
    }
    if (!semistable::validate_cocycle(c, x)) {
        throw InvariantViolation(where + ": not a cocycle (d f_e must equal the difference of the forms on e)");
    }
    return c;
}

json to_json(const graphs::Cochain1& c) {
    json out = json::array();
    for (const auto& v : c.values) out.push_back(to_json(v));
    return out;
}

json to_json(const graphs::Cochain0& c) {
    json out = json::array();
    for (const auto& v : c.values) out.push_back(to_json(v));
    return out;
}

json to_json(const PadicMatrix& m) {
    json rows = json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(to_json(m(r, c)));
        rows.push_back(row);
    }
    return rows;
}

CurveFile parse_curve_json(const json& doc, const Overrides& ov, std::vector<std::string>* warnings) {
    check_version(doc);
    allow_keys(doc, {"schema_version", "p", "precision", "truncation", "log_branch", "t", "vertices", "edges",
                     "divisors", "W", "cochains", "graph_cochain", "description"},
               "$");
    const Settings s = read_settings(doc, ov, warnings);
    const Field f = s.ctx.field;

    const json& vertices = require(doc, "vertices", "$");
    require_array(vertices, "$.vertices");
    if (vertices.empty()) schema_fail("$.vertices", "at least one vertex is required");
    std::vector<std::vector<Point>> punctures(vertices.size());
    for (std::size_t v = 0; v < vertices.size(); ++v) {
        const std::string w = at_index("$.vertices", v);
        require_object(vertices[v], w);
        allow_keys(vertices[v], {"punctures"}, w);
        if (!vertices[v].contains("punctures")) continue;
        const json& pts = vertices[v]["punctures"];
        require_array(pts, at_key(w, "punctures"));
        for (std::size_t i = 0; i < pts.size(); ++i) {
            punctures[v].push_back(point_from_json(f, pts[i], at_index(at_key(w, "punctures"), i)));
        }
    }

    const json& edges = require(doc, "edges", "$");
    require_array(edges, "$.edges");
    std::vector<EdgeGluing> gluings;
    const long long last_vertex = static_cast<long long>(vertices.size()) - 1;
    for (std::size_t e = 0; e < edges.size(); ++e) {
        const std::string w = at_index("$.edges", e);
        require_object(edges[e], w);
        allow_keys(edges[e], {"tail", "head", "q", "head_end", "tail_end"}, w);
        EdgeGluing g;
        g.tail = static_cast<std::size_t>(get_integer_in(require(edges[e], "tail", w), 0, last_vertex, at_key(w, "tail")));
        g.head = static_cast<std::size_t>(get_integer_in(require(edges[e], "head", w), 0, last_vertex, at_key(w, "head")));
        g.q = padic_from_json(f, require(edges[e], "q", w), at_key(w, "q"));
        g.head_end = point_from_json(f, require(edges[e], "head_end", w), at_key(w, "head_end"));
        g.tail_end = point_from_json(f, require(edges[e], "tail_end", w), at_key(w, "tail_end"));
        if (g.q.is_zero() || g.q.valuation() < 1) {
            throw InvariantViolation(at_key(w, "q") + ": q_e must be topologically nilpotent");
        }
        gluings.push_back(std::move(g));
    }

    CurveFile out;
    out.model = located("$", [&] { return CurveModel(s.ctx, s.window, vertices.size(), gluings, punctures); });

    if (auto t = pick(doc, "t", ov.t, "t", warnings)) {
        out.t = padic_from_json(f, *t, "--t");
    } else if (doc.contains("t")) {
        out.t = padic_from_json(f, doc["t"], "$.t");
    } else {
        out.t = PadicNumber::integer(f, 1);
    }

    if (doc.contains("divisors")) {
        const json& ds = doc["divisors"];
        require_object(ds, "$.divisors");
        allow_keys(ds, {"y", "z"}, "$.divisors");
        if (ds.contains("y")) out.y = divisor_from_json(f, vertices.size(), ds["y"], "$.divisors.y");
        if (ds.contains("z")) out.z = divisor_from_json(f, vertices.size(), ds["z"], "$.divisors.z");
    }

    if (doc.contains("W")) {
        const json& cols = doc["W"];
        require_array(cols, "$.W");
        const std::size_t dim = 2 * out.model.genus();
        PadicMatrix w(f, dim, cols.size());
        for (std::size_t c = 0; c < cols.size(); ++c) {
            const std::string wc = at_index("$.W", c);
            require_array(cols[c], wc);
            if (cols[c].size() != dim) schema_fail(wc, "a column of W needs 2g = " + std::to_string(dim) + " entries");
            for (std::size_t r = 0; r < dim; ++r) w(r, c) = padic_from_json(f, cols[c][r], at_index(wc, r));
        }
        out.w = std::move(w);
    }

    if (doc.contains("cochains")) {
        const json& cs = doc["cochains"];
        require_array(cs, "$.cochains");
        for (std::size_t i = 0; i < cs.size(); ++i) {
            out.cochains.push_back(cochain_from_json(out.model, cs[i], at_index("$.cochains", i)));
        }
    }

    if (doc.contains("graph_cochain")) {
        const json& gc = doc["graph_cochain"];
        require_array(gc, "$.graph_cochain");
        if (gc.size() != out.model.edge_count()) schema_fail("$.graph_cochain", "one value per edge is required");
        graphs::Cochain1 c = graphs::Cochain1::zero(f, gc.size());
        for (std::size_t e = 0; e < gc.size(); ++e) c[e] = padic_from_json(f, gc[e], at_index("$.graph_cochain", e));
        out.graph_cochain = std::move(c);
    }
    return out;
}

CurveFile parse_curve_file(const std::string& path, const Overrides& ov, std::vector<std::string>* warnings) {
    return parse_curve_json(read_json_file(path), ov, warnings);
}

json serialize(const CurveFile& file) {
    const CurveModel& x = file.model;
    json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["p"] = x.field().p;
    doc["precision"] = x.field().cap;
    doc["truncation"] = x.window();
    doc["log_branch"] = to_json(x.log_branch());
    doc["t"] = to_json(file.t);
    json vertices = json::array();
    for (std::size_t v = 0; v < x.vertex_count(); ++v) {
        json pts = json::array();
        for (const auto& pt : x.punctures()[v]) pts.push_back(to_json(pt));
        vertices.push_back(json{{"punctures", pts}});
    }
    doc["vertices"] = vertices;
    json edges = json::array();
    for (const auto& e : x.edges()) {
        edges.push_back(json{{"tail", e.tail},
                             {"head", e.head},
                             {"q", to_json(e.q)},
                             {"head_end", to_json(e.head_end)},
                             {"tail_end", to_json(e.tail_end)}});
    }
    doc["edges"] = edges;
    if (file.y || file.z) {
        json ds = json::object();
        if (file.y) ds["y"] = to_json(*file.y);
        if (file.z) ds["z"] = to_json(*file.z);
        doc["divisors"] = ds;
    }
    if (file.w) {
        json cols = json::array();
        for (std::size_t c = 0; c < file.w->cols(); ++c) {
            json col = json::array();
            for (std::size_t r = 0; r < file.w->rows(); ++r) col.push_back(to_json((*file.w)(r, c)));
            cols.push_back(col);
        }
        doc["W"] = cols;
    }
    if (!file.cochains.empty()) {
        json cs = json::array();
        for (const auto& c : file.cochains) cs.push_back(to_json(c));
        doc["cochains"] = cs;
    }
    if (file.graph_cochain) doc["graph_cochain"] = to_json(*file.graph_cochain);
    return doc;
}

IndexFile parse_index_json(const json& doc, const Overrides& ov, std::vector<std::string>* warnings) {
    check_version(doc);
    allow_keys(doc, {"schema_version", "p", "precision", "truncation", "log_branch", "F", "G", "orientation",
                     "annulus", "description"},
               "$");
    const Settings s = read_settings(doc, ov, warnings);
    IndexFile out;
    out.context = s.ctx;
    out.window = s.window;
    out.f = log_laurent_from_json(s.ctx.field, s.window, require(doc, "F", "$"), "$.F");
    out.g = log_laurent_from_json(s.ctx.field, s.window, require(doc, "G", "$"), "$.G");
    if (doc.contains("annulus")) {
        const json& a = doc["annulus"];
        if (!a.is_string()) schema_fail("$.annulus", "expected \"finite\" or \"point\"");
        const auto kind = a.get<std::string>();
        if (kind == "point") {
            out.annulus = laurent::Annulus::at_point();
        } else if (kind != "finite") {
            schema_fail("$.annulus", "expected \"finite\" or \"point\"");
        }
    }
    if (doc.contains("orientation")) {
        const long long o = get_integer(doc["orientation"], "$.orientation");
        if (o != 1 && o != -1) schema_fail("$.orientation", "orientation must be 1 or -1");
        if (o < 0) out.annulus = out.annulus.reversed();
    }
    return out;
}

IndexFile parse_index_file(const std::string& path, const Overrides& ov, std::vector<std::string>* warnings) {
    return parse_index_json(read_json_file(path), ov, warnings);
}

json serialize(const IndexFile& file) {
    json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["p"] = file.context.field.p;
    doc["precision"] = file.context.field.cap;
    doc["truncation"] = file.window;
    doc["log_branch"] = to_json(file.context.log_branch);
    doc["F"] = to_json(file.f);
    doc["G"] = to_json(file.g);
    doc["orientation"] = file.annulus.orientation;
    doc["annulus"] = file.annulus.kind == laurent::Annulus::Kind::width_zero_at_point ? "point" : "finite";
    return doc;
}

}  // namespace padicheights::io
