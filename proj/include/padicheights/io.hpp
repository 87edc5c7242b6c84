#pragma once

// JSON files for curve models, cochains, divisors and height data
// ("schema_version": 1), and the double-index input of the CLI.

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "padicheights/graphs.hpp"
#include "padicheights/laurent.hpp"
#include "padicheights/padic.hpp"
#include "padicheights/semistable.hpp"
#include "padicheights/wideopen.hpp"

namespace padicheights::io {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

/// Command-line values that replace the corresponding file entries.
/// log_branch and t are JSON p-adic literals.
struct Overrides {
    std::optional<unsigned> p;
    std::optional<int> precision;
    std::optional<int> truncation;
    std::optional<json> log_branch;
    std::optional<json> t;
};

struct CurveFile {
    semistable::CurveModel model;
    padic::PadicNumber t;
    std::optional<semistable::Divisor> y;
    std::optional<semistable::Divisor> z;
    /// Columns are generators of W in coordinates of the H^1_dR(X) sub-basis.
    std::optional<padic::PadicMatrix> w;
    std::vector<semistable::CechCochain> cochains;
    std::optional<graphs::Cochain1> graph_cochain;

    semistable::HeightData height_data() const { return semistable::HeightData{w, t}; }
};

/// Two functions on one annulus, for the double index.
struct IndexFile {
    padic::PadicContext context;
    int window = laurent::kDefaultWindow;
    laurent::LogLaurent f;
    laurent::LogLaurent g;
    laurent::Annulus annulus;
};

/// Reads a file into JSON; SchemaError if it is missing or malformed.
json read_json_file(const std::string& path);

/// Parsing reports the JSON location of the first problem in the message of
/// a SchemaError (shape of the document) or InvariantViolation (model
/// invariants). Notes about overridden file values go to `warnings`.
CurveFile parse_curve_json(const json& doc, const Overrides& overrides = {},
                           std::vector<std::string>* warnings = nullptr);
CurveFile parse_curve_file(const std::string& path, const Overrides& overrides = {},
                           std::vector<std::string>* warnings = nullptr);
json serialize(const CurveFile& file);

IndexFile parse_index_json(const json& doc, const Overrides& overrides = {},
                           std::vector<std::string>* warnings = nullptr);
IndexFile parse_index_file(const std::string& path, const Overrides& overrides = {},
                           std::vector<std::string>* warnings = nullptr);
json serialize(const IndexFile& file);

/// {"val": v, "digits": [d0, d1, ...], "prec": m}; zero is {"val": m, "digits": [], "prec": m}.
/// Integers and {"num": a, "den": b} are accepted on input; "prec" defaults to the cap.
json to_json(const padic::PadicNumber& x);
padic::PadicNumber padic_from_json(padic::Field f, const json& j, const std::string& where);

/// A p-adic literal, or "inf".
json to_json(const wideopen::Point& a);
wideopen::Point point_from_json(padic::Field f, const json& j, const std::string& where);

/// {"log": c, "terms": [{"n": n, "c": c_n}, ...]}.
json to_json(const laurent::LogLaurent& f);
laurent::LogLaurent log_laurent_from_json(padic::Field f, int window, const json& j, const std::string& where);

/// {"poles": [{"at": point, "coeffs": [c1, c2, ...]}]}, c_k the coefficient
/// of z^-k dz in the local coordinate. At infinity c1 is implied by the
/// residue theorem and is checked when present.
json to_json(const wideopen::RationalOneForm& w);
wideopen::RationalOneForm form_from_json(padic::Field f, const json& j, const std::string& where);

/// [{"vertex": v, "point": x, "mult": n}, ...].
json to_json(const semistable::Divisor& d);
semistable::Divisor divisor_from_json(padic::Field f, std::size_t vertex_count, const json& j,
                                      const std::string& where);

/// {"omega": [form per vertex], "f": [function per edge]}; must be a cocycle.
json to_json(const semistable::CechCochain& c);
semistable::CechCochain cochain_from_json(const semistable::CurveModel& x, const json& j, const std::string& where);

json to_json(const graphs::Cochain1& c);
json to_json(const graphs::Cochain0& c);
json to_json(const padic::PadicMatrix& m);

}  // namespace padicheights::io
