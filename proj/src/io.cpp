#include "geoindex/io.hpp"

#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

namespace geoindex {

namespace {

[[noreturn]] void schema(const std::string& path, const std::string& msg) {
    throw Error(ErrorCode::Schema, path + ": " + msg);
}

void only_fields(const Json& j, const std::string& path, std::initializer_list<const char*> allowed) {
    if (!j.is_object()) schema(path, "expected an object");
    for (const auto& [key, value] : j.items()) {
        (void)value;
        bool known = false;
        for (const char* a : allowed) known = known || key == a;
        if (!known) schema(path, "unknown field '" + key + "'");
    }
}

const Json& field(const Json& j, const std::string& path, const char* key) {
    if (!j.contains(key)) schema(path, std::string("missing field '") + key + "'");
    return j.at(key);
}

std::string get_string(const Json& j, const std::string& path, const char* key) {
    const Json& v = field(j, path, key);
    if (!v.is_string()) schema(path + "." + key, "expected a string");
    return v.get<std::string>();
}

std::int64_t get_int(const Json& j, const std::string& path, const char* key) {
    const Json& v = field(j, path, key);
    if (!v.is_number_integer()) schema(path + "." + key, "expected an integer");
    return v.get<std::int64_t>();
}

bool get_bool(const Json& j, const std::string& path, const char* key, bool fallback) {
    if (!j.contains(key)) return fallback;
    const Json& v = j.at(key);
    if (!v.is_boolean()) schema(path + "." + key, "expected true or false");
    return v.get<bool>();
}

Rational get_rational(const Json& j, const std::string& path, const char* key) {
    std::string text = get_string(j, path, key);
    try {
        return parse_rational(text);
    } catch (const Error& e) {
        schema(path + "." + key, e.what());
    }
}

CertifiedReal get_real(const Json& j, const std::string& path, const char* key, bool irrational) {
    std::string text = get_string(j, path, key);
    try {
        return CertifiedReal::parse(text, irrational);
    } catch (const Error& e) {
        schema(path + "." + key, e.what());
    }
}

// Range errors keep their code but gain the path.
template <class F>
auto with_path(const std::string& path, F f) -> decltype(f()) {
    try {
        return f();
    } catch (const Error& e) {
        throw Error(e.code(), path + ": " + e.what());
    }
}

Json real_json(const CertifiedReal& x) { return x.to_string(); }

void add_irrational(Json& j, const CertifiedReal& x) {
    if (x.declared_irrational()) j["irrational"] = true;
}

const char* b_class_name(BClass b) {
    switch (b) {
        case BClass::positive: return "positive";
        case BClass::zero: return "zero";
        case BClass::negative: return "negative";
    }
    return "?";
}

Json int_array(const auto& values) {
    Json a = Json::array();
    for (auto v : values) a.push_back(v);
    return a;
}

std::string pad(const std::string& s, std::size_t width) {
    return s.size() >= width ? s + " " : s + std::string(width - s.size(), ' ');
}

}  // namespace

// --- blocks and germs ------------------------------------------------------

Json block_to_json(const BasicBlock& block) {
    return std::visit(
        [](const auto& b) -> Json {
            using T = std::decay_t<decltype(b)>;
            Json j;
            if constexpr (std::is_same_v<T, N1Block>) {
                j["type"] = "N1";
                j["eigenvalue"] = b.eigenvalue;
                j["b"] = b_class_name(b.b);
            } else if constexpr (std::is_same_v<T, DBlock>) {
                j["type"] = "D";
                j["lambda"] = real_json(b.lambda);
                add_irrational(j, b.lambda);
            } else if constexpr (std::is_same_v<T, RBlock>) {
                j["type"] = "R";
                j["theta_over_pi"] = real_json(b.theta.over_pi());
                add_irrational(j, b.theta.over_pi());
            } else {
                j["type"] = "N2";
                j["theta_over_pi"] = real_json(b.theta.over_pi());
                add_irrational(j, b.theta.over_pi());
                j["kind"] = b.kind == N2Kind::trivial ? "trivial" : "nontrivial";
            }
            return j;
        },
        block);
}

BasicBlock block_from_json(const Json& j, const std::string& path, const PrecisionBudget& budget) {
    if (!j.is_object()) schema(path, "expected an object");
    std::string type = get_string(j, path, "type");
    if (type == "N1") {
        only_fields(j, path, {"type", "eigenvalue", "b"});
        std::int64_t ev = get_int(j, path, "eigenvalue");
        std::string b = get_string(j, path, "b");
        BClass cls;
        if (b == "positive") cls = BClass::positive;
        else if (b == "zero") cls = BClass::zero;
        else if (b == "negative") cls = BClass::negative;
        else schema(path + ".b", "expected positive, zero or negative");
        if (ev != 1 && ev != -1) schema(path + ".eigenvalue", "expected 1 or -1");
        return with_path(path, [&] { return BasicBlock{make_n1(static_cast<int>(ev), cls)}; });
    }
    if (type == "D") {
        only_fields(j, path, {"type", "lambda", "irrational"});
        CertifiedReal lambda = get_real(j, path, "lambda", get_bool(j, path, "irrational", false));
        return with_path(path + ".lambda", [&] { return BasicBlock{make_d(lambda, budget)}; });
    }
    if (type == "R") {
        only_fields(j, path, {"type", "theta_over_pi", "irrational"});
        CertifiedReal t = get_real(j, path, "theta_over_pi", get_bool(j, path, "irrational", false));
        return with_path(path + ".theta_over_pi", [&] { return BasicBlock{RBlock{Angle(t, budget)}}; });
    }
    if (type == "N2") {
        only_fields(j, path, {"type", "theta_over_pi", "irrational", "kind"});
        CertifiedReal t = get_real(j, path, "theta_over_pi", get_bool(j, path, "irrational", false));
        std::string kind = get_string(j, path, "kind");
        if (kind != "trivial" && kind != "nontrivial") schema(path + ".kind", "expected trivial or nontrivial");
        N2Kind k = kind == "trivial" ? N2Kind::trivial : N2Kind::nontrivial;
        return with_path(path + ".theta_over_pi", [&] { return BasicBlock{N2Block{Angle(t, budget), k}}; });
    }
    schema(path + ".type", "unknown block type '" + type + "' (expected N1, D, R or N2)");
}

Json germ_to_json(const IndexGerm& germ) {
    Json j;
    j["name"] = germ.name;
    j["initial_index"] = germ.initial_index;
    Json blocks = Json::array();
    for (const auto& b : germ.blocks) blocks.push_back(block_to_json(b));
    j["blocks"] = blocks;
    return j;
}

IndexGerm germ_from_json(const Json& j, const std::string& path, const PrecisionBudget& budget) {
    only_fields(j, path, {"name", "initial_index", "blocks"});
    IndexGerm germ;
    germ.name = get_string(j, path, "name");
    if (germ.name.empty()) schema(path + ".name", "must not be empty");
    germ.initial_index = get_int(j, path, "initial_index");
    const Json& blocks = field(j, path, "blocks");
    if (!blocks.is_array()) schema(path + ".blocks", "expected an array");
    for (std::size_t i = 0; i < blocks.size(); ++i)
        germ.blocks.push_back(block_from_json(blocks[i], path + ".blocks[" + std::to_string(i) + "]", budget));
    return germ;
}

// --- systems ---------------------------------------------------------------

Json system_to_json(const GeodesicSystem& system) {
    Json j;
    j["manifold"] = {{"dim", system.dim}};
    Json curves = Json::array();
    for (const auto& c : system.curves) curves.push_back(germ_to_json(c));
    j["curves"] = curves;
    if (system.precision)
        j["precision"] = {{"max_digits", system.precision->max_digits},
                          {"refine_step", system.precision->refine_step}};
    return j;
}

GeodesicSystem system_from_json(const Json& j) {
    only_fields(j, "system", {"manifold", "curves", "precision"});
    GeodesicSystem system;
    const Json& manifold = field(j, "system", "manifold");
    only_fields(manifold, "system.manifold", {"dim"});
    system.dim = static_cast<int>(get_int(manifold, "system.manifold", "dim"));
    if (system.dim < 2) schema("system.manifold.dim", "must be at least 2");
    if (j.contains("precision")) {
        const Json& p = j.at("precision");
        only_fields(p, "system.precision", {"max_digits", "refine_step"});
        PrecisionBudget budget;
        if (p.contains("max_digits")) budget.max_digits = static_cast<int>(get_int(p, "system.precision", "max_digits"));
        if (p.contains("refine_step"))
            budget.refine_step = static_cast<int>(get_int(p, "system.precision", "refine_step"));
        if (budget.max_digits < 1 || budget.refine_step < 1) schema("system.precision", "values must be positive");
        system.precision = budget;
    }
    const Json& curves = field(j, "system", "curves");
    if (!curves.is_array()) schema("system.curves", "expected an array");
    std::set<std::string> names;
    PrecisionBudget budget = system.budget();
    for (std::size_t i = 0; i < curves.size(); ++i) {
        std::string path = "system.curves[" + std::to_string(i) + "]";
        IndexGerm germ = germ_from_json(curves[i], path, budget);
        if (!names.insert(germ.name).second) schema(path + ".name", "duplicate curve name '" + germ.name + "'");
        with_path(path, [&] {
            check_dimension(germ, system.dim);
            return 0;
        });
        system.curves.push_back(std::move(germ));
    }
    return system;
}

GeodesicSystem parse_system_text(const std::string& text) { return system_from_json(parse_json_text(text, "system")); }

GeodesicSystem parse_system(const std::string& path) { return parse_system_text(read_file(path)); }

// --- certificates ----------------------------------------------------------

Json certificate_to_json(const JumpCertificate& cert) {
    Json j;
    j["N"] = cert.N;
    j["M"] = cert.M;
    j["M0"] = cert.M0;
    j["delta"] = to_string(cert.delta);
    j["epsilon"] = to_string(cert.epsilon);
    j["chi"] = int_array(cert.chi);
    Json curves = Json::array();
    for (std::size_t k = 0; k < cert.m.size(); ++k)
        curves.push_back({{"name", cert.names.at(k)}, {"m", cert.m[k]}, {"Delta", cert.Delta.at(k)}, {"rho", cert.rho.at(k)}});
    j["curves"] = curves;
    return j;
}

JumpCertificate certificate_from_json(const Json& j) {
    const std::string path = "certificate";
    only_fields(j, path, {"N", "M", "M0", "delta", "epsilon", "chi", "curves"});
    JumpCertificate c;
    c.N = get_int(j, path, "N");
    c.M = get_int(j, path, "M");
    c.M0 = get_int(j, path, "M0");
    c.delta = get_rational(j, path, "delta");
    c.epsilon = get_rational(j, path, "epsilon");
    const Json& chi = field(j, path, "chi");
    if (!chi.is_array()) schema(path + ".chi", "expected an array");
    for (const auto& v : chi) {
        if (!v.is_number_integer() || (v.get<int>() != 0 && v.get<int>() != 1)) schema(path + ".chi", "entries must be 0 or 1");
        c.chi.push_back(v.get<int>());
    }
    const Json& curves = field(j, path, "curves");
    if (!curves.is_array()) schema(path + ".curves", "expected an array");
    for (std::size_t k = 0; k < curves.size(); ++k) {
        std::string p = path + ".curves[" + std::to_string(k) + "]";
        only_fields(curves[k], p, {"name", "m", "Delta", "rho"});
        c.names.push_back(get_string(curves[k], p, "name"));
        c.m.push_back(get_int(curves[k], p, "m"));
        c.Delta.push_back(static_cast<int>(get_int(curves[k], p, "Delta")));
        c.rho.push_back(static_cast<int>(get_int(curves[k], p, "rho")));
    }
    if (c.N < 1 || c.M < 1 || c.M0 < 1) schema(path, "N, M and M0 must be positive");
    return c;
}

// --- reports ---------------------------------------------------------------

Json search_budget_to_json(const SearchBudget& b) {
    Json j;
    j["n_min"] = b.n_min;
    j["n_max"] = b.n_max;
    j["delta"] = to_string(b.delta);
    j["epsilon"] = to_string(b.epsilon);
    j["p_hat"] = b.p_hat;
    j["m0"] = b.m0;
    j["mbar_override"] = b.mbar_override ? Json(*b.mbar_override) : Json(nullptr);
    return j;
}

SearchBudget search_budget_from_json(const Json& j) {
    const std::string path = "budget";
    only_fields(j, path, {"n_min", "n_max", "delta", "epsilon", "p_hat", "m0", "mbar_override"});
    SearchBudget b;
    b.n_min = get_int(j, path, "n_min");
    b.n_max = get_int(j, path, "n_max");
    b.delta = get_rational(j, path, "delta");
    b.epsilon = get_rational(j, path, "epsilon");
    b.p_hat = get_int(j, path, "p_hat");
    b.m0 = get_int(j, path, "m0");
    if (j.contains("mbar_override") && !j.at("mbar_override").is_null()) b.mbar_override = get_int(j, path, "mbar_override");
    return b;
}

Json report_to_json(const ImpossibilityReport& r) {
    Json j;
    j["system"] = system_to_json(r.system);
    j["budget"] = search_budget_to_json(r.budget);
    j["m_bar"] = r.m_bar;
    j["certificate"] = r.certificate ? certificate_to_json(*r.certificate) : Json(nullptr);
    j["scaled_certificate"] = r.scaled_certificate ? certificate_to_json(*r.scaled_certificate) : Json(nullptr);
    Json stages = Json::array();
    for (const auto& s : r.stages) stages.push_back({{"name", s.name}, {"verdict", s.verdict}, {"witness", s.witness}});
    j["stages"] = stages;
    j["final"] = r.final_verdict;
    return j;
}

ImpossibilityReport report_from_json(const Json& j) {
    const std::string path = "report";
    only_fields(j, path, {"system", "budget", "m_bar", "certificate", "scaled_certificate", "stages", "final"});
    ImpossibilityReport r;
    r.system = system_from_json(field(j, path, "system"));
    r.budget = search_budget_from_json(field(j, path, "budget"));
    r.m_bar = get_int(j, path, "m_bar");
    if (j.contains("certificate") && !j.at("certificate").is_null())
        r.certificate = certificate_from_json(j.at("certificate"));
    if (j.contains("scaled_certificate") && !j.at("scaled_certificate").is_null())
        r.scaled_certificate = certificate_from_json(j.at("scaled_certificate"));
    const Json& stages = field(j, path, "stages");
    if (!stages.is_array()) schema(path + ".stages", "expected an array");
    for (std::size_t i = 0; i < stages.size(); ++i) {
        std::string p = path + ".stages[" + std::to_string(i) + "]";
        only_fields(stages[i], p, {"name", "verdict", "witness"});
        r.stages.push_back(Stage{get_string(stages[i], p, "name"), get_string(stages[i], p, "verdict"),
                                 field(stages[i], p, "witness")});
    }
    r.final_verdict = get_string(j, path, "final");
    return r;
}

Json verification_to_json(const VerificationReport& report) {
    Json j;
    j["passed"] = report.passed();
    Json checks = Json::array();
    for (const auto& c : report.checks)
        checks.push_back({{"clause", c.clause}, {"curve", c.curve}, {"pass", c.pass}, {"witness", c.witness}});
    j["checks"] = checks;
    return j;
}

// --- tables ----------------------------------------------------------------

std::string report_table(const ImpossibilityReport& r) {
    std::ostringstream out;
    out << pad("stage", 20) << "verdict\n";
    for (const auto& s : r.stages) out << pad(s.name, 20) << s.verdict << "\n";
    out << "final: " << r.final_verdict << "\n";
    return out.str();
}

std::string certificate_table(const JumpCertificate& c) {
    std::ostringstream out;
    out << "N = " << c.N << ", M = " << c.M << ", M0 = " << c.M0 << ", delta = " << to_string(c.delta)
        << ", epsilon = " << to_string(c.epsilon) << "\n";
    out << "chi =";
    for (int x : c.chi) out << " " << x;
    out << "\n" << pad("curve", 12) << pad("m", 14) << pad("Delta", 8) << "rho\n";
    for (std::size_t k = 0; k < c.m.size(); ++k)
        out << pad(c.names[k], 12) << pad(std::to_string(c.m[k]), 14) << pad(std::to_string(c.Delta[k]), 8)
            << c.rho[k] << "\n";
    return out.str();
}

std::string verification_table(const VerificationReport& report) {
    std::ostringstream out;
    for (const auto& c : report.checks)
        out << (c.pass ? "PASS  " : "FAIL  ") << pad(c.clause, 22) << pad(c.curve, 10) << c.witness << "\n";
    out << (report.passed() ? "all checks passed" : "verification FAILED") << "\n";
    return out.str();
}

// --- files -----------------------------------------------------------------

Json parse_json_text(const std::string& text, const std::string& what) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        std::size_t line = 1 + static_cast<std::size_t>(
                                   std::count(text.begin(), text.begin() + std::min(e.byte, text.size()), '\n'));
        throw Error(ErrorCode::Schema, what + ": invalid JSON at line " + std::to_string(line) + ": " + e.what());
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot read '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::Io, "cannot write '" + path + "'");
    out << text;
    if (!out) throw Error(ErrorCode::Io, "write to '" + path + "' failed");
}

}  // namespace geoindex
