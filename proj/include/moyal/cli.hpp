#pragma once

#include "moyal/hirota.hpp"
#include "moyal/lax.hpp"
#include "moyal/parser.hpp"
#include "moyal/qcalc.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

namespace moyal::cli {

enum class Format { Text, Latex, Json };

struct Result {
    std::string out;
    std::string err;
    int code = 0;
};

/// Usage problems that are not syntax errors in an expression (exit code 1).
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw UsageError("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Non-empty lines with `;`-comments removed.
inline std::vector<std::string> content_lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (auto c = line.find(';'); c != std::string::npos && line.rfind("#", 0) != 0)
            line = line.substr(0, c);
        auto b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos)
            continue;
        auto e = line.find_last_not_of(" \t\r");
        out.push_back(line.substr(b, e - b + 1));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Rendering helpers

inline std::string field_name(std::uint32_t f) { return JetVariable{f, 0}.str(); }

inline std::string flow_lhs(std::uint32_t f, int k, bool tex) {
    if (!tex)
        return field_name(f) + "_t" + std::to_string(k);
    if (f == 0)
        return "u_{t_" + std::to_string(k) + "}";
    return "u_{" + std::to_string(f) + ",t_" + std::to_string(k) + "}";
}

inline nlohmann::json symbol_json(const PhaseSymbol& s) {
    nlohmann::json terms = nlohmann::json::array();
    for (auto it = s.terms().rbegin(); it != s.terms().rend(); ++it)
        terms.push_back({{"p", it->first}, {"coeff", it->second.str()}});
    nlohmann::json j = {{"schema", 1}, {"kind", "symbol"}, {"text", s.str()}, {"terms", terms}};
    j["floor"] = s.floor() ? nlohmann::json(*s.floor()) : nlohmann::json(nullptr);
    return j;
}

/// Rebuilds a symbol from its JSON form (coefficients go back through the parser).
inline PhaseSymbol symbol_from_json(const nlohmann::json& j) {
    PhaseSymbol s = j.at("floor").is_null() ? PhaseSymbol() : PhaseSymbol().truncated(j.at("floor").get<int>());
    for (const auto& t : j.at("terms"))
        s.add_term(t.at("p").get<int>(), parse_diffpoly(t.at("coeff").get<std::string>()));
    return s;
}

inline std::string emit_symbol(const PhaseSymbol& s, Format fmt) {
    if (fmt == Format::Json)
        return symbol_json(s).dump(2) + "\n";
    return (fmt == Format::Latex ? s.latex() : s.str()) + "\n";
}

inline std::string emit_flow(const FlowResult& f, Format fmt) {
    if (fmt == Format::Json) {
        nlohmann::json rhs = nlohmann::json::object();
        for (const auto& [field, r] : f.rhs)
            rhs[field_name(field)] = r.str();
        nlohmann::json j = {{"schema", 1}, {"hierarchy", f.hierarchy}, {"k", f.k}, {"m", f.m}, {"rhs", rhs}};
        return j.dump(2) + "\n";
    }
    std::string out;
    const bool tex = fmt == Format::Latex;
    for (const auto& [field, r] : f.rhs)
        out += flow_lhs(field, f.k, tex) + " = " + (tex ? r.latex() : r.str()) + "\n";
    return out;
}

inline std::string fpoly_text(const FPoly& p, bool tex, bool p_vars = false) {
    return p.render(p_vars ? p_name : f_name, tex);
}

inline nlohmann::json fpoly_json(const FPoly& p) {
    nlohmann::json rhs = nlohmann::json::array();
    for (const auto& [m, c] : p.terms()) {
        nlohmann::json fs = nlohmann::json::array();
        for (const auto& [v, e] : m)
            for (unsigned i = 0; i < e; ++i)
                fs.push_back({v.first, v.second});
        rhs.push_back({c.str(), {{"F", fs}}});
    }
    return rhs;
}

// ---------------------------------------------------------------------------
// Command options

struct Options {
    std::string format = "text";

    // Lax operator selection.
    std::string hierarchy = "kdv";
    std::string lax;
    int order = 3;
    int tail = 3;

    int k = 0;
    int m = 0;
    bool normalize = false;
    bool reverse = false;
    std::string product = "moyal";
    std::optional<int> depth;
    bool coefficients = false;
    bool plus = false;

    std::string lhs, rhs;
    std::optional<int> floor;
    bool poisson = false;

    std::string input;
    std::string expr;

    int n = 0;
    std::string soliton;
    std::string tau_file;

    bool reparam = false;
    int N = 0;

    std::string word;
    std::string coeff_file;
    std::vector<std::string> v_exprs;
    std::string convention = "qbinomial";
};

inline Format parse_format(const std::string& s) {
    if (s == "text")
        return Format::Text;
    if (s == "latex")
        return Format::Latex;
    return Format::Json;
}

inline ProductKind parse_product(const std::string& s) { return s == "psdo" ? ProductKind::PsdoLeft : ProductKind::Moyal; }

inline LaxOperator select_lax(const Options& o) {
    if (!o.lax.empty())
        return LaxOperator::from_symbol(parse_symbol(o.lax));
    if (o.hierarchy == "kdv")
        return LaxOperator::kdv();
    if (o.hierarchy == "boussinesq")
        return LaxOperator::gelfand_dickey(3);
    if (o.hierarchy == "gd")
        return LaxOperator::gelfand_dickey(o.order);
    return LaxOperator::kp(o.tail);
}

// ---------------------------------------------------------------------------
// Command bodies

inline std::string cmd_flow(const Options& o, Format fmt) {
    FlowOptions fo;
    fo.m = o.m;
    fo.time_reversed = o.reverse;
    fo.normalize = o.normalize;
    fo.kind = parse_product(o.product);
    fo.depth = o.depth;
    return emit_flow(lax_flow(select_lax(o), o.k, fo), fmt);
}

inline std::string cmd_root(const Options& o, Format fmt) {
    LaxOperator L = select_lax(o);
    const int depth = o.depth.value_or(L.order + 5);
    PhaseSymbol r = nth_root(L, depth, parse_product(o.product));
    if (!o.coefficients)
        return emit_symbol(r, fmt);
    const bool tex = fmt == Format::Latex;
    if (fmt == Format::Json) {
        nlohmann::json a = nlohmann::json::object();
        for (int i = 1; i <= depth; ++i)
            a[std::to_string(i)] = r.coefficient(-i).str();
        return nlohmann::json({{"schema", 1}, {"order", L.order}, {"depth", depth}, {"a", a}}).dump(2) + "\n";
    }
    std::string out;
    for (int i = 1; i <= depth; ++i) {
        DiffPoly a = r.coefficient(-i);
        out += (tex ? "a_{" + std::to_string(i) + "}" : "a_" + std::to_string(i)) + " = " + (tex ? a.latex() : a.str()) + "\n";
    }
    return out;
}

inline std::string cmd_power(const Options& o, Format fmt) {
    LaxOperator L = select_lax(o);
    PhaseSymbol s = frac_power(L, o.k, o.depth.value_or(o.k + L.order), parse_product(o.product));
    if (o.plus)
        s = project(s, o.m);
    return emit_symbol(s, fmt);
}

inline std::string cmd_star(const Options& o, Format fmt, bool is_bracket) {
    PhaseSymbol f = parse_symbol(o.lhs), g = parse_symbol(o.rhs);
    if (is_bracket && o.poisson)
        return emit_symbol(poisson_bracket(f, g), fmt);
    ProductKind kind = parse_product(o.product);
    // Without --floor, truncated operands are multiplied down to their contamination bound.
    std::optional<int> floor = o.floor ? o.floor : contamination_bound(f, g);
    return emit_symbol(is_bracket ? bracket(f, g, kind, floor) : star(f, g, kind, floor), fmt);
}

inline std::string cmd_charge(const Options& o, Format fmt) {
    DiffPoly h = conserved_charge(select_lax(o), o.k, o.depth, parse_product(o.product));
    if (fmt == Format::Json)
        return nlohmann::json({{"schema", 1}, {"k", o.k}, {"density", h.str()}}).dump(2) + "\n";
    const bool tex = fmt == Format::Latex;
    return (tex ? "H_{" + std::to_string(o.k) + "}" : "H_" + std::to_string(o.k)) + " = " + (tex ? h.latex() : h.str()) + "\n";
}

inline std::string cmd_limit(const Options& o, Format fmt) {
    std::vector<std::string> lines;
    if (!o.expr.empty())
        lines.push_back(o.expr);
    else if (!o.input.empty())
        lines = content_lines(read_file(o.input));
    else
        throw UsageError("limit needs --expr or --input");
    std::string out;
    nlohmann::json items = nlohmann::json::array();
    for (const auto& line : lines) {
        std::string name;
        std::string body = line;
        if (auto eq = line.find('='); eq != std::string::npos) {
            name = line.substr(0, line.find_last_not_of(' ', eq - 1) + 1);
            body = line.substr(eq + 1);
        }
        PhaseSymbol s = dispersionless_limit(parse_symbol(body));
        if (o.plus)
            s = project(s, 0);
        if (fmt == Format::Json)
            items.push_back({{"name", name}, {"value", symbol_json(s)}});
        else
            out += (name.empty() ? "" : name + " = ") + (fmt == Format::Latex ? s.latex() : s.str()) + "\n";
    }
    if (fmt == Format::Json)
        return nlohmann::json({{"schema", 1}, {"limit", items}}).dump(2) + "\n";
    return out;
}

/// `a=2,b=1/3,c=1`
inline std::map<std::string, Rational> parse_assignments(const std::string& spec) {
    std::map<std::string, Rational> out;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto eq = item.find('=');
        if (eq == std::string::npos)
            throw UsageError("expected name=value in '" + item + "'");
        try {
            out[item.substr(0, eq)] = Rational::parse(item.substr(eq + 1));
        } catch (const std::exception&) {
            throw UsageError("bad rational in '" + item + "'");
        }
    }
    return out;
}

/// Tau file: one term per line, `c: k1 k2 k3 ...` for c*exp(k1 t1 + k2 t2 + ...).
inline ExpSum parse_tau(const std::string& text) {
    ExpSum tau;
    for (const auto& line : content_lines(text)) {
        auto colon = line.find(':');
        if (colon == std::string::npos)
            throw UsageError("tau line needs 'c: k1 k2 ...': " + line);
        ExpSum::Wave k;
        std::istringstream ks(line.substr(colon + 1));
        std::string tok;
        for (int j = 1; ks >> tok; ++j)
            k[j] = Rational::parse(tok);
        tau.add_term(k, Rational::parse(line.substr(0, line.find_last_not_of(' ', colon - 1) + 1)));
    }
    return tau;
}

inline std::string cmd_hirota(const Options& o, Format fmt) {
    ExpSum tau;
    if (!o.soliton.empty()) {
        auto a = parse_assignments(o.soliton);
        for (const char* key : {"a", "b"})
            if (!a.count(key))
                throw UsageError(std::string("soliton spec needs ") + key);
        Rational c = a.count("c") ? a.at("c") : Rational(1);
        tau = one_soliton(a.at("a"), a.at("b"), c, o.n + 1);
    } else if (!o.tau_file.empty()) {
        tau = parse_tau(read_file(o.tau_file));
    } else {
        throw UsageError("hirota needs --soliton or --tau-file");
    }
    ExpSum r = kp_bilinear_residual(o.n, tau);
    if (fmt == Format::Json)
        return nlohmann::json({{"schema", 1}, {"n", o.n}, {"residual", r.str()}, {"zero", r.is_zero()}}).dump(2) + "\n";
    return "residual = " + r.str() + "\n";
}

inline std::string cmd_dfay(const Options& o, Format fmt) {
    RelationSet rels = dfay_relations(o.N);
    const bool tex = fmt == Format::Latex;
    if (fmt == Format::Json) {
        nlohmann::json list = nlohmann::json::array();
        for (const auto& r : rels.relations)
            list.push_back({{"m", r.m}, {"n", r.n}, {"rhs", fpoly_json(o.reparam ? to_p_variables(r.rhs) : r.rhs)}});
        return nlohmann::json({{"schema", 1}, {"order", o.N}, {"variables", o.reparam ? "P" : "F"}, {"relations", list}})
                   .dump(2) + "\n";
    }
    std::string out;
    for (const auto& r : rels.relations)
        out += f_name({r.m, r.n}, tex) + " = " + fpoly_text(o.reparam ? to_p_variables(r.rhs) : r.rhs, tex, o.reparam) + "\n";
    return out;
}

inline std::string cmd_dhirota(const Options& o, Format fmt) {
    auto entries = dhirota_check(o.N);
    const bool tex = fmt == Format::Latex;
    if (fmt == Format::Json) {
        nlohmann::json list = nlohmann::json::array();
        for (const auto& e : entries)
            list.push_back({{"i", e.i}, {"j", e.j}, {"status", to_string(e.status)}, {"residual", fpoly_json(e.residual)}});
        return nlohmann::json({{"schema", 1}, {"order", o.N}, {"entries", list}}).dump(2) + "\n";
    }
    std::string out;
    for (const auto& e : entries) {
        out += "(" + std::to_string(e.i) + "," + std::to_string(e.j) + ") " + to_string(e.status);
        if (e.status == DHirotaStatus::Residual)
            out += ": " + fpoly_text(e.residual, tex);
        out += "\n";
    }
    return out;
}

inline std::string cmd_schur(const Options& o, Format fmt) {
    auto p = schur_polys(o.N);
    const bool tex = fmt == Format::Latex;
    if (fmt == Format::Json) {
        nlohmann::json list = nlohmann::json::array();
        for (const auto& q : p)
            list.push_back(q.render(time_name, false));
        return nlohmann::json({{"schema", 1}, {"p", list}}).dump(2) + "\n";
    }
    std::string out;
    for (std::size_t j = 0; j < p.size(); ++j)
        out += (tex ? "p_{" + std::to_string(j) + "}" : "p_" + std::to_string(j)) + " = " + p[j].render(time_name, tex) + "\n";
    return out;
}

inline std::string emit_qnormal(const QNormal& n, Format fmt) {
    if (fmt == Format::Json) {
        nlohmann::json terms = nlohmann::json::array();
        for (const auto& [ab, c] : n.ordered())
            terms.push_back({{"T", ab.first}, {"dq", ab.second}, {"coeff", c.str()}});
        nlohmann::json j = {{"schema", 1}, {"text", render_normal(n, false)}, {"terms", terms}};
        j["floor"] = n.floor ? nlohmann::json(*n.floor) : nlohmann::json(nullptr);
        return j.dump(2) + "\n";
    }
    return render_normal(n, fmt == Format::Latex) + "\n";
}

/// The generic expansion d_q^n u = sum_k [n k]_q (tau^{n-k} d_q^k u) d_q^{n-k}, rendered.
inline std::string leibniz_text(int n, int depth, bool tex) {
    auto power = [&](const char* text, const char* latex_name, int e) -> std::string {
        if (e == 0)
            return "";
        std::string s = tex ? latex_name : text;
        if (e != 1)
            s += tex ? "^{" + std::to_string(e) + "}" : "^" + std::to_string(e);
        return s;
    };
    auto terms = leibniz_terms(n, depth);
    std::reverse(terms.begin(), terms.end());
    std::string out = (tex ? power("dq", "\\partial_q", n) + " u" : power("dq", "\\partial_q", n) + "*u") + " = ";
    bool first = true;
    for (const auto& t : terms) {
        std::string inner = t.u_derivs == 0 ? "u" : (power("dq", "\\partial_q", t.u_derivs) + (tex ? " u" : " u"));
        std::string fn = t.shift == 0 ? "(" + inner + ")" : power("T", "\\tau", t.shift) + "(" + inner + ")";
        const bool negative = QLaurent::is_single_term(t.coeff) && t.coeff.numerator().leading().sign() < 0;
        const QScalar shown = negative ? -t.coeff : t.coeff;
        std::string c = tex ? shown.latex() : shown.str();
        std::string piece;
        if (!(shown == QScalar(1)))
            piece = (c.find(' ') == std::string::npos ? c : "(" + c + ")") + (tex ? " " : "*");
        piece += fn;
        std::string d = power("dq", "\\partial_q", t.dq_power);
        if (!d.empty())
            piece += (tex ? " " : "*") + d;
        out += (first ? (negative ? "-" : "") : (negative ? " - " : " + ")) + piece;
        first = false;
    }
    if (n < 0)
        out += tex ? " + O(\\partial_q^{" + std::to_string(n - depth) + "})" : " + O(dq^" + std::to_string(n - depth) + ")";
    return out + "\n";
}

inline std::string cmd_qleibniz(const Options& o, Format fmt) {
    const int depth = o.depth.value_or(4);
    if (!o.word.empty())
        return emit_qnormal(normal_terms(parse_qoperator(o.word), depth), fmt);
    if (fmt == Format::Json) {
        nlohmann::json terms = nlohmann::json::array();
        for (const auto& t : leibniz_terms(o.n, depth))
            terms.push_back({{"coeff", t.coeff.str()}, {"T", t.shift}, {"u_derivs", t.u_derivs}, {"dq", t.dq_power}});
        return nlohmann::json({{"schema", 1}, {"n", o.n}, {"terms", terms}}).dump(2) + "\n";
    }
    return leibniz_text(o.n, depth, fmt == Format::Latex);
}

inline std::string cmd_qcomm(const Options& o, Format fmt) {
    const int depth = o.depth.value_or(4);
    QOperator A = parse_qoperator(o.lhs), B = parse_qoperator(o.rhs);
    return emit_qnormal(normal_terms(A * B - B * A, depth), fmt);
}

inline std::string cmd_map_sato(const Options& o, Format fmt) {
    std::vector<std::string> sources = o.v_exprs;
    if (!o.coeff_file.empty())
        for (const auto& line : content_lines(read_file(o.coeff_file)))
            sources.push_back(line);
    if (sources.empty())
        throw UsageError("map-sato needs --coeff-file or --v");
    std::vector<DiffPoly> v;
    for (const auto& s : sources)
        v.push_back(parse_diffpoly(s));
    std::vector<DiffPoly> u = sato_to_moyal(v);
    const bool tex = fmt == Format::Latex;
    if (fmt == Format::Json) {
        nlohmann::json list = nlohmann::json::array();
        for (const auto& x : u)
            list.push_back(x.str());
        return nlohmann::json({{"schema", 1}, {"u", list}}).dump(2) + "\n";
    }
    std::string out;
    for (std::size_t i = 0; i < u.size(); ++i)
        out += (tex ? "u_{" + std::to_string(i) + "}" : "u_" + std::to_string(i)) + " = " + (tex ? u[i].latex() : u[i].str()) + "\n";
    return out;
}

inline std::string cmd_map_dkp(const Options& o, Format fmt) {
    const BracketConvention conv = o.convention == "binomial" ? BracketConvention::Binomial : BracketConvention::QBinomial;
    const bool tex = fmt == Format::Latex;
    std::string out;
    nlohmann::json list = nlohmann::json::array();
    if (!o.coeff_file.empty()) {
        std::vector<QLaurent> b;
        for (const auto& line : content_lines(read_file(o.coeff_file)))
            b.push_back(parse_qlaurent(line, "y"));
        auto a = discrete_kp_apply(b, o.n, conv);
        for (std::size_t i = 0; i < a.size(); ++i) {
            list.push_back(a[i].str("y"));
            out += (tex ? "a_{" + std::to_string(i) + "}" : "a_" + std::to_string(i)) + " = " +
                   (tex ? a[i].latex("y") : a[i].str("y")) + "\n";
        }
    } else {
        auto rows = discrete_kp_map(o.n, conv);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            std::string line;
            for (const auto& t : rows[i]) {
                std::string piece = QLaurent::monomial(t.y_power, t.coeff).str("y");
                std::string b = tex ? "b_{" + std::to_string(t.b_index) + "}" : "b_" + std::to_string(t.b_index);
                piece = piece == "1" ? b : (tex ? QLaurent::monomial(t.y_power, t.coeff).latex("y") + " " : piece + "*") + b;
                line += (line.empty() ? "" : " + ") + piece;
            }
            list.push_back(line);
            out += (tex ? "a_{" + std::to_string(i) + "}" : "a_" + std::to_string(i)) + " = " + line + "\n";
        }
    }
    if (fmt == Format::Json)
        return nlohmann::json({{"schema", 1}, {"n", o.n}, {"convention", o.convention}, {"a", list}}).dump(2) + "\n";
    return out;
}

// ---------------------------------------------------------------------------

/// Runs one command line (without the program name). Exit codes: 0 success,
/// 1 parse or usage error, 2 domain error.
inline Result run(const std::vector<std::string>& args) {
    Options o;
    CLI::App app{"Exact Moyal/PSDO symbol calculus for integrable hierarchies", "moyal"};
    app.require_subcommand(1);
    app.add_option("--format", o.format, "Output format")->check(CLI::IsMember({"text", "latex", "json"}));

    auto add_format = [&](CLI::App* sub) {
        sub->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"text", "latex", "json"}));
    };
    auto add_lax = [&](CLI::App* sub) {
        sub->add_option("--hierarchy", o.hierarchy, "kdv | boussinesq | gd | kp")
            ->check(CLI::IsMember({"kdv", "boussinesq", "gd", "kp"}));
        sub->add_option("--lax", o.lax, "Lax symbol expression (overrides --hierarchy)");
        sub->add_option("--order", o.order, "Order for --hierarchy gd");
        sub->add_option("--tail", o.tail, "Tail depth for --hierarchy kp");
        sub->add_option("--product", o.product, "moyal | psdo")->check(CLI::IsMember({"moyal", "psdo"}));
        sub->add_option("--depth", o.depth, "Root depth");
    };

    auto* flow = app.add_subcommand("flow", "Lax flow d_k L = {(L^{k/n})_{>=m}, L}");
    add_lax(flow);
    flow->add_option("--k", o.k, "Flow index")->required();
    flow->add_option("--m", o.m, "Projection index (0, 1, 2)");
    flow->add_flag("--normalize", o.normalize, "Divide by k");
    flow->add_flag("--reverse", o.reverse, "Use {L, B} (time reversal)");
    add_format(flow);

    auto* root = app.add_subcommand("root", "n-th star root of a Lax symbol");
    add_lax(root);
    root->add_flag("--coefficients", o.coefficients, "List a_1 .. a_depth");
    add_format(root);

    auto* power = app.add_subcommand("power", "Fractional power L^{k/n}");
    add_lax(power);
    power->add_option("--k", o.k, "Numerator k")->required();
    power->add_flag("--plus", o.plus, "Project onto p^m and above");
    power->add_option("--m", o.m, "Projection index");
    add_format(power);

    auto* star_cmd = app.add_subcommand("star", "Deformed product of two symbols");
    auto* bracket_cmd = app.add_subcommand("bracket", "Deformed bracket of two symbols");
    for (auto* sub : {star_cmd, bracket_cmd}) {
        sub->add_option("--lhs", o.lhs, "Left symbol")->required();
        sub->add_option("--rhs", o.rhs, "Right symbol")->required();
        sub->add_option("--product", o.product, "moyal | psdo")->check(CLI::IsMember({"moyal", "psdo"}));
        sub->add_option("--floor", o.floor, "Lowest certified p exponent (default: exact, or the contamination bound of truncated operands)");
        add_format(sub);
    }
    bracket_cmd->add_flag("--poisson", o.poisson, "Poisson bracket (kappa = 0)");

    auto* charge = app.add_subcommand("charge", "Conserved density Res L^{k/n}");
    add_lax(charge);
    charge->add_option("--k", o.k, "Charge index")->required();
    add_format(charge);

    auto* limit = app.add_subcommand("limit", "Dispersionless limit (kappa -> 0)");
    limit->add_option("--input", o.input, "File with one expression or `name = expression` per line");
    limit->add_option("--expr", o.expr, "Single expression");
    limit->add_flag("--plus", o.plus, "Project the limit onto p^0 and above");
    add_format(limit);

    auto* hirota = app.add_subcommand("hirota", "Residual of the n-th KP Hirota equation");
    hirota->add_option("--n", o.n, "Equation index (>= 2)")->required();
    hirota->add_option("--soliton", o.soliton, "a=..,b=..,c=..");
    hirota->add_option("--tau-file", o.tau_file, "Lines `c: k1 k2 ...`");
    add_format(hirota);

    auto* dfay = app.add_subcommand("dfay", "Relations from the dispersionless Fay identity");
    dfay->add_option("--order", o.N, "Total degree")->required();
    dfay->add_flag("--reparam", o.reparam, "Write F_{1,j} as j P_{j+1}");
    add_format(dfay);

    auto* dhirota = app.add_subcommand("dhirota", "Compare dispersionless Hirota equations with the Fay relations");
    dhirota->add_option("--order", o.N, "Largest i + j")->required();
    add_format(dhirota);

    auto* schur = app.add_subcommand("schur", "Elementary Schur polynomials p_0 .. p_N");
    schur->add_option("--N", o.N, "Largest index")->required();
    add_format(schur);

    auto* qleibniz = app.add_subcommand("qleibniz", "q-Leibniz expansion of d_q^n u or normal form of a word");
    qleibniz->add_option("--n", o.n, "Power of d_q");
    qleibniz->add_option("--word", o.word, "Operator expression in dq, T, x, q");
    qleibniz->add_option("--depth", o.depth, "Tail depth for negative powers");
    add_format(qleibniz);

    auto* qcomm = app.add_subcommand("qcomm", "Commutator of two q-operators");
    qcomm->add_option("--lhs", o.lhs, "Left operator")->required();
    qcomm->add_option("--rhs", o.rhs, "Right operator")->required();
    qcomm->add_option("--depth", o.depth, "Tail depth for negative powers");
    add_format(qcomm);

    auto* map_sato = app.add_subcommand("map-sato", "Sato coefficients v_n to Moyal coefficients u_n");
    map_sato->add_option("--coeff-file", o.coeff_file, "One v_n expression per line");
    map_sato->add_option("--v", o.v_exprs, "v_n expressions in order");
    add_format(map_sato);

    auto* map_dkp = app.add_subcommand("map-dkp", "Discrete-KP coefficient map");
    map_dkp->add_option("--n", o.n, "Top index")->required();
    map_dkp->add_option("--coeff-file", o.coeff_file, "One b_i (Laurent in y) per line");
    map_dkp->add_option("--convention", o.convention, "qbinomial | binomial")->check(CLI::IsMember({"qbinomial", "binomial"}));
    add_format(map_dkp);

    Result res;
    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        res.out = app.help();
        return res;
    } catch (const CLI::ParseError& e) {
        res.err = e.what() + std::string("\n");
        res.code = 1;
        return res;
    }

    const Format fmt = parse_format(o.format);
    try {
        if (flow->parsed())
            res.out = cmd_flow(o, fmt);
        else if (root->parsed())
            res.out = cmd_root(o, fmt);
        else if (power->parsed())
            res.out = cmd_power(o, fmt);
        else if (star_cmd->parsed())
            res.out = cmd_star(o, fmt, false);
        else if (bracket_cmd->parsed())
            res.out = cmd_star(o, fmt, true);
        else if (charge->parsed())
            res.out = cmd_charge(o, fmt);
        else if (limit->parsed())
            res.out = cmd_limit(o, fmt);
        else if (hirota->parsed())
            res.out = cmd_hirota(o, fmt);
        else if (dfay->parsed())
            res.out = cmd_dfay(o, fmt);
        else if (dhirota->parsed())
            res.out = cmd_dhirota(o, fmt);
        else if (schur->parsed())
            res.out = cmd_schur(o, fmt);
        else if (qleibniz->parsed())
            res.out = cmd_qleibniz(o, fmt);
        else if (qcomm->parsed())
            res.out = cmd_qcomm(o, fmt);
        else if (map_sato->parsed())
            res.out = cmd_map_sato(o, fmt);
        else if (map_dkp->parsed())
            res.out = cmd_map_dkp(o, fmt);
    } catch (const ParseError& e) {
        res.err = std::string("parse error: ") + e.what() + "\n";
        res.code = 1;
    } catch (const UsageError& e) {
        res.err = std::string("usage error: ") + e.what() + "\n";
        res.code = 1;
    } catch (const DomainError& e) {
        res.err = std::string("domain error: ") + e.what() + "\n";
        res.code = 2;
    } catch (const InexactKappaDivision& e) {
        res.err = std::string("internal error: ") + e.what() + "\n";
        res.code = 2;
    }
    return res;
}

} // namespace moyal::cli
