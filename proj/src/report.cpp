#include "plumb/report.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "plumb/polypart.hpp"
#include "plumb/quasipoly.hpp"
#include "plumb/series.hpp"
#include "plumb/surgery.hpp"

namespace plumb::cli {

namespace {

using json = nlohmann::json;
using series::Context;
using series::RationalFunction;

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw GraphError("cannot open graph file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

HClass parse_class(const Intersection& ix, const std::string& text) {
    HClass h = class_zero(ix);
    if (text.empty()) return h;
    std::vector<Integer> vals;
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) vals.push_back(Integer(item));
    if (vals.size() == 1 && vals[0] == 0 && h.c.empty()) return h;  // "0" for trivial H
    if (vals.size() != h.c.size())
        throw LatticeError("class needs " + std::to_string(h.c.size()) + " coordinates");
    for (size_t i = 0; i < vals.size(); ++i) {
        Integer m = ix.smith.factors[i];
        Integer r;
        mpz_fdiv_r(r.get_mpz_t(), vals[i].get_mpz_t(), m.get_mpz_t());
        h.c[i] = r;
    }
    return h;
}

std::string fmt_q(const Rational& q) { return to_string(q); }

json matrix_json(const QMat& m) {
    json rows = json::array();
    for (const auto& r : m) {
        json row = json::array();
        for (const auto& e : r) row.push_back(fmt_q(e));
        rows.push_back(row);
    }
    return rows;
}

json poly_json(const Context& ctx, const series::LaurentPoly& p) {
    json terms = json::array();
    for (const auto& [e, c] : p.terms) {
        json t;
        json exps = json::array();
        for (long long x : e) exps.push_back(std::to_string(x) + "/" + std::to_string(ctx.den));
        t["exponent"] = exps;
        json cs = json::array();
        for (const auto& [cls, v] : c.t) {
            json cc;
            cc["class"] = to_string(ctx.table.decode(cls));
            cc["coeff"] = v;
            cs.push_back(cc);
        }
        t["coefficient"] = cs;
        terms.push_back(t);
    }
    return terms;
}

int cmd_validate(const std::string& path, const std::string& format, std::ostream& out) {
    try {
        PlumbingGraph g = parse_graph(read_file(path));
        if (format == "json") {
            json j;
            j["valid"] = true;
            j["vertices"] = g.size();
            j["edges"] = g.edges.size();
            out << j.dump(2) << "\n";
        } else {
            out << "valid: " << g.size() << " vertices, " << g.edges.size() << " edges\n";
        }
        return 0;
    } catch (const std::exception& e) {
        if (format == "json") {
            json j;
            j["valid"] = false;
            j["error"] = e.what();
            out << j.dump(2) << "\n";
        } else {
            out << "invalid: " << e.what() << "\n";
        }
        return 1;
    }
}

int cmd_invariants(const std::string& path, const std::string& format, std::ostream& out) {
    PlumbingGraph g = parse_graph(read_file(path));
    Intersection ix = analyze(g);
    OrbifoldGraph orb = orbifold_graph(g);
    if (format == "json") {
        json j;
        json a = json::array();
        for (const auto& row : ix.a) {
            json r = json::array();
            for (const auto& e : row) r.push_back(e.get_str());
            a.push_back(r);
        }
        j["matrix"] = a;
        j["matrix_inverse"] = matrix_json(ix.a_inv);
        j["det"] = ix.det.get_str();
        json factors = json::array();
        for (const auto& f : ix.smith.factors) factors.push_back(f.get_str());
        j["invariant_factors"] = factors;
        j["canonical_class"] = format_lattice_vector(ix, ix.canonical);
        json duals = json::object();
        for (int v = 0; v < ix.size(); ++v)
            duals["v" + std::to_string(g.id_of(v))] =
                format_lattice_vector(ix, ix.dual_basis[v]);
        j["dual_basis"] = duals;
        json nodes = json::array(), ends = json::array();
        for (int v : ix.nodes) nodes.push_back(g.id_of(v));
        for (int v : ix.ends) ends.push_back(g.id_of(v));
        j["nodes"] = nodes;
        j["ends"] = ends;
        json oe = json::array();
        for (const auto& e : orb.edges) oe.push_back({e.first, e.second});
        j["orbifold_edges"] = oe;
        out << j.dump(2) << "\n";
    } else {
        out << "det: " << ix.det.get_str() << "\n";
        out << "invariant factors:";
        for (const auto& f : ix.smith.factors) out << " " << f.get_str();
        out << "\n";
        out << "matrix:\n";
        for (const auto& row : ix.a) {
            for (size_t c = 0; c < row.size(); ++c) out << (c ? " " : "  ") << row[c].get_str();
            out << "\n";
        }
        out << "matrix inverse:\n";
        for (const auto& row : ix.a_inv) {
            for (size_t c = 0; c < row.size(); ++c) out << (c ? " " : "  ") << fmt_q(row[c]);
            out << "\n";
        }
        out << "canonical class: " << format_lattice_vector(ix, ix.canonical) << "\n";
        for (int v = 0; v < ix.size(); ++v)
            out << "dual v" << g.id_of(v) << ": " << format_lattice_vector(ix, ix.dual_basis[v])
                << "\n";
        out << "nodes:";
        for (int v : ix.nodes) out << " " << g.id_of(v);
        out << "\nends:";
        for (int v : ix.ends) out << " " << g.id_of(v);
        out << "\norbifold edges:";
        for (const auto& e : orb.edges) out << " (" << e.first << "," << e.second << ")";
        out << "\n";
    }
    return 0;
}

int cmd_expand(const std::string& path, const std::string& bound_text, const std::string& format,
               std::ostream& out) {
    PlumbingGraph g = parse_graph(read_file(path));
    Intersection ix = analyze(g);
    Context ctx(ix);
    RationalFunction f = series::equivariant_function(ctx);
    QVec bound = parse_lattice_vector(ix, bound_text);
    if (bound_text.find(',') == std::string::npos && bound_text.find('v') == std::string::npos) {
        Rational u(bound_text);
        u.canonicalize();
        bound.assign(ix.size(), u);
    }
    series::SeriesBox box = series::taylor_box(ctx, f, ctx.to_expo(bound));
    if (format == "json") {
        json j;
        j["bound"] = format_lattice_vector(ix, bound);
        j["coefficients"] = poly_json(ctx, box.coeffs);
        out << j.dump(2) << "\n";
    } else {
        out << series::to_string(ctx, box.coeffs) << "\n";
    }
    return 0;
}

int cmd_count(const std::string& path, const std::string& x_text, const std::string& cls_text,
              bool reduced, const std::string& format, std::ostream& out) {
    PlumbingGraph g = parse_graph(read_file(path));
    Intersection ix = analyze(g);
    Context ctx(ix);
    RationalFunction f = series::equivariant_function(ctx);
    QVec x = parse_lattice_vector(ix, x_text);
    HClass h = parse_class(ix, cls_text);
    std::vector<int> I = reduced ? ix.nodes : f.vars;
    if (reduced && ix.nodes.empty()) throw series::SeriesError("graph has no nodes");
    long long q = series::counting_function(ctx, f, I, h, x);
    if (format == "json") {
        json j;
        j["x"] = format_lattice_vector(ix, x);
        j["class"] = to_string(h);
        j["reduced"] = reduced;
        j["count"] = q;
        out << j.dump(2) << "\n";
    } else {
        out << q << "\n";
    }
    return 0;
}

int cmd_polypart(const std::string& path, const std::string& cls_text, const std::string& format,
                 std::ostream& out) {
    PlumbingGraph g = parse_graph(read_file(path));
    Intersection ix = analyze(g);
    Context ctx(ix);
    RationalFunction f = series::equivariant_function(ctx);
    HClass h = parse_class(ix, cls_text);
    series::LaurentPoly p = polypart::multivariable_poly_part(ctx, f, h);
    Rational pc = q_of(series::lp_eval_one(p).at(ctx.table.encode(h)));
    if (format == "json") {
        json j;
        j["class"] = to_string(h);
        j["polynomial"] = poly_json(ctx, p);
        j["pc"] = fmt_q(pc);
        out << j.dump(2) << "\n";
    } else {
        out << series::to_string(ctx, p) << "\n";
        out << "pc=" << fmt_q(pc) << "\n";
    }
    return 0;
}

int cmd_sw(const std::string& path, const std::string& format, std::ostream& out) {
    PlumbingGraph g = parse_graph(read_file(path));
    Intersection ix = analyze(g);
    Context ctx(ix);
    RationalFunction f = series::equivariant_function(ctx);
    auto mode = ix.nodes.empty() ? polypart::PcMode::Structure : polypart::PcMode::PolyPart;
    json rows = json::array();
    for (const HClass& h : all_classes(ix)) {
        Rational pc = polypart::periodic_constant(ctx, f, h, mode);
        Rational sw = polypart::seiberg_witten(ctx, f, h);
        if (format == "json") {
            json r;
            r["class"] = to_string(h);
            r["pc"] = fmt_q(pc);
            r["sw"] = fmt_q(sw);
            rows.push_back(r);
        } else {
            out << "h=" << to_string(h) << " pc=" << fmt_q(pc) << " sw=" << fmt_q(sw) << "\n";
        }
    }
    if (format == "json") out << rows.dump(2) << "\n";
    return 0;
}

int cmd_structure(const std::string& path, const std::string& mode_text, int samples,
                  const std::string& format, std::ostream& out) {
    PlumbingGraph g = parse_graph(read_file(path));
    Intersection ix = analyze(g);
    Context ctx(ix);
    RationalFunction f = series::equivariant_function(ctx);
    auto mode =
        mode_text == "orbifold" ? series::StructureMode::Orbifold : series::StructureMode::Full;
    std::vector<QVec> xs = quasipoly::deep_samples(ix, samples);
    bool all = true;
    json rows = json::array();
    for (const QVec& x : xs) {
        for (const HClass& h : all_classes(ix)) {
            auto pair = series::structure_counts(ctx, f, h, x, mode);
            bool pass = pair.lhs == pair.rhs;
            all = all && pass;
            if (format == "json") {
                json r;
                r["class"] = to_string(h);
                r["x"] = format_lattice_vector(ix, x);
                r["lhs"] = pair.lhs;
                r["rhs"] = pair.rhs;
                r["status"] = pass ? "ok" : "mismatch";
                rows.push_back(r);
            } else {
                out << "class " << to_string(h) << " x " << format_lattice_vector(ix, x)
                    << " lhs " << pair.lhs << " rhs " << pair.rhs << " "
                    << (pass ? "ok" : "mismatch") << "\n";
            }
        }
    }
    if (format == "json") out << rows.dump(2) << "\n";
    return all ? 0 : 2;
}

int cmd_surgery(const std::string& path, long vertex, int samples, const std::string& format,
                std::ostream& out) {
    PlumbingGraph g = parse_graph(read_file(path));
    Intersection ix = analyze(g);
    Context ctx(ix);
    std::vector<surgery::SurgeryReport> reports;
    reports.push_back(surgery::check_quasipoly_recursion(ctx, vertex, samples));
    reports.push_back(surgery::check_sw_surgery(ctx, vertex));
    reports.push_back(surgery::check_pc_recursion_min_rep(ctx, vertex));
    bool all = true;
    json rows = json::array();
    for (const auto& rep : reports)
        for (const auto& row : rep.rows) {
            all = all && row.pass;
            if (format == "json") {
                json r;
                r["class"] = to_string(row.cls);
                r["identity"] = row.identity;
                r["lhs"] = fmt_q(row.lhs);
                r["rhs"] = fmt_q(row.rhs);
                r["status"] = row.pass ? "ok" : "mismatch";
                if (!row.note.empty()) r["note"] = row.note;
                rows.push_back(r);
            } else {
                out << "class " << to_string(row.cls) << " | " << row.identity << " | lhs "
                    << fmt_q(row.lhs) << " | rhs " << fmt_q(row.rhs) << " | "
                    << (row.pass ? "ok" : "mismatch") << "\n";
            }
        }
    if (format == "json") out << rows.dump(2) << "\n";
    return all ? 0 : 2;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"exact invariants of negative definite plumbing trees"};
    app.require_subcommand(1);

    std::string path, format = "text", x_text, cls_text, bound_text, mode_text = "full";
    bool reduced = false;
    int samples = 5;
    long vertex = 0;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("graph", path, "graph file")->required();
        sub->add_option("--format", format, "text|json")
            ->check(CLI::IsMember({"text", "json"}));
    };

    auto* validate = app.add_subcommand("validate", "parse and validate a graph file");
    add_common(validate);
    auto* invariants = app.add_subcommand("invariants", "intersection data and orbifold graph");
    add_common(invariants);
    auto* expand = app.add_subcommand("expand", "Taylor coefficients inside a box");
    add_common(expand);
    expand->add_option("--bound", bound_text, "uniform value or per-vertex vector")->required();
    auto* count = app.add_subcommand("count", "counting function at a lattice point");
    add_common(count);
    count->add_option("--x", x_text, "lattice point, v<id>=<p/q>,... or bare values")->required();
    count->add_option("--class", cls_text, "class in Smith coordinates");
    count->add_flag("--reduced", reduced, "count the reduced series over the nodes");
    auto* polypart_cmd = app.add_subcommand("polypart", "multivariable polynomial part");
    add_common(polypart_cmd);
    polypart_cmd->add_option("--class", cls_text, "class in Smith coordinates");
    auto* sw = app.add_subcommand("sw", "periodic constants and normalized invariants");
    add_common(sw);
    auto* structure = app.add_subcommand("structure-check", "verify the structure identities");
    add_common(structure);
    structure->add_option("--mode", mode_text, "full|orbifold")
        ->check(CLI::IsMember({"full", "orbifold"}));
    structure->add_option("--samples", samples, "number of deep sample points");
    auto* surgery_cmd = app.add_subcommand("surgery-check", "verify the surgery identities");
    add_common(surgery_cmd);
    surgery_cmd->add_option("--vertex", vertex, "end vertex id")->required();
    surgery_cmd->add_option("--samples", samples, "samples per class");

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return 0;
        }
        err << e.what() << "\n";
        return 1;
    }

    try {
        if (validate->parsed()) return cmd_validate(path, format, out);
        if (invariants->parsed()) return cmd_invariants(path, format, out);
        if (expand->parsed()) return cmd_expand(path, bound_text, format, out);
        if (count->parsed()) return cmd_count(path, x_text, cls_text, reduced, format, out);
        if (polypart_cmd->parsed()) return cmd_polypart(path, cls_text, format, out);
        if (sw->parsed()) return cmd_sw(path, format, out);
        if (structure->parsed()) return cmd_structure(path, mode_text, samples, format, out);
        if (surgery_cmd->parsed()) return cmd_surgery(path, vertex, samples, format, out);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    err << "unknown subcommand\n";
    return 1;
}

}  // namespace plumb::cli
