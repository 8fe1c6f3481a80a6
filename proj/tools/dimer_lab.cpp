#include "criteria.hpp"
#include "dimerlab/mf.hpp"
#include "dimerlab/reduce.hpp"

#include <CLI11.hpp>
#include <json.hpp>
#include <openssl/evp.h>

#include <cstdio>
#include <iomanip>
#include <iostream>

using namespace dimerlab;
using Json = nlohmann::ordered_json;

namespace {

// exit code 2
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string sha256(const std::string& data) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int n = 0;
    EVP_Digest(data.data(), data.size(), md, &n, EVP_sha256(), nullptr);
    std::ostringstream s;
    for (unsigned int i = 0; i < n; ++i) s << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
    return s.str();
}

// rationals always as "p/q" in machine output
std::string q(const Rational& r) { return numerator(r).str() + "/" + denominator(r).str(); }
Json pt(const Pt& p) { return Json::array({p.x, p.y}); }
Json qpt(const QPt& p) { return Json::array({q(p.x), q(p.y)}); }

std::string join(const std::vector<int>& v, const std::string& sep = " ") {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? sep : "") + std::to_string(v[i]);
    return s;
}

// 6 significant digits, for figures only
std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}
double to_double(const Rational& r) { return static_cast<double>(r); }

struct Options {
    bool json = false;
    std::string weights, rep, svg, widths;
    int seed = -1;
    int node = -1;
    bool print = false;
};

class Session {
public:
    explicit Session(const Options& o) : opt(o) {}

    const Options& opt;
    Json report = Json::object();
    std::ostringstream text;
    std::vector<std::string> warnings;

    std::string read(const std::string& path) {
        std::string data;
        if (path == "-") {
            if (stdin_used_) throw UsageError("stdin can be read only once");
            stdin_used_ = true;
            std::ostringstream s;
            s << std::cin.rdbuf();
            data = s.str();
        } else {
            std::ifstream in(path, std::ios::binary);
            if (!in) throw UsageError("cannot open '" + path + "'");
            std::ostringstream s;
            s << in.rdbuf();
            data = s.str();
        }
        inputs_.push_back({{"path", path}, {"sha256", sha256(data)}});
        return data;
    }

    Dimer dimer(const std::string& path) { return parse_dimer(read(path)); }

    std::vector<Rational> values(const std::string& path, const Dimer& d, const std::string& keyword) {
        if (path.empty()) throw UsageError("--" + std::string(keyword == "weight" ? "weights" : keyword == "rep" ? "rep" : "widths") + " <file> is required");
        return parse_arrow_values(read(path), d.arrow_count(), keyword);
    }

    Json finish(const std::string& command, Json results) {
        Json r = Json::object();
        r["command"] = command;
        r["inputs"] = inputs_;
        r["results"] = std::move(results);
        r["warnings"] = warnings;
        return r;
    }

private:
    bool stdin_used_ = false;
    Json inputs_ = Json::array();
};

// ---- figures ----

struct Box {
    double x0 = 1e300, y0 = 1e300, x1 = -1e300, y1 = -1e300;
    void add(double x, double y) {
        x0 = std::min(x0, x);
        y0 = std::min(y0, y);
        x1 = std::max(x1, x);
        y1 = std::max(y1, y);
    }
};

// One square panel; maps data coordinates with y up into a size x size frame.
class Panel {
public:
    Panel(const Box& b, double ox, double size, std::string title) : ox_(ox), size_(size), title_(std::move(title)) {
        double w = std::max(b.x1 - b.x0, 1e-9), h = std::max(b.y1 - b.y0, 1e-9);
        scale_ = (size - 60) / std::max(w, h);
        cx_ = (b.x0 + b.x1) / 2;
        cy_ = (b.y0 + b.y1) / 2;
    }
    double X(double x) const { return ox_ + size_ / 2 + (x - cx_) * scale_; }
    double Y(double y) const { return 20 + size_ / 2 - (y - cy_) * scale_; }

    void line(double ax, double ay, double bx, double by, const std::string& style) {
        out << "<line x1=\"" << num(X(ax)) << "\" y1=\"" << num(Y(ay)) << "\" x2=\"" << num(X(bx)) << "\" y2=\"" << num(Y(by))
            << "\" " << style << "/>\n";
    }
    void dot(double x, double y, double r, const std::string& fill) {
        out << "<circle cx=\"" << num(X(x)) << "\" cy=\"" << num(Y(y)) << "\" r=\"" << num(r) << "\" fill=\"" << fill << "\"/>\n";
    }
    void label(double x, double y, const std::string& s, double dx = 6, double dy = -6) {
        out << "<text x=\"" << num(X(x) + dx) << "\" y=\"" << num(Y(y) + dy) << "\" font-size=\"11\">" << s << "</text>\n";
    }
    std::string str() const {
        return "<text x=\"" + num(ox_ + 10) + "\" y=\"16\" font-size=\"13\">" + title_ + "</text>\n" + out.str();
    }

    std::ostringstream out;

private:
    double ox_, size_, scale_ = 1, cx_ = 0, cy_ = 0;
    std::string title_;
};

void write_svg(const std::string& path, const std::vector<std::string>& panels, double size) {
    std::ofstream f(path);
    if (!f) throw UsageError("cannot write '" + path + "'");
    f << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(size * panels.size()) << "\" height=\"" << num(size + 20)
      << "\">\n<!-- coordinates rounded to 6 significant digits; the JSON report is exact -->\n";
    for (const auto& p : panels) f << p;
    f << "</svg>\n";
}

Panel polygon_panel(const TropicalPolynomial& f, const MatchingPolygon& P, const Subdivision* S, double ox, double size,
                    const std::string& title) {
    Box b;
    for (const auto& t : f.terms) b.add(static_cast<double>(t.point.x), static_cast<double>(t.point.y));
    for (const auto& p : lattice_points_in(P.hull)) b.add(static_cast<double>(p.x), static_cast<double>(p.y));
    Panel pn(b, ox, size, title);
    auto X = [](const Pt& p) { return static_cast<double>(p.x); };
    auto Y = [](const Pt& p) { return static_cast<double>(p.y); };
    for (const auto& p : lattice_points_in(P.hull)) pn.dot(X(p), Y(p), 2, "#bbb");
    if (S) {
        for (const auto& e : S->edges) {
            const auto &a = f.terms[e.from].point, &c = f.terms[e.to].point;
            pn.line(X(a), Y(a), X(c), Y(c), e.boundary() ? "stroke=\"black\" stroke-width=\"2\"" : "stroke=\"#36c\" stroke-width=\"1.5\"");
        }
    } else {
        for (std::size_t i = 0; i < P.hull.size(); ++i) {
            const auto &a = P.hull[i], &c = P.hull[(i + 1) % P.hull.size()];
            pn.line(X(a), Y(a), X(c), Y(c), "stroke=\"black\" stroke-width=\"2\"");
        }
    }
    for (const auto& [p, idx] : P.points) {
        pn.dot(X(p), Y(p), 4, P.is_corner(p) ? "black" : "#666");
        if (idx.size() > 1) pn.label(X(p), Y(p), std::to_string(idx.size()));
    }
    return pn;
}

// ---- commands ----

Json dimer_summary(const Dimer& d) {
    auto inv = surface_invariants(d);
    return {{"name", d.name},       {"vertices", d.vertex_count}, {"arrows", d.arrow_count()},
            {"faces", d.face_count()}, {"positive_faces", d.pos_count}, {"negative_faces", d.face_count() - d.pos_count},
            {"euler_characteristic", inv.chi}, {"genus", inv.genus}};
}

int cmd_validate(Session& s, const std::string& file) {
    auto d = s.dimer(file);
    auto r = dimer_summary(d);
    auto H = homology(d);
    r["torus"] = H.torus();
    s.report = s.finish("validate", r);
    s.text << "valid dimer '" << d.name << "': " << d.vertex_count << " vertices, " << d.arrow_count() << " arrows, "
           << d.face_count() << " faces (" << d.pos_count << " positive), genus " << surface_invariants(d).genus << "\n";
    if (s.opt.print) {
        s.text.str(print_dimer(d));
        s.report["results"]["dtf"] = print_dimer(d);
    }
    return 0;
}

int cmd_mirror(Session& s, const std::string& file) {
    auto d = s.dimer(file);
    auto m = mirror(d);
    auto dtf = print_dimer(m);
    s.report = s.finish("mirror", {{"dimer", dimer_summary(m)}, {"dtf", dtf}});
    s.text << dtf;
    return 0;
}

int cmd_matchings(Session& s, const std::string& file) {
    auto d = s.dimer(file);
    auto H = homology(d);
    auto ms = enumerate_matchings(d);
    if (H.torus()) attach_points(d, H, ms);
    else s.warnings.push_back("not a torus: no lattice points");
    Json list = Json::array();
    for (std::size_t i = 0; i < ms.size(); ++i) {
        Json m{{"index", i}, {"arrows", ms[i].arrows}};
        if (H.torus()) m["point"] = pt(ms[i].point);
        list.push_back(m);
        s.text << join(ms[i].arrows);
        if (H.torus()) s.text << " " << to_string(ms[i].point);
        s.text << "\n";
    }
    s.report = s.finish("matchings", {{"count", ms.size()}, {"matchings", list}});
    return 0;
}

int cmd_polygon(Session& s, const std::string& file) {
    auto d = s.dimer(file);
    auto md = matching_data(d, homology(d));
    const auto& P = md.polygon;
    Json pts = Json::array();
    for (const auto& [p, idx] : P.points) pts.push_back({{"point", pt(p)}, {"corner", P.is_corner(p)}, {"multiplicity", idx.size()}, {"matchings", idx}});
    Json corners = Json::array(), edges = Json::array();
    for (const auto& c : P.hull) corners.push_back(pt(c));
    for (const auto& e : P.edges) edges.push_back({{"from", pt(e.from)}, {"to", pt(e.to)}, {"normal", pt(e.normal)}, {"length", e.length}});
    s.report = s.finish("polygon", {{"corners", corners}, {"edges", edges}, {"points", pts}, {"boundary", P.boundary_count},
                                    {"interior", P.interior_count}, {"corner_count", P.hull.size()}, {"twice_area", twice_area(P.hull)}});
    s.text << "corners";
    for (const auto& c : P.hull) s.text << " " << to_string(c);
    s.text << "\n";
    for (const auto& [p, idx] : P.points) s.text << "point " << to_string(p) << " matchings " << idx.size() << (P.is_corner(p) ? " corner" : "") << "\n";
    s.text << "boundary=" << P.boundary_count << " interior=" << P.interior_count << " corners=" << P.hull.size() << "\n";
    if (!s.opt.svg.empty()) {
        TropicalPolynomial f;
        for (const auto& [p, idx] : P.points) f.terms.push_back({p, 0, idx, idx});
        write_svg(s.opt.svg, {polygon_panel(f, P, nullptr, 0, 400, "matching polygon").str()}, 400);
    }
    return 0;
}

int cmd_consistent(Session& s, const std::string& file) {
    auto d = s.dimer(file);
    auto H = homology(d);
    auto r = is_consistent(d, H);
    auto zs = zigzag_cycles(d, &H);
    Json zj = Json::array();
    for (const auto& z : zs) {
        Json e{{"arrows", z.arrows}};
        if (H.torus()) e["class"] = pt(z.hclass);
        zj.push_back(e);
    }
    Json fails = Json::array(), overlaps = Json::array(), doubles = Json::array();
    for (const auto& w : r.order_failures) {
        Json cl = Json::array();
        for (const auto& c : w.classes) cl.push_back(pt(c));
        fails.push_back({{"face", w.face}, {"classes", cl}});
    }
    for (const auto& o : r.overlaps) overlaps.push_back({{"arrow", o.start}, {"shared", o.shared}, {"zig_step", o.zig_step}, {"zag_step", o.zag_step}});
    for (const auto& [f, z] : r.double_turns) doubles.push_back({{"face", f}, {"zigzag", z}});
    Json res{{"consistent", r.consistent}, {"torus", r.torus}, {"ray_check", r.ray_check}, {"zigzags", zj},
             {"ray_overlaps", overlaps}, {"double_turns", doubles}};
    if (r.torus) {
        res["well_ordered"] = r.well_ordered;
        res["order_failures"] = fails;
        res["zero_class"] = r.zero_class;
    }
    if (!r.double_turns.empty()) s.warnings.push_back("a zigzag cycle turns twice in one positive face");
    s.report = s.finish("consistent", res);
    s.text << (r.consistent ? "consistent" : "inconsistent") << "\n";
    s.text << "zigzag cycles " << zs.size() << "\n";
    if (r.torus) s.text << "well-ordered " << (r.well_ordered ? "yes" : "no") << "\n";
    s.text << "ray check " << (r.ray_check ? "passed" : "failed") << "\n";
    for (const auto& w : r.order_failures) {
        s.text << "face " << w.face << " zig-turn classes";
        for (const auto& c : w.classes) s.text << " " << to_string(c);
        s.text << "\n";
    }
    for (const auto& o : r.overlaps)
        s.text << "zig and zag rays of arrow " << o.start << " share arrow " << o.shared << " (steps " << o.zig_step << ", " << o.zag_step << ")\n";
    for (const auto& [f, z] : r.double_turns) s.text << "warning: zigzag " << z << " turns twice in face " << f << "\n";
    return r.consistent ? 0 : 1;
}

Jacobi jacobi(Session& s, const Dimer& d) {
    int seed = s.opt.seed < 0 ? 0 : s.opt.seed;
    auto J = Jacobi::make(d, seed);
    return J;
}

Json monomial_json(const Monomial& m) {
    return {{"head", m.head}, {"tail", m.tail}, {"class", pt(m.hclass)}, {"refdeg", m.refdeg}};
}

int cmd_path(Session& s, const std::string& file, const std::string& word) {
    auto d = s.dimer(file);
    auto J = jacobi(s, d);
    std::vector<Letter> w;
    try {
        w = parse_word(word);
    } catch (const Error& e) {
        throw UsageError(e.what());
    }
    if (w.empty()) throw UsageError("empty word");
    auto e = path_element(J, w);
    bool member = in_jacobi(J, e);
    Json degs = Json::array();
    for (std::size_t m = 0; m < J.matchings.size(); ++m) degs.push_back(degree(J, e.mono, m));
    s.report = s.finish("path", {{"reference_matching", J.reference}, {"canonical", monomial_json(e.mono)},
                                 {"coefficient", q(e.coeff)}, {"in_jacobi", member}, {"degrees", degs}});
    s.text << "canonical " << to_string(e) << "\n";
    s.text << "head " << e.head() << " tail " << e.tail() << " class " << to_string(e.mono.hclass) << " refdeg " << e.mono.refdeg << "\n";
    s.text << "degrees";
    for (const auto& x : degs) s.text << " " << x.get<std::int64_t>();
    s.text << "\n" << (member ? "in J(Q)" : "not in J(Q)") << "\n";
    return 0;
}

int cmd_gtl(Session& s, const std::string& file) {
    auto d = s.dimer(file);
    auto qv = angle_quiver(d);
    Json angles = Json::array(), rels = Json::array();
    for (const auto& g : qv.angles) {
        angles.push_back({{"id", g.id}, {"from", g.src}, {"to", g.dst}, {"face", g.face}, {"sign", g.positive ? "+" : "-"}});
        s.text << "angle " << g.id << " " << g.src << " -> " << g.dst << " face " << g.face << (g.positive ? " +" : " -") << "\n";
    }
    for (auto [x, y] : qv.relations) {
        rels.push_back(Json::array({x, y}));
        s.text << "relation " << x << " * " << y << " = 0\n";
    }
    s.report = s.finish("gtl", {{"angles", angles}, {"relations", rels}});
    return 0;
}

Json mf_json(const MatrixFactorization& m, const CheckResult& c, std::ostringstream& text) {
    Json summ = Json::array(), entries = Json::array();
    for (const auto& x : m.summands) summ.push_back({{"vertex", x.vertex}, {"parity", x.parity}});
    text << "summands";
    for (const auto& x : m.summands) text << " " << x.vertex << (x.parity ? "odd" : "even");
    text << "\n";
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < m.size(); ++j) {
            const auto& p = m.d[i][j];
            if (p.zero()) continue;
            Json terms = Json::array();
            for (const auto& [mono, coeff] : p.terms) {
                Json t = monomial_json(mono);
                t["coefficient"] = q(coeff);
                terms.push_back(t);
            }
            entries.push_back({{"row", i}, {"column", j}, {"terms", terms}});
            text << "(" << i << "," << j << "): " << to_string(p) << "\n";
        }
    text << "d^2 = l: " << (c.ok ? "yes" : "no, " + c.failure) << "\n";
    return {{"summands", summ}, {"entries", entries}, {"d_squared_is_l", c.ok}, {"failure", c.failure}};
}

int cmd_mf_arrow(Session& s, const std::string& file, int a) {
    auto d = s.dimer(file);
    if (a < 1 || a > d.arrow_count()) throw UsageError("arrow " + std::to_string(a) + " out of range");
    auto J = jacobi(s, d);
    auto m = mf_arrow(J, a);
    auto c = mf_check(J, m);
    auto r = mf_json(m, c, s.text);
    r["arrow"] = a;
    s.report = s.finish("mf arrow", r);
    return c.ok ? 0 : 1;
}

int cmd_mf_band(Session& s, const std::string& file, const std::vector<int>& entries, const std::string& alpha) {
    auto d = s.dimer(file);
    auto J = jacobi(s, d);
    auto g = make_garland(d, entries);
    Rational a = parse_rational(alpha);
    if (a == 0) throw ValidationError("decoration must be nonzero");
    if (!g.primitive) s.warnings.push_back("garland is not primitive");
    auto m = mf_band(J, g, {{a}});
    auto c = mf_check(J, m);
    auto r = mf_json(m, c, s.text);
    r["garland"] = g.entries;
    r["decoration"] = q(a);
    r["snake_path"] = snake_path(d, g);
    s.report = s.finish("mf band", r);
    return c.ok ? 0 : 1;
}

int cmd_mf_rep(Session& s, const std::string& file) {
    auto d = s.dimer(file);
    auto J = jacobi(s, d);
    auto rho = s.values(s.opt.rep, d, "rep");
    auto R = rep_bands(d, J.H, rho);
    Json bands = Json::array();
    bool all_ok = true;
    for (const auto& b : R.bands) {
        std::ostringstream ignore;
        auto m = mf_band(J, b.garland, {{b.decoration}});
        auto c = mf_check(J, m);
        all_ok = all_ok && c.ok;
        bands.push_back({{"garland", b.garland.entries}, {"decoration", q(b.decoration)}, {"class", pt(b.hclass)},
                         {"summands", m.size()}, {"d_squared_is_l", c.ok}});
        s.text << "band " << join(b.garland.entries) << " decoration " << to_string(b.decoration) << " class " << to_string(b.hclass)
               << (c.ok ? "" : " (d^2 != l)") << "\n";
    }
    Json crossings = Json::object();
    for (auto [a, n] : R.crossings) crossings[std::to_string(a)] = n;
    s.report = s.finish("mf rep", {{"zero_arrows", zero_arrows(rho)}, {"bands", bands}, {"traces", R.traces},
                                   {"contractible_traces", R.dropped}, {"crossings", crossings}});
    s.text << R.bands.size() << " bands from " << R.traces << " traces (" << R.dropped << " contractible)\n";
    return all_ok ? 0 : 1;
}

TropicalModel model(Session& s, const Dimer& d) {
    auto W = s.values(s.opt.weights, d, "weight");
    return tropical_model(d, homology(d), W);
}

int cmd_tropical(Session& s, const std::string& file) {
    auto d = s.dimer(file);
    auto M = model(s, d);
    Json terms = Json::array(), cells = Json::array(), edges = Json::array(), nodes = Json::array(), tedges = Json::array(),
         legs = Json::array();
    for (std::size_t t = 0; t < M.f.terms.size(); ++t) {
        const auto& T = M.f.terms[t];
        terms.push_back({{"point", pt(T.point)}, {"coefficient", q(T.c)}, {"matchings", T.owners}, {"minimal", T.minimal},
                         {"on_lower_hull", static_cast<bool>(M.subdivision.on_hull[t])}, {"vertex", static_cast<bool>(M.subdivision.vertex[t])}});
        s.text << "term " << to_string(T.point) << " c=" << to_string(T.c) << (M.subdivision.vertex[t] ? " vertex" : "") << "\n";
    }
    for (std::size_t c = 0; c < M.subdivision.cells.size(); ++c) {
        const auto& C = M.subdivision.cells[c];
        Json corners = Json::array();
        for (int t : C.corners) corners.push_back(pt(M.f.terms[t].point));
        cells.push_back({{"corners", corners}, {"terms", C.points}, {"plane", {q(C.alpha), q(C.beta), q(C.gamma)}}, {"interior", C.interior}});
        s.text << "cell " << c << " corners";
        for (int t : C.corners) s.text << " " << to_string(M.f.terms[t].point);
        s.text << " interior " << C.interior << "\n";
    }
    for (const auto& e : M.subdivision.edges)
        edges.push_back({{"from", pt(M.f.terms[e.from].point)}, {"to", pt(M.f.terms[e.to].point)}, {"length", e.length},
                         {"left", e.left}, {"right", e.right < 0 ? Json() : Json(e.right)}});
    for (std::size_t n = 0; n < M.curve.nodes.size(); ++n) {
        nodes.push_back({{"position", qpt(M.curve.nodes[n])}, {"genus", M.spider.genus[n]}});
        s.text << "node " << n << " " << to_string(M.curve.nodes[n]) << " genus " << M.spider.genus[n] << "\n";
    }
    for (const auto& e : M.curve.edges) {
        tedges.push_back({{"from", e.from}, {"to", e.to}, {"direction", pt(e.direction)}, {"multiplicity", e.multiplicity}, {"affine_length", q(e.length)}});
        s.text << "edge " << e.from << " - " << e.to << " direction " << to_string(e.direction) << " multiplicity " << e.multiplicity
               << " length " << to_string(e.length) << "\n";
    }
    for (const auto& l : M.curve.legs) {
        legs.push_back({{"node", l.node}, {"direction", pt(l.direction)}, {"multiplicity", l.multiplicity}});
        s.text << "leg at " << l.node << " direction " << to_string(l.direction) << " multiplicity " << l.multiplicity << "\n";
    }
    Json spider{{"nodes", M.spider.genus.size()}, {"edges", M.spider.edges.size()}, {"legs", M.spider.legs.size()},
                {"genus", M.spider.total_genus()}, {"node_genera", M.spider.genus}};
    s.text << "spider: " << M.spider.genus.size() << " nodes, " << M.spider.edges.size() << " edges, " << M.spider.legs.size()
           << " legs, genus " << M.spider.total_genus() << "\n";
    s.report = s.finish("tropical", {{"terms", terms}, {"cells", cells}, {"subdivision_edges", edges}, {"nodes", nodes},
                                     {"edges", tedges}, {"legs", legs}, {"spider", spider}});
    if (!s.opt.svg.empty()) {
        double size = 400;
        auto newton = polygon_panel(M.f, M.polygon, &M.subdivision, 0, size, "Newton polygon and subdivision");
        // curve: legs drawn with a fixed length
        Box b;
        for (const auto& n : M.curve.nodes) b.add(to_double(n.x), to_double(n.y));
        double span = std::max({b.x1 - b.x0, b.y1 - b.y0, 1.0});
        double leg = span / 2;
        Box bb = b;
        for (const auto& l : M.curve.legs) {
            const auto& n = M.curve.nodes[l.node];
            double len = std::hypot(static_cast<double>(l.direction.x), static_cast<double>(l.direction.y));
            bb.add(to_double(n.x) + leg * l.direction.x / len, to_double(n.y) + leg * l.direction.y / len);
        }
        Panel curve(bb, size, size, "tropical curve");
        Panel sp(bb, 2 * size, size, "spider graph");
        for (const auto& e : M.curve.edges) {
            const auto &a = M.curve.nodes[e.from], &c = M.curve.nodes[e.to];
            curve.line(to_double(a.x), to_double(a.y), to_double(c.x), to_double(c.y), "stroke=\"#c33\" stroke-width=\"2\"");
            sp.line(to_double(a.x), to_double(a.y), to_double(c.x), to_double(c.y), "stroke=\"black\"");
            if (e.multiplicity > 1) {
                double mx = (to_double(a.x) + to_double(c.x)) / 2, my = (to_double(a.y) + to_double(c.y)) / 2;
                curve.label(mx, my, std::to_string(e.multiplicity));
                sp.label(mx, my, "x" + std::to_string(e.multiplicity));
            }
        }
        for (const auto& l : M.curve.legs) {
            const auto& n = M.curve.nodes[l.node];
            double len = std::hypot(static_cast<double>(l.direction.x), static_cast<double>(l.direction.y));
            double ex = to_double(n.x) + leg * l.direction.x / len, ey = to_double(n.y) + leg * l.direction.y / len;
            curve.line(to_double(n.x), to_double(n.y), ex, ey, "stroke=\"#c33\" stroke-dasharray=\"4 3\"");
            double sx = to_double(n.x) + leg / 3 * l.direction.x / len, sy = to_double(n.y) + leg / 3 * l.direction.y / len;
            sp.line(to_double(n.x), to_double(n.y), sx, sy, "stroke=\"#666\"");
            if (l.multiplicity > 1) curve.label(ex, ey, std::to_string(l.multiplicity));
        }
        for (std::size_t n = 0; n < M.curve.nodes.size(); ++n) {
            double x = to_double(M.curve.nodes[n].x), y = to_double(M.curve.nodes[n].y);
            curve.dot(x, y, 3, "#c33");
            sp.dot(x, y, 7, M.spider.genus[n] ? "#36c" : "white");
            sp.label(x, y, "g=" + std::to_string(M.spider.genus[n]), 9, -9);
        }
        write_svg(s.opt.svg, {newton.str(), curve.str(), sp.str()}, size);
    }
    return 0;
}

int cmd_stable(Session& s, const std::string& file) {
    auto d = s.dimer(file);
    auto M = model(s, d);
    Json stable = Json::array(), semi = Json::array();
    for (std::size_t m = 0; m < M.matchings.size(); ++m) {
        Json e{{"index", m}, {"arrows", M.matchings[m].arrows}, {"point", pt(M.matchings[m].point)},
               {"weight", q(matching_weight(M.matchings[m], M.weights))}};
        if (M.stability[m].stable) stable.push_back(e);
        else if (M.stability[m].semistable) semi.push_back(e);
    }
    Json theta = Json::array();
    for (std::size_t v = 1; v < M.theta.size(); ++v) theta.push_back(q(M.theta[v]));
    s.report = s.finish("stable", {{"stable", stable}, {"semistable_not_stable", semi}, {"theta", theta},
                                   {"nondegenerate", M.degeneracy.nondegenerate}, {"generic_character", M.degeneracy.generic_character},
                                   {"generic", M.degeneracy.generic}});
    s.text << stable.size() << " stable matchings\n";
    for (const auto& e : stable) s.text << "stable " << join(e["arrows"].get<std::vector<int>>()) << "\n";
    for (const auto& e : semi) s.text << "semistable " << join(e["arrows"].get<std::vector<int>>()) << "\n";
    s.text << "nondegenerate " << (M.degeneracy.nondegenerate ? "yes" : "no") << ", generic " << (M.degeneracy.generic ? "yes" : "no") << "\n";
    return 0;
}

Json reduction_json(const Reduction& R) {
    Json r{{"zero_arrows", R.zero_arrows}, {"nonzero_arrows", R.nonzero_arrows}, {"vertex_classes", R.vertex_classes},
           {"orbit_dimension", R.orbit_dimension}, {"morita", R.morita}, {"log", R.log}};
    if (R.result) {
        Json digons = Json::array();
        for (auto [a, b] : R.removed_digons) digons.push_back(Json::array({a, b}));
        r["removed_loops"] = R.removed_loops;
        r["removed_digons"] = digons;
        r["origin"] = std::vector<int>(R.origin.begin() + 1, R.origin.end());
        r["well_ordered"] = R.well_ordered;
        r["dimer"] = dimer_summary(*R.result);
        r["dtf"] = print_dimer(*R.result);
    }
    return r;
}

void reduction_text(const Reduction& R, std::ostringstream& text) {
    for (const auto& l : R.log) text << "# " << l << "\n";
    text << "# local algebra: " << R.morita << "\n";
    if (R.result) {
        text << "# arrow origins:";
        for (std::size_t i = 1; i < R.origin.size(); ++i) text << " " << i << "<-" << R.origin[i];
        text << "\n" << print_dimer(*R.result);
    }
}

int cmd_reduce(Session& s, const std::string& file) {
    auto d = s.dimer(file);
    auto H = homology(d);
    if (s.opt.node >= 0) {
        if (!s.opt.rep.empty()) throw UsageError("--node and --rep exclude each other");
        auto M = tropical_model(d, H, s.values(s.opt.weights, d, "weight"));
        if (s.opt.node >= static_cast<int>(M.subdivision.cells.size()))
            throw UsageError("node " + std::to_string(s.opt.node) + " out of range (" + std::to_string(M.subdivision.cells.size()) + " nodes)");
        auto C = cell_polygon_check(d, H, M, s.opt.node);
        auto r = reduction_json(C.reduction);
        auto shape = [](const PolygonShape& p) {
            return Json{{"corners", p.corners}, {"boundary", p.boundary}, {"interior", p.interior}, {"edge_lengths", p.edge_lengths}};
        };
        r["node"] = C.node;
        r["cell"] = shape(C.cell);
        r["reduced_polygon"] = shape(C.reduced);
        r["polygon_matches_cell"] = C.matches;
        r["zigzags"] = C.zigzags;
        r["spider_valency"] = C.spider_valency;
        s.report = s.finish("reduce", r);
        reduction_text(C.reduction, s.text);
        s.text << "# cell and reduced polygon " << (C.matches ? "match" : "differ") << "; zigzags " << C.zigzags
               << ", spider valency " << C.spider_valency << "\n";
        return C.matches ? 0 : 1;
    }
    auto R = reduce_dimer(d, H, s.values(s.opt.rep, d, "rep"));
    s.report = s.finish("reduce", reduction_json(R));
    reduction_text(R, s.text);
    return 0;
}

int cmd_strebel(Session& s, const std::string& file) {
    auto d = s.dimer(file);
    auto M = model(s, d);
    std::vector<Rational> B(d.arrow_count() + 1, Rational(1));
    if (!s.opt.widths.empty()) {
        B = s.values(s.opt.widths, d, "width");
        for (int a = 1; a <= d.arrow_count(); ++a)
            if (B[a] == 0) throw ValidationError("arrow " + std::to_string(a) + " has no width");
    }
    auto X = strebel_strips(M, d, B);
    Json strips = Json::array(), gluings = Json::array(), zeros = Json::array();
    for (const auto& st : X.strips)
        strips.push_back({{"arrow", st.arrow}, {"edge", st.edge}, {"length", st.length ? Json(q(*st.length)) : Json()}, {"width", q(st.width)}});
    for (const auto& g : X.gluings) gluings.push_back({{"face", g.face}, {"edge", g.edge}, {"arrows", {g.arrow1, g.arrow2}}});
    for (const auto& z : X.zeros) zeros.push_back({{"face", z.face}, {"node", z.node}, {"order", z.order}});
    s.report = s.finish("strebel", {{"strips", strips}, {"gluings", gluings}, {"zeros", zeros}, {"genus", X.genus},
                                    {"punctures", X.punctures}, {"zero_total", X.zero_total()}, {"area", q(X.area())}});
    for (const auto& st : X.strips)
        s.text << "strip arrow " << st.arrow << " edge " << st.edge << " length " << (st.length ? to_string(*st.length) : "inf")
               << " width " << to_string(st.width) << "\n";
    for (const auto& g : X.gluings) s.text << "glue face " << g.face << " edge " << g.edge << " arrows " << g.arrow1 << " " << g.arrow2 << "\n";
    for (const auto& z : X.zeros)
        if (z.order != 0) s.text << "zero face " << z.face << " node " << z.node << " order " << z.order << "\n";
    s.text << "genus " << X.genus << ", punctures " << X.punctures << ", zero orders " << X.zero_total() << " = 4g-4+2n "
           << 4 * X.genus - 4 + 2 * X.punctures << ", area " << to_string(X.area()) << "\n";
    return X.zero_total() == 4 * X.genus - 4 + 2 * X.punctures ? 0 : 1;
}

int cmd_corpus(Session& s, const std::string& dir) {
    criteria::Corpus C(dir);
    Json list = Json::array();
    bool ok = true;
    for (const auto& o : criteria::run_all(C)) {
        list.push_back({{"criterion", o.id}, {"title", o.title}, {"pass", o.pass}, {"detail", o.detail}});
        s.text << criteria::format(o) << "\n";
        ok = ok && o.pass;
    }
    s.report = s.finish("corpus", {{"directory", dir}, {"criteria", list}, {"all_pass", ok}});
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dimer-lab: dimer models, matching polygons, tropical stability and reductions"};
    app.require_subcommand(1);
    Options opt;
    app.add_flag("--json", opt.json, "print a JSON report instead of text");

    std::string file, word, alpha = "1", dir = DIMERLAB_CORPUS;
    int arrow = 0;
    std::vector<int> entries;
    auto dimer_arg = [&](CLI::App* c) { c->add_option("dimer", file, "dimer file in DTF, - for stdin")->required(); };
    auto weights = [&](CLI::App* c, bool required) {
        auto o = c->add_option("--weights", opt.weights, "arrow weights: lines 'weight <id> <p/q>'");
        if (required) o->required();
    };

    auto* validate = app.add_subcommand("validate", "parse and check a dimer");
    dimer_arg(validate);
    validate->add_flag("--print", opt.print, "print the normal form instead of a summary");
    auto* mir = app.add_subcommand("mirror", "print the mirror dimer");
    dimer_arg(mir);
    auto* matchings = app.add_subcommand("matchings", "list perfect matchings");
    dimer_arg(matchings);
    auto* polygon = app.add_subcommand("polygon", "matching polygon");
    dimer_arg(polygon);
    polygon->add_option("--svg", opt.svg, "write a figure");
    auto* consistent = app.add_subcommand("consistent", "zigzag consistency");
    dimer_arg(consistent);
    auto* path = app.add_subcommand("path", "canonical form of a path in the weak Jacobi algebra");
    dimer_arg(path);
    path->add_option("word", word, "arrows in composition order, inverses as 5^-1 or -5")->required();
    path->add_option("--seed-matching", opt.seed, "index of the reference matching");
    auto* gtl = app.add_subcommand("gtl", "angle quiver and relations");
    dimer_arg(gtl);

    auto* mf = app.add_subcommand("mf", "matrix factorizations");
    mf->require_subcommand(1);
    auto* mf_a = mf->add_subcommand("arrow", "factorization of an arrow");
    dimer_arg(mf_a);
    mf_a->add_option("arrow", arrow, "arrow id")->required();
    mf_a->add_option("--seed-matching", opt.seed, "index of the reference matching");
    auto* mf_b = mf->add_subcommand("band", "factorization of a garland band");
    dimer_arg(mf_b);
    mf_b->add_option("entries", entries, "arrow face arrow face ...")->required();
    mf_b->add_option("--alpha", alpha, "decoration p/q");
    mf_b->add_option("--seed-matching", opt.seed, "index of the reference matching");
    auto* mf_r = mf->add_subcommand("rep", "bands of a toric representation");
    dimer_arg(mf_r);
    mf_r->add_option("--rep", opt.rep, "representation: lines 'rep <id> <p/q>'")->required();
    mf_r->add_option("--seed-matching", opt.seed, "index of the reference matching");

    auto* tropical = app.add_subcommand("tropical", "tropical polynomial, subdivision, curve and spider graph");
    dimer_arg(tropical);
    weights(tropical, true);
    tropical->add_option("--svg", opt.svg, "write figures");
    auto* stable = app.add_subcommand("stable", "stable perfect matchings for a weight");
    dimer_arg(stable);
    weights(stable, true);
    auto* reduce = app.add_subcommand("reduce", "reduce at a representation or at a spider node");
    dimer_arg(reduce);
    reduce->add_option("--rep", opt.rep, "representation: lines 'rep <id> <p/q>'");
    reduce->add_option("--node", opt.node, "spider node index")->check(CLI::NonNegativeNumber);
    weights(reduce, false);
    auto* strebel = app.add_subcommand("strebel", "strip complex of the mirror");
    dimer_arg(strebel);
    weights(strebel, true);
    strebel->add_option("--widths", opt.widths, "strip widths: lines 'width <id> <p/q>', default 1");
    auto* corpus = app.add_subcommand("corpus", "run the acceptance checks on the bundled dimers");
    corpus->add_option("dir", dir, "corpus directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    Session s(opt);
    int code = 0;
    try {
        if (*validate) code = cmd_validate(s, file);
        else if (*mir) code = cmd_mirror(s, file);
        else if (*matchings) code = cmd_matchings(s, file);
        else if (*polygon) code = cmd_polygon(s, file);
        else if (*consistent) code = cmd_consistent(s, file);
        else if (*path) code = cmd_path(s, file, word);
        else if (*gtl) code = cmd_gtl(s, file);
        else if (*mf_a) code = cmd_mf_arrow(s, file, arrow);
        else if (*mf_b) code = cmd_mf_band(s, file, entries, alpha);
        else if (*mf_r) code = cmd_mf_rep(s, file);
        else if (*tropical) code = cmd_tropical(s, file);
        else if (*stable) code = cmd_stable(s, file);
        else if (*reduce) {
            if (opt.node < 0 && opt.rep.empty()) throw UsageError("reduce needs --rep <file> or --node <k> --weights <file>");
            code = cmd_reduce(s, file);
        } else if (*strebel) code = cmd_strebel(s, file);
        else if (*corpus) code = cmd_corpus(s, dir);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        // validation failures, with the witness in the message
        if (opt.json) std::cout << Json{{"error", e.what()}}.dump(2) << "\n";
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    if (opt.json) std::cout << s.report.dump(2) << "\n";
    else std::cout << s.text.str();
    return code;
}
