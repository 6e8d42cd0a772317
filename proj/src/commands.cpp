#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "moc/basis.hpp"
#include "moc/charops.hpp"
#include "moc/ilp.hpp"
#include "moc/improve.hpp"
#include "moc/session.hpp"

namespace moc {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

using File = Workspace::File;

// ---- proof events as JSON ----

json big(const BigInt& n) { return n.get_str(); }
json vec_json(const Vec& v) {
    json a = json::array();
    for (const auto& x : v) a.push_back(big(x));
    return a;
}
json mat_json(const IntMatrix& m) {
    json a = json::array();
    for (std::size_t i = 0; i < m.rows; ++i) a.push_back(vec_json(m.row(i)));
    return a;
}
Vec vec_from(const json& j) {
    Vec v;
    for (const auto& x : j) v.push_back(parse_bigint(x.get<std::string>()));
    return v;
}
IntMatrix mat_from(const json& j, std::size_t cols) {
    std::vector<Vec> rows;
    for (const auto& r : j) rows.push_back(vec_from(r));
    return IntMatrix::from_rows(rows, cols);
}

json event_json(const ProofEvent& e) {
    json j;
    j["kind"] = kind_name(e.kind);
    j["inputs"] = e.inputs;
    j["conclusion"] = e.conclusion;
    j["ilps"] = json::array();
    for (const auto& p : e.ilps) j["ilps"].push_back({{"a", mat_json(p.a)}, {"b", vec_json(p.b)}, {"c", vec_json(p.c)}});
    j["uppers"] = json::array();
    for (const auto& u : e.uppers) j["uppers"].push_back(vec_json(u));
    j["values"] = vec_json(e.values);
    j["rows"] = json::array();
    for (const auto& r : e.rows) j["rows"].push_back(vec_json(r));
    return j;
}

ProofEvent event_from(const json& j) {
    ProofEvent e;
    using K = ProofEvent::Kind;
    bool found = false;
    for (K k : {K::atom_pim, K::pim_test, K::irr_test, K::subsum_test, K::subtract, K::triangular, K::split, K::prune,
                K::parity})
        if (kind_name(k) == j.at("kind").get<std::string>()) {
            e.kind = k;
            found = true;
        }
    if (!found) throw FormatError("unknown proof event kind");
    e.inputs = j.at("inputs").get<std::vector<std::string>>();
    e.conclusion = j.at("conclusion").get<std::string>();
    for (const auto& p : j.at("ilps")) {
        IlpProblem q;
        q.c = vec_from(p.at("c"));
        q.b = vec_from(p.at("b"));
        q.a = mat_from(p.at("a"), q.c.size());
        e.ilps.push_back(std::move(q));
    }
    for (const auto& u : j.at("uppers")) e.uppers.push_back(vec_from(u));
    e.values = vec_from(j.at("values"));
    for (const auto& r : j.at("rows")) e.rows.push_back(vec_from(r));
    return e;
}

// ---- workspace model ----

struct Origin {
    std::string name;  // "-" when the character has no name of its own
    std::vector<std::string> parents;
    std::string how;
};

std::vector<long> ids_of(const IntMatrix& m) {
    std::vector<long> v;
    for (std::size_t j = 0; j < m.cols; ++j) v.push_back(m(0, j).get_si());
    return v;
}

IntMatrix ids_matrix(const std::vector<long>& v) {
    IntMatrix m(v.empty() ? 0 : 1, v.size());
    for (std::size_t j = 0; j < v.size(); ++j) m(0, j) = v[j];
    return m;
}

std::string join(const std::vector<std::string>& v, const std::string& sep) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? sep : "") + v[i];
    return s;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep))
        if (!cur.empty()) out.push_back(cur);
    return out;
}

struct Model {
    Workspace& ws;
    std::vector<std::string> meta;
    std::vector<long> block_of;  // per table row, 1-based
    std::vector<std::size_t> bs0;
    IntMatrix cf, s, x0;
    std::vector<long> ps_ids;
    std::vector<long> pims, irrs;  // flags per PS / BS0 position
    std::vector<std::string> bs_names;
    IntMatrix bras;
    std::vector<long> bras_ids;
    IntMatrix proj, proj_ps;
    std::vector<long> proj_ids, proj_ps_ids;
    std::map<long, Origin> bras_origin, proj_origin;
    TablePtr table;

    explicit Model(Workspace& w) : ws(w) {}

    void load() {
        if (!ws.initialized())
            throw DomainError("no workspace for " + ws.group() + " mod " + std::to_string(ws.prime()) + "; run init");
        const LabeledFile& m = ws.file(File::main);
        const std::string mn = ws.path(File::main).filename().string();
        meta = m.text(label_meta, mn);
        for (long r : ids_of(m.matrix(label_blocks, mn))) block_of.push_back(r);
        for (long r : ids_of(m.matrix(label_bs0, mn))) bs0.push_back(static_cast<std::size_t>(r - 1));
        cf = m.matrix(label_class_functions, mn);
        s = m.matrix(label_relations, mn);
        x0 = m.matrix(label_projectives, mn);
        ps_ids = ids_of(m.matrix(label_ps_ids, mn));
        pims = ids_of(m.matrix(label_known_pims, mn));
        irrs = ids_of(m.matrix(label_known_irr, mn));
        bs_names = m.text(label_bs_names, mn);
        const LabeledFile& b = ws.file(File::bras);
        const std::string bn = ws.path(File::bras).filename().string();
        bras = b.matrix(label_brauer, bn);
        bras_ids = ids_of(b.matrix(label_brauer_ids, bn));
        bras_origin = origins(b.text(label_brauer_origin, bn));
        const LabeledFile& p = ws.file(File::proj);
        const std::string pn = ws.path(File::proj).filename().string();
        proj = p.matrix(label_projectives, pn);
        proj_ids = ids_of(p.matrix(label_ps_ids, pn));
        proj_ps = p.matrix(label_proj_ps, pn);
        proj_ps_ids = ids_of(p.matrix(label_proj_ps_ids, pn));
        proj_origin = origins(p.text(label_proj_origin, pn));
    }

    void save() {
        LabeledFile& m = ws.file(File::main);
        m.put(LabeledRecord::of(label_meta, meta));
        m.put(LabeledRecord::of(label_blocks, ids_matrix(block_of)));
        std::vector<long> b1;
        for (auto r : bs0) b1.push_back(static_cast<long>(r) + 1);
        m.put(LabeledRecord::of(label_bs0, ids_matrix(b1)));
        m.put(LabeledRecord::of(label_class_functions, cf));
        m.put(LabeledRecord::of(label_relations, s));
        m.put(LabeledRecord::of(label_projectives, x0));
        m.put(LabeledRecord::of(label_ps_ids, ids_matrix(ps_ids)));
        m.put(LabeledRecord::of(label_known_pims, ids_matrix(pims)));
        m.put(LabeledRecord::of(label_known_irr, ids_matrix(irrs)));
        m.put(LabeledRecord::of(label_bs_names, bs_names));
        LabeledFile& b = ws.file(File::bras);
        b.put(LabeledRecord::of(label_brauer, bras));
        b.put(LabeledRecord::of(label_brauer_ids, ids_matrix(bras_ids)));
        b.put(LabeledRecord::of(label_brauer_origin, origin_lines(bras_origin, "B")));
        LabeledFile& p = ws.file(File::proj);
        p.put(LabeledRecord::of(label_projectives, proj));
        p.put(LabeledRecord::of(label_ps_ids, ids_matrix(proj_ids)));
        p.put(LabeledRecord::of(label_proj_ps, proj_ps));
        p.put(LabeledRecord::of(label_proj_ps_ids, ids_matrix(proj_ps_ids)));
        p.put(LabeledRecord::of(label_proj_origin, origin_lines(proj_origin, "P")));
    }

    static std::map<long, Origin> origins(const std::vector<std::string>& lines) {
        std::map<long, Origin> out;
        for (const auto& l : lines) {
            std::istringstream in(l);
            std::string id, name, parents;
            in >> id >> name >> parents;
            if (id.size() < 2 || parents.empty()) throw FormatError("bad provenance line '" + l + "'");
            Origin o{name, {}, ""};
            if (parents != "-") o.parents = split(parents, ',');
            std::getline(in, o.how);
            if (!o.how.empty() && o.how[0] == ' ') o.how.erase(0, 1);
            out[std::stol(id.substr(1))] = o;
        }
        return out;
    }

    static std::vector<std::string> origin_lines(const std::map<long, Origin>& m, const std::string& prefix) {
        std::vector<std::string> out;
        for (const auto& [id, o] : m)
            out.push_back(prefix + std::to_string(id) + " " + o.name + " " +
                          (o.parents.empty() ? std::string("-") : join(o.parents, ",")) + " " + o.how);
        return out;
    }

    std::string meta_value(const std::string& key) const {
        for (const auto& l : meta)
            if (l.rfind(key + " ", 0) == 0) return l.substr(key.size() + 1);
        return {};
    }
    void set_meta(const std::string& key, const std::string& value) {
        for (auto& l : meta)
            if (l.rfind(key + " ", 0) == 0) {
                l = key + " " + value;
                return;
            }
        meta.push_back(key + " " + value);
    }

    bool has_table() const { return !meta_value("table").empty(); }
    const MocTable& tab() {
        if (!table) {
            if (!has_table()) throw NotFound("no character table imported for " + ws.group());
            table = std::make_shared<MocTable>(load_table(ws.table_path().string()));
        }
        return *table;
    }
    std::size_t size() const { return x0.rows ? x0.rows : bs0.size(); }
    std::size_t basic_size() const { return bs_names.empty() ? bs0.size() : bs_names.size(); }
    void need_basic_set() const {
        if (basic_size() == 0) throw NotFound("label 30900 not found in " + ws.path(File::main).filename().string() + "; run basicset");
    }
    void need_ps() const {
        if (x0.rows == 0) throw NotFound("label 30700 not found in " + ws.path(File::main).filename().string() + "; run certify");
    }

    long next_proj_id() const {
        long id = 0;
        for (long x : proj_ids) id = std::max(id, x);
        for (long x : proj_ps_ids) id = std::max(id, x);
        return id + 1;
    }
    long add_proj(const Vec& irr, Origin o) {
        long id = next_proj_id();
        if (proj.cols == 0 && proj.rows == 0) proj = IntMatrix(0, irr.size());
        proj.append_row(irr);
        proj_ids.push_back(id);
        proj_origin[id] = std::move(o);
        return id;
    }
    long add_proj_ps(const Vec& c, Origin o) {
        long id = next_proj_id();
        if (proj_ps.rows == 0) proj_ps = IntMatrix(0, c.size());
        proj_ps.append_row(c);
        proj_ps_ids.push_back(id);
        proj_origin[id] = std::move(o);
        return id;
    }
    long add_bras(const Vec& c, Origin o) {
        long id = bras_ids.empty() ? 1 : bras_ids.back() + 1;
        if (bras.rows == 0) bras = IntMatrix(0, c.size());
        bras.append_row(c);
        bras_ids.push_back(id);
        bras_origin[id] = std::move(o);
        return id;
    }

    std::optional<Vec> proj_irr(long id) const {
        for (std::size_t r = 0; r < proj_ids.size(); ++r)
            if (proj_ids[r] == id) return proj.row(r);
        return std::nullopt;
    }
    std::optional<Vec> proj_in_ps(long id) const {
        for (std::size_t r = 0; r < proj_ps_ids.size(); ++r)
            if (proj_ps_ids[r] == id) return proj_ps.row(r);
        return std::nullopt;
    }
    bool has_proj(long id) const { return proj_origin.count(id) > 0; }

    std::string proj_name(long id) const {
        auto it = proj_origin.find(id);
        if (it != proj_origin.end() && it->second.name != "-") return it->second.name;
        return "P" + std::to_string(id);
    }
    std::string bras_name(long id) const {
        auto it = bras_origin.find(id);
        if (it != bras_origin.end() && it->second.name != "-") return it->second.name;
        return "B" + std::to_string(id);
    }

    // PS coordinates, v = c X0 over PA0.
    Vec ps_coords(long id) const {
        if (auto c = proj_in_ps(id)) return *c;
        auto irr = proj_irr(id);
        if (!irr) throw NotFound("no projective P" + std::to_string(id));
        Vec pa0;
        for (auto r : bs0) pa0.push_back((*irr)[r]);
        auto inv = unimodular_inverse(x0);
        if (!inv) throw DomainError("X0 is not unimodular");
        return row_times(pa0, *inv);
    }

    int block_of_ps(std::size_t j) const {
        if (bs0.empty() || block_of.empty()) return 1;
        for (std::size_t i = 0; i < x0.cols; ++i)
            if (x0(j, i) != 0) return static_cast<int>(block_of[bs0[i]]);
        return 1;
    }

    std::vector<Vec> bs0_rows() const {
        std::vector<Vec> rows;
        for (std::size_t i = 0; i < cf.rows; ++i) rows.push_back(cf.row(i));
        return rows;
    }
    ClassFunction brauer_cf(const Vec& c) {
        const MocTable& t = tab();
        Vec x(t.width(), 0);
        for (std::size_t i = 0; i < c.size(); ++i)
            for (std::size_t k = 0; k < x.size(); ++k) x[k] += c[i] * cf(i, k);
        return ClassFunction{table, x, CharKind::brauer, ws.prime()};
    }
    ClassFunction irr_cf(const Vec& a) {
        const MocTable& t = tab();
        Vec x(t.width(), 0);
        for (std::size_t i = 0; i < a.size(); ++i)
            for (std::size_t k = 0; k < x.size(); ++k) x[k] += a[i] * t.rows[i][k];
        return ClassFunction{table, x, CharKind::ordinary, 0};
    }
    // A generalized Brauer character over BS0.
    Vec over_bs0(const ClassFunction& x) {
        need_basic_set();
        ClassFunction h = hat_restrict(x, ws.prime());
        auto c = irr_coefficients(h, bs0_rows());
        if (!c) throw DomainError("the character is not an integral combination of BS0");
        return *c;
    }
    Vec irr_of(const ClassFunction& x) {
        auto a = irr_coefficients(x, tab().rows);
        if (!a) throw DomainError("the class function is not a generalized character");
        return *a;
    }
};

// A character named on the command line: X.3 (by table label or row
// number), B7, P12, or a stored name.
struct Ref {
    enum class Kind { ordinary, brauer, projective } kind;
    long id;  // table row (0-based) or pool id
};

Ref resolve(Model& m, const std::string& tok) {
    auto number = [&](const std::string& s) -> std::optional<long> {
        if (s.empty() || !std::all_of(s.begin(), s.end(), ::isdigit)) return std::nullopt;
        return std::stol(s);
    };
    if (m.has_table()) {
        const auto& labels = m.tab().labels;
        for (std::size_t i = 0; i < labels.size(); ++i)
            if (labels[i] == tok) return {Ref::Kind::ordinary, static_cast<long>(i)};
        if (tok.rfind("X.", 0) == 0)
            if (auto n = number(tok.substr(2)); n && *n >= 1 && static_cast<std::size_t>(*n) <= labels.size())
                return {Ref::Kind::ordinary, *n - 1};
    }
    if (tok.size() > 1 && tok[0] == 'B')
        if (auto n = number(tok.substr(1)); n && m.bras_origin.count(*n)) return {Ref::Kind::brauer, *n};
    if (tok.size() > 1 && tok[0] == 'P')
        if (auto n = number(tok.substr(1)); n && m.has_proj(*n)) return {Ref::Kind::projective, *n};
    if (auto n = number(tok); n && m.has_proj(*n)) return {Ref::Kind::projective, *n};
    for (const auto& [id, o] : m.proj_origin)
        if (o.name == tok) return {Ref::Kind::projective, id};
    for (const auto& [id, o] : m.bras_origin)
        if (o.name == tok) return {Ref::Kind::brauer, id};
    throw DomainError("unknown character '" + tok + "'");
}

std::string ref_text(Model& m, const Ref& r) {
    switch (r.kind) {
    case Ref::Kind::ordinary: return m.tab().labels[r.id];
    case Ref::Kind::brauer: return "B" + std::to_string(r.id);
    case Ref::Kind::projective: return "P" + std::to_string(r.id);
    }
    return {};
}

std::size_t ps_position(const Model& m, long id) {
    for (std::size_t j = 0; j < m.ps_ids.size(); ++j)
        if (m.ps_ids[j] == id) return j;
    throw DomainError("P" + std::to_string(id) + " is not in the basic set of projectives");
}

std::string pool_range(const std::string& what, long first, long last, const std::string& how) {
    return fmt::format("{} no {:5d} - {:4d} obtained by:\n{}", what, first, last, how);
}

std::string indecomposable_line(long nr, int block, const std::string& because) {
    return fmt::format("projective  nr {:5d} in block {:3d} is indecomposable,\n  because {}", nr, block, because);
}

// ---- improve frame ----

struct Frame {
    ImproveContext ctx;
    std::vector<long> p_ids;
    IntMatrix u_old;
};

Frame frame(Model& m) {
    m.need_ps();
    Frame f;
    auto& ctx = f.ctx;
    ctx.state.u = transpose(m.x0);
    for (std::size_t j = 0; j < m.pims.size(); ++j)
        if (m.pims[j]) ctx.state.known_pims.insert(j);
    for (std::size_t j = 0; j < m.irrs.size(); ++j)
        if (m.irrs[j]) ctx.state.known_irreducibles.insert(j);
    ctx.b = m.bras.rows ? m.bras : IntMatrix(0, m.size());
    for (long id : m.bras_ids) ctx.b_names.push_back(m.bras_name(id));
    for (long id : m.ps_ids) ctx.ps_names.push_back(m.proj_name(id));
    if (!m.bs_names.empty())
        ctx.bs_names = m.bs_names;
    else
        for (auto r : m.bs0) ctx.bs_names.push_back(m.tab().labels[r]);
    ctx.p = IntMatrix(0, m.size());
    std::set<long> ps(m.ps_ids.begin(), m.ps_ids.end());
    std::vector<long> all = m.proj_ps_ids;
    all.insert(all.end(), m.proj_ids.begin(), m.proj_ids.end());
    std::sort(all.begin(), all.end());
    for (long id : all) {
        if (ps.count(id)) continue;
        Vec c = m.ps_coords(id);
        if (is_zero(c)) continue;
        ctx.p.append_row(c);
        ctx.p_names.push_back(m.proj_name(id));
        f.p_ids.push_back(id);
    }
    ctx.validate();
    f.u_old = ctx.state.u;
    return f;
}

std::string combination(const Model& m, const Vec& t) {
    std::string s;
    for (std::size_t j = 0; j < t.size(); ++j) {
        if (t[j] == 0) continue;
        BigInt a = abs(t[j]);
        s += s.empty() ? (t[j] < 0 ? "-" : "") : (t[j] < 0 ? " - " : " + ");
        if (a != 1) s += a.get_str() + "*";
        s += "P" + std::to_string(m.ps_ids[j]);
    }
    return s;
}

// Writes PS changes made by an improve step back to the model. New
// members are stored over Irr when every old member they come from is.
void absorb(Model& m, Frame& f, const std::string& how) {
    const IntMatrix& u_new = f.ctx.state.u;
    std::vector<long> pims;
    for (std::size_t j = 0; j < m.size(); ++j) pims.push_back(f.ctx.state.known_pims.count(j) ? 1 : 0);
    std::vector<long> irrs;
    for (std::size_t j = 0; j < m.size(); ++j) irrs.push_back(f.ctx.state.known_irreducibles.count(j) ? 1 : 0);
    m.pims = pims;
    m.irrs = irrs;
    if (u_new == f.u_old) return;
    auto inv_old = unimodular_inverse(f.u_old);
    if (!inv_old) throw DomainError("X0 is not unimodular");
    IntMatrix t = *inv_old * u_new;
    auto t_inv = unimodular_inverse(t);
    if (!t_inv) throw DomainError("the new projectives do not form a basic set");
    for (std::size_t r = 0; r < m.proj_ps.rows; ++r) m.proj_ps.set_row(r, times_col(*t_inv, m.proj_ps.row(r)));
    const std::size_t s = m.size();
    std::vector<long> new_ids = m.ps_ids;
    for (std::size_t k = 0; k < s; ++k) {
        Vec col = t.col(k);
        Vec e(s, 0);
        e[k] = 1;
        if (col == e) continue;
        std::vector<std::string> parents;
        bool over_irr = true;
        for (std::size_t j = 0; j < s; ++j)
            if (col[j] != 0) {
                parents.push_back("P" + std::to_string(m.ps_ids[j]));
                if (!m.proj_irr(m.ps_ids[j])) over_irr = false;
            }
        Origin o{"-", parents, how + ": " + combination(m, col)};
        if (over_irr) {
            Vec irr(m.proj.cols, 0);
            for (std::size_t j = 0; j < s; ++j)
                if (col[j] != 0) irr = irr + scaled(*m.proj_irr(m.ps_ids[j]), col[j]);
            new_ids[k] = m.add_proj(irr, o);
        } else {
            new_ids[k] = m.add_proj_ps(e, o);
        }
    }
    m.ps_ids = new_ids;
    m.x0 = transpose(u_new);
    f.u_old = u_new;
}

void note_events(Model& m, const std::vector<ProofEvent>& events) {
    for (const auto& e : events) m.ws.note("event " + event_json(e).dump());
}

// ---- commands ----

struct Io {
    std::ostream& out;
    std::ostream& err;
};

int cmd_init(Workspace& ws, bool legacy, const std::vector<std::string>& argv) {
    if (ws.initialized()) throw DomainError("workspace for " + ws.group() + " mod " + std::to_string(ws.prime()) + " exists");
    Model m(ws);
    m.meta = {"group " + ws.group(), "prime " + std::to_string(ws.prime())};
    m.save();
    ws.set_codec(legacy ? Codec::legacy : Codec::text);
    ws.note("workspace for " + ws.group() + " modulo " + std::to_string(ws.prime()));
    ws.commit(argv);
    return 0;
}

int cmd_import_table(Workspace& ws, const std::string& path, Io io, const std::vector<std::string>& argv) {
    Model m(ws);
    m.load();
    if (m.has_table()) throw DomainError("a table is already imported");
    if (!m.bs_names.empty()) throw DomainError("the workspace holds imported basic sets");
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DomainError("cannot read " + path);
    std::ostringstream s;
    s << in.rdbuf();
    std::istringstream parse(s.str());
    auto t = std::make_shared<MocTable>(read_table(parse));
    if (t->prime != 0) throw DomainError("import-table needs an ordinary table");
    if (t->group_order % ws.prime() != 0) throw DomainError("the prime does not divide the group order");
    ws.stage_table(s.str());
    m.table = t;
    m.set_meta("table", t->name);
    auto blocks = block_distribution(*t, ws.prime());
    m.block_of.assign(t->rows.size(), 0);
    for (std::size_t b = 0; b < blocks.size(); ++b)
        for (auto r : blocks[b]) m.block_of[r] = static_cast<long>(b) + 1;
    m.proj = IntMatrix(0, t->rows.size());
    m.save();
    ws.note(fmt::format("table {} imported: {} characters in {} blocks", t->name, t->rows.size(), blocks.size()));
    ws.commit(argv);
    io.out << t->name << ": " << t->rows.size() << " characters, " << blocks.size() << " blocks\n";
    return 0;
}

int cmd_blocks(Workspace& ws, Io io) {
    Model m(ws);
    m.load();
    const MocTable& t = m.tab();
    auto blocks = block_distribution(t, ws.prime());
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        std::vector<std::string> names;
        for (auto r : blocks[b]) names.push_back(t.labels[r]);
        int d = defect_zero(t, ws.prime(), blocks[b][0]).block_defect;
        io.out << fmt::format("block {:3d}: {}  defect {}", b + 1, join(names, " "), d) << '\n';
    }
    return 0;
}

// Greedy rank selection, then swaps until the set is certified basic.
std::optional<std::vector<std::size_t>> search_basic(const std::vector<Vec>& hat, int depth) {
    std::vector<std::size_t> chosen;
    for (std::size_t r = 0; r < hat.size(); ++r) {
        std::vector<Vec> rows;
        for (auto c : chosen) rows.push_back(hat[c]);
        std::size_t before = rows.empty() ? 0 : rank(IntMatrix::from_rows(rows));
        rows.push_back(hat[r]);
        if (rank(IntMatrix::from_rows(rows)) > before) chosen.push_back(r);
    }
    auto basic = [&](const std::vector<std::size_t>& c) { return certify_brauer_basic(hat, c).basic; };
    if (basic(chosen)) return chosen;
    std::function<std::optional<std::vector<std::size_t>>(std::vector<std::size_t>, int)> go =
        [&](std::vector<std::size_t> c, int d) -> std::optional<std::vector<std::size_t>> {
        if (d == 0) return std::nullopt;
        for (std::size_t i = 0; i < c.size(); ++i)
            for (std::size_t r = 0; r < hat.size(); ++r) {
                if (std::find(c.begin(), c.end(), r) != c.end()) continue;
                auto next = c;
                next[i] = r;
                std::sort(next.begin(), next.end());
                std::vector<Vec> rows;
                for (auto x : next) rows.push_back(hat[x]);
                if (rank(IntMatrix::from_rows(rows)) < next.size()) continue;
                if (basic(next)) return next;
                if (auto deeper = go(next, d - 1)) return deeper;
            }
        return std::nullopt;
    };
    return go(chosen, depth);
}

int cmd_basicset(Workspace& ws, int depth, Io io, const std::vector<std::string>& argv) {
    Model m(ws);
    m.load();
    const MocTable& t = m.tab();
    if (!m.bs0.empty()) throw DomainError("a special basic set is already stored under 30900");
    const long p = ws.prime();
    auto blocks = block_distribution(t, p);
    std::vector<Vec> hat_all;
    for (std::size_t r = 0; r < t.rows.size(); ++r) hat_all.push_back(hat_restrict(ClassFunction::row(m.table, r), p).coeffs);
    std::vector<std::size_t> bs0;
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        std::vector<Vec> hat;
        for (auto r : blocks[b]) hat.push_back(hat_all[r]);
        auto found = search_basic(hat, depth);
        if (!found) throw Inconclusive(fmt::format("no basic set found in block {} at depth {}", b + 1, depth));
        for (auto c : *found) bs0.push_back(blocks[b][c]);
    }
    std::sort(bs0.begin(), bs0.end());
    std::vector<Vec> basis;
    for (auto r : bs0) basis.push_back(hat_all[r]);
    m.bs0 = bs0;
    m.cf = IntMatrix::from_rows(basis, t.width());
    m.s = IntMatrix(0, bs0.size());
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        auto c = irr_coefficients(ClassFunction{m.table, hat_all[r], CharKind::brauer, p}, basis);
        if (!c) throw DomainError("restricted character " + t.labels[r] + " is not integral over the basic set");
        m.s.append_row(*c);
    }
    m.x0 = IntMatrix(0, 0);
    m.irrs.assign(bs0.size(), 0);
    long first = m.next_proj_id(), last = first - 1;
    for (std::size_t r = 0; r < t.rows.size(); ++r)
        if (defect_zero(t, p, r).defect_zero) {
            Vec e(t.rows.size(), 0);
            e[r] = 1;
            last = m.add_proj(e, Origin{"-", {t.labels[r]}, "defect 0 character " + t.labels[r]});
        }
    if (last >= first) ws.note(pool_range("projectives", first, last, "defect 0 characters"));
    ws.note("relations stored under 30550");
    long bfirst = m.bras_ids.empty() ? 1 : m.bras_ids.back() + 1;
    for (std::size_t r = 0; r < t.rows.size(); ++r)
        m.add_bras(m.s.row(r), Origin{"-", {t.labels[r]}, t.labels[r] + " restricted"});
    ws.note(pool_range("Brauer characters", bfirst, m.bras_ids.back(), "ordinary characters restricted to p-regular classes"));
    std::vector<std::string> names;
    for (auto r : bs0) names.push_back(t.labels[r]);
    ws.note(fmt::format("special basic set: {}", join(names, " ")));
    m.save();
    ws.commit(argv);
    io.out << "number of basic characters found is " << bs0.size() << "\n" << join(names, " ") << "\n";
    return 0;
}

Vec brauer_of_ordinary(Model& m, const Vec& irr) {
    m.need_basic_set();
    return row_times(irr, m.s);
}

// Stores a class function in the pool it belongs to.
std::string store(Model& m, const ClassFunction& x, const std::vector<std::string>& parents, const std::string& how) {
    m.tab();
    if (x.kind == CharKind::projective || (x.kind == CharKind::ordinary && is_virtual_projective(x, m.ws.prime()))) {
        Vec irr = m.irr_of(x);
        return "P" + std::to_string(m.add_proj(irr, Origin{"-", parents, how}));
    }
    Vec c = x.kind == CharKind::ordinary ? brauer_of_ordinary(m, m.irr_of(x)) : m.over_bs0(x);
    return "B" + std::to_string(m.add_bras(c, Origin{"-", parents, how}));
}

ClassFunction character(Model& m, const Ref& r) {
    switch (r.kind) {
    case Ref::Kind::ordinary:
        m.tab();
        return ClassFunction::row(m.table, static_cast<std::size_t>(r.id));
    case Ref::Kind::brauer: {
        for (std::size_t i = 0; i < m.bras_ids.size(); ++i)
            if (m.bras_ids[i] == r.id) return m.brauer_cf(m.bras.row(i));
        break;
    }
    case Ref::Kind::projective: {
        auto irr = m.proj_irr(r.id);
        if (!irr) throw DomainError("P" + std::to_string(r.id) + " is only known over PS");
        ClassFunction x = m.irr_cf(*irr);
        x.kind = CharKind::projective;
        x.p = m.ws.prime();
        return x;
    }
    }
    throw DomainError("character not found");
}

int cmd_tensor(Workspace& ws, bool defect0, const std::vector<std::string>& factors, Io io,
               const std::vector<std::string>& argv) {
    Model m(ws);
    m.load();
    const MocTable& t = m.tab();
    const long p = ws.prime();
    if (defect0) {
        if (!factors.empty()) throw FormatError("--defect0 takes no factors");
        std::vector<std::size_t> d0;
        for (std::size_t r = 0; r < t.rows.size(); ++r)
            if (defect_zero(t, p, r).defect_zero) d0.push_back(r);
        long first = m.next_proj_id(), last = first - 1;
        for (std::size_t i = 0; i < t.rows.size(); ++i)
            for (auto d : d0) {
                ClassFunction x = tensor(ClassFunction::row(m.table, i), ClassFunction::row(m.table, d));
                last = m.add_proj(m.irr_of(x), Origin{"-", {t.labels[i], t.labels[d]}, t.labels[i] + " (x) " + t.labels[d]});
            }
        if (last >= first)
            ws.note(pool_range("projectives", first, last,
                               "tensoring ordinaries with defect 0 characters\noption:1:all ordinaries tensor all defect 0 characters"));
        io.out << (last - first + 1) << " projectives\n";
    } else {
        if (factors.size() != 2) throw FormatError("tensor needs two factors or --defect0");
        Ref a = resolve(m, factors[0]), b = resolve(m, factors[1]);
        ClassFunction x = tensor(character(m, a), character(m, b));
        if (a.kind == Ref::Kind::projective || b.kind == Ref::Kind::projective) {
            x.kind = CharKind::projective;
            x.p = p;
        } else if (a.kind == Ref::Kind::brauer || b.kind == Ref::Kind::brauer) {
            x.kind = CharKind::brauer;
            x.p = p;
        }
        std::string id = store(m, x, {ref_text(m, a), ref_text(m, b)}, ref_text(m, a) + " (x) " + ref_text(m, b));
        ws.note(id + " obtained by:\ntensoring " + ref_text(m, a) + " with " + ref_text(m, b));
        io.out << id << "\n";
    }
    m.save();
    ws.commit(argv);
    return 0;
}

int cmd_transfer(Workspace& ws, Direction dir, const std::string& table_path, const std::string& fusion_path,
                 const std::vector<std::string>& chars, Io io, const std::vector<std::string>& argv) {
    Model m(ws);
    m.load();
    m.tab();
    auto other = std::make_shared<MocTable>(load_table(table_path));
    std::ifstream in(fusion_path);
    if (!in) throw DomainError("cannot read " + fusion_path);
    FusionMap f = dir == Direction::induce ? read_fusion(in, other, m.table) : read_fusion(in, m.table, other);
    std::vector<std::size_t> rows;
    for (const auto& c : chars) {
        if (c == "all") {
            for (std::size_t r = 0; r < other->rows.size(); ++r) rows.push_back(r);
            continue;
        }
        auto it = std::find(other->labels.begin(), other->labels.end(), c);
        if (it == other->labels.end()) throw DomainError("no character " + c + " in " + other->name);
        rows.push_back(static_cast<std::size_t>(it - other->labels.begin()));
    }
    const std::string verb = dir == Direction::induce ? "induced from " : "restricted from ";
    std::vector<std::string> ids;
    for (auto r : rows) {
        ClassFunction x = ClassFunction::row(other, r);
        bool projective = defect_zero(*other, ws.prime(), r).defect_zero;
        ClassFunction y = transfer(x, f, dir);
        if (projective) {
            y.kind = CharKind::projective;
            y.p = ws.prime();
        }
        ids.push_back(store(m, y, {other->name + ":" + other->labels[r]}, verb + other->name + " " + other->labels[r]));
    }
    ws.note(join(ids, " ") + " obtained by:\n" + (dir == Direction::induce ? "inducing" : "restricting") + " characters of " +
            other->name);
    m.save();
    ws.commit(argv);
    io.out << join(ids, " ") << "\n";
    return 0;
}

int cmd_symmetrize(Workspace& ws, const std::string& who, const std::string& partition, Io io,
                   const std::vector<std::string>& argv) {
    Model m(ws);
    m.load();
    m.tab();
    std::vector<int> lambda;
    for (const auto& part : split(partition, ',')) lambda.push_back(std::stoi(part));
    Ref r = resolve(m, who);
    if (r.kind == Ref::Kind::projective) throw DomainError("symmetrize takes ordinary or Brauer characters");
    ClassFunction x = character(m, r);
    ClassFunction y = symmetrize(x, lambda, r.kind == Ref::Kind::ordinary ? 0 : ws.prime());
    y.kind = r.kind == Ref::Kind::ordinary ? CharKind::ordinary : CharKind::brauer;
    std::string id = store(m, y, {ref_text(m, r)}, ref_text(m, r) + " symmetrized by (" + partition + ")");
    ws.note(id + " obtained by:\nsymmetrizing " + ref_text(m, r) + " with partition (" + partition + ")");
    m.save();
    ws.commit(argv);
    io.out << id << "\n";
    return 0;
}

// Columns chosen for one block: a set of pool characters whose PA0
// coordinates have determinant +-1.
int cmd_certify(Workspace& ws, const std::vector<std::string>& chosen, int depth, Io io,
                const std::vector<std::string>& argv) {
    Model m(ws);
    m.load();
    m.need_basic_set();
    if (m.bs0.empty()) throw DomainError("certify needs a table-derived basic set");
    const MocTable& t = m.tab();
    const std::size_t s = m.bs0.size();
    auto pa0 = [&](const Vec& irr) {
        Vec v;
        for (auto r : m.bs0) v.push_back(irr[r]);
        return v;
    };
    std::vector<long> ps;
    if (!chosen.empty()) {
        for (const auto& c : chosen) {
            Ref r = resolve(m, c);
            if (r.kind != Ref::Kind::projective || !m.proj_irr(r.id)) throw DomainError(c + " is not a projective over Irr");
            ps.push_back(r.id);
        }
    } else {
        int blocks = 0;
        for (long b : m.block_of) blocks = std::max<int>(blocks, static_cast<int>(b));
        for (int b = 1; b <= blocks; ++b) {
            std::vector<std::size_t> pos;  // BS0 positions in the block
            for (std::size_t i = 0; i < s; ++i)
                if (m.block_of[m.bs0[i]] == b) pos.push_back(i);
            if (pos.empty()) continue;
            struct Cand {
                long source;
                Vec irr, at;
                BigInt degree;
                bool whole;
            };
            std::vector<Cand> cands;
            std::set<Vec> seen;
            for (std::size_t k = 0; k < m.proj_ids.size(); ++k) {
                Vec a = m.proj.row(k), comp(a.size(), 0);
                for (std::size_t r = 0; r < a.size(); ++r)
                    if (m.block_of[r] == b) comp[r] = a[r];
                if (is_zero(comp) || !seen.insert(comp).second) continue;
                Vec at;
                for (auto i : pos) at.push_back(comp[m.bs0[i]]);
                cands.push_back({m.proj_ids[k], comp, at, t.degree(m.irr_cf(comp).coeffs), comp == a});
            }
            std::stable_sort(cands.begin(), cands.end(), [](const Cand& x, const Cand& y) { return x.degree < y.degree; });
            std::vector<std::size_t> pick;
            auto mat = [&](const std::vector<std::size_t>& ix) {
                std::vector<Vec> rows;
                for (auto i : ix) rows.push_back(cands[i].at);
                return IntMatrix::from_rows(rows, pos.size());
            };
            for (std::size_t c = 0; c < cands.size() && pick.size() < pos.size(); ++c) {
                auto next = pick;
                next.push_back(c);
                if (rank(mat(next)) == next.size()) pick = next;
            }
            if (pick.size() < pos.size())
                throw Inconclusive(fmt::format("block {}: the projectives span rank {} < {}", b, pick.size(), pos.size()));
            BigInt d = abs(det(mat(pick)));
            for (int round = 0; round < depth && d != 1; ++round) {
                std::optional<std::vector<std::size_t>> best;
                BigInt best_d = d;
                for (std::size_t i = 0; i < pick.size(); ++i)
                    for (std::size_t c = 0; c < cands.size(); ++c) {
                        if (std::find(pick.begin(), pick.end(), c) != pick.end()) continue;
                        auto next = pick;
                        next[i] = c;
                        BigInt nd = abs(det(mat(next)));
                        if (nd != 0 && nd < best_d) {
                            best_d = nd;
                            best = next;
                        }
                    }
                if (!best) break;
                pick = *best;
                d = best_d;
            }
            if (d != 1) throw Inconclusive(fmt::format("block {}: best determinant {} at depth {}", b, d.get_str(), depth));
            for (auto c : pick) {
                const Cand& x = cands[c];
                long id = x.whole ? x.source
                                  : m.add_proj(x.irr, Origin{"-", {"P" + std::to_string(x.source)},
                                                             fmt::format("block {} part of P{}", b, x.source)});
                ps.push_back(id);
            }
        }
    }
    if (ps.size() != s) throw DomainError(fmt::format("{} projectives given for a basic set of size {}", ps.size(), s));
    IntMatrix x0(0, s);
    for (long id : ps) x0.append_row(pa0(*m.proj_irr(id)));
    PairCheck pc = certify_pair(transpose(x0));
    if (!pc.basic_pair) throw DomainError("not a basic set of projectives: det U = " + pc.det.get_str());
    m.x0 = x0;
    m.ps_ids = ps;
    m.pims.assign(s, 0);
    m.irrs.assign(s, 0);
    std::vector<std::string> nrs;
    for (long id : ps) nrs.push_back(std::to_string(id));
    ws.note(fmt::format("number of basic characters found is {:3d}\nnumbas= {}", s, join(nrs, " ")));
    ws.note("X0 stored under 30700");
    m.save();
    ws.commit(argv);
    io.out << "det U = " << pc.det.get_str() << "\nPS: " << join(nrs, " ") << "\n";
    return 0;
}

int cmd_atoms(Workspace& ws, Io io, const std::vector<std::string>& argv) {
    Model m(ws);
    m.load();
    m.need_ps();
    IntMatrix u = transpose(m.x0);
    std::size_t n = 0;
    for (auto j : detect_atom_pims(u)) {
        if (m.pims[j]) continue;
        m.pims[j] = 1;
        ws.note(indecomposable_line(m.ps_ids[j], m.block_of_ps(j), "it is an atom"));
        io.out << m.proj_name(m.ps_ids[j]) << " is a PIM\n";
        ++n;
    }
    for (auto i : detect_atom_irreducibles(u)) {
        if (m.irrs[i]) continue;
        m.irrs[i] = 1;
        int block = m.bs0.empty() || m.block_of.empty() ? 1 : static_cast<int>(m.block_of[m.bs0[i]]);
        long nr = m.bs0.empty() ? static_cast<long>(i) + 1 : static_cast<long>(m.bs0[i]) + 1;
        ws.note(fmt::format("Brauer character nr {:5d} in block {:3d} is irreducible,\n  because it is an atom", nr, block));
        ++n;
    }
    m.save();
    ws.commit(argv);
    io.out << n << " new conclusions\n";
    return 0;
}

std::size_t ps_arg(Model& m, const std::string& tok) {
    Ref r = resolve(m, tok);
    if (r.kind != Ref::Kind::projective) throw DomainError(tok + " is not a projective");
    return ps_position(m, r.id);
}

int cmd_improve(Workspace& ws, const std::string& what, const std::string& pim, const std::string& from,
                const std::string& ps, Io io, const std::vector<std::string>& argv) {
    Model m(ws);
    m.load();
    Frame f = frame(m);
    auto& ctx = f.ctx;
    int rc = 0;
    if (what == "pimtest") {
        auto proved = pim_test_all(ctx);
        std::set<std::size_t> done(proved.begin(), proved.end());
        std::size_t k = 0;
        for (auto j : proved) {
            const ProofEvent& e = ctx.log[k++];
            ws.note(indecomposable_line(m.ps_ids[j], m.block_of_ps(j),
                                        e.kind == ProofEvent::Kind::atom_pim
                                            ? "it is an atom"
                                            : "no proper part has nonnegative products with the Brauer characters"));
            ws.note("event " + event_json(e).dump());
            io.out << ctx.ps_name(j) << " is a PIM\n";
        }
        if (proved.empty()) ws.note("no further projective proved indecomposable");
        io.out << proved.size() << " projectives certified\n";
    } else if (what == "subtract") {
        std::size_t fpos = ps_arg(m, pim);
        Ref sig = resolve(m, from);
        if (sig.kind != Ref::Kind::projective) throw DomainError(from + " is not a projective");
        Vec sigma = m.ps_coords(sig.id);
        Subtraction sub = subtract_indecomposable(ctx, fpos, sigma);
        note_events(m, ctx.log);
        std::string phi = "P" + std::to_string(m.ps_ids[fpos]);
        if (sub.z == 0) {
            ws.note("nothing subtracted from P" + std::to_string(sig.id));
            io.out << "z = 0\n";
            rc = 3;
        } else {
            std::string how = fmt::format("P{} - {}*{}", sig.id, sub.z.get_str(), phi);
            ws.note(fmt::format("projective  nr {:5d} contains projective nr {} with multiplicity {},\n  because of the bits of the Brauer characters",
                                sig.id, m.ps_ids[fpos], sub.z.get_str()));
            auto it = std::find(m.ps_ids.begin(), m.ps_ids.end(), sig.id);
            if (it != m.ps_ids.end()) {
                std::size_t k = static_cast<std::size_t>(it - m.ps_ids.begin());
                Vec w(m.size(), 0);
                w[k] = 1;
                w[fpos] -= sub.z;
                replace_ps(ctx, k, w);
            } else {
                Origin o{"-", {"P" + std::to_string(sig.id), phi}, "subtract: " + how};
                auto a = m.proj_irr(sig.id), b = m.proj_irr(m.ps_ids[fpos]);
                if (a && b)
                    m.add_proj(*a - scaled(*b, sub.z), o);
                else
                    m.add_proj_ps(sub.reduced, o);
            }
            io.out << "z = " << sub.z.get_str() << "\n";
        }
    } else if (what == "triangular") {
        std::size_t n = triangular_reduce(ctx);
        note_events(m, ctx.log);
        ws.note(fmt::format("{} projectives replaced by smaller ones", n));
        io.out << n << " replacements\n";
    } else if (what == "split") {
        std::size_t i = ps_arg(m, ps);
        long old = m.ps_ids[i];
        Split sp = split_decomposable(ctx, i);
        if (!sp.split) {
            ws.note("P" + std::to_string(old) + " not split: " + sp.diagnostics);
            io.out << sp.diagnostics << "\n";
            rc = 3;
        } else {
            note_events(m, ctx.log);
            ws.note(fmt::format("projective  nr {:5d} is decomposable,\n  because it splits into parts compatible with the Brauer characters",
                                old));
            io.out << "split " << m.proj_name(old) << "\n";
        }
    } else if (what == "prune") {
        Prune pr = prune_essential(ctx);
        note_events(m, ctx.log);
        for (const auto& d : pr.discarded)
            ws.note(fmt::format("projective  nr {:5d} is superfluous,\n  because it is a nonnegative combination of the others",
                                f.p_ids[d.index]));
        std::vector<std::string> keep;
        for (auto e : pr.essential) keep.push_back("P" + std::to_string(f.p_ids[e]));
        io.out << "essential: " << join(keep, " ") << "\n";
        for (const auto& d : pr.discarded) io.out << "discarded: P" << f.p_ids[d.index] << "\n";
    } else if (what == "parity") {
        if (ws.prime() != 2) throw DomainError("the parity argument needs p = 2");
        const MocTable& t = m.tab();
        std::size_t trivial = t.rows.size();
        for (std::size_t r = 0; r < t.rows.size() && trivial == t.rows.size(); ++r)
            if (t.degree(t.rows[r]) == 1 && t.product(t.rows[r], t.rows[r]) == t.rows[r]) trivial = r;
        if (trivial == t.rows.size()) throw DomainError("no trivial character in the table");
        std::vector<std::size_t> block;
        for (std::size_t r = 0; r < t.rows.size(); ++r)
            if (m.block_of[r] == m.block_of[trivial]) block.push_back(r);
        std::vector<std::size_t> cols;
        for (std::size_t j = 0; j < m.size(); ++j)
            if (m.block_of_ps(j) == m.block_of[trivial] && m.proj_irr(m.ps_ids[j])) cols.push_back(j);
        IntMatrix proj(block.size(), cols.size());
        std::vector<BigInt> deg;
        std::vector<bool> real;
        for (std::size_t i = 0; i < block.size(); ++i) {
            deg.push_back(t.degree(t.rows[block[i]]));
            real.push_back(t.conjugate(t.rows[block[i]]) == t.rows[block[i]]);
            for (std::size_t c = 0; c < cols.size(); ++c) proj(i, c) = (*m.proj_irr(m.ps_ids[cols[c]]))[block[i]];
        }
        std::size_t triv_pos = static_cast<std::size_t>(std::find(block.begin(), block.end(), trivial) - block.begin());
        std::vector<ProofEvent> log;
        Parity par = fong_parity(proj, deg, real, triv_pos, 2, &log);
        note_events(m, log);
        if (!par.carrier || par.contained.empty()) {
            ws.note("no containment from the parity argument");
            io.out << "inconclusive\n";
            rc = 3;
        } else {
            std::size_t c = cols[*par.carrier], j = cols[par.contained[0]];
            long carrier = m.ps_ids[c], inner = m.ps_ids[j];
            Vec w(m.size(), 0);
            w[c] = 1;
            w[j] = -1;
            replace_ps(ctx, c, w);
            ctx.state.known_pims.insert(c);
            ws.note(fmt::format("projective  nr {:5d} contains projective nr {},\n  because of the parity of real characters", carrier,
                                inner));
            io.out << "P" << inner << " lies in P" << carrier << "\n";
        }
    } else {
        throw FormatError("unknown improve step " + what);
    }
    absorb(m, f, what);
    m.save();
    ws.commit(argv);
    return rc;
}

int cmd_import_basis(Workspace& ws, const std::string& path, Io io, const std::vector<std::string>& argv) {
    Model m(ws);
    m.load();
    if (m.has_table() || m.size()) throw DomainError("import-basis needs a workspace without table or basic sets");
    FixtureFile f = load_fixture(path);
    if (!f.keys.count("ps") || !f.keys.count("bs")) throw FormatError("fixture needs ps and bs lines");
    IntMatrix u = f.matrix("U").bind();
    const std::size_t s = u.rows;
    if (u.cols != s || f.keys.at("ps").size() != s || f.keys.at("bs").size() != s) throw FormatError("fixture sizes disagree");
    if (det(u) * det(u) != 1) throw DomainError("U is not unimodular");
    m.bs_names = f.keys.at("bs");
    m.x0 = transpose(u);
    m.proj_ps = IntMatrix(0, s);
    for (std::size_t j = 0; j < s; ++j) {
        Vec e(s, 0);
        e[j] = 1;
        m.ps_ids.push_back(m.add_proj_ps(e, Origin{f.keys.at("ps")[j], {}, "imported basic set member"}));
    }
    std::size_t np = 0, nb = 0;
    if (f.matrices.count("P")) {
        const auto& lm = f.matrix("P");
        IntMatrix p = lm.bind();
        for (std::size_t r = 0; r < p.rows; ++r, ++np) m.add_proj_ps(p.row(r), Origin{lm.labels[r], {}, "imported over PS"});
    }
    m.bras = IntMatrix(0, s);
    if (f.matrices.count("B")) {
        const auto& lm = f.matrix("B");
        IntMatrix b = lm.bind();
        for (std::size_t r = 0; r < b.rows; ++r, ++nb) m.add_bras(b.row(r), Origin{lm.labels[r], {}, "imported over BS"});
    }
    m.pims.assign(s, 0);
    m.irrs.assign(s, 0);
    ws.note(fmt::format("basic sets of size {} imported with {} projectives and {} Brauer characters", s, np, nb));
    m.save();
    ws.commit(argv);
    io.out << s << " basic characters\n";
    return 0;
}

int cmd_ilp(const std::string& path, const std::string& upper, bool brute, Io io) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot read " + path);
    IlpProblem p = read_problem(in);
    Vec up;
    for (const auto& x : split(upper, ',')) up.push_back(parse_bigint(x));
    if (!up.empty() && up.size() != p.c.size()) throw FormatError("--upper needs one bound per variable");
    if (brute && up.empty()) throw FormatError("--brute needs --upper");
    IlpOutcome r = brute ? brute_force_ilp(p, up) : up.empty() ? gomory_solve(p) : solve_bounded(p, up);
    using S = IlpOutcome::Status;
    switch (r.status) {
    case S::optimum: {
        io.out << "optimum " << r.value.get_str() << "\nx";
        for (const auto& x : r.x) io.out << ' ' << x.get_str();
        io.out << "\npivots " << r.pivots << "\n";
        return 0;
    }
    case S::infeasible: io.out << "infeasible\n"; return 0;
    case S::aborted: io.out << "aborted after " << r.pivots << " pivots\n"; return 3;
    }
    return 0;
}

int cmd_status(Workspace& ws, Io io) {
    Model m(ws);
    m.load();
    io.out << "group " << ws.group() << " prime " << ws.prime() << " codec "
           << (ws.codec() == Codec::legacy ? "legacy" : "text") << "\n";
    io.out << "table " << (m.has_table() ? m.meta_value("table") : "-") << "\n";
    io.out << "basic set " << m.basic_size() << ", Brauer pool " << m.bras_ids.size() << ", projective pool "
           << m.proj_ids.size() + m.proj_ps_ids.size() << "\n";
    for (std::size_t j = 0; j < m.ps_ids.size(); ++j)
        io.out << fmt::format("PS {:3d}  P{:<5d} {:<12} block {:3d}{}", j + 1, m.ps_ids[j], m.proj_name(m.ps_ids[j]),
                              m.block_of_ps(j), m.pims[j] ? "  PIM" : "")
               << "\n";
    return 0;
}

int cmd_trace(Workspace& ws, const std::string& who, Io io) {
    Model m(ws);
    m.load();
    std::function<void(const std::string&, int)> walk = [&](const std::string& id, int depth) {
        std::string pad(static_cast<std::size_t>(2 * depth), ' ');
        const std::map<long, Origin>* pool = nullptr;
        if (id.size() > 1 && (id[0] == 'P' || id[0] == 'B') && std::all_of(id.begin() + 1, id.end(), ::isdigit))
            pool = id[0] == 'P' ? &m.proj_origin : &m.bras_origin;
        if (!pool) {
            io.out << pad << id << ": ordinary character\n";
            return;
        }
        auto it = pool->find(std::stol(id.substr(1)));
        if (it == pool->end()) throw DomainError("no provenance record for " + id);
        const Origin& o = it->second;
        io.out << pad << id << (o.name != "-" ? " (" + o.name + ")" : "") << ": " << o.how << "\n";
        for (const auto& p : o.parents) walk(p, depth + 1);
    };
    Ref r = resolve(m, who);
    if (r.kind == Ref::Kind::ordinary) {
        io.out << m.tab().labels[r.id] << ": ordinary character\n";
        return 0;
    }
    walk(ref_text(m, r), 0);
    return 0;
}

int cmd_export(Workspace& ws, const std::string& what, Io io) {
    Model m(ws);
    m.load();
    m.need_ps();
    IntMatrix xt = transpose(m.x0);
    if (what == "bsinba") {
        write_matrix(io.out, xt);
    } else if (what == "bainbs" || what == "bratoms") {
        auto inv = unimodular_inverse(xt);
        if (!inv) throw DomainError("X0 is not unimodular");
        if (what == "bainbs") {
            write_matrix(io.out, *inv);
        } else {
            if (m.bs0.empty()) throw NotFound("label 30900 not found; Brauer atoms need class functions");
            write_matrix(io.out, *inv * m.cf);
        }
    } else {
        throw FormatError("unknown export " + what);
    }
    return 0;
}

int cmd_verify(Workspace& ws, Io io) {
    Model m(ws);
    m.load();
    std::ifstream in(ws.path(File::info));
    std::size_t n = 0, bad = 0;
    for (const auto& e : read_info(in))
        for (const auto& l : e.lines) {
            if (l.rfind("event ", 0) != 0) continue;
            ProofEvent ev = event_from(json::parse(l.substr(6)));
            ++n;
            if (!replay(ev)) {
                ++bad;
                io.out << "FAILED " << kind_name(ev.kind) << " " << join(ev.inputs, " ") << "\n";
            }
        }
    io.out << n << " proof steps, " << bad << " failed\n";
    return bad ? 1 : 0;
}

std::vector<std::string> strip_globals(const std::vector<std::string>& args) {
    std::vector<std::string> out;
    static const std::set<std::string> globals{"--group", "-g", "--prime", "-p", "--root"};
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (globals.count(args[i])) {
            ++i;
            continue;
        }
        if (args[i].rfind("--group=", 0) == 0 || args[i].rfind("--prime=", 0) == 0 || args[i].rfind("--root=", 0) == 0)
            continue;
        std::error_code ec;
        if (args[i].size() && args[i][0] != '-' && fs::is_regular_file(args[i], ec))
            out.push_back(fs::absolute(args[i]).lexically_normal().string());
        else
            out.push_back(args[i]);
    }
    return out;
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Modular character computations on a workspace of labelled files."};
    app.require_subcommand(1);
    std::string group, root;
    long prime = 0;
    app.add_option("--group,-g", group, "group name");
    app.add_option("--prime,-p", prime, "characteristic");
    app.add_option("--root", root, "workspace directory (default $MOC_WORKSPACE or .)");

    std::function<int()> action;
    Io io{out, err};
    const std::vector<std::string> logged = strip_globals(args);
    auto sub = [&](const std::string& name, const std::string& help) {
        auto* s = app.add_subcommand(name, help);
        s->fallthrough();
        return s;
    };
    auto root_dir = [&]() -> fs::path {
        if (!root.empty()) return root;
        if (const char* env = std::getenv("MOC_WORKSPACE")) return env;
        return fs::current_path();
    };
    auto open = [&](Workspace::Access a) {
        if (group.empty() || prime == 0) throw FormatError("--group and --prime are required");
        return std::make_unique<Workspace>(root_dir(), group, prime, a);
    };
    auto warn = [&](Workspace& ws) {
        for (const auto& w : ws.warnings) err << "warning: " << w << "\n";
    };
    auto mutating = [&](auto body) {
        return [&, body] {
            auto ws = open(Workspace::Access::write);
            int rc = body(*ws);
            warn(*ws);
            return rc;
        };
    };
    auto reading = [&](auto body) {
        return [&, body] {
            auto ws = open(Workspace::Access::read);
            int rc = body(*ws);
            warn(*ws);
            return rc;
        };
    };

    bool legacy = false;
    auto* init = sub("init", "create the workspace files");
    init->add_flag("--legacy", legacy, "write integers in the base 10^4 legacy encoding");
    init->callback([&] { action = mutating([&](Workspace& ws) { return cmd_init(ws, legacy, logged); }); });

    std::string file;
    auto* imp = sub("import-table", "copy an ordinary character table into the workspace");
    imp->add_option("file", file)->required();
    imp->callback([&] { action = mutating([&](Workspace& ws) { return cmd_import_table(ws, file, io, logged); }); });

    auto* impb = sub("import-basis", "start from given basic sets U, B, P");
    impb->add_option("file", file)->required();
    impb->callback([&] { action = mutating([&](Workspace& ws) { return cmd_import_basis(ws, file, io, logged); }); });

    sub("blocks", "print the p-blocks")->callback([&] { action = reading([&](Workspace& ws) { return cmd_blocks(ws, io); }); });

    int depth = 2;
    auto* bs = sub("basicset", "special basic set, relations and restricted characters");
    bs->add_option("--depth", depth, "swap depth of the search");
    bs->callback([&] { action = mutating([&](Workspace& ws) { return cmd_basicset(ws, depth, io, logged); }); });

    std::vector<std::string> names;
    auto* cert = sub("certify", "choose and certify a basic set of projectives");
    cert->add_option("--ps", names, "pool projectives to use")->delimiter(',');
    cert->add_option("--depth", depth, "swap rounds per block");
    cert->callback([&] { action = mutating([&](Workspace& ws) { return cmd_certify(ws, names, depth, io, logged); }); });

    bool defect0 = false;
    auto* ten = sub("tensor", "tensor products of characters");
    ten->add_flag("--defect0", defect0, "all ordinaries tensor all defect 0 characters");
    ten->add_option("factors", names);
    ten->callback([&] { action = mutating([&](Workspace& ws) { return cmd_tensor(ws, defect0, names, io, logged); }); });

    std::string table_file, fusion_file;
    for (auto [name, dir] : {std::pair{"induce", Direction::induce}, std::pair{"restrict", Direction::restrict}}) {
        auto* t = sub(name, std::string(name) + " characters along a fusion map");
        t->add_option("--table", table_file, "table of the other group")->required();
        t->add_option("--fusion", fusion_file, "fusion map file")->required();
        t->add_option("--char", names, "labels in the other table, or all")->required()->delimiter(',');
        Direction d = dir;
        t->callback([&, d] {
            action = mutating([&, d](Workspace& ws) { return cmd_transfer(ws, d, table_file, fusion_file, names, io, logged); });
        });
    }

    std::string who, partition;
    auto* sym = sub("symmetrize", "symmetrization of a character");
    sym->add_option("--char", who)->required();
    sym->add_option("--partition", partition)->required();
    sym->callback([&] { action = mutating([&](Workspace& ws) { return cmd_symmetrize(ws, who, partition, io, logged); }); });

    sub("atoms", "projectives and Brauer characters that are atoms")->callback([&] {
        action = mutating([&](Workspace& ws) { return cmd_atoms(ws, io, logged); });
    });

    auto* imp2 = sub("improve", "proof steps on the basic sets");
    imp2->require_subcommand(1);
    std::string pim, from, ps;
    for (const char* step : {"pimtest", "subtract", "triangular", "split", "prune", "parity"}) {
        auto* s = imp2->add_subcommand(step);
        s->fallthrough();
        std::string w = step;
        if (w == "subtract") {
            s->add_option("--pim", pim, "known PIM in PS")->required();
            s->add_option("--from", from, "projective to reduce")->required();
        }
        if (w == "split") s->add_option("--ps", ps, "member of PS")->required();
        s->callback([&, w] {
            action = mutating([&, w](Workspace& ws) { return cmd_improve(ws, w, pim, from, ps, io, logged); });
        });
    }
    imp2->fallthrough();

    std::string upper;
    bool brute = false;
    auto* ilp = sub("ilp", "integer linear programs");
    ilp->require_subcommand(1);
    auto* solve = ilp->add_subcommand("solve", "minimize c.x subject to A x <= b, x >= 0 integral");
    solve->add_option("file", file)->required();
    solve->add_option("--upper", upper, "comma separated bounds");
    solve->add_flag("--brute", brute, "exhaustive search inside --upper");
    solve->callback([&] { action = [&] { return cmd_ilp(file, upper, brute, io); }; });

    sub("status", "summary of the workspace")->callback([&] { action = reading([&](Workspace& ws) { return cmd_status(ws, io); }); });

    auto* tr = sub("trace", "generation chain of a character");
    tr->add_option("id", who)->required();
    tr->callback([&] { action = reading([&](Workspace& ws) { return cmd_trace(ws, who, io); }); });

    std::string what;
    auto* ex = sub("export", "bsinba, bainbs or bratoms matrices");
    ex->add_option("matrix", what)->required()->check(CLI::IsMember({"bsinba", "bainbs", "bratoms"}));
    ex->callback([&] { action = reading([&](Workspace& ws) { return cmd_export(ws, what, io); }); });

    sub("verify", "check every proof step in the info log")->callback([&] {
        action = reading([&](Workspace& ws) { return cmd_verify(ws, io); });
    });

    auto* rep = sub("replay", "run the commands of an info log");
    rep->add_option("log", file)->required();
    rep->callback([&] {
        action = [&] {
            if (group.empty() || prime == 0) throw FormatError("--group and --prime are required");
            std::ifstream in(file);
            if (!in) throw DomainError("cannot read " + file);
            auto entries = read_info(in);
            std::string r = root_dir().string();
            for (std::size_t i = 0; i < entries.size(); ++i) {
                std::vector<std::string> a{"--root", r, "--group", group, "--prime", std::to_string(prime)};
                a.insert(a.end(), entries[i].argv.begin(), entries[i].argv.end());
                int rc = run_command(a, out, err);
                if (rc == 1 || rc == 2) {
                    err << "replay stopped at entry " << i + 1 << "\n";
                    return rc;
                }
            }
            out << entries.size() << " commands replayed\n";
            return 0;
        };
    });

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    try {
        return action ? action() : 2;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return static_cast<int>(e.kind());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace moc
