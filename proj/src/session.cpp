#include "moc/session.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include <json.hpp>

namespace moc {

namespace fs = std::filesystem;

bool known_label(int label) {
    static const std::set<int> known{label_brauer,     label_relations,   label_projectives, label_class_functions,
                                     label_meta,       label_blocks,      label_bs0,         label_brauer_ids,
                                     label_brauer_origin, label_ps_ids,   label_proj_ps,     label_proj_ps_ids,
                                     label_proj_origin, label_known_pims, label_known_irr,   label_bs_names};
    return known.count(label) > 0;
}

LabeledRecord LabeledRecord::of(int label, IntMatrix m) {
    LabeledRecord r;
    r.label = label;
    r.kind = Kind::matrix;
    r.matrix = std::move(m);
    return r;
}

LabeledRecord LabeledRecord::of(int label, std::vector<std::string> text) {
    LabeledRecord r;
    r.label = label;
    r.kind = Kind::text;
    r.lines = std::move(text);
    return r;
}

const LabeledRecord* LabeledFile::find(int label) const {
    for (const auto& r : records)
        if (r.label == label) return &r;
    return nullptr;
}

const IntMatrix& LabeledFile::matrix(int label, const std::string& file) const {
    const LabeledRecord* r = find(label);
    if (!r || r->kind != LabeledRecord::Kind::matrix)
        throw NotFound("label " + std::to_string(label) + " not found in " + file);
    return r->matrix;
}

const std::vector<std::string>& LabeledFile::text(int label, const std::string& file) const {
    const LabeledRecord* r = find(label);
    if (!r || r->kind != LabeledRecord::Kind::text)
        throw NotFound("label " + std::to_string(label) + " not found in " + file);
    return r->lines;
}

void LabeledFile::put(LabeledRecord r) {
    for (auto& x : records)
        if (x.label == r.label) {
            x = std::move(r);
            return;
        }
    records.push_back(std::move(r));
}

namespace {

std::vector<std::string> split_ws(const std::string& line) {
    std::istringstream in(line);
    std::vector<std::string> out;
    std::string w;
    while (in >> w) out.push_back(w);
    return out;
}

std::size_t to_count(const std::string& s, int lineno) {
    try {
        std::size_t used = 0;
        long long v = std::stoll(s, &used);
        if (used != s.size() || v < 0) throw std::invalid_argument(s);
        return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
        throw FormatError("line " + std::to_string(lineno) + ": bad count '" + s + "'");
    }
}

Vec parse_row(const std::vector<std::string>& words, std::size_t cols, bool legacy, int lineno) {
    Vec row;
    if (!legacy) {
        if (words.size() != cols) throw FormatError("line " + std::to_string(lineno) + ": expected " + std::to_string(cols) + " entries");
        for (const auto& w : words) row.push_back(parse_bigint(w));
        return row;
    }
    std::vector<std::int32_t> flat;
    for (const auto& w : words) flat.push_back(static_cast<std::int32_t>(to_count(w, lineno)));
    std::size_t pos = 0;
    while (pos < flat.size()) row.push_back(legacy_decode(legacy_take(flat, pos)));
    if (row.size() != cols) throw FormatError("line " + std::to_string(lineno) + ": expected " + std::to_string(cols) + " entries");
    return row;
}

}  // namespace

LabeledFile read_labeled(std::istream& in, std::vector<std::string>* warnings) {
    LabeledFile f;
    std::vector<std::string> lines;
    for (std::string l; std::getline(in, l);) lines.push_back(l);
    std::size_t i = 0;
    auto next = [&](int& lineno) -> const std::string& {
        if (i >= lines.size()) throw FormatError("unexpected end of file");
        lineno = static_cast<int>(i + 1);
        return lines[i++];
    };
    std::set<int> seen;
    while (i < lines.size()) {
        if (lines[i].empty()) {
            ++i;
            continue;
        }
        int lineno = 0;
        const std::string header = next(lineno);
        auto w = split_ws(header);
        if (w.size() < 4 || w[0] != "label") throw FormatError("line " + std::to_string(lineno) + ": expected a record header");
        std::size_t label_value = to_count(w[1], lineno);
        if (label_value < 30000 || label_value > 30999)
            throw FormatError("line " + std::to_string(lineno) + ": label " + w[1] + " outside 30000..30999");
        int label = static_cast<int>(label_value);
        if (!seen.insert(label).second) throw FormatError("line " + std::to_string(lineno) + ": label " + w[1] + " repeated");
        LabeledRecord r;
        r.label = label;
        std::size_t payload = 0;
        if (w[2] == "matrix") {
            if (w.size() < 5 || w.size() > 6 || (w.size() == 6 && w[5] != "legacy"))
                throw FormatError("line " + std::to_string(lineno) + ": bad matrix header");
            r.matrix = IntMatrix(to_count(w[3], lineno), to_count(w[4], lineno));
            payload = r.matrix.rows;
        } else if (w[2] == "text") {
            if (w.size() != 4) throw FormatError("line " + std::to_string(lineno) + ": bad text header");
            r.kind = LabeledRecord::Kind::text;
            payload = to_count(w[3], lineno);
        } else {
            throw FormatError("line " + std::to_string(lineno) + ": unknown payload kind '" + w[2] + "'");
        }
        if (!known_label(label)) {
            if (warnings) warnings->push_back("unknown label " + std::to_string(label) + " kept as is");
            r.kind = LabeledRecord::Kind::opaque;
            r.lines.push_back(header);
            for (std::size_t k = 0; k < payload; ++k) r.lines.push_back(next(lineno));
        } else if (r.kind == LabeledRecord::Kind::text) {
            for (std::size_t k = 0; k < payload; ++k) r.lines.push_back(next(lineno));
        } else {
            bool legacy = w.size() == 6;
            for (std::size_t k = 0; k < payload; ++k) {
                const std::string& row = next(lineno);
                r.matrix.set_row(k, parse_row(split_ws(row), r.matrix.cols, legacy, lineno));
            }
        }
        f.records.push_back(std::move(r));
    }
    return f;
}

void write_labeled(std::ostream& out, const LabeledFile& f, Codec codec) {
    for (const auto& r : f.records) {
        switch (r.kind) {
        case LabeledRecord::Kind::opaque:
            for (const auto& l : r.lines) out << l << '\n';
            break;
        case LabeledRecord::Kind::text:
            out << "label " << r.label << " text " << r.lines.size() << '\n';
            for (const auto& l : r.lines) {
                if (l.find('\n') != std::string::npos) throw DomainError("text payload with a line break");
                out << l << '\n';
            }
            break;
        case LabeledRecord::Kind::matrix:
            out << "label " << r.label << " matrix " << r.matrix.rows << ' ' << r.matrix.cols
                << (codec == Codec::legacy ? " legacy" : "") << '\n';
            for (std::size_t i = 0; i < r.matrix.rows; ++i) {
                for (std::size_t j = 0; j < r.matrix.cols; ++j) {
                    if (j) out << ' ';
                    if (codec == Codec::legacy)
                        out << legacy_format(legacy_encode(r.matrix(i, j)));
                    else
                        out << r.matrix(i, j).get_str();
                }
                out << '\n';
            }
            break;
        }
    }
}

// ---- workspace ----

namespace {

void crash_point(const char* stage) {
    const char* at = std::getenv("MOC_CRASH_AT");
    if (at && std::string(at) == stage) std::_Exit(99);
}

void write_synced(const fs::path& p, const std::string& data) {
    int fd = ::open(p.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
    if (fd < 0) throw DomainError("cannot write " + p.string());
    const char* s = data.data();
    std::size_t left = data.size();
    while (left) {
        ssize_t n = ::write(fd, s, left);
        if (n < 0) {
            ::close(fd);
            throw DomainError("write failed on " + p.string());
        }
        s += n;
        left -= static_cast<std::size_t>(n);
    }
    ::fsync(fd);
    ::close(fd);
}

void sync_dir(const fs::path& dir) {
    int fd = ::open(dir.c_str(), O_RDONLY | O_DIRECTORY);
    if (fd >= 0) {
        ::fsync(fd);
        ::close(fd);
    }
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::string timestamp() {
    std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream s;
    s << std::put_time(&tm, "%a %b %d %H:%M:%S UTC %Y");
    return s.str();
}

}  // namespace

Workspace::Workspace(fs::path root, std::string group, long prime, Access access)
    : root_(std::move(root)), group_(std::move(group)), prime_(prime), access_(access) {
    if (group_.empty() || group_.find('/') != std::string::npos || group_[0] == '.')
        throw FormatError("bad group name '" + group_ + "'");
    if (prime_ < 2) throw FormatError("the prime must be at least 2");
    std::error_code ec;
    fs::create_directories(root_, ec);
    const std::string stem = group_ + "." + std::to_string(prime_);
    fs::path lock = root_ / (stem + ".lock");
    lock_fd_ = ::open(lock.c_str(), O_RDWR | O_CREAT, 0644);
    if (lock_fd_ < 0) throw DomainError("cannot open lock file " + lock.string());
    bool journal = fs::exists(root_ / (stem + ".journal"));
    if (::flock(lock_fd_, (access_ == Access::write || journal) ? LOCK_EX : LOCK_SH) != 0)
        throw DomainError("cannot lock " + lock.string());
    recover(root_, stem);
    if (access_ == Access::read && journal) ::flock(lock_fd_, LOCK_SH);
}

Workspace::~Workspace() {
    if (lock_fd_ >= 0) {
        ::flock(lock_fd_, LOCK_UN);
        ::close(lock_fd_);
    }
}

fs::path Workspace::path(File f) const {
    const std::string stem = group_ + "." + std::to_string(prime_);
    switch (f) {
    case File::main: return root_ / stem;
    case File::bras: return root_ / (stem + ".bras");
    case File::proj: return root_ / (stem + ".proj");
    case File::info: return root_ / (stem + ".info");
    }
    return {};
}

fs::path Workspace::table_path() const { return root_ / (group_ + "." + std::to_string(prime_) + ".tbl"); }

bool Workspace::initialized() const { return fs::exists(path(File::main)); }

LabeledFile& Workspace::file(File f) {
    if (f == File::info) throw DomainError("the info log is not a labelled file");
    auto& slot = files_[static_cast<int>(f)];
    if (!slot) {
        std::ifstream in(path(f));
        if (in) {
            try {
                slot = read_labeled(in, &warnings);
            } catch (const FormatError& e) {
                throw FormatError(path(f).filename().string() + ": " + e.what());
            }
        } else {
            slot = LabeledFile{};
        }
    }
    return *slot;
}

Codec Workspace::codec() {
    const LabeledRecord* meta = file(File::main).find(label_meta);
    if (meta)
        for (const auto& l : meta->lines)
            if (l == "codec legacy") return Codec::legacy;
    return Codec::text;
}

void Workspace::set_codec(Codec c) {
    LabeledFile& m = file(File::main);
    std::vector<std::string> lines;
    if (const LabeledRecord* meta = m.find(label_meta))
        for (const auto& l : meta->lines)
            if (l.rfind("codec ", 0) != 0) lines.push_back(l);
    lines.push_back(c == Codec::legacy ? "codec legacy" : "codec text");
    m.put(LabeledRecord::of(label_meta, lines));
}

void Workspace::stage_table(std::string contents) { table_ = std::move(contents); }

void Workspace::note(const std::string& text) { notes_.push_back(text); }

void Workspace::commit(const std::vector<std::string>& argv) {
    if (access_ != Access::write) throw DomainError("workspace opened read-only");
    const std::string stem = group_ + "." + std::to_string(prime_);
    std::vector<std::pair<fs::path, std::string>> staged;
    Codec c = codec();
    for (File f : {File::main, File::bras, File::proj}) {
        auto& slot = files_[static_cast<int>(f)];
        if (!slot) continue;
        std::ostringstream s;
        write_labeled(s, *slot, c);
        staged.emplace_back(path(f), s.str());
    }
    if (table_) staged.emplace_back(table_path(), *table_);
    std::ostringstream entry;
    entry << slurp(path(File::info));
    entry << "@ " << timestamp() << '\n' << "$ " << nlohmann::json(argv).dump() << '\n';
    for (const auto& n : notes_) entry << n << '\n';
    entry << '\n';
    staged.emplace_back(path(File::info), entry.str());

    for (const auto& [p, data] : staged) write_synced(fs::path(p.string() + ".tmp"), data);
    crash_point("staged");
    std::string journal;
    for (const auto& [p, data] : staged) journal += p.filename().string() + '\n';
    fs::path jtmp = root_ / (stem + ".journal.tmp");
    write_synced(jtmp, journal);
    fs::rename(jtmp, root_ / (stem + ".journal"));
    sync_dir(root_);
    crash_point("journal");
    bool first = true;
    for (const auto& [p, data] : staged) {
        fs::rename(fs::path(p.string() + ".tmp"), p);
        if (first) crash_point("renamed");
        first = false;
    }
    sync_dir(root_);
    fs::remove(root_ / (stem + ".journal"));
    sync_dir(root_);
    notes_.clear();
    table_.reset();
}

void Workspace::recover(const fs::path& root, const std::string& stem) {
    fs::path journal = root / (stem + ".journal");
    if (fs::exists(journal)) {
        std::ifstream in(journal);
        for (std::string name; std::getline(in, name);) {
            if (name.empty()) continue;
            fs::path tmp = root / (name + ".tmp");
            if (fs::exists(tmp)) fs::rename(tmp, root / name);
        }
        sync_dir(root);
        fs::remove(journal);
    }
    fs::remove(root / (stem + ".journal.tmp"));
    std::error_code ec;
    for (const auto& e : fs::directory_iterator(root, ec)) {
        const std::string n = e.path().filename().string();
        if (n.rfind(stem, 0) == 0 && n.size() > 4 && n.compare(n.size() - 4, 4, ".tmp") == 0) fs::remove(e.path());
    }
    sync_dir(root);
}

std::vector<InfoEntry> read_info(std::istream& in) {
    std::vector<InfoEntry> out;
    int lineno = 0;
    for (std::string l; std::getline(in, l);) {
        ++lineno;
        if (l.rfind("@ ", 0) == 0) {
            out.push_back({l.substr(2), {}, {}});
        } else if (l.rfind("$ ", 0) == 0 && !out.empty() && out.back().argv.empty()) {
            try {
                out.back().argv = nlohmann::json::parse(l.substr(2)).get<std::vector<std::string>>();
            } catch (const nlohmann::json::exception&) {
                throw FormatError("info line " + std::to_string(lineno) + ": bad command record");
            }
        } else if (!out.empty()) {
            out.back().lines.push_back(l);
        } else if (!l.empty()) {
            throw FormatError("info line " + std::to_string(lineno) + ": text before the first entry");
        }
    }
    for (auto& e : out)
        while (!e.lines.empty() && e.lines.back().empty()) e.lines.pop_back();
    return out;
}

}  // namespace moc
