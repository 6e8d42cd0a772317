#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "moc/intlin.hpp"

namespace moc {

// Labels of the original layout.
constexpr int label_brauer = 30500;       // .bras: Brauer characters over BS0
constexpr int label_relations = 30550;    // G.p: S, [Irr^] = S [BS0]
constexpr int label_projectives = 30700;  // .proj: over Irr; G.p: X0, PS over PA0
constexpr int label_class_functions = 30900;  // G.p: BS0 as class functions

// Labels added by this implementation; see README for the full list.
constexpr int label_meta = 30010;
constexpr int label_blocks = 30100;
constexpr int label_bs0 = 30110;
constexpr int label_brauer_ids = 30510;
constexpr int label_brauer_origin = 30590;
constexpr int label_ps_ids = 30710;
constexpr int label_proj_ps = 30750;
constexpr int label_proj_ps_ids = 30760;
constexpr int label_proj_origin = 30790;
constexpr int label_known_pims = 30800;
constexpr int label_known_irr = 30810;
constexpr int label_bs_names = 30960;

bool known_label(int label);

// One record: "label L matrix R C [legacy]" followed by R rows, or
// "label L text N" followed by N lines. Records with unknown labels are
// kept as raw lines and written back unchanged.
struct LabeledRecord {
    enum class Kind { matrix, text, opaque };
    int label = 0;
    Kind kind = Kind::matrix;
    IntMatrix matrix;
    std::vector<std::string> lines;  // text payload, or header and payload of an opaque record

    static LabeledRecord of(int label, IntMatrix m);
    static LabeledRecord of(int label, std::vector<std::string> text);
};

enum class Codec { text, legacy };

struct LabeledFile {
    std::vector<LabeledRecord> records;

    const LabeledRecord* find(int label) const;
    // Throws NotFound naming `file` when the label is absent.
    const IntMatrix& matrix(int label, const std::string& file) const;
    const std::vector<std::string>& text(int label, const std::string& file) const;
    // Replaces the record with the same label in place or appends.
    void put(LabeledRecord r);
};

struct NotFound : Error {
    explicit NotFound(const std::string& what) : Error(ErrorKind::domain, what) {}
};

// Warnings about unknown labels go to `warnings`.
LabeledFile read_labeled(std::istream& in, std::vector<std::string>* warnings = nullptr);
void write_labeled(std::ostream& out, const LabeledFile& f, Codec codec);

// The files of one group and prime below a root directory. Mutations are
// staged in memory and committed together: temporary files, then a journal
// naming them, then renames. A journal left by an interrupted commit is
// rolled forward by the next open; stray temporaries without a journal are
// deleted.
class Workspace {
public:
    enum class Access { read, write };
    enum class File { main, bras, proj, info };

    Workspace(std::filesystem::path root, std::string group, long prime, Access access);
    ~Workspace();
    Workspace(const Workspace&) = delete;
    Workspace& operator=(const Workspace&) = delete;

    std::filesystem::path path(File f) const;
    std::filesystem::path table_path() const;
    const std::string& group() const { return group_; }
    long prime() const { return prime_; }
    bool initialized() const;

    // Staged contents; the first access reads the file.
    LabeledFile& file(File f);
    Codec codec();
    void set_codec(Codec c);
    void stage_table(std::string contents);
    // Appends to the pending info entry.
    void note(const std::string& text);
    std::vector<std::string> warnings;

    // Writes the staged files and the info entry "argv" with the notes.
    void commit(const std::vector<std::string>& argv);

    static void recover(const std::filesystem::path& root, const std::string& stem);

private:
    std::filesystem::path root_;
    std::string group_;
    long prime_;
    Access access_;
    int lock_fd_ = -1;
    std::optional<LabeledFile> files_[3];
    std::optional<std::string> table_;
    std::vector<std::string> notes_;
};

// Entries of the info log: the timestamp line, the command as a JSON array
// and the message lines.
struct InfoEntry {
    std::string stamp;
    std::vector<std::string> argv;
    std::vector<std::string> lines;
};
std::vector<InfoEntry> read_info(std::istream& in);

// Runs `moc ARGS...`; returns the exit status (0 ok, 1 domain error,
// 2 format error, 3 inconclusive). The workspace root comes from --root,
// else $MOC_WORKSPACE, else the current directory.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace moc
