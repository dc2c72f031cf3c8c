#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "lexsim/common.hpp"

namespace lexsim {

enum class CaseType { civil, criminal, unknown };
enum class StatuteLevel { act, part, chapter, topic, section };

const char* to_string(CaseType t);
const char* to_string(StatuteLevel t);
CaseType case_type_from_string(std::string_view s);
StatuteLevel statute_level_from_string(std::string_view s);

// Depth rank inside an act hierarchy: act=0 ... section=4. Parent links must
// strictly decrease the rank, which also rules out cycles.
int hierarchy_rank(StatuteLevel t);

struct CaseDocument {
    std::string id;
    CaseType case_type = CaseType::unknown;
    std::string text;
    std::vector<std::string> cited_cases;    // sorted, unique, no self-reference
    std::vector<std::string> cited_statutes; // sorted, unique
    bool cited_cases_listed = false;         // field was present in the input record
    bool cited_statutes_listed = false;
};

struct StatuteNode {
    std::string id;
    StatuteLevel node_type = StatuteLevel::act;
    std::string parent_id; // empty iff node_type == act
    std::string title;
    std::string text;
    bool has_text = false;
    std::vector<std::string> cited_statutes; // sorted, unique
    bool cited_statutes_listed = false;
};

// A citation id that does not resolve to any record. Kept and flagged, never dropped.
struct UnresolvedRef {
    std::string source_id;
    std::string target;
    std::string kind; // "case", "statute", "act_name"
    std::string note;
};

struct Corpus {
    std::vector<CaseDocument> cases;
    std::vector<StatuteNode> statutes;
    std::vector<UnresolvedRef> unresolved;
    std::vector<std::string> warnings;
};

// One recognized statute citation in running text.
struct CitationMatch {
    std::string source_id;
    std::string act_name;      // normalized, year kept when present
    std::vector<int> sections; // sorted ascending, deduplicated; empty = act-level
    size_t span_begin = 0;     // character offsets into the source text
    size_t span_end = 0;
    std::string act_id;        // registry resolution; empty when unresolved
    bool unresolved = false;
    std::string note;
};

// Case-fold, collapse whitespace, strip punctuation; digits (incl. the year) survive.
std::string normalize_act_name(std::string_view raw);

// Maps normalized act names (with year when known) to act node ids. Names that
// omit the year resolve only when a single year variant exists.
class ActRegistry {
public:
    void add(const std::string& normalized_name, const std::string& act_id);
    static ActRegistry load_tsv(const std::string& path);
    void save_tsv(const std::string& path) const;

    enum class Lookup { ok, unknown, ambiguous };
    Lookup resolve(const std::string& normalized_name, std::string* act_id) const;

    size_t size() const { return exact_.size(); }
    const std::map<std::string, std::string>& entries() const { return exact_; }

private:
    std::map<std::string, std::string> exact_;
    std::map<std::string, std::vector<std::string>> by_base_; // name without trailing year
};

class StatuteIndex {
public:
    StatuteIndex() = default;
    explicit StatuteIndex(const std::vector<StatuteNode>& statutes);
    const StatuteNode* find(const std::string& id) const;

private:
    std::unordered_map<std::string, const StatuteNode*> by_id_;
};

Corpus parse_corpus(const std::string& path);
void write_corpus(const Corpus& corpus, const std::string& path);

// Recognizes "Section(s)/Article(s) <numbers> of the <Act>" with the four
// number forms (single, pair, triple, inclusive range) plus bare act-level
// citations. Unregistered act names come back flagged unresolved.
std::vector<CitationMatch> extract_statute_citations(std::string_view text, const ActRegistry& registry);

// Act-level match -> the act node; section match -> "<act_id>_<n>" section nodes.
// Missing targets are reported through `warnings`, never fabricated.
std::vector<std::string> resolve_section_ids(const CitationMatch& match, const StatuteIndex& index,
                                             std::vector<std::string>* warnings = nullptr);
std::vector<std::string> resolve_section_ids(const CitationMatch& match, const std::vector<StatuteNode>& statutes,
                                             std::vector<std::string>* warnings = nullptr);

// Runs extraction over every record whose cited_statutes field was absent and
// fills it with the resolved ids. Statute-source targets are kept only at the
// citing node's own level (section->section, act->act).
void fill_missing_citations(Corpus& corpus, const ActRegistry& registry);

// Flags dangling cited_cases / cited_statutes ids into corpus.unresolved.
void link_citations(Corpus& corpus);

} // namespace lexsim
