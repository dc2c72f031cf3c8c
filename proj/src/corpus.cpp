#include "lexsim/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <regex>
#include <sstream>

#include <json.hpp>

namespace lexsim {

using nlohmann::json;

const char* to_string(CaseType t) {
    switch (t) {
        case CaseType::civil: return "civil";
        case CaseType::criminal: return "criminal";
        default: return "unknown";
    }
}

const char* to_string(StatuteLevel t) {
    switch (t) {
        case StatuteLevel::act: return "act";
        case StatuteLevel::part: return "part";
        case StatuteLevel::chapter: return "chapter";
        case StatuteLevel::topic: return "topic";
        default: return "section";
    }
}

CaseType case_type_from_string(std::string_view s) {
    if (s == "civil") return CaseType::civil;
    if (s == "criminal") return CaseType::criminal;
    if (s == "unknown" || s.empty()) return CaseType::unknown;
    throw Error("invalid case_type: " + std::string(s));
}

StatuteLevel statute_level_from_string(std::string_view s) {
    if (s == "act") return StatuteLevel::act;
    if (s == "part") return StatuteLevel::part;
    if (s == "chapter") return StatuteLevel::chapter;
    if (s == "topic") return StatuteLevel::topic;
    if (s == "section") return StatuteLevel::section;
    throw Error("invalid statute node_type: " + std::string(s));
}

int hierarchy_rank(StatuteLevel t) {
    switch (t) {
        case StatuteLevel::act: return 0;
        case StatuteLevel::part: return 1;
        case StatuteLevel::chapter: return 2;
        case StatuteLevel::topic: return 3;
        default: return 4;
    }
}

std::string normalize_act_name(std::string_view raw) {
    std::string out;
    out.reserve(raw.size());
    bool pending_space = false;
    for (char c : raw) {
        unsigned char uc = static_cast<unsigned char>(c);
        if (std::isalnum(uc)) {
            if (pending_space && !out.empty()) out.push_back(' ');
            pending_space = false;
            out.push_back(static_cast<char>(std::tolower(uc)));
        } else {
            pending_space = true;
        }
    }
    return out;
}

namespace {

bool is_year_token(std::string_view s) {
    if (s.size() != 4) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    int y = (s[0] - '0') * 1000 + (s[1] - '0') * 100 + (s[2] - '0') * 10 + (s[3] - '0');
    return y >= 1500 && y < 2100;
}

// Strips trailing year (if any) off a normalized name, for ambiguity lookups.
std::string base_act_name(const std::string& normalized) {
    auto pos = normalized.find_last_of(' ');
    if (pos == std::string::npos) return normalized;
    if (is_year_token(std::string_view(normalized).substr(pos + 1))) return normalized.substr(0, pos);
    return normalized;
}

} // namespace

void ActRegistry::add(const std::string& normalized_name, const std::string& act_id) {
    std::string key = normalize_act_name(normalized_name);
    if (key.empty()) throw Error("act registry: empty name for id " + act_id);
    auto [it, inserted] = exact_.emplace(key, act_id);
    if (!inserted && it->second != act_id)
        throw Error("act registry: conflicting ids for name '" + key + "'");
    auto& ids = by_base_[base_act_name(key)];
    if (std::find(ids.begin(), ids.end(), act_id) == ids.end()) ids.push_back(act_id);
}

ActRegistry ActRegistry::load_tsv(const std::string& path) {
    ActRegistry reg;
    std::istringstream in(io::read_file(path));
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (str::trim(line).empty()) continue;
        auto tab = line.find('\t');
        if (tab == std::string::npos)
            throw Error(path + ":" + std::to_string(lineno) + ": expected name<TAB>act_id");
        reg.add(str::trim(line.substr(0, tab)), str::trim(line.substr(tab + 1)));
    }
    return reg;
}

void ActRegistry::save_tsv(const std::string& path) const {
    std::ostringstream out;
    for (const auto& [name, id] : exact_) out << name << '\t' << id << '\n';
    io::write_file(path, out.str());
}

ActRegistry::Lookup ActRegistry::resolve(const std::string& normalized_name, std::string* act_id) const {
    auto it = exact_.find(normalized_name);
    if (it != exact_.end()) {
        *act_id = it->second;
        return Lookup::ok;
    }
    // A name cited without the year resolves only when one year variant exists.
    auto base = by_base_.find(base_act_name(normalized_name));
    if (base != by_base_.end()) {
        if (base->second.size() == 1) {
            *act_id = base->second.front();
            return Lookup::ok;
        }
        return Lookup::ambiguous;
    }
    return Lookup::unknown;
}

StatuteIndex::StatuteIndex(const std::vector<StatuteNode>& statutes) {
    for (const auto& s : statutes) by_id_.emplace(s.id, &s);
}

const StatuteNode* StatuteIndex::find(const std::string& id) const {
    auto it = by_id_.find(id);
    return it == by_id_.end() ? nullptr : it->second;
}

// ---------------------------------------------------------------------------
// Citation extraction
// ---------------------------------------------------------------------------

namespace {

constexpr int kMaxRangeWidth = 500; // wider ranges are treated as parse noise

struct ActNameScan {
    bool ok = false;
    size_t begin = 0;
    size_t end = 0; // one past the last accepted character
    bool has_keyword = false;
};

bool is_keyword(std::string_view core) {
    return core == "Act" || core == "Acts" || core == "Code" || core == "Constitution" || core == "Rules";
}

bool is_connector(std::string_view core) {
    return core == "of" || core == "and" || core == "for" || core == "the";
}

bool is_capitalized_word(std::string_view core) {
    bool seen_alpha = false;
    for (char c : core) {
        unsigned char uc = static_cast<unsigned char>(c);
        if (std::isalpha(uc)) {
            if (!seen_alpha && !std::isupper(uc)) return false;
            seen_alpha = true;
        } else if (!std::isdigit(uc) && c != '-' && c != '\'' && c != '&' && c != '.') {
            return false;
        }
    }
    return seen_alpha;
}

// Reads an act name starting at `start`: capitalized words, connectors bound to
// a following capitalized word, parenthesized abbreviations, and an optional
// terminating year. Stops at sentence punctuation or the first alien token.
ActNameScan scan_act_name(std::string_view text, size_t start) {
    ActNameScan scan;
    scan.begin = start;
    size_t pos = start;
    int paren_depth = 0;
    bool require_year = false;

    while (pos < text.size()) {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
        size_t tok_begin = pos;
        while (pos < text.size() && !std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
        if (pos == tok_begin) break;
        std::string_view raw = text.substr(tok_begin, pos - tok_begin);

        if (paren_depth > 0) {
            for (char c : raw) {
                if (c == '(') ++paren_depth;
                if (c == ')') --paren_depth;
            }
            scan.end = tok_begin + raw.size();
            continue;
        }

        size_t lead = 0;
        while (lead < raw.size() && (raw[lead] == '(' || raw[lead] == '"' || raw[lead] == '\'')) ++lead;
        size_t tail = raw.size();
        while (tail > lead) {
            char c = raw[tail - 1];
            if (c == ',' || c == '.' || c == ';' || c == ':' || c == '!' || c == '?' || c == ')' || c == '"' ||
                c == '\'')
                --tail;
            else
                break;
        }
        std::string_view core = raw.substr(lead, tail - lead);
        if (core.empty()) break;

        bool sentence_end = false;
        for (size_t i = tail; i < raw.size(); ++i) {
            char c = raw[i];
            if (c == '.' || c == ';' || c == ':' || c == '!' || c == '?') sentence_end = true;
        }
        bool comma_after = raw.find(',', tail) != std::string_view::npos;

        if (is_year_token(core)) {
            scan.ok = scan.end > scan.begin; // a name cannot start with the year
            if (scan.ok) scan.end = tok_begin + tail;
            return scan;
        }
        if (require_year) break; // comma was terminal after all

        if (is_connector(core)) {
            // Connectors extend the span only once a later word is accepted.
            if (sentence_end || comma_after) break;
            continue;
        }
        if (is_capitalized_word(core)) {
            if (is_keyword(core)) scan.has_keyword = true;
            for (char c : raw) {
                if (c == '(') ++paren_depth;
                if (c == ')' && paren_depth > 0) --paren_depth;
            }
            scan.end = tok_begin + tail;
            if (sentence_end && paren_depth == 0) break;
            if (comma_after && paren_depth == 0) require_year = true;
            continue;
        }
        break;
    }
    scan.ok = scan.end > scan.begin;
    return scan;
}

const std::regex& section_head_regex() {
    static const std::regex re(
        R"((Sections?|Articles?)\s+(?:(\d+)\s+to\s+(\d+)|(\d+)\s*,\s*(\d+)\s+and\s+(\d+)|(\d+)\s+and\s+(\d+)|(\d+))\s+of\s+the\s+)",
        std::regex::icase | std::regex::optimize);
    return re;
}

const std::regex& act_level_regex() {
    static const std::regex re(R"(\b([Tt]he)\s+)", std::regex::optimize);
    return re;
}

std::optional<int> parse_section_number(const std::string& s) {
    if (s.empty() || s.size() > 5) return std::nullopt; // longer runs are noise
    return std::stoi(s);
}

std::vector<int> collect_sections(const std::smatch& m) {
    std::vector<int> out;
    auto add = [&](int group) -> bool {
        if (!m[group].matched) return true;
        auto n = parse_section_number(m[group].str());
        if (!n) return false;
        out.push_back(*n);
        return true;
    };
    if (m[2].matched) { // range "mm to nn", expanded inclusively
        auto lo = parse_section_number(m[2].str());
        auto hi = parse_section_number(m[3].str());
        if (!lo || !hi || *lo > *hi || *hi - *lo > kMaxRangeWidth) return {};
        for (int v = *lo; v <= *hi; ++v) out.push_back(v);
    } else {
        for (int g : {4, 5, 6, 7, 8, 9})
            if (!add(g)) return {};
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

void resolve_against_registry(CitationMatch& match, const ActRegistry& registry) {
    std::string act_id;
    switch (registry.resolve(match.act_name, &act_id)) {
        case ActRegistry::Lookup::ok:
            match.act_id = act_id;
            break;
        case ActRegistry::Lookup::ambiguous:
            match.unresolved = true;
            match.note = "ambiguous act name (multiple year variants): " + match.act_name;
            break;
        case ActRegistry::Lookup::unknown:
            match.unresolved = true;
            match.note = "act not in registry: " + match.act_name;
            break;
    }
}

bool overlaps(const CitationMatch& m, size_t begin, size_t end) {
    return begin < m.span_end && m.span_begin < end;
}

} // namespace

std::vector<CitationMatch> extract_statute_citations(std::string_view text, const ActRegistry& registry) {
    std::vector<CitationMatch> matches;
    std::vector<std::pair<size_t, size_t>> noise_spans; // rejected section heads block act-level matches too
    const std::string hay(text);

    for (auto it = std::sregex_iterator(hay.begin(), hay.end(), section_head_regex());
         it != std::sregex_iterator(); ++it) {
        const std::smatch& m = *it;
        ActNameScan scan = scan_act_name(text, static_cast<size_t>(m.position(0) + m.length(0)));
        if (!scan.ok) continue;
        std::vector<int> sections = collect_sections(m);
        if (sections.empty()) {
            noise_spans.emplace_back(static_cast<size_t>(m.position(0)), scan.end);
            continue;
        }
        CitationMatch match;
        match.act_name = normalize_act_name(text.substr(scan.begin, scan.end - scan.begin));
        if (match.act_name.empty()) continue;
        match.sections = std::move(sections);
        match.span_begin = static_cast<size_t>(m.position(0));
        match.span_end = scan.end;
        resolve_against_registry(match, registry);
        matches.push_back(std::move(match));
    }

    // Bare act-level citations ("... as described in the Dowry Prohibition Act, 1962").
    for (auto it = std::sregex_iterator(hay.begin(), hay.end(), act_level_regex());
         it != std::sregex_iterator(); ++it) {
        const std::smatch& m = *it;
        size_t name_start = static_cast<size_t>(m.position(0) + m.length(0));
        ActNameScan scan = scan_act_name(text, name_start);
        if (!scan.ok || !scan.has_keyword) continue;
        size_t begin = static_cast<size_t>(m.position(0));
        bool taken = false;
        for (const auto& prev : matches)
            if (overlaps(prev, begin, scan.end)) { taken = true; break; }
        for (const auto& [nb, ne] : noise_spans)
            if (begin < ne && nb < scan.end) { taken = true; break; }
        if (taken) continue;
        CitationMatch match;
        match.act_name = normalize_act_name(text.substr(scan.begin, scan.end - scan.begin));
        if (match.act_name.empty() || match.act_name == "act" || match.act_name == "acts") continue;
        match.span_begin = begin;
        match.span_end = scan.end;
        resolve_against_registry(match, registry);
        matches.push_back(std::move(match));
    }

    std::sort(matches.begin(), matches.end(),
              [](const CitationMatch& a, const CitationMatch& b) { return a.span_begin < b.span_begin; });
    return matches;
}

std::vector<std::string> resolve_section_ids(const CitationMatch& match, const StatuteIndex& index,
                                             std::vector<std::string>* warnings) {
    std::vector<std::string> out;
    auto warn = [&](const std::string& msg) {
        if (warnings) warnings->push_back(msg);
    };
    if (match.unresolved) {
        warn("unresolved citation: " + match.note);
        return out;
    }
    if (match.sections.empty()) {
        const StatuteNode* node = index.find(match.act_id);
        if (node && node->node_type == StatuteLevel::act)
            out.push_back(match.act_id);
        else
            warn("act missing from statute dump: " + match.act_id);
        return out;
    }
    for (int n : match.sections) {
        std::string sid = match.act_id + "_" + std::to_string(n);
        const StatuteNode* node = index.find(sid);
        if (node && node->node_type == StatuteLevel::section)
            out.push_back(sid);
        else
            warn("section missing from statute dump: " + sid);
    }
    return out;
}

std::vector<std::string> resolve_section_ids(const CitationMatch& match, const std::vector<StatuteNode>& statutes,
                                             std::vector<std::string>* warnings) {
    StatuteIndex index(statutes);
    return resolve_section_ids(match, index, warnings);
}

// ---------------------------------------------------------------------------
// Corpus file IO
// ---------------------------------------------------------------------------

namespace {

void check_id(const std::string& id, int lineno) {
    if (id.empty()) throw Error("line " + std::to_string(lineno) + ": empty id");
    for (char c : id)
        if (std::isspace(static_cast<unsigned char>(c)))
            throw Error("line " + std::to_string(lineno) + ": id contains whitespace: '" + id + "'");
}

std::vector<std::string> read_id_array(const json& j, const char* key, bool* listed) {
    std::vector<std::string> out;
    *listed = j.contains(key);
    if (!*listed) return out;
    const json& arr = j.at(key);
    if (!arr.is_array()) throw Error(std::string(key) + " must be an array");
    for (const auto& v : arr) out.push_back(v.get<std::string>());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

void drop_self_reference(std::vector<std::string>& ids, const std::string& self, Corpus& corpus) {
    auto it = std::find(ids.begin(), ids.end(), self);
    if (it != ids.end()) {
        ids.erase(it);
        corpus.warnings.push_back("dropped self-citation on " + self);
    }
}

} // namespace

Corpus parse_corpus(const std::string& path) {
    Corpus corpus;
    std::istringstream in(io::read_file(path));
    std::string line;
    int lineno = 0;
    std::unordered_map<std::string, int> seen; // id -> first line

    while (std::getline(in, line)) {
        ++lineno;
        if (str::trim(line).empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            throw Error("malformed record at line " + std::to_string(lineno) + ": " + e.what());
        }
        if (!j.is_object()) throw Error("malformed record at line " + std::to_string(lineno) + ": not an object");
        try {
            std::string id = j.at("id").get<std::string>();
            check_id(id, lineno);
            auto [it, fresh] = seen.emplace(id, lineno);
            if (!fresh)
                throw Error("duplicate id '" + id + "' at line " + std::to_string(lineno) + " (first at line " +
                            std::to_string(it->second) + ")");
            std::string kind = j.at("kind").get<std::string>();
            if (kind == "case") {
                CaseDocument doc;
                doc.id = id;
                doc.case_type = case_type_from_string(j.value("case_type", "unknown"));
                doc.text = j.value("text", "");
                doc.cited_cases = read_id_array(j, "cited_cases", &doc.cited_cases_listed);
                doc.cited_statutes = read_id_array(j, "cited_statutes", &doc.cited_statutes_listed);
                drop_self_reference(doc.cited_cases, id, corpus);
                drop_self_reference(doc.cited_statutes, id, corpus);
                corpus.cases.push_back(std::move(doc));
            } else if (kind == "statute") {
                StatuteNode node;
                node.id = id;
                node.node_type = statute_level_from_string(j.at("node_type").get<std::string>());
                node.title = j.value("title", "");
                node.has_text = j.contains("text");
                if (node.has_text) node.text = j.at("text").get<std::string>();
                node.cited_statutes = read_id_array(j, "cited_statutes", &node.cited_statutes_listed);
                drop_self_reference(node.cited_statutes, id, corpus);
                if (j.contains("parent_id")) node.parent_id = j.at("parent_id").get<std::string>();
                if (node.node_type == StatuteLevel::act && !node.parent_id.empty())
                    throw Error("act '" + id + "' must not have parent_id (line " + std::to_string(lineno) + ")");
                if (node.node_type != StatuteLevel::act && node.parent_id.empty())
                    throw Error("statute '" + id + "' requires parent_id (line " + std::to_string(lineno) + ")");
                corpus.statutes.push_back(std::move(node));
            } else {
                throw Error("unknown kind '" + kind + "'");
            }
        } catch (const json::exception& e) {
            throw Error("malformed record at line " + std::to_string(lineno) + ": " + e.what());
        }
    }

    // Hierarchy must form a forest rooted at acts: parents exist and strictly
    // decrease the depth rank, hence no cycles.
    std::unordered_map<std::string, const StatuteNode*> statute_by_id;
    for (const auto& s : corpus.statutes) statute_by_id.emplace(s.id, &s);
    for (const auto& s : corpus.statutes) {
        if (s.parent_id.empty()) continue;
        auto it = statute_by_id.find(s.parent_id);
        if (it == statute_by_id.end())
            throw Error("statute '" + s.id + "' has missing parent '" + s.parent_id + "'");
        if (hierarchy_rank(it->second->node_type) >= hierarchy_rank(s.node_type))
            throw Error("invalid hierarchy link " + std::string(to_string(it->second->node_type)) + " -> " +
                        to_string(s.node_type) + " (" + s.parent_id + " -> " + s.id + ")");
    }

    link_citations(corpus);
    return corpus;
}

void link_citations(Corpus& corpus) {
    corpus.unresolved.clear();
    std::unordered_map<std::string, char> kind_of; // 'c' case, 's' statute
    for (const auto& c : corpus.cases) kind_of[c.id] = 'c';
    for (const auto& s : corpus.statutes) kind_of[s.id] = 's';

    auto flag = [&](const std::string& src, const std::vector<std::string>& targets, char want,
                    const char* kind) {
        for (const auto& t : targets) {
            auto it = kind_of.find(t);
            if (it == kind_of.end() || it->second != want)
                corpus.unresolved.push_back({src, t, kind,
                                             it == kind_of.end() ? "target id not in corpus"
                                                                 : "target id has wrong kind"});
        }
    };
    for (const auto& c : corpus.cases) {
        flag(c.id, c.cited_cases, 'c', "case");
        flag(c.id, c.cited_statutes, 's', "statute");
    }
    for (const auto& s : corpus.statutes) flag(s.id, s.cited_statutes, 's', "statute");
}

void fill_missing_citations(Corpus& corpus, const ActRegistry& registry) {
    StatuteIndex index(corpus.statutes);

    auto extract_into = [&](const std::string& source_id, const std::string& text,
                            std::vector<std::string>& cited, std::optional<StatuteLevel> source_level) {
        auto matches = extract_statute_citations(text, registry);
        for (auto& m : matches) {
            m.source_id = source_id;
            if (m.unresolved) {
                corpus.unresolved.push_back({source_id, m.act_name, "act_name", m.note});
                continue;
            }
            std::vector<std::string> warnings;
            for (auto& id : resolve_section_ids(m, index, &warnings)) {
                if (id == source_id) continue;
                if (source_level) {
                    // Statute sources keep targets at their own level only.
                    StatuteLevel target_level = index.find(id)->node_type;
                    if (target_level != *source_level) {
                        corpus.warnings.push_back("skipped cross-level statute citation " + source_id + " -> " + id);
                        continue;
                    }
                }
                cited.push_back(std::move(id));
            }
            for (auto& w : warnings) corpus.warnings.push_back(source_id + ": " + w);
        }
        std::sort(cited.begin(), cited.end());
        cited.erase(std::unique(cited.begin(), cited.end()), cited.end());
    };

    for (auto& doc : corpus.cases) {
        if (doc.cited_statutes_listed) continue;
        extract_into(doc.id, doc.text, doc.cited_statutes, std::nullopt);
        doc.cited_statutes_listed = true;
    }
    for (auto& node : corpus.statutes) {
        if (node.cited_statutes_listed || !node.has_text) continue;
        if (node.node_type != StatuteLevel::section && node.node_type != StatuteLevel::act) continue;
        extract_into(node.id, node.text, node.cited_statutes, node.node_type);
        node.cited_statutes_listed = true;
    }
    link_citations(corpus);
}

void write_corpus(const Corpus& corpus, const std::string& path) {
    std::ostringstream out;
    for (const auto& c : corpus.cases) {
        json j;
        j["id"] = c.id;
        j["kind"] = "case";
        j["case_type"] = to_string(c.case_type);
        j["text"] = c.text;
        j["cited_cases"] = c.cited_cases;
        j["cited_statutes"] = c.cited_statutes;
        out << j.dump() << '\n';
    }
    for (const auto& s : corpus.statutes) {
        json j;
        j["id"] = s.id;
        j["kind"] = "statute";
        j["node_type"] = to_string(s.node_type);
        if (!s.parent_id.empty()) j["parent_id"] = s.parent_id;
        j["title"] = s.title;
        if (s.has_text) j["text"] = s.text;
        j["cited_statutes"] = s.cited_statutes;
        out << j.dump() << '\n';
    }
    io::write_file(path, out.str());
}

} // namespace lexsim
