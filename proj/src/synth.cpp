#include "lexsim/synth.hpp"

#include <algorithm>
#include <filesystem>
#include <set>

namespace lexsim {

namespace {

std::string act_id(int c, int k) { return "act_c" + std::to_string(c) + "_" + std::to_string(k); }
std::string doc_id(int c, int i) { return "case_c" + std::to_string(c) + "_d" + std::to_string(i); }

// Alternating deep (act-part-chapter-topic-section) and shallow
// (act-chapter-section) hierarchies, mirroring that real acts differ in depth.
void build_act(Corpus& corpus, ActRegistry& registry, const SynthSpec& spec, int c, int k) {
    const std::string aid = act_id(c, k);
    const std::string title = "Community " + std::to_string(c) + " Act " + std::to_string(k);
    const int year = 1900 + 10 * c + k;

    StatuteNode act;
    act.id = aid;
    act.node_type = StatuteLevel::act;
    act.title = title + ", " + std::to_string(year);
    act.cited_statutes_listed = true;
    corpus.statutes.push_back(act);
    registry.add(title + " " + std::to_string(year), aid);

    auto internal_node = [&](const std::string& id, StatuteLevel lvl, const std::string& parent,
                             const std::string& node_title) {
        StatuteNode n;
        n.id = id;
        n.node_type = lvl;
        n.parent_id = parent;
        n.title = node_title;
        n.cited_statutes_listed = true;
        corpus.statutes.push_back(n);
        return id;
    };

    std::vector<std::string> leaves_parents;
    if (k % 2 == 0) {
        for (int p = 0; p < 2; ++p) {
            std::string part = internal_node(aid + "_p" + std::to_string(p), StatuteLevel::part, aid,
                                             title + " Part " + std::to_string(p));
            std::string chapter = internal_node(part + "_ch0", StatuteLevel::chapter, part,
                                                title + " Chapter " + std::to_string(p));
            for (int t = 0; t < 2; ++t)
                leaves_parents.push_back(internal_node(chapter + "_t" + std::to_string(t), StatuteLevel::topic,
                                                       chapter,
                                                       title + " Topic " + std::to_string(p) + "." +
                                                           std::to_string(t)));
        }
    } else {
        for (int ch = 0; ch < 2; ++ch)
            leaves_parents.push_back(internal_node(aid + "_ch" + std::to_string(ch), StatuteLevel::chapter, aid,
                                                   title + " Chapter " + std::to_string(ch)));
    }
    for (int n = 1; n <= spec.sections_per_act; ++n) {
        StatuteNode sec;
        sec.id = aid + "_" + std::to_string(n);
        sec.node_type = StatuteLevel::section;
        sec.parent_id = leaves_parents[(n - 1) % leaves_parents.size()];
        sec.title = title + " Section " + std::to_string(n);
        sec.has_text = true;
        sec.text = "provision " + std::to_string(n) + " of " + title;
        sec.cited_statutes_listed = true;
        corpus.statutes.push_back(sec);
    }
}

} // namespace

SynthCorpus generate_synthetic_corpus(const SynthSpec& spec) {
    if (spec.communities < 2) throw Error("synthetic corpus needs at least 2 communities");
    if (spec.acts_per_community < 1) throw Error("synthetic corpus needs at least 1 act per community");
    if (spec.docs_per_community < 1 || spec.sections_per_act < 2 || spec.tokens_per_doc < 1 ||
        spec.vocab_per_community < 1)
        throw Error("degenerate synthetic corpus spec");
    if (spec.cross_noise < 0.0 || spec.cross_noise > 1.0) throw Error("cross_noise must lie in [0,1]");

    SynthCorpus sc;
    Rng rng(hash_combine(spec.seed, fnv1a64("synth-corpus")));

    for (int c = 0; c < spec.communities; ++c)
        for (int k = 0; k < spec.acts_per_community; ++k) build_act(sc.corpus, sc.registry, spec, c, k);

    // Statute-to-statute citations, kept at the cited level.
    for (int c = 0; c < spec.communities; ++c) {
        for (int k = 0; k < spec.acts_per_community; ++k) {
            StatuteNode* act = nullptr;
            for (auto& s : sc.corpus.statutes)
                if (s.id == act_id(c, k)) act = &s;
            if (spec.acts_per_community >= 2 && act) {
                act->cited_statutes.push_back(act_id(c, (k + 1) % spec.acts_per_community));
                std::sort(act->cited_statutes.begin(), act->cited_statutes.end());
            }
        }
        // A few section->section links inside the community.
        int links = std::max(1, spec.sections_per_act / 5);
        for (int l = 0; l < links; ++l) {
            int k1 = static_cast<int>(rng.next_below(spec.acts_per_community));
            int k2 = static_cast<int>(rng.next_below(spec.acts_per_community));
            int s1 = 1 + static_cast<int>(rng.next_below(spec.sections_per_act));
            int s2 = 1 + static_cast<int>(rng.next_below(spec.sections_per_act));
            std::string src = act_id(c, k1) + "_" + std::to_string(s1);
            std::string dst = act_id(c, k2) + "_" + std::to_string(s2);
            if (src == dst) continue;
            for (auto& s : sc.corpus.statutes)
                if (s.id == src) {
                    s.cited_statutes.push_back(dst);
                    std::sort(s.cited_statutes.begin(), s.cited_statutes.end());
                    s.cited_statutes.erase(std::unique(s.cited_statutes.begin(), s.cited_statutes.end()),
                                           s.cited_statutes.end());
                }
        }
    }

    auto other_community = [&](int c) {
        int o = static_cast<int>(rng.next_below(spec.communities - 1));
        return o >= c ? o + 1 : o;
    };

    for (int c = 0; c < spec.communities; ++c) {
        for (int i = 0; i < spec.docs_per_community; ++i) {
            CaseDocument doc;
            doc.id = doc_id(c, i);
            doc.case_type = (c % 2 == 0) ? CaseType::civil : CaseType::criminal;
            doc.cited_cases_listed = true;
            doc.cited_statutes_listed = true;

            std::string text;
            for (int t = 0; t < spec.tokens_per_doc; ++t) {
                if (!text.empty()) text.push_back(' ');
                if (spec.shared_vocab > 0 && rng.next_below(10) < 3)
                    text += "filler" + std::to_string(rng.next_below(spec.shared_vocab));
                else
                    text += "law" + std::to_string(c) + "w" + std::to_string(rng.next_below(spec.vocab_per_community));
            }
            doc.text = std::move(text);

            std::set<std::string> statutes;
            for (int s = 0; s < spec.statute_cites_per_doc; ++s) {
                int target_c = (spec.cross_noise > 0.0 && rng.next_double() < spec.cross_noise)
                                   ? other_community(c)
                                   : c;
                int k = static_cast<int>(rng.next_below(spec.acts_per_community));
                int n = 1 + static_cast<int>(rng.next_below(spec.sections_per_act));
                statutes.insert(act_id(target_c, k) + "_" + std::to_string(n));
            }
            doc.cited_statutes.assign(statutes.begin(), statutes.end());

            std::set<std::string> cases;
            if (i > 0) {
                for (int s = 0; s < spec.doc_cites_per_doc; ++s) {
                    if (spec.cross_noise > 0.0 && rng.next_double() < spec.cross_noise) {
                        int oc = other_community(c);
                        cases.insert(doc_id(oc, static_cast<int>(rng.next_below(spec.docs_per_community))));
                    } else {
                        cases.insert(doc_id(c, static_cast<int>(rng.next_below(i))));
                    }
                }
            }
            cases.erase(doc.id);
            doc.cited_cases.assign(cases.begin(), cases.end());
            sc.corpus.cases.push_back(std::move(doc));
            sc.community_of_doc.push_back(c);
        }
    }

    link_citations(sc.corpus);

    for (size_t i = 0; i < sc.corpus.cases.size(); ++i)
        for (size_t j = i + 1; j < sc.corpus.cases.size(); ++j) {
            PairRow row;
            row.id_a = sc.corpus.cases[i].id;
            row.id_b = sc.corpus.cases[j].id;
            row.expert = sc.community_of_doc[i] == sc.community_of_doc[j] ? 1.0 : 0.0;
            sc.labels.rows.push_back(std::move(row));
        }
    return sc;
}

void write_synthetic_corpus(const SynthCorpus& sc, const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    write_corpus(sc.corpus, out_dir + "/corpus.jsonl");
    sc.labels.save_tsv(out_dir + "/labels.tsv");
    sc.registry.save_tsv(out_dir + "/acts.tsv");
}

} // namespace lexsim
