#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "timeflow/extract.hpp"
#include "timeflow/text.hpp"

namespace timeflow::extract {

std::string subject_id(std::string_view label) { return "subject:" + text::slug(label); }

std::vector<Violation> SubjectLexicon::validate() const {
    std::vector<Violation> out;
    std::set<std::string> labels;
    for (const auto& s : subjects) {
        if (!labels.insert(s.label).second) {
            out.push_back({s.label, "lexicon-unique", "subject label '" + s.label + "' is listed twice"});
        }
        for (const auto& t : s.terms) {
            if (t.empty()) {
                out.push_back({s.label, "lexicon-term", "empty term"});
            }
        }
    }
    if (!(cosine_threshold >= 0.0 && cosine_threshold <= 1.0)) {
        out.push_back({"lexicon", "lexicon-threshold", "cosine threshold outside [0,1]"});
    }
    return out;
}

std::vector<SubjectHit> assign_subjects(std::string_view input, const SubjectLexicon& lexicon) {
    std::vector<SubjectHit> out;
    auto tokens = text::tokenize(input);
    for (const auto& s : lexicon.subjects) {
        for (const auto& tok : tokens) {
            auto word = text::lower(tok.view);
            bool match = std::any_of(s.terms.begin(), s.terms.end(), [&](const std::string& term) {
                return !term.empty() && word.find(text::lower(term)) != std::string::npos;
            });
            if (match) {
                out.push_back({subject_id(s.label), s.label, tok.begin, tok.end, std::string(tok.view)});
            }
        }
    }
    return out;
}

TfidfModel::TfidfModel(const std::vector<std::string>& documents) {
    std::vector<std::map<std::string, double>> counts(documents.size());
    std::map<std::string, std::size_t> df;
    for (std::size_t i = 0; i < documents.size(); ++i) {
        for (const auto& tok : text::tokenize(documents[i])) {
            counts[i][text::lower(tok.view)] += 1.0;
        }
        for (const auto& [term, n] : counts[i]) {
            ++df[term];
        }
    }
    const double n_docs = static_cast<double>(documents.size());
    for (const auto& doc : counts) {
        std::vector<std::pair<std::string, double>> vec;
        double norm = 0;
        for (const auto& [term, tf] : doc) {
            double idf = std::log((1.0 + n_docs) / (1.0 + static_cast<double>(df[term]))) + 1.0;
            vec.emplace_back(term, tf * idf);
            norm += tf * idf * tf * idf;
        }
        vectors_.push_back(std::move(vec));
        norms_.push_back(std::sqrt(norm));
    }
}

double TfidfModel::cosine(std::size_t a, std::size_t b) const {
    if (norms_.at(a) == 0.0 || norms_.at(b) == 0.0) {
        return 0.0;
    }
    const auto& va = vectors_[a];
    const auto& vb = vectors_[b];
    if (va == vb) {
        return 1.0;
    }
    double dot = 0;
    std::size_t i = 0, j = 0;
    while (i < va.size() && j < vb.size()) {
        if (va[i].first < vb[j].first) {
            ++i;
        } else if (vb[j].first < va[i].first) {
            ++j;
        } else {
            dot += va[i++].second * vb[j++].second;
        }
    }
    return std::clamp(dot / (norms_[a] * norms_[b]), 0.0, 1.0);
}

}  // namespace timeflow::extract
