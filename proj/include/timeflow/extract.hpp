#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "timeflow/error.hpp"
#include "timeflow/model.hpp"

namespace timeflow::extract {

/// Order of the parts of a numeric date such as 08-03-2017.
enum class DateOrder { dmy, mdy, ymd };

std::optional<DateOrder> parse_date_order(std::string_view locale);
std::string_view to_string(DateOrder order);

/// Two-digit years at or above this pivot are 19xx, below it 20xx.
inline constexpr int kTwoDigitYearPivot = 70;

struct GazetteerEntry {
    std::string name;
    EntityKind kind = EntityKind::organization;
    std::vector<std::string> aliases;
    bool pinned = false;  // drawn as a node of its own, linked to every mention
};

struct Gazetteer {
    std::vector<GazetteerEntry> entries;

    std::vector<Violation> validate() const;
};

struct SubjectEntry {
    std::string label;
    std::vector<std::string> terms;
};

struct SubjectLexicon {
    std::vector<SubjectEntry> subjects;
    bool tfidf = false;
    double cosine_threshold = 0.5;

    std::vector<Violation> validate() const;
};

/// A named period such as "summer holidays". Recurring periods carry month
/// and day only and take their year from the reference date.
struct NamedPeriod {
    std::string phrase;
    bool recurring = false;
    DateInterval fixed;                 // when !recurring
    unsigned start_month = 1, start_day = 1;  // when recurring
    unsigned end_month = 1, end_day = 1;
};

struct NamedPeriodTable {
    std::vector<NamedPeriod> periods;

    std::vector<Violation> validate() const;
};

struct EventAnnotation {
    std::string id;
    std::string title;
    std::string description;
    DateInterval anchor;
    std::vector<std::string> objects;  // ids; a trailing '*' matches every id with that prefix
};

struct EventAnnotations {
    std::vector<EventAnnotation> events;
    bool auto_accept_candidates = false;
};

Gazetteer parse_gazetteer(const nlohmann::json& j);
SubjectLexicon parse_subject_lexicon(const nlohmann::json& j);
NamedPeriodTable parse_named_periods(const nlohmann::json& j);
EventAnnotations parse_event_annotations(const nlohmann::json& j);
nlohmann::json to_json(const Gazetteer& g);
nlohmann::json to_json(const SubjectLexicon& l);
nlohmann::json to_json(const NamedPeriodTable& t);
nlohmann::json to_json(const EventAnnotations& a);

// Temporal expressions ------------------------------------------------------

struct TemporalHit {
    std::size_t begin = 0;
    std::size_t end = 0;
    std::string surface;
    DateInterval interval;

    bool operator==(const TemporalHit&) const = default;
};

struct TemporalResult {
    std::vector<TemporalHit> hits;
    std::vector<Diagnostic> warnings;
};

/// Recognizes and normalizes temporal expressions: ISO dates, numeric dates
/// in the given part order (2- or 4-digit years), "first of September",
/// "September 1", "1 September", partial "01/09", today/tomorrow/yesterday,
/// next/last/this week (ISO weeks), and named periods. Forms that need a
/// reference date are skipped with a warning when none is given.
TemporalResult extract_temporal(std::string_view text, std::optional<Date> reference_date,
                                DateOrder order = DateOrder::dmy, const NamedPeriodTable& periods = {});

// Entities ------------------------------------------------------------------

struct EntityMention {
    std::string entity_id;  // empty for low-confidence candidates
    std::string name;       // canonical name, or the candidate's surface
    EntityKind kind = EntityKind::organization;
    std::size_t begin = 0;
    std::size_t end = 0;
    std::string surface;
    bool via_alias = false;
    bool candidate = false;  // capitalized sequence not in the gazetteer; needs review
};

std::string entity_id(std::string_view canonical_name);

/// Longest-match, case-insensitive, token-bounded gazetteer lookup over names
/// and aliases; alias hits link to the canonical entity. Runs of two or more
/// capitalized tokens outside any hit become candidates.
std::vector<EntityMention> extract_entities(std::string_view text, const Gazetteer& gazetteer);

// Subjects ------------------------------------------------------------------

struct SubjectHit {
    std::string subject_id;
    std::string label;
    std::size_t begin = 0;
    std::size_t end = 0;
    std::string surface;
};

std::string subject_id(std::string_view label);

/// Lexicon mode: a token (lowercased) that contains a subject term assigns
/// that subject, so "childcare" carries the term "care".
std::vector<SubjectHit> assign_subjects(std::string_view text, const SubjectLexicon& lexicon);

/// TF-IDF vectors over a document collection: raw term counts weighted by the
/// smoothed idf ln((1+N)/(1+df)) + 1, compared by cosine.
class TfidfModel {
public:
    explicit TfidfModel(const std::vector<std::string>& documents);

    double cosine(std::size_t a, std::size_t b) const;
    std::size_t size() const { return vectors_.size(); }

private:
    std::vector<std::vector<std::pair<std::string, double>>> vectors_;  // sorted by term
    std::vector<double> norms_;
};

// Events --------------------------------------------------------------------

struct ObjectFindings {
    std::string object_id;
    std::vector<TemporalHit> temporal;
    std::vector<EntityMention> entities;
};

struct EventProposals {
    std::vector<Concept> accepted;    // annotations, plus candidates when auto-accepted
    std::vector<Concept> candidates;  // awaiting analyst confirmation
};

/// Annotated events pass through as asserted. Every sentence holding both a
/// temporal expression and a gazetteer entity mention yields one derived
/// candidate anchored at the sentence's first expression. Throws Error when
/// an annotation names an unknown object.
EventProposals propose_events(const std::vector<InformationObject>& objects, const EventAnnotations& annotations,
                              const std::vector<ObjectFindings>& findings);

}  // namespace timeflow::extract
