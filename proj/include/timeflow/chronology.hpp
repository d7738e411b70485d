#pragma once

#include <vector>

#include "timeflow/model.hpp"

namespace timeflow::chronology {

/// Assembles and numbers a chronology. ConsistsOf edges missing for an
/// event's constitutive objects are added. Objects and concepts are ordered
/// by id and relations by (type, from, to), so building from a built
/// chronology's parts returns an equal chronology. Throws ValidationError
/// listing every violation.
Chronology build(std::vector<InformationObject> objects, std::vector<Concept> concepts,
                 std::vector<Relation> relations, ChronologyMeta meta = {});

/// Idle stretches between consecutive events: the days strictly after the
/// latest end seen so far and before the next event's start, kept when at
/// least `min_gap_days` long. Ascending and disjoint. Throws Error unless
/// `min_gap_days` is positive.
std::vector<DateInterval> detect_gaps(const Chronology& chronology, long min_gap_days);

}  // namespace timeflow::chronology
