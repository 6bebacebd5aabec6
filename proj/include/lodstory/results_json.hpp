#pragma once

#include <string>
#include <string_view>

#include "lodstory/sparql.hpp"

namespace lodstory {

inline constexpr std::string_view kResultsJsonMediaType =
    "application/sparql-results+json";

// Parses a SPARQL 1.1 Query Results JSON document. Throws MalformedResults
// on anything other than a well-formed SELECT results document.
ResultSet parse_results_json(std::string_view body);

// Writes the standard results document for `rs`. Key order is fixed
// (head, results; type, value, xml:lang|datatype), output is compact.
std::string write_results_json(const ResultSet& rs);

}  // namespace lodstory
