#pragma once

#include <string>

#include "treestab/clump.hpp"
#include "treestab/cutdense.hpp"
#include "treestab/oracle.hpp"
#include "treestab/pipeline.hpp"
#include "treestab/subdivision.hpp"
#include "treestab/tree_embed.hpp"

namespace treestab {

// All emitters produce byte-identical output for identical inputs: ordered
// keys, exact rationals as {num, den} integer pairs, no floats, no
// timestamps. Wall-clock style data stays out of these payloads.

std::string certificate_json(const CutCertificate& cert,
                             const std::string& pair_table_path = "");
std::string path_profile_json(const PathProfile& profile);
std::string embedding_json(const Embedding& emb, const std::string& tree_file,
                           const std::string& host_file, bool validated);
std::string decompose_json(const DecomposeResult& result);
std::string clump_json(const Clump& clump);
std::string subdivision_json(const SubdivisionWitness& w, const std::string& pattern_file);
std::string result_json(const StructureResult& result, const std::string& tree_file,
                        const std::string& host_file);
std::string scan_report_json(const oracle::ScanReport& report);
std::string expansion_json(const ExpansionReport& report);
std::string core_search_json(const CoreSearchResult& result);
std::string trial_json(const PreservationTrial& trial);

}  // namespace treestab
