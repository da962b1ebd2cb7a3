#pragma once

#include <string>
#include <vector>

#include "stlmine/cross_validation.hpp"
#include "stlmine/naval.hpp"
#include "stlmine/roge.hpp"

namespace stlmine {

// Version of every JSON document the command-line tool emits.
constexpr int kSchemaVersion = 1;

// Pretty-printed (2-space) JSON documents, newline-terminated.  All numeric
// values use shortest round-trip formatting, so identical inputs serialize to
// identical bytes.  Wall-clock measurements live exclusively under keys named
// "wall_seconds" / "total_wall_seconds" so tools can strip them before
// comparing runs.
std::string mining_result_json(const MiningResult& r, const RogeConfig& cfg,
                               double wall_seconds);
std::string cv_report_json(const CvReport& r, const RogeConfig& cfg);
std::string optimizer_trace_json(const std::vector<UcbRound>& history);
std::string classify_json(const std::string& formula_text, const Confusion& cm);
std::string naval_manifest_json(const NavalGenConfig& cfg, double dt,
                                const std::string& out_dir);

}  // namespace stlmine
