#pragma once

#include <filesystem>
#include <span>
#include <string>

#include "ontonet/metrics.hpp"
#include "ontonet/scenario.hpp"

namespace ontonet::report {

/// `predicted,1..8` header, one row per predicted class plus `none`.
std::string confusion_csv(const metrics::Score& score, bool normalized);
/// activity,label,tp,fp,fn,precision,recall,f1,sessions,delayed,max_delay_s,mean_delay_s
std::string activity_csv(const metrics::Score& score);
/// participant,activity,time,notified_at,evidence
std::string recognitions_csv(std::span<const adl::RecognitionRecord> recognitions);
/// participant,time,node,axioms
std::string telemetry_csv(std::span<const scenario::SessionResult> sessions);
/// participant,time,procedure,nanos
std::string timing_csv(std::span<const scenario::SessionResult> sessions);
/// Score as a JSON document.
std::string score_json(const metrics::Score& score);

/// Writes every table above, the parameters as params.cfg and one
/// `<participant>.log` per session into `dir`.
void write_all(const std::filesystem::path& dir, const metrics::Score& score,
               std::span<const scenario::SessionResult> sessions, const adl::ParamSet& params);

}  // namespace ontonet::report
