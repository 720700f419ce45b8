#pragma once

#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "mixlab/experiments.hpp"

namespace mixlab {

using Json = nlohmann::json;

// Reports are JSON with alphabetically ordered keys, exact rationals as
// "p/q" strings, and group elements as per-group literals, so repeated runs
// with identical arguments produce byte-identical bodies.  Timing never
// enters a report body.
inline constexpr int kSchemaVersion = 1;

Json budget_json(const Budget& b);
Budget budget_from_json(const Json& j);
Json pattern_json(const ResiduePattern& p);

Json algebra_json(const Group& g, const AlgebraElement& x);
AlgebraElement algebra_from_json(GroupPtr g, const Json& j);

// outcome payloads, each carrying a "kind" discriminator
Json verdict_json(const Group& g, const Verdict& v);
Json ss_outcome_json(const Group& g, const SearchOutcome<SSWitness>& o);
Json exceptional_json(const Group& g, const ExceptionalSet& e);
Json qn_json(const Group& g, const QNReport& r);
Json orbit_json(const Group& g, const OrbitReport& r);
Json decay_json(const Group& g, const DecayProfile& p);
Json counterexample_json(const Instance& inst, const CounterexampleReport& r);
Json hypothesis_json(const Instance& inst, const HypothesisReport& r);

// profile export: one line per sample, "index<TAB>h<TAB>numerator<TAB>denominator"
std::string decay_tsv(const Group& g, const DecayProfile& p);

// full report: {schema_version, command, instance, args, budget, outcome}
Json envelope(const std::string& instance_id, const std::string& command,
              const Json& args, const Budget& b, Json outcome);

// canonical rendering: 2-space indent, sorted keys, trailing newline
std::string render(const Json& j);

// Replays the certificates inside a rendered report: witnesses are
// re-multiplied, memberships re-tested, closed-form premises re-checked on
// the rebuilt instance, refutations re-derived and compared.  Searches for
// new witnesses are never run.  Returns false (with a reason in *why) when
// any replay fails; throws InputError when the report is structurally
// malformed or from a newer schema.
bool verify_report(const std::string& text, std::string* why = nullptr);

// The fixed reproduction suite: deterministic (filename, body) pairs
// covering every command with built-in instances and fixed budgets.
std::vector<std::pair<std::string, std::string>> repro_suite();

}  // namespace mixlab
