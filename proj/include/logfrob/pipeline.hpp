// Input ingestion, check orchestration and report assembly. A VarietySpec
// is the JSON-facing description of one run: prime, fan, divisor, optional
// twist, lifting perturbations, optional morphism, weight radius and the
// list of checks. Reports are ordered JSON with stable key order; every
// verdict is backed by a numeric artifact.

#ifndef LOGFROB_PIPELINE_HPP
#define LOGFROB_PIPELINE_HPP

#include <nlohmann/json.hpp>

#include <optional>
#include <string>

#include "logfrob/cech.hpp"
#include "logfrob/frobsplit.hpp"
#include "logfrob/specseq.hpp"

namespace logfrob {

using Json = nlohmann::ordered_json;

struct MorphismSpec {
    IMat lattice_map;
    Fan target_fan;
    DivisorSet target_divisor;
    std::map<int, std::map<int, FormSum>> target_lift; // cone -> local ray
};

struct VarietySpec {
    int p = 0;
    Fan fan;
    DivisorSet divisor;
    std::optional<Twist> twist;
    std::map<int, std::map<int, FormSum>> lift; // cone -> local ray -> poly
    std::optional<MorphismSpec> morphism;
    int weight_radius = -1; // -1: default
    std::vector<std::string> checks;
    uint64_t seed = 0;
};

VarietySpec parse_spec(const Json& j);
Json spec_to_json(const VarietySpec& spec);

struct RunOptions {
    int threads = 1;
    bool emit_timing = false;
    std::vector<std::string> check_override;
    int weight_radius_override = -1;
};

struct RunResult {
    Json report;
    bool pass = false;
};

RunResult run_spec(const VarietySpec& spec, const RunOptions& opts);

// The global weight-zero model of RGamma as a mixed Fontaine-Laffaille
// complex; asserts that every other support weight is exact page-wise.
MFLComplex build_global_mflc(Session& session, const SplitData& split);

// deterministic RNG helpers shared by the randomized suites
class Rng {
  public:
    explicit Rng(uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ull)
    {
    }
    uint64_t next();
    int below(int n); // uniform-ish in [0, n)
  private:
    uint64_t state_;
};

FrobLift random_lift(const Atlas& atlas, Rng& rng, int max_degree,
                     int max_terms);

// dimension helpers used by several checks
std::vector<int> hodge_column(Session& session, int i);

} // namespace logfrob

#endif
