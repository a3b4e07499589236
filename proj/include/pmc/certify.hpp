// Tameness-style certificates for presented categories: terminal-object
// certification per component, and triviality of the fundamental groupoid.
// Both are semi-decisions with explicit budgets; verdicts are never wrong,
// budget exhaustion yields UNKNOWN.
#pragma once

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

#include "pmc/presented.hpp"

namespace pmc {

enum class Verdict { Certified, Refuted, Unknown };

std::string to_string(Verdict v);

struct CertifyBudget {
  long long maxCriticalPairs = 20000;
  long long maxRewriteSteps = 2000;
  long long maxPathStates = 2000000;
  long long maxTietzePasses = 200;
  int maxRelatorLen = 64;
  int maxSubstOcc = 16;
  int maxQuotientGens = 8;
};

struct ComponentCertificate {
  std::string component;  // enc-least object id
  Verdict verdict = Verdict::Unknown;
  // terminal-objects evidence
  std::string terminal;
  std::vector<std::string> sinkPair;
  // groupoid evidence
  std::vector<long long> invariantFactors;
  std::vector<std::string> residualGenerators;  // empty when certified
  std::string detail;
  // embedded data for independent re-validation of REFUTED verdicts
  nlohmann::json evidence;
};

struct Certificate {
  std::string kind;  // "terminal-objects" | "groupoid-trivial"
  nlohmann::json truncation;
  std::vector<ComponentCertificate> components;

  Verdict overall() const;
  nlohmann::json toJson() const;
  static Certificate fromJson(const nlohmann::json& j);
};

Certificate terminal_certificate(const PresentedCategory& c, const CertifyBudget& b = {});
Certificate groupoid_trivial(const PresentedCategory& c, const CertifyBudget& b = {});

// re-validations used by the CLI `verify` subcommand; they work only from the
// evidence bundle embedded in a REFUTED component certificate
bool reverify_terminal_refutation(const ComponentCertificate& cc, std::string* why);
bool reverify_groupoid_refutation(const ComponentCertificate& cc, std::string* why);

}  // namespace pmc
