#pragma once
// Random formula corpora, corpus runs over the cube logics, brute-force
// countermodel enumeration over small frames, and randomized rule-soundness
// checks. Every parallel entry point has a serial reference path with
// identical results.

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "cubeprover/search.hpp"

namespace cube {

enum class Exec { Serial, Parallel };

int modal_depth(Formula f);

struct GenOptions {
  int max_modal_depth = 3;
  int num_atoms = 3;       // atoms p, q, r
  int max_connectives = 6;
};

Formula random_formula(std::mt19937_64& rng, const GenOptions& opts = {});
// Deterministic in (count, seed, opts); duplicates are skipped.
std::vector<Formula> random_corpus(std::size_t count, std::uint64_t seed, const GenOptions& opts = {});

struct CorpusEntry {
  std::size_t goal = 0;   // index into the goal list
  std::size_t logic = 0;  // index into the logic list
  AxSet X = 0;            // axioms used by the search
  Verdict verdict = Verdict::FailedUnverified;
  SearchStats stats;
  bool bound_ok = false;     // iterations <= 2^|sf(goal)|
  bool artifact_ok = false;  // proof checks, or countermodel verifies
  Proof proof;
  std::optional<Countermodel> model;
  std::string error;
  double millis = 0;
};

struct CorpusSummary {
  std::size_t runs = 0, proved = 0, refuted = 0, failed = 0, limit = 0, errors = 0;
  std::size_t bound_violations = 0, artifact_failures = 0;
  std::size_t max_iterations = 0;
  double millis = 0;
};

std::vector<CorpusEntry> run_corpus(const std::vector<Formula>& goals, const std::vector<LogicSpec>& logics,
                                    Exec exec, const SearchOptions& opts = {});
CorpusSummary summarize(const std::vector<CorpusEntry>& entries);
// Equal verdicts, stats, proofs and models; timings are ignored.
bool same_results(const std::vector<CorpusEntry>& a, const std::vector<CorpusEntry>& b);

// Brute-force search for a countermodel with at most max_states states whose
// relation satisfies the frame conditions of X. Enumeration order: state
// count, then relation code, then valuation code; the first hit is returned.
struct BruteForceResult {
  bool found = false;
  int states = 0;
  std::uint32_t relation = 0;   // bit s*n+t set iff s R t
  std::uint32_t valuation = 0;  // bit a*n+s set iff atom a holds at s
  int root = 0;                 // least falsifying state
  std::vector<std::string> atoms;
  KripkeModel model() const;
  bool operator==(const BruteForceResult& o) const {
    return found == o.found && states == o.states && relation == o.relation && valuation == o.valuation &&
           root == o.root && atoms == o.atoms;
  }
};

BruteForceResult brute_force_countermodel(Formula goal, AxSet X, int max_states = 3, Exec exec = Exec::Serial);
// Number of relations over n states satisfying the frame conditions of X.
std::size_t count_frames(int n, AxSet X);

// Pointwise soundness of single rule steps: at every state of random models
// over frames of the rule's condition, the conjunction of the premises'
// corresponding formulas implies the conclusion's.
struct SoundnessReport {
  std::size_t instances = 0;
  std::size_t checks = 0;        // (instance, model, state) triples
  std::size_t nonvacuous = 0;    // checks where every premise held
  std::size_t violations = 0;
  std::map<std::string, std::size_t> per_rule;
  std::vector<std::string> samples;  // first few violations
};

// Rules covered: dia_*_c and the str_* rules, each over frames of its axiom;
// k and dia_k_c over arbitrary frames.
SoundnessReport rule_soundness_check(std::size_t instances, std::uint64_t seed, int max_states = 4,
                                     int models_per_instance = 6);

}  // namespace cube
