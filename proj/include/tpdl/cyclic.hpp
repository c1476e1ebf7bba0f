// cyclic.hpp -- cyclic proof structure: trace relations between sequents,
// the flattened derivation graph, and the global trace condition.
//
// A cyclic proof is a finite tree with each bud (open leaf) tied back to an
// interior companion carrying the same sequent.  Such a pre-proof is a proof
// when every infinite path through the unravelling has a tail along which
// some consequent formula is traced forever and unfolded (progresses)
// infinitely often.  Checking that reduces to a regularity argument over the
// finite graph: compose the per-edge trace relations along paths; the
// condition fails exactly when some node admits a self-loop relation R that
// is idempotent (R;R = R) yet has no progressing identity pair.

#pragma once

#include "tpdl/proof.hpp"

namespace tpdl {

// One step of tracing: consequent formula `from` of a conclusion continues
// as consequent formula `to` of a premise.  `progress` marks star
// unfoldings (the step premise of Cs).
struct TracePair {
    const Formula* from;
    const Formula* to;
    bool progress;

    bool operator==(const TracePair&) const = default;
};

// Sorted by schedule order on (from, to), one entry per pair, progressing
// entries absorbing non-progressing duplicates.
using TraceRelation = std::vector<TracePair>;

TraceRelation normalize_traces(TraceRelation r);
TraceRelation compose_traces(const TraceRelation& a, const TraceRelation& b);

// The trace pairs from `conclusion` into premise number `premise_index`, for
// a rule instance already pinned down by check_rule_instance.  Box rules
// (BoxModal, RevBoxModal, K) pass only their principal into its body; every
// other rule keeps common consequent formulas and rewrites its principal.
TraceRelation trace_relation(const Sequent& conclusion, const Sequent& premise,
                             int premise_index, const ResolvedRule& rule);

// The proof tree flattened to a graph over its interior nodes (preorder ids,
// root = 0).  Bud children are redirected to their companions, so every
// premise edge lands on an interior node.
struct DerivationGraph {
    struct Edge {
        int target;
        TraceRelation traces;
    };
    std::vector<Sequent> sequents;
    std::vector<std::vector<Edge>> edges;  // per node, premise order

    int size() const { return static_cast<int>(sequents.size()); }
};

// Validates the proof (check_proof) and flattens it.
CheckResult build_derivation_graph(System sys, const PreProof& proof,
                                   DerivationGraph& out);

// Global trace condition.  When it fails, `stem` is a path from the root to
// an offending node and `cycle` a loop there (first and last entry equal)
// admitting no infinitely progressing trace.
struct GtcResult {
    bool holds = true;
    std::string error;
    std::vector<int> stem;
    std::vector<int> cycle;
};

GtcResult check_gtc(const DerivationGraph& g);

// Full check: structure, every rule instance, companions, and the global
// trace condition.  For GTPDL this coincides with check_proof, since a
// finite tree has no infinite paths.
CheckResult check_cyclic_proof(System sys, const PreProof& proof);

}  // namespace tpdl
