// game.hpp -- the proof-search game deciding forward-only (PDL) sequents.
//
// Positions carry a sequent, a track (tagged consequent formulas whose
// unfolding history the winning condition inspects), and a schedule of
// reducible formulas still to be processed this round.  The prover wins a
// play that closes (shared formula, or false on the left) or repeats a
// position such that some tag survives the whole window, its formula changed
// at least once, and no box jump reset track 0; the refuter wins any other
// repeat.  Play alternates mechanically: the least active formula is reduced
// (refuter choosing branches for ImpL/ChoiceR/Cs/TestL shapes), and when
// nothing is active the prover either jumps through a tracked atomic box (GK)
// or refreshes the schedule (GRetry).
//
// A winning prover strategy folds into a cyclic CGPDL proof; a winning
// refuter strategy folds into a finite countermodel.  decide() runs the
// search and re-checks whichever artifact comes out.

#pragma once

#include <cstdint>
#include <optional>
#include <utility>

#include "tpdl/closure.hpp"
#include "tpdl/kripke.hpp"
#include "tpdl/proof.hpp"

namespace tpdl {

// Tag -> formula map, entries sorted by tag (tags unique, formulas not
// necessarily).
using Track = std::vector<std::pair<int, const Formula*>>;

int fresh_tag(const Track& t);  // least positive integer not in use
const Formula* tracked_formula(const Track& t, int tag);  // null if absent
Track retag(Track t, const Formula* from, const Formula* to);

struct Position {
    Sequent seq;
    Track track;
    FormulaSet sched;

    bool operator==(const Position&) const = default;
};

// Track holds the consequent in schedule order under tags 1..n; the schedule
// holds every reducible formula of the sequent's closure.
Position initial_position(const Sequent& s);

// Closed for the prover: shared formula, or false in the antecedent.
bool prover_terminal(const Position& p);

enum class MoveKind {
    GImpL,
    GImpR,
    GSeqL,
    GSeqR,
    GChoiceL,
    GChoiceR,
    GStarL,
    GCs,
    GTestL,
    GTestR,
    GK,
    GRetry,
};
const char* to_string(MoveKind k);

enum class Turn { Forced, RefuterChoice, ProverChoice };

// Who picks the next move at a non-terminal position: the refuter at its
// branching reductions (GImpL, GChoiceR, GCs, GTestL), the prover when
// nothing is active (GK / GRetry), nobody otherwise.
Turn turn(const Position& p);

struct Move {
    MoveKind kind;
    const Formula* subject = nullptr;  // reduced formula / GK box; null for GRetry
    int option = 0;                    // branch number within an R-choice
    bool resets_track0 = false;        // GK only: tag 0 did not already track the box
    Position result;
};

std::vector<Move> legal_moves(const Position& p);

// ---------------------------------------------------------------------------
// Solving.

enum class Winner { Prover, Refuter };

struct StrategyNode {
    enum class Kind { AxLike, BotLike, Repeat, Forced, RefuterChoice, ProverChoice };
    Kind kind = Kind::Forced;
    Position pos;
    int repeat_depth = -1;       // Repeat: index of the equal ancestor on the path
    std::vector<Move> moves;     // kept edges (all of them for the opponent's turns)
    std::vector<StrategyNode> children;  // aligned with moves
};

struct SolveOutcome {
    std::optional<Winner> winner;  // empty: budget exhausted
    StrategyNode strategy;         // the winner's strategy
    uint64_t positions_visited = 0;
};

SolveOutcome solve(const Sequent& s, uint64_t budget = 10'000'000);

// A prover strategy, folded into a cyclic proof using Cs/K/Wk and the
// one-step reduction rules (CGPDL; repeats become buds).
PreProof strategy_to_proof(const StrategyNode& prover_strategy);

// A refuter strategy, folded into a countermodel: one state per stabilized
// world of the strategy graph, atomic edges from the tracked boxes of each
// world's core position.
struct ExtractedModel {
    KripkeModel model;
    int state = 0;  // where the sequent fails
};
ExtractedModel strategy_to_model(const StrategyNode& refuter_strategy);

// ---------------------------------------------------------------------------
// The decision procedure: solve, then certify the artifact (proofs are
// re-checked including the trace condition, models re-checked against the
// sequent); certification failure throws std::logic_error.  Forward-only
// sequents only; throws std::invalid_argument otherwise.

enum class Verdict { Proved, Refuted, Inconclusive };

struct Decision {
    Verdict verdict = Verdict::Inconclusive;
    PreProof proof;        // Proved
    KripkeModel model;     // Refuted
    int model_state = -1;  // Refuted
    uint64_t positions_visited = 0;
};

Decision decide(const Sequent& s, uint64_t budget = 10'000'000);

}  // namespace tpdl
