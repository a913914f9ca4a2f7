"""Belief revision over accessibility-ranked propositional bases."""

from .accessibility import (
    BadCutWitness,
    Cut,
    RankedBase,
    check_postulates,
    cut_at,
    cut_at_level,
    degree,
    in_cut,
    is_bad_cut,
    leq_af,
    most_accessible,
    set_accessibility,
)
from .context import (
    Context,
    Desideratum,
    EffortMeasure,
    Goal,
    Theorem1Report,
    achievable_goals,
    construct_context,
    context_from_cut,
    select_optimal,
    verify_corollary1,
    verify_theorem1,
)
from .entailment import EntailmentSet, entailment_sets, is_entailment_set, relevant_sentences
from .errors import *  # noqa: F401,F403
from .limits import Limits, current_limits, using_limits
from .logic import (
    BeliefBase,
    SemanticClass,
    class_of,
    declare_universe,
    entails,
    equivalent,
    is_consistent,
    is_tautology,
    semantic_classes,
    truth_table,
)
from .revision import Policy, Remainder, RevisionOutcome, SelectionPolicy, check_agm, contract, expand, remainders, revise, revise_sequence
from .syntax import BOTTOM, TOP, And, Atom, Formula, Iff, Implies, Not, Or, parse, to_text

__version__ = "0.1.0"
