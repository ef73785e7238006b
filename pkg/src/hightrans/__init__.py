"""Normal forms, core-freeness audits and a deterministic builder of
highly transitive actions for groups assembled from graphs of groups.

The package splits into:

  * :mod:`hightrans.groups` / :mod:`hightrans.embeddings` -- concrete group
    oracles and subgroup embeddings with exact or explicitly bounded
    membership;
  * :mod:`hightrans.normal_forms` -- Britton and alternating-syllable
    reduction, the word problem for composite groups;
  * :mod:`hightrans.hcf` -- bounded audits of the highly core-free
    condition with replayable verdicts;
  * :mod:`hightrans.action` / :mod:`hightrans.engine` -- the countable set
    Gamma x N, the partially built intertwiner, and the certified
    requirement engine;
  * :mod:`hightrans.graphs` -- graphs of groups, edge reduction, and
    hypothesis validation;
  * :mod:`hightrans.problem` / :mod:`hightrans.cli` -- problem files,
    canonical certificates and the command-line front end.
"""

from .groups import (
    AmalgamGroup,
    Element,
    FiniteGroup,
    FreeAbelianGroup,
    FreeGroup,
    Group,
    HnnGroup,
    OwnerMismatch,
    SemidirectGroup,
    UndecidedError,
    compose,
    cyclic_group,
    enumerate_ball,
    equal,
    invert,
    symmetric_group,
    trivial_group,
)
from .embeddings import Embedding, apply_embedding, coset_decompose, subgroup_contains
from .normal_forms import (
    amalgam_reduce,
    britton_reduce,
    parse_word,
    reduce_word,
    stable_letter_count,
    syllable_length,
)
from .hcf import (
    AuditBounds,
    AuditVerdict,
    CosetDomain,
    PermutationDomain,
    TranslationDomain,
    audit_hcf,
    audit_highly_faithful,
    certify_structural,
    search_E_set,
    search_G_set,
    search_H_set,
)
from .action import (
    IntertwinerState,
    LevelAction,
    Point,
    allocate_fresh_orbits,
    default_image,
    evaluate_pi,
    evaluate_w,
    orbit_rep,
    plain_level_action,
)
from .engine import (
    Budget,
    EngineProblem,
    ensure_faithful,
    extend_transitivity,
    extend_transitivity_amalgam,
    extend_transitivity_hnn,
    run_schedule,
    verify_certificate,
    verify_certificate_report,
)
from .graphs import (
    GraphEdge,
    GraphOfGroups,
    fundamental_group,
    reduce_edge,
    spanning_tree,
    validate_main_hypotheses,
)
from .problem import emit_certificate, load_certificate, parse_problem

__version__ = "0.1.0"
