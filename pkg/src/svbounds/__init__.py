"""Bounds on (integral, stable) simplicial volume from Delta-complexes."""
from __future__ import annotations

__version__ = "0.1.0"

from .dcomplex import (ChainVector, ComplexError, DeltaComplex, barycentric_subdivision, boundary,
                       canonical_form, euler_characteristic, from_facets, fundamental_cycle,
                       is_isomorphic, load_complex, parse_complex, validate)
from .homology import HomologyProfile, homology_profile, pd_surjectivity_rank, smith_normal_form
from .pi1_covers import (Presentation, SubgroupChain, SubgroupRecord, abelianization, build_cover,
                         low_index_subgroups, presentation, subgroup_chain)
from .simplify import Move, SearchConfig, SimplifyResult, applicable_moves, apply_move, simplify
from .bounds import (BoundLedger, LedgerSet, Provenance, StableSequence, certify,
                     homology_growth_report, lower_bound_betti, lower_bound_torsion,
                     register_sv, stable_sequence, upper_bound_triangulation)
from .hypconst import HypParams, HypReport, hyp_report
