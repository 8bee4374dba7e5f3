"""
Multiplet checks: Clifford families, {Q_i, Q_j} = 2δ_ij H on every multiplet in
scope, dressing round trips and independence from the Clifford basis.
"""

from __future__ import annotations

import logging
from typing import List, Tuple

import numpy as np

from ..errors import CliffordError
from ..scf import ClosureResult, find_critical
from ..susy import (
    SUPPORTED_FAMILIES,
    FieldContent,
    build_global,
    build_multiplet,
    build_n7,
    build_root,
    clifford_generators,
    dress,
)
from .registry import AcceptanceCheck, CheckCategory, CheckContext, CheckMetadata, CheckOutcome

logger = logging.getLogger(__name__)

N_VALUES = (1, 2, 4, 8)


def global_contents(n_values=N_VALUES) -> List[FieldContent]:
    return [FieldContent((d, n, n - d)) for n in n_values for d in range(n + 1)]


def random_signed_permutation(rng: np.random.Generator, n: int) -> Tuple[List[int], List[int]]:
    perm = [int(i) for i in rng.permutation(n)]
    signs = [int(s) for s in rng.choice([-1, 1], size=n)]
    return perm, signs


class CliffordRelationsCheck(AcceptanceCheck):
    """Antisymmetry, anticommutation and γ² = −𝟙 for every supported family."""

    @property
    def metadata(self) -> CheckMetadata:
        return CheckMetadata("clifford-relations", CheckCategory.MULTIPLET, "minimal real Clifford families are exact")

    def run(self, ctx: CheckContext) -> CheckOutcome:
        for m, n in SUPPORTED_FAMILIES:
            triples = ctx.octonion_triples if n == 8 else None
            try:
                family = clifford_generators(m, n, triples)
            except CliffordError as e:
                return self.outcome(False, str(e))
            bad = family.violations()
            if bad:
                return self.outcome(False, f"({m},{n}): {bad[0]}")
        return self.outcome(True, f"{len(SUPPORTED_FAMILIES)} families")


class SupersymmetryRelationsCheck(AcceptanceCheck):
    @property
    def metadata(self) -> CheckMetadata:
        return CheckMetadata("susy-relations", CheckCategory.MULTIPLET, "{Q_i,Q_j} = 2δ_ij H on all multiplets")

    def run(self, ctx: CheckContext) -> CheckOutcome:
        multiplets = [build_root(n) for n in N_VALUES]
        multiplets += [build_global(c) for c in global_contents()]
        multiplets.append(build_n7())
        for m in multiplets:
            bad = m.relation_failures()
            if bad:
                return self.outcome(False, f"{m.content}: {bad[0]}")
        n7 = multiplets[-1]
        if n7.content.counts != (1, 7, 7, 1) or n7.n_susy != 7:
            return self.outcome(False, f"N=7 multiplet has content {n7.content} and {n7.n_susy} supercharges")
        return self.outcome(True, f"{len(multiplets)} multiplets")


class DressingRoundTripCheck(AcceptanceCheck):
    """Dressing the D undressed bosons of (D, N, N−D) lands on (0, N, N) with every supercharge local."""

    @property
    def metadata(self) -> CheckMetadata:
        return CheckMetadata("dressing-round-trip", CheckCategory.MULTIPLET, "re-dressing reaches (0,N,N)")

    def run(self, ctx: CheckContext) -> CheckOutcome:
        for content in global_contents():
            d, n = content.counts[0], content.counts[1]
            m = dress(build_global(content), range(1, d + 1))
            if m.discarded or m.content.counts != (0, n, n):
                return self.outcome(False, f"{content}: got {m.content}, discarded {m.discarded}")
            bad = m.relation_failures()
            if bad:
                return self.outcome(False, f"{content} re-dressed: {bad[0]}")
        return self.outcome(True)


class BasisIndependenceCheck(AcceptanceCheck):
    """
    Conjugate the N=4 and N=8 Clifford families by random signed permutations.

    Every N=4 content and both (1,8,7) and (1,7,7,1) must give the same
    closure kind, critical λ and algebra names under every conjugation.
    """

    PERMUTATIONS = 5
    N8_CONTENTS = (FieldContent((1, 8, 7)), FieldContent((1, 7, 7, 1)))

    @property
    def metadata(self) -> CheckMetadata:
        return CheckMetadata("basis-independence", CheckCategory.MULTIPLET, "results ignore the Clifford basis", slow=True)

    def run(self, ctx: CheckContext) -> CheckOutcome:
        base4 = clifford_generators(3, 4)
        base8 = clifford_generators(7, 8)
        n4 = global_contents((4,))
        reference = {c: find_critical(c, ctx.degree_bound) for c in n4 + list(self.N8_CONTENTS)}
        for trial in range(self.PERMUTATIONS):
            fam4 = base4.conjugated(*random_signed_permutation(ctx.rng, 4))
            fam8 = base8.conjugated(*random_signed_permutation(ctx.rng, 8))
            bad = fam8.violations()
            if bad:
                return self.outcome(False, f"N=8 conjugation {trial}: {bad[0]}")
            for contents, family in ((n4, fam4), (self.N8_CONTENTS, fam8)):
                for c in contents:
                    failures = build_multiplet(c, family).relation_failures()
                    if failures:
                        return self.outcome(False, f"{c} conjugation {trial}: {failures[0]}")
                    if not same_closure(find_critical(c, ctx.degree_bound, family), reference[c]):
                        return self.outcome(False, f"{c} changes under conjugation {trial}")
        return self.outcome(True, f"{self.PERMUTATIONS} signed permutations, {len(reference)} contents")


def same_closure(got: ClosureResult, ref: ClosureResult) -> bool:
    logger.debug("%s: %s %s vs %s %s", got.content, got.kind.value, got.critical, ref.kind.value, ref.critical)
    return (got.kind, got.critical, got.names) == (ref.kind, ref.critical, ref.names)
