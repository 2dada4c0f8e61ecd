"""Ramification invariants: jumps, different, depth, jump congruence.

The different is computed from the automorphism-sum formula
sum_{g != 1} (jump(g) + 1) and audited against the trace-dual
characterization: the largest m with Tr(pi^-m * O_K) inside O_k.
Disagreement between the two is a hard internal error.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ConsistencyError
from .tower import FieldTower, GroupElem, g_name


def jump_of(T: FieldTower, g: GroupElem) -> int:
    """Lower ramification jump of g: v(g(pi) - pi) - 1."""
    g = (g[0] % T.p, g[1] % T.p)
    if g == (0, 0):
        raise ValueError("the identity has no ramification jump")
    return T.jumps[g]


def different_val(T: FieldTower, audit: bool = True) -> int:
    """Valuation of the different; optionally audited by trace duality."""
    total = sum(j + 1 for j in T.jumps.values())
    if audit:
        got = _different_by_trace(T)
        if got != total:
            raise ConsistencyError(
                f"different: automorphism sum {total} != trace dual {got}")
    return total


def _different_by_trace(T: FieldTower) -> int:
    def fits(m: int) -> bool:
        # Tr(pi^(u-m)) integral for all u in [0, n)
        for u in range(T.n):
            tr = T.trace_K(T.pi_pow(u - m))
            v, ok = tr.val_bound()
            if v < 0:
                if not ok:
                    raise ConsistencyError("trace valuation uncertified")
                return False
        return True

    d = sum(j + 1 for j in T.jumps.values())
    if not fits(d) or fits(d + 1):
        # locate the actual boundary (bounded scan, for the error message)
        m = next((x for x in range(2 * d + T.n + 2) if not fits(x + 1)), -1)
        return m
    return d


def depth(T: FieldTower) -> int:
    return different_val(T, audit=False) - T.n + 1


@dataclass
class RamificationReport:
    jumps: dict[GroupElem, int]
    different: int
    depth: int
    hbar: int

    def to_json(self) -> dict:
        return {
            "jumps": {g_name(g): j for g, j in sorted(self.jumps.items())},
            "different": self.different,
            "depth": self.depth,
            "hbar": self.hbar,
        }


def report(T: FieldTower, audit: bool = True) -> RamificationReport:
    diff = different_val(T, audit=audit)
    return RamificationReport(jumps=dict(T.jumps), different=diff,
                              depth=diff - T.n + 1, hbar=T.h1 % T.p)


def check_cong(T: FieldTower) -> dict:
    """All jumps of K/k share one residue mod p, and it is h1 mod p."""
    residues = {j % T.p for j in T.jumps.values()}
    hbar = T.h1 % T.p
    passed = residues == {hbar}
    return {
        "suite": "congruence",
        "passed": passed,
        "jumps": {g_name(g): j for g, j in sorted(T.jumps.items())},
        "hbar": hbar,
        "residues": sorted(residues),
    }
