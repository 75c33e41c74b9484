"""Per-level sampling parameters and their feasibility checks.

A schedule fixes, for every level ``l`` in ``[0, r]``, the layer size ``n_l``
and, for ``l >= 1``, the channel count ``d_l`` and the auxiliary-collection
sizes ``alpha_l``, ``beta_l``, ``gamma_l``.  The canonical schedule uses
``n_l = n_0 ** (34 ** l)``, ``d_l = n_{l-1}**13``, ``alpha_l = n_{l-1}**11``,
``beta_l = n_{l-1}**5`` and ``gamma_l = n_{l-1}**6``; it is astronomically
large for ``r >= 1`` and serves as a bound calculator, not a sampling target.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .errors import InfeasibleParams


@dataclass
class ParamSchedule:
    """Layer sizes and auxiliary parameters for levels 0..r.

    ``n`` has length r+1 (n[0] .. n[r]); ``d``, ``alpha``, ``beta``, ``gamma``
    have length r and are indexed so that e.g. ``d[0]`` is the level-1 value.
    """

    n: list[int]
    d: list[int] = field(default_factory=list)
    alpha: list[int] = field(default_factory=list)
    beta: list[int] = field(default_factory=list)
    gamma: list[int] = field(default_factory=list)
    canonical: bool = False

    @property
    def r(self) -> int:
        return len(self.n) - 1

    def level(self, l: int) -> dict:
        """Parameters governing the sampling of level ``l >= 1``."""
        if not 1 <= l <= self.r:
            raise InfeasibleParams(f"level {l} outside [1, {self.r}]")
        return {
            "n": self.n[l],
            "n_prev": self.n[l - 1],
            "d": self.d[l - 1],
            "alpha": self.alpha[l - 1],
            "beta": self.beta[l - 1],
            "gamma": self.gamma[l - 1],
        }

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "d": self.d,
            "alpha": self.alpha,
            "beta": self.beta,
            "gamma": self.gamma,
            "canonical": self.canonical,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, obj: dict) -> "ParamSchedule":
        if "canonical" in obj and isinstance(obj["canonical"], dict):
            spec = obj["canonical"]
            return canonical_params(int(spec["n0"]), int(spec["r"]))
        return cls(
            n=[int(x) for x in obj["n"]],
            d=[int(x) for x in obj.get("d", [])],
            alpha=[int(x) for x in obj.get("alpha", [])],
            beta=[int(x) for x in obj.get("beta", [])],
            gamma=[int(x) for x in obj.get("gamma", [])],
            canonical=bool(obj.get("canonical", False)),
        )

    @classmethod
    def from_json(cls, text: str) -> "ParamSchedule":
        return cls.from_dict(json.loads(text))


def canonical_params(n0: int, r: int) -> ParamSchedule:
    """Canonical schedule with exact integer arithmetic.

    n_l = n_0 ** (34 ** l); d_l = n_{l-1}**13; alpha_l = n_{l-1}**11;
    beta_l = n_{l-1}**5; gamma_l = n_{l-1}**6.
    """
    if n0 < 1:
        raise InfeasibleParams("n0 must be >= 1")
    if r < 0:
        raise InfeasibleParams("r must be >= 0")
    n = [n0 ** (34 ** l) for l in range(r + 1)]
    d = [n[l - 1] ** 13 for l in range(1, r + 1)]
    alpha = [n[l - 1] ** 11 for l in range(1, r + 1)]
    beta = [n[l - 1] ** 5 for l in range(1, r + 1)]
    gamma = [n[l - 1] ** 6 for l in range(1, r + 1)]
    return ParamSchedule(n=n, d=d, alpha=alpha, beta=beta, gamma=gamma, canonical=True)


def aux_draws_per_vertex_layer(n_prev: int, d: int, alpha: int, beta: int,
                               gamma: int, l: int) -> int:
    """Identities one inner vertex reserves from one other layer for auxiliaries.

    J contributes alpha*n_prev, the two K collections contribute
    beta*(l+1)*n_prev*(2*n_prev - 1), L contributes gamma*(l+1)*n_prev.
    """
    return (
        alpha * n_prev
        + beta * (l + 1) * n_prev * (2 * n_prev - 1)
        + gamma * (l + 1) * n_prev
    )


def feasibility_check(p: ParamSchedule) -> list[str]:
    """Check every level; empty list means the schedule is usable.

    Violations are returned as data rather than raised so that callers can
    report all of them at once.
    """
    out = []
    if any(x < 1 for x in p.n):
        out.append("LayerSizeViolation: all n_l must be >= 1")
        return out
    for seq, name in ((p.d, "d"), (p.alpha, "alpha"), (p.beta, "beta"),
                      (p.gamma, "gamma")):
        if len(seq) != p.r:
            out.append(f"LengthMismatch: {name} must have {p.r} entries")
            return out
        if any(x < 1 for x in seq):
            out.append(f"PositivityViolation: all {name}_l must be >= 1")
    for l in range(1, p.r + 1):
        lv = p.level(l)
        n, n_prev, d = lv["n"], lv["n_prev"], lv["d"]
        alpha, beta, gamma = lv["alpha"], lv["beta"], lv["gamma"]
        # Room for the starred set plus the disjoint per-type channel sets.
        need = n_prev * (2 * d * (l + 1) + 1)
        if need >= n:
            out.append(
                f"SamplingRoomViolation level {l}: "
                f"n_prev*(2*d*(l+1)+1) = {need} >= n = {n}"
            )
        # Inner vertices may carry up to n_prev starred channels of one type;
        # the degree target must cover them.
        if d < n_prev:
            out.append(f"DegreeViolation level {l}: d = {d} < n_prev = {n_prev}")
        # Per-layer auxiliary budget (loose bound, generalizing the canonical
        # 4*n_prev**13 count to arbitrary exponents).
        budget = 4 * n_prev * (
            alpha * n_prev
            + 2 * beta * n_prev * n_prev * (l + 1)
            + gamma * (l + 1) * n_prev
        )
        if budget > n - n_prev:
            out.append(
                f"AuxBudgetViolation level {l}: budget {budget} > n - n_prev = "
                f"{n - n_prev}"
            )
        # The publicly-fixed per-type slots (the L sets) must leave room for
        # the marginal completion to reach d channels of that type.
        if gamma * n_prev >= d:
            out.append(
                f"PublicSlotViolation level {l}: gamma*n_prev = "
                f"{gamma * n_prev} >= d = {d}"
            )
    return out


def require_feasible(p: ParamSchedule) -> None:
    bad = feasibility_check(p)
    if bad:
        raise InfeasibleParams("; ".join(bad))
