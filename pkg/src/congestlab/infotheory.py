"""Exact Shannon measures over explicit finite distributions.

All logarithms are base 2, so every quantity is in bits and compares
directly against per-message bandwidth.  Zero-probability outcomes follow
the 0 * log(1/0) = 0 convention; a KL divergence with a support violation
is reported as math.inf rather than raised.
"""

from __future__ import annotations

import itertools
import math
import random

from .errors import InvalidCoordinate, InvalidDistribution, PremiseViolated

IDENTITY_TOL = 1e-12
PROPERTY_TOL = 1e-9


class FiniteDistribution:
    """Explicit probability table over a finite outcome set."""

    def __init__(self, probs: dict):
        total = 0.0
        for x, p in probs.items():
            if p < -IDENTITY_TOL:
                raise InvalidDistribution(f"negative probability at {x!r}")
            total += p
        if abs(total - 1.0) > 1e-9:
            raise InvalidDistribution(f"probabilities sum to {total}")
        self.probs = {x: max(0.0, float(p)) for x, p in probs.items()}

    def support(self):
        return [x for x, p in self.probs.items() if p > 0]

    def __getitem__(self, x):
        return self.probs.get(x, 0.0)


class JointTable:
    """Joint probability table over named finite coordinates."""

    def __init__(self, coords: list, table: dict):
        self.coords = list(coords)
        for key in table:
            if len(key) != len(self.coords):
                raise InvalidCoordinate(f"entry {key!r} arity mismatch")
        FiniteDistribution({k: p for k, p in table.items()})  # validates
        self.table = {k: float(p) for k, p in table.items() if p > 0}

    def _axes(self, names):
        try:
            return [self.coords.index(n) for n in names]
        except ValueError as exc:
            raise InvalidCoordinate(str(exc)) from None

    def marginal(self, names) -> FiniteDistribution:
        axes = self._axes(names)
        out = {}
        for key, p in self.table.items():
            sub = tuple(key[a] for a in axes)
            out[sub] = out.get(sub, 0.0) + p
        return FiniteDistribution(out)

    def conditional(self, target, given, given_value) -> FiniteDistribution:
        t_axes = self._axes(target)
        g_axes = self._axes(given)
        num, den = {}, 0.0
        for key, p in self.table.items():
            if tuple(key[a] for a in g_axes) != tuple(given_value):
                continue
            den += p
            sub = tuple(key[a] for a in t_axes)
            num[sub] = num.get(sub, 0.0) + p
        if den <= 0:
            raise InvalidDistribution("conditioning event has probability 0")
        return FiniteDistribution({k: v / den for k, v in num.items()})


def entropy(d: FiniteDistribution) -> float:
    return sum(p * math.log2(1 / p) for p in d.probs.values() if p > 0)


def cond_entropy(j: JointTable, target, given) -> float:
    gdist = j.marginal(given)
    out = 0.0
    for gval, gp in gdist.probs.items():
        if gp > 0:
            out += gp * entropy(j.conditional(target, given, gval))
    return out


def mutual_info(j: JointTable, a, b) -> float:
    return entropy(j.marginal(a)) - cond_entropy(j, a, b)


def cond_mutual_info(j: JointTable, a, b, c) -> float:
    return cond_entropy(j, a, c) - cond_entropy(j, a, list(b) + list(c))


def kl(p: FiniteDistribution, q: FiniteDistribution) -> float:
    out = 0.0
    for x, px in p.probs.items():
        if px <= 0:
            continue
        qx = q[x]
        if qx <= 0:
            return math.inf
        out += px * math.log2(px / qx)
    return out


def tvd(p: FiniteDistribution, q: FiniteDistribution) -> float:
    keys = set(p.probs) | set(q.probs)
    return 0.5 * sum(abs(p[x] - q[x]) for x in keys)


def pinsker_check(p: FiniteDistribution, q: FiniteDistribution):
    d = tvd(p, q)
    bound = math.sqrt(kl(p, q) / 2) if kl(p, q) < math.inf else math.inf
    return d, bound, d <= bound + IDENTITY_TOL


def mi_kl_identity_check(j: JointTable, a, b, c) -> float:
    """Gap of I(A;B|C) = E_{B,C} KL(A|B,C || A|C)."""
    lhs = cond_mutual_info(j, a, b, c)
    rhs = 0.0
    bc = list(b) + list(c)
    bcd = j.marginal(bc)
    for val, p in bcd.probs.items():
        if p <= 0:
            continue
        cval = tuple(val[len(b):])
        rhs += p * kl(j.conditional(a, bc, val), j.conditional(a, c, cval))
    return abs(lhs - rhs)


def tvd_chain_bound_check(mu: JointTable, nu: JointTable):
    """Chain bound: ||mu - nu|| <= sum_i E_{prefix~mu} ||mu_i|pre - nu_i|pre||."""
    if mu.coords != nu.coords:
        raise InvalidCoordinate("coordinate structures differ")
    lhs = tvd(mu.marginal(mu.coords), nu.marginal(nu.coords))
    rhs = 0.0
    for i, name in enumerate(mu.coords):
        prefix = mu.coords[:i]
        if not prefix:
            rhs += tvd(mu.marginal([name]), nu.marginal([name]))
            continue
        for pval, pp in mu.marginal(prefix).probs.items():
            if pp <= 0:
                continue
            try:
                nu_cond = nu.conditional([name], prefix, pval)
            except InvalidDistribution:
                # nu gives the observed prefix probability 0: the slice
                # contributes its full mass
                rhs += pp
                continue
            rhs += pp * tvd(mu.conditional([name], prefix, pval), nu_cond)
    return lhs, rhs, lhs <= rhs + PROPERTY_TOL


def overconditioning_check(xz: JointTable, yz: JointTable):
    """||X - Y|| <= ||XZ - YZ|| with the conditional-average equality."""
    lhs = tvd(xz.marginal([xz.coords[0]]), yz.marginal([yz.coords[0]]))
    joint = tvd(xz.marginal(xz.coords), yz.marginal(yz.coords))
    # the averaged form requires both tables to share the Z marginal
    zname = [xz.coords[1]]
    zx, zy = xz.marginal(zname), yz.marginal(zname)
    averaged = None
    if tvd(zx, zy) <= IDENTITY_TOL:
        averaged = 0.0
        for zval, zp in zx.probs.items():
            if zp <= 0:
                continue
            averaged += zp * tvd(
                xz.conditional([xz.coords[0]], zname, zval),
                yz.conditional([yz.coords[0]], zname, zval),
            )
    holds = lhs <= joint + PROPERTY_TOL
    if averaged is not None:
        holds = holds and abs(joint - averaged) <= PROPERTY_TOL
    return lhs, joint, averaged, holds


# -- randomized property tables -------------------------------------------


def random_joint(coords, sizes, rng: random.Random) -> JointTable:
    keys = list(itertools.product(*[range(s) for s in sizes]))
    weights = [rng.random() for _ in keys]
    total = sum(weights)
    return JointTable(coords, {k: w / total for k, w in zip(keys, weights)})


def random_distribution(size, rng: random.Random) -> FiniteDistribution:
    weights = [rng.random() for _ in range(size)]
    total = sum(weights)
    return FiniteDistribution({i: w / total for i, w in enumerate(weights)})


def _normalized(weights):
    total = sum(weights)
    return [w / total for w in weights]


def table_with_a_indep_d_given_c(sizes, rng: random.Random) -> JointTable:
    """A four-coordinate table factored as p(c) p(a|c) p(d|c) p(b|a,c,d)."""
    sa, sb, sc, sd = sizes
    pc = _normalized([rng.random() for _ in range(sc)])
    pa_c = {c: _normalized([rng.random() for _ in range(sa)]) for c in range(sc)}
    pd_c = {c: _normalized([rng.random() for _ in range(sd)]) for c in range(sc)}
    pb = {
        (a, c, d): _normalized([rng.random() for _ in range(sb)])
        for a in range(sa) for c in range(sc) for d in range(sd)
    }
    table = {}
    for a in range(sa):
        for b in range(sb):
            for c in range(sc):
                for d in range(sd):
                    table[(a, b, c, d)] = (
                        pc[c] * pa_c[c][a] * pd_c[c][d] * pb[(a, c, d)][b]
                    )
    return JointTable(["A", "B", "C", "D"], table)


def table_with_a_indep_d_given_bc(sizes, rng: random.Random) -> JointTable:
    """A four-coordinate table factored as p(b,c) p(a|b,c) p(d|b,c)."""
    sa, sb, sc, sd = sizes
    pbc = {}
    for b in range(sb):
        for c in range(sc):
            pbc[(b, c)] = rng.random()
    total = sum(pbc.values())
    pbc = {k: v / total for k, v in pbc.items()}
    pa = {k: _normalized([rng.random() for _ in range(sa)]) for k in pbc}
    pd = {k: _normalized([rng.random() for _ in range(sd)]) for k in pbc}
    table = {}
    for (b, c), p in pbc.items():
        for a in range(sa):
            for d in range(sd):
                table[(a, b, c, d)] = p * pa[(b, c)][a] * pd[(b, c)][d]
    return JointTable(["A", "B", "C", "D"], table)


def _verify_ci(j: JointTable, a, d, given):
    """Check A independent of D given the listed coordinates."""
    for gval, gp in j.marginal(given).probs.items():
        if gp <= 0:
            continue
        pa = j.conditional(a, given, gval)
        pd = j.conditional(d, given, gval)
        pad = j.conditional(list(a) + list(d), given, gval)
        for av in pa.probs:
            for dv in pd.probs:
                expect = pa[av] * pd[dv]
                if abs(pad[av + dv] - expect) > 1e-9:
                    raise PremiseViolated(
                        f"conditional independence fails at {gval}"
                    )


def monotonicity_checks(rng: random.Random, tables: int = 50) -> dict:
    """Inequality suite on randomized tables, premises enforced by
    construction and re-verified numerically."""
    report = {"cmi_le_entropy": True, "conditioning_reduces_entropy": True,
              "extra_conditioning_raises_mi": True,
              "extra_conditioning_lowers_mi": True}
    for _ in range(tables):
        j = random_joint(["A", "B", "C"], [2, 3, 2], rng)
        if cond_mutual_info(j, ["A"], ["B"], ["C"]) > entropy(j.marginal(["B"])) + PROPERTY_TOL:
            report["cmi_le_entropy"] = False
        if cond_entropy(j, ["A"], ["B", "C"]) > cond_entropy(j, ["A"], ["B"]) + PROPERTY_TOL:
            report["conditioning_reduces_entropy"] = False
        j2 = table_with_a_indep_d_given_c([2, 2, 2, 2], rng)
        _verify_ci(j2, ["A"], ["D"], ["C"])
        if (cond_mutual_info(j2, ["A"], ["B"], ["C"])
                > cond_mutual_info(j2, ["A"], ["B"], ["C", "D"]) + PROPERTY_TOL):
            report["extra_conditioning_raises_mi"] = False
        j3 = table_with_a_indep_d_given_bc([2, 2, 2, 2], rng)
        _verify_ci(j3, ["A"], ["D"], ["B", "C"])
        if (cond_mutual_info(j3, ["A"], ["B"], ["C"])
                < cond_mutual_info(j3, ["A"], ["B"], ["C", "D"]) - PROPERTY_TOL):
            report["extra_conditioning_lowers_mi"] = False
    return report
