"""Factoring runs: curve trials, stage 1 on the Kummer surface, stage 2 on E1 and E2."""

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import islice
from math import gcd

from sympy import isprime, perfect_power

from hecm.curvegen import (MULTIPLES, ConditionViolation, build_curve_system, curve_stream,
                           rational_str, reduction_clauses)
from hecm.kummer import LadderContext, ZeroOrbit, ladder_mul
from hecm.modring import FactorSignal, OpCounter, Ring
from hecm.morphism import Morphism
from hecm.multiplier import lcm_multiplier, sieve_primes
from hecm.weierstrass import CubicCurveXZ, is_identity_revealing, stage2

TRIAL_DIVISION_BOUND = 1000


class NotComposite(ValueError):
    """n is prime (or too small) so there is nothing to factor."""


@dataclass
class RunConfig:
    n: int
    B1: int
    B2: int = 0             # 0 disables stage 2
    max_curves: int = 100
    seed: int = 0
    strategy: str = MULTIPLES
    single_word: bool = False
    threads: int = 1
    params: object = None   # explicit CurveParams: a single prescribed trial

    def __post_init__(self):
        if self.max_curves < 1:
            raise ValueError("max_curves must be at least 1")
        if self.B2 and self.B2 < self.B1:
            raise ValueError("B2 must be 0 or at least B1")

    def as_dict(self):
        return {
            "n": str(self.n), "B1": self.B1, "B2": self.B2, "max_curves": self.max_curves,
            "seed": self.seed, "strategy": self.strategy, "single_word": self.single_word,
            "threads": self.threads,
            "params": None if self.params is None else ",".join(self.params.as_strings()),
        }


@dataclass
class TrialReport:
    index: int
    curve: tuple                 # (s, u, v) as strings
    outcome: str                 # factor | full-gcd | no-factor | curve-skipped
    factor: int = None
    stage: str = None            # setup | stage1 | stage2
    elliptic: int = None         # 1 or 2 when the factor came from one curve
    reason: str = None
    ops: dict = field(default_factory=dict)
    seconds: float = 0.0

    def as_dict(self):
        return {
            "index": self.index, "curve": list(self.curve), "outcome": self.outcome,
            "factor": None if self.factor is None else str(self.factor), "stage": self.stage,
            "elliptic": self.elliptic, "reason": self.reason, "ops": self.ops,
            "seconds": round(self.seconds, 6),
        }


@dataclass
class RunResult:
    n: int
    factor: int = None
    method: str = None           # trial-division | perfect-power | hecm
    trials: list = field(default_factory=list)

    @property
    def cofactor(self):
        return None if self.factor is None else self.n // self.factor

    @property
    def exhausted(self):
        return self.factor is None

    def total_ops(self):
        total = OpCounter()
        for t in self.trials:
            total = total + OpCounter(**t.ops) if t.ops else total
        return total


def _check_factor(g, n):
    if not (1 < g < n and n % g == 0):
        raise AssertionError(f"{g} is not a proper factor of {n}")
    return g


def _tag(sig, stage, elliptic=None):
    sig.stage = stage
    sig.elliptic = elliptic
    return sig


def check_reduction(cs, n):
    """Look for primes of n where the curve system degenerates.

    Returns a FactorSignal (stage "setup") when a clause vanishes modulo a
    proper factor of n, None when nothing vanishes, and raises
    ConditionViolation when a clause vanishes modulo n itself.
    """
    for clause, value in reduction_clauses(cs.params):
        g = gcd(value.numerator, n)
        if g == n:
            raise ConditionViolation(f"{clause} (mod n)", condition="reduction")
        if g > 1:
            return _tag(FactorSignal(g, n), "setup")
    return None


def hecm_stage1(n, k, cs, single_word=False, counter=None):
    """Stage 1 for one curve: returns a FactorSignal or the two x-line images of ``[k]P``.

    The returned signal carries ``stage`` ("setup" or "stage1") and, when an
    image was the identity modulo a factor, ``elliptic`` (1 or 2).
    """
    ring = Ring(n, counter)
    try:
        ctx = LadderContext.from_curve(cs, ring, single_word)
        morph = Morphism(cs, ring)
        P0 = tuple(ring(c) for c in cs.point)
    except FactorSignal as sig:
        return _tag(sig, "setup")
    try:
        Q = ladder_mul(P0, k, ctx)
        images = morph.images(Q)
    except FactorSignal as sig:
        return _tag(sig, "stage1")
    for which, P in enumerate(images, start=1):
        sig = is_identity_revealing(P, n)
        if sig is not None and sig.is_proper:
            return _tag(sig, "stage1", which)
    for which, P in enumerate(images, start=1):
        sig = is_identity_revealing(P, n)
        if sig is not None:
            return _tag(sig, "stage1", which)
    return images


def run_trial(cs, n, k, B1, B2, single_word=False):
    """Stage 1 then, if nothing was found, stage 2 on E1 and then on E2."""
    start = time.perf_counter()
    counter = OpCounter()
    curve = cs.params.as_strings()
    report = TrialReport(cs.index, curve, "no-factor")
    try:
        res = check_reduction(cs, n) or hecm_stage1(n, k, cs, single_word, counter)
    except (ZeroOrbit, ConditionViolation) as exc:
        report.outcome, report.reason = "curve-skipped", str(exc)
        res = None
    if isinstance(res, FactorSignal):
        report.stage, report.elliptic = res.stage, res.elliptic
        if res.is_proper:
            report.outcome, report.factor = "factor", _check_factor(res.g, n)
        else:
            report.outcome = "full-gcd"
    elif res is not None and B2 > B1:
        ring = Ring(n)
        for which, (P, model) in enumerate(zip(res, (cs.e1, cs.e2)), start=1):
            try:
                E = CubicCurveXZ.from_model(model, ring)
            except FactorSignal as sig:
                sig = _tag(sig, "setup")
            else:
                sig = stage2(P, E, B1, B2, n)
            if sig is None:
                continue
            report.stage, report.elliptic = "stage2", which
            if sig.is_proper:
                report.outcome, report.factor = "factor", _check_factor(sig.g, n)
                break
            report.outcome = "full-gcd"
    report.ops = counter.as_dict()
    report.seconds = time.perf_counter() - start
    return report


def _trial_job(args):
    cs, n, k, B1, B2, single_word = args
    return run_trial(cs, n, k, B1, B2, single_word)


def prefactor(n):
    """Cheap checks before any curve work: returns ``(g, method)`` or None.

    Raises NotComposite for primes and for n < 4.
    """
    if n < 4:
        raise NotComposite(f"n must be composite, got {n}")
    if isprime(n):
        raise NotComposite(f"n is prime: {n}")
    for p in sieve_primes(TRIAL_DIVISION_BOUND):
        if n % p == 0:
            return p, "trial-division"
    pp = perfect_power(n)
    if pp:
        return pp[0], "perfect-power"
    return None


def curve_source(cfg):
    if cfg.params is not None:
        return [build_curve_system(cfg.params, index=0, origin="explicit")]
    return islice(curve_stream(cfg.seed, cfg.strategy), cfg.max_curves)


def hecm_run(cfg, log=None):
    """Run trials until a proper factor appears or ``max_curves`` are used.

    With ``threads > 1`` trials are evaluated in batches on worker
    processes; the batch is then scanned in index order so the outcome is the
    same as a serial run.
    """
    n = cfg.n
    result = RunResult(n)
    pre = prefactor(n)
    if pre is not None:
        result.factor, result.method = _check_factor(pre[0], n), pre[1]
        return result
    k = lcm_multiplier(cfg.B1)
    curves = iter(curve_source(cfg))
    pool = ProcessPoolExecutor(cfg.threads) if cfg.threads > 1 else None
    try:
        while True:
            batch = list(islice(curves, max(1, cfg.threads)))
            if not batch:
                return result
            jobs = [(cs, n, k, cfg.B1, cfg.B2, cfg.single_word) for cs in batch]
            reports = pool.map(_trial_job, jobs) if pool else map(_trial_job, jobs)
            for rep in reports:
                result.trials.append(rep)
                if log is not None:
                    log(rep)
                if rep.outcome == "factor":
                    result.factor, result.method = rep.factor, "hecm"
                    return result
    finally:
        if pool is not None:
            pool.shutdown(cancel_futures=True)


def describe_params(cs):
    return ", ".join(f"{k}={rational_str(v)}" for k, v in
                     (("s", cs.params.s), ("u", cs.params.u), ("v", cs.params.v)))
