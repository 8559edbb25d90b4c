"""Seeded property suites over a torsion pair.

Each check runs `trials` independent trials.  Trial i of a check draws from
numpy's generator seeded with (seed, salt, i), so any failing trial can be
replayed on its own.  Failures carry a serialized witness.
"""
from __future__ import annotations

import time
import zlib
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .complexes import ComplexA, derived_hom, is_quasi_iso
from .equivalence import (
    check_theta_natural,
    cover_by_T,
    realize_heart_complex,
    realized_matches,
    t_resolve_complex,
    theta,
)
from .heart import (
    abelian_check,
    from_module_map,
    heart_hom_dim,
    identity,
    is_exact_over_heart,
    shifted_object,
    stalk_object,
    torsion_decomposition,
    zero_morphism,
)
from .quiver import Representation, cokernel, hom_dim, kernel
from .sampling import (
    ext_component,
    torsion_complex_sample,
    morphism_with_ext,
    random_complex,
    random_heart_morphism,
    random_heart_object,
    random_hom,
    random_module,
    random_torsion,
    random_torsion_free,
)
from .serialize import complex_to_dict, module_to_dict, morphism_to_dict
from .torsion import NotTilting, TorsionPair, is_tilting, is_torsion, is_torsion_free, torsion_quotient, torsion_radical

PASS, FAIL, NOT_RUN = "pass", "fail", "not-run"


@dataclass
class CheckResult:
    name: str
    verdict: str
    trials: int = 0
    failures: list = field(default_factory=list)
    details: dict = field(default_factory=dict)
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return self.verdict == PASS

    def to_dict(self) -> dict:
        return {"name": self.name, "verdict": self.verdict, "trials": self.trials,
                "failures": self.failures, "details": self.details, "seconds": round(self.seconds, 3)}

    @classmethod
    def from_dict(cls, d: dict) -> "CheckResult":
        return cls(d["name"], d["verdict"], d.get("trials", 0), list(d.get("failures", [])),
                   dict(d.get("details", {})), float(d.get("seconds", 0.0)))


def trial_rng(seed: int, salt: str, trial: int) -> np.random.Generator:
    return np.random.default_rng([seed, zlib.crc32(salt.encode()), trial])


@dataclass
class SuiteConfig:
    seed: int = 0
    trials: int = 100
    only_trial: int | None = None
    full_witness: bool = False

    def indices(self) -> Iterable[int]:
        return [self.only_trial] if self.only_trial is not None else range(self.trials)


def run_check(name: str, cfg: SuiteConfig, trial: Callable[[np.random.Generator, int], dict | None],
              summarize: Callable[[], dict] | None = None) -> CheckResult:
    """`trial` returns None on success or a witness dict on failure."""
    t0 = time.perf_counter()
    failures, n = [], 0
    for i in cfg.indices():
        n += 1
        rng = trial_rng(cfg.seed, name, i)
        try:
            w = trial(rng, i)
        except Exception as exc:  # a crash inside a trial is a failure with its own witness
            w = {"error": f"{type(exc).__name__}: {exc}"}
        if w is not None:
            failures.append({"trial": i, "seed": cfg.seed, **w})
    details = summarize() if summarize else {}
    return CheckResult(name, FAIL if failures else PASS, n, failures, details, time.perf_counter() - t0)


def not_run(name: str, reason: str) -> CheckResult:
    return CheckResult(name, NOT_RUN, details={"reason": reason})


# --- torsion --------------------------------------------------------------------

def torsion_checks(tp: TorsionPair, cfg: SuiteConfig, named: Sequence[Representation] = ()) -> list[CheckResult]:
    ctx = tp.context
    fw = cfg.full_witness

    def sample(rng, i):
        if i < len(named):
            return named[i]
        return random_module(ctx, rng, 4)

    def t1(rng, i):
        x = sample(rng, i)
        incl = torsion_radical(tp, x)
        q = torsion_quotient(tp, x).target
        t, f = random_torsion(tp, rng, 3), random_torsion_free(tp, rng, 3)
        bad = [(a, b) for a, b in ((incl.source, q), (t, f)) if hom_dim(a, b) != 0]
        if bad:
            return {"torsion": module_to_dict(bad[0][0], fw), "torsion_free": module_to_dict(bad[0][1], fw)}
        return None

    def t2(rng, i):
        x = sample(rng, i)
        incl = torsion_radical(tp, x)
        pr = torsion_quotient(tp, x)
        t, q = incl.source, pr.target
        ok = (incl.is_mono() and pr.is_epi() and (pr @ incl).is_zero() and t.dim + q.dim == x.dim
              and is_torsion(tp, t) and is_torsion_free(tp, q))
        return None if ok else {"module": module_to_dict(x, fw)}

    def closure(rng, i):
        t = random_torsion(tp, rng, 4)
        k = random_module(ctx, rng, 2)
        quo = cokernel(random_hom(k, t, rng))[0]
        f = random_torsion_free(tp, rng, 4)
        sub = kernel(random_hom(f, random_module(ctx, rng, 3), rng))[0]
        if not is_torsion(tp, quo):
            return {"quotient_of_torsion": module_to_dict(quo, fw)}
        if not is_torsion_free(tp, sub):
            return {"submodule_of_torsion_free": module_to_dict(sub, fw)}
        return None

    return [run_check("torsion.T1", cfg, t1), run_check("torsion.T2", cfg, t2),
            run_check("torsion.closure", cfg, closure)]


def tilting_facts(tp: TorsionPair) -> dict:
    rep = is_tilting(tp)
    ctx = tp.context
    warnings = []
    if tp.generator.is_zero():
        warnings.append("degenerate pair: torsion class is zero")
    if not any(is_torsion_free(tp, ctx.simple(v)) for v in range(ctx.n)):
        warnings.append("degenerate pair: torsion-free class is zero")
    return {"tilting": rep.tilting,
            "injectives": {f"I{v + 1}": k.value for v, k in rep.per_vertex.items()},
            "warnings": warnings}


# --- heart ------------------------------------------------------------------------

def heart_checks(tp: TorsionPair, cfg: SuiteConfig, only: Sequence[str] | None = None) -> list[CheckResult]:
    fw = cfg.full_witness

    def abelian(rng, i):
        b1 = random_heart_object(tp, rng)
        b2 = b1 if i % 10 == 0 else random_heart_object(tp, rng)
        f = identity(b1) if i % 20 == 0 else random_heart_morphism(b1, b2, rng)
        ac = abelian_check(f)
        return None if ac.passed() else {"check": vars(ac), "morphism": morphism_to_dict(f, fw)}

    def t1(rng, i):
        f = random_torsion_free(tp, rng, 3)
        t = random_torsion(tp, rng, 3)
        d = heart_hom_dim(shifted_object(tp, f), stalk_object(tp, t))
        return None if d == 0 else {"F": module_to_dict(f, fw), "T": module_to_dict(t, fw), "dim": d}

    def t2(rng, i):
        b = random_heart_object(tp, rng)
        ok = torsion_decomposition(b).verify()
        return None if ok else {"object": complex_to_dict(b.cx, fw)}

    def embedding(rng, i):
        a, b = random_torsion(tp, rng, 3), random_torsion(tp, rng, 3)
        d1, d2 = heart_hom_dim(stalk_object(tp, a), stalk_object(tp, b)), hom_dim(a, b)
        return None if d1 == d2 else {"A": module_to_dict(a, fw), "B": module_to_dict(b, fw), "heart": d1, "module": d2}

    checks = {"heart.abelian": abelian, "heart.T1": t1, "heart.T2": t2, "heart.full_embedding": embedding}
    return [run_check(n, cfg, fn) for n, fn in checks.items() if only is None or n in only]


# --- exactness of torsion complexes: modules vs heart -----------------------------

def exactness_comparison_checks(tp: TorsionPair, cfg: SuiteConfig) -> list[CheckResult]:
    counts = Counter()
    fw = cfg.full_witness

    def trial(rng, i):
        kind, terms, diffs = torsion_complex_sample(tp, rng)
        cx = ComplexA(tp.context, dict(enumerate(terms)), dict(enumerate(diffs)))
        in_a = cx.is_acyclic()
        objs = [stalk_object(tp, m) for m in terms]
        maps = [from_module_map(objs[j], objs[j + 1], d) for j, d in enumerate(diffs)]
        in_b = is_exact_over_heart(tp, objs, maps)
        counts[f"{kind}:{'exact' if in_a else 'not-exact'}"] += 1
        if in_a == in_b:
            return None
        return {"kind": kind, "exact_in_modules": in_a, "exact_in_heart": in_b, "complex": complex_to_dict(cx, fw)}

    return [run_check("lemma21.exactness", cfg, trial, lambda: dict(sorted(counts.items())))]


# --- equivalence: covers, realization, theta, naturality, resolutions ------------------------

def cover_checks(tp: TorsionPair, cfg: SuiteConfig) -> list[CheckResult]:
    fw = cfg.full_witness

    def trial(rng, i):
        b = random_heart_object(tp, rng)
        cov = cover_by_T(tp, b)
        ok = (is_torsion(tp, cov.t_minus1.module) and is_torsion(tp, cov.t0.module) and cov.ses.verify())
        return None if ok else {"object": complex_to_dict(b.cx, fw)}

    return [run_check("theorem.cover", cfg, trial)]


def compatibility_checks(tp: TorsionPair, cfg: SuiteConfig) -> list[CheckResult]:
    udims = Counter()
    fw = cfg.full_witness

    def trial(rng, i):
        b = random_heart_object(tp, rng)
        th = theta(tp, b)
        udims[th.uniqueness_dim] += 1
        ok = realized_matches(tp, b) and th.invertible
        return None if ok else {"object": complex_to_dict(b.cx, fw), "theta_invertible": th.invertible}

    def summary():
        d = {"uniqueness_dims": {str(k): v for k, v in sorted(udims.items())}}
        if set(udims) - {1}:
            d["deviation"] = "theta compatibility space of dimension != 1 observed"
        return d

    return [run_check("theorem.compatibility", cfg, trial, summary)]


def naturality_checks(tp: TorsionPair, cfg: SuiteConfig) -> list[CheckResult]:
    ext_count = Counter()
    fw = cfg.full_witness

    def trial(rng, i):
        f = None
        if i % 2 == 0:
            for _ in range(12):
                b1, b2 = random_heart_object(tp, rng), random_heart_object(tp, rng)
                f = morphism_with_ext(b1, b2, rng)
                if f is not None:
                    break
        if f is None:
            b1 = random_heart_object(tp, rng)
            b2 = random_heart_object(tp, rng)
            f = zero_morphism(b1, b2) if i % 25 == 1 else random_heart_morphism(b1, b2, rng)
        ext_count["nonzero" if not ext_component(f).is_zero() else "zero"] += 1
        ok = check_theta_natural(tp, f)
        return None if ok else {"morphism": morphism_to_dict(f, fw)}

    return [run_check("theorem.naturality", cfg, trial, lambda: {"ext_component": dict(ext_count)})]


def exactness_checks(tp: TorsionPair, cfg: SuiteConfig) -> list[CheckResult]:
    fw = cfg.full_witness

    def trial(rng, i):
        b = random_heart_object(tp, rng)
        ses = torsion_decomposition(b) if i % 2 else cover_by_T(tp, b).ses
        r = realize_heart_complex(tp, [ses.left, ses.mid, ses.right], [ses.mono, ses.epi])
        ok = r.verified() and r.complex.is_acyclic()
        return None if ok else {"object": complex_to_dict(b.cx, fw), "realized": complex_to_dict(r.complex, fw)}

    return [run_check("theorem.exactness", cfg, trial)]


def resolution_checks(tp: TorsionPair, cfg: SuiteConfig, targets: int = 20) -> list[CheckResult]:
    ctx = tp.context
    fw = cfg.full_witness

    def trial(rng, i):
        x = random_complex(ctx, rng, max_len=3, max_dim=3)
        r = t_resolve_complex(tp, x)
        problems = []
        if not is_quasi_iso(r.qis):
            problems.append("qis")
        if not all(is_torsion(tp, t) for t in r.resolved.terms.values()):
            problems.append("membership")
        if not r.support_ok():
            problems.append("support")
        for j in range(targets):
            y = random_complex(ctx, rng, max_len=2, max_dim=3)
            n = int(rng.integers(-1, 3))
            if j % 2 == 0:
                a, b = derived_hom(x, y, n).dim, derived_hom(r.resolved, y, n).dim
            else:
                a, b = derived_hom(y, x, n).dim, derived_hom(y, r.resolved, n).dim
            if a != b:
                problems.append(f"hom dims differ against target {j} in degree {n}: {a} vs {b}")
                break
        if not problems:
            return None
        return {"problems": problems, "complex": complex_to_dict(x, fw)}

    return [run_check("theorem.resolution", cfg, trial)]


EQUIVALENCE_CHECKS = (cover_checks, compatibility_checks, naturality_checks, exactness_checks, resolution_checks)
SUITES = ("torsion", "heart", "lemma21", "theorem")
NEEDS_TILTING = {"heart", "lemma21", "theorem"}


def run_suites(tp: TorsionPair, which: str, cfg: SuiteConfig,
               named: Sequence[Representation] = ()) -> list[CheckResult]:
    """Run one suite or all of them.

    A suite that needs a tilting pair raises NotTilting when requested by
    name and is reported as not-run under "all".
    """
    names = SUITES if which == "all" else (which,)
    if which not in SUITES and which != "all":
        raise ValueError(f"unknown suite {which!r}")
    tilting = bool(is_tilting(tp))
    out: list[CheckResult] = []
    for s in names:
        if s in NEEDS_TILTING and not tilting:
            if which != "all":
                raise NotTilting(f"suite {s!r} needs a tilting torsion pair")
            out.append(not_run(s, "torsion pair is not tilting"))
            continue
        if s == "torsion":
            out += torsion_checks(tp, cfg, named)
        elif s == "heart":
            out += heart_checks(tp, cfg)
        elif s == "lemma21":
            out += exactness_comparison_checks(tp, cfg)
        else:
            for fn in EQUIVALENCE_CHECKS:
                out += fn(tp, cfg)
    return out
