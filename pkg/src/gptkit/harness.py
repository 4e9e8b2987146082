"""Stochastic measurement simulator and the report layer.

An experiment is the preparation -> transformation -> measurement
pipeline: a p-vector, an optional Z, and a partition of the identity
measurement into outcome r-vectors. Shot sampling is vectorized and
deterministic given the experiment seed.
"""

from __future__ import annotations

import configparser
import csv
import io
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from . import serialize
from .axioms import (
    check_basis_distinguishability,
    check_frequency_convergence,
    check_linearity,
    check_subspace_axiom,
    fit_power_law,
    is_completely_multiplicative,
)
from .bloch import SurfaceKind, D2Params, a_matrix, c_bounds, classify_surface, d2_assemble
from .composite import composite_from_density, dof_count_check, local_transform
from .dynamics import (
    KrausSet,
    TransformMatrix,
    apply_transform,
    continuity_probe,
    is_completely_positive,
    is_reversible,
    is_trace_nonincreasing,
    is_trace_preserving,
    kraus_to_superoperator,
    z_from_kraus,
    z_from_unitary,
)
from .errors import GptError, InvalidExperimentError
from .frames import build_canonical_frame, gram_matrix
from .states import (
    Theory,
    classical_theory,
    mix,
    p_from_density,
    quantum_theory,
    r_from_p,
)

ATOL = 1e-12
FREQUENCY_SCALES = (1_000, 10_000, 100_000, 1_000_000)


def derive_seed(root: int, *key: int) -> int:
    """Deterministic child seed for a named stream under a root seed."""
    ss = np.random.SeedSequence([int(root), *map(int, key)])
    return int(ss.generate_state(1, np.uint64)[0])


def haar_unitary(rng: np.random.Generator, n: int) -> np.ndarray:
    """Haar-random unitary (QR of a complex Gaussian, phases fixed)."""
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, r = np.linalg.qr(g)
    return q * (np.diagonal(r) / np.abs(np.diagonal(r)))


@dataclass(frozen=True)
class Experiment:
    """One preparation/transformation/measurement specification.

    ``partition`` lists the outcome r-vectors; they must sum to the
    identity measurement, so the null-outcome probability is 1 - mu.
    """

    preparation: np.ndarray
    partition: tuple[np.ndarray, ...]
    r_identity: np.ndarray
    shots: int
    seed: int
    transform: TransformMatrix | np.ndarray | None = None

    def __post_init__(self) -> None:
        prep = np.asarray(self.preparation, dtype=float)
        rs = tuple(np.asarray(r, dtype=float) for r in self.partition)
        r_identity = np.asarray(self.r_identity, dtype=float)
        if not rs:
            raise InvalidExperimentError("empty measurement partition")
        total = np.sum(rs, axis=0)
        if np.abs(total - r_identity).max() > ATOL:
            raise InvalidExperimentError("partition does not sum to the identity measurement")
        if self.shots < 0:
            raise InvalidExperimentError(f"negative shot count {self.shots}")
        object.__setattr__(self, "preparation", prep)
        object.__setattr__(self, "partition", rs)
        object.__setattr__(self, "r_identity", r_identity)


@dataclass(frozen=True)
class OutcomeCounts:
    """Shot counts per outcome; index 0 is the null outcome."""

    counts: np.ndarray
    shots: int
    seed: int

    def __post_init__(self) -> None:
        counts = np.asarray(self.counts, dtype=int)
        if counts.sum() != self.shots:
            raise InvalidExperimentError("counts do not sum to the shot count")
        object.__setattr__(self, "counts", counts)

    def frequencies(self) -> np.ndarray:
        if self.shots == 0:
            return np.zeros_like(self.counts, dtype=float)
        return self.counts / self.shots


def outcome_probabilities(exp: Experiment, atol: float = ATOL) -> np.ndarray:
    """Probability vector (null, outcome 1, ..., outcome L) of an experiment."""
    p = exp.preparation
    if exp.transform is not None:
        p = apply_transform(exp.transform, p)
    probs = np.array([float(np.asarray(r) @ p) for r in exp.partition])
    if probs.min() < -atol or probs.max() > 1.0 + atol:
        raise InvalidExperimentError(f"branch probability outside [0, 1]: {probs}")
    null = 1.0 - probs.sum()
    if null < -atol:
        raise InvalidExperimentError(f"non-null probabilities sum to {probs.sum()} > 1")
    return np.concatenate([[max(null, 0.0)], np.clip(probs, 0.0, None)])


def simulate(exp: Experiment) -> OutcomeCounts:
    """Sample the experiment shot by shot; deterministic given the seed."""
    probs = outcome_probabilities(exp)
    edges = np.cumsum(probs)
    rng = np.random.default_rng(exp.seed)
    draws = rng.random(exp.shots)
    indices = np.minimum(np.searchsorted(edges, draws, side="right"), probs.size - 1)
    counts = np.bincount(indices, minlength=probs.size)
    return OutcomeCounts(counts=counts, shots=exp.shots, seed=exp.seed)


# ---------------------------------------------------------------------------
# Axiom suite
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CheckResult:
    name: str
    status: str  # "pass" | "fail" | "expected-fail"
    max_deviation: float
    witnesses: dict[str, Any] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.status in ("pass", "expected-fail")

    def to_json(self) -> dict[str, Any]:
        return {
            "check_name": self.name,
            "status": self.status,
            "max_deviation": self.max_deviation,
            "witnesses": self.witnesses,
        }


@dataclass(frozen=True)
class SuiteReport:
    theory: str
    dimension: int
    seed: int
    checks: tuple[CheckResult, ...]

    @property
    def passed(self) -> bool:
        return all(c.ok for c in self.checks)

    def to_json(self) -> dict[str, Any]:
        return {
            "theory": self.theory,
            "dimension": self.dimension,
            "seed": self.seed,
            "passed": self.passed,
            "checks": [c.to_json() for c in self.checks],
        }


def _theory_instance(name: str, n: int) -> Theory:
    if name == "quantum":
        return quantum_theory(n)
    if name == "classical":
        return classical_theory(n)
    raise GptError(f"unknown theory {name!r}")


def _frequency_check(theory: Theory, seed: int, trials: int, scales: tuple[int, ...]) -> CheckResult:
    basis_p = [theory.basis_p[i] for i in range(min(2, theory.dimension))]
    if len(basis_p) == 1:  # n = 1 has a single basis state; mix with null
        basis_p.append(np.zeros_like(basis_p[0]))
    targets = {
        0.0: mix(basis_p, [0.0, 1.0]),
        0.25: mix(basis_p, [0.25, 0.75]),
        0.5: mix(basis_p, [0.5, 0.5]),
        1.0: mix(basis_p, [1.0, 0.0]),
    }
    partition = tuple(theory.basis_r) if theory.dimension > 1 else (theory.r_identity,)
    worst = 0.0
    reports = {}
    ok = True
    for t_idx, (p_true, prep) in enumerate(sorted(targets.items())):
        counts_by_shots: dict[int, list[int]] = {}
        for s_idx, shots in enumerate(scales):
            rows = []
            for trial in range(trials):
                exp = Experiment(
                    preparation=prep,
                    partition=partition,
                    r_identity=theory.r_identity,
                    shots=shots,
                    seed=derive_seed(seed, 1, t_idx, s_idx, trial),
                )
                rows.append(int(simulate(exp).counts[1]))
            counts_by_shots[shots] = rows
        report = check_frequency_convergence(counts_by_shots, p_true)
        ok = ok and report.passed
        worst = max(worst, max(s.max_deviation for s in report.scales))
        reports[str(p_true)] = {
            str(s.shots): {"max_deviation": s.max_deviation, "bound": s.bound}
            for s in report.scales
        }
    return CheckResult(
        name="axiom1-frequency-convergence",
        status="pass" if ok else "fail",
        max_deviation=worst,
        witnesses={"targets": reports, "trials": trials},
    )


def _power_law_check(theory: Theory, n_max: int = 6) -> CheckResult:
    if theory.name == "quantum":
        table = {n: build_canonical_frame(n).k for n in range(1, n_max + 1)}
        expected = 2
    else:
        table = {n: n for n in range(1, n_max + 1)}
        expected = 1
    mult = is_completely_multiplicative(table)
    r = fit_power_law(table) if mult.ok else None
    ok = mult.ok and r == expected
    return CheckResult(
        name="axiom2-simplicity-power-law",
        status="pass" if ok else "fail",
        max_deviation=0.0 if ok else float("nan"),
        witnesses={"table": {str(k): v for k, v in table.items()}, "exponent": r},
    )


def _subspace_check(theory: Theory) -> CheckResult:
    n = theory.dimension
    worst = 0.0
    subsets = []
    if theory.name == "quantum":
        assert theory.frame is not None
        for i in range(n):
            for j in range(i + 1, n):
                report = check_subspace_axiom(theory.frame, theory.d, {i, j})
                worst = max(worst, report.submatrix_deviation, report.disjoint_probability)
                subsets.append([i + 1, j + 1])
        if n >= 3:
            report = check_subspace_axiom(theory.frame, theory.d, set(range(3)))
            worst = max(worst, report.submatrix_deviation, report.disjoint_probability)
            subsets.append([1, 2, 3])
    else:
        for i in range(n):
            for j in range(i + 1, n):
                sel = [i, j]
                rest = [x for x in range(n) if x not in sel]
                sub_dev = float(np.abs(theory.d[np.ix_(sel, sel)] - np.eye(2)).max())
                dis_dev = float(np.abs(theory.d[np.ix_(rest, sel)]).max()) if rest else 0.0
                worst = max(worst, sub_dev, dis_dev)
                subsets.append([i + 1, j + 1])
    ok = worst <= 1e-12 and (subsets or n == 1)
    return CheckResult(
        name="axiom3-subspaces",
        status="pass" if ok else "fail",
        max_deviation=worst,
        witnesses={"subsets": subsets},
    )


def _composite_check(theory: Theory) -> CheckResult:
    other = _theory_instance(theory.name, min(theory.dimension, 2))
    rank = dof_count_check(theory.d, other.d)
    expected = theory.k * other.k
    ok = rank == expected
    return CheckResult(
        name="axiom4-composite-dof",
        status="pass" if ok else "fail",
        max_deviation=float(abs(rank - expected)),
        witnesses={"rank": rank, "expected": expected},
    )


def _continuity_check(theory: Theory, seed: int, pairs: int, steps: int) -> CheckResult:
    if theory.name == "classical":
        if theory.dimension < 2:
            return CheckResult(
                name="axiom5-continuity",
                status="pass",
                max_deviation=0.0,
                witnesses={"note": "single pure state; no pair to connect"},
            )
        report = continuity_probe(
            theory.basis_r[0], theory.basis_r[1], steps=steps, theory="classical"
        )
        expected_fail = not report.pure_path
        return CheckResult(
            name="axiom5-continuity",
            status="expected-fail" if expected_fail else "fail",
            max_deviation=report.max_deviation,
            witnesses={
                "midpoint_purity": report.midpoint_purity,
                "note": "no continuous pure path exists classically",
            },
        )
    assert theory.frame is not None
    rng = np.random.default_rng(derive_seed(seed, 5))
    n = theory.dimension
    worst = 0.0
    for _ in range(pairs):
        rs = []
        for _ in range(2):
            psi = rng.standard_normal(n) + 1j * rng.standard_normal(n)
            psi /= np.linalg.norm(psi)
            rho = np.outer(psi, psi.conj())
            rs.append(r_from_p(p_from_density(rho, theory.frame), theory.d))
        report = continuity_probe(rs[0], rs[1], steps=steps, frame=theory.frame, d=theory.d)
        worst = max(worst, report.max_deviation)
    ok = worst < 1e-9
    return CheckResult(
        name="axiom5-continuity",
        status="pass" if ok else "fail",
        max_deviation=worst,
        witnesses={"pairs": pairs, "steps": steps},
    )


def run_axiom_suite(
    theory_name: str,
    n: int,
    seed: int,
    trials: int = 8,
    scales: tuple[int, ...] = FREQUENCY_SCALES,
    pairs: int = 5,
    steps: int = 100,
) -> SuiteReport:
    """Run every axiom check against one theory instance.

    For the classical theory the continuity check is expected to fail;
    that expectation is recorded as status "expected-fail", which counts
    as an overall pass (the asymmetry is the point).
    """
    theory = _theory_instance(theory_name, n)

    basis_probs = theory.basis_r @ theory.d @ theory.basis_r.T
    basis_ok = check_basis_distinguishability(theory)
    basis_dev = float(np.abs(basis_probs - np.eye(theory.dimension)).max())

    rng = np.random.default_rng(derive_seed(seed, 6))
    pool = [theory.basis_p[i] for i in range(theory.dimension)]
    pool.append(np.zeros(theory.k))
    if theory.dimension >= 2:
        pool.append(mix(pool[:2], [0.5, 0.5]))
    lin_measurements = list(theory.basis_r) + [theory.r_identity]
    lin_worst = 0.0
    for r_m in lin_measurements:
        rep = check_linearity(r_m, pool, rng, samples=1000)
        lin_worst = max(lin_worst, rep.max_affine_deviation, rep.max_homogeneity_deviation)

    checks = (
        _frequency_check(theory, seed, trials, scales),
        _power_law_check(theory),
        _subspace_check(theory),
        _composite_check(theory),
        _continuity_check(theory, seed, pairs, steps),
        CheckResult(
            name="basis-distinguishability",
            status="pass" if basis_ok else "fail",
            max_deviation=basis_dev,
            witnesses={},
        ),
        CheckResult(
            name="measurement-linearity",
            status="pass" if lin_worst <= 1e-14 else "fail",
            max_deviation=lin_worst,
            witnesses={"samples": 1000},
        ),
    )
    return SuiteReport(theory=theory_name, dimension=n, seed=seed, checks=checks)


# ---------------------------------------------------------------------------
# Config-driven reports
# ---------------------------------------------------------------------------


def _parse_ini(text: str) -> tuple[int | None, list[dict[str, Any]]]:
    parser = configparser.ConfigParser()
    parser.read_string(text)
    seed = None
    pipelines = []
    for section in parser.sections():
        params = dict(parser.items(section))
        tokens = section.split(None, 1)
        kind = tokens[0].lower()
        if kind == "report":
            if "seed" in params:
                seed = int(params["seed"])
            continue
        name = tokens[1] if len(tokens) > 1 else kind
        pipelines.append({"kind": kind, "name": name, **params})
    return seed, pipelines


def load_config(path: str | Path) -> tuple[int | None, list[dict[str, Any]]]:
    """Load a pipeline config; JSON and INI-style key-value are accepted."""
    text = Path(path).read_text()
    stripped = text.lstrip()
    if stripped.startswith("{"):
        payload = json.loads(text)
        seed = payload.get("seed")
        pipelines = []
        for idx, entry in enumerate(payload.get("pipelines", [])):
            entry = dict(entry)
            entry.setdefault("name", entry.get("kind", f"pipeline{idx}"))
            pipelines.append(entry)
        return (int(seed) if seed is not None else None), pipelines
    return _parse_ini(text)


def _resolve_preparation(spec: str, theory: Theory, base: Path) -> np.ndarray:
    if spec == "null":
        return np.zeros(theory.k)
    if spec == "maximally-mixed":
        if theory.name == "quantum":
            assert theory.frame is not None
            return p_from_density(
                np.eye(theory.dimension, dtype=complex) / theory.dimension, theory.frame
            )
        return np.full(theory.dimension, 1.0 / theory.dimension)
    if spec.startswith("basis:"):
        idx = int(spec.split(":", 1)[1]) - 1
        if not 0 <= idx < theory.dimension:
            raise GptError(f"basis index out of range in {spec!r}")
        return theory.basis_p[idx]
    if spec.startswith("mix:"):
        lam = float(spec.split(":", 1)[1])
        return mix([theory.basis_p[0], theory.basis_p[1]], [lam, 1.0 - lam])
    if spec.startswith("file:"):
        payload = serialize.read_json(base / spec.split(":", 1)[1])
        if "matrix" in payload:  # operator file
            if theory.frame is None:
                raise GptError("operator preparations need a quantum theory")
            return p_from_density(serialize.operator_from_dict(payload), theory.frame)
        values, _, _, kind = serialize.vector_from_dict(payload)
        if kind == "r":
            return np.asarray(theory.d, dtype=float) @ values
        return values
    raise GptError(f"unknown preparation spec {spec!r}")


def _resolve_partition(spec: str, theory: Theory, base: Path) -> tuple[np.ndarray, ...]:
    if spec == "basis":
        return tuple(theory.basis_r)
    if spec == "identity":
        return (theory.r_identity,)
    if spec.startswith("file:"):
        payload = serialize.read_json(base / spec.split(":", 1)[1])
        return tuple(np.asarray(v, dtype=float) for v in payload["vectors"])
    raise GptError(f"unknown partition spec {spec!r}")


def _resolve_transform(spec: str, theory: Theory, base: Path) -> TransformMatrix | None:
    if spec in ("", "none"):
        return None
    if theory.frame is None:
        raise GptError("transformations on classical experiments are not supported here")
    kind, _, path = spec.partition(":")
    payload = serialize.read_json(base / path)
    if kind == "unitary":
        return z_from_unitary(serialize.operator_from_dict(payload), theory.frame, theory.d)
    if kind == "kraus":
        return z_from_kraus(KrausSet(serialize.kraus_from_dict(payload)), theory.frame, theory.d)
    raise GptError(f"unknown transform spec {spec!r}")


def build_experiment(params: dict[str, Any], seed: int, base: Path) -> tuple[Experiment, Theory]:
    """Build an Experiment from config parameters (see README for the grammar)."""
    theory = _theory_instance(str(params.get("theory", "quantum")), int(params.get("n", 2)))
    prep = _resolve_preparation(str(params.get("preparation", "basis:1")), theory, base)
    partition = _resolve_partition(str(params.get("partition", "basis")), theory, base)
    transform = _resolve_transform(str(params.get("transform", "none")), theory, base)
    exp = Experiment(
        preparation=prep,
        partition=partition,
        r_identity=theory.r_identity,
        shots=int(params.get("shots", 10_000)),
        seed=int(params["seed"]) if "seed" in params else seed,
        transform=transform,
    )
    return exp, theory


def _run_frame_pipeline(params: dict[str, Any], out_dir: Path) -> dict[str, Any]:
    n = int(params["n"])
    frame = build_canonical_frame(n)
    d = gram_matrix(frame)
    details: dict[str, Any] = {"dimension": n, "k": frame.k}
    if "out" in params:
        serialize.write_json(out_dir / params["out"], serialize.frame_to_dict(frame))
        details["out"] = params["out"]
    if "dmat_out" in params:
        serialize.write_json(out_dir / params["dmat_out"], serialize.dmatrix_to_dict(d, n))
        details["dmat_out"] = params["dmat_out"]
    return {"status": "pass", "max_deviation": 0.0, "details": details}


def _run_verify_pipeline(params: dict[str, Any], seed: int) -> dict[str, Any]:
    report = run_axiom_suite(
        str(params.get("theory", "quantum")),
        int(params.get("n", 2)),
        seed=int(params["seed"]) if "seed" in params else seed,
        trials=int(params.get("trials", 8)),
        pairs=int(params.get("pairs", 5)),
        steps=int(params.get("steps", 100)),
    )
    worst = max((c.max_deviation for c in report.checks), default=0.0)
    return {
        "status": "pass" if report.passed else "fail",
        "max_deviation": worst,
        "details": report.to_json(),
    }


def _run_bloch_pipeline(params: dict[str, Any]) -> dict[str, Any]:
    p = D2Params(a=float(params["a"]), b=float(params["b"]), c=float(params["c"]))
    lo, hi = c_bounds(p.a, p.b)
    surface = classify_surface(a_matrix(p))
    inside = lo < p.c < hi
    det = float(np.linalg.det(d2_assemble(p)))
    consistent = inside == (surface.kind is SurfaceKind.ELLIPSOID)
    return {
        "status": "pass" if consistent else "fail",
        "max_deviation": 0.0,
        "details": {
            "a": p.a,
            "b": p.b,
            "c": p.c,
            "c_minus": lo,
            "c_plus": hi,
            "classification": surface.kind.value,
            "eigenvalues": list(surface.eigenvalues),
            "det_d": det,
            "inside_bounds": inside,
        },
    }


def _run_transform_pipeline(params: dict[str, Any], base: Path) -> dict[str, Any]:
    if "unitary" in params:
        u = serialize.operator_from_dict(serialize.read_json(base / params["unitary"]))
        kraus = KrausSet(u[np.newaxis])
    elif "kraus" in params:
        kraus = KrausSet(serialize.kraus_from_dict(serialize.read_json(base / params["kraus"])))
    else:
        raise GptError("transform pipeline needs a 'unitary' or 'kraus' file")
    n = kraus.dimension
    theory = quantum_theory(n)
    assert theory.frame is not None
    z = (
        z_from_unitary(kraus.operators[0], theory.frame, theory.d)
        if "unitary" in params
        else z_from_kraus(kraus, theory.frame, theory.d)
    )
    witnesses = [theory.basis_p[i] for i in range(n)]
    witnesses.append(
        p_from_density(np.eye(n, dtype=complex) / n, theory.frame)
    )
    cp = is_completely_positive(kraus_to_superoperator(kraus), n)
    nonincreasing = is_trace_nonincreasing(kraus)
    details = {
        "dimension": n,
        "z": z.z.tolist(),
        "provenance": z.provenance,
        "trace_nonincreasing": nonincreasing,
        "trace_preserving": is_trace_preserving(kraus),
        "completely_positive": cp,
        "reversible": is_reversible(z, witnesses, theory.frame, theory.d, theory.r_identity),
    }
    return {
        "status": "pass" if (cp and nonincreasing) else "fail",
        "max_deviation": 0.0,
        "details": details,
    }


def _run_composite_pipeline(params: dict[str, Any], base: Path, seed: int) -> dict[str, Any]:
    rho = serialize.operator_from_dict(serialize.read_json(base / params["rho"]))
    na, nb = int(params["na"]), int(params["nb"])
    ta, tb = quantum_theory(na), quantum_theory(nb)
    assert ta.frame is not None and tb.frame is not None
    pt = composite_from_density(rho, ta.frame, tb.frame)

    rng = np.random.default_rng(derive_seed(seed, 7))
    worst = 0.0
    for _ in range(int(params.get("law_samples", 10))):
        ua = haar_unitary(rng, na)
        ub = haar_unitary(rng, nb)
        za = z_from_unitary(ua, ta.frame, ta.d)
        zb = z_from_unitary(ub, tb.frame, tb.d)
        left = local_transform(pt, za, zb)
        evolved = np.kron(ua, ub) @ rho @ np.kron(ua, ub).conj().T
        right = composite_from_density(evolved, ta.frame, tb.frame)
        worst = max(worst, float(np.abs(left - right).max()))
    rank = dof_count_check(ta.d, tb.d)
    ok = worst <= 1e-10 and rank == ta.k * tb.k
    return {
        "status": "pass" if ok else "fail",
        "max_deviation": worst,
        "details": {
            "p_tilde": serialize.composite_to_dict(pt),
            "transform_law_deviation": worst,
            "dof_rank": rank,
            "dof_expected": ta.k * tb.k,
        },
    }


def _run_simulate_pipeline(params: dict[str, Any], seed: int, base: Path, out_dir: Path) -> dict[str, Any]:
    exp, _ = build_experiment(params, seed, base)
    counts = simulate(exp)
    payload = serialize.counts_to_dict(counts.counts, counts.shots, counts.seed)
    if "out" in params:
        serialize.write_json(out_dir / params["out"], payload)
    return {"status": "pass", "max_deviation": 0.0, "details": payload}


def run_report(config_path: str | Path, out_dir: str | Path, seed: int | None = None) -> tuple[int, dict]:
    """Execute the pipelines named in a config file and write report files.

    Writes ``report.json`` and ``report.csv`` into ``out_dir``. Returns
    (exit_code, report): exit code 0 iff every pipeline passed (an
    expected failure, e.g. the classical continuity probe, counts as a
    pass).
    """
    config_path = Path(config_path)
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    config_seed, pipelines = load_config(config_path)
    root_seed = seed if seed is not None else (config_seed if config_seed is not None else 0)
    base = config_path.parent

    results = []
    all_ok = True
    for index, pipeline in enumerate(pipelines):
        kind = str(pipeline.get("kind", "")).lower()
        name = str(pipeline.get("name", kind))
        params = {k: v for k, v in pipeline.items() if k not in ("kind", "name")}
        derived = derive_seed(root_seed, 100, index)
        try:
            if kind == "frame":
                outcome = _run_frame_pipeline(params, out_dir)
            elif kind == "verify":
                outcome = _run_verify_pipeline(params, derived)
            elif kind == "bloch":
                outcome = _run_bloch_pipeline(params)
            elif kind == "transform":
                outcome = _run_transform_pipeline(params, base)
            elif kind == "composite":
                outcome = _run_composite_pipeline(params, base, derived)
            elif kind == "simulate":
                outcome = _run_simulate_pipeline(params, derived, base, out_dir)
            else:
                raise GptError(f"unknown pipeline kind {kind!r}")
        except GptError as exc:
            outcome = {"status": "error", "max_deviation": float("nan"), "details": {"error": str(exc)}}
        ok = outcome["status"] in ("pass", "expected-fail")
        all_ok = all_ok and ok
        results.append({"kind": kind, "name": name, **outcome})

    report = {"seed": root_seed, "pipelines": results}
    serialize.write_json(out_dir / "report.json", report)

    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["kind", "name", "status", "max_deviation"])
    for row in results:
        writer.writerow([row["kind"], row["name"], row["status"], repr(row["max_deviation"])])
    (out_dir / "report.csv").write_text(buffer.getvalue())

    return (0 if all_ok else 1), report
