"""Worked examples, the Werner-state sweep and the pure-state witness family."""
from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .bell import (
    BOUND_L1,
    BOUND_REL_ENT,
    TSIRELSON,
    VIOLATION_SLACK,
    SettingQuartet,
    b_cl1,
    b_cr,
    chsh,
    quartet_chsh_optimal,
    quartet_example1,
    quartet_example2,
)
from .coherence import ObservableSetting, c_l1, c_r, computational, hadamard_basis
from .errors import InvalidParameter
from .linalg import shannon_entropy
from .states import QState, max_coherent, pure_two_qubit, singlet, werner

DEFAULT_WERNER_POINTS = 201
BISECTION_TOL = 1e-10


@dataclass
class SweepRecord:
    params: dict
    b_cl1_value: float
    b_cr_value: float
    violated_l1: bool
    violated_r: bool


@dataclass
class WitnessVerdict:
    theta: float
    phi: float
    b_cr_value: float
    entangled_detected: bool


def binary_entropy(p: float) -> float:
    return shannon_entropy([p, 1.0 - p])


def witness_quartet(phi: float) -> SettingQuartet:
    """Q, T computational; R = {(|0> +- i e^{i phi}|1>)/sqrt2}; S = {|+>, |->}."""
    if not 0.0 <= phi <= 2.0 * math.pi:
        raise InvalidParameter(f"phi={phi} outside [0, 2pi]")
    w = 1j * complex(math.cos(phi), math.sin(phi))
    s2 = 1.0 / math.sqrt(2.0)
    r = ObservableSetting.from_vectors([s2, s2 * w], [s2, -s2 * w], "R")
    return SettingQuartet(computational("Q"), r, hadamard_basis("S"), computational("T"))


def witness_evaluate(theta: float, phi: float) -> WitnessVerdict:
    rho = pure_two_qubit(theta, phi)
    value = b_cr(rho, witness_quartet(phi)).value
    return WitnessVerdict(theta, phi, value, value > BOUND_REL_ENT + VIOLATION_SLACK)


def witness_l1_value(theta: float, phi: float) -> float:
    return b_cl1(pure_two_qubit(theta, phi), witness_quartet(phi)).value


def witness_rel_ent_closed_form(theta: float) -> float:
    return 4.0 + binary_entropy(math.cos(theta / 2) ** 2)


def witness_l1_closed_form(theta: float) -> float:
    return 7.0 + 3.0 * math.sin(theta)


def witness_l1_interval() -> tuple[float, float]:
    """Open interval of theta on which the l1 functional exceeds 8."""
    a = math.asin(1.0 / 3.0)
    return a, math.pi - a


def werner_rel_ent_closed_form(p: float) -> float:
    """Relative-entropy functional of the Werner state under the Example-2 quartet."""
    q = p / 4.0
    return 5.0 - binary_entropy(p / 2.0) - 2.0 * shannon_entropy([q, q, q, 1.0 - 3.0 * q])


def werner_l1_closed_form(p: float) -> float:
    return 10.0 - 8.0 * p


def werner_grid(points: int = DEFAULT_WERNER_POINTS) -> np.ndarray:
    if points < 2:
        raise InvalidParameter("need at least 2 grid points")
    return np.linspace(0.0, 1.0, points)


def _werner_point(p: float, quartet: SettingQuartet) -> SweepRecord:
    rho = werner(p)
    l1 = b_cl1(rho, quartet)
    re = b_cr(rho, quartet)
    return SweepRecord({"p": float(p)}, l1.value, re.value, l1.violated, re.violated)


def werner_sweep(p_grid=None, quartet: SettingQuartet | None = None,
                 threads: int = 1) -> list[SweepRecord]:
    """Evaluate both functionals on ``werner(p)`` for every ``p`` in the grid.

    Records come back in grid order whatever ``threads`` is.
    """
    grid = werner_grid() if p_grid is None else np.asarray(p_grid, dtype=float)
    if grid.size and (grid.min() < 0.0 or grid.max() > 1.0):
        raise InvalidParameter("Werner grid must lie in [0, 1]")
    if np.any(np.diff(grid) < 0):
        raise InvalidParameter("Werner grid must be sorted")
    quartet = quartet_example2() if quartet is None else quartet
    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            return list(pool.map(lambda p: _werner_point(p, quartet), grid))
    return [_werner_point(p, quartet) for p in grid]


def bisect_root(f, lo: float, hi: float, tol: float = BISECTION_TOL) -> float:
    flo = f(lo)
    if flo * f(hi) > 0:
        raise ValueError("root is not bracketed")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def werner_rel_ent_root() -> float:
    """Noise level where the relative-entropy functional drops to its bound 4."""
    return bisect_root(lambda p: werner_rel_ent_closed_form(p) - BOUND_REL_ENT, 0.0, 0.25)


def werner_l1_crossing() -> float:
    """Noise level where ``10 - 8p`` reaches 8."""
    return (10.0 - BOUND_L1) / 8.0


def pure_sweep(thetas, phi: float = 0.0) -> list[SweepRecord]:
    """Witness-family sweep over theta at fixed phi."""
    out = []
    for th in thetas:
        rho = pure_two_qubit(float(th), phi)
        quartet = witness_quartet(phi)
        l1 = b_cl1(rho, quartet)
        re = b_cr(rho, quartet)
        out.append(SweepRecord({"theta": float(th), "phi": float(phi)},
                               l1.value, re.value, l1.violated, re.violated))
    return out


def maximally_entangled_family(rng, count: int) -> list[QState]:
    """Singlet rotated by random local unitaries on party B."""
    from .sampling import haar_unitary

    psi = np.array([0.0, 1.0, -1.0, 0.0]) / math.sqrt(2.0)
    out = []
    for _ in range(count):
        u = np.kron(np.eye(2), haar_unitary(2, rng))
        v = u @ psi
        out.append(QState(np.outer(v, v.conj())))
    return out


# --------------------------------------------------------------------------- reproduction


@dataclass
class Check:
    name: str
    expected: float
    actual: float
    tol: float
    note: str = ""

    @property
    def delta(self) -> float:
        return self.actual - self.expected

    @property
    def passed(self) -> bool:
        return bool(np.isfinite(self.actual)) and abs(self.delta) <= self.tol

    def to_dict(self) -> dict:
        d = asdict(self)
        d.update(delta=self.delta, passed=self.passed)
        return d


@dataclass
class ScenarioRow:
    scenario: str
    b_cl1: float
    b_cr: float
    violated_l1: bool
    violated_r: bool
    chsh: float | None = None


@dataclass
class ReproductionReport:
    rows: list = field(default_factory=list)
    checks: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> list:
        return [c for c in self.checks if not c.passed]

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "rows": [asdict(r) for r in self.rows],
            "checks": [c.to_dict() for c in self.checks],
        }


def _bool(x: bool) -> float:
    return 1.0 if x else 0.0


def reproduce_all() -> ReproductionReport:
    """Re-derive every printed value of the worked examples and the witness family."""
    rep = ReproductionReport()
    add = rep.checks.append
    rt2 = math.sqrt(2.0)
    psi = singlet()

    # maximally coherent states
    for d, l1_exp, r_exp in ((2, 1.0, 1.0), (4, 3.0, 2.0)):
        st = max_coherent(d)
        settings = [computational()] * (1 if d == 2 else 2)
        add(Check(f"max_coherent d={d} C_l1", l1_exp, c_l1(st, settings), 1e-9))
        add(Check(f"max_coherent d={d} C_r", r_exp, c_r(st, settings), 1e-9))

    scenarios = (
        ("Example1", quartet_example1(), 6 + 2 * rt2, 4.2018, 5e-4, True),
        ("Example2", quartet_example2(), 10.0, 5.0, 1e-9, True),
        ("CHSH-opt", quartet_chsh_optimal(), 4 + 2 * rt2, 3.2018, 5e-4, False),
    )
    for name, quartet, l1_exp, r_exp, r_tol, violated in scenarios:
        l1 = b_cl1(psi, quartet)
        re = b_cr(psi, quartet)
        ch = chsh(psi, quartet)
        rep.rows.append(ScenarioRow(name, l1.value, re.value, l1.violated, re.violated, ch.value))
        add(Check(f"{name} B_Cl1", l1_exp, l1.value, 1e-9))
        add(Check(f"{name} B_Cr", r_exp, re.value, r_tol, "quoted to 4 decimals" if r_tol > 1e-9 else ""))
        add(Check(f"{name} l1 violated", _bool(violated), _bool(l1.violated), 0.0))
        add(Check(f"{name} rel-ent violated", _bool(violated), _bool(re.violated), 0.0))

    ex1 = b_cr(psi, quartet_example1())
    add(Check("Example1 C_r(R,S)", 1.6009, ex1.terms["RS"], 5e-5))
    add(Check("Example1 C_r(Q,S)", 2.0, ex1.terms["QS"], 1e-9))
    add(Check("Example1 C_r(Q,T)", 1.0, ex1.terms["QT"], 1e-9))
    opt = b_cl1(psi, quartet_chsh_optimal())
    for k, v in opt.terms.items():
        add(Check(f"CHSH-opt C_l1({k})+1", 2 + rt2, v, 1e-9))
    add(Check("CHSH-opt CHSH value", TSIRELSON, chsh(psi, quartet_chsh_optimal()).value, 1e-9))

    # Werner family under the Example-2 quartet
    for p in (0.0, 0.25, 0.5, 1.0):
        rec = _werner_point(p, quartet_example2())
        add(Check(f"Werner p={p} B_Cl1", werner_l1_closed_form(p), rec.b_cl1_value, 1e-9))
        add(Check(f"Werner p={p} B_Cr", werner_rel_ent_closed_form(p), rec.b_cr_value, 1e-9))
    root = werner_rel_ent_root()
    add(Check("Werner B_Cr root", 0.0725, root, 0.0075))

    # witness family
    for th in (math.pi / 2, math.pi / 3, 0.0):
        verdict = witness_evaluate(th, 1.1)
        add(Check(f"witness theta={th:.6f} B_Cr", witness_rel_ent_closed_form(th), verdict.b_cr_value, 1e-9))
        add(Check(f"witness theta={th:.6f} B_Cl1", witness_l1_closed_form(th), witness_l1_value(th, 1.1), 1e-9))
    w = witness_evaluate(math.pi / 2, 0.0)
    rep.rows.append(ScenarioRow("Witness(pi/2)", witness_l1_value(math.pi / 2, 0.0), w.b_cr_value,
                                witness_l1_value(math.pi / 2, 0.0) > BOUND_L1 + VIOLATION_SLACK,
                                w.entangled_detected))
    add(Check("witness theta=pi/2 B_Cr", 5.0, w.b_cr_value, 1e-9))
    add(Check("witness theta=pi/2 B_Cl1", 10.0, witness_l1_value(math.pi / 2, 0.0), 1e-9))
    lo, _ = witness_l1_interval()
    add(Check("witness l1 boundary at arcsin(1/3)", 8.0, witness_l1_value(lo, 0.0), 1e-9))
    return rep


# --------------------------------------------------------------------------- serialization

WERNER_HEADER = ("p", "b_cl1", "b_cr", "violated_l1", "violated_r")
WITNESS_HEADER = ("theta", "phi", "b_cl1", "b_cr", "detected")


def fmt(x: float, digits: int = 9) -> str:
    # round-off residue around zero would make output backend-dependent
    if abs(x) < 1e-12:
        x = 0.0
    return f"{x:.{digits}g}"


def _fmt_bool(b: bool) -> str:
    return "true" if b else "false"


def werner_csv(records) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(WERNER_HEADER)
    for r in records:
        w.writerow([fmt(r.params["p"]), fmt(r.b_cl1_value), fmt(r.b_cr_value),
                    _fmt_bool(r.violated_l1), _fmt_bool(r.violated_r)])
    return buf.getvalue()


def witness_csv(records) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(WITNESS_HEADER)
    for r in records:
        w.writerow([fmt(r.params["theta"]), fmt(r.params["phi"]), fmt(r.b_cl1_value),
                    fmt(r.b_cr_value), _fmt_bool(r.violated_r)])
    return buf.getvalue()


def _round9(x):
    if isinstance(x, float):
        return float(fmt(x))
    if isinstance(x, dict):
        return {k: _round9(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_round9(v) for v in x]
    return x


def records_json(records) -> str:
    return json.dumps([_round9(asdict(r)) for r in records], indent=2) + "\n"
