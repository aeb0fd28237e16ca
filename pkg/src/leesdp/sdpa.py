"""Sparse SDPA (.dat-s) emission, a reader for our own files, and solver-output parsing.

Convention of the format: minimize c^T x subject to sum_i F_i x_i - F_0 >= 0
(PSD). A program "maximize obj(z) s.t. sum_w z(w) A_w + A_const >= 0" is
written with F_i = A_{w_i}, F_0 = -A_const and c = -obj, so the optimum of
the maximization is minus the reported objective.
"""

from __future__ import annotations

import math
import os
import re
import shlex
import subprocess
import tempfile
from dataclasses import dataclass, field
from fractions import Fraction

from .program import SdpProgram

SOLVER_ENV = "LEESDP_SOLVER"


class EmissionError(ValueError):
    pass


class SolverOutputError(ValueError):
    pass


class SolverFailure(RuntimeError):
    def __init__(self, msg, output=""):
        super().__init__(msg)
        self.output = output


def _fmt(v) -> str:
    if isinstance(v, Fraction):
        if v.denominator == 1:
            return str(v.numerator)
        v = float(v)
    if isinstance(v, int):
        return str(v)
    v = float(v)
    if not math.isfinite(v):
        raise EmissionError(f"non-finite coefficient {v}")
    if v == int(v) and abs(v) < 2 ** 53:
        return str(int(v))
    return repr(v)


def emit_sdpa(p: SdpProgram, scale: bool = False) -> str:
    """Serialize ``p``. With ``scale`` the T block's second row/column and the
    objective are divided by q^n (so the reported value is the bound / q^n)."""
    qn = p.q ** p.n
    index = {o: i + 1 for i, o in enumerate(p.variables)}
    full = [b for b in p.blocks if b.dim > 1]
    diag = [b for b in p.blocks if b.dim == 1]
    struct = [b.dim for b in full] + ([-len(diag)] if diag else [])

    obj = [0] * len(p.variables)
    for o, c in p.objective.coeffs.items():
        obj[index[o] - 1] = -(Fraction(c) / qn if scale else c)
    if p.objective.constant:
        raise EmissionError("objective constant is not representable")

    lines = []
    # (matno, blkno, i, j, value); constants go to F_0 with flipped sign
    def put(blk, i, j, form, factor=1):
        if form.constant:
            v = -form.constant * factor
            lines.append((0, blk, i, j, v))
        for o, c in form.coeffs.items():
            lines.append((index[o], blk, i, j, c * factor))

    for bno, b in enumerate(full, start=1):
        for i in range(b.dim):
            for j in range(i, b.dim):
                factor = 1
                if scale and b.label == "T":
                    factor = Fraction(1, qn ** ((i == 1) + (j == 1)))
                put(bno, i + 1, j + 1, b.entries[i][j], factor)
    if diag:
        bno = len(full) + 1
        for k, b in enumerate(diag, start=1):
            put(bno, k, k, b.entries[0][0])
    lines.sort(key=lambda t: t[:4])

    s = p.summary(scale)
    out = [
        f'"leesdp {s["variant"]} q={p.q} n={p.n} d={p.d} metric={s["metric"]} route={s["route"]}"',
        f'"objective_scale={s["objective_scale"]} maximize; bound = -(reported objective) * objective_scale"',
        str(len(p.variables)),
        str(len(struct)),
        " ".join(map(str, struct)),
        " ".join(_fmt(v) for v in obj),
    ]
    for m, bno, i, j, v in lines:
        if v != 0:
            out.append(f"{m} {bno} {i} {j} {_fmt(v)}")
    return "\n".join(out) + "\n"


@dataclass
class SdpaData:
    m: int
    struct: list[int]
    c: list[float]
    # entries[(matno, blkno)] = {(i, j): value}
    entries: dict[tuple[int, int], dict[tuple[int, int], float]] = field(default_factory=dict)

    def block_dims(self) -> list[int]:
        return [abs(s) for s in self.struct]


def read_sdpa(text: str) -> SdpaData:
    rows = [ln for ln in text.splitlines() if ln.strip() and ln.lstrip()[0] not in '"*']
    if len(rows) < 4:
        raise ValueError("truncated SDPA file")
    tok = lambda ln: [t for t in re.split(r"[\s,{}()]+", ln.strip()) if t]
    m = int(tok(rows[0])[0])
    nb = int(tok(rows[1])[0])
    struct = [int(t) for t in tok(rows[2])[:nb]]
    c = [float(t) for t in tok(rows[3])[:m]]
    data = SdpaData(m, struct, c)
    for ln in rows[4:]:
        a, b, i, j, v = tok(ln)[:5]
        data.entries.setdefault((int(a), int(b)), {})[(int(i), int(j))] = float(v)
    return data


# --- solver output --------------------------------------------------------------------

@dataclass
class SolverResult:
    raw: float
    bound: int
    primal: float
    dual: float
    gap: float
    verified: bool
    phase: str = ""

    def describe(self, decimals: int = 3) -> str:
        flag = "" if self.verified else "  [UNVERIFIED]"
        return f"raw={self.raw:.{decimals}f} floor={self.bound} gap={self.gap:.2e} phase={self.phase or '?'}{flag}"


# phases after which a small primal-dual gap certifies the value
_TRUSTED_PHASES = ("", "pdOPT", "pdFEAS", "pFEAS", "dFEAS")

_NUM = r"([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)"


def _grab(text, *names):
    for name in names:
        m = re.search(rf"{name}\s*[=:]\s*{_NUM}", text)
        if m:
            return float(m.group(1))
    return None


def parse_solution_and_floor(text: str, scale: float | int = 1, tol: float = 1e-5,
                             gap_tol: float = 1e-4, flavor: str = "sdpa") -> SolverResult:
    """Read the optimum of a program emitted by :func:`emit_sdpa` from solver output.

    ``scale`` is the objective_scale of the emission. ``flavor`` is ``sdpa``
    (objValPrimal / objValDual, values of c^T x) or ``csdp`` (Primal/Dual
    objective value lines, where the sign and labels are swapped).
    """
    if flavor == "sdpa":
        primal = _grab(text, "objValPrimal")
        dual = _grab(text, "objValDual")
        phase = re.search(r"phase\.value\s*=\s*(\S+)", text)
        phase = phase.group(1) if phase else ""
        if primal is None or dual is None:
            raise SolverOutputError("no objValPrimal/objValDual in solver output")
        # values of c^T x with c = -objective
        primal, dual = -primal * scale, -dual * scale
    elif flavor == "csdp":
        p = _grab(text, "Primal objective value")
        d = _grab(text, "Dual objective value")
        if p is None or d is None:
            raise SolverOutputError("no objective values in CSDP output")
        # CSDP maximizes tr(F_0 Y) on the other side; its 'dual' is our c^T x
        primal, dual = -d * scale, -p * scale
        phase = "pdOPT" if "Success" in text else ""
    else:
        raise ValueError(f"unknown solver flavor {flavor!r}")
    raw = max(primal, dual)
    gap = abs(primal - dual) / max(1.0, abs(raw))
    verified = gap <= gap_tol and phase in _TRUSTED_PHASES
    return SolverResult(raw, math.floor(raw + tol), primal, dual, gap, verified, phase)


def resolve_solver(path: str | None = None) -> str | None:
    return path or os.environ.get(SOLVER_ENV) or None


def run_solver(p: SdpProgram, solver: str | None = None, scale: bool = False,
               workdir: str | None = None, timeout: float | None = None,
               flavor: str = "sdpa") -> SolverResult:
    """Emit ``p``, run ``solver <input> <output>`` and parse the result."""
    cmd = resolve_solver(solver)
    if not cmd:
        raise SolverFailure(f"no solver configured (pass a path or set {SOLVER_ENV})")
    with tempfile.TemporaryDirectory(dir=workdir) as tmp:
        src = os.path.join(tmp, "problem.dat-s")
        dst = os.path.join(tmp, "problem.out")
        with open(src, "w") as fh:
            fh.write(emit_sdpa(p, scale))
        try:
            proc = subprocess.run(shlex.split(cmd) + [src, dst], capture_output=True,
                                  text=True, timeout=timeout)
        except (OSError, subprocess.TimeoutExpired) as exc:
            raise SolverFailure(f"solver could not run: {exc}") from exc
        out = proc.stdout + proc.stderr
        if os.path.exists(dst):
            with open(dst) as fh:
                out = fh.read() + "\n" + out
        if proc.returncode != 0 and "objVal" not in out and "objective value" not in out:
            raise SolverFailure(f"solver exited with status {proc.returncode}", out)
    try:
        return parse_solution_and_floor(out, p.q ** p.n if scale else 1, flavor=flavor)
    except SolverOutputError as exc:
        raise SolverFailure(str(exc), out) from exc
