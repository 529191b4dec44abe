"""Built-in problem generators.

Each generator produces either an exact instance over Z_p (for the symbolic
phase) or a floating-point instance with a planted solution (for numeric
evaluation). Both modes share the same construction, so monomial supports
agree for a given problem family.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from typing import Sequence

import numpy as np

from . import field as zp
from .field import DEFAULT_PRIME, PrimeField
from .poly import Polynomial, Ring
from .sysio import SystemFile

PROBLEMS = ("toy", "stitch2", "stitch3", "efl")
MAX_ATTEMPTS = 10


class ProblemError(RuntimeError):
    pass


class DistortionInfeasibleError(ProblemError):
    pass


class DegenerateSceneError(ProblemError):
    pass


@dataclass
class ProblemInstance:
    kind: str
    system: SystemFile
    ground_truth: tuple | None = None
    scene: dict = dc_field(default_factory=dict)

    @property
    def ring(self) -> Ring:
        return self.system.ring

    @property
    def equations(self) -> tuple[Polynomial, ...]:
        return self.system.equations

    @property
    def is_exact(self) -> bool:
        return self.ring.is_exact


# ---------------------------------------------------------------------------
# scalar backends: the same geometric construction runs over floats or Z_p
# ---------------------------------------------------------------------------


class _FloatOps:
    exact = False

    def __init__(self, rng: np.random.Generator):
        self.rng = rng

    def inv(self, a):
        return 1.0 / a

    def solve(self, a, b):
        return np.linalg.solve(np.asarray(a, float), np.asarray(b, float))

    def coeff(self, a):
        return float(a)


class _ZpOps:
    exact = True

    def __init__(self, F: PrimeField, rng: np.random.Generator):
        self.F = F
        self.p = F.p
        self.rng = rng

    def rand(self):
        return int(self.rng.integers(1, self.p))

    def inv(self, a):
        return self.F.inv(int(a))

    def solve(self, a, b):
        return zp.solve(np.asarray(a, dtype=object).astype(np.int64), np.asarray(b).astype(np.int64), self.p)

    def coeff(self, a):
        return int(a) % self.p


def _cayley_zp(ops: _ZpOps) -> list[list[int]]:
    """Rotation (I - S)(I + S)^-1 over Z_p; R^T R = I holds exactly."""
    p = ops.p
    for _ in range(100):
        a, b, c = (int(ops.rng.integers(0, p)) for _ in range(3))
        s = np.array([[0, -c, b], [c, 0, -a], [-b, a, 0]], dtype=np.int64) % p
        eye = np.eye(3, dtype=np.int64)
        if (1 + a * a + b * b + c * c) % p == 0:
            continue
        inv = zp.solve((eye + s) % p, eye, p)
        return zp.matmul((eye - s) % p, inv, p).tolist()
    raise DegenerateSceneError("could not draw an invertible Cayley parameter")


def _rotation_float(rng: np.random.Generator, max_angle: float) -> np.ndarray:
    axis = rng.normal(size=3)
    axis /= np.linalg.norm(axis)
    ang = rng.uniform(-max_angle, max_angle)
    k = np.array([[0, -axis[2], axis[1]], [axis[2], 0, -axis[0]], [-axis[1], axis[0], 0]])
    return np.eye(3) + math.sin(ang) * k + (1 - math.cos(ang)) * (k @ k)


def forward_distort(ux: float, uy: float, lam: float) -> tuple[float, float]:
    """Distorted point x with x + lam*z ~ (ux, uy, 1) under the division model.

    Solves k = 1 + lam k^2 s (s = ux^2 + uy^2) on the branch with k -> 1 as
    lam -> 0 and returns (k ux, k uy).
    """
    s = ux * ux + uy * uy
    disc = 1.0 - 4.0 * lam * s
    if disc <= 0:
        raise DistortionInfeasibleError(f"1 - 4 lam r^2 = {disc:.3g} <= 0")
    k = 2.0 / (1.0 + math.sqrt(disc))
    return k * ux, k * uy


def _distort_zp(ops: _ZpOps, d: Sequence[int], lam: int) -> tuple[int, int] | None:
    """Distorted (x, y) with (x, y, 1 + lam (x^2+y^2)) ~ d over Z_p, or None."""
    p = ops.p
    d1, d2, d3 = (int(v) % p for v in d)
    s = (d1 * d1 + d2 * d2) % p
    a = lam * s % p
    if a == 0:
        return None
    # a t^2 - d3 t + 1 = 0
    disc = (d3 * d3 - 4 * a) % p
    r = ops.F.sqrt(disc)
    if r is None:
        return None
    t = (d3 + r) * ops.F.inv(2 * a) % p
    if t == 0:
        return None
    return t * d1 % p, t * d2 % p


# ---------------------------------------------------------------------------
# toy
# ---------------------------------------------------------------------------


def toy(mode: str = "zp", p: int = DEFAULT_PRIME) -> ProblemInstance:
    """The ideal <x + y^2 - 1, x*y - 1> (three solutions)."""
    ring = Ring(("x", "y"), PrimeField(p) if mode == "zp" else None)
    x, y = ring.gens()
    eqs = (x + y**2 - 1, x * y - 1)
    return ProblemInstance("toy", SystemFile(ring, eqs, "toy"))


# ---------------------------------------------------------------------------
# panoramic stitching with unknown focal length and division-model distortion
# ---------------------------------------------------------------------------

STITCH_VARS = ("lam", "g")


def _cos2_equation(ring: Ring, pa: Sequence, pb: Sequence, j: int, k: int) -> Polynomial:
    """Cross-multiplied equality of squared ray cosines for points j, k between
    image a and image b, with the spurious factor g removed.

    With c = 1 + lam r^2 the rays are K^-1 u ~ (x, y, c) / f, so
    <.,.> = g (x_j x_k + y_j y_k) + c_j c_k and |.|^2 = g r^2 + c^2.
    """
    lam, g = ring.gens()

    def parts(pts):
        (xj, yj), (xk, yk) = pts[j], pts[k]
        rj = xj * xj + yj * yj
        rk = xk * xk + yk * yk
        cj = lam * rj + 1
        ck = lam * rk + 1
        n = g * (xj * xk + yj * yk) + cj * ck
        return n, g * rj + cj * cj, g * rk + ck * ck

    na, daj, dak = parts(pa)
    nb, dbj, dbk = parts(pb)
    full = na * na * dbj * dbk - nb * nb * daj * dak
    # every term free of g cancels identically (g = 0 is a spurious root)
    out = {}
    for m, c in full.terms.items():
        if m[1] > 0:
            out[(m[0], m[1] - 1)] = c
    if ring.is_exact and any(m[1] == 0 for m in full.terms):
        raise ProblemError("g-free terms did not cancel over Z_p")
    return Polynomial(ring, out)


def _stitch_views_float(rng, n_points: int, n_views: int, f_gt: float, lam_gt: float):
    K = np.diag([f_gt, f_gt, 1.0])
    for _ in range(MAX_ATTEMPTS):
        dirs = np.column_stack(
            [rng.uniform(-0.5, 0.5, n_points), rng.uniform(-0.5, 0.5, n_points), np.ones(n_points)]
        )
        X = dirs * rng.uniform(1.0, 3.0, size=(n_points, 1))
        rots = [np.eye(3)] + [_rotation_float(rng, math.radians(30)) for _ in range(n_views - 1)]
        views = []
        try:
            for R in rots:
                pts = []
                for Xi in X:
                    u = K @ (R @ Xi)
                    if u[2] <= 0.1:
                        raise DistortionInfeasibleError("point behind camera")
                    pts.append(forward_distort(u[0] / u[2], u[1] / u[2], lam_gt))
                views.append(pts)
        except DistortionInfeasibleError:
            continue
        return views, X, rots
    raise DistortionInfeasibleError(f"no feasible scene after {MAX_ATTEMPTS} draws")


def _stitch_views_zp(ops: _ZpOps, n_points: int, n_views: int, f: int, lam: int):
    p = ops.p
    finv = ops.F.inv(f)
    for _ in range(50 * MAX_ATTEMPTS):
        rots = [[[1, 0, 0], [0, 1, 0], [0, 0, 1]]] + [_cayley_zp(ops) for _ in range(n_views - 1)]
        # plant distorted points in the first view
        first = [(ops.rand(), ops.rand()) for _ in range(n_points)]
        X = []
        for x, y in first:
            c = (1 + lam * (x * x + y * y)) % p
            d = ops.rand()
            X.append([x * finv * d % p, y * finv * d % p, c * d % p])
        views = [first]
        ok = True
        for R in rots[1:]:
            pts = []
            for Xi in X:
                RX = [sum(R[r][c] * Xi[c] for c in range(3)) % p for r in range(3)]
                u = [f * RX[0] % p, f * RX[1] % p, RX[2]]
                xy = _distort_zp(ops, u, lam)
                if xy is None:
                    ok = False
                    break
                pts.append(xy)
            if not ok:
                break
            views.append(pts)
        if ok:
            return views, X, rots
    raise DistortionInfeasibleError("no Z_p scene with square-root-friendly distortion")


def _stitch_truth(ops, f_gt, lam_gt):
    if ops.exact:
        g = ops.F.inv(f_gt * f_gt % ops.p)
        return (lam_gt % ops.p, g)
    return (float(lam_gt), 1.0 / (f_gt * f_gt))


def _draw_stitch_params(ops, f_gt, lam_gt):
    if ops.exact:
        f = int(f_gt) % ops.p if f_gt is not None else ops.rand()
        lam = int(lam_gt) % ops.p if lam_gt is not None else ops.rand()
        return f, lam
    f = float(f_gt) if f_gt is not None else float(ops.rng.uniform(0.5, 5.0))
    lam = float(lam_gt) if lam_gt is not None else float(ops.rng.uniform(-0.5, 0.0))
    if f <= 0:
        raise ProblemError("focal length must be positive")
    return f, lam


def _ops(mode: str, seed: int, p: int):
    rng = np.random.default_rng(seed)
    if mode == "zp":
        return _ZpOps(PrimeField(p), rng)
    if mode == "float":
        return _FloatOps(rng)
    raise ProblemError(f"unknown mode {mode!r}")


def stitching_2view(seed: int = 0, f_gt=None, lambda_gt=None, mode: str = "float",
                    p: int = DEFAULT_PRIME) -> ProblemInstance:
    """Three points seen in two views; unknowns (lam, g = 1/f^2)."""
    ops = _ops(mode, seed, p)
    f, lam = _draw_stitch_params(ops, f_gt, lambda_gt)
    ring = Ring(STITCH_VARS, ops.F if ops.exact else None)
    if ops.exact:
        views, X, rots = _stitch_views_zp(ops, 3, 2, f, lam)
    else:
        views, X, rots = _stitch_views_float(ops.rng, 3, 2, f, lam)
    v1, v2 = views
    # pairs (1,2) and (1,3); the (2,3) pair is dropped
    eqs = (_cos2_equation(ring, v1, v2, 0, 1), _cos2_equation(ring, v1, v2, 0, 2))
    truth = _stitch_truth(ops, f, lam)
    return ProblemInstance(
        "stitch2",
        SystemFile(ring, eqs, "stitch2"),
        truth,
        {"f": f, "lam": lam, "points": views, "X": X, "rotations": rots},
    )


def stitching_3view(seed: int = 0, f_gt=None, lambda_gt=None, mode: str = "float",
                    p: int = DEFAULT_PRIME) -> ProblemInstance:
    """Two points seen in three views; same unknowns and support as two views."""
    ops = _ops(mode, seed, p)
    f, lam = _draw_stitch_params(ops, f_gt, lambda_gt)
    ring = Ring(STITCH_VARS, ops.F if ops.exact else None)
    if ops.exact:
        views, X, rots = _stitch_views_zp(ops, 2, 3, f, lam)
    else:
        views, X, rots = _stitch_views_float(ops.rng, 2, 3, f, lam)
    v1, v2, v3 = views
    eqs = (_cos2_equation(ring, v1, v2, 0, 1), _cos2_equation(ring, v3, v2, 0, 1))
    truth = _stitch_truth(ops, f, lam)
    return ProblemInstance(
        "stitch3",
        SystemFile(ring, eqs, "stitch3"),
        truth,
        {"f": f, "lam": lam, "points": views, "X": X, "rotations": rots},
    )


# ---------------------------------------------------------------------------
# relative pose, one calibrated camera, other with unknown f and distortion
# ---------------------------------------------------------------------------

EFL_VARS = ("w", "lam", "f13", "f23")


def _efl_scene_float(rng, f_gt: float, lam_gt: float, n: int = 7):
    K = np.diag([f_gt, f_gt, 1.0])
    for _ in range(MAX_ATTEMPTS):
        R = _rotation_float(rng, math.radians(20))
        t = rng.normal(size=3)
        t /= np.linalg.norm(t)
        X = np.column_stack(
            [rng.uniform(-1, 1, n), rng.uniform(-1, 1, n), rng.uniform(3, 6, n)]
        )
        xhat, xdist = [], []
        try:
            for Xi in X:
                xhat.append((Xi[0] / Xi[2], Xi[1] / Xi[2]))
                Y = R @ Xi + t
                if Y[2] <= 0.1:
                    raise DistortionInfeasibleError("point behind second camera")
                u = K @ Y
                xdist.append(forward_distort(u[0] / u[2], u[1] / u[2], lam_gt))
        except DistortionInfeasibleError:
            continue
        tx = np.array([[0, -t[2], t[1]], [t[2], 0, -t[0]], [-t[1], t[0], 0]])
        E0 = -R.T @ tx
        F = E0 @ np.diag([1 / f_gt, 1 / f_gt, 1.0])
        return xhat, xdist, F, {"R": R, "t": t, "X": X}
    raise DistortionInfeasibleError(f"no feasible scene after {MAX_ATTEMPTS} draws")


def _efl_scene_zp(ops: _ZpOps, f: int, lam: int, n: int = 7):
    p = ops.p
    finv = ops.F.inv(f)
    for _ in range(MAX_ATTEMPTS * 10):
        R = _cayley_zp(ops)
        t = [ops.rand() for _ in range(3)]
        xhat, xdist = [], []
        ok = True
        for _i in range(n):
            x, y = ops.rand(), ops.rand()
            c = (1 + lam * (x * x + y * y)) % p
            d = ops.rand()
            Y = [x * finv * d % p, y * finv * d % p, c * d % p]
            Ymt = [(Y[i] - t[i]) % p for i in range(3)]
            X = [sum(R[r][i] * Ymt[r] for r in range(3)) % p for i in range(3)]  # R^T (Y - t)
            if X[2] == 0:
                ok = False
                break
            iz = ops.F.inv(X[2])
            xhat.append((X[0] * iz % p, X[1] * iz % p))
            xdist.append((x, y))
        if not ok:
            continue
        tx = np.array([[0, -t[2], t[1]], [t[2], 0, -t[0]], [-t[1], t[0], 0]], dtype=np.int64) % p
        Rt = np.array(R, dtype=np.int64).T
        E0 = (-zp.matmul(Rt, tx, p)) % p
        Kinv = np.diag([finv, finv, 1]).astype(np.int64)
        F = zp.matmul(E0, Kinv, p)
        return xhat, xdist, F.tolist(), {"R": R, "t": t}
    raise DegenerateSceneError("could not build a Z_p scene")


# monomial columns of the epipolar constraints
_EFL_MONOS = ("lam*f13", "lam*f23", "lam", "f11", "f12", "f13", "f21", "f22", "f23", "f31", "f32", "1")
_EFL_U = (3, 4, 6, 7, 9, 10)  # f11 f12 f21 f22 f31 f32: first two columns of F
_EFL_V = (0, 1, 2, 5, 8, 11)  # lam*f13 lam*f23 lam f13 f23 1


def _efl_rows(xhat, xdist, ops):
    rows = []
    for (a, b), (x, y) in zip(xhat, xdist):
        r2 = x * x + y * y
        # [a, b, 1] F [x, y, 1 + lam r2]^T with f33 = 1
        row = [a * r2, b * r2, r2, a * x, a * y, a, b * x, b * y, b, x, y, 1]
        if ops.exact:
            row = [v % ops.p for v in row]
        rows.append(row)
    return rows


def relpose_efl(seed: int = 0, f_gt: float = 10.0, lambda_gt: float = -0.1,
                      mode: str = "float", p: int = DEFAULT_PRIME) -> ProblemInstance:
    """Seven correspondences, unknowns (w = 1/f^2, lam, f13, f23); 11 equations."""
    ops = _ops(mode, seed, p)
    if ops.exact:
        f = ops.rand()
        lam = ops.rand()
    else:
        f, lam = float(f_gt), float(lambda_gt)
    ring = Ring(EFL_VARS, ops.F if ops.exact else None)
    w_, lam_, f13_, f23_ = ring.gens()
    one = ring.const(1)

    for _attempt in range(MAX_ATTEMPTS):
        if ops.exact:
            xhat, xdist, Ftrue, scene = _efl_scene_zp(ops, f, lam)
        else:
            xhat, xdist, Ftrue, scene = _efl_scene_float(ops.rng, f, lam)
        A = _efl_rows(xhat, xdist, ops)
        AU = [[row[c] for c in _EFL_U] for row in A]
        AV = [[row[c] for c in _EFL_V] for row in A]
        try:
            if ops.exact:
                G = (-zp.solve(np.array(AU[:6], dtype=np.int64), np.array(AV[:6], dtype=np.int64), ops.p)) % ops.p
                G = G.tolist()
            else:
                AU6 = np.array(AU[:6])
                if np.linalg.cond(AU6) > 1e12:
                    raise np.linalg.LinAlgError("ill-conditioned")
                G = (-np.linalg.solve(AU6, np.array(AV[:6]))).tolist()
        except (np.linalg.LinAlgError, zp.FieldError):
            continue
        break
    else:
        raise DegenerateSceneError("singular 6x6 elimination block")

    V = [lam_ * f13_, lam_ * f23_, lam_, f13_, f23_, one]

    def lin(coeffs) -> Polynomial:
        out = ring.zero()
        for c, v in zip(coeffs, V):
            out = out + v.scale(ops.coeff(c))
        return out

    f11, f12, f21, f22, f31, f32 = (lin(G[i]) for i in range(6))
    # seventh equation: AU[6] . (G V) + AV[6] . V = 0
    h = []
    for k in range(6):
        s = AV[6][k] + sum(AU[6][i] * G[i][k] for i in range(6))
        h.append(s % ops.p if ops.exact else s)
    eq14 = lin(h)
    if eq14.is_zero():
        raise DegenerateSceneError("seventh constraint vanished")
    c = eq14.coeff((0, 1, 1, 0))
    if c != 0:
        # normalize so the equation reads lam*f13 - h(lam, f13, f23) = 0
        eq14 = eq14.scale(ops.F.inv(c) if ops.exact else 1 / c)

    F = [[f11, f12, f13_], [f21, f22, f23_], [f31, f32, one]]
    # E = F diag(1, 1, 1/f). The constraints are odd in 1/f on the third
    # column and even elsewhere, so with W = diag(1, 1, w), w = 1/f^2, they
    # become 2 (F W F^T) F - tr(F W F^T) F = 0 (the +-1/f pairs collapse).
    FW = [[F[i][0], F[i][1], F[i][2] * w_] for i in range(3)]
    Q = [[sum((FW[i][k] * F[j][k] for k in range(3)), ring.zero()) for j in range(3)] for i in range(3)]
    tr = Q[0][0] + Q[1][1] + Q[2][2]
    eqs = []
    for i in range(3):
        for j in range(3):
            s = sum((Q[i][k] * F[k][j] for k in range(3)), ring.zero())
            eqs.append(s.scale(2) - tr * F[i][j])
    det = (
        F[0][0] * (F[1][1] * F[2][2] - F[1][2] * F[2][1])
        - F[0][1] * (F[1][0] * F[2][2] - F[1][2] * F[2][0])
        + F[0][2] * (F[1][0] * F[2][1] - F[1][1] * F[2][0])
    )
    eqs.append(det)
    eqs.append(eq14)
    eqs = tuple(e for e in eqs if not e.is_zero())

    if ops.exact:
        p_ = ops.p
        s33 = ops.F.inv(int(Ftrue[2][2]))
        truth = (ops.F.inv(f * f % p_), lam, int(Ftrue[0][2]) * s33 % p_, int(Ftrue[1][2]) * s33 % p_)
    else:
        Fn = np.asarray(Ftrue) / Ftrue[2][2]
        truth = (1.0 / (f * f), lam, float(Fn[0, 2]), float(Fn[1, 2]))
    return ProblemInstance(
        "efl",
        SystemFile(ring, eqs, "efl"),
        truth,
        {"f": f, "lam": lam, "xhat": xhat, "xdist": xdist, **scene},
    )


# ---------------------------------------------------------------------------
# dispatch
# ---------------------------------------------------------------------------


def generate(kind: str, seed: int = 0, mode: str = "float", p: int = DEFAULT_PRIME,
             f_gt=None, lambda_gt=None) -> ProblemInstance:
    if kind == "toy":
        return toy(mode, p)
    if kind == "stitch2":
        return stitching_2view(seed, f_gt, lambda_gt, mode, p)
    if kind == "stitch3":
        return stitching_3view(seed, f_gt, lambda_gt, mode, p)
    if kind == "efl":
        kw = {}
        if f_gt is not None:
            kw["f_gt"] = f_gt
        if lambda_gt is not None:
            kw["lambda_gt"] = lambda_gt
        return relpose_efl(seed, mode=mode, p=p, **kw)
    raise ProblemError(f"unknown problem {kind!r}; choose from {', '.join(PROBLEMS)}")


def instantiate_zp(kind: str, seed: int = 0, F: PrimeField | None = None) -> ProblemInstance:
    return generate(kind, seed, "zp", (F or PrimeField()).p)
