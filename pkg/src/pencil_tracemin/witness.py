"""Explicit feasible families X(t) certifying an infinite infimum.

Each builder returns a family whose trace trend is exactly
slope * t^2 + offset with slope < 0, while Bhat X(t)^H B X(t) = I holds up to
roundoff that grows no faster than (1 + t^2).  Three mechanisms:

* ``MixedSignSlope``   - a hyperbolic rotation mixing a positive-type and a
  negative-type direction whose eigenvalue gaps have opposite signs on the
  two sides (after zero-padding the hat values when nhat < rank B).
* ``ComplexBlockSlope`` - a rotation through a 2x2 conjugate-eigenvalue block
  with a tuned phase.
* ``InfiniteBlockRay``  - scaling either a B-null direction against an
  adverse eigendirection of the hat objective (diagonal infinite structure),
  or a chained null direction whose coupling into the finite part drives the
  cross term (2x2 chained structure).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import (
    CertificationFailedError,
    NoWitnessConstructibleError,
    NotDiagonalizableError,
    IllConditionedError,
)
from .matcore import MatrixPair, ProblemInstance, ToleranceSet
from .spectral import deflate_common_nullspace, split_infinite
from .tracemin import (
    COMPLEX_EIGENVALUES,
    COUPLED_INFINITE,
    MIXED_SIGNS,
    NEG_INFINITE,
    InfimumResult,
    _b_frame,
)

MIXED_SIGN_SLOPE = "MixedSignSlope"
COMPLEX_BLOCK_SLOPE = "ComplexBlockSlope"
INFINITE_BLOCK_RAY = "InfiniteBlockRay"

SIGMA_IDENTITY = "identity"  # sigma(t) = t
SIGMA_QUARTIC = "quartic"  # sigma(t) with sigma*sqrt(1+sigma^2) = t^2


@dataclass(frozen=True)
class WitnessFamily:
    kind: str
    slope: float
    offset: float
    trend_power: int
    sigma_map: str
    x_base: np.ndarray
    upd_cosh: tuple  # ((u, v), ...): coefficient cosh-part c(sigma) - 1
    upd_sinh: tuple  # ((u, v), ...): coefficient sigma
    upd_power: tuple  # ((u, v, k), ...): coefficient t^k
    problem: ProblemInstance
    frame: dict = field(default_factory=dict)
    selectors: dict = field(default_factory=dict)


def _sigma(family: WitnessFamily, t: float) -> float:
    if family.sigma_map == SIGMA_IDENTITY:
        return float(t)
    # sigma^2 (1 + sigma^2) = t^4  =>  exact quadratic trend for the rotation
    q = 0.5 * (np.sqrt(1.0 + 4.0 * t**4) - 1.0)
    return float(np.sqrt(q))


def evaluate_witness(family: WitnessFamily, t: float):
    """Materialize X(t) and return (X, trace value)."""
    if t < 0:
        raise ValueError("t must be nonnegative")
    X = family.x_base.copy()
    s = _sigma(family, t)
    c = np.sqrt(1.0 + s * s)
    for u, v in family.upd_cosh:
        X += (c - 1.0) * np.outer(u, v.conj())
    for u, v in family.upd_sinh:
        X += s * np.outer(u, v.conj())
    for u, v, k in family.upd_power:
        X += (t**k) * np.outer(u, v.conj())
    A = family.problem.pair.A.entries
    Ah = family.problem.hat_pair.A.entries
    trace = float(np.real(np.trace(Ah @ X.conj().T @ A @ X)))
    return X, trace


def witness_feasibility(family: WitnessFamily, X: np.ndarray) -> float:
    B = family.problem.pair.B.entries
    Bh = family.problem.hat_pair.B.entries
    G = Bh @ X.conj().T @ B @ X - np.eye(family.problem.nhat)
    return float(np.linalg.norm(G, 2))


@dataclass(frozen=True)
class CertificationReport:
    t: float
    trace_value: float
    feas_residual: float
    threshold: float
    t_max: float


def certify_unbounded(
    family: WitnessFamily, threshold: float, t_max: float
) -> CertificationReport:
    """Find t <= t_max with trace(X(t)) <= threshold; report trace and residual."""
    if threshold >= 0:
        raise ValueError("threshold must be negative")
    if family.slope >= 0:
        raise CertificationFailedError("family has nonnegative slope")
    need = threshold - family.offset
    t_star = 0.0 if need >= 0 else float(np.sqrt(need / family.slope))
    t = t_star * 1.000001 + 1e-9
    for _ in range(8):
        if t > t_max:
            raise CertificationFailedError(
                f"required t {t:.6g} exceeds t_max {t_max:.6g}"
            )
        X, trace = evaluate_witness(family, t)
        if trace <= threshold:
            return CertificationReport(
                t=float(t),
                trace_value=trace,
                feas_residual=witness_feasibility(family, X),
                threshold=float(threshold),
                t_max=float(t_max),
            )
        t *= 1.25
    raise CertificationFailedError("trace did not cross the threshold numerically")


# ---------------------------------------------------------------------------
# Pseudo-canonical frames: real typed directions plus 2x2 conjugate blocks
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PseudoFrame:
    """T with T^H B T = diag(j) and T^H A T block-diagonal: real entries on
    typed directions, [[alpha, -i beta], [i beta, -alpha]] on conjugate blocks,
    +/-1 on infinite directions."""

    T: np.ndarray
    j_diag: np.ndarray
    real_pos: tuple  # ((dir, value), ...) ascending by value
    real_neg: tuple
    blocks: tuple  # ((dir_plus, dir_minus, alpha, beta), ...)
    zero_dirs: tuple

    @property
    def n(self) -> int:
        return self.T.shape[1]

    @property
    def plus_dirs(self):
        return [d for d, _ in self.real_pos] + [b[0] for b in self.blocks]

    @property
    def minus_dirs(self):
        return [d for d, _ in self.real_neg] + [b[1] for b in self.blocks]


def _pseudo_canonical(pair: MatrixPair, tols: ToleranceSet) -> PseudoFrame:
    sp = split_infinite(pair, tols)
    if sp.coupled:
        raise NotDiagonalizableError("chained infinite structure")
    if sp.has_infinite:
        fin = sp.finite_pair
        if fin is None:
            raise NotDiagonalizableError("no finite part")
    else:
        fin = pair

    A, B = fin.A.entries, fin.B.entries
    nf = fin.n
    w, vr = scipy.linalg.eig(A, B)
    real_mask = np.abs(w.imag) <= tols.type_tol * (1.0 + np.abs(w.real))

    cols = []
    col_j = []
    real_pos, real_neg, blocks = [], [], []

    # Real part: cluster and B-orthonormalize.
    ridx = np.where(real_mask)[0]
    if ridx.size:
        vals = w[ridx].real
        order = np.argsort(vals)
        ridx, vals = ridx[order], vals[order]
        ctol = tols.type_tol * (1.0 + float(np.max(np.abs(vals))))
        start = 0
        for k in range(1, len(vals) + 1):
            if k == len(vals) or vals[k] - vals[k - 1] > ctol:
                Zc = vr[:, ridx[start:k]]
                G = Zc.conj().T @ B @ Zc
                G = (G + G.conj().T) / 2.0
                g, U = np.linalg.eigh(G)
                if np.any(np.abs(g) <= tols.type_tol):
                    raise NotDiagonalizableError("Jordan structure in the real part")
                Xc = Zc @ U @ np.diag(1.0 / np.sqrt(np.abs(g)))
                mu = float(np.mean(vals[start:k]))
                for i in range(Xc.shape[1]):
                    d = len(cols)
                    cols.append(Xc[:, i])
                    if g[i] > 0:
                        col_j.append(1.0)
                        real_pos.append((d, mu))
                    else:
                        col_j.append(-1.0)
                        real_neg.append((d, mu))
                start = k

    # Complex part: conjugate pairing, normalized 2x2 sub-frames.
    cidx = [int(k) for k in np.where(~real_mask)[0]]
    used = set()
    root_half = 1.0 / np.sqrt(2.0)
    for k in cidx:
        if k in used or w[k].imag >= 0:
            continue
        # k carries the Im < 0 eigenvalue; among the conjugate candidates,
        # prefer the partner with the strongest cross form (repeated complex
        # eigenvalues admit many bases of the same eigenspace).
        target = np.conj(w[k])
        cand = [
            l
            for l in cidx
            if l != k and l not in used and w[l].imag > 0
            and abs(w[l] - target) <= tols.type_tol * 100.0 * (1.0 + abs(target))
        ]
        if not cand:
            cand = [l for l in cidx if l != k and l not in used and w[l].imag > 0]
        if not cand:
            raise NotDiagonalizableError("unpaired complex eigenvalue")
        forms = [abs(complex(vr[:, l].conj() @ (B @ vr[:, k]))) for l in cand]
        best = cand[int(np.argmax(forms))]
        used.add(k)
        used.add(best)
        x = vr[:, k]
        y = vr[:, best]
        gamma = complex(y.conj() @ (B @ x))
        if abs(gamma) <= tols.type_tol:
            raise NotDiagonalizableError("chained complex structure")
        phase = gamma / abs(gamma)
        xp = x / (phase * np.sqrt(abs(gamma)))
        yp = y / np.sqrt(abs(gamma))
        c1 = root_half * (xp + yp)
        c2 = root_half * (xp - yp)
        A2 = np.array(
            [
                [c1.conj() @ (A @ c1), c1.conj() @ (A @ c2)],
                [c2.conj() @ (A @ c1), c2.conj() @ (A @ c2)],
            ]
        )
        alpha = float(np.real(A2[0, 0]))
        beta = float(np.imag(A2[1, 0]))
        if beta < 0:
            c2 = -c2
            beta = -beta
        d = len(cols)
        cols.append(c1)
        col_j.append(1.0)
        cols.append(c2)
        col_j.append(-1.0)
        blocks.append((d, d + 1, alpha, beta))

    T_fin = np.column_stack(cols) if cols else np.zeros((nf, 0), dtype=complex)
    j_fin = np.array(col_j)

    if sp.has_infinite:
        T = np.hstack([sp.finite_frame() @ T_fin, sp.null_frame()])
        j_diag = np.concatenate([j_fin, np.zeros(sp.n0)])
        zero_dirs = tuple(range(nf, nf + sp.n0))
    else:
        T, j_diag, zero_dirs = T_fin, j_fin, ()

    real_pos.sort(key=lambda dv: dv[1])
    real_neg.sort(key=lambda dv: dv[1])
    return PseudoFrame(
        T=T,
        j_diag=j_diag,
        real_pos=tuple(real_pos),
        real_neg=tuple(real_neg),
        blocks=tuple(blocks),
        zero_dirs=zero_dirs,
    )


# ---------------------------------------------------------------------------
# Builders
# ---------------------------------------------------------------------------


def _static_assignment(big: PseudoFrame, hat: PseudoFrame, reserved_big, reserved_hat):
    """Injective type-preserving map hat dir -> big dir avoiding reservations."""
    assign = {}
    for sign in (+1, -1):
        hat_dirs = [d for d in (hat.plus_dirs if sign > 0 else hat.minus_dirs)
                    if d not in reserved_hat]
        big_dirs = [d for d in (big.plus_dirs if sign > 0 else big.minus_dirs)
                    if d not in reserved_big]
        if len(hat_dirs) > len(big_dirs):
            raise NoWitnessConstructibleError("insufficient directions for assignment")
        for hd, bd in zip(hat_dirs, big_dirs):
            assign[hd] = bd
    return assign


def _finish_family(
    kind, problem, tols, keep, big, hat, assign, rot, slope, sigma_map, selectors
):
    """Assemble x_base and rank-one updates from an assignment plus a rotation.

    ``rot`` is None or (p, m, phat, mhat, a11, a21, a12, a22): columns phat /
    mhat of the canonical X(t) are a11*c e_p + a21*s e_m and
    a12*s e_p + a22*c e_m (phat or mhat may be None for padded hat values).
    """
    Mbig = keep @ big.T
    n_hat = problem.nhat
    Xt0 = np.zeros((big.n, n_hat), dtype=complex)
    for hd, bd in assign.items():
        Xt0[bd, hd] = 1.0

    upd_cosh, upd_sinh = [], []
    if rot is not None:
        p, m, phat, mhat, a11, a21, a12, a22 = rot
        if phat is not None:
            Xt0[p, phat] = a11
            upd_cosh.append((a11 * Mbig[:, p], hat.T[:, phat]))
            upd_sinh.append((a21 * Mbig[:, m], hat.T[:, phat]))
        if mhat is not None:
            Xt0[m, mhat] = a22
            upd_cosh.append((a22 * Mbig[:, m], hat.T[:, mhat]))
            upd_sinh.append((a12 * Mbig[:, p], hat.T[:, mhat]))

    x_base = Mbig @ Xt0 @ hat.T.conj().T
    family = WitnessFamily(
        kind=kind,
        slope=float(slope),
        offset=0.0,
        trend_power=2,
        sigma_map=sigma_map,
        x_base=x_base,
        upd_cosh=tuple(upd_cosh),
        upd_sinh=tuple(upd_sinh),
        upd_power=(),
        problem=problem,
        frame={
            "yinv_big": Mbig,
            "yinv_hat": hat.T,
            "j_big": big.j_diag,
            "j_hat": hat.j_diag,
        },
        selectors=selectors,
    )
    _, offset = evaluate_witness(family, 0.0)
    return _with_offset(family, offset)


def _with_offset(family: WitnessFamily, offset: float) -> WitnessFamily:
    return WitnessFamily(
        kind=family.kind,
        slope=family.slope,
        offset=float(offset),
        trend_power=family.trend_power,
        sigma_map=family.sigma_map,
        x_base=family.x_base,
        upd_cosh=family.upd_cosh,
        upd_sinh=family.upd_sinh,
        upd_power=family.upd_power,
        problem=family.problem,
        frame=family.frame,
        selectors=family.selectors,
    )


def _padded_values(hat_vals, count):
    """Hat-side values with virtual zeros for the inertia surplus.

    Returns [(value, hat_dir_or_None), ...]."""
    out = [(float(v), d) for d, v in hat_vals]
    out.extend((0.0, None) for _ in range(count - len(out)))
    return out


def _mixed_sign_witness(problem, tols, keep, big_pair):
    try:
        big = _pseudo_canonical(big_pair, tols)
        hat = _pseudo_canonical(problem.hat_pair, tols)
    except (NotDiagonalizableError, IllConditionedError) as exc:
        raise NoWitnessConstructibleError(str(exc)) from exc
    if big.blocks or hat.blocks:
        raise NoWitnessConstructibleError("conjugate blocks need the complex builder")

    npl, nmi = len(big.real_pos), len(big.real_neg)
    hp = _padded_values(hat.real_pos, npl)
    hm = _padded_values(hat.real_neg, nmi)
    if not hp or not hm or not big.real_pos or not big.real_neg:
        raise NoWitnessConstructibleError("a typed direction is missing on one side")

    best = None
    for hv, hd in hp:
        for gv, gd in hm:
            dhat = hv - gv
            if hd is None and gd is None:
                continue
            for bd_p, bv_p in big.real_pos:
                for bd_m, bv_m in big.real_neg:
                    s = dhat * (bv_p - bv_m)
                    if best is None or s < best[0]:
                        best = (s, hd, gd, bd_p, bd_m, hv, gv, bv_p, bv_m)
    scale = 1.0 + max(abs(v) for v, _ in hp + hm) + max(
        abs(v) for _, v in big.real_pos + big.real_neg
    )
    if best is None or best[0] >= -tols.type_tol * scale:
        raise NoWitnessConstructibleError("no opposing eigenvalue gaps found")
    slope, phat, mhat, p, m, hv, gv, bv_p, bv_m = best

    assign = _static_assignment(
        big, hat, reserved_big={p, m}, reserved_hat={d for d in (phat, mhat) if d is not None}
    )
    rot = (p, m, phat, mhat, 1.0, 1.0, 1.0, 1.0)
    selectors = {
        "hat_plus": hv, "hat_minus": gv, "big_plus": bv_p, "big_minus": bv_m,
    }
    return _finish_family(
        MIXED_SIGN_SLOPE, problem, tols, keep, big, hat, assign, rot,
        slope, SIGMA_IDENTITY, selectors,
    )


def _complex_witness(problem, tols, keep, big_pair):
    try:
        big = _pseudo_canonical(big_pair, tols)
        hat = _pseudo_canonical(problem.hat_pair, tols)
    except (NotDiagonalizableError, IllConditionedError) as exc:
        raise NoWitnessConstructibleError(str(exc)) from exc

    if hat.blocks and big.blocks:
        # Both sides carry a conjugate block: phase pi/2 against -pi/2.
        hb = max(hat.blocks, key=lambda b: b[3])
        bb = max(big.blocks, key=lambda b: b[3])
        slope = -4.0 * bb[3] * hb[3]
        theta, theta_hat = np.pi / 2.0, -np.pi / 2.0
        a11, a21 = 1.0, np.exp(1j * theta)
        a12, a22 = np.exp(-1j * theta_hat), np.exp(1j * (theta - theta_hat))
        rot = (bb[0], bb[1], hb[0], hb[1], a11, a21, a12, a22)
        assign = _static_assignment(big, hat, {bb[0], bb[1]}, {hb[0], hb[1]})
        selectors = {"alpha": bb[2], "beta": bb[3], "alpha_hat": hb[2], "beta_hat": hb[3]}
        return _finish_family(
            COMPLEX_BLOCK_SLOPE, problem, tols, keep, big, hat, assign, rot,
            slope, SIGMA_IDENTITY, selectors,
        )

    if hat.blocks and big.real_pos and big.real_neg:
        # Hat block against two real directions of opposite type.
        hb = max(hat.blocks, key=lambda b: b[3])
        bd_p, bv_p = max(big.real_pos, key=lambda dv: dv[1])
        bd_m, bv_m = min(big.real_neg, key=lambda dv: dv[1])
        if abs(bv_p - bv_m) <= tols.type_tol * (1.0 + abs(bv_p) + abs(bv_m)):
            for dp, vp in big.real_pos:
                for dm, vm in big.real_neg:
                    if abs(vp - vm) > abs(bv_p - bv_m):
                        bd_p, bv_p, bd_m, bv_m = dp, vp, dm, vm
        gap = bv_p - bv_m
        if abs(gap) <= tols.type_tol * (1.0 + abs(bv_p) + abs(bv_m)):
            raise NoWitnessConstructibleError("no eigenvalue gap to drive the slope")
        theta_hat = -np.sign(gap) * np.pi / 2.0
        slope = 2.0 * gap * hb[3] * np.sin(theta_hat)
        ph = np.exp(-1j * theta_hat)
        rot = (bd_p, bd_m, hb[0], hb[1], 1.0, 1.0, ph, ph)
        assign = _static_assignment(big, hat, {bd_p, bd_m}, {hb[0], hb[1]})
        selectors = {"beta_hat": hb[3], "big_plus": bv_p, "big_minus": bv_m}
        return _finish_family(
            COMPLEX_BLOCK_SLOPE, problem, tols, keep, big, hat, assign, rot,
            slope, SIGMA_QUARTIC, selectors,
        )

    if big.blocks:
        # Big block against two (possibly padded) hat values.
        bb = max(big.blocks, key=lambda b: b[3])
        npl = len(big.real_pos) + len(big.blocks)
        nmi = len(big.real_neg) + len(big.blocks)
        hp = _padded_values(hat.real_pos, npl)
        hm = _padded_values(hat.real_neg, nmi)
        if not hp or not hm:
            raise NoWitnessConstructibleError("no hat values available")
        hv, phat = max(hp, key=lambda vd: vd[0])
        gv, mhat = min(hm, key=lambda vd: vd[0])
        cand = [(abs(a - b), a, da, b, db) for a, da in hp for b, db in hm
                if not (da is None and db is None)]
        if not cand:
            raise NoWitnessConstructibleError("only padded hat values available")
        _, hv, phat, gv, mhat = max(cand, key=lambda c: c[0])
        gap = hv - gv
        if abs(gap) <= tols.type_tol * (1.0 + abs(hv) + abs(gv)):
            raise NoWitnessConstructibleError("no hat eigenvalue gap")
        theta = -np.sign(gap) * np.pi / 2.0  # slope = 2 (hv-gv) beta sin(theta)
        slope = 2.0 * gap * bb[3] * np.sin(theta)
        ph = np.exp(1j * theta)
        rot = (bb[0], bb[1], phat, mhat, 1.0, ph, 1.0, ph)
        assign = _static_assignment(
            big, hat, {bb[0], bb[1]}, {d for d in (phat, mhat) if d is not None}
        )
        selectors = {"beta": bb[3], "hat_plus": hv, "hat_minus": gv}
        return _finish_family(
            COMPLEX_BLOCK_SLOPE, problem, tols, keep, big, hat, assign, rot,
            slope, SIGMA_QUARTIC, selectors,
        )

    raise NoWitnessConstructibleError("no conjugate block arrangement applies")


def _ray_witness(problem, tols, keep, big_pair):
    sp = split_infinite(big_pair, tols)
    if not sp.has_infinite or sp.coupled or sp.finite_pair is None:
        raise NoWitnessConstructibleError("no diagonal infinite structure")

    S_fin, npl, nmi, _ = _b_frame(sp.finite_pair, tols)
    Th, hpl, hmi, _ = _b_frame(problem.hat_pair, tols)
    if hpl > npl or hmi > nmi:
        raise NoWitnessConstructibleError("hat inertia exceeds the finite block")
    sel = np.zeros((sp.finite_pair.n, problem.nhat), dtype=complex)
    for c in range(hpl):
        sel[c, c] = 1.0
    for c in range(hmi):
        sel[npl + c, hpl + c] = 1.0
    X0 = keep @ (sp.finite_frame() @ S_fin @ sel @ Th.conj().T)

    Ah = problem.hat_pair.A.entries
    Mh = Th.conj().T @ Ah @ Th
    Mh = (Mh + Mh.conj().T) / 2.0
    lam_hat, Wh = np.linalg.eigh(Mh)

    signs = np.sign(sp.d_inf)
    best = None
    for i, s in enumerate(signs):
        for k, lh in enumerate(lam_hat):
            prod = float(s * lh)
            if best is None or prod < best[0]:
                best = (prod, i, k)
    scale = 1.0 + float(np.max(np.abs(lam_hat))) if lam_hat.size else 1.0
    if best is None or best[0] >= -tols.type_tol * scale:
        raise NoWitnessConstructibleError("infinite block is sign-compatible")
    slope, i, k = best
    u = keep @ sp.null_frame()[:, i]
    v = Th @ Wh[:, k]

    family = WitnessFamily(
        kind=INFINITE_BLOCK_RAY,
        slope=float(slope),
        offset=0.0,
        trend_power=2,
        sigma_map=SIGMA_IDENTITY,
        x_base=X0,
        upd_cosh=(),
        upd_sinh=(),
        upd_power=((u, v, 1),),
        problem=problem,
        frame={"d_inf": sp.d_inf},
        selectors={"infinite_sign": float(signs[i]), "hat_eigenvalue": float(lam_hat[k])},
    )
    _, offset = evaluate_witness(family, 0.0)
    return _with_offset(family, offset)


def _chain_witness(problem, tols, keep, big_pair):
    sp = split_infinite(big_pair, tols)
    if not sp.has_infinite:
        raise NoWitnessConstructibleError("no infinite structure to chain against")
    A = big_pair.A.entries
    nA = float(np.linalg.norm(A, 2))
    null_thr = tols.rank_tol * max(nA, 1.0)
    cand = [i for i in range(len(sp.d_inf)) if abs(sp.d_inf[i]) <= null_thr * 10]
    if not cand:
        raise NoWitnessConstructibleError("no A-null direction in the B-nullspace")

    if sp.R.shape[1] == 0:
        raise NoWitnessConstructibleError("no finite block to couple against")
    from .matcore import pair_from_arrays

    B11 = sp.R.conj().T @ big_pair.B.entries @ sp.R
    fin_b = pair_from_arrays(np.zeros_like(B11), B11, herm_tol=np.inf)
    S_B, npl, nmi, _ = _b_frame(fin_b, tols)
    Th, hpl, hmi, _ = _b_frame(problem.hat_pair, tols)
    if hpl > npl or hmi > nmi:
        raise NoWitnessConstructibleError("hat inertia exceeds the finite block")
    sel = np.zeros((B11.shape[0], problem.nhat), dtype=complex)
    for c in range(hpl):
        sel[c, c] = 1.0
    for c in range(hmi):
        sel[npl + c, hpl + c] = 1.0
    X0_d = sp.R @ S_B @ sel @ Th.conj().T
    X0 = keep @ X0_d

    Ah = problem.hat_pair.A.entries
    best = None
    for i in cand:
        z = sp.N @ sp.Q_inf[:, i]
        r = (z.conj() @ (A @ X0_d)) @ Ah  # row: slope(v) = 2 Re(r v)
        norm_r = float(np.linalg.norm(r))
        if best is None or norm_r > best[0]:
            best = (norm_r, z, r)
    norm_r, z, r = best
    scale = 1.0 + float(np.linalg.norm(Ah, 2))
    if norm_r <= tols.type_tol * scale:
        raise NoWitnessConstructibleError("coupling does not reach the objective")
    v = -r.conj() / norm_r
    slope = -2.0 * norm_r
    u = keep @ z

    family = WitnessFamily(
        kind=INFINITE_BLOCK_RAY,
        slope=float(slope),
        offset=0.0,
        trend_power=2,
        sigma_map=SIGMA_IDENTITY,
        x_base=X0,
        upd_cosh=(),
        upd_sinh=(),
        upd_power=((u, v, 2),),
        problem=problem,
        frame={"d_inf": sp.d_inf},
        selectors={"chained": True, "coupling_norm": norm_r},
    )
    _, offset = evaluate_witness(family, 0.0)
    return _with_offset(family, offset)


def build_witness(
    problem: ProblemInstance,
    infimum_diag: InfimumResult,
    tols: ToleranceSet | None = None,
) -> WitnessFamily:
    """Construct a divergent feasible family matching the NegInfinite diagnosis."""
    tols = tols or problem.tolerances
    if infimum_diag.verdict != NEG_INFINITE:
        raise NoWitnessConstructibleError("verdict is not NegInfinite")

    defl = deflate_common_nullspace(problem.pair, tols.rank_tol)
    keep = defl.keep
    big_pair = defl.reduced

    reason = infimum_diag.reason
    detail = infimum_diag.reason_detail or ""
    if reason == COUPLED_INFINITE:
        order = [_chain_witness]
    elif reason == COMPLEX_EIGENVALUES:
        order = [_complex_witness]
    elif reason == MIXED_SIGNS and detail.startswith("infinite"):
        order = [_ray_witness, _mixed_sign_witness]
    else:  # MixedSigns (finite), NotSemidefinitePair, Improper
        order = [_mixed_sign_witness, _ray_witness]

    # Several mechanisms may apply at once; keep the steepest family so the
    # certification threshold is reached at the smallest t.
    best = None
    errors = []
    for builder in order:
        try:
            fam = builder(problem, tols, keep, big_pair)
        except NoWitnessConstructibleError as exc:
            errors.append(f"{builder.__name__}: {exc}")
            continue
        if best is None or fam.slope < best.slope:
            best = fam
    if best is None:
        raise NoWitnessConstructibleError("; ".join(errors))
    return best
