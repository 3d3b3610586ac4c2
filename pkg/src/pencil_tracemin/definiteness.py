"""Semidefiniteness of a Hermitian pair via the concave shift function.

A pair (A, B) is positive semidefinite when some real shift lam0 makes
A - lam0*B positive semidefinite.  f(lam0) = lam_min(A - lam0*B) is concave,
so the verdict reduces to maximizing f over an adaptively expanded bracket
and the admissible shifts form an interval.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .matcore import MatrixPair, ToleranceSet, DEFAULT_TOLS, eigvalsh, spectral_norm

GOLDEN = (np.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class DefinitenessReport:
    is_psd_pair: bool
    is_nsd_pair: bool
    psd_interval: tuple | None
    nsd_interval: tuple | None
    max_fmin: float
    argmax_shift: float
    bracket_overflow: bool = False

    def psd_contains(self, shift: float, slack: float = 0.0) -> bool:
        if self.psd_interval is None:
            return False
        lo, hi = self.psd_interval
        return lo - slack <= shift <= hi + slack

    def nsd_contains(self, shift: float, slack: float = 0.0) -> bool:
        if self.nsd_interval is None:
            return False
        lo, hi = self.nsd_interval
        return lo - slack <= shift <= hi + slack


def lambda_min_shift(pair: MatrixPair, shift: float) -> float:
    """Smallest eigenvalue of A - shift*B."""
    return float(eigvalsh(pair.A.entries - shift * pair.B.entries)[0])


def _maximize_concave(f, lo, hi, iters, width_target):
    """Golden-section maximization of a concave function on [lo, hi]."""
    a, b = lo, hi
    x1 = b - GOLDEN * (b - a)
    x2 = a + GOLDEN * (b - a)
    f1, f2 = f(x1), f(x2)
    for _ in range(iters):
        if b - a <= width_target:
            break
        if f1 < f2:
            a, x1, f1 = x1, x2, f2
            x2 = a + GOLDEN * (b - a)
            f2 = f(x2)
        else:
            b, x2, f2 = x2, x1, f1
            x1 = b - GOLDEN * (b - a)
            f1 = f(x1)
    if f1 >= f2:
        return x1, f1
    return x2, f2


def _bisect_threshold(f, inside, outside, thr, iters=100):
    """Locate the crossing of f(t) = thr between an inside and an outside point."""
    for _ in range(iters):
        mid = 0.5 * (inside + outside)
        if f(mid) >= thr:
            inside = mid
        else:
            outside = mid
    return inside


def _psd_analysis(pair: MatrixPair, tols: ToleranceSet, golden_iters, expansion_limit):
    """Maximize f(lam0)=lam_min(A - lam0 B); return verdict, interval, diagnostics."""
    nA = spectral_norm(pair.A.entries)
    nB = spectral_norm(pair.B.entries)
    scale = 1.0 + nA + nB
    thr = -tols.psd_tol * scale

    if nB <= tols.rank_tol * scale:
        # B is (numerically) zero: f is constant in the shift.
        f0 = lambda_min_shift(pair, 0.0)
        ok = f0 >= thr
        itv = (-np.inf, np.inf) if ok else None
        return ok, itv, f0, 0.0, False

    f = lambda t: lambda_min_shift(pair, t)

    svals = np.abs(eigvalsh(pair.B.entries))
    pos = svals[svals > tols.rank_tol * nB]
    smin = float(np.min(pos)) if pos.size else tols.rank_tol
    rho = nA / max(smin, tols.rank_tol)
    lo, hi = -1.0 - rho, 1.0 + rho
    cap = 1.0 / tols.rank_tol

    flo, fhi = f(lo), f(hi)
    fmid = f(0.5 * (lo + hi))
    best = max(flo, fhi, fmid)
    overflow = False
    for _ in range(expansion_limit):
        done_lo = flo < best
        done_hi = fhi < best
        if done_lo and done_hi:
            break
        if abs(lo) >= cap and abs(hi) >= cap:
            overflow = True
            break
        if not done_lo:
            lo = max(-cap, 2.0 * lo)
            flo = f(lo)
        if not done_hi:
            hi = min(cap, 2.0 * hi)
            fhi = f(hi)
        best = max(best, flo, fhi)

    width_target = 1e-12 * max(1.0, abs(lo), abs(hi))
    t_star, f_star = _maximize_concave(f, lo, hi, golden_iters, width_target)
    if flo > f_star:
        t_star, f_star = lo, flo
    if fhi > f_star:
        t_star, f_star = hi, fhi

    if f_star < thr:
        return False, None, f_star, t_star, overflow

    # Interval endpoints of {f >= thr}; a flat capped end reports as unbounded.
    if flo >= thr:
        left = -np.inf if abs(lo) >= cap else lo
    else:
        left = _bisect_threshold(f, t_star, lo, thr)
    if fhi >= thr:
        right = np.inf if abs(hi) >= cap else hi
    else:
        right = _bisect_threshold(f, t_star, hi, thr)
    return True, (float(left), float(right)), f_star, t_star, overflow


def definiteness_interval(
    pair: MatrixPair,
    tols: ToleranceSet = DEFAULT_TOLS,
    golden_iters: int = 200,
    expansion_limit: int = 60,
) -> DefinitenessReport:
    """Decide PSD/NSD pair status and compute the admissible shift intervals.

    The NSD analysis runs the PSD machinery on (-A, B); its shift variable s
    satisfies A + s*B <= 0, so the NSD interval in lam0 is the negated, swapped
    PSD interval of (-A, B).
    """
    psd_ok, psd_itv, fmax, argmax, ovf1 = _psd_analysis(
        pair, tols, golden_iters, expansion_limit
    )
    from .matcore import pair_from_arrays

    mirrored = pair_from_arrays(-pair.A.entries, pair.B.entries, herm_tol=np.inf)
    nsd_ok, itv2, _, _, ovf2 = _psd_analysis(mirrored, tols, golden_iters, expansion_limit)
    nsd_itv = (-itv2[1], -itv2[0]) if itv2 is not None else None

    return DefinitenessReport(
        is_psd_pair=psd_ok,
        is_nsd_pair=nsd_ok,
        psd_interval=psd_itv,
        nsd_interval=nsd_itv,
        max_fmin=float(fmax),
        argmax_shift=float(argmax),
        bracket_overflow=bool(ovf1 or ovf2),
    )
