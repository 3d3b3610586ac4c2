"""Finiteness verdict and closed-form evaluation of the constrained trace infimum.

For Hermitian A, B (order n) and Ahat, Bhat (order nhat <= n), decide whether

    inf trace(Ahat X^H A X)   subject to   Bhat X^H B X = I

is finite, evaluate it from the typed finite eigenvalues of (A, B) and
(Ahat, Bhat) when it is, construct a minimizer when both pairs are
congruent-diagonalizable, and diagnose the divergence mechanism otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .definiteness import DefinitenessReport, definiteness_interval
from .errors import (
    EmptyFeasibleSetError,
    InertiaViolationError,
    LengthMismatchError,
    NotAttainableError,
    NotDiagonalizableError,
    IllConditionedError,
)
from .matcore import (
    DEFAULT_TOLS,
    Inertia,
    MatrixPair,
    ProblemInstance,
    ToleranceSet,
    check_feasibility,
    inertia,
    pair_from_arrays,
    spectral_norm,
)
from .spectral import (
    INF_COUPLED,
    INF_MINUS,
    INF_MIXED,
    INF_NONE,
    INF_PLUS,
    TypedSpectrum,
    congruent_diagonalize,
    deflate_common_nullspace,
    split_infinite,
    typed_spectrum,
)

# Verdicts
FINITE = "Finite"
NEG_INFINITE = "NegInfinite"
EXCLUDED_CONSTANT = "ExcludedConstant"

# Sign cases
PSD_PAIRS = "PSD_pairs"
NSD_PAIRS = "NSD_pairs"

# NegInfinite reasons
NOT_SEMIDEFINITE = "NotSemidefinitePair"
MIXED_SIGNS = "MixedSigns"
IMPROPER = "Improper"
COUPLED_INFINITE = "CoupledInfiniteStructure"
COMPLEX_EIGENVALUES = "ComplexEigenvalues"

# Attainability
ATTAINABLE_YES = "Yes"
ATTAINABLE_UNKNOWN = "Unknown"


@dataclass(frozen=True)
class ExcludedCase:
    which: str  # "AhatZero" | "AEqualsMuB" | "AhatEqualsMuhatBhat"
    constant: float
    mu: float | None = None


@dataclass(frozen=True)
class PropernessReport:
    is_proper: bool
    case_label: str  # "i" | "ii" | "iii" | "iv" | "improper"
    d_plus: int
    d_minus: int


@dataclass(frozen=True)
class Term:
    """One product lambda_hat * lambda of the closed-form value.

    ``hat_index``/``big_index`` locate the eigenvalues inside the ascending
    typed lists of the branch spectra (mirrored lists for the NSD branch).
    """

    eig_type: str  # "positive" | "negative"
    lam_hat: float
    lam: float
    hat_index: int
    big_index: int

    @property
    def product(self) -> float:
        return self.lam_hat * self.lam


@dataclass(frozen=True)
class InfimumResult:
    verdict: str
    value: float | None = None
    sign_case: str | None = None
    reason: str | None = None
    reason_detail: str | None = None
    terms: tuple = ()
    attainable: str | None = None
    excluded: ExcludedCase | None = None
    properness: PropernessReport | None = None
    spectrum: TypedSpectrum | None = None
    hat_spectrum: TypedSpectrum | None = None
    definiteness: DefinitenessReport | None = None
    hat_definiteness: DefinitenessReport | None = None

    @property
    def is_finite(self) -> bool:
        return self.verdict == FINITE


def check_excluded(problem: ProblemInstance, tols: ToleranceSet | None = None):
    """Detect the constant-objective cases; returns ExcludedCase or None.

    Ahat = 0 gives 0; A = mu*B makes the objective identically
    mu*trace(Ahat Bhat^{-1}); Ahat = muhat*Bhat with n = nhat gives
    muhat*trace(B^{-1} A).
    """
    tols = tols or problem.tolerances
    A, B = problem.pair.A.entries, problem.pair.B.entries
    Ah, Bh = problem.hat_pair.A.entries, problem.hat_pair.B.entries

    if spectral_norm(Ah) <= tols.rank_tol * (1.0 + spectral_norm(Bh)):
        return ExcludedCase("AhatZero", 0.0)

    nA = np.linalg.norm(A)
    denom = np.linalg.norm(B) ** 2
    if denom > 0:
        mu = float(np.real(np.trace(B.conj().T @ A)) / denom)
        if np.linalg.norm(A - mu * B) <= 1e-9 * max(nA, 1e-300):
            const = mu * float(np.real(np.trace(Ah @ np.linalg.inv(Bh))))
            return ExcludedCase("AEqualsMuB", const, mu)

    if problem.n == problem.nhat:
        nAh = np.linalg.norm(Ah)
        denom_h = np.linalg.norm(Bh) ** 2
        if denom_h > 0:
            muh = float(np.real(np.trace(Bh.conj().T @ Ah)) / denom_h)
            if np.linalg.norm(Ah - muh * Bh) <= 1e-9 * max(nAh, 1e-300):
                const = muh * float(np.real(np.trace(np.linalg.solve(B, A))))
                return ExcludedCase("AhatEqualsMuhatBhat", const, muh)
    return None


def properness(
    inertia_B: Inertia,
    hat_spectrum: TypedSpectrum,
    inertia_Bhat: Inertia,
    tols: ToleranceSet = DEFAULT_TOLS,
) -> PropernessReport:
    """Properness of the triplet (B, Ahat, Bhat) for a PSD hat pair.

    Callers handle the NSD branch by mirroring all inputs first.
    Counting ranges run over the nhat-side eigenvalue lists (the pair has no
    further eigenvalues to index).
    """
    if inertia_Bhat.n_plus > inertia_B.n_plus or inertia_Bhat.n_minus > inertia_B.n_minus:
        raise InertiaViolationError("inertia of Bhat exceeds inertia of B")

    pos = hat_spectrum.pos_values
    neg = hat_spectrum.neg_values
    zero = tols.type_tol * (
        1.0 + max(np.max(np.abs(pos)) if pos.size else 0.0,
                  np.max(np.abs(neg)) if neg.size else 0.0)
    )
    eq_plus = inertia_Bhat.n_plus == inertia_B.n_plus
    eq_minus = inertia_Bhat.n_minus == inertia_B.n_minus
    min_pos = pos[0] if pos.size else None  # lambda_1^{+up}
    max_neg = neg[-1] if neg.size else None  # lambda_1^{-down}

    if eq_plus and eq_minus:
        return PropernessReport(True, "i", 0, 0)
    if eq_plus and not eq_minus:
        if min_pos is None or min_pos >= -zero:
            d_minus = int(np.sum(neg > zero))
            return PropernessReport(True, "ii", 0, d_minus)
        return PropernessReport(False, "improper", 0, 0)
    if not eq_plus and eq_minus:
        if max_neg is None or max_neg <= zero:
            d_plus = int(np.sum(pos < -zero))
            return PropernessReport(True, "iii", d_plus, 0)
        return PropernessReport(False, "improper", 0, 0)
    # both strictly smaller: need the hat matrix itself semidefinite (shift 0)
    ok_pos = min_pos is None or min_pos >= -zero
    ok_neg = max_neg is None or max_neg <= zero
    if ok_pos and ok_neg:
        return PropernessReport(True, "iv", 0, 0)
    return PropernessReport(False, "improper", 0, 0)


@dataclass(frozen=True)
class SemidefiniteVerdict:
    """Structure-aware semidefiniteness of a pair.

    The shift function f(lam0) = lam_min(A - lam0 B) of a pair with chained
    structure on N(B) can approach zero asymptotically without attaining it,
    so the verdict combines the finite block's shift analysis with the
    classification of A on N(B): chained structure excludes semidefiniteness,
    a definite restriction must match the orientation.
    """

    is_psd: bool
    is_nsd: bool
    finite_report: DefinitenessReport
    infinite_sign: str


def pair_semidefiniteness(
    pair: MatrixPair, tols: ToleranceSet = DEFAULT_TOLS
) -> SemidefiniteVerdict:
    defl = deflate_common_nullspace(pair, tols.rank_tol)
    reduced = defl.reduced
    sp = split_infinite(reduced, tols)
    if not sp.has_infinite:
        rep = definiteness_interval(reduced, tols)
        return SemidefiniteVerdict(rep.is_psd_pair, rep.is_nsd_pair, rep, INF_NONE)
    if sp.coupled:
        rep = definiteness_interval(reduced, tols)
        return SemidefiniteVerdict(False, False, rep, INF_COUPLED)
    if np.all(sp.d_inf > 0):
        sign = INF_PLUS
    elif np.all(sp.d_inf < 0):
        sign = INF_MINUS
    else:
        sign = INF_MIXED
    if sp.finite_pair is None:
        # B is numerically zero: f is constant, the plain analysis is exact.
        rep = definiteness_interval(reduced, tols)
        return SemidefiniteVerdict(rep.is_psd_pair, rep.is_nsd_pair, rep, sign)
    rep = definiteness_interval(sp.finite_pair, tols)
    return SemidefiniteVerdict(
        rep.is_psd_pair and sign == INF_PLUS,
        rep.is_nsd_pair and sign == INF_MINUS,
        rep,
        sign,
    )


def pad_problem(problem: ProblemInstance) -> ProblemInstance:
    """Pad the hat pair to the rank of B: Ahat -> diag(Ahat, 0),
    Bhat -> diag(Bhat, I_{c+}, -I_{c-}) with c_pm the inertia surpluses.

    The padded problem has the same infimum as the original.
    """
    tols = problem.tolerances
    ib = inertia(problem.pair.B, tols.rank_tol)
    ibh = inertia(problem.hat_pair.B, tols.rank_tol)
    if ibh.n_zero > 0 or ibh.n_plus > ib.n_plus or ibh.n_minus > ib.n_minus:
        raise InertiaViolationError("padding requires nonsingular Bhat within inertia of B")
    cp, cm = ib.n_plus - ibh.n_plus, ib.n_minus - ibh.n_minus
    if cp == 0 and cm == 0:
        return problem
    nh = problem.nhat
    m = nh + cp + cm
    Ah = np.zeros((m, m), dtype=complex)
    Bh = np.zeros((m, m), dtype=complex)
    Ah[:nh, :nh] = problem.hat_pair.A.entries
    Bh[:nh, :nh] = problem.hat_pair.B.entries
    jc = np.concatenate([np.ones(cp), -np.ones(cm)])
    Bh[nh:, nh:] = np.diag(jc)
    return ProblemInstance(
        pair=problem.pair,
        hat_pair=pair_from_arrays(Ah, Bh, herm_tol=np.inf),
        tolerances=tols,
    )


def fan_min_product(lambda0, lambda1) -> float:
    """min over unitary alignments of sum lambda0_i * lambda1_{perm(i)}:
    descending first list against ascending second list."""
    l0 = np.asarray(lambda0, dtype=float)
    l1 = np.asarray(lambda1, dtype=float)
    if l0.shape != l1.shape or l0.ndim != 1:
        raise LengthMismatchError("lists must be 1-d and of equal length")
    return float(np.sort(l0)[::-1] @ np.sort(l1))


def _formula_terms(big: TypedSpectrum, hat: TypedSpectrum, prop: PropernessReport):
    """Pair typed eigenvalues per the closed form and record index pairing."""
    terms = []
    bp = big.pos_values
    bn = big.neg_values
    hp = hat.pos_values
    hn = hat.neg_values
    mp, mn = len(hp), len(hn)
    dp, dm = prop.d_plus, prop.d_minus

    for i in range(mp - dp):
        hi = mp - 1 - i  # descending hat positive-type
        terms.append(Term("positive", float(hp[hi]), float(bp[i]), hi, i))
    for i in range(dp):
        bi = len(bp) - 1 - i  # descending big positive-type
        terms.append(Term("positive", float(hp[i]), float(bp[bi]), i, bi))
    for j in range(dm):
        hj = mn - 1 - j  # descending hat negative-type (positive entries first)
        terms.append(Term("negative", float(hn[hj]), float(bn[j]), hj, j))
    for j in range(mn - dm):
        bj = len(bn) - 1 - j
        terms.append(Term("negative", float(hn[j]), float(bn[bj]), j, bj))
    return tuple(terms)


def _contains_zero(interval, slack: float) -> bool:
    if interval is None:
        return False
    lo, hi = interval
    return lo - slack <= 0.0 <= hi + slack


def infimum(problem: ProblemInstance, tols: ToleranceSet | None = None) -> InfimumResult:
    """Full pipeline: excluded cases, deflation, structure gates, properness, value.

    Raises EmptyFeasibleSetError when the constraint set is empty.
    """
    tols = tols or problem.tolerances
    check_feasibility(problem)

    exc = check_excluded(problem, tols)
    if exc is not None:
        return InfimumResult(verdict=EXCLUDED_CONSTANT, value=exc.constant, excluded=exc)

    defl = deflate_common_nullspace(problem.pair, tols.rank_tol)
    big_pair = defl.reduced
    hat_pair = problem.hat_pair

    spec_big = typed_spectrum(big_pair, tols, deflated_dims=defl.deflated_dims)
    spec_hat = typed_spectrum(hat_pair, tols)

    base = dict(spectrum=spec_big, hat_spectrum=spec_hat)

    # Chained infinite structure forces divergence for any nonzero Ahat.
    if spec_big.infinite_definite_sign == INF_COUPLED:
        return InfimumResult(
            verdict=NEG_INFINITE, reason=COUPLED_INFINITE, **base
        )
    # Genuine complex eigenvalues on either side force divergence.
    if spec_big.has_complex or spec_hat.has_complex:
        return InfimumResult(
            verdict=NEG_INFINITE, reason=COMPLEX_EIGENVALUES, **base
        )

    inf_sign = spec_big.infinite_definite_sign
    infinite = inf_sign in (INF_PLUS, INF_MINUS, INF_MIXED)
    if infinite:
        sp = split_infinite(big_pair, tols)
        if sp.finite_pair is None:  # pragma: no cover - blocked by feasibility
            raise EmptyFeasibleSetError("B has no nonzero eigenvalues")
        rep_fin = definiteness_interval(sp.finite_pair, tols)
    else:
        rep_fin = definiteness_interval(big_pair, tols)
    rep_hat = definiteness_interval(hat_pair, tols)
    base.update(definiteness=rep_fin, hat_definiteness=rep_hat)

    nAh = spectral_norm(hat_pair.A.entries)
    nBh = spectral_norm(hat_pair.B.entries)
    slack = tols.psd_tol * (1.0 + nAh + nBh)
    # Semidefiniteness of the full pair = finite part plus a definite nullspace
    # block of the matching orientation; a singular B additionally pins the
    # hat shift to zero (the hat matrix itself must be semidefinite).
    big_psd = rep_fin.is_psd_pair and inf_sign in (INF_NONE, INF_PLUS)
    big_nsd = rep_fin.is_nsd_pair and inf_sign in (INF_NONE, INF_MINUS)
    psd_ok = big_psd and rep_hat.is_psd_pair and (
        not infinite or _contains_zero(rep_hat.psd_interval, slack)
    )
    nsd_ok = big_nsd and rep_hat.is_nsd_pair and (
        not infinite or _contains_zero(rep_hat.nsd_interval, slack)
    )

    if not psd_ok and not nsd_ok:
        fin_semi = rep_fin.is_psd_pair or rep_fin.is_nsd_pair
        hat_semi = rep_hat.is_psd_pair or rep_hat.is_nsd_pair
        if not fin_semi or not hat_semi:
            reason, detail = NOT_SEMIDEFINITE, None
        elif infinite:
            detail = (
                "infinite-mixed" if inf_sign == INF_MIXED else "infinite-orientation"
            )
            reason = MIXED_SIGNS
        else:
            reason, detail = MIXED_SIGNS, None
        return InfimumResult(
            verdict=NEG_INFINITE, reason=reason, reason_detail=detail, **base
        )

    ib = inertia(problem.pair.B, tols.rank_tol)
    ibh = inertia(hat_pair.B, tols.rank_tol)
    if psd_ok:
        sign_case = PSD_PAIRS
        sb, sh = spec_big, spec_hat
        ib_b = Inertia(ib.n_plus, 0, ib.n_minus)
        ib_h = ibh
    else:
        sign_case = NSD_PAIRS
        sb, sh = spec_big.mirrored(), spec_hat.mirrored()
        ib_b = Inertia(ib.n_minus, 0, ib.n_plus)
        ib_h = Inertia(ibh.n_minus, 0, ibh.n_plus)

    prop = properness(ib_b, sh, ib_h, tols)
    if not prop.is_proper:
        return InfimumResult(
            verdict=NEG_INFINITE, reason=IMPROPER, properness=prop,
            sign_case=sign_case, **base
        )

    terms = _formula_terms(sb, sh, prop)
    value = float(sum(t.product for t in terms))
    attainable = (
        ATTAINABLE_YES
        if not (
            spec_big.has_jordan
            or spec_hat.has_jordan
            or spec_big.isotropic_defect
            or spec_hat.isotropic_defect
        )
        else ATTAINABLE_UNKNOWN
    )
    return InfimumResult(
        verdict=FINITE,
        value=value,
        sign_case=sign_case,
        terms=terms,
        attainable=attainable,
        properness=prop,
        **base,
    )


def equal_inertia_value(big: TypedSpectrum, hat: TypedSpectrum) -> float:
    """Equal-inertia closed form: descending hat values against ascending values."""
    return fan_min_product(hat.pos_values, big.pos_values) + fan_min_product(
        hat.neg_values, big.neg_values
    )


def minimizer(problem: ProblemInstance, tols: ToleranceSet | None = None):
    """Construct an optimal X for a finite, attainable instance.

    Returns (X_opt, achieved).  Raises NotAttainableError when attainability
    is not established (Jordan pairs, chained structure, non-real spectrum,
    or a NegInfinite verdict).
    """
    tols = tols or problem.tolerances
    result = infimum(problem, tols)
    if result.verdict == NEG_INFINITE:
        raise NotAttainableError(f"infimum is -infinity ({result.reason})")
    if result.verdict == EXCLUDED_CONSTANT:
        X = feasible_point(problem, tols)
        return X, _objective(problem, X)
    if result.attainable != ATTAINABLE_YES:
        raise NotAttainableError("attainability unknown for this instance")

    defl = deflate_common_nullspace(problem.pair, tols.rank_tol)
    try:
        cd_big = congruent_diagonalize(defl.reduced, tols)
        cd_hat = congruent_diagonalize(problem.hat_pair, tols)
    except (NotDiagonalizableError, IllConditionedError) as exc:
        raise NotAttainableError(str(exc)) from exc

    mirror = result.sign_case == NSD_PAIRS
    Xt = np.zeros((cd_big.n, cd_hat.n), dtype=complex)
    # Frame direction lists sorted ascending by eigenvalue, matching the
    # index convention of the recorded terms (mirrored lists swap the roles).
    big_pos = list(cd_big.pos_dirs)
    big_neg = list(cd_big.neg_dirs)
    hat_pos = list(cd_hat.pos_dirs)
    hat_neg = list(cd_hat.neg_dirs)
    if mirror:
        big_pos, big_neg = big_neg, big_pos
        hat_pos, hat_neg = hat_neg, hat_pos
    for t in result.terms:
        if t.eig_type == "positive":
            Xt[big_pos[t.big_index], hat_pos[t.hat_index]] = 1.0
        else:
            Xt[big_neg[t.big_index], hat_neg[t.hat_index]] = 1.0

    X = defl.keep @ (cd_big.yinv @ Xt @ cd_hat.yinv.conj().T)
    return X, _objective(problem, X)


def _objective(problem: ProblemInstance, X: np.ndarray) -> float:
    A = problem.pair.A.entries
    Ah = problem.hat_pair.A.entries
    return float(np.real(np.trace(Ah @ X.conj().T @ A @ X)))


def feasibility_residual(problem: ProblemInstance, X: np.ndarray) -> float:
    B = problem.pair.B.entries
    Bh = problem.hat_pair.B.entries
    G = Bh @ X.conj().T @ B @ X - np.eye(problem.nhat)
    return float(np.linalg.norm(G, 2))


def _b_frame(pair: MatrixPair, tols: ToleranceSet):
    """T with T^H B T = diag(+1.., -1.., 0..); returns (T, n_plus, n_minus, n_zero)."""
    d, V = np.linalg.eigh(pair.B.entries)
    nB = float(np.max(np.abs(d))) if d.size else 0.0
    thr = tols.rank_tol * nB if nB > 0 else np.inf
    pos = np.where(d > thr)[0]
    neg = np.where(d < -thr)[0]
    zero = np.where(np.abs(d) <= thr)[0]
    order = np.concatenate([pos, neg, zero]).astype(int)
    scale = np.ones(len(d))
    nz = np.concatenate([pos, neg]).astype(int)
    scale[nz] = 1.0 / np.sqrt(np.abs(d[nz]))
    T = V[:, order] * scale[order]
    return T, len(pos), len(neg), len(zero)


def feasible_point(problem: ProblemInstance, tols: ToleranceSet | None = None) -> np.ndarray:
    """A deterministic feasible X built from B-frames alone (no A involved)."""
    tols = tols or problem.tolerances
    check_feasibility(problem)
    defl = deflate_common_nullspace(problem.pair, tols.rank_tol)
    T, npl, nmi, _ = _b_frame(defl.reduced, tols)
    Th, hpl, hmi, _ = _b_frame(problem.hat_pair, tols)
    sel = np.zeros((defl.reduced.n, problem.nhat), dtype=complex)
    for c in range(hpl):
        sel[c, c] = 1.0
    for c in range(hmi):
        sel[npl + c, hpl + c] = 1.0
    return defl.keep @ (T @ sel @ Th.conj().T)


class FeasibleSampler:
    """Draw random feasible points; the congruence frames are built once."""

    def __init__(self, problem: ProblemInstance, tols: ToleranceSet | None = None):
        from .hyperbolic import SignatureJ

        tols = tols or problem.tolerances
        check_feasibility(problem)
        defl = deflate_common_nullspace(problem.pair, tols.rank_tol)
        T, npl, nmi, _ = _b_frame(defl.reduced, tols)
        Th, hpl, hmi, _ = _b_frame(problem.hat_pair, tols)
        self.problem = problem
        self.left = defl.keep @ T[:, : npl + nmi]
        self.right = Th.conj().T
        self.sig = SignatureJ(npl, nmi)
        self.sig_hat = SignatureJ(hpl, hmi)

    def sample(self, spread: float, rng: np.random.Generator) -> np.ndarray:
        from .hyperbolic import sample_feasible

        Xs = sample_feasible(self.sig, self.sig_hat, spread, rng)
        return self.left @ Xs @ self.right


def sample_feasible_original(
    problem: ProblemInstance, spread: float, rng: np.random.Generator,
    tols: ToleranceSet | None = None,
) -> np.ndarray:
    """Random feasible X in original coordinates (finite part sampled J-unitarily)."""
    return FeasibleSampler(problem, tols).sample(spread, rng)
