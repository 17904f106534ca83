"""The distance graph on F_p^dim joining points at quadratic distance a.

For a nonzero residue a, vertices are all p**dim points and x ~ y exactly
when ||x - y|| = a.  Translation invariance makes this a Cayley graph of
the additive group with the radius-a sphere as connection set, so each
frequency vector m carries one eigenvalue: the additive character summed
over the sphere,

    lam_m = sum over s with ||s|| = a of cos(2*pi*(m.s)/p),

which is exactly real because the sphere is closed under negation.  The
module computes these sums from precomputed cosine and sine tables of the
p possible phases (never via a dense eigensolver), and verify_spectrum
rechecks the values against trace identities and explicit neighbor sums
so the character-sum route never goes unchecked.
"""

from __future__ import annotations

import functools
import math
import random
from dataclasses import dataclass

import numpy as np

from .errors import (
    BadSpec,
    DimensionMismatch,
    ImagResidualTooLarge,
    TooLarge,
    VerificationFailed,
)
from .field import PrimeField
from .geometry import (
    Point,
    coords_to_ranks,
    distance,
    rank_point,
    ranks_to_coords,
    sphere_points,
    sphere_size,
)
from .spectral import RegularGraphView, make_view

# Spectrum and neighbor-table work is refused above this many vertices
# unless forced.
SPECTRUM_MAX = 10**6
IMAG_TOL = 1e-8  # character sums must be real to this absolute tolerance
GROUP_TOL = 1e-6  # eigenvalues closer than this share a multiplicity class
TRACE_REL_TOL = 1e-6  # trace residual tolerance, relative to n * valency
EIGVEC_TOL = 1e-8  # eigenvector residual tolerance, relative to valency


@dataclass(frozen=True)
class EuclidGraphSpec:
    """Descriptor of one distance graph; construction fixes its constants."""

    field: PrimeField
    dim: int
    a: int
    valency: int
    n: int


def euclid_graph(F: PrimeField, dim: int, a: int) -> EuclidGraphSpec:
    """Build the graph descriptor; a must be a nonzero residue, dim >= 2."""
    if dim < 2:
        raise BadSpec(f"graph dimension must be >= 2, got {dim}")
    if not 0 < a < F.p:
        raise BadSpec(f"radius must be a nonzero residue mod {F.p}, got {a}")
    return EuclidGraphSpec(
        field=F, dim=dim, a=a, valency=sphere_size(F, dim, a), n=F.p**dim
    )


@functools.lru_cache(maxsize=128)
def _sphere_cached(F: PrimeField, dim: int, a: int, force: bool) -> tuple[Point, ...]:
    return tuple(sphere_points(F, dim, a, force=force))


@functools.lru_cache(maxsize=64)
def _char_tables(p: int) -> tuple[np.ndarray, np.ndarray]:
    angles = 2.0 * math.pi * np.arange(p) / p
    return np.cos(angles), np.sin(angles)


def ramanujan_bound(p: int, dim: int) -> float:
    """The ceiling 2 * p**((dim-1)/2) on nontrivial eigenvalue magnitudes."""
    return 2.0 * float(p) ** ((dim - 1) / 2)


def adjacent(G: EuclidGraphSpec, x: Point, y: Point) -> bool:
    if len(x) != G.dim or len(y) != G.dim:
        raise DimensionMismatch(
            f"points of dimension {len(x)}, {len(y)} in a dim {G.dim} graph"
        )
    return x != y and distance(G.field, x, y) == G.a


def eigenvalue_at(G: EuclidGraphSpec, m: Point) -> float:
    """The eigenvalue attached to one frequency vector m.

    Sums the character over the connection sphere directly.  A measurable
    imaginary part would mean the sphere lost its negation symmetry, so it
    is treated as an internal error rather than rounded away.
    """
    if len(m) != G.dim:
        raise DimensionMismatch(f"frequency {m} has dimension {len(m)}, not {G.dim}")
    p = G.field.p
    cos_t, sin_t = _char_tables(p)
    real = 0.0
    imag = 0.0
    for s in _sphere_cached(G.field, G.dim, G.a, False):
        t = sum(mi * si for mi, si in zip(m, s)) % p
        real += cos_t[t]
        imag += sin_t[t]
    if abs(imag) > IMAG_TOL:
        raise ImagResidualTooLarge(f"imaginary residual {imag!r} at m = {m}")
    return float(real)


def _eigenvalues_with_residual(
    G: EuclidGraphSpec, force: bool
) -> tuple[np.ndarray, float]:
    if G.n > SPECTRUM_MAX and not force:
        raise TooLarge(
            f"p**dim = {G.n} exceeds the spectrum guardrail {SPECTRUM_MAX}; "
            "pass force to override"
        )
    p = G.field.p
    S = np.array(_sphere_cached(G.field, G.dim, G.a, force), dtype=np.int64)
    cos_t, sin_t = _char_tables(p)
    lam = np.empty(G.n, dtype=np.float64)
    imag_max = 0.0
    chunk = max(1, (1 << 22) // max(1, G.valency))
    for start in range(0, G.n, chunk):
        stop = min(G.n, start + chunk)
        M = ranks_to_coords(p, G.dim, np.arange(start, stop, dtype=np.int64))
        dots = (M @ S.T) % p
        lam[start:stop] = cos_t[dots].sum(axis=1)
        imag_max = max(imag_max, float(np.abs(sin_t[dots].sum(axis=1)).max()))
    if imag_max > IMAG_TOL:
        raise ImagResidualTooLarge(f"worst imaginary residual {imag_max!r}")
    return lam, imag_max


def eigenvalues(G: EuclidGraphSpec, force: bool = False) -> np.ndarray:
    """All p**dim eigenvalues, indexed by the rank of the frequency vector."""
    lam, _ = _eigenvalues_with_residual(G, force)
    return lam


def _group_classes(lam: np.ndarray, tol: float) -> tuple[tuple[float, int], ...]:
    vals = np.sort(lam)[::-1]
    classes: list[tuple[float, int]] = []
    start = 0
    for i in range(1, len(vals) + 1):
        if i == len(vals) or vals[start] - vals[i] > tol:
            members = vals[start:i]
            classes.append((float(members.mean()), int(members.size)))
            start = i
    return tuple(classes)


@dataclass(frozen=True)
class SpectralSummary:
    """The grouped spectrum of one graph plus its summary statistics."""

    p: int
    dim: int
    a: int
    n: int
    valency: int
    classes: tuple[tuple[float, int], ...]
    trivial_eigenvalue: float
    second_eigenvalue: float
    ramanujan_bound: float
    max_imag_residual: float
    trace_sum_residual: float
    trace_square_residual: float


def spectrum(G: EuclidGraphSpec, force: bool = False) -> SpectralSummary:
    """Compute every eigenvalue and group them into multiplicity classes.

    Classes are sorted by descending value; values within GROUP_TOL share
    a class.  second_eigenvalue is max |lam_m| over nonzero m.
    """
    lam, imag_max = _eigenvalues_with_residual(G, force)
    second = float(np.abs(lam[1:]).max()) if G.n > 1 else 0.0
    return SpectralSummary(
        p=G.field.p,
        dim=G.dim,
        a=G.a,
        n=G.n,
        valency=G.valency,
        classes=_group_classes(lam, GROUP_TOL),
        trivial_eigenvalue=float(lam[0]),
        second_eigenvalue=second,
        ramanujan_bound=ramanujan_bound(G.field.p, G.dim),
        max_imag_residual=imag_max,
        trace_sum_residual=float(abs(lam.sum())),
        trace_square_residual=float(abs((lam * lam).sum() - G.n * G.valency)),
    )


@dataclass(frozen=True)
class SpectrumDiagnostics:
    trace_sum_residual: float
    trace_square_residual: float
    trace_tolerance: float
    max_eigvec_residual: float
    eigvec_tolerance: float
    sampled_ranks: tuple[int, ...]


def verify_spectrum(
    G: EuclidGraphSpec, sample_count: int = 8, seed: int = 0, force: bool = False
) -> SpectrumDiagnostics:
    """Recheck the character-sum spectrum against graph-side identities.

    The eigenvalue sum must vanish (no loops) and the square sum must be
    n * valency (each vertex closes valency 2-walks), both to TRACE_REL_TOL
    relative to n * valency.  For sample_count seeded random frequencies m,
    the adjacency operator is applied to the character vector by explicit
    neighbor summation and compared with lam_m computed independently by
    eigenvalue_at; the max-norm residual must stay under EIGVEC_TOL times
    the valency.  Raises VerificationFailed on any breach.
    """
    lam, _ = _eigenvalues_with_residual(G, force)
    n, k, p = G.n, G.valency, G.field.p
    trace_tol = TRACE_REL_TOL * n * k
    r1 = float(abs(lam.sum()))
    r2 = float(abs((lam * lam).sum() - n * k))
    if r1 > trace_tol or r2 > trace_tol:
        raise VerificationFailed(
            f"trace residuals ({r1}, {r2}) exceed tolerance {trace_tol}"
        )
    rng = random.Random(seed)
    sampled = tuple(sorted(rng.sample(range(n), min(sample_count, n))))
    M = ranks_to_coords(p, G.dim, np.arange(n, dtype=np.int64))
    sphere = np.array(_sphere_cached(G.field, G.dim, G.a, force), dtype=np.int64)
    cos_t, sin_t = _char_tables(p)
    eig_tol = EIGVEC_TOL * k
    worst = 0.0
    for rm in sampled:
        m = rank_point(p, G.dim, rm)
        phase = (M @ np.array(m, dtype=np.int64)) % p
        v = cos_t[phase] + 1j * sin_t[phase]
        av = np.zeros(n, dtype=np.complex128)
        for s in sphere:
            av += v[coords_to_ranks(p, (M + s) % p)]
        resid = float(np.abs(av - eigenvalue_at(G, m) * v).max())
        worst = max(worst, resid)
        if resid > eig_tol:
            raise VerificationFailed(
                f"eigenvector residual {resid} at m = {m} exceeds {eig_tol}"
            )
    return SpectrumDiagnostics(
        trace_sum_residual=r1,
        trace_square_residual=r2,
        trace_tolerance=trace_tol,
        max_eigvec_residual=worst,
        eigvec_tolerance=eig_tol,
        sampled_ranks=sampled,
    )


def regular_view(
    G: EuclidGraphSpec, lam: float | None = None, force: bool = False
) -> RegularGraphView:
    """Materialize the neighbor table as a generic regular-graph view.

    lam is the eigenvalue bound the view should carry; None computes the
    exact second eigenvalue.  Neighbors of x are the translates x + s over
    the connection sphere, encoded as ranks.
    """
    if G.n > SPECTRUM_MAX and not force:
        raise TooLarge(
            f"p**dim = {G.n} exceeds the guardrail {SPECTRUM_MAX}; "
            "pass force to override"
        )
    if lam is None:
        lam = spectrum(G, force=force).second_eigenvalue
    p = G.field.p
    M = ranks_to_coords(p, G.dim, np.arange(G.n, dtype=np.int64))
    sphere = np.array(_sphere_cached(G.field, G.dim, G.a, force), dtype=np.int64)
    adj = np.empty((G.n, G.valency), dtype=np.int64)
    for j in range(G.valency):
        adj[:, j] = coords_to_ranks(p, (M + sphere[j]) % p)
    return make_view(
        n=G.n,
        k=G.valency,
        lam=float(lam),
        adj=adj,
        validate=G.n * G.valency <= 2_000_000,
    )
