"""Exact decomposition of kernel functions into query/event basis vectors.

Every supported kernel K admits a finite split
K((u + v)/b) = sum_k q_k(u) * a_k(v), which turns a sum of kernel values
over events into a dot product between a query-side vector and an
accumulated event-side vector. Polynomial kernels (triangular,
epanechnikov, constant) keep the bandwidth entirely on the query side, so
one set of accumulated moments serves any bandwidth; exponential and
cosine bake the bandwidth into the event side and force an index rebuild
when it changes.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

EARLIER = "earlier"
LATER = "later"

POLYNOMIAL_KINDS = frozenset({"triangular", "epanechnikov", "constant"})
SUPPORTED_KINDS = POLYNOMIAL_KINDS | {"exponential", "cosine"}


class KernelError(ValueError):
    """Unsupported kernel kind or mismatched basis use."""


def kernel_value(kind: str, x: float) -> float:
    """Direct kernel evaluation K(x) on the domain [0, 1]."""
    if kind == "triangular":
        return 1.0 - x
    if kind == "epanechnikov":
        return 1.0 - x * x
    if kind == "exponential":
        return math.exp(-x)
    if kind == "cosine":
        return math.cos(x)
    if kind == "constant":
        return 1.0
    _reject_kind(kind)


def _reject_kind(kind: str):
    if kind == "gaussian":
        raise KernelError(
            "gaussian kernel has no exact finite query/event decomposition "
            "(the squared cross-term cannot be split); use epanechnikov or "
            "exponential instead"
        )
    raise KernelError(f"unsupported kernel kind {kind!r}")


@dataclass(frozen=True)
class AggVector:
    """Accumulated event-side basis sums plus the accumulated event count.

    Addition and subtraction are component-wise; accumulation over a set of
    events is order-independent up to floating point.
    """

    values: tuple[float, ...]
    count: float = 0.0

    @staticmethod
    def zero(size: int) -> "AggVector":
        return AggVector((0.0,) * size, 0.0)

    def __add__(self, other: "AggVector") -> "AggVector":
        return AggVector(
            tuple(x + y for x, y in zip(self.values, other.values, strict=True)),
            self.count + other.count,
        )

    def __sub__(self, other: "AggVector") -> "AggVector":
        return AggVector(
            tuple(x - y for x, y in zip(self.values, other.values, strict=True)),
            self.count - other.count,
        )


@dataclass(frozen=True)
class KernelBasis:
    """A finite list of (q_k, a_k) basis terms for one kernel factor.

    q_funcs take (u, t) and a_funcs take (v, t_i); spatial bases ignore the
    time arguments and temporal bases ignore the distance arguments, which
    lets spatial and temporal bases compose into product bases uniformly.
    When the basis has a constant event-side term it is term 0, so component
    0 of an accumulated vector equals the event count.
    """

    kind: str
    bandwidth: float | None
    half: str | None
    origin: int
    q_funcs: tuple[Callable[[float, float], float], ...]
    a_funcs: tuple[Callable[[float, float], float], ...]
    bandwidth_free: bool
    has_constant_term: bool

    @property
    def size(self) -> int:
        return len(self.a_funcs)

    def query_vector(self, u: float, t: float = 0.0) -> tuple[float, ...]:
        return tuple(f(u, t) for f in self.q_funcs)

    def event_vector(self, v: float, t_i: float = 0.0) -> tuple[float, ...]:
        return tuple(f(v, t_i) for f in self.a_funcs)


def _spatial_terms(kind: str, b: float):
    if kind == "constant":
        return ((lambda u, t: 1.0),), ((lambda v, ti: 1.0),)
    if kind == "triangular":
        q = (lambda u, t: 1.0 - u / b, lambda u, t: -1.0 / b)
        a = (lambda v, ti: 1.0, lambda v, ti: v)
        return q, a
    if kind == "epanechnikov":
        b2 = b * b
        q = (
            lambda u, t: 1.0 - u * u / b2,
            lambda u, t: -2.0 * u / b2,
            lambda u, t: -1.0 / b2,
        )
        a = (lambda v, ti: 1.0, lambda v, ti: v, lambda v, ti: v * v)
        return q, a
    if kind == "exponential":
        q = (lambda u, t: math.exp(-u / b),)
        a = (lambda v, ti: math.exp(-v / b),)
        return q, a
    if kind == "cosine":
        q = (lambda u, t: math.cos(u / b), lambda u, t: -math.sin(u / b))
        a = (lambda v, ti: math.cos(v / b), lambda v, ti: math.sin(v / b))
        return q, a
    _reject_kind(kind)


def spatial_basis(kind: str, b_s: float) -> KernelBasis:
    """Decompose K_s((u + v)/b_s) for u = query-side, v = event-side distance."""
    if b_s <= 0:
        raise KernelError(f"nonpositive spatial bandwidth {b_s!r}")
    q, a = _spatial_terms(kind, b_s)
    return KernelBasis(
        kind=kind,
        bandwidth=b_s,
        half=None,
        origin=0,
        q_funcs=q,
        a_funcs=a,
        bandwidth_free=kind in POLYNOMIAL_KINDS,
        has_constant_term=kind in POLYNOMIAL_KINDS,
    )


def _spatial_reflected_terms(kind: str, b: float):
    """Query-side terms of K((w - v)/b) against the same event moments.

    Used when events indexed by distance v from one endpoint are evaluated
    from the other endpoint, where the argument is w - v with
    w = query distance + edge length. Exponential needs the opposite-sign
    event term, which `PairedBasis` stores alongside the direct one.
    """
    if kind == "constant":
        return ((lambda u, t: 1.0),)
    if kind == "triangular":
        return (lambda u, t: 1.0 - u / b, lambda u, t: 1.0 / b)
    if kind == "epanechnikov":
        b2 = b * b
        return (
            lambda u, t: 1.0 - u * u / b2,
            lambda u, t: 2.0 * u / b2,
            lambda u, t: -1.0 / b2,
        )
    if kind == "exponential":
        return (lambda u, t: math.exp(-u / b),)
    if kind == "cosine":
        return (lambda u, t: math.cos(u / b), lambda u, t: math.sin(u / b))
    _reject_kind(kind)


def _temporal_terms(kind: str, b: float, half: str, origin: int):
    # All timestamps are shifted by `origin` before any term is evaluated;
    # the shift cancels exactly between the query and event sides and keeps
    # exponentials and cosine arguments small.
    if kind == "constant":
        return ((lambda u, t: 1.0),), ((lambda v, ti: 1.0),)
    if kind == "triangular":
        if half == EARLIER:
            q = (lambda u, t: 1.0 - (t - origin) / b, lambda u, t: 1.0 / b)
        else:
            q = (lambda u, t: 1.0 + (t - origin) / b, lambda u, t: -1.0 / b)
        a = (lambda v, ti: 1.0, lambda v, ti: ti - origin)
        return q, a
    if kind == "epanechnikov":
        b2 = b * b
        # (t - t_i)^2 is symmetric, so both halves share one set of terms.
        q = (
            lambda u, t: 1.0 - (t - origin) ** 2 / b2,
            lambda u, t: 2.0 * (t - origin) / b2,
            lambda u, t: -1.0 / b2,
        )
        a = (
            lambda v, ti: 1.0,
            lambda v, ti: ti - origin,
            lambda v, ti: (ti - origin) ** 2,
        )
        return q, a
    if kind == "exponential":
        if half == EARLIER:
            q = (lambda u, t: math.exp(-(t - origin) / b),)
            a = (lambda v, ti: math.exp((ti - origin) / b),)
        else:
            q = (lambda u, t: math.exp((t - origin) / b),)
            a = (lambda v, ti: math.exp(-(ti - origin) / b),)
        return q, a
    if kind == "cosine":
        # cos is even in (t - t_i), so both halves share one set of terms.
        q = (
            lambda u, t: math.cos((t - origin) / b),
            lambda u, t: math.sin((t - origin) / b),
        )
        a = (
            lambda v, ti: math.cos((ti - origin) / b),
            lambda v, ti: math.sin((ti - origin) / b),
        )
        return q, a
    _reject_kind(kind)


def temporal_basis(kind: str, b_t: float, half: str, origin: int = 0) -> KernelBasis:
    """Decompose K_t(|t - t_i|/b_t) for one temporal half.

    The earlier half covers t_i < t, the later half t_i >= t, so |t - t_i|
    is sign-free within each half and splits like the spatial case.
    """
    if b_t <= 0:
        raise KernelError(f"nonpositive temporal bandwidth {b_t!r}")
    if half not in (EARLIER, LATER):
        raise KernelError(f"unknown temporal half {half!r}")
    q, a = _temporal_terms(kind, b_t, half, origin)
    return KernelBasis(
        kind=kind,
        bandwidth=b_t,
        half=half,
        origin=origin,
        q_funcs=q,
        a_funcs=a,
        bandwidth_free=kind in POLYNOMIAL_KINDS,
        has_constant_term=kind in POLYNOMIAL_KINDS,
    )


def product_basis(spatial: KernelBasis, temporal: KernelBasis) -> KernelBasis:
    """Combine a spatial and a temporal basis into one of size |s| * |t|.

    Term (i, j) has q_ij = q_i * q_j and a_ij = a_i * a_j; evaluating the
    combined dot product equals K_s * K_t summed over events.
    """
    q_funcs = []
    a_funcs = []
    for qs, as_ in zip(spatial.q_funcs, spatial.a_funcs):
        for qt, at in zip(temporal.q_funcs, temporal.a_funcs):
            q_funcs.append(lambda u, t, qs=qs, qt=qt: qs(u, t) * qt(u, t))
            a_funcs.append(lambda v, ti, as_=as_, at=at: as_(v, ti) * at(v, ti))
    return KernelBasis(
        kind=f"{spatial.kind}*{temporal.kind}",
        bandwidth=None,
        half=temporal.half,
        origin=temporal.origin,
        q_funcs=tuple(q_funcs),
        a_funcs=tuple(a_funcs),
        bandwidth_free=spatial.bandwidth_free and temporal.bandwidth_free,
        has_constant_term=spatial.has_constant_term and temporal.has_constant_term,
    )


def event_term(basis, v: float, t_i: float = 0.0) -> AggVector:
    """One event's contribution to the accumulated event-side vector."""
    return AggVector(basis.event_vector(v, t_i), 1.0)


def eval_density(basis, u: float, t: float, agg: AggVector) -> float:
    """Dot the query-side vector with an accumulated event-side vector.

    Assumes events were pre-filtered to the kernel domain; no clamping
    happens here.
    """
    q = basis.query_vector(u, t)
    if len(q) != len(agg.values):
        raise KernelError(
            f"basis size {len(q)} does not match vector size {len(agg.values)}"
        )
    return sum(qk * ak for qk, ak in zip(q, agg.values))


class PairedBasis:
    """Product basis whose event side serves both temporal halves of one index.

    For every temporal kind except exponential the two halves share one
    event-side term list; exponential needs both signs, so the union is
    stored and each half's query vector is zero-padded on the terms it does
    not use. Aggregation indexes accumulate `event_vector` values once and
    answer either half with the matching `query_vector`.
    """

    def __init__(self, spatial_kind: str, b_s: float, temporal_kind: str,
                 b_t: float, origin: int = 0):
        self.spatial_kind = spatial_kind
        self.temporal_kind = temporal_kind
        self.b_s = b_s
        self.b_t = b_t
        self.origin = origin
        if b_s <= 0 or b_t <= 0:
            raise KernelError("bandwidths must be positive")
        zero = lambda u, t: 0.0  # noqa: E731
        qs, as_ = _spatial_terms(spatial_kind, b_s)
        qs_r = _spatial_reflected_terms(spatial_kind, b_s)
        if spatial_kind == "exponential":
            # The reflected direction needs the opposite-sign moment; store
            # both and zero-pad whichever direction does not use a term.
            as_ = as_ + ((lambda v, ti: math.exp(v / b_s)),)
            qs = qs + (zero,)
            qs_r = (zero,) + qs_r
        if temporal_kind == "exponential":
            qe, ae = _temporal_terms(temporal_kind, b_t, EARLIER, origin)
            ql, al = _temporal_terms(temporal_kind, b_t, LATER, origin)
            at = ae + al
            qt_earlier = qe + (zero,)
            qt_later = (zero,) + ql
        else:
            qt_earlier, at = _temporal_terms(temporal_kind, b_t, EARLIER, origin)
            qt_later, _ = _temporal_terms(temporal_kind, b_t, LATER, origin)
        self._as = as_
        self._at = at
        self._q_half = {
            (EARLIER, False): [(f, g) for f in qs for g in qt_earlier],
            (LATER, False): [(f, g) for f in qs for g in qt_later],
            (EARLIER, True): [(f, g) for f in qs_r for g in qt_earlier],
            (LATER, True): [(f, g) for f in qs_r for g in qt_later],
        }
        self.size = len(as_) * len(at)
        self.bandwidth_free = (
            spatial_kind in POLYNOMIAL_KINDS and temporal_kind in POLYNOMIAL_KINDS
        )

    def event_vector(self, v: float, t_i: float) -> tuple[float, ...]:
        sv = [f(v, t_i) for f in self._as]
        tv = [f(v, t_i) for f in self._at]
        return tuple(x * y for x in sv for y in tv)

    def query_vector(self, u: float, t: float, half: str,
                     reflected: bool = False) -> tuple[float, ...]:
        """Query-side vector for distance u at time t in one temporal half.

        With `reflected` the spatial argument is w - v instead of u + v,
        where w is passed as u; used to evaluate events indexed from the
        opposite edge endpoint.
        """
        return tuple(f(u, t) * g(u, t) for f, g in self._q_half[(half, reflected)])

    def index_key(self) -> tuple:
        """Cache key for indexes built on this basis.

        Bandwidths are excluded for polynomial kernels, whose event-side
        moments do not depend on them.
        """
        return (
            self.spatial_kind,
            None if self.spatial_kind in POLYNOMIAL_KINDS else self.b_s,
            self.temporal_kind,
            None if self.temporal_kind in POLYNOMIAL_KINDS else self.b_t,
            self.origin,
        )
