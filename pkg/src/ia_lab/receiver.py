"""Zero-forcing reception: alignment verification and achievable rates.

The checker measures, at every receiver, the rank of the stacked
interference, of the desired signal, and of both together, and evaluates the
family-specific alignment relations (exact equalities, column-subset
containments, span equalities). Rates are computed by projecting onto the
orthogonal complement of the interference span and jointly decoding the
desired streams there: projection keeps the noise white, so the rate is a
log-det over the projected effective channel.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass

import numpy as np

from .channels import ExtendedChannel
from .errors import AlignmentError, ParameterError, ShapeError
from .linalg import (RANK_TOL, equality_residual, numerical_rank,
                     orthonormal_complement, span_residual, subset_residual)
from .schemes import PrecoderScheme

RESIDUAL_TOL = 1e-9
SPAN_TOL = 1e-8


@dataclass(frozen=True)
class RelationCheck:
    """Residual of one alignment relation the scheme family promises."""

    description: str
    receiver: int
    kind: str  # equality | subset | span
    residual: float
    tol: float

    @property
    def ok(self) -> bool:
        return self.residual <= self.tol


@dataclass(frozen=True)
class ReceiverCheck:
    """Rank bookkeeping at one receiver."""

    receiver: int
    desired_streams: int
    desired_rank: int
    interference_rank: int
    joint_rank: int
    full_dim: int

    @property
    def ok(self) -> bool:
        # zero forcing succeeds iff the desired streams survive next to the
        # interference: joint rank must exceed the interference by exactly
        # the stream count
        return (self.desired_rank == self.desired_streams
                and self.joint_rank == self.interference_rank + self.desired_streams)


@dataclass(frozen=True)
class AlignmentReport:
    family: str
    K: int
    M: int
    L: int
    rank_tol: float
    residual_tol: float
    receivers: tuple
    relations: tuple

    @property
    def passed(self) -> bool:
        return (all(r.ok for r in self.receivers)
                and all(r.ok for r in self.relations))

    @property
    def max_residual(self) -> float:
        return max((r.residual for r in self.relations), default=0.0)

    def to_dict(self) -> dict:
        doc = asdict(self)
        doc["passed"] = self.passed
        doc["max_residual"] = self.max_residual
        return doc

    def to_json(self, indent: int = 1) -> str:
        return json.dumps(self.to_dict(), indent=indent)


def _interference_stack(scheme, ext, k) -> np.ndarray:
    return np.hstack([ext.matrix(k, j) @ scheme.precoders[j]
                      for j in range(scheme.K) if j != k])


def _family_relations(scheme, ext, residual_tol, span_tol):
    """Enumerate the alignment relations promised by the scheme family."""
    K = scheme.K
    V = scheme.precoders
    H = ext.matrix
    checks = []

    def eq(rx, desc, a, b):
        checks.append(RelationCheck(desc, rx, "equality",
                                    equality_residual(a, b), residual_tol))

    def subset(rx, desc, cols, pool):
        checks.append(RelationCheck(desc, rx, "subset",
                                    subset_residual(cols, pool), residual_tol))

    def span(rx, desc, a, b):
        checks.append(RelationCheck(desc, rx, "span",
                                    span_residual(a, b), span_tol))

    if scheme.family == "siso-k3":
        eq(0, "rx1: interference from tx2 equals interference from tx3",
           H(0, 1) @ V[1], H(0, 2) @ V[2])
        subset(1, "rx2: interference from tx3 within interference from tx1",
               H(1, 2) @ V[2], H(1, 0) @ V[0])
        subset(2, "rx3: interference from tx2 within interference from tx1",
               H(2, 1) @ V[1], H(2, 0) @ V[0])
    elif scheme.family == "siso-general":
        ref = H(0, 1) @ V[1]
        for j in range(2, K):
            eq(0, f"rx1: interference from tx{j + 1} equals interference from tx2",
               H(0, j) @ V[j], ref)
        for i in range(1, K):
            for j in range(1, K):
                if j == i:
                    continue
                subset(i, f"rx{i + 1}: interference from tx{j + 1} within tx1's",
                       H(i, j) @ V[j], H(i, 0) @ V[0])
    elif scheme.family == "mimo":
        span(0, "rx1: spans of interference from tx2 and tx3 coincide",
             H(0, 1) @ V[1], H(0, 2) @ V[2])
        eq(1, "rx2: interference from tx1 equals interference from tx3",
           H(1, 0) @ V[0], H(1, 2) @ V[2])
        eq(2, "rx3: interference from tx1 equals interference from tx2",
           H(2, 0) @ V[0], H(2, 1) @ V[1])
    elif scheme.family == "designed":
        for k in range(K):
            others = [j for j in range(K) if j != k]
            ref = H(k, others[0]) @ V[others[0]]
            for j in others[1:]:
                eq(k, f"rx{k + 1}: interference from tx{j + 1} equals tx{others[0] + 1}'s",
                   H(k, j) @ V[j], ref)
    else:
        raise ParameterError(f"unknown scheme family {scheme.family!r}")
    return tuple(checks)


def check_alignment(scheme: PrecoderScheme, ext: ExtendedChannel,
                    rank_tol: float = RANK_TOL,
                    residual_tol: float = RESIDUAL_TOL,
                    span_tol: float = SPAN_TOL) -> AlignmentReport:
    """Measure every rank and alignment relation of a scheme.

    Args:
        scheme: precoders to verify.
        ext: the extended channel they were built against (or any channel of
            matching dimensions).
        rank_tol: singular values below ``rank_tol`` times the largest do
            not count toward a rank.
        residual_tol: pass threshold for equality and subset relations.
        span_tol: pass threshold (sine of largest principal angle) for
            span-equality relations.

    Returns:
        An AlignmentReport; ``report.passed`` is True iff at every receiver
        the desired streams are separable from the interference and every
        family relation holds within tolerance.
    """
    if scheme.K != ext.K:
        raise ShapeError(f"scheme has K={scheme.K}, channel has K={ext.K}")
    if scheme.precoders[0].shape[0] != ext.dim:
        raise ShapeError(
            f"precoders act on {scheme.precoders[0].shape[0]} dimensions, "
            f"channel extension has {ext.dim}")

    receivers = []
    for k in range(scheme.K):
        desired = ext.matrix(k, k) @ scheme.precoders[k]
        interference = _interference_stack(scheme, ext, k)
        joint = np.hstack([desired, interference])
        receivers.append(ReceiverCheck(
            receiver=k,
            desired_streams=scheme.precoders[k].shape[1],
            desired_rank=numerical_rank(desired, rank_tol),
            interference_rank=numerical_rank(interference, rank_tol),
            joint_rank=numerical_rank(joint, rank_tol),
            full_dim=ext.dim,
        ))
    relations = _family_relations(scheme, ext, residual_tol, span_tol)
    return AlignmentReport(family=scheme.family, K=scheme.K, M=ext.M, L=ext.L,
                           rank_tol=rank_tol, residual_tol=residual_tol,
                           receivers=tuple(receivers), relations=relations)


@dataclass(frozen=True)
class RateResult:
    """Per-user achievable rates of zero-forcing reception.

    Rates are in bits per channel use (per extension slot). ``rho`` is the
    total transmit power per orthogonal dimension with unit noise variance,
    split equally over transmitters and then over each one's streams.
    """

    rho: float
    rates: tuple
    stream_powers: tuple

    @property
    def sum_rate(self) -> float:
        return float(sum(self.rates))


def zf_rates(scheme: PrecoderScheme, ext: ExtendedChannel, rho: float,
             report: AlignmentReport = None,
             rank_tol: float = RANK_TOL) -> RateResult:
    """Rates after projecting out the interference at every receiver.

    Receiver k builds an orthonormal basis of the orthogonal complement of
    its stacked interference, projects (noise stays white), and jointly
    decodes its own streams: rate_k = log2 det(I + p_k G G^H) / L with
    G the projected effective channel through unit-norm precoder columns
    and p_k = (rho / K) * L / d_k per stream.

    Refuses to compute when the alignment report fails; a failed report
    means the construction is broken and any rate would be meaningless.
    """
    if rho < 0:
        raise ParameterError(f"transmit power must be nonnegative, got {rho}")
    if report is None:
        report = check_alignment(scheme, ext, rank_tol=rank_tol)
    if not report.passed:
        raise AlignmentError(
            "alignment checks fail; refusing to compute zero-forcing rates")

    K, L = scheme.K, ext.L
    rates = []
    powers = []
    for k in range(K):
        interference = _interference_stack(scheme, ext, k)
        basis = orthonormal_complement(interference, rank_tol)
        d_k = scheme.precoders[k].shape[1]
        if basis.shape[1] < d_k:
            raise AlignmentError(
                f"receiver {k + 1}: {d_k} streams exceed the "
                f"{basis.shape[1]}-dimensional interference-free subspace")
        v = scheme.precoders[k]
        v_unit = v / np.linalg.norm(v, axis=0)
        effective = basis.conj().T @ ext.matrix(k, k) @ v_unit
        p_k = (rho / K) * L / d_k
        gains = np.linalg.svd(effective, compute_uv=False) ** 2
        rates.append(float(np.sum(np.log2(1.0 + p_k * gains)) / L))
        powers.append(p_k)
    return RateResult(rho=float(rho), rates=tuple(rates), stream_powers=tuple(powers))
