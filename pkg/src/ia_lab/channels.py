"""Random interference-channel generation, symbol extension, and channel files.

Channel coefficients are complex scalars (or M x M matrices) drawn with
magnitude uniform in [a_min, a_max] and phase uniform in [0, 2pi). That is
one admissible continuous distribution with magnitudes bounded away from
zero and infinity, and it makes the bound invariant directly testable.

Every (receiver, transmitter, slot) coefficient block comes from its own
counter-derived Philox stream, so regeneration is bit-identical for a given
seed and independent of the order in which links are materialized.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import ChannelFileError, ParameterError, ShapeError

SCHEMA_VERSION = 1
DEFAULT_A_MIN = 0.5
DEFAULT_A_MAX = 2.0

# slack for re-checking magnitudes of coefficients that went through
# magnitude*exp(i*phase) rounding or a file round-trip
_MAG_SLACK = 1e-12


@dataclass(frozen=True)
class ChannelSet:
    """All per-slot channel matrices of a K-user, M-antenna network.

    ``coeffs`` has shape (K, K, F, M, M); entry ``coeffs[k, j, f]`` is the
    matrix from transmitter j to receiver k on frequency slot f. Instances
    are immutable after construction and safe to share across threads.
    """

    K: int
    M: int
    F: int
    a_min: float
    a_max: float
    seed: int
    coeffs: np.ndarray

    def link(self, k: int, j: int) -> np.ndarray:
        """The F slot matrices of the link from transmitter j to receiver k."""
        return self.coeffs[k, j]

    def slot_matrix(self, k: int, j: int, f: int) -> np.ndarray:
        return self.coeffs[k, j, f]


@dataclass(frozen=True)
class ExtendedChannel:
    """Block-diagonal symbol extension of a channel set.

    ``blocks[k, j, f]`` is the f-th diagonal block (M x M) of the extended
    matrix for the link from transmitter j to receiver k; off-block entries
    of the full matrix are exactly zero by construction.
    """

    K: int
    M: int
    L: int
    blocks: np.ndarray

    @property
    def dim(self) -> int:
        """Row dimension L*M of the extended matrices."""
        return self.L * self.M

    def matrix(self, k: int, j: int) -> np.ndarray:
        """Dense (L*M) x (L*M) block-diagonal matrix of one link."""
        out = np.zeros((self.dim, self.dim), dtype=complex)
        for f in range(self.L):
            lo = f * self.M
            out[lo:lo + self.M, lo:lo + self.M] = self.blocks[k, j, f]
        return out

    def diagonal(self, k: int, j: int) -> np.ndarray:
        """Diagonal entries of one link's extended matrix (M = 1 only)."""
        if self.M != 1:
            raise ShapeError("diagonal() requires single-antenna nodes (M=1)")
        return self.blocks[k, j, :, 0, 0]


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


def _stream(seed: int, index: int) -> np.random.Generator:
    # 128-bit Philox key = (seed, link index); streams never collide and do
    # not depend on generation order.
    return np.random.Generator(np.random.Philox(key=(int(seed) << 64) | index))


def generate_channels(K: int, M: int, F: int,
                      a_min: float = DEFAULT_A_MIN,
                      a_max: float = DEFAULT_A_MAX,
                      seed: int = 0) -> ChannelSet:
    """Draw a fresh channel realization.

    Args:
        K: number of transmitter/receiver pairs, at least 2.
        M: antennas per node, at least 1.
        F: number of frequency slots, at least 1.
        a_min, a_max: magnitude bounds, 0 < a_min <= a_max.
        seed: 64-bit generation seed; identical seeds reproduce identical
            coefficients bit for bit.

    Returns:
        A ChannelSet with K*K*F coefficient matrices of size M x M whose
        entries are independent across links, slots, and matrix positions.
    """
    if K < 2:
        raise ParameterError(f"need at least 2 users, got K={K}")
    if M < 1 or F < 1:
        raise ParameterError(f"M and F must be positive, got M={M}, F={F}")
    if not (0.0 < a_min <= a_max):
        raise ParameterError(
            f"magnitude bounds must satisfy 0 < a_min <= a_max, got [{a_min}, {a_max}]")
    if not (0 <= int(seed) < 2 ** 64):
        raise ParameterError("seed must fit in an unsigned 64-bit integer")

    coeffs = np.empty((K, K, F, M, M), dtype=complex)
    for k in range(K):
        for j in range(K):
            for f in range(F):
                rng = _stream(seed, (k * K + j) * F + f)
                mag = rng.uniform(a_min, a_max, size=(M, M))
                phase = rng.uniform(0.0, 2.0 * np.pi, size=(M, M))
                coeffs[k, j, f] = mag * np.exp(1j * phase)
    return ChannelSet(K=K, M=M, F=F, a_min=float(a_min), a_max=float(a_max),
                      seed=int(seed), coeffs=_freeze(coeffs))


def extend_channel(ch: ChannelSet, L: int, mode: str = "frequency") -> ExtendedChannel:
    """Build the L-slot block-diagonal extension of a channel set.

    ``mode="frequency"`` stacks slots 1..L of the source (requires L <= F);
    ``mode="constant-time"`` repeats slot 1 L times, which models coding over
    L time slots of a constant channel.
    """
    if L < 1:
        raise ParameterError(f"extension length must be positive, got {L}")
    if mode == "frequency":
        if L > ch.F:
            raise ParameterError(
                f"frequency extension needs L <= F, got L={L} with F={ch.F}")
        blocks = ch.coeffs[:, :, :L].copy()
    elif mode == "constant-time":
        blocks = np.repeat(ch.coeffs[:, :, :1], L, axis=2)
    else:
        raise ParameterError(f"unknown extension mode {mode!r}")
    return ExtendedChannel(K=ch.K, M=ch.M, L=L, blocks=_freeze(blocks))


def _fmt(x: float) -> str:
    # 17 significant decimal digits round-trip an IEEE-754 double exactly
    return format(float(x), ".17g")


def save_channels(ch: ChannelSet, path) -> None:
    """Write a channel file (JSON, coefficients flat in (k, j, f, row, col) order)."""
    lines = [
        "{",
        f'  "schema_version": {SCHEMA_VERSION},',
        f'  "K": {ch.K},',
        f'  "M": {ch.M},',
        f'  "F": {ch.F},',
        f'  "seed": {ch.seed},',
        f'  "a_min": {_fmt(ch.a_min)},',
        f'  "a_max": {_fmt(ch.a_max)},',
        '  "coeffs": [',
    ]
    flat = ch.coeffs.reshape(-1)
    body = ",\n".join(
        f'    {{"re": {_fmt(z.real)}, "im": {_fmt(z.imag)}}}' for z in flat)
    lines.append(body)
    lines.append("  ]")
    lines.append("}")
    with open(path, "w", encoding="ascii") as fh:
        fh.write("\n".join(lines) + "\n")


def _coeff_context(idx: int, K: int, M: int, F: int) -> str:
    rest, col = divmod(idx, M)
    rest, row = divmod(rest, M)
    rest, f = divmod(rest, F)
    k, j = divmod(rest, K)
    return f"coeffs[{idx}] (k={k + 1}, j={j + 1}, f={f + 1}, row={row + 1}, col={col + 1})"


def load_channels(path) -> ChannelSet:
    """Read a channel file, validating schema and channel invariants.

    Raises ChannelFileError with line or field context when the file is
    malformed, dimensioned inconsistently, or holds coefficients outside
    the stated magnitude bounds.
    """
    with open(path, "r", encoding="ascii") as fh:
        text = fh.read()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as err:
        raise ChannelFileError(
            f"{path}: invalid JSON at line {err.lineno}, column {err.colno}: {err.msg}"
        ) from err
    if not isinstance(doc, dict):
        raise ChannelFileError(f"{path}: top level must be a JSON object")

    def field(name, kind):
        if name not in doc:
            raise ChannelFileError(f"{path}: missing field {name!r}")
        value = doc[name]
        if kind is int and not (isinstance(value, int) and not isinstance(value, bool)):
            raise ChannelFileError(f"{path}: field {name!r} must be an integer")
        if kind is float and not isinstance(value, (int, float)):
            raise ChannelFileError(f"{path}: field {name!r} must be a number")
        return value

    if field("schema_version", int) != SCHEMA_VERSION:
        raise ChannelFileError(
            f"{path}: unsupported schema_version {doc['schema_version']}")
    K, M, F = field("K", int), field("M", int), field("F", int)
    seed = field("seed", int)
    a_min, a_max = float(field("a_min", float)), float(field("a_max", float))
    if K < 2:
        raise ChannelFileError(f"{path}: need at least 2 users, file has K={K}")
    if M < 1 or F < 1:
        raise ChannelFileError(f"{path}: M and F must be positive, got M={M}, F={F}")
    if not (0.0 < a_min <= a_max):
        raise ChannelFileError(
            f"{path}: magnitude bounds must satisfy 0 < a_min <= a_max")

    raw = field("coeffs", list)
    if not isinstance(raw, list):
        raise ChannelFileError(f"{path}: field 'coeffs' must be an array")
    expected = K * K * F * M * M
    if len(raw) != expected:
        raise ChannelFileError(
            f"{path}: expected {expected} coefficients for K={K}, M={M}, F={F}, "
            f"found {len(raw)}")

    flat = np.empty(expected, dtype=complex)
    lo = a_min * (1.0 - _MAG_SLACK)
    hi = a_max * (1.0 + _MAG_SLACK)
    for idx, entry in enumerate(raw):
        if (not isinstance(entry, dict) or "re" not in entry or "im" not in entry
                or not isinstance(entry["re"], (int, float))
                or not isinstance(entry["im"], (int, float))):
            raise ChannelFileError(
                f"{path}: {_coeff_context(idx, K, M, F)}: expected {{re, im}} numbers")
        z = complex(entry["re"], entry["im"])
        mag = abs(z)
        if not (lo <= mag <= hi):
            raise ChannelFileError(
                f"{path}: {_coeff_context(idx, K, M, F)}: magnitude {mag:.6g} "
                f"outside [{a_min}, {a_max}]")
        flat[idx] = z
    coeffs = flat.reshape(K, K, F, M, M)

    if M == 1:
        # single-antenna slot values must be pairwise distinct per link
        for k in range(K):
            for j in range(K):
                vals = coeffs[k, j, :, 0, 0]
                if len(np.unique(vals)) != F:
                    raise ChannelFileError(
                        f"{path}: link (k={k + 1}, j={j + 1}) repeats a slot value")
    return ChannelSet(K=K, M=M, F=F, a_min=a_min, a_max=a_max,
                      seed=seed, coeffs=_freeze(coeffs))
