"""Weighted vector configurations of BC_n type and their block restrictions.

A configuration is a finite list of covectors with scalar multiplicities; every
prepotential, tensor and product in this package is a sum over one.  This module
builds the n-parameter BC_n family, the unreduced BC_N root system (all block
sizes equal to one), and the projection machinery that maps BC_N onto the
subspace where coordinates are constant on blocks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError, ParameterError

# Coinciding member vectors are merged on construction.  Family builders only
# produce integer / half-integer coordinates, so the tolerance guards float
# noise from projections, not genuine ambiguity.
MERGE_TOL = 1e-12


@dataclass(frozen=True)
class WeightedVector:
    """A nonzero covector together with its scalar multiplicity."""

    vector: tuple[float, ...]
    multiplicity: float

    def __post_init__(self):
        if len(self.vector) < 1:
            raise ParameterError("vector must have dimension >= 1")
        if not all(math.isfinite(v) for v in self.vector):
            raise ParameterError(f"vector has non-finite entries: {self.vector}")
        if not math.isfinite(self.multiplicity):
            raise ParameterError("multiplicity must be finite")
        if max(abs(v) for v in self.vector) == 0.0:
            raise ParameterError("member vectors must be nonzero")

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.vector, dtype=float)


class Configuration:
    """An immutable list of weighted covectors in a fixed dimension.

    Members whose vectors coincide (within ``MERGE_TOL`` per coordinate) are
    merged by summing multiplicities; first-occurrence order is kept.  Members
    with zero multiplicity are retained so the member count of a family build
    is deterministic.
    """

    def __init__(self, dimension: int, members) -> None:
        if dimension < 1:
            raise ParameterError("dimension must be >= 1")
        self.dimension = int(dimension)
        merged: list[list] = []  # [coords tuple, multiplicity]
        for item in members:
            if isinstance(item, WeightedVector):
                vec, mult = item.vector, item.multiplicity
            else:
                vec, mult = item
                vec = tuple(float(v) for v in vec)
            if len(vec) != self.dimension:
                raise DimensionError(
                    f"member {vec} has dimension {len(vec)}, expected {self.dimension}"
                )
            for slot in merged:
                if all(abs(a - b) <= MERGE_TOL for a, b in zip(slot[0], vec)):
                    slot[1] += float(mult)
                    break
            else:
                merged.append([vec, float(mult)])
        self.members: tuple[WeightedVector, ...] = tuple(
            WeightedVector(vec, mult) for vec, mult in merged
        )
        vectors = np.array([m.vector for m in self.members], dtype=float)
        vectors = vectors.reshape(len(self.members), self.dimension)
        mults = np.array([m.multiplicity for m in self.members], dtype=float)
        vectors.setflags(write=False)
        mults.setflags(write=False)
        self._vectors = vectors
        self._multiplicities = mults

    @property
    def vectors(self) -> np.ndarray:
        """(len(members), dimension) array of member vectors (read-only)."""
        return self._vectors

    @property
    def multiplicities(self) -> np.ndarray:
        """(len(members),) array of multiplicities (read-only)."""
        return self._multiplicities

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __repr__(self) -> str:
        return f"Configuration(dimension={self.dimension}, members={len(self.members)})"


def configurations_match(
    a: Configuration,
    b: Configuration,
    coord_tol: float = 0.0,
    mult_tol: float = 0.0,
) -> bool:
    """True iff the two configurations have the same members, order-insensitively.

    Each member of ``a`` must match exactly one member of ``b`` with every
    coordinate within ``coord_tol`` and multiplicity within ``mult_tol``.
    With the default zero tolerances this is exact equality.
    """
    if a.dimension != b.dimension or len(a) != len(b):
        return False
    unused = list(b.members)
    for ma in a.members:
        for i, mb in enumerate(unused):
            if all(abs(x - y) <= coord_tol for x, y in zip(ma.vector, mb.vector)) and abs(
                ma.multiplicity - mb.multiplicity
            ) <= mult_tol:
                del unused[i]
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class BCnParameters:
    """Parameters (n, r, s, q, m_1..m_n) of the BC_n family; N = sum(m) is cached."""

    n: int
    r: float
    s: float
    q: float
    m: tuple[float, ...]
    N: float = field(init=False)

    def __post_init__(self):
        if self.n < 1:
            raise ParameterError("n must be >= 1")
        if len(self.m) != self.n:
            raise ParameterError(f"m has length {len(self.m)}, expected n = {self.n}")
        if not all(math.isfinite(v) for v in (self.r, self.s, self.q, *self.m)):
            raise ParameterError("parameters must be finite")
        object.__setattr__(self, "m", tuple(float(v) for v in self.m))
        object.__setattr__(self, "N", float(sum(self.m)))

    @property
    def m_array(self) -> np.ndarray:
        return np.asarray(self.m, dtype=float)


@dataclass(frozen=True)
class Partition:
    """An ordered partition of N coordinates into n consecutive blocks."""

    N: int
    blocks: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "blocks", tuple(int(b) for b in self.blocks))
        if any(b < 1 for b in self.blocks):
            raise ParameterError("every block must have size >= 1")
        if sum(self.blocks) != self.N:
            raise ParameterError(
                f"blocks {self.blocks} sum to {sum(self.blocks)}, expected N = {self.N}"
            )

    @property
    def n(self) -> int:
        return len(self.blocks)

    def block_indicators(self) -> np.ndarray:
        """(n, N) 0/1 matrix whose k-th row marks the coordinates of block k."""
        F = np.zeros((self.n, self.N))
        start = 0
        for k, b in enumerate(self.blocks):
            F[k, start : start + b] = 1.0
            start += b
        return F


def constraint_residual(p: BCnParameters) -> float:
    """r + 8s + 2q(N - 2); zero exactly when the multiplicity relation holds."""
    return p.r + 8.0 * p.s + 2.0 * p.q * (p.N - 2.0)


def solve_r(s: float, q: float, m) -> float:
    """The value of r that closes the multiplicity relation for given s, q, m."""
    return -8.0 * s - 2.0 * q * (float(sum(m)) - 2.0)


def build_bcn(p: BCnParameters) -> Configuration:
    """The BC_n family configuration for parameters ``p``.

    Members, in construction order: e_i with multiplicity r*m_i; 2e_i with
    multiplicity s*m_i + q*m_i*(m_i - 1)/2; e_i + e_j and e_i - e_j (i < j)
    with multiplicity q*m_i*m_j.  Zero multiplicities are retained, so the
    member count is always n + n + n(n-1).
    """
    n, r, s, q, m = p.n, p.r, p.s, p.q, p.m
    members = []
    for i in range(n):
        e = [0.0] * n
        e[i] = 1.0
        members.append((tuple(e), r * m[i]))
    for i in range(n):
        e = [0.0] * n
        e[i] = 2.0
        members.append((tuple(e), s * m[i] + 0.5 * q * m[i] * (m[i] - 1.0)))
    for i in range(n):
        for j in range(i + 1, n):
            plus = [0.0] * n
            plus[i], plus[j] = 1.0, 1.0
            minus = [0.0] * n
            minus[i], minus[j] = 1.0, -1.0
            members.append((tuple(plus), q * m[i] * m[j]))
            members.append((tuple(minus), q * m[i] * m[j]))
    return Configuration(n, members)


def build_bcN_root_system(N: int, r: float, s: float, q: float) -> Configuration:
    """Positive half of the BC_N root system: the family at m = (1, ..., 1)."""
    return build_bcn(BCnParameters(n=N, r=r, s=s, q=q, m=(1.0,) * N))


def project_vector(u, part: Partition) -> np.ndarray:
    """Coordinates of the orthogonal projection of ``u`` onto the block subspace.

    Returned in the block-indicator basis f_1..f_n: component k is
    (u, f_k) / m_k.  The full-space projection is sum_k result[k] * f_k.
    """
    u = np.asarray(u, dtype=float)
    if u.shape != (part.N,):
        raise DimensionError(f"vector has shape {u.shape}, expected ({part.N},)")
    F = part.block_indicators()
    return (F @ u) / np.asarray(part.blocks, dtype=float)


def restrict_configuration(N: int, r: float, s: float, q: float, part: Partition) -> Configuration:
    """Project BC_N(r, s, q) minus its block subsystem onto the block subspace.

    The subsystem consists of the within-block differences (exactly the members
    whose projection vanishes).  Every other member is projected and rewritten
    in the coordinates where the normalized block vector f_k / m_k becomes e_k;
    coinciding images merge by summing multiplicities.  The result equals
    build_bcn with m = part.blocks, member for member.
    """
    if N != part.N:
        raise DimensionError(f"N = {N} does not match partition N = {part.N}")
    ambient = build_bcN_root_system(N, r, s, q)
    F = part.block_indicators()
    members = []
    for mem in ambient.members:
        alpha = mem.array
        # coordinates after f_k/m_k -> e_k, i.e. (alpha, f_k); subsystem members
        # are exactly those with all coordinates zero
        new_coords = F @ alpha
        if np.abs(new_coords).max() <= MERGE_TOL:
            continue
        members.append((tuple(new_coords), mem.multiplicity))
    return Configuration(part.n, members)
