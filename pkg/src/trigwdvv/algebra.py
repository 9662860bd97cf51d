"""Tangent-space multiplication and its limit on block subspaces.

The product u * v = sum_alpha c_alpha (alpha, u)(alpha, v) coth((alpha, x)) alpha
is commutative by construction; its associativity is the matrix form of the
WDVV equations.  On the subspace where coordinates are constant on blocks, the
product of tangent vectors has a finite limit obtained by dropping the block
subsystem and projecting every remaining covector; this module computes that
limit, the closure (tangency) residual behind it, the structure constants in
the block basis, and the decomposition of the restricted inner product matrix
in terms of the projected tensor.
"""

from __future__ import annotations

import numpy as np

from .configurations import (
    BCnParameters,
    Configuration,
    MERGE_TOL,
    Partition,
    build_bcN_root_system,
    restrict_configuration,
)
from .errors import DegenerateHError, DimensionError, PreconditionError, SingularityError
from .prepotential import DEFAULT_THRESHOLD, coth, h_function, tensor_generic

_H_FLOOR = 1e-6


class ProductContext:
    """A configuration together with an admissible evaluation point."""

    def __init__(self, config: Configuration, x, threshold: float = DEFAULT_THRESHOLD) -> None:
        x = np.asarray(x, dtype=float)
        if x.shape != (config.dimension,):
            raise DimensionError(
                f"point has shape {x.shape}, expected ({config.dimension},)"
            )
        self.config = config
        self.x = x
        self.threshold = float(threshold)
        self._check_admissible()

    def _check_admissible(self):
        c = self.config.multiplicities
        active = c != 0.0
        if not active.any():
            return
        z = self.config.vectors[active] @ self.x
        if np.abs(z).min() < self.threshold:
            A = self.config.vectors[active]
            idx = int(np.argmin(np.abs(z)))
            raise SingularityError(
                f"point {self.x.tolist()} lies within {self.threshold} of the "
                f"hyperplane of member {A[idx].tolist()}"
            )


def multiply(ctx: ProductContext, u, v) -> np.ndarray:
    """u * v = sum over active members of c (alpha,u)(alpha,v) coth((alpha,x)) alpha."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    n = ctx.config.dimension
    if u.shape != (n,) or v.shape != (n,):
        raise DimensionError(f"u, v must have shape ({n},)")
    A = ctx.config.vectors
    c = ctx.config.multiplicities
    active = c != 0.0
    if not active.any():
        return np.zeros(n)
    A = A[active]
    # the pairing product is grouped first so u * v == v * u holds exactly
    pairings = (A @ u) * (A @ v)
    w = c[active] * coth(A @ ctx.x) * pairings
    return A.T @ w


def associativity_residual(ctx: ProductContext, u, v, w) -> float:
    """Scaled max-abs entry of (u*v)*w - u*(v*w)."""
    left = multiply(ctx, multiply(ctx, u, v), w)
    right = multiply(ctx, u, multiply(ctx, v, w))
    scale = max(1.0, float(np.abs(left).max()), float(np.abs(right).max()))
    return float(np.abs(left - right).max()) / scale


class RestrictionContext:
    """BC_N data restricted to the subspace of a block partition.

    Holds the ambient BC_N(r, s, q) configuration, the partition, the point
    x_tilde in block-basis coordinates, and the projected configuration.  The
    embedded point sum_k x_tilde_k f_k must be admissible for every covector
    outside the block subsystem.
    """

    def __init__(
        self,
        r: float,
        s: float,
        q: float,
        part: Partition,
        x_tilde,
        threshold: float = DEFAULT_THRESHOLD,
    ) -> None:
        x_tilde = np.asarray(x_tilde, dtype=float)
        if x_tilde.shape != (part.n,):
            raise DimensionError(f"x_tilde has shape {x_tilde.shape}, expected ({part.n},)")
        self.r, self.s, self.q = float(r), float(s), float(q)
        self.part = part
        self.x_tilde = x_tilde
        self.threshold = float(threshold)
        self.ambient_config = build_bcN_root_system(part.N, r, s, q)
        self.projected_config = restrict_configuration(part.N, r, s, q, part)
        self.block_basis = part.block_indicators()  # rows are f_1..f_n
        self.m = np.asarray(part.blocks, dtype=float)
        self.x_embedded = self.block_basis.T @ x_tilde
        # f-hat coordinates (alpha, f_k) of every ambient member; zero rows are
        # exactly the block subsystem.
        self._coords = self.ambient_config.vectors @ self.block_basis.T
        self.in_subsystem = np.abs(self._coords).max(axis=1) <= MERGE_TOL
        self._check_point()

    def _check_point(self):
        c = self.ambient_config.multiplicities
        keep = (~self.in_subsystem) & (c != 0.0)
        if not keep.any():
            return
        z = self.ambient_config.vectors[keep] @ self.x_embedded
        if np.abs(z).min() < self.threshold:
            A = self.ambient_config.vectors[keep]
            idx = int(np.argmin(np.abs(z)))
            raise SingularityError(
                f"embedded point lies within {self.threshold} of the hyperplane "
                f"of member {A[idx].tolist()}"
            )

    def subsystem_members(self) -> np.ndarray:
        """Vectors of the block subsystem (within-block differences)."""
        return self.ambient_config.vectors[self.in_subsystem]

    def params(self) -> BCnParameters:
        """The projected family parameters (m = block sizes)."""
        return BCnParameters(
            n=self.part.n, r=self.r, s=self.s, q=self.q, m=tuple(float(b) for b in self.part.blocks)
        )


def restricted_multiply(rctx: RestrictionContext, u, v) -> np.ndarray:
    """Limit of u * v on the block subspace, for u, v tangent to it.

    Sums over covectors outside the block subsystem with each covector replaced
    by its orthogonal projection; the result is again constant on blocks.
    """
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    N = rctx.part.N
    if u.shape != (N,) or v.shape != (N,):
        raise DimensionError(f"u, v must have shape ({N},)")
    A = rctx.ambient_config.vectors
    c = rctx.ambient_config.multiplicities
    keep = (~rctx.in_subsystem) & (c != 0.0)
    if not keep.any():
        return np.zeros(N)
    A = A[keep]
    w = c[keep] * coth(A @ rctx.x_embedded) * (A @ u) * (A @ v)
    # projected covectors: sum_k (alpha, f_k)/m_k * f_k
    proj = (rctx._coords[keep] / rctx.m) @ rctx.block_basis
    return proj.T @ w


def tangency_residual(rctx: RestrictionContext, u, v, alpha) -> float:
    """|sum over beta outside the subsystem of c (beta,u)(beta,v)(alpha,beta) coth((beta,x))|.

    ``alpha`` must belong to the block subsystem, which must be nonempty.  The
    sum vanishes when u and v are constant on blocks; non-tangent inputs are
    accepted so the necessity of tangency can be demonstrated.  Scaled by the
    sum of absolute summands.
    """
    if not rctx.in_subsystem.any():
        raise PreconditionError("partition has no repeated blocks: the subsystem is empty")
    alpha = np.asarray(alpha, dtype=float)
    sub = rctx.subsystem_members()
    if not any(np.abs(sub_row - alpha).max() <= MERGE_TOL for sub_row in sub):
        raise PreconditionError(f"alpha = {alpha.tolist()} is not a subsystem covector")
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    A = rctx.ambient_config.vectors
    c = rctx.ambient_config.multiplicities
    keep = (~rctx.in_subsystem) & (c != 0.0)
    A = A[keep]
    terms = c[keep] * (A @ u) * (A @ v) * (A @ alpha) * coth(A @ rctx.x_embedded)
    scale = max(1.0, float(np.abs(terms).sum()))
    return abs(float(terms.sum())) / scale


def structure_constants(rctx: RestrictionContext) -> np.ndarray:
    """C[i][j][k] with f_i * f_j = sum_k C[i][j][k] f_k, from restricted products.

    Equals tensor_generic of the projected configuration at x_tilde divided by
    m_k in the last index; tests check the two routes against each other.
    """
    n = rctx.part.n
    C = np.zeros((n, n, n))
    for i in range(n):
        for j in range(i, n):
            y = restricted_multiply(rctx, rctx.block_basis[i], rctx.block_basis[j])
            coeffs = (rctx.block_basis @ y) / rctx.m
            C[i, j, :] = coeffs
            C[j, i, :] = coeffs
    return C


def h_b_decomposition_residual(rctx: RestrictionContext) -> float:
    """Deviation of diag(m) from sum_i h^{-1} sinh(2 x~_i) F~_i, scaled.

    Vanishes exactly when the multiplicity constraint holds for (r, s, q) and
    N = sum of blocks.  Requires |h(x~)| >= 1e-6.
    """
    p = rctx.params()
    h = h_function(p, rctx.x_tilde)
    if abs(h) < _H_FLOOR:
        raise DegenerateHError(f"|h(x~)| = {abs(h):.3e} < {_H_FLOOR}; decomposition undefined")
    Ft = tensor_generic(rctx.projected_config, rctx.x_tilde, rctx.threshold)
    S = np.einsum("i,ijk->jk", np.sinh(2.0 * rctx.x_tilde) / h, Ft)
    target = np.diag(rctx.m)
    scale = max(1.0, float(np.abs(S).max()), float(np.abs(target).max()))
    return float(np.abs(target - S).max()) / scale
