"""Core model types, node samplers, and edge-existence predicates.

A node carries a Pareto-distributed weight and a uniform direction on the
unit sphere; its latent vector is the product of the two.  Edges are decided
by comparing a (possibly transformed) product of weights and a direction dot
product against a threshold.  The comparison is non-strict: a pair exactly at
the threshold is linked.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy.special import ndtri

from .errors import DimensionError, DomainError
from .streams import SubStream, substream_uniforms

_UNIT_NORM_TOL = 1e-12


@dataclass(frozen=True)
class ParetoParams:
    """Shape `a` and scale `w0` of the weight distribution (both positive)."""

    a: float
    w0: float

    def __post_init__(self):
        if not (self.a > 0):
            raise DomainError(f"Pareto shape must be positive, got a={self.a}")
        if not (self.w0 > 0):
            raise DomainError(f"Pareto scale must be positive, got w0={self.w0}")

    def survival(self, t) -> np.ndarray:
        """P(weight > t) = (w0/t)^a for t >= w0."""
        t = np.asarray(t, dtype=float)
        return np.where(t <= self.w0, 1.0, (self.w0 / t) ** self.a)


class LinkKind(str, Enum):
    IDENTITY = "identity"
    EXP = "exp"
    ODD_POWER_PLUS_C = "oddpow"
    EVEN_POWER = "evenpow"


@dataclass(frozen=True)
class LinkFn:
    """Transform applied to the direction dot product, defined on [-1, 1].

    Identity, Exp and OddPowerPlusC are continuous and strictly increasing,
    so an inverse exists on [h(-1), h(1)].  EvenPower is supported for graph
    generation only; analytic operations reject it.
    """

    kind: LinkKind
    m: int = 1
    c: float = 0.0

    def __post_init__(self):
        if self.kind in (LinkKind.ODD_POWER_PLUS_C, LinkKind.EVEN_POWER):
            if not (isinstance(self.m, int) and self.m >= 1):
                raise DomainError(f"power index m must be a positive integer, got {self.m}")

    @staticmethod
    def identity() -> "LinkFn":
        return LinkFn(LinkKind.IDENTITY)

    @staticmethod
    def exp() -> "LinkFn":
        return LinkFn(LinkKind.EXP)

    @staticmethod
    def odd_power_plus_c(m: int, c: float) -> "LinkFn":
        return LinkFn(LinkKind.ODD_POWER_PLUS_C, m=m, c=c)

    @staticmethod
    def even_power(m: int) -> "LinkFn":
        return LinkFn(LinkKind.EVEN_POWER, m=m)

    @property
    def strictly_increasing(self) -> bool:
        return self.kind is not LinkKind.EVEN_POWER

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        if self.kind is LinkKind.IDENTITY:
            out = t
        elif self.kind is LinkKind.EXP:
            out = np.exp(t)
        elif self.kind is LinkKind.ODD_POWER_PLUS_C:
            out = t ** (2 * self.m + 1) + self.c
        else:
            out = t ** (2 * self.m)
        return out if out.ndim else float(out)

    @property
    def lo(self) -> float:
        """h(-1)."""
        return self(-1.0)

    @property
    def hi(self) -> float:
        """h(1)."""
        return self(1.0)

    @property
    def max_value(self) -> float:
        """Maximum of h over [-1, 1]."""
        if self.kind is LinkKind.EVEN_POWER:
            return 1.0
        return self.hi

    def inverse(self, y: float, tol: float = 1e-12) -> float:
        """Invert a strictly increasing link on [h(-1), h(1)] by bisection."""
        if not self.strictly_increasing:
            raise DomainError("even-power links are not invertible on [-1, 1]")
        if not (self.lo <= y <= self.hi):
            raise DomainError(f"value {y} outside link range [{self.lo}, {self.hi}]")
        a, b = -1.0, 1.0
        while b - a > tol:
            mid = 0.5 * (a + b)
            if self(mid) < y:
                a = mid
            else:
                b = mid
        return 0.5 * (a + b)

    def spec(self) -> str:
        """Compact textual form, parseable by the CLI."""
        if self.kind is LinkKind.IDENTITY:
            return "identity"
        if self.kind is LinkKind.EXP:
            return "exp"
        if self.kind is LinkKind.ODD_POWER_PLUS_C:
            return f"oddpow:{self.m}:{self.c:g}"
        return f"evenpow:{self.m}"

    @staticmethod
    def parse(text: str) -> "LinkFn":
        parts = text.split(":")
        name = parts[0]
        if name == "identity":
            return LinkFn.identity()
        if name == "exp":
            return LinkFn.exp()
        if name == "oddpow":
            if len(parts) != 3:
                raise DomainError(f"expected oddpow:m:c, got {text!r}")
            return LinkFn.odd_power_plus_c(int(parts[1]), float(parts[2]))
        if name == "evenpow":
            if len(parts) != 2:
                raise DomainError(f"expected evenpow:m, got {text!r}")
            return LinkFn.even_power(int(parts[1]))
        raise DomainError(f"unknown link function {text!r}")


class Variant(str, Enum):
    UNDIRECTED = "undirected"
    DIRECTED = "directed"
    LINKFN = "linkfn"


@dataclass(frozen=True)
class EdgeRule:
    """Edge-existence rule: variant, threshold, and variant parameters.

    Undirected:   w_u * w_v * dot >= theta
    Directed:     w_u^alpha * w_v^beta * dot >= theta     (arc u -> v)
    LinkFunction: w_u^alpha * w_v^beta * h(dot) >= theta  (arc u -> v)
    """

    variant: Variant
    theta: float
    alpha: float | None = None
    beta: float | None = None
    h: LinkFn | None = None

    def __post_init__(self):
        if not (self.theta >= 0):
            raise DomainError(f"threshold must be non-negative, got theta={self.theta}")
        if self.variant is Variant.UNDIRECTED:
            return
        if self.alpha is None or self.beta is None:
            raise DomainError(f"{self.variant.value} rule requires alpha and beta")
        if not (self.alpha > 0 and self.beta > 0):
            raise DomainError(f"alpha and beta must be positive, got {self.alpha}, {self.beta}")
        if self.variant is Variant.LINKFN and self.h is None:
            raise DomainError("linkfn rule requires a link function")

    @staticmethod
    def undirected(theta: float) -> "EdgeRule":
        return EdgeRule(Variant.UNDIRECTED, theta)

    @staticmethod
    def directed(theta: float, alpha: float, beta: float) -> "EdgeRule":
        return EdgeRule(Variant.DIRECTED, theta, alpha=alpha, beta=beta)

    @staticmethod
    def link_function(theta: float, alpha: float, beta: float, h: LinkFn) -> "EdgeRule":
        return EdgeRule(Variant.LINKFN, theta, alpha=alpha, beta=beta, h=h)

    @property
    def is_directed(self) -> bool:
        return self.variant is not Variant.UNDIRECTED


@dataclass(frozen=True)
class Node:
    id: int
    weight: float
    direction: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.id < 0:
            raise DomainError(f"node id must be non-negative, got {self.id}")
        norm = float(np.linalg.norm(self.direction))
        if abs(norm - 1.0) > _UNIT_NORM_TOL:
            raise DomainError(f"direction norm {norm} deviates from 1 by more than {_UNIT_NORM_TOL}")

    @property
    def latent(self) -> np.ndarray:
        return self.weight * self.direction


@dataclass(frozen=True)
class ModelConfig:
    n: int
    d: int
    pareto: ParetoParams
    rule: EdgeRule
    seed: int

    def __post_init__(self):
        if self.n < 1:
            raise DomainError(f"node count must be >= 1, got {self.n}")
        if self.d < 2:
            raise DimensionError(f"ambient dimension must be >= 2, got {self.d}")
        if not (0 <= self.seed < 2 ** 64):
            raise DomainError(f"seed must be a 64-bit unsigned integer, got {self.seed}")


def sample_weight(stream: SubStream, pareto: ParetoParams) -> float:
    """Inverse-CDF Pareto draw: w0 * (1 - U)^(-1/a), U uniform on [0, 1)."""
    u = stream.next_uniform()
    return pareto.w0 * (1.0 - u) ** (-1.0 / pareto.a)


def sample_direction(stream: SubStream, d: int) -> np.ndarray:
    """Uniform point on the unit (d-1)-sphere.

    d = 3 uses the cylinder parameterization (z uniform on [-1, 1], azimuth
    uniform on [0, 2*pi)); other d normalize a vector of standard normals.
    The method is fixed per d so draws are reproducible.
    """
    if d < 2:
        raise DimensionError(f"direction dimension must be >= 2, got {d}")
    if d == 3:
        z = 2.0 * stream.next_uniform() - 1.0
        phi = 2.0 * math.pi * stream.next_uniform()
        s = math.sqrt(max(0.0, 1.0 - z * z))
        return np.array([s * math.cos(phi), s * math.sin(phi), z])
    u = np.array([stream.next_uniform() for _ in range(d)])
    g = ndtri(np.maximum(u, 2.0 ** -64))  # ndtri(0) is -inf
    return g / np.linalg.norm(g)


def sample_node(seed: int, node_id: int, pareto: ParetoParams, d: int) -> Node:
    """One node from its own substream: weight first, then direction.

    Bit-identical to row `node_id` of `sample_node_table` (both run the same
    vectorized arithmetic; the stream-based samplers can differ by one ulp).
    """
    weights, dirs = _sample_rows(np.array([node_id]), seed, pareto, d)
    return Node(node_id, float(weights[0]), dirs[0])


def sample_node_table(n: int, seed: int, pareto: ParetoParams, d: int) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized node table: (weights shape (n,), directions shape (n, d))."""
    return _sample_rows(np.arange(n), seed, pareto, d)


def _sample_rows(ids: np.ndarray, seed: int, pareto: ParetoParams, d: int) -> tuple[np.ndarray, np.ndarray]:
    if d < 2:
        raise DimensionError(f"direction dimension must be >= 2, got {d}")
    if d == 3:
        u = substream_uniforms(seed, ids, 3)
        weights = pareto.w0 * (1.0 - u[:, 0]) ** (-1.0 / pareto.a)
        z = 2.0 * u[:, 1] - 1.0
        phi = 2.0 * np.pi * u[:, 2]
        s = np.sqrt(np.maximum(0.0, 1.0 - z * z))
        dirs = np.column_stack([s * np.cos(phi), s * np.sin(phi), z])
    else:
        u = substream_uniforms(seed, ids, 1 + d)
        weights = pareto.w0 * (1.0 - u[:, 0]) ** (-1.0 / pareto.a)
        g = ndtri(np.maximum(u[:, 1:], 2.0 ** -64))
        dirs = g / np.linalg.norm(g, axis=1, keepdims=True)
    return weights, dirs


def edge_exists(u: Node, v: Node, rule: EdgeRule) -> bool:
    """Pure edge predicate; for directed variants this is the arc u -> v."""
    if u.direction.shape != v.direction.shape:
        raise DimensionError(
            f"direction dimensions differ: {u.direction.shape} vs {v.direction.shape}"
        )
    dot = float(u.direction @ v.direction)
    if rule.variant is Variant.UNDIRECTED:
        lhs = u.weight * v.weight * dot
    elif rule.variant is Variant.DIRECTED:
        lhs = u.weight ** rule.alpha * v.weight ** rule.beta * dot
    else:
        lhs = u.weight ** rule.alpha * v.weight ** rule.beta * float(rule.h(dot))
    return lhs >= rule.theta
