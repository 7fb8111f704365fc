"""Deterministic per-edge random draws via a counter-based 64-bit mix.

Every edge weight in this package is a pure function of
``(seed, u, v, channel)``.  Nothing is stateful, so implicit instances can
serve tens of millions of edges without materializing anything, and any
single draw can be reproduced in isolation.

The mixing function, byte for byte
----------------------------------
All arithmetic is on 64-bit unsigned integers, wrapping modulo 2**64.

::

    mix64(z):
        z = z + 0x9E3779B97F4A7C15
        z = (z XOR (z >> 30)) * 0xBF58476D1CE4E5B9
        z = (z XOR (z >> 27)) * 0x94D049BB133111EB
        return z XOR (z >> 31)

    edge_hash(seed, u, v, channel):        # requires u < v
        return mix64(mix64(mix64(seed) XOR (u * 2**32 + v)) XOR channel)

    uniform(seed, u, v, channel):
        h = edge_hash(seed, u, v, channel)
        return ((h >> 11) + 1) * 2.0**-53   # uniform on [2**-53, 1]

``channel`` is 0 for the length draw and 1 for the cost draw.  The uniform
is then pushed through the selected distribution transform:

====================  =======================================================
kind                  transform of the uniform draw ``U``
====================  =======================================================
uniform               ``U``
uniform_power(g)      ``U ** g``            (``g == 1`` returns ``U`` as is)
exp_power(s)          ``(-ln U) ** s``
trunc_exp_power(s,t)  ``(-ln U) ** s`` if ``-ln U <= t``, else ``+inf``
====================  =======================================================

``U`` is drawn from [2**-53, 1], never 0, so ``-ln U`` is finite and
``U ** g`` is positive.  Trial seeds for the experiment harness come from
the same primitive: ``derive_seed(master, n, trial) =
mix64(mix64(mix64(master) XOR n) XOR trial)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

_MASK64 = (1 << 64) - 1
_MIX_ADD = 0x9E3779B97F4A7C15
_MIX_MUL1 = 0xBF58476D1CE4E5B9
_MIX_MUL2 = 0x94D049BB133111EB

#: channel codes for the two weight streams of an edge
LENGTH = 0
COST = 1

#: distribution kind codes shared with the compute kernels
KIND_UNIFORM = 0
KIND_UNIFORM_POWER = 1
KIND_EXP_POWER = 2
KIND_TRUNC_EXP_POWER = 3

_KIND_NAMES = {
    KIND_UNIFORM: "uniform",
    KIND_UNIFORM_POWER: "uniform_power",
    KIND_EXP_POWER: "exp_power",
    KIND_TRUNC_EXP_POWER: "trunc_exp_power",
}


def mix64(z: int) -> int:
    """Reference implementation of the 64-bit mixing step (pure Python)."""
    z = (z + _MIX_ADD) & _MASK64
    z = ((z ^ (z >> 30)) * _MIX_MUL1) & _MASK64
    z = ((z ^ (z >> 27)) * _MIX_MUL2) & _MASK64
    return z ^ (z >> 31)


def edge_hash(seed: int, u: int, v: int, channel: int) -> int:
    """64-bit hash of one (edge, channel) pair.  Requires ``u < v``."""
    return mix64(mix64(mix64(seed & _MASK64) ^ ((u << 32) | v)) ^ channel)


def uniform_from_hash(h: int) -> float:
    """Map a 64-bit hash to a uniform float in [2**-53, 1]."""
    return ((h >> 11) + 1) * 2.0**-53


def edge_uniform(seed: int, u: int, v: int, channel: int) -> float:
    return uniform_from_hash(edge_hash(seed, u, v, channel))


def derive_seed(master_seed: int, n: int, trial: int) -> int:
    """Per-trial seed: mix64(mix64(mix64(master) ^ n) ^ trial)."""
    return mix64(mix64(mix64(master_seed & _MASK64) ^ n) ^ trial)


@dataclass(frozen=True)
class DistributionSpec:
    """One of the four supported edge-weight distributions.

    ``param`` is the power exponent (gamma for the uniform kinds, s for the
    exponential kinds); ``threshold`` cuts the underlying exponential for
    the truncated kind and is ignored otherwise.
    """

    kind: int
    param: float = 1.0
    threshold: float = math.inf

    def __post_init__(self):
        if self.kind not in _KIND_NAMES:
            raise ValueError(f"unknown distribution kind {self.kind!r}")
        if self.kind == KIND_UNIFORM_POWER and not 0.0 < self.param <= 1.0:
            raise ValueError(f"uniform_power exponent must be in (0, 1], got {self.param}")
        if self.kind in (KIND_EXP_POWER, KIND_TRUNC_EXP_POWER) and not 0.0 < self.param < 1.0:
            raise ValueError(f"exp_power exponent must be in (0, 1), got {self.param}")
        if self.kind == KIND_TRUNC_EXP_POWER and not self.threshold > 0.0:
            raise ValueError(f"truncation threshold must be positive, got {self.threshold}")

    # -- constructors ------------------------------------------------
    @staticmethod
    def uniform() -> "DistributionSpec":
        return DistributionSpec(KIND_UNIFORM)

    @staticmethod
    def uniform_power(gamma: float) -> "DistributionSpec":
        return DistributionSpec(KIND_UNIFORM_POWER, float(gamma))

    @staticmethod
    def exp_power(s: float) -> "DistributionSpec":
        return DistributionSpec(KIND_EXP_POWER, float(s))

    @staticmethod
    def trunc_exp_power(s: float, threshold: float) -> "DistributionSpec":
        return DistributionSpec(KIND_TRUNC_EXP_POWER, float(s), float(threshold))

    # -- properties --------------------------------------------------
    @property
    def name(self) -> str:
        return _KIND_NAMES[self.kind]

    @property
    def is_uniform_kind(self) -> bool:
        return self.kind in (KIND_UNIFORM, KIND_UNIFORM_POWER)

    @property
    def gamma(self) -> float:
        """Effective power exponent: 1 for plain uniform, param otherwise."""
        return 1.0 if self.kind == KIND_UNIFORM else self.param

    def kernel_args(self) -> tuple[int, float, float]:
        """(kind, param, threshold) triple consumed by the kernels."""
        return self.kind, self.param, self.threshold

    # -- serialization (instance file format) ------------------------
    def format(self) -> str:
        if self.kind == KIND_UNIFORM:
            return "uniform"
        if self.kind == KIND_UNIFORM_POWER:
            return f"upow:{self.param:.17g}"
        if self.kind == KIND_EXP_POWER:
            return f"exppow:{self.param:.17g}"
        return f"texppow:{self.param:.17g}:{self.threshold:.17g}"

    @staticmethod
    def parse(text: str) -> "DistributionSpec":
        parts = text.strip().split(":")
        tag = parts[0]
        try:
            if tag == "uniform" and len(parts) == 1:
                return DistributionSpec.uniform()
            if tag == "upow" and len(parts) == 2:
                return DistributionSpec.uniform_power(float(parts[1]))
            if tag == "exppow" and len(parts) == 2:
                return DistributionSpec.exp_power(float(parts[1]))
            if tag == "texppow" and len(parts) == 3:
                return DistributionSpec.trunc_exp_power(float(parts[1]), float(parts[2]))
        except ValueError as exc:
            raise ValueError(f"bad distribution spec {text!r}: {exc}") from None
        raise ValueError(f"bad distribution spec {text!r}")


def transform(u01: float, kind: int, param: float, threshold: float) -> float:
    """Reference scalar transform of a uniform draw (pure Python)."""
    if kind == KIND_UNIFORM:
        return u01
    if kind == KIND_UNIFORM_POWER:
        return u01 if param == 1.0 else u01**param
    x = -math.log(u01)
    if kind == KIND_EXP_POWER:
        return x**param
    return x**param if x <= threshold else math.inf


def edge_weight(seed: int, u: int, v: int, channel: int, dist: DistributionSpec) -> float:
    """The deterministic weight draw for edge {u, v}; requires ``u < v``.

    Total on valid inputs: any 64-bit seed, 0 <= u < v, channel in
    {LENGTH, COST}.
    """
    if not 0 <= u < v:
        raise ValueError(f"edge endpoints must satisfy 0 <= u < v, got ({u}, {v})")
    if v >= 1 << 32:
        raise ValueError(f"vertex ids must fit in 32 bits, got {v}")
    if channel not in (LENGTH, COST):
        raise ValueError(f"channel must be {LENGTH} (length) or {COST} (cost)")
    return transform(edge_uniform(seed, u, v, channel), *dist.kernel_args())
