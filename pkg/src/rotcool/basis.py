"""Joint internal-rotational / motional Hilbert space and its operators.

Internal labels are the rotational levels J = 0..j_max, one shared excited
level ``e`` and one uncoupled sink level ``u``.  Each internal label carries
a truncated harmonic-oscillator ladder n = 0..n_max, so the flat dimension
is D = (j_max + 3) * (n_max + 1).

Units: hbar = 1 and the trap frequency nu = 1 throughout the package.  All
rates and frequencies are multiples of nu, all times multiples of 1/nu.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

EXCITED = "e"
UNCOUPLED = "u"

NU = 1.0  # trap frequency, the unit of every rate in the model


def _default_ladder(j_max: int) -> tuple[tuple[int, int], ...]:
    """Raman chain J -> J-1 for J = j_max..1."""
    return tuple((j, j - 1) for j in range(j_max, 0, -1))


@dataclass(frozen=True)
class SystemSpec:
    """Physical model parameters.

    All decay rates are in units of nu; ``beta_b`` is the dimensionless
    product of the inverse rotational temperature and the rotational
    constant that fixes the initial thermal distribution.
    """

    j_max: int
    n_max: int
    eta: float = 0.1            # Lamb-Dicke parameter, same for every pulse
    gamma_j: float = 0.01       # decay rate of e into each rotational level
    gamma_u: float = 0.01       # decay rate of e into the uncoupled sink
    beta_b: float = 0.15
    chain: tuple[tuple[int, int], ...] = field(default=())

    def __post_init__(self):
        if self.j_max < 1:
            raise ValueError(f"j_max must be >= 1, got {self.j_max}")
        if self.n_max < 1:
            raise ValueError(f"n_max must be >= 1, got {self.n_max}")
        if not self.eta > 0:
            raise ValueError(f"eta must be > 0, got {self.eta}")
        if self.gamma_j < 0 or self.gamma_u < 0:
            raise ValueError("decay rates must be >= 0")
        if not self.beta_b > 0:
            raise ValueError(f"beta_b must be > 0, got {self.beta_b}")
        chain = tuple(tuple(step) for step in self.chain)
        if not chain:
            chain = _default_ladder(self.j_max)
        for upper, lower in chain:
            if not (0 <= lower < upper <= self.j_max):
                raise ValueError(
                    f"chain step ({upper}, {lower}) violates 0 <= lower < upper <= j_max"
                )
        object.__setattr__(self, "chain", chain)


@dataclass(frozen=True)
class BasisIndex:
    """Bijection between (internal label, motional number) and flat indices.

    The layout is label-major: ``index(label, n) = label_id*(n_max+1) + n``
    with label ids 0..j_max for the rotational levels, then e, then u, so
    every internal label owns one contiguous motional block.
    """

    j_max: int
    n_max: int

    @property
    def n_levels(self) -> int:
        return self.n_max + 1

    @property
    def n_internal(self) -> int:
        return self.j_max + 3

    @property
    def dim(self) -> int:
        return self.n_internal * self.n_levels

    @property
    def internal_labels(self) -> tuple:
        return tuple(range(self.j_max + 1)) + (EXCITED, UNCOUPLED)

    def label_id(self, label) -> int:
        if label == EXCITED:
            return self.j_max + 1
        if label == UNCOUPLED:
            return self.j_max + 2
        j = int(label)
        if not 0 <= j <= self.j_max:
            raise ValueError(f"unknown internal label {label!r}")
        return j

    def index(self, label, n: int) -> int:
        if not 0 <= n <= self.n_max:
            raise ValueError(f"motional number {n} outside 0..{self.n_max}")
        return self.label_id(label) * self.n_levels + n

    def label(self, index: int):
        """Inverse map: flat index -> (internal label, motional number)."""
        if not 0 <= index < self.dim:
            raise ValueError(f"index {index} outside 0..{self.dim - 1}")
        lid, n = divmod(index, self.n_levels)
        if lid == self.j_max + 1:
            return EXCITED, n
        if lid == self.j_max + 2:
            return UNCOUPLED, n
        return lid, n

    def block(self, label) -> slice:
        """Contiguous slice of flat indices belonging to one internal label."""
        start = self.label_id(label) * self.n_levels
        return slice(start, start + self.n_levels)


def build_basis(spec: SystemSpec) -> BasisIndex:
    """Construct the flat index over all (internal, motional) pairs."""
    return BasisIndex(j_max=spec.j_max, n_max=spec.n_max)


def ladder_ops(basis: BasisIndex) -> tuple[np.ndarray, np.ndarray]:
    """Motional annihilation and creation operators on the full space.

    <n-1|a|n> = sqrt(n); the ladder is truncated at n_max, so a^dag has no
    image out of the space.  Both act as the identity on the internal factor.
    """
    nlev = basis.n_levels
    a = np.diag(np.sqrt(np.arange(1, nlev)), k=1)
    annihilate = np.kron(np.eye(basis.n_internal), a)
    return annihilate, annihilate.conj().T


def sigma_ops(basis: BasisIndex, label) -> tuple[np.ndarray, np.ndarray]:
    """Internal raising/lowering operators for one rotational level (or u).

    raise = |e><label| tensored with the motional identity, so decay through
    these operators never changes the motional number.
    """
    lid = basis.label_id(label)
    if lid == basis.j_max + 1:
        raise ValueError("sigma_ops couples a lower label to e; got e itself")
    flip = np.zeros((basis.n_internal, basis.n_internal))
    flip[basis.j_max + 1, lid] = 1.0
    raise_op = np.kron(flip, np.eye(basis.n_levels))
    return raise_op, raise_op.conj().T
